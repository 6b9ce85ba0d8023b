//! Exact arithmetic in an ordered field with infinitesimal and infinite
//! elements, plus executable checkers for the two classical definition styles
//! of continuity, uniform continuity, and convergence.
//!
//! The number model is a truncated Levi-Civita series: a finite sum of terms
//! `c * eps^e` with rational coefficients `c` and rational exponents `e`,
//! where `eps` is a fixed positive infinitesimal generator. Its reciprocal
//! `H = eps^-1` is an infinite number. Every operation re-truncates the
//! result to a window of `order` exponents past the leading term, which keeps
//! division and Taylor evaluation finite while leaving all small calculations
//! exact.
//!
//! On top of the number field sit:
//!
//! * [`funcalc`] — an expression language for real functions of one variable
//!   (and sequences in `n`), with parsing, formatting, symbolic
//!   differentiation, exact rational evaluation, and natural-extension
//!   evaluation at [`HyperReal`] points;
//! * [`tracks`] — checkers for the B track (infinitesimal definitions:
//!   microcontinuity, standard-part limits) and the A track (epsilon-delta
//!   definitions: certified moduli and falsifications), both emitting
//!   machine-checkable [`tracks::Certificate`]s.

pub mod funcalc;
pub mod hypernum;
pub mod interval;
pub mod par;
pub mod tracks;

pub use hypernum::{Coeff, HyperReal, HyperRealError, Magnitude, Rational, DEFAULT_ORDER};
