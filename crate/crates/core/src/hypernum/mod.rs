//! The number tower: exact rationals, a coefficient ring extending them by
//! named real constants, and the truncated Levi-Civita series [`HyperReal`]
//! built on top.

mod coeff;
mod hyperreal;
mod parse;
mod rational;

pub use coeff::{Coeff, ConstSym, SignError};
pub use hyperreal::{HyperReal, HyperRealError, Magnitude, DEFAULT_ORDER};
pub use parse::{parse_hyper, HyperParseError};
pub use rational::{ParseRationalError, Rational};
