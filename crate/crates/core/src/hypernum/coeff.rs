//! The coefficient ring for series terms: exact rationals extended by named
//! real constants such as `sin(1)` or `sqrt(2)`.
//!
//! Evaluating a transcendental function at a point whose standard part is
//! rational produces Taylor coefficients that are rational multiples of a few
//! real constants. Rather than approximate, those constants are kept as
//! symbols and arithmetic stays exact. Two normalization rules keep the
//! representation canonical:
//!
//! * `sqrt(q)^2` collapses to `q`;
//! * `sin(s)^2` collapses to `1 - cos(s)^2`, so any polynomial identity that
//!   follows from the Pythagorean relation reduces to its canonical form.
//!
//! Equality is syntactic on the canonical form. Sign questions that the
//! canonical form cannot settle fall back to verified rational interval
//! enclosures, starting at 64 bits and widening on demand.


use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::hypernum::Rational;
use crate::interval::{
    enclose_cos, enclose_exp, enclose_ln, enclose_sin, enclose_sqrt, RatInterval,
};

/// A named real constant with a rational argument.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConstSym {
    Sin(Rational),
    Cos(Rational),
    Exp(Rational),
    Ln(Rational),
    Sqrt(Rational),
}

impl ConstSym {
    fn enclosure(&self, bits: u32) -> RatInterval {
        match self {
            ConstSym::Sin(q) => enclose_sin(q, bits),
            ConstSym::Cos(q) => enclose_cos(q, bits),
            ConstSym::Exp(q) => enclose_exp(q, bits),
            ConstSym::Ln(q) => enclose_ln(q, bits),
            ConstSym::Sqrt(q) => enclose_sqrt(q, bits),
        }
    }
}

impl fmt::Display for ConstSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstSym::Sin(q) => write!(f, "sin({q})"),
            ConstSym::Cos(q) => write!(f, "cos({q})"),
            ConstSym::Exp(q) => write!(f, "exp({q})"),
            ConstSym::Ln(q) => write!(f, "ln({q})"),
            ConstSym::Sqrt(q) => write!(f, "sqrt({q})"),
        }
    }
}

/// Product of constant symbols with integer powers, sorted by symbol.
/// `exp` powers may be negative; all other symbols carry positive powers
/// after normalization.
type Monomial = Vec<(ConstSym, i64)>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SignError {
    #[error("sign of {0} undecided at maximum enclosure precision")]
    Undecided(String),
}

/// An element of the coefficient ring: a canonical sum of monomials in the
/// constant symbols with rational coefficients. Plain rationals are the
/// one-monomial (empty product) case.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Coeff {
    terms: BTreeMap<Monomial, Rational>,
}

impl Coeff {
    pub fn zero() -> Self {
        Coeff::default()
    }

    pub fn one() -> Self {
        Coeff::from_rational(Rational::one())
    }

    pub fn from_rational(q: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(Vec::new(), q);
        }
        Coeff { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Coeff::from_rational(Rational::from_int(n))
    }

    /// A single constant symbol to the first power.
    pub fn sym(s: ConstSym) -> Self {
        let mut c = Coeff::zero();
        c.accumulate(vec![(s, 1)], Rational::one());
        c
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().map(|q| q.is_one()).unwrap_or(false)
    }

    /// True when the value involves no constant symbols.
    pub fn is_rational(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.contains_key(&Vec::new()))
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.terms.is_empty() {
            return Some(Rational::zero());
        }
        if self.terms.len() == 1 {
            if let Some(q) = self.terms.get(&Vec::new()) {
                return Some(q.clone());
            }
        }
        None
    }

    /// Adds `factor * monomial` after normalizing the monomial. Sin powers
    /// of two and higher expand through the Pythagorean relation, so a
    /// single raw monomial may contribute several canonical ones.
    fn accumulate(&mut self, raw: Monomial, factor: Rational) {
        if factor.is_zero() {
            return;
        }
        let mut rational = factor;
        let mut canonical: Monomial = Vec::new();
        // (cos argument, power of (1 - cos^2)) factors awaiting expansion
        let mut pythagorean: Vec<(Rational, i64)> = Vec::new();
        for (sym, power) in raw {
            if power == 0 {
                continue;
            }
            match &sym {
                ConstSym::Sqrt(q) => {
                    let halves = power.div_euclid(2);
                    let rem = power.rem_euclid(2);
                    rational = rational * q.pow(halves);
                    if rem == 1 {
                        canonical.push((sym, 1));
                    }
                }
                ConstSym::Sin(s) => {
                    assert!(power > 0, "negative sine power is not representable");
                    let pairs = power / 2;
                    let rem = power % 2;
                    if pairs > 0 {
                        pythagorean.push((s.clone(), pairs));
                    }
                    if rem == 1 {
                        canonical.push((sym, 1));
                    }
                }
                ConstSym::Cos(_) | ConstSym::Ln(_) => {
                    assert!(power > 0, "negative {sym} power is not representable");
                    canonical.push((sym, power));
                }
                ConstSym::Exp(_) => canonical.push((sym, power)),
            }
        }
        canonical.sort();
        if pythagorean.is_empty() {
            self.insert_canonical(canonical, rational);
            return;
        }
        // Expand prod (1 - cos(s)^2)^m into a sum of cos monomials.
        let mut expansion: Vec<(Monomial, Rational)> = vec![(Vec::new(), Rational::one())];
        for (s, m) in pythagorean {
            for _ in 0..m {
                let mut next: Vec<(Monomial, Rational)> = Vec::new();
                for (mono, coef) in &expansion {
                    next.push((mono.clone(), coef.clone()));
                    let mut with_cos = mono.clone();
                    with_cos.push((ConstSym::Cos(s.clone()), 2));
                    next.push((with_cos, -coef));
                }
                expansion = next;
            }
        }
        for (extra, coef) in expansion {
            let mut combined = canonical.clone();
            combined.extend(extra);
            let merged = merge_powers(combined);
            self.insert_canonical(merged, &rational * &coef);
        }
    }

    fn insert_canonical(&mut self, mono: Monomial, factor: Rational) {
        if factor.is_zero() {
            return;
        }
        let entry = self.terms.entry(mono);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(factor);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &factor;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// Multiplicative inverse where one exists: the value must be a single
    /// monomial whose symbols are all invertible in the ring (`exp` powers
    /// negate, a lone `sqrt(q)` becomes `sqrt(q)/q`). Returns `None` for
    /// sums and for monomials containing `sin`, `cos`, or `ln`.
    pub fn inv(&self) -> Option<Coeff> {
        if self.terms.len() != 1 {
            return None;
        }
        let (mono, factor) = self.terms.iter().next().unwrap();
        let mut rational = factor.recip();
        let mut inverted: Monomial = Vec::new();
        for (sym, power) in mono {
            match sym {
                ConstSym::Exp(_) => inverted.push((sym.clone(), -power)),
                ConstSym::Sqrt(q) => {
                    // 1/sqrt(q)^p with p in {0,1}: sqrt(q)/q for p = 1
                    debug_assert_eq!(*power, 1);
                    rational = rational / q.clone();
                    inverted.push((sym.clone(), 1));
                }
                ConstSym::Sin(_) | ConstSym::Cos(_) | ConstSym::Ln(_) => return None,
            }
        }
        let mut out = Coeff::zero();
        out.accumulate(inverted, rational);
        Some(out)
    }

    /// Verified rational enclosure of the real value, or `None` when an
    /// internal reciprocal cannot be bounded away from zero at this
    /// precision.
    pub fn enclosure(&self, bits: u32) -> Option<RatInterval> {
        let mut total = RatInterval::point(Rational::zero());
        for (mono, factor) in &self.terms {
            let mut iv = RatInterval::point(factor.clone());
            for (sym, power) in mono {
                let base = sym.enclosure(bits);
                let powered = base.pow(*power)?;
                iv = iv.mul(&powered);
            }
            total = total.add(&iv);
        }
        Some(total)
    }

    /// Sign of the real value: canonical zero is zero; otherwise decided by
    /// interval enclosures, widening from 64 to 512 bits.
    pub fn sign(&self) -> Result<i32, SignError> {
        if self.is_zero() {
            return Ok(0);
        }
        if let Some(q) = self.as_rational() {
            return Ok(q.signum());
        }
        for bits in [64u32, 128, 256, 512] {
            if let Some(iv) = self.enclosure(bits) {
                if iv.lo.is_positive() {
                    return Ok(1);
                }
                if iv.hi.is_negative() {
                    return Ok(-1);
                }
            }
        }
        Err(SignError::Undecided(self.to_string()))
    }
}

fn merge_powers(mut mono: Monomial) -> Monomial {
    mono.sort();
    let mut merged: Monomial = Vec::new();
    for (sym, power) in mono {
        if let Some(last) = merged.last_mut() {
            if last.0 == sym {
                last.1 += power;
                if last.1 == 0 {
                    merged.pop();
                }
                continue;
            }
        }
        merged.push((sym, power));
    }
    merged
}

impl Add for &Coeff {
    type Output = Coeff;
    fn add(self, rhs: &Coeff) -> Coeff {
        let mut out = self.clone();
        for (mono, factor) in &rhs.terms {
            out.insert_canonical(mono.clone(), factor.clone());
        }
        out
    }
}

impl Sub for &Coeff {
    type Output = Coeff;
    fn sub(self, rhs: &Coeff) -> Coeff {
        let mut out = self.clone();
        for (mono, factor) in &rhs.terms {
            out.insert_canonical(mono.clone(), -factor);
        }
        out
    }
}

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        let mut out = Coeff::zero();
        for (mono, factor) in &self.terms {
            out.insert_canonical(mono.clone(), -factor);
        }
        out
    }
}

impl Mul for &Coeff {
    type Output = Coeff;
    fn mul(self, rhs: &Coeff) -> Coeff {
        let mut out = Coeff::zero();
        for (lm, lf) in &self.terms {
            for (rm, rf) in &rhs.terms {
                let mut raw = lm.clone();
                raw.extend(rm.iter().cloned());
                let raw = merge_powers(raw);
                out.accumulate(raw, lf * rf);
            }
        }
        out
    }
}

impl Mul<&Rational> for &Coeff {
    type Output = Coeff;
    fn mul(self, rhs: &Rational) -> Coeff {
        let mut out = Coeff::zero();
        for (mono, factor) in &self.terms {
            out.insert_canonical(mono.clone(), factor * rhs);
        }
        out
    }
}

impl From<Rational> for Coeff {
    fn from(q: Rational) -> Self {
        Coeff::from_rational(q)
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (mono, factor) in &self.terms {
            let negative = factor.is_negative();
            let mag = factor.abs();
            if first {
                if negative {
                    write!(f, "-")?;
                }
                first = false;
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut parts: Vec<String> = Vec::new();
            if !mag.is_one() || mono.is_empty() {
                parts.push(mag.to_string());
            }
            for (sym, power) in mono {
                if *power == 1 {
                    parts.push(sym.to_string());
                } else {
                    parts.push(format!("{sym}^{power}"));
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl Serialize for Coeff {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Coeff {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        Rational::parse(&text)
            .map(Coeff::from_rational)
            .map_err(|_| {
                serde::de::Error::custom(format!(
                    "only rational coefficients can be deserialized, got {text:?}"
                ))
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sin1() -> Coeff {
        Coeff::sym(ConstSym::Sin(Rational::one()))
    }

    fn cos1() -> Coeff {
        Coeff::sym(ConstSym::Cos(Rational::one()))
    }

    #[test]
    fn pythagorean_identity_reduces_to_one() {
        let s = sin1();
        let c = cos1();
        let sum = &(&s * &s) + &(&c * &c);
        assert!(sum.is_one(), "sin^2 + cos^2 normalized to {sum}");
    }

    #[test]
    fn sqrt_square_collapses() {
        let r = Coeff::sym(ConstSym::Sqrt(Rational::from_int(2)));
        let sq = &r * &r;
        assert_eq!(sq.as_rational(), Some(Rational::from_int(2)));
        // 1/sqrt(2) = sqrt(2)/2
        let inv = r.inv().unwrap();
        assert_eq!(&inv * &r, Coeff::one());
    }

    #[test]
    fn exp_inverse_cancels() {
        let e = Coeff::sym(ConstSym::Exp(Rational::one()));
        let inv = e.inv().unwrap();
        assert!( (&e * &inv).is_one());
        assert!(sin1().inv().is_none());
        assert!((&sin1() + &cos1()).inv().is_none());
    }

    #[test]
    fn sign_via_enclosure() {
        assert_eq!(sin1().sign().unwrap(), 1);
        let cos2 = Coeff::sym(ConstSym::Cos(Rational::from_int(2)));
        assert_eq!(cos2.sign().unwrap(), -1);
        // sqrt(2) - 3/2 < 0, decided numerically
        let diff = &Coeff::sym(ConstSym::Sqrt(Rational::from_int(2)))
            - &Coeff::from_rational(Rational::new(3, 2));
        assert_eq!(diff.sign().unwrap(), -1);
        // canonical cancellation beats enclosures
        let zero = &sin1() - &sin1();
        assert_eq!(zero.sign().unwrap(), 0);
    }

    #[test]
    fn display_is_readable() {
        let c = &(&sin1() * &Coeff::from_rational(Rational::new(3, 2))) + &Coeff::one();
        assert_eq!(c.to_string(), "1 + 3/2*sin(1)");
    }

    #[test]
    fn sin_fourth_power_expands() {
        let s = sin1();
        let s2 = &s * &s;
        let s4 = &s2 * &s2;
        // sin^4 = (1 - cos^2)^2 = 1 - 2cos^2 + cos^4
        let c = cos1();
        let c2 = &c * &c;
        let expected = &(&Coeff::one() - &(&c2 * &Coeff::from_int(2))) + &(&c2 * &c2);
        assert_eq!(s4, expected);
    }
}
