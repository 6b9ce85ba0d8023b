//! Truncated Levi-Civita series: the computable ordered field with
//! infinitesimal and infinite elements that the whole engine works in.
//!
//! A value is a finite sum of terms `c * eps^e` with exponents `e` strictly
//! increasing rationals and coefficients `c` nonzero elements of [`Coeff`].
//! `eps` (exponent 1) is a positive infinitesimal; `H = eps^-1` (exponent
//! -1) is infinite. After every operation the result is re-truncated to the
//! window of `order` exponents past its leading term, so the representation
//! stays finite while small computations remain exact.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::coeff::{Coeff, SignError};
use super::rational::Rational;

/// Default truncation window: terms more than this many exponent units past
/// the leading term are dropped.
pub const DEFAULT_ORDER: u32 = 16;

/// Order-of-magnitude classification of a series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Magnitude {
    Zero,
    Infinitesimal,
    Appreciable,
    Infinite,
}

impl fmt::Display for Magnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Magnitude::Zero => "zero",
            Magnitude::Infinitesimal => "infinitesimal",
            Magnitude::Appreciable => "appreciable",
            Magnitude::Infinite => "infinite",
        };
        write!(f, "{name}")
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HyperRealError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("standard part of an infinite number")]
    NotLimited,
    #[error("zero has no valuation")]
    ZeroHasNoValuation,
    #[error("leading coefficient {0} has no inverse in the coefficient ring")]
    NotInvertible(String),
    #[error("standard part {0} is not rational")]
    NotRationalConstant(String),
    #[error(transparent)]
    SignUndecided(#[from] SignError),
}

/// A truncated Levi-Civita series.
#[derive(Clone)]
pub struct HyperReal {
    /// (exponent, coefficient), exponents strictly increasing, coefficients
    /// canonically nonzero; empty means zero.
    terms: Vec<(Rational, Coeff)>,
    order: u32,
}

impl HyperReal {
    pub fn zero(order: u32) -> Self {
        HyperReal {
            terms: Vec::new(),
            order,
        }
    }

    pub fn one(order: u32) -> Self {
        HyperReal::from_rational(Rational::one(), order)
    }

    pub fn from_rational(q: Rational, order: u32) -> Self {
        HyperReal::monomial(Rational::zero(), Coeff::from_rational(q), order)
    }

    pub fn from_int(n: i64, order: u32) -> Self {
        HyperReal::from_rational(Rational::from_int(n), order)
    }

    /// `eps^e` for any rational exponent; negative exponents give infinite
    /// numbers.
    pub fn generator_power(e: Rational, order: u32) -> Self {
        HyperReal::monomial(e, Coeff::one(), order)
    }

    /// The infinitesimal generator `eps`.
    pub fn eps(order: u32) -> Self {
        HyperReal::generator_power(Rational::one(), order)
    }

    /// The infinite unit `H = eps^-1`.
    pub fn infinite_unit(order: u32) -> Self {
        HyperReal::generator_power(Rational::from_int(-1), order)
    }

    pub fn monomial(exponent: Rational, coeff: Coeff, order: u32) -> Self {
        let mut terms = Vec::new();
        if !coeff.is_zero() {
            terms.push((exponent, coeff));
        }
        HyperReal { terms, order }
    }

    /// Builds a series from arbitrary (exponent, coefficient) pairs,
    /// merging duplicates and re-truncating.
    pub fn from_terms<I>(pairs: I, order: u32) -> Self
    where
        I: IntoIterator<Item = (Rational, Coeff)>,
    {
        let mut map: BTreeMap<Rational, Coeff> = BTreeMap::new();
        for (e, c) in pairs {
            let entry = map.entry(e).or_insert_with(Coeff::zero);
            *entry = &*entry + &c;
        }
        Self::collect(map, order)
    }

    fn collect(map: BTreeMap<Rational, Coeff>, order: u32) -> Self {
        let mut terms: Vec<(Rational, Coeff)> = map
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        if let Some((val, _)) = terms.first().cloned() {
            let cutoff = &val + &Rational::from_int(order as i64);
            terms.retain(|(e, _)| e <= &cutoff);
        }
        HyperReal { terms, order }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Returns a copy carried at a different truncation order (re-truncated
    /// if the new window is narrower).
    pub fn with_order(&self, order: u32) -> Self {
        let map: BTreeMap<Rational, Coeff> = self.terms.iter().cloned().collect();
        Self::collect(map, order)
    }

    pub fn terms(&self) -> &[(Rational, Coeff)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest exponent; the order-of-magnitude index.
    pub fn valuation(&self) -> Result<Rational, HyperRealError> {
        self.terms
            .first()
            .map(|(e, _)| e.clone())
            .ok_or(HyperRealError::ZeroHasNoValuation)
    }

    fn val_opt(&self) -> Option<&Rational> {
        self.terms.first().map(|(e, _)| e)
    }

    pub fn leading_coeff(&self) -> Option<&Coeff> {
        self.terms.first().map(|(_, c)| c)
    }

    pub fn classify(&self) -> Magnitude {
        match self.val_opt() {
            None => Magnitude::Zero,
            Some(v) => {
                if v.is_positive() {
                    Magnitude::Infinitesimal
                } else if v.is_negative() {
                    Magnitude::Infinite
                } else {
                    Magnitude::Appreciable
                }
            }
        }
    }

    pub fn is_limited(&self) -> bool {
        !matches!(self.classify(), Magnitude::Infinite)
    }

    /// The standard part as an element of the coefficient ring: the
    /// coefficient at exponent zero. Rejects infinite input.
    pub fn st_coeff(&self) -> Result<Coeff, HyperRealError> {
        if !self.is_limited() {
            return Err(HyperRealError::NotLimited);
        }
        Ok(self
            .terms
            .iter()
            .find(|(e, _)| e.is_zero())
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Coeff::zero))
    }

    /// The standard part as a rational; errors if the input is infinite or
    /// its constant coefficient is a symbolic constant.
    pub fn st(&self) -> Result<Rational, HyperRealError> {
        let c = self.st_coeff()?;
        c.as_rational()
            .ok_or_else(|| HyperRealError::NotRationalConstant(c.to_string()))
    }

    /// Infinite proximity: true when the difference is zero or
    /// infinitesimal.
    pub fn approx(&self, other: &HyperReal) -> bool {
        matches!(
            (self - other).classify(),
            Magnitude::Zero | Magnitude::Infinitesimal
        )
    }

    /// Three-way comparison in the field order (sign of the leading
    /// coefficient of the difference). Fails only when a symbolic leading
    /// coefficient's sign cannot be decided.
    pub fn try_compare(&self, other: &HyperReal) -> Result<Ordering, HyperRealError> {
        let diff = self - other;
        match diff.leading_coeff() {
            None => Ok(Ordering::Equal),
            Some(c) => match c.sign()? {
                0 => Ok(Ordering::Equal),
                s if s < 0 => Ok(Ordering::Less),
                _ => Ok(Ordering::Greater),
            },
        }
    }

    /// Sign of the value: -1, 0, or 1.
    pub fn try_sign(&self) -> Result<i32, HyperRealError> {
        match self.leading_coeff() {
            None => Ok(0),
            Some(c) => Ok(c.sign()?),
        }
    }

    pub fn abs_value(&self) -> Result<HyperReal, HyperRealError> {
        if self.try_sign()? < 0 {
            Ok(-self)
        } else {
            Ok(self.clone())
        }
    }

    /// Equality up to the truncation window: true when the difference has
    /// no terms at or below `min(val(a), val(b)) + order`. This is the right
    /// notion for results of division and Taylor evaluation, whose exact
    /// values differ from the computed ones only past the window.
    pub fn window_eq(&self, other: &HyperReal) -> bool {
        let diff = self - other;
        if diff.is_zero() {
            return true;
        }
        let (dval, _) = &diff.terms[0];
        match (self.val_opt(), other.val_opt()) {
            (Some(a), Some(b)) => {
                let base = if a <= b { a } else { b };
                let window = Rational::from_int(diff.order as i64);
                dval > &(base + &window)
            }
            _ => false,
        }
    }

    /// Multiplicative inverse: leading-term reciprocal times a truncated
    /// geometric series. The product with the original equals 1 up to the
    /// truncation window.
    pub fn inv(&self) -> Result<HyperReal, HyperRealError> {
        let (e0, c0) = self
            .terms
            .first()
            .ok_or(HyperRealError::DivisionByZero)?;
        let c0_inv = c0
            .inv()
            .ok_or_else(|| HyperRealError::NotInvertible(c0.to_string()))?;
        let lead_inv = HyperReal::monomial(-e0, c0_inv, self.order);
        let one = HyperReal::one(self.order);
        // u = self/lead - 1 has strictly positive valuation, so powers of u
        // leave the window after finitely many steps.
        let u = &(self * &lead_inv) - &one;
        let window = Rational::from_int(self.order as i64);
        let mut sum = one.clone();
        let mut power = one;
        loop {
            power = &power * &(-&u);
            if power.is_zero() {
                break;
            }
            if power.val_opt().expect("nonzero") > &window {
                break;
            }
            sum = &sum + &power;
        }
        Ok(&sum * &lead_inv)
    }

    pub fn div(&self, other: &HyperReal) -> Result<HyperReal, HyperRealError> {
        Ok(self * &other.inv()?)
    }

    /// Integer power by repeated squaring; negative exponents go through
    /// the inverse.
    pub fn pow_int(&self, exp: i64) -> Result<HyperReal, HyperRealError> {
        if exp == 0 {
            return Ok(HyperReal::one(self.order));
        }
        let base = if exp < 0 { self.inv()? } else { self.clone() };
        let mut acc = HyperReal::one(self.order);
        let mut sq = base;
        let mut e = exp.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    pub fn scale(&self, factor: &Coeff) -> HyperReal {
        let map: BTreeMap<Rational, Coeff> = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), c * factor))
            .collect();
        Self::collect(map, self.order)
    }

    /// Multiplies by `eps^shift`, shifting every exponent.
    pub fn shift_exponents(&self, shift: &Rational) -> HyperReal {
        let map: BTreeMap<Rational, Coeff> = self
            .terms
            .iter()
            .map(|(e, c)| (e + shift, c.clone()))
            .collect();
        Self::collect(map, self.order)
    }
}

fn joint_order(a: &HyperReal, b: &HyperReal) -> u32 {
    a.order.min(b.order)
}

impl Add for &HyperReal {
    type Output = HyperReal;
    fn add(self, rhs: &HyperReal) -> HyperReal {
        let mut map: BTreeMap<Rational, Coeff> = BTreeMap::new();
        for (e, c) in self.terms.iter().chain(rhs.terms.iter()) {
            let entry = map.entry(e.clone()).or_insert_with(Coeff::zero);
            *entry = &*entry + c;
        }
        HyperReal::collect(map, joint_order(self, rhs))
    }
}

impl Sub for &HyperReal {
    type Output = HyperReal;
    fn sub(self, rhs: &HyperReal) -> HyperReal {
        self + &(-rhs)
    }
}

impl Neg for &HyperReal {
    type Output = HyperReal;
    fn neg(self) -> HyperReal {
        HyperReal {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), -c))
                .collect(),
            order: self.order,
        }
    }
}

impl Mul for &HyperReal {
    type Output = HyperReal;
    fn mul(self, rhs: &HyperReal) -> HyperReal {
        let mut map: BTreeMap<Rational, Coeff> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea + eb;
                let c = ca * cb;
                let entry = map.entry(e).or_insert_with(Coeff::zero);
                *entry = &*entry + &c;
            }
        }
        HyperReal::collect(map, joint_order(self, rhs))
    }
}

impl PartialEq for HyperReal {
    /// Canonical equality: identical term lists (the truncation order is
    /// context, not value).
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for HyperReal {}

/// Renders one term in generator notation: `eps^e` for positive exponents,
/// `H^|e|` for negative ones, bare coefficient at exponent zero.
fn format_term(exponent: &Rational, coeff: &Coeff, leading: bool) -> (bool, String) {
    let (negative, mag) = match coeff.as_rational() {
        Some(q) => (q.is_negative(), Coeff::from_rational(q.abs())),
        None => (false, coeff.clone()),
    };
    let base = if exponent.is_zero() {
        None
    } else if exponent.is_positive() {
        Some(("eps", exponent.clone()))
    } else {
        Some(("H", -exponent))
    };
    let base_str = base.map(|(name, e)| {
        if e.is_one() {
            name.to_string()
        } else if e.is_integer() {
            format!("{name}^{e}")
        } else {
            format!("{name}^({e})")
        }
    });
    let coeff_str = if mag.is_one() && base_str.is_some() {
        None
    } else if mag.is_rational() {
        Some(mag.to_string())
    } else {
        Some(format!("({mag})"))
    };
    let body = match (coeff_str, base_str) {
        (Some(c), Some(b)) => format!("{c}*{b}"),
        (Some(c), None) => c,
        (None, Some(b)) => b,
        (None, None) => unreachable!("coefficient and exponent both trivial"),
    };
    if leading && negative {
        (false, format!("-{body}"))
    } else {
        (negative, body)
    }
}

impl fmt::Display for HyperReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let (negative, body) = format_term(e, c, i == 0);
            if i > 0 {
                write!(f, " {} ", if negative { "-" } else { "+" })?;
            }
            write!(f, "{body}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for HyperReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[derive(Serialize, Deserialize)]
struct HyperRealWire {
    terms: Vec<(String, String)>,
    order: u32,
}

impl Serialize for HyperReal {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let wire = HyperRealWire {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.to_string(), c.to_string()))
                .collect(),
            order: self.order,
        };
        wire.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for HyperReal {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = HyperRealWire::deserialize(deserializer)?;
        let mut pairs = Vec::new();
        for (e, c) in wire.terms {
            let exponent = Rational::parse(&e).map_err(serde::de::Error::custom)?;
            let coeff = Rational::parse(&c)
                .map(Coeff::from_rational)
                .map_err(serde::de::Error::custom)?;
            pairs.push((exponent, coeff));
        }
        Ok(HyperReal::from_terms(pairs, wire.order))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> u32 {
        DEFAULT_ORDER
    }

    fn eps() -> HyperReal {
        HyperReal::eps(k())
    }

    fn big_h() -> HyperReal {
        HyperReal::infinite_unit(k())
    }

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn constructors_and_classification() {
        assert!(HyperReal::from_int(0, k()).is_zero());
        assert_eq!(eps().classify(), Magnitude::Infinitesimal);
        assert_eq!(big_h().classify(), Magnitude::Infinite);
        assert_eq!(HyperReal::from_int(2, k()).classify(), Magnitude::Appreciable);
        let two_plus_eps2 = &HyperReal::from_int(2, k()) + &eps().pow_int(2).unwrap();
        assert_eq!(two_plus_eps2.classify(), Magnitude::Appreciable);
    }

    #[test]
    fn addition_merges_disjoint_exponents() {
        let sum = &big_h() + &eps();
        assert_eq!(sum.terms().len(), 2);
        assert_eq!(sum.valuation().unwrap(), rat(-1, 1));
        let zero = &sum - &sum;
        assert!(zero.is_zero());
    }

    #[test]
    fn one_plus_inverse_of_h() {
        // 1 + 1/H = 1 + eps
        let one = HyperReal::one(k());
        let v = &one + &big_h().inv().unwrap();
        let expected = &one + &eps();
        assert_eq!(v, expected);
        assert_eq!(v.st().unwrap(), Rational::one());
    }

    #[test]
    fn magnitude_trichotomy_of_products() {
        let e = eps();
        let h = big_h();
        assert_eq!((&e * &h).classify(), Magnitude::Appreciable);
        assert_eq!((&(&e * &e) * &h).classify(), Magnitude::Infinitesimal);
        assert_eq!((&e * &(&h * &h)).classify(), Magnitude::Infinite);
        assert_eq!((&e * &e).classify(), Magnitude::Infinitesimal);
    }

    #[test]
    fn squared_increment_at_infinite_point() {
        // (H + eps)^2 - H^2 = 2 + eps^2
        let x = &big_h() + &eps();
        let delta = &x.pow_int(2).unwrap() - &big_h().pow_int(2).unwrap();
        let expected = HyperReal::from_terms(
            [
                (Rational::zero(), Coeff::from_int(2)),
                (Rational::from_int(2), Coeff::one()),
            ],
            k(),
        );
        assert_eq!(delta, expected);
        assert_eq!(delta.classify(), Magnitude::Appreciable);
        assert_eq!(delta.st().unwrap(), Rational::from_int(2));
    }

    #[test]
    fn approx_is_infinite_proximity() {
        let h = big_h();
        let h_plus_eps = &h + &eps();
        assert!(h.approx(&h_plus_eps));
        let sq_diff = &h_plus_eps.pow_int(2).unwrap() - &h.pow_int(2).unwrap();
        assert_eq!(sq_diff.classify(), Magnitude::Appreciable);
        assert!(!h.pow_int(2).unwrap().approx(&h_plus_eps.pow_int(2).unwrap()));
        assert!(h.approx(&h));
    }

    #[test]
    fn comparison_against_every_rational() {
        for r in [rat(1, 1000000), rat(1, 7), rat(1, 1), rat(100, 1)] {
            let r_val = HyperReal::from_rational(r.clone(), k());
            assert_eq!(eps().try_compare(&r_val).unwrap(), Ordering::Less);
            assert_eq!(big_h().try_compare(&r_val).unwrap(), Ordering::Greater);
        }
        let a = &HyperReal::from_int(3, k()) + &eps();
        assert_eq!(a.try_compare(&a).unwrap(), Ordering::Equal);
    }

    #[test]
    fn inverse_of_one_plus_eps_is_alternating_series() {
        let one = HyperReal::one(k());
        let v = &one + &eps();
        let inv = v.inv().unwrap();
        // 1 - eps + eps^2 - ... out to the window
        let expected = HyperReal::from_terms(
            (0..=k() as i64).map(|i| {
                (
                    Rational::from_int(i),
                    Coeff::from_rational(if i % 2 == 0 {
                        Rational::one()
                    } else {
                        Rational::from_int(-1)
                    }),
                )
            }),
            k(),
        );
        assert_eq!(inv, expected);
        assert!((&v * &inv).window_eq(&one));
        assert!(matches!(
            HyperReal::zero(k()).inv(),
            Err(HyperRealError::DivisionByZero)
        ));
    }

    #[test]
    fn standard_part_errors_on_infinite() {
        assert!(matches!(big_h().st(), Err(HyperRealError::NotLimited)));
        let v = &HyperReal::from_int(2, k()) + &eps().pow_int(2).unwrap();
        assert_eq!(v.st().unwrap(), Rational::from_int(2));
    }

    #[test]
    fn valuation_rules() {
        let e2h = &eps().pow_int(2).unwrap() * &big_h();
        assert_eq!(e2h.valuation().unwrap(), Rational::one());
        let v = &HyperReal::from_int(2, k()) + &eps().pow_int(2).unwrap();
        assert_eq!(v.valuation().unwrap(), Rational::zero());
        assert!(matches!(
            HyperReal::zero(k()).valuation(),
            Err(HyperRealError::ZeroHasNoValuation)
        ));
    }

    #[test]
    fn truncation_window_drops_tail() {
        // (1 + eps)^-1 * (1 + eps) leaves only terms past the window.
        let one = HyperReal::one(k());
        let v = &one + &eps();
        let prod = &v * &v.inv().unwrap();
        assert!(prod.window_eq(&one));
        // A wide monomial spread gets cut at val + order.
        let wide = HyperReal::from_terms(
            [
                (Rational::zero(), Coeff::one()),
                (Rational::from_int(k() as i64 + 5), Coeff::one()),
            ],
            k(),
        );
        assert_eq!(wide.terms().len(), 1);
    }

    #[test]
    fn display_formats_in_generator_notation() {
        let two_plus_eps2 = HyperReal::from_terms(
            [
                (Rational::zero(), Coeff::from_int(2)),
                (Rational::from_int(2), Coeff::one()),
            ],
            k(),
        );
        assert_eq!(two_plus_eps2.to_string(), "2 + eps^2");
        assert_eq!(big_h().to_string(), "H");
        assert_eq!((&big_h() * &big_h()).to_string(), "H^2");
        let mixed = &big_h() - &eps();
        assert_eq!(mixed.to_string(), "H - eps");
        assert_eq!(HyperReal::zero(k()).to_string(), "0");
        let half_power = HyperReal::generator_power(rat(1, 2), k());
        assert_eq!(half_power.to_string(), "eps^(1/2)");
        assert_eq!(HyperReal::from_rational(rat(-3, 2), k()).to_string(), "-3/2");
    }

    #[test]
    fn serde_round_trip() {
        let v = HyperReal::from_terms(
            [
                (rat(-1, 1), Coeff::one()),
                (rat(1, 2), Coeff::from_rational(rat(-3, 4))),
            ],
            k(),
        );
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(json, r#"{"terms":[["-1","1"],["1/2","-3/4"]],"order":16}"#);
        let back: HyperReal = serde_json::from_str(&json).unwrap();
        assert_eq!(back, v);
    }
}
