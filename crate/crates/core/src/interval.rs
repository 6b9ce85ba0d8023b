//! Interval arithmetic with exact rational endpoints.
//!
//! Because the endpoints are exact rationals there is no rounding: every
//! operation returns the smallest representable enclosure, so a computed
//! interval is a rigorous bound on the real value. Transcendental functions
//! are enclosed by truncated Taylor sums with explicit remainder bounds.

use crate::hypernum::Rational;

/// A closed interval `[lo, hi]` with rational endpoints, `lo <= hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RatInterval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        RatInterval { lo, hi }
    }

    pub fn point(v: Rational) -> Self {
        RatInterval {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains(&self, v: &Rational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    /// Largest absolute value attained on the interval.
    pub fn abs_bound(&self) -> Rational {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        RatInterval {
            lo: &self.lo + &rhs.lo,
            hi: &self.hi + &rhs.hi,
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        RatInterval {
            lo: &self.lo - &rhs.hi,
            hi: &self.hi - &rhs.lo,
        }
    }

    pub fn neg(&self) -> Self {
        RatInterval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let candidates = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let mut lo = candidates[0].clone();
        let mut hi = candidates[0].clone();
        for c in &candidates[1..] {
            if c < &lo {
                lo = c.clone();
            }
            if c > &hi {
                hi = c.clone();
            }
        }
        RatInterval { lo, hi }
    }

    /// Reciprocal; `None` when the interval contains zero.
    pub fn recip(&self) -> Option<Self> {
        if self.contains_zero() {
            return None;
        }
        Some(RatInterval {
            lo: self.hi.recip(),
            hi: self.lo.recip(),
        })
    }

    pub fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.recip().map(|r| self.mul(&r))
    }

    /// Integer power; even powers account for sign straddling.
    pub fn pow(&self, exp: i64) -> Option<Self> {
        if exp == 0 {
            return Some(RatInterval::point(Rational::one()));
        }
        if exp < 0 {
            return self.pow(-exp).and_then(|p| p.recip());
        }
        if exp % 2 == 0 && self.contains_zero() {
            let bound = self.abs_bound().pow(exp);
            return Some(RatInterval {
                lo: Rational::zero(),
                hi: bound,
            });
        }
        let lo = self.lo.pow(exp);
        let hi = self.hi.pow(exp);
        Some(if lo <= hi {
            RatInterval { lo, hi }
        } else {
            RatInterval { lo: hi, hi: lo }
        })
    }

    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            RatInterval {
                lo: Rational::zero(),
                hi: self.abs_bound(),
            }
        }
    }

    pub fn hull(&self, rhs: &Self) -> Self {
        RatInterval {
            lo: self.lo.clone().min(rhs.lo.clone()),
            hi: self.hi.clone().max(rhs.hi.clone()),
        }
    }

    pub fn split(&self) -> (Self, Self) {
        let mid = (&self.lo + &self.hi) * Rational::new(1, 2);
        (
            RatInterval::new(self.lo.clone(), mid.clone()),
            RatInterval::new(mid, self.hi.clone()),
        )
    }
}

fn pow2(bits: u32) -> Rational {
    Rational::from_bigint(num::BigInt::from(1u8) << bits)
}

/// `2^-bits` as a rational.
pub fn eps_for(bits: u32) -> Rational {
    pow2(bits).recip()
}

/// Rigorous enclosure of `sqrt(q)` for `q >= 0`, width at most `2^-bits`.
pub fn enclose_sqrt(q: &Rational, bits: u32) -> RatInterval {
    assert!(!q.is_negative(), "sqrt of negative rational");
    if q.is_zero() {
        return RatInterval::point(Rational::zero());
    }
    // sqrt(a/b) = sqrt(a*b)/b; bound sqrt of the integer a*b via the
    // integer square root of a*b*4^p.
    let scale_bits = 2 * (bits + 2);
    let n = q.numer() * q.denom();
    let scaled = &n << scale_bits;
    let root = scaled.sqrt();
    let denom = Rational::from_bigint(q.denom().clone()) * pow2(bits + 2);
    let lo = Rational::from_bigint(root.clone()) / denom.clone();
    let hi = Rational::from_bigint(root + 1) / denom;
    RatInterval::new(lo, hi)
}

/// Rigorous enclosure of `exp(q)`.
pub fn enclose_exp(q: &Rational, bits: u32) -> RatInterval {
    if q.is_zero() {
        return RatInterval::point(Rational::one());
    }
    // Halve the argument until |x| <= 1/2, sum the Taylor series with an
    // explicit geometric tail bound, then square back up. All arithmetic is
    // exact, so the only slack is the tail bound itself.
    let mut halvings = 0u32;
    let mut x = q.clone();
    let half = Rational::new(1, 2);
    while x.abs() > half {
        x = x * half.clone();
        halvings += 1;
    }
    // Work at extra precision so the repeated squaring cannot eat the target.
    let work_bits = bits + 2 * halvings + 8;
    let tol = eps_for(work_bits);
    let mut sum = Rational::one();
    let mut term = Rational::one();
    let mut k: i64 = 1;
    loop {
        term = term * &x / Rational::from_int(k);
        sum += &term;
        // |x| <= 1/2 makes the remaining tail at most twice the next term.
        let tail = term.abs() * Rational::new(2, 1) * x.abs();
        if tail < tol {
            let mut iv = RatInterval::new(&sum - &tail, &sum + &tail);
            for _ in 0..halvings {
                iv = iv.mul(&iv);
            }
            return iv;
        }
        k += 1;
    }
}

/// Rigorous enclosure of `ln(q)` for `q > 0`.
pub fn enclose_ln(q: &Rational, bits: u32) -> RatInterval {
    assert!(q.is_positive(), "ln of non-positive rational");
    if q.is_one() {
        return RatInterval::point(Rational::zero());
    }
    // Normalize q = 2^k * m with m in [3/4, 3/2), then
    // ln(q) = k*ln(2) + 2*atanh((m-1)/(m+1)).
    let mut m = q.clone();
    let mut k = 0i64;
    let two = Rational::from_int(2);
    while m >= Rational::new(3, 2) {
        m = m / two.clone();
        k += 1;
    }
    while m < Rational::new(3, 4) {
        m = m * two.clone();
        k -= 1;
    }
    let work_bits = bits + 8;
    let mut result = enclose_atanh_scaled(&m, work_bits);
    if k != 0 {
        let ln2 = enclose_atanh_scaled(&two, work_bits);
        let kr = RatInterval::point(Rational::from_int(k));
        result = result.add(&kr.mul(&ln2));
    }
    result
}

/// Enclosure of `ln(m) = 2*atanh((m-1)/(m+1))` for `m > 0` via the atanh
/// series, which converges geometrically with ratio `u^2 < 1`.
fn enclose_atanh_scaled(m: &Rational, bits: u32) -> RatInterval {
    let u = (m - &Rational::one()) / (m + &Rational::one());
    let u2 = &u * &u;
    let tol = eps_for(bits);
    let mut sum = Rational::zero();
    let mut power = u.clone();
    let mut k: i64 = 0;
    loop {
        sum += &(power.clone() / Rational::from_int(2 * k + 1));
        power = power * &u2;
        // Tail after 2k+1: |u|^(2k+3)/(2k+3) * 1/(1-u^2), coarsened.
        let tail = power.abs() / (Rational::one() - &u2);
        if tail < tol {
            let twice = Rational::from_int(2);
            let lo = (&sum - &tail) * twice.clone();
            let hi = (&sum + &tail) * twice;
            return RatInterval::new(lo, hi);
        }
        k += 1;
    }
}

/// Rigorous enclosure of `sin(q)`, always within [-1, 1].
pub fn enclose_sin(q: &Rational, bits: u32) -> RatInterval {
    enclose_sin_cos(q, bits, true)
}

/// Rigorous enclosure of `cos(q)`, always within [-1, 1].
pub fn enclose_cos(q: &Rational, bits: u32) -> RatInterval {
    enclose_sin_cos(q, bits, false)
}

fn clamp_unit(iv: RatInterval) -> RatInterval {
    let one = Rational::one();
    let lo = iv.lo.max(-&one);
    let hi = iv.hi.min(one.clone());
    if lo <= hi {
        RatInterval::new(lo, hi)
    } else {
        RatInterval::new(-one.clone(), one)
    }
}

fn enclose_sin_cos(q: &Rational, bits: u32, sine: bool) -> RatInterval {
    if q.is_zero() {
        return RatInterval::point(if sine { Rational::zero() } else { Rational::one() });
    }
    // Direct alternating Taylor sum; for |q| beyond the practical range fall
    // back to the trivial enclosure, which is still rigorous.
    if q.abs() > Rational::from_int(64) {
        return RatInterval::new(Rational::from_int(-1), Rational::one());
    }
    let tol = eps_for(bits + 4);
    let q2 = q * q;
    let mut term = if sine { q.clone() } else { Rational::one() };
    let mut sum = term.clone();
    let mut k: i64 = if sine { 1 } else { 0 };
    loop {
        // next term: multiply by -q^2 / ((k+1)(k+2))
        let div = Rational::from_int((k + 1) * (k + 2));
        term = -(term * &q2) / div;
        sum += &term;
        k += 2;
        // Once factorial growth dominates, the tail is bounded by the next
        // term times a geometric factor of 1/2.
        if Rational::from_int((k + 1) * (k + 2)) > &q2 * &Rational::from_int(2) {
            let next = (term.abs() * &q2)
                / Rational::from_int((k + 1) * (k + 2));
            let tail = &next * &Rational::from_int(2);
            if tail < tol {
                return clamp_unit(RatInterval::new(&sum - &tail, &sum + &tail));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_encloses(iv: &RatInterval, value: f64, max_width: f64) {
        // f64 round-off on both the reference value and the converted
        // endpoints needs a few ulps of slack.
        let slack = value.abs().max(1.0) * 1e-16 * 8.0;
        let lo = iv.lo.to_f64().unwrap() - slack;
        let hi = iv.hi.to_f64().unwrap() + slack;
        assert!(lo <= value && value <= hi, "{value} not in [{lo}, {hi}]");
        assert!(hi - lo <= max_width + 2.0 * slack, "enclosure too wide: [{lo}, {hi}]");
    }

    #[test]
    fn sqrt_enclosure_is_tight() {
        let iv = enclose_sqrt(&Rational::from_int(2), 64);
        assert_encloses(&iv, std::f64::consts::SQRT_2, 1e-15);
        let exact = enclose_sqrt(&Rational::new(9, 4), 16);
        assert!(exact.contains(&Rational::new(3, 2)));
    }

    #[test]
    fn exp_and_ln_enclosures() {
        assert_encloses(&enclose_exp(&Rational::one(), 64), std::f64::consts::E, 1e-15);
        assert_encloses(
            &enclose_exp(&Rational::from_int(-3), 64),
            (-3.0f64).exp(),
            1e-15,
        );
        assert_encloses(&enclose_ln(&Rational::from_int(2), 64), std::f64::consts::LN_2, 1e-15);
        assert_encloses(&enclose_ln(&Rational::new(1, 10), 64), (0.1f64).ln(), 1e-14);
    }

    #[test]
    fn sin_cos_enclosures() {
        assert_encloses(&enclose_sin(&Rational::one(), 64), 1.0f64.sin(), 1e-15);
        assert_encloses(&enclose_cos(&Rational::from_int(2), 64), 2.0f64.cos(), 1e-15);
        assert_encloses(&enclose_sin(&Rational::from_int(10), 64), 10.0f64.sin(), 1e-13);
        // Way out of range: falls back to the unit interval.
        let wide = enclose_sin(&Rational::from_int(1000), 64);
        assert_eq!(wide.lo, Rational::from_int(-1));
        assert_eq!(wide.hi, Rational::one());
    }

    #[test]
    fn interval_pow_straddles_zero() {
        let iv = RatInterval::new(Rational::from_int(-2), Rational::from_int(3));
        let sq = iv.pow(2).unwrap();
        assert_eq!(sq.lo, Rational::zero());
        assert_eq!(sq.hi, Rational::from_int(9));
        assert!(iv.recip().is_none());
    }
}
