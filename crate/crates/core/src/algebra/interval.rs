//! Interval arithmetic with rational endpoints.
//!
//! Endpoints are exact rationals; [`RealInterval::round`] snaps them outward
//! to dyadic values so that long evaluation chains keep bounded size.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rational;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RealInterval {
    pub lo: Rational,
    pub hi: Rational,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ComplexInterval {
    pub re: RealInterval,
    pub im: RealInterval,
}

fn pow2(bits: u32) -> BigInt {
    BigInt::one() << bits
}

/// Largest dyadic `k / 2^bits` not exceeding `q`.
pub fn floor_dyadic(q: &Rational, bits: u32) -> Rational {
    let s = pow2(bits);
    let scaled = (q * Rational::from_integer(s.clone())).floor().to_integer();
    Rational::new(scaled, s)
}

/// Smallest dyadic `k / 2^bits` not below `q`.
pub fn ceil_dyadic(q: &Rational, bits: u32) -> Rational {
    let s = pow2(bits);
    let scaled = (q * Rational::from_integer(s.clone())).ceil().to_integer();
    Rational::new(scaled, s)
}

/// Dyadic lower bound on `sqrt(q)` for `q >= 0`.
pub fn sqrt_lower(q: &Rational, bits: u32) -> Rational {
    if !q.is_positive() {
        return Rational::zero();
    }
    let s = pow2(2 * bits);
    let scaled = (q * Rational::from_integer(s)).floor().to_integer();
    Rational::new(scaled.sqrt(), pow2(bits))
}

/// Dyadic upper bound on `sqrt(q)` for `q >= 0`.
pub fn sqrt_upper(q: &Rational, bits: u32) -> Rational {
    if !q.is_positive() {
        return Rational::zero();
    }
    let s = pow2(2 * bits);
    let scaled = (q * Rational::from_integer(s)).ceil().to_integer();
    let mut r = scaled.sqrt();
    if &r * &r < scaled {
        r += 1;
    }
    Rational::new(r, pow2(bits))
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        if q.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

impl RealInterval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        Self { lo, hi }
    }

    pub fn point(q: Rational) -> Self {
        Self {
            lo: q.clone(),
            hi: q,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::point(Rational::from_integer(n.into()))
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    pub fn contains(&self, q: &Rational) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn intersects(&self, o: &Self) -> bool {
        self.lo <= o.hi && o.lo <= self.hi
    }

    pub fn is_subset_of(&self, o: &Self) -> bool {
        o.lo <= self.lo && self.hi <= o.hi
    }

    /// Sign when the interval excludes zero.
    pub fn sign(&self) -> Option<i8> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else {
            None
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(&self.lo - &o.hi, &self.hi - &o.lo)
    }

    pub fn neg(&self) -> Self {
        Self::new(-self.hi.clone(), -self.lo.clone())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Self::new(lo, hi)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let a = &self.lo * k;
        let b = &self.hi * k;
        if a <= b {
            Self::new(a, b)
        } else {
            Self::new(b, a)
        }
    }

    pub fn square(&self) -> Self {
        let a = &self.lo * &self.lo;
        let b = &self.hi * &self.hi;
        if self.contains_zero() {
            Self::new(Rational::zero(), a.max(b))
        } else if a <= b {
            Self::new(a, b)
        } else {
            Self::new(b, a)
        }
    }

    /// Reciprocal; `None` when the interval contains zero.
    pub fn recip(&self) -> Option<Self> {
        if self.contains_zero() {
            return None;
        }
        Some(Self::new(self.hi.recip(), self.lo.recip()))
    }

    pub fn sqrt(&self, bits: u32) -> Self {
        Self::new(sqrt_lower(&self.lo, bits), sqrt_upper(&self.hi, bits))
    }

    /// Snap endpoints outward onto the dyadic grid `2^-bits`.
    pub fn round(&self, bits: u32) -> Self {
        Self::new(floor_dyadic(&self.lo, bits), ceil_dyadic(&self.hi, bits))
    }

    pub fn to_f64_bounds(&self) -> (f64, f64) {
        let lo = rational_to_f64(&self.lo);
        let hi = rational_to_f64(&self.hi);
        (lo - lo.abs() * 1e-15 - f64::MIN_POSITIVE, hi + hi.abs() * 1e-15 + f64::MIN_POSITIVE)
    }
}

impl ComplexInterval {
    pub fn new(re: RealInterval, im: RealInterval) -> Self {
        Self { re, im }
    }

    pub fn point(re: Rational, im: Rational) -> Self {
        Self::new(RealInterval::point(re), RealInterval::point(im))
    }

    pub fn real(x: RealInterval) -> Self {
        Self::new(x, RealInterval::point(Rational::zero()))
    }

    pub fn from_rational(q: Rational) -> Self {
        Self::point(q, Rational::zero())
    }

    /// Square box of half-width `r` around `(cr, ci)`.
    pub fn around(cr: &Rational, ci: &Rational, r: &Rational) -> Self {
        Self::new(
            RealInterval::new(cr - r, cr + r),
            RealInterval::new(ci - r, ci + r),
        )
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.re.add(&o.re), self.im.add(&o.im))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }

    pub fn neg(&self) -> Self {
        Self::new(self.re.neg(), self.im.neg())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), self.im.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let re = self.re.mul(&o.re).sub(&self.im.mul(&o.im));
        let im = self.re.mul(&o.im).add(&self.im.mul(&o.re));
        Self::new(re, im)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::new(self.re.scale(k), self.im.scale(k))
    }

    /// Enclosure of `|z|^2`.
    pub fn abs_sq(&self) -> RealInterval {
        self.re.square().add(&self.im.square())
    }

    /// Enclosure of `1/z`; `None` when zero may be inside.
    pub fn recip(&self) -> Option<Self> {
        let n = self.abs_sq();
        let inv = n.recip()?;
        let c = self.conj();
        Some(Self::new(c.re.mul(&inv), c.im.mul(&inv)))
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        Some(self.mul(&o.recip()?))
    }

    pub fn pow(&self, mut e: u64, bits: u32) -> Self {
        let mut acc = Self::from_rational(Rational::one());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).round(bits);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).round(bits);
            }
        }
        acc
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn contains(&self, re: &Rational, im: &Rational) -> bool {
        self.re.contains(re) && self.im.contains(im)
    }

    pub fn intersects(&self, o: &Self) -> bool {
        self.re.intersects(&o.re) && self.im.intersects(&o.im)
    }

    pub fn is_subset_of(&self, o: &Self) -> bool {
        self.re.is_subset_of(&o.re) && self.im.is_subset_of(&o.im)
    }

    pub fn width(&self) -> Rational {
        self.re.width().max(self.im.width())
    }

    pub fn round(&self, bits: u32) -> Self {
        Self::new(self.re.round(bits), self.im.round(bits))
    }

    pub fn mid(&self) -> (Rational, Rational) {
        (self.re.mid(), self.im.mid())
    }

    /// Box symmetric about the real axis.
    pub fn is_conjugation_symmetric(&self) -> bool {
        self.im.lo == -self.im.hi.clone()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        let (r, i) = self.mid();
        (rational_to_f64(&r), rational_to_f64(&i))
    }
}

impl fmt::Display for RealInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", rational_to_f64(&self.lo), rational_to_f64(&self.hi))
    }
}

impl fmt::Display for ComplexInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + i{}", self.re, self.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn sqrt_bounds_bracket() {
        let two = q(2, 1);
        let lo = sqrt_lower(&two, 30);
        let hi = sqrt_upper(&two, 30);
        assert!(&lo * &lo <= two && &hi * &hi >= two);
        assert!(&hi - &lo <= q(1, 1 << 29));
    }

    #[test]
    fn complex_multiplication_encloses_product() {
        let a = ComplexInterval::around(&q(3, 1), &q(4, 1), &q(1, 100));
        let b = a.conj();
        let p = a.mul(&b);
        assert!(p.contains(&q(25, 1), &q(0, 1)));
    }

    #[test]
    fn rounding_is_outward() {
        let x = RealInterval::new(q(1, 3), q(2, 3));
        let r = x.round(8);
        assert!(x.is_subset_of(&r));
    }
}
