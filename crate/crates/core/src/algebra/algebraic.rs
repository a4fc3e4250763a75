//! Complex algebraic numbers represented by a minimal polynomial and an
//! isolating box.
//!
//! Arithmetic builds a polynomial vanishing at the result from companion
//! matrices (`C_a ⊗ C_b` for products, `C_a ⊗ I + I ⊗ C_b` for sums), factors
//! it, and selects the factor and root whose isolating box meets an interval
//! enclosure of the result. Equality is decided exactly: equal minimal
//! polynomials and nested refined boxes.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::interval::{rational_to_f64, ComplexInterval, RealInterval};
use super::isolate::{isolate_roots, refine_root, IsolatedRoot};
use super::matrix::{char_poly_rational, companion, identity, kron, mat_add, mat_pow, RatMatrix};
use super::poly::IntPolynomial;
use super::Rational;

#[derive(Clone, Debug)]
pub struct AlgebraicNumber {
    poly: IntPolynomial,
    root: IsolatedRoot,
}

fn normalize_poly(p: IntPolynomial) -> IntPolynomial {
    let p = p.primitive();
    if p.leading().is_negative() {
        p.scale(&BigInt::from(-1))
    } else {
        p
    }
}

impl AlgebraicNumber {
    pub fn from_rational(q: Rational) -> Self {
        Self {
            poly: IntPolynomial::linear_from_root(&q),
            root: IsolatedRoot {
                re: q,
                im: Rational::zero(),
                radius: Rational::zero(),
            },
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n.into()))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_rational(Rational::from_integer(n))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        let p = IntPolynomial::from_i64(&[1, 0, 1]);
        let root = isolate_roots(&p)
            .into_iter()
            .find(|r| r.im.is_positive())
            .expect("x^2 + 1 has a root in the upper half plane");
        Self { poly: p, root }
    }

    /// Build from an irreducible polynomial and one of its isolated roots.
    pub fn from_isolated(poly: IntPolynomial, root: IsolatedRoot) -> Self {
        Self {
            poly: normalize_poly(poly),
            root,
        }
    }

    /// All roots of an irreducible polynomial.
    pub fn all_roots_of_irreducible(p: &IntPolynomial) -> Vec<Self> {
        let p = normalize_poly(p.clone());
        isolate_roots(&p)
            .into_iter()
            .map(|root| Self {
                poly: p.clone(),
                root,
            })
            .collect()
    }

    pub fn min_poly(&self) -> &IntPolynomial {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    pub fn isolating_box(&self) -> ComplexInterval {
        self.root.isolating_box()
    }

    /// Center and radius of the current isolating disk.
    pub fn isolated_root(&self) -> &IsolatedRoot {
        &self.root
    }

    pub fn to_rational(&self) -> Option<Rational> {
        (self.poly.degree() == 1).then(|| self.root.re.clone())
    }

    pub fn is_rational(&self) -> bool {
        self.poly.degree() == 1
    }

    pub fn is_zero(&self) -> bool {
        self.poly.degree() == 1 && self.poly.coeff(0).is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.to_rational().is_some_and(|q| q.is_one())
    }

    pub fn is_real(&self) -> bool {
        self.root.im.is_zero()
    }

    /// Floating point approximation of the value.
    pub fn approx(&self) -> (f64, f64) {
        let r = self.refine(60);
        (rational_to_f64(&r.root.re), rational_to_f64(&r.root.im))
    }

    /// A copy whose isolating radius is below `2^-bits`.
    pub fn refine(&self, bits: u32) -> Self {
        let target = Rational::new(BigInt::one(), BigInt::one() << bits);
        if self.root.radius <= target {
            return self.clone();
        }
        Self {
            poly: self.poly.clone(),
            root: refine_root(&self.poly, &self.root, bits),
        }
    }

    /// Box of width at most `2^-(bits - 3)` containing the value.
    pub fn enclosure(&self, bits: u32) -> ComplexInterval {
        self.refine(bits).isolating_box()
    }

    /// Enclosure of the real part, valid for any number.
    pub fn real_enclosure(&self, bits: u32) -> RealInterval {
        self.enclosure(bits).re
    }

    pub fn neg(&self) -> Self {
        if let Some(q) = self.to_rational() {
            return Self::from_rational(-q);
        }
        Self {
            poly: normalize_poly(self.poly.negate_variable()),
            root: IsolatedRoot {
                re: -self.root.re.clone(),
                im: -self.root.im.clone(),
                radius: self.root.radius.clone(),
            },
        }
    }

    pub fn conj(&self) -> Self {
        if self.is_real() {
            return self.clone();
        }
        Self {
            poly: self.poly.clone(),
            root: IsolatedRoot {
                re: self.root.re.clone(),
                im: -self.root.im.clone(),
                radius: self.root.radius.clone(),
            },
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        if let (Some(a), Some(b)) = (self.to_rational(), o.to_rational()) {
            return Self::from_rational(a + b);
        }
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let (ca, cb) = (companion(&self.poly), companion(&o.poly));
        let m = mat_add(
            &kron(&ca, &identity::<Rational>(cb.len())),
            &kron(&identity::<Rational>(ca.len()), &cb),
        );
        identify_root(&char_poly_rational(&m), |bits| {
            self.enclosure(bits).add(&o.enclosure(bits))
        })
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if let (Some(a), Some(b)) = (self.to_rational(), o.to_rational()) {
            return Self::from_rational(a * b);
        }
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if let Some(q) = self.to_rational() {
            return o.scale(&q);
        }
        if let Some(q) = o.to_rational() {
            return self.scale(&q);
        }
        let m = kron(&companion(&self.poly), &companion(&o.poly));
        identify_root(&char_poly_rational(&m), |bits| {
            self.enclosure(bits).mul(&o.enclosure(bits)).round(bits + 8)
        })
    }

    /// Multiplication by a nonzero rational.
    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        if let Some(a) = self.to_rational() {
            return Self::from_rational(a * q);
        }
        // p(x / q) scaled to integer coefficients
        let n = self.poly.degree();
        let coeffs: Vec<Rational> = (0..=n)
            .map(|i| Rational::from_integer(self.poly.coeff(i)) / q.pow(i as i32))
            .collect();
        let poly = normalize_poly(IntPolynomial::from_rational(&coeffs));
        identify_root(&poly, |bits| self.enclosure(bits).scale(q))
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(q) = self.to_rational() {
            return Some(Self::from_rational(q.recip()));
        }
        let poly = normalize_poly(self.poly.reverse());
        Some(identify_root(&poly, |bits| {
            let mut b = bits;
            loop {
                if let Some(r) = self.enclosure(b).recip() {
                    return r.round(bits + 8);
                }
                b += 16;
            }
        }))
    }

    /// Quotient; `None` when dividing by zero.
    pub fn div(&self, o: &Self) -> Option<Self> {
        Some(self.mul(&o.recip()?))
    }

    /// Integer power; `None` for a negative power of zero.
    pub fn pow(&self, e: i64) -> Option<Self> {
        if e < 0 {
            return self.recip()?.pow(-e);
        }
        if e == 0 {
            return Some(Self::one());
        }
        if e == 1 {
            return Some(self.clone());
        }
        if let Some(q) = self.to_rational() {
            return Some(Self::from_rational(q.pow(e as i32)));
        }
        let c: RatMatrix = mat_pow(&companion(&self.poly), e as u64);
        let e = e as u64;
        Some(identify_root(&char_poly_rational(&c), |bits| {
            let extra = 64 - e.leading_zeros();
            self.enclosure(bits + 2 * extra + 8).pow(e, bits + 16)
        }))
    }

    /// `|z|^2 = z · conj(z)`, a nonnegative real algebraic number.
    pub fn abs_sq(&self) -> Self {
        if self.is_real() {
            return self.mul(self);
        }
        self.mul(&self.conj())
    }

    /// Positive square root of a positive real number.
    pub fn sqrt(&self) -> Self {
        assert!(self.sign() >= 0, "square root of a negative number");
        if self.is_zero() {
            return Self::zero();
        }
        let poly = self.poly.compose_square();
        let me = self.clone();
        identify_filtered(&poly, true, move |bits| {
            let re = me.real_enclosure(bits);
            ComplexInterval::real(re.sqrt(bits + 8))
        })
    }

    /// `|z|` as a real algebraic number.
    pub fn modulus(&self) -> Self {
        if self.is_real() {
            return if self.sign() < 0 { self.neg() } else { self.clone() };
        }
        self.abs_sq().sqrt()
    }

    /// Sign of a real number.
    pub fn sign(&self) -> i8 {
        assert!(self.is_real(), "sign of a non-real algebraic number");
        if let Some(q) = self.to_rational() {
            return if q.is_positive() {
                1
            } else if q.is_negative() {
                -1
            } else {
                0
            };
        }
        let mut bits = 16;
        loop {
            if let Some(s) = self.real_enclosure(bits).sign() {
                return s;
            }
            bits *= 2;
        }
    }

    /// Sign of the real part.
    pub fn real_part_sign(&self) -> i8 {
        if self.is_real() {
            return self.sign();
        }
        let rp = self.add(&self.conj());
        rp.sign()
    }

    /// Exact order of two real numbers.
    pub fn cmp_real(&self, o: &Self) -> Ordering {
        assert!(self.is_real() && o.is_real());
        if let (Some(a), Some(b)) = (self.to_rational(), o.to_rational()) {
            return a.cmp(&b);
        }
        if self == o {
            return Ordering::Equal;
        }
        let mut bits = 16;
        loop {
            let a = self.real_enclosure(bits);
            let b = o.real_enclosure(bits);
            if a.hi < b.lo {
                return Ordering::Less;
            }
            if b.hi < a.lo {
                return Ordering::Greater;
            }
            bits *= 2;
        }
    }

    /// Exact comparison of `|self|` and `|o|`.
    pub fn compare_modulus(&self, o: &Self) -> Ordering {
        for bits in [24u32, 64] {
            let a = self.enclosure(bits).abs_sq();
            let b = o.enclosure(bits).abs_sq();
            if a.hi < b.lo {
                return Ordering::Less;
            }
            if b.hi < a.lo {
                return Ordering::Greater;
            }
        }
        self.abs_sq().cmp_real(&o.abs_sq())
    }

    /// Multiplicative order if the number is a root of unity.
    pub fn is_root_of_unity(&self) -> Option<u64> {
        let k = self.poly.degree() as u64;
        if !self.poly.is_monic() || !self.poly.coeff(0).abs().is_one() {
            return None;
        }
        let m = self.enclosure(24).abs_sq();
        if !m.contains(&Rational::one()) {
            return None;
        }
        let bound = 2 * k * k + 2;
        (1..=bound)
            .filter(|&n| euler_phi(n) == k)
            .find(|&n| IntPolynomial::cyclotomic(n) == self.poly)
    }
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, o: &Self) -> bool {
        if self.poly != o.poly {
            return false;
        }
        if self.poly.degree() == 1 {
            return true;
        }
        if self.is_real() != o.is_real() {
            return false;
        }
        let mut a = self.clone();
        let mut b = o.clone();
        loop {
            let (ba, bb) = (a.isolating_box(), b.isolating_box());
            if !ba.intersects(&bb) {
                return false;
            }
            if ba.is_subset_of(&bb) || bb.is_subset_of(&ba) {
                return true;
            }
            // Shrink the wider one well below the other so that nesting
            // follows when the two boxes isolate the same root.
            let (wide, narrow) = if a.root.radius >= b.root.radius {
                (&mut a, &b)
            } else {
                (&mut b, &a)
            };
            let bits = bits_below(&narrow.root.radius) + 4;
            *wide = wide.refine(bits);
        }
    }
}

impl Eq for AlgebraicNumber {}

/// Smallest `k` with `2^-k <= r`, for positive `r`; large for zero.
fn bits_below(r: &Rational) -> u32 {
    if r.is_zero() {
        return 4096;
    }
    let inv = r.recip();
    let q = inv.ceil().to_integer();
    q.bits() as u32
}

pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Select the root of `poly` whose box meets the enclosures produced by
/// `enclose`, which must contain the target for every precision.
pub(crate) fn identify_root(poly: &IntPolynomial, enclose: impl Fn(u32) -> ComplexInterval) -> AlgebraicNumber {
    identify_filtered(poly, false, enclose)
}

fn identify_filtered(
    poly: &IntPolynomial,
    real_only: bool,
    enclose: impl Fn(u32) -> ComplexInterval,
) -> AlgebraicNumber {
    let mut cands: Vec<(IntPolynomial, IsolatedRoot)> = Vec::new();
    for (f, _) in poly.factor() {
        let f = normalize_poly(f);
        for r in isolate_roots(&f) {
            if !real_only || r.im.is_zero() {
                cands.push((f.clone(), r));
            }
        }
    }
    let mut bits = 16u32;
    loop {
        let e = enclose(bits);
        cands.retain(|(_, r)| r.isolating_box().intersects(&e));
        assert!(!cands.is_empty(), "enclosure lost the target root");
        if cands.len() == 1 {
            let (poly, root) = cands.pop().unwrap();
            return AlgebraicNumber { poly, root };
        }
        for (f, r) in cands.iter_mut() {
            *r = refine_root(f, r, bits);
        }
        bits *= 2;
    }
}

/// Distinct roots of a nonzero polynomial with multiplicities.
pub fn roots(p: &IntPolynomial) -> Vec<(AlgebraicNumber, usize)> {
    let mut out = Vec::new();
    for (f, mult) in p.factor() {
        for a in AlgebraicNumber::all_roots_of_irreducible(&f) {
            out.push((a, mult));
        }
    }
    out
}

/// `Π z_k^{e_k}` for algebraic `z_k` and integer exponents.
pub fn product_of_powers(factors: &[(AlgebraicNumber, i64)]) -> Option<AlgebraicNumber> {
    let mut acc = AlgebraicNumber::one();
    for (z, e) in factors {
        if *e == 0 {
            continue;
        }
        acc = acc.mul(&z.pow(*e)?);
    }
    Some(acc)
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.to_rational() {
            return write!(f, "{q}");
        }
        let (re, im) = self.approx();
        if self.is_real() {
            write!(f, "{re:.6} (root of {})", self.poly)
        } else {
            write!(f, "{re:.6}{im:+.6}i (root of {})", self.poly)
        }
    }
}

impl AlgebraicNumber {
    /// Approximate argument in radians.
    pub fn arg(&self) -> f64 {
        let (re, im) = self.approx();
        im.atan2(re)
    }

    /// Approximate modulus.
    pub fn abs_f64(&self) -> f64 {
        let (re, im) = self.approx();
        re.hypot(im)
    }

    /// `exp(2πi k / n)`.
    pub fn root_of_unity(k: i64, n: u64) -> Self {
        let n_i = n as i64;
        let k = k.rem_euclid(n_i);
        let g = num_integer::gcd(k, n_i).max(1);
        let (k, m) = (k / g, (n_i / g) as u64);
        if m == 1 {
            return Self::one();
        }
        if m == 2 {
            return Self::from_int(-1);
        }
        let target = std::f64::consts::TAU * k as f64 / m as f64;
        let dist = |z: &Self| {
            let d = (z.arg() - target).rem_euclid(std::f64::consts::TAU);
            d.min(std::f64::consts::TAU - d)
        };
        Self::all_roots_of_irreducible(&IntPolynomial::cyclotomic(m))
            .into_iter()
            .min_by(|a, b| dist(a).total_cmp(&dist(b)))
            .expect("cyclotomic polynomials have roots")
    }
}
