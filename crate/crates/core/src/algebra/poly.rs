//! Dense univariate polynomials with integer and rational coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rational;

/// Integer polynomial, coefficients stored lowest degree first.
///
/// The zero polynomial has an empty coefficient vector; every other value
/// has a nonzero leading coefficient.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    /// `x - r` scaled to integer coefficients: `den * x - num`.
    pub fn linear_from_root(root: &Rational) -> Self {
        Self::new(vec![-root.numer().clone(), root.denom().clone()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    /// Largest absolute coefficient (the naive height).
    pub fn height(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }

    pub fn eval_rational(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + Rational::from_integer(c.clone());
        }
        acc
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Evaluate at the Gaussian rational `re + i*im`.
    pub fn eval_complex(&self, re: &Rational, im: &Rational) -> (Rational, Rational) {
        let mut ar = Rational::zero();
        let mut ai = Rational::zero();
        for c in self.coeffs.iter().rev() {
            let nr = &ar * re - &ai * im + Rational::from_integer(c.clone());
            let ni = &ar * im + &ai * re;
            ar = nr;
            ai = ni;
        }
        (ar, ai)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Positive gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Divide out the content and make the leading coefficient positive.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.leading().is_negative() {
            g = -g;
        }
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// `p(-x)`.
    pub fn negate_variable(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// `x^deg * p(1/x)`.
    pub fn reverse(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::new(c)
    }

    /// `p(x^2)`.
    pub fn compose_square(&self) -> Self {
        let mut out = vec![BigInt::zero(); 2 * self.coeffs.len()];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[2 * i] = c.clone();
        }
        Self::new(out)
    }

    pub fn to_rational(&self) -> Vec<Rational> {
        self.coeffs
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect()
    }

    /// Clear denominators of a rational polynomial and return the primitive part.
    pub fn from_rational(coeffs: &[Rational]) -> Self {
        let lcm = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        Self::new(
            coeffs
                .iter()
                .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
                .collect(),
        )
        .primitive()
    }

    /// Primitive gcd computed over the rationals.
    pub fn gcd(&self, other: &Self) -> Self {
        let g = qpoly::gcd(&self.to_rational(), &other.to_rational());
        Self::from_rational(&g)
    }

    /// Exact quotient over the rationals; `None` when the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Self) -> Option<Vec<Rational>> {
        let (q, r) = qpoly::divrem(&self.to_rational(), &divisor.to_rational());
        if r.is_empty() {
            Some(q)
        } else {
            None
        }
    }

    /// Product of all distinct irreducible factors, primitive.
    pub fn squarefree_part(&self) -> Self {
        if self.degree() == 0 {
            return self.primitive();
        }
        let g = self.gcd(&self.derivative());
        let q = self.div_exact(&g).expect("gcd divides");
        Self::from_rational(&q)
    }

    /// Irreducible factorization over the rationals.
    ///
    /// Returns primitive factors with positive leading coefficient together
    /// with their multiplicities; constant polynomials yield an empty list.
    pub fn factor(&self) -> Vec<(IntPolynomial, usize)> {
        if self.degree() == 0 {
            return Vec::new();
        }
        let p: algebraics::polynomial::Polynomial<BigInt> =
            self.primitive().coeffs.clone().into();
        let mut out: Vec<(IntPolynomial, usize)> = p
            .factor()
            .polynomial_factors
            .into_iter()
            .map(|f| {
                let coeffs: Vec<BigInt> = f.polynomial.into_coefficients();
                (IntPolynomial::new(coeffs).primitive(), f.power)
            })
            .filter(|(f, _)| f.degree() > 0)
            .collect();
        out.sort_by(|a, b| {
            a.0.degree()
                .cmp(&b.0.degree())
                .then_with(|| a.0.coeffs.cmp(&b.0.coeffs))
        });
        out
    }

    /// The `n`-th cyclotomic polynomial, as the Möbius product of `x^d - 1`.
    pub fn cyclotomic(n: u64) -> Self {
        assert!(n >= 1);
        let mut num = vec![Rational::one()];
        let mut den = vec![Rational::one()];
        for d in 1..=n {
            if !n.is_multiple_of(d) {
                continue;
            }
            let mut f = vec![Rational::zero(); d as usize + 1];
            f[0] = -Rational::one();
            f[d as usize] = Rational::one();
            match mobius(n / d) {
                1 => num = qpoly::mul(&num, &f),
                -1 => den = qpoly::mul(&den, &f),
                _ => {}
            }
        }
        let (q, r) = qpoly::divrem(&num, &den);
        debug_assert!(r.is_empty());
        Self::new(q.iter().map(|c| c.to_integer()).collect())
    }

    /// Number of distinct real roots, by a Sturm sequence.
    pub fn real_root_count(&self) -> usize {
        if self.degree() == 0 {
            return 0;
        }
        let mut seq = vec![self.to_rational(), self.derivative().to_rational()];
        loop {
            let n = seq.len();
            let (_, r) = qpoly::divrem(&seq[n - 2], &seq[n - 1]);
            if r.is_empty() {
                break;
            }
            seq.push(r.into_iter().map(|c| -c).collect());
        }
        let variations = |signs: Vec<i8>| {
            let nz: Vec<i8> = signs.into_iter().filter(|&s| s != 0).collect();
            nz.windows(2).filter(|w| w[0] != w[1]).count()
        };
        let sign = |c: &Rational| if c.is_positive() { 1 } else if c.is_negative() { -1 } else { 0 };
        let at_pos: Vec<i8> = seq.iter().map(|p| sign(p.last().unwrap())).collect();
        let at_neg: Vec<i8> = seq
            .iter()
            .map(|p| {
                let s = sign(p.last().unwrap());
                if (p.len() - 1) % 2 == 1 {
                    -s
                } else {
                    s
                }
            })
            .collect();
        variations(at_neg) - variations(at_pos)
    }
}

fn mobius(mut n: u64) -> i8 {
    let mut result = 1i8;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let show_mag = i == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Helpers for polynomials with rational coefficients stored as slices,
/// lowest degree first and without trailing zeros.
pub mod qpoly {
    use num_traits::{One, Zero};

    use crate::algebra::Rational;

    pub fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
        while p.last().is_some_and(|c| c.is_zero()) {
            p.pop();
        }
        p
    }

    pub fn mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        trim(out)
    }

    pub fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let n = a.len().max(b.len());
        let z = Rational::zero();
        trim(
            (0..n)
                .map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
        let b = trim(b.to_vec());
        assert!(!b.is_empty(), "division by the zero polynomial");
        let mut r = trim(a.to_vec());
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let lead = b.last().unwrap().clone();
        let mut q = vec![Rational::zero(); r.len() - b.len() + 1];
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let factor = r.last().unwrap() / &lead;
            for (i, c) in b.iter().enumerate() {
                r[shift + i] -= &factor * c;
            }
            q[shift] = factor;
            r.pop();
            r = trim(r);
        }
        (trim(q), r)
    }

    pub fn monic(p: &[Rational]) -> Vec<Rational> {
        match p.last() {
            None => Vec::new(),
            Some(l) => p.iter().map(|c| c / l).collect(),
        }
    }

    pub fn gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let mut x = trim(a.to_vec());
        let mut y = trim(b.to_vec());
        while !y.is_empty() {
            let (_, r) = divrem(&x, &y);
            x = y;
            y = r;
        }
        if x.is_empty() {
            vec![Rational::one()]
        } else {
            monic(&x)
        }
    }
}
