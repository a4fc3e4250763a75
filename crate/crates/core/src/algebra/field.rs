//! Simple algebraic number fields `Q[t] / (P)` for an irreducible `P`.
//!
//! Elements are coordinate vectors in the power basis `1, t, …, t^{n-1}`.
//! A field element stands for the same expression at every root of `P`, so
//! zero tests and identities checked here hold at all conjugate embeddings.

use num_traits::{One, Zero};

use super::algebraic::{identify_root, AlgebraicNumber};
use super::interval::ComplexInterval;
use super::matrix::char_poly_rational;
use super::poly::{qpoly, IntPolynomial};
use super::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumberField {
    modulus: IntPolynomial,
    monic: Vec<Rational>,
}

pub type FieldElem = Vec<Rational>;

impl NumberField {
    pub fn new(modulus: IntPolynomial) -> Self {
        assert!(modulus.degree() >= 1);
        let monic = qpoly::monic(&modulus.to_rational());
        Self { modulus, monic }
    }

    pub fn modulus(&self) -> &IntPolynomial {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree()
    }

    pub fn zero(&self) -> FieldElem {
        vec![Rational::zero(); self.degree()]
    }

    pub fn one(&self) -> FieldElem {
        self.from_rational(Rational::one())
    }

    pub fn from_rational(&self, q: Rational) -> FieldElem {
        let mut v = self.zero();
        v[0] = q;
        v
    }

    /// The generator `t`.
    pub fn gen(&self) -> FieldElem {
        self.reduce(&[Rational::zero(), Rational::one()])
    }

    /// Reduce an arbitrary polynomial in `t` modulo `P`.
    pub fn reduce(&self, p: &[Rational]) -> FieldElem {
        let (_, r) = qpoly::divrem(p, &self.monic);
        let mut v = r;
        v.resize(self.degree(), Rational::zero());
        v
    }

    pub fn is_zero(&self, a: &[Rational]) -> bool {
        a.iter().all(|c| c.is_zero())
    }

    /// The rational value of `a` when it lies in `Q`.
    pub fn as_rational(&self, a: &[Rational]) -> Option<Rational> {
        a[1..].iter().all(|c| c.is_zero()).then(|| a[0].clone())
    }

    pub fn add(&self, a: &[Rational], b: &[Rational]) -> FieldElem {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn sub(&self, a: &[Rational], b: &[Rational]) -> FieldElem {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn neg(&self, a: &[Rational]) -> FieldElem {
        a.iter().map(|x| -x).collect()
    }

    pub fn scale(&self, a: &[Rational], k: &Rational) -> FieldElem {
        a.iter().map(|x| x * k).collect()
    }

    pub fn mul(&self, a: &[Rational], b: &[Rational]) -> FieldElem {
        self.reduce(&qpoly::mul(&qpoly::trim(a.to_vec()), &qpoly::trim(b.to_vec())))
    }

    pub fn pow(&self, a: &[Rational], mut e: u64) -> FieldElem {
        let mut acc = self.one();
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inv(&self, a: &[Rational]) -> Option<FieldElem> {
        let a = qpoly::trim(a.to_vec());
        if a.is_empty() {
            return None;
        }
        // invariant: r_k = s_k * a (mod P)
        let (mut r0, mut r1) = (self.monic.clone(), a);
        let (mut s0, mut s1): (Vec<Rational>, Vec<Rational>) = (Vec::new(), vec![Rational::one()]);
        while r1.len() > 1 {
            let (q, r) = qpoly::divrem(&r0, &r1);
            let s = qpoly::sub(&s0, &qpoly::mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        let c = r1[0].clone();
        Some(self.reduce(&s1.iter().map(|x| x / &c).collect::<Vec<_>>()))
    }

    /// Trace of `a` over `Q`.
    pub fn trace(&self, a: &[Rational]) -> Rational {
        let m = self.mult_matrix(a);
        (0..self.degree()).map(|i| m[i][i].clone()).sum()
    }

    /// Matrix of multiplication by `a` in the power basis.
    pub fn mult_matrix(&self, a: &[Rational]) -> Vec<Vec<Rational>> {
        let n = self.degree();
        let mut cols = Vec::with_capacity(n);
        let mut basis = self.one();
        let t = self.gen();
        for _ in 0..n {
            cols.push(self.mul(a, &basis));
            basis = self.mul(&basis, &t);
        }
        (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect()
    }

    /// Interval enclosure of `a` evaluated at a point of `root`.
    pub fn eval_interval(&self, a: &[Rational], root: &ComplexInterval, bits: u32) -> ComplexInterval {
        let mut acc = ComplexInterval::from_rational(Rational::zero());
        for c in a.iter().rev() {
            acc = acc.mul(root).round(bits);
            acc = acc.add(&ComplexInterval::from_rational(c.clone()));
        }
        acc
    }

    /// The value of `a` at the root `t = root` as an algebraic number.
    pub fn embed(&self, a: &[Rational], root: &AlgebraicNumber) -> AlgebraicNumber {
        if let Some(q) = self.as_rational(a) {
            return AlgebraicNumber::from_rational(q);
        }
        let poly = char_poly_rational(&self.mult_matrix(a));
        identify_root(&poly, |bits| {
            let b = bits + 8 + 2 * self.degree() as u32;
            self.eval_interval(a, &root.enclosure(b), b + 8)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn gaussian_field_arithmetic() {
        let k = NumberField::new(IntPolynomial::from_i64(&[1, 0, 1]));
        let t = k.gen();
        assert_eq!(k.mul(&t, &t), k.from_rational(q(-1)));
        let z = vec![q(3), q(4)];
        let zi = k.inv(&z).unwrap();
        assert_eq!(k.mul(&z, &zi), k.one());
        assert_eq!(k.trace(&z), q(6));
    }

    #[test]
    fn embedding_matches_roots() {
        let k = NumberField::new(IntPolynomial::from_i64(&[1, 0, 1]));
        let z = vec![q(3), q(4)];
        for root in AlgebraicNumber::all_roots_of_irreducible(k.modulus()) {
            let e = k.embed(&z, &root);
            assert_eq!(e.min_poly(), &IntPolynomial::from_i64(&[25, -6, 1]));
            assert!(!e.is_real());
        }
    }
}
