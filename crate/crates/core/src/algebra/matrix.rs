//! Small dense matrices over exact rings.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::poly::IntPolynomial;
use super::Rational;

pub type IntMatrix = Vec<Vec<BigInt>>;
pub type RatMatrix = Vec<Vec<Rational>>;

pub trait Ring:
    Clone + Zero + One + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone + Zero + One + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Neg<Output = T>
{
}

pub fn identity<T: Ring>(n: usize) -> Vec<Vec<T>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect()
}

pub fn mat_mul<T: Ring>(a: &[Vec<T>], b: &[Vec<T>]) -> Vec<Vec<T>> {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    let mut out = vec![vec![T::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] = out[i][j].clone() + a[i][l].clone() * b[l][j].clone();
            }
        }
    }
    out
}

pub fn mat_vec<T: Ring>(a: &[Vec<T>], v: &[T]) -> Vec<T> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
        })
        .collect()
}

pub fn mat_pow<T: Ring>(a: &[Vec<T>], mut e: u64) -> Vec<Vec<T>> {
    let mut result = identity(a.len());
    let mut base = a.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            result = mat_mul(&result, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mat_mul(&base, &base);
        }
    }
    result
}

/// Kronecker product `a ⊗ b`.
pub fn kron<T: Ring>(a: &[Vec<T>], b: &[Vec<T>]) -> Vec<Vec<T>> {
    let (n, m) = (a.len(), b.len());
    let mut out = vec![vec![T::zero(); n * m]; n * m];
    for i in 0..n {
        for j in 0..n {
            if a[i][j].is_zero() {
                continue;
            }
            for k in 0..m {
                for l in 0..m {
                    out[i * m + k][j * m + l] = a[i][j].clone() * b[k][l].clone();
                }
            }
        }
    }
    out
}

pub fn mat_add<T: Ring>(a: &[Vec<T>], b: &[Vec<T>]) -> Vec<Vec<T>> {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x.clone() + y.clone()).collect())
        .collect()
}

/// Characteristic polynomial `det(xI - M)` by Berkowitz's division-free
/// algorithm. Coefficients are returned lowest degree first (monic).
pub fn char_poly_coeffs<T: Ring>(m: &[Vec<T>]) -> Vec<T> {
    let n = m.len();
    // highest degree first while building
    let mut vect: Vec<T> = vec![T::one()];
    for r in 0..n {
        let a_rr = m[r][r].clone();
        let row: Vec<T> = m[r][..r].to_vec();
        let col: Vec<T> = (0..r).map(|i| m[i][r].clone()).collect();
        let sub: Vec<Vec<T>> = m[..r].iter().map(|row| row[..r].to_vec()).collect();
        let mut t = Vec::with_capacity(r + 2);
        t.push(T::one());
        t.push(-a_rr);
        let mut v = col;
        for _ in 0..r {
            let dot = row
                .iter()
                .zip(&v)
                .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone());
            t.push(-dot);
            v = mat_vec(&sub, &v);
        }
        let mut next = vec![T::zero(); r + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, vj) in vect.iter().enumerate() {
                if i >= j {
                    *slot = slot.clone() + t[i - j].clone() * vj.clone();
                }
            }
        }
        vect = next;
    }
    vect.reverse();
    vect
}

/// Characteristic polynomial of an integer matrix.
pub fn char_poly(m: &IntMatrix) -> IntPolynomial {
    IntPolynomial::new(char_poly_coeffs(m))
}

/// Characteristic polynomial of a rational matrix, scaled to a primitive
/// integer polynomial with the same roots.
pub fn char_poly_rational(m: &RatMatrix) -> IntPolynomial {
    IntPolynomial::from_rational(&char_poly_coeffs(m))
}

/// Companion matrix of the monic rational polynomial obtained from `p`.
pub fn companion(p: &IntPolynomial) -> RatMatrix {
    let n = p.degree();
    let lead = Rational::from_integer(p.leading());
    let mut c = vec![vec![Rational::zero(); n]; n];
    for i in 1..n {
        c[i][i - 1] = Rational::one();
    }
    for (i, row) in c.iter_mut().enumerate() {
        row[n - 1] = -Rational::from_integer(p.coeff(i)) / &lead;
    }
    c
}

pub fn to_rational_matrix(m: &IntMatrix) -> RatMatrix {
    m.iter()
        .map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect())
        .collect()
}

/// Rank of a rational matrix by Gaussian elimination.
pub fn rank(m: &RatMatrix) -> usize {
    row_echelon(m).len()
}

/// Nonzero rows of the reduced row echelon form.
pub fn row_echelon(m: &RatMatrix) -> RatMatrix {
    let mut a = m.to_vec();
    let rows = a.len();
    if rows == 0 {
        return a;
    }
    let cols = a[0].len();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let piv = a[r][c].clone();
        for x in a[r].iter_mut() {
            *x = &*x / &piv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let v = &f * &a[r][j];
                    a[i][j] -= v;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    a.truncate(r);
    a
}

/// Basis of the right null space `{v : M v = 0}` over the rationals.
pub fn null_space(m: &RatMatrix, cols: usize) -> RatMatrix {
    let rref = row_echelon(m);
    let mut pivots = Vec::new();
    for row in &rref {
        let p = row.iter().position(|x| !x.is_zero()).unwrap();
        pivots.push(p);
    }
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![Rational::zero(); cols];
        v[free] = Rational::one();
        for (row, &p) in rref.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn im(rows: &[&[i64]]) -> IntMatrix {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn char_poly_examples() {
        assert_eq!(
            char_poly(&im(&[&[1, -1], &[0, 1]])),
            IntPolynomial::from_i64(&[1, -2, 1])
        );
        assert_eq!(
            char_poly(&im(&[&[3, -4], &[4, 3]])),
            IntPolynomial::from_i64(&[25, -6, 1])
        );
        assert_eq!(char_poly(&im(&[&[0]])), IntPolynomial::x());
    }

    #[test]
    fn char_poly_three_by_three() {
        // det(xI - M) for a matrix with eigenvalues 1, 2, 3
        let m = im(&[&[2, 1, 0], &[1, 2, 0], &[0, 0, 2]]);
        assert_eq!(char_poly(&m), IntPolynomial::from_i64(&[-6, 11, -6, 1]));
    }

    #[test]
    fn companion_reproduces_polynomial() {
        let p = IntPolynomial::from_i64(&[25, -6, 1]);
        assert_eq!(char_poly_rational(&companion(&p)), p);
        let q = IntPolynomial::from_i64(&[3, 0, 2]);
        assert_eq!(char_poly_rational(&companion(&q)), q);
    }

    #[test]
    fn null_space_dimension() {
        let m: RatMatrix = vec![vec![1.into(), 2.into(), 3.into()]]
            .into_iter()
            .map(|r: Vec<i64>| r.into_iter().map(|x| Rational::from_integer(x.into())).collect())
            .collect();
        let ns = null_space(&m, 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            let dot: Rational = m[0].iter().zip(&v).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero());
        }
    }
}
