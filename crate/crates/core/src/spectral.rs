//! Spectrum, dominance preorder and closed-form coefficients of the guard
//! sequences `n ↦ g(f^n(x))`.
//!
//! For `n >= d` every guard sequence has the form
//! `Σ_{(i,j) ∈ I} C(n, i) λ_j^n h_{i,j}(x)`. The eigenvalues are grouped by
//! irreducible factor `P` of the characteristic polynomial; for a factor the
//! coefficient `h_{i,j}` is `H_i(λ_j)` for a single polynomial `H_i` with
//! rational coefficients, stored as an element of `Q[t]/(P)`. Conjugate
//! eigenvalues therefore receive conjugate coefficients by construction.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::field::{FieldElem, NumberField};
use crate::algebra::interval::ComplexInterval;
use crate::algebra::matrix::{char_poly, mat_vec};
use crate::algebra::{AlgebraicNumber, IntPolynomial, Rational};
use crate::model::types::HomogenizedSystem;

/// An irreducible factor of the characteristic polynomial with nonzero roots.
#[derive(Clone, Debug)]
pub struct EigenFactor {
    pub field: NumberField,
    pub multiplicity: usize,
    /// Indices of this factor's roots in [`Spectrum::eigenvalues`].
    pub roots: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Spectrum {
    pub char_poly: IntPolynomial,
    /// Distinct nonzero eigenvalues.
    pub eigenvalues: Vec<AlgebraicNumber>,
    pub multiplicities: Vec<usize>,
    pub k_max: usize,
    pub zero_multiplicity: usize,
    pub factors: Vec<EigenFactor>,
    /// Factor index of each eigenvalue.
    pub factor_of: Vec<usize>,
    /// Index of the complex conjugate of each eigenvalue.
    pub conjugate: Vec<usize>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn field_of(&self, j: usize) -> &NumberField {
        &self.factors[self.factor_of[j]].field
    }
}

/// Eigenvalues of the homogenized matrix.
pub fn spectrum_of(h: &HomogenizedSystem) -> Spectrum {
    spectrum_of_matrix(&h.matrix)
}

pub fn spectrum_of_matrix(m: &[Vec<BigInt>]) -> Spectrum {
    let cp = char_poly(&m.to_vec());
    let mut eigenvalues = Vec::new();
    let mut multiplicities = Vec::new();
    let mut factors = Vec::new();
    let mut factor_of = Vec::new();
    let mut zero_multiplicity = 0;
    for (f, mult) in cp.factor() {
        if f.degree() == 1 && f.coeff(0).is_zero() {
            zero_multiplicity = mult;
            continue;
        }
        let mut roots = AlgebraicNumber::all_roots_of_irreducible(&f);
        roots.sort_by(|a, b| {
            let (ar, ai) = a.approx();
            let (br, bi) = b.approx();
            br.total_cmp(&ar).then(bi.total_cmp(&ai))
        });
        let idx = factors.len();
        let mut ids = Vec::new();
        for r in roots {
            ids.push(eigenvalues.len());
            eigenvalues.push(r);
            multiplicities.push(mult);
            factor_of.push(idx);
        }
        factors.push(EigenFactor {
            field: NumberField::new(f),
            multiplicity: mult,
            roots: ids,
        });
    }
    let conjugate = (0..eigenvalues.len())
        .map(|j| {
            let c = eigenvalues[j].conj();
            factors[factor_of[j]]
                .roots
                .iter()
                .copied()
                .find(|&k| eigenvalues[k] == c)
                .expect("spectrum of a rational matrix is closed under conjugation")
        })
        .collect();
    let k_max = multiplicities.iter().copied().max().unwrap_or(0);
    Spectrum {
        char_poly: cp,
        eigenvalues,
        multiplicities,
        k_max,
        zero_multiplicity,
        factors,
        factor_of,
        conjugate,
    }
}

/// One `≈`-class: indices `(i, j)` sharing binomial index `i` and modulus.
#[derive(Clone, Debug)]
pub struct DominanceClass {
    pub index: usize,
    /// Eigenvalue indices `j` of the members.
    pub eigen: Vec<usize>,
    /// Rank of the common modulus among the distinct moduli.
    pub modulus_rank: usize,
    pub rho: AlgebraicNumber,
}

impl DominanceClass {
    pub fn members(&self) -> Vec<(usize, usize)> {
        self.eigen.iter().map(|&j| (self.index, j)).collect()
    }
}

#[derive(Clone, Debug)]
pub struct DominanceStructure {
    pub k_max: usize,
    /// Modulus rank of every eigenvalue (equal moduli share a rank).
    pub modulus_rank: Vec<usize>,
    /// Classes in strictly increasing `≼` order.
    pub classes: Vec<DominanceClass>,
}

impl DominanceStructure {
    pub fn index_set(&self) -> Vec<(usize, usize)> {
        let s = self.modulus_rank.len();
        (0..self.k_max)
            .flat_map(|i| (0..s).map(move |j| (i, j)))
            .collect()
    }

    /// `(i1, j1) ≼ (i2, j2)`.
    pub fn precedes(&self, a: (usize, usize), b: (usize, usize)) -> bool {
        let (ra, rb) = (self.modulus_rank[a.1], self.modulus_rank[b.1]);
        ra < rb || (ra == rb && a.0 <= b.0)
    }

    pub fn class_of(&self, ij: (usize, usize)) -> usize {
        let r = self.modulus_rank[ij.1];
        self.classes
            .iter()
            .position(|c| c.modulus_rank == r && c.index == ij.0)
            .expect("every index belongs to a class")
    }
}

pub fn dominance_structure(sp: &Spectrum) -> DominanceStructure {
    let s = sp.len();
    let mut order: Vec<usize> = (0..s).collect();
    order.sort_by(|&a, &b| sp.eigenvalues[a].compare_modulus(&sp.eigenvalues[b]));
    let mut modulus_rank = vec![0; s];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (pos, &j) in order.iter().enumerate() {
        if pos > 0 {
            let prev = order[pos - 1];
            if sp.eigenvalues[prev].compare_modulus(&sp.eigenvalues[j]) != Ordering::Equal {
                groups.push(Vec::new());
            }
        } else {
            groups.push(Vec::new());
        }
        modulus_rank[j] = groups.len() - 1;
        groups.last_mut().unwrap().push(j);
    }
    let mut classes = Vec::new();
    for (rank, g) in groups.iter().enumerate() {
        let mut eigen = g.clone();
        eigen.sort_unstable();
        let rho = sp.eigenvalues[eigen[0]].modulus();
        for i in 0..sp.k_max {
            classes.push(DominanceClass {
                index: i,
                eigen: eigen.clone(),
                modulus_rank: rank,
                rho: rho.clone(),
            });
        }
    }
    DominanceStructure {
        k_max: sp.k_max,
        modulus_rank,
        classes,
    }
}

/// Closed-form coefficients of every guard.
///
/// `coeffs[g][f][i]` holds `d + 1` field elements of factor `f`: the
/// coefficients of `x_1, …, x_d` and the constant term of `H_i`.
#[derive(Clone, Debug)]
pub struct CoefficientTable {
    pub dimension: usize,
    pub coeffs: Vec<Vec<Vec<Vec<FieldElem>>>>,
}

fn binomial(n: u64, k: usize) -> BigInt {
    let mut r = BigInt::one();
    for t in 0..k as u64 {
        r = r * BigInt::from(n - t) / BigInt::from(t + 1);
    }
    r
}

/// Power sums `Tr(t^k)` for `k < count` of the roots of `P`.
fn power_sums(field: &NumberField, count: usize) -> Vec<Rational> {
    let c = crate::algebra::poly::qpoly::monic(&field.modulus().to_rational());
    let n = field.degree();
    let mut p = Vec::with_capacity(count);
    for k in 0..count {
        if k == 0 {
            p.push(Rational::from_integer(BigInt::from(n)));
            continue;
        }
        let mut s = Rational::zero();
        for i in 1..=n.min(k) {
            if i < k {
                s += &c[n - i] * &p[k - i];
            }
        }
        if k <= n {
            s += Rational::from_integer(BigInt::from(k)) * &c[n - k];
        } else {
            s = Rational::zero();
            for i in 1..=n {
                s += &c[n - i] * &p[k - i];
            }
        }
        p.push(-s);
    }
    p
}

/// Solve `A X = B` exactly for a nonsingular square `A`.
fn solve(mut a: Vec<Vec<Rational>>, mut b: Vec<Vec<Rational>>) -> Option<Vec<Vec<Rational>>> {
    let n = a.len();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        b.swap(c, p);
        let piv = a[c][c].clone();
        for x in a[c].iter_mut() {
            *x = &*x / &piv;
        }
        for x in b[c].iter_mut() {
            *x = &*x / &piv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for k in 0..n {
                    let v = &f * &a[c][k];
                    a[r][k] -= v;
                }
                for k in 0..b[r].len() {
                    let v = &f * &b[c][k];
                    b[r][k] -= v;
                }
            }
        }
    }
    Some(b)
}

pub fn coefficient_table(h: &HomogenizedSystem, sp: &Spectrum) -> CoefficientTable {
    let dim = h.matrix.len();
    let d = dim - 1;
    // unknown layout: factor, index i, power-basis coordinate l
    let mut layout = Vec::new();
    for (f, fac) in sp.factors.iter().enumerate() {
        for i in 0..fac.multiplicity {
            for l in 0..fac.field.degree() {
                layout.push((f, i, l));
            }
        }
    }
    let unknowns = layout.len();
    let sums: Vec<Vec<Rational>> = sp
        .factors
        .iter()
        .map(|fac| power_sums(&fac.field, d + unknowns + fac.field.degree() + 1))
        .collect();
    let a: Vec<Vec<Rational>> = (0..unknowns)
        .map(|row| {
            let n = (d + row) as u64;
            layout
                .iter()
                .map(|&(f, i, l)| {
                    Rational::from_integer(binomial(n, i)) * &sums[f][n as usize + l]
                })
                .collect()
        })
        .collect();
    // right-hand sides: guard g, probe k, value c_g^T M^n e_k
    let mut rhs = vec![Vec::with_capacity(h.guard_rows.len() * dim); unknowns];
    let mut cols: Vec<Vec<BigInt>> = (0..dim)
        .map(|k| (0..dim).map(|r| if r == k { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    for _ in 0..d {
        cols = cols.iter().map(|v| mat_vec(&h.matrix, v)).collect();
    }
    for row in rhs.iter_mut() {
        for c in &h.guard_rows {
            for v in &cols {
                let val: BigInt = c.iter().zip(v).map(|(x, y)| x * y).sum();
                row.push(Rational::from_integer(val));
            }
        }
        cols = cols.iter().map(|v| mat_vec(&h.matrix, v)).collect();
    }
    let sol = if unknowns == 0 {
        Vec::new()
    } else {
        solve(a, rhs).expect("exponential-polynomial ansatz is nonsingular")
    };
    let coeffs = (0..h.guard_rows.len())
        .map(|g| {
            sp.factors
                .iter()
                .enumerate()
                .map(|(f, fac)| {
                    (0..sp.k_max)
                        .map(|i| {
                            (0..dim)
                                .map(|k| {
                                    let mut e = fac.field.zero();
                                    if i < fac.multiplicity {
                                        for (u, &(ff, ii, l)) in layout.iter().enumerate() {
                                            if ff == f && ii == i {
                                                e[l] = sol[u][g * dim + k].clone();
                                            }
                                        }
                                    }
                                    e
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    CoefficientTable { dimension: d, coeffs }
}

impl CoefficientTable {
    /// Field-element coefficients of `h_{i,j}` for guard `g`.
    pub fn coefficients<'a>(&'a self, sp: &Spectrum, g: usize, i: usize, j: usize) -> &'a [FieldElem] {
        &self.coeffs[g][sp.factor_of[j]][i]
    }

    /// `h_{i,j}(x)` as an element of the factor's field.
    pub fn eval_field(&self, sp: &Spectrum, g: usize, i: usize, j: usize, x: &[Rational]) -> FieldElem {
        let field = sp.field_of(j);
        let cs = self.coefficients(sp, g, i, j);
        let mut acc = cs[self.dimension].clone();
        for (c, xv) in cs.iter().zip(x) {
            if !xv.is_zero() {
                acc = field.add(&acc, &field.scale(c, xv));
            }
        }
        acc
    }

    /// Exact test `h_{i,j}(x) = 0`.
    pub fn is_zero_at(&self, sp: &Spectrum, g: usize, i: usize, j: usize, x: &[Rational]) -> bool {
        sp.field_of(j).is_zero(&self.eval_field(sp, g, i, j, x))
    }

    /// `h_{i,j}` is the zero function.
    pub fn vanishes(&self, sp: &Spectrum, g: usize, i: usize, j: usize) -> bool {
        let field = sp.field_of(j);
        self.coefficients(sp, g, i, j).iter().all(|c| field.is_zero(c))
    }

    /// `h_{i,j}(x)` as an algebraic number.
    pub fn eval_algebraic(&self, sp: &Spectrum, g: usize, i: usize, j: usize, x: &[Rational]) -> AlgebraicNumber {
        let e = self.eval_field(sp, g, i, j, x);
        sp.field_of(j).embed(&e, &sp.eigenvalues[j])
    }

    /// Interval enclosure of `h_{i,j}(x)`.
    pub fn eval_interval(
        &self,
        sp: &Spectrum,
        g: usize,
        i: usize,
        j: usize,
        x: &[Rational],
        bits: u32,
    ) -> ComplexInterval {
        let e = self.eval_field(sp, g, i, j, x);
        let field = sp.field_of(j);
        field.eval_interval(&e, &sp.eigenvalues[j].enclosure(bits), bits + 8)
    }

    /// Certified enclosure of `Σ C(n, i) λ_j^n h_{i,j}(x)`.
    pub fn reconstruct(
        &self,
        sp: &Spectrum,
        g: usize,
        x: &[Rational],
        n: u64,
        bits: u32,
    ) -> ComplexInterval {
        let mut acc = ComplexInterval::from_rational(Rational::zero());
        for j in 0..sp.len() {
            let extra = 64 - n.leading_zeros() + 4;
            let lam = sp.eigenvalues[j].enclosure(bits + 2 * extra);
            let pw = lam.pow(n, bits + 2 * extra);
            for i in 0..sp.multiplicities[j] {
                let h = self.eval_interval(sp, g, i, j, x, bits + 2 * extra);
                let b = Rational::from_integer(binomial(n, i));
                acc = acc.add(&pw.mul(&h).scale(&b).round(bits + extra));
            }
        }
        acc
    }

    /// Check `h_{i,j}(f(x)) = λ_j (h_{i,j}(x) + h_{i+1,j}(x))` exactly.
    pub fn shift_identity_holds(
        &self,
        sp: &Spectrum,
        g: usize,
        i: usize,
        j: usize,
        x: &[Rational],
        fx: &[Rational],
    ) -> bool {
        let field = sp.field_of(j);
        let lhs = self.eval_field(sp, g, i, j, fx);
        let mut inner = self.eval_field(sp, g, i, j, x);
        if i + 1 < sp.k_max {
            inner = field.add(&inner, &self.eval_field(sp, g, i + 1, j, x));
        }
        lhs == field.mul(&field.gen(), &inner)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse::parse_loop;
    use crate::model::transform::homogenize;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn setup(src: &str) -> (HomogenizedSystem, Spectrum, CoefficientTable) {
        let p = parse_loop(src).unwrap();
        let h = homogenize(&p);
        let sp = spectrum_of(&h);
        let t = coefficient_table(&h, &sp);
        (h, sp, t)
    }

    #[test]
    fn jordan_block_spectrum() {
        let (_, sp, t) = setup("vars x; while x > 0 do x := x + 1 end");
        assert_eq!(sp.len(), 1);
        assert_eq!(sp.k_max, 2);
        assert_eq!(t.eval_field(&sp, 0, 0, 0, &[q(5)])[0], q(5));
        assert!(t.coefficients(&sp, 0, 0, 0)[0][0] == q(1));
        assert!(t.coefficients(&sp, 0, 1, 0)[0][0].is_zero());
        assert_eq!(t.coefficients(&sp, 0, 1, 0)[1][0], q(1));
        let ds = dominance_structure(&sp);
        assert_eq!(ds.classes.len(), 2);
        assert_eq!(ds.classes[0].index, 0);
        assert_eq!(ds.classes[1].index, 1);
    }

    #[test]
    fn rotation_spectrum() {
        let (_, sp, t) = setup("vars x, y; while x > 0 do x := 3*x - 4*y; y := 4*x + 3*y end");
        assert_eq!(sp.len(), 3);
        let ds = dominance_structure(&sp);
        assert_eq!(ds.classes.len(), 2);
        assert_eq!(ds.classes[0].eigen.len(), 1);
        assert_eq!(ds.classes[1].eigen.len(), 2);
        assert_eq!(ds.classes[1].rho, AlgebraicNumber::from_int(5));
        let (a, b) = (ds.classes[1].eigen[0], ds.classes[1].eigen[1]);
        assert_eq!(sp.conjugate[a], b);
        let x = [q(1), q(0)];
        let ha = t.eval_algebraic(&sp, 0, 0, a, &x);
        let hb = t.eval_algebraic(&sp, 0, 0, b, &x);
        assert_eq!(ha.conj(), hb);
        assert_eq!(ha.add(&hb), AlgebraicNumber::one());
    }

    #[test]
    fn doubling_has_zero_constant_part() {
        let (_, sp, t) = setup("vars x; while x > 0 do x := 2*x end");
        let one = sp.eigenvalues.iter().position(|e| e.is_one()).unwrap();
        let two = 1 - one;
        assert!(t.vanishes(&sp, 0, 0, one));
        assert_eq!(t.eval_field(&sp, 0, 0, two, &[q(3)])[0], q(3));
    }

    #[test]
    fn reconstruction_pins_guard_values() {
        let (h, sp, t) = setup("vars x, y, z; while x + z > 0 do x := 3*x - 4*y + 1; y := 4*x + 3*y; z := z + x - 2 end");
        let x0 = [q(2), q(-1), q(3)];
        let mut v: Vec<BigInt> = vec![2.into(), (-1).into(), 3.into(), 1.into()];
        for n in 0..12u64 {
            if n >= 3 {
                let exact: BigInt = h.guard_rows[0].iter().zip(&v).map(|(a, b)| a * b).sum();
                let enc = t.reconstruct(&sp, 0, &x0, n, 40);
                assert!(enc.contains(&Rational::from_integer(exact), &Rational::zero()));
                assert!(enc.re.width() < q(1));
            }
            v = mat_vec(&h.matrix, &v);
        }
    }
}
