//! Unit-modulus eigenvalues `γ_j = λ_j / |λ_j|`, their group of
//! multiplicative relations `L(γ)` and the torus `T(γ)` it cuts out.

use std::f64::consts::TAU;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::algebraic::product_of_powers;
use crate::algebra::interval::ComplexInterval;
use crate::algebra::{AlgebraicNumber, Rational};
use crate::lattice::{column_echelon, in_lattice, integer_kernel, lattice_basis, solve_integral, to_big, IntVec};
use crate::spectral::Spectrum;

#[derive(Clone, Debug)]
pub struct NormalizedSpectrum {
    pub lambdas: Vec<AlgebraicNumber>,
    pub gammas: Vec<AlgebraicNumber>,
    /// Index of the conjugate of each entry.
    pub conjugate: Vec<usize>,
    /// `arg(γ_j) / 2π` in `[0, 1)`.
    pub angles: Vec<f64>,
}

fn turn(z: &AlgebraicNumber) -> f64 {
    let (re, im) = z.approx();
    let a = im.atan2(re) / TAU;
    if a < 0.0 {
        a + 1.0
    } else {
        a
    }
}

pub fn normalize(sp: &Spectrum) -> NormalizedSpectrum {
    normalize_values(sp.eigenvalues.clone(), sp.conjugate.clone())
}

pub fn normalize_values(lambdas: Vec<AlgebraicNumber>, conjugate: Vec<usize>) -> NormalizedSpectrum {
    let gammas: Vec<AlgebraicNumber> = lambdas
        .iter()
        .map(|l| {
            if l.is_real() {
                AlgebraicNumber::from_int(l.sign() as i64)
            } else {
                l.div(&l.modulus()).expect("eigenvalues are nonzero")
            }
        })
        .collect();
    let angles = lambdas.iter().map(turn).collect();
    NormalizedSpectrum {
        lambdas,
        gammas,
        conjugate,
        angles,
    }
}

impl NormalizedSpectrum {
    pub fn len(&self) -> usize {
        self.gammas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gammas.is_empty()
    }

    /// Sub-vector on a conjugation-closed set of indices.
    pub fn restrict(&self, idx: &[usize]) -> NormalizedSpectrum {
        let pos = |j: usize| idx.iter().position(|&k| k == j).expect("index set is conjugation closed");
        NormalizedSpectrum {
            lambdas: idx.iter().map(|&j| self.lambdas[j].clone()).collect(),
            gammas: idx.iter().map(|&j| self.gammas[j].clone()).collect(),
            conjugate: idx.iter().map(|&j| pos(self.conjugate[j])).collect(),
            angles: idx.iter().map(|&j| self.angles[j]).collect(),
        }
    }

    /// Multiplicative orders of the entries that are roots of unity.
    pub fn torsion_orders(&self) -> Vec<Option<u64>> {
        self.gammas
            .iter()
            .map(|g| {
                if g.is_real() {
                    Some(if g.sign() > 0 { 1 } else { 2 })
                } else {
                    g.is_root_of_unity()
                }
            })
            .collect()
    }
}

fn frac_dist(x: f64) -> f64 {
    (x - x.round()).abs()
}

/// Exact test of `γ^v = 1`.
///
/// `γ^{2v} = 1` is equivalent to `λ^{v - σv} = 1` where `σ` swaps conjugate
/// positions, an identity between algebraic integers decided exactly. The
/// remaining sign ambiguity `γ^v = ±1` is settled by the argument.
pub fn is_relation(g: &NormalizedSpectrum, v: &[i64]) -> bool {
    let total: f64 = v.iter().zip(&g.angles).map(|(&k, a)| k as f64 * a).sum();
    let slack = 1e-9 * (1.0 + v.iter().map(|k| k.unsigned_abs() as f64).sum::<f64>());
    if frac_dist(total) > 1e-6 + slack {
        return false;
    }
    let factors: Vec<(AlgebraicNumber, i64)> = (0..g.len())
        .filter_map(|j| {
            let e = v[j] - v[g.conjugate[j]];
            (e != 0).then(|| (g.lambdas[j].clone(), e))
        })
        .collect();
    match product_of_powers(&factors) {
        Some(p) if p.is_one() => frac_dist(total) < 0.25,
        _ => false,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationLattice {
    pub basis: Vec<Vec<i64>>,
    pub rank: usize,
}

impl RelationLattice {
    pub fn contains(&self, v: &[i64]) -> bool {
        let b: Vec<IntVec> = self.basis.iter().map(|r| to_big(r)).collect();
        in_lattice(&b, &to_big(v))
    }
}

#[derive(Clone, Debug)]
pub struct SearchBudget {
    /// Multiplier of the exponent `s^2` in the Masser-type bound.
    pub masser_constant: f64,
    /// Hard cap on the coordinate bound.
    pub coordinate_cap: u64,
    /// Maximum number of candidate vectors examined.
    pub max_candidates: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            masser_constant: 1.0,
            coordinate_cap: 1_000_000,
            max_candidates: 250_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MasserBound {
    pub height: f64,
    pub degree: usize,
    pub cap: u64,
}

/// Heuristic coordinate bound `max(64, ⌈(D log H)^{c s^2}⌉)`, clipped.
pub fn masser_bound(g: &NormalizedSpectrum, budget: &SearchBudget) -> MasserBound {
    let degree = g.gammas.iter().map(|z| z.degree()).max().unwrap_or(1);
    let height = g
        .gammas
        .iter()
        .map(|z| z.min_poly().height().to_f64().unwrap_or(f64::MAX))
        .fold(1.0f64, f64::max);
    let s = g.len() as f64;
    let base = degree as f64 * height.ln();
    let raw = if base <= 1.0 {
        64.0
    } else {
        base.powf(budget.masser_constant * s * s).ceil().max(64.0)
    };
    let cap = raw.min(budget.coordinate_cap as f64).min(1e6) as u64;
    MasserBound { height, degree, cap }
}

/// Basis of the relation group, and whether it is known to be complete.
pub fn relation_basis(g: &NormalizedSpectrum, budget: &SearchBudget) -> (RelationLattice, bool) {
    let s = g.len();
    let orders = g.torsion_orders();
    let mut gens: Vec<Vec<i64>> = Vec::new();
    for j in 0..s {
        let c = g.conjugate[j];
        if c > j {
            let mut v = vec![0i64; s];
            v[j] = 1;
            v[c] = 1;
            gens.push(v);
        }
        if let Some(n) = orders[j] {
            let mut v = vec![0i64; s];
            v[j] = n as i64;
            gens.push(v);
        }
    }
    // relations among the torsion coordinates: γ_j = exp(2πi a_j / N)
    let torsion: Vec<usize> = (0..s).filter(|&j| orders[j].is_some()).collect();
    let n_all = torsion
        .iter()
        .fold(1u64, |acc, &j| acc.lcm(&orders[j].unwrap()));
    let exps: Vec<i64> = torsion
        .iter()
        .map(|&j| {
            let n = orders[j].unwrap();
            let k = (g.angles[j] * n as f64).round() as i64 % n as i64;
            k * (n_all / n) as i64
        })
        .collect();
    if torsion.len() > 1 {
        let mut row: Vec<BigInt> = exps.iter().map(|&a| BigInt::from(a)).collect();
        row.push(BigInt::from(n_all));
        for kv in integer_kernel(&[row], torsion.len() + 1) {
            let mut v = vec![0i64; s];
            for (t, &j) in torsion.iter().enumerate() {
                v[j] = kv[t].to_i64().expect("small torsion relation");
            }
            if v.iter().any(|&x| x != 0) && is_relation(g, &v) {
                gens.push(v);
            }
        }
    }
    // free coordinates: one representative of each non-torsion conjugate pair
    let free: Vec<usize> = (0..s)
        .filter(|&j| orders[j].is_none() && g.conjugate[j] >= j)
        .collect();
    let mut complete = true;
    if free.len() >= 2 {
        let bound = masser_bound(g, budget);
        let (found, exhausted) = search_free_relations(g, &free, &torsion, &exps, n_all, bound.cap, budget.max_candidates);
        gens.extend(found);
        complete = exhausted;
    }
    let big: Vec<IntVec> = gens.iter().map(|v| to_big(v)).collect();
    let basis: Vec<Vec<i64>> = lattice_basis(&big, s)
        .into_iter()
        .map(|v| v.iter().map(|x| x.to_i64().expect("relation fits in i64")).collect())
        .collect();
    let rank = basis.len();
    (RelationLattice { basis, rank }, complete)
}

/// Enumerate `w` on the free coordinates by increasing sup-norm and keep
/// those completing to an exact relation. Returns the relations and whether
/// the full coordinate bound was searched.
fn search_free_relations(
    g: &NormalizedSpectrum,
    free: &[usize],
    torsion: &[usize],
    exps: &[i64],
    n_all: u64,
    cap: u64,
    max_candidates: u64,
) -> (Vec<Vec<i64>>, bool) {
    let s = g.len();
    let k = free.len();
    let mut found: Vec<Vec<i64>> = Vec::new();
    let mut examined = 0u64;
    let mut span: Vec<IntVec> = Vec::new();
    for r in 1..=cap as i64 {
        let mut w = vec![-r; k];
        loop {
            if w.iter().any(|x| x.abs() == r) && canonical_sign(&w) && !in_lattice(&span, &to_big(&w)) {
                examined += 1;
                if examined > max_candidates {
                    return (found, false);
                }
                let total: f64 = w.iter().zip(free).map(|(&c, &j)| c as f64 * g.angles[j]).sum();
                let scaled = total * n_all as f64;
                if frac_dist(scaled) < 1e-7 * (1.0 + r as f64 * k as f64) {
                    let c = (scaled.round() as i64).rem_euclid(n_all as i64);
                    let mut v = vec![0i64; s];
                    for (&c, &j) in w.iter().zip(free) {
                        v[j] = c;
                    }
                    let ok = if c == 0 {
                        true
                    } else if torsion.is_empty() {
                        false
                    } else {
                        let mut row: Vec<BigInt> = exps.iter().map(|&a| BigInt::from(a)).collect();
                        row.push(BigInt::from(n_all));
                        match solve_integral(&[row], &[BigInt::from(-c)], torsion.len() + 1) {
                            Some((x0, _)) => {
                                for (t, &j) in torsion.iter().enumerate() {
                                    v[j] = x0[t].to_i64().unwrap_or(0);
                                }
                                true
                            }
                            None => false,
                        }
                    };
                    if ok && is_relation(g, &v) {
                        found.push(v);
                        let parts: Vec<IntVec> = found.iter().map(|v| to_big(&free_part(v, free))).collect();
                        span = lattice_basis(&parts, k);
                    }
                }
            }
            // next vector in the box [-r, r]^k
            let mut pos = 0;
            loop {
                if pos == k {
                    break;
                }
                if w[pos] < r {
                    w[pos] += 1;
                    break;
                }
                w[pos] = -r;
                pos += 1;
            }
            if pos == k {
                break;
            }
        }
        // with full rank every coset has a representative in the
        // fundamental parallelepiped of the span
        if span.len() == k {
            let reach: i64 = span
                .iter()
                .map(|b| b.iter().map(|x| x.abs().to_i64().unwrap_or(i64::MAX)).max().unwrap_or(0))
                .fold(0i64, |a, b| a.saturating_add(b));
            if r >= reach {
                return (found, true);
            }
        }
    }
    (found, true)
}

fn free_part(v: &[i64], free: &[usize]) -> Vec<i64> {
    free.iter().map(|&j| v[j]).collect()
}

fn canonical_sign(w: &[i64]) -> bool {
    w.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
}

/// `T(γ)` in parametric form: `θ = θ_f + Σ_k t_k · dir_k (mod 1)` over the
/// finitely many offsets `θ_f` and free parameters `t_k ∈ [0, 1)`, with
/// `μ_j = exp(2πi θ_j)`.
#[derive(Clone, Debug)]
pub struct TorusSubgroup {
    pub relations: RelationLattice,
    pub dimension: usize,
    pub offsets: Vec<Vec<Rational>>,
    pub directions: Vec<Vec<i64>>,
}

/// Upper limit on the number of finite offsets materialized.
pub const MAX_TORUS_OFFSETS: usize = 1 << 16;

impl TorusSubgroup {
    pub fn new(relations: RelationLattice, s: usize) -> Self {
        let l = relations.rank;
        let b: Vec<IntVec> = relations.basis.iter().map(|v| to_big(v)).collect();
        let ce = column_echelon(&b, s);
        let directions = (l..s)
            .map(|c| (0..s).map(|r| ce.v[r][c].to_i64().expect("small transform")).collect())
            .collect();
        // φ_{<l} ranges over H^{-1} Z^l / Z^l for the triangular block H
        let mut phis: Vec<Vec<Rational>> = vec![Vec::new()];
        for k in 0..l {
            let piv_row = ce.pivots[k];
            let hkk = ce.h[piv_row][k].clone();
            let mut next = Vec::new();
            for phi in &phis {
                let mut base = Rational::zero();
                for (c, p) in phi.iter().enumerate() {
                    base += Rational::from_integer(ce.h[piv_row][c].clone()) * p;
                }
                let steps = hkk.to_i64().unwrap_or(1).max(1);
                for m in 0..steps {
                    let val = (Rational::from_integer(BigInt::from(m)) - &base)
                        / Rational::from_integer(hkk.clone());
                    let mut p = phi.clone();
                    p.push(val);
                    next.push(p);
                    if next.len() > MAX_TORUS_OFFSETS {
                        break;
                    }
                }
            }
            phis = next;
        }
        let offsets = phis
            .into_iter()
            .map(|phi| {
                (0..s)
                    .map(|r| {
                        let mut t = Rational::zero();
                        for (c, p) in phi.iter().enumerate() {
                            t += Rational::from_integer(ce.v[r][c].clone()) * p;
                        }
                        let fl = t.floor();
                        t - fl
                    })
                    .collect()
            })
            .collect();
        Self {
            relations,
            dimension: s,
            offsets,
            directions,
        }
    }

    /// Whether the torus is a finite group.
    pub fn is_finite(&self) -> bool {
        self.directions.is_empty()
    }

    /// Angles (in turns) of the point with offset `o` and parameters `t`.
    pub fn point(&self, o: usize, t: &[f64]) -> Vec<f64> {
        (0..self.dimension)
            .map(|j| {
                let mut a = self.offsets[o][j].to_f64().unwrap_or(0.0);
                for (k, dir) in self.directions.iter().enumerate() {
                    a += t[k] * dir[j] as f64;
                }
                a - a.floor()
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    Inside,
    Outside,
    Undecided,
}

/// Certified check of `μ^v = 1` for every basis relation `v`.
pub fn torus_membership(t: &TorusSubgroup, mu: &[ComplexInterval]) -> Membership {
    let tol = Rational::new(BigInt::one(), BigInt::from(1_000_000_000u64));
    let mut all_tight = true;
    for v in &t.relations.basis {
        let mut acc = ComplexInterval::from_rational(Rational::one());
        for (m, &e) in mu.iter().zip(v) {
            let base = if e < 0 { m.conj() } else { m.clone() };
            acc = acc.mul(&base.pow(e.unsigned_abs(), 64)).round(64);
        }
        if !acc.contains(&Rational::one(), &Rational::zero()) {
            return Membership::Outside;
        }
        if acc.width() > tol {
            all_tight = false;
        }
    }
    if all_tight {
        Membership::Inside
    } else {
        Membership::Undecided
    }
}

/// Complex interval of half-width `r` around `exp(2πi a)`.
pub fn unit_point(a: f64, r: f64) -> ComplexInterval {
    let (s, c) = (a * TAU).sin_cos();
    let q = |x: f64| Rational::from_float(x).unwrap_or_else(Rational::zero);
    ComplexInterval::around(&q(c), &q(s), &q(r))
}

/// Smallest `n <= horizon` with `max_j |γ_j^n - μ_j| <= eps`, where `μ` is
/// given by its angles in turns.
pub fn density_probe(g: &NormalizedSpectrum, t: &TorusSubgroup, mu: &[f64], eps: f64, horizon: u64) -> Option<u64> {
    let probe: Vec<ComplexInterval> = mu.iter().map(|&a| unit_point(a, 1e-12)).collect();
    if torus_membership(t, &probe) == Membership::Outside {
        return None;
    }
    // chord length 2|sin(π δ)| with δ the angular gap; a slack covers the
    // rounding error of n·θ in double precision
    let slack = 1e-9;
    for n in 0..=horizon {
        let ok = g.angles.iter().zip(mu).all(|(&a, &m)| {
            let delta = frac_dist(n as f64 * a - m);
            2.0 * (std::f64::consts::PI * delta).sin() <= eps - slack
        });
        if ok {
            return Some(n);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::IntPolynomial;

    fn gauss(a: i64, b: i64) -> AlgebraicNumber {
        let p = IntPolynomial::from_i64(&[a * a + b * b, -2 * a, 1]);
        AlgebraicNumber::all_roots_of_irreducible(&p)
            .into_iter()
            .find(|r| (r.approx().1 > 0.0) == (b > 0))
            .unwrap()
    }

    fn pair(a: i64, b: i64) -> NormalizedSpectrum {
        normalize_values(vec![gauss(a, b), gauss(a, -b)], vec![1, 0])
    }

    #[test]
    fn normalization_examples() {
        let g = pair(3, 4);
        assert_eq!(g.gammas[0].min_poly(), &IntPolynomial::from_i64(&[5, -6, 5]));
        let neg = normalize_values(vec![AlgebraicNumber::from_int(-2)], vec![0]);
        assert_eq!(neg.gammas[0], AlgebraicNumber::from_int(-1));
        let g = pair(1, 1);
        assert_eq!(g.gammas[0].is_root_of_unity(), Some(8));
    }

    #[test]
    fn relation_membership() {
        let g = pair(0, 1);
        assert!(is_relation(&g, &[1, 1]));
        assert!(!is_relation(&g, &[1, 0]));
        let g = pair(3, 4);
        assert!(is_relation(&g, &[1, 1]));
        assert!(!is_relation(&g, &[4, 0]));
    }

    #[test]
    fn bases() {
        let (l, complete) = relation_basis(&pair(0, 1), &SearchBudget::default());
        assert!(complete);
        assert!(l.contains(&[1, 1]) && l.contains(&[0, 4]) && l.contains(&[1, -3]));
        assert!(!l.contains(&[1, 0]) && !l.contains(&[2, 0]));
        let (l, complete) = relation_basis(&pair(3, 4), &SearchBudget::default());
        assert!(complete);
        assert_eq!(l.basis, vec![vec![1, 1]]);
        let one = normalize_values(vec![AlgebraicNumber::one()], vec![0]);
        assert_eq!(relation_basis(&one, &SearchBudget::default()).0.basis, vec![vec![1]]);
    }

    #[test]
    fn membership_and_density() {
        let g = pair(3, 4);
        let (l, _) = relation_basis(&g, &SearchBudget::default());
        let t = TorusSubgroup::new(l, 2);
        assert!(!t.is_finite());
        let inside = [unit_point(0.159, 1e-15), unit_point(1.0 - 0.159, 1e-15)];
        assert_eq!(torus_membership(&t, &inside), Membership::Inside);
        let outside = [unit_point(0.159, 1e-15), unit_point(0.159, 1e-15)];
        assert_eq!(torus_membership(&t, &outside), Membership::Outside);
        assert!(density_probe(&g, &t, &[0.5, 0.5], 0.05, 100_000).is_some());
        let empty = TorusSubgroup::new(RelationLattice { basis: vec![], rank: 0 }, 2);
        assert_eq!(torus_membership(&empty, &outside), Membership::Inside);
        let gi = pair(0, 1);
        let (li, _) = relation_basis(&gi, &SearchBudget::default());
        let ti = TorusSubgroup::new(li, 2);
        assert!(ti.is_finite());
        assert_eq!(ti.offsets.len(), 4);
        assert_eq!(density_probe(&gi, &ti, &[0.5, 0.5], 1e-3, 10), Some(2));
    }
}
