//! The forms `Φ_E(x, μ) = Σ_{(i,j) ∈ E} h_{i,j}(x) μ_j` and certified
//! infima over the torus `T(γ)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::TAU;

use num_traits::{ToPrimitive, Zero};

use crate::algebra::field::{FieldElem, NumberField};
use crate::algebra::interval::ComplexInterval;
use crate::algebra::{AlgebraicNumber, Rational};
use crate::spectral::{CoefficientTable, DominanceStructure, Spectrum};
use crate::torus::{relation_basis, RelationLattice, SearchBudget, TorusSubgroup, NormalizedSpectrum};

/// `Φ_E` for one guard and one `≈`-class.
#[derive(Clone, Debug)]
pub struct PhiForm {
    pub guard: usize,
    pub class: usize,
    /// Binomial index `i_E`.
    pub index: usize,
    pub rho: AlgebraicNumber,
    /// Eigenvalue indices of the class, conjugation closed.
    pub eigen: Vec<usize>,
    /// Coefficient vector (`d` variables, then the constant) of each term.
    pub terms: Vec<Vec<FieldElem>>,
}

impl PhiForm {
    pub fn new(sp: &Spectrum, ds: &DominanceStructure, table: &CoefficientTable, guard: usize, class: usize) -> Self {
        let c = &ds.classes[class];
        let terms = c
            .eigen
            .iter()
            .map(|&j| {
                if c.index < sp.multiplicities[j] {
                    table.coefficients(sp, guard, c.index, j).to_vec()
                } else {
                    vec![sp.field_of(j).zero(); table.dimension + 1]
                }
            })
            .collect();
        Self {
            guard,
            class,
            index: c.index,
            rho: c.rho.clone(),
            eigen: c.eigen.clone(),
            terms,
        }
    }

    /// Field values `h_{i_E, j}(x)`; with `homogeneous` the constant terms
    /// are dropped.
    pub fn values(&self, sp: &Spectrum, x: &[Rational], homogeneous: bool) -> Vec<FieldElem> {
        self.eigen
            .iter()
            .zip(&self.terms)
            .map(|(&j, cs)| affine_value(sp.field_of(j), cs, x, homogeneous))
            .collect()
    }

    /// Terms whose coefficient function is not identically zero.
    pub fn active(&self, sp: &Spectrum) -> Vec<usize> {
        (0..self.eigen.len())
            .filter(|&k| {
                let field = sp.field_of(self.eigen[k]);
                self.terms[k].iter().any(|c| !field.is_zero(c))
            })
            .collect()
    }
}

/// `Σ_k cs[k] x_k (+ cs[d])` in the field.
pub fn affine_value(field: &NumberField, cs: &[FieldElem], x: &[Rational], homogeneous: bool) -> FieldElem {
    let d = cs.len() - 1;
    let mut acc = if homogeneous { field.zero() } else { cs[d].clone() };
    for (c, xv) in cs[..d].iter().zip(x) {
        if !xv.is_zero() {
            acc = field.add(&acc, &field.scale(c, xv));
        }
    }
    acc
}

/// Exact sign of a field element at a real root.
pub fn real_sign(field: &NumberField, e: &[Rational], root: &AlgebraicNumber) -> i8 {
    if field.is_zero(e) {
        return 0;
    }
    let mut bits = 32;
    loop {
        let iv = field.eval_interval(e, &root.enclosure(bits), bits + 8);
        if let Some(s) = iv.re.sign() {
            return s;
        }
        bits *= 2;
    }
}

/// `T(γ_E)` for the eigenvalues of one class, with relation data.
#[derive(Clone, Debug)]
pub struct ClassTorus {
    pub eigen: Vec<usize>,
    pub relations: RelationLattice,
    pub complete: bool,
    pub torus: TorusSubgroup,
}

impl ClassTorus {
    /// Backend [`inf_of_values`] uses on this torus.
    pub fn backend(&self) -> Backend {
        let t = &self.torus;
        if t.is_finite() {
            Backend::FiniteExact
        } else if self.eigen.len() == 3 && t.offsets.len() == 1 && t.directions.len() == 1 {
            Backend::CircleExact
        } else {
            Backend::BranchAndBound
        }
    }

    pub fn new(norm: &NormalizedSpectrum, eigen: &[usize], budget: &SearchBudget) -> Self {
        let g = norm.restrict(eigen);
        let (relations, complete) = relation_basis(&g, budget);
        let torus = TorusSubgroup::new(relations.clone(), eigen.len());
        Self {
            eigen: eigen.to_vec(),
            relations,
            complete,
            torus,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SignClaim {
    Positive,
    /// `inf >= 0` certified with the value `0` attained.
    Touching,
    Negative,
    Undecided,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Backend {
    /// Exact minimum over a finite torus.
    FiniteExact,
    /// Exact `h_0 - 2|h|` on a one-parameter circle.
    CircleExact,
    /// Certified branch and bound over torus parameters.
    BranchAndBound,
}

impl Backend {
    pub fn name(&self) -> &'static str {
        match self {
            Backend::FiniteExact => "finite-exact",
            Backend::CircleExact => "circle-exact",
            Backend::BranchAndBound => "branch-and-bound",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhiInf {
    pub lower: f64,
    pub upper: f64,
    pub sign: SignClaim,
    pub backend: Backend,
}

/// Certified infimum of `Φ_E(x, ·)` over the class torus.
pub fn phi_inf(phi: &PhiForm, sp: &Spectrum, ct: &ClassTorus, x: &[Rational], nodes: u64) -> PhiInf {
    let vals = phi.values(sp, x, false);
    inf_of_values(sp, &phi.eigen, &vals, ct, nodes)
}

/// Same for given term values.
pub fn inf_of_values(sp: &Spectrum, eigen: &[usize], vals: &[FieldElem], ct: &ClassTorus, nodes: u64) -> PhiInf {
    let t = &ct.torus;
    if t.is_finite() {
        return finite_inf(sp, eigen, vals, ct);
    }
    if let Some(r) = circle_inf(sp, eigen, vals, ct) {
        return r;
    }
    branch_and_bound(sp, eigen, vals, ct, nodes)
}

fn embed(sp: &Spectrum, j: usize, v: &FieldElem) -> AlgebraicNumber {
    sp.field_of(j).embed(v, &sp.eigenvalues[j])
}

fn finite_inf(sp: &Spectrum, eigen: &[usize], vals: &[FieldElem], ct: &ClassTorus) -> PhiInf {
    let mut best: Option<AlgebraicNumber> = None;
    for off in &ct.torus.offsets {
        let mut acc = AlgebraicNumber::zero();
        for (k, &j) in eigen.iter().enumerate() {
            if sp.field_of(j).is_zero(&vals[k]) {
                continue;
            }
            let h = embed(sp, j, &vals[k]);
            let num = off[k].numer().to_i64().unwrap_or(0);
            let den = off[k].denom().to_u64().unwrap_or(1);
            let mu = AlgebraicNumber::root_of_unity(num, den);
            acc = acc.add(&h.mul(&mu));
        }
        best = Some(match best {
            Some(b) if b.cmp_real(&acc) != Ordering::Greater => b,
            _ => acc,
        });
    }
    let m = best.unwrap_or_else(AlgebraicNumber::zero);
    let v = m.approx().0;
    let sign = match m.sign() {
        1 => SignClaim::Positive,
        0 => SignClaim::Touching,
        _ if ct.complete => SignClaim::Negative,
        _ => SignClaim::Undecided,
    };
    PhiInf {
        lower: v,
        upper: v,
        sign,
        backend: Backend::FiniteExact,
    }
}

/// `μ = (1, e^{iθ}, e^{-iθ})` for a positive real and one conjugate pair.
fn circle_inf(sp: &Spectrum, eigen: &[usize], vals: &[FieldElem], ct: &ClassTorus) -> Option<PhiInf> {
    let t = &ct.torus;
    if eigen.len() != 3 || t.offsets.len() != 1 || t.directions.len() != 1 {
        return None;
    }
    let dir = &t.directions[0];
    let k0 = (0..3).find(|&k| dir[k] == 0)?;
    if !t.offsets[0][k0].is_zero() || !sp.eigenvalues[eigen[k0]].is_real() {
        return None;
    }
    let others: Vec<usize> = (0..3).filter(|&k| k != k0).collect();
    if dir[others[0]].abs() != 1 || dir[others[0]] != -dir[others[1]] {
        return None;
    }
    let h0 = embed(sp, eigen[k0], &vals[k0]);
    let h = embed(sp, eigen[others[0]], &vals[others[0]]);
    let (h0f, hf) = (h0.approx().0, h.abs_f64());
    let approx = h0f - 2.0 * hf;
    let s0 = h0.sign();
    let sign = if s0 <= 0 {
        if h.is_zero() {
            if s0 == 0 {
                SignClaim::Touching
            } else {
                SignClaim::Negative
            }
        } else {
            SignClaim::Negative
        }
    } else {
        // sign of h0^2 - 4|h|^2
        let diff = h0.mul(&h0).sub(&h.abs_sq().scale(&Rational::from_integer(4.into())));
        match diff.sign() {
            1 => SignClaim::Positive,
            0 => SignClaim::Touching,
            _ => SignClaim::Negative,
        }
    };
    let sign = if sign == SignClaim::Negative && !ct.complete {
        SignClaim::Undecided
    } else {
        sign
    };
    Some(PhiInf {
        lower: approx,
        upper: approx,
        sign,
        backend: Backend::CircleExact,
    })
}

#[derive(PartialEq)]
struct Node {
    lower: f64,
    offset: usize,
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Node {
    fn cmp(&self, o: &Self) -> Ordering {
        // min-heap on the lower bound
        o.lower.total_cmp(&self.lower)
    }
}

fn branch_and_bound(sp: &Spectrum, eigen: &[usize], vals: &[FieldElem], ct: &ClassTorus, nodes: u64) -> PhiInf {
    let t = &ct.torus;
    let k = t.directions.len();
    let mut hs: Vec<(f64, f64)> = Vec::new();
    let mut err = 0.0;
    for (idx, &j) in eigen.iter().enumerate() {
        let iv: ComplexInterval = sp.field_of(j).eval_interval(&vals[idx], &sp.eigenvalues[j].enclosure(80), 96);
        let (re, im) = iv.to_f64();
        let w = iv.width().to_f64().unwrap_or(f64::INFINITY);
        hs.push((re, im));
        err += w + 1e-12 * re.hypot(im);
    }
    let scale: f64 = hs.iter().map(|(a, b)| a.hypot(*b)).sum();
    err += 1e-12 * scale;
    let lips: Vec<f64> = (0..k)
        .map(|c| {
            TAU * eigen
                .iter()
                .enumerate()
                .map(|(idx, _)| hs[idx].0.hypot(hs[idx].1) * t.directions[c][idx].unsigned_abs() as f64)
                .sum::<f64>()
        })
        .collect();
    let offsets: Vec<Vec<f64>> = t
        .offsets
        .iter()
        .map(|o| o.iter().map(|v| v.to_f64().unwrap_or(0.0)).collect())
        .collect();
    let eval = |o: usize, tp: &[f64]| -> f64 {
        let mut s = 0.0;
        for (idx, (re, im)) in hs.iter().enumerate() {
            let mut a = offsets[o][idx];
            for (c, dir) in t.directions.iter().enumerate() {
                a += tp[c] * dir[idx] as f64;
            }
            let (sn, cs) = (TAU * a).sin_cos();
            s += re * cs - im * sn;
        }
        s
    };
    let bound = |o: usize, lo: &[f64], hi: &[f64]| -> (f64, f64) {
        let c: Vec<f64> = lo.iter().zip(hi).map(|(a, b)| 0.5 * (a + b)).collect();
        let v = eval(o, &c);
        let slack: f64 = (0..k).map(|i| lips[i] * 0.5 * (hi[i] - lo[i])).sum();
        (v - slack, v)
    };
    let mut heap = BinaryHeap::new();
    let mut upper = f64::INFINITY;
    for o in 0..offsets.len() {
        let (lo, hi) = (vec![0.0; k], vec![1.0; k]);
        let (lb, v) = bound(o, &lo, &hi);
        upper = upper.min(v);
        heap.push(Node { lower: lb, offset: o, lo, hi });
    }
    let mut used = 0u64;
    let result = |lower: f64, upper: f64, sign| PhiInf {
        lower,
        upper,
        sign,
        backend: Backend::BranchAndBound,
    };
    loop {
        let Some(node) = heap.pop() else {
            return result(upper, upper, SignClaim::Undecided);
        };
        let lower = node.lower - err;
        if lower > 0.0 {
            return result(lower, upper, SignClaim::Positive);
        }
        if upper < -err {
            let sign = if ct.complete { SignClaim::Negative } else { SignClaim::Undecided };
            return result(lower, upper, sign);
        }
        if used >= nodes {
            return result(lower, upper, SignClaim::Undecided);
        }
        used += 1;
        let axis = (0..k)
            .max_by(|&a, &b| (lips[a] * (node.hi[a] - node.lo[a])).total_cmp(&(lips[b] * (node.hi[b] - node.lo[b]))))
            .unwrap_or(0);
        let mid = 0.5 * (node.lo[axis] + node.hi[axis]);
        for half in 0..2 {
            let (mut lo, mut hi) = (node.lo.clone(), node.hi.clone());
            if half == 0 {
                hi[axis] = mid;
            } else {
                lo[axis] = mid;
            }
            let (lb, v) = bound(node.offset, &lo, &hi);
            upper = upper.min(v);
            heap.push(Node {
                lower: lb,
                offset: node.offset,
                lo,
                hi,
            });
        }
    }
}
