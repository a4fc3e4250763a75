//! Turning an integer point of a witness region into a non-terminating
//! initial value.
//!
//! For `n >= max(d, i_E)` every guard satisfies
//! `g(f^n(x)) = C(n, i_E) ρ^n (Φ_E(x, γ^n) + R(n))` where `R(n)` collects the
//! lower indices. With `inf Φ_E >= δ > 0`, the threshold `N_0` is the first
//! `n` from which the bound on `|R(n)|` stays below `δ`.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use super::phi::{inf_of_values, real_sign, SignClaim};
use super::regions::{Candidate, ClassKind};
use super::{DecisionConfig, LoopAnalysis};
use crate::algebra::matrix::mat_pow;
use crate::algebra::Rational;
use crate::geometry::orbit_hull_integer_point;
use crate::model::LoopProgram;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessKind {
    /// Every guard stays positive from step `threshold` on; the witness is
    /// the region point advanced by `advanced` steps.
    Threshold { threshold: u64, advanced: u64 },
    /// The region point is critical; the witness comes from the relative
    /// interior of `conv{f^d(z), …, f^n(z)}` with `z = f^base(x)`.
    OrbitHull {
        base: u64,
        n_used: u64,
        weights: Vec<Rational>,
        threshold: u64,
        advanced: u64,
    },
    /// Membership in a witness region is certified but no threshold was
    /// established; the witness is the region point itself.
    Uncertified,
}

impl WitnessKind {
    pub fn name(&self) -> &'static str {
        match self {
            WitnessKind::Threshold { .. } => "threshold",
            WitnessKind::OrbitHull { .. } => "orbit-hull",
            WitnessKind::Uncertified => "uncertified",
        }
    }
}

pub(crate) struct Upgrade {
    pub witness: Vec<BigInt>,
    pub kind: WitnessKind,
    pub notes: Vec<String>,
}

fn to_q(x: &[BigInt]) -> Vec<Rational> {
    x.iter().map(|v| Rational::from_integer(v.clone())).collect()
}

/// Certified lower bound on `inf Φ_E(x, ·)`, `None` when not certified
/// positive.
fn margin(a: &LoopAnalysis, c: &Candidate, x: &[BigInt], cfg: &DecisionConfig) -> Option<f64> {
    let sp = &a.spectrum;
    let xq = to_q(x);
    let vals = c.phi.values(sp, &xq, false);
    let k0 = c.phi.eigen.iter().position(|&j| j == c.j0)?;
    let field = sp.field_of(c.j0);
    if real_sign(field, &vals[k0], &sp.eigenvalues[c.j0]) <= 0 {
        return None;
    }
    if c.kind == ClassKind::Mixed {
        let rank = a.dominance.classes[c.class].modulus_rank;
        let r = inf_of_values(sp, &c.phi.eigen, &vals, &a.tori[&rank], cfg.phi_nodes);
        return (r.sign == SignClaim::Positive && r.lower > 0.0).then_some(r.lower);
    }
    let iv = field.eval_interval(&vals[k0], &sp.eigenvalues[c.j0].enclosure(96), 104);
    let lo = iv.re.lo.to_f64()?;
    (lo > 0.0).then_some(lo * (1.0 - 1e-12))
}

fn ln_binomial(n: u64, k: usize) -> f64 {
    (0..k as u64).map(|t| ((n - t) as f64).ln() - ((t + 1) as f64).ln()).sum()
}

/// First `n` with `Σ |R_terms(n)| < δ` for all later `n`, or `None` past
/// the cap.
fn threshold(a: &LoopAnalysis, c: &Candidate, x: &[BigInt], delta: f64, cap: u64) -> Option<u64> {
    let sp = &a.spectrum;
    let ds = &a.dominance;
    let class = &ds.classes[c.class];
    let ie = class.index;
    let rank = class.modulus_rank;
    let xq = to_q(x);
    let rho_lo = class.rho.real_enclosure(96).lo.to_f64()? * (1.0 - 1e-12);
    // (i, ln r, ln |h|) for every lower index with nonzero coefficient
    let mut terms: Vec<(usize, f64, f64)> = Vec::new();
    for j in 0..sp.len() {
        for i in 0..sp.multiplicities[j] {
            let cj = ds.class_of((i, j));
            if cj >= c.class || sp.field_of(j).is_zero(&a.table.eval_field(sp, c.guard, i, j, &xq)) {
                continue;
            }
            let h = a.table.eval_interval(sp, c.guard, i, j, &xq, 96);
            let hmax = h.re.lo.abs().max(h.re.hi.abs()).to_f64()?.hypot(h.im.lo.abs().max(h.im.hi.abs()).to_f64()?);
            let ln_r = if ds.modulus_rank[j] == rank {
                0.0
            } else {
                let lam = sp.eigenvalues[j].enclosure(96);
                let m = lam.re.lo.abs().max(lam.re.hi.abs()).to_f64()?.hypot(lam.im.lo.abs().max(lam.im.hi.abs()).to_f64()?);
                (m * (1.0 + 1e-12) / rho_lo).ln()
            };
            terms.push((i, ln_r, (hmax * (1.0 + 1e-12)).ln()));
        }
    }
    let start = (a.dimension() as u64).max(ie as u64).max(1);
    let target = delta * (1.0 - 1e-9);
    for n in start..=cap {
        let mut sum = 0.0;
        let mut monotone = true;
        for &(i, ln_r, ln_h) in &terms {
            let ln_b = ln_binomial(n, i) - ln_binomial(n, ie) + n as f64 * ln_r + ln_h;
            sum += ln_b.exp();
            let ratio = ln_r.exp() * (n + 1 - ie as u64) as f64 / (n + 1 - (i as u64).min(n)) as f64;
            if ratio > 1.0 {
                monotone = false;
            }
        }
        if monotone && sum < target {
            return Some(n);
        }
    }
    None
}

/// Common threshold for all guards at `x`, `None` if some guard is not
/// certified positive.
fn common_threshold(a: &LoopAnalysis, choice: &[Candidate], x: &[BigInt], cfg: &DecisionConfig) -> Option<u64> {
    let mut n0 = 0;
    for c in choice {
        let delta = margin(a, c, x, cfg)?;
        n0 = n0.max(threshold(a, c, x, delta, cfg.threshold_cap)?);
    }
    Some(n0)
}

/// Simulation length beyond which `f^N` is computed by matrix powering.
const SIMULATION_LIMIT: u64 = 20_000;

/// Advance `x` past its last guard failure before `n0`, checking
/// `[n0, n0 + 100]` exactly. Returns the witness and the steps advanced.
fn advance(p: &LoopProgram, x: &[BigInt], n0: u64, notes: &mut Vec<String>) -> (Vec<BigInt>, u64) {
    if n0 > SIMULATION_LIMIT {
        let h = crate::model::homogenize(p);
        let m = mat_pow(&h.matrix, n0);
        let mut v = x.to_vec();
        v.push(BigInt::from(1));
        let y: Vec<BigInt> = m.iter().take(p.dimension).map(|row| row.iter().zip(&v).map(|(a, b)| a * b).sum()).collect();
        notes.push(format!("witness obtained as f^{n0}(x) by matrix powering"));
        return (y, n0);
    }
    let mut cur = x.to_vec();
    let mut last_fail: Option<u64> = None;
    let mut states = vec![cur.clone()];
    for n in 0..=n0 + 100 {
        if !p.guards_hold(&cur) {
            last_fail = Some(n);
            if n >= n0 {
                notes.push(format!("guard fails at step {n} beyond the threshold {n0}"));
            }
        }
        cur = p.step(&cur);
        if n < n0 {
            states.push(cur.clone());
        }
    }
    match last_fail {
        None => (x.to_vec(), 0),
        Some(k) => {
            let k = (k + 1).min(n0);
            (states[k as usize].clone(), k)
        }
    }
}

pub(crate) fn upgrade(a: &LoopAnalysis, choice: &[Candidate], x: &[BigInt], cfg: &DecisionConfig) -> Upgrade {
    let p = &a.reduced;
    let mut notes = Vec::new();
    if let Some(n0) = common_threshold(a, choice, x, cfg) {
        let (w, k) = advance(p, x, n0, &mut notes);
        return Upgrade {
            witness: w,
            kind: WitnessKind::Threshold {
                threshold: n0,
                advanced: k,
            },
            notes,
        };
    }
    notes.push("region point is critical or not certified strictly positive".into());
    // relative interiors of orbit hulls starting further along the orbit
    let d = a.dimension() as u64;
    let mut z = x.to_vec();
    let mut base = 0u64;
    for _ in 0..8 {
        if let Some(h) = orbit_hull_integer_point(p, &z, cfg.hull_horizon) {
            if let Some(n0) = common_threshold(a, choice, &h.point, cfg) {
                let (w, k) = advance(p, &h.point, n0, &mut notes);
                return Upgrade {
                    witness: w,
                    kind: WitnessKind::OrbitHull {
                        base,
                        n_used: h.n_used,
                        weights: h.weights,
                        threshold: n0,
                        advanced: k,
                    },
                    notes,
                };
            }
        }
        for _ in 0..d.max(1) {
            z = p.step(&z);
        }
        base += d.max(1);
    }
    notes.push("no certified witness found; reporting the region point".into());
    Upgrade {
        witness: x.to_vec(),
        kind: WitnessKind::Uncertified,
        notes,
    }
}
