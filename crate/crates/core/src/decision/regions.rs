//! Witness regions: for each guard a candidate dominant class, the affine
//! equalities killing all higher classes and the positivity constraints of
//! the chosen class.
//!
//! A class contributes only if it contains a positive real eigenvalue `ρ`:
//! otherwise the Haar mean of `Φ_E(x, ·)` over `T(γ)` is zero, so its
//! infimum is negative unless `Φ_E` vanishes. With `ρ` present the mean is
//! `h_{i,ρ}(x)`, which must be positive.

use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigInt;

use super::phi::{affine_value, inf_of_values, real_sign, Backend, ClassTorus, PhiForm, SignClaim};
use super::relax::real_infeasible;
use super::{DecisionConfig, LoopAnalysis};
use crate::algebra::field::FieldElem;
use crate::algebra::Rational;
use crate::geometry::region::integral_row;
use crate::geometry::{feasible_point, integer_point, ConvexRegion, IntegerPoint, PointOracle, Tri};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassKind {
    /// Positive rational eigenvalue alone: a rational halfspace.
    RealRational,
    /// Positive irrational eigenvalue alone: a halfspace with algebraic
    /// coefficients.
    RealAlgebraic,
    /// Positive real eigenvalue together with complex ones.
    Mixed,
}

impl ClassKind {
    pub fn name(&self) -> &'static str {
        match self {
            ClassKind::RealRational => "real-rational",
            ClassKind::RealAlgebraic => "real-algebraic",
            ClassKind::Mixed => "mixed",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Candidate {
    pub guard: usize,
    pub class: usize,
    /// Index of the positive real eigenvalue of the class.
    pub j0: usize,
    pub kind: ClassKind,
    pub phi: PhiForm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RegionOutcome {
    /// The rational relaxation of a partial tuple is infeasible.
    Pruned,
    Empty,
    Found(Vec<BigInt>),
    Undecided(String),
}

#[derive(Clone, Debug)]
pub struct RegionRecord {
    /// `(guard, class)` pairs of the (possibly partial) tuple.
    pub classes: Vec<(usize, usize)>,
    pub outcome: RegionOutcome,
}

/// Candidate dominant classes of a guard, from the top of `≼` down.
pub fn candidates(a: &LoopAnalysis, guard: usize) -> Vec<Candidate> {
    let sp = &a.spectrum;
    let ds = &a.dominance;
    let mut out = Vec::new();
    for c in (0..ds.classes.len()).rev() {
        let cl = &ds.classes[c];
        let Some(&j0) = cl
            .eigen
            .iter()
            .find(|&&j| sp.eigenvalues[j].is_real() && sp.eigenvalues[j].sign() > 0)
        else {
            continue;
        };
        if cl.index >= sp.multiplicities[j0] || a.table.vanishes(sp, guard, cl.index, j0) {
            continue;
        }
        let phi = PhiForm::new(sp, ds, &a.table, guard, c);
        let complex_active = phi.active(sp).iter().any(|&k| phi.eigen[k] != j0);
        let kind = if complex_active {
            ClassKind::Mixed
        } else if sp.field_of(j0).degree() == 1 {
            ClassKind::RealRational
        } else {
            ClassKind::RealAlgebraic
        };
        out.push(Candidate {
            guard,
            class: c,
            j0,
            kind,
            phi,
        });
    }
    out
}

type Affine = (Vec<Rational>, Rational);

/// `h^{(g)}_{i,j}(x) = 0` for every index above class `c`, split into
/// rational coordinates.
fn higher_equalities(a: &LoopAnalysis, guard: usize, c: usize) -> Vec<Affine> {
    let sp = &a.spectrum;
    let d = a.dimension();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for cl in &a.dominance.classes[c + 1..] {
        for &j in &cl.eigen {
            let i = cl.index;
            if i >= sp.multiplicities[j] || !seen.insert((sp.factor_of[j], i)) {
                continue;
            }
            let cs = a.table.coefficients(sp, guard, i, j);
            for l in 0..sp.field_of(j).degree() {
                let row: Vec<Rational> = cs[..d].iter().map(|e| e[l].clone()).collect();
                let cst = cs[d][l].clone();
                if row.iter().all(|v| *v == Rational::from_integer(0.into())) && cst == Rational::from_integer(0.into()) {
                    continue;
                }
                out.push((row, cst));
            }
        }
    }
    out
}

fn to_q(x: &[BigInt]) -> Vec<Rational> {
    x.iter().map(|v| Rational::from_integer(v.clone())).collect()
}

/// `h_{i,ρ}(x) > 0` for an irrational `ρ`.
struct Halfspace {
    a: Arc<LoopAnalysis>,
    guard: usize,
    index: usize,
    j0: usize,
}

impl Halfspace {
    fn sign(&self, x: &[BigInt], homogeneous: bool) -> i8 {
        let sp = &self.a.spectrum;
        let field = sp.field_of(self.j0);
        let cs = self.a.table.coefficients(sp, self.guard, self.index, self.j0);
        let v = affine_value(field, cs, &to_q(x), homogeneous);
        real_sign(field, &v, &sp.eigenvalues[self.j0])
    }
}

impl PointOracle for Halfspace {
    fn check(&self, x: &[BigInt]) -> Tri {
        if self.sign(x, false) > 0 {
            Tri::Yes
        } else {
            Tri::No
        }
    }

    fn ray_sign(&self, r: &[BigInt]) -> Option<i8> {
        Some(self.sign(r, true))
    }

    fn describe(&self) -> String {
        format!("h[{}](x) > 0 at eigenvalue {}", self.index, self.a.spectrum.eigenvalues[self.j0])
    }
}

/// `inf_{μ ∈ T} Φ_E(x, μ) >= 0`.
struct TorusInf {
    a: Arc<LoopAnalysis>,
    phi: PhiForm,
    torus: Arc<ClassTorus>,
    nodes: u64,
}

impl PointOracle for TorusInf {
    fn check(&self, x: &[BigInt]) -> Tri {
        let sp = &self.a.spectrum;
        let vals = self.phi.values(sp, &to_q(x), false);
        match inf_of_values(sp, &self.phi.eigen, &vals, &self.torus, self.nodes).sign {
            SignClaim::Positive | SignClaim::Touching => Tri::Yes,
            SignClaim::Negative => Tri::No,
            SignClaim::Undecided => Tri::Unknown,
        }
    }

    fn ray_sign(&self, r: &[BigInt]) -> Option<i8> {
        let sp = &self.a.spectrum;
        let vals = self.phi.values(sp, &to_q(r), true);
        match inf_of_values(sp, &self.phi.eigen, &vals, &self.torus, self.nodes).sign {
            SignClaim::Positive => Some(1),
            _ => None,
        }
    }

    fn describe(&self) -> String {
        format!("inf over the torus of Phi for guard {} class {} >= 0", self.phi.guard, self.phi.class)
    }
}

/// Constraints contributed by choosing `cand` for its guard.
struct Contribution {
    equalities: Vec<Affine>,
    inequalities: Vec<Affine>,
    oracles: Vec<Arc<dyn PointOracle>>,
}

fn contribution(a: &Arc<LoopAnalysis>, cand: &Candidate, cfg: &DecisionConfig) -> Contribution {
    let sp = &a.spectrum;
    let d = a.dimension();
    let equalities = higher_equalities(a, cand.guard, cand.class);
    let mut inequalities = Vec::new();
    let mut oracles: Vec<Arc<dyn PointOracle>> = Vec::new();
    let index = cand.phi.index;
    if sp.field_of(cand.j0).degree() == 1 {
        // rational h > 0 on integers: scaled form >= 1
        let cs = a.table.coefficients(sp, cand.guard, index, cand.j0);
        let row: Vec<Rational> = cs[..d].iter().map(|e| e[0].clone()).collect();
        let (r, c) = integral_row(&row, &cs[d][0]);
        inequalities.push((
            r.into_iter().map(Rational::from_integer).collect(),
            Rational::from_integer(c - 1),
        ));
    } else {
        oracles.push(Arc::new(Halfspace {
            a: a.clone(),
            guard: cand.guard,
            index,
            j0: cand.j0,
        }));
    }
    if cand.kind == ClassKind::Mixed {
        let rank = a.dominance.classes[cand.class].modulus_rank;
        oracles.push(Arc::new(TorusInf {
            a: a.clone(),
            phi: cand.phi.clone(),
            torus: a.tori[&rank].clone(),
            nodes: cfg.phi_nodes,
        }));
    }
    Contribution {
        equalities,
        inequalities,
        oracles,
    }
}

pub(crate) struct SearchResult {
    pub records: Vec<RegionRecord>,
    pub backends: Vec<Backend>,
    pub found: Option<(Vec<Candidate>, Vec<BigInt>)>,
    pub undecided: Option<String>,
    pub tuples: u64,
}

struct Dfs<'a> {
    a: &'a Arc<LoopAnalysis>,
    cfg: &'a DecisionConfig,
    cands: Vec<Vec<(Candidate, Contribution)>>,
    chosen: Vec<usize>,
    result: SearchResult,
}

/// Row limit for Fourier–Motzkin elimination.
const RELAXATION_ROWS: usize = 2000;

/// Record limit for the certificate.
const MAX_RECORDS: usize = 4096;

impl Dfs<'_> {
    fn region(&self) -> ConvexRegion {
        let mut r = ConvexRegion::new(self.a.dimension());
        for (g, &k) in self.chosen.iter().enumerate() {
            let c = &self.cands[g][k].1;
            r.equalities.extend(c.equalities.iter().cloned());
            r.inequalities.extend(c.inequalities.iter().cloned());
            r.oracles.extend(c.oracles.iter().cloned());
        }
        r
    }

    fn tuple(&self) -> Vec<(usize, usize)> {
        self.chosen
            .iter()
            .enumerate()
            .map(|(g, &k)| (g, self.cands[g][k].0.class))
            .collect()
    }

    fn record(&mut self, outcome: RegionOutcome) {
        if self.result.records.len() < MAX_RECORDS {
            let classes = self.tuple();
            self.result.records.push(RegionRecord { classes, outcome });
        }
    }

    /// Exact emptiness of the real relaxation for each group of halfspaces
    /// sharing an irrational eigenvalue.
    fn relaxation_empty(&self, region: &ConvexRegion) -> bool {
        let sp = &self.a.spectrum;
        let d = self.a.dimension();
        let mut groups: Vec<(usize, Vec<(Vec<FieldElem>, FieldElem)>)> = Vec::new();
        for (g, &k) in self.chosen.iter().enumerate() {
            let c = &self.cands[g][k].0;
            if sp.field_of(c.j0).degree() == 1 {
                continue;
            }
            let cs = self.a.table.coefficients(sp, c.guard, c.phi.index, c.j0);
            let row = (cs[..d].to_vec(), cs[d].clone());
            match groups.iter_mut().find(|(j, _)| *j == c.j0) {
                Some((_, rows)) => rows.push(row),
                None => groups.push((c.j0, vec![row])),
            }
        }
        groups.iter().any(|(j0, rows)| {
            real_infeasible(
                sp.field_of(*j0),
                &sp.eigenvalues[*j0],
                &region.equalities,
                &region.inequalities,
                rows,
                RELAXATION_ROWS,
            )
        })
    }

    /// Returns `false` to stop the search.
    fn run(&mut self) -> bool {
        let g = self.chosen.len();
        if g == self.cands.len() {
            self.result.tuples += 1;
            let region = self.region();
            if self.relaxation_empty(&region) {
                self.record(RegionOutcome::Empty);
                return true;
            }
            match integer_point(&region, &self.cfg.geometry) {
                IntegerPoint::Found(x) => {
                    let choice = self.chosen.iter().enumerate().map(|(g, &k)| self.cands[g][k].0.clone()).collect();
                    self.record(RegionOutcome::Found(x.clone()));
                    self.result.found = Some((choice, x));
                    return false;
                }
                IntegerPoint::Empty => self.record(RegionOutcome::Empty),
                IntegerPoint::Undecided(why) => {
                    let tuple = self.tuple();
                    if self.result.undecided.is_none() {
                        self.result.undecided = Some(format!("region {tuple:?}: {why}"));
                    }
                    self.record(RegionOutcome::Undecided(why));
                }
            }
            if self.result.tuples >= self.cfg.max_regions {
                if self.result.undecided.is_none() {
                    self.result.undecided = Some("region budget exhausted".into());
                }
                return false;
            }
            return true;
        }
        for k in 0..self.cands[g].len() {
            self.chosen.push(k);
            let region = self.region();
            let feasible = feasible_point(&region.lp_constraints(), region.dimension).is_some();
            if !feasible {
                self.record(RegionOutcome::Pruned);
            } else if !self.run() {
                self.chosen.pop();
                return false;
            }
            self.chosen.pop();
        }
        true
    }
}

pub(crate) fn search(a: &Arc<LoopAnalysis>, cfg: &DecisionConfig) -> SearchResult {
    let m = a.reduced.guards.len();
    let cands: Vec<Vec<(Candidate, Contribution)>> = (0..m)
        .map(|g| {
            candidates(a, g)
                .into_iter()
                .map(|c| {
                    let contrib = contribution(a, &c, cfg);
                    (c, contrib)
                })
                .collect()
        })
        .collect();
    let mut backends: Vec<Backend> = Vec::new();
    for list in &cands {
        for (c, _) in list {
            let b = match c.kind {
                ClassKind::Mixed => a.tori[&a.dominance.classes[c.class].modulus_rank].backend(),
                _ => Backend::FiniteExact,
            };
            if !backends.contains(&b) {
                backends.push(b);
            }
        }
    }
    backends.sort();
    let mut dfs = Dfs {
        a,
        cfg,
        cands,
        chosen: Vec::new(),
        result: SearchResult {
            records: Vec::new(),
            backends,
            found: None,
            undecided: None,
            tuples: 0,
        },
    };
    dfs.run();
    dfs.result
}
