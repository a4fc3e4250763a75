//! The decision procedure: witness regions per tuple of dominant classes,
//! integer feasibility and witness certification.

pub mod phi;
pub mod regions;
mod relax;
pub mod witness;

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::algebra::Rational;
use crate::error::{Error, Result};
use crate::geometry::GeometryBudget;
use crate::lattice::gcd_all;
use crate::model::transform::{homogenize, nondegeneracy_reduction_capped, DEFAULT_POWER_CAP};
use crate::model::{Guard, HomogenizedSystem, LoopProgram};
use crate::spectral::{coefficient_table, dominance_structure, spectrum_of, CoefficientTable, DominanceStructure, Spectrum};
use crate::torus::{normalize, NormalizedSpectrum, SearchBudget};

pub use phi::{inf_of_values, phi_inf, Backend, ClassTorus, PhiForm, PhiInf, SignClaim};
pub use regions::{candidates, ClassKind, Candidate, RegionOutcome, RegionRecord};
pub use witness::WitnessKind;

#[derive(Clone, Debug)]
pub struct DecisionConfig {
    pub power_cap: u64,
    pub relations: SearchBudget,
    pub geometry: GeometryBudget,
    /// Branch-and-bound nodes per infimum computation.
    pub phi_nodes: u64,
    /// Upper limit on the number of class tuples examined.
    pub max_regions: u64,
    /// Largest orbit index used by the orbit-hull search.
    pub hull_horizon: u64,
    /// Cap on the eventual-positivity threshold.
    pub threshold_cap: u64,
    /// Turn every UNKNOWN into an error.
    pub strict: bool,
}

impl Default for DecisionConfig {
    fn default() -> Self {
        Self {
            power_cap: DEFAULT_POWER_CAP,
            relations: SearchBudget::default(),
            geometry: GeometryBudget::default(),
            phi_nodes: 200_000,
            max_regions: 100_000,
            hull_horizon: 256,
            threshold_cap: 1_000_000,
            strict: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Terminating,
    NonTerminating,
    Unknown,
}

impl Status {
    pub fn name(&self) -> &'static str {
        match self {
            Status::Terminating => "TERMINATING",
            Status::NonTerminating => "NONTERMINATING",
            Status::Unknown => "UNKNOWN",
        }
    }
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Relation data of one modulus group.
#[derive(Clone, Debug)]
pub struct RelationRecord {
    pub eigen: Vec<usize>,
    pub basis: Vec<Vec<i64>>,
    pub complete: bool,
}

#[derive(Clone, Debug, Default)]
pub struct Certificate {
    /// Power `L` of the non-degeneracy reduction.
    pub power: u64,
    /// Guards of the reduced loop after normalization.
    pub guards: Vec<Guard>,
    /// Dominant class per guard for the region that produced the witness.
    pub class_choice: Option<Vec<Candidate>>,
    pub relations: Vec<RelationRecord>,
    pub backends: Vec<Backend>,
    pub regions: Vec<RegionRecord>,
    /// Integer point of the witness region.
    pub region_point: Option<Vec<BigInt>>,
    pub witness_kind: Option<WitnessKind>,
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub status: Status,
    pub witness: Option<Vec<BigInt>>,
    pub certificate: Certificate,
    pub diagnostics: Vec<String>,
}

/// Everything computed about the reduced loop.
#[derive(Clone, Debug)]
pub struct LoopAnalysis {
    pub original: LoopProgram,
    pub reduced: LoopProgram,
    pub power: u64,
    pub homogenized: HomogenizedSystem,
    pub spectrum: Spectrum,
    pub dominance: DominanceStructure,
    pub table: CoefficientTable,
    pub normalized: NormalizedSpectrum,
    /// Torus data per modulus rank, for groups holding complex eigenvalues.
    pub tori: HashMap<usize, Arc<ClassTorus>>,
}

/// Outcome of normalizing guards before the spectral analysis.
pub enum Prepared {
    /// Some guard is a nonpositive constant.
    Unsatisfiable(Guard),
    /// Every guard is a positive constant.
    AlwaysTrue,
    Loop(LoopProgram),
}

/// Divide guards by their content, drop positive constants and duplicates.
pub fn normalize_guards(p: &LoopProgram) -> Prepared {
    let mut out: Vec<Guard> = Vec::new();
    for g in &p.guards {
        if g.is_constant() {
            if !g.constant.is_positive() {
                return Prepared::Unsatisfiable(g.clone());
            }
            continue;
        }
        let mut all = g.normal.clone();
        all.push(g.constant.clone());
        let c = gcd_all(&all);
        let ng = Guard::new(
            g.normal.iter().map(|v| v.div_floor(&c)).collect(),
            g.constant.div_floor(&c),
        );
        if !out.contains(&ng) {
            out.push(ng);
        }
    }
    if out.is_empty() {
        return Prepared::AlwaysTrue;
    }
    Prepared::Loop(LoopProgram {
        guards: out,
        ..p.clone()
    })
}

impl LoopAnalysis {
    /// Spectral and relation analysis of an already reduced loop.
    pub fn of_reduced(original: &LoopProgram, reduced: LoopProgram, power: u64, cfg: &DecisionConfig) -> Self {
        let homogenized = homogenize(&reduced);
        let spectrum = spectrum_of(&homogenized);
        let dominance = dominance_structure(&spectrum);
        let table = coefficient_table(&homogenized, &spectrum);
        let normalized = normalize(&spectrum);
        let mut tori = HashMap::new();
        let mut ranks: Vec<usize> = dominance.classes.iter().map(|c| c.modulus_rank).collect();
        ranks.dedup();
        for r in ranks {
            let c = dominance.classes.iter().find(|c| c.modulus_rank == r).unwrap();
            if c.eigen.iter().any(|&j| !spectrum.eigenvalues[j].is_real()) {
                tori.insert(r, Arc::new(ClassTorus::new(&normalized, &c.eigen, &cfg.relations)));
            }
        }
        Self {
            original: original.clone(),
            reduced,
            power,
            homogenized,
            spectrum,
            dominance,
            table,
            normalized,
            tori,
        }
    }

    pub fn dimension(&self) -> usize {
        self.reduced.dimension
    }

    /// `≈`-class of the `≼`-maximal indices with `h^{(g)}_{i,j}(x) != 0`.
    pub fn dominant_class(&self, guard: usize, x: &[Rational]) -> Option<usize> {
        dominant_class(&self.table, &self.spectrum, &self.dominance, guard, x)
    }
}

pub fn dominant_class(
    table: &CoefficientTable,
    sp: &Spectrum,
    ds: &DominanceStructure,
    guard: usize,
    x: &[Rational],
) -> Option<usize> {
    (0..ds.classes.len()).rev().find(|&c| {
        let cl = &ds.classes[c];
        cl.eigen
            .iter()
            .any(|&j| cl.index < sp.multiplicities[j] && !table.is_zero_at(sp, guard, cl.index, j, x))
    })
}

fn trivial(status: Status, power: u64, witness: Option<Vec<BigInt>>, note: String) -> Verdict {
    Verdict {
        status,
        witness,
        certificate: Certificate {
            power,
            ..Default::default()
        },
        diagnostics: vec![note],
    }
}

fn finish(v: Verdict, cfg: &DecisionConfig) -> Result<Verdict> {
    if cfg.strict && v.status == Status::Unknown {
        return Err(Error::Budget(v.diagnostics.join("; ")));
    }
    Ok(v)
}

/// Decide termination over the integers.
pub fn decide(p: &LoopProgram) -> Result<Verdict> {
    decide_with(p, &DecisionConfig::default())
}

pub fn decide_with(p: &LoopProgram, cfg: &DecisionConfig) -> Result<Verdict> {
    let (reduced, power) = match nondegeneracy_reduction_capped(p, cfg.power_cap) {
        Ok(r) => r,
        Err(e @ Error::PowerCap { .. }) => {
            let v = trivial(Status::Unknown, 0, None, format!("non-degeneracy reduction: {e}"));
            return finish(v, cfg);
        }
        Err(e) => return Err(e),
    };
    let reduced = match normalize_guards(&reduced) {
        Prepared::Unsatisfiable(g) => {
            let note = format!("guard with constant value {} never holds", g.constant);
            return finish(trivial(Status::Terminating, power, None, note), cfg);
        }
        Prepared::AlwaysTrue => {
            let w = vec![BigInt::zero(); p.dimension];
            let note = "every guard is a positive constant".to_string();
            return finish(trivial(Status::NonTerminating, power, Some(w), note), cfg);
        }
        Prepared::Loop(r) => r,
    };
    let analysis = Arc::new(LoopAnalysis::of_reduced(p, reduced, power, cfg));
    let v = decide_analysis(&analysis, cfg);
    finish(v, cfg)
}

/// Region enumeration and witness certification on a prepared analysis.
pub fn decide_analysis(a: &Arc<LoopAnalysis>, cfg: &DecisionConfig) -> Verdict {
    let mut cert = Certificate {
        power: a.power,
        guards: a.reduced.guards.clone(),
        ..Default::default()
    };
    let mut ranks: Vec<&usize> = a.tori.keys().collect();
    ranks.sort();
    for r in ranks {
        let t = &a.tori[r];
        cert.relations.push(RelationRecord {
            eigen: t.eigen.clone(),
            basis: t.relations.basis.clone(),
            complete: t.complete,
        });
    }
    let search = regions::search(a, cfg);
    cert.regions = search.records;
    cert.backends = search.backends;
    let mut diagnostics = Vec::new();
    if let Some((choice, x)) = search.found {
        let up = witness::upgrade(a, &choice, &x, cfg);
        diagnostics.extend(up.notes);
        cert.class_choice = Some(choice);
        cert.region_point = Some(x);
        cert.witness_kind = Some(up.kind);
        return Verdict {
            status: Status::NonTerminating,
            witness: Some(up.witness),
            certificate: cert,
            diagnostics,
        };
    }
    if let Some(reason) = search.undecided {
        diagnostics.push(reason);
        return Verdict {
            status: Status::Unknown,
            witness: None,
            certificate: cert,
            diagnostics,
        };
    }
    diagnostics.push(format!("all {} witness regions are free of integer points", search.tuples));
    Verdict {
        status: Status::Terminating,
        witness: None,
        certificate: cert,
        diagnostics,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_loop;

    fn verdict(src: &str) -> Verdict {
        decide(&parse_loop(src).unwrap()).unwrap()
    }

    fn survives(p: &LoopProgram, x: &[BigInt], steps: usize) -> bool {
        let mut cur = x.to_vec();
        for _ in 0..steps {
            if !p.guards_hold(&cur) {
                return false;
            }
            cur = p.step(&cur);
        }
        true
    }

    fn check(src: &str, expected: Status) {
        let v = verdict(src);
        assert_eq!(v.status, expected, "{src}: {:?}", v.diagnostics);
        if expected == Status::NonTerminating {
            let p = parse_loop(src).unwrap();
            let w = v.witness.expect("witness");
            assert!(survives(&p, &w, 2000), "{src}: witness {w:?} fails");
        }
    }

    #[test]
    fn one_dimensional_counters() {
        check("vars x; while x > 0 do x := x + 1 end", Status::NonTerminating);
        check("vars x; while x > 0 do x := x - 1 end", Status::Terminating);
        check("vars x; while x > 0 do x := -x end", Status::Terminating);
        check("vars x; while x > 0 do x := 2*x - 1 end", Status::NonTerminating);
    }

    #[test]
    fn rotation_terminates() {
        check("vars x, y; while x > 0 do x := 3*x - 4*y; y := 4*x + 3*y end", Status::Terminating);
    }

    #[test]
    fn growth_against_rotation() {
        // z grows like 5^n while (x, y) rotates with modulus 5
        check(
            "vars x, y, z; while z - x > 0 do x := 3*x - 4*y; y := 4*x + 3*y; z := 5*z end",
            Status::NonTerminating,
        );
        check(
            "vars x, y, z; while z - x > 0 do x := 3*x - 4*y; y := 4*x + 3*y; z := 6*z end",
            Status::NonTerminating,
        );
        check(
            "vars x, y, z; while z - x > 0 && z < 0 do x := 3*x - 4*y; y := 4*x + 3*y; z := 5*z end",
            Status::Terminating,
        );
    }

    #[test]
    fn fibonacci_growth() {
        check("vars x, y; while x > 0 do x := x + y; y := x end", Status::NonTerminating);
        check("vars x, y; while x > 0 && y > 0 do x := x + y; y := x end", Status::NonTerminating);
    }

    #[test]
    fn dominant_class_examples() {
        let cfg = DecisionConfig::default();
        let p = parse_loop("vars x; while x > 0 do x := x + 1 end").unwrap();
        let a = LoopAnalysis::of_reduced(&p, p.clone(), 1, &cfg);
        let c = a.dominant_class(0, &[Rational::from_integer(5.into())]).unwrap();
        assert_eq!(a.dominance.classes[c].index, 1);
        let p = parse_loop("vars x; while x > 0 do x := 2*x end").unwrap();
        let a = LoopAnalysis::of_reduced(&p, p.clone(), 1, &cfg);
        assert_eq!(a.dominant_class(0, &[Rational::from_integer(0.into())]), None);
        let c = a.dominant_class(0, &[Rational::from_integer(3.into())]).unwrap();
        let j = a.dominance.classes[c].eigen[0];
        assert_eq!(a.spectrum.eigenvalues[j], crate::AlgebraicNumber::from_int(2));
    }
}
