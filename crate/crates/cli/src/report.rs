//! Serializable reports for every subcommand.

use std::time::Duration;

use linterm_core::algebra::interval::RealInterval;
use linterm_core::decision::{ClassTorus, RegionOutcome, WitnessKind};
use linterm_core::model::{homogenize, power_transform};
use linterm_core::oracle::{BoxSearchResult, Outcome, SimulationResult};
use linterm_core::spectral::{dominance_structure, spectrum_of, Spectrum};
use linterm_core::torus::{normalize, SearchBudget};
use linterm_core::{LoopProgram, Rational, Verdict};
use num_bigint::BigInt;
use serde::Serialize;

/// Decimal places of every approximation in a report.
pub const DIGITS: u32 = 12;
const ABS_ERROR: &str = "1e-12";

#[derive(Serialize)]
pub struct Decimal {
    pub value: String,
    pub abs_error: &'static str,
}

#[derive(Serialize)]
pub struct Modulus {
    pub approx: Decimal,
    /// Exact rational value when the modulus is rational.
    pub exact: Option<String>,
}

#[derive(Serialize)]
pub struct Eigenvalue {
    pub index: usize,
    pub min_poly: String,
    /// Lowest degree first.
    pub min_poly_coefficients: Vec<String>,
    pub multiplicity: usize,
    pub real: bool,
    pub re: Decimal,
    pub im: Decimal,
    pub modulus: Modulus,
}

#[derive(Serialize)]
pub struct SpectrumReport {
    pub char_poly: String,
    pub zero_multiplicity: usize,
    pub eigenvalues: Vec<Eigenvalue>,
}

#[derive(Serialize)]
pub struct RelationGroup {
    pub eigenvalues: Vec<usize>,
    pub basis: Vec<Vec<i64>>,
    pub rank: usize,
    pub complete: bool,
}

#[derive(Serialize)]
pub struct Reduction {
    pub power: u64,
    pub guard_count: usize,
}

#[derive(Serialize)]
pub struct Witness {
    pub point: Vec<String>,
    pub kind: &'static str,
    pub threshold: Option<u64>,
    pub advanced: Option<u64>,
    pub orbit_base: Option<u64>,
    pub orbit_points: Option<u64>,
}

#[derive(Serialize)]
pub struct Region {
    /// `(guard, class)` pairs.
    pub classes: Vec<(usize, usize)>,
    pub outcome: &'static str,
    pub point: Option<Vec<String>>,
    pub note: Option<String>,
}

#[derive(Serialize)]
pub struct Timings {
    pub decide_ms: f64,
    pub report_ms: f64,
}

#[derive(Serialize)]
pub struct AnalysisReport {
    pub command: &'static str,
    pub file: String,
    pub verdict: &'static str,
    pub witness: Option<Witness>,
    pub reduction: Reduction,
    pub spectrum: SpectrumReport,
    pub relations: Vec<RelationGroup>,
    pub backends: Vec<&'static str>,
    pub regions: Vec<Region>,
    pub diagnostics: Vec<String>,
    pub timings: Timings,
}

#[derive(Serialize)]
pub struct SimulateReport {
    pub command: &'static str,
    pub file: String,
    pub initial: Vec<String>,
    pub steps: u64,
    pub steps_executed: u64,
    pub outcome: &'static str,
    pub terminated_at: Option<u64>,
}

#[derive(Serialize)]
pub struct SpectrumCommandReport {
    pub command: &'static str,
    pub file: String,
    pub dimension: usize,
    pub spectrum: SpectrumReport,
}

#[derive(Serialize)]
pub struct RelationsReport {
    pub command: &'static str,
    pub file: String,
    pub spectrum: SpectrumReport,
    pub groups: Vec<RelationGroup>,
}

#[derive(Serialize)]
pub struct BoxReport {
    pub command: &'static str,
    pub file: String,
    pub bound: u64,
    pub steps: u64,
    pub points_checked: u64,
    pub point_steps: u64,
    pub survivor: Option<Vec<String>>,
}

pub fn strings(v: &[BigInt]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

/// `q` rounded to [`DIGITS`] decimal places.
pub fn decimal(q: &Rational) -> String {
    let scale = BigInt::from(10u64.pow(DIGITS));
    let scaled = q * Rational::from_integer(scale.clone());
    let n = (scaled + Rational::new(1.into(), 2.into())).floor().to_integer();
    let neg = n < BigInt::from(0);
    let mag = if neg { -n } else { n };
    let (int, frac) = (&mag / &scale, &mag % &scale);
    let sign = if neg { "-" } else { "" };
    format!("{sign}{int}.{frac:0>width$}", width = DIGITS as usize)
}

fn tight(mut f: impl FnMut(u32) -> RealInterval) -> Rational {
    let limit = Rational::new(1.into(), BigInt::from(10u64.pow(DIGITS + 1)));
    let mut bits = 64;
    loop {
        let iv = f(bits);
        if iv.width() < limit || bits > 4096 {
            return iv.mid();
        }
        bits *= 2;
    }
}

fn approx(q: Rational) -> Decimal {
    Decimal {
        value: decimal(&q),
        abs_error: ABS_ERROR,
    }
}

fn eigenvalue(sp: &Spectrum, j: usize) -> Eigenvalue {
    let z = &sp.eigenvalues[j];
    let re = tight(|b| z.enclosure(b).re);
    let im = tight(|b| z.enclosure(b).im);
    let sq = z.abs_sq();
    let exact = sq.to_rational().and_then(|_| z.modulus().to_rational());
    let modulus = tight(|b| sq.real_enclosure(2 * b).sqrt(b));
    Eigenvalue {
        index: j,
        min_poly: z.min_poly().to_string(),
        min_poly_coefficients: strings(z.min_poly().coeffs()),
        multiplicity: sp.multiplicities[j],
        real: z.is_real(),
        re: approx(re),
        im: approx(im),
        modulus: Modulus {
            approx: approx(modulus),
            exact: exact.map(|q| q.to_string()),
        },
    }
}

pub fn spectrum_report(sp: &Spectrum) -> SpectrumReport {
    SpectrumReport {
        char_poly: sp.char_poly.to_string(),
        zero_multiplicity: sp.zero_multiplicity,
        eigenvalues: (0..sp.len()).map(|j| eigenvalue(sp, j)).collect(),
    }
}

/// Relation lattices of the modulus groups that hold a non-real eigenvalue.
pub fn relation_groups(sp: &Spectrum, budget: &SearchBudget) -> Vec<RelationGroup> {
    let ds = dominance_structure(sp);
    let norm = normalize(sp);
    let mut ranks: Vec<usize> = ds.modulus_rank.clone();
    ranks.sort_unstable();
    ranks.dedup();
    ranks
        .into_iter()
        .filter_map(|r| {
            let eigen: Vec<usize> = (0..sp.len()).filter(|&j| ds.modulus_rank[j] == r).collect();
            if eigen.iter().all(|&j| sp.eigenvalues[j].is_real()) {
                return None;
            }
            let t = ClassTorus::new(&norm, &eigen, budget);
            Some(RelationGroup {
                eigenvalues: t.eigen,
                rank: t.relations.rank,
                basis: t.relations.basis,
                complete: t.complete,
            })
        })
        .collect()
}

fn witness(v: &Verdict) -> Option<Witness> {
    let point = strings(v.witness.as_ref()?);
    let mut w = Witness {
        point,
        kind: "uncertified",
        threshold: None,
        advanced: None,
        orbit_base: None,
        orbit_points: None,
    };
    match &v.certificate.witness_kind {
        Some(k @ WitnessKind::Threshold { threshold, advanced }) => {
            w.kind = k.name();
            w.threshold = Some(*threshold);
            w.advanced = Some(*advanced);
        }
        Some(
            k @ WitnessKind::OrbitHull {
                base,
                n_used,
                threshold,
                advanced,
                ..
            },
        ) => {
            w.kind = k.name();
            w.threshold = Some(*threshold);
            w.advanced = Some(*advanced);
            w.orbit_base = Some(*base);
            w.orbit_points = Some(*n_used);
        }
        Some(WitnessKind::Uncertified) => {}
        None => w.kind = "trivial",
    }
    Some(w)
}

fn region(r: &linterm_core::decision::RegionRecord) -> Region {
    let (outcome, point, note) = match &r.outcome {
        RegionOutcome::Pruned => ("pruned", None, None),
        RegionOutcome::Empty => ("empty", None, None),
        RegionOutcome::Found(x) => ("found", Some(strings(x)), None),
        RegionOutcome::Undecided(s) => ("undecided", None, Some(s.clone())),
    };
    Region {
        classes: r.classes.clone(),
        outcome,
        point,
        note,
    }
}

pub fn analysis_report(file: &str, p: &LoopProgram, v: &Verdict, decide_time: Duration, budget: &SearchBudget) -> AnalysisReport {
    let start = std::time::Instant::now();
    let power = v.certificate.power.max(1);
    let sp = spectrum_of(&homogenize(&power_transform(p, power)));
    let spectrum = spectrum_report(&sp);
    let relations = if v.certificate.relations.is_empty() {
        relation_groups(&sp, budget)
    } else {
        v.certificate
            .relations
            .iter()
            .map(|r| RelationGroup {
                eigenvalues: r.eigen.clone(),
                rank: r.basis.len(),
                basis: r.basis.clone(),
                complete: r.complete,
            })
            .collect()
    };
    let mut backends: Vec<&'static str> = v.certificate.backends.iter().map(|b| b.name()).collect();
    backends.sort_unstable();
    backends.dedup();
    AnalysisReport {
        command: "analyze",
        file: file.to_string(),
        verdict: v.status.name(),
        witness: witness(v),
        reduction: Reduction {
            power: v.certificate.power,
            guard_count: v.certificate.guards.len(),
        },
        spectrum,
        relations,
        backends,
        regions: v.certificate.regions.iter().map(region).collect(),
        diagnostics: v.diagnostics.clone(),
        timings: Timings {
            decide_ms: millis(decide_time),
            report_ms: millis(start.elapsed()),
        },
    }
}

fn millis(d: Duration) -> f64 {
    (d.as_secs_f64() * 1e6).round() / 1e3
}

pub fn simulate_report(file: &str, r: &SimulationResult, steps: u64) -> SimulateReport {
    let (outcome, at) = match r.outcome {
        Outcome::Terminated { step } => ("terminated", Some(step)),
        Outcome::Survived => ("survived", None),
    };
    SimulateReport {
        command: "simulate",
        file: file.to_string(),
        initial: strings(&r.initial),
        steps,
        steps_executed: r.steps_executed,
        outcome,
        terminated_at: at,
    }
}

pub fn box_report(file: &str, r: &BoxSearchResult, bound: u64, steps: u64) -> BoxReport {
    BoxReport {
        command: "box",
        file: file.to_string(),
        bound,
        steps,
        points_checked: r.points_checked,
        point_steps: r.point_steps,
        survivor: r.survivor.as_deref().map(strings),
    }
}
