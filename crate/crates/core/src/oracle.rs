//! Ground truth by brute force: exact simulation, box search for surviving
//! initial values and cross-validation of verdicts over a corpus.

use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Deserialize;

use crate::decision::{Status, Verdict};
use crate::error::{Error, Result};
use crate::model::{parse_loop, LoopProgram};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// Some guard fails at the state reached after `step` iterations.
    Terminated { step: u64 },
    Survived,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimulationResult {
    pub initial: Vec<BigInt>,
    pub steps_executed: u64,
    pub outcome: Outcome,
}

impl SimulationResult {
    pub fn survived(&self) -> bool {
        self.outcome == Outcome::Survived
    }
}

struct SmallLoop {
    matrix: Vec<Vec<i64>>,
    offset: Vec<i64>,
    guards: Vec<(Vec<i64>, i64)>,
}

impl SmallLoop {
    fn new(p: &LoopProgram) -> Option<Self> {
        let v = |xs: &[BigInt]| xs.iter().map(|x| x.to_i64()).collect::<Option<Vec<i64>>>();
        Some(Self {
            matrix: p.update.matrix.iter().map(|r| v(r)).collect::<Option<_>>()?,
            offset: v(&p.update.offset)?,
            guards: p
                .guards
                .iter()
                .map(|g| Some((v(&g.normal)?, g.constant.to_i64()?)))
                .collect::<Option<_>>()?,
        })
    }

    fn dot(a: &[i64], x: &[i64], c: i64) -> Option<i64> {
        a.iter().zip(x).try_fold(c, |acc, (u, v)| acc.checked_add(u.checked_mul(*v)?))
    }

    fn holds(&self, x: &[i64]) -> Option<bool> {
        for (n, c) in &self.guards {
            if Self::dot(n, x, *c)? <= 0 {
                return Some(false);
            }
        }
        Some(true)
    }

    fn step(&self, x: &[i64]) -> Option<Vec<i64>> {
        self.matrix
            .iter()
            .zip(&self.offset)
            .map(|(r, a)| Self::dot(r, x, *a))
            .collect()
    }
}

/// Run the loop from `z` for at most `horizon` iterations.
pub fn simulate(p: &LoopProgram, z: &[BigInt], horizon: u64) -> SimulationResult {
    let small = SmallLoop::new(p);
    let mut step = 0u64;
    let mut fast: Option<Vec<i64>> = z.iter().map(|v| v.to_i64()).collect();
    let mut slow: Vec<BigInt> = z.to_vec();
    if let Some(sl) = &small {
        while let Some(x) = fast.as_ref() {
            if step == horizon {
                return SimulationResult {
                    initial: z.to_vec(),
                    steps_executed: step,
                    outcome: Outcome::Survived,
                };
            }
            let Some(ok) = sl.holds(x) else { break };
            if !ok {
                return SimulationResult {
                    initial: z.to_vec(),
                    steps_executed: step,
                    outcome: Outcome::Terminated { step },
                };
            }
            match sl.step(x) {
                Some(next) => {
                    fast = Some(next);
                    step += 1;
                }
                None => break,
            }
        }
        if let Some(x) = fast {
            slow = x.into_iter().map(BigInt::from).collect();
        }
    }
    while step < horizon {
        if !p.guards_hold(&slow) {
            return SimulationResult {
                initial: z.to_vec(),
                steps_executed: step,
                outcome: Outcome::Terminated { step },
            };
        }
        slow = p.step(&slow);
        step += 1;
    }
    SimulationResult {
        initial: z.to_vec(),
        steps_executed: step,
        outcome: Outcome::Survived,
    }
}

/// Default total number of simulated point-steps for a box search.
pub const DEFAULT_POINT_STEP_CAP: u64 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxSearchResult {
    pub survivor: Option<Vec<BigInt>>,
    pub points_checked: u64,
    pub point_steps: u64,
}

fn box_point(index: u64, bound: u64, d: usize) -> Vec<BigInt> {
    let side = 2 * bound + 1;
    let mut out = vec![BigInt::from(0); d];
    let mut rest = index;
    for k in (0..d).rev() {
        out[k] = BigInt::from((rest % side) as i64 - bound as i64);
        rest /= side;
    }
    out
}

/// First point of `[-B, B]^d` in lexicographic order surviving `horizon`
/// iterations. Fails when the simulated point-steps exceed `cap`.
pub fn box_search(p: &LoopProgram, bound: u64, horizon: u64, cap: u64) -> Result<BoxSearchResult> {
    let d = p.dimension;
    let side = 2 * bound + 1;
    let total = (side as u128).checked_pow(d as u32).filter(|t| *t <= u64::MAX as u128).ok_or_else(|| {
        Error::Budget(format!("box of side {side} in dimension {d} is too large"))
    })? as u64;
    // every point costs at least one guard evaluation
    if total > cap {
        return Err(Error::Budget(format!("{total} box points exceed the cap of {cap} point-steps")));
    }
    let chunk = 4096u64;
    let mut steps = 0u64;
    let mut start = 0u64;
    while start < total {
        let end = (start + chunk).min(total);
        let results: Vec<SimulationResult> = (start..end)
            .into_par_iter()
            .map(|i| simulate(p, &box_point(i, bound, d), horizon))
            .collect();
        for (k, r) in results.iter().enumerate() {
            steps += r.steps_executed + 1;
            if r.survived() {
                return Ok(BoxSearchResult {
                    survivor: Some(r.initial.clone()),
                    points_checked: start + k as u64 + 1,
                    point_steps: steps,
                });
            }
        }
        if steps > cap {
            return Err(Error::Budget(format!(
                "box search exceeded {cap} point-steps after {end} of {total} points"
            )));
        }
        start = end;
    }
    Ok(BoxSearchResult {
        survivor: None,
        points_checked: total,
        point_steps: steps,
    })
}

#[derive(Clone, Debug)]
pub struct CorpusCase {
    pub name: String,
    pub source: String,
    pub program: LoopProgram,
    pub expected: Option<Status>,
    pub notes: String,
}

#[derive(Deserialize)]
struct Sidecar {
    expected: Option<String>,
    #[serde(default)]
    notes: String,
}

pub fn parse_status(s: &str) -> Option<Status> {
    match s.to_ascii_uppercase().as_str() {
        "TERMINATING" => Some(Status::Terminating),
        "NONTERMINATING" => Some(Status::NonTerminating),
        "UNKNOWN" => Some(Status::Unknown),
        _ => None,
    }
}

impl CorpusCase {
    pub fn new(name: &str, source: &str, expected: Option<Status>, notes: &str) -> Result<Self> {
        let program = parse_loop(source)?;
        Ok(Self {
            name: name.to_string(),
            source: source.to_string(),
            program,
            expected,
            notes: notes.to_string(),
        })
    }
}

/// Every `*.loop` file of a directory with its optional `*.json` sidecar,
/// sorted by name.
pub fn load_corpus(dir: &Path) -> Result<Vec<CorpusCase>> {
    let io = |e: std::io::Error| Error::InvalidProgram(format!("{}: {e}", dir.display()));
    let mut paths: Vec<_> = fs::read_dir(dir)
        .map_err(io)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "loop"))
        .collect();
    paths.sort();
    let mut out = Vec::new();
    for path in paths {
        let name = path.file_stem().unwrap_or_default().to_string_lossy().to_string();
        let source = fs::read_to_string(&path).map_err(io)?;
        let side = path.with_extension("json");
        let (expected, notes) = if side.exists() {
            let text = fs::read_to_string(&side).map_err(io)?;
            let s: Sidecar = serde_json::from_str(&text)
                .map_err(|e| Error::InvalidProgram(format!("{}: {e}", side.display())))?;
            (s.expected.as_deref().and_then(parse_status), s.notes)
        } else {
            (None, String::new())
        };
        let case = CorpusCase::new(&name, &source, expected, &notes)
            .map_err(|e| Error::InvalidProgram(format!("{}: {e}", path.display())))?;
        out.push(case);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug)]
pub struct CrossConfig {
    pub bound: u64,
    pub horizon: u64,
    pub point_step_cap: u64,
}

impl Default for CrossConfig {
    fn default() -> Self {
        Self {
            bound: 50,
            horizon: 10_000,
            point_step_cap: DEFAULT_POINT_STEP_CAP,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CaseReport {
    pub name: String,
    pub status: Status,
    pub expected: Option<Status>,
    pub witness: Option<Vec<BigInt>>,
    /// Whether the witness survived the horizon.
    pub witness_survives: Option<bool>,
    pub survivor: Option<Vec<BigInt>>,
    /// Set when the box search ran out of budget.
    pub box_note: Option<String>,
    pub contradiction: Option<String>,
    pub expectation_mismatch: bool,
}

#[derive(Clone, Debug, Default)]
pub struct CrossReport {
    pub cases: Vec<CaseReport>,
}

impl CrossReport {
    pub fn contradictions(&self) -> usize {
        self.cases.iter().filter(|c| c.contradiction.is_some()).count()
    }

    pub fn mismatches(&self) -> usize {
        self.cases.iter().filter(|c| c.expectation_mismatch).count()
    }

    pub fn unknown_rate(&self) -> f64 {
        if self.cases.is_empty() {
            return 0.0;
        }
        let u = self.cases.iter().filter(|c| c.status == Status::Unknown).count();
        u as f64 / self.cases.len() as f64
    }
}

/// Largest `b` with `(2b + 1)^d <= points`.
fn fallback_bound(d: usize, points: u64) -> u64 {
    let mut b = 0u64;
    while (2 * (b + 1) + 1).checked_pow(d as u32).is_some_and(|t| t <= points) {
        b += 1;
    }
    b
}

/// Run the analyzer and the box search on every case and flag
/// disagreements.
pub fn cross_validate(
    cases: &[CorpusCase],
    analyzer: impl Fn(&LoopProgram) -> Result<Verdict>,
    cfg: &CrossConfig,
) -> CrossReport {
    let mut report = CrossReport::default();
    for case in cases {
        let (status, witness) = match analyzer(&case.program) {
            Ok(v) => (v.status, v.witness),
            Err(_) => (Status::Unknown, None),
        };
        let witness_survives = witness
            .as_ref()
            .map(|w| simulate(&case.program, w, cfg.horizon).survived());
        let (survivor, box_note) = match box_search(&case.program, cfg.bound, cfg.horizon, cfg.point_step_cap) {
            Ok(r) => (r.survivor, None),
            Err(e) => {
                // retry on the largest box leaving a hundred steps per point
                let b = fallback_bound(case.program.dimension, cfg.point_step_cap / 100).min(cfg.bound);
                match box_search(&case.program, b, cfg.horizon, cfg.point_step_cap) {
                    Ok(r) => (r.survivor, Some(format!("{e}; searched [-{b}, {b}] instead"))),
                    Err(e2) => (None, Some(format!("{e}; {e2}"))),
                }
            }
        };
        let contradiction = match status {
            Status::Terminating if survivor.is_some() => {
                Some(format!("terminating verdict but {:?} survives", survivor.as_ref().unwrap()))
            }
            Status::NonTerminating if witness.is_none() => Some("non-terminating verdict without witness".into()),
            Status::NonTerminating if witness_survives == Some(false) => {
                Some(format!("witness {:?} terminates", witness.as_ref().unwrap()))
            }
            _ => None,
        };
        let expectation_mismatch = case.expected.is_some_and(|e| e != status);
        report.cases.push(CaseReport {
            name: case.name.clone(),
            status,
            expected: case.expected,
            witness,
            witness_survives,
            survivor,
            box_note,
            contradiction,
            expectation_mismatch,
        });
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::to_big;

    #[test]
    fn simulation_examples() {
        let down = parse_loop("vars x; while x > 0 do x := x - 1 end").unwrap();
        let r = simulate(&down, &to_big(&[5]), 100);
        assert_eq!(r.outcome, Outcome::Terminated { step: 5 });
        assert_eq!(simulate(&down, &to_big(&[0]), 100).outcome, Outcome::Terminated { step: 0 });
        let up = parse_loop("vars x; while x > 0 do x := x + 1 end").unwrap();
        assert!(simulate(&up, &to_big(&[1]), 1000).survived());
    }

    #[test]
    fn overflow_falls_back_to_big_integers() {
        let p = parse_loop("vars x; while x > 0 do x := 3*x end").unwrap();
        let r = simulate(&p, &to_big(&[1]), 200);
        assert!(r.survived());
        assert_eq!(r.steps_executed, 200);
        let q = parse_loop("vars x, y; while x > 0 do x := 3*x; y := y - 1 end").unwrap();
        let r = simulate(&q, &to_big(&[i64::MAX / 2, 0]), 10);
        assert!(r.survived());
    }

    #[test]
    fn box_search_examples() {
        let up = parse_loop("vars x; while x > 0 do x := x + 1 end").unwrap();
        let r = box_search(&up, 2, 100, DEFAULT_POINT_STEP_CAP).unwrap();
        assert_eq!(r.survivor, Some(to_big(&[1])));
        let down = parse_loop("vars x; while x > 0 do x := x - 1 end").unwrap();
        assert_eq!(box_search(&down, 50, 10_000, DEFAULT_POINT_STEP_CAP).unwrap().survivor, None);
        let rot = parse_loop("vars x, y; while x > 0 do x := 3*x - 4*y; y := 4*x + 3*y end").unwrap();
        assert_eq!(box_search(&rot, 20, 10_000, DEFAULT_POINT_STEP_CAP).unwrap().survivor, None);
    }
}
