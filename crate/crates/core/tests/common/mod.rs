#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use linterm_core::decision::{DecisionConfig, LoopAnalysis, Prepared};
use linterm_core::model::transform::nondegeneracy_reduction;
use linterm_core::oracle::{load_corpus, CorpusCase};
use linterm_core::LoopProgram;
use num_bigint::BigInt;

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

pub fn corpus() -> Vec<CorpusCase> {
    load_corpus(&corpus_dir()).expect("corpus loads")
}

/// Analysis of the non-degenerate reduction with normalized guards, `None`
/// when the guards are trivial.
pub fn analysis(p: &LoopProgram) -> Option<Arc<LoopAnalysis>> {
    let cfg = DecisionConfig::default();
    let (reduced, power) = nondegeneracy_reduction(p).expect("reduction");
    match linterm_core::decision::normalize_guards(&reduced) {
        Prepared::Loop(r) => Some(Arc::new(LoopAnalysis::of_reduced(p, r, power, &cfg))),
        _ => None,
    }
}

/// `{-1, 0, 1}^d`.
pub fn probe_grid(d: usize) -> Vec<Vec<BigInt>> {
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|v| {
                (-1..=1).map(move |c| {
                    let mut w = v.clone();
                    w.push(BigInt::from(c));
                    w
                })
            })
            .collect();
    }
    out
}
