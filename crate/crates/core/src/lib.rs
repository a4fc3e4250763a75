//! Termination analysis for linear integer loops.

pub mod algebra;
pub mod decision;
pub mod error;
pub mod geometry;
pub mod lattice;
pub mod model;
pub mod oracle;
pub mod spectral;
pub mod torus;

pub use algebra::{AlgebraicNumber, IntPolynomial, Rational};
pub use error::{Error, ParseError, Result};
pub use model::{parse_loop, AffineUpdate, Guard, HomogenizedSystem, LoopProgram};
pub use decision::{decide, decide_with, Certificate, DecisionConfig, Status, Verdict};
pub use oracle::{box_search, cross_validate, load_corpus, simulate, CorpusCase, CrossConfig, CrossReport, SimulationResult};
