//! Loop programs: data types, the DSL, homogenization and powering.

pub mod parse;
pub mod transform;
pub mod types;

pub use parse::parse_loop;
pub use transform::{homogenize, nondegeneracy_reduction, power_transform};
pub use types::{AffineUpdate, Guard, HomogenizedSystem, LoopProgram};
