use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::matrix::IntMatrix;
use crate::error::{Error, Result};

/// `f(x) = A x + a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineUpdate {
    pub matrix: Vec<Vec<BigInt>>,
    pub offset: Vec<BigInt>,
}

/// `g(x) = b^T x + c`, read as the condition `g(x) > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Guard {
    pub normal: Vec<BigInt>,
    pub constant: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LoopProgram {
    pub dimension: usize,
    pub guards: Vec<Guard>,
    pub update: AffineUpdate,
    pub var_names: Vec<String>,
}

/// Homogenized form: state `(x, 1)` evolves by `[[A, a], [0, 1]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogenizedSystem {
    pub matrix: IntMatrix,
    pub guard_rows: Vec<Vec<BigInt>>,
}

impl AffineUpdate {
    pub fn new(matrix: Vec<Vec<BigInt>>, offset: Vec<BigInt>) -> Result<Self> {
        let d = matrix.len();
        if matrix.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidProgram("update matrix is not square".into()));
        }
        if offset.len() != d {
            return Err(Error::InvalidProgram(
                "offset length differs from matrix dimension".into(),
            ));
        }
        Ok(Self { matrix, offset })
    }

    pub fn identity(d: usize) -> Self {
        let matrix = (0..d)
            .map(|i| (0..d).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        Self {
            matrix,
            offset: vec![BigInt::zero(); d],
        }
    }

    pub fn dimension(&self) -> usize {
        self.matrix.len()
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.matrix
            .iter()
            .zip(&self.offset)
            .map(|(row, a)| row.iter().zip(x).map(|(c, v)| c * v).sum::<BigInt>() + a)
            .collect()
    }

    /// `self ∘ inner`, i.e. `x ↦ self(inner(x))`.
    pub fn compose(&self, inner: &Self) -> Self {
        let d = self.dimension();
        let matrix = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| (0..d).map(|k| &self.matrix[i][k] * &inner.matrix[k][j]).sum())
                    .collect()
            })
            .collect();
        let offset = self.apply(&inner.offset);
        Self { matrix, offset }
    }
}

impl Guard {
    pub fn new(normal: Vec<BigInt>, constant: BigInt) -> Self {
        Self { normal, constant }
    }

    pub fn from_i64(normal: &[i64], constant: i64) -> Self {
        Self {
            normal: normal.iter().map(|&v| v.into()).collect(),
            constant: constant.into(),
        }
    }

    pub fn value(&self, x: &[BigInt]) -> BigInt {
        self.normal.iter().zip(x).map(|(b, v)| b * v).sum::<BigInt>() + &self.constant
    }

    pub fn holds(&self, x: &[BigInt]) -> bool {
        self.value(x) > BigInt::zero()
    }

    /// `g ∘ f`.
    pub fn precompose(&self, f: &AffineUpdate) -> Self {
        let d = f.dimension();
        let normal = (0..d)
            .map(|j| (0..d).map(|i| &self.normal[i] * &f.matrix[i][j]).sum())
            .collect();
        let constant = self.value(&f.offset);
        Self { normal, constant }
    }

    pub fn is_constant(&self) -> bool {
        self.normal.iter().all(|c| c.is_zero())
    }
}

impl LoopProgram {
    pub fn new(guards: Vec<Guard>, update: AffineUpdate, var_names: Vec<String>) -> Result<Self> {
        let dimension = update.dimension();
        if dimension == 0 {
            return Err(Error::InvalidProgram("a loop needs at least one variable".into()));
        }
        if guards.is_empty() {
            return Err(Error::InvalidProgram("a loop needs at least one guard".into()));
        }
        if guards.iter().any(|g| g.normal.len() != dimension) {
            return Err(Error::InvalidProgram("guard dimension differs from update".into()));
        }
        if var_names.len() != dimension {
            return Err(Error::InvalidProgram("variable count differs from update".into()));
        }
        Ok(Self {
            dimension,
            guards,
            update,
            var_names,
        })
    }

    /// Build from small integer data with default variable names.
    pub fn from_i64(matrix: &[&[i64]], offset: &[i64], guards: &[(&[i64], i64)]) -> Result<Self> {
        let m = matrix
            .iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        let a = offset.iter().map(|&v| BigInt::from(v)).collect();
        let update = AffineUpdate::new(m, a)?;
        let guards = guards.iter().map(|(n, c)| Guard::from_i64(n, *c)).collect();
        let names = default_names(offset.len());
        Self::new(guards, update, names)
    }

    pub fn guard_count(&self) -> usize {
        self.guards.len()
    }

    pub fn step(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.update.apply(x)
    }

    pub fn guards_hold(&self, x: &[BigInt]) -> bool {
        self.guards.iter().all(|g| g.holds(x))
    }

    pub fn check_arity(&self, x: &[BigInt]) -> Result<()> {
        if x.len() != self.dimension {
            return Err(Error::ArityMismatch {
                expected: self.dimension,
                got: x.len(),
            });
        }
        Ok(())
    }
}

pub fn default_names(d: usize) -> Vec<String> {
    const BASE: [&str; 4] = ["x", "y", "z", "w"];
    if d <= BASE.len() {
        BASE[..d].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=d).map(|i| format!("x{i}")).collect()
    }
}
