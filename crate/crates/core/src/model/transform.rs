use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::types::{AffineUpdate, HomogenizedSystem, LoopProgram};
use crate::algebra::AlgebraicNumber;
use crate::error::{Error, Result};
use crate::spectral::spectrum_of;

/// Default cap on the power used by [`nondegeneracy_reduction`].
pub const DEFAULT_POWER_CAP: u64 = 1 << 20;

pub fn homogenize(p: &LoopProgram) -> HomogenizedSystem {
    let d = p.dimension;
    let mut matrix = Vec::with_capacity(d + 1);
    for i in 0..d {
        let mut row = p.update.matrix[i].clone();
        row.push(p.update.offset[i].clone());
        matrix.push(row);
    }
    let mut last = vec![BigInt::zero(); d + 1];
    last[d] = BigInt::one();
    matrix.push(last);
    let guard_rows = p
        .guards
        .iter()
        .map(|g| {
            let mut r = g.normal.clone();
            r.push(g.constant.clone());
            r
        })
        .collect();
    HomogenizedSystem { matrix, guard_rows }
}

/// The loop with update `f^L` and guards `g_j ∘ f^i` for `0 <= i < L`,
/// ordered by `i` and then by guard.
pub fn power_transform(p: &LoopProgram, l: u64) -> LoopProgram {
    assert!(l >= 1, "power must be positive");
    if l == 1 {
        return p.clone();
    }
    let mut guards = Vec::with_capacity(p.guards.len() * l as usize);
    let mut fi = AffineUpdate::identity(p.dimension);
    for _ in 0..l {
        guards.extend(p.guards.iter().map(|g| g.precompose(&fi)));
        fi = p.update.compose(&fi);
    }
    LoopProgram {
        dimension: p.dimension,
        guards,
        update: fi,
        var_names: p.var_names.clone(),
    }
}

/// Orders of the roots of unity among quotients of distinct eigenvalues.
pub fn root_of_unity_quotient_orders(eigenvalues: &[AlgebraicNumber]) -> Vec<u64> {
    let mut orders = Vec::new();
    for (a, la) in eigenvalues.iter().enumerate() {
        for lb in eigenvalues.iter().skip(a + 1) {
            if la.compare_modulus(lb) != std::cmp::Ordering::Equal {
                continue;
            }
            let q = la.div(lb).expect("eigenvalues are nonzero");
            if let Some(n) = q.is_root_of_unity() {
                orders.push(n);
            }
        }
    }
    orders
}

/// Power the loop so that no quotient of distinct eigenvalues of the
/// homogenized update is a root of unity.
pub fn nondegeneracy_reduction(p: &LoopProgram) -> Result<(LoopProgram, u64)> {
    nondegeneracy_reduction_capped(p, DEFAULT_POWER_CAP)
}

pub fn nondegeneracy_reduction_capped(p: &LoopProgram, cap: u64) -> Result<(LoopProgram, u64)> {
    let sp = spectrum_of(&homogenize(p));
    let l = root_of_unity_quotient_orders(&sp.eigenvalues)
        .into_iter()
        .fold(1u64, |acc, n| acc.lcm(&n));
    if l > cap {
        return Err(Error::PowerCap { required: l, cap });
    }
    Ok((power_transform(p, l), l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse::parse_loop;
    use crate::model::types::Guard;

    #[test]
    fn homogenize_blocks() {
        let p = parse_loop("vars x; while x > 0 do x := x - 1 end").unwrap();
        let h = homogenize(&p);
        let m: Vec<Vec<i64>> = h
            .matrix
            .iter()
            .map(|r| r.iter().map(|v| i64::try_from(v).unwrap()).collect())
            .collect();
        assert_eq!(m, vec![vec![1, -1], vec![0, 1]]);
        assert_eq!(h.guard_rows, vec![vec![BigInt::from(1), BigInt::from(0)]]);
    }

    #[test]
    fn power_of_negation() {
        let p = parse_loop("vars x; while x > 0 do x := -x end").unwrap();
        let q = power_transform(&p, 2);
        assert_eq!(q.guards, vec![Guard::from_i64(&[1], 0), Guard::from_i64(&[-1], 0)]);
        assert_eq!(q.update, AffineUpdate::identity(1));
    }

    #[test]
    fn power_of_increment() {
        let p = parse_loop("vars x; while x > 0 do x := x + 1 end").unwrap();
        let q = power_transform(&p, 3);
        assert_eq!(
            q.guards,
            vec![
                Guard::from_i64(&[1], 0),
                Guard::from_i64(&[1], 1),
                Guard::from_i64(&[1], 2)
            ]
        );
        assert_eq!(q.update.offset, vec![BigInt::from(3)]);
        assert_eq!(power_transform(&p, 1), p);
    }

    #[test]
    fn reduction_powers() {
        let neg = parse_loop("vars x; while x > 0 do x := -x end").unwrap();
        assert_eq!(nondegeneracy_reduction(&neg).unwrap().1, 2);
        let down = parse_loop("vars x; while x > 0 do x := x - 1 end").unwrap();
        assert_eq!(nondegeneracy_reduction(&down).unwrap().1, 1);
        let rot = parse_loop("vars x, y; while x > 0 do x := x - y; y := x + y end").unwrap();
        assert_eq!(nondegeneracy_reduction(&rot).unwrap().1, 4);
    }
}
