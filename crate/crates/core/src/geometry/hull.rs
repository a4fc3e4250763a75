//! Affine hulls and integer points in the relative interior of orbit hulls.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::lp::{lp_optimize, LinearConstraint, LpResult, Relation};
use super::region::integral_row;
use crate::algebra::matrix::{null_space, row_echelon};
use crate::algebra::Rational;
use crate::lattice::integer_kernel;
use crate::model::LoopProgram;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineHull {
    pub base: Vec<Rational>,
    /// Row-reduced basis of the direction space.
    pub directions: Vec<Vec<Rational>>,
}

impl AffineHull {
    pub fn dimension(&self) -> usize {
        self.directions.len()
    }
}

pub fn affine_hull(points: &[Vec<Rational>]) -> Option<AffineHull> {
    let base = points.first()?.clone();
    let diffs: Vec<Vec<Rational>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(&base).map(|(a, b)| a - b).collect())
        .collect();
    Some(AffineHull {
        directions: row_echelon(&diffs),
        base,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitHullPoint {
    pub point: Vec<BigInt>,
    /// Index of the last orbit point in the hull `conv{f^d(z), …, f^n(z)}`.
    pub n_used: u64,
    /// Strictly positive convex weights expressing `point` over the hull.
    pub weights: Vec<Rational>,
}

fn to_q(v: &[BigInt]) -> Vec<Rational> {
    v.iter().map(|x| Rational::from_integer(x.clone())).collect()
}

/// Maximal `τ` with `point = Σ α_i P_i`, `Σ α_i = 1`, `α_i >= τ`.
fn interior_weights(points: &[Vec<Rational>], point: &[Rational]) -> Option<Vec<Rational>> {
    let k = points.len();
    let d = point.len();
    let nv = k + 1;
    let mut cs = Vec::new();
    for i in 0..k {
        let mut a = vec![Rational::zero(); nv];
        a[i] = Rational::one();
        a[k] = -Rational::one();
        cs.push(LinearConstraint::new(a, Relation::Ge, Rational::zero()));
    }
    let mut sum = vec![Rational::one(); nv];
    sum[k] = Rational::zero();
    cs.push(LinearConstraint::new(sum, Relation::Eq, Rational::one()));
    for c in 0..d {
        let mut a: Vec<Rational> = points.iter().map(|p| p[c].clone()).collect();
        a.push(Rational::zero());
        cs.push(LinearConstraint::new(a, Relation::Eq, point[c].clone()));
    }
    let mut cap = vec![Rational::zero(); nv];
    cap[k] = Rational::one();
    cs.push(LinearConstraint::new(cap.clone(), Relation::Le, Rational::one()));
    match lp_optimize(&cap, &cs, nv) {
        LpResult::Optimal { value, point: sol } if value.is_positive() => Some(sol[..k].to_vec()),
        _ => None,
    }
}

/// Integer point in the relative interior of `conv{f^d(z), …, f^n(z)}` for
/// the least `n <= horizon` admitting one.
pub fn orbit_hull_integer_point(p: &LoopProgram, z: &[BigInt], horizon: u64) -> Option<OrbitHullPoint> {
    let d = p.dimension;
    let mut x = z.to_vec();
    for _ in 0..d {
        x = p.step(&x);
    }
    let mut orbit = vec![x.clone()];
    for _ in 0..=d {
        x = p.step(&x);
        orbit.push(x.clone());
    }
    let full = affine_hull(&orbit.iter().map(|v| to_q(v)).collect::<Vec<_>>())?;
    let d0 = full.dimension();
    // integer points of the hull's direction space
    let normals = null_space(&full.directions, d);
    let normal_rows: Vec<Vec<BigInt>> = normals.iter().map(|n| integral_row(n, &Rational::zero()).0).collect();
    let lattice: Vec<Vec<BigInt>> = if normal_rows.is_empty() {
        (0..d)
            .map(|i| (0..d).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect()
    } else {
        integer_kernel(&normal_rows, d)
    };
    let start = d as u64;
    let mut n = start + d0 as u64;
    while orbit.len() < (n - start + 1) as usize {
        x = p.step(&x);
        orbit.push(x.clone());
    }
    while n <= horizon {
        let pts: Vec<Vec<Rational>> = orbit[..=(n - start) as usize].iter().map(|v| to_q(v)).collect();
        let hull = affine_hull(&pts)?;
        if hull.dimension() == d0 {
            if let Some((point, weights)) = interior_candidate(&pts, &lattice, &orbit[0]) {
                return Some(OrbitHullPoint {
                    point,
                    n_used: n,
                    weights,
                });
            }
        }
        n += 1;
        if orbit.len() < (n - start + 1) as usize {
            x = p.step(&x);
            orbit.push(x.clone());
        }
    }
    None
}

fn interior_candidate(
    pts: &[Vec<Rational>],
    lattice: &[Vec<BigInt>],
    origin: &[BigInt],
) -> Option<(Vec<BigInt>, Vec<Rational>)> {
    let d = origin.len();
    let k = lattice.len();
    let count = Rational::from_integer(BigInt::from(pts.len()));
    let bary: Vec<Rational> = (0..d)
        .map(|c| pts.iter().map(|p| p[c].clone()).sum::<Rational>() / &count)
        .collect();
    // lattice coordinates of the barycenter
    let mut sys: Vec<Vec<Rational>> = (0..d)
        .map(|r| {
            let mut row: Vec<Rational> = lattice.iter().map(|b| Rational::from_integer(b[r].clone())).collect();
            row.push(Rational::from_integer(origin[r].clone()) - &bary[r]);
            row
        })
        .collect();
    sys.retain(|row| row.iter().any(|x| !x.is_zero()));
    let coords: Vec<Rational> = if k == 0 {
        Vec::new()
    } else {
        let ns = null_space(&sys, k + 1);
        let v = ns.into_iter().find(|v| !v[k].is_zero())?;
        v[..k].iter().map(|x| x / &v[k]).collect()
    };
    let mut cands: Vec<Vec<BigInt>> = Vec::new();
    let base: Vec<BigInt> = coords.iter().map(|c| c.round().to_integer()).collect();
    cands.push(base.clone());
    if k <= 10 {
        for mask in 0u32..(1 << k) {
            let c: Vec<BigInt> = coords
                .iter()
                .enumerate()
                .map(|(i, x)| if mask >> i & 1 == 1 { x.ceil().to_integer() } else { x.floor().to_integer() })
                .collect();
            if !cands.contains(&c) {
                cands.push(c);
            }
        }
    }
    for c in cands {
        let point: Vec<BigInt> = (0..d)
            .map(|r| &origin[r] + lattice.iter().zip(&c).map(|(b, ci)| &b[r] * ci).sum::<BigInt>())
            .collect();
        if let Some(w) = interior_weights(pts, &to_q(&point)) {
            return Some((point, w));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::to_big;

    #[test]
    fn counter_hull() {
        let p = LoopProgram::from_i64(&[&[1]], &[1], &[(&[1], 0)]).unwrap();
        let r = orbit_hull_integer_point(&p, &to_big(&[1]), 64).unwrap();
        assert_eq!(r.point, to_big(&[3]));
        assert_eq!(r.n_used, 3);
        assert!(r.weights.iter().all(|w| w.is_positive()));
    }

    #[test]
    fn collinear_orbit() {
        let p = LoopProgram::from_i64(&[&[1, 1], &[0, 1]], &[0, 0], &[(&[1, 0], 0)]).unwrap();
        let r = orbit_hull_integer_point(&p, &to_big(&[1, 1]), 64).unwrap();
        assert_eq!(r.point, to_big(&[4, 1]));
        assert_eq!(r.n_used, 4);
    }

    #[test]
    fn fixed_point_is_its_own_hull() {
        let p = LoopProgram::from_i64(&[&[1, 0], &[0, 1]], &[0, 0], &[(&[1, 0], 0)]).unwrap();
        let r = orbit_hull_integer_point(&p, &to_big(&[2, 5]), 64).unwrap();
        assert_eq!(r.point, to_big(&[2, 5]));
        assert_eq!(r.n_used, 2);
    }

    #[test]
    fn two_dimensional_hull() {
        // rotation by 90 degrees with doubling: the hull is full-dimensional
        let p = LoopProgram::from_i64(&[&[0, -2], &[2, 0]], &[0, 0], &[(&[1, 0], 0)]).unwrap();
        let r = orbit_hull_integer_point(&p, &to_big(&[1, 0]), 64).unwrap();
        assert_eq!(r.weights.len() as u64, r.n_used - 2 + 1);
        assert!(r.weights.iter().all(|w| w.is_positive()));
    }
}
