//! Integer points of convex regions given by rational equalities and
//! inequalities plus exact membership oracles.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::lp::{lp_optimize, LinearConstraint, LpResult, Relation};
use crate::algebra::matrix::{null_space, rank};
use crate::algebra::Rational;
use crate::lattice::{column_echelon, gcd_all, solve_integral};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

/// Constraint on integer points not expressible as a rational inequality.
pub trait PointOracle: Send + Sync {
    fn check(&self, x: &[BigInt]) -> Tri;

    /// Behaviour along a recession direction `r`.
    ///
    /// `Some(1)`: `x + N r` satisfies the constraint for all large `N`, from
    /// any start. `Some(s)` with `s <= 0`: moving along `r` never turns a
    /// violating point into a satisfying one. `None`: unknown.
    fn ray_sign(&self, r: &[BigInt]) -> Option<i8>;

    fn describe(&self) -> String;
}

#[derive(Clone, Default)]
pub struct ConvexRegion {
    pub dimension: usize,
    /// `a · x + c = 0`.
    pub equalities: Vec<(Vec<Rational>, Rational)>,
    /// `a · x + c >= 0`.
    pub inequalities: Vec<(Vec<Rational>, Rational)>,
    pub oracles: Vec<Arc<dyn PointOracle>>,
}

impl std::fmt::Debug for ConvexRegion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ConvexRegion")
            .field("dimension", &self.dimension)
            .field("equalities", &self.equalities)
            .field("inequalities", &self.inequalities)
            .field(
                "oracles",
                &self.oracles.iter().map(|o| o.describe()).collect::<Vec<_>>(),
            )
            .finish()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct GeometryBudget {
    /// LP solves during the integer search.
    pub nodes: u64,
    /// Constraint subsets examined during vertex and ray enumeration.
    pub subsets: u64,
    /// Doublings tried when pushing a point along a ray.
    pub ray_doublings: u32,
}

impl Default for GeometryBudget {
    fn default() -> Self {
        Self {
            nodes: 20_000,
            subsets: 200_000,
            ray_doublings: 64,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntegerPoint {
    Found(Vec<BigInt>),
    Empty,
    Undecided(String),
}

impl ConvexRegion {
    pub fn new(dimension: usize) -> Self {
        Self {
            dimension,
            ..Default::default()
        }
    }

    pub fn contains_rational(&self, x: &[Rational]) -> bool {
        self.equalities.iter().all(|(a, c)| dot(a, x) + c == Rational::zero())
            && self.inequalities.iter().all(|(a, c)| dot(a, x) + c >= Rational::zero())
    }

    /// Exact membership of an integer point; `Unknown` only through oracles.
    pub fn contains(&self, x: &[BigInt]) -> Tri {
        let xq: Vec<Rational> = x.iter().map(|v| Rational::from_integer(v.clone())).collect();
        if !self.contains_rational(&xq) {
            return Tri::No;
        }
        let mut out = Tri::Yes;
        for o in &self.oracles {
            match o.check(x) {
                Tri::No => return Tri::No,
                Tri::Unknown => out = Tri::Unknown,
                Tri::Yes => {}
            }
        }
        out
    }

    /// Rational relaxation as LP constraints.
    pub fn lp_constraints(&self) -> Vec<LinearConstraint> {
        let mut out = Vec::new();
        for (a, c) in &self.equalities {
            out.push(LinearConstraint::new(a.clone(), Relation::Eq, -c.clone()));
        }
        for (a, c) in &self.inequalities {
            out.push(LinearConstraint::nonneg(a.clone(), c));
        }
        out
    }
}

fn dot(a: &[Rational], x: &[Rational]) -> Rational {
    a.iter().zip(x).map(|(u, v)| u * v).sum()
}

fn q(v: &BigInt) -> Rational {
    Rational::from_integer(v.clone())
}

/// Scale `(a, c)` by a positive integer so every entry is integral.
pub fn integral_row(a: &[Rational], c: &Rational) -> (Vec<BigInt>, BigInt) {
    let l = a
        .iter()
        .chain(std::iter::once(c))
        .fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let row = a.iter().map(|x| (x * &l).to_integer()).collect();
    (row, (c * &l).to_integer())
}

fn primitive(v: Vec<Rational>) -> Vec<BigInt> {
    let (row, _) = integral_row(&v, &Rational::zero());
    let g = gcd_all(&row);
    if g.is_zero() {
        return row;
    }
    row.into_iter().map(|x| x / &g).collect()
}

struct Reduced {
    /// `x = base + Σ y_k dirs[k]` for `k < r`, with lineality directions after.
    base: Vec<BigInt>,
    dirs: Vec<Vec<BigInt>>,
    r: usize,
    /// `rows · y + consts >= 0` on the first `r` coordinates.
    rows: Vec<Vec<BigInt>>,
    consts: Vec<BigInt>,
}

impl Reduced {
    fn to_x(&self, y: &[BigInt]) -> Vec<BigInt> {
        let mut x = self.base.clone();
        for (yk, d) in y.iter().zip(&self.dirs) {
            if yk.is_zero() {
                continue;
            }
            for (xi, di) in x.iter_mut().zip(d) {
                *xi += yk * di;
            }
        }
        x
    }

    fn dir_x(&self, y: &[BigInt]) -> Vec<BigInt> {
        let n = self.base.len();
        let mut x = vec![BigInt::zero(); n];
        for (yk, d) in y.iter().zip(&self.dirs) {
            for (xi, di) in x.iter_mut().zip(d) {
                *xi += yk * di;
            }
        }
        x
    }

    fn lineality(&self) -> Vec<Vec<BigInt>> {
        self.dirs[self.r..].to_vec()
    }

    fn constraints(&self) -> Vec<LinearConstraint> {
        self.rows
            .iter()
            .zip(&self.consts)
            .map(|(row, c)| LinearConstraint::nonneg(row.iter().map(q).collect(), &q(c)))
            .collect()
    }
}

/// Eliminate equalities and lineality: `None` when no integer point can
/// satisfy the equalities.
fn reduce(region: &ConvexRegion) -> Option<Reduced> {
    let n = region.dimension;
    let (base, kernel) = if region.equalities.is_empty() {
        let id = (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        (vec![BigInt::zero(); n], id)
    } else {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (row, c) in &region.equalities {
            let (r, c) = integral_row(row, c);
            a.push(r);
            b.push(-c);
        }
        solve_integral(&a, &b, n)?
    };
    let k = kernel.len();
    // inequalities in kernel coordinates
    let mut g = Vec::new();
    let mut h = Vec::new();
    for (row, c) in &region.inequalities {
        let coeffs: Vec<Rational> = (0..k)
            .map(|j| row.iter().zip(&kernel[j]).map(|(a, v)| a * q(v)).sum())
            .collect();
        let cst = c + row.iter().zip(&base).map(|(a, v)| a * q(v)).sum::<Rational>();
        let (r, c) = integral_row(&coeffs, &cst);
        g.push(r);
        h.push(c);
    }
    let ce = column_echelon(&g, k);
    let r = ce.rank;
    let dirs: Vec<Vec<BigInt>> = (0..k)
        .map(|col| {
            (0..n)
                .map(|i| (0..k).map(|j| &kernel[j][i] * &ce.v[j][col]).sum())
                .collect()
        })
        .collect();
    let rows = ce.h.iter().map(|row| row[..r].to_vec()).collect();
    Some(Reduced {
        base,
        dirs,
        r,
        rows,
        consts: h,
    })
}

fn combinations(m: usize, k: usize, budget: &mut u64, f: &mut dyn FnMut(&[usize])) -> bool {
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, budget: &mut u64, f: &mut dyn FnMut(&[usize])) -> bool {
        if cur.len() == k {
            if *budget == 0 {
                return false;
            }
            *budget -= 1;
            f(cur);
            return true;
        }
        for i in start..m {
            if m - i < k - cur.len() {
                break;
            }
            cur.push(i);
            if !rec(i + 1, m, k, cur, budget, f) {
                return false;
            }
            cur.pop();
        }
        true
    }
    rec(0, m, k, &mut Vec::new(), budget, f)
}

/// Vertices and primitive integral extreme rays of a pointed polyhedron.
fn vertices_and_rays(red: &Reduced, budget: &mut u64) -> Option<(Vec<Vec<Rational>>, Vec<Vec<BigInt>>)> {
    let r = red.r;
    let m = red.rows.len();
    let rows: Vec<Vec<Rational>> = red.rows.iter().map(|row| row.iter().map(q).collect()).collect();
    let consts: Vec<Rational> = red.consts.iter().map(q).collect();
    let feasible = |y: &[Rational]| rows.iter().zip(&consts).all(|(a, c)| dot(a, y) + c >= Rational::zero());
    let in_cone = |y: &[BigInt]| red.rows.iter().all(|a| a.iter().zip(y).map(|(u, v)| u * v).sum::<BigInt>() >= BigInt::zero());
    let mut vertices: Vec<Vec<Rational>> = Vec::new();
    let ok = combinations(m, r, budget, &mut |s| {
        let sys: Vec<Vec<Rational>> = s
            .iter()
            .map(|&i| {
                let mut row = rows[i].clone();
                row.push(consts[i].clone());
                row
            })
            .collect();
        if rank(&sys.iter().map(|row| row[..r].to_vec()).collect()) < r {
            return;
        }
        let ns = null_space(&sys, r + 1);
        let v = &ns[0];
        let t = &v[r];
        let y: Vec<Rational> = v[..r].iter().map(|x| x / t).collect();
        if feasible(&y) && !vertices.contains(&y) {
            vertices.push(y);
        }
    });
    if !ok {
        return None;
    }
    let mut rays: Vec<Vec<BigInt>> = Vec::new();
    if r >= 1 {
        let ok = combinations(m, r - 1, budget, &mut |s| {
            let sys: Vec<Vec<Rational>> = s.iter().map(|&i| rows[i].clone()).collect();
            let ns = if sys.is_empty() {
                // one-dimensional: the coordinate axis
                vec![vec![Rational::one()]]
            } else {
                null_space(&sys, r)
            };
            if ns.len() != 1 {
                return;
            }
            let d = primitive(ns[0].clone());
            for cand in [d.clone(), d.iter().map(|x| -x).collect::<Vec<_>>()] {
                if in_cone(&cand) && !rays.contains(&cand) {
                    rays.push(cand);
                }
            }
        });
        if !ok {
            return None;
        }
    }
    Some((vertices, rays))
}

struct Search<'a> {
    red: &'a Reduced,
    oracles: &'a [Arc<dyn PointOracle>],
    nodes: u64,
    exhausted: bool,
    unknown: bool,
    first_leaf: Option<Vec<BigInt>>,
}

impl Search<'_> {
    /// Depth-first enumeration of integer points of `base ∩ box` with the
    /// first `fixed.len()` coordinates fixed.
    fn run(&mut self, base: &[LinearConstraint], fixed: &mut Vec<BigInt>) -> Option<Vec<BigInt>> {
        let r = self.red.r;
        let t = fixed.len();
        if t == r {
            let y = fixed.clone();
            if self.first_leaf.is_none() {
                self.first_leaf = Some(y.clone());
            }
            let x = self.red.to_x(&y);
            let mut verdict = Tri::Yes;
            for o in self.oracles {
                match o.check(&x) {
                    Tri::No => {
                        verdict = Tri::No;
                        break;
                    }
                    Tri::Unknown => verdict = Tri::Unknown,
                    Tri::Yes => {}
                }
            }
            match verdict {
                Tri::Yes => return Some(x),
                Tri::Unknown => self.unknown = true,
                Tri::No => {}
            }
            return None;
        }
        let mut cs = base.to_vec();
        for (k, v) in fixed.iter().enumerate() {
            let mut a = vec![Rational::zero(); r];
            a[k] = Rational::one();
            cs.push(LinearConstraint::new(a, Relation::Eq, q(v)));
        }
        let mut obj = vec![Rational::zero(); r];
        obj[t] = Rational::one();
        if self.nodes < 2 {
            self.exhausted = true;
            return None;
        }
        self.nodes -= 2;
        let hi = match lp_optimize(&obj, &cs, r) {
            LpResult::Optimal { value, .. } => value.floor().to_integer(),
            LpResult::Infeasible => return None,
            LpResult::Unbounded { .. } => unreachable!("search region is bounded"),
        };
        obj[t] = -Rational::one();
        let lo = match lp_optimize(&obj, &cs, r) {
            LpResult::Optimal { value, .. } => (-value).ceil().to_integer(),
            _ => unreachable!("search region is bounded"),
        };
        if lo > hi {
            return None;
        }
        // values nearest zero first
        let start = if lo > BigInt::zero() {
            lo.clone()
        } else if hi < BigInt::zero() {
            hi.clone()
        } else {
            BigInt::zero()
        };
        let mut up = start.clone();
        let mut down: BigInt = &start - 1;
        loop {
            let take_up = up <= hi && (down < lo || up.abs() <= down.abs());
            let v = if take_up {
                let v = up.clone();
                up += 1;
                v
            } else if down >= lo {
                let v = down.clone();
                down -= 1;
                v
            } else {
                break;
            };
            fixed.push(v);
            let found = self.run(base, fixed);
            fixed.pop();
            if found.is_some() {
                return found;
            }
            if self.exhausted {
                return None;
            }
        }
        None
    }
}

fn box_constraints(lo: &[Rational], hi: &[Rational]) -> Vec<LinearConstraint> {
    let r = lo.len();
    let mut out = Vec::new();
    for k in 0..r {
        let mut a = vec![Rational::zero(); r];
        a[k] = Rational::one();
        out.push(LinearConstraint::new(a.clone(), Relation::Ge, lo[k].clone()));
        out.push(LinearConstraint::new(a, Relation::Le, hi[k].clone()));
    }
    out
}

/// Find an integer point of the region, or prove there is none.
pub fn integer_point(region: &ConvexRegion, budget: &GeometryBudget) -> IntegerPoint {
    let Some(red) = reduce(region) else {
        return IntegerPoint::Empty;
    };
    let r = red.r;
    // rows that vanish after reduction are constant constraints
    for (row, c) in red.rows.iter().zip(&red.consts) {
        if row.iter().all(|x| x.is_zero()) && c.is_negative() {
            return IntegerPoint::Empty;
        }
    }
    let base = red.constraints();
    if lp_optimize(&vec![Rational::zero(); r], &base, r) == LpResult::Infeasible {
        return IntegerPoint::Empty;
    }
    // bounding box of the integer hull search region
    let mut lo = Vec::with_capacity(r);
    let mut hi = Vec::with_capacity(r);
    let mut bounded = true;
    for k in 0..r {
        let mut obj = vec![Rational::zero(); r];
        obj[k] = Rational::one();
        let up = lp_optimize(&obj, &base, r);
        obj[k] = -Rational::one();
        let down = lp_optimize(&obj, &base, r);
        match (up, down) {
            (LpResult::Optimal { value: u, .. }, LpResult::Optimal { value: d, .. }) => {
                hi.push(u);
                lo.push(-d);
            }
            _ => {
                bounded = false;
                break;
            }
        }
    }
    let mut rays: Vec<Vec<BigInt>> = Vec::new();
    if !bounded {
        let mut subsets = budget.subsets;
        let Some((vertices, ext)) = vertices_and_rays(&red, &mut subsets) else {
            return IntegerPoint::Undecided("vertex enumeration budget exhausted".into());
        };
        lo = vec![Rational::zero(); r];
        hi = vec![Rational::zero(); r];
        for k in 0..r {
            let vs = vertices.iter().map(|v| v[k].clone());
            lo[k] = vs.clone().min().unwrap_or_default();
            hi[k] = vs.max().unwrap_or_default();
            for ray in &ext {
                if ray[k].is_negative() {
                    lo[k] += q(&ray[k]);
                } else {
                    hi[k] += q(&ray[k]);
                }
            }
        }
        rays = ext;
    }
    let mut cs = base.clone();
    cs.extend(box_constraints(&lo, &hi));
    let mut search = Search {
        red: &red,
        oracles: &region.oracles,
        nodes: budget.nodes,
        exhausted: false,
        unknown: false,
        first_leaf: None,
    };
    if let Some(x) = search.run(&cs, &mut Vec::new()) {
        return IntegerPoint::Found(x);
    }
    if search.exhausted {
        return IntegerPoint::Undecided("integer search budget exhausted".into());
    }
    let Some(leaf) = search.first_leaf.clone() else {
        return IntegerPoint::Empty;
    };
    // every integer point is a search-region point plus a nonnegative
    // integer combination of rays and lineality directions
    let mut directions: Vec<Vec<BigInt>> = rays.iter().map(|y| red.dir_x(y)).collect();
    for l in red.lineality() {
        directions.push(l.iter().map(|x| -x).collect());
        directions.push(l);
    }
    if directions.is_empty() || region.oracles.is_empty() {
        return if search.unknown {
            IntegerPoint::Undecided("oracle undecided at a candidate point".into())
        } else {
            IntegerPoint::Empty
        };
    }
    let signs: Vec<Vec<Option<i8>>> = directions
        .iter()
        .map(|d| region.oracles.iter().map(|o| o.ray_sign(d)).collect())
        .collect();
    let start = red.to_x(&leaf);
    for (d, s) in directions.iter().zip(&signs) {
        if s.iter().all(|v| *v == Some(1)) {
            let mut n = BigInt::one();
            for _ in 0..budget.ray_doublings {
                let x: Vec<BigInt> = start.iter().zip(d).map(|(a, b)| a + &n * b).collect();
                if region.contains(&x) == Tri::Yes {
                    return IntegerPoint::Found(x);
                }
                n <<= 1;
            }
        }
    }
    let monotone = signs.iter().flatten().all(|v| matches!(v, Some(s) if *s <= 0));
    if monotone && !search.unknown {
        IntegerPoint::Empty
    } else {
        IntegerPoint::Undecided("unbounded region with undetermined oracle behaviour".into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qi(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn ineq(a: &[i64], c: i64) -> (Vec<Rational>, Rational) {
        (a.iter().map(|&x| qi(x)).collect(), qi(c))
    }

    #[test]
    fn bounded_triangle_has_points() {
        let mut reg = ConvexRegion::new(2);
        reg.inequalities = vec![ineq(&[1, 0], -1), ineq(&[0, 1], -1), ineq(&[-1, -1], 5)];
        match integer_point(&reg, &GeometryBudget::default()) {
            IntegerPoint::Found(x) => assert_eq!(reg.contains(&x), Tri::Yes),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn thin_strip_without_integer_points() {
        // 1 <= 3x <= 2
        let mut reg = ConvexRegion::new(2);
        reg.inequalities = vec![ineq(&[3, 0], -1), ineq(&[-3, 0], 2)];
        assert_eq!(integer_point(&reg, &GeometryBudget::default()), IntegerPoint::Empty);
    }

    #[test]
    fn equalities_without_integer_solutions() {
        let mut reg = ConvexRegion::new(2);
        reg.equalities = vec![ineq(&[2, 4], -1)];
        assert_eq!(integer_point(&reg, &GeometryBudget::default()), IntegerPoint::Empty);
        reg.equalities = vec![ineq(&[2, 4], -2)];
        assert!(matches!(integer_point(&reg, &GeometryBudget::default()), IntegerPoint::Found(_)));
    }

    #[test]
    fn unbounded_cone_with_oracle() {
        struct FarOut;
        impl PointOracle for FarOut {
            fn check(&self, x: &[BigInt]) -> Tri {
                if x[0] > BigInt::from(1000) {
                    Tri::Yes
                } else {
                    Tri::No
                }
            }
            fn ray_sign(&self, r: &[BigInt]) -> Option<i8> {
                Some(if r[0].is_positive() { 1 } else if r[0].is_zero() { 0 } else { -1 })
            }
            fn describe(&self) -> String {
                "x > 1000".into()
            }
        }
        let mut reg = ConvexRegion::new(2);
        reg.inequalities = vec![ineq(&[1, 0], -1), ineq(&[-1, 2], 0), ineq(&[1, -2], 3)];
        reg.oracles.push(Arc::new(FarOut));
        match integer_point(&reg, &GeometryBudget::default()) {
            IntegerPoint::Found(x) => assert_eq!(reg.contains(&x), Tri::Yes),
            other => panic!("{other:?}"),
        }
        // x <= 0 along every ray: empty
        let mut reg = ConvexRegion::new(2);
        reg.inequalities = vec![ineq(&[-1, 0], 0), ineq(&[0, 1], 0)];
        reg.oracles.push(Arc::new(FarOut));
        assert_eq!(integer_point(&reg, &GeometryBudget::default()), IntegerPoint::Empty);
    }
}
