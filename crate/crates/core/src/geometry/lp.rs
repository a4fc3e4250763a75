//! Exact rational linear programming by the two-phase simplex method with
//! Bland's rule.

use num_traits::{One, Signed, Zero};

use crate::algebra::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

/// `coeffs · x (relation) rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearConstraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl LinearConstraint {
    pub fn new(coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> Self {
        Self {
            coeffs,
            relation,
            rhs,
        }
    }

    /// `coeffs · x + constant >= 0`.
    pub fn nonneg(coeffs: Vec<Rational>, constant: &Rational) -> Self {
        Self::new(coeffs, Relation::Ge, -constant.clone())
    }

    pub fn satisfied_by(&self, x: &[Rational]) -> bool {
        let lhs: Rational = self.coeffs.iter().zip(x).map(|(a, b)| a * b).sum();
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Ge => lhs >= self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpResult {
    Optimal {
        value: Rational,
        point: Vec<Rational>,
    },
    /// Feasible with objective unbounded above along `point + t · ray`.
    Unbounded {
        point: Vec<Rational>,
        ray: Vec<Rational>,
    },
    Infeasible,
}

impl LpResult {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpResult::Infeasible)
    }

    pub fn point(&self) -> Option<&[Rational]> {
        match self {
            LpResult::Optimal { point, .. } | LpResult::Unbounded { point, .. } => Some(point),
            LpResult::Infeasible => None,
        }
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    width: usize,
}

enum Outcome {
    Optimal,
    Unbounded(usize),
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            *x = &*x / &p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximize `obj · z` over columns allowed to enter.
    fn run(&mut self, obj: &[Rational], allowed: &[bool]) -> Outcome {
        let rhs = self.width;
        loop {
            let mut entering = None;
            for j in 0..self.width {
                if !allowed[j] || self.basis.contains(&j) {
                    continue;
                }
                let mut rc = obj[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !obj[b].is_zero() && !self.rows[i][j].is_zero() {
                        rc -= &obj[b] * &self.rows[i][j];
                    }
                }
                if rc.is_positive() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(j) = entering else {
                return Outcome::Optimal;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][j];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rows[i][rhs] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                None => return Outcome::Unbounded(j),
                Some((i, _)) => self.pivot(i, j),
            }
        }
    }

    fn solution(&self) -> Vec<Rational> {
        let mut z = vec![Rational::zero(); self.width];
        for (i, &b) in self.basis.iter().enumerate() {
            z[b] = self.rows[i][self.width].clone();
        }
        z
    }
}

/// Maximize `objective · x` subject to the constraints, `x ∈ Q^n` free.
pub fn lp_optimize(objective: &[Rational], constraints: &[LinearConstraint], n: usize) -> LpResult {
    // columns: u (n), w (n) with x = u - w, one slack per inequality, one
    // artificial per row
    let m = constraints.len();
    let n_slack = constraints.iter().filter(|c| c.relation != Relation::Eq).count();
    let width = 2 * n + n_slack + m;
    let art0 = 2 * n + n_slack;
    let mut rows = Vec::with_capacity(m);
    let mut slack = 2 * n;
    for (i, c) in constraints.iter().enumerate() {
        let mut row = vec![Rational::zero(); width + 1];
        for k in 0..n {
            row[k] = c.coeffs[k].clone();
            row[n + k] = -c.coeffs[k].clone();
        }
        match c.relation {
            Relation::Le => {
                row[slack] = Rational::one();
                slack += 1;
            }
            Relation::Ge => {
                row[slack] = -Rational::one();
                slack += 1;
            }
            Relation::Eq => {}
        }
        row[width] = c.rhs.clone();
        if row[width].is_negative() {
            for x in row.iter_mut() {
                *x = -x.clone();
            }
        }
        row[art0 + i] = Rational::one();
        rows.push(row);
    }
    let mut t = Tableau {
        rows,
        basis: (art0..art0 + m).collect(),
        width,
    };
    // phase one: drive the artificials to zero
    let mut obj1 = vec![Rational::zero(); width];
    for x in obj1.iter_mut().skip(art0) {
        *x = -Rational::one();
    }
    let all = vec![true; width];
    t.run(&obj1, &all);
    let infeas: Rational = t
        .basis
        .iter()
        .enumerate()
        .filter(|(_, &b)| b >= art0)
        .map(|(i, _)| t.rows[i][width].clone())
        .sum();
    if infeas.is_positive() {
        return LpResult::Infeasible;
    }
    // pivot remaining (zero-valued) artificials out of the basis
    for i in 0..m {
        if t.basis[i] >= art0 {
            if let Some(j) = (0..art0).find(|&j| !t.rows[i][j].is_zero() && !t.basis.contains(&j)) {
                t.pivot(i, j);
            }
        }
    }
    let mut obj2 = vec![Rational::zero(); width];
    for k in 0..n {
        obj2[k] = objective[k].clone();
        obj2[n + k] = -objective[k].clone();
    }
    let allowed: Vec<bool> = (0..width).map(|j| j < art0).collect();
    let to_x = |z: &[Rational]| -> Vec<Rational> { (0..n).map(|k| &z[k] - &z[n + k]).collect() };
    match t.run(&obj2, &allowed) {
        Outcome::Optimal => {
            let z = t.solution();
            let point = to_x(&z);
            let value = objective.iter().zip(&point).map(|(a, b)| a * b).sum();
            LpResult::Optimal { value, point }
        }
        Outcome::Unbounded(j) => {
            let z = t.solution();
            let mut dir = vec![Rational::zero(); width];
            dir[j] = Rational::one();
            for (i, &b) in t.basis.iter().enumerate() {
                dir[b] = -t.rows[i][j].clone();
            }
            LpResult::Unbounded {
                point: to_x(&z),
                ray: to_x(&dir),
            }
        }
    }
}

/// Some feasible point, or `None` when the system is infeasible.
pub fn feasible_point(constraints: &[LinearConstraint], n: usize) -> Option<Vec<Rational>> {
    let zero = vec![Rational::zero(); n];
    lp_optimize(&zero, constraints, n).point().map(|p| p.to_vec())
}
