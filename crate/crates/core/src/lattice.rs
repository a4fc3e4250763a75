//! Integer lattices: column echelon forms with unimodular transforms,
//! integer kernels, membership in a lattice and integral linear systems.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntVec = Vec<BigInt>;

/// Column echelon form `H = A V` with `V` unimodular.
///
/// The first `rank` columns of `H` are nonzero with pivots in strictly
/// increasing rows (`pivots[k]` is the pivot row of column `k`); the
/// remaining columns are zero, so the matching columns of `V` span the
/// integer kernel of `A`.
#[derive(Clone, Debug)]
pub struct ColumnEchelon {
    pub h: Vec<IntVec>,
    pub v: Vec<IntVec>,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

fn col_combine(m: &mut [IntVec], a: usize, b: usize, coef: [&BigInt; 4]) {
    // (col_a, col_b) <- (col_a * c00 + col_b * c10, col_a * c01 + col_b * c11)
    for row in m.iter_mut() {
        let x = row[a].clone();
        let y = row[b].clone();
        row[a] = &x * coef[0] + &y * coef[1];
        row[b] = &x * coef[2] + &y * coef[3];
    }
}

fn col_swap(m: &mut [IntVec], a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

fn col_axpy(m: &mut [IntVec], dst: usize, src: usize, k: &BigInt) {
    for row in m.iter_mut() {
        let v = &row[src] * k;
        row[dst] -= v;
    }
}

pub fn column_echelon(a: &[IntVec], ncols: usize) -> ColumnEchelon {
    let mut h: Vec<IntVec> = a.to_vec();
    let mut v: Vec<IntVec> = (0..ncols)
        .map(|i| (0..ncols).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut col = 0;
    let mut pivots = Vec::new();
    for i in 0..h.len() {
        if col == ncols {
            break;
        }
        for j in col + 1..ncols {
            if h[i][j].is_zero() {
                continue;
            }
            if h[i][col].is_zero() {
                col_swap(&mut h, col, j);
                col_swap(&mut v, col, j);
                continue;
            }
            let (x, y) = (h[i][col].clone(), h[i][j].clone());
            let e = x.extended_gcd(&y);
            let (p, q) = (e.x, e.y);
            let (xg, yg) = (&x / &e.gcd, &y / &e.gcd);
            let neg_yg = -yg;
            // [[p, -y/g], [q, x/g]] has determinant 1
            let c = [&p, &q, &neg_yg, &xg];
            col_combine(&mut h, col, j, c);
            col_combine(&mut v, col, j, c);
        }
        if h[i][col].is_zero() {
            continue;
        }
        if h[i][col].is_negative() {
            let m1 = BigInt::from(-1);
            for row in h.iter_mut() {
                row[col] = &row[col] * &m1;
            }
            for row in v.iter_mut() {
                row[col] = &row[col] * &m1;
            }
        }
        let piv = h[i][col].clone();
        for k in 0..col {
            let q = h[i][k].div_floor(&piv);
            if !q.is_zero() {
                col_axpy(&mut h, k, col, &q);
                col_axpy(&mut v, k, col, &q);
            }
        }
        pivots.push(i);
        col += 1;
    }
    ColumnEchelon {
        h,
        v,
        rank: col,
        pivots,
    }
}

/// Basis of `{z ∈ Z^n : A z = 0}`.
pub fn integer_kernel(a: &[IntVec], n: usize) -> Vec<IntVec> {
    let ce = column_echelon(a, n);
    (ce.rank..n)
        .map(|k| (0..n).map(|r| ce.v[r][k].clone()).collect())
        .collect()
}

/// Hermite basis of the lattice spanned by the given rows.
pub fn lattice_basis(rows: &[IntVec], n: usize) -> Vec<IntVec> {
    if rows.is_empty() {
        return Vec::new();
    }
    // column echelon of the transpose
    let t: Vec<IntVec> = (0..n).map(|c| rows.iter().map(|r| r[c].clone()).collect()).collect();
    let ce = column_echelon(&t, rows.len());
    (0..ce.rank)
        .map(|k| (0..n).map(|r| ce.h[r][k].clone()).collect())
        .collect()
}

/// Integral solution set `{x0 + K z}` of `A x = b`; `None` if no integer
/// solution exists.
pub fn solve_integral(a: &[IntVec], b: &[BigInt], n: usize) -> Option<(IntVec, Vec<IntVec>)> {
    let ce = column_echelon(a, n);
    // H y = b with H in column echelon form
    let mut y = vec![BigInt::zero(); n];
    let mut k = 0;
    for (i, bi) in b.iter().enumerate() {
        let mut s = bi.clone();
        for (c, yc) in y.iter().enumerate().take(k) {
            s -= &ce.h[i][c] * yc;
        }
        if k < ce.rank && ce.pivots[k] == i {
            let (q, r) = s.div_rem(&ce.h[i][k]);
            if !r.is_zero() {
                return None;
            }
            y[k] = q;
            k += 1;
        } else if !s.is_zero() {
            return None;
        }
    }
    let x0 = (0..n)
        .map(|r| (0..n).map(|c| &ce.v[r][c] * &y[c]).sum())
        .collect();
    let kernel = (ce.rank..n)
        .map(|c| (0..n).map(|r| ce.v[r][c].clone()).collect())
        .collect();
    Some((x0, kernel))
}

/// Whether `v` lies in the integer span of `basis`.
pub fn in_lattice(basis: &[IntVec], v: &[BigInt]) -> bool {
    let n = v.len();
    if basis.is_empty() {
        return v.iter().all(|x| x.is_zero());
    }
    let a: Vec<IntVec> = (0..n).map(|r| basis.iter().map(|b| b[r].clone()).collect()).collect();
    solve_integral(&a, v, basis.len()).is_some()
}

pub fn to_big(v: &[i64]) -> IntVec {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn gcd_all(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

pub fn abs_max(v: &[BigInt]) -> BigInt {
    v.iter().map(|x| x.abs()).max().unwrap_or_default()
}
