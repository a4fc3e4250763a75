//! Real relaxation of a witness region whose halfspaces have coefficients in
//! one real number field, decided by Fourier–Motzkin elimination.

use crate::algebra::field::{FieldElem, NumberField};
use crate::algebra::{AlgebraicNumber, Rational};

use super::phi::real_sign;

struct Row {
    coeffs: Vec<FieldElem>,
    constant: FieldElem,
    strict: bool,
}

struct Ctx<'a> {
    field: &'a NumberField,
    root: &'a AlgebraicNumber,
}

impl Ctx<'_> {
    fn sign(&self, e: &FieldElem) -> i8 {
        real_sign(self.field, e, self.root)
    }

    /// Scale so that the first nonzero coefficient is `±1`.
    fn normalize(&self, mut r: Row) -> Row {
        let Some(lead) = r.coeffs.iter().find(|c| !self.field.is_zero(c)).cloned() else {
            return r;
        };
        let mut inv = self.field.inv(&lead).expect("nonzero");
        if self.sign(&lead) < 0 {
            inv = self.field.neg(&inv);
        }
        for c in r.coeffs.iter_mut() {
            *c = self.field.mul(c, &inv);
        }
        r.constant = self.field.mul(&r.constant, &inv);
        r
    }

    /// `false` if the constant row is violated.
    fn constant_ok(&self, r: &Row) -> bool {
        let s = self.sign(&r.constant);
        if r.strict {
            s > 0
        } else {
            s >= 0
        }
    }
}

/// Whether `{x ∈ R^d : eq = 0, ineq >= 0, strict > 0}` is empty. Rows are
/// `(a, c)` meaning `a · x + c`. Returns `false` when the row count exceeds
/// `cap` during elimination.
pub(crate) fn real_infeasible(
    field: &NumberField,
    root: &AlgebraicNumber,
    equalities: &[(Vec<Rational>, Rational)],
    inequalities: &[(Vec<Rational>, Rational)],
    strict: &[(Vec<FieldElem>, FieldElem)],
    cap: usize,
) -> bool {
    let ctx = Ctx { field, root };
    let lift = |(a, c): &(Vec<Rational>, Rational), strict: bool| Row {
        coeffs: a.iter().map(|q| field.from_rational(q.clone())).collect(),
        constant: field.from_rational(c.clone()),
        strict,
    };
    let mut rows: Vec<Row> = inequalities.iter().map(|r| lift(r, false)).collect();
    rows.extend(strict.iter().map(|(a, c)| Row {
        coeffs: a.clone(),
        constant: c.clone(),
        strict: true,
    }));
    let mut eqs: Vec<Row> = equalities.iter().map(|r| lift(r, false)).collect();
    while let Some(e) = eqs.pop() {
        let Some(k) = e.coeffs.iter().position(|c| !field.is_zero(c)) else {
            if !field.is_zero(&e.constant) {
                return true;
            }
            continue;
        };
        let inv = field.inv(&e.coeffs[k]).expect("nonzero");
        let subst = |r: &mut Row| {
            if field.is_zero(&r.coeffs[k]) {
                return;
            }
            let f = field.neg(&field.mul(&r.coeffs[k], &inv));
            for (c, ec) in r.coeffs.iter_mut().zip(&e.coeffs) {
                *c = field.add(c, &field.mul(&f, ec));
            }
            r.constant = field.add(&r.constant, &field.mul(&f, &e.constant));
        };
        eqs.iter_mut().for_each(subst);
        rows.iter_mut().for_each(subst);
    }
    let d = rows.first().map_or(0, |r| r.coeffs.len());
    for k in 0..d {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut next = Vec::new();
        for r in rows {
            match ctx.sign(&r.coeffs[k]) {
                1 => pos.push(ctx.normalize_at(r, k)),
                -1 => neg.push(ctx.normalize_at(r, k)),
                _ => next.push(r),
            }
        }
        // pos: x_k + p >= 0, neg: -x_k + q >= 0, sum: p + q >= 0
        for p in &pos {
            for q in &neg {
                next.push(Row {
                    coeffs: p.coeffs.iter().zip(&q.coeffs).map(|(a, b)| field.add(a, b)).collect(),
                    constant: field.add(&p.constant, &q.constant),
                    strict: p.strict || q.strict,
                });
            }
        }
        rows = Vec::new();
        for r in next {
            if r.coeffs.iter().all(|c| field.is_zero(c)) {
                if !ctx.constant_ok(&r) {
                    return true;
                }
                continue;
            }
            let r = ctx.normalize(r);
            let dup = rows
                .iter()
                .any(|o: &Row| o.coeffs == r.coeffs && o.constant == r.constant && o.strict == r.strict);
            if !dup {
                rows.push(r);
            }
        }
        if rows.len() > cap {
            return false;
        }
    }
    rows.iter().any(|r| !ctx.constant_ok(r))
}

impl Ctx<'_> {
    /// Scale so that the coefficient of `x_k` is `±1`.
    fn normalize_at(&self, mut r: Row, k: usize) -> Row {
        let mut inv = self.field.inv(&r.coeffs[k]).expect("nonzero");
        if self.sign(&r.coeffs[k]) < 0 {
            inv = self.field.neg(&inv);
        }
        for c in r.coeffs.iter_mut() {
            *c = self.field.mul(c, &inv);
        }
        r.constant = self.field.mul(&r.constant, &inv);
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::IntPolynomial;

    fn q(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    #[test]
    fn opposed_irrational_halfspaces() {
        // K = Q(√2), root √2
        let field = NumberField::new(IntPolynomial::from_i64(&[-2, 0, 1]));
        let root = AlgebraicNumber::all_roots_of_irreducible(&IntPolynomial::from_i64(&[-2, 0, 1]))
            .into_iter()
            .find(|r| r.approx().0 > 0.0)
            .unwrap();
        let s2 = vec![q(0), q(1)];
        let one = field.one();
        // √2 x - y > 0 and y - √2 x > 0
        let a = (vec![s2.clone(), field.neg(&one)], field.zero());
        let b = (vec![field.neg(&s2), one.clone()], field.zero());
        assert!(real_infeasible(&field, &root, &[], &[], &[a.clone(), b.clone()], 100));
        // √2 x - y > 0 and x > 0 is feasible
        let c = (vec![one.clone(), field.zero()], field.zero());
        assert!(!real_infeasible(&field, &root, &[], &[], &[a.clone(), c], 100));
        // √2 x - y >= 0 closure with y = 1, x = 0
        assert!(real_infeasible(&field, &root, &[(vec![q(1), q(0)], q(0))], &[(vec![q(0), q(1)], q(-1))], &[a], 100));
    }
}
