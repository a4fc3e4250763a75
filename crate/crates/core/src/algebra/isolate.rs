//! Certified isolation of the complex roots of a squarefree integer polynomial.
//!
//! Approximations come from the Aberth–Ehrlich iteration (first in `f64`,
//! then in fixed-point big-integer arithmetic). They are certified with the
//! Newton inclusion disk: every `z` has a root within `n |p(z) / p'(z)|`.
//! When the `n` disks are pairwise disjoint each holds exactly one root.
//! The returned box is the square of half-width `2r` around the center, so
//! the root lies at distance at least `r` from the box boundary.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::interval::{sqrt_upper, ComplexInterval};
use super::poly::IntPolynomial;
use super::Rational;

#[derive(Clone, Debug)]
pub struct IsolatedRoot {
    pub re: Rational,
    pub im: Rational,
    /// Upper bound on the distance from the center to the root.
    pub radius: Rational,
}

impl IsolatedRoot {
    pub fn isolating_box(&self) -> ComplexInterval {
        let w = &self.radius * Rational::from_integer(2.into());
        ComplexInterval::around(&self.re, &self.im, &w)
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }
}

/// Fixed-point complex number with `prec` fractional bits.
#[derive(Clone, Debug)]
struct Fx {
    re: BigInt,
    im: BigInt,
}

struct FxCtx {
    prec: u32,
}

impl FxCtx {
    fn from_f64(&self, re: f64, im: f64) -> Fx {
        let conv = |x: f64| -> BigInt {
            if x == 0.0 || !x.is_finite() {
                return BigInt::zero();
            }
            let (mant, exp) = frexp(x);
            let m = BigInt::from((mant * (1u64 << 53) as f64) as i64);
            let shift = exp + self.prec as i32 - 53;
            if shift >= 0 {
                m << shift as u32
            } else {
                m >> (-shift) as u32
            }
        };
        Fx {
            re: conv(re),
            im: conv(im),
        }
    }

    fn from_rational(&self, re: &Rational, im: &Rational) -> Fx {
        let s = Rational::from_integer(BigInt::one() << self.prec);
        Fx {
            re: (re * &s).round().to_integer(),
            im: (im * &s).round().to_integer(),
        }
    }

    fn to_rational(&self, z: &Fx) -> (Rational, Rational) {
        let s = BigInt::one() << self.prec;
        (
            Rational::new(z.re.clone(), s.clone()),
            Rational::new(z.im.clone(), s),
        )
    }

    fn rescale(&self, z: &Fx, from: u32) -> Fx {
        if self.prec >= from {
            let d = self.prec - from;
            Fx {
                re: &z.re << d,
                im: &z.im << d,
            }
        } else {
            let d = from - self.prec;
            Fx {
                re: &z.re >> d,
                im: &z.im >> d,
            }
        }
    }

    fn mul(&self, a: &Fx, b: &Fx) -> Fx {
        Fx {
            re: (&a.re * &b.re - &a.im * &b.im) >> self.prec,
            im: (&a.re * &b.im + &a.im * &b.re) >> self.prec,
        }
    }

    fn div(&self, a: &Fx, b: &Fx) -> Option<Fx> {
        let den = &b.re * &b.re + &b.im * &b.im;
        if den.is_zero() {
            return None;
        }
        let nr = (&a.re * &b.re + &a.im * &b.im) << self.prec;
        let ni = (&a.im * &b.re - &a.re * &b.im) << self.prec;
        Some(Fx {
            re: nr / &den,
            im: ni / den,
        })
    }

    fn sub(&self, a: &Fx, b: &Fx) -> Fx {
        Fx {
            re: &a.re - &b.re,
            im: &a.im - &b.im,
        }
    }

    fn eval_with_derivative(&self, p: &[BigInt], z: &Fx) -> (Fx, Fx) {
        let mut v = Fx {
            re: BigInt::zero(),
            im: BigInt::zero(),
        };
        let mut d = v.clone();
        for c in p.iter().rev() {
            d = self.mul(&d, z);
            d.re += &v.re;
            d.im += &v.im;
            v = self.mul(&v, z);
            v.re += c << self.prec;
        }
        (v, d)
    }
}

fn frexp(x: f64) -> (f64, i32) {
    if x == 0.0 {
        return (0.0, 0);
    }
    let e = x.abs().log2().floor() as i32 + 1;
    let m = x / 2f64.powi(e);
    (m, e)
}

fn f64_coeffs(p: &IntPolynomial) -> Vec<f64> {
    let max_bits = p.coeffs().iter().map(|c| c.bits()).max().unwrap_or(0) as i64;
    let shift = (max_bits - 900).max(0) as u32;
    p.coeffs()
        .iter()
        .map(|c| (c >> shift).to_f64().unwrap_or(0.0))
        .collect()
}

fn aberth_f64(p: &IntPolynomial) -> Vec<(f64, f64)> {
    let c = f64_coeffs(p);
    let n = p.degree();
    let lead = c[n].abs();
    let bound = 1.0
        + c[..n]
            .iter()
            .map(|x| x.abs() / lead)
            .fold(0.0f64, f64::max);
    let radius = bound.min(1e100) * 0.5 + 0.1;
    let mut z: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let a = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            (radius * a.cos(), radius * a.sin())
        })
        .collect();
    let mul = |a: (f64, f64), b: (f64, f64)| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
    let div = |a: (f64, f64), b: (f64, f64)| {
        let d = b.0 * b.0 + b.1 * b.1;
        ((a.0 * b.0 + a.1 * b.1) / d, (a.1 * b.0 - a.0 * b.1) / d)
    };
    for _ in 0..500 {
        let mut max_step = 0.0f64;
        for k in 0..n {
            let (mut v, mut d) = ((0.0, 0.0), (0.0, 0.0));
            for coef in c.iter().rev() {
                d = mul(d, z[k]);
                d = (d.0 + v.0, d.1 + v.1);
                v = mul(v, z[k]);
                v.0 += coef;
            }
            let w = div(v, d);
            let mut s = (0.0, 0.0);
            for j in 0..n {
                if j != k {
                    let t = div((1.0, 0.0), (z[k].0 - z[j].0, z[k].1 - z[j].1));
                    s = (s.0 + t.0, s.1 + t.1);
                }
            }
            let ws = mul(w, s);
            let step = div(w, (1.0 - ws.0, -ws.1));
            if step.0.is_finite() && step.1.is_finite() {
                z[k] = (z[k].0 - step.0, z[k].1 - step.1);
                let scale = 1.0 + (z[k].0.abs()).max(z[k].1.abs());
                max_step = max_step.max((step.0.abs() + step.1.abs()) / scale);
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    z
}

fn aberth_fixed(ctx: &FxCtx, p: &[BigInt], z: &mut [Fx], iters: usize) {
    let n = z.len();
    let one = Fx {
        re: BigInt::one() << ctx.prec,
        im: BigInt::zero(),
    };
    for _ in 0..iters {
        let mut moved = false;
        for k in 0..n {
            let (v, d) = ctx.eval_with_derivative(p, &z[k]);
            if v.re.is_zero() && v.im.is_zero() {
                continue;
            }
            let Some(w) = ctx.div(&v, &d) else { continue };
            let mut s = Fx {
                re: BigInt::zero(),
                im: BigInt::zero(),
            };
            for j in 0..n {
                if j != k {
                    if let Some(t) = ctx.div(&one, &ctx.sub(&z[k], &z[j])) {
                        s.re += t.re;
                        s.im += t.im;
                    }
                }
            }
            let ws = ctx.mul(&w, &s);
            let Some(step) = ctx.div(&w, &ctx.sub(&one, &ws)) else {
                continue;
            };
            let mag = step.re.abs().max(step.im.abs());
            if mag.bits() > 2 {
                moved = true;
            }
            z[k] = ctx.sub(&z[k], &step);
        }
        if !moved {
            break;
        }
    }
}

/// Newton inclusion radius `n |p(z)| / |p'(z)|` as an upper bound; `None` when
/// the derivative vanishes at `z`.
pub(crate) fn inclusion_radius(
    p: &IntPolynomial,
    dp: &IntPolynomial,
    re: &Rational,
    im: &Rational,
    bits: u32,
) -> Option<Rational> {
    let (vr, vi) = p.eval_complex(re, im);
    if vr.is_zero() && vi.is_zero() {
        return Some(Rational::zero());
    }
    let (dr, di) = dp.eval_complex(re, im);
    let den = &dr * &dr + &di * &di;
    if den.is_zero() {
        return None;
    }
    let n = Rational::from_integer(BigInt::from(p.degree()));
    let r2 = &n * &n * (&vr * &vr + &vi * &vi) / den;
    Some(sqrt_upper(&r2, bits))
}

fn boxes_disjoint(a: &IsolatedRoot, b: &IsolatedRoot) -> bool {
    !a.isolating_box().intersects(&b.isolating_box())
}

/// Isolate all complex roots of a squarefree polynomial of positive degree.
///
/// Real roots are reported with a zero imaginary center; their boxes are
/// symmetric about the real axis, which certifies that the root is real.
pub fn isolate_roots(p: &IntPolynomial) -> Vec<IsolatedRoot> {
    isolate_roots_with(p, 0)
}

/// As [`isolate_roots`], additionally requiring every radius to be below
/// `2^-min_bits`.
pub fn isolate_roots_with(p: &IntPolynomial, min_bits: u32) -> Vec<IsolatedRoot> {
    let n = p.degree();
    assert!(n >= 1, "root isolation needs positive degree");
    if n == 1 {
        let root = Rational::new(-p.coeff(0), p.coeff(1));
        return vec![IsolatedRoot {
            re: root,
            im: Rational::zero(),
            radius: Rational::zero(),
        }];
    }
    let dp = p.derivative();
    let approx = aberth_f64(p);
    let mut prec: u32 = 64;
    let mut ctx = FxCtx { prec };
    let mut z: Vec<Fx> = approx.iter().map(|&(r, i)| ctx.from_f64(r, i)).collect();
    let limit = 1u64 << min_bits.min(60);
    loop {
        aberth_fixed(&ctx, p.coeffs(), &mut z, 80);
        if let Some(roots) = certify(p, &dp, &ctx, &z) {
            let fine = roots.iter().all(|r| {
                r.radius.is_zero()
                    || (&r.radius * Rational::from_integer(BigInt::from(limit))) < Rational::one()
            });
            if fine || min_bits == 0 {
                return roots;
            }
        }
        let next = prec * 2;
        assert!(next <= 1 << 16, "root isolation failed to converge for {p}");
        let new_ctx = FxCtx { prec: next };
        z = z.iter().map(|v| new_ctx.rescale(v, prec)).collect();
        prec = next;
        ctx = new_ctx;
        // Perturb coincident approximations so the simultaneous iteration
        // can pull them apart.
        for k in 0..z.len() {
            for j in 0..k {
                if z[k].re == z[j].re && z[k].im == z[j].im {
                    z[k].im += BigInt::one() << (prec / 2);
                }
            }
        }
    }
}

fn certify(p: &IntPolynomial, dp: &IntPolynomial, ctx: &FxCtx, z: &[Fx]) -> Option<Vec<IsolatedRoot>> {
    let bits = ctx.prec + 8;
    let snap_tol = BigInt::one() << (ctx.prec / 3);
    let mut roots = Vec::with_capacity(z.len());
    for v in z {
        let (re, mut im) = ctx.to_rational(v);
        let mag_scale = BigInt::one().max(v.re.abs() >> ctx.prec);
        if v.im.abs() < &snap_tol * &mag_scale {
            im = Rational::zero();
        }
        let radius = inclusion_radius(p, dp, &re, &im, bits)?;
        roots.push(IsolatedRoot { re, im, radius });
    }
    for i in 0..roots.len() {
        for j in 0..i {
            if !boxes_disjoint(&roots[i], &roots[j]) {
                return None;
            }
        }
    }
    // Every real root must have been snapped onto the axis.
    let snapped = roots.iter().filter(|r| r.im.is_zero()).count();
    if snapped != p.real_root_count() {
        return None;
    }
    Some(roots)
}

/// Refine a single isolated root of `p` by Newton steps until the radius is
/// below `2^-bits`, keeping the new box inside the old one.
pub fn refine_root(p: &IntPolynomial, root: &IsolatedRoot, bits: u32) -> IsolatedRoot {
    if root.radius.is_zero() {
        return root.clone();
    }
    let target = Rational::new(BigInt::one(), BigInt::one() << bits);
    let dp = p.derivative();
    let old_box = root.isolating_box();
    let real = root.im.is_zero();
    let mut cur = root.clone();
    let mut prec = bits.max(64) + 16;
    while cur.radius > target {
        let ctx = FxCtx { prec };
        let mut z = ctx.from_rational(&cur.re, &cur.im);
        for _ in 0..6 {
            let (v, d) = ctx.eval_with_derivative(p.coeffs(), &z);
            match ctx.div(&v, &d) {
                Some(step) => z = ctx.sub(&z, &step),
                None => break,
            }
        }
        let (re, mut im) = ctx.to_rational(&z);
        if real {
            im = Rational::zero();
        }
        if let Some(radius) = inclusion_radius(p, &dp, &re, &im, prec + 8) {
            let cand = IsolatedRoot { re, im, radius };
            if cand.isolating_box().is_subset_of(&old_box) && cand.radius < cur.radius {
                cur = cand;
                continue;
            }
        }
        prec *= 2;
        assert!(prec <= 1 << 18, "root refinement stalled for {p}");
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isolates_gaussian_pair() {
        let p = IntPolynomial::from_i64(&[25, -6, 1]);
        let roots = isolate_roots(&p);
        assert_eq!(roots.len(), 2);
        for r in &roots {
            let b = r.isolating_box();
            let three = Rational::from_integer(3.into());
            assert!(b.re.contains(&three));
            assert!(!r.is_real());
        }
    }

    #[test]
    fn real_roots_are_snapped() {
        // x^2 - 2
        let roots = isolate_roots(&IntPolynomial::from_i64(&[-2, 0, 1]));
        assert!(roots.iter().all(|r| r.is_real()));
        // x^3 - 2: one real root, one conjugate pair
        let roots = isolate_roots(&IntPolynomial::from_i64(&[-2, 0, 0, 1]));
        assert_eq!(roots.iter().filter(|r| r.is_real()).count(), 1);
    }

    #[test]
    fn refinement_shrinks_inside_old_box() {
        let p = IntPolynomial::from_i64(&[-2, 0, 1]);
        let roots = isolate_roots(&p);
        for r in &roots {
            let fine = refine_root(&p, r, 200);
            assert!(fine.isolating_box().is_subset_of(&r.isolating_box()));
            assert!(fine.radius < Rational::new(1.into(), BigInt::one() << 200));
        }
    }

    #[test]
    fn cyclotomic_roots_separate() {
        let p = IntPolynomial::cyclotomic(15);
        let roots = isolate_roots(&p);
        assert_eq!(roots.len(), 8);
    }
}
