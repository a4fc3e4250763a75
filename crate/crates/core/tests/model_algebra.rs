use std::cmp::Ordering;

use linterm_core::algebra::algebraic::roots;
use linterm_core::algebra::matrix::char_poly;
use linterm_core::lattice::to_big;
use linterm_core::model::{homogenize, nondegeneracy_reduction, power_transform};
use linterm_core::{parse_loop, AlgebraicNumber, Guard, IntPolynomial, LoopProgram, Rational};

fn poly(c: &[i64]) -> IntPolynomial {
    IntPolynomial::from_i64(c)
}

fn mat(rows: &[&[i64]]) -> Vec<Vec<num_bigint::BigInt>> {
    rows.iter().map(|r| to_big(r)).collect()
}

fn root_near(p: &IntPolynomial, re: f64, im: f64) -> AlgebraicNumber {
    AlgebraicNumber::all_roots_of_irreducible(p)
        .into_iter()
        .find(|r| {
            let (a, b) = r.approx();
            (a - re).abs() < 1e-6 && (b - im).abs() < 1e-6
        })
        .expect("root present")
}

#[test]
fn parses_and_normalizes_guards() {
    let p = parse_loop("vars x; while x > 0 do x := x - 1 end").unwrap();
    assert_eq!(p, LoopProgram::from_i64(&[&[1]], &[-1], &[(&[1], 0)]).unwrap());
    let p = parse_loop("vars x,y; while x >= y do x := x; y := y + 1 end").unwrap();
    assert_eq!(p.guards, vec![Guard::from_i64(&[1, -1], 1)]);
    let e = parse_loop("vars x; while x*x > 0 do x := x end").unwrap_err();
    assert!(e.to_string().contains("affine"), "{e}");
}

#[test]
fn display_round_trips() {
    let src = "vars x, y; while 2*x - y > 3 && y < 7 do x := x + 2*y - 1; y := -y end";
    let p = parse_loop(src).unwrap();
    assert_eq!(parse_loop(&p.to_string()).unwrap(), p);
}

#[test]
fn homogenization_blocks() {
    let p = parse_loop("vars x; while x > 0 do x := x - 1 end").unwrap();
    let h = homogenize(&p);
    assert_eq!(h.matrix, mat(&[&[1, -1], &[0, 1]]));
    assert_eq!(h.guard_rows, vec![to_big(&[1, 0])]);
    let r = parse_loop("vars x, y; while x > 0 do x := 3*x - 4*y; y := 4*x + 3*y end").unwrap();
    assert_eq!(homogenize(&r).matrix, mat(&[&[3, -4, 0], &[4, 3, 0], &[0, 0, 1]]));
    let id = parse_loop("vars x; while x > 0 do x := x end").unwrap();
    assert_eq!(homogenize(&id).matrix, mat(&[&[1, 0], &[0, 1]]));
}

#[test]
fn powering_expands_guards() {
    let neg = parse_loop("vars x; while x > 0 do x := -x end").unwrap();
    let p2 = power_transform(&neg, 2);
    assert_eq!(p2, parse_loop("vars x; while x > 0 && -x > 0 do x := x end").unwrap());
    assert_eq!(power_transform(&neg, 1), neg);
    let up = parse_loop("vars x; while x > 0 do x := x + 1 end").unwrap();
    let p3 = power_transform(&up, 3);
    assert_eq!(p3, parse_loop("vars x; while x > 0 && x + 1 > 0 && x + 2 > 0 do x := x + 3 end").unwrap());
}

#[test]
fn reduction_orders() {
    let neg = parse_loop("vars x; while x > 0 do x := -x end").unwrap();
    let (r, l) = nondegeneracy_reduction(&neg).unwrap();
    assert_eq!(l, 2);
    assert_eq!(r.guards.len(), 2);
    let down = parse_loop("vars x; while x > 0 do x := x - 1 end").unwrap();
    assert_eq!(nondegeneracy_reduction(&down).unwrap(), (down.clone(), 1));
    let spin = parse_loop("vars x, y; while x > 0 do x := x - y; y := x + y end").unwrap();
    assert_eq!(nondegeneracy_reduction(&spin).unwrap().1, 4);
}

#[test]
fn characteristic_polynomials() {
    assert_eq!(char_poly(&mat(&[&[1, -1], &[0, 1]])), poly(&[1, -2, 1]));
    assert_eq!(char_poly(&mat(&[&[3, -4], &[4, 3]])), poly(&[25, -6, 1]));
    assert_eq!(char_poly(&mat(&[&[0]])), poly(&[0, 1]));
}

#[test]
fn roots_with_multiplicity() {
    let r = roots(&poly(&[1, -2, 1]));
    assert_eq!(r, vec![(AlgebraicNumber::from_int(1), 2)]);
    let r = roots(&poly(&[25, -6, 1]));
    assert_eq!(r.len(), 2);
    assert!(r.iter().all(|(z, m)| *m == 1 && z.min_poly() == &poly(&[25, -6, 1])));
    let r = roots(&poly(&[0, 0, -1, 1]));
    assert!(r.contains(&(AlgebraicNumber::zero(), 2)));
    assert!(r.contains(&(AlgebraicNumber::one(), 1)));
}

#[test]
fn exact_arithmetic() {
    let a = root_near(&poly(&[25, -6, 1]), 3.0, 4.0);
    assert_eq!(a.mul(&a.conj()), AlgebraicNumber::from_int(25));
    let i = AlgebraicNumber::i();
    let one = AlgebraicNumber::one();
    assert_eq!(one.add(&i).add(&one.sub(&i)), AlgebraicNumber::from_int(2));
    let s2 = root_near(&poly(&[-2, 0, 1]), std::f64::consts::SQRT_2, 0.0);
    assert_eq!(s2.sub(&one).sign(), 1);
    assert_eq!(s2.mul(&s2), AlgebraicNumber::from_int(2));
    assert_eq!(s2.abs_sq(), AlgebraicNumber::from_int(2));
    let half = AlgebraicNumber::from_rational(Rational::new(1.into(), 2.into()));
    assert_eq!(s2.div(&s2.mul(&s2)).unwrap().mul(&s2), one);
    assert_eq!(half.add(&half), one);
}

#[test]
fn roots_of_unity_and_moduli() {
    assert_eq!(AlgebraicNumber::i().is_root_of_unity(), Some(4));
    let g = root_near(&poly(&[5, -6, 5]), 0.6, 0.8);
    assert_eq!(g.is_root_of_unity(), None);
    assert_eq!(AlgebraicNumber::one().is_root_of_unity(), Some(1));
    let a = root_near(&poly(&[25, -6, 1]), 3.0, 4.0);
    assert_eq!(a.compare_modulus(&AlgebraicNumber::from_int(5)), Ordering::Equal);
    let b = root_near(&poly(&[2, -2, 1]), 1.0, 1.0);
    assert_eq!(b.compare_modulus(&AlgebraicNumber::one()), Ordering::Greater);
    assert_eq!(AlgebraicNumber::zero().compare_modulus(&AlgebraicNumber::one()), Ordering::Less);
    assert_eq!(AlgebraicNumber::root_of_unity(1, 6).is_root_of_unity(), Some(6));
}
