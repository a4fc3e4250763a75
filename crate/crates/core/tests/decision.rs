mod common;

use linterm_core::decision::{
    candidates, decide_with, phi_inf, ClassTorus, DecisionConfig, PhiForm, SignClaim, Status, WitnessKind,
};
use linterm_core::oracle::simulate;
use linterm_core::torus::SearchBudget;
use linterm_core::{decide, parse_loop, Error, Rational};

use common::analysis;

fn q(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

fn inf_sign(src: &str, x: &[i64]) -> (SignClaim, f64) {
    let p = parse_loop(src).unwrap();
    let a = analysis(&p).unwrap();
    let xq: Vec<Rational> = x.iter().map(|&v| q(v)).collect();
    let e = a.dominant_class(0, &xq).unwrap();
    let phi = PhiForm::new(&a.spectrum, &a.dominance, &a.table, 0, e);
    let ct = ClassTorus::new(&a.normalized, &a.dominance.classes[e].eigen, &SearchBudget::default());
    let r = phi_inf(&phi, &a.spectrum, &ct, &xq, 100_000);
    (r.sign, r.lower)
}

#[test]
fn dominant_classes() {
    let up = analysis(&parse_loop("vars x; while x > 0 do x := x + 1 end").unwrap()).unwrap();
    let e = up.dominant_class(0, &[q(5)]).unwrap();
    assert_eq!(up.dominance.classes[e].members(), vec![(1, 0)]);
    let dbl = analysis(&parse_loop("vars x; while x > 0 do x := 2*x end").unwrap()).unwrap();
    assert_eq!(dbl.dominant_class(0, &[q(0)]), None);
    let e = dbl.dominant_class(0, &[q(3)]).unwrap();
    let j = dbl.dominance.classes[e].eigen[0];
    assert_eq!(dbl.spectrum.eigenvalues[j], linterm_core::AlgebraicNumber::from_int(2));
}

#[test]
fn infimum_signs() {
    let (s, lo) = inf_sign("vars x; while x > 0 do x := x + 1 end", &[4]);
    assert_eq!(s, SignClaim::Positive);
    assert!((lo - 1.0).abs() < 1e-9);
    let (s, _) = inf_sign("vars x; while x > 0 do x := x - 1 end", &[4]);
    assert_eq!(s, SignClaim::Negative);
    let (s, _) = inf_sign("vars x, y; while x > 0 do x := 3*x - 4*y; y := 4*x + 3*y end", &[1, 0]);
    assert_eq!(s, SignClaim::Negative);
    let (s, _) = inf_sign(
        "vars x, y, z; while z - x > 0 do x := 3*x - 4*y; y := 4*x + 3*y; z := 5*z end",
        &[3, 4, 5],
    );
    assert_eq!(s, SignClaim::Touching);
}

#[test]
fn candidate_classes_need_a_positive_real_eigenvalue() {
    let rot = analysis(&parse_loop("vars x, y; while x > 0 do x := 3*x - 4*y; y := 4*x + 3*y end").unwrap()).unwrap();
    assert!(candidates(&rot, 0).is_empty());
    let shifted =
        analysis(&parse_loop("vars x, y; while x + 2 > 0 do x := 3*x - 4*y; y := 4*x + 3*y end").unwrap()).unwrap();
    let c = candidates(&shifted, 0);
    assert_eq!(c.len(), 1);
    assert_eq!(c[0].class, 0);
    let up = analysis(&parse_loop("vars x; while x > 0 do x := x + 1 end").unwrap()).unwrap();
    assert_eq!(candidates(&up, 0).len(), 2);
}

#[test]
fn verdicts_and_certificates() {
    let v = decide(&parse_loop("vars x; while x > 0 do x := x + 1 end").unwrap()).unwrap();
    assert_eq!(v.status, Status::NonTerminating);
    assert!(matches!(v.certificate.witness_kind, Some(WitnessKind::Threshold { .. })));
    let v = decide(&parse_loop("vars x; while x > 0 do x := x - 1 end").unwrap()).unwrap();
    assert_eq!((v.status, v.witness), (Status::Terminating, None));
    let v = decide(&parse_loop("vars x, y; while x > 0 do x := 3*x - 4*y; y := 4*x + 3*y end").unwrap()).unwrap();
    assert_eq!(v.status, Status::Terminating);
    assert_eq!(v.certificate.relations.len(), 1);
    let v = decide(&parse_loop("vars x; while x > 0 do x := -x end").unwrap()).unwrap();
    assert_eq!(v.status, Status::Terminating);
    assert_eq!(v.certificate.power, 2);
}

#[test]
fn witnesses_survive() {
    let srcs = [
        "vars x, y; while x > 0 && y > 0 do x := x + y; y := x end",
        "vars x, y, z; while z - x > 0 do x := 3*x - 4*y; y := 4*x + 3*y; z := 5*z end",
        "vars x, y; while y > 0 && x >= 0 do x := -x; y := y + 1 end",
        "vars x; while x > 0 do x := 2*x - 1 end",
    ];
    for s in srcs {
        let p = parse_loop(s).unwrap();
        let v = decide(&p).unwrap();
        assert_eq!(v.status, Status::NonTerminating, "{s}");
        assert!(simulate(&p, v.witness.as_ref().unwrap(), 5000).survived(), "{s}");
    }
}

#[test]
fn constant_guards() {
    let v = decide(&parse_loop("vars x; while 0 > 1 do x := x + 1 end").unwrap()).unwrap();
    assert_eq!(v.status, Status::Terminating);
    let v = decide(&parse_loop("vars x; while 2 > 1 do x := x - 1 end").unwrap()).unwrap();
    assert_eq!(v.status, Status::NonTerminating);
}

#[test]
fn strict_mode_turns_unknown_into_errors() {
    let p = parse_loop("vars x, y; while x > 0 do x := 3*x - 4*y; y := 4*x + 3*y end").unwrap();
    let cfg = DecisionConfig {
        power_cap: 1,
        strict: true,
        ..Default::default()
    };
    let spin = parse_loop("vars x; while x > 0 do x := -x end").unwrap();
    assert!(matches!(decide_with(&spin, &cfg), Err(Error::Budget(_))));
    assert_eq!(decide_with(&p, &cfg).unwrap().status, Status::Terminating);
}
