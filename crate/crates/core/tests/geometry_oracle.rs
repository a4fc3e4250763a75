use linterm_core::geometry::{
    affine_hull, integer_point, lp_optimize, orbit_hull_integer_point, ConvexRegion, GeometryBudget, IntegerPoint,
    LinearConstraint, LpResult, Relation,
};
use linterm_core::lattice::to_big;
use linterm_core::oracle::{
    box_search, cross_validate, load_corpus, simulate, CorpusCase, CrossConfig, Outcome, DEFAULT_POINT_STEP_CAP,
};
use linterm_core::{decide, parse_loop, Rational, Status};

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn q(n: i64) -> Rational {
    r(n, 1)
}

#[test]
fn linear_programs() {
    let c = [
        LinearConstraint::new(vec![q(2)], Relation::Ge, q(1)),
        LinearConstraint::new(vec![q(2)], Relation::Le, q(5)),
    ];
    match lp_optimize(&[q(1)], &c, 1) {
        LpResult::Optimal { value, point } => {
            assert_eq!(value, r(5, 2));
            assert_eq!(point, vec![r(5, 2)]);
        }
        other => panic!("{other:?}"),
    }
    let c = [LinearConstraint::new(vec![q(1)], Relation::Ge, q(0))];
    assert!(matches!(lp_optimize(&[q(1)], &c, 1), LpResult::Unbounded { .. }));
    let c = [
        LinearConstraint::new(vec![q(1)], Relation::Ge, q(1)),
        LinearConstraint::new(vec![q(1)], Relation::Le, q(0)),
    ];
    assert_eq!(lp_optimize(&[q(1)], &c, 1), LpResult::Infeasible);
}

fn interval(lo: Rational, hi: Rational) -> ConvexRegion {
    let mut reg = ConvexRegion::new(1);
    reg.inequalities.push((vec![q(1)], -lo));
    reg.inequalities.push((vec![q(-1)], hi));
    reg
}

#[test]
fn integer_points() {
    let b = GeometryBudget::default();
    assert_eq!(integer_point(&interval(r(1, 5), r(4, 5)), &b), IntegerPoint::Empty);
    match integer_point(&interval(r(1, 2), r(5, 2)), &b) {
        IntegerPoint::Found(x) => assert!(x == to_big(&[1]) || x == to_big(&[2])),
        other => panic!("{other:?}"),
    }
    let mut slab = ConvexRegion::new(2);
    slab.inequalities.push((vec![q(-1), q(2)], r(-1, 10)));
    slab.inequalities.push((vec![q(1), q(-2)], r(2, 5)));
    assert_eq!(integer_point(&slab, &b), IntegerPoint::Empty);
}

#[test]
fn affine_hulls() {
    let pts = |v: &[[i64; 2]]| v.iter().map(|p| vec![q(p[0]), q(p[1])]).collect::<Vec<_>>();
    let h = affine_hull(&pts(&[[0, 0], [1, 1], [2, 2]])).unwrap();
    assert_eq!(h.dimension(), 1);
    assert_eq!(h.directions[0][0], h.directions[0][1]);
    assert_eq!(affine_hull(&pts(&[[0, 0]])).unwrap().dimension(), 0);
    assert_eq!(affine_hull(&pts(&[[0, 0], [1, 0], [0, 1]])).unwrap().dimension(), 2);
}

#[test]
fn orbit_hull_points() {
    let up = parse_loop("vars x; while x > 0 do x := x + 1 end").unwrap();
    let h = orbit_hull_integer_point(&up, &to_big(&[1]), 64).unwrap();
    assert_eq!(h.point, to_big(&[3]));
    let shear = parse_loop("vars x, y; while x > 0 do x := x + y end").unwrap();
    let h = orbit_hull_integer_point(&shear, &to_big(&[1, 1]), 64).unwrap();
    assert_eq!(h.point, to_big(&[4, 1]));
    let fixed = parse_loop("vars x, y; while x > 0 do x := y; y := x end").unwrap();
    let h = orbit_hull_integer_point(&fixed, &to_big(&[2, 2]), 64).unwrap();
    assert_eq!((h.point, h.n_used), (to_big(&[2, 2]), 2));
}

#[test]
fn simulations_and_box_searches() {
    let down = parse_loop("vars x; while x > 0 do x := x - 1 end").unwrap();
    assert_eq!(simulate(&down, &to_big(&[5]), 100).outcome, Outcome::Terminated { step: 5 });
    assert_eq!(simulate(&down, &to_big(&[0]), 100).outcome, Outcome::Terminated { step: 0 });
    let up = parse_loop("vars x; while x > 0 do x := x + 1 end").unwrap();
    assert!(simulate(&up, &to_big(&[1]), 1000).survived());
    let hit = box_search(&up, 2, 100, DEFAULT_POINT_STEP_CAP).unwrap();
    assert_eq!(hit.survivor, Some(to_big(&[1])));
    assert_eq!(box_search(&down, 50, 10_000, DEFAULT_POINT_STEP_CAP).unwrap().survivor, None);
    let big = parse_loop("vars a, b, c, d, e; while a > 0 do a := a - 1 end").unwrap();
    assert!(box_search(&big, 50, 10, DEFAULT_POINT_STEP_CAP).is_err());
}

fn decide_examples() -> Vec<CorpusCase> {
    [
        ("up", "vars x; while x > 0 do x := x + 1 end", Status::NonTerminating),
        ("down", "vars x; while x > 0 do x := x - 1 end", Status::Terminating),
        (
            "rotation",
            "vars x, y; while x > 0 do x := 3*x - 4*y; y := 4*x + 3*y end",
            Status::Terminating,
        ),
        ("negate", "vars x; while x > 0 do x := -x end", Status::Terminating),
    ]
    .iter()
    .map(|(n, s, e)| CorpusCase::new(n, s, Some(*e), "").unwrap())
    .collect()
}

#[test]
fn cross_validation() {
    let cfg = CrossConfig {
        bound: 20,
        horizon: 2000,
        ..Default::default()
    };
    let report = cross_validate(&decide_examples(), decide, &cfg);
    assert_eq!((report.contradictions(), report.mismatches()), (0, 0));
    let mut wrong = decide_examples();
    wrong[1].expected = Some(Status::NonTerminating);
    let report = cross_validate(&wrong, decide, &cfg);
    assert_eq!(report.mismatches(), 1);
    assert!(report.cases[1].expectation_mismatch);
    let always_t = |_: &linterm_core::LoopProgram| {
        decide(&parse_loop("vars x; while x > 0 do x := x - 1 end").unwrap())
    };
    assert_eq!(cross_validate(&decide_examples(), always_t, &cfg).contradictions(), 1);
    assert!(cross_validate(&[], decide, &cfg).cases.is_empty());
}

#[test]
fn corpus_files_load() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let cases = load_corpus(&dir).unwrap();
    assert!(cases.len() >= 30);
    assert!(cases.iter().all(|c| c.expected.is_some()));
    assert!(load_corpus(std::path::Path::new("/nonexistent/corpus")).is_err());
}
