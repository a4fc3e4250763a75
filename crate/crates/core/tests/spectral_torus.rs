use linterm_core::algebra::interval::ComplexInterval;
use linterm_core::model::homogenize;
use linterm_core::spectral::{coefficient_table, dominance_structure, spectrum_of};
use linterm_core::torus::{
    density_probe, is_relation, normalize, normalize_values, relation_basis, torus_membership, unit_point, Membership,
    RelationLattice, SearchBudget, TorusSubgroup,
};
use linterm_core::{parse_loop, AlgebraicNumber, IntPolynomial, Rational};

fn gauss(a: i64, b: i64) -> AlgebraicNumber {
    let p = IntPolynomial::from_i64(&[a * a + b * b, -2 * a, 1]);
    AlgebraicNumber::all_roots_of_irreducible(&p)
        .into_iter()
        .find(|r| (r.approx().1 > 0.0) == (b > 0))
        .unwrap()
}

fn q(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

#[test]
fn spectra_of_examples() {
    let up = parse_loop("vars x; while x > 0 do x := x + 1 end").unwrap();
    let sp = spectrum_of(&homogenize(&up));
    assert_eq!(sp.eigenvalues, vec![AlgebraicNumber::one()]);
    assert_eq!((sp.multiplicities.clone(), sp.k_max), (vec![2], 2));
    let rot = parse_loop("vars x, y; while x > 0 do x := 3*x - 4*y; y := 4*x + 3*y end").unwrap();
    let sp = spectrum_of(&homogenize(&rot));
    assert_eq!(sp.len(), 3);
    assert!(sp.eigenvalues.contains(&gauss(3, 4)) && sp.eigenvalues.contains(&gauss(3, -4)));
    assert!(sp.multiplicities.iter().all(|&m| m == 1));
    let id = parse_loop("vars x; while x > 0 do x := x end").unwrap();
    let sp = spectrum_of(&homogenize(&id));
    assert_eq!(sp.multiplicities, vec![2]);
}

#[test]
fn dominance_orders() {
    let up = parse_loop("vars x; while x > 0 do x := x + 1 end").unwrap();
    let ds = dominance_structure(&spectrum_of(&homogenize(&up)));
    assert_eq!(ds.classes.iter().map(|c| c.members()).collect::<Vec<_>>(), vec![vec![(0, 0)], vec![(1, 0)]]);
    let rot = parse_loop("vars x, y; while x > 0 do x := 3*x - 4*y; y := 4*x + 3*y end").unwrap();
    let sp = spectrum_of(&homogenize(&rot));
    let ds = dominance_structure(&sp);
    assert_eq!(ds.classes.len(), 2);
    assert_eq!(ds.classes[0].eigen.len(), 1);
    assert!(sp.eigenvalues[ds.classes[0].eigen[0]].is_one());
    assert_eq!(ds.classes[1].eigen.len(), 2);
    let flip = parse_loop("vars x, y; while x > 0 do x := 2*x; y := -2*y end").unwrap();
    let sp = spectrum_of(&homogenize(&flip));
    let ds = dominance_structure(&sp);
    assert_eq!(ds.classes.last().unwrap().eigen.len(), 2);
}

#[test]
fn coefficient_examples() {
    for (src, h1) in [("x + 1", 1), ("x - 1", -1)] {
        let p = parse_loop(&format!("vars x; while x > 0 do x := {src} end")).unwrap();
        let h = homogenize(&p);
        let sp = spectrum_of(&h);
        let t = coefficient_table(&h, &sp);
        let x = [q(7)];
        assert_eq!(sp.field_of(0).as_rational(&t.eval_field(&sp, 0, 0, 0, &x)), Some(q(7)));
        assert_eq!(sp.field_of(0).as_rational(&t.eval_field(&sp, 0, 1, 0, &x)), Some(q(h1)));
    }
    let p = parse_loop("vars x; while x > 0 do x := 2*x end").unwrap();
    let h = homogenize(&p);
    let sp = spectrum_of(&h);
    let t = coefficient_table(&h, &sp);
    let two = sp.eigenvalues.iter().position(|l| *l == AlgebraicNumber::from_int(2)).unwrap();
    let one = 1 - two;
    assert_eq!(sp.field_of(two).as_rational(&t.eval_field(&sp, 0, 0, two, &[q(3)])), Some(q(3)));
    assert!(t.is_zero_at(&sp, 0, 0, one, &[q(3)]));
}

#[test]
fn normalization() {
    let rot = parse_loop("vars x, y; while x > 0 do x := 3*x - 4*y; y := 4*x + 3*y end").unwrap();
    let g = normalize(&spectrum_of(&homogenize(&rot)));
    assert!(g.gammas.iter().any(|z| z.min_poly() == &IntPolynomial::from_i64(&[5, -6, 5])));
    let neg = normalize_values(vec![AlgebraicNumber::from_int(-2)], vec![0]);
    assert_eq!(neg.gammas[0], AlgebraicNumber::from_int(-1));
    let g = normalize_values(vec![gauss(1, 1), gauss(1, -1)], vec![1, 0]);
    assert_eq!(g.gammas[0].is_root_of_unity(), Some(8));
}

#[test]
fn relations_and_bases() {
    let i = normalize_values(vec![gauss(0, 1), gauss(0, -1)], vec![1, 0]);
    assert!(is_relation(&i, &[1, 1]));
    assert!(!is_relation(&i, &[1, 0]));
    let (l, complete) = relation_basis(&i, &SearchBudget::default());
    assert!(complete);
    for v in [[1, 1], [0, 4], [4, 0], [1, -3]] {
        assert!(l.contains(&v));
    }
    assert!(!l.contains(&[1, 0]) && !l.contains(&[2, 0]));
    let r = normalize_values(vec![gauss(3, 4), gauss(3, -4)], vec![1, 0]);
    assert!(is_relation(&r, &[1, 1]));
    assert!(!is_relation(&r, &[4, 0]));
    let (l, complete) = relation_basis(&r, &SearchBudget::default());
    assert!(complete);
    assert_eq!(l.rank, 1);
    assert!(l.contains(&[1, 1]) && !l.contains(&[2, 0]));
    let one = normalize_values(vec![AlgebraicNumber::one()], vec![0]);
    let (l, _) = relation_basis(&one, &SearchBudget::default());
    assert_eq!(l.basis, vec![vec![1]]);
}

#[test]
fn membership_and_density() {
    let t = TorusSubgroup::new(
        RelationLattice {
            basis: vec![vec![1, 1]],
            rank: 1,
        },
        2,
    );
    let pt = |a: f64| unit_point(a, 1e-15);
    assert_eq!(torus_membership(&t, &[pt(0.3), pt(-0.3)]), Membership::Inside);
    assert_eq!(torus_membership(&t, &[pt(0.16), pt(0.16)]), Membership::Outside);
    let free = TorusSubgroup::new(RelationLattice { basis: vec![], rank: 0 }, 2);
    let wide: Vec<ComplexInterval> = vec![pt(0.1), pt(0.7)];
    assert_eq!(torus_membership(&free, &wide), Membership::Inside);

    let i = normalize_values(vec![gauss(0, 1), gauss(0, -1)], vec![1, 0]);
    let (l, _) = relation_basis(&i, &SearchBudget::default());
    let ti = TorusSubgroup::new(l, 2);
    assert_eq!(density_probe(&i, &ti, &[0.5, 0.5], 1e-3, 100), Some(2));
    let one = normalize_values(vec![AlgebraicNumber::one()], vec![0]);
    let (l, _) = relation_basis(&one, &SearchBudget::default());
    assert_eq!(density_probe(&one, &TorusSubgroup::new(l, 1), &[0.0], 1e-3, 10), Some(0));
    let r = normalize_values(vec![gauss(3, 4), gauss(3, -4)], vec![1, 0]);
    let (l, _) = relation_basis(&r, &SearchBudget::default());
    assert!(density_probe(&r, &TorusSubgroup::new(l, 2), &[0.5, 0.5], 0.05, 100_000).is_some());
}
