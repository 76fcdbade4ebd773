use std::sync::Arc;

use twistlab::twist::*;
use twistlab::zoo::*;
use twistlab::*;

fn q(s: &str) -> Scalar {
    Scalar::parse(s, FieldSpec::Rational).unwrap()
}

fn kz2() -> Arc<Bialgebra> {
    group_algebra(&[2], FieldSpec::Rational).unwrap()
}

fn r_minus(a: &Arc<Bialgebra>, b: &Arc<Bialgebra>) -> TensorElement {
    TensorElement::from_labels(
        &[a.clone(), b.clone()],
        &[("1/2", &["1", "1"]), ("1/2", &["g", "1"]), ("1/2", &["1", "g"]), ("-1/2", &["g", "g"])],
    )
    .unwrap()
}

#[test]
fn twist_checks() {
    let (h, r) = sweedler(&q("1")).unwrap();
    sweedler_twist(&h, &q("3")).unwrap();
    r.as_twist().unwrap();
    let bad = TensorElement::from_labels(&[h.clone(), h.clone()], &[("1", &["1", "1"]), ("1", &["x", "1"])]).unwrap();
    match Twist::check(&h, &bad) {
        Err(Error::Validation(rep)) => assert!(!rep.check("normalization").unwrap().pass),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn twisted_bialgebras() {
    let (h, r) = sweedler(&q("2")).unwrap();
    assert_eq!(*Twist::trivial(&h).twisted_carrier().unwrap(), *h);
    assert_eq!(*r.as_twist().unwrap().twisted_carrier().unwrap(), *h.coopposite());
    let f = sweedler_twist(&h, &q("1/2")).unwrap();
    let back = f.inverse_on_twisted().unwrap();
    assert_eq!(*back.twisted_carrier().unwrap(), *h);
}

#[test]
fn twisted_rmatrices() {
    let (h, r) = sweedler(&q("-1")).unwrap();
    for d in ["0", "1", "-1", "1/2"] {
        let f = sweedler_twist(&h, &q(d)).unwrap();
        let rf = r.twisted_by(&f).unwrap();
        let expected = sweedler_r_element(rf.carrier(), &(&q("-1") + &(&q(d) * &q("2"))));
        assert_eq!(*rf.element(), expected);
        assert!(rf.is_triangular());
    }
    assert_eq!(r.twisted_by(&Twist::trivial(&h)).unwrap(), r);

    let k = kz2();
    let rm = RMatrix::triangular(&k, &r_minus(&k, &k)).unwrap();
    let f = rm.as_twist().unwrap();
    assert_eq!(*f.twisted_carrier().unwrap(), *k);
    assert_eq!(*rm.twisted_by(&f).unwrap().element(), *rm.element());
}

#[test]
fn cohomologous_twists() {
    let (h, _) = sweedler(&q("0")).unwrap();
    let f = sweedler_twist(&h, &q("2")).unwrap();
    let one = TensorElement::unit(&[h.clone()]);
    assert_eq!(f.by_unit(&one).unwrap(), f);
    let u = TensorElement::from_labels(&[h.clone()], &[("1", &["1"]), ("1", &["x"]), ("-1", &["gx"])]).unwrap();
    let fu = f.by_unit(&u).unwrap();
    assert_eq!(fu.witness(), Some(&u));
    assert_eq!(fu.by_unit(&u.inv().unwrap()).unwrap(), f);

    // conjugation by u is a bialgebra isomorphism H_F → H_{F^u}
    let (hf, hfu) = (f.twisted_carrier().unwrap(), fu.twisted_carrier().unwrap());
    let hat = conjugation_map(&u, &hf, &hfu).unwrap();
    assert!(hat.validate_bialgebra_map().passed());
    assert!(hat.is_invertible());

    let k = kz2();
    let g = TensorElement::from_labels(&[k.clone()], &[("1", &["g"])]).unwrap();
    assert!(Twist::trivial(&k).by_unit(&g).unwrap().is_trivial());
    let zero = TensorElement::zero(&[k.clone()]);
    assert!(matches!(Twist::trivial(&k).by_unit(&zero), Err(Error::NotInvertible)));
}

#[test]
fn weak_rmatrices_and_variants() {
    let k = kz2();
    let t = WeakRMatrix::trivial(&k, &k);
    assert!(t.is_central());
    let v = t.variants().unwrap();
    assert!(v.central_op.is_some() && v.central_inv.is_some());

    let w = WeakRMatrix::check(&k, &k, &r_minus(&k, &k)).unwrap();
    assert!(w.is_central());
    let v = w.variants().unwrap();
    assert_eq!(*v.central_op.unwrap().element(), w.element().op());
    w.ddr_expand().unwrap();
    assert_eq!(t.ddr_expand().unwrap(), TensorElement::unit(&[k.clone(), k.clone(), k.clone(), k.clone()]));

    // pushforward of R_λ along (Id, Id) into the noncommutative Sweedler algebra
    let (h, r) = sweedler(&q("1")).unwrap();
    let w = WeakRMatrix::check(&h, &h, r.element()).unwrap();
    assert!(!w.is_central());
    let v = w.variants().unwrap();
    assert!(v.central_op.is_none());
    assert!(WeakRMatrix::check(&h, &h, &w.element().op()).is_err());
    assert_eq!(**v.op.left(), *h.opposite());
    w.ddr_expand().unwrap();

    let bad = TensorElement::unit(&[k.clone(), k.clone()]).scale(&q("2"));
    assert!(WeakRMatrix::check(&k, &k, &bad).is_err());
}

#[test]
fn decomposition_of_assembled_twists() {
    let (h, _) = sweedler(&q("1")).unwrap();
    let k = kz2();
    let p = Bialgebra::tensor(&h, &k).unwrap();
    let fd = sweedler_twist(&h, &q("2")).unwrap();
    let tk = Twist::trivial(&k);
    let w = WeakRMatrix::trivial(&tk.twisted_carrier().unwrap(), &fd.twisted_carrier().unwrap());
    let f = assemble_twist(&p, &fd, &tk, &w).unwrap();
    let phi = phi_decompose(&p, &f).unwrap();
    assert_eq!(phi.f1, *fd.element());
    assert_eq!(phi.f2, TensorElement::unit(&[k.clone(), k.clone()]));
    assert_eq!(phi.g, TensorElement::unit(&[h.clone(), k.clone()]));
    assert_eq!(phi.h, TensorElement::unit(&[k.clone(), h.clone()]));
    assert!(canonical_form_check(&p, &f).unwrap());

    let trivial = Twist::trivial(&p);
    let phi = phi_decompose(&p, &trivial).unwrap();
    assert_eq!(phi.f1, TensorElement::unit(&[h.clone(), h.clone()]));
    assert!(canonical_form_check(&p, &trivial).unwrap());

    // after a gauge the canonical form is reached again through G
    let u = TensorElement::from_labels(&[h.clone(), k.clone()], &[("1", &["1", "1"]), ("1", &["x", "g"])])
        .unwrap()
        .merge(0, &p)
        .unwrap();
    let fu = f.by_unit(&u).unwrap();
    assert!(canonical_form_check(&p, &fu).unwrap());
}

#[test]
fn weak_rmatrix_as_middle_twist() {
    let k = kz2();
    let p = Bialgebra::tensor(&k, &k).unwrap();
    let w = WeakRMatrix::check(&k, &k, &r_minus(&k, &k)).unwrap();
    let t = Twist::trivial(&k);
    let f = assemble_twist(&p, &t, &t, &w).unwrap();
    let phi = phi_decompose(&p, &f).unwrap();
    assert_eq!(phi.g, TensorElement::unit(&[k.clone(), k.clone()]));
    assert_eq!(phi.h, *w.inverse());
    assert_eq!(phi.r, *w.element());
    assert!(canonical_form_check(&p, &f).unwrap());
}

#[test]
fn weak_context_is_enforced() {
    let (h, _) = sweedler(&q("1")).unwrap();
    let k = kz2();
    let p = Bialgebra::tensor(&h, &k).unwrap();
    let fd = sweedler_twist(&h, &q("1")).unwrap();
    let tk = Twist::trivial(&k);
    // validated over (kZ2, kZ2) rather than (kZ2, H_F)
    let w = WeakRMatrix::trivial(&k, &k);
    assert!(matches!(assemble_twist(&p, &fd, &tk, &w), Err(Error::WrongWeakContext(_))));
}

#[test]
fn assembled_rmatrices_round_trip() {
    let (h, r) = sweedler(&q("1/2")).unwrap();
    let k = kz2();
    let rk = RMatrix::triangular(&k, &r_minus(&k, &k)).unwrap();
    let p = Bialgebra::tensor(&h, &k).unwrap();
    let tilde = tensor_rmatrix(&p, &r, &rk).unwrap();
    assert!(tilde.is_triangular());
    let triple = decompose_rmatrix(&p, &tilde).unwrap();
    assert_eq!(triple.r1.element(), r.element());
    assert_eq!(triple.r2.element(), rk.element());
    assert_eq!(*triple.q.element(), TensorElement::unit(&[k.clone(), h.clone()]));

    let p2 = Bialgebra::tensor(&k, &k).unwrap();
    let one = RMatrix::trivial(&k).unwrap();
    let qw = WeakRMatrix::check(&k, &k, &r_minus(&k, &k)).unwrap();
    let s = assemble_rmatrix(&p2, &one, &one, &qw).unwrap();
    // R^op R = Q₀₃Q₁₂ here, never 1 for Q ≠ 1⊗1
    assert!(!s.is_triangular());
    assert!(!s.satisfies_triangularity());
    let triple = decompose_rmatrix(&p2, &s).unwrap();
    assert_eq!(triple.q, qw);
    assert_eq!(triple.r1.element(), one.element());

    let (hh, rr) = sweedler(&q("1")).unwrap();
    let nc = WeakRMatrix::check(&hh, &hh, rr.element()).unwrap();
    let p3 = Bialgebra::tensor(&hh, &hh).unwrap();
    assert!(matches!(assemble_rmatrix(&p3, &rr, &rr, &nc), Err(Error::NotCentral)));
}

#[test]
fn central_units() {
    let k = kz2();
    let rk = RMatrix::triangular(&k, &r_minus(&k, &k)).unwrap();
    let rep = central_unit_lemma_check(&rk, &TensorElement::unit(&[k.clone()])).unwrap();
    assert!(rep.passed());
    assert!(rep.check("R^h quasitriangular").unwrap().pass);
    let g = TensorElement::from_labels(&[k.clone()], &[("1", &["g"])]).unwrap();
    assert_eq!(rk.gauged(&g).unwrap(), *rk.element());
    assert!(central_unit_lemma_check(&rk, &g).unwrap().passed());

    let (h, r) = sweedler(&q("1")).unwrap();
    let gh = TensorElement::from_labels(&[h.clone()], &[("1", &["g"])]).unwrap();
    let rep = central_unit_lemma_check(&r, &gh).unwrap();
    assert!(rep.passed());
    assert!(rep.check("h central").unwrap().note.is_some());
    assert!(rep.check("Δ(h) central").unwrap().note.is_some());
}

#[test]
fn rmatrix_validation_reports_the_axiom() {
    let (h, _) = sweedler(&q("1")).unwrap();
    let k = kz2();
    let swap_like = TensorElement::from_labels(&[h.clone(), h.clone()], &[("1", &["g", "g"])]).unwrap();
    match RMatrix::quasitriangular(&h, &swap_like) {
        Err(Error::Validation(rep)) => assert!(!rep.passed()),
        other => panic!("unexpected {other:?}"),
    }
    let rk = RMatrix::quasitriangular(&k, &r_minus(&k, &k)).unwrap();
    assert!(rk.satisfies_triangularity());
}
