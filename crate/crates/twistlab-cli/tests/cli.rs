use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;
use twistlab::document::Document;
use twistlab::twist::*;
use twistlab::zoo::*;
use twistlab::*;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twistlab"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn report(dir: &Path, args: &[&str]) -> (i32, Value) {
    let mut a = args.to_vec();
    a.push("--json");
    let o = run(dir, &a);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)));
    (code(&o), v)
}

fn failing(v: &Value) -> Vec<String> {
    v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] == false)
        .map(|c| c["name"].as_str().unwrap().to_string())
        .collect()
}

fn q(s: &str) -> Scalar {
    Scalar::parse(s, FieldSpec::Rational).unwrap()
}

fn example(dir: &Path, out: &str, args: &[&str]) -> PathBuf {
    let mut a = vec!["example"];
    a.extend_from_slice(args);
    a.extend_from_slice(&["-o", out]);
    let o = run(dir, &a);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    dir.join(out)
}

#[test]
fn check_sweedler_family() {
    let t = TempDir::new().unwrap();
    for l in ["0", "1", "-1", "2", "1/2"] {
        example(t.path(), "sw.json", &["sweedler", "--lambda", l]);
        let (c, v) = report(t.path(), &["check", "sw.json", "--mode", "triangular"]);
        assert_eq!(c, 0);
        assert!(failing(&v).is_empty());
        assert_eq!(v["command"], "check");
        assert_eq!(v["inputs"][0], "sw.json");
    }
}

#[test]
fn broken_comultiplication_exits_one() {
    let t = TempDir::new().unwrap();
    let p = example(t.path(), "sw.json", &["sweedler", "--lambda", "1"]);
    let mut raw: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    // Δ(x) = x⊗x
    raw["comult"][2] = serde_json::json!([[2, 2, "1"]]);
    std::fs::write(t.path().join("broken.json"), serde_json::to_string(&raw).unwrap()).unwrap();
    let (c, v) = report(t.path(), &["check", "broken.json"]);
    assert_eq!(c, 1);
    let bad = failing(&v);
    assert!(bad.contains(&"counitality".to_string()), "{bad:?}");
    assert!(v["error"]["message"].as_str().unwrap().contains("counitality"));
    let o = run(t.path(), &["check", "broken.json"]);
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL  counitality"));
}

#[test]
fn input_errors_exit_two() {
    let t = TempDir::new().unwrap();
    assert_eq!(code(&run(t.path(), &["check", "nosuch.json"])), 2);
    std::fs::write(t.path().join("junk.json"), "{\"field\": 3}").unwrap();
    assert_eq!(code(&run(t.path(), &["check", "junk.json"])), 2);
    example(t.path(), "k.json", &["group_algebra", "--orders", "2"]);
    assert_eq!(code(&run(t.path(), &["check", "k.json", "--mode", "twist:F"])), 2);
    assert_eq!(code(&run(t.path(), &["check", "k.json", "--mode", "sideways"])), 2);
    assert_eq!(code(&run(t.path(), &["example", "nosuch"])), 2);
    assert_eq!(code(&run(t.path(), &["example", "base_field", "--lambda", "1"])), 2);
    assert_eq!(code(&run(t.path(), &["example", "group_algebra", "--field", "cyclotomic:x"])), 2);
    assert_eq!(code(&run(t.path(), &["frobnicate"])), 2);
}

#[test]
fn twisting_moves_lambda() {
    let t = TempDir::new().unwrap();
    for (l, d, expected) in [("1/2", "1", "5/2"), ("0", "-1", "-2"), ("-1", "1/2", "0")] {
        example(t.path(), "sw.json", &["sweedler", "--lambda", l, "--d", d]);
        let o = run(t.path(), &["twist", "sw.json", "--element", "F", "-o", "tw.json"]);
        assert_eq!(code(&o), 0);
        let tw = Document::load(&t.path().join("tw.json")).unwrap();
        let h = sweedler_algebra(FieldSpec::Rational);
        let want = sweedler_r_element(&h, &q(expected));
        assert_eq!(tw.element("R").unwrap(), &want.reinterpret(&[tw.algebra.clone(), tw.algebra.clone()]).unwrap());
        // Sweedler is twisted by F_d onto an isomorphic copy; the tables match
        assert_eq!(code(&run(t.path(), &["check", "tw.json", "--mode", "triangular"])), 0);
    }
}

#[test]
fn trivial_twist_keeps_the_presentation() {
    let t = TempDir::new().unwrap();
    let h = group_algebra(&[2, 2], FieldSpec::Rational).unwrap();
    let one = TensorElement::unit(&[h.clone(), h.clone()]);
    let doc = Document::new(&h).with_element("F", &one).unwrap();
    doc.save(&t.path().join("k.json")).unwrap();
    assert_eq!(code(&run(t.path(), &["twist", "k.json", "--element", "F", "-o", "out.json"])), 0);
    let out = std::fs::read_to_string(t.path().join("out.json")).unwrap();
    assert_eq!(out, Document::new(&h).to_json());
}

#[test]
fn non_twists_exit_one() {
    let t = TempDir::new().unwrap();
    let h = sweedler_algebra(FieldSpec::Rational);
    let bad = TensorElement::from_labels(&[h.clone(), h.clone()], &[("1", &["1", "1"]), ("1", &["x", "1"])]).unwrap();
    Document::new(&h).with_element("F", &bad).unwrap().save(&t.path().join("bad.json")).unwrap();
    let (c, v) = report(t.path(), &["twist", "bad.json", "--element", "F", "-o", "out.json"]);
    assert_eq!(c, 1);
    assert!(failing(&v).contains(&"normalization".to_string()));
    assert!(!t.path().join("out.json").exists());
}

fn r_minus(k: &std::sync::Arc<Bialgebra>) -> TensorElement {
    TensorElement::from_labels(
        &[k.clone(), k.clone()],
        &[("1/2", &["1", "1"]), ("1/2", &["g", "1"]), ("1/2", &["1", "g"]), ("-1/2", &["g", "g"])],
    )
    .unwrap()
}

#[test]
fn decompose_assembled_twists() {
    let t = TempDir::new().unwrap();
    let a = example(t.path(), "a.json", &["sweedler", "--lambda", "1"]);
    let b = example(t.path(), "b.json", &["group_algebra", "--orders", "2"]);
    let (h, k) = (Document::load(&a).unwrap().algebra, Document::load(&b).unwrap().algebra);
    let p = Bialgebra::tensor(&h, &k).unwrap();
    let fd = sweedler_twist(&h, &q("2")).unwrap();
    let tk = Twist::trivial(&k);
    let w = WeakRMatrix::trivial(&k, &fd.twisted_carrier().unwrap());
    let f = assemble_twist(&p, &fd, &tk, &w).unwrap();
    Document::new(&p).with_element("F", f.element()).unwrap().save(&t.path().join("p.json")).unwrap();
    let (c, v) = report(t.path(), &["decompose", "a.json", "b.json", "--element", "p.json:F"]);
    assert_eq!(c, 0, "{v}");
    let comp = &v["outputs"]["components"];
    assert_eq!(comp["F1"], fd.element().to_string());
    assert_eq!(comp["F2"], TensorElement::unit(&[k.clone(), k.clone()]).to_string());
    assert!(failing(&v).is_empty());

    // a twist that is not a twist on the product
    let bad = TensorElement::unit(&[p.clone(), p.clone()]).scale(&q("2"));
    Document::new(&p).with_element("F", &bad).unwrap().save(&t.path().join("p.json")).unwrap();
    assert_eq!(code(&run(t.path(), &["decompose", "a.json", "b.json", "--element", "p.json:F"])), 1);
    // element over the wrong presentation
    assert_eq!(code(&run(t.path(), &["decompose", "a.json", "b.json", "--element", "a.json:R"])), 2);
    assert_eq!(code(&run(t.path(), &["decompose", "a.json", "b.json", "--element", "F"])), 2);
}

#[test]
fn decompose_weak_middle_twist() {
    let t = TempDir::new().unwrap();
    let a = example(t.path(), "k.json", &["group_algebra", "--orders", "2"]);
    let k = Document::load(&a).unwrap().algebra;
    let p = Bialgebra::tensor(&k, &k).unwrap();
    let w = WeakRMatrix::check(&k, &k, &r_minus(&k)).unwrap();
    let tr = Twist::trivial(&k);
    let f = assemble_twist(&p, &tr, &tr, &w).unwrap();
    Document::new(&p).with_element("F", f.element()).unwrap().save(&t.path().join("p.json")).unwrap();
    let (c, v) = report(t.path(), &["decompose", "k.json", "k.json", "--element", "p.json:F"]);
    assert_eq!(c, 0);
    let comp = &v["outputs"]["components"];
    assert_eq!(comp["H"], w.inverse().to_string());
    assert_eq!(comp["G"], TensorElement::unit(&[k.clone(), k.clone()]).to_string());
}

#[test]
fn decompose_tensor_rmatrix() {
    let t = TempDir::new().unwrap();
    let a = example(t.path(), "a.json", &["sweedler", "--lambda", "1/2"]);
    let b = example(t.path(), "b.json", &["group_algebra", "--orders", "2"]);
    let (da, db) = (Document::load(&a).unwrap(), Document::load(&b).unwrap());
    let r1 = RMatrix::triangular(&da.algebra, da.element("R").unwrap()).unwrap();
    let r2 = RMatrix::triangular(&db.algebra, db.element("R").unwrap()).unwrap();
    let p = Bialgebra::tensor(&da.algebra, &db.algebra).unwrap();
    let tilde = tensor_rmatrix(&p, &r1, &r2).unwrap();
    Document::new(&p).with_element("R", tilde.element()).unwrap().save(&t.path().join("p.json")).unwrap();
    let (c, v) = report(t.path(), &["decompose", "a.json", "b.json", "--element", "p.json:R", "--rmatrix"]);
    assert_eq!(c, 0);
    let comp = &v["outputs"]["components"];
    assert_eq!(comp["Q"], TensorElement::unit(&[db.algebra.clone(), da.algebra.clone()]).to_string());
    assert_eq!(comp["R1"], r1.element().to_string());
}

#[test]
fn products_of_triangular_documents() {
    let t = TempDir::new().unwrap();
    example(t.path(), "a.json", &["sweedler", "--lambda", "1"]);
    example(t.path(), "b.json", &["group_algebra", "--orders", "2"]);
    let (c, v) = report(t.path(), &["product", "a.json", "b.json", "-o", "p.json"]);
    assert_eq!(c, 0, "{v}");
    assert_eq!(v["outputs"]["dim"], 8);
    let (c, v) = report(t.path(), &["check", "p.json", "--mode", "triangular"]);
    assert_eq!(c, 0, "{v}");
    for pi in ["pi1", "pi2"] {
        let mode = format!("morphism:{pi}");
        assert_eq!(code(&run(t.path(), &["check", "p.json", "--mode", &mode])), 0);
    }
    let p = Document::load(&t.path().join("p.json")).unwrap();
    assert!(p.algebra.parts().is_some());

    example(t.path(), "one.json", &["base_field"]);
    let (c, v) = report(t.path(), &["product", "a.json", "one.json", "-o", "a1.json"]);
    assert_eq!(c, 0);
    assert_eq!(v["outputs"]["dim"], 4);

    // inputs must carry triangular structures
    let h = sweedler_algebra(FieldSpec::Rational);
    let not_tri = TensorElement::from_labels(&[h.clone(), h.clone()], &[("1", &["1", "1"]), ("1", &["x", "x"])]).unwrap();
    Document::new(&h).with_element("R", &not_tri).unwrap().save(&t.path().join("bad.json")).unwrap();
    assert_eq!(code(&run(t.path(), &["product", "bad.json", "b.json"])), 1);
}

#[test]
fn product_with_diagonal() {
    let t = TempDir::new().unwrap();
    example(t.path(), "a.json", &["sweedler", "--lambda", "1", "--d", "0"]);
    example(t.path(), "b.json", &["sweedler", "--lambda", "2", "--d", "1"]);
    let (h, r) = sweedler(&q("1")).unwrap();
    Document::new(&h)
        .with_element("R", r.element())
        .unwrap()
        .with_morphism("c1", "a.json", &sweedler_morphism(&h, &q("1")).unwrap(), Some("F"))
        .with_morphism("c2", "b.json", &sweedler_morphism(&h, &q("2")).unwrap(), Some("F"))
        .save(&t.path().join("c.json"))
        .unwrap();
    for m in ["morphism:c1", "morphism:c2"] {
        assert_eq!(code(&run(t.path(), &["check", "c.json", "--mode", m])), 0);
    }
    let (c, v) = report(t.path(), &["product", "a.json", "b.json", "--diag", "c.json:c1", "c.json:c2", "-o", "p.json"]);
    assert_eq!(c, 0, "{v}");
    let names: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"first projection of the diagonal"));
    assert!(names.contains(&"second projection of the diagonal"));
    assert!(failing(&v).is_empty());

    // a 1-cell whose target structure is wrong
    Document::new(&h)
        .with_element("R", r.element())
        .unwrap()
        .with_morphism("c", "b.json", &sweedler_morphism(&h, &q("1")).unwrap(), Some("F"))
        .save(&t.path().join("d.json"))
        .unwrap();
    assert_eq!(code(&run(t.path(), &["check", "d.json", "--mode", "morphism:c"])), 1);
}

#[test]
fn examples_export_fixtures() {
    let t = TempDir::new().unwrap();
    let p = example(t.path(), "g.json", &["group_algebra", "--orders", "3,3", "--field", "cyclotomic:3"]);
    let d = Document::load(&p).unwrap();
    assert_eq!(d.algebra.dim(), 9);
    assert_eq!(*d.algebra, *group_algebra(&[3, 3], FieldSpec::cyclotomic(3).unwrap()).unwrap());
    let p = example(t.path(), "one.json", &["base_field"]);
    assert_eq!(Document::load(&p).unwrap().algebra.dim(), 1);
    example(t.path(), "gamma.json", &["gamma_twist", "--n", "3"]);
    assert_eq!(code(&run(t.path(), &["check", "gamma.json", "--mode", "twist:F"])), 0);
    assert_eq!(code(&run(t.path(), &["check", "gamma.json", "--mode", "morphism:swap"])), 0);

    let o = run(t.path(), &["example", "sweedler", "--lambda", "1/2"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("document:"));
    let (_, v) = report(t.path(), &["example", "sweedler", "--lambda", "1/2"]);
    let text = v["outputs"]["document"].as_str().unwrap();
    assert_eq!(Document::from_json(text).unwrap().to_json(), text);
}

#[test]
fn weak_modes() {
    let t = TempDir::new().unwrap();
    let a = example(t.path(), "k.json", &["group_algebra", "--orders", "2"]);
    let k = Document::load(&a).unwrap().algebra;
    Document::new(&k).with_element("W", &r_minus(&k)).unwrap().save(&t.path().join("w.json")).unwrap();
    assert_eq!(code(&run(t.path(), &["check", "w.json", "--mode", "weak:W"])), 0);
    let p = Bialgebra::tensor(&k, &k).unwrap();
    let merged = r_minus(&k).merge(0, &p).unwrap();
    Document::new(&p).with_element("W", &merged).unwrap().save(&t.path().join("pw.json")).unwrap();
    assert_eq!(code(&run(t.path(), &["check", "pw.json", "--mode", "weak:W:split"])), 0);
    assert_eq!(code(&run(t.path(), &["check", "w.json", "--mode", "weak:W:split"])), 2);
    let doubled = r_minus(&k).scale(&q("2"));
    Document::new(&k).with_element("W", &doubled).unwrap().save(&t.path().join("w2.json")).unwrap();
    assert_eq!(code(&run(t.path(), &["check", "w2.json", "--mode", "weak:W"])), 1);
}
