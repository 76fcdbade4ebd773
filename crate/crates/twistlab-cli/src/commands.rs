use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde_json::{json, Value};
use twistlab::document::Document;
use twistlab::twist::*;
use twistlab::twtr::{compose, diagonal, validate_twisted_morphism, Product, TwistedMorphism};
use twistlab::zoo;
use twistlab::{Bialgebra, Check, Error, FieldSpec, Scalar, TensorElement};

use crate::output::{Failure, Report};

type Outcome = Result<(), Failure>;

fn input(e: impl std::fmt::Display) -> Failure {
    Failure::Input(e.to_string())
}

fn load(path: &Path) -> Result<Document, Failure> {
    Document::load(path).map_err(input)
}

fn base_dir(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

fn element<'a>(doc: &'a Document, name: &str) -> Result<&'a TensorElement, Failure> {
    doc.element(name).map_err(input)
}

/// `FILE:NAME`, split at the last colon.
fn qualified(spec: &str) -> Result<(PathBuf, String), Failure> {
    match spec.rsplit_once(':') {
        Some((f, n)) if !f.is_empty() && !n.is_empty() => Ok((PathBuf::from(f), n.to_string())),
        _ => Err(Failure::Input(format!("expected FILE:NAME, got `{spec}`"))),
    }
}

fn write_doc(rep: &mut Report, doc: &Document, out: Option<&Path>) -> Outcome {
    match out {
        Some(p) => {
            doc.save(p).map_err(input)?;
            rep.output("written", json!(p.display().to_string()));
        }
        None => rep.output("document", json!(doc.to_json())),
    }
    Ok(())
}

fn rmatrix(rep: &mut Report, doc: &Document, triangular: bool) -> Result<RMatrix, Failure> {
    let r = element(doc, "R")?;
    let f = if triangular {
        RMatrix::triangular(&doc.algebra, r)
    } else {
        RMatrix::quasitriangular(&doc.algebra, r)
    };
    f.map_err(|e| rep.absorb(e))
}

/// The document's R, flagged triangular when it is.
fn structure(rep: &mut Report, doc: &Document) -> Result<RMatrix, Failure> {
    let r = rmatrix(rep, doc, false)?;
    if r.satisfies_triangularity() {
        return rmatrix(rep, doc, true);
    }
    Ok(r)
}

fn bialgebra(rep: &mut Report, doc: &Document) -> Outcome {
    let r = doc.algebra.validate();
    rep.extend(&r);
    rep.verdict()
}

/// The 1-cell stored as morphism `name` of `doc`, with the R-matrices of
/// both ends when both documents carry one.
fn onecell(rep: &mut Report, doc: &Document, path: &Path, name: &str) -> Result<TwistedMorphism, Failure> {
    let (map, target) = doc.morphism(name, &base_dir(path)).map_err(input)?;
    let entry = &doc.morphisms[name];
    let twist = match &entry.twist {
        Some(t) => Twist::check(&target.algebra, element(&target, t)?).map_err(|e| rep.absorb(e))?,
        None => Twist::trivial(&target.algebra),
    };
    let res = if doc.elements.contains_key("R") && target.elements.contains_key("R") {
        let rs = structure(rep, doc)?;
        let rt = structure(rep, &target)?;
        TwistedMorphism::with_structures(map, twist, &rs, &rt)
    } else {
        TwistedMorphism::new(map, twist)
    };
    res.map_err(|e| rep.absorb(e))
}

pub fn check(rep: &mut Report, file: &Path, mode: &str) -> Outcome {
    let doc = load(file)?;
    let h = doc.algebra.clone();
    rep.output("presentation", json!(h.name()));
    bialgebra(rep, &doc)?;
    let parts: Vec<&str> = mode.split(':').collect();
    match parts.as_slice() {
        ["bialgebra"] => {}
        ["quasitriangular"] | ["triangular"] => {
            let r = element(&doc, "R")?;
            rep.extend(&validate_rmatrix(&h, r, parts[0] == "triangular").0);
        }
        ["twist", name] => rep.extend(&validate_twist(&h, element(&doc, name)?).0),
        ["weak", name] => rep.extend(&validate_weak_rmatrix(&h, &h, element(&doc, name)?).0),
        ["weak", name, "split"] => {
            let (a, b) = h
                .parts()
                .ok_or_else(|| Failure::Input("weak:NAME:split needs a document with factors".into()))?;
            let el = element(&doc, name)?;
            if el.arity() != 1 {
                return Err(Failure::Input(format!("`{name}` must have arity 1 to be split")));
            }
            let split = el.split(0).map_err(input)?;
            rep.extend(&validate_weak_rmatrix(a, b, &split).0);
        }
        ["morphism", name] => {
            let (map, target) = doc.morphism(name, &base_dir(file)).map_err(input)?;
            let twist = match &doc.morphisms[*name].twist {
                Some(t) => {
                    let el = element(&target, t)?;
                    rep.extend(&validate_twist(&target.algebra, el).0);
                    rep.verdict()?;
                    Twist::check(&target.algebra, el).map_err(|e| rep.absorb(e))?
                }
                None => Twist::trivial(&target.algebra),
            };
            let structures = if doc.elements.contains_key("R") && target.elements.contains_key("R") {
                Some((structure(rep, &doc)?, structure(rep, &target)?))
            } else {
                None
            };
            let r = validate_twisted_morphism(&map, &twist, structures.as_ref().map(|(a, b)| (a, b)));
            rep.extend(&r);
        }
        _ => return Err(Failure::Input(format!("unknown mode `{mode}`"))),
    }
    rep.verdict()
}

pub fn twist(rep: &mut Report, file: &Path, name: &str, out: Option<&Path>) -> Outcome {
    let doc = load(file)?;
    let h = doc.algebra.clone();
    let el = element(&doc, name)?;
    rep.extend(&validate_twist(&h, el).0);
    rep.verdict()?;
    let f = Twist::check(&h, el).map_err(|e| rep.absorb(e))?;
    let hf = f.twisted_carrier().map_err(|e| rep.absorb(e))?.with_name(h.name());
    let mut res = Document::new(&hf);
    if doc.elements.contains_key("R") {
        let r = rmatrix(rep, &doc, false)?;
        let rf = r.twisted_by(&f).map_err(|e| rep.absorb(e))?;
        rep.push(Check::pass("twisted R is quasitriangular"));
        rep.output("R", json!(rf.element().to_string()));
        res = res.with_element("R", rf.element()).map_err(input)?;
    }
    write_doc(rep, &res, out)
}

pub fn decompose(rep: &mut Report, a: &Path, b: &Path, spec: &str, as_rmatrix: bool) -> Outcome {
    let (da, db) = (load(a)?, load(b)?);
    let p = Bialgebra::tensor(&da.algebra, &db.algebra).map_err(input)?;
    let (path, name) = qualified(spec)?;
    let src = load(&path)?;
    if *src.algebra != *p {
        return Err(Failure::Input(format!(
            "{} is not a document over {}⊗{}",
            path.display(),
            da.algebra.name(),
            db.algebra.name()
        )));
    }
    let el = element(&src, &name)?;
    if el.arity() != 2 {
        return Err(Failure::Input(format!("`{name}` must have arity 2")));
    }
    let el = el.reinterpret(&[p.clone(), p.clone()]).map_err(input)?;
    let s = |t: &TensorElement| Value::String(t.to_string());
    if as_rmatrix {
        let r = RMatrix::quasitriangular(&p, &el).map_err(|e| rep.absorb(e))?;
        let t = decompose_rmatrix(&p, &r).map_err(|e| rep.absorb(e))?;
        rep.push(Check::pass("R-matrix on the product"));
        let round = assemble_rmatrix(&p, &t.r1, &t.r2, &t.q).map_err(|e| rep.absorb(e))?;
        rep.push(Check::from_bool("reassembles", round.element() == r.element()));
        rep.output(
            "components",
            json!({ "R1": s(t.r1.element()), "R2": s(t.r2.element()), "Q": s(t.q.element()) }),
        );
    } else {
        let f = Twist::check(&p, &el).map_err(|e| rep.absorb(e))?;
        let phi = phi_decompose(&p, &f).map_err(|e| rep.absorb(e))?;
        rep.push(Check::pass("components validate"));
        let canon = canonical_form_check(&p, &f).map_err(|e| rep.absorb(e))?;
        rep.push(Check::from_bool("canonical form", canon));
        rep.output(
            "components",
            json!({
                "F1": s(&phi.f1),
                "F2": s(&phi.f2),
                "G": s(&phi.g),
                "H": s(&phi.h),
                "R": s(&phi.r),
            }),
        );
    }
    rep.verdict()
}

fn absolute(p: &Path) -> Result<String, Failure> {
    Ok(std::fs::canonicalize(p).map_err(input)?.display().to_string())
}

pub fn product(rep: &mut Report, a: &Path, b: &Path, diag: Option<&[String]>, out: Option<&Path>) -> Outcome {
    let (da, db) = (load(a)?, load(b)?);
    let r1 = rmatrix(rep, &da, true)?;
    let r2 = rmatrix(rep, &db, true)?;
    let prod = Product::new(&r1, &r2).map_err(|e| rep.absorb(e))?;
    rep.push(Check::from_bool("product structure is triangular", prod.structure().satisfies_triangularity()));
    let (p1, p2) = prod.projections().map_err(|e| rep.absorb(e))?;
    rep.push(Check::pass("projections are 1-cells"));
    let doc = Document::new(prod.carrier())
        .with_element("R", prod.structure().element())
        .map_err(input)?
        .with_morphism("pi1", &absolute(a)?, p1.map(), None)
        .with_morphism("pi2", &absolute(b)?, p2.map(), None);
    rep.output("dim", json!(prod.carrier().dim()));
    if let Some([s1, s2]) = diag {
        let (f1, n1) = qualified(s1)?;
        let (f2, n2) = qualified(s2)?;
        let (c1doc, c2doc) = (load(&f1)?, load(&f2)?);
        let c1 = onecell(rep, &c1doc, &f1, &n1)?;
        let c2 = onecell(rep, &c2doc, &f2, &n2)?;
        let d = diagonal(&prod, &c1, &c2).map_err(|e| rep.absorb(e))?;
        rep.push(Check::pass("diagonal is a 1-cell"));
        let back1 = compose(&p1, &d).map_err(|e| rep.absorb(e))?;
        let back2 = compose(&p2, &d).map_err(|e| rep.absorb(e))?;
        rep.push(Check::from_bool("first projection of the diagonal", back1 == c1));
        rep.push(Check::from_bool("second projection of the diagonal", back2 == c2));
        rep.output(
            "diagonal",
            json!({
                "matrix": d.map().matrix().iter().map(|r| r.iter().map(|c| c.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "twist": d.twist().element().to_string(),
            }),
        );
    }
    rep.verdict()?;
    write_doc(rep, &doc, out)
}

pub struct ExampleParams {
    pub lambda: Option<String>,
    pub d: Option<String>,
    pub orders: Option<String>,
    pub field: Option<String>,
    pub n: Option<usize>,
}

fn parse_field(s: Option<&str>) -> Result<FieldSpec, Failure> {
    match s {
        None | Some("rational") => Ok(FieldSpec::Rational),
        Some(s) => {
            let n = s
                .strip_prefix("cyclotomic:")
                .and_then(|n| n.parse::<u32>().ok())
                .ok_or_else(|| Failure::Input(format!("unknown field `{s}`")))?;
            FieldSpec::cyclotomic(n).map_err(input)
        }
    }
}

fn reject(params: &ExampleParams, allowed: &[&str]) -> Outcome {
    let given = [
        ("lambda", params.lambda.is_some()),
        ("d", params.d.is_some()),
        ("orders", params.orders.is_some()),
        ("field", params.field.is_some()),
        ("n", params.n.is_some()),
    ];
    for (name, set) in given {
        if set && !allowed.contains(&name) {
            return Err(Failure::Input(format!("--{name} does not apply to this example")));
        }
    }
    Ok(())
}

fn with_trivial_r(h: &Arc<Bialgebra>) -> Result<Document, Failure> {
    Document::new(h)
        .with_element("R", &TensorElement::unit(&[h.clone(), h.clone()]))
        .map_err(input)
}

pub fn example(rep: &mut Report, name: &str, params: &ExampleParams, out: Option<&Path>) -> Outcome {
    let lib = |rep: &mut Report, e: Error| rep.absorb(e);
    let doc = match name {
        "sweedler" => {
            reject(params, &["lambda", "d", "field"])?;
            let field = parse_field(params.field.as_deref())?;
            let lambda = Scalar::parse(params.lambda.as_deref().unwrap_or("0"), field).map_err(input)?;
            let h = zoo::sweedler_algebra(field);
            let r = RMatrix::triangular(&h, &zoo::sweedler_r_element(&h, &lambda)).map_err(|e| lib(rep, e))?;
            let mut doc = Document::new(&h).with_element("R", r.element()).map_err(input)?;
            if let Some(d) = &params.d {
                let d = Scalar::parse(d, field).map_err(input)?;
                let f = zoo::sweedler_twist(&h, &d).map_err(|e| lib(rep, e))?;
                doc = doc.with_element("F", f.element()).map_err(input)?;
            }
            doc
        }
        "group_algebra" => {
            reject(params, &["orders", "field"])?;
            let field = parse_field(params.field.as_deref())?;
            let orders = params
                .orders
                .as_deref()
                .unwrap_or("2")
                .split(',')
                .map(|o| o.trim().parse::<usize>().map_err(|_| Failure::Input(format!("bad order `{o}`"))))
                .collect::<Result<Vec<_>, _>>()?;
            let h = zoo::group_algebra(&orders, field).map_err(input)?;
            with_trivial_r(&h)?
        }
        "base_field" => {
            reject(params, &["field"])?;
            with_trivial_r(&zoo::base_field(parse_field(params.field.as_deref())?))?
        }
        "gamma_twist" => {
            reject(params, &["n"])?;
            let g = zoo::gamma_twist(params.n.unwrap_or(2)).map_err(input)?;
            Document::new(&g.algebra)
                .with_element("F", g.twist.element())
                .map_err(input)?
                .with_morphism("swap", "self", &g.swap, Some("F"))
        }
        _ => return Err(Failure::Input(format!("unknown example `{name}`"))),
    };
    let h: &Arc<Bialgebra> = &doc.algebra;
    rep.output("dim", json!(h.dim()));
    write_doc(rep, &doc, out)
}
