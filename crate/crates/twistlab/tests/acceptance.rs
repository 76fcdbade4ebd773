use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use twistlab::random;
use twistlab::search::{brute_force_rmatrices, brute_force_weak_rmatrices, SearchOptions};
use twistlab::twist::*;
use twistlab::twtr::*;
use twistlab::zoo::*;
use twistlab::*;

type Res = std::result::Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn sc(s: &str, f: FieldSpec) -> Scalar {
    Scalar::parse(s, f).unwrap()
}

fn q(s: &str) -> Scalar {
    sc(s, FieldSpec::Rational)
}

fn z3() -> FieldSpec {
    FieldSpec::cyclotomic(3).unwrap()
}

fn unit1(h: &Arc<Bialgebra>) -> TensorElement {
    TensorElement::unit(&[h.clone()])
}

fn unit2(a: &Arc<Bialgebra>, b: &Arc<Bialgebra>) -> TensorElement {
    TensorElement::unit(&[a.clone(), b.clone()])
}

fn r_minus(k: &Arc<Bialgebra>) -> RMatrix {
    let el = TensorElement::from_labels(
        &[k.clone(), k.clone()],
        &[("1/2", &["1", "1"]), ("1/2", &["g", "1"]), ("1/2", &["1", "g"]), ("-1/2", &["g", "g"])],
    )
    .unwrap();
    RMatrix::triangular(k, &el).unwrap()
}

fn search(h: &Arc<Bialgebra>) -> Vec<RMatrix> {
    brute_force_rmatrices(h, &SearchOptions::default()).unwrap().isolated
}

// --- 1 ---------------------------------------------------------------------

fn sweedler_family() -> Res {
    let axioms = [
        "invertible",
        "quasi-cocommutativity",
        "hexagon (Id⊗Δ)",
        "hexagon (Δ⊗Id)",
        "quantum Yang-Baxter",
        "triangularity",
    ];
    for l in ["0", "1", "-1", "2", "1/2"] {
        let h = sweedler_algebra(FieldSpec::Rational);
        ensure!(h.validate().passed(), "Sweedler presentation fails its axioms");
        let el = sweedler_r_element(&h, &q(l));
        let (rep, _) = validate_rmatrix(&h, &el, true);
        ensure!(rep.passed(), "λ = {l}: {rep}");
        for a in axioms {
            ensure!(rep.check(a).is_some_and(|c| c.pass), "λ = {l}: {a} missing or failing");
        }
        ok(sweedler(&q(l)))?;
    }
    Ok(())
}

// --- 2 ---------------------------------------------------------------------

fn twist_action() -> Res {
    let vals = ["0", "1", "-1", "1/2"];
    for l in vals {
        for d in vals {
            let (h, r) = ok(sweedler(&q(l)))?;
            let f = ok(sweedler_twist(&h, &q(d)))?;
            let rf = ok(r.twisted_by(&f))?;
            let want = sweedler_r_element(&h, &(&q(l) + &(&q("2") * &q(d))));
            for i in 0..4 {
                for j in 0..4 {
                    ensure!(
                        rf.element().coeff(&[i, j]) == want.coeff(&[i, j]),
                        "λ = {l}, d = {d}: coefficient at {} differs",
                        h.tuple_label(&[i, j])
                    );
                }
            }
        }
    }
    Ok(())
}

// --- 3 ---------------------------------------------------------------------

fn morphism_criterion() -> Res {
    let mut tried = 0;
    for l in ["0", "1", "1/2", "-1"] {
        for s in ["1", "2", "-1"] {
            for d in ["0", "1"] {
                let (h, r) = ok(sweedler(&q(l)))?;
                let f = ok(sweedler_morphism(&h, &q(s)))?;
                let t = ok(sweedler_twist(&h, &q(d)))?;
                let matching = &(&q(l) * &(&q(s) * &q(s))) - &(&q("2") * &q(d));
                for gamma in [matching.clone(), &matching + &q("1"), &matching - &q("1/2"), q("0")] {
                    let (_, rg) = ok(sweedler(&gamma))?;
                    let expect = &q(l) * &(&q(s) * &q(s)) == &gamma + &(&q("2") * &q(d));
                    let got = TwistedMorphism::with_structures(f.clone(), t.clone(), &r, &rg);
                    match got {
                        Ok(_) => ensure!(expect, "λ={l} s={s} d={d} γ={gamma} validated"),
                        Err(Error::Validation(rep)) => {
                            ensure!(!expect, "λ={l} s={s} d={d} γ={gamma} rejected: {rep}")
                        }
                        Err(e) => return Err(e.to_string()),
                    }
                    tried += 1;
                }
            }
        }
    }
    ensure!(tried == 96, "ran {tried} cases");
    Ok(())
}

// --- 4 ---------------------------------------------------------------------

fn group_algebra_twist() -> Res {
    for n in [2usize, 3] {
        let g = ok(gamma_twist(n))?;
        let h = &g.algebra;
        let (rep, _) = validate_twist(h, g.twist.element());
        ensure!(rep.passed(), "n = {n}: {rep}");
        let rep = g.swap.validate_bialgebra_map();
        ensure!(rep.passed() && g.swap.is_invertible(), "n = {n}: swap is not a bialgebra automorphism");
        ensure!(**g.swap.target() == **h, "n = {n}: swap leaves the group algebra");
        let f = g.twist.element();
        ensure!(f.op() != *f, "n = {n}: the twist is symmetric");
        let found = search(h);
        ensure!(!found.is_empty(), "n = {n}: search found nothing");
        for r in &found {
            // R' = (F^op)⁻¹ (f⊗f)(R) F, computed here from the elements
            let moved = ok(r.element().apply(&[Some(&g.swap), Some(&g.swap)]))?;
            let rp = ok(f.op().inv())?.times(&moved).times(f);
            let (rep, _) = validate_rmatrix(h, &rp, r.is_triangular());
            ensure!(rep.passed(), "n = {n}: R' is not a structure: {rep}");
            let cell = ok(g.onecell(r))?;
            ensure!(cell.structures().unwrap().1.element() == &rp, "n = {n}: transported structure differs");
            let rt = ok(RMatrix::with_flag(h, &rp, r.is_triangular()))?;
            let rep = validate_twisted_morphism(&g.swap, &g.twist, Some((r, &rt)));
            ensure!(rep.passed(), "n = {n}: {rep}");
            ensure!(cell.is_triangular_mode() == r.is_triangular(), "n = {n}: mode flag");
        }
        if n == 2 {
            ensure!(found.iter().filter(|r| r.is_triangular()).count() > 1, "no nontrivial triangular R on kΓ");
        }
    }
    Ok(())
}

// --- 5 ---------------------------------------------------------------------

fn base_twists(h: &Arc<Bialgebra>, kind: usize, z3_structures: &[RMatrix]) -> Vec<Twist> {
    let f = h.field();
    match kind {
        0 => ["0", "1", "-1/2", "2"]
            .iter()
            .map(|d| sweedler_twist(h, &sc(d, f)).unwrap())
            .collect(),
        1 => vec![Twist::trivial(h), r_minus(h).as_twist().unwrap()],
        _ => {
            let mut v = vec![Twist::trivial(h)];
            v.extend(z3_structures.iter().map(|r| r.as_twist().unwrap()));
            v
        }
    }
}

fn twist_round_trip() -> Res {
    let f = z3();
    let algebras = [
        sweedler_algebra(f),
        group_algebra(&[2], f).unwrap(),
        group_algebra(&[3], f).unwrap(),
    ];
    let z3_structures = search(&algebras[2]);
    let mut rng = random::rng(random::seed(0x5eed));
    let mut nontrivial_w = 0;
    for i in 0..20 {
        let (ka, kb) = (rng.random_range(0..3), rng.random_range(0..3));
        let (h1, h2) = (&algebras[ka], &algebras[kb]);
        let p = ok(Bialgebra::tensor(h1, h2))?;
        let pick = |rng: &mut ChaCha8Rng, h: &Arc<Bialgebra>, kind: usize| -> Twist {
            let base = base_twists(h, kind, &z3_structures);
            let t = base[rng.random_range(0..base.len())].clone();
            if rng.random_bool(0.5) {
                t.by_unit(&random::unit(rng, &[h.clone()])).unwrap()
            } else {
                t
            }
        };
        let f1 = pick(&mut rng, h1, ka);
        let f2 = pick(&mut rng, h2, kb);
        let (h1f, h2f) = (ok(f1.twisted_carrier())?, ok(f2.twisted_carrier())?);
        let mut ws = vec![WeakRMatrix::trivial(&h2f, &h1f)];
        if let Ok(sol) = brute_force_weak_rmatrices(&h2f, &h1f, &SearchOptions::default()) {
            ws.extend(sol.isolated);
        }
        let w = ws[rng.random_range(0..ws.len())].clone();
        if *w.element() != unit2(&h2f, &h1f) {
            nontrivial_w += 1;
        }
        let twist = ok(assemble_twist(&p, &f1, &f2, &w))?;
        let phi = ok(phi_decompose(&p, &twist))?;
        let back = |t: &TensorElement| t.reinterpret(&[h2.clone(), h1.clone()]).unwrap();
        ensure!(phi.f1 == *f1.element(), "instance {i}: F₁ not recovered");
        ensure!(phi.f2 == *f2.element(), "instance {i}: F₂ not recovered");
        ensure!(phi.g == unit2(h1, h2), "instance {i}: G ≠ 1⊗1");
        ensure!(phi.h == back(w.inverse()), "instance {i}: H ≠ W⁻¹");
        ensure!(phi.r == back(w.element()), "instance {i}: W not recovered");
        ensure!(ok(canonical_form_check(&p, &twist))?, "instance {i}: canonical form");
        let u = random::unit(&mut rng, &[p.clone()]);
        let gauged = ok(twist.by_unit(&u))?;
        ensure!(ok(canonical_form_check(&p, &gauged))?, "instance {i}: canonical form after gauge");
    }
    ensure!(nontrivial_w > 0, "no instance used a nontrivial weak R-matrix");
    Ok(())
}

// --- 6 ---------------------------------------------------------------------

fn rmatrix_decomposition() -> Res {
    let f = z3();
    let sw = sweedler_algebra(f);
    let k2 = group_algebra(&[2], f).unwrap();
    let k3 = group_algebra(&[3], f).unwrap();
    let mut fixtures: Vec<(RMatrix, bool)> = Vec::new();
    for l in ["0", "1"] {
        fixtures.push((ok(RMatrix::triangular(&sw, &sweedler_r_element(&sw, &sc(l, f))))?, false));
    }
    fixtures.push((ok(RMatrix::trivial(&k2))?, true));
    fixtures.push((r_minus(&k2), true));
    for r in search(&k3) {
        fixtures.push((r, true));
    }
    let mut weak_cases = 0;
    for (r1, c1) in &fixtures {
        for (r2, c2) in &fixtures {
            let (h1, h2) = (r1.carrier(), r2.carrier());
            let p = ok(Bialgebra::tensor(h1, h2))?;
            let mut qs = vec![WeakRMatrix::trivial(h2, h1)];
            if *c1 && *c2 {
                let sol = ok(brute_force_weak_rmatrices(h2, h1, &SearchOptions::default()))?;
                ensure!(sol.families.is_empty(), "weak R-matrices of a group algebra pair form a family");
                weak_cases += sol.isolated.len();
                qs.extend(sol.isolated);
            }
            for qw in &qs {
                let s = ok(assemble_rmatrix(&p, r1, r2, qw))?;
                let t = ok(decompose_rmatrix(&p, &s))?;
                let pair = format!("{} ⊗ {}", r1.element(), r2.element());
                ensure!(t.r1.element() == r1.element(), "{pair}: R₁ not recovered");
                ensure!(t.r2.element() == r2.element(), "{pair}: R₂ not recovered");
                ensure!(t.g == unit2(h1, h2), "{pair}: middle component ≠ 1⊗1");
                ensure!(t.q.element() == qw.element(), "{pair}: Q not recovered");
            }
        }
    }
    ensure!(weak_cases > 0, "no brute-forced weak R-matrices");
    Ok(())
}

// --- 7 ---------------------------------------------------------------------

fn product_cases() -> Result<Vec<(Product, TwistedMorphism, TwistedMorphism)>> {
    let mut out = Vec::new();
    // two Sweedler targets reached from (H, R_{1/2})
    let c1 = sweedler_onecell(&q("1/2"), &q("2"), &q("1/2"))?;
    let c2 = sweedler_onecell(&q("1/2"), &q("2"), &q("0"))?;
    let prod = Product::new(c1.structures().unwrap().1, c2.structures().unwrap().1)?;
    out.push((prod, c1, c2));

    // (kℤ₂, R₋) into itself and into 𝕜
    let k2 = group_algebra(&[2], FieldSpec::Rational)?;
    let rm = r_minus(&k2);
    let t = terminal_cell(&rm)?;
    let prod = Product::new(&rm, t.structures().unwrap().1)?;
    out.push((prod, TwistedMorphism::identity(&k2, Some(&rm)), t));

    // from a product, through a Sweedler 1-cell on the first leg
    let (_, r1) = sweedler(&q("1"))?;
    let src = Product::new(&r1, &rm)?;
    let (p1, p2) = src.projections()?;
    let c1 = compose(&sweedler_onecell(&q("1"), &q("2"), &q("1"))?, &p1)?;
    let prod = Product::new(c1.structures().unwrap().1, &rm)?;
    out.push((prod, c1, p2));

    // cocommutative group algebras
    let a = group_algebra(&[2], FieldSpec::Rational)?;
    let b = group_algebra(&[3], FieldSpec::Rational)?;
    let (ra, rb) = (RMatrix::trivial(&a)?, RMatrix::trivial(&b)?);
    let src = Product::new(&ra, &rb)?;
    let (l1, l2) = LinearMap::projections(src.carrier())?;
    let u1 = TwistedMorphism::cocommutative(&l1)?;
    let u2 = TwistedMorphism::cocommutative(&l2)?;
    out.push((Product::new(&ra, &rb)?, u1, u2));
    Ok(out)
}

fn binary_products() -> Res {
    let mut rng = random::rng(random::seed(7));
    let cases = ok(product_cases())?;
    ensure!(cases.len() >= 3, "too few pairs");
    for (i, (prod, c1, c2)) in cases.iter().enumerate() {
        let (p1, p2) = ok(prod.projections())?;
        let d = ok(diagonal(prod, c1, c2))?;
        ensure!(ok(compose(&p1, &d))? == *c1, "pair {i}: π₁∘⟨c₁,c₂⟩ ≠ c₁");
        ensure!(ok(compose(&p2, &d))? == *c2, "pair {i}: π₂∘⟨c₁,c₂⟩ ≠ c₂");

        let p = prod.carrier().clone();
        let a = random::unit(&mut rng, &[p.clone()]);
        let to = ok(compose(&ok(partial_automorphism(&p, Some(prod.structure()), &a))?, &d))?;
        let g1 = ok(p1.map().image(&a))?;
        let g2 = ok(p2.map().image(&a))?;
        let decoys = [
            random::unit(&mut rng, &[p.clone()]),
            a.add(&random::element(&mut rng, &[p.clone()], 0.2)),
            unit1(&p),
        ];
        let mut alts = vec![a.clone()];
        alts.extend(decoys.iter().cloned());
        let m = ok(mediating_2cell(prod, &g1, &g2, &d, &to, &alts))?;
        ensure!(*m.element() == a, "pair {i}: mediating 2-cell differs from the generating unit");
        let w1 = ok(GaugeTransformation::hcompose(&GaugeTransformation::identity(&p1), &m))?;
        let w2 = ok(GaugeTransformation::hcompose(&GaugeTransformation::identity(&p2), &m))?;
        ensure!(*w1.element() == g1 && *w2.element() == g2, "pair {i}: projection equations");
        for alt in &decoys {
            let fits = GaugeTransformation::check(alt, &d, &to).is_ok()
                && ok(p1.map().image(alt))? == g1
                && ok(p2.map().image(alt))? == g2;
            ensure!(!fits || *alt == a, "pair {i}: a second candidate fits");
        }
    }
    Ok(())
}

// --- 8 ---------------------------------------------------------------------

fn fixture_structures() -> Vec<RMatrix> {
    let mut v = Vec::new();
    for l in ["0", "1", "-1", "2", "1/2"] {
        v.push(sweedler(&q(l)).unwrap().1);
    }
    let k2 = group_algebra(&[2], FieldSpec::Rational).unwrap();
    v.push(RMatrix::trivial(&k2).unwrap());
    v.push(r_minus(&k2));
    v.extend(search(&group_algebra(&[3], z3()).unwrap()));
    v.extend(search(&gamma_twist(2).unwrap().algebra));
    for fld in [FieldSpec::Rational, z3()] {
        v.push(RMatrix::trivial(&base_field(fld)).unwrap());
    }
    let prod = Product::new(&sweedler(&q("1")).unwrap().1, &r_minus(&k2)).unwrap();
    v.push(prod.structure().clone());
    v
}

fn terminal_object() -> Res {
    for r in fixture_structures() {
        let name = r.carrier().name().to_string();
        let t = ok(terminal_cell(&r))?;
        ensure!(t.target().dim() == 1 && t.twist().is_trivial(), "{name}: not (ε, 1⊗1)");
        let k = t.target().clone();
        let f = k.field();
        let (ans, space) = ok(gauge_candidates(&t, &t))?.ok_or(format!("{name}: no gauge endomorphism"))?;
        ensure!(space.dim() == 0, "{name}: gauge endomorphisms form a family");
        ensure!(ans.element(&space.particular) == unit1(&k), "{name}: gauge endomorphism is not 1");
        for c in ["0", "2", "-1", "1/2"] {
            let kk = unit1(&k).scale(&sc(c, f));
            ensure!(GaugeTransformation::check(&kk, &t, &t).is_err(), "{name}: {c} is a gauge endomorphism");
        }
        ensure!(GaugeTransformation::check(&unit1(&k), &t, &t).is_ok(), "{name}: 1 is not a gauge endomorphism");
    }
    Ok(())
}

// --- 9 ---------------------------------------------------------------------

/// An object of a chain: a carrier with its structure.
#[derive(Clone)]
enum Node {
    Sweedler(Scalar),
    Gamma(Arc<GammaTwist>, RMatrix),
}

impl Node {
    fn structure(&self) -> RMatrix {
        match self {
            Node::Sweedler(l) => sweedler(l).unwrap().1,
            Node::Gamma(_, r) => r.clone(),
        }
    }

    fn step(&self, rng: &mut ChaCha8Rng) -> (TwistedMorphism, Node) {
        let r = self.structure();
        if rng.random_bool(0.3) {
            let u = random::unit(rng, &[r.carrier().clone()]);
            return (partial_automorphism(r.carrier(), Some(&r), &u).unwrap(), self.clone());
        }
        match self {
            Node::Sweedler(l) => {
                let s = q(["1", "-1", "2", "1/2", "-3"][rng.random_range(0..5)]);
                let d = q(["0", "1", "-1", "1/2", "3"][rng.random_range(0..5)]);
                let c = sweedler_onecell(l, &s, &d).unwrap();
                let next = c.structures().unwrap().1.clone();
                let lambda = &next.element().coeff(&[2, 2]) * &q("2");
                (c, Node::Sweedler(lambda))
            }
            Node::Gamma(g, r) => {
                let c = g.onecell(r).unwrap();
                let next = c.structures().unwrap().1.clone();
                (c, Node::Gamma(g.clone(), next))
            }
        }
    }
}

fn two_cell(rng: &mut ChaCha8Rng, c: &TwistedMorphism) -> Result<GaugeTransformation> {
    let (_, rt) = c.structures().unwrap();
    let a = random::unit(rng, &[c.target().clone()]);
    let next = compose(&partial_automorphism(c.target(), Some(rt), &a)?, c)?;
    GaugeTransformation::check(&a, c, &next)
}

fn pasting(rng: &mut ChaCha8Rng, gamma: &Arc<GammaTwist>, gamma_rs: &[RMatrix]) -> Res {
    let start = if rng.random_bool(0.5) {
        Node::Sweedler(q(["0", "1", "-1", "2", "1/2"][rng.random_range(0..5)]))
    } else {
        Node::Gamma(gamma.clone(), gamma_rs[rng.random_range(0..gamma_rs.len())].clone())
    };
    let (c0, n1) = start.step(rng);
    let (c1, n2) = n1.step(rng);
    let (c2, _) = n2.step(rng);

    // 1-cells
    let left = ok(compose(&ok(compose(&c2, &c1))?, &c0))?;
    let right = ok(compose(&c2, &ok(compose(&c1, &c0))?))?;
    ensure!(left == right, "composition is not associative");
    let ids = TwistedMorphism::identity(c0.source(), Some(c0.structures().unwrap().0));
    let idt = TwistedMorphism::identity(c0.target(), Some(c0.structures().unwrap().1));
    ensure!(ok(compose(&c0, &ids))? == c0 && ok(compose(&idt, &c0))? == c0, "identity 1-cells");

    // vertical
    let a0 = ok(two_cell(rng, &c0))?;
    let b0 = ok(two_cell(rng, a0.to()))?;
    let e0 = ok(two_cell(rng, b0.to()))?;
    let v = GaugeTransformation::vcompose;
    let l = ok(v(&ok(v(&e0, &b0))?, &a0))?;
    let r = ok(v(&e0, &ok(v(&b0, &a0))?))?;
    ensure!(l == r, "vertical composition is not associative");
    let one_from = GaugeTransformation::identity(a0.from());
    let one_to = GaugeTransformation::identity(a0.to());
    ensure!(ok(v(&a0, &one_from))? == a0 && ok(v(&one_to, &a0))? == a0, "identity 2-cells (vertical)");

    // horizontal
    let a1 = ok(two_cell(rng, &c1))?;
    let a2 = ok(two_cell(rng, &c2))?;
    let h = GaugeTransformation::hcompose;
    let l = ok(h(&ok(h(&a2, &a1))?, &a0))?;
    let r = ok(h(&a2, &ok(h(&a1, &a0))?))?;
    ensure!(l == r, "horizontal composition is not associative");
    let id_t = GaugeTransformation::identity(&idt);
    let id_s = GaugeTransformation::identity(&ids);
    ensure!(ok(h(&id_t, &a0))? == a0 && ok(h(&a0, &id_s))? == a0, "identity 2-cells (horizontal)");

    // interchange
    let b1 = ok(two_cell(rng, a1.to()))?;
    let lhs = ok(h(&ok(v(&b1, &a1))?, &ok(v(&b0, &a0))?))?;
    let rhs = ok(v(&ok(h(&b1, &b0))?, &ok(h(&a1, &a0))?))?;
    ensure!(lhs == rhs, "interchange law fails");
    Ok(())
}

fn two_category_laws() -> Res {
    let gamma = Arc::new(ok(gamma_twist(2))?);
    let gamma_rs = search(&gamma.algebra);
    let seed = random::seed(2024);
    for i in 0..50u64 {
        let mut rng = random::rng(seed.wrapping_add(i));
        pasting(&mut rng, &gamma, &gamma_rs).map_err(|e| format!("pasting {i}: {e}"))?;
    }
    Ok(())
}

// --- 10 --------------------------------------------------------------------

fn invertibility() -> Res {
    let mut invertible = Vec::new();
    for (l, s, d) in [("1", "2", "1"), ("0", "-1", "1/2"), ("1/2", "1/2", "0"), ("-1", "3", "-2")] {
        invertible.push(ok(sweedler_onecell(&q(l), &q(s), &q(d)))?);
    }
    for n in [2usize, 3] {
        let g = ok(gamma_twist(n))?;
        for r in search(&g.algebra).iter().take(4) {
            invertible.push(ok(g.onecell(r))?);
        }
    }
    for c in &invertible {
        let inv = ok(invert_onecell(c))?;
        let (rs, rt) = c.structures().unwrap();
        ensure!(ok(compose(&inv, c))? == TwistedMorphism::identity(c.source(), Some(rs)), "inverse∘c ≠ id");
        ensure!(ok(compose(c, &inv))? == TwistedMorphism::identity(c.target(), Some(rt)), "c∘inverse ≠ id");
    }

    let mut rng = random::rng(random::seed(10));
    let mut others = Vec::new();
    let (_, r) = ok(sweedler(&q("1")))?;
    others.push(ok(terminal_cell(&r))?);
    let prod = ok(Product::new(&r, &r_minus(&group_algebra(&[2], FieldSpec::Rational).unwrap())))?;
    others.push(ok(prod.projections())?.0);
    let mut seen = (0, 0);
    for c in invertible.iter().chain(&others) {
        let cell = ok(two_cell(&mut rng, c))?;
        let (a, c2) = (cell.element().clone(), cell.to().clone());
        ensure!(cell.is_invertible(), "gauge by a unit is not invertible");
        ensure!(is_invertible_onecell(c) == is_invertible_onecell(&c2), "invertibility not shared across an invertible 2-cell");
        if is_invertible_onecell(c) {
            ok(invert_onecell(&c2))?;
            seen.0 += 1;
        } else {
            ensure!(matches!(invert_onecell(&c2), Err(Error::NotInvertible)), "non-invertible 1-cell inverted");
            seen.1 += 1;
        }
        // ∂(a)∘c = c' with ∂(a) = (x ↦ a x a⁻¹, (a⊗a)Δ(a⁻¹))
        let ainv = ok(a.inv())?;
        for j in 0..c.source().dim() {
            let x = TensorElement::basis(&[c.source().clone()], &[j]);
            let fx = ok(c.map().image(&x))?;
            ensure!(ok(c2.map().image(&x))? == a.times(&fx).times(&ainv), "c' is not conjugation of c");
        }
        let back = ok(cell.inverse())?;
        ensure!(back.to() == c && *back.element() == ainv, "inverse 2-cell");
        let (_, rt) = c.structures().unwrap();
        let undo = ok(partial_automorphism(c.target(), Some(rt), &ainv))?;
        ensure!(ok(compose(&undo, &c2))? == *c, "∂(a⁻¹)∘c' ≠ c");
    }
    ensure!(seen.0 > 0 && seen.1 > 0, "both kinds of 1-cells must occur");
    Ok(())
}

// --- 11 --------------------------------------------------------------------

fn certify(c1: &TwistedMorphism, c2: &TwistedMorphism) -> Res {
    let (s1, t1) = c1.structures().unwrap();
    let (s2, t2) = c2.structures().unwrap();
    let src = ok(Product::new(s1, s2))?;
    let tgt = ok(Product::new(t1, t2))?;
    let c = ok(tensor_onecells(&src, &tgt, c1, c2))?;
    let cert = ok(certify_twisted_tensor_product(&tgt, &c))?;
    ensure!(cert.certified && cert.report.passed(), "{}", cert.report);
    Ok(())
}

fn twisted_tensor_products() -> Res {
    let params = [("1", "2", "1"), ("1/2", "-1", "0"), ("-1", "1/2", "1/2")];
    let k = group_algebra(&[3], FieldSpec::Rational).unwrap();
    let rk = ok(RMatrix::trivial(&k))?;
    let idk = TwistedMorphism::identity(&k, Some(&rk));
    for (l, s, d) in params {
        certify(&ok(sweedler_onecell(&q(l), &q(s), &q(d)))?, &idk).map_err(|e| format!("⊗(K,1⊗1), λ={l}: {e}"))?;
    }
    let f = FieldSpec::cyclotomic(2).unwrap();
    let g = ok(gamma_twist(2))?;
    let tri: Vec<RMatrix> = search(&g.algebra).into_iter().filter(|r| r.is_triangular()).collect();
    ensure!(tri.len() > 1, "no nontrivial triangular structure on kΓ");
    for (l, s, d) in params {
        let c1 = ok(sweedler_onecell(&sc(l, f), &sc(s, f), &sc(d, f)))?;
        for r in &tri {
            certify(&c1, &ok(g.onecell(r))?).map_err(|e| format!("⊗(kΓ,R), λ={l}: {e}"))?;
        }
    }
    Ok(())
}

// --- 12 --------------------------------------------------------------------

fn oracle_cross_check() -> Res {
    let k2 = group_algebra(&[2], FieldSpec::Rational).unwrap();
    let sol = ok(brute_force_rmatrices(&k2, &SearchOptions::default()))?;
    ensure!(sol.families.is_empty(), "kℤ₂: unexpected family");
    let mut got: Vec<TensorElement> = sol.isolated.iter().map(|r| r.element().clone()).collect();
    let mut want = vec![unit2(&k2, &k2), r_minus(&k2).element().clone()];
    got.sort_by_key(|e| e.to_string());
    want.sort_by_key(|e| e.to_string());
    ensure!(got == want, "kℤ₂: found {got:?}");

    let h = sweedler_algebra(FieldSpec::Rational);
    let sol = ok(brute_force_rmatrices(&h, &SearchOptions::default()))?;
    let as_r_lambda = |m: &TensorElement| {
        let lambda = &m.coeff(&[2, 2]) * &q("2");
        (sweedler_r_element(&h, &lambda) == *m).then_some(lambda)
    };
    ensure!(sol.families.len() == 1, "Sweedler: {} families", sol.families.len());
    let fam = &sol.families[0];
    ensure!(fam.triangular, "Sweedler: family is not triangular");
    ensure!(fam.family.nparams() == 1 && fam.family.degree() <= 1, "Sweedler: family is not a line");
    let mut lambdas = Vec::new();
    for p in fam.family.samples(2) {
        let m = fam.family.member(&p);
        let lambda = as_r_lambda(&m).ok_or(format!("Sweedler: member {m} is not of the form R_λ"))?;
        lambdas.push(lambda);
    }
    lambdas.dedup();
    ensure!(lambdas.len() > 1, "Sweedler: λ does not vary along the family");
    for r in sol.isolated.iter().filter(|r| r.is_triangular()) {
        ensure!(as_r_lambda(r.element()).is_some(), "Sweedler: isolated triangular {} off the family", r.element());
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, fn() -> Res); 12] = [
        ("Sweedler triangular family", sweedler_family),
        ("twisting R_λ by F_d gives R_{λ+2d}", twist_action),
        ("(f_s, F_d) validates iff λs² = γ + 2d", morphism_criterion),
        ("group algebra swap twist and transported structures", group_algebra_twist),
        ("assembled twists decompose and keep their canonical form", twist_round_trip),
        ("assembled R-matrices decompose to (R₁, R₂, 1⊗1, Q)", rmatrix_decomposition),
        ("binary products: diagonals and mediating 2-cells", binary_products),
        ("terminal object", terminal_object),
        ("2-category laws on random pastings", two_category_laws),
        ("inverse 1-cells and invertible 2-cells", invertibility),
        ("twisted tensor product certification", twisted_tensor_products),
        ("brute-force oracle cross-check", oracle_cross_check),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let total = Instant::now();
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = match catch_unwind(AssertUnwindSafe(f)) {
            Ok(r) => r,
            Err(p) => Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into())),
        };
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(()) => println!("criterion {:>2}: PASS  {name} ({secs:.2}s)", i + 1),
            Err(e) => {
                failures += 1;
                println!("criterion {:>2}: FAIL  {name} ({secs:.2}s): {e}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failures} failed in {:.2}s",
        criteria.len() - failures,
        total.elapsed().as_secs_f64()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
