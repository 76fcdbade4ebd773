//! Twisted morphisms, gauge transformations and binary products of
//! (triangular) bialgebras.

use std::sync::Arc;

use crate::ansatz::{affine_basis, multipliers, Ansatz, PolySystem};
use crate::bialgebra::Bialgebra;
use crate::element::TensorElement;
use crate::error::{Error, Result};
use crate::linalg::AffineSpace;
use crate::map::LinearMap;
use crate::report::{Check, ValidationReport};
use crate::scalar::Scalar;
use crate::solve::{solve, Outcome};
use crate::twist::{canonical_element, conjugation_map, eq_check, internal, parts_of, phi_components, RMatrix, Twist};

fn pair(h: &Arc<Bialgebra>) -> Vec<Arc<Bialgebra>> {
    vec![h.clone(), h.clone()]
}

fn lift(e: Error) -> Error {
    match e {
        Error::Validation(r) => Error::Internal(r),
        e => e,
    }
}

/// A pair (f, F): H → H′ with F a twist on H′ and f: H → H′_F a bialgebra
/// map; optionally carrying R-matrices on both ends.
#[derive(Clone, Debug)]
pub struct TwistedMorphism {
    map: LinearMap,
    twist: Twist,
    structures: Option<(RMatrix, RMatrix)>,
}

impl PartialEq for TwistedMorphism {
    fn eq(&self, other: &Self) -> bool {
        **self.source() == **other.source()
            && **self.target() == **other.target()
            && self.map == other.map
            && self.twist == other.twist
            && self.structures == other.structures
    }
}

/// Counital algebra map into H′_F, deformed coproduct, and in the presence
/// of R-matrices the deformed R equation (f⊗f)(R) = F^op R′ F⁻¹.
pub fn validate_twisted_morphism(
    map: &LinearMap,
    twist: &Twist,
    structures: Option<(&RMatrix, &RMatrix)>,
) -> ValidationReport {
    let mut report = ValidationReport::new(format!(
        "twisted morphism {} → {}",
        map.source().name(),
        map.target().name()
    ));
    if **twist.carrier() != **map.target() {
        report.push(Check::fail("twist on target", "twist lives on a different bialgebra"));
        return report;
    }
    let hf = match twist.twisted_carrier() {
        Ok(h) => h,
        Err(_) => {
            report.push(Check::fail("twist on target", "twisted bialgebra fails its axioms"));
            return report;
        }
    };
    let f = map.retag(map.source(), &hf).expect("same algebra");
    for mut c in f.validate_bialgebra_map().checks {
        if c.name == "comultiplication preserved" {
            c.name = "deformed coproduct".into();
        }
        report.push(c);
    }
    if let Some((r, r2)) = structures {
        if **r.carrier() != **map.source() || **r2.carrier() != **map.target() {
            report.push(Check::fail("structures on endpoints", "R-matrices on other bialgebras"));
            return report;
        }
        let lhs = r.element().apply(&[Some(map), Some(map)]).expect("map fits");
        let rhs = twist.element().op().times(r2.element()).times(twist.inverse());
        report.push(eq_check("deformed R", &lhs, &rhs));
    }
    report
}

impl TwistedMorphism {
    fn build(map: LinearMap, twist: Twist, structures: Option<(RMatrix, RMatrix)>) -> Result<Self> {
        let report = validate_twisted_morphism(&map, &twist, structures.as_ref().map(|(a, b)| (a, b)));
        if !report.passed() {
            return Err(Error::Validation(Box::new(report)));
        }
        Ok(TwistedMorphism { map, twist, structures })
    }

    /// A morphism in Tw.
    pub fn new(map: LinearMap, twist: Twist) -> Result<Self> {
        Self::build(map, twist, None)
    }

    /// A morphism between bialgebras with R-matrices; in TwTr when both are
    /// triangular.
    pub fn with_structures(map: LinearMap, twist: Twist, source: &RMatrix, target: &RMatrix) -> Result<Self> {
        Self::build(map, twist, Some((source.clone(), target.clone())))
    }

    /// (Id, 1⊗1).
    pub fn identity(h: &Arc<Bialgebra>, r: Option<&RMatrix>) -> Self {
        TwistedMorphism {
            map: LinearMap::identity(h),
            twist: Twist::trivial(h),
            structures: r.map(|r| (r.clone(), r.clone())),
        }
    }

    /// (f, 1⊗1) between cocommutative bialgebras with trivial R-matrices.
    pub fn cocommutative(f: &LinearMap) -> Result<Self> {
        let rs = RMatrix::trivial(f.source())?;
        let rt = RMatrix::trivial(f.target())?;
        Self::with_structures(f.clone(), Twist::trivial(f.target()), &rs, &rt)
    }

    pub fn source(&self) -> &Arc<Bialgebra> {
        self.map.source()
    }

    pub fn target(&self) -> &Arc<Bialgebra> {
        self.map.target()
    }

    pub fn map(&self) -> &LinearMap {
        &self.map
    }

    pub fn twist(&self) -> &Twist {
        &self.twist
    }

    pub fn structures(&self) -> Option<(&RMatrix, &RMatrix)> {
        self.structures.as_ref().map(|(a, b)| (a, b))
    }

    pub fn is_triangular_mode(&self) -> bool {
        matches!(&self.structures, Some((a, b)) if a.is_triangular() && b.is_triangular())
    }

    pub fn validate(&self) -> ValidationReport {
        validate_twisted_morphism(&self.map, &self.twist, self.structures())
    }

    pub fn is_invertible(&self) -> bool {
        self.map.is_invertible()
    }
}

/// (g, G)∘(f, F) = (g f, (g⊗g)(F)·G).
pub fn compose(g: &TwistedMorphism, f: &TwistedMorphism) -> Result<TwistedMorphism> {
    if **f.target() != **g.source() {
        return Err(Error::CompositionMismatch(format!(
            "{} does not match {}",
            f.target().name(),
            g.source().name()
        )));
    }
    let structures = match (&f.structures, &g.structures) {
        (None, None) => None,
        (Some((r, a)), Some((b, r2))) => {
            if a != b {
                return Err(Error::CompositionMismatch("R-matrices at the middle object differ".into()));
            }
            Some((r.clone(), r2.clone()))
        }
        _ => return Err(Error::CompositionMismatch("one morphism carries R-matrices, the other not".into())),
    };
    let fmap = f.map.retag(f.source(), g.source())?;
    let map = g.map.compose(&fmap)?;
    let pushed = f.twist.element().retag(&pair(g.source()))?.apply(&[Some(&g.map), Some(&g.map)])?;
    let pushed_inv = f.twist.inverse().retag(&pair(g.source()))?.apply(&[Some(&g.map), Some(&g.map)])?;
    let candidate = g.twist.inverse().times(&pushed_inv);
    let twist = Twist::check_with_inverse(g.target(), &pushed.times(g.twist.element()), Some(&candidate)).map_err(lift)?;
    TwistedMorphism::build(map, twist, structures).map_err(lift)
}

/// A 2-cell a: (f, F) ⇒ (f′, F′).
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeTransformation {
    from: TwistedMorphism,
    to: TwistedMorphism,
    element: TensorElement,
}

/// ε′(a) = 1, (a⊗a)F = F′Δ′(a), a·f(x) = f′(x)·a, and compatibility with
/// the twisted R-matrices when present.
pub fn validate_gauge(a: &TensorElement, from: &TwistedMorphism, to: &TwistedMorphism) -> ValidationReport {
    let mut report = ValidationReport::new("gauge transformation");
    if **from.source() != **to.source() || **from.target() != **to.target() {
        report.push(Check::fail("endpoints", "1-cells are not parallel"));
        return report;
    }
    let h = from.target();
    if a.arity() != 1 || !a.factors()[0].same_algebra(h) {
        report.push(Check::fail("shape", format!("expected an element of {}", h.name())));
        return report;
    }
    let a = a.retag(&[h.clone()]).expect("same algebra");
    let one = a.counit_value();
    let mut c = Check::from_bool("counit", one.is_one());
    if !c.pass {
        c.note = Some(format!("ε(a) = {one}"));
    }
    report.push(c);
    let lhs = a.tensor(&a).expect("same field").times(from.twist.element());
    let rhs = to.twist.element().times(&a.comult(0).expect("arity 1"));
    report.push(eq_check("twist relation", &lhs, &rhs));
    let mut inter = Check::pass("intertwining");
    let src = [from.source().clone()];
    for i in 0..from.source().dim() {
        let x = TensorElement::basis(&src, &[i]);
        let fx = from.map.image(&x).expect("fits");
        let gx = to.map.image(&x).expect("fits");
        let d = a.times(&fx).sub(&gx.times(&a));
        if !d.is_zero() {
            inter.record(from.source().tuple_label(&[i]), d);
        }
    }
    report.push(inter);
    if let (Some((_, r)), Some(_)) = (&from.structures, &to.structures) {
        let rf = from.twist.element().op().times(r.element()).times(from.twist.inverse());
        let rg = to.twist.element().op().times(r.element()).times(to.twist.inverse());
        let aa = a.tensor(&a).expect("same field");
        report.push(eq_check("compatible with R", &aa.times(&rf), &rg.times(&aa)));
    }
    report
}

impl GaugeTransformation {
    pub fn check(a: &TensorElement, from: &TwistedMorphism, to: &TwistedMorphism) -> Result<Self> {
        let report = validate_gauge(a, from, to);
        if !report.passed() {
            return Err(Error::Validation(Box::new(report)));
        }
        Ok(GaugeTransformation {
            from: from.clone(),
            to: to.clone(),
            element: a.retag(&[from.target().clone()])?,
        })
    }

    pub fn identity(c: &TwistedMorphism) -> Self {
        GaugeTransformation {
            from: c.clone(),
            to: c.clone(),
            element: TensorElement::unit(&[c.target().clone()]),
        }
    }

    pub fn from(&self) -> &TwistedMorphism {
        &self.from
    }

    pub fn to(&self) -> &TwistedMorphism {
        &self.to
    }

    pub fn element(&self) -> &TensorElement {
        &self.element
    }

    pub fn is_invertible(&self) -> bool {
        self.element.inv().is_ok()
    }

    pub fn inverse(&self) -> Result<Self> {
        let inv = self.element.inv()?;
        Self::check(&inv, &self.to, &self.from).map_err(lift)
    }

    /// a ∘ᵥ b = ab, with b applied first.
    pub fn vcompose(a: &Self, b: &Self) -> Result<Self> {
        if b.to != a.from {
            return Err(Error::BoundaryMismatch("target of the first 2-cell is not the source of the second".into()));
        }
        Self::check(&a.element.times(&b.element), &b.from, &a.to).map_err(lift)
    }

    /// a ∘ₕ b = a·g(b) for a: g ⇒ g′ and b: f ⇒ f′.
    pub fn hcompose(a: &Self, b: &Self) -> Result<Self> {
        if **b.from.target() != **a.from.source() {
            return Err(Error::BoundaryMismatch("2-cells are not horizontally composable".into()));
        }
        let gb = a.from.map.image(&b.element.retag(&[a.from.source().clone()])?)?;
        let from = compose(&a.from, &b.from)?;
        let to = compose(&a.to, &b.to)?;
        Self::check(&a.element.times(&gb), &from, &to).map_err(lift)
    }
}

/// The affine space of elements a of the common target with ε(a) = 1 and
/// a·f(x) = f′(x)·a for all x; None when empty.
pub fn gauge_candidates(from: &TwistedMorphism, to: &TwistedMorphism) -> Result<Option<(Ansatz, AffineSpace)>> {
    let ans = gauge_ansatz(from, to)?;
    let sol = ans.solution();
    Ok(sol.map(|s| (ans, s)))
}

fn gauge_ansatz(from: &TwistedMorphism, to: &TwistedMorphism) -> Result<Ansatz> {
    if **from.source() != **to.source() || **from.target() != **to.target() {
        return Err(Error::BoundaryMismatch("1-cells are not parallel".into()));
    }
    let h = from.target().clone();
    let mut ans = Ansatz::new(&[h.clone()]);
    let field = h.field();
    let empty: Vec<Arc<Bialgebra>> = Vec::new();
    ans.impose(|a| Ok(TensorElement::scalar(&empty, a.counit_value(), field)), &TensorElement::scalar(&empty, Scalar::one(field), field))?;
    let src = [from.source().clone()];
    let zero = TensorElement::zero(&[h.clone()]);
    for i in 0..from.source().dim() {
        let x = TensorElement::basis(&src, &[i]);
        let fx = from.map.image(&x)?;
        let gx = to.map.image(&x)?;
        ans.impose(|a| Ok(a.times(&fx).sub(&gx.times(a))), &zero)?;
    }
    Ok(ans)
}

/// Knobs for the quadratic stage of gauge_equivalent.
#[derive(Clone, Debug)]
pub struct GaugeSearch {
    /// Largest dimension of the linear candidate space that is searched.
    pub max_dim: usize,
    /// Scalar grid (as fractions) tried for each free parameter.
    pub grid: Vec<(i64, i64)>,
    pub max_branches: usize,
}

impl Default for GaugeSearch {
    fn default() -> Self {
        GaugeSearch {
            max_dim: 4,
            grid: vec![(0, 1), (1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (-1, 2)],
            max_branches: 2000,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum GaugeVerdict {
    Equal(GaugeTransformation),
    NotEqual,
    Unknown(String),
}

fn grid_points(grid: &[Scalar], k: usize) -> Vec<Vec<Scalar>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|p| {
                grid.iter().map(move |g| {
                    let mut q = p.clone();
                    q.push(g.clone());
                    q
                })
            })
            .collect();
    }
    out
}

/// Decide whether an invertible 2-cell c1 ⇒ c2 exists.
pub fn gauge_equivalent(c1: &TwistedMorphism, c2: &TwistedMorphism, search: &GaugeSearch) -> Result<GaugeVerdict> {
    if **c1.source() != **c2.source() || **c1.target() != **c2.target() {
        return Ok(GaugeVerdict::NotEqual);
    }
    let ans = gauge_ansatz(c1, c2)?;
    let Some(space) = ans.solution() else {
        return Ok(GaugeVerdict::NotEqual);
    };
    let accept = |a: &TensorElement| -> Option<GaugeTransformation> {
        if a.inv().is_err() {
            return None;
        }
        GaugeTransformation::check(a, c1, c2).ok()
    };
    let k = space.dim();
    if k == 0 {
        let a = ans.element(&space.particular);
        return Ok(match accept(&a) {
            Some(g) => GaugeVerdict::Equal(g),
            None => GaugeVerdict::NotEqual,
        });
    }
    if k > search.max_dim {
        return Ok(GaugeVerdict::Unknown(format!(
            "candidate space has dimension {k}, above the cap {}",
            search.max_dim
        )));
    }
    let field = c1.target().field();
    let grid: Vec<Scalar> = search.grid.iter().map(|&(n, d)| Scalar::from_ratio(field, n, d)).collect();
    let vs = affine_basis(&ans, &space);
    let ms = multipliers(field, k);
    let f1 = c1.twist.element();
    let f2 = c2.twist.element();
    let mut sys = PolySystem::new(field, k);
    for (i, vi) in vs.iter().enumerate() {
        for (j, vj) in vs.iter().enumerate() {
            sys.add(&ms[i].mul(&ms[j]), &vi.tensor(vj)?.times(f1));
        }
        sys.add(&ms[i].scale(&Scalar::from_int(field, -1)), &f2.times(&vi.comult(0)?));
    }
    let eqs = sys.equations();
    let point_of = |params: &[Scalar]| ans.element(&space.point(params));
    match solve(&eqs, k, field, search.max_branches)? {
        Outcome::Solved(fams) => {
            if fams.is_empty() {
                return Ok(GaugeVerdict::NotEqual);
            }
            for fam in &fams {
                for p in grid_points(&grid, fam.nparams) {
                    if let Some(g) = accept(&point_of(&fam.point(&p))) {
                        return Ok(GaugeVerdict::Equal(g));
                    }
                }
            }
            Ok(GaugeVerdict::Unknown("no invertible solution found on the grid".into()))
        }
        Outcome::Stalled(reason) => {
            for p in grid_points(&grid, k) {
                if let Some(g) = accept(&point_of(&p)) {
                    return Ok(GaugeVerdict::Equal(g));
                }
            }
            Ok(GaugeVerdict::Unknown(format!("polynomial stage stalled ({reason}); grid search found nothing")))
        }
    }
}

/// ∂(a) = (x ↦ a x a⁻¹, (a⊗a)Δ(a⁻¹)) for invertible a with ε(a) = 1.
pub fn partial_automorphism(h: &Arc<Bialgebra>, r: Option<&RMatrix>, a: &TensorElement) -> Result<TwistedMorphism> {
    let a = a.retag(&[h.clone()])?;
    if !a.counit_value().is_one() {
        return Err(Error::CounitNotOne);
    }
    a.inv()?;
    let map = conjugation_map(&a, h, h)?;
    let twist = Twist::trivial(h).by_unit(&a)?;
    let structures = r.map(|r| (r.clone(), r.clone()));
    TwistedMorphism::build(map, twist, structures).map_err(lift)
}

/// ∂(ab) = ∂(a)∘∂(b).
pub fn partial_is_multiplicative(
    h: &Arc<Bialgebra>,
    r: Option<&RMatrix>,
    a: &TensorElement,
    b: &TensorElement,
) -> Result<bool> {
    let ab = partial_automorphism(h, r, &a.times(b))?;
    let composite = compose(&partial_automorphism(h, r, a)?, &partial_automorphism(h, r, b)?)?;
    Ok(ab == composite)
}

/// (f⁻¹, (f⁻¹⊗f⁻¹)(F⁻¹)); both composites are checked to be identities.
pub fn invert_onecell(c: &TwistedMorphism) -> Result<TwistedMorphism> {
    let finv = c.map.inverse()?;
    let g = c.twist.inverse().apply(&[Some(&finv), Some(&finv)])?;
    let ginv = c.twist.element().apply(&[Some(&finv), Some(&finv)])?;
    let twist = Twist::check_with_inverse(c.source(), &g, Some(&ginv)).map_err(lift)?;
    let structures = c.structures.as_ref().map(|(a, b)| (b.clone(), a.clone()));
    let inv = TwistedMorphism::build(finv, twist, structures).map_err(lift)?;
    let (rs, rt) = match &c.structures {
        Some((a, b)) => (Some(a), Some(b)),
        None => (None, None),
    };
    let left = compose(&inv, c)?;
    if left != TwistedMorphism::identity(c.source(), rs) {
        return Err(internal("inverse 1-cell", Check::fail("inverse∘c = id", "composite differs")));
    }
    let right = compose(c, &inv)?;
    if right != TwistedMorphism::identity(c.target(), rt) {
        return Err(internal("inverse 1-cell", Check::fail("c∘inverse = id", "composite differs")));
    }
    Ok(inv)
}

pub fn is_invertible_onecell(c: &TwistedMorphism) -> bool {
    c.is_invertible()
}

/// (ε, 1⊗1): (H, R) → (𝕜, 1⊗1), with its uniqueness and the triviality of
/// its gauge endomorphisms checked.
pub fn terminal_cell(r: &RMatrix) -> Result<TwistedMorphism> {
    let h = r.carrier();
    let k = Bialgebra::base_field(h.field());
    let rk = RMatrix::trivial(&k)?;
    let cell = TwistedMorphism::with_structures(LinearMap::counit_map(h, &k), Twist::trivial(&k), r, &rk)
        .map_err(lift)?;
    let field = h.field();
    let empty: Vec<Arc<Bialgebra>> = Vec::new();
    for j in 0..h.dim() {
        let mut ans = Ansatz::new(&[k.clone()]);
        let target = TensorElement::scalar(&empty, h.counit(j).clone(), field);
        ans.impose(|a| Ok(TensorElement::scalar(&empty, a.counit_value(), field)), &target)?;
        let unique = match ans.solution() {
            Some(s) => s.dim() == 0 && s.particular[0] == *h.counit(j),
            None => false,
        };
        if !unique {
            return Err(internal("terminal object", Check::fail("unique 1-cell", h.label(j).to_string())));
        }
    }
    let endos = gauge_candidates(&cell, &cell)?;
    let forced = match endos {
        Some((ans, s)) => s.dim() == 0 && ans.element(&s.particular) == TensorElement::unit(&[k.clone()]),
        None => false,
    };
    if !forced || GaugeTransformation::check(&TensorElement::unit(&[k.clone()]), &cell, &cell).is_err() {
        return Err(internal("terminal object", Check::fail("gauge endomorphisms", "not forced to 1")));
    }
    Ok(cell)
}

/// The product (H₁, R₁)⊗(H₂, R₂) with R̃ = (Id⊗τ⊗Id)(R₁⊗R₂).
#[derive(Clone, Debug)]
pub struct Product {
    carrier: Arc<Bialgebra>,
    structure: RMatrix,
    first: RMatrix,
    second: RMatrix,
}

impl Product {
    pub fn new(r1: &RMatrix, r2: &RMatrix) -> Result<Self> {
        let carrier = Bialgebra::tensor(r1.carrier(), r2.carrier())?;
        let structure = crate::twist::tensor_rmatrix(&carrier, r1, r2)?;
        Ok(Product {
            carrier,
            structure,
            first: r1.clone(),
            second: r2.clone(),
        })
    }

    pub fn carrier(&self) -> &Arc<Bialgebra> {
        &self.carrier
    }

    pub fn structure(&self) -> &RMatrix {
        &self.structure
    }

    pub fn first(&self) -> &RMatrix {
        &self.first
    }

    pub fn second(&self) -> &RMatrix {
        &self.second
    }

    /// (Id⊗ε, 1⊗1) and (ε⊗Id, 1⊗1).
    pub fn projections(&self) -> Result<(TwistedMorphism, TwistedMorphism)> {
        let (p1, p2) = LinearMap::projections(&self.carrier)?;
        let c1 = TwistedMorphism::with_structures(p1, Twist::trivial(self.first.carrier()), &self.structure, &self.first)
            .map_err(lift)?;
        let c2 = TwistedMorphism::with_structures(p2, Twist::trivial(self.second.carrier()), &self.structure, &self.second)
            .map_err(lift)?;
        Ok((c1, c2))
    }

    fn check_leg(&self, c: &TwistedMorphism, r: &RMatrix) -> Result<()> {
        match c.structures() {
            Some((_, t)) if **c.target() == **r.carrier() && t == r => Ok(()),
            Some(_) => Err(Error::SignatureMismatch(format!(
                "1-cell does not end at the factor {}",
                r.carrier().name()
            ))),
            None => Err(Error::ModeMismatch("1-cell carries no R-matrices".into())),
        }
    }

    fn into_product(&self, c: &TwistedMorphism) -> Result<()> {
        match c.structures() {
            Some((_, t)) if **c.target() == *self.carrier && *t == self.structure => Ok(()),
            Some(_) => Err(Error::SignatureMismatch("1-cell does not end at the product".into())),
            None => Err(Error::ModeMismatch("1-cell carries no R-matrices".into())),
        }
    }
}

/// The diagonal ((f₁⊗f₂)Δ, (1⊗(f₂⊗f₁)(S⁻¹)⊗1)(Id⊗τ⊗Id)(F₁⊗F₂)).
pub fn diagonal(prod: &Product, c1: &TwistedMorphism, c2: &TwistedMorphism) -> Result<TwistedMorphism> {
    prod.check_leg(c1, &prod.first)?;
    prod.check_leg(c2, &prod.second)?;
    let (s, s2) = (c1.structures().unwrap().0, c2.structures().unwrap().0);
    if **c1.source() != **c2.source() || s != s2 {
        return Err(Error::SignatureMismatch("1-cells have different sources".into()));
    }
    if !s.satisfies_triangularity() {
        return Err(Error::NotTriangular);
    }
    let h = c1.source();
    let p = prod.carrier();
    let one = [h.clone()];
    let mut cols = Vec::with_capacity(h.dim());
    for j in 0..h.dim() {
        let d = TensorElement::basis(&one, &[j]).comult(0)?;
        let img = d.apply(&[Some(c1.map()), Some(c2.map())])?.merge(0, p)?;
        cols.push(img.terms().map(|(t, c)| (t[0], c.clone())).collect());
    }
    let map = LinearMap::new(h, p, cols)?;
    let sinv = s.inverse().apply(&[Some(c2.map()), Some(c1.map())])?;
    let el = canonical_element(p, c1.twist().element(), c2.twist().element(), &sinv)?;
    let twist = Twist::check(p, &el).map_err(lift)?;
    let diag = TwistedMorphism::with_structures(map, twist, s, prod.structure()).map_err(lift)?;
    let (p1, p2) = prod.projections()?;
    if compose(&p1, &diag)? != *c1 {
        return Err(internal("diagonal", Check::fail("p₁∘diagonal", "does not recover the first 1-cell")));
    }
    if compose(&p2, &diag)? != *c2 {
        return Err(internal("diagonal", Check::fail("p₂∘diagonal", "does not recover the second 1-cell")));
    }
    Ok(diag)
}

/// (Id⊗ε⊗ε⊗Id) of a twist on the product, as an element of the product.
fn middle_counit(prod: &Product, c: &TwistedMorphism) -> Result<TensorElement> {
    let [_, _, g, _] = phi_components(c.twist().element())?;
    g.merge(0, prod.carrier())
}

/// g = (Id⊗ε⊗ε⊗Id)(F′)⁻¹ (g₁⊗g₂) (Id⊗ε⊗ε⊗Id)(F) for 2-cells gᵢ between
/// the projected 1-cells; checked against every alternative and against the
/// full linear candidate space.
pub fn mediating_2cell(
    prod: &Product,
    g1: &TensorElement,
    g2: &TensorElement,
    from: &TwistedMorphism,
    to: &TwistedMorphism,
    alternatives: &[TensorElement],
) -> Result<GaugeTransformation> {
    prod.into_product(from)?;
    prod.into_product(to)?;
    let (p1, p2) = prod.projections()?;
    let (a1, b1) = (compose(&p1, from)?, compose(&p1, to)?);
    let (a2, b2) = (compose(&p2, from)?, compose(&p2, to)?);
    let r1 = validate_gauge(g1, &a1, &b1);
    let r2 = validate_gauge(g2, &a2, &b2);
    if !r1.passed() || !r2.passed() {
        let mut r = r1;
        r.extend(r2);
        return Err(Error::ProjectionMismatch(Box::new(r)));
    }
    let (h1, h2) = parts_of(prod.carrier())?;
    let g1 = g1.retag(&[h1])?;
    let g2 = g2.retag(&[h2])?;
    let gg = g1.tensor(&g2)?.merge(0, prod.carrier())?;
    let big_g = middle_counit(prod, from)?;
    let big_g2 = middle_counit(prod, to)?;
    let g = big_g2.inv()?.times(&gg).times(&big_g);
    let cell = GaugeTransformation::check(&g, from, to).map_err(lift)?;
    let (q1, q2) = (p1.map(), p2.map());
    if q1.image(&g)? != g1 || q2.image(&g)? != g2 {
        return Err(internal("mediating 2-cell", Check::fail("projections", "p(g) differs from the inputs")));
    }
    let mut ans = gauge_ansatz(from, to)?;
    ans.impose(|a| q1.image(a), &g1)?;
    ans.impose(|a| q2.image(a), &g2)?;
    ans.impose(|a| Ok(big_g2.times(a)), &gg.times(&big_g))?;
    let unique = match ans.solution() {
        Some(s) => s.dim() == 0 && ans.element(&s.particular) == g,
        None => false,
    };
    if !unique {
        return Err(internal("mediating 2-cell", Check::fail("uniqueness", "candidate space is not {g}")));
    }
    for alt in alternatives {
        let fits = GaugeTransformation::check(alt, from, to).is_ok()
            && q1.image(alt)? == g1
            && q2.image(alt)? == g2;
        if fits && alt.retag(&[prod.carrier().clone()])? != g {
            return Err(internal("mediating 2-cell", Check::fail("uniqueness", format!("alternative {alt}"))));
        }
    }
    Ok(cell)
}

/// (f₁⊗f₂, (Id⊗τ⊗Id)(F₁⊗F₂)) between products; triangular mode only.
pub fn tensor_onecells(
    source: &Product,
    target: &Product,
    c1: &TwistedMorphism,
    c2: &TwistedMorphism,
) -> Result<TwistedMorphism> {
    if !c1.is_triangular_mode() || !c2.is_triangular_mode() {
        return Err(Error::ModeMismatch("both 1-cells must run between triangular bialgebras".into()));
    }
    let (s1, t1) = c1.structures().unwrap();
    let (s2, t2) = c2.structures().unwrap();
    if s1 != source.first() || s2 != source.second() || t1 != target.first() || t2 != target.second() {
        return Err(Error::SignatureMismatch("1-cells do not run between the given products".into()));
    }
    let map = LinearMap::tensor(c1.map(), c2.map(), source.carrier(), target.carrier())?;
    let (_, b2) = parts_of(target.carrier())?;
    let (b1, _) = parts_of(target.carrier())?;
    let unit = TensorElement::unit(&[b2, b1]);
    let el = canonical_element(target.carrier(), c1.twist().element(), c2.twist().element(), &unit)?;
    let twist = Twist::check(target.carrier(), &el).map_err(lift)?;
    TwistedMorphism::with_structures(map, twist, source.structure(), target.structure()).map_err(lift)
}

/// Result of certifying a 1-cell into a product as a twisted tensor product.
#[derive(Clone, Debug)]
pub struct Certification {
    pub report: ValidationReport,
    pub certified: bool,
    pub inverse: Option<TwistedMorphism>,
    pub diagonal: Option<TwistedMorphism>,
    /// W when the twist has the form 1⊗W⁻¹⊗1 with W central.
    pub weak: Option<TensorElement>,
}

/// Check that c: (H, R) → (H₁, R₁)⊗(H₂, R₂) exhibits (H, R) as a twisted
/// tensor product, and report the equivalent characterizations.
pub fn certify_twisted_tensor_product(prod: &Product, c: &TwistedMorphism) -> Result<Certification> {
    prod.into_product(c)?;
    let mut report = ValidationReport::new(format!("twisted tensor product via {} → {}", c.source().name(), prod.carrier().name()));
    let inverse = match invert_onecell(c) {
        Ok(i) => Some(i),
        Err(Error::NotInvertible) => None,
        Err(e) => return Err(e),
    };
    report.push(Check::from_bool("invertible 1-cell", inverse.is_some()));
    let (p1, p2) = prod.projections()?;
    let c1 = compose(&p1, c)?;
    let c2 = compose(&p2, c)?;
    report.push(Check::from_bool("f₁ surjective", c1.map().is_surjective()));
    report.push(Check::from_bool("f₂ surjective", c2.map().is_surjective()));
    let rf = prod.structure().twisted_by(c.twist())?;
    let (r, _) = c.structures().unwrap();
    let fr = r.element().apply(&[Some(c.map()), Some(c.map())])?.retag(&pair(rf.carrier()))?;
    report.push(Check::from_bool(
        "isomorphism onto the twisted product",
        c.map().is_invertible() && fr == *rf.element(),
    ));
    let diag = match diagonal(prod, &c1, &c2) {
        Ok(d) => Some(d),
        Err(Error::NotTriangular) => None,
        Err(e) => return Err(e),
    };
    let mut weak = None;
    match &diag {
        None => report.push(Check::fail("diagonal", "source is not triangular")),
        Some(d) => {
            report.push(Check::from_bool("diagonal invertible", d.is_invertible() == inverse.is_some()));
            report.push(Check::from_bool("diagonal is a bialgebra isomorphism onto its twist", d.map().is_invertible()));
            let unit = TensorElement::unit(&[prod.carrier().clone()]);
            let m = mediating_2cell(prod, &TensorElement::unit(&[c1.target().clone()]), &TensorElement::unit(&[c2.target().clone()]), d, c, &[])?;
            let expected = middle_counit(prod, c)?.inv()?;
            report.push(Check::from_bool("mediating 2-cell diagonal ⇒ c", *m.element() == expected));
            report.push(Check::from_bool("diagonal has trivial middle counit", middle_counit(prod, d)? == unit));
            let [f1, f2, g, hh] = phi_components(c.twist().element())?;
            let trivial = |t: &TensorElement| *t == TensorElement::unit(t.factors());
            if trivial(&f1) && trivial(&f2) && trivial(&g) {
                let w = hh.inv()?;
                if w.is_central() {
                    report.push(Check::from_bool("weak form: diagonal reconstructs c", d == c));
                    weak = Some(w);
                }
            }
        }
    }
    let certified = inverse.is_some();
    Ok(Certification {
        report,
        certified,
        inverse,
        diagonal: diag,
        weak,
    })
}
