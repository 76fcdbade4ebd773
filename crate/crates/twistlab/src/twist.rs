//! Twists, quasitriangular structures, weak R-matrices and the
//! decomposition of twists on tensor products.

use std::sync::{Arc, OnceLock};

use crate::bialgebra::{Bialgebra, SparsePair};
use crate::element::TensorElement;
use crate::error::{Error, Result};
use crate::map::LinearMap;
use crate::report::{Check, ValidationReport};

/// Compare two elements; on failure the check points at the first
/// offending basis tuple of lhs − rhs.
pub fn eq_check(name: &str, lhs: &TensorElement, rhs: &TensorElement) -> Check {
    let mut c = Check::pass(name);
    if !lhs.compatible(rhs) {
        return Check::fail(name, "leg signatures differ");
    }
    let d = lhs.sub(rhs);
    let first = d.terms().next().map(|(t, _)| d.tuple_label(&t));
    if let Some(at) = first {
        c.record(at, d);
    }
    c
}

pub(crate) fn internal(subject: &str, check: Check) -> Error {
    let mut r = ValidationReport::new(subject);
    r.push(check);
    Error::Internal(Box::new(r))
}

fn pair(h: &Arc<Bialgebra>) -> Vec<Arc<Bialgebra>> {
    vec![h.clone(), h.clone()]
}

fn triple(h: &Arc<Bialgebra>) -> Vec<Arc<Bialgebra>> {
    vec![h.clone(), h.clone(), h.clone()]
}

fn shape_check(name: &str, h: &Arc<Bialgebra>, t: &TensorElement, arity: usize) -> Check {
    let ok = t.arity() == arity && t.factors().iter().all(|f| f.same_algebra(h));
    if ok {
        Check::pass(name)
    } else {
        Check::fail(name, format!("expected arity {arity} over {}", h.name()))
    }
}

/// A validated Drinfel'd twist F on a bialgebra.
#[derive(Clone, Debug)]
pub struct Twist {
    carrier: Arc<Bialgebra>,
    element: TensorElement,
    inverse: TensorElement,
    twisted: OnceLock<Arc<Bialgebra>>,
    witness: Option<TensorElement>,
}

impl PartialEq for Twist {
    fn eq(&self, other: &Self) -> bool {
        self.element == other.element
    }
}

/// 2-cocycle and normalization checks for F on H.
pub fn validate_twist(h: &Arc<Bialgebra>, f: &TensorElement) -> (ValidationReport, Option<TensorElement>) {
    validate_twist_with(h, f, None)
}

/// As [`validate_twist`], trying `candidate` as the inverse before solving for one.
pub fn validate_twist_with(
    h: &Arc<Bialgebra>,
    f: &TensorElement,
    candidate: Option<&TensorElement>,
) -> (ValidationReport, Option<TensorElement>) {
    let mut report = ValidationReport::new(format!("twist on {}", h.name()));
    let shape = shape_check("shape", h, f, 2);
    if !shape.pass {
        report.push(shape);
        return (report, None);
    }
    let f = f.retag(&pair(h)).unwrap();
    let one2 = TensorElement::unit(&pair(h));
    let known = candidate
        .and_then(|c| c.retag(&pair(h)).ok())
        .filter(|c| f.times(c) == one2 && c.times(&f) == one2);
    let solved = match known {
        Some(c) => Ok(c),
        None => f.inv(),
    };
    let inverse = match solved {
        Ok(u) => {
            report.push(Check::pass("invertible"));
            Some(u)
        }
        Err(_) => {
            report.push(Check::fail("invertible", "no two-sided inverse"));
            None
        }
    };
    let h3 = triple(h);
    let lhs = f.embed(&h3, &[0, 1]).unwrap().times(&f.comult(0).unwrap());
    let rhs = f.embed(&h3, &[1, 2]).unwrap().times(&f.comult(1).unwrap());
    report.push(eq_check("2-cocycle", &lhs, &rhs));
    let one = TensorElement::unit(&[h.clone()]);
    let mut norm = eq_check("normalization", &f.counit(&[0]).unwrap(), &one);
    if norm.pass {
        norm = eq_check("normalization", &f.counit(&[1]).unwrap(), &one);
    }
    report.push(norm);
    (report, inverse)
}

impl Twist {
    pub fn check(h: &Arc<Bialgebra>, f: &TensorElement) -> Result<Twist> {
        Twist::check_with_inverse(h, f, None)
    }

    /// As [`Twist::check`]; a candidate inverse is verified by multiplication.
    pub fn check_with_inverse(h: &Arc<Bialgebra>, f: &TensorElement, inverse: Option<&TensorElement>) -> Result<Twist> {
        let (report, inverse) = validate_twist_with(h, f, inverse);
        match inverse {
            Some(inverse) if report.passed() => Ok(Twist {
                carrier: h.clone(),
                element: f.retag(&pair(h)).unwrap(),
                inverse,
                twisted: OnceLock::new(),
                witness: None,
            }),
            _ => Err(Error::Validation(Box::new(report))),
        }
    }

    pub fn trivial(h: &Arc<Bialgebra>) -> Twist {
        let one = TensorElement::unit(&pair(h));
        Twist {
            carrier: h.clone(),
            element: one.clone(),
            inverse: one,
            twisted: OnceLock::new(),
            witness: None,
        }
    }

    pub fn carrier(&self) -> &Arc<Bialgebra> {
        &self.carrier
    }

    pub fn element(&self) -> &TensorElement {
        &self.element
    }

    pub fn inverse(&self) -> &TensorElement {
        &self.inverse
    }

    /// The unit h when this twist was produced as F^h.
    pub fn witness(&self) -> Option<&TensorElement> {
        self.witness.as_ref()
    }

    pub fn is_trivial(&self) -> bool {
        self.element == TensorElement::unit(&pair(&self.carrier))
    }

    /// Δ_F(x) = FΔ(x)F⁻¹ on the basis.
    pub fn twisted_comult(&self) -> Vec<SparsePair> {
        let h = &self.carrier;
        let one = [h.clone()];
        (0..h.dim())
            .map(|i| {
                let d = TensorElement::basis(&one, &[i]).comult(0).unwrap();
                let t = self.element.times(&d).times(&self.inverse);
                t.terms().map(|(t, c)| ((t[0], t[1]), c.clone())).collect()
            })
            .collect()
    }

    /// H_F, revalidated on first use.
    pub fn twisted_carrier(&self) -> Result<Arc<Bialgebra>> {
        if let Some(t) = self.twisted.get() {
            return Ok(t.clone());
        }
        let name = format!("{}_F", self.carrier.name());
        let hf = self.carrier.with_comult(name, self.twisted_comult());
        let report = hf.validate();
        if !report.passed() {
            return Err(Error::Internal(Box::new(report)));
        }
        Ok(self.twisted.get_or_init(|| hf).clone())
    }

    /// F^h = (h⊗h)FΔ(h⁻¹).
    pub fn by_unit(&self, h: &TensorElement) -> Result<Twist> {
        let carrier = &self.carrier;
        let h = h.retag(&[carrier.clone()])?;
        let hinv = h.inv()?;
        let hh = h.tensor(&h)?;
        let el = hh.times(&self.element).times(&hinv.comult(0)?);
        let elinv = h.comult(0)?.times(&self.inverse).times(&hinv.tensor(&hinv)?);
        let mut t = Twist::check_with_inverse(carrier, &el, Some(&elinv)).map_err(|e| match e {
            Error::Validation(r) => Error::Internal(r),
            e => e,
        })?;
        t.witness = Some(h);
        Ok(t)
    }

    /// F⁻¹ regarded as a twist on H_F.
    pub fn inverse_on_twisted(&self) -> Result<Twist> {
        let hf = self.twisted_carrier()?;
        Twist::check_with_inverse(&hf, &self.inverse, Some(&self.element))
    }
}

/// Conjugation x ↦ h x h⁻¹ as a linear map between the given carriers.
pub fn conjugation_map(h: &TensorElement, source: &Arc<Bialgebra>, target: &Arc<Bialgebra>) -> Result<LinearMap> {
    let h = h.retag(&[source.clone()])?;
    let hinv = h.inv()?;
    let one = [source.clone()];
    let cols = (0..source.dim())
        .map(|i| {
            h.times(&TensorElement::basis(&one, &[i]))
                .times(&hinv)
                .terms()
                .map(|(t, c)| (t[0], c.clone()))
                .collect()
        })
        .collect();
    LinearMap::new(source, target, cols)
}

/// A quasitriangular structure, with a stored triangular flag.
#[derive(Clone, Debug)]
pub struct RMatrix {
    carrier: Arc<Bialgebra>,
    element: TensorElement,
    inverse: TensorElement,
    triangular: bool,
}

impl PartialEq for RMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.element == other.element && self.triangular == other.triangular
    }
}

/// Quasi-cocommutativity, hexagons, counit legs, QYB and, when asked for,
/// triangularity.
pub fn validate_rmatrix(
    h: &Arc<Bialgebra>,
    r: &TensorElement,
    triangular: bool,
) -> (ValidationReport, Option<TensorElement>) {
    let mut report = ValidationReport::new(format!(
        "{} structure on {}",
        if triangular { "triangular" } else { "quasitriangular" },
        h.name()
    ));
    let shape = shape_check("shape", h, r, 2);
    if !shape.pass {
        report.push(shape);
        return (report, None);
    }
    let r = r.retag(&pair(h)).unwrap();
    let inverse = match r.inv() {
        Ok(u) => {
            report.push(Check::pass("invertible"));
            Some(u)
        }
        Err(_) => {
            report.push(Check::fail("invertible", "no two-sided inverse"));
            None
        }
    };
    let one = [h.clone()];
    let mut qc = Check::pass("quasi-cocommutativity");
    for i in 0..h.dim() {
        let d = TensorElement::basis(&one, &[i]).comult(0).unwrap();
        let lhs = r.times(&d);
        let rhs = d.op().times(&r);
        let diff = lhs.sub(&rhs);
        if !diff.is_zero() {
            qc.record(h.tuple_label(&[i]), diff);
        }
    }
    report.push(qc);
    let h3 = triple(h);
    let r12 = r.embed(&h3, &[0, 1]).unwrap();
    let r13 = r.embed(&h3, &[0, 2]).unwrap();
    let r23 = r.embed(&h3, &[1, 2]).unwrap();
    report.push(eq_check("hexagon (Id⊗Δ)", &r.comult(1).unwrap(), &r13.times(&r12)));
    report.push(eq_check("hexagon (Δ⊗Id)", &r.comult(0).unwrap(), &r13.times(&r23)));
    let unit = TensorElement::unit(&one);
    let mut cl = eq_check("counit legs", &r.counit(&[0]).unwrap(), &unit);
    if cl.pass {
        cl = eq_check("counit legs", &r.counit(&[1]).unwrap(), &unit);
    }
    report.push(cl);
    report.push(eq_check(
        "quantum Yang-Baxter",
        &r12.times(&r13).times(&r23),
        &r23.times(&r13).times(&r12),
    ));
    if triangular {
        match &inverse {
            Some(inv) => report.push(eq_check("triangularity", inv, &r.op())),
            None => report.push(Check::fail("triangularity", "not invertible")),
        }
    }
    (report, inverse)
}

impl RMatrix {
    fn build(h: &Arc<Bialgebra>, r: &TensorElement, triangular: bool) -> Result<RMatrix> {
        let (report, inverse) = validate_rmatrix(h, r, triangular);
        match inverse {
            Some(inverse) if report.passed() => Ok(RMatrix {
                carrier: h.clone(),
                element: r.retag(&pair(h)).unwrap(),
                inverse,
                triangular,
            }),
            _ => Err(Error::Validation(Box::new(report))),
        }
    }

    pub fn quasitriangular(h: &Arc<Bialgebra>, r: &TensorElement) -> Result<RMatrix> {
        Self::build(h, r, false)
    }

    pub fn triangular(h: &Arc<Bialgebra>, r: &TensorElement) -> Result<RMatrix> {
        Self::build(h, r, true)
    }

    pub fn with_flag(h: &Arc<Bialgebra>, r: &TensorElement, triangular: bool) -> Result<RMatrix> {
        Self::build(h, r, triangular)
    }

    /// 1⊗1 on a cocommutative bialgebra.
    pub fn trivial(h: &Arc<Bialgebra>) -> Result<RMatrix> {
        Self::triangular(h, &TensorElement::unit(&pair(h)))
    }

    pub fn carrier(&self) -> &Arc<Bialgebra> {
        &self.carrier
    }

    pub fn element(&self) -> &TensorElement {
        &self.element
    }

    pub fn inverse(&self) -> &TensorElement {
        &self.inverse
    }

    pub fn is_triangular(&self) -> bool {
        self.triangular
    }

    /// Recheck R⁻¹ = R^op without touching the stored flag.
    pub fn satisfies_triangularity(&self) -> bool {
        self.inverse == self.element.op()
    }

    /// The structure regarded as a twist (every R-matrix is one).
    pub fn as_twist(&self) -> Result<Twist> {
        Twist::check(&self.carrier, &self.element)
    }

    /// R_F = F^op R F⁻¹ on H_F.
    pub fn twisted_by(&self, f: &Twist) -> Result<RMatrix> {
        if **f.carrier() != *self.carrier {
            return Err(Error::SignatureMismatch(format!(
                "twist on {}, R-matrix on {}",
                f.carrier().name(),
                self.carrier.name()
            )));
        }
        let hf = f.twisted_carrier()?;
        let el = f
            .element()
            .op()
            .times(&self.element)
            .times(f.inverse())
            .retag(&pair(&hf))?;
        RMatrix::with_flag(&hf, &el, self.triangular).map_err(|e| match e {
            Error::Validation(r) => Error::Internal(r),
            e => e,
        })
    }

    /// R^h = (h⊗h)RΔ(h⁻¹).
    pub fn gauged(&self, h: &TensorElement) -> Result<TensorElement> {
        let h = h.retag(&[self.carrier.clone()])?;
        let hinv = h.inv()?;
        Ok(h.tensor(&h)?.times(&self.element).times(&hinv.comult(0)?))
    }
}

/// A weak R-matrix of (A, B).
#[derive(Clone, Debug)]
pub struct WeakRMatrix {
    left: Arc<Bialgebra>,
    right: Arc<Bialgebra>,
    element: TensorElement,
    inverse: TensorElement,
    central: bool,
}

impl PartialEq for WeakRMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.element == other.element
    }
}

pub fn validate_weak_rmatrix(
    a: &Arc<Bialgebra>,
    b: &Arc<Bialgebra>,
    r: &TensorElement,
) -> (ValidationReport, Option<TensorElement>) {
    let mut report = ValidationReport::new(format!("weak R-matrix of ({}, {})", a.name(), b.name()));
    let ok = r.arity() == 2 && r.factors()[0].same_algebra(a) && r.factors()[1].same_algebra(b);
    if !ok {
        report.push(Check::fail("shape", format!("expected an element of {}⊗{}", a.name(), b.name())));
        return (report, None);
    }
    let r = r.retag(&[a.clone(), b.clone()]).unwrap();
    let inverse = match r.inv() {
        Ok(u) => {
            report.push(Check::pass("invertible"));
            Some(u)
        }
        Err(_) => {
            report.push(Check::fail("invertible", "no two-sided inverse"));
            None
        }
    };
    let abb = [a.clone(), b.clone(), b.clone()];
    let aab = [a.clone(), a.clone(), b.clone()];
    let lhs2 = r.comult(1).unwrap();
    let rhs2 = r.embed(&abb, &[0, 2]).unwrap().times(&r.embed(&abb, &[0, 1]).unwrap());
    report.push(eq_check("weak hexagon (Id⊗Δ)", &lhs2, &rhs2));
    let lhs3 = r.comult(0).unwrap();
    let rhs3 = r.embed(&aab, &[0, 2]).unwrap().times(&r.embed(&aab, &[1, 2]).unwrap());
    report.push(eq_check("weak hexagon (Δ⊗Id)", &lhs3, &rhs3));
    let mut cl = eq_check("counit legs", &r.counit(&[0]).unwrap(), &TensorElement::unit(&[b.clone()]));
    if cl.pass {
        cl = eq_check("counit legs", &r.counit(&[1]).unwrap(), &TensorElement::unit(&[a.clone()]));
    }
    report.push(cl);
    (report, inverse)
}

/// The two variants of a weak R-matrix; the central ones exist only when
/// the input is central.
#[derive(Clone, Debug)]
pub struct WeakVariants {
    /// R^op over (B^op, A^op).
    pub op: WeakRMatrix,
    /// R⁻¹ over (A^cop, B^cop).
    pub inv: WeakRMatrix,
    /// R^op over (B, A).
    pub central_op: Option<WeakRMatrix>,
    /// R⁻¹ over (A, B).
    pub central_inv: Option<WeakRMatrix>,
}

impl WeakRMatrix {
    pub fn check(a: &Arc<Bialgebra>, b: &Arc<Bialgebra>, r: &TensorElement) -> Result<WeakRMatrix> {
        let (report, inverse) = validate_weak_rmatrix(a, b, r);
        match inverse {
            Some(inverse) if report.passed() => {
                let element = r.retag(&[a.clone(), b.clone()]).unwrap();
                let central = element.is_central();
                Ok(WeakRMatrix {
                    left: a.clone(),
                    right: b.clone(),
                    element,
                    inverse,
                    central,
                })
            }
            _ => Err(Error::Validation(Box::new(report))),
        }
    }

    pub fn trivial(a: &Arc<Bialgebra>, b: &Arc<Bialgebra>) -> WeakRMatrix {
        let one = TensorElement::unit(&[a.clone(), b.clone()]);
        WeakRMatrix {
            left: a.clone(),
            right: b.clone(),
            element: one.clone(),
            inverse: one,
            central: true,
        }
    }

    pub fn left(&self) -> &Arc<Bialgebra> {
        &self.left
    }

    pub fn right(&self) -> &Arc<Bialgebra> {
        &self.right
    }

    pub fn element(&self) -> &TensorElement {
        &self.element
    }

    pub fn inverse(&self) -> &TensorElement {
        &self.inverse
    }

    pub fn is_central(&self) -> bool {
        self.central
    }

    fn internal_check(a: &Arc<Bialgebra>, b: &Arc<Bialgebra>, r: &TensorElement) -> Result<WeakRMatrix> {
        WeakRMatrix::check(a, b, r).map_err(|e| match e {
            Error::Validation(r) => Error::Internal(r),
            e => e,
        })
    }

    pub fn variants(&self) -> Result<WeakVariants> {
        let (a, b) = (&self.left, &self.right);
        let (aop, bop) = (a.opposite(), b.opposite());
        let (acop, bcop) = (a.coopposite(), b.coopposite());
        let op_el = self.element.op().reinterpret(&[bop.clone(), aop.clone()])?;
        let op = Self::internal_check(&bop, &aop, &op_el)?;
        let inv_el = self.inverse.reinterpret(&[acop.clone(), bcop.clone()])?;
        let inv = Self::internal_check(&acop, &bcop, &inv_el)?;
        let (central_op, central_inv) = if self.central {
            (
                Some(Self::internal_check(b, a, &self.element.op())?),
                Some(Self::internal_check(a, b, &self.inverse)?),
            )
        } else {
            (None, None)
        };
        Ok(WeakVariants {
            op,
            inv,
            central_op,
            central_inv,
        })
    }

    /// (Δ_A⊗Δ_B)(R), asserted equal to R₁₄R₂₄R₁₃R₂₃.
    pub fn ddr_expand(&self) -> Result<TensorElement> {
        let (a, b) = (&self.left, &self.right);
        let lhs = self.element.comult(0)?.comult(2)?;
        let legs = [a.clone(), a.clone(), b.clone(), b.clone()];
        let e = |p: [usize; 2]| self.element.embed(&legs, &p).unwrap();
        let rhs = e([0, 3]).times(&e([1, 3])).times(&e([0, 2])).times(&e([1, 2]));
        let c = eq_check("(Δ⊗Δ)(R) expansion", &lhs, &rhs);
        if !c.pass {
            return Err(internal("weak R-matrix", c));
        }
        Ok(lhs)
    }
}

pub(crate) fn parts_of(p: &Arc<Bialgebra>) -> Result<(Arc<Bialgebra>, Arc<Bialgebra>)> {
    p.parts()
        .cloned()
        .ok_or_else(|| Error::SignatureMismatch(format!("{} has no tensor-product provenance", p.name())))
}

/// Φ(F) = (F₁, F₂, G, H) with R = G^op H⁻¹.
#[derive(Clone, Debug)]
pub struct PhiDecomposition {
    pub f1: TensorElement,
    pub f2: TensorElement,
    pub g: TensorElement,
    pub h: TensorElement,
    pub r: TensorElement,
}

/// The four partial counits of an element of P⊗P with P = H₁⊗H₂.
pub(crate) fn phi_components(t: &TensorElement) -> Result<[TensorElement; 4]> {
    let legs = t.split(1)?.split(0)?;
    Ok([
        legs.counit(&[1, 3])?,
        legs.counit(&[0, 2])?,
        legs.counit(&[1, 2])?,
        legs.counit(&[0, 3])?,
    ])
}

/// Decompose a twist on P = H₁⊗H₂ and validate the components.
pub fn phi_decompose(p: &Arc<Bialgebra>, f: &Twist) -> Result<PhiDecomposition> {
    let (h1, h2) = parts_of(p)?;
    if **f.carrier() != **p {
        return Err(Error::SignatureMismatch("twist is not on the given tensor product".into()));
    }
    let [f1, f2, g, h] = phi_components(f.element())?;
    let r = g.op().times(&h.inv().map_err(|_| internal("Φ(F)", Check::fail("H invertible", "singular")))?);
    let lift = |e: Error| match e {
        Error::Validation(r) => Error::Internal(r),
        e => e,
    };
    let t1 = Twist::check(&h1, &f1).map_err(lift)?;
    let t2 = Twist::check(&h2, &f2).map_err(lift)?;
    let (h1f, h2f) = (t1.twisted_carrier()?, t2.twisted_carrier()?);
    WeakRMatrix::check(&h2f, &h1f, &r).map_err(lift)?;
    Ok(PhiDecomposition { f1, f2, g, h, r })
}

/// (1⊗W⁻¹⊗1)(Id⊗τ⊗Id)(F₁⊗F₂) as an element of P⊗P.
pub(crate) fn canonical_element(
    p: &Arc<Bialgebra>,
    f1: &TensorElement,
    f2: &TensorElement,
    w_inv: &TensorElement,
) -> Result<TensorElement> {
    let (h1, h2) = parts_of(p)?;
    let legs = [h1.clone(), h2.clone(), h1, h2];
    let mid = f1.tensor(f2)?.permute(&[0, 2, 1, 3])?;
    let w = w_inv.embed(&legs, &[1, 2])?;
    w.times(&mid).merge(2, p)?.merge(0, p)
}

/// F^G equals the canonical form built from Φ(F).
pub fn canonical_form_check(p: &Arc<Bialgebra>, f: &Twist) -> Result<bool> {
    let phi = phi_decompose(p, f)?;
    let g = phi.g.merge(0, p)?;
    let fg = f.by_unit(&g)?;
    let canon = canonical_element(p, &phi.f1, &phi.f2, &phi.r.inv()?)?;
    let c = eq_check("F^G canonical form", fg.element(), &canon);
    if !c.pass {
        return Err(internal("canonical form", c));
    }
    Ok(true)
}

/// F = (1⊗W⁻¹⊗1)(Id⊗τ⊗Id)(F₁⊗F₂) on P = H₁⊗H₂.
pub fn assemble_twist(p: &Arc<Bialgebra>, f1: &Twist, f2: &Twist, w: &WeakRMatrix) -> Result<Twist> {
    let (h1, h2) = parts_of(p)?;
    if **f1.carrier() != *h1 || **f2.carrier() != *h2 {
        return Err(Error::SignatureMismatch("component twists are not on the factors".into()));
    }
    let (h1f, h2f) = (f1.twisted_carrier()?, f2.twisted_carrier()?);
    let (report, _) = validate_weak_rmatrix(&h2f, &h1f, w.element());
    if !report.passed() || **w.left() != *h2f || **w.right() != *h1f {
        let mut report = report;
        if report.passed() {
            report.push(Check::fail("context", "validated over different bialgebras"));
        }
        return Err(Error::WrongWeakContext(Box::new(report)));
    }
    let w_inv = w.inverse().retag(&[h2.clone(), h1.clone()])?;
    let el = canonical_element(p, f1.element(), f2.element(), &w_inv)?;
    Twist::check(p, &el).map_err(|e| match e {
        Error::Validation(r) => Error::Internal(r),
        e => e,
    })
}

/// R_⊗ = (1⊗Q⊗1)(Id⊗τ⊗Id)(R₁⊗R₂).
pub fn assemble_rmatrix(p: &Arc<Bialgebra>, r1: &RMatrix, r2: &RMatrix, q: &WeakRMatrix) -> Result<RMatrix> {
    let (h1, h2) = parts_of(p)?;
    if **r1.carrier() != *h1 || **r2.carrier() != *h2 {
        return Err(Error::SignatureMismatch("R-matrices are not on the factors".into()));
    }
    if !q.is_central() {
        return Err(Error::NotCentral);
    }
    let qel = q.element().retag(&[h2.clone(), h1.clone()])?;
    let el = canonical_element(p, r1.element(), r2.element(), &qel)?;
    let tri = r1.is_triangular() && r2.is_triangular() && el.op().times(&el) == TensorElement::unit(el.factors());
    RMatrix::with_flag(p, &el, tri).map_err(|e| match e {
        Error::Validation(r) => Error::Internal(r),
        e => e,
    })
}

/// The standard structure (Id⊗τ⊗Id)(R₁⊗R₂).
pub fn tensor_rmatrix(p: &Arc<Bialgebra>, r1: &RMatrix, r2: &RMatrix) -> Result<RMatrix> {
    let (h1, h2) = parts_of(p)?;
    assemble_rmatrix(p, r1, r2, &WeakRMatrix::trivial(&h2, &h1))
}

/// The triple (R₁, R₂, Q) of a quasitriangular structure on H₁⊗H₂.
#[derive(Clone, Debug)]
pub struct RTriple {
    pub r1: RMatrix,
    pub r2: RMatrix,
    pub q: WeakRMatrix,
    /// The middle component (Id⊗ε⊗ε⊗Id)(S), 1⊗1 for assembled structures.
    pub g: TensorElement,
}

pub fn decompose_rmatrix(p: &Arc<Bialgebra>, s: &RMatrix) -> Result<RTriple> {
    let (h1, h2) = parts_of(p)?;
    if **s.carrier() != **p {
        return Err(Error::SignatureMismatch("R-matrix is not on the given tensor product".into()));
    }
    let [f1, f2, g, h] = phi_components(s.element())?;
    let lift = |e: Error| match e {
        Error::Validation(r) => Error::Internal(r),
        e => e,
    };
    let r1 = RMatrix::quasitriangular(&h1, &f1).map_err(lift)?;
    let r2 = RMatrix::quasitriangular(&h2, &f2).map_err(lift)?;
    let qel = h.times(&g.op().inv()?);
    let q = WeakRMatrix::check(&h2, &h1, &qel).map_err(lift)?;
    if !q.is_central() {
        return Err(internal("decomposition", Check::fail("Q central", "not central")));
    }
    let gm = g.merge(0, p)?;
    let sg = s.gauged(&gm)?;
    let assembled = assemble_rmatrix(p, &r1, &r2, &q)?;
    let c = eq_check("S^G = R_⊗", &sg, assembled.element());
    if !c.pass {
        return Err(internal("decomposition", c));
    }
    Ok(RTriple { r1, r2, q, g })
}

/// Centrality of h, R′ = (1⊗1)^h and Δ(h), and R^h when applicable.
pub fn central_unit_lemma_check(r: &RMatrix, h: &TensorElement) -> Result<ValidationReport> {
    let carrier = r.carrier();
    let h = h.retag(&[carrier.clone()])?;
    let hinv = h.inv()?;
    let one = TensorElement::unit(&pair(carrier));
    let r_prime = h.tensor(&h)?.times(&one).times(&hinv.comult(0)?);
    let dh = h.comult(0)?;
    let (ch, cr, cd) = (h.is_central(), r_prime.is_central(), dh.is_central());
    let mut report = ValidationReport::new("central unit");
    let mut note = Check::pass("h central");
    if !ch {
        note.note = Some("h is not central".into());
    }
    report.push(note);
    let mut c = Check::pass("R' central");
    if !cr {
        c.note = Some("R' is not central".into());
    }
    report.push(c);
    let mut c = Check::pass("Δ(h) central");
    if !cd {
        c.note = Some("Δ(h) is not central".into());
    }
    report.push(c);
    report.push(Check::from_bool("h and R' central iff Δ(h) central", (ch && cr) == cd));
    if ch && cr {
        let weak = WeakRMatrix::check(carrier, carrier, &r_prime).is_ok();
        if weak {
            let rh = r.gauged(&h)?;
            let (sub, _) = validate_rmatrix(carrier, &rh, false);
            report.push(Check::from_bool("R^h quasitriangular", sub.passed()));
        }
    }
    Ok(report)
}
