//! Concrete bialgebras, R-matrices, twists and maps used as fixtures.

use std::sync::Arc;

use crate::bialgebra::{Bialgebra, SparsePair, SparseVec};
use crate::element::TensorElement;
use crate::error::{Error, Result};
use crate::map::LinearMap;
use crate::scalar::{FieldSpec, Scalar};
use crate::twist::{RMatrix, Twist};
use crate::twtr::TwistedMorphism;

pub const ONE: usize = 0;
pub const G: usize = 1;
pub const X: usize = 2;
pub const GX: usize = 3;

/// Sweedler's four-dimensional Hopf algebra on the basis (1, g, x, gx):
/// g² = 1, x² = 0, xg = −gx, Δ(g) = g⊗g, Δ(x) = x⊗1 + g⊗x.
pub fn sweedler_algebra(field: FieldSpec) -> Arc<Bialgebra> {
    let s = |v: i64| Scalar::from_int(field, v);
    let e = |i: usize| -> SparseVec { vec![(i, s(1))] };
    let m = |i: usize, c: i64| -> SparseVec { vec![(i, s(c))] };
    let z: SparseVec = vec![];
    let mult = vec![
        vec![e(ONE), e(G), e(X), e(GX)],
        vec![e(G), e(ONE), e(GX), e(X)],
        vec![e(X), m(GX, -1), z.clone(), z.clone()],
        vec![e(GX), m(X, -1), z.clone(), z],
    ];
    let comult: Vec<SparsePair> = vec![
        vec![((ONE, ONE), s(1))],
        vec![((G, G), s(1))],
        vec![((X, ONE), s(1)), ((G, X), s(1))],
        vec![((ONE, GX), s(1)), ((GX, G), s(1))],
    ];
    let counit = vec![s(1), s(1), s(0), s(0)];
    let labels = ["1", "g", "x", "gx"].map(String::from).to_vec();
    Bialgebra::new("H4", field, labels, mult, e(ONE), comult, counit)
        .expect("Sweedler tables are well formed")
}

/// R_λ = ½(1⊗1 + g⊗1 + 1⊗g − g⊗g) + (λ/2)(x⊗x − xg⊗x + x⊗xg + xg⊗xg),
/// written in the stored basis via xg = −gx.
pub fn sweedler_r_element(h: &Arc<Bialgebra>, lambda: &Scalar) -> TensorElement {
    let f = h.field();
    let half = Scalar::from_ratio(f, 1, 2);
    let l2 = lambda * &half;
    let terms = vec![
        (vec![ONE, ONE], half.clone()),
        (vec![G, ONE], half.clone()),
        (vec![ONE, G], half.clone()),
        (vec![G, G], -&half),
        (vec![X, X], l2.clone()),
        (vec![GX, X], l2.clone()),
        (vec![X, GX], -&l2),
        (vec![GX, GX], l2),
    ];
    TensorElement::from_terms(&[h.clone(), h.clone()], terms).unwrap()
}

/// (H₄, R_λ) with R_λ validated as triangular.
pub fn sweedler(lambda: &Scalar) -> Result<(Arc<Bialgebra>, RMatrix)> {
    let h = sweedler_algebra(lambda.field());
    let r = RMatrix::triangular(&h, &sweedler_r_element(&h, lambda))?;
    Ok((h, r))
}

/// F_d = 1⊗1 + d·xg⊗x = 1⊗1 − d·gx⊗x.
pub fn sweedler_twist(h: &Arc<Bialgebra>, d: &Scalar) -> Result<Twist> {
    let el = TensorElement::from_terms(
        &[h.clone(), h.clone()],
        vec![(vec![ONE, ONE], Scalar::one(h.field())), (vec![GX, X], -d)],
    )?;
    Twist::check(h, &el)
}

/// f_s(g) = g, f_s(x) = s·x.
pub fn sweedler_morphism(h: &Arc<Bialgebra>, s: &Scalar) -> Result<LinearMap> {
    if s.is_zero() {
        return Err(Error::ZeroScale);
    }
    let one = Scalar::one(h.field());
    let m = LinearMap::new(
        h,
        h,
        vec![
            vec![(ONE, one.clone())],
            vec![(G, one)],
            vec![(X, s.clone())],
            vec![(GX, s.clone())],
        ],
    )?;
    let report = m.validate_bialgebra_map();
    if !report.passed() {
        return Err(Error::Internal(Box::new(report)));
    }
    Ok(m)
}

fn generator_names(k: usize) -> Vec<String> {
    match k {
        1 => vec!["g".into()],
        2 => vec!["x".into(), "y".into()],
        _ => (1..=k).map(|i| format!("g{i}")).collect(),
    }
}

/// Label of the group element with the given exponents, e.g. "x^2*y".
pub fn group_label(names: &[String], exps: &[usize]) -> String {
    let parts: Vec<String> = names
        .iter()
        .zip(exps)
        .filter(|(_, &e)| e > 0)
        .map(|(n, &e)| if e == 1 { n.clone() } else { format!("{n}^{e}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn exps_of(mut i: usize, orders: &[usize]) -> Vec<usize> {
    let mut e = vec![0; orders.len()];
    for k in (0..orders.len()).rev() {
        e[k] = i % orders[k];
        i /= orders[k];
    }
    e
}

fn index_of(exps: &[usize], orders: &[usize]) -> usize {
    exps.iter().zip(orders).fold(0, |acc, (e, o)| acc * o + e % o)
}

/// Group algebra of ℤ_{n₁}×…×ℤ_{n_k}; elements indexed row-major in the
/// exponents.
pub fn group_algebra(orders: &[usize], field: FieldSpec) -> Result<Arc<Bialgebra>> {
    if orders.is_empty() || orders.contains(&0) {
        return Err(Error::Dimension("orders must be nonempty and positive".into()));
    }
    let names = generator_names(orders.len());
    let dim: usize = orders.iter().product();
    let one = Scalar::one(field);
    let labels = (0..dim).map(|i| group_label(&names, &exps_of(i, orders))).collect();
    let mult = (0..dim)
        .map(|i| {
            let a = exps_of(i, orders);
            (0..dim)
                .map(|j| {
                    let b = exps_of(j, orders);
                    let s: Vec<usize> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
                    vec![(index_of(&s, orders), one.clone())]
                })
                .collect()
        })
        .collect();
    let comult = (0..dim).map(|i| vec![((i, i), one.clone())]).collect();
    let counit = vec![one.clone(); dim];
    let name = format!(
        "kZ{}",
        orders.iter().map(|o| o.to_string()).collect::<Vec<_>>().join("xZ")
    );
    Bialgebra::new(name, field, labels, mult, vec![(0, one)], comult, counit)
}

pub fn base_field(field: FieldSpec) -> Arc<Bialgebra> {
    Bialgebra::base_field(field)
}

/// The swap twist on kΓ, Γ = ⟨x, y | xⁿ = yⁿ = 1, xy = yx⟩, over ℚ(ζₙ).
#[derive(Clone, Debug)]
pub struct GammaTwist {
    pub algebra: Arc<Bialgebra>,
    pub twist: Twist,
    /// x ↦ y, y ↦ x.
    pub swap: LinearMap,
}

/// F = (1/n) Σ_{i,j} ζ^{−ij} xⁱ⊗y^{−j} together with the swap automorphism.
pub fn gamma_twist(n: usize) -> Result<GammaTwist> {
    if n < 2 {
        return Err(Error::Dimension("gamma twist needs n ≥ 2".into()));
    }
    let field = FieldSpec::cyclotomic(n as u32)?;
    let h = group_algebra(&[n, n], field)?;
    let orders = [n, n];
    let inv_n = Scalar::from_ratio(field, 1, n as i64);
    let mut terms = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let e = ((n * n - i * j) % n) as u64;
            let c = &Scalar::zeta_pow(field, e) * &inv_n;
            terms.push((
                vec![index_of(&[i, 0], &orders), index_of(&[0, (n - j) % n], &orders)],
                c,
            ));
        }
    }
    let el = TensorElement::from_terms(&[h.clone(), h.clone()], terms)?;
    let twist = Twist::check(&h, &el)?;
    let one = Scalar::one(field);
    let cols = (0..n * n)
        .map(|k| {
            let e = exps_of(k, &orders);
            vec![(index_of(&[e[1], e[0]], &orders), one.clone())]
        })
        .collect();
    let swap = LinearMap::new(&h, &h, cols)?;
    let report = swap.validate_bialgebra_map();
    if !report.passed() {
        return Err(Error::Internal(Box::new(report)));
    }
    Ok(GammaTwist {
        algebra: h,
        twist,
        swap,
    })
}

/// (f_s, F_d): (H, R_λ) → (H, R_γ) with γ = λs² − 2d.
pub fn sweedler_onecell(lambda: &Scalar, s: &Scalar, d: &Scalar) -> Result<TwistedMorphism> {
    let (h, r) = sweedler(lambda)?;
    let gamma = &(lambda * &(s * s)) - &(d * &Scalar::from_int(h.field(), 2));
    let (_, r2) = sweedler(&gamma)?;
    TwistedMorphism::with_structures(sweedler_morphism(&h, s)?, sweedler_twist(&h, d)?, &r, &r2)
}

impl GammaTwist {
    /// R′ = (F^op)⁻¹ (f⊗f)(R) F, the structure making (f, F) a 1-cell out
    /// of (kΓ, R).
    pub fn transported(&self, r: &RMatrix) -> Result<RMatrix> {
        let f = self.twist.element();
        let el = f
            .op()
            .inv()?
            .times(&r.element().apply(&[Some(&self.swap), Some(&self.swap)])?)
            .times(f);
        RMatrix::with_flag(&self.algebra, &el, r.is_triangular())
    }

    /// (f, F): (kΓ, R) → (kΓ, R′).
    pub fn onecell(&self, r: &RMatrix) -> Result<TwistedMorphism> {
        let r2 = self.transported(r)?;
        TwistedMorphism::with_structures(self.swap.clone(), self.twist.clone(), r, &r2)
    }
}
