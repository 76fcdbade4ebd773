//! Linear maps between bialgebras, stored by columns.

use std::sync::Arc;

use crate::bialgebra::{Bialgebra, SparseVec};
use crate::element::TensorElement;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::report::{Check, ValidationReport};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct LinearMap {
    source: Arc<Bialgebra>,
    target: Arc<Bialgebra>,
    cols: Vec<SparseVec>,
}

impl PartialEq for LinearMap {
    fn eq(&self, other: &Self) -> bool {
        self.source.same_algebra(&other.source)
            && self.target.same_algebra(&other.target)
            && self.cols == other.cols
    }
}

impl LinearMap {
    /// Column j is the image of source basis element j.
    pub fn new(source: &Arc<Bialgebra>, target: &Arc<Bialgebra>, cols: Vec<SparseVec>) -> Result<Self> {
        if cols.len() != source.dim() {
            return Err(Error::Dimension(format!(
                "{} columns for source of dim {}",
                cols.len(),
                source.dim()
            )));
        }
        let mut norm = Vec::with_capacity(cols.len());
        for col in cols {
            let mut m = std::collections::BTreeMap::new();
            for (i, c) in col {
                if i >= target.dim() {
                    return Err(Error::Dimension(format!("row {i} out of range")));
                }
                if c.field() != target.field() {
                    return Err(Error::FieldMismatch(format!("{} vs {}", c.field(), target.field())));
                }
                let e = m.entry(i).or_insert_with(|| Scalar::zero(c.field()));
                *e += &c;
            }
            norm.push(crate::bialgebra::sparse_from_map(m));
        }
        Ok(LinearMap {
            source: source.clone(),
            target: target.clone(),
            cols: norm,
        })
    }

    /// From a dense target.dim × source.dim matrix.
    pub fn from_matrix(source: &Arc<Bialgebra>, target: &Arc<Bialgebra>, m: &Matrix) -> Result<Self> {
        if m.len() != target.dim() || m.iter().any(|r| r.len() != source.dim()) {
            return Err(Error::Dimension("matrix shape does not match presentations".into()));
        }
        let cols = (0..source.dim())
            .map(|j| {
                (0..target.dim())
                    .filter(|&i| !m[i][j].is_zero())
                    .map(|i| (i, m[i][j].clone()))
                    .collect()
            })
            .collect();
        Self::new(source, target, cols)
    }

    pub fn identity(h: &Arc<Bialgebra>) -> Self {
        let cols = (0..h.dim()).map(|i| vec![(i, Scalar::one(h.field()))]).collect();
        LinearMap {
            source: h.clone(),
            target: h.clone(),
            cols,
        }
    }

    /// ε: H → 𝕜.
    pub fn counit_map(h: &Arc<Bialgebra>, base: &Arc<Bialgebra>) -> Self {
        let cols = (0..h.dim())
            .map(|i| {
                let c = h.counit(i);
                if c.is_zero() {
                    vec![]
                } else {
                    vec![(0, c.clone())]
                }
            })
            .collect();
        LinearMap {
            source: h.clone(),
            target: base.clone(),
            cols,
        }
    }

    /// u: 𝕜 → H.
    pub fn unit_map(base: &Arc<Bialgebra>, h: &Arc<Bialgebra>) -> Self {
        LinearMap {
            source: base.clone(),
            target: h.clone(),
            cols: vec![h.unit().clone()],
        }
    }

    /// p₁ = Id⊗ε and p₂ = ε⊗Id on a tensor-product bialgebra.
    pub fn projections(h: &Arc<Bialgebra>) -> Result<(LinearMap, LinearMap)> {
        let (a, b) = h
            .parts()
            .ok_or_else(|| Error::SignatureMismatch(format!("{} is not a tensor product", h.name())))?;
        let db = b.dim();
        let mut c1 = Vec::with_capacity(h.dim());
        let mut c2 = Vec::with_capacity(h.dim());
        for i in 0..h.dim() {
            let (ia, ib) = (i / db, i % db);
            let eb = b.counit(ib);
            let ea = a.counit(ia);
            c1.push(if eb.is_zero() { vec![] } else { vec![(ia, eb.clone())] });
            c2.push(if ea.is_zero() { vec![] } else { vec![(ib, ea.clone())] });
        }
        Ok((
            LinearMap { source: h.clone(), target: a.clone(), cols: c1 },
            LinearMap { source: h.clone(), target: b.clone(), cols: c2 },
        ))
    }

    pub fn source(&self) -> &Arc<Bialgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Bialgebra> {
        &self.target
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.cols
    }

    pub fn matrix(&self) -> Matrix {
        let f = self.target.field();
        let mut m = vec![vec![Scalar::zero(f); self.source.dim()]; self.target.dim()];
        for (j, col) in self.cols.iter().enumerate() {
            for (i, c) in col {
                m[*i][j] = c.clone();
            }
        }
        m
    }

    /// Same matrix, new (algebra-compatible) endpoints.
    pub fn retag(&self, source: &Arc<Bialgebra>, target: &Arc<Bialgebra>) -> Result<Self> {
        if !source.same_algebra(&self.source) || !target.same_algebra(&self.target) {
            return Err(Error::SignatureMismatch("retag to a different algebra".into()));
        }
        Ok(LinearMap {
            source: source.clone(),
            target: target.clone(),
            cols: self.cols.clone(),
        })
    }

    /// f(a) for an arity-1 element.
    pub fn image(&self, a: &TensorElement) -> Result<TensorElement> {
        a.apply(&[Some(self)])
    }

    /// self ∘ other.
    pub fn compose(&self, other: &LinearMap) -> Result<LinearMap> {
        if !other.target.same_algebra(&self.source) {
            return Err(Error::CompositionMismatch(format!(
                "{} → {} after {} → {}",
                self.source.name(),
                self.target.name(),
                other.source.name(),
                other.target.name()
            )));
        }
        let f = self.target.field();
        let cols = other
            .cols
            .iter()
            .map(|col| {
                let mut m = std::collections::BTreeMap::new();
                for (k, c) in col {
                    for (i, v) in &self.cols[*k] {
                        let e = m.entry(*i).or_insert_with(|| Scalar::zero(f));
                        *e += &(c * v);
                    }
                }
                crate::bialgebra::sparse_from_map(m)
            })
            .collect();
        Ok(LinearMap {
            source: other.source.clone(),
            target: self.target.clone(),
            cols,
        })
    }

    /// f⊗g between the given tensor-product bialgebras.
    pub fn tensor(
        f: &LinearMap,
        g: &LinearMap,
        source: &Arc<Bialgebra>,
        target: &Arc<Bialgebra>,
    ) -> Result<LinearMap> {
        if source.dim() != f.source.dim() * g.source.dim()
            || target.dim() != f.target.dim() * g.target.dim()
        {
            return Err(Error::Dimension("tensor of maps: endpoint dimensions".into()));
        }
        let (sb, tb) = (g.source.dim(), g.target.dim());
        let cols = (0..source.dim())
            .map(|j| {
                let mut v = Vec::new();
                for (a, ca) in &f.cols[j / sb] {
                    for (b, cb) in &g.cols[j % sb] {
                        v.push((a * tb + b, ca * cb));
                    }
                }
                v
            })
            .collect();
        LinearMap::new(source, target, cols)
    }

    pub fn is_invertible(&self) -> bool {
        self.source.dim() == self.target.dim()
            && linalg::inverse(&self.matrix(), self.target.field()).is_some()
    }

    pub fn inverse(&self) -> Result<LinearMap> {
        if self.source.dim() != self.target.dim() {
            return Err(Error::NotInvertible);
        }
        let inv = linalg::inverse(&self.matrix(), self.target.field()).ok_or(Error::NotInvertible)?;
        LinearMap::from_matrix(&self.target, &self.source, &inv)
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.matrix(), self.target.field())
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.target.dim()
    }

    /// Algebra-map and coalgebra-map axioms into the target's structure.
    pub fn validate_bialgebra_map(&self) -> ValidationReport {
        let mut report = ValidationReport::new(format!(
            "map {} → {}",
            self.source.name(),
            self.target.name()
        ));
        let s1 = vec![self.source.clone()];
        let t1 = vec![self.target.clone()];
        let n = self.source.dim();
        let img = |i: usize| self.image(&TensorElement::basis(&s1, &[i])).unwrap();

        let mut mult = Check::pass("multiplicative");
        for i in 0..n {
            for j in 0..n {
                let l = self
                    .image(&TensorElement::basis(&s1, &[i]).times(&TensorElement::basis(&s1, &[j])))
                    .unwrap();
                let r = img(i).times(&img(j));
                let d = l.sub(&r);
                if !d.is_zero() {
                    mult.record(self.source.tuple_label(&[i, j]), d);
                }
            }
        }
        report.push(mult);

        let mut unital = Check::pass("unital");
        let d = self
            .image(&TensorElement::unit(&s1))
            .unwrap()
            .sub(&TensorElement::unit(&t1));
        if !d.is_zero() {
            unital.record("1".into(), d);
        }
        report.push(unital);

        let mut counit = Check::pass("counit preserved");
        for i in 0..n {
            let v = img(i).counit_value();
            if &v != self.source.counit(i) {
                let f0: Vec<Arc<Bialgebra>> = Vec::new();
                counit.record(
                    self.source.tuple_label(&[i]),
                    TensorElement::scalar(&f0, &v - self.source.counit(i), v.field()),
                );
            }
        }
        report.push(counit);

        let mut comult = Check::pass("comultiplication preserved");
        for i in 0..n {
            let l = TensorElement::basis(&s1, &[i])
                .comult(0)
                .unwrap()
                .apply(&[Some(self), Some(self)])
                .unwrap();
            let r = img(i).comult(0).unwrap();
            let d = l.sub(&r);
            if !d.is_zero() {
                comult.record(self.source.tuple_label(&[i]), d);
            }
        }
        report.push(comult);
        report
    }

    pub fn is_bialgebra_map(&self) -> bool {
        self.validate_bialgebra_map().passed()
    }
}
