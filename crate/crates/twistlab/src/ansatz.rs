//! Unknown tensor elements constrained by linear equations.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::bialgebra::Bialgebra;
use crate::element::TensorElement;
use crate::error::Result;
use crate::linalg::{AffineSpace, Rref, SparseRow};
use crate::poly::MPoly;
use crate::scalar::{FieldSpec, Scalar};

/// An unknown element of the tensor product of `factors`, with coordinates
/// indexed by flat basis index.
#[derive(Clone, Debug)]
pub struct Ansatz {
    factors: Vec<Arc<Bialgebra>>,
    field: FieldSpec,
    rows: Rref,
}

impl Ansatz {
    pub fn new(factors: &[Arc<Bialgebra>]) -> Self {
        let field = factors[0].field();
        let n = factors.iter().map(|f| f.dim()).product();
        Ansatz {
            factors: factors.to_vec(),
            field,
            rows: Rref::new(field, n),
        }
    }

    pub fn unknowns(&self) -> usize {
        self.factors.iter().map(|f| f.dim()).product()
    }

    pub fn factors(&self) -> &[Arc<Bialgebra>] {
        &self.factors
    }

    fn tuple(&self, mut flat: usize) -> Vec<usize> {
        let mut t = vec![0; self.factors.len()];
        for l in (0..self.factors.len()).rev() {
            let d = self.factors[l].dim();
            t[l] = flat % d;
            flat /= d;
        }
        t
    }

    pub fn basis(&self, flat: usize) -> TensorElement {
        TensorElement::basis(&self.factors, &self.tuple(flat))
    }

    /// Impose op(x) = rhs for a linear op.
    pub fn impose<F>(&mut self, op: F, rhs: &TensorElement) -> Result<()>
    where
        F: Fn(&TensorElement) -> Result<TensorElement>,
    {
        let mut eqs: BTreeMap<Vec<usize>, (SparseRow, Scalar)> = BTreeMap::new();
        let zero = Scalar::zero(self.field);
        for j in 0..self.unknowns() {
            let img = op(&self.basis(j))?;
            for (t, c) in img.terms() {
                eqs.entry(t)
                    .or_insert_with(|| (SparseRow::new(), zero.clone()))
                    .0
                    .insert(j, c.clone());
            }
        }
        for (t, c) in rhs.terms() {
            eqs.entry(t).or_insert_with(|| (SparseRow::new(), zero.clone())).1 = c.clone();
        }
        for (_, (row, r)) in eqs {
            self.rows.add(row, r);
        }
        Ok(())
    }

    pub fn solution(&self) -> Option<AffineSpace> {
        self.rows.solution()
    }

    pub fn element(&self, coords: &[Scalar]) -> TensorElement {
        let terms = coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.tuple(i), c.clone()));
        TensorElement::from_terms(&self.factors, terms).expect("coordinates are in range")
    }
}

/// The point p + Σ tᵢ dᵢ of an affine space as basis elements v₀ = p,
/// vᵢ = dᵢ, ready for building polynomial equations.
pub fn affine_basis(a: &Ansatz, space: &AffineSpace) -> Vec<TensorElement> {
    std::iter::once(&space.particular)
        .chain(&space.directions)
        .map(|v| a.element(v))
        .collect()
}

/// Multiplier polynomials m₀ = 1, mᵢ = t_{i−1} over k parameters.
pub fn multipliers(field: FieldSpec, k: usize) -> Vec<MPoly> {
    std::iter::once(MPoly::constant(Scalar::one(field), k))
        .chain((0..k).map(|i| MPoly::var(field, k, i)))
        .collect()
}

/// Accumulates Σ (polynomial)·(element) into one polynomial per basis tuple.
#[derive(Debug)]
pub struct PolySystem {
    field: FieldSpec,
    nvars: usize,
    eqs: BTreeMap<Vec<usize>, MPoly>,
}

impl PolySystem {
    pub fn new(field: FieldSpec, nvars: usize) -> Self {
        PolySystem {
            field,
            nvars,
            eqs: BTreeMap::new(),
        }
    }

    pub fn add(&mut self, coef: &MPoly, el: &TensorElement) {
        for (t, c) in el.terms() {
            let e = self
                .eqs
                .entry(t)
                .or_insert_with(|| MPoly::zero(self.field, self.nvars));
            *e = e.add(&coef.scale(c));
        }
    }

    pub fn equations(self) -> Vec<MPoly> {
        self.eqs.into_values().filter(|e| !e.is_zero()).collect()
    }
}
