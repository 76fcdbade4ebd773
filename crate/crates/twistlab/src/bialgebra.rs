//! Finite-dimensional bialgebras given by structure constants.

use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::element::TensorElement;
use crate::error::{Error, Result};
use crate::report::{Check, ValidationReport};
use crate::scalar::{FieldSpec, Scalar};

/// Sparse vector: sorted (index, nonzero coefficient) pairs.
pub type SparseVec = Vec<(usize, Scalar)>;
/// Sparse element of V⊗V.
pub type SparsePair = Vec<((usize, usize), Scalar)>;

pub(crate) fn sparse_from_map(m: BTreeMap<usize, Scalar>) -> SparseVec {
    m.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

/// A bialgebra (H, m, u, Δ, ε) on a fixed basis.
#[derive(Clone)]
pub struct Bialgebra {
    name: String,
    field: FieldSpec,
    labels: Vec<String>,
    mult: Vec<SparseVec>,
    unit: SparseVec,
    comult: Vec<SparsePair>,
    counit: Vec<Scalar>,
    parts: Option<(Arc<Bialgebra>, Arc<Bialgebra>)>,
    algebra_fp: u64,
    coalgebra_fp: u64,
}

impl PartialEq for Bialgebra {
    fn eq(&self, other: &Self) -> bool {
        self.algebra_fp == other.algebra_fp
            && self.coalgebra_fp == other.coalgebra_fp
            && self.field == other.field
            && self.labels == other.labels
            && self.mult == other.mult
            && self.unit == other.unit
            && self.comult == other.comult
            && self.counit == other.counit
    }
}

impl Eq for Bialgebra {}

impl fmt::Debug for Bialgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bialgebra({}, dim {}, {})", self.name, self.dim(), self.field)
    }
}

fn normalize_vec(v: SparseVec, dim: usize, what: &str) -> Result<SparseVec> {
    let mut m = BTreeMap::new();
    for (i, c) in v {
        if i >= dim {
            return Err(Error::Dimension(format!("{what}: index {i} out of range")));
        }
        let e = m.entry(i).or_insert_with(|| Scalar::zero(c.field()));
        *e += &c;
    }
    Ok(sparse_from_map(m))
}

fn normalize_pair(v: SparsePair, dim: usize, what: &str) -> Result<SparsePair> {
    let mut m = BTreeMap::new();
    for ((i, j), c) in v {
        if i >= dim || j >= dim {
            return Err(Error::Dimension(format!(
                "{what}: index ({i},{j}) out of range"
            )));
        }
        let e = m.entry((i, j)).or_insert_with(|| Scalar::zero(c.field()));
        *e += &c;
    }
    Ok(m.into_iter().filter(|(_, v)| !v.is_zero()).collect())
}

impl Bialgebra {
    /// Build from raw tables. Only shapes and fields are checked here; use
    /// [`Bialgebra::validate`] for the axioms.
    pub fn new(
        name: impl Into<String>,
        field: FieldSpec,
        labels: Vec<String>,
        mult: Vec<Vec<SparseVec>>,
        unit: SparseVec,
        comult: Vec<SparsePair>,
        counit: Vec<Scalar>,
    ) -> Result<Arc<Bialgebra>> {
        let dim = labels.len();
        if dim == 0 {
            return Err(Error::Dimension("dimension must be positive".into()));
        }
        if mult.len() != dim || mult.iter().any(|r| r.len() != dim) {
            return Err(Error::Dimension("multiplication table must be dim×dim".into()));
        }
        if comult.len() != dim || counit.len() != dim {
            return Err(Error::Dimension("comultiplication/counit length must be dim".into()));
        }
        let all_fields = mult
            .iter()
            .flatten()
            .flatten()
            .map(|(_, c)| c.field())
            .chain(unit.iter().map(|(_, c)| c.field()))
            .chain(comult.iter().flatten().map(|(_, c)| c.field()))
            .chain(counit.iter().map(|c| c.field()));
        for f in all_fields {
            if f != field {
                return Err(Error::FieldMismatch(format!(
                    "structure constant over {f}, presentation over {field}"
                )));
            }
        }
        let mut flat = Vec::with_capacity(dim * dim);
        for (i, row) in mult.into_iter().enumerate() {
            for (j, v) in row.into_iter().enumerate() {
                flat.push(normalize_vec(v, dim, &format!("mult[{i}][{j}]"))?);
            }
        }
        let unit = normalize_vec(unit, dim, "unit")?;
        let comult = comult
            .into_iter()
            .enumerate()
            .map(|(i, v)| normalize_pair(v, dim, &format!("comult[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        Ok(Arc::new(Self::assemble(
            name.into(),
            field,
            labels,
            flat,
            unit,
            comult,
            counit,
            None,
        )))
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        name: String,
        field: FieldSpec,
        labels: Vec<String>,
        mult: Vec<SparseVec>,
        unit: SparseVec,
        comult: Vec<SparsePair>,
        counit: Vec<Scalar>,
        parts: Option<(Arc<Bialgebra>, Arc<Bialgebra>)>,
    ) -> Bialgebra {
        let mut h = DefaultHasher::new();
        field.hash(&mut h);
        labels.len().hash(&mut h);
        mult.hash(&mut h);
        unit.hash(&mut h);
        let algebra_fp = h.finish();
        let mut h = DefaultHasher::new();
        comult.hash(&mut h);
        counit.hash(&mut h);
        let coalgebra_fp = h.finish();
        Bialgebra {
            name,
            field,
            labels,
            mult,
            unit,
            comult,
            counit,
            parts,
            algebra_fp,
            coalgebra_fp,
        }
    }

    /// The one-dimensional bialgebra 𝕜.
    pub fn base_field(field: FieldSpec) -> Arc<Bialgebra> {
        let one = Scalar::one(field);
        Arc::new(Self::assemble(
            "k".into(),
            field,
            vec!["1".into()],
            vec![vec![(0, one.clone())]],
            vec![(0, one.clone())],
            vec![vec![((0, 0), one.clone())]],
            vec![one],
            None,
        ))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(&self, name: impl Into<String>) -> Arc<Bialgebra> {
        let mut b = self.clone();
        b.name = name.into();
        Arc::new(b)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// e_i·e_j
    pub fn mul_basis(&self, i: usize, j: usize) -> &SparseVec {
        &self.mult[i * self.dim() + j]
    }

    pub fn unit(&self) -> &SparseVec {
        &self.unit
    }

    pub fn comult(&self, i: usize) -> &SparsePair {
        &self.comult[i]
    }

    pub fn counit(&self, i: usize) -> &Scalar {
        &self.counit[i]
    }

    /// The two factors when this bialgebra was built by [`Bialgebra::tensor`].
    pub fn parts(&self) -> Option<&(Arc<Bialgebra>, Arc<Bialgebra>)> {
        self.parts.as_ref()
    }

    pub fn algebra_fingerprint(&self) -> u64 {
        self.algebra_fp
    }

    pub fn coalgebra_fingerprint(&self) -> u64 {
        self.coalgebra_fp
    }

    /// Same underlying algebra (m, u) and field.
    pub fn same_algebra(&self, other: &Bialgebra) -> bool {
        std::ptr::eq(self, other)
            || (self.algebra_fp == other.algebra_fp
                && self.field == other.field
                && self.dim() == other.dim()
                && self.mult == other.mult
                && self.unit == other.unit)
    }

    pub fn mult_table(&self) -> Vec<Vec<SparseVec>> {
        self.mult.chunks(self.dim()).map(|r| r.to_vec()).collect()
    }

    pub fn comult_table(&self) -> &[SparsePair] {
        &self.comult
    }

    pub fn counit_table(&self) -> &[Scalar] {
        &self.counit
    }

    /// Same algebra, new coalgebra (Δ given per basis element). Counit kept.
    pub fn with_comult(&self, name: impl Into<String>, comult: Vec<SparsePair>) -> Arc<Bialgebra> {
        let dim = self.dim();
        let comult = comult
            .into_iter()
            .map(|v| normalize_pair(v, dim, "comult").expect("indices in range"))
            .collect();
        Arc::new(Self::assemble(
            name.into(),
            self.field,
            self.labels.clone(),
            self.mult.clone(),
            self.unit.clone(),
            comult,
            self.counit.clone(),
            None,
        ))
    }

    /// A⊗B with row-major basis, componentwise product and Δ = (Id⊗τ⊗Id)(Δ_A⊗Δ_B).
    pub fn tensor(a: &Arc<Bialgebra>, b: &Arc<Bialgebra>) -> Result<Arc<Bialgebra>> {
        if a.field != b.field {
            return Err(Error::FieldMismatch(format!("{} vs {}", a.field, b.field)));
        }
        let (da, db) = (a.dim(), b.dim());
        let dim = da * db;
        let labels = (0..da)
            .flat_map(|i| (0..db).map(move |j| (i, j)))
            .map(|(i, j)| format!("{}⊗{}", a.labels[i], b.labels[j]))
            .collect();
        let mut mult = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let (ia, ib) = (i / db, i % db);
                let (ja, jb) = (j / db, j % db);
                let mut v = Vec::new();
                for (ka, ca) in a.mul_basis(ia, ja) {
                    for (kb, cb) in b.mul_basis(ib, jb) {
                        v.push((ka * db + kb, ca * cb));
                    }
                }
                mult.push(v);
            }
        }
        let mut unit = Vec::new();
        for (ka, ca) in &a.unit {
            for (kb, cb) in &b.unit {
                unit.push((ka * db + kb, ca * cb));
            }
        }
        let mut comult = Vec::with_capacity(dim);
        let mut counit = Vec::with_capacity(dim);
        for i in 0..dim {
            let (ia, ib) = (i / db, i % db);
            let mut v = Vec::new();
            for ((a1, a2), ca) in &a.comult[ia] {
                for ((b1, b2), cb) in &b.comult[ib] {
                    v.push(((a1 * db + b1, a2 * db + b2), ca * cb));
                }
            }
            v.sort_by(|x, y| x.0.cmp(&y.0));
            comult.push(v);
            counit.push(&a.counit[ia] * &b.counit[ib]);
        }
        Ok(Arc::new(Self::assemble(
            format!("{}⊗{}", a.name, b.name),
            a.field,
            labels,
            mult,
            unit,
            comult,
            counit,
            Some((a.clone(), b.clone())),
        )))
    }

    /// m^op(a, b) = m(b, a).
    pub fn opposite(&self) -> Arc<Bialgebra> {
        let dim = self.dim();
        let mult = (0..dim * dim)
            .map(|k| self.mult[(k % dim) * dim + k / dim].clone())
            .collect();
        Arc::new(Self::assemble(
            format!("{}^op", self.name),
            self.field,
            self.labels.clone(),
            mult,
            self.unit.clone(),
            self.comult.clone(),
            self.counit.clone(),
            None,
        ))
    }

    /// Δ^cop = τ∘Δ.
    pub fn coopposite(&self) -> Arc<Bialgebra> {
        let comult = self
            .comult
            .iter()
            .map(|v| {
                let mut w: SparsePair = v.iter().map(|((i, j), c)| ((*j, *i), c.clone())).collect();
                w.sort_by(|x, y| x.0.cmp(&y.0));
                w
            })
            .collect();
        let name = match self.name.strip_suffix("^cop") {
            Some(n) => n.to_string(),
            None => format!("{}^cop", self.name),
        };
        Arc::new(Self::assemble(
            name,
            self.field,
            self.labels.clone(),
            self.mult.clone(),
            self.unit.clone(),
            comult,
            self.counit.clone(),
            None,
        ))
    }

    pub fn is_commutative(&self) -> bool {
        let dim = self.dim();
        (0..dim).all(|i| (i..dim).all(|j| self.mul_basis(i, j) == self.mul_basis(j, i)))
    }

    pub fn is_cocommutative(&self) -> bool {
        self.comult.iter().all(|v| {
            let mut w: SparsePair = v.iter().map(|((i, j), c)| ((*j, *i), c.clone())).collect();
            w.sort_by(|x, y| x.0.cmp(&y.0));
            &w == v
        })
    }

    /// Product of two sparse vectors.
    pub fn mul_vec(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut m: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (i, ca) in a {
            for (j, cb) in b {
                let c = ca * cb;
                for (k, v) in self.mul_basis(*i, *j) {
                    *m.entry(*k).or_insert_with(|| Scalar::zero(self.field)) += &(&c * v);
                }
            }
        }
        sparse_from_map(m)
    }

    /// Check every bialgebra axiom; failures carry the first offending
    /// index tuple and the residual.
    pub fn validate(self: &Arc<Self>) -> ValidationReport {
        let h = self;
        let dim = h.dim();
        let f1 = vec![h.clone()];
        let f2 = vec![h.clone(), h.clone()];
        let basis = |i: usize| TensorElement::basis(&f1, &[i]);
        let unit = TensorElement::unit(&f1);
        let mut report = ValidationReport::new(format!("bialgebra {}", h.name));

        let mut assoc = Check::pass("associativity");
        for i in 0..dim {
            for j in 0..dim {
                let ij = basis(i).mul(&basis(j)).unwrap();
                for k in 0..dim {
                    let l = ij.mul(&basis(k)).unwrap();
                    let r = basis(i).mul(&basis(j).mul(&basis(k)).unwrap()).unwrap();
                    let d = l.sub(&r);
                    if !d.is_zero() {
                        assoc.record(h.tuple_label(&[i, j, k]), d);
                    }
                }
            }
        }
        report.push(assoc);

        let mut unital = Check::pass("unitality");
        for i in 0..dim {
            let e = basis(i);
            for d in [unit.mul(&e).unwrap().sub(&e), e.mul(&unit).unwrap().sub(&e)] {
                if !d.is_zero() {
                    unital.record(h.tuple_label(&[i]), d);
                    break;
                }
            }
        }
        report.push(unital);

        let delta = |i: usize| basis(i).comult(0).unwrap();
        let mut coassoc = Check::pass("coassociativity");
        for i in 0..dim {
            let d = delta(i);
            let l = d.comult(0).unwrap();
            let r = d.comult(1).unwrap();
            let diff = l.sub(&r);
            if !diff.is_zero() {
                coassoc.record(h.tuple_label(&[i]), diff);
            }
        }
        report.push(coassoc);

        let mut counital = Check::pass("counitality");
        for i in 0..dim {
            let d = delta(i);
            for side in [0usize, 1] {
                let diff = d.counit(&[side]).unwrap().sub(&basis(i));
                if !diff.is_zero() {
                    counital.record(h.tuple_label(&[i]), diff);
                    break;
                }
            }
        }
        report.push(counital);

        let mut dmult = Check::pass("comultiplication multiplicative");
        for i in 0..dim {
            for j in 0..dim {
                let l = basis(i).mul(&basis(j)).unwrap().comult(0).unwrap();
                let r = delta(i).mul(&delta(j)).unwrap();
                let diff = l.sub(&r);
                if !diff.is_zero() {
                    dmult.record(h.tuple_label(&[i, j]), diff);
                }
            }
        }
        report.push(dmult);

        let mut dunit = Check::pass("comultiplication unital");
        let diff = unit.comult(0).unwrap().sub(&TensorElement::unit(&f2));
        if !diff.is_zero() {
            dunit.record("1".into(), diff);
        }
        report.push(dunit);

        let mut emult = Check::pass("counit multiplicative");
        for i in 0..dim {
            for j in 0..dim {
                let l = basis(i).mul(&basis(j)).unwrap().counit_value();
                let r = &h.counit[i] * &h.counit[j];
                if l != r {
                    let f0: Vec<Arc<Bialgebra>> = Vec::new();
                    emult.record(
                        h.tuple_label(&[i, j]),
                        TensorElement::scalar(&f0, &l - &r, h.field),
                    );
                }
            }
        }
        report.push(emult);

        let mut eunit = Check::pass("counit unital");
        let v = unit.counit_value();
        if !v.is_one() {
            let f0: Vec<Arc<Bialgebra>> = Vec::new();
            eunit.record(
                "1".into(),
                TensorElement::scalar(&f0, &v - &Scalar::one(h.field), h.field),
            );
        }
        report.push(eunit);
        report
    }

    /// Build and require all axioms.
    pub fn checked(self: Arc<Self>) -> Result<Arc<Bialgebra>> {
        let r = self.validate();
        if r.passed() {
            Ok(self)
        } else {
            Err(Error::Validation(Box::new(r)))
        }
    }

    /// "(g,x)" style label of a basis-index tuple.
    pub fn tuple_label(&self, idx: &[usize]) -> String {
        let parts: Vec<&str> = idx.iter().map(|&i| self.labels[i].as_str()).collect();
        format!("({})", parts.join(","))
    }
}
