//! Elements of H₁⊗…⊗H_k and the leg calculus.
//!
//! Supports are keyed by the row-major flat index of the basis tuple, so
//! iteration order is lexicographic on tuples and merging two adjacent legs
//! into their tensor-product bialgebra leaves every key unchanged.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::bialgebra::Bialgebra;
use crate::error::{Error, Result};
use crate::linalg::{Rref, SparseRow};
use crate::map::LinearMap;
use crate::scalar::{FieldSpec, Scalar};

pub type Factors = Vec<Arc<Bialgebra>>;

#[derive(Clone, Debug)]
pub struct TensorElement {
    field: FieldSpec,
    factors: Factors,
    terms: BTreeMap<usize, Scalar>,
}

fn add_into(map: &mut BTreeMap<usize, Scalar>, k: usize, v: Scalar) {
    if v.is_zero() {
        return;
    }
    match map.get_mut(&k) {
        Some(x) => {
            *x += &v;
            if x.is_zero() {
                map.remove(&k);
            }
        }
        None => {
            map.insert(k, v);
        }
    }
}

/// Add coef·(choice₀⊗…⊗choice_{k−1}) into `out`, where each leg offers a
/// sparse list of (basis index, coefficient).
fn expand(
    out: &mut BTreeMap<usize, Scalar>,
    dims: &[usize],
    choices: &[&[(usize, Scalar)]],
    coef: Scalar,
) {
    fn rec(
        out: &mut BTreeMap<usize, Scalar>,
        dims: &[usize],
        choices: &[&[(usize, Scalar)]],
        leg: usize,
        flat: usize,
        coef: Scalar,
    ) {
        if leg == dims.len() {
            add_into(out, flat, coef);
            return;
        }
        for (i, c) in choices[leg] {
            let next = if c.is_one() { coef.clone() } else { &coef * c };
            rec(out, dims, choices, leg + 1, flat * dims[leg] + i, next);
        }
    }
    if coef.is_zero() {
        return;
    }
    if choices.iter().all(|c| c.len() == 1) {
        let mut flat = 0;
        let mut coef = coef;
        for (leg, c) in choices.iter().enumerate() {
            let (i, v) = &c[0];
            flat = flat * dims[leg] + i;
            if !v.is_one() {
                coef = &coef * v;
            }
        }
        add_into(out, flat, coef);
        return;
    }
    rec(out, dims, choices, 0, 0, coef);
}

impl TensorElement {
    fn dims_of(factors: &[Arc<Bialgebra>]) -> Vec<usize> {
        factors.iter().map(|f| f.dim()).collect()
    }

    pub(crate) fn decode(&self, mut flat: usize) -> Vec<usize> {
        let mut t = vec![0; self.factors.len()];
        for l in (0..self.factors.len()).rev() {
            let d = self.factors[l].dim();
            t[l] = flat % d;
            flat /= d;
        }
        t
    }

    fn encode(dims: &[usize], tuple: &[usize]) -> usize {
        tuple.iter().zip(dims).fold(0, |acc, (i, d)| acc * d + i)
    }

    fn field_of(factors: &[Arc<Bialgebra>], field: Option<FieldSpec>) -> FieldSpec {
        match factors.first() {
            Some(f) => f.field(),
            None => field.expect("arity-0 element needs an explicit field"),
        }
    }

    pub fn zero(factors: &[Arc<Bialgebra>]) -> Self {
        TensorElement {
            field: Self::field_of(factors, None),
            factors: factors.to_vec(),
            terms: BTreeMap::new(),
        }
    }

    /// c·(1⊗…⊗1); for arity 0 this is just c.
    pub fn scalar(factors: &[Arc<Bialgebra>], c: Scalar, field: FieldSpec) -> Self {
        let mut out = BTreeMap::new();
        let dims = Self::dims_of(factors);
        let units: Vec<&[(usize, Scalar)]> = factors.iter().map(|f| f.unit().as_slice()).collect();
        expand(&mut out, &dims, &units, c);
        TensorElement {
            field: Self::field_of(factors, Some(field)),
            factors: factors.to_vec(),
            terms: out,
        }
    }

    pub fn unit(factors: &[Arc<Bialgebra>]) -> Self {
        let field = Self::field_of(factors, None);
        Self::scalar(factors, Scalar::one(field), field)
    }

    pub fn basis(factors: &[Arc<Bialgebra>], idx: &[usize]) -> Self {
        assert_eq!(idx.len(), factors.len(), "tuple length must equal arity");
        let dims = Self::dims_of(factors);
        let field = Self::field_of(factors, None);
        let mut terms = BTreeMap::new();
        terms.insert(Self::encode(&dims, idx), Scalar::one(field));
        TensorElement {
            field,
            factors: factors.to_vec(),
            terms,
        }
    }

    /// Sum of coefficient·basis-tuple terms; repeated tuples are added.
    pub fn from_terms<I>(factors: &[Arc<Bialgebra>], terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, Scalar)>,
    {
        let field = Self::field_of(factors, None);
        let dims = Self::dims_of(factors);
        let mut out = BTreeMap::new();
        for (t, c) in terms {
            if t.len() != dims.len() || t.iter().zip(&dims).any(|(i, d)| i >= d) {
                return Err(Error::Dimension(format!("bad basis tuple {t:?}")));
            }
            if c.field() != field {
                return Err(Error::FieldMismatch(format!("{} vs {}", c.field(), field)));
            }
            add_into(&mut out, Self::encode(&dims, &t), c);
        }
        Ok(TensorElement {
            field,
            factors: factors.to_vec(),
            terms: out,
        })
    }

    /// Build from basis labels, e.g. `[("1/2", &["g", "x"])]`.
    pub fn from_labels(factors: &[Arc<Bialgebra>], terms: &[(&str, &[&str])]) -> Result<Self> {
        let field = Self::field_of(factors, None);
        let mut out = Vec::new();
        for (c, labels) in terms {
            if labels.len() != factors.len() {
                return Err(Error::Dimension("label tuple length must equal arity".into()));
            }
            let idx = labels
                .iter()
                .zip(factors)
                .map(|(l, f)| {
                    f.index_of(l)
                        .ok_or_else(|| Error::Dimension(format!("unknown basis label {l}")))
                })
                .collect::<Result<Vec<_>>>()?;
            out.push((idx, Scalar::parse(c, field)?));
        }
        Self::from_terms(factors, out)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn factors(&self) -> &[Arc<Bialgebra>] {
        &self.factors
    }

    pub fn arity(&self) -> usize {
        self.factors.len()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms as (basis tuple, coefficient), lexicographic in the tuple.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<usize>, &Scalar)> + '_ {
        self.terms.iter().map(move |(k, v)| (self.decode(*k), v))
    }

    pub fn coeff(&self, tuple: &[usize]) -> Scalar {
        let dims = Self::dims_of(&self.factors);
        self.terms
            .get(&Self::encode(&dims, tuple))
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.field))
    }

    /// Legwise algebra compatibility (same m and u on every leg).
    pub fn compatible(&self, other: &TensorElement) -> bool {
        self.field == other.field
            && self.factors.len() == other.factors.len()
            && self
                .factors
                .iter()
                .zip(&other.factors)
                .all(|(a, b)| a.same_algebra(b))
    }

    fn require_compatible(&self, other: &TensorElement) -> Result<()> {
        if self.compatible(other) {
            Ok(())
        } else {
            Err(Error::SignatureMismatch(format!(
                "[{}] vs [{}]",
                self.signature(),
                other.signature()
            )))
        }
    }

    pub fn signature(&self) -> String {
        self.factors
            .iter()
            .map(|f| f.name().to_string())
            .collect::<Vec<_>>()
            .join(", ")
    }

    pub fn checked_add(&self, other: &TensorElement) -> Result<TensorElement> {
        self.require_compatible(other)?;
        let mut out = self.terms.clone();
        for (k, v) in &other.terms {
            add_into(&mut out, *k, v.clone());
        }
        Ok(self.with_terms(out))
    }

    /// Panics on a signature mismatch; see [`TensorElement::checked_add`].
    pub fn add(&self, other: &TensorElement) -> TensorElement {
        self.checked_add(other).expect("signature mismatch in add")
    }

    pub fn sub(&self, other: &TensorElement) -> TensorElement {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TensorElement {
        self.with_terms(self.terms.iter().map(|(k, v)| (*k, -v)).collect())
    }

    pub fn scale(&self, c: &Scalar) -> TensorElement {
        if c.is_zero() {
            return self.with_terms(BTreeMap::new());
        }
        self.with_terms(self.terms.iter().map(|(k, v)| (*k, v * c)).collect())
    }

    fn with_terms(&self, terms: BTreeMap<usize, Scalar>) -> TensorElement {
        TensorElement {
            field: self.field,
            factors: self.factors.clone(),
            terms,
        }
    }

    /// Product in the tensor-product algebra.
    pub fn mul(&self, other: &TensorElement) -> Result<TensorElement> {
        self.require_compatible(other)?;
        let dims = Self::dims_of(&self.factors);
        let k = dims.len();
        let mut out = BTreeMap::new();
        let right: Vec<(Vec<usize>, &Scalar)> = other.terms().collect();
        for (ta, ca) in self.terms() {
            for (tb, cb) in &right {
                let choices: Vec<&[(usize, Scalar)]> = (0..k)
                    .map(|l| self.factors[l].mul_basis(ta[l], tb[l]).as_slice())
                    .collect();
                expand(&mut out, &dims, &choices, ca * *cb);
            }
        }
        Ok(self.with_terms(out))
    }

    /// Product with the left factor's tags; panics on a mismatch.
    pub fn times(&self, other: &TensorElement) -> TensorElement {
        self.mul(other).expect("signature mismatch in mul")
    }

    /// Two-sided inverse from the left-regular system t·u = 1.
    pub fn inv(&self) -> Result<TensorElement> {
        let n: usize = Self::dims_of(&self.factors).iter().product();
        let unit = Self::unit(&self.factors);
        if self.is_zero() {
            return Err(Error::NotInvertible);
        }
        let mut rows: Vec<SparseRow> = vec![SparseRow::new(); n];
        for j in 0..n {
            let ej = self.with_terms([(j, Scalar::one(self.field))].into_iter().collect());
            let col = self.mul(&ej)?;
            for (r, v) in col.terms {
                rows[r].insert(j, v);
            }
        }
        let mut sys = Rref::new(self.field, n);
        for (r, row) in rows.into_iter().enumerate() {
            let rhs = unit
                .terms
                .get(&r)
                .cloned()
                .unwrap_or_else(|| Scalar::zero(self.field));
            sys.add(row, rhs);
        }
        let sol = sys.solution().ok_or(Error::NotInvertible)?;
        if sol.dim() > 0 {
            return Err(Error::NotInvertible);
        }
        let terms = sol
            .particular
            .into_iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .collect();
        let u = self.with_terms(terms);
        if u.mul(self)? != unit {
            return Err(Error::NotInvertible);
        }
        Ok(u)
    }

    pub fn pow(&self, e: u32) -> TensorElement {
        let mut acc = Self::unit(&self.factors);
        for _ in 0..e {
            acc = acc.times(self);
        }
        acc
    }

    /// s⊗t with legs of `self` first.
    pub fn tensor(&self, other: &TensorElement) -> Result<TensorElement> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(format!("{} vs {}", self.field, other.field)));
        }
        let n: usize = Self::dims_of(&other.factors).iter().product();
        let mut terms = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                terms.insert(a * n + b, ca * cb);
            }
        }
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Ok(TensorElement {
            field: self.field,
            factors,
            terms,
        })
    }

    /// Place this element's legs at `positions` (0-based, strictly
    /// increasing) of a tensor with the given factors, units elsewhere.
    pub fn embed(&self, factors: &[Arc<Bialgebra>], positions: &[usize]) -> Result<TensorElement> {
        if positions.len() != self.arity()
            || positions.windows(2).any(|w| w[0] >= w[1])
            || positions.last().is_some_and(|&p| p >= factors.len())
        {
            return Err(Error::BadPositions(format!(
                "{positions:?} for arity {} into {}",
                self.arity(),
                factors.len()
            )));
        }
        for (k, &p) in positions.iter().enumerate() {
            if !factors[p].same_algebra(&self.factors[k]) {
                return Err(Error::SignatureMismatch(format!(
                    "leg {p}: {} vs {}",
                    factors[p].name(),
                    self.factors[k].name()
                )));
            }
        }
        let dims = Self::dims_of(factors);
        let mut out = BTreeMap::new();
        for (t, c) in self.terms() {
            let singles: Vec<[(usize, Scalar); 1]> =
                t.iter().map(|&i| [(i, Scalar::one(self.field))]).collect();
            let mut choices: Vec<&[(usize, Scalar)]> =
                factors.iter().map(|f| f.unit().as_slice()).collect();
            for (k, &p) in positions.iter().enumerate() {
                choices[p] = &singles[k];
            }
            expand(&mut out, &dims, &choices, c.clone());
        }
        Ok(TensorElement {
            field: self.field,
            factors: factors.to_vec(),
            terms: out,
        })
    }

    /// Output leg i is input leg perm[i].
    pub fn permute(&self, perm: &[usize]) -> Result<TensorElement> {
        let k = self.arity();
        let mut seen = vec![false; k];
        if perm.len() != k || perm.iter().any(|&p| p >= k || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::BadPositions(format!("{perm:?} is not a permutation of {k} legs")));
        }
        let factors: Factors = perm.iter().map(|&p| self.factors[p].clone()).collect();
        let dims = Self::dims_of(&factors);
        let terms = self
            .terms()
            .map(|(t, c)| {
                let nt: Vec<usize> = perm.iter().map(|&p| t[p]).collect();
                (Self::encode(&dims, &nt), c.clone())
            })
            .collect();
        Ok(TensorElement {
            field: self.field,
            factors,
            terms,
        })
    }

    /// Swap legs i and j (coefficients and factor tags).
    pub fn flip(&self, i: usize, j: usize) -> Result<TensorElement> {
        let k = self.arity();
        if i >= k || j >= k {
            return Err(Error::BadPositions(format!("legs {i},{j} of arity {k}")));
        }
        let mut perm: Vec<usize> = (0..k).collect();
        perm.swap(i, j);
        self.permute(&perm)
    }

    /// T^op for arity 2.
    pub fn op(&self) -> TensorElement {
        assert_eq!(self.arity(), 2, "op needs arity 2");
        self.flip(0, 1).unwrap()
    }

    /// Apply ε on the listed legs and drop them.
    pub fn counit(&self, legs: &[usize]) -> Result<TensorElement> {
        let k = self.arity();
        let mut drop = vec![false; k];
        for &l in legs {
            if l >= k || std::mem::replace(&mut drop[l], true) {
                return Err(Error::BadPositions(format!("{legs:?} for arity {k}")));
            }
        }
        let factors: Factors = (0..k)
            .filter(|&l| !drop[l])
            .map(|l| self.factors[l].clone())
            .collect();
        let dims = Self::dims_of(&factors);
        let mut out = BTreeMap::new();
        for (t, c) in self.terms() {
            let mut coef = c.clone();
            for l in (0..k).filter(|&l| drop[l]) {
                coef = &coef * self.factors[l].counit(t[l]);
                if coef.is_zero() {
                    break;
                }
            }
            let kept: Vec<usize> = (0..k).filter(|&l| !drop[l]).map(|l| t[l]).collect();
            add_into(&mut out, Self::encode(&dims, &kept), coef);
        }
        Ok(TensorElement {
            field: self.field,
            factors,
            terms: out,
        })
    }

    /// Coefficient of an arity-0 element.
    pub fn as_scalar(&self) -> Option<Scalar> {
        if self.arity() != 0 {
            return None;
        }
        Some(
            self.terms
                .get(&0)
                .cloned()
                .unwrap_or_else(|| Scalar::zero(self.field)),
        )
    }

    /// ε applied to every leg.
    pub fn counit_value(&self) -> Scalar {
        let all: Vec<usize> = (0..self.arity()).collect();
        self.counit(&all).unwrap().as_scalar().unwrap()
    }

    /// Replace leg `leg` by two legs carrying Δ of its factor.
    pub fn comult(&self, leg: usize) -> Result<TensorElement> {
        let k = self.arity();
        if leg >= k {
            return Err(Error::BadPositions(format!("leg {leg} of arity {k}")));
        }
        let h = &self.factors[leg];
        let mut factors = self.factors.clone();
        factors.insert(leg, h.clone());
        let dims = Self::dims_of(&factors);
        let mut out = BTreeMap::new();
        for (t, c) in self.terms() {
            for ((a, b), d) in h.comult(t[leg]) {
                let mut nt = t.clone();
                nt[leg] = *a;
                nt.insert(leg + 1, *b);
                add_into(&mut out, Self::encode(&dims, &nt), c * d);
            }
        }
        Ok(TensorElement {
            field: self.field,
            factors,
            terms: out,
        })
    }

    /// Legwise application; `None` means the identity on that leg.
    pub fn apply(&self, maps: &[Option<&LinearMap>]) -> Result<TensorElement> {
        let k = self.arity();
        if maps.len() != k {
            return Err(Error::SignatureMismatch(format!("{} maps for arity {k}", maps.len())));
        }
        for (l, m) in maps.iter().enumerate() {
            if let Some(m) = m {
                if !m.source().same_algebra(&self.factors[l]) {
                    return Err(Error::SignatureMismatch(format!(
                        "map source {} on leg {l} of [{}]",
                        m.source().name(),
                        self.signature()
                    )));
                }
            }
        }
        let factors: Factors = (0..k)
            .map(|l| match maps[l] {
                Some(m) => m.target().clone(),
                None => self.factors[l].clone(),
            })
            .collect();
        let dims = Self::dims_of(&factors);
        let mut out = BTreeMap::new();
        for (t, c) in self.terms() {
            let singles: Vec<[(usize, Scalar); 1]> =
                t.iter().map(|&i| [(i, Scalar::one(self.field))]).collect();
            let choices: Vec<&[(usize, Scalar)]> = (0..k)
                .map(|l| match maps[l] {
                    Some(m) => m.column(t[l]).as_slice(),
                    None => &singles[l][..],
                })
                .collect();
            expand(&mut out, &dims, &choices, c.clone());
        }
        Ok(TensorElement {
            field: self.field,
            factors,
            terms: out,
        })
    }

    /// Same coefficients over algebra-compatible factors (e.g. H → H_F).
    pub fn retag(&self, factors: &[Arc<Bialgebra>]) -> Result<TensorElement> {
        let probe = TensorElement::zero(factors);
        self.require_compatible(&probe)?;
        Ok(TensorElement {
            field: self.field,
            factors: factors.to_vec(),
            terms: self.terms.clone(),
        })
    }

    /// Same coefficients over factors of equal dimensions, with no algebra
    /// check (e.g. H → H^op).
    pub fn reinterpret(&self, factors: &[Arc<Bialgebra>]) -> Result<TensorElement> {
        if Self::dims_of(factors) != Self::dims_of(&self.factors) {
            return Err(Error::Dimension("reinterpret: dimensions differ".into()));
        }
        Ok(TensorElement {
            field: self.field,
            factors: factors.to_vec(),
            terms: self.terms.clone(),
        })
    }

    /// Merge legs `leg`, `leg+1` into a tensor-product bialgebra whose
    /// recorded parts are those two factors.
    pub fn merge(&self, leg: usize, target: &Arc<Bialgebra>) -> Result<TensorElement> {
        if leg + 1 >= self.arity() {
            return Err(Error::BadPositions(format!("cannot merge leg {leg}")));
        }
        let ok = target.parts().is_some_and(|(a, b)| {
            a.same_algebra(&self.factors[leg]) && b.same_algebra(&self.factors[leg + 1])
        });
        if !ok {
            return Err(Error::SignatureMismatch(format!(
                "{} is not the tensor product of legs {leg},{}",
                target.name(),
                leg + 1
            )));
        }
        let mut factors = self.factors.clone();
        factors.splice(leg..leg + 2, [target.clone()]);
        Ok(TensorElement {
            field: self.field,
            factors,
            terms: self.terms.clone(),
        })
    }

    /// Split a tensor-product leg into its two recorded parts.
    pub fn split(&self, leg: usize) -> Result<TensorElement> {
        if leg >= self.arity() {
            return Err(Error::BadPositions(format!("leg {leg}")));
        }
        let Some((a, b)) = self.factors[leg].parts() else {
            return Err(Error::SignatureMismatch(format!(
                "{} has no tensor-product provenance",
                self.factors[leg].name()
            )));
        };
        let mut factors = self.factors.clone();
        factors.splice(leg..leg + 1, [a.clone(), b.clone()]);
        Ok(TensorElement {
            field: self.field,
            factors,
            terms: self.terms.clone(),
        })
    }

    /// Split every leg that has tensor-product provenance, once.
    pub fn split_all(&self) -> Result<TensorElement> {
        let mut t = self.clone();
        for leg in (0..self.arity()).rev() {
            t = t.split(leg)?;
        }
        Ok(t)
    }

    pub fn commutes_with(&self, other: &TensorElement) -> Result<bool> {
        Ok(self.mul(other)? == other.mul(self)?)
    }

    /// Commutes with every e_i placed on a single leg (hence with every
    /// basis tuple).
    pub fn is_central(&self) -> bool {
        for l in 0..self.arity() {
            let single = vec![self.factors[l].clone()];
            for i in 0..self.factors[l].dim() {
                let g = TensorElement::basis(&single, &[i])
                    .embed(&self.factors, &[l])
                    .unwrap();
                if !self.commutes_with(&g).unwrap() {
                    return false;
                }
            }
        }
        true
    }

    /// Label of one basis tuple, legs joined by ⊗.
    pub fn tuple_label(&self, t: &[usize]) -> String {
        t.iter()
            .zip(&self.factors)
            .map(|(i, f)| f.label(*i).to_string())
            .collect::<Vec<_>>()
            .join("⊗")
    }
}

impl PartialEq for TensorElement {
    fn eq(&self, other: &Self) -> bool {
        self.compatible(other) && self.terms == other.terms
    }
}

impl Eq for TensorElement {}

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        if self.arity() == 0 {
            return write!(f, "{}", self.as_scalar().unwrap());
        }
        let mut first = true;
        for (t, c) in self.terms() {
            let label = self.tuple_label(&t);
            let cs = c.to_string();
            let (neg, body) = match cs.strip_prefix('-') {
                Some(rest) if !rest.contains(" + ") && !rest.contains(" - ") => (true, rest.to_string()),
                _ => (false, cs),
            };
            let coef = if body == "1" {
                String::new()
            } else if body.contains(' ') {
                format!("({body})*")
            } else {
                format!("{body}*")
            };
            if first {
                write!(f, "{}{coef}{label}", if neg { "-" } else { "" })?;
            } else {
                write!(f, " {} {coef}{label}", if neg { "-" } else { "+" })?;
            }
            first = false;
        }
        Ok(())
    }
}
