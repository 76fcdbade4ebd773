//! JSON documents describing a presentation together with named elements
//! and morphisms. All scalars are strings in the scalar text form.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bialgebra::{Bialgebra, SparsePair, SparseVec};
use crate::element::TensorElement;
use crate::error::{Error, Result};
use crate::map::LinearMap;
use crate::scalar::{FieldSpec, Scalar};

#[derive(Clone, Debug, Serialize, Deserialize)]
struct RawElement {
    arity: usize,
    terms: Vec<Vec<Value>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct RawMorphism {
    target: String,
    matrix: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    twist: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Raw {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    field: FieldSpec,
    dim: usize,
    basis: Vec<String>,
    unit: Vec<(usize, String)>,
    mult: Vec<Vec<Vec<(usize, String)>>>,
    comult: Vec<Vec<(usize, usize, String)>>,
    counit: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    factors: Vec<Raw>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    elements: BTreeMap<String, RawElement>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    morphisms: BTreeMap<String, RawMorphism>,
}

/// A morphism entry: a dense matrix into `target` (a path relative to the
/// document, or `self`), optionally with a twist named in the target.
#[derive(Clone, Debug, PartialEq)]
pub struct MorphismEntry {
    pub target: String,
    /// target.dim rows × source.dim columns.
    pub matrix: Vec<Vec<Scalar>>,
    pub twist: Option<String>,
}

#[derive(Clone, Debug)]
pub struct Document {
    pub algebra: Arc<Bialgebra>,
    pub elements: BTreeMap<String, TensorElement>,
    pub morphisms: BTreeMap<String, MorphismEntry>,
}

fn doc_err(msg: impl Into<String>) -> Error {
    Error::Document(msg.into())
}

fn scalar(text: &str, field: FieldSpec, at: &str) -> Result<Scalar> {
    Scalar::parse(text, field).map_err(|e| doc_err(format!("{at}: {e}")))
}

fn index(i: usize, dim: usize, at: &str) -> Result<usize> {
    if i >= dim {
        return Err(doc_err(format!("{at}: index {i} out of range for dim {dim}")));
    }
    Ok(i)
}

fn algebra_from_raw(raw: &Raw) -> Result<Arc<Bialgebra>> {
    let f = raw.field;
    let dim = raw.dim;
    if raw.basis.len() != dim {
        return Err(doc_err(format!("basis has {} labels, dim is {dim}", raw.basis.len())));
    }
    let vec = |v: &[(usize, String)], at: &str| -> Result<SparseVec> {
        v.iter()
            .map(|(i, c)| Ok((index(*i, dim, at)?, scalar(c, f, at)?)))
            .collect()
    };
    let unit = vec(&raw.unit, "unit")?;
    if raw.mult.len() != dim || raw.mult.iter().any(|r| r.len() != dim) {
        return Err(doc_err("mult must be a dim×dim array"));
    }
    let mult = raw
        .mult
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, v)| vec(v, &format!("mult[{i}][{j}]")))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    if raw.comult.len() != dim || raw.counit.len() != dim {
        return Err(doc_err("comult and counit must have dim entries"));
    }
    let comult = raw
        .comult
        .iter()
        .enumerate()
        .map(|(i, terms)| {
            let at = format!("comult[{i}]");
            terms
                .iter()
                .map(|(j, k, c)| Ok(((index(*j, dim, &at)?, index(*k, dim, &at)?), scalar(c, f, &at)?)))
                .collect::<Result<SparsePair>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let counit = raw
        .counit
        .iter()
        .enumerate()
        .map(|(i, c)| scalar(c, f, &format!("counit[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let name = raw.name.clone().unwrap_or_else(|| "H".into());
    let h = Bialgebra::new(name.clone(), f, raw.basis.clone(), mult, unit, comult, counit)?;
    match raw.factors.as_slice() {
        [] => Ok(h),
        [a, b] => {
            let (a, b) = (algebra_from_raw(a)?, algebra_from_raw(b)?);
            let p = Bialgebra::tensor(&a, &b)?;
            if *p != *h {
                return Err(doc_err("tables differ from the tensor product of the listed factors"));
            }
            Ok(p.with_name(name))
        }
        _ => Err(doc_err("factors must list exactly two presentations")),
    }
}

fn algebra_to_raw(h: &Bialgebra) -> Raw {
    let s = |c: &Scalar| c.to_string();
    let vec = |v: &SparseVec| v.iter().map(|(i, c)| (*i, s(c))).collect::<Vec<_>>();
    Raw {
        name: Some(h.name().to_string()),
        field: h.field(),
        dim: h.dim(),
        basis: h.labels().to_vec(),
        unit: vec(h.unit()),
        mult: h.mult_table().iter().map(|row| row.iter().map(vec).collect()).collect(),
        comult: h
            .comult_table()
            .iter()
            .map(|p| p.iter().map(|((j, k), c)| (*j, *k, s(c))).collect())
            .collect(),
        counit: h.counit_table().iter().map(s).collect(),
        factors: match h.parts() {
            Some((a, b)) => vec![algebra_to_raw(a), algebra_to_raw(b)],
            None => Vec::new(),
        },
        elements: BTreeMap::new(),
        morphisms: BTreeMap::new(),
    }
}

fn element_from_raw(h: &Arc<Bialgebra>, name: &str, raw: &RawElement) -> Result<TensorElement> {
    let factors = vec![h.clone(); raw.arity];
    let at = format!("element {name}");
    let mut terms = Vec::new();
    for t in &raw.terms {
        if t.len() != raw.arity + 1 {
            return Err(doc_err(format!("{at}: each term needs {} indices and a scalar", raw.arity)));
        }
        let mut idx = Vec::with_capacity(raw.arity);
        for v in &t[..raw.arity] {
            let i = v
                .as_u64()
                .ok_or_else(|| doc_err(format!("{at}: index {v} is not a non-negative integer")))?;
            idx.push(index(i as usize, h.dim(), &at)?);
        }
        let c = t[raw.arity]
            .as_str()
            .ok_or_else(|| doc_err(format!("{at}: coefficient must be a string")))?;
        terms.push((idx, scalar(c, h.field(), &at)?));
    }
    TensorElement::from_terms(&factors, terms)
}

fn element_to_raw(t: &TensorElement) -> RawElement {
    RawElement {
        arity: t.arity(),
        terms: t
            .terms()
            .map(|(idx, c)| {
                let mut row: Vec<Value> = idx.into_iter().map(Value::from).collect();
                row.push(Value::from(c.to_string()));
                row
            })
            .collect(),
    }
}

impl Document {
    pub fn new(algebra: &Arc<Bialgebra>) -> Self {
        Document {
            algebra: algebra.clone(),
            elements: BTreeMap::new(),
            morphisms: BTreeMap::new(),
        }
    }

    /// Add an element; it is re-tagged onto this document's presentation.
    pub fn with_element(mut self, name: &str, t: &TensorElement) -> Result<Self> {
        let factors = vec![self.algebra.clone(); t.arity()];
        self.elements.insert(name.to_string(), t.reinterpret(&factors)?);
        Ok(self)
    }

    pub fn with_morphism(mut self, name: &str, target: &str, map: &LinearMap, twist: Option<&str>) -> Self {
        self.morphisms.insert(
            name.to_string(),
            MorphismEntry {
                target: target.to_string(),
                matrix: map.matrix(),
                twist: twist.map(String::from),
            },
        );
        self
    }

    pub fn element(&self, name: &str) -> Result<&TensorElement> {
        self.elements
            .get(name)
            .ok_or_else(|| doc_err(format!("no element named `{name}`")))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: Raw = serde_json::from_str(text).map_err(|e| doc_err(e.to_string()))?;
        let algebra = algebra_from_raw(&raw)?;
        let elements = raw
            .elements
            .iter()
            .map(|(n, e)| Ok((n.clone(), element_from_raw(&algebra, n, e)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        let mut morphisms = BTreeMap::new();
        for (n, m) in &raw.morphisms {
            let at = format!("morphism {n}");
            if m.matrix.iter().any(|r| r.len() != algebra.dim()) {
                return Err(doc_err(format!("{at}: every row needs {} entries", algebra.dim())));
            }
            let matrix = m
                .matrix
                .iter()
                .map(|r| r.iter().map(|c| scalar(c, algebra.field(), &at)).collect())
                .collect::<Result<Vec<Vec<Scalar>>>>()?;
            morphisms.insert(
                n.clone(),
                MorphismEntry {
                    target: m.target.clone(),
                    matrix,
                    twist: m.twist.clone(),
                },
            );
        }
        Ok(Document {
            algebra,
            elements,
            morphisms,
        })
    }

    /// Canonical pretty-printed JSON, ending in a newline.
    pub fn to_json(&self) -> String {
        let mut raw = algebra_to_raw(&self.algebra);
        raw.elements = self.elements.iter().map(|(n, e)| (n.clone(), element_to_raw(e))).collect();
        raw.morphisms = self
            .morphisms
            .iter()
            .map(|(n, m)| {
                (
                    n.clone(),
                    RawMorphism {
                        target: m.target.clone(),
                        matrix: m.matrix.iter().map(|r| r.iter().map(|c| c.to_string()).collect()).collect(),
                        twist: m.twist.clone(),
                    },
                )
            })
            .collect();
        let mut out = serde_json::to_string_pretty(&raw).expect("documents serialize");
        out.push('\n');
        out
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| doc_err(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| doc_err(format!("{}: {e}", path.display())))
    }

    /// The target document of a morphism; `self` means this document.
    pub fn morphism_target(&self, name: &str, base: &Path) -> Result<Document> {
        let m = self
            .morphisms
            .get(name)
            .ok_or_else(|| doc_err(format!("no morphism named `{name}`")))?;
        if m.target == "self" {
            return Ok(self.clone());
        }
        let p: PathBuf = base.join(&m.target);
        Document::load(&p)
    }

    /// The linear map of a morphism together with its target document.
    pub fn morphism(&self, name: &str, base: &Path) -> Result<(LinearMap, Document)> {
        let target = self.morphism_target(name, base)?;
        let m = &self.morphisms[name];
        let map = LinearMap::from_matrix(&self.algebra, &target.algebra, &m.matrix)?;
        Ok((map, target))
    }
}
