//! Exhaustive search for R-matrices and weak R-matrices on small
//! bialgebras.
//!
//! The linear conditions (counit legs, and RΔ(x) = Δ^op(x)R for
//! quasitriangular structures) cut out an affine space; the hexagon
//! equations are quadratic on it and go to the polynomial solver. Carriers
//! that are too large for that stage but commutative and cocommutative are
//! handled through their characters instead.

use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use crate::ansatz::{affine_basis, multipliers, Ansatz, PolySystem};
use crate::bialgebra::{Bialgebra, SparseVec};
use crate::element::TensorElement;
use crate::error::{Error, Result};
use crate::linalg::{self, charpoly, relations, Matrix};
use crate::poly::MPoly;
use crate::report::Check;
use crate::roots::roots;
use crate::scalar::{FieldSpec, Scalar};
use crate::solve::{solve, Family, Outcome};
use crate::twist::{internal, validate_rmatrix, RMatrix, WeakRMatrix};

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Largest number of unknowns (dim A · dim B) accepted.
    pub cap: usize,
    /// Largest dimension of the linear solution space sent to the
    /// polynomial solver.
    pub poly_dim: usize,
    pub max_branches: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            cap: 256,
            poly_dim: 12,
            max_branches: 5000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Polynomial,
    Characters,
}

/// A polynomial family of elements of A⊗B.
#[derive(Clone, Debug)]
pub struct ElementFamily {
    factors: Vec<Arc<Bialgebra>>,
    family: Family,
}

impl ElementFamily {
    pub fn nparams(&self) -> usize {
        self.family.nparams
    }

    pub fn degree(&self) -> u32 {
        self.family.degree()
    }

    pub fn coords(&self) -> &[MPoly] {
        &self.family.coords
    }

    pub fn member(&self, params: &[Scalar]) -> TensorElement {
        let pt = self.family.point(params);
        Ansatz::new(&self.factors).element(&pt)
    }

    /// Sample parameter points, enough to certify polynomial identities of
    /// the given degree in the family coordinates.
    pub fn samples(&self, identity_degree: u32) -> Vec<Vec<Scalar>> {
        let field = self.factors[0].field();
        let per = (identity_degree * self.degree().max(1) + 1) as i64;
        let mut out = vec![Vec::new()];
        for _ in 0..self.nparams() {
            out = out
                .into_iter()
                .flat_map(|p: Vec<Scalar>| {
                    (0..per).map(move |v| {
                        let mut q = p.clone();
                        q.push(Scalar::from_int(field, v));
                        q
                    })
                })
                .collect();
        }
        out
    }
}

#[derive(Clone, Debug)]
struct Raw {
    isolated: Vec<TensorElement>,
    families: Vec<ElementFamily>,
    method: Method,
}

/// Quasitriangular structures found on a bialgebra.
#[derive(Clone, Debug)]
pub struct RMatrixSolutions {
    pub isolated: Vec<RMatrix>,
    pub families: Vec<RFamily>,
    pub method: Method,
}

impl RMatrixSolutions {
    pub fn triangular(&self) -> Vec<&RMatrix> {
        self.isolated.iter().filter(|r| r.is_triangular()).collect()
    }
}

/// A family of solutions; members are quasitriangular wherever invertible.
#[derive(Clone, Debug)]
pub struct RFamily {
    pub family: ElementFamily,
    /// R·R^op = 1 holds identically in the parameters.
    pub triangular: bool,
}

/// Weak R-matrices found on a pair.
#[derive(Clone, Debug)]
pub struct WeakSolutions {
    pub isolated: Vec<WeakRMatrix>,
    pub families: Vec<ElementFamily>,
    pub method: Method,
}

/// All quasitriangular structures on `h`, with triangular ones flagged.
pub fn brute_force_rmatrices(h: &Arc<Bialgebra>, opts: &SearchOptions) -> Result<RMatrixSolutions> {
    let raw = search(h, h, true, opts)?;
    let mut isolated = Vec::new();
    for el in raw.isolated {
        let tri = el.times(&el.op()) == TensorElement::unit(&[h.clone(), h.clone()]);
        match RMatrix::with_flag(h, &el, tri) {
            Ok(r) => isolated.push(r),
            Err(Error::Validation(report)) if singular(&report) => continue,
            Err(e) => return Err(lift(e)),
        }
    }
    isolated.sort_by_key(|r| r.element().to_string());
    let one = TensorElement::unit(&[h.clone(), h.clone()]);
    let mut families = Vec::new();
    for fam in raw.families {
        let mut tri = true;
        for p in fam.samples(3) {
            let el = fam.member(&p);
            let (report, _) = validate_rmatrix(h, &el, false);
            let ok = report.checks.iter().all(|c| c.pass || c.name == "invertible");
            if !ok {
                return Err(Error::Internal(Box::new(report)));
            }
            tri &= el.times(&el.op()) == one;
        }
        families.push(RFamily { family: fam, triangular: tri });
    }
    Ok(RMatrixSolutions {
        isolated,
        families,
        method: raw.method,
    })
}

/// All weak R-matrices of (a, b).
pub fn brute_force_weak_rmatrices(a: &Arc<Bialgebra>, b: &Arc<Bialgebra>, opts: &SearchOptions) -> Result<WeakSolutions> {
    let raw = search(a, b, false, opts)?;
    let mut isolated = Vec::new();
    for el in raw.isolated {
        match WeakRMatrix::check(a, b, &el) {
            Ok(r) => isolated.push(r),
            Err(Error::Validation(report)) if singular(&report) => continue,
            Err(e) => return Err(lift(e)),
        }
    }
    isolated.sort_by_key(|r| r.element().to_string());
    Ok(WeakSolutions {
        isolated,
        families: raw.families,
        method: raw.method,
    })
}

fn singular(report: &crate::report::ValidationReport) -> bool {
    report.check("invertible").is_some_and(|c| !c.pass)
}

fn lift(e: Error) -> Error {
    match e {
        Error::Validation(r) => Error::Internal(r),
        e => e,
    }
}

fn search(a: &Arc<Bialgebra>, b: &Arc<Bialgebra>, quasi: bool, opts: &SearchOptions) -> Result<Raw> {
    let n = a.dim() * b.dim();
    if n > opts.cap {
        return Err(Error::CapExceeded(format!("{n} unknowns, cap {}", opts.cap)));
    }
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(format!("{} vs {}", a.field(), b.field())));
    }
    let by_characters = a.is_cocommutative()
        && b.is_commutative()
        && (!quasi || (a.is_commutative() && b.is_cocommutative()));
    let mut ans = Ansatz::new(&[a.clone(), b.clone()]);
    ans.impose(|r| r.counit(&[0]), &TensorElement::unit(&[b.clone()]))?;
    ans.impose(|r| r.counit(&[1]), &TensorElement::unit(&[a.clone()]))?;
    if quasi {
        let one = [a.clone()];
        let zero = TensorElement::zero(&[a.clone(), a.clone()]);
        for i in 0..a.dim() {
            let d = TensorElement::basis(&one, &[i]).comult(0)?;
            let dop = d.op();
            ans.impose(|r| Ok(r.times(&d).sub(&dop.times(r))), &zero)?;
        }
    }
    let Some(space) = ans.solution() else {
        return Ok(Raw {
            isolated: Vec::new(),
            families: Vec::new(),
            method: Method::Polynomial,
        });
    };
    let mut stall = format!("linear solution space of dimension {}", space.dim());
    if space.dim() <= opts.poly_dim {
        match polynomial_stage(a, b, &ans, &space, opts)? {
            Ok(raw) => return Ok(raw),
            Err(reason) => stall = reason,
        }
    }
    if by_characters {
        return character_stage(a, b);
    }
    Err(Error::Inconclusive(stall))
}

fn polynomial_stage(
    a: &Arc<Bialgebra>,
    b: &Arc<Bialgebra>,
    ans: &Ansatz,
    space: &linalg::AffineSpace,
    opts: &SearchOptions,
) -> Result<std::result::Result<Raw, String>> {
    let field = a.field();
    let k = space.dim();
    let vs = affine_basis(ans, space);
    let ms = multipliers(field, k);
    let abb = [a.clone(), b.clone(), b.clone()];
    let aab = [a.clone(), a.clone(), b.clone()];
    let minus = Scalar::from_int(field, -1);
    let mut first = PolySystem::new(field, k);
    let mut second = PolySystem::new(field, k);
    for (i, vi) in vs.iter().enumerate() {
        first.add(&ms[i], &vi.comult(1)?);
        second.add(&ms[i], &vi.comult(0)?);
        let vi13 = vi.embed(&abb, &[0, 2])?;
        let wi13 = vi.embed(&aab, &[0, 2])?;
        for (j, vj) in vs.iter().enumerate() {
            let m = ms[i].mul(&ms[j]).scale(&minus);
            first.add(&m, &vi13.times(&vj.embed(&abb, &[0, 1])?));
            second.add(&m, &wi13.times(&vj.embed(&aab, &[1, 2])?));
        }
    }
    let mut eqs = first.equations();
    eqs.extend(second.equations());
    let outcome = solve(&eqs, k, field, opts.max_branches)?;
    let fams = match outcome {
        Outcome::Solved(f) => f,
        Outcome::Stalled(reason) => return Ok(Err(reason)),
    };
    let factors = vec![a.clone(), b.clone()];
    let mut isolated = Vec::new();
    let mut families = Vec::new();
    for f in fams {
        let coords: Vec<MPoly> = (0..space.particular.len())
            .map(|c| {
                let mut acc = MPoly::constant(space.particular[c].clone(), f.nparams);
                for (d, t) in space.directions.iter().zip(&f.coords) {
                    if !d[c].is_zero() {
                        acc = acc.add(&t.scale(&d[c]));
                    }
                }
                acc
            })
            .collect();
        let fam = ElementFamily {
            factors: factors.clone(),
            family: Family {
                nparams: f.nparams,
                coords,
            },
        };
        if f.nparams == 0 {
            isolated.push(fam.member(&[]));
        } else {
            families.push(fam);
        }
    }
    Ok(Ok(Raw {
        isolated,
        families,
        method: Method::Polynomial,
    }))
}

/// All algebra maps to the ground field of the algebra with the given
/// structure constants, as value vectors on the basis.
pub fn characters(
    dim: usize,
    mul: &dyn Fn(usize, usize) -> SparseVec,
    unit: &SparseVec,
    field: FieldSpec,
) -> Result<Vec<Vec<Scalar>>> {
    let zero = Scalar::zero(field);
    let mats: Vec<Matrix> = (0..dim)
        .map(|i| {
            let mut m = vec![vec![zero.clone(); dim]; dim];
            for j in 0..dim {
                for (k, c) in mul(i, j) {
                    m[k][j] = c;
                }
            }
            m
        })
        .collect();
    let spectra: Vec<Vec<Scalar>> = mats
        .iter()
        .map(|m| roots(&charpoly(m, field)))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    let start = linalg::identity(field, dim);
    joint(&mats, &spectra, 0, start, &mut Vec::new(), &mut out);
    out.retain(|chi| {
        let at_unit = unit.iter().fold(zero.clone(), |acc, (k, c)| &acc + &(c * &chi[*k]));
        at_unit.is_one()
            && (0..dim).all(|i| {
                (0..dim).all(|j| {
                    let v = mul(i, j).iter().fold(zero.clone(), |acc, (k, c)| &acc + &(c * &chi[*k]));
                    v == &chi[i] * &chi[j]
                })
            })
    });
    out.sort_by_key(|c| c.iter().map(|s| s.to_string()).collect::<Vec<_>>());
    out.dedup();
    Ok(out)
}

fn joint(
    mats: &[Matrix],
    spectra: &[Vec<Scalar>],
    i: usize,
    space: Vec<Vec<Scalar>>,
    lambdas: &mut Vec<Scalar>,
    out: &mut Vec<Vec<Scalar>>,
) {
    if i == mats.len() {
        out.push(lambdas.clone());
        return;
    }
    let field = lambdas.first().map(|s| s.field()).unwrap_or_else(|| mats[0][0][0].field());
    let n = mats[i].len();
    for lambda in &spectra[i] {
        let images: Vec<Vec<Scalar>> = space
            .iter()
            .map(|s| {
                (0..n)
                    .map(|j| {
                        let mut acc = -&(&s[j] * lambda);
                        for (k, sk) in s.iter().enumerate() {
                            if !sk.is_zero() && !mats[i][k][j].is_zero() {
                                acc += &(sk * &mats[i][k][j]);
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        let rel = relations(&images, field);
        if rel.is_empty() {
            continue;
        }
        let next: Vec<Vec<Scalar>> = rel
            .iter()
            .map(|c| {
                let mut v = vec![Scalar::zero(field); n];
                for (cr, s) in c.iter().zip(&space) {
                    if cr.is_zero() {
                        continue;
                    }
                    for (vj, sj) in v.iter_mut().zip(s) {
                        *vj += &(cr * sj);
                    }
                }
                v
            })
            .collect();
        lambdas.push(lambda.clone());
        joint(mats, spectra, i + 1, next, lambdas, out);
        lambdas.pop();
    }
}

/// Grouplike elements of a cocommutative bialgebra, as coordinate vectors.
pub fn grouplikes(h: &Arc<Bialgebra>) -> Result<Vec<Vec<Scalar>>> {
    let dim = h.dim();
    let table: Vec<Vec<SparseVec>> = {
        let mut t = vec![vec![BTreeMap::new(); dim]; dim];
        for k in 0..dim {
            for ((i, j), c) in h.comult(k) {
                let e: &mut BTreeMap<usize, Scalar> = &mut t[*i][*j];
                let slot = e.entry(k).or_insert_with(|| Scalar::zero(h.field()));
                *slot += c;
            }
        }
        t.into_iter()
            .map(|row| row.into_iter().map(crate::bialgebra::sparse_from_map).collect())
            .collect()
    };
    let unit: SparseVec = (0..dim)
        .filter(|&k| !h.counit(k).is_zero())
        .map(|k| (k, h.counit(k).clone()))
        .collect();
    characters(dim, &|i, j| table[i][j].clone(), &unit, h.field())
}

/// R = Σ_χ u(χ)⊗e_χ over the characters χ of b, with u a monoid map from
/// the characters of b to the grouplikes of a.
fn character_stage(a: &Arc<Bialgebra>, b: &Arc<Bialgebra>) -> Result<Raw> {
    let field = a.field();
    let chars = characters(b.dim(), &|i, j| b.mul_basis(i, j).clone(), b.unit(), field)?;
    if chars.len() != b.dim() {
        return Err(Error::Inconclusive(format!(
            "{} has {} characters over the field but dimension {}",
            b.name(),
            chars.len(),
            b.dim()
        )));
    }
    let inv = linalg::inverse(&chars, field).ok_or_else(|| {
        internal("characters", Check::fail("character matrix", "singular"))
    })?;
    let idempotent = |c: usize| -> TensorElement {
        let terms = (0..b.dim())
            .filter(|&k| !inv[k][c].is_zero())
            .map(|k| (vec![k], inv[k][c].clone()));
        TensorElement::from_terms(&[b.clone()], terms).expect("in range")
    };
    let conv = |x: &[Scalar], y: &[Scalar]| -> Vec<Scalar> {
        (0..b.dim())
            .map(|k| {
                b.comult(k)
                    .iter()
                    .fold(Scalar::zero(field), |acc, ((i, j), c)| &acc + &(c * &(&x[*i] * &y[*j])))
            })
            .collect()
    };
    let index = |v: &[Scalar]| chars.iter().position(|c| c.as_slice() == v);
    let eps: Vec<Scalar> = (0..b.dim()).map(|k| b.counit(k).clone()).collect();
    let e0 = index(&eps).ok_or_else(|| internal("characters", Check::fail("counit", "not a character")))?;
    let n = chars.len();
    let mut prod = vec![vec![0; n]; n];
    for x in 0..n {
        for y in 0..n {
            prod[x][y] = index(&conv(&chars[x], &chars[y]))
                .ok_or_else(|| internal("characters", Check::fail("convolution", "not closed")))?;
        }
    }
    let gens = generators(&prod, e0);
    let group: Vec<TensorElement> = grouplikes(a)?
        .iter()
        .map(|g| Ansatz::new(&[a.clone()]).element(g))
        .collect();
    let unit_a = TensorElement::unit(&[a.clone()]);
    let mut isolated = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    loop {
        if let Some(images) = extend(&prod, e0, &gens, &choice, &group, &unit_a) {
            let mut r = TensorElement::zero(&[a.clone(), b.clone()]);
            for (c, u) in images.iter().enumerate() {
                r = r.add(&u.tensor(&idempotent(c))?);
            }
            isolated.push(r);
        }
        let mut pos = 0;
        loop {
            if pos == choice.len() {
                return Ok(Raw {
                    isolated,
                    families: Vec::new(),
                    method: Method::Characters,
                });
            }
            choice[pos] += 1;
            if choice[pos] < group.len() {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

fn generators(prod: &[Vec<usize>], e0: usize) -> Vec<usize> {
    let n = prod.len();
    let mut inside = vec![false; n];
    inside[e0] = true;
    let mut gens = Vec::new();
    for x in 0..n {
        if inside[x] {
            continue;
        }
        gens.push(x);
        let mut queue: VecDeque<usize> = (0..n).filter(|&y| inside[y]).collect();
        while let Some(y) = queue.pop_front() {
            for &g in &gens {
                let z = prod[y][g];
                if !inside[z] {
                    inside[z] = true;
                    queue.push_back(z);
                }
            }
        }
    }
    gens
}

fn extend(
    prod: &[Vec<usize>],
    e0: usize,
    gens: &[usize],
    choice: &[usize],
    group: &[TensorElement],
    unit: &TensorElement,
) -> Option<Vec<TensorElement>> {
    let n = prod.len();
    let mut img: Vec<Option<TensorElement>> = vec![None; n];
    img[e0] = Some(unit.clone());
    let mut queue = VecDeque::from([e0]);
    while let Some(y) = queue.pop_front() {
        let iy = img[y].clone().unwrap();
        for (g, &c) in gens.iter().zip(choice) {
            let z = prod[y][*g];
            let v = iy.times(&group[c]);
            match &img[z] {
                Some(w) if *w != v => return None,
                Some(_) => {}
                None => {
                    img[z] = Some(v);
                    queue.push_back(z);
                }
            }
        }
    }
    img.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::{group_algebra, sweedler_algebra};

    #[test]
    fn z2_structures() {
        let h = group_algebra(&[2], FieldSpec::Rational).unwrap();
        let sols = brute_force_rmatrices(&h, &SearchOptions::default()).unwrap();
        assert_eq!(sols.isolated.len(), 2);
        assert!(sols.families.is_empty());
        assert!(sols.isolated.iter().all(|r| r.is_triangular()));
    }

    #[test]
    fn characters_of_z3() {
        let f = FieldSpec::cyclotomic(3).unwrap();
        let h = group_algebra(&[3], f).unwrap();
        let chars = characters(3, &|i, j| h.mul_basis(i, j).clone(), h.unit(), f).unwrap();
        assert_eq!(chars.len(), 3);
        assert_eq!(grouplikes(&h).unwrap().len(), 3);
        let q = group_algebra(&[3], FieldSpec::Rational).unwrap();
        let chars = characters(3, &|i, j| q.mul_basis(i, j).clone(), q.unit(), FieldSpec::Rational).unwrap();
        assert_eq!(chars.len(), 1);
    }

    #[test]
    fn sweedler_family() {
        let h = sweedler_algebra(FieldSpec::Rational);
        let sols = brute_force_rmatrices(&h, &SearchOptions::default()).unwrap();
        assert_eq!(sols.families.len(), 1, "{:?}", sols.isolated);
        assert_eq!(sols.families[0].family.nparams(), 1);
        assert!(sols.families[0].triangular);
    }

    #[test]
    fn cap() {
        let h = sweedler_algebra(FieldSpec::Rational);
        let opts = SearchOptions {
            cap: 15,
            ..SearchOptions::default()
        };
        assert!(matches!(brute_force_rmatrices(&h, &opts), Err(Error::CapExceeded(_))));
    }
}
