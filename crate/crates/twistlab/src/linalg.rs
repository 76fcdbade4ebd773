//! Exact linear algebra: incremental row reduction of sparse systems and a
//! few dense-matrix helpers.

use std::collections::BTreeMap;

use crate::poly::UniPoly;
use crate::scalar::{FieldSpec, Scalar};

pub type SparseRow = BTreeMap<usize, Scalar>;

/// Solution set {particular + Σ tᵢ·directionᵢ} of a linear system.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineSpace {
    pub particular: Vec<Scalar>,
    pub directions: Vec<Vec<Scalar>>,
}

impl AffineSpace {
    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    pub fn point(&self, params: &[Scalar]) -> Vec<Scalar> {
        let mut out = self.particular.clone();
        for (t, d) in params.iter().zip(&self.directions) {
            if t.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(d) {
                if !x.is_zero() {
                    *o += &(t * x);
                }
            }
        }
        out
    }
}

/// Gauss-Jordan elimination that accepts equations one at a time and keeps
/// the pivot rows fully reduced.
#[derive(Clone, Debug)]
pub struct Rref {
    field: FieldSpec,
    ncols: usize,
    pivots: BTreeMap<usize, (SparseRow, Scalar)>,
    inconsistent: bool,
}

impl Rref {
    pub fn new(field: FieldSpec, ncols: usize) -> Self {
        Rref {
            field,
            ncols,
            pivots: BTreeMap::new(),
            inconsistent: false,
        }
    }

    pub fn is_consistent(&self) -> bool {
        !self.inconsistent
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Add the equation Σ row[j]·x_j = rhs.
    pub fn add(&mut self, mut row: SparseRow, mut rhs: Scalar) {
        row.retain(|_, v| !v.is_zero());
        let hits: Vec<usize> = row
            .keys()
            .copied()
            .filter(|c| self.pivots.contains_key(c))
            .collect();
        for c in hits {
            let f = match row.remove(&c) {
                Some(f) => f,
                None => continue,
            };
            let (prow, prhs) = &self.pivots[&c];
            for (k, v) in prow {
                if *k == c {
                    continue;
                }
                sub_scaled(&mut row, *k, &(&f * v));
            }
            rhs = &rhs - &(&f * prhs);
        }
        let Some((&p, lead)) = row.iter().next() else {
            if !rhs.is_zero() {
                self.inconsistent = true;
            }
            return;
        };
        let inv = lead.inv().unwrap();
        for v in row.values_mut() {
            *v = &*v * &inv;
        }
        rhs = &rhs * &inv;
        for (prow, prhs) in self.pivots.values_mut() {
            if let Some(f) = prow.remove(&p) {
                for (k, v) in &row {
                    if *k != p {
                        sub_scaled(prow, *k, &(&f * v));
                    }
                }
                *prhs = &*prhs - &(&f * &rhs);
            }
        }
        self.pivots.insert(p, (row, rhs));
    }

    pub fn solution(&self) -> Option<AffineSpace> {
        if self.inconsistent {
            return None;
        }
        let zero = Scalar::zero(self.field);
        let mut particular = vec![zero.clone(); self.ncols];
        for (&c, (_, rhs)) in &self.pivots {
            particular[c] = rhs.clone();
        }
        let mut directions = Vec::new();
        for free in (0..self.ncols).filter(|c| !self.pivots.contains_key(c)) {
            let mut d = vec![zero.clone(); self.ncols];
            d[free] = Scalar::one(self.field);
            for (&c, (row, _)) in &self.pivots {
                if let Some(v) = row.get(&free) {
                    d[c] = -v;
                }
            }
            directions.push(d);
        }
        Some(AffineSpace {
            particular,
            directions,
        })
    }
}

fn sub_scaled(row: &mut SparseRow, k: usize, v: &Scalar) {
    if v.is_zero() {
        return;
    }
    match row.get_mut(&k) {
        Some(x) => {
            *x = &*x - v;
            if x.is_zero() {
                row.remove(&k);
            }
        }
        None => {
            row.insert(k, -v);
        }
    }
}

/// Dense matrix, row-major.
pub type Matrix = Vec<Vec<Scalar>>;

pub fn identity(field: FieldSpec, n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Scalar::one(field)
                    } else {
                        Scalar::zero(field)
                    }
                })
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix, field: FieldSpec) -> Matrix {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    let mut out = vec![vec![Scalar::zero(field); m]; n];
    for i in 0..n {
        for (k, aik) in a[i].iter().enumerate() {
            if aik.is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[k][j].is_zero() {
                    out[i][j] += &(aik * &b[k][j]);
                }
            }
        }
    }
    out
}

/// Characteristic polynomial det(x·I − A) by the Faddeev-LeVerrier recursion.
pub fn charpoly(a: &Matrix, field: FieldSpec) -> UniPoly {
    let n = a.len();
    let mut coeffs = vec![Scalar::zero(field); n + 1];
    coeffs[n] = Scalar::one(field);
    let mut m = vec![vec![Scalar::zero(field); n]; n];
    for k in 1..=n {
        // M_k = A·M_{k−1} + c_{n−k+1}·I
        let mut next = mat_mul(a, &m, field);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        m = next;
        let am = mat_mul(a, &m, field);
        let mut tr = Scalar::zero(field);
        for (i, row) in am.iter().enumerate() {
            tr += &row[i];
        }
        coeffs[n - k] = -(&tr * &Scalar::from_ratio(field, 1, k as i64));
    }
    UniPoly::new(field, coeffs)
}

/// Inverse of a square matrix, or `None` if singular.
pub fn inverse(a: &Matrix, field: FieldSpec) -> Option<Matrix> {
    let n = a.len();
    let mut cols: Vec<Vec<Scalar>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut r = Rref::new(field, n);
        for (i, row) in a.iter().enumerate() {
            let sparse: SparseRow = row
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(k, v)| (k, v.clone()))
                .collect();
            let rhs = if i == j {
                Scalar::one(field)
            } else {
                Scalar::zero(field)
            };
            r.add(sparse, rhs);
        }
        let sol = r.solution()?;
        if sol.dim() > 0 {
            return None;
        }
        cols.push(sol.particular);
    }
    Some(
        (0..n)
            .map(|i| (0..n).map(|j| cols[j][i].clone()).collect())
            .collect(),
    )
}

pub fn rank(a: &Matrix, field: FieldSpec) -> usize {
    let ncols = a.first().map_or(0, |r| r.len());
    let mut r = Rref::new(field, ncols);
    for row in a {
        let sparse: SparseRow = row
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, v)| (k, v.clone()))
            .collect();
        r.add(sparse, Scalar::zero(field));
    }
    r.rank()
}

/// Basis of { c : Σ_k c_k·vectors[k] = 0 }.
pub fn relations(vectors: &[Vec<Scalar>], field: FieldSpec) -> Vec<Vec<Scalar>> {
    let nvec = vectors.len();
    let len = vectors.first().map_or(0, |v| v.len());
    let mut r = Rref::new(field, nvec);
    for i in 0..len {
        let row: SparseRow = (0..nvec)
            .filter(|&k| !vectors[k][i].is_zero())
            .map(|k| (k, vectors[k][i].clone()))
            .collect();
        r.add(row, Scalar::zero(field));
    }
    r.solution().map(|s| s.directions).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Scalar {
        Scalar::from_int(FieldSpec::Rational, v)
    }

    #[test]
    fn affine_solution() {
        // x + y = 2, y - z = 1
        let f = FieldSpec::Rational;
        let mut r = Rref::new(f, 3);
        r.add([(0, q(1)), (1, q(1))].into_iter().collect(), q(2));
        r.add([(1, q(1)), (2, q(-1))].into_iter().collect(), q(1));
        let s = r.solution().unwrap();
        assert_eq!(s.dim(), 1);
        let p = s.point(&[q(5)]);
        assert_eq!(&p[0] + &p[1], q(2));
        assert_eq!(&p[1] - &p[2], q(1));
        r.add([(0, q(1)), (2, q(1))].into_iter().collect(), q(7));
        r.add([(0, q(2)), (2, q(2))].into_iter().collect(), q(1));
        assert!(r.solution().is_none());
    }

    #[test]
    fn charpoly_and_inverse() {
        let f = FieldSpec::Rational;
        let a = vec![vec![q(2), q(1)], vec![q(1), q(2)]];
        let cp = charpoly(&a, f);
        assert_eq!(cp, UniPoly::new(f, vec![q(3), q(-4), q(1)]));
        let inv = inverse(&a, f).unwrap();
        assert_eq!(mat_mul(&a, &inv, f), identity(f, 2));
        let sing = vec![vec![q(1), q(2)], vec![q(2), q(4)]];
        assert!(inverse(&sing, f).is_none());
        assert_eq!(rank(&sing, f), 1);
    }
}
