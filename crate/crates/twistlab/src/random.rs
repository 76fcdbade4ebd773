//! Seeded randomness for the property suites. The seed comes from
//! `TWISTLAB_SEED` when set.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bialgebra::Bialgebra;
use crate::element::TensorElement;
use crate::scalar::{FieldSpec, Scalar};

pub const SEED_VAR: &str = "TWISTLAB_SEED";

/// `TWISTLAB_SEED` parsed as u64, or `default`.
pub fn seed(default: u64) -> u64 {
    std::env::var(SEED_VAR)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(default)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A small rational, or a small combination of powers of ζ in a cyclotomic field.
pub fn scalar<R: Rng>(rng: &mut R, field: FieldSpec) -> Scalar {
    let mut s = Scalar::zero(field);
    for k in 0..field.degree() {
        let num = rng.random_range(-3..=3);
        let den = rng.random_range(1..=2);
        s = &s + &(&Scalar::from_ratio(field, num, den) * &Scalar::zeta_pow(field, k as u64));
    }
    s
}

/// A random element of `factors` with about `density` nonzero coefficients
/// per basis tuple.
pub fn element<R: Rng>(rng: &mut R, factors: &[Arc<Bialgebra>], density: f64) -> TensorElement {
    let field = factors[0].field();
    let dims: Vec<usize> = factors.iter().map(|h| h.dim()).collect();
    let total: usize = dims.iter().product();
    let mut terms = Vec::new();
    for flat in 0..total {
        if rng.random_bool(density) {
            let mut idx = vec![0; dims.len()];
            let mut r = flat;
            for (i, d) in dims.iter().enumerate().rev() {
                idx[i] = r % d;
                r /= d;
            }
            terms.push((idx, scalar(rng, field)));
        }
    }
    TensorElement::from_terms(factors, terms).expect("indices in range")
}

/// A random invertible element with counit 1, with about three terms
/// besides the unit.
pub fn unit<R: Rng>(rng: &mut R, factors: &[Arc<Bialgebra>]) -> TensorElement {
    let total: usize = factors.iter().map(|h| h.dim()).product();
    let density = (3.0 / total as f64).min(0.5);
    loop {
        let a = TensorElement::unit(factors).add(&element(rng, factors, density));
        let e = a.counit_value();
        if e.is_zero() {
            continue;
        }
        let a = a.scale(&e.inv().expect("nonzero"));
        if a.inv().is_ok() {
            return a;
        }
    }
}
