//! Roots in the base field of a univariate polynomial.
//!
//! Works by reducing modulo a prime ℓ ≡ 1 (mod n), where Φₙ splits into
//! linear factors, finding roots in every embedding mod ℓ, lifting them
//! ℓ-adically and reading off integer coordinates. Every candidate is
//! checked exactly before it is returned.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::UniPoly;
use crate::scalar::Scalar;

const MAX_COMBINATIONS: usize = 200_000;

/// All distinct roots of `p` in its coefficient field, in a deterministic order.
pub fn roots(p: &UniPoly) -> Result<Vec<Scalar>> {
    let field = p.field();
    let p = p.squarefree_part();
    let deg = match p.degree() {
        None | Some(0) => return Ok(Vec::new()),
        Some(d) => d,
    };
    if deg == 1 {
        return Ok(vec![-&p.coeffs()[0]]);
    }
    let n = field.order() as u64;
    let phi = field.degree();

    // clear denominators: D·p has integer coordinates and leading coefficient D
    let mut den = BigInt::one();
    for c in p.coeffs() {
        for r in c.coeffs() {
            den = den.lcm(r.denom());
        }
    }
    let int_coeffs: Vec<Vec<BigInt>> = p
        .coeffs()
        .iter()
        .map(|c| {
            c.coeffs()
                .iter()
                .map(|r| (r * BigRational::from_integer(den.clone())).to_integer())
                .collect()
        })
        .collect();

    // bound on coordinates of D·α for a root α
    let mut sigma_bound = BigInt::zero();
    for c in &int_coeffs[..deg] {
        let s: BigInt = c.iter().map(|x| x.abs()).sum();
        if s > sigma_bound {
            sigma_bound = s;
        }
    }
    sigma_bound += &den;
    let hadamard = BigInt::from(phi).pow((phi as u32 + 2) / 2);
    let coord_bound = hadamard * sigma_bound;
    let needed = coord_bound * 2u32 + 1u32;

    let mut ell = 10_007u64;
    loop {
        ell = next_split_prime(ell, n);
        if let Some(found) = try_prime(&p, &int_coeffs, &den, ell, n, &needed)? {
            let mut found = found;
            found.sort_by_key(|s| s.to_string());
            return Ok(found);
        }
        ell += 1;
    }
}

fn is_prime(v: u64) -> bool {
    if v < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= v {
        if v % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn next_split_prime(from: u64, n: u64) -> u64 {
    let mut v = from;
    loop {
        if v % n == 1 % n && is_prime(v) {
            return v;
        }
        v += 1;
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = (acc as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    acc
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// an element of exact order n in F_ℓ^×
fn primitive_root_of_unity(ell: u64, n: u64) -> u64 {
    if n == 1 {
        return 1;
    }
    let factors = prime_factors(n);
    for a in 2..ell {
        let w = pow_mod(a, (ell - 1) / n, ell);
        if factors.iter().all(|&q| pow_mod(w, n / q, ell) != 1) {
            return w;
        }
    }
    unreachable!("ℓ ≡ 1 mod n guarantees a primitive n-th root")
}

fn modp(x: &BigInt, m: &BigInt) -> BigInt {
    let r = x % m;
    if r.sign() == Sign::Minus {
        r + m
    } else {
        r
    }
}

fn eval_mod(coeffs: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in coeffs.iter().rev() {
        acc = modp(&(acc * x + c), m);
    }
    acc
}

fn deriv(coeffs: &[BigInt]) -> Vec<BigInt> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect()
}

fn inv_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = modp(a, m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(modp(&e.x, m))
    } else {
        None
    }
}

// Newton lift of a simple root from mod ℓ to mod `target` (a power of ℓ)
fn lift(coeffs: &[BigInt], root: u64, ell: u64, target: &BigInt) -> BigInt {
    let d = deriv(coeffs);
    let ell = BigInt::from(ell);
    let mut m = ell.clone();
    let mut r = BigInt::from(root);
    while &m < target {
        m = &m * &m;
        let fr = eval_mod(coeffs, &r, &m);
        let dr = eval_mod(&d, &r, &m);
        let inv = inv_mod(&dr, &m).expect("simple root");
        r = modp(&(r - fr * inv), &m);
    }
    modp(&r, target)
}

// gcd over F_ℓ, used for the squarefree check
fn gcd_mod_small(mut a: Vec<u64>, mut b: Vec<u64>, ell: u64) -> usize {
    fn trim(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        // a mod b
        let inv = pow_mod(*b.last().unwrap(), ell - 2, ell);
        while a.len() >= b.len() {
            let c = (*a.last().unwrap() as u128 * inv as u128 % ell as u128) as u64;
            let shift = a.len() - b.len();
            for (i, bi) in b.iter().enumerate() {
                let sub = (c as u128 * *bi as u128 % ell as u128) as u64;
                a[shift + i] = (a[shift + i] + ell - sub) % ell;
            }
            trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

fn try_prime(
    p: &UniPoly,
    int_coeffs: &[Vec<BigInt>],
    den: &BigInt,
    ell: u64,
    n: u64,
    needed: &BigInt,
) -> Result<Option<Vec<Scalar>>> {
    let field = p.field();
    let phi = field.degree();
    let w = primitive_root_of_unity(ell, n);
    let exps: Vec<u64> = (1..=n.max(1))
        .filter(|k| n == 1 || k.gcd(&n) == 1)
        .take(phi)
        .collect();
    let ell_big = BigInt::from(ell);
    let modulus_poly: Vec<BigInt> = field.modulus().to_vec();

    // precision: smallest ℓ^(2^k) exceeding the needed bound
    let mut target = ell_big.clone();
    while &target < needed {
        target = &target * &target;
    }

    let mut embed_roots: Vec<Vec<BigInt>> = Vec::with_capacity(phi);
    let mut lifted_w: Vec<BigInt> = Vec::with_capacity(phi);
    for &k in &exps {
        let wk = pow_mod(w, k, ell);
        // reduce p under ζ ↦ w^k mod ℓ
        let small: Vec<u64> = int_coeffs
            .iter()
            .map(|c| {
                let v = eval_mod(c, &BigInt::from(wk), &ell_big);
                v.to_u64().unwrap()
            })
            .collect();
        if *small.last().unwrap() == 0 {
            return Ok(None);
        }
        let dsmall: Vec<u64> = small
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| (*c as u128 * i as u128 % ell as u128) as u64)
            .collect();
        if gcd_mod_small(small.clone(), dsmall, ell) > 0 {
            return Ok(None);
        }
        let mut rs = Vec::new();
        for x in 0..ell {
            let mut acc = 0u128;
            for c in small.iter().rev() {
                acc = (acc * x as u128 + *c as u128) % ell as u128;
            }
            if acc == 0 {
                rs.push(x);
            }
        }
        if rs.is_empty() {
            return Ok(Some(Vec::new()));
        }
        let wl = if n <= 2 {
            modp(&BigInt::from(if n == 1 { 1 } else { -1 }), &target)
        } else {
            lift(&modulus_poly, wk, ell, &target)
        };
        let lifted_p: Vec<BigInt> = int_coeffs
            .iter()
            .map(|c| eval_mod(c, &wl, &target))
            .collect();
        let lifted: Vec<BigInt> = rs.iter().map(|&r| lift(&lifted_p, r, ell, &target)).collect();
        embed_roots.push(lifted);
        lifted_w.push(wl);
    }

    let combos: usize = embed_roots
        .iter()
        .try_fold(1usize, |acc, v| acc.checked_mul(v.len()))
        .unwrap_or(usize::MAX);
    if combos > MAX_COMBINATIONS {
        return Err(Error::CapExceeded(format!(
            "root search needs {combos} embedding combinations"
        )));
    }

    // inverse Vandermonde in the lifted embeddings, mod target
    let vinv = vandermonde_inverse(&lifted_w, &target);
    let half = &target >> 1;
    let mut found = Vec::new();
    let mut idx = vec![0usize; phi];
    'outer: loop {
        let images: Vec<BigInt> = (0..phi)
            .map(|j| modp(&(&embed_roots[j][idx[j]] * den), &target))
            .collect();
        let mut coords = Vec::with_capacity(phi);
        for row in &vinv {
            let mut acc = BigInt::zero();
            for (a, b) in row.iter().zip(&images) {
                acc += a * b;
            }
            let mut c = modp(&acc, &target);
            if c > half {
                c -= &target;
            }
            coords.push(BigRational::new(c, den.clone()));
        }
        let cand = Scalar::from_poly(field, coords);
        if p.eval(&cand).is_zero() && !found.contains(&cand) {
            found.push(cand);
        }
        // next combination
        let mut j = 0;
        loop {
            if j == phi {
                break 'outer;
            }
            idx[j] += 1;
            if idx[j] < embed_roots[j].len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
    Ok(Some(found))
}

fn vandermonde_inverse(points: &[BigInt], m: &BigInt) -> Vec<Vec<BigInt>> {
    let k = points.len();
    // augmented [V | I], V[j][i] = points[j]^i
    let mut a: Vec<Vec<BigInt>> = (0..k)
        .map(|j| {
            let mut row = Vec::with_capacity(2 * k);
            let mut pw = BigInt::one();
            for _ in 0..k {
                row.push(pw.clone());
                pw = modp(&(&pw * &points[j]), m);
            }
            for c in 0..k {
                row.push(if c == j { BigInt::one() } else { BigInt::zero() });
            }
            row
        })
        .collect();
    for col in 0..k {
        let piv = (col..k)
            .find(|&r| inv_mod(&a[r][col], m).is_some())
            .expect("Vandermonde matrix invertible mod ℓ");
        a.swap(col, piv);
        let inv = inv_mod(&a[col][col], m).unwrap();
        for c in 0..2 * k {
            a[col][c] = modp(&(&a[col][c] * &inv), m);
        }
        for r in 0..k {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..2 * k {
                    let v = &a[r][c] - &f * &a[col][c];
                    a[r][c] = modp(&v, m);
                }
            }
        }
    }
    // V maps coordinates to embeddings, so its inverse maps back
    a.into_iter().map(|row| row[k..].to_vec()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::FieldSpec;

    fn poly_from_roots(field: FieldSpec, rs: &[Scalar]) -> UniPoly {
        rs.iter().fold(UniPoly::constant(Scalar::one(field)), |acc, r| {
            acc.mul(&UniPoly::linear(r))
        })
    }

    #[test]
    fn rational_roots() {
        let f = FieldSpec::Rational;
        let rs = vec![
            Scalar::from_ratio(f, 3, 7),
            Scalar::from_int(f, -12),
            Scalar::from_ratio(f, -5, 2),
        ];
        let p = poly_from_roots(f, &rs).mul(&UniPoly::new(
            f,
            vec![Scalar::from_int(f, 2), Scalar::zero(f), Scalar::one(f)],
        ));
        let mut got = roots(&p).unwrap();
        let mut want = rs.clone();
        got.sort_by_key(|s| s.to_string());
        want.sort_by_key(|s| s.to_string());
        assert_eq!(got, want);
    }

    #[test]
    fn roots_of_unity_in_cyclotomic_fields() {
        for n in [3u32, 4, 5, 6, 8] {
            let f = FieldSpec::cyclotomic(n).unwrap();
            let mut coeffs = vec![Scalar::zero(f); n as usize + 1];
            coeffs[0] = Scalar::from_int(f, -1);
            coeffs[n as usize] = Scalar::one(f);
            let got = roots(&UniPoly::new(f, coeffs)).unwrap();
            assert_eq!(got.len(), n as usize, "order {n}");
            for r in &got {
                assert!(r.pow(n as u64).is_one());
            }
        }
    }

    #[test]
    fn irreducible_has_no_roots() {
        let f = FieldSpec::cyclotomic(3).unwrap();
        // x^2 - 2 stays irreducible over ℚ(ζ₃)
        let p = UniPoly::new(f, vec![Scalar::from_int(f, -2), Scalar::zero(f), Scalar::one(f)]);
        assert!(roots(&p).unwrap().is_empty());
        // x^2 + 3 splits: ±(1 + 2ζ)
        let p = UniPoly::new(f, vec![Scalar::from_int(f, 3), Scalar::zero(f), Scalar::one(f)]);
        assert_eq!(roots(&p).unwrap().len(), 2);
    }

    #[test]
    fn nontrivial_cyclotomic_roots() {
        let f = FieldSpec::cyclotomic(5).unwrap();
        let a = Scalar::parse("1/3 - 2*z^1 + 7/2*z^3", f).unwrap();
        let b = Scalar::parse("-4 + z^2", f).unwrap();
        let p = poly_from_roots(f, &[a.clone(), b.clone()]);
        let got = roots(&p).unwrap();
        assert_eq!(got.len(), 2);
        assert!(got.contains(&a) && got.contains(&b));
    }
}
