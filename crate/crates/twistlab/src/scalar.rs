//! Exact arithmetic in ℚ and in cyclotomic fields ℚ(ζₙ) = ℚ[x]/(Φₙ).
//!
//! Elements are stored as coefficient vectors in the power basis
//! 1, ζ, …, ζ^(φ(n)−1). The text form is a signed sum of terms such as
//! `3/4`, `z^2`, `-1/2*z^1`, where `z` stands for ζₙ.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat::Rat;

/// The base field: ℚ, or ℚ(ζₙ) for n ≥ 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FieldSpec {
    Rational,
    Cyclotomic { order: u32 },
}

impl FieldSpec {
    pub fn cyclotomic(order: u32) -> Result<Self> {
        if order < 2 {
            return Err(Error::Document(format!(
                "cyclotomic order must be at least 2, got {order}"
            )));
        }
        Ok(FieldSpec::Cyclotomic { order })
    }

    /// n for ℚ(ζₙ), 1 for ℚ.
    pub fn order(&self) -> u32 {
        match self {
            FieldSpec::Rational => 1,
            FieldSpec::Cyclotomic { order } => *order,
        }
    }

    /// Degree of the field over ℚ, i.e. φ(n).
    pub fn degree(&self) -> usize {
        totient(self.order()) as usize
    }

    /// Φₙ as ascending integer coefficients (monic, length φ(n)+1).
    pub fn modulus(&self) -> Arc<Vec<BigInt>> {
        cyclotomic_poly(self.order())
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "rational"),
            FieldSpec::Cyclotomic { order } => write!(f, "cyclotomic:{order}"),
        }
    }
}

impl std::str::FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "rational" {
            return Ok(FieldSpec::Rational);
        }
        if let Some(rest) = s.strip_prefix("cyclotomic:") {
            let n: u32 = rest
                .parse()
                .map_err(|_| Error::Document(format!("bad cyclotomic order `{rest}`")))?;
            return FieldSpec::cyclotomic(n);
        }
        Err(Error::Document(format!("unknown field `{s}`")))
    }
}

pub fn totient(n: u32) -> u32 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

fn cyclotomic_poly(n: u32) -> Arc<Vec<BigInt>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<BigInt>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Φ_d for every proper divisor d of n
    let mut num: Vec<BigInt> = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let div = cyclotomic_poly(d);
            num = exact_int_div(&num, &div);
        }
    }
    let p = Arc::new(num);
    cache.lock().unwrap().insert(n, p.clone());
    p
}

// division of integer polynomials by a monic divisor, remainder assumed zero
fn exact_int_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut q = vec![BigInt::zero(); rem.len() - dd];
    for k in (0..q.len()).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (i, di) in den.iter().enumerate() {
            rem[k + i] -= &c * di;
        }
        q[k] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    q
}

/// An exact element of a [`FieldSpec`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    field: FieldSpec,
    coeffs: Vec<Rat>,
}

impl Scalar {
    pub fn zero(field: FieldSpec) -> Self {
        Scalar {
            field,
            coeffs: vec![Rat::zero(); field.degree()],
        }
    }

    pub fn one(field: FieldSpec) -> Self {
        Self::from_int(field, 1)
    }

    pub fn from_int(field: FieldSpec, v: i64) -> Self {
        let mut s = Self::zero(field);
        s.coeffs[0] = Rat::int(v);
        s
    }

    pub fn from_ratio(field: FieldSpec, num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_rational(
            field,
            BigRational::new(BigInt::from(num), BigInt::from(den)),
        )
    }

    pub fn from_rational(field: FieldSpec, v: BigRational) -> Self {
        let mut s = Self::zero(field);
        // for ℚ(ζ₂) the power basis is {1}, so embedding a rational is the same
        s.coeffs[0] = Rat::from_big(v);
        s
    }

    /// Build from raw power-basis coefficients of any length, reducing mod Φₙ.
    pub fn from_poly(field: FieldSpec, poly: Vec<BigRational>) -> Self {
        Scalar {
            field,
            coeffs: reduce(field, poly.into_iter().map(Rat::from_big).collect()),
        }
    }

    /// ζₙ^k (for ℚ this is 1).
    pub fn zeta_pow(field: FieldSpec, k: u64) -> Self {
        let n = field.order() as u64;
        let e = (k % n) as usize;
        let mut poly = vec![Rat::zero(); e + 1];
        poly[e] = Rat::one();
        Scalar {
            field,
            coeffs: reduce(field, poly),
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// Power-basis coordinates.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.coeffs.iter().map(Rat::to_big).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// The value as a rational number when it lies in ℚ.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].to_big())
        } else {
            None
        }
    }

    fn check(&self, other: &Scalar) -> Result<()> {
        if self.field != other.field {
            Err(Error::FieldMismatch(format!("{} vs {}", self.field, other.field)))
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        Ok(Scalar {
            field: self.field,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        Ok(Scalar {
            field: self.field,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        if self.coeffs.len() == 1 {
            return Ok(Scalar {
                field: self.field,
                coeffs: vec![&self.coeffs[0] * &other.coeffs[0]],
            });
        }
        if self.is_zero() || other.is_zero() {
            return Ok(Scalar::zero(self.field));
        }
        let mut prod = vec![Rat::zero(); 2 * self.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += &(a * b);
                }
            }
        }
        Ok(Scalar {
            field: self.field,
            coeffs: reduce(self.field, prod),
        })
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.coeffs.len() == 1 {
            return Ok(Scalar {
                field: self.field,
                coeffs: vec![self.coeffs[0].recip()],
            });
        }
        let modulus: Vec<BigRational> = self
            .field
            .modulus()
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        let own: Vec<BigRational> = self.coeffs.iter().map(Rat::to_big).collect();
        let s = poly_inverse_mod(&own, &modulus);
        Ok(Scalar::from_poly(self.field, s))
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        self.checked_mul(&other.inv()?)
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = Scalar::one(self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Parse the text form over `field`.
    pub fn parse(text: &str, field: FieldSpec) -> Result<Scalar> {
        Parser::new(text, field).parse()
    }
}

thread_local! {
    static MODULI: RefCell<HashMap<u32, std::rc::Rc<Vec<Rat>>>> = RefCell::new(HashMap::new());
}

fn rat_modulus(field: FieldSpec) -> std::rc::Rc<Vec<Rat>> {
    MODULI.with(|m| {
        m.borrow_mut()
            .entry(field.order())
            .or_insert_with(|| {
                std::rc::Rc::new(
                    field
                        .modulus()
                        .iter()
                        .map(|c| Rat::from_big(BigRational::from_integer(c.clone())))
                        .collect(),
                )
            })
            .clone()
    })
}

fn reduce(field: FieldSpec, mut poly: Vec<Rat>) -> Vec<Rat> {
    let deg = field.degree();
    if poly.len() > deg {
        let modulus = rat_modulus(field);
        for k in (deg..poly.len()).rev() {
            let c = std::mem::replace(&mut poly[k], Rat::zero());
            if c.is_zero() {
                continue;
            }
            for (i, m) in modulus.iter().enumerate().take(deg) {
                if !m.is_zero() {
                    poly[k - deg + i] -= &(&c * m);
                }
            }
        }
        poly.truncate(deg);
    }
    poly.resize(deg, Rat::zero());
    poly
}

fn trim(p: &mut Vec<BigRational>) {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = a.to_vec();
    trim(&mut rem);
    let mut b = b.to_vec();
    trim(&mut b);
    let db = b.len() - 1;
    if rem.len() <= db {
        return (vec![BigRational::zero()], rem);
    }
    let lead_inv = b[db].recip();
    let mut q = vec![BigRational::zero(); rem.len() - db];
    for k in (0..q.len()).rev() {
        let c = &rem[k + db] * &lead_inv;
        if c.is_zero() {
            continue;
        }
        for (i, bi) in b.iter().enumerate() {
            rem[k + i] -= &c * bi;
        }
        q[k] = c;
    }
    rem.truncate(db.max(1));
    trim(&mut rem);
    (q, rem)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(&mut out);
    out
}

// extended Euclid: returns s with s·a ≡ 1 (mod m); a must be coprime to m
fn poly_inverse_mod(a: &[BigRational], m: &[BigRational]) -> Vec<BigRational> {
    let mut r0 = m.to_vec();
    let mut r1 = a.to_vec();
    trim(&mut r1);
    let mut s0 = vec![BigRational::zero()];
    let mut s1 = vec![BigRational::one()];
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = poly_divrem(&r0, &r1);
        let s = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    // r0 is a nonzero constant gcd
    let c = r0[0].recip();
    s0.into_iter().map(|x| x * &c).collect()
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$checked(rhs).expect("scalar field mismatch")
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$checked(&rhs).expect("scalar field mismatch")
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$checked(rhs).expect("scalar field mismatch")
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$checked(&rhs).expect("scalar field mismatch")
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        assert_eq!(self.field, rhs.field, "scalar field mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            field: self.field,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let a = c.abs().to_big();
            if i == 0 {
                write!(f, "{}", fmt_rational(&a))?;
            } else if a.is_one() {
                write!(f, "z^{i}")?;
            } else {
                write!(f, "{}*z^{i}", fmt_rational(&a))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
    field: FieldSpec,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, field: FieldSpec) -> Self {
        Parser {
            text,
            pos: 0,
            field,
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    // returns Some(true) for minus, Some(false) for plus
    fn sign(&mut self) -> Option<bool> {
        self.skip_ws();
        match self.peek() {
            Some('-') | Some('\u{2212}') => {
                self.pos += self.peek().unwrap().len_utf8();
                Some(true)
            }
            Some('+') => {
                self.pos += 1;
                Some(false)
            }
            _ => None,
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                self.pos += 1;
            } else {
                break;
            }
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        Ok(self.text[start..self.pos].parse().unwrap())
    }

    fn power(&mut self) -> Result<u64> {
        // at `z`
        if self.field == FieldSpec::Rational {
            return Err(Error::FieldMismatch(format!(
                "`z` at byte {} requires a cyclotomic field",
                self.pos
            )));
        }
        self.pos += 1;
        self.skip_ws();
        if self.peek() != Some('^') {
            return Ok(1);
        }
        self.pos += 1;
        let k = self.integer()?;
        match u64::try_from(k) {
            Ok(k) => Ok(k),
            Err(_) => self.err("exponent too large"),
        }
    }

    fn term(&mut self) -> Result<Scalar> {
        self.skip_ws();
        match self.peek() {
            Some('z') => {
                let k = self.power()?;
                Ok(Scalar::zeta_pow(self.field, k))
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                self.skip_ws();
                let mut value = BigRational::from_integer(num);
                if self.peek() == Some('/') {
                    self.pos += 1;
                    let den_pos = self.pos;
                    let den = self.integer()?;
                    if den.is_zero() {
                        self.pos = den_pos;
                        return self.err("zero denominator");
                    }
                    value /= BigRational::from_integer(den);
                    self.skip_ws();
                }
                let c = Scalar::from_rational(self.field, value);
                if self.peek() == Some('*') {
                    self.pos += 1;
                    self.skip_ws();
                    if self.peek() != Some('z') {
                        return self.err("expected `z` after `*`");
                    }
                    let k = self.power()?;
                    Ok(&c * &Scalar::zeta_pow(self.field, k))
                } else {
                    Ok(c)
                }
            }
            Some(_) => self.err("expected a term"),
            None => self.err("unexpected end of input"),
        }
    }

    fn parse(mut self) -> Result<Scalar> {
        let mut acc = Scalar::zero(self.field);
        let neg = self.sign().unwrap_or(false);
        let t = self.term()?;
        acc = if neg { acc - t } else { acc + t };
        loop {
            self.skip_ws();
            if self.pos == self.text.len() {
                return Ok(acc);
            }
            match self.sign() {
                Some(neg) => {
                    let t = self.term()?;
                    acc = if neg { acc - t } else { acc + t };
                }
                None => return self.err("expected `+` or `-`"),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rational
    }

    fn cyc(n: u32) -> FieldSpec {
        FieldSpec::cyclotomic(n).unwrap()
    }

    #[test]
    fn cyclotomic_polynomials() {
        let show = |n| {
            cyclotomic_poly(n)
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        assert_eq!(show(1), "-1,1");
        assert_eq!(show(2), "1,1");
        assert_eq!(show(3), "1,1,1");
        assert_eq!(show(4), "1,0,1");
        assert_eq!(show(6), "1,-1,1");
        assert_eq!(show(12), "1,0,-1,0,1");
        assert_eq!(totient(12), 4);
    }

    #[test]
    fn rational_sum() {
        let a = Scalar::from_ratio(q(), 1, 2);
        let b = Scalar::from_ratio(q(), 1, 3);
        assert_eq!(&a + &b, Scalar::from_ratio(q(), 5, 6));
    }

    #[test]
    fn zeta_products() {
        let z4 = Scalar::zeta_pow(cyc(4), 1);
        assert_eq!(&z4 * &z4, Scalar::from_int(cyc(4), -1));
        let z3 = Scalar::zeta_pow(cyc(3), 1);
        let z3sq = Scalar::zeta_pow(cyc(3), 2);
        assert!((&z3 * &z3sq).is_one());
    }

    #[test]
    fn inverses() {
        assert_eq!(
            Scalar::from_ratio(q(), 2, 3).inv().unwrap(),
            Scalar::from_ratio(q(), 3, 2)
        );
        let i = Scalar::zeta_pow(cyc(4), 1);
        assert_eq!(i.inv().unwrap(), -&i);
        let z = Scalar::zeta_pow(cyc(3), 1);
        let one_plus = &Scalar::one(cyc(3)) + &z;
        assert_eq!(one_plus.inv().unwrap(), -&z);
        assert!(matches!(
            Scalar::zero(cyc(5)).inv(),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn mismatch_is_reported() {
        let a = Scalar::one(q());
        let b = Scalar::one(cyc(3));
        assert!(matches!(a.checked_add(&b), Err(Error::FieldMismatch(..))));
    }

    #[test]
    fn parse_examples() {
        assert_eq!(
            Scalar::parse("-1/2", q()).unwrap(),
            Scalar::from_ratio(q(), -1, 2)
        );
        assert_eq!(
            Scalar::parse("\u{2212}1/2", q()).unwrap(),
            Scalar::from_ratio(q(), -1, 2)
        );
        assert!(Scalar::parse("1/2 - 1/2*z^1", cyc(2)).unwrap().is_one());
        assert!(Scalar::parse("z^3", cyc(3)).unwrap().is_one());
        assert_eq!(
            Scalar::parse(" 2 *z^ 1 + 1", cyc(5)).unwrap().to_string(),
            "1 + 2*z^1"
        );
    }

    #[test]
    fn parse_errors_carry_offsets() {
        assert!(matches!(
            Scalar::parse("1 + z^1", q()),
            Err(Error::FieldMismatch(_))
        ));
        match Scalar::parse("1 + + 2", q()) {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("unexpected {other:?}"),
        }
        match Scalar::parse("3/0", q()) {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            Scalar::parse("", q()),
            Err(Error::Parse { offset: 0, .. })
        ));
    }

    #[test]
    fn printing_is_canonical() {
        let f = cyc(5);
        let s = Scalar::parse("-z^2 + 3/4 - 2*z^1 + z^2 - z^3", f).unwrap();
        assert_eq!(s.to_string(), "3/4 - 2*z^1 - z^3");
        assert_eq!(Scalar::zero(f).to_string(), "0");
        assert_eq!(Scalar::parse(&s.to_string(), f).unwrap(), s);
        // ζ₅⁴ = −1 − ζ − ζ² − ζ³
        assert_eq!(
            Scalar::zeta_pow(f, 4).to_string(),
            "-1 - z^1 - z^2 - z^3"
        );
    }
}
