//! Exact arithmetic over finite fields `F_q`, `q = p^m <= 2^16`.
//!
//! Elements are encoded as integers in `[0, q)`: the base-`p` digits of the
//! value are the coefficients (low degree first) of a polynomial of degree
//! `< m`, reduced modulo the field's monic irreducible modulus. For prime
//! fields the encoding is the residue itself.
//!
//! Fields of order at most [`TABLE_LIMIT`] carry a full multiplication table
//! and an inverse table; larger fields compute products on the fly.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 16;

/// Fields up to this order precompute multiplication and inverse tables.
pub const TABLE_LIMIT: u32 = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("modulus has degree {found}, expected {expected}")]
    DegreeMismatch { expected: u32, found: usize },
    #[error("modulus must be monic with coefficients in [0, {p})")]
    InvalidModulus { p: u32 },
    #[error("modulus is reducible over F_{p}")]
    Reducible { p: u32 },
    #[error("field order {0} exceeds the supported maximum 65536")]
    UnsupportedFieldSize(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("value {value} is not an element of a field of order {order}")]
    FieldMismatch { value: u64, order: u32 },
}

/// An element of some finite field, stored by its integer encoding.
///
/// The value carries no reference to its field; arithmetic goes through
/// [`FieldSpec`], and [`FieldSpec::element`] validates foreign values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElement(pub(crate) u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Inner {
    p: u32,
    m: u32,
    q: u32,
    /// Monic modulus, low degree first, length `m + 1`. Empty for prime fields.
    modulus: Vec<u32>,
    mul_table: Option<Vec<u16>>,
    inv_table: Option<Vec<u16>>,
}

/// A validated finite field `F_{p^m}`. Cloning is cheap.
#[derive(Clone)]
pub struct FieldSpec(Arc<Inner>);

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.0.p)
            .field("m", &self.0.m)
            .field("modulus", &self.0.modulus)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.m == other.0.m && self.0.modulus == other.0.modulus
    }
}

impl Eq for FieldSpec {}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.m == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{}^{}", self.0.p, self.0.m)
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Returns `(p, m)` with `q = p^m`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut rest = q;
    let mut m = 0;
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

// Polynomial helpers over F_p. Coefficient vectors are low degree first and
// may carry trailing zeros.

fn poly_degree(a: &[u32]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

fn poly_rem(a: &[u32], divisor: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let dd = poly_degree(divisor).expect("nonzero divisor");
    let lead_inv = pow_mod(divisor[dd], p - 2, p);
    while let Some(rd) = poly_degree(&r) {
        if rd < dd {
            break;
        }
        let factor = (r[rd] as u64 * lead_inv as u64 % p as u64) as u32;
        let shift = rd - dd;
        for (i, &c) in divisor.iter().enumerate().take(dd + 1) {
            let sub = (factor as u64 * c as u64 % p as u64) as u32;
            r[i + shift] = (r[i + shift] + p - sub) % p;
        }
    }
    r
}

fn pow_mod(base: u32, mut exp: u32, p: u32) -> u32 {
    let p = p as u64;
    let mut b = base as u64 % p;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        exp >>= 1;
    }
    acc as u32
}

/// Trial division by every monic polynomial of degree `1..=m/2`.
fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let m = modulus.len() - 1;
    for d in 1..=m / 2 {
        let count = (p as u64).pow(d as u32);
        for v in 0..count {
            let mut divisor = digits(v, p, d);
            divisor.push(1);
            if poly_degree(&poly_rem(modulus, &divisor, p)).is_none() {
                return false;
            }
        }
    }
    true
}

fn digits(mut v: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((v % p as u64) as u32);
        v /= p as u64;
    }
    out
}

/// Smallest monic irreducible of degree `m`, comparing coefficient vectors
/// lexicographically from the constant term upward.
fn default_modulus(p: u32, m: u32) -> Vec<u32> {
    let m = m as usize;
    let count = (p as u64).pow(m as u32);
    for v in 0..count {
        // Most significant digit of `v` is the constant coefficient, so
        // counting upward walks the low-degree-first lexicographic order.
        let mut coeffs = digits(v, p, m);
        coeffs.reverse();
        coeffs.push(1);
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Builds `F_{p^m}`. With no modulus, the default irreducible is chosen.
///
/// A supplied modulus is the full monic coefficient list, low degree first
/// (length `m + 1`). For `m = 1` the modulus may be omitted or empty.
pub fn field_new(p: u64, m: u32, modulus: Option<&[u32]>) -> Result<FieldSpec, GfError> {
    if !is_prime(p) {
        return Err(GfError::NotPrime(p));
    }
    if m == 0 {
        return Err(GfError::ZeroDegree);
    }
    let order = (p as u128).checked_pow(m).unwrap_or(u128::MAX);
    if order > MAX_ORDER as u128 {
        return Err(GfError::UnsupportedFieldSize(
            order.min(u64::MAX as u128) as u64
        ));
    }
    let p = p as u32;
    let q = order as u32;

    let modulus = match modulus {
        None => {
            if m == 1 {
                Vec::new()
            } else {
                default_modulus(p, m)
            }
        }
        Some(coeffs) => {
            if m == 1 && coeffs.is_empty() {
                Vec::new()
            } else {
                if coeffs.len() != m as usize + 1 {
                    return Err(GfError::DegreeMismatch {
                        expected: m,
                        found: coeffs.len().saturating_sub(1),
                    });
                }
                if coeffs.iter().any(|&c| c >= p) || coeffs[m as usize] != 1 {
                    return Err(GfError::InvalidModulus { p });
                }
                if !is_irreducible(coeffs, p) {
                    return Err(GfError::Reducible { p });
                }
                if m == 1 {
                    // Every monic linear modulus yields the same prime field.
                    Vec::new()
                } else {
                    coeffs.to_vec()
                }
            }
        }
    };

    let mut inner = Inner {
        p,
        m,
        q,
        modulus,
        mul_table: None,
        inv_table: None,
    };
    if q <= TABLE_LIMIT {
        let mut table = vec![0u16; (q * q) as usize];
        for a in 0..q {
            for b in a..q {
                let c = mul_raw(&inner, a, b) as u16;
                table[(a * q + b) as usize] = c;
                table[(b * q + a) as usize] = c;
            }
        }
        let mut inv = vec![0u16; q as usize];
        for a in 1..q {
            for b in 1..q {
                if table[(a * q + b) as usize] == 1 {
                    inv[a as usize] = b as u16;
                    break;
                }
            }
        }
        inner.mul_table = Some(table);
        inner.inv_table = Some(inv);
    }
    Ok(FieldSpec(Arc::new(inner)))
}

/// The field of smallest prime-power order `q >= bound`.
pub fn smallest_field_at_least(bound: u64) -> Result<FieldSpec, GfError> {
    let mut q = bound.max(2);
    loop {
        if q > MAX_ORDER {
            return Err(GfError::UnsupportedFieldSize(q));
        }
        if let Some((p, m)) = prime_power(q) {
            return field_new(p, m, None);
        }
        q += 1;
    }
}

/// The field of order exactly `q` with its default modulus.
pub fn field_of_order(q: u64) -> Result<FieldSpec, GfError> {
    let (p, m) = prime_power(q).ok_or(GfError::NotPrimePower(q))?;
    field_new(p, m, None)
}

fn mul_raw(f: &Inner, a: u32, b: u32) -> u32 {
    if f.m == 1 {
        return ((a as u64 * b as u64) % f.p as u64) as u32;
    }
    let p = f.p as u64;
    let m = f.m as usize;
    let da = digits(a as u64, f.p, m);
    let db = digits(b as u64, f.p, m);
    let mut prod = vec![0u64; 2 * m - 1];
    for (i, &x) in da.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
        }
    }
    // Reduce using x^m = -(modulus[0] + ... + modulus[m-1] x^{m-1}).
    for top in (m..prod.len()).rev() {
        let c = prod[top];
        if c == 0 {
            continue;
        }
        prod[top] = 0;
        for (i, &mc) in f.modulus.iter().enumerate().take(m) {
            let idx = top - m + i;
            prod[idx] = (prod[idx] + (p - c) * mc as u64) % p;
        }
    }
    let mut v = 0u64;
    for &c in prod[..m].iter().rev() {
        v = v * p + c;
    }
    v as u32
}

impl FieldSpec {
    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.0.m
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.0.q
    }

    /// Full monic modulus, low degree first; empty for prime fields.
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn element(&self, value: u64) -> Result<FieldElement, GfError> {
        if value < self.0.q as u64 {
            Ok(FieldElement(value as u32))
        } else {
            Err(GfError::FieldMismatch {
                value,
                order: self.0.q,
            })
        }
    }

    /// All `q` elements in ascending encoded order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.0.q).map(FieldElement)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, c: i64) -> FieldElement {
        FieldElement(c.rem_euclid(self.0.p as i64) as u32)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let f = &*self.0;
        if f.m == 1 {
            return FieldElement((a.0 + b.0) % f.p);
        }
        if f.p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..f.m {
            out += ((x % f.p + y % f.p) % f.p) * place;
            x /= f.p;
            y /= f.p;
            place *= f.p;
        }
        FieldElement(out)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let f = &*self.0;
        if f.p == 2 {
            return a;
        }
        if f.m == 1 {
            return FieldElement((f.p - a.0) % f.p);
        }
        let mut x = a.0;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..f.m {
            out += ((f.p - x % f.p) % f.p) * place;
            x /= f.p;
            place *= f.p;
        }
        FieldElement(out)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.0.mul_table {
            Some(t) => FieldElement(t[(a.0 * self.0.q + b.0) as usize] as u32),
            None => FieldElement(mul_raw(&self.0, a.0, b.0)),
        }
    }

    pub fn pow(&self, a: FieldElement, mut exp: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, GfError> {
        if a.is_zero() {
            return Err(GfError::DivisionByZero);
        }
        Ok(match &self.0.inv_table {
            Some(t) => FieldElement(t[a.0 as usize] as u32),
            None => self.pow(a, self.0.q as u64 - 2),
        })
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, GfError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn to_json(&self) -> FieldJson {
        FieldJson {
            p: self.0.p as u64,
            m: self.0.m,
            modulus: (self.0.m > 1).then(|| self.0.modulus.clone()),
        }
    }

    pub fn from_json(j: &FieldJson) -> Result<FieldSpec, GfError> {
        field_new(j.p, j.m, j.modulus.as_deref())
    }
}

/// Wire form of a field: `{"p": .., "m": .., "modulus": [..]}`, modulus
/// omitted for prime fields.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldJson {
    pub p: u64,
    pub m: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
}
