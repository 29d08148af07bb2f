//! Arithmetic in small finite fields GF(p^m).
//!
//! Elements are encoded as integers in `[0, q)`: the coefficient vector of the
//! polynomial representative, read as base-`p` digits with the constant term as
//! the least significant digit. Multiplication goes through exp/log tables built
//! from the smallest primitive element, so every operation is a table lookup.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field order accepted by [`Field::new`].
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

#[derive(Debug)]
struct FieldInner {
    p: u32,
    m: u32,
    q: u32,
    /// Low-to-high coefficients, length `m + 1`, monic.
    modulus: Vec<u32>,
    generator: u32,
    /// `exp[i] = generator^i` for `i < 2(q-1)`.
    exp: Vec<u32>,
    /// `log[a]` for nonzero `a`; `log[0]` is unused.
    log: Vec<u32>,
}

/// A finite field GF(p^m) with a fixed modulus. Cheap to clone.
#[derive(Clone)]
pub struct Field(Arc<FieldInner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.m)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.m == 1 {
            write!(f, "GF({})", self.0.p)
        } else {
            write!(f, "GF({}^{})", self.0.p, self.0.m)
        }
    }
}

/// Serialized form of a field: `{p, m, modulus low-to-high}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldRecord {
    pub p: u32,
    pub m: u32,
    pub modulus: Vec<u32>,
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut i = 2u32;
    while (i as u64) * (i as u64) <= p as u64 {
        if p.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

fn trim(mut poly: Vec<u32>) -> Vec<u32> {
    while poly.last() == Some(&0) {
        poly.pop();
    }
    poly
}

/// Remainder of `a` modulo the monic polynomial `b` over GF(p).
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        for (i, &bc) in b.iter().enumerate() {
            let sub = (lead as u64 * bc as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        r = trim(r);
    }
    r
}

fn digits(mut v: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((v % p as u64) as u32);
        v /= p as u64;
    }
    out
}

/// Exhaustive factor check: a monic polynomial of degree `m` is irreducible
/// iff no monic polynomial of degree `1..=m/2` divides it.
pub fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let poly = trim(poly.to_vec());
    let m = poly.len().saturating_sub(1);
    if m == 0 {
        return false;
    }
    if m == 1 {
        return true;
    }
    for deg in 1..=m / 2 {
        let count = (p as u64).pow(deg as u32);
        for lower in 0..count {
            let mut divisor = digits(lower, p, deg);
            divisor.push(1);
            if poly_rem(&poly, &divisor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl Field {
    /// Builds GF(p^m) with the lexicographically smallest monic irreducible
    /// modulus (smallest integer encoding of the non-leading coefficients).
    pub fn new(p: u32, m: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NonPrimeCharacteristic(p));
        }
        if m == 0 {
            return Err(Error::InvalidParameter("extension degree must be >= 1".into()));
        }
        let q = (p as u64).checked_pow(m).filter(|&q| q <= MAX_FIELD_ORDER);
        let Some(q) = q else {
            return Err(Error::FieldTooLarge { p, m });
        };
        let modulus = if m == 1 {
            vec![0, 1]
        } else {
            let count = (p as u64).pow(m);
            (0..count)
                .map(|lower| {
                    let mut poly = digits(lower, p, m as usize);
                    poly.push(1);
                    poly
                })
                .find(|poly| is_irreducible(poly, p))
                .expect("an irreducible polynomial of every degree exists")
        };
        Ok(Self::build(p, m, q as u32, modulus))
    }

    /// Rebuilds a field from its serialized record, checking the modulus.
    pub fn from_record(rec: &FieldRecord) -> Result<Self> {
        let field = Self::new(rec.p, rec.m)?;
        if field.0.modulus != rec.modulus {
            if rec.modulus.len() != rec.m as usize + 1
                || rec.modulus.last() != Some(&1)
                || rec.modulus.iter().any(|&c| c >= rec.p)
                || !is_irreducible(&rec.modulus, rec.p)
            {
                return Err(Error::InvalidParameter(format!(
                    "modulus {:?} is not monic irreducible of degree {}",
                    rec.modulus, rec.m
                )));
            }
            return Ok(Self::build(rec.p, rec.m, field.0.q, rec.modulus.clone()));
        }
        Ok(field)
    }

    pub fn record(&self) -> FieldRecord {
        FieldRecord { p: self.0.p, m: self.0.m, modulus: self.0.modulus.clone() }
    }

    fn build(p: u32, m: u32, q: u32, modulus: Vec<u32>) -> Self {
        let slow_mul = |a: u32, b: u32| -> u32 {
            if m == 1 {
                return (a as u64 * b as u64 % p as u64) as u32;
            }
            let da = digits(a as u64, p, m as usize);
            let db = digits(b as u64, p, m as usize);
            let mut prod = vec![0u32; 2 * m as usize - 1];
            for (i, &x) in da.iter().enumerate() {
                for (j, &y) in db.iter().enumerate() {
                    prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
                }
            }
            let r = poly_rem(&prod, &modulus, p);
            r.iter().rev().fold(0u32, |acc, &c| acc * p + c)
        };

        // Smallest element whose powers run through all q - 1 nonzero elements.
        let mut generator = 1;
        let mut powers = vec![1u32];
        if q > 2 {
            for cand in 2..q {
                powers.clear();
                powers.push(1);
                let mut x = cand;
                while x != 1 {
                    powers.push(x);
                    x = slow_mul(x, cand);
                }
                if powers.len() == q as usize - 1 {
                    generator = cand;
                    break;
                }
            }
        }
        let order = (q - 1) as usize;
        let mut exp = Vec::with_capacity(2 * order);
        exp.extend_from_slice(&powers);
        exp.extend_from_slice(&powers);
        let mut log = vec![0u32; q as usize];
        for (i, &v) in powers.iter().enumerate() {
            log[v as usize] = i as u32;
        }
        Field(Arc::new(FieldInner { p, m, q, modulus, generator, exp, log }))
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.m
    }

    pub fn order(&self) -> u32 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let p = self.0.p;
        if p == 2 {
            return a ^ b;
        }
        if self.0.m == 1 {
            return (a + b) % p;
        }
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        for _ in 0..self.0.m {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        let p = self.0.p;
        if p == 2 {
            return a;
        }
        if self.0.m == 1 {
            return (p - a) % p;
        }
        let (mut a, mut out, mut place) = (a, 0, 1);
        for _ in 0..self.0.m {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let inner = &*self.0;
        inner.exp[(inner.log[a as usize] + inner.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let inner = &*self.0;
        let order = inner.q - 1;
        Ok(inner.exp[((order - inner.log[a as usize]) % order) as usize])
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let inner = &*self.0;
        let order = (inner.q - 1) as u64;
        inner.exp[((inner.log[a as usize] as u64 * (e % order)) % order) as usize]
    }

    /// The smallest element (by encoding) of multiplicative order `q - 1`.
    pub fn generator(&self) -> u32 {
        self.0.generator
    }

    /// Multiplicative order of a nonzero element, by repeated multiplication.
    pub fn multiplicative_order(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let mut x = a;
        let mut k = 1;
        while x != 1 {
            x = self.mul(x, a);
            k += 1;
        }
        Ok(k)
    }

    pub fn element(&self, value: u32) -> Result<FieldElement> {
        if value >= self.0.q {
            return Err(Error::InvalidElement(value as u64));
        }
        Ok(FieldElement { field: self.clone(), value })
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { field: self.clone(), value: 0 }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement { field: self.clone(), value: 1 }
    }

    pub fn multiplicative_generator(&self) -> FieldElement {
        FieldElement { field: self.clone(), value: self.0.generator }
    }

    pub fn contains(&self, value: u32) -> bool {
        value < self.0.q
    }

    /// Evaluates the polynomial with low-to-high `coeffs` at `x` (Horner).
    pub fn eval_poly(&self, coeffs: &[u32], x: u32) -> u32 {
        coeffs.iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, x), c))
    }
}

/// A field element bound to its field. Arithmetic across fields is an error.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    value: u32,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.value, self.field)
    }
}

impl FieldElement {
    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self { field: self.field.clone(), value: self.field.add(self.value, other.value) })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self { field: self.field.clone(), value: self.field.sub(self.value, other.value) })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self { field: self.field.clone(), value: self.field.mul(self.value, other.value) })
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(Self { field: self.field.clone(), value: self.field.inv(self.value)? })
    }

    pub fn pow(&self, e: u64) -> Self {
        Self { field: self.field.clone(), value: self.field.pow(self.value, e) }
    }
}
