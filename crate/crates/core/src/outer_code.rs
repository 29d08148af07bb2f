//! Reed–Solomon outer codes with a Berlekamp–Welch unique decoder.

use std::collections::BTreeSet;

use crate::gf::Field;
use crate::linear_code::LinearCode;
use crate::{linalg, Error, Frac, Result};

/// Evaluation code of polynomials of degree `< k` at `n` distinct points.
/// Message symbols are coefficients, constant term first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RsCode {
    field: Field,
    k: usize,
    points: Vec<u32>,
}

/// Output of a successful decode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    pub message: Vec<u32>,
    pub codeword: Vec<u32>,
    pub errors: usize,
}

impl RsCode {
    /// Evaluation points default to the elements encoded `0..n`.
    pub fn new(field: Field, n: usize, k: usize) -> Result<Self> {
        if n as u64 > field.order() as u64 {
            return Err(Error::FieldTooSmall { q: field.order(), needed: n });
        }
        let points = (0..n as u32).collect();
        Self::with_points(field, k, points)
    }

    pub fn with_points(field: Field, k: usize, points: Vec<u32>) -> Result<Self> {
        let n = points.len();
        if k == 0 || k > n {
            return Err(Error::InvalidParameter(format!("need 1 <= k <= n, got k={k}, n={n}")));
        }
        if let Some(&bad) = points.iter().find(|&&x| !field.contains(x)) {
            return Err(Error::InvalidElement(bad as u64));
        }
        if points.iter().collect::<BTreeSet<_>>().len() != n {
            return Err(Error::NotAppropriate);
        }
        Ok(Self { field, k, points })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn points(&self) -> &[u32] {
        &self.points
    }

    pub fn rate(&self) -> Frac {
        Frac::new(self.k as i64, self.len() as i64)
    }

    /// `(n - k + 1) / n`.
    pub fn distance(&self) -> Frac {
        Frac::new((self.len() - self.k + 1) as i64, self.len() as i64)
    }

    /// Largest number of errors the decoder always corrects.
    pub fn max_errors(&self) -> usize {
        (self.len() - self.k) / 2
    }

    /// `⌊(n - k)/2⌋ / n`.
    pub fn decode_radius(&self) -> Frac {
        Frac::new(self.max_errors() as i64, self.len() as i64)
    }

    pub fn to_linear_code(&self) -> LinearCode {
        let rows = (0..self.k).map(|i| self.points.iter().map(|&x| self.field.pow(x, i as u64)).collect()).collect();
        LinearCode::new(self.field.clone(), rows).expect("Vandermonde rows are independent")
    }

    pub fn encode(&self, msg: &[u32]) -> Result<Vec<u32>> {
        if msg.len() != self.k {
            return Err(Error::DimensionMismatch { expected: self.k, got: msg.len() });
        }
        if let Some(&bad) = msg.iter().find(|&&x| !self.field.contains(x)) {
            return Err(Error::InvalidElement(bad as u64));
        }
        Ok(self.points.iter().map(|&x| self.field.eval_poly(msg, x)).collect())
    }

    /// Recovers the message of `word` if it is a codeword.
    pub fn message_of(&self, word: &[u32]) -> Result<Option<Vec<u32>>> {
        if word.len() != self.len() {
            return Err(Error::LengthMismatch { expected: self.len(), got: word.len() });
        }
        let system: Vec<Vec<u32>> =
            self.points.iter().map(|&x| (0..self.k).map(|i| self.field.pow(x, i as u64)).collect()).collect();
        Ok(linalg::solve(&self.field, &system, word))
    }

    /// Berlekamp–Welch decoding up to `⌊radius·n⌋` errors.
    ///
    /// Returns the unique codeword within the radius, or `None` if there is
    /// none. The result is always a codeword at distance at most the radius.
    pub fn decode(&self, word: &[u32], radius: Frac) -> Result<Option<Decoded>> {
        let n = self.len();
        if word.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: word.len() });
        }
        if radius > self.decode_radius() {
            return Err(Error::RadiusTooLarge);
        }
        if let Some(&bad) = word.iter().find(|&&x| !self.field.contains(x)) {
            return Err(Error::InvalidElement(bad as u64));
        }
        let e = (radius * Frac::from_integer(n as i64)).floor().to_integer().max(0) as usize;
        let f = &self.field;
        let k = self.k;

        // Unknowns: E_0..E_{e-1} (E monic of degree e), Q_0..Q_{e+k-1}.
        // Q(a_i) - y_i (E_0 + ... + E_{e-1} a_i^{e-1}) = y_i a_i^e.
        let mut system = Vec::with_capacity(n);
        let mut rhs = Vec::with_capacity(n);
        for (&a, &y) in self.points.iter().zip(word) {
            let mut row = Vec::with_capacity(2 * e + k);
            for j in 0..e {
                row.push(f.neg(f.mul(y, f.pow(a, j as u64))));
            }
            for j in 0..e + k {
                row.push(f.pow(a, j as u64));
            }
            system.push(row);
            rhs.push(f.mul(y, f.pow(a, e as u64)));
        }
        let Some(sol) = linalg::solve(f, &system, &rhs) else {
            return Ok(None);
        };
        let mut err_loc: Vec<u32> = sol[..e].to_vec();
        err_loc.push(1);
        let numer = sol[e..].to_vec();
        let Some(message) = poly_divide_exact(f, &numer, &err_loc) else {
            return Ok(None);
        };
        if message.len() > k {
            return Ok(None);
        }
        let mut message = message;
        message.resize(k, 0);
        let codeword = self.encode(&message)?;
        let errors = codeword.iter().zip(word).filter(|(a, b)| a != b).count();
        if errors > e {
            return Ok(None);
        }
        Ok(Some(Decoded { message, codeword, errors }))
    }
}

/// `a / b` when `b` divides `a` exactly; coefficients low-to-high, result trimmed.
fn poly_divide_exact(f: &Field, a: &[u32], b: &[u32]) -> Option<Vec<u32>> {
    let mut rem: Vec<u32> = a.to_vec();
    while rem.last() == Some(&0) {
        rem.pop();
    }
    let mut b = b.to_vec();
    while b.last() == Some(&0) {
        b.pop();
    }
    let db = b.len().checked_sub(1)?;
    if rem.len() <= db {
        return if rem.is_empty() { Some(Vec::new()) } else { None };
    }
    let lead_inv = f.inv(b[db]).ok()?;
    let mut quot = vec![0u32; rem.len() - db];
    while rem.len() > db {
        let coef = f.mul(*rem.last().unwrap(), lead_inv);
        let shift = rem.len() - 1 - db;
        quot[shift] = coef;
        for (i, &bc) in b.iter().enumerate() {
            rem[shift + i] = f.sub(rem[shift + i], f.mul(coef, bc));
        }
        while rem.last() == Some(&0) {
            rem.pop();
        }
    }
    if !rem.is_empty() {
        return None;
    }
    while quot.last() == Some(&0) {
        quot.pop();
    }
    Some(quot)
}
