//! Linear codes given by a generator matrix, plus partially erased words.

use std::collections::BTreeSet;

use crate::codebook::{hamming, Codebook};
use crate::gf::Field;
use crate::{linalg, Error, Frac, Result};

/// Default cap on the number of codewords any enumeration may produce.
pub const DEFAULT_ENUMERATION_CAP: u128 = 1 << 24;

/// A linear code over `field`, spanned by the rows of `generator`.
///
/// Messages are indexed lexicographically: index `m` is the base-`q`
/// expansion of `m` with the first message symbol most significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    field: Field,
    len: usize,
    generator: Vec<Vec<u32>>,
}

impl LinearCode {
    pub fn new(field: Field, generator: Vec<Vec<u32>>) -> Result<Self> {
        let len = generator.first().map_or(0, Vec::len);
        if generator.is_empty() || len == 0 {
            return Err(Error::InvalidParameter("generator matrix is empty".into()));
        }
        for row in &generator {
            if row.len() != len {
                return Err(Error::LengthMismatch { expected: len, got: row.len() });
            }
            if let Some(&bad) = row.iter().find(|&&x| !field.contains(x)) {
                return Err(Error::InvalidElement(bad as u64));
            }
        }
        if linalg::rank(&field, &generator) != generator.len() {
            return Err(Error::RankDeficient);
        }
        Ok(Self { field, len, generator })
    }

    /// The `[n, 1]` repetition code.
    pub fn repetition(field: Field, n: usize) -> Result<Self> {
        Self::new(field, vec![vec![1; n]])
    }

    /// The full space `F^n` with the identity generator.
    pub fn identity(field: Field, n: usize) -> Result<Self> {
        let rows = (0..n).map(|i| (0..n).map(|j| u32::from(i == j)).collect()).collect();
        Self::new(field, rows)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Block length.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn dim(&self) -> usize {
        self.generator.len()
    }

    pub fn generator(&self) -> &[Vec<u32>] {
        &self.generator
    }

    pub fn rate(&self) -> Frac {
        Frac::new(self.dim() as i64, self.len as i64)
    }

    /// `q^dim`, saturating.
    pub fn codeword_count(&self) -> u128 {
        (self.field.order() as u128).saturating_pow(self.dim() as u32)
    }

    /// The message with lexicographic index `index`.
    pub fn message(&self, mut index: u64) -> Vec<u32> {
        let q = self.field.order() as u64;
        let mut msg = vec![0; self.dim()];
        for slot in msg.iter_mut().rev() {
            *slot = (index % q) as u32;
            index /= q;
        }
        msg
    }

    /// Inverse of [`LinearCode::message`].
    pub fn message_index(&self, msg: &[u32]) -> u64 {
        let q = self.field.order() as u64;
        msg.iter().fold(0, |acc, &x| acc * q + x as u64)
    }

    pub fn encode(&self, msg: &[u32]) -> Result<Vec<u32>> {
        if msg.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: msg.len() });
        }
        if let Some(&bad) = msg.iter().find(|&&x| !self.field.contains(x)) {
            return Err(Error::InvalidElement(bad as u64));
        }
        let mut word = vec![0; self.len];
        for (&coef, row) in msg.iter().zip(&self.generator) {
            if coef == 0 {
                continue;
            }
            for (w, &g) in word.iter_mut().zip(row) {
                *w = self.field.add(*w, self.field.mul(coef, g));
            }
        }
        Ok(word)
    }

    /// All `q^dim` codewords in lexicographic message order.
    pub fn enumerate(&self, cap: u128) -> Result<Vec<Vec<u32>>> {
        let count = self.codeword_count();
        if count > cap {
            return Err(Error::EnumerationTooLarge(count));
        }
        (0..count as u64).map(|i| self.encode(&self.message(i))).collect()
    }

    pub fn codebook(&self, cap: u128) -> Result<Codebook> {
        let words = self.enumerate(cap)?;
        Codebook::from_words(self.len, words.iter().map(|w| w.iter().map(|&x| x as u64).collect::<Vec<_>>()))
    }

    /// Minimum fractional weight of a nonzero codeword.
    pub fn min_distance(&self, cap: u128) -> Result<Frac> {
        let count = self.codeword_count();
        if count > cap {
            return Err(Error::EnumerationTooLarge(count));
        }
        let min_weight = (1..count as u64)
            .map(|i| {
                let w = self.encode(&self.message(i)).expect("valid message");
                w.iter().filter(|&&x| x != 0).count()
            })
            .min()
            .unwrap_or(self.len);
        Ok(Frac::new(min_weight as i64, self.len as i64))
    }

    /// Removes the coordinates in `removed`. The dimension is recomputed as the
    /// rank of the retained columns; if it drops, the generator is replaced by
    /// the nonzero rows of its reduced echelon form.
    pub fn puncture(&self, removed: &BTreeSet<usize>) -> Result<Self> {
        if let Some(&bad) = removed.iter().find(|&&i| i >= self.len) {
            return Err(Error::InvalidParameter(format!("coordinate {bad} out of range")));
        }
        if removed.len() >= self.len {
            return Err(Error::EmptyResidual);
        }
        let rows: Vec<Vec<u32>> = self
            .generator
            .iter()
            .map(|row| row.iter().enumerate().filter(|(i, _)| !removed.contains(i)).map(|(_, &x)| x).collect())
            .collect();
        let mut reduced = rows.clone();
        let rank = linalg::reduce(&self.field, &mut reduced).len();
        if rank == 0 {
            return Err(Error::RankDeficient);
        }
        let generator = if rank == rows.len() {
            rows
        } else {
            reduced.truncate(rank);
            reduced
        };
        let len = generator[0].len();
        Ok(Self { field: self.field.clone(), len, generator })
    }
}

/// A word over `S ∪ {⊥}`; `None` marks an erasure.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ErasedWord<S> {
    symbols: Vec<Option<S>>,
}

impl<S: Clone + PartialEq> ErasedWord<S> {
    pub fn new(symbols: Vec<Option<S>>) -> Self {
        Self { symbols }
    }

    /// A word with no erasures.
    pub fn plain(word: &[S]) -> Self {
        Self { symbols: word.iter().cloned().map(Some).collect() }
    }

    /// `word` with every coordinate in `erased` replaced by `⊥`.
    pub fn with_erasures(word: &[S], erased: &BTreeSet<usize>) -> Self {
        let symbols =
            word.iter().enumerate().map(|(i, s)| if erased.contains(&i) { None } else { Some(s.clone()) }).collect();
        Self { symbols }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Option<S>] {
        &self.symbols
    }

    pub fn erasure_count(&self) -> usize {
        self.symbols.iter().filter(|s| s.is_none()).count()
    }

    pub fn erasure_fraction(&self) -> Frac {
        if self.symbols.is_empty() {
            return Frac::from_integer(0);
        }
        Frac::new(self.erasure_count() as i64, self.len() as i64)
    }

    pub fn erased_positions(&self) -> BTreeSet<usize> {
        self.symbols.iter().enumerate().filter(|(_, s)| s.is_none()).map(|(i, _)| i).collect()
    }
}

/// Number of non-erased coordinates where `g` and `h` disagree.
pub fn erased_disagreements<S: PartialEq>(g: &ErasedWord<S>, h: &[S]) -> Result<usize> {
    if g.symbols.len() != h.len() {
        return Err(Error::LengthMismatch { expected: g.symbols.len(), got: h.len() });
    }
    Ok(g.symbols.iter().zip(h).filter(|(gi, hi)| matches!(gi, Some(x) if x != *hi)).count())
}

/// Distance counting only non-erased disagreements, over the full length `n`.
pub fn dist_with_erasures<S: PartialEq>(g: &ErasedWord<S>, h: &[S]) -> Result<Frac> {
    let count = erased_disagreements(g, h)?;
    if h.is_empty() {
        return Ok(Frac::from_integer(0));
    }
    Ok(Frac::new(count as i64, h.len() as i64))
}

/// Plain fractional distance between two field words.
pub fn word_distance(a: &[u32], b: &[u32]) -> Result<Frac> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { expected: a.len(), got: b.len() });
    }
    Ok(Frac::new(hamming(a, b) as i64, a.len().max(1) as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::outer_code::RsCode;

    fn gf(p: u32, m: u32) -> Field {
        Field::new(p, m).unwrap()
    }

    fn rs42() -> LinearCode {
        RsCode::new(gf(2, 2), 4, 2).unwrap().to_linear_code()
    }

    #[test]
    fn encode_examples() {
        let rep = LinearCode::repetition(gf(2, 1), 3).unwrap();
        assert_eq!(rep.encode(&[1]).unwrap(), vec![1, 1, 1]);
        assert_eq!(rep.encode(&[0]).unwrap(), vec![0, 0, 0]);
        assert_eq!(rs42().encode(&[1, 1]).unwrap(), vec![1, 0, 3, 2]);
        assert_eq!(rs42().encode(&[0, 0]).unwrap(), vec![0; 4]);
        assert!(matches!(rep.encode(&[1, 0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn enumeration() {
        let rep = LinearCode::repetition(gf(2, 1), 3).unwrap();
        assert_eq!(rep.enumerate(16).unwrap(), vec![vec![0, 0, 0], vec![1, 1, 1]]);
        assert_eq!(rs42().enumerate(DEFAULT_ENUMERATION_CAP).unwrap().len(), 16);
        let f16 = gf(2, 4);
        let big = LinearCode::identity(f16, 20).unwrap();
        assert!(matches!(big.enumerate(DEFAULT_ENUMERATION_CAP), Err(Error::EnumerationTooLarge(_))));
    }

    #[test]
    fn min_distance_examples() {
        let cap = DEFAULT_ENUMERATION_CAP;
        assert_eq!(LinearCode::repetition(gf(2, 1), 3).unwrap().min_distance(cap).unwrap(), Frac::from_integer(1));
        assert_eq!(rs42().min_distance(cap).unwrap(), Frac::new(3, 4));
        assert_eq!(LinearCode::identity(gf(2, 1), 2).unwrap().min_distance(cap).unwrap(), Frac::new(1, 2));
    }

    #[test]
    fn min_distance_matches_pairwise_definition() {
        let f = gf(2, 2);
        let codes = [
            rs42(),
            LinearCode::new(f.clone(), vec![vec![1, 0, 1, 1, 2], vec![0, 1, 3, 1, 1]]).unwrap(),
            LinearCode::new(gf(3, 1), vec![vec![1, 2, 0, 1], vec![0, 1, 1, 2]]).unwrap(),
        ];
        for code in codes {
            let book = code.codebook(1 << 12).unwrap();
            assert_eq!(book.min_distance().unwrap(), code.min_distance(1 << 12).unwrap());
        }
    }

    #[test]
    fn puncture_examples() {
        let rep = LinearCode::repetition(gf(2, 1), 3).unwrap();
        assert_eq!(rep.puncture(&BTreeSet::new()).unwrap(), rep);
        let p = rep.puncture(&BTreeSet::from([2])).unwrap();
        assert_eq!((p.len(), p.dim()), (2, 1));
        let q = rs42().puncture(&BTreeSet::from([0, 1])).unwrap();
        assert_eq!((q.len(), q.dim()), (2, 2));
        assert_eq!(q.rate(), Frac::from_integer(1));
        assert!(matches!(rep.puncture(&BTreeSet::from([0, 1, 2])), Err(Error::EmptyResidual)));
    }

    #[test]
    fn puncture_keeps_dimension_when_distance_allows() {
        // dim(C_S) = dim(C) whenever the code's distance exceeds |S|/n.
        let code = LinearCode::new(gf(2, 2), vec![vec![1, 0, 1, 1, 2], vec![0, 1, 3, 1, 1]]).unwrap();
        let dmin = code.min_distance(1 << 12).unwrap();
        for mask in 0u32..(1 << 5) - 1 {
            let s: BTreeSet<usize> = (0..5).filter(|i| mask >> i & 1 == 1).collect();
            let p = code.puncture(&s);
            let Ok(p) = p else { continue };
            assert!(p.dim() <= code.dim());
            if dmin > Frac::new(s.len() as i64, 5) {
                assert_eq!(p.dim(), code.dim(), "S={s:?}");
            }
        }
    }

    #[test]
    fn erased_distance_examples() {
        let h = [0u32, 0, 0, 1];
        assert_eq!(dist_with_erasures(&ErasedWord::plain(&h), &h).unwrap(), Frac::from_integer(0));
        let all = ErasedWord::<u32>::new(vec![None; 4]);
        assert_eq!(dist_with_erasures(&all, &h).unwrap(), Frac::from_integer(0));
        let g = ErasedWord::new(vec![Some(0), None, Some(1), Some(1)]);
        assert_eq!(dist_with_erasures(&g, &h).unwrap(), Frac::new(1, 4));
        assert_eq!(g.erasure_fraction(), Frac::new(1, 4));
        assert!(dist_with_erasures(&g, &[0u32, 1]).is_err());
    }

    #[test]
    fn erased_distance_equals_plain_minus_masked() {
        let words: Vec<[u32; 4]> = (0..16u32).map(|v| [v & 1, v >> 1 & 1, v >> 2 & 1, v >> 3 & 1]).collect();
        for g in &words {
            for h in &words {
                for mask in 0u32..16 {
                    let s: BTreeSet<usize> = (0..4).filter(|i| mask >> i & 1 == 1).collect();
                    let inside = s.iter().filter(|&&i| g[i] != h[i]).count() as i64;
                    let erased = ErasedWord::with_erasures(g, &s);
                    assert_eq!(
                        dist_with_erasures(&erased, h).unwrap(),
                        word_distance(g, h).unwrap() - Frac::new(inside, 4)
                    );
                }
            }
        }
    }
}
