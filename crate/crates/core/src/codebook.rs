//! Explicit codeword lists over integer-encoded symbols.
//!
//! Every verifier in this crate works on a [`Codebook`], whatever the
//! underlying alphabet: plain field symbols, folded `b`-tuples, or the
//! `d`-tuples living on the right vertices of an AEL code.

use crate::{Error, Frac, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codebook {
    len: usize,
    words: Vec<u64>,
}

impl Codebook {
    pub fn new(len: usize) -> Self {
        Self { len, words: Vec::new() }
    }

    pub fn from_words<I, W>(len: usize, words: I) -> Result<Self>
    where
        I: IntoIterator<Item = W>,
        W: AsRef<[u64]>,
    {
        let mut book = Self::new(len);
        for w in words {
            book.push(w.as_ref())?;
        }
        Ok(book)
    }

    pub fn push(&mut self, word: &[u64]) -> Result<()> {
        if word.len() != self.len {
            return Err(Error::LengthMismatch { expected: self.len, got: word.len() });
        }
        self.words.extend_from_slice(word);
        Ok(())
    }

    /// Block length.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn size(&self) -> usize {
        self.words.len().checked_div(self.len).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.size() == 0
    }

    pub fn word(&self, i: usize) -> &[u64] {
        &self.words[i * self.len..(i + 1) * self.len]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u64]> + '_ {
        self.words.chunks_exact(self.len.max(1))
    }

    pub fn hamming(&self, i: usize, j: usize) -> usize {
        hamming(self.word(i), self.word(j))
    }

    /// Minimum pairwise fractional distance, by direct comparison of all pairs.
    pub fn min_distance(&self) -> Option<Frac> {
        let size = self.size();
        let mut best: Option<usize> = None;
        for i in 0..size {
            for j in i + 1..size {
                let d = self.hamming(i, j);
                best = Some(best.map_or(d, |b| b.min(d)));
            }
        }
        best.map(|d| Frac::new(d as i64, self.len as i64))
    }

    /// Bitmask of agreeing coordinates for every ordered pair, row-major.
    /// Only available for block lengths up to 64.
    pub fn agreement_masks(&self) -> Option<Vec<u64>> {
        if self.len > 64 {
            return None;
        }
        let size = self.size();
        let mut masks = vec![0u64; size * size];
        for i in 0..size {
            let wi = self.word(i);
            for j in i..size {
                let wj = self.word(j);
                let mask =
                    wi.iter().zip(wj).enumerate().filter(|(_, (a, b))| a == b).fold(0u64, |m, (k, _)| m | (1 << k));
                masks[i * size + j] = mask;
                masks[j * size + i] = mask;
            }
        }
        Some(masks)
    }

    /// Index of `word` in the book, if present.
    pub fn position(&self, word: &[u64]) -> Option<usize> {
        self.iter().position(|w| w == word)
    }
}

pub fn hamming<S: PartialEq>(a: &[S], b: &[S]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Fractional Hamming distance.
pub fn distance<S: PartialEq>(a: &[S], b: &[S]) -> Result<Frac> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { expected: a.len(), got: b.len() });
    }
    if a.is_empty() {
        return Ok(Frac::from_integer(0));
    }
    Ok(Frac::new(hamming(a, b) as i64, a.len() as i64))
}
