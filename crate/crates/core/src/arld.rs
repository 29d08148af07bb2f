//! Exact worst-case evaluation of the average-radius inequality.
//!
//! For a tuple `H` of codewords, the center minimizing `Σ_h Δ(g, h)` is the
//! coordinate-wise plurality word, and the minimum equals
//! `Σ_i (|H| - maxcount_i) / n`. Scanning every tuple with this closed form
//! turns the quantifier over all centers into a finite integer computation.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codebook::Codebook;
use crate::{Error, Frac, Result};

/// Default cap on the number of codeword tuples a scan may visit.
pub const DEFAULT_SUBSET_CAP: u128 = 200_000_000;

/// Bitmask scans need a `size × size` mask table; above this size the
/// per-coordinate counting path is used instead.
const MASK_TABLE_MAX_SIZE: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PluralityCenter {
    pub center: Vec<u64>,
    /// `|H| - maxcount_i` for each coordinate.
    pub contributions: Vec<usize>,
}

impl PluralityCenter {
    /// `Σ_i (|H| - maxcount_i)`, i.e. `n · Σ_h Δ(center, h)`.
    pub fn cost(&self) -> usize {
        self.contributions.iter().sum()
    }
}

/// Coordinate-wise most frequent symbol, ties broken toward the smallest symbol.
pub fn plurality_center<W: AsRef<[u64]>>(words: &[W]) -> Result<PluralityCenter> {
    let first = words.first().ok_or(Error::EmptySet)?.as_ref();
    let n = first.len();
    if let Some(bad) = words.iter().find(|w| w.as_ref().len() != n) {
        return Err(Error::LengthMismatch { expected: n, got: bad.as_ref().len() });
    }
    let mut center = Vec::with_capacity(n);
    let mut contributions = Vec::with_capacity(n);
    let mut column: Vec<u64> = Vec::with_capacity(words.len());
    for i in 0..n {
        column.clear();
        column.extend(words.iter().map(|w| w.as_ref()[i]));
        column.sort_unstable();
        let (mut best, mut best_count) = (column[0], 0);
        let mut j = 0;
        while j < column.len() {
            let sym = column[j];
            let run = column[j..].iter().take_while(|&&x| x == sym).count();
            if run > best_count {
                best = sym;
                best_count = run;
            }
            j += run;
        }
        center.push(best);
        contributions.push(words.len() - best_count);
    }
    Ok(PluralityCenter { center, contributions })
}

pub fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Number of tuples of size `1..=k` drawn from `size` codewords.
pub fn tuple_count(size: usize, k: usize) -> u128 {
    (1..=k).map(|j| binomial(size as u128, j as u128)).fold(0u128, |a, b| a.saturating_add(b))
}

/// Minimal plurality cost among all tuples of one size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeMinimum {
    pub size: usize,
    pub min_cost: usize,
    /// Lexicographically smallest index tuple achieving `min_cost`.
    pub witness: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostScan {
    pub len: usize,
    pub per_size: Vec<SizeMinimum>,
    pub tuples_examined: u128,
}

/// Scans every tuple of `2..=k` distinct codewords and records, per size, the
/// minimal total plurality cost. Parallel over the leading index.
pub fn scan_min_cost(book: &Codebook, k: usize, cap: u128) -> Result<CostScan> {
    let size = book.size();
    let total = tuple_count(size, k);
    if total > cap {
        return Err(Error::SubsetEnumerationTooLarge(total));
    }
    let masks = if size <= MASK_TABLE_MAX_SIZE { book.agreement_masks() } else { None };
    let mut per_size = Vec::new();
    for j in 2..=k.min(size) {
        let best = match (&masks, j) {
            (Some(m), 2) => scan_pairs(m, size, book.len()),
            (Some(m), 3) => scan_triples(m, size, book.len()),
            (Some(m), 4) => scan_quads(m, size, book.len()),
            _ => scan_general(book, j),
        };
        let (min_cost, witness) = best.expect("at least one tuple of this size");
        per_size.push(SizeMinimum { size: j, min_cost, witness });
    }
    Ok(CostScan { len: book.len(), per_size, tuples_examined: total })
}

type Best = Option<(usize, Vec<usize>)>;

fn better(a: Best, b: Best) -> Best {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(if (y.0, &y.1) < (x.0, &x.1) { y } else { x }),
    }
}

fn scan_pairs(m: &[u64], s: usize, n: usize) -> Best {
    (0..s)
        .into_par_iter()
        .map(|a| {
            let mut best: Best = None;
            for b in a + 1..s {
                let cost = n - m[a * s + b].count_ones() as usize;
                if best.as_ref().is_none_or(|x| cost < x.0) {
                    best = Some((cost, vec![a, b]));
                }
            }
            best
        })
        .reduce(|| None, better)
}

fn scan_triples(m: &[u64], s: usize, n: usize) -> Best {
    (0..s)
        .into_par_iter()
        .map(|a| {
            let mut best: Best = None;
            let row_a = &m[a * s..(a + 1) * s];
            for b in a + 1..s {
                let ab = row_a[b];
                let row_b = &m[b * s..(b + 1) * s];
                for c in b + 1..s {
                    let (ac, bc) = (row_a[c], row_b[c]);
                    let any = ab | ac | bc;
                    let all = ab & ac;
                    let agree = n + any.count_ones() as usize + all.count_ones() as usize;
                    let cost = 3 * n - agree;
                    if best.as_ref().is_none_or(|x| cost < x.0) {
                        best = Some((cost, vec![a, b, c]));
                    }
                }
            }
            best
        })
        .reduce(|| None, better)
}

fn scan_quads(m: &[u64], s: usize, n: usize) -> Best {
    (0..s)
        .into_par_iter()
        .map(|a| {
            let mut best: Best = None;
            let mut best_cost = usize::MAX;
            let row_a = &m[a * s..(a + 1) * s];
            for b in a + 1..s {
                let ab = row_a[b];
                let row_b = &m[b * s..(b + 1) * s];
                for c in b + 1..s {
                    let row_c = &m[c * s..(c + 1) * s];
                    let (ac, bc) = (row_a[c], row_b[c]);
                    let pairs3 = ab | ac | bc;
                    let abc = ab & ac;
                    for d in c + 1..s {
                        let (ad, bd, cd) = (row_a[d], row_b[d], row_c[d]);
                        let any_pair = pairs3 | ad | bd | cd;
                        let any_triple = abc | (ab & ad) | (ac & ad) | (bc & bd);
                        let all = abc & ad;
                        let agree = n
                            + any_pair.count_ones() as usize
                            + any_triple.count_ones() as usize
                            + all.count_ones() as usize;
                        let cost = 4 * n - agree;
                        if cost < best_cost {
                            best_cost = cost;
                            best = Some((cost, vec![a, b, c, d]));
                        }
                    }
                }
            }
            best
        })
        .reduce(|| None, better)
}

/// Per-coordinate counting; works for any size and block length.
fn scan_general(book: &Codebook, j: usize) -> Best {
    let s = book.size();
    let n = book.len();
    (0..s)
        .into_par_iter()
        .map(|a| {
            let mut best: Best = None;
            let mut idx: Vec<usize> = (0..j).map(|t| a + t).collect();
            if idx[j - 1] >= s {
                return None;
            }
            let mut column = vec![0u64; j];
            loop {
                let mut cost = 0;
                for i in 0..n {
                    for (slot, &w) in column.iter_mut().zip(&idx) {
                        *slot = book.word(w)[i];
                    }
                    cost += j - max_multiplicity(&column);
                }
                if best.as_ref().is_none_or(|x| cost < x.0) {
                    best = Some((cost, idx.clone()));
                }
                // Advance positions 1.. (position 0 is pinned to `a`).
                let mut t = j - 1;
                loop {
                    if t == 0 {
                        return best;
                    }
                    if idx[t] < s - (j - t) {
                        idx[t] += 1;
                        for u in t + 1..j {
                            idx[u] = idx[u - 1] + 1;
                        }
                        break;
                    }
                    t -= 1;
                }
            }
        })
        .reduce(|| None, better)
}

fn max_multiplicity(column: &[u64]) -> usize {
    let mut best = 0;
    for (i, x) in column.iter().enumerate() {
        let c = column[i..].iter().filter(|y| *y == x).count();
        best = best.max(c);
    }
    best
}

/// The margin `ε(H) = δ₀ - cost / (n (|H| - 1))` for which `H` is tight.
pub fn tuple_epsilon(delta0: Frac, cost: usize, n: usize, size: usize) -> Frac {
    delta0 - Frac::new(cost as i64, (n * (size - 1)) as i64)
}

/// Recomputes `ε(H)` for an explicit tuple from its plurality center.
pub fn evaluate_tuple(book: &Codebook, indices: &[usize], delta0: Frac) -> Result<Frac> {
    if indices.len() < 2 {
        return Err(Error::InvalidParameter("tuple needs at least two codewords".into()));
    }
    let words: Vec<&[u64]> = indices.iter().map(|&i| book.word(i)).collect();
    let pc = plurality_center(&words)?;
    Ok(tuple_epsilon(delta0, pc.cost(), book.len(), indices.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;
    use crate::linear_code::LinearCode;

    #[test]
    fn plurality_examples() {
        let pc = plurality_center(&[[0u64, 1, 2]]).unwrap();
        assert_eq!((pc.center, pc.contributions), (vec![0, 1, 2], vec![0, 0, 0]));
        let h = [[0u64, 0, 0], [1, 1, 0], [1, 0, 1]];
        let pc = plurality_center(&h).unwrap();
        assert_eq!(pc.center, vec![1, 0, 0]);
        assert_eq!(pc.contributions, vec![1, 1, 1]);
        let pc = plurality_center(&[[0u64, 0, 0], [1, 1, 1]]).unwrap();
        assert_eq!(pc.center, vec![0, 0, 0]);
        assert_eq!(pc.cost(), 3);
        let empty: [[u64; 3]; 0] = [];
        assert!(matches!(plurality_center(&empty), Err(Error::EmptySet)));
    }

    /// Direct minimization over every center in `Σ^n`.
    fn brute_min_cost(words: &[&[u64]], q: u64) -> usize {
        let n = words[0].len();
        let total = q.pow(n as u32);
        (0..total)
            .map(|mut v| {
                let g: Vec<u64> = (0..n)
                    .map(|_| {
                        let s = v % q;
                        v /= q;
                        s
                    })
                    .collect();
                words.iter().map(|w| w.iter().zip(&g).filter(|(a, b)| a != b).count()).sum()
            })
            .min()
            .unwrap()
    }

    #[test]
    fn plurality_is_optimal_exhaustively() {
        // q^n = 4^5 = 2^10 ≤ 2^18.
        let f = Field::new(2, 2).unwrap();
        let code = LinearCode::new(f, vec![vec![1, 0, 1, 1, 2], vec![0, 1, 3, 1, 1]]).unwrap();
        let book = code.codebook(1 << 12).unwrap();
        let s = book.size();
        for a in 0..s {
            for b in a + 1..s {
                for c in [b + 1, s - 1] {
                    if c <= b || c >= s {
                        continue;
                    }
                    for d in [c + 1, s - 1] {
                        if d <= c || d >= s {
                            continue;
                        }
                        let words = [book.word(a), book.word(b), book.word(c), book.word(d)];
                        for len in 1..=4 {
                            let pc = plurality_center(&words[..len]).unwrap();
                            assert_eq!(pc.cost(), brute_min_cost(&words[..len], 4));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn mask_scans_agree_with_general_scan() {
        let f = Field::new(2, 2).unwrap();
        let code = LinearCode::new(f, vec![vec![1, 0, 1, 1, 2, 3], vec![0, 1, 3, 1, 1, 2]]).unwrap();
        let book = code.codebook(1 << 12).unwrap();
        let masks = book.agreement_masks().unwrap();
        let s = book.size();
        assert_eq!(scan_pairs(&masks, s, 6), scan_general(&book, 2));
        assert_eq!(scan_triples(&masks, s, 6), scan_general(&book, 3));
        assert_eq!(scan_quads(&masks, s, 6), scan_general(&book, 4));
    }

    #[test]
    fn scan_respects_cap() {
        let f = Field::new(2, 3).unwrap();
        let code = LinearCode::new(f, vec![vec![1, 0, 1, 1, 2, 3], vec![0, 1, 3, 1, 1, 2]]).unwrap();
        let book = code.codebook(1 << 12).unwrap();
        assert!(matches!(scan_min_cost(&book, 4, 1000), Err(Error::SubsetEnumerationTooLarge(_))));
        assert_eq!(tuple_count(64, 4), 64 + 2016 + 41664 + 635376);
    }
}
