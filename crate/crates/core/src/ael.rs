//! The AEL composition `(G, C_out, C_in, φ)`.
//!
//! An outer codeword assigns one outer symbol per left vertex; `φ` turns it
//! into an inner codeword written on that vertex's `d` edges. Reading the
//! edges back at each right vertex gives the right-folded codeword, a word
//! of length `n` over `Σ_in^d` packed into `u64` as `Σ_j x_j q^j`.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codebook::Codebook;
use crate::expander::{verify_eml_sets, BipartiteGraph};
use crate::linear_code::{dist_with_erasures, ErasedWord, LinearCode, DEFAULT_ENUMERATION_CAP};
use crate::outer_code::RsCode;
use crate::{fraction, Error, Frac, Result};

/// One inner symbol per edge, indexed by `e = ℓ·d + i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeWord(Vec<u32>);

impl EdgeWord {
    pub fn new(symbols: Vec<u32>) -> Self {
        Self(symbols)
    }

    pub fn symbols(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct AelCode {
    graph: BipartiteGraph,
    inner: LinearCode,
    outer: RsCode,
    /// `phi[a]` is the message index of the inner codeword for outer symbol `a`.
    phi: Vec<u64>,
    phi_inv: Vec<u32>,
    inner_words: Vec<Vec<u32>>,
    inner_lookup: HashMap<Vec<u32>, u64>,
}

impl AelCode {
    /// `phi = None` uses the identity between outer symbol integers and
    /// inner message indices.
    pub fn new(graph: BipartiteGraph, inner: LinearCode, outer: RsCode, phi: Option<Vec<u64>>) -> Result<Self> {
        if graph.degree() != inner.len() {
            return Err(Error::DimensionMismatch { expected: graph.degree(), got: inner.len() });
        }
        if graph.n() != outer.len() {
            return Err(Error::DimensionMismatch { expected: graph.n(), got: outer.len() });
        }
        let q_out = outer.field().order() as u128;
        if inner.codeword_count() != q_out {
            return Err(Error::InvalidParameter(format!(
                "outer alphabet has {q_out} symbols but the inner code has {} codewords",
                inner.codeword_count()
            )));
        }
        if (inner.field().order() as u128).checked_pow(inner.len() as u32).is_none_or(|s| s > u64::MAX as u128) {
            return Err(Error::AlphabetTooLarge);
        }
        let phi = phi.unwrap_or_else(|| (0..q_out as u64).collect());
        if phi.len() as u128 != q_out {
            return Err(Error::LengthMismatch { expected: q_out as usize, got: phi.len() });
        }
        let mut phi_inv = vec![u32::MAX; phi.len()];
        for (a, &idx) in phi.iter().enumerate() {
            if idx as u128 >= q_out || phi_inv[idx as usize] != u32::MAX {
                return Err(Error::InvalidParameter("phi is not a bijection".into()));
            }
            phi_inv[idx as usize] = a as u32;
        }
        let inner_words = inner.enumerate(DEFAULT_ENUMERATION_CAP)?;
        let inner_lookup = inner_words.iter().enumerate().map(|(i, w)| (w.clone(), i as u64)).collect();
        Ok(Self { graph, inner, outer, phi, phi_inv, inner_words, inner_lookup })
    }

    pub fn graph(&self) -> &BipartiteGraph {
        &self.graph
    }

    pub fn inner(&self) -> &LinearCode {
        &self.inner
    }

    pub fn outer(&self) -> &RsCode {
        &self.outer
    }

    pub fn phi(&self) -> &[u64] {
        &self.phi
    }

    /// Inner codewords in message-index order.
    pub fn inner_words(&self) -> &[Vec<u32>] {
        &self.inner_words
    }

    /// Message index of `view` in the inner code, if it is a codeword.
    pub fn inner_index_of(&self, view: &[u32]) -> Option<u64> {
        self.inner_lookup.get(view).copied()
    }

    /// Outer symbol mapped to inner codeword `index`.
    pub fn phi_inverse(&self, index: u64) -> u32 {
        self.phi_inv[index as usize]
    }

    pub fn len(&self) -> usize {
        self.graph.n()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.n() == 0
    }

    /// `|Σ| = q_in^d`.
    pub fn alphabet_size(&self) -> u64 {
        (self.inner.field().order() as u64).pow(self.graph.degree() as u32)
    }

    pub fn codeword_count(&self) -> u128 {
        (self.outer.field().order() as u128).saturating_pow(self.outer.dim() as u32)
    }

    /// `log_{|Σ|} |C_AEL| / n = k_out·dim_in / (n·d)`.
    pub fn rate(&self) -> Frac {
        let r = Frac::new((self.outer.dim() * self.inner.dim()) as i64, (self.graph.n() * self.graph.degree()) as i64);
        debug_assert!(r >= self.outer.rate() * self.inner.rate());
        r
    }

    /// Edge labelling of an outer codeword.
    pub fn encode_edges(&self, outer_word: &[u32]) -> Result<EdgeWord> {
        match self.outer.message_of(outer_word)? {
            Some(_) => {}
            None => return Err(Error::NotAnOuterCodeword),
        }
        let mut symbols = Vec::with_capacity(self.graph.edge_count());
        for &a in outer_word {
            symbols.extend_from_slice(&self.inner_words[self.phi[a as usize] as usize]);
        }
        Ok(EdgeWord(symbols))
    }

    /// Right-folded codeword of an outer codeword.
    pub fn encode(&self, outer_word: &[u32]) -> Result<Vec<u64>> {
        Ok(self.fold_right(&self.encode_edges(outer_word)?))
    }

    /// Right-folded codeword of an outer message.
    pub fn encode_message(&self, msg: &[u32]) -> Result<Vec<u64>> {
        self.encode(&self.outer.encode(msg)?)
    }

    /// Outer message with lexicographic index `index` (first symbol most significant).
    pub fn outer_message(&self, mut index: u64) -> Vec<u32> {
        let q = self.outer.field().order() as u64;
        let mut msg = vec![0; self.outer.dim()];
        for slot in msg.iter_mut().rev() {
            *slot = (index % q) as u32;
            index /= q;
        }
        msg
    }

    fn check_edges(&self, w: &EdgeWord) -> Result<()> {
        if w.len() != self.graph.edge_count() {
            return Err(Error::GraphMismatch);
        }
        Ok(())
    }

    pub fn left_view<'a>(&self, w: &'a EdgeWord, l: usize) -> &'a [u32] {
        let d = self.graph.degree();
        &w.0[l * d..(l + 1) * d]
    }

    pub fn right_view(&self, w: &EdgeWord, r: usize) -> Vec<u32> {
        self.graph.right_edges(r).iter().map(|&e| w.0[e]).collect()
    }

    fn pack(&self, view: impl Iterator<Item = u32>) -> u64 {
        let q = self.inner.field().order() as u64;
        let mut acc = 0u64;
        let mut scale = 1u64;
        for x in view {
            acc += x as u64 * scale;
            scale = scale.wrapping_mul(q);
        }
        acc
    }

    /// Inverse of the packing used for folded symbols.
    pub fn unpack(&self, mut symbol: u64) -> Result<Vec<u32>> {
        if symbol >= self.alphabet_size() {
            return Err(Error::InvalidElement(symbol));
        }
        let q = self.inner.field().order() as u64;
        Ok((0..self.graph.degree())
            .map(|_| {
                let x = (symbol % q) as u32;
                symbol /= q;
                x
            })
            .collect())
    }

    pub fn fold_right(&self, w: &EdgeWord) -> Vec<u64> {
        (0..self.graph.n()).map(|r| self.pack(self.graph.right_edges(r).iter().map(|&e| w.0[e]))).collect()
    }

    pub fn fold_left(&self, w: &EdgeWord) -> Vec<u64> {
        (0..self.graph.n()).map(|l| self.pack(self.left_view(w, l).iter().copied())).collect()
    }

    pub fn unfold_right(&self, folded: &[u64]) -> Result<EdgeWord> {
        if folded.len() != self.graph.n() {
            return Err(Error::LengthMismatch { expected: self.graph.n(), got: folded.len() });
        }
        let mut symbols = vec![0; self.graph.edge_count()];
        for (r, &s) in folded.iter().enumerate() {
            for (&e, x) in self.graph.right_edges(r).iter().zip(self.unpack(s)?) {
                symbols[e] = x;
            }
        }
        Ok(EdgeWord(symbols))
    }

    /// `φ⁻¹` of every left view, or `None` if some view is not an inner codeword.
    pub fn outer_word_of(&self, w: &EdgeWord) -> Result<Option<Vec<u32>>> {
        self.check_edges(w)?;
        Ok((0..self.graph.n())
            .map(|l| self.inner_index_of(self.left_view(w, l)).map(|i| self.phi_inverse(i)))
            .collect())
    }

    /// Fraction of left vertices whose views differ.
    pub fn delta_l(&self, f: &EdgeWord, g: &EdgeWord) -> Result<Frac> {
        self.check_edges(f)?;
        self.check_edges(g)?;
        let diff = (0..self.graph.n()).filter(|&l| self.left_view(f, l) != self.left_view(g, l)).count();
        Ok(Frac::new(diff as i64, self.graph.n() as i64))
    }

    /// Fraction of right vertices whose views differ.
    pub fn delta_r(&self, f: &EdgeWord, g: &EdgeWord) -> Result<Frac> {
        self.check_edges(f)?;
        self.check_edges(g)?;
        let diff = (0..self.graph.n()).filter(|&r| self.graph.right_edges(r).iter().any(|&e| f.0[e] != g.0[e])).count();
        Ok(Frac::new(diff as i64, self.graph.n() as i64))
    }

    /// Right distance to a partially erased right-folded word.
    pub fn delta_r_erased(&self, g: &ErasedWord<u64>, h: &[u64]) -> Result<Frac> {
        if g.len() != self.graph.n() {
            return Err(Error::LengthMismatch { expected: self.graph.n(), got: g.len() });
        }
        dist_with_erasures(g, h)
    }

    /// Outer codewords in lexicographic message order.
    pub fn outer_codewords(&self, cap: u128) -> Result<Vec<Vec<u32>>> {
        let count = self.codeword_count();
        if count > cap {
            return Err(Error::EnumerationTooLarge(count));
        }
        (0..count as u64).map(|i| self.outer.encode(&self.outer_message(i))).collect()
    }

    /// Right-folded codewords, in outer message order.
    pub fn codebook(&self, cap: u128) -> Result<Codebook> {
        let words = self.outer_codewords(cap)?;
        let folded: Vec<Vec<u64>> = words.par_iter().map(|w| self.encode(w)).collect::<Result<_>>()?;
        Codebook::from_words(self.graph.n(), folded)
    }

    /// All distinct pairs against the amplification bound.
    pub fn verify_distance_amplification(&self, cap: u128) -> Result<AmplificationReport> {
        let outer_words = self.outer_codewords(cap)?;
        let edges: Vec<EdgeWord> = outer_words.par_iter().map(|w| self.encode_edges(w)).collect::<Result<_>>()?;
        let delta_in = self.inner.min_distance(DEFAULT_ENUMERATION_CAP)?;
        let delta_out = self.outer.distance();
        let w_in = (delta_in * Frac::from_integer(self.inner.len() as i64)).to_integer() as usize;
        let lambda = self.graph.spectral_bound();
        let din = fraction::to_f64(&delta_in);
        let global_bound = din - lambda / fraction::to_f64(&delta_out);
        let vacuous = global_bound <= 0.0;
        let n = self.graph.n();

        let m = edges.len();
        let per_first: Vec<Result<PairStats>> = (0..m)
            .into_par_iter()
            .map(|i| {
                let mut st = PairStats::default();
                for j in i + 1..m {
                    let (f, g) = (&edges[i], &edges[j]);
                    let ls: Vec<bool> = (0..n).map(|l| self.left_view(f, l) != self.left_view(g, l)).collect();
                    let rs: Vec<bool> =
                        (0..n).map(|r| self.graph.right_edges(r).iter().any(|&e| f.0[e] != g.0[e])).collect();
                    let dl_count = ls.iter().filter(|&&x| x).count();
                    let dr_count = rs.iter().filter(|&&x| x).count();
                    if dl_count == 0 || dr_count == 0 {
                        return Err(Error::AmplificationViolation(i, j));
                    }
                    let dl = Frac::new(dl_count as i64, n as i64);
                    let dr = Frac::new(dr_count as i64, n as i64);
                    let drf = fraction::to_f64(&dr);
                    let margin = if lambda == 0.0 {
                        fraction::to_f64(&(dr - delta_in))
                    } else {
                        drf - (din - lambda / fraction::to_f64(&dl))
                    };
                    let exact_ok = lambda != 0.0 || dr >= delta_in;
                    if margin < 0.0 || !exact_ok || (!vacuous && drf < global_bound) {
                        return Err(Error::AmplificationViolation(i, j));
                    }
                    // Each disagreeing left vertex sends at least w_in disagreeing edges into R'.
                    let e_lr = self.graph.edges_between(&ls, &rs);
                    if e_lr < dl_count * w_in || !verify_eml_sets(&self.graph, &ls, &rs)?.pass {
                        return Err(Error::AmplificationViolation(i, j));
                    }
                    st.absorb(dl, dr, margin);
                }
                Ok(st)
            })
            .collect();
        let mut total = PairStats::default();
        for st in per_first {
            total.merge(st?);
        }
        Ok(AmplificationReport {
            pairs: total.pairs,
            delta_in,
            delta_out,
            lambda_upper: lambda,
            global_bound,
            vacuous,
            min_delta_l: total.min_dl.unwrap_or(Frac::from_integer(1)),
            min_delta_r: total.min_dr.unwrap_or(Frac::from_integer(1)),
            min_margin: total.min_margin,
        })
    }
}

#[derive(Debug, Clone, Copy)]
struct PairStats {
    pairs: u64,
    min_dl: Option<Frac>,
    min_dr: Option<Frac>,
    min_margin: f64,
}

impl Default for PairStats {
    fn default() -> Self {
        Self { pairs: 0, min_dl: None, min_dr: None, min_margin: f64::INFINITY }
    }
}

impl PairStats {
    fn absorb(&mut self, dl: Frac, dr: Frac, margin: f64) {
        self.pairs += 1;
        self.min_dl = Some(self.min_dl.map_or(dl, |m| m.min(dl)));
        self.min_dr = Some(self.min_dr.map_or(dr, |m| m.min(dr)));
        self.min_margin = self.min_margin.min(margin);
    }

    fn merge(&mut self, o: PairStats) {
        self.pairs += o.pairs;
        for (mine, theirs) in [(&mut self.min_dl, o.min_dl), (&mut self.min_dr, o.min_dr)] {
            if let Some(t) = theirs {
                *mine = Some(mine.map_or(t, |m| m.min(t)));
            }
        }
        self.min_margin = self.min_margin.min(o.min_margin);
    }
}

/// Outcome of [`AelCode::verify_distance_amplification`].
///
/// When `vacuous` is set the global bound `δ_in - λ/δ_out` is non-positive
/// and only the per-pair form was asserted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplificationReport {
    pub pairs: u64,
    #[serde(with = "fraction::serde_frac")]
    pub delta_in: Frac,
    #[serde(with = "fraction::serde_frac")]
    pub delta_out: Frac,
    pub lambda_upper: f64,
    pub global_bound: f64,
    pub vacuous: bool,
    #[serde(with = "fraction::serde_frac")]
    pub min_delta_l: Frac,
    #[serde(with = "fraction::serde_frac")]
    pub min_delta_r: Frac,
    /// Smallest `Δ_R - (δ_in - λ/Δ_L)` over all pairs.
    pub min_margin: f64,
}
