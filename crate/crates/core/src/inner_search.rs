//! Inner codes for the AEL construction and their exact certification.
//!
//! A code is `(δ₀, k, ε)` average-radius list decodable with erasures when,
//! for every partially erased center `g̅` with erasure fraction `s` and every
//! set `H` of at most `k` codewords, `Σ_h Δ(g̅, h) ≥ (|H| - 1)(δ₀ - s - ε)`.
//!
//! [`min_arld_slack`] computes the smallest such `ε` exactly with the plurality
//! scan of [`crate::arld`]. Erasing a coordinate `i` of the plurality center
//! changes the slack by `(maxcount_i - 1)/n ≥ 0`, so the erasure-free scan also
//! covers every erasure pattern. [`exhaustive_arld_check`] is the literal
//! sweep over centers and erasure sets, kept as an independent oracle.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arld::{self, plurality_center, tuple_epsilon, SizeMinimum};
use crate::codebook::Codebook;
use crate::gf::Field;
use crate::linear_code::{ErasedWord, LinearCode};
use crate::seed::derive_seed;
use crate::{fraction, Error, Frac, Result};

/// Attempts before [`sample_random_linear_code`] gives up on a full-rank draw.
pub const MAX_RANK_ATTEMPTS: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Witness {
    /// Codeword indices (lexicographic message order) of the tight tuple.
    pub indices: Vec<usize>,
    /// Its plurality center.
    pub center: Vec<u64>,
    #[serde(with = "fraction::serde_frac")]
    pub epsilon: Frac,
}

/// Exact result of a full scan over codeword tuples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArldCertificate {
    #[serde(with = "fraction::serde_frac")]
    pub delta0: Frac,
    pub k: usize,
    pub len: usize,
    pub codebook_size: usize,
    /// Smallest `ε ≥ 0` for which the inequality holds.
    #[serde(with = "fraction::serde_frac")]
    pub epsilon_min: Frac,
    /// The unclamped maximum of `ε(H)`; absent when no tuple has two codewords.
    #[serde(with = "fraction::serde_opt_frac", default)]
    pub epsilon_raw: Option<Frac>,
    pub per_size: Vec<SizeMinimum>,
    pub witness: Option<Witness>,
    pub tuples_examined: u64,
    /// Erasure fractions covered: all of `[0, 1]`, via the plurality argument.
    pub covers_erasures: bool,
    #[serde(skip)]
    pub runtime_ms: u128,
}

impl ArldCertificate {
    /// Whether the inequality holds for every tuple and center at margin `eps`.
    pub fn passes(&self, eps: Frac) -> bool {
        self.epsilon_raw.is_none_or(|raw| eps >= raw)
    }
}

/// Exact minimal `ε` for `(δ₀, k, ε)` average-radius list decodability.
pub fn min_arld_slack(book: &Codebook, k: usize, delta0: Frac, cap: u128) -> Result<ArldCertificate> {
    let start = Instant::now();
    let scan = arld::scan_min_cost(book, k, cap)?;
    let mut best: Option<(Frac, &SizeMinimum)> = None;
    for m in &scan.per_size {
        let eps = tuple_epsilon(delta0, m.min_cost, book.len(), m.size);
        if best.is_none_or(|(b, _)| eps > b) {
            best = Some((eps, m));
        }
    }
    let zero = Frac::from_integer(0);
    let witness = best
        .map(|(eps, m)| {
            let words: Vec<&[u64]> = m.witness.iter().map(|&i| book.word(i)).collect();
            plurality_center(&words).map(|pc| Witness { indices: m.witness.clone(), center: pc.center, epsilon: eps })
        })
        .transpose()?;
    let epsilon_raw = best.map(|(e, _)| e);
    Ok(ArldCertificate {
        delta0,
        k,
        len: book.len(),
        codebook_size: book.size(),
        epsilon_min: epsilon_raw.map_or(zero, |e| e.max(zero)),
        epsilon_raw,
        per_size: scan.per_size,
        witness,
        tuples_examined: scan.tuples_examined as u64,
        covers_erasures: true,
        runtime_ms: start.elapsed().as_millis(),
    })
}

/// Re-evaluates the stored witness; must reproduce `epsilon_raw`.
pub fn recheck_witness(book: &Codebook, cert: &ArldCertificate) -> Result<Option<Frac>> {
    cert.witness.as_ref().map(|w| arld::evaluate_tuple(book, &w.indices, cert.delta0)).transpose()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub indices: Vec<usize>,
    pub center: ErasedWord<u64>,
    pub lhs: Frac,
    pub rhs: Frac,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExhaustiveOutcome {
    pub pass: bool,
    pub counterexample: Option<Counterexample>,
    pub checks: u64,
}

fn tuples_up_to(size: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn rec(start: usize, size: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() >= 2 {
            out.push(cur.clone());
        }
        if cur.len() == k {
            return;
        }
        for i in start..size {
            cur.push(i);
            rec(i + 1, size, k, cur, out);
            cur.pop();
        }
    }
    rec(0, size, k, &mut Vec::new(), &mut out);
    out
}

/// Number of `(erasure set, center)` pairs visited by the literal sweep.
fn center_count(n: usize, alphabet: u64, erasures: bool) -> u128 {
    if erasures {
        (alphabet as u128 + 1).saturating_pow(n as u32)
    } else {
        (alphabet as u128).saturating_pow(n as u32)
    }
}

/// Calls `visit(erased_mask, center)` for every erasure set (only `∅` unless
/// `erasures`) and every assignment of the remaining coordinates.
fn for_each_center<F>(n: usize, alphabet: u64, erasures: bool, mut visit: F) -> Option<()>
where
    F: FnMut(u32, &[Option<u64>]) -> Option<()>,
{
    let masks = if erasures { 0..(1u32 << n) } else { 0..1 };
    let mut center: Vec<Option<u64>> = vec![None; n];
    for mask in masks {
        let free: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 0).collect();
        for (i, c) in center.iter_mut().enumerate() {
            *c = if mask >> i & 1 == 1 { None } else { Some(0) };
        }
        loop {
            visit(mask, &center)?;
            let mut t = 0;
            loop {
                if t == free.len() {
                    break;
                }
                let slot = center[free[t]].as_mut().unwrap();
                *slot += 1;
                if *slot < alphabet {
                    break;
                }
                *slot = 0;
                t += 1;
            }
            if t == free.len() {
                break;
            }
        }
    }
    Some(())
}

/// Literal sweep: every tuple `2 ≤ |H| ≤ k`, every erasure set (when
/// `erasures`), every center over the non-erased coordinates. Symbols range
/// over `0..alphabet_size`.
pub fn exhaustive_arld_check(
    book: &Codebook,
    alphabet_size: u64,
    k: usize,
    delta0: Frac,
    eps: Frac,
    erasures: bool,
    cap: u128,
) -> Result<ExhaustiveOutcome> {
    let n = book.len();
    if erasures && n > 24 {
        return Err(Error::EnumerationTooLarge(1u128 << n.min(127)));
    }
    let tuples = tuples_up_to(book.size(), k);
    let work = center_count(n, alphabet_size, erasures).saturating_mul(tuples.len().max(1) as u128);
    if work > cap {
        return Err(Error::EnumerationTooLarge(work));
    }
    let margin = delta0 - eps;
    let n_frac = Frac::from_integer(n as i64);
    // thresholds[e][j]: Σ disagreements must be ≥ ceil((j-1)(margin·n - e)).
    let thresholds: Vec<Vec<i64>> = (0..=n)
        .map(|e| {
            (0..=k)
                .map(|j| {
                    let rhs = Frac::from_integer(j.saturating_sub(1) as i64)
                        * (margin * n_frac - Frac::from_integer(e as i64));
                    rhs.ceil().to_integer()
                })
                .collect()
        })
        .collect();
    let mut dist = vec![0i64; book.size()];
    let mut checks = 0u64;
    let mut failure: Option<Counterexample> = None;
    for_each_center(n, alphabet_size, erasures, |mask, center| {
        for (i, w) in book.iter().enumerate() {
            dist[i] = center.iter().zip(w).filter(|(g, h)| matches!(g, Some(x) if x != *h)).count() as i64;
        }
        let e = mask.count_ones() as usize;
        for t in &tuples {
            checks += 1;
            let sum: i64 = t.iter().map(|&i| dist[i]).sum();
            if sum < thresholds[e][t.len()] {
                let j = t.len() as i64;
                failure = Some(Counterexample {
                    indices: t.clone(),
                    center: ErasedWord::new(center.to_vec()),
                    lhs: Frac::new(sum, n as i64),
                    rhs: Frac::from_integer(j - 1) * (margin - Frac::new(e as i64, n as i64)),
                });
                return None;
            }
        }
        Some(())
    });
    Ok(ExhaustiveOutcome { pass: failure.is_none(), counterexample: failure, checks })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotonicityReport {
    pub tuples: usize,
    pub evaluations: u64,
    pub exceptions: u64,
    /// Smallest observed `slack(g̅, S) - min_g slack(g, ∅)`.
    pub min_margin: Frac,
}

/// Checks `slack(g̅, S) ≥ min_g slack(g, ∅)` for every tuple of size `2..=k`,
/// every erasure set `S`, and every center on the non-erased coordinates.
///
/// With `slack(g̅, S) = Σ_h Δ(g̅, h) - (|H| - 1)(δ₀ - s)` the `δ₀` terms cancel,
/// so the comparison is `n·Σ_h Δ(g̅, h) + (|H| - 1)|S| ≥ plurality cost(H)`.
pub fn erasure_monotonicity(book: &Codebook, alphabet_size: u64, k: usize, cap: u128) -> Result<MonotonicityReport> {
    let n = book.len();
    if n > 24 {
        return Err(Error::EnumerationTooLarge(1u128 << n.min(127)));
    }
    let tuples = tuples_up_to(book.size(), k);
    let work = center_count(n, alphabet_size, true).saturating_mul(tuples.len().max(1) as u128);
    if work > cap {
        return Err(Error::EnumerationTooLarge(work));
    }
    let base: Vec<i64> = tuples
        .iter()
        .map(|t| {
            let words: Vec<&[u64]> = t.iter().map(|&i| book.word(i)).collect();
            plurality_center(&words).map(|pc| pc.cost() as i64)
        })
        .collect::<Result<_>>()?;
    let mut dist = vec![0i64; book.size()];
    let mut evaluations = 0u64;
    let mut exceptions = 0u64;
    let mut min_margin = i64::MAX;
    for_each_center(n, alphabet_size, true, |mask, center| {
        for (i, w) in book.iter().enumerate() {
            dist[i] = center.iter().zip(w).filter(|(g, h)| matches!(g, Some(x) if x != *h)).count() as i64;
        }
        let e = mask.count_ones() as i64;
        for (t, &b) in tuples.iter().zip(&base) {
            evaluations += 1;
            let sum: i64 = t.iter().map(|&i| dist[i]).sum();
            let margin = sum + (t.len() as i64 - 1) * e - b;
            min_margin = min_margin.min(margin);
            if margin < 0 {
                exceptions += 1;
            }
        }
        Some(())
    });
    Ok(MonotonicityReport {
        tuples: tuples.len(),
        evaluations,
        exceptions,
        min_margin: Frac::new(if min_margin == i64::MAX { 0 } else { min_margin }, n.max(1) as i64),
    })
}

/// Uniform generator matrix over `field`, resampled until it has full rank.
pub fn sample_random_linear_code(field: &Field, len: usize, dim: usize, seed: u64) -> Result<LinearCode> {
    if dim == 0 || dim > len {
        return Err(Error::InvalidParameter(format!("need 1 <= dim <= len, got dim={dim}, len={len}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = field.order();
    for _ in 0..MAX_RANK_ATTEMPTS {
        let rows: Vec<Vec<u32>> = (0..dim).map(|_| (0..len).map(|_| rng.gen_range(0..q)).collect()).collect();
        match LinearCode::new(field.clone(), rows) {
            Ok(code) => return Ok(code),
            Err(Error::RankDeficient) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::RankFailure(MAX_RANK_ATTEMPTS))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchParams {
    pub len: usize,
    pub dim: usize,
    pub k: usize,
    pub delta0: Frac,
    pub epsilon_target: Frac,
    pub seed: u64,
    pub max_tries: usize,
    pub subset_cap: u128,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub code: LinearCode,
    pub certificate: ArldCertificate,
    /// Zero-based index of the accepted try.
    pub attempt: usize,
    pub attempt_seed: u64,
}

/// Rejection sampling: the first random code whose certified `ε_min` meets
/// the target. Try `t` uses the seed derived from `(seed, "inner-try-t")`.
pub fn search_inner_code(field: &Field, params: &SearchParams) -> Result<SearchOutcome> {
    let zero = Frac::from_integer(0);
    for attempt in 0..params.max_tries {
        if params.epsilon_target < zero {
            break;
        }
        let attempt_seed = derive_seed(params.seed, &format!("inner-try-{attempt}"));
        let code = sample_random_linear_code(field, params.len, params.dim, attempt_seed)?;
        let book = code.codebook(params.subset_cap)?;
        let certificate = min_arld_slack(&book, params.k, params.delta0, params.subset_cap)?;
        log::debug!("inner try {attempt}: eps_min = {}", certificate.epsilon_min);
        if certificate.epsilon_min <= params.epsilon_target {
            return Ok(SearchOutcome { code, certificate, attempt, attempt_seed });
        }
    }
    Err(Error::SearchExhausted(params.max_tries))
}

/// A linear code over `F_q` read over the alphabet `F_q^fold`: consecutive
/// blocks of `fold` coordinates form one symbol, encoded as `Σ_i x_i q^i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldedLinearCode {
    base: LinearCode,
    fold: usize,
}

impl FoldedLinearCode {
    pub fn new(base: LinearCode, fold: usize) -> Result<Self> {
        if fold == 0 || !base.len().is_multiple_of(fold) {
            return Err(Error::InvalidParameter(format!("fold {fold} does not divide length {}", base.len())));
        }
        if (base.field().order() as u128).pow(fold as u32) > u64::MAX as u128 {
            return Err(Error::AlphabetTooLarge);
        }
        Ok(Self { base, fold })
    }

    pub fn base(&self) -> &LinearCode {
        &self.base
    }

    pub fn fold(&self) -> usize {
        self.fold
    }

    /// Folded block length.
    pub fn len(&self) -> usize {
        self.base.len() / self.fold
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn alphabet_size(&self) -> u64 {
        (self.base.field().order() as u64).pow(self.fold as u32)
    }

    pub fn fold_word(&self, word: &[u32]) -> Vec<u64> {
        let q = self.base.field().order() as u64;
        word.chunks(self.fold).map(|block| block.iter().rev().fold(0u64, |acc, &x| acc * q + x as u64)).collect()
    }

    pub fn codebook(&self, cap: u128) -> Result<Codebook> {
        let words = self.base.enumerate(cap)?;
        Codebook::from_words(self.len(), words.iter().map(|w| self.fold_word(w)))
    }

    /// Minimum folded weight of a nonzero codeword, as a fraction of the folded length.
    pub fn min_distance(&self, cap: u128) -> Result<Frac> {
        let words = self.base.enumerate(cap)?;
        let min = words
            .iter()
            .skip(1)
            .map(|w| self.fold_word(w).iter().filter(|&&s| s != 0).count())
            .min()
            .unwrap_or(self.len());
        Ok(Frac::new(min as i64, self.len() as i64))
    }
}

/// Folded Reed–Solomon code: messages are polynomials of degree `< ρbn` and
/// symbol `j` is `(f(α_j), f(γα_j), …, f(γ^{b-1}α_j))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldedRsCode {
    field: Field,
    fold: usize,
    gamma: u32,
    alphas: Vec<u32>,
    message_len: usize,
}

impl FoldedRsCode {
    /// With `alphas = None` the points `α_j = γ^{jb}` are used; distinctness of
    /// all `γ^i α_j` is checked either way.
    pub fn new(field: Field, fold: usize, n: usize, rate: Frac, alphas: Option<Vec<u32>>) -> Result<Self> {
        if fold == 0 || n == 0 {
            return Err(Error::InvalidParameter("fold and length must be positive".into()));
        }
        let needed = fold * n;
        if (field.order() as usize) < needed {
            return Err(Error::FieldTooSmall { q: field.order(), needed });
        }
        let msg = rate * Frac::from_integer(needed as i64);
        if !msg.is_integer() || msg.to_integer() < 1 || msg > Frac::from_integer(needed as i64) {
            return Err(Error::InvalidParameter(format!("rate·b·n = {msg} must be an integer in [1, bn]")));
        }
        let gamma = field.generator();
        let alphas = match alphas {
            Some(a) => {
                if a.len() != n {
                    return Err(Error::LengthMismatch { expected: n, got: a.len() });
                }
                if let Some(&bad) = a.iter().find(|&&x| !field.contains(x)) {
                    return Err(Error::InvalidElement(bad as u64));
                }
                a
            }
            None => (0..n).map(|j| field.pow(gamma, (j * fold) as u64)).collect(),
        };
        let code = Self { field, fold, gamma, alphas, message_len: msg.to_integer() as usize };
        let points = code.evaluation_points();
        if points.iter().collect::<BTreeSet<_>>().len() != points.len() {
            return Err(Error::NotAppropriate);
        }
        Ok(code)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn fold(&self) -> usize {
        self.fold
    }

    pub fn gamma(&self) -> u32 {
        self.gamma
    }

    pub fn alphas(&self) -> &[u32] {
        &self.alphas
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    /// Number of polynomial coefficients, `ρbn`.
    pub fn message_len(&self) -> usize {
        self.message_len
    }

    pub fn rate(&self) -> Frac {
        Frac::new(self.message_len as i64, (self.fold * self.len()) as i64)
    }

    /// `γ^i α_j` ordered by `j`, then `i`.
    pub fn evaluation_points(&self) -> Vec<u32> {
        self.alphas
            .iter()
            .flat_map(|&a| (0..self.fold).map(move |i| (a, i)))
            .map(|(a, i)| self.field.mul(self.field.pow(self.gamma, i as u64), a))
            .collect()
    }

    pub fn is_appropriate(&self) -> bool {
        let points = self.evaluation_points();
        points.iter().collect::<BTreeSet<_>>().len() == points.len()
    }

    /// Folded symbols of the polynomial with low-to-high `coeffs`.
    pub fn encode(&self, coeffs: &[u32]) -> Result<Vec<Vec<u32>>> {
        if coeffs.len() != self.message_len {
            return Err(Error::DimensionMismatch { expected: self.message_len, got: coeffs.len() });
        }
        let evals: Vec<u32> = self.evaluation_points().iter().map(|&x| self.field.eval_poly(coeffs, x)).collect();
        Ok(evals.chunks(self.fold).map(<[u32]>::to_vec).collect())
    }

    /// The block view over `F_q^b`.
    pub fn as_linear_code(&self) -> FoldedLinearCode {
        let points = self.evaluation_points();
        let rows =
            (0..self.message_len).map(|i| points.iter().map(|&x| self.field.pow(x, i as u64)).collect()).collect();
        let base = LinearCode::new(self.field.clone(), rows).expect("distinct points give full rank");
        FoldedLinearCode::new(base, self.fold).expect("fold divides bn")
    }
}
