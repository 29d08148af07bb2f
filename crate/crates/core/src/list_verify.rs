//! Exact list-decoding oracles and tuple-level checks on enumerable AEL codes.
//!
//! All distances here are right distances on the right-folded codebook.

use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ael::{AelCode, EdgeWord};
use crate::arld::{plurality_center, DEFAULT_SUBSET_CAP};
use crate::codebook::{hamming, Codebook};
use crate::inner_search::{min_arld_slack, ArldCertificate};
use crate::linear_code::{erased_disagreements, ErasedWord, DEFAULT_ENUMERATION_CAP};
use crate::{fraction, Error, Frac, Result};

/// Every codeword within right distance `radius` of a partially erased center.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ListDecodingInstance {
    pub center: ErasedWord<u64>,
    pub radius: Frac,
    /// Codebook indices, ascending.
    pub list: Vec<usize>,
}

pub fn brute_force_list(book: &Codebook, center: &ErasedWord<u64>, radius: Frac) -> Result<ListDecodingInstance> {
    let n = book.len();
    if center.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: center.len() });
    }
    let limit = radius * Frac::from_integer(n as i64);
    let mut list = Vec::new();
    for (i, h) in book.iter().enumerate() {
        if Frac::from_integer(erased_disagreements(center, h)? as i64) <= limit {
            list.push(i);
        }
    }
    Ok(ListDecodingInstance { center: center.clone(), radius, list })
}

/// Hypotheses of the local-to-global theorem, evaluated on an instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisCheck {
    /// `0` for `K_{n,n}`, otherwise `λ̂ + 10⁻⁶`.
    pub lambda_upper: f64,
    /// `δ_out · ε / (6 k^k)`.
    pub lambda_required: f64,
    pub lambda_ok: bool,
    /// Minimal inner `ε` at the same `δ₀` and at least the same `k`, if certified.
    #[serde(with = "fraction::serde_opt_frac", default)]
    pub inner_epsilon: Option<Frac>,
    pub inner_ok: bool,
    pub applicable: bool,
}

pub fn evaluate_hypotheses(
    a: &AelCode,
    k: usize,
    delta0: Frac,
    eps: Frac,
    inner: Option<&ArldCertificate>,
) -> HypothesisCheck {
    let lambda_upper = a.graph().spectral_bound();
    let kk = (k as f64).powi(k as i32);
    let bound = a.outer().distance() * eps;
    let lambda_required = fraction::to_f64(&bound) / (6.0 * kk);
    let lambda_ok = bound >= Frac::from_integer(0) && lambda_upper <= lambda_required;
    let inner_ok = inner.is_some_and(|c| c.delta0 == delta0 && c.k >= k && c.passes(eps / 2));
    HypothesisCheck {
        lambda_upper,
        lambda_required,
        lambda_ok,
        inner_epsilon: inner.map(|c| c.epsilon_min),
        inner_ok,
        applicable: lambda_ok && inner_ok,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingletonReport {
    #[serde(with = "fraction::serde_frac")]
    pub epsilon: Frac,
    pub pass: bool,
    pub hypothesis: HypothesisCheck,
    /// `Some(false)` would be a counterexample to the theorem.
    pub theorem_holds: Option<bool>,
    pub certificate: ArldCertificate,
}

/// Worst case over all `H` with `|H| ≤ k` and all centers, via the plurality
/// center on right-folded symbols.
pub fn verify_generalized_singleton(
    a: &AelCode,
    k: usize,
    delta0: Frac,
    eps: Frac,
    inner: Option<&ArldCertificate>,
    subset_cap: u128,
) -> Result<SingletonReport> {
    let book = a.codebook(DEFAULT_ENUMERATION_CAP)?;
    verify_singleton_on_codebook(a, &book, k, delta0, eps, inner, subset_cap)
}

/// As [`verify_generalized_singleton`] with a prebuilt codebook.
pub fn verify_singleton_on_codebook(
    a: &AelCode,
    book: &Codebook,
    k: usize,
    delta0: Frac,
    eps: Frac,
    inner: Option<&ArldCertificate>,
    subset_cap: u128,
) -> Result<SingletonReport> {
    let certificate = min_arld_slack(book, k, delta0, subset_cap)?;
    let pass = certificate.passes(eps);
    let hypothesis = evaluate_hypotheses(a, k, delta0, eps, inner);
    let theorem_holds = hypothesis.applicable.then_some(pass);
    Ok(SingletonReport { epsilon: eps, pass, hypothesis, theorem_holds, certificate })
}

/// Fraction of positions where every word of `hs` disagrees with `g`.
pub fn common_error_fraction<W: AsRef<[u64]>>(g: &[u64], hs: &[W]) -> Frac {
    let n = g.len();
    if n == 0 {
        return Frac::from_integer(0);
    }
    let c = (0..n).filter(|&r| hs.iter().all(|h| h.as_ref()[r] != g[r])).count();
    Frac::new(c as i64, n as i64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommonErrorViolation {
    pub center: usize,
    pub indices: Vec<usize>,
    #[serde(with = "fraction::serde_frac")]
    pub lhs: Frac,
    #[serde(with = "fraction::serde_frac")]
    pub rhs: Frac,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommonErrorReport {
    pub centers: usize,
    pub tuples_checked: u64,
    /// Smallest `lhs - rhs` seen.
    #[serde(with = "fraction::serde_opt_frac", default)]
    pub min_margin: Option<Frac>,
    pub violations: Vec<CommonErrorViolation>,
    /// Largest number of codewords in an open ball of radius `((k-1)/k)(δ₀-ε)`.
    pub max_ball_count: usize,
    pub list_size_ok: bool,
}

impl CommonErrorReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty() && self.list_size_ok
    }
}

/// `Σ_i Δ(g,h_i) ≥ (|H|-1)(δ₀-ε) + E_r[Π_i 1{h_{i,r} ≠ g_r}]` for every `H`
/// of size `≤ k` drawn from the `list_size` codewords nearest each center.
pub fn verify_common_error_bound(
    book: &Codebook,
    k: usize,
    delta0: Frac,
    eps: Frac,
    prerequisite: &SingletonReport,
    centers: &[Vec<u64>],
    list_size: usize,
) -> Result<CommonErrorReport> {
    let cert = &prerequisite.certificate;
    if !prerequisite.pass
        || cert.delta0 != delta0
        || cert.k < k
        || !cert.passes(eps)
        || cert.codebook_size != book.size()
    {
        return Err(Error::PrerequisiteNotVerified);
    }
    let n = book.len();
    if let Some(bad) = centers.iter().find(|c| c.len() != n) {
        return Err(Error::LengthMismatch { expected: n, got: bad.len() });
    }
    let nf = Frac::from_integer(n as i64);
    let ball = Frac::new(k as i64 - 1, k as i64) * (delta0 - eps) * nf;
    let per_center: Vec<(u64, Option<Frac>, Vec<CommonErrorViolation>, usize)> = centers
        .par_iter()
        .enumerate()
        .map(|(ci, g)| {
            let mut dist: Vec<(usize, usize)> = book.iter().enumerate().map(|(i, h)| (hamming(g, h), i)).collect();
            dist.sort_unstable();
            let ball_count = dist.iter().filter(|(d, _)| Frac::from_integer(*d as i64) < ball).count();
            let near: Vec<usize> = dist.iter().take(list_size).map(|&(_, i)| i).collect();
            let mut checked = 0u64;
            let mut min_margin: Option<Frac> = None;
            let mut violations = Vec::new();
            let mut idx = Vec::with_capacity(k);
            for_each_subset(near.len(), k, &mut idx, &mut |sub| {
                let hs: Vec<&[u64]> = sub.iter().map(|&j| book.word(near[j])).collect();
                let lhs = Frac::from_integer(hs.iter().map(|h| hamming(g, h)).sum::<usize>() as i64);
                let rhs =
                    Frac::from_integer(sub.len() as i64 - 1) * (delta0 - eps) * nf + common_error_fraction(g, &hs) * nf;
                let margin = (lhs - rhs) / nf;
                checked += 1;
                min_margin = Some(min_margin.map_or(margin, |m| m.min(margin)));
                if lhs < rhs {
                    violations.push(CommonErrorViolation {
                        center: ci,
                        indices: sub.iter().map(|&j| near[j]).collect(),
                        lhs: lhs / nf,
                        rhs: rhs / nf,
                    });
                }
            });
            (checked, min_margin, violations, ball_count)
        })
        .collect();
    let mut report = CommonErrorReport {
        centers: centers.len(),
        tuples_checked: 0,
        min_margin: None,
        violations: Vec::new(),
        max_ball_count: 0,
        list_size_ok: true,
    };
    for (checked, margin, violations, ball_count) in per_center {
        report.tuples_checked += checked;
        if let Some(m) = margin {
            report.min_margin = Some(report.min_margin.map_or(m, |x| x.min(m)));
        }
        report.violations.extend(violations);
        report.max_ball_count = report.max_ball_count.max(ball_count);
    }
    report.list_size_ok = k == 0 || report.max_ball_count < k;
    Ok(report)
}

/// Calls `f` on every strictly increasing index tuple of size `1..=k` below `m`.
fn for_each_subset(m: usize, k: usize, idx: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    let start = idx.last().map_or(0, |&x| x + 1);
    for i in start..m {
        idx.push(i);
        f(idx);
        if idx.len() < k {
            for_each_subset(m, k, idx, f);
        }
        idx.pop();
    }
}

/// Plurality centers of random codeword subsets of size `2..=max_size`.
pub fn adversarial_centers(book: &Codebook, count: usize, max_size: usize, seed: u64) -> Result<Vec<Vec<u64>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = book.size();
    if size == 0 {
        return Err(Error::EmptySet);
    }
    (0..count)
        .map(|_| {
            let j = rng.gen_range(2..=max_size.max(2)).min(size);
            let words: Vec<&[u64]> = sample(&mut rng, size, j).into_iter().map(|i| book.word(i)).collect();
            Ok(plurality_center(&words)?.center)
        })
        .collect()
}

/// Uniform words over `[0, alphabet)^n`.
pub fn random_centers(n: usize, alphabet: u64, count: usize, seed: u64) -> Vec<Vec<u64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| (0..n).map(|_| rng.gen_range(0..alphabet)).collect()).collect()
}

/// Canonical restricted-growth label of the partition `h ~ h'` iff `key(h) = key(h')`.
fn restricted_growth<T: PartialEq>(keys: &[T]) -> Vec<usize> {
    let mut labels = Vec::with_capacity(keys.len());
    let mut reps: Vec<&T> = Vec::new();
    for key in keys {
        match reps.iter().position(|r| *r == key) {
            Some(p) => labels.push(p),
            None => {
                labels.push(reps.len());
                reps.push(key);
            }
        }
    }
    labels
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionProfile {
    pub tuple_size: usize,
    /// Per left vertex, the restricted-growth label of its induced partition.
    pub per_vertex: Vec<Vec<usize>>,
    /// Partition label to number of left vertices inducing it.
    pub histogram: Vec<(Vec<usize>, usize)>,
    pub nontrivial_mass: usize,
    /// Most frequent nontrivial partition (ties to the smallest label) and its support.
    pub majority: Option<Vec<usize>>,
    pub support: Vec<usize>,
    /// `δ_out · n / k^k`.
    #[serde(with = "fraction::serde_frac")]
    pub bound: Frac,
    pub pass: bool,
}

pub fn partition_profile(a: &AelCode, hs: &[EdgeWord]) -> Result<PartitionProfile> {
    let k = hs.len();
    if k == 0 {
        return Err(Error::EmptySet);
    }
    for (i, h) in hs.iter().enumerate() {
        if h.len() != a.graph().edge_count() {
            return Err(Error::GraphMismatch);
        }
        if hs[..i].contains(h) {
            return Err(Error::DuplicateCodewords);
        }
    }
    let n = a.len();
    let per_vertex: Vec<Vec<usize>> =
        (0..n).map(|l| restricted_growth(&hs.iter().map(|h| a.left_view(h, l)).collect::<Vec<_>>())).collect();
    let mut counts: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for p in &per_vertex {
        *counts.entry(p.clone()).or_default() += 1;
    }
    let nontrivial = |p: &Vec<usize>| p.iter().any(|&x| x > 0);
    let nontrivial_mass = counts.iter().filter(|(p, _)| nontrivial(p)).map(|(_, c)| c).sum();
    let mut majority: Option<(Vec<usize>, usize)> = None;
    for (p, &c) in counts.iter().filter(|(p, _)| nontrivial(p)) {
        if majority.as_ref().is_none_or(|(_, best)| c > *best) {
            majority = Some((p.clone(), c));
        }
    }
    let support = match &majority {
        Some((p, _)) => (0..n).filter(|&l| &per_vertex[l] == p).collect(),
        None => Vec::new(),
    };
    let kk = (k as i64).pow(k as u32);
    let delta_out = a.outer().distance();
    let nf = Frac::from_integer(n as i64);
    let bound = delta_out * nf / Frac::from_integer(kk);
    let max_mass = Frac::from_integer(majority.as_ref().map_or(0, |(_, c)| *c) as i64);
    let pass = k < 2 || (Frac::from_integer(nontrivial_mass as i64) >= delta_out * nf && max_mass >= bound);
    Ok(PartitionProfile {
        tuple_size: k,
        per_vertex,
        histogram: counts.into_iter().collect(),
        nontrivial_mass,
        majority: majority.map(|(p, _)| p),
        support,
        bound,
        pass,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingCheck {
    /// `E_{ℓ∈L*}[s_ℓ]`.
    #[serde(with = "fraction::serde_frac")]
    pub mean_local: Frac,
    #[serde(with = "fraction::serde_frac")]
    pub s: Frac,
    /// `λ · n / |L*|` with the instance's spectral bound.
    pub slack: f64,
    /// `s + slack - E_{ℓ∈L*}[s_ℓ]`.
    pub margin: f64,
    pub pass: bool,
}

/// `E_{ℓ∈L*}[s_ℓ] ≤ s + λ·n/|L*|`, where `s_ℓ` is the erased fraction of ℓ's edges.
pub fn sampling_bound_check(a: &AelCode, g: &ErasedWord<u64>, l_star: &[usize], k: usize) -> Result<SamplingCheck> {
    let n = a.len();
    let d = a.graph().degree();
    if g.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: g.len() });
    }
    let required = a.outer().distance() * Frac::from_integer(n as i64) / Frac::from_integer((k as i64).pow(k as u32));
    if l_star.is_empty() || Frac::from_integer(l_star.len() as i64) < required {
        return Err(Error::SubsetTooSmall { size: l_star.len(), required: fraction::format_frac(&required) });
    }
    let erased: Vec<bool> = g.symbols().iter().map(Option::is_none).collect();
    let hits: usize = l_star.iter().map(|&l| a.graph().left_neighbors(l).iter().filter(|&&r| erased[r]).count()).sum();
    let mean_local = Frac::new(hits as i64, (l_star.len() * d) as i64);
    let s = g.erasure_fraction();
    let slack = a.graph().spectral_bound() * n as f64 / l_star.len() as f64;
    let excess = mean_local - s;
    let margin = slack - fraction::to_f64(&excess);
    let pass = excess <= Frac::from_integer(0) || margin >= 0.0;
    Ok(SamplingCheck { mean_local, s, slack, margin, pass })
}

/// Default list truncation for the common-error check.
pub const DEFAULT_COMMON_ERROR_LIST: usize = 24;

/// Subset cap used by the list verifiers unless overridden.
pub const DEFAULT_LIST_SUBSET_CAP: u128 = DEFAULT_SUBSET_CAP;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expander::{random_regular_bipartite, BipartiteGraph};
    use crate::gf::Field;
    use crate::linear_code::LinearCode;
    use crate::outer_code::RsCode;
    use std::collections::BTreeSet;

    fn small(seed: u64) -> AelCode {
        let g = random_regular_bipartite(12, 4, seed, 1.0, 1).unwrap();
        let inner = RsCode::new(Field::new(2, 2).unwrap(), 4, 2).unwrap().to_linear_code();
        let outer = RsCode::new(Field::new(2, 4).unwrap(), 12, 2).unwrap();
        AelCode::new(g, inner, outer, None).unwrap()
    }

    /// n = 4, d = 2, identity inner code over GF(2), RS[4,2]/GF(4): |Σ|^n = 256.
    fn tiny() -> AelCode {
        let g = random_regular_bipartite(4, 2, 11, 1.0, 1).unwrap();
        let inner = LinearCode::identity(Field::new(2, 1).unwrap(), 2).unwrap();
        let outer = RsCode::new(Field::new(2, 2).unwrap(), 4, 2).unwrap();
        AelCode::new(g, inner, outer, None).unwrap()
    }

    #[test]
    fn list_examples() {
        let a = small(1);
        let book = a.codebook(1 << 16).unwrap();
        let c = book.word(37).to_vec();
        assert_eq!(brute_force_list(&book, &ErasedWord::plain(&c), Frac::from_integer(0)).unwrap().list, vec![37]);
        assert_eq!(brute_force_list(&book, &ErasedWord::plain(&c), Frac::from_integer(1)).unwrap().list.len(), 256);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let idx: Vec<usize> = sample(&mut rng, 256, 3).into_vec();
            let words: Vec<&[u64]> = idx.iter().map(|&i| book.word(i)).collect();
            let g = plurality_center(&words).unwrap().center;
            let beta = Frac::new(2, 3) * Frac::new(1, 2);
            let inst = brute_force_list(&book, &ErasedWord::plain(&g), beta).unwrap();
            for (i, h) in book.iter().enumerate() {
                let inside = Frac::new(hamming(&g, h) as i64, 12) <= beta;
                assert_eq!(inst.list.contains(&i), inside);
            }
        }
    }

    #[test]
    fn erased_list_matches_definition() {
        let a = small(2);
        let book = a.codebook(1 << 16).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let g: Vec<u64> = (0..12).map(|_| rng.gen_range(0..a.alphabet_size())).collect();
            let erased: BTreeSet<usize> = sample(&mut rng, 12, 3).into_iter().collect();
            let gbar = ErasedWord::with_erasures(&g, &erased);
            let beta = Frac::new(rng.gen_range(0..=12), 12);
            let inst = brute_force_list(&book, &gbar, beta).unwrap();
            let expect: Vec<usize> =
                (0..256).filter(|&i| a.delta_r_erased(&gbar, book.word(i)).unwrap() <= beta).collect();
            assert_eq!(inst.list, expect);
        }
    }

    #[test]
    fn singleton_examples() {
        let a = small(3);
        let r = verify_generalized_singleton(&a, 1, Frac::new(3, 4), Frac::from_integer(0), None, 1 << 20).unwrap();
        assert!(r.pass);
        let r = verify_generalized_singleton(&a, 2, Frac::new(3, 4), Frac::new(-3, 4), None, 1 << 20).unwrap();
        assert!(!r.pass);
        assert_eq!(r.certificate.witness.as_ref().unwrap().indices.len(), 2);
        assert!(!r.hypothesis.applicable);
        assert_eq!(r.theorem_holds, None);
    }

    #[test]
    fn plurality_is_optimal_on_folded_symbols() {
        let a = tiny();
        let book = a.codebook(1 << 16).unwrap();
        let q = a.alphabet_size();
        let all_centers: Vec<Vec<u64>> = (0..q.pow(4))
            .map(|mut x| {
                (0..4)
                    .map(|_| {
                        let s = x % q;
                        x /= q;
                        s
                    })
                    .collect()
            })
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..30 {
            let j = rng.gen_range(2..=4);
            let idx = sample(&mut rng, book.size(), j).into_vec();
            let words: Vec<&[u64]> = idx.iter().map(|&i| book.word(i)).collect();
            let pc = plurality_center(&words).unwrap();
            let brute = all_centers.iter().map(|g| words.iter().map(|h| hamming(g, h)).sum::<usize>()).min().unwrap();
            assert_eq!(pc.cost(), brute);
        }
    }

    #[test]
    fn common_error_examples() {
        let g = [1u64, 2, 3, 4];
        assert_eq!(common_error_fraction(&g, &[g]), Frac::from_integer(0));
        let h = [1u64, 0, 3, 0];
        assert_eq!(common_error_fraction(&g, &[h]), Frac::new(2, 4));
        let h2 = [0u64, 0, 3, 4];
        assert_eq!(common_error_fraction(&g, &[h, h2]), Frac::new(1, 4));
    }

    #[test]
    fn common_error_bound_on_small_instance() {
        let a = small(4);
        let book = a.codebook(1 << 16).unwrap();
        let (delta0, k) = (Frac::new(3, 4), 3);
        let r = verify_singleton_on_codebook(&a, &book, k, delta0, Frac::from_integer(0), None, 1 << 24).unwrap();
        let eps = r.certificate.epsilon_min;
        let r = verify_singleton_on_codebook(&a, &book, k, delta0, eps, None, 1 << 24).unwrap();
        assert!(r.pass);
        let mut centers = adversarial_centers(&book, 10, 3, 5).unwrap();
        centers.extend(random_centers(12, a.alphabet_size(), 10, 6));
        centers.push(book.word(0).to_vec());
        let rep = verify_common_error_bound(&book, k, delta0, eps, &r, &centers, 12).unwrap();
        assert!(rep.pass(), "{:?}", rep.violations.first());
        assert!(rep.tuples_checked > 0);
        let bad = SingletonReport { pass: false, ..r.clone() };
        assert_eq!(
            verify_common_error_bound(&book, k, delta0, eps, &bad, &centers, 12),
            Err(Error::PrerequisiteNotVerified)
        );
    }

    #[test]
    fn partition_examples() {
        let a = small(5);
        let c1 = a.outer().encode(&[0, 1]).unwrap();
        let c2 = a.outer().encode(&[3, 2]).unwrap();
        let (e1, e2) = (a.encode_edges(&c1).unwrap(), a.encode_edges(&c2).unwrap());
        let p = partition_profile(&a, &[e1.clone(), e2.clone()]).unwrap();
        assert_eq!(p.nontrivial_mass, 11);
        assert_eq!(p.bound, Frac::new(11, 4));
        assert!(p.pass);
        assert_eq!(p.histogram.iter().map(|(_, c)| c).sum::<usize>(), 12);
        assert_eq!(partition_profile(&a, &[e1.clone(), e1.clone()]), Err(Error::DuplicateCodewords));
        // Three constant outer words differ at every left vertex.
        let hs: Vec<EdgeWord> =
            [1, 2, 3].iter().map(|&c| a.encode_edges(&a.outer().encode(&[c, 0]).unwrap()).unwrap()).collect();
        let p = partition_profile(&a, &hs).unwrap();
        assert_eq!(p.histogram, vec![(vec![0, 1, 2], 12)]);
    }

    #[test]
    fn partition_bound_holds_for_random_tuples() {
        let a = small(6);
        let words = a.outer_codewords(1 << 16).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let j = rng.gen_range(2..=5);
            let hs: Vec<EdgeWord> =
                sample(&mut rng, 256, j).into_iter().map(|i| a.encode_edges(&words[i]).unwrap()).collect();
            assert!(partition_profile(&a, &hs).unwrap().pass);
        }
    }

    #[test]
    fn sampling_examples() {
        let a = small(7);
        let g = ErasedWord::plain(&[0u64; 12]);
        let all: Vec<usize> = (0..12).collect();
        let c = sampling_bound_check(&a, &g, &all, 2).unwrap();
        assert_eq!(c.mean_local, Frac::from_integer(0));
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let erased: BTreeSet<usize> = sample(&mut rng, 12, 3).into_iter().collect();
        let g = ErasedWord::with_erasures(&[0u64; 12], &erased);
        let c = sampling_bound_check(&a, &g, &all, 2).unwrap();
        // L* = L: every right vertex has degree d, so the mean is exactly s.
        assert_eq!(c.mean_local, c.s);
        assert!(c.pass);
        assert!(matches!(sampling_bound_check(&a, &g, &[0], 1), Err(Error::SubsetTooSmall { .. })));

        let k12 = BipartiteGraph::complete(12).unwrap();
        let inner =
            LinearCode::new(Field::new(2, 2).unwrap(), vec![vec![1; 12], (0..12).map(|i| (i % 4) as u32).collect()])
                .unwrap();
        let outer = RsCode::new(Field::new(2, 4).unwrap(), 12, 2).unwrap();
        let b = AelCode::new(k12, inner, outer, None).unwrap();
        for l in 0..12 {
            let c = sampling_bound_check(&b, &g, &[l, (l + 1) % 12, (l + 2) % 12], 2).unwrap();
            assert_eq!(c.mean_local, c.s);
        }
    }

    #[test]
    fn subsets_enumerated_once() {
        let mut seen = BTreeSet::new();
        let mut idx = Vec::new();
        for_each_subset(6, 3, &mut idx, &mut |s| {
            assert!(seen.insert(s.to_vec()));
        });
        assert_eq!(seen.len(), 6 + 15 + 20);
    }
}
