//! Decoding from per-vertex distributions over inner codewords by threshold
//! rounding, and AEL unique decoding built on it.
//!
//! A shared threshold `θ ∈ [0,1)` picks, at every left vertex, the inner
//! codeword whose prefix-sum interval contains `θ`. The rounded word only
//! changes at interval endpoints, so trying every endpoint covers all `θ`.

use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::ael::AelCode;
use crate::codebook::hamming;
use crate::{Error, Frac, Result};

/// Per left vertex, exact weights over the inner codewords in message-index order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InnerDistributionEnsemble {
    weights: Vec<Vec<Frac>>,
}

impl InnerDistributionEnsemble {
    pub fn new(weights: Vec<Vec<Frac>>) -> Result<Self> {
        let m = weights.first().map_or(0, Vec::len);
        if m == 0 {
            return Err(Error::InvalidDistribution("empty ensemble".into()));
        }
        for (l, w) in weights.iter().enumerate() {
            if w.len() != m {
                return Err(Error::InvalidDistribution(format!("vertex {l} has {} weights, expected {m}", w.len())));
            }
            if w.iter().any(|x| *x < Frac::from_integer(0)) {
                return Err(Error::InvalidDistribution(format!("negative weight at vertex {l}")));
            }
            if w.iter().sum::<Frac>() != Frac::from_integer(1) {
                return Err(Error::InvalidDistribution(format!("weights at vertex {l} do not sum to 1")));
            }
        }
        Ok(Self { weights })
    }

    /// Point masses on the given inner codeword indices.
    pub fn point_masses(indices: &[u64], m: usize) -> Result<Self> {
        let weights =
            indices.iter().map(|&i| (0..m).map(|j| Frac::from_integer((j as u64 == i) as i64)).collect()).collect();
        Self::new(weights)
    }

    pub fn weights(&self) -> &[Vec<Frac>] {
        &self.weights
    }

    pub fn vertices(&self) -> usize {
        self.weights.len()
    }

    pub fn support_size(&self) -> usize {
        self.weights[0].len()
    }

    /// Every prefix-sum endpoint in `[0,1)`, ascending.
    pub fn thresholds(&self) -> Vec<Frac> {
        let one = Frac::from_integer(1);
        let mut set = BTreeSet::new();
        for w in &self.weights {
            let mut acc = Frac::from_integer(0);
            set.insert(acc);
            for x in w {
                acc += *x;
                if acc < one {
                    set.insert(acc);
                }
            }
        }
        set.into_iter().collect()
    }

    /// Index of the interval containing `theta` at each vertex.
    pub fn round_at(&self, theta: Frac) -> Vec<u64> {
        self.weights
            .iter()
            .map(|w| {
                let mut acc = Frac::from_integer(0);
                for (i, x) in w.iter().enumerate() {
                    acc += *x;
                    if theta < acc {
                        return i as u64;
                    }
                }
                // Only reachable for θ ≥ 1: the last positive-weight index.
                w.iter().rposition(|x| *x > Frac::from_integer(0)).unwrap_or(0) as u64
            })
            .collect()
    }

    /// `E_ℓ Pr_{f∼D_ℓ}[f ≠ target_ℓ]`.
    pub fn expected_disagreement(&self, target: &[u64]) -> Frac {
        let one = Frac::from_integer(1);
        let total: Frac = self.weights.iter().zip(target).map(|(w, &t)| one - w[t as usize]).sum();
        total / Frac::from_integer(self.weights.len() as i64)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    pub message: Vec<u32>,
    pub outer_codeword: Vec<u32>,
    /// Right-folded AEL codeword.
    pub codeword: Vec<u64>,
    /// Smallest threshold that produced it.
    pub threshold: Frac,
    pub expected_disagreement: Frac,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeOutcome {
    /// `None` is a decoding failure.
    pub decoded: Option<Decoded>,
    pub thresholds_tried: usize,
    /// More than one codeword passed the guarantee check.
    pub ambiguous: bool,
}

/// Inner codeword index for each left vertex of an outer codeword.
fn left_indices(a: &AelCode, outer_word: &[u32]) -> Vec<u64> {
    outer_word.iter().map(|&s| a.phi()[s as usize]).collect()
}

/// Threshold rounding, outer unique decoding at `δ_out^dec`, then the
/// guarantee check `E_ℓ Pr[f ≠ h_ℓ] ≤ δ_out^dec`.
pub fn decode_from_distributions(a: &AelCode, ens: &InnerDistributionEnsemble) -> Result<DecodeOutcome> {
    if ens.vertices() != a.len() {
        return Err(Error::LengthMismatch { expected: a.len(), got: ens.vertices() });
    }
    if ens.support_size() != a.inner_words().len() {
        return Err(Error::LengthMismatch { expected: a.inner_words().len(), got: ens.support_size() });
    }
    let radius = a.outer().decode_radius();
    let thresholds = ens.thresholds();
    // (message, outer codeword, expected disagreement) per threshold that decodes.
    type Attempt = Option<(Vec<u32>, Vec<u32>, Frac)>;
    let attempts: Vec<Attempt> = thresholds
        .par_iter()
        .map(|&theta| -> Result<_> {
            let rounded: Vec<u32> = ens.round_at(theta).into_iter().map(|i| a.phi_inverse(i)).collect();
            let Some(out) = a.outer().decode(&rounded, radius)? else {
                return Ok(None);
            };
            let expected = ens.expected_disagreement(&left_indices(a, &out.codeword));
            Ok((expected <= radius).then_some((out.message, out.codeword, expected)))
        })
        .collect::<Result<_>>()?;
    let mut first: Option<Decoded> = None;
    let mut distinct = BTreeSet::new();
    for (theta, hit) in thresholds.iter().zip(attempts) {
        let Some((message, outer_codeword, expected)) = hit else { continue };
        distinct.insert(outer_codeword.clone());
        if first.is_none() {
            let codeword = a.encode(&outer_codeword)?;
            first =
                Some(Decoded { message, outer_codeword, codeword, threshold: *theta, expected_disagreement: expected });
        }
    }
    let ambiguous = distinct.len() > 1;
    if ambiguous {
        log::warn!("{} codewords pass the guarantee check; returning the lowest-threshold one", distinct.len());
    }
    Ok(DecodeOutcome { decoded: first, thresholds_tried: thresholds.len(), ambiguous })
}

/// Uniform distribution over the inner codewords nearest each left view.
pub fn local_views_to_distributions(a: &AelCode, g: &[u64]) -> Result<InnerDistributionEnsemble> {
    let w = a.unfold_right(g)?;
    let weights = (0..a.len())
        .map(|l| {
            let view = a.left_view(&w, l);
            let dists: Vec<usize> = a.inner_words().iter().map(|c| hamming(view, c)).collect();
            let best = *dists.iter().min().expect("inner code is nonempty");
            let ties = dists.iter().filter(|&&x| x == best).count() as i64;
            dists.iter().map(|&x| if x == best { Frac::new(1, ties) } else { Frac::from_integer(0) }).collect()
        })
        .collect();
    InnerDistributionEnsemble::new(weights)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniqueDecodeOutcome {
    pub outcome: DecodeOutcome,
    /// `Δ_R(g, h)` for the returned codeword.
    pub distance: Option<Frac>,
}

pub fn ael_unique_decode(a: &AelCode, g: &[u64]) -> Result<UniqueDecodeOutcome> {
    let ens = local_views_to_distributions(a, g)?;
    let outcome = decode_from_distributions(a, &ens)?;
    let distance = outcome.decoded.as_ref().map(|d| Frac::new(hamming(g, &d.codeword) as i64, g.len() as i64));
    Ok(UniqueDecodeOutcome { outcome, distance })
}

/// A random ensemble whose expected disagreement with the planted outer
/// codeword is at most `budget`, built in units of `1/granularity` per vertex.
pub fn planted_ensemble(
    a: &AelCode,
    outer_word: &[u32],
    budget: Frac,
    granularity: u32,
    seed: u64,
) -> Result<InnerDistributionEnsemble> {
    let n = a.len();
    if outer_word.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: outer_word.len() });
    }
    let m = a.inner_words().len();
    if m < 2 || granularity == 0 {
        return Err(Error::InvalidParameter("need at least two inner codewords and positive granularity".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gran = granularity as i64;
    let total = (budget * Frac::from_integer(n as i64 * gran)).floor().to_integer().max(0) as usize;
    let mut units = vec![0i64; n];
    let mut remaining = rng.gen_range(0..=total.min(n * granularity as usize));
    while remaining > 0 {
        let l = rng.gen_range(0..n);
        if units[l] < gran {
            units[l] += 1;
            remaining -= 1;
        }
    }
    let target = left_indices(a, outer_word);
    let weights = (0..n)
        .map(|l| {
            let mut w = vec![0i64; m];
            w[target[l] as usize] = gran - units[l];
            let others: Vec<usize> = (0..m).filter(|&i| i as u64 != target[l]).collect();
            let spread = sample(&mut rng, others.len(), others.len().min(3)).into_vec();
            for _ in 0..units[l] {
                w[others[spread[rng.gen_range(0..spread.len())]]] += 1;
            }
            w.into_iter().map(|x| Frac::new(x, gran)).collect()
        })
        .collect();
    InnerDistributionEnsemble::new(weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expander::random_regular_bipartite;
    use crate::gf::Field;
    use crate::outer_code::RsCode;

    fn small(seed: u64) -> AelCode {
        let g = random_regular_bipartite(12, 4, seed, 1.0, 1).unwrap();
        let inner = RsCode::new(Field::new(2, 2).unwrap(), 4, 2).unwrap().to_linear_code();
        let outer = RsCode::new(Field::new(2, 4).unwrap(), 12, 2).unwrap();
        AelCode::new(g, inner, outer, None).unwrap()
    }

    #[test]
    fn ensemble_validation() {
        let half = Frac::new(1, 2);
        assert!(InnerDistributionEnsemble::new(vec![vec![half, half]]).is_ok());
        assert!(InnerDistributionEnsemble::new(vec![vec![half, Frac::new(1, 3)]]).is_err());
        assert!(InnerDistributionEnsemble::new(vec![vec![Frac::new(3, 2), -half]]).is_err());
        assert!(InnerDistributionEnsemble::new(vec![vec![half, half], vec![Frac::from_integer(1)]]).is_err());
        let e = InnerDistributionEnsemble::new(vec![vec![Frac::new(1, 3), Frac::from_integer(0), Frac::new(2, 3)]])
            .unwrap();
        assert_eq!(e.thresholds(), vec![Frac::from_integer(0), Frac::new(1, 3)]);
        assert_eq!(e.round_at(Frac::new(1, 3)), vec![2]);
        assert_eq!(e.round_at(Frac::new(1, 4)), vec![0]);
    }

    #[test]
    fn point_mass_decodes() {
        let a = small(1);
        let c = a.outer().encode(&[5, 9]).unwrap();
        let ens = InnerDistributionEnsemble::point_masses(&left_indices(&a, &c), 16).unwrap();
        let out = decode_from_distributions(&a, &ens).unwrap();
        let d = out.decoded.unwrap();
        assert_eq!(d.outer_codeword, c);
        assert_eq!(d.expected_disagreement, Frac::from_integer(0));
        assert!(!out.ambiguous);
    }

    #[test]
    fn planted_ensembles_are_recovered() {
        let a = small(2);
        let radius = a.outer().decode_radius();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for seed in 0..40 {
            let msg = vec![rng.gen_range(0..16), rng.gen_range(0..16)];
            let c = a.outer().encode(&msg).unwrap();
            let ens = planted_ensemble(&a, &c, radius, 12, seed).unwrap();
            assert!(ens.expected_disagreement(&left_indices(&a, &c)) <= radius);
            let d = decode_from_distributions(&a, &ens).unwrap().decoded.unwrap();
            assert_eq!(d.message, msg);
        }
    }

    #[test]
    fn equidistant_mixture_fails() {
        let a = small(3);
        let c1 = a.outer().encode(&[0, 1]).unwrap();
        let c2 = a.outer().encode(&[3, 2]).unwrap();
        let (i1, i2) = (left_indices(&a, &c1), left_indices(&a, &c2));
        let weights = (0..12)
            .map(|l| {
                let mut w = vec![Frac::from_integer(0); 16];
                w[i1[l] as usize] += Frac::new(1, 2);
                w[i2[l] as usize] += Frac::new(1, 2);
                w
            })
            .collect();
        let ens = InnerDistributionEnsemble::new(weights).unwrap();
        assert_eq!(ens.expected_disagreement(&i1), Frac::new(11, 24));
        assert!(decode_from_distributions(&a, &ens).unwrap().decoded.is_none());
    }

    #[test]
    fn endpoint_thresholds_cover_all_thetas() {
        let a = small(4);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for seed in 0..10 {
            let c = a.outer().encode(&[rng.gen_range(0..16), rng.gen_range(0..16)]).unwrap();
            let ens = planted_ensemble(&a, &c, Frac::new(1, 2), 6, seed).unwrap();
            let at_endpoints: BTreeSet<Vec<u64>> = ens.thresholds().into_iter().map(|t| ens.round_at(t)).collect();
            for _ in 0..1000 {
                let theta = Frac::new(rng.gen_range(0..1_000_000), 1_000_000);
                assert!(at_endpoints.contains(&ens.round_at(theta)));
            }
        }
    }

    #[test]
    fn local_views_examples() {
        let a = small(5);
        let c = a.outer().encode(&[2, 3]).unwrap();
        let g = a.encode(&c).unwrap();
        let ens = local_views_to_distributions(&a, &g).unwrap();
        assert_eq!(ens, InnerDistributionEnsemble::point_masses(&left_indices(&a, &c), 16).unwrap());
        // One edge flip: inner distance 3 keeps every view nearest its codeword.
        let mut w = a.unfold_right(&g).unwrap().symbols().to_vec();
        w[5] ^= 1;
        let g1 = a.fold_right(&crate::ael::EdgeWord::new(w));
        assert_eq!(local_views_to_distributions(&a, &g1).unwrap(), ens);
        // A view at distance 2 from two inner codewords splits evenly.
        let mut w = a.unfold_right(&g).unwrap().symbols().to_vec();
        let other = &a.inner_words()[1];
        let base = &a.inner_words()[a.phi()[c[0] as usize] as usize];
        let diff: Vec<usize> = (0..4).filter(|&i| base[i] != other[i]).collect();
        if diff.len() == 4 {
            w[diff[0]] = other[diff[0]];
            w[diff[1]] = other[diff[1]];
            let g2 = a.fold_right(&crate::ael::EdgeWord::new(w));
            let e = local_views_to_distributions(&a, &g2).unwrap();
            let nz: Vec<Frac> = e.weights()[0].iter().copied().filter(|x| *x > Frac::from_integer(0)).collect();
            assert!(nz.len() >= 2 && nz.iter().all(|&x| x == Frac::new(1, nz.len() as i64)));
        }
    }

    #[test]
    fn unique_decoding_examples() {
        let a = small(6);
        let c = a.outer().encode(&[7, 1]).unwrap();
        let g = a.encode(&c).unwrap();
        let out = ael_unique_decode(&a, &g).unwrap();
        assert_eq!(out.distance, Some(Frac::from_integer(0)));
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let mut y = g.clone();
            for r in sample(&mut rng, 12, 2) {
                y[r] = rng.gen_range(0..a.alphabet_size());
            }
            let out = ael_unique_decode(&a, &y).unwrap();
            assert_eq!(out.outcome.decoded.unwrap().outer_codeword, c);
        }
    }

    #[test]
    fn plurality_of_far_codewords_fails() {
        let a = small(6);
        // Constant outer words are pairwise at distance 1 on the left.
        let words: Vec<Vec<u64>> = [1, 2, 3].iter().map(|&c| a.encode_message(&[c, 0]).unwrap()).collect();
        let g = crate::arld::plurality_center(&words).unwrap().center;
        let out = ael_unique_decode(&a, &g).unwrap();
        assert!(out.outcome.decoded.is_none(), "{:?}", out.distance);
    }

    #[test]
    fn returned_codewords_pass_the_guarantee() {
        let a = small(7);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..30 {
            let y: Vec<u64> = (0..12).map(|_| rng.gen_range(0..a.alphabet_size())).collect();
            let ens = local_views_to_distributions(&a, &y).unwrap();
            if let Some(d) = decode_from_distributions(&a, &ens).unwrap().decoded {
                assert!(d.expected_disagreement <= a.outer().decode_radius());
                assert_eq!(a.encode(&d.outer_codeword).unwrap(), d.codeword);
            }
        }
    }
}
