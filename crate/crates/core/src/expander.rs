//! Balanced `d`-regular bipartite graphs with a fixed edge ordering.
//!
//! Edge `e = ℓ·d + i` is the `i`-th edge of left vertex `ℓ`; the `j`-th edge
//! of a right vertex `r` is the `j`-th edge incident on `r` in increasing
//! edge-index order. This yields the bijections `E ↔ L×[d] ↔ R×[d]`.

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::seed::derive_seed;
use crate::{Error, Result};

/// Inflation added to every measured `λ` before it enters an inequality.
pub const LAMBDA_SLACK: f64 = 1e-6;

/// Graphs up to this size use a dense SVD; larger ones use power iteration.
pub const DENSE_SVD_MAX: usize = 512;

/// Attempts per matching before giving up on avoiding parallel edges.
const MATCHING_ATTEMPTS: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteGraph {
    n: usize,
    d: usize,
    left_adj: Vec<Vec<usize>>,
    /// `edge_right[e] = (r, j)`.
    edge_right: Vec<(usize, usize)>,
    /// `right_edges[r][j] = e`.
    right_edges: Vec<Vec<usize>>,
    lambda: f64,
    seed: Option<u64>,
}

impl BipartiteGraph {
    /// Builds a graph from its left adjacency lists (row order is the edge
    /// ordering) and measures `λ`.
    pub fn from_left_adjacency(left_adj: Vec<Vec<usize>>, seed: Option<u64>) -> Result<Self> {
        let n = left_adj.len();
        if n == 0 {
            return Err(Error::InvalidGraph("no vertices".into()));
        }
        let d = left_adj[0].len();
        if d == 0 || d > n {
            return Err(Error::InvalidGraph(format!("degree {d} not in 1..={n}")));
        }
        let mut right_edges = vec![Vec::with_capacity(d); n];
        let mut edge_right = Vec::with_capacity(n * d);
        for (l, row) in left_adj.iter().enumerate() {
            if row.len() != d {
                return Err(Error::InvalidGraph(format!("left vertex {l} has degree {}", row.len())));
            }
            let mut seen = row.clone();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != d {
                return Err(Error::InvalidGraph(format!("parallel edges at left vertex {l}")));
            }
            for (i, &r) in row.iter().enumerate() {
                if r >= n {
                    return Err(Error::InvalidGraph(format!("right vertex {r} out of range")));
                }
                edge_right.push((r, right_edges[r].len()));
                right_edges[r].push(l * d + i);
            }
        }
        if let Some(r) = right_edges.iter().position(|e| e.len() != d) {
            return Err(Error::InvalidGraph(format!("right vertex {r} has degree {}", right_edges[r].len())));
        }
        let mut g = Self { n, d, left_adj, edge_right, right_edges, lambda: 0.0, seed };
        g.lambda = second_singular_value(&g)?;
        Ok(g)
    }

    /// `K_{n,n}` with left vertex `ℓ`'s `i`-th edge going to right vertex `i`.
    pub fn complete(n: usize) -> Result<Self> {
        Self::from_left_adjacency((0..n).map(|_| (0..n).collect()).collect(), None)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn edge_count(&self) -> usize {
        self.n * self.d
    }

    pub fn left_adjacency(&self) -> &[Vec<usize>] {
        &self.left_adj
    }

    pub fn left_neighbors(&self, l: usize) -> &[usize] {
        &self.left_adj[l]
    }

    /// Edge indices at right vertex `r`, in its own ordering.
    pub fn right_edges(&self, r: usize) -> &[usize] {
        &self.right_edges[r]
    }

    /// Measured second singular value of the normalized biadjacency matrix.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `λ̂ + 10⁻⁶`: the value every floating-point inequality uses.
    pub fn lambda_upper(&self) -> f64 {
        self.lambda + LAMBDA_SLACK
    }

    /// `K_{n,n}` is known to have `λ = 0` exactly.
    pub fn is_complete(&self) -> bool {
        self.d == self.n
    }

    /// Upper bound on `λ` for exact hypothesis checks: `0` for `K_{n,n}`,
    /// otherwise [`Self::lambda_upper`].
    pub fn spectral_bound(&self) -> f64 {
        if self.is_complete() {
            0.0
        } else {
            self.lambda_upper()
        }
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn edge_index(&self, l: usize, i: usize) -> usize {
        l * self.d + i
    }

    pub fn edge_from_right(&self, r: usize, j: usize) -> usize {
        self.right_edges[r][j]
    }

    /// `(ℓ, i)` for edge `e`.
    pub fn left_view(&self, e: usize) -> (usize, usize) {
        (e / self.d, e % self.d)
    }

    /// `(r, j)` for edge `e`.
    pub fn right_view(&self, e: usize) -> (usize, usize) {
        self.edge_right[e]
    }

    /// Right endpoint of edge `e`.
    pub fn right_endpoint(&self, e: usize) -> usize {
        self.edge_right[e].0
    }

    /// Number of edges between left set `s` and right set `t` (as indicators).
    pub fn edges_between(&self, s: &[bool], t: &[bool]) -> usize {
        self.left_adj
            .iter()
            .enumerate()
            .filter(|(l, _)| s[*l])
            .map(|(_, row)| row.iter().filter(|&&r| t[r]).count())
            .sum()
    }

    /// Dense `n × n` biadjacency matrix scaled by `1/d`.
    pub fn normalized_biadjacency(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.n, self.n);
        let w = 1.0 / self.d as f64;
        for (l, row) in self.left_adj.iter().enumerate() {
            for &r in row {
                a[(l, r)] += w;
            }
        }
        a
    }
}

/// Edge bijections as explicit tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeBijections {
    /// `left[e] = (ℓ, i)`.
    pub left: Vec<(usize, usize)>,
    /// `right[e] = (r, j)`.
    pub right: Vec<(usize, usize)>,
}

pub fn edge_bijections(g: &BipartiteGraph) -> EdgeBijections {
    let left = (0..g.edge_count()).map(|e| g.left_view(e)).collect();
    EdgeBijections { left, right: g.edge_right.clone() }
}

/// `σ₂(A_G)/d`: dense SVD for `n ≤ 512`, power iteration otherwise.
pub fn second_singular_value(g: &BipartiteGraph) -> Result<f64> {
    let value = if g.n <= DENSE_SVD_MAX { second_singular_value_dense(g) } else { second_singular_value_power(g)? };
    Ok(value.clamp(0.0, 1.0))
}

pub fn second_singular_value_dense(g: &BipartiteGraph) -> f64 {
    if g.n < 2 {
        return 0.0;
    }
    let mut sv: Vec<f64> = g.normalized_biadjacency().singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv[1]
}

/// Power iteration on `B Bᵀ - J/n` with `B = A/d`; its top eigenvalue is `σ₂²`.
pub fn second_singular_value_power(g: &BipartiteGraph) -> Result<f64> {
    let n = g.n;
    if n < 2 {
        return Ok(0.0);
    }
    let d = g.d as f64;
    let apply = |x: &DVector<f64>| -> DVector<f64> {
        // y = Bᵀ x (right side), then z = B y, minus the mean component.
        let mut y = DVector::<f64>::zeros(n);
        for (l, row) in g.left_adj.iter().enumerate() {
            for &r in row {
                y[r] += x[l] / d;
            }
        }
        let mut z = DVector::<f64>::zeros(n);
        for (l, row) in g.left_adj.iter().enumerate() {
            z[l] = row.iter().map(|&r| y[r]).sum::<f64>() / d;
        }
        let mean = x.sum() / n as f64;
        z.add_scalar_mut(-mean);
        z
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut x = DVector::from_fn(n, |_, _| rand::Rng::gen_range(&mut rng, -1.0..1.0));
    let mean = x.sum() / n as f64;
    x.add_scalar_mut(-mean);
    x /= x.norm();
    let mut prev = f64::INFINITY;
    for _ in 0..200_000 {
        let mut y = apply(&x);
        let mean = y.sum() / n as f64;
        y.add_scalar_mut(-mean);
        let rayleigh = x.dot(&y);
        let norm = y.norm();
        if norm == 0.0 {
            return Ok(0.0);
        }
        x = y / norm;
        if (rayleigh - prev).abs() < 1e-15 {
            return Ok(rayleigh.max(0.0).sqrt());
        }
        prev = rayleigh;
    }
    Err(Error::ConvergenceFailure)
}

/// Union of `d` uniformly random perfect matchings, no parallel edges,
/// accepted once the measured `λ` is at most `lambda_target`.
pub fn random_regular_bipartite(
    n: usize,
    d: usize,
    seed: u64,
    lambda_target: f64,
    max_tries: usize,
) -> Result<BipartiteGraph> {
    if d == 0 || d > n {
        return Err(Error::InvalidGraph(format!("degree {d} not in 1..={n}")));
    }
    if d == n {
        let g = BipartiteGraph::complete(n)?;
        return if lambda_target >= 0.0 {
            Ok(BipartiteGraph { seed: Some(seed), ..g })
        } else {
            Err(Error::TargetUnreachable(0))
        };
    }
    for attempt in 0..max_tries {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &format!("graph-try-{attempt}")));
        let mut used = vec![vec![false; n]; n];
        let mut left_adj = vec![Vec::with_capacity(d); n];
        for _ in 0..d {
            let mut perm: Vec<usize> = (0..n).collect();
            let mut ok = false;
            for _ in 0..MATCHING_ATTEMPTS {
                perm.shuffle(&mut rng);
                if perm.iter().enumerate().all(|(l, &r)| !used[l][r]) {
                    ok = true;
                    break;
                }
            }
            if !ok {
                return Err(Error::ParallelEdgeExhaustion);
            }
            for (l, &r) in perm.iter().enumerate() {
                used[l][r] = true;
                left_adj[l].push(r);
            }
        }
        let g = BipartiteGraph::from_left_adjacency(left_adj, Some(seed))?;
        log::debug!("graph try {attempt}: lambda = {:.6}", g.lambda());
        if g.lambda() <= lambda_target {
            return Ok(g);
        }
    }
    Err(Error::TargetUnreachable(max_tries))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmlCheck {
    pub deviation: f64,
    pub bound: f64,
    pub pass: bool,
}

/// `|E_{(ℓ,r)∈E}[f(ℓ)g(r)] - E[f]E[g]| ≤ (λ̂ + 10⁻⁶)·‖f‖₂‖g‖₂` with `‖f‖₂ = E[f²]^{1/2}`.
pub fn verify_eml(g: &BipartiteGraph, f: &[f64], h: &[f64]) -> Result<EmlCheck> {
    let n = g.n;
    for v in [f, h] {
        if v.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: v.len() });
        }
    }
    let edge_mean =
        g.left_adj.iter().enumerate().map(|(l, row)| row.iter().map(|&r| f[l] * h[r]).sum::<f64>()).sum::<f64>()
            / g.edge_count() as f64;
    let mean = |v: &[f64]| v.iter().sum::<f64>() / n as f64;
    let norm = |v: &[f64]| (v.iter().map(|x| x * x).sum::<f64>() / n as f64).sqrt();
    let deviation = (edge_mean - mean(f) * mean(h)).abs();
    let bound = g.lambda_upper() * norm(f) * norm(h);
    Ok(EmlCheck { deviation, bound, pass: deviation <= bound })
}

/// Set form: `|E(S,T) - d|S||T|/n| ≤ (λ̂ + 10⁻⁶)·d·√(|S||T|)`, with the
/// left side computed from the integer edge count.
pub fn verify_eml_sets(g: &BipartiteGraph, s: &[bool], t: &[bool]) -> Result<EmlCheck> {
    let n = g.n;
    for v in [s, t] {
        if v.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: v.len() });
        }
    }
    let e = g.edges_between(s, t) as i128;
    let ss = s.iter().filter(|&&x| x).count() as i128;
    let ts = t.iter().filter(|&&x| x).count() as i128;
    // n·|E(S,T) - d|S||T|/n| is an integer.
    let scaled = (n as i128 * e - g.d as i128 * ss * ts).abs();
    let deviation = scaled as f64 / n as f64;
    let bound = g.lambda_upper() * g.d as f64 * ((ss * ts) as f64).sqrt();
    Ok(EmlCheck { deviation, bound, pass: deviation <= bound })
}
