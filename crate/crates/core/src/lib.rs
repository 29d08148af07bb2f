//! Distance-amplified (AEL) codes over bipartite expanders, with exact
//! brute-force verifiers for average-radius list decodability.
//!
//! The crate is organised bottom-up:
//!
//! * [`gf`]: arithmetic in GF(p^m).
//! * [`linear_code`], [`codebook`]: generator-matrix codes, explicit codeword lists, erased words.
//! * [`arld`], [`inner_search`]: plurality-center scans, certificates, random and folded RS inner codes.
//! * [`expander`]: regular bipartite graphs, spectral measurement, mixing-lemma checks.
//! * [`outer_code`]: Reed–Solomon outer codes with Berlekamp–Welch decoding.
//! * [`ael`]: the composed code, fold/unfold views, distance amplification.
//! * [`list_verify`]: list-decoding oracles and the tuple-level inequalities on AEL codes.
//! * [`dist_decoder`]: decoding from per-vertex distributions by threshold rounding.

pub mod ael;
pub mod arld;
pub mod codebook;
pub mod dist_decoder;
pub mod error;
pub mod expander;
pub mod fraction;
pub mod gf;
pub mod inner_search;
pub mod linalg;
pub mod linear_code;
pub mod list_verify;
pub mod outer_code;
pub mod seed;

pub use error::{Error, Result};

/// Exact fractions used for every distance and margin.
pub type Frac = num_rational::Ratio<i64>;
