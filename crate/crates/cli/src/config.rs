//! Experiment configuration for `ael run`.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use ael_core::fraction::parse_frac;
use ael_core::Frac;

use crate::artifacts::FORMAT_VERSION;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub version: u32,
    pub name: String,
    pub seed: u64,
    pub inner: InnerConfig,
    pub graph: GraphConfig,
    pub outer: OuterConfig,
    #[serde(default)]
    pub verify: VerifyConfig,
    #[serde(default)]
    pub trials: TrialConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InnerKind {
    /// Rejection search over random generator matrices.
    Random,
    /// Reed–Solomon evaluation code at points `0..len`.
    Rs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InnerConfig {
    pub p: u32,
    pub m: u32,
    pub kind: InnerKind,
    pub len: usize,
    pub dim: usize,
    pub k: usize,
    pub delta0: String,
    #[serde(default)]
    pub epsilon_target: Option<String>,
    #[serde(default = "default_tries")]
    pub max_tries: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphConfig {
    pub n: usize,
    pub d: usize,
    #[serde(default)]
    pub complete: bool,
    #[serde(default = "default_lambda")]
    pub lambda_target: f64,
    #[serde(default = "default_tries")]
    pub max_tries: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OuterConfig {
    pub p: u32,
    pub m: u32,
    pub n: usize,
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    #[serde(default = "yes")]
    pub amplification: bool,
    #[serde(default = "yes")]
    pub singleton: bool,
    #[serde(default = "yes")]
    pub common_error: bool,
    /// `ε` for the AEL check; defaults to twice the inner `ε_min`.
    #[serde(default)]
    pub epsilon: Option<String>,
    #[serde(default = "default_enumeration_cap")]
    pub enumeration_cap: u64,
    #[serde(default = "default_subset_cap")]
    pub subset_cap: u64,
    #[serde(default = "default_list")]
    pub list_size: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            amplification: true,
            singleton: true,
            common_error: true,
            epsilon: None,
            enumeration_cap: default_enumeration_cap(),
            subset_cap: default_subset_cap(),
            list_size: default_list(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrialConfig {
    #[serde(default = "d500")]
    pub outer_decode: usize,
    #[serde(default = "d100")]
    pub ensembles: usize,
    #[serde(default = "d50")]
    pub adversarial_centers: usize,
    #[serde(default = "d200")]
    pub random_centers: usize,
    #[serde(default = "d1000")]
    pub eml_pairs: usize,
    #[serde(default = "d20")]
    pub corruption_trials: usize,
}

impl Default for TrialConfig {
    fn default() -> Self {
        Self {
            outer_decode: 500,
            ensembles: 100,
            adversarial_centers: 50,
            random_centers: 200,
            eml_pairs: 1000,
            corruption_trials: 20,
        }
    }
}

fn yes() -> bool {
    true
}
fn default_tries() -> usize {
    100
}
fn default_lambda() -> f64 {
    1.0
}
fn default_enumeration_cap() -> u64 {
    1 << 24
}
fn default_subset_cap() -> u64 {
    200_000_000
}
fn default_list() -> usize {
    ael_core::list_verify::DEFAULT_COMMON_ERROR_LIST
}
fn d20() -> usize {
    20
}
fn d50() -> usize {
    50
}
fn d100() -> usize {
    100
}
fn d200() -> usize {
    200
}
fn d500() -> usize {
    500
}
fn d1000() -> usize {
    1000
}

/// Parsed fractions of a validated config.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fractions {
    pub delta0: Frac,
    pub epsilon_target: Option<Frac>,
    pub epsilon: Option<Frac>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let cfg: Self = toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Cross-checks dimensions before anything is built.
    pub fn validate(&self) -> Result<Fractions> {
        if self.version != FORMAT_VERSION {
            bail!("config version {} is not supported (expected {FORMAT_VERSION})", self.version);
        }
        let (i, g, o) = (&self.inner, &self.graph, &self.outer);
        if g.d != i.len {
            bail!("graph degree {} differs from inner block length {}", g.d, i.len);
        }
        if g.n != o.n {
            bail!("graph size {} differs from outer block length {}", g.n, o.n);
        }
        if g.complete && g.d != g.n {
            bail!("a complete graph needs d = n, got d={}, n={}", g.d, g.n);
        }
        if i.dim == 0 || i.dim > i.len || o.k == 0 || o.k > o.n {
            bail!("dimensions out of range");
        }
        let q_in = (i.p as u128).checked_pow(i.m).context("inner field too large")?;
        let q_out = (o.p as u128).checked_pow(o.m).context("outer field too large")?;
        if q_in.checked_pow(i.dim as u32) != Some(q_out) {
            bail!("outer alphabet GF({}^{}) must have |C_in| = {q_in}^{} symbols", o.p, o.m, i.dim);
        }
        if i.kind == InnerKind::Random && i.epsilon_target.is_none() {
            bail!("random inner search needs inner.epsilon_target");
        }
        let parse = |s: &str| parse_frac(s).with_context(|| format!("bad fraction {s:?}"));
        Ok(Fractions {
            delta0: parse(&i.delta0)?,
            epsilon_target: i.epsilon_target.as_deref().map(parse).transpose()?,
            epsilon: self.verify.epsilon.as_deref().map(parse).transpose()?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
version = 1
name = "small"
seed = 7

[inner]
p = 2
m = 2
kind = "rs"
len = 4
dim = 2
k = 3
delta0 = "3/4"

[graph]
n = 12
d = 4
lambda_target = 0.95

[outer]
p = 2
m = 4
n = 12
k = 2
"#;

    #[test]
    fn parses_and_validates() {
        let cfg: ExperimentConfig = toml::from_str(SAMPLE).unwrap();
        let f = cfg.validate().unwrap();
        assert_eq!(f.delta0, Frac::new(3, 4));
        assert_eq!(cfg.trials, TrialConfig::default());
        let back: ExperimentConfig = toml::from_str(&toml::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn rejects_unknown_keys_and_mismatches() {
        assert!(toml::from_str::<ExperimentConfig>(&format!("{SAMPLE}\ntypo = 1\n")).is_err());
        let mut cfg: ExperimentConfig = toml::from_str(SAMPLE).unwrap();
        cfg.graph.d = 5;
        assert!(cfg.validate().is_err());
        let mut cfg: ExperimentConfig = toml::from_str(SAMPLE).unwrap();
        cfg.outer.m = 3;
        assert!(cfg.validate().is_err());
        let mut cfg: ExperimentConfig = toml::from_str(SAMPLE).unwrap();
        cfg.version = 2;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn shipped_configs_validate() {
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
        for name in ["small.toml", "complete.toml"] {
            ExperimentConfig::load(&dir.join(name)).unwrap();
        }
    }
}
