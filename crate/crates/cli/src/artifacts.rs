//! On-disk formats. Every artifact is TOML with a `version` field and a first
//! comment line carrying the wall-clock time and runtime; that line is the
//! only part allowed to differ between reruns.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use ael_core::ael::AelCode;
use ael_core::expander::BipartiteGraph;
use ael_core::fraction::{self, serde_frac};
use ael_core::gf::{Field, FieldRecord};
use ael_core::inner_search::{ArldCertificate, FoldedRsCode};
use ael_core::linear_code::{ErasedWord, LinearCode};
use ael_core::outer_code::RsCode;
use ael_core::Frac;

pub const FORMAT_VERSION: u32 = 1;

/// Prefix of the header line excluded from determinism comparisons.
pub const HEADER_PREFIX: &str = "# generated";

pub fn save<T: Serialize>(path: &Path, value: &T, runtime_ms: u128) -> Result<()> {
    let body = toml::to_string(value).with_context(|| format!("serializing {}", path.display()))?;
    let now = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, format!("{HEADER_PREFIX} at={now} runtime_ms={runtime_ms}\n{body}"))
        .with_context(|| format!("writing {}", path.display()))
}

pub fn load<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// File contents without the header line.
pub fn strip_header(text: &str) -> String {
    text.lines().filter(|l| !l.starts_with(HEADER_PREFIX)).map(|l| format!("{l}\n")).collect()
}

fn check_version(v: u32, path: &Path) -> Result<()> {
    if v != FORMAT_VERSION {
        bail!("{}: unsupported version {v}", path.display());
    }
    Ok(())
}

/// Seeds derived by hashing span all of `u64`, which TOML integers cannot hold.
mod hex_seed {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &u64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{v:#018x}"))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u64, D::Error> {
        let s = String::deserialize(d)?;
        u64::from_str_radix(s.trim_start_matches("0x"), 16).map_err(serde::de::Error::custom)
    }
}

mod hex_opt_seed {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<u64>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => super::hex_seed::serialize(v, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<u64>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| u64::from_str_radix(s.trim_start_matches("0x"), 16).map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchProvenance {
    pub root_seed: u64,
    pub attempt: usize,
    #[serde(with = "hex_seed")]
    pub attempt_seed: u64,
}

/// Generator-matrix code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearCodeFile {
    pub version: u32,
    pub field: FieldRecord,
    pub generator: Vec<Vec<u32>>,
    #[serde(default)]
    pub search: Option<SearchProvenance>,
}

impl LinearCodeFile {
    pub fn from_code(code: &LinearCode, search: Option<SearchProvenance>) -> Self {
        Self { version: FORMAT_VERSION, field: code.field().record(), generator: code.generator().to_vec(), search }
    }

    pub fn load_code(path: &Path) -> Result<LinearCode> {
        let f: Self = load(path)?;
        check_version(f.version, path)?;
        Ok(LinearCode::new(Field::from_record(&f.field)?, f.generator)?)
    }
}

/// Reed–Solomon outer code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OuterCodeFile {
    pub version: u32,
    pub field: FieldRecord,
    pub k: usize,
    pub points: Vec<u32>,
}

impl OuterCodeFile {
    pub fn from_code(code: &RsCode) -> Self {
        Self { version: FORMAT_VERSION, field: code.field().record(), k: code.dim(), points: code.points().to_vec() }
    }

    pub fn load_code(path: &Path) -> Result<RsCode> {
        let f: Self = load(path)?;
        check_version(f.version, path)?;
        Ok(RsCode::with_points(Field::from_record(&f.field)?, f.k, f.points)?)
    }
}

/// Folded Reed–Solomon code with the results of its construction checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrsFile {
    pub version: u32,
    pub field: FieldRecord,
    pub fold: usize,
    #[serde(with = "serde_frac")]
    pub rate: Frac,
    pub gamma: u32,
    pub alphas: Vec<u32>,
    pub appropriate: bool,
    #[serde(with = "serde_frac")]
    pub min_distance: Frac,
}

impl FrsFile {
    pub fn load_code(path: &Path) -> Result<FoldedRsCode> {
        let f: Self = load(path)?;
        check_version(f.version, path)?;
        let field = Field::from_record(&f.field)?;
        Ok(FoldedRsCode::new(field, f.fold, f.alphas.len(), f.rate, Some(f.alphas))?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub version: u32,
    pub n: usize,
    pub d: usize,
    /// Row order is the edge ordering.
    pub left_adj: Vec<Vec<usize>>,
    pub lambda: f64,
    #[serde(default, with = "hex_opt_seed", skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl GraphFile {
    pub fn from_graph(g: &BipartiteGraph) -> Self {
        Self {
            version: FORMAT_VERSION,
            n: g.n(),
            d: g.degree(),
            left_adj: g.left_adjacency().to_vec(),
            lambda: g.lambda(),
            seed: g.seed(),
        }
    }

    pub fn load_graph(path: &Path) -> Result<BipartiteGraph> {
        let f: Self = load(path)?;
        check_version(f.version, path)?;
        let g = BipartiteGraph::from_left_adjacency(f.left_adj, f.seed)?;
        if g.n() != f.n || g.degree() != f.d {
            bail!(
                "{}: header says n={}, d={} but adjacency has n={}, d={}",
                path.display(),
                f.n,
                f.d,
                g.n(),
                g.degree()
            );
        }
        Ok(g)
    }
}

/// AEL code: component files (relative to the bundle) and the `φ` table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AelBundle {
    pub version: u32,
    pub graph: PathBuf,
    pub inner: PathBuf,
    pub outer: PathBuf,
    pub phi: Vec<u64>,
}

impl AelBundle {
    pub fn load_code(path: &Path) -> Result<AelCode> {
        let b: Self = load(path)?;
        check_version(b.version, path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        let graph = GraphFile::load_graph(&base.join(&b.graph))?;
        let inner = LinearCodeFile::load_code(&base.join(&b.inner))?;
        let outer = OuterCodeFile::load_code(&base.join(&b.outer))?;
        Ok(AelCode::new(graph, inner, outer, Some(b.phi))?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateFile {
    pub version: u32,
    pub certificate: ArldCertificate,
}

/// A right-folded word; `-1` marks an erasure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WordFile {
    pub version: u32,
    pub alphabet: u64,
    pub symbols: Vec<i64>,
    #[serde(default)]
    pub message: Option<Vec<u32>>,
}

impl WordFile {
    pub fn from_word(alphabet: u64, word: &ErasedWord<u64>, message: Option<Vec<u32>>) -> Self {
        let symbols = word.symbols().iter().map(|s| s.map_or(-1, |x| x as i64)).collect();
        Self { version: FORMAT_VERSION, alphabet, symbols, message }
    }

    pub fn load_word(path: &Path) -> Result<(WordFile, ErasedWord<u64>)> {
        let f: Self = load(path)?;
        check_version(f.version, path)?;
        let mut symbols = Vec::with_capacity(f.symbols.len());
        for &s in &f.symbols {
            symbols.push(match s {
                -1 => None,
                s if s >= 0 && (s as u64) < f.alphabet => Some(s as u64),
                s => bail!("{}: symbol {s} outside [0, {})", path.display(), f.alphabet),
            });
        }
        Ok((f, ErasedWord::new(symbols)))
    }
}

/// One verified inequality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Check {
    pub parameter: String,
    pub value: String,
    pub bound: String,
    pub margin: String,
    pub pass: bool,
}

impl Check {
    /// `value ≥ bound` (or `≤` when `upper`), exactly.
    pub fn frac(parameter: &str, value: Frac, bound: Frac, upper: bool) -> Self {
        let margin = if upper { bound - value } else { value - bound };
        Self {
            parameter: parameter.into(),
            value: fraction::format_frac(&value),
            bound: fraction::format_frac(&bound),
            margin: fraction::format_frac(&margin),
            pass: margin >= Frac::from_integer(0),
        }
    }

    pub fn float(parameter: &str, value: f64, bound: f64, upper: bool) -> Self {
        let margin = if upper { bound - value } else { value - bound };
        Self {
            parameter: parameter.into(),
            value: format!("{value:.12e}"),
            bound: format!("{bound:.12e}"),
            margin: format!("{margin:.12e}"),
            pass: margin >= 0.0,
        }
    }

    /// A count that must reach `required`.
    pub fn count(parameter: &str, value: u64, required: u64) -> Self {
        Self {
            parameter: parameter.into(),
            value: value.to_string(),
            bound: required.to_string(),
            margin: (value as i128 - required as i128).to_string(),
            pass: value >= required,
        }
    }

    /// A recorded measurement with no assertion attached.
    pub fn info(parameter: &str, value: impl ToString) -> Self {
        Self {
            parameter: parameter.into(),
            value: value.to_string(),
            bound: String::new(),
            margin: String::new(),
            pass: true,
        }
    }
}

/// Outcome of one verification command, the unit the report aggregates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultRecord {
    pub version: u32,
    pub instance: String,
    pub command: String,
    pub checks: Vec<Check>,
}

impl ResultRecord {
    pub fn new(instance: &str, command: &str) -> Self {
        Self { version: FORMAT_VERSION, instance: instance.into(), command: command.into(), checks: Vec::new() }
    }

    pub fn push(&mut self, c: Check) -> &mut Self {
        self.checks.push(c);
        self
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}
