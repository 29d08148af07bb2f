//! Subcommand definitions and dispatch.

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ael_core::codebook::Codebook;
use ael_core::dist_decoder::ael_unique_decode;
use ael_core::expander::{random_regular_bipartite, BipartiteGraph};
use ael_core::fraction::{format_frac, parse_frac};
use ael_core::gf::Field;
use ael_core::inner_search::{exhaustive_arld_check, min_arld_slack, search_inner_code, FoldedRsCode, SearchParams};
use ael_core::linear_code::ErasedWord;
use ael_core::linear_code::DEFAULT_ENUMERATION_CAP;
use ael_core::list_verify::{brute_force_list, verify_singleton_on_codebook, DEFAULT_LIST_SUBSET_CAP};
use ael_core::outer_code::RsCode;
use ael_core::{Error, Frac};

use crate::artifacts::{
    load, save, AelBundle, CertificateFile, Check, FrsFile, GraphFile, LinearCodeFile, OuterCodeFile, ResultRecord,
    SearchProvenance, WordFile, FORMAT_VERSION,
};
use crate::config::ExperimentConfig;
use crate::pipeline;
use crate::report::write_report;

#[derive(Debug, Parser)]
#[command(name = "ael", version, about = "Build, corrupt, decode and verify AEL codes")]
pub struct Cli {
    /// Worker threads for parallel scans (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Repeat for more log output.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InnerKindArg {
    Random,
    Rs,
}

/// Where to put the per-command result record.
#[derive(Debug, Args)]
pub struct ResultArgs {
    #[arg(long)]
    pub result: Option<PathBuf>,
    /// Instance label in the record (default: the primary input's file stem).
    #[arg(long)]
    pub instance: Option<String>,
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long, default_value_t = 1)]
    pub m: u32,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Search for (or construct) an inner code and certify it.
    BuildInner {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_enum, default_value = "random")]
        kind: InnerKindArg,
        #[arg(long)]
        len: usize,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        delta0: String,
        #[arg(long)]
        epsilon_target: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        max_tries: usize,
        #[arg(long, default_value_t = 1 << 32)]
        subset_cap: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        cert: PathBuf,
        #[command(flatten)]
        result: ResultArgs,
    },
    /// Certify a stored code: exact `ε_min`, optionally against the literal sweep.
    VerifyInner {
        #[arg(long, conflicts_with = "frs", required_unless_present = "frs")]
        code: Option<PathBuf>,
        #[arg(long)]
        frs: Option<PathBuf>,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        delta0: String,
        /// Assert `ε_min ≤ epsilon`.
        #[arg(long, allow_hyphen_values = true)]
        epsilon: Option<String>,
        /// Also run the literal sweep over erasures and centers.
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = 1 << 32)]
        subset_cap: u64,
        #[arg(long)]
        cert: Option<PathBuf>,
        #[command(flatten)]
        result: ResultArgs,
    },
    /// Folded Reed–Solomon code with its appropriateness and distance checks.
    BuildFrs {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        fold: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        rate: String,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        result: ResultArgs,
    },
    BuildGraph {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        complete: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        lambda_target: f64,
        #[arg(long, default_value_t = 100)]
        max_tries: usize,
        #[arg(long)]
        out: PathBuf,
    },
    BuildOuter {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Bundle graph, inner and outer code files into an AEL code.
    BuildAel {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        inner: PathBuf,
        #[arg(long)]
        outer: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    Encode {
        #[arg(long)]
        ael: PathBuf,
        /// Outer message symbols, comma separated.
        #[arg(long, value_delimiter = ',')]
        message: Vec<u32>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Replace and erase random right symbols.
    Corrupt {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        errors: usize,
        #[arg(long, default_value_t = 0)]
        erasures: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Unique decoding through local views and threshold rounding.
    Decode {
        #[arg(long)]
        ael: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        result: ResultArgs,
    },
    /// Brute-force list of codewords within a right radius.
    ListDecode {
        #[arg(long)]
        ael: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        radius: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Worst case of the generalized Singleton inequality over all small tuples.
    VerifySingleton {
        #[arg(long)]
        ael: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        delta0: String,
        #[arg(long, allow_hyphen_values = true)]
        epsilon: String,
        #[arg(long)]
        inner_cert: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_LIST_SUBSET_CAP as u64)]
        subset_cap: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        result: ResultArgs,
    },
    VerifyAmplification {
        #[arg(long)]
        ael: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP as u64)]
        enumeration_cap: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        result: ResultArgs,
    },
    /// Random real and indicator pairs against the mixing lemma.
    VerifyEml {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 1000)]
        pairs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        result: ResultArgs,
    },
    /// Collect `*.result.toml` under a directory into one CSV.
    Report {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Full pipeline from an experiment config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (default: `runs/<name>`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn frac_arg(s: &str) -> Result<Frac> {
    parse_frac(s).with_context(|| format!("bad fraction {s:?}"))
}

fn stem(p: &Path) -> String {
    p.file_stem().and_then(|s| s.to_str()).unwrap_or("instance").trim_end_matches(".cert").to_string()
}

fn finish(rec: ResultRecord, args: &ResultArgs, runtime_ms: u128) -> Result<bool> {
    for c in &rec.checks {
        let mark = if c.pass { "ok  " } else { "FAIL" };
        if c.bound.is_empty() {
            println!("{mark} {} = {}", c.parameter, c.value);
        } else {
            println!("{mark} {} = {} (bound {}, margin {})", c.parameter, c.value, c.bound, c.margin);
        }
    }
    if let Some(path) = &args.result {
        save(path, &rec, runtime_ms)?;
    }
    Ok(rec.pass())
}

fn instance(args: &ResultArgs, input: &Path) -> String {
    args.instance.clone().unwrap_or_else(|| stem(input))
}

fn print_witness(cert: &ael_core::inner_search::ArldCertificate) {
    if let Some(w) = &cert.witness {
        println!("witness indices = {:?}", w.indices);
        println!("witness center = {:?}", w.center);
        println!("witness epsilon = {}", format_frac(&w.epsilon));
    }
}

/// Runs one subcommand; `Ok(false)` means an assertion failed.
pub fn execute(cmd: Command) -> Result<bool> {
    let start = Instant::now();
    match cmd {
        Command::BuildInner {
            field,
            kind,
            len,
            dim,
            k,
            delta0,
            epsilon_target,
            seed,
            max_tries,
            subset_cap,
            out,
            cert,
            result,
        } => {
            let f = Field::new(field.p, field.m)?;
            let delta0 = frac_arg(&delta0)?;
            let target = epsilon_target.as_deref().map(frac_arg).transpose()?;
            let cap = subset_cap as u128;
            let (code, certificate, prov) = match kind {
                InnerKindArg::Random => {
                    let epsilon_target = target.context("--epsilon-target is required for a random search")?;
                    let params = SearchParams { len, dim, k, delta0, epsilon_target, seed, max_tries, subset_cap: cap };
                    let found = search_inner_code(&f, &params)?;
                    let prov =
                        SearchProvenance { root_seed: seed, attempt: found.attempt, attempt_seed: found.attempt_seed };
                    (found.code, found.certificate, Some(prov))
                }
                InnerKindArg::Rs => {
                    let code = RsCode::new(f, len, dim)?.to_linear_code();
                    let certificate = min_arld_slack(&code.codebook(cap)?, k, delta0, cap)?;
                    (code, certificate, None)
                }
            };
            let ms = start.elapsed().as_millis();
            save(&out, &LinearCodeFile::from_code(&code, prov), ms)?;
            save(&cert, &CertificateFile { version: FORMAT_VERSION, certificate: certificate.clone() }, ms)?;
            let rec = pipeline::certificate_record(&instance(&result, &out), &certificate, target);
            finish(rec, &result, ms)
        }
        Command::VerifyInner { code, frs, k, delta0, epsilon, exhaustive, subset_cap, cert, result } => {
            let delta0 = frac_arg(&delta0)?;
            let eps = epsilon.as_deref().map(frac_arg).transpose()?;
            let cap = subset_cap as u128;
            let (book, alphabet, input): (Codebook, u64, PathBuf) = match (code, frs) {
                (Some(path), _) => {
                    let c = LinearCodeFile::load_code(&path)?;
                    (c.codebook(cap)?, c.field().order() as u64, path)
                }
                (None, Some(path)) => {
                    let c = FrsFile::load_code(&path)?.as_linear_code();
                    (c.codebook(cap)?, c.alphabet_size(), path)
                }
                (None, None) => bail!("one of --code or --frs is required"),
            };
            let certificate = min_arld_slack(&book, k, delta0, cap)?;
            let ms = start.elapsed().as_millis();
            if let Some(path) = &cert {
                save(path, &CertificateFile { version: FORMAT_VERSION, certificate: certificate.clone() }, ms)?;
            }
            let mut rec = pipeline::certificate_record(&instance(&result, &input), &certificate, eps);
            if exhaustive {
                let at = eps.unwrap_or(certificate.epsilon_min);
                let sweep = exhaustive_arld_check(&book, alphabet, k, delta0, at, true, cap)?;
                rec.push(Check::info("exhaustive_checks", sweep.checks));
                let agree = sweep.pass == certificate.passes(at);
                rec.push(Check::count("exhaustive_agrees", u64::from(agree), 1));
            }
            if !rec.pass() {
                print_witness(&certificate);
            }
            finish(rec, &result, start.elapsed().as_millis())
        }
        Command::BuildFrs { field, fold, n, rate, out, result } => {
            let f = Field::new(field.p, field.m)?;
            let rate = frac_arg(&rate)?;
            let code = FoldedRsCode::new(f, fold, n, rate, None)?;
            let folded = code.as_linear_code();
            let min_distance = folded.min_distance(DEFAULT_ENUMERATION_CAP)?;
            let file = FrsFile {
                version: FORMAT_VERSION,
                field: code.field().record(),
                fold,
                rate: code.rate(),
                gamma: code.gamma(),
                alphas: code.alphas().to_vec(),
                appropriate: code.is_appropriate(),
                min_distance,
            };
            let ms = start.elapsed().as_millis();
            save(&out, &file, ms)?;
            let mut rec = ResultRecord::new(&instance(&result, &out), "build-frs");
            rec.push(Check::count("appropriate", u64::from(file.appropriate), 1)).push(Check::frac(
                "min_distance",
                min_distance,
                Frac::from_integer(1) - code.rate(),
                false,
            ));
            finish(rec, &result, ms)
        }
        Command::BuildGraph { n, d, complete, seed, lambda_target, max_tries, out } => {
            let g = if complete {
                if d.is_some_and(|d| d != n) {
                    bail!("--complete needs d = n");
                }
                BipartiteGraph::complete(n)?
            } else {
                let d = d.context("--d is required unless --complete")?;
                random_regular_bipartite(n, d, seed, lambda_target, max_tries)?
            };
            println!("lambda = {:.12e}", g.lambda());
            save(&out, &GraphFile::from_graph(&g), start.elapsed().as_millis())?;
            Ok(true)
        }
        Command::BuildOuter { field, n, k, out } => {
            let rs = RsCode::new(Field::new(field.p, field.m)?, n, k)?;
            save(&out, &OuterCodeFile::from_code(&rs), start.elapsed().as_millis())?;
            Ok(true)
        }
        Command::BuildAel { graph, inner, outer, out } => {
            let base = out.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
            let rel = |p: &Path| -> Result<PathBuf> {
                let abs = std::path::absolute(p)?;
                let base = std::path::absolute(base)?;
                Ok(abs.strip_prefix(&base).map(Path::to_path_buf).unwrap_or(abs))
            };
            let a = ael_core::ael::AelCode::new(
                GraphFile::load_graph(&graph)?,
                LinearCodeFile::load_code(&inner)?,
                OuterCodeFile::load_code(&outer)?,
                None,
            )?;
            let bundle = AelBundle {
                version: FORMAT_VERSION,
                graph: rel(&graph)?,
                inner: rel(&inner)?,
                outer: rel(&outer)?,
                phi: a.phi().to_vec(),
            };
            println!("rate = {}, alphabet = {}, length = {}", format_frac(&a.rate()), a.alphabet_size(), a.len());
            save(&out, &bundle, start.elapsed().as_millis())?;
            Ok(true)
        }
        Command::Encode { ael, message, out } => {
            let a = AelBundle::load_code(&ael)?;
            let word = a.encode_message(&message)?;
            let file = WordFile::from_word(a.alphabet_size(), &ErasedWord::plain(&word), Some(message));
            save(&out, &file, start.elapsed().as_millis())?;
            Ok(true)
        }
        Command::Corrupt { input, errors, erasures, seed, out } => {
            let (file, word) = WordFile::load_word(&input)?;
            let n = word.len();
            if errors + erasures > n {
                bail!("{errors} errors and {erasures} erasures exceed length {n}");
            }
            if file.alphabet < 2 && errors > 0 {
                bail!("alphabet of size {} admits no errors", file.alphabet);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut symbols = word.symbols().to_vec();
            for (i, pos) in sample(&mut rng, n, errors + erasures).into_iter().enumerate() {
                symbols[pos] = if i < errors {
                    symbols[pos].map(|s| (s + rng.gen_range(1..file.alphabet)) % file.alphabet)
                } else {
                    None
                };
            }
            let corrupted = WordFile::from_word(file.alphabet, &ErasedWord::new(symbols), file.message);
            save(&out, &corrupted, start.elapsed().as_millis())?;
            Ok(true)
        }
        Command::Decode { ael, input, out, result } => {
            let a = AelBundle::load_code(&ael)?;
            let (file, word) = WordFile::load_word(&input)?;
            if word.erasure_count() > 0 {
                bail!("{}: unique decoding takes an unerased word", input.display());
            }
            let g: Vec<u64> = word.symbols().iter().map(|s| s.unwrap_or(0)).collect();
            let res = ael_unique_decode(&a, &g)?;
            let ms = start.elapsed().as_millis();
            let mut rec = ResultRecord::new(&instance(&result, &input), "decode");
            rec.push(Check::info("thresholds_tried", res.outcome.thresholds_tried))
                .push(Check::info("ambiguous", res.outcome.ambiguous));
            match &res.outcome.decoded {
                Some(d) => {
                    let decoded = WordFile::from_word(
                        a.alphabet_size(),
                        &ErasedWord::plain(&d.codeword),
                        Some(d.message.clone()),
                    );
                    save(&out, &decoded, ms)?;
                    rec.push(Check::count("decoded", 1, 1));
                    if let Some(dist) = res.distance {
                        rec.push(Check::info("distance", format_frac(&dist)));
                    }
                    if let Some(sent) = &file.message {
                        rec.push(Check::count("matches_sent_message", u64::from(*sent == d.message), 1));
                    }
                }
                None => {
                    rec.push(Check::count("decoded", 0, 1));
                }
            }
            finish(rec, &result, ms)
        }
        Command::ListDecode { ael, input, radius, out } => {
            let a = AelBundle::load_code(&ael)?;
            let (_, word) = WordFile::load_word(&input)?;
            let radius = frac_arg(&radius)?;
            let book = a.codebook(DEFAULT_ENUMERATION_CAP)?;
            let list = brute_force_list(&book, &word, radius)?;
            let outer = a.outer_codewords(DEFAULT_ENUMERATION_CAP)?;
            let entries: Vec<ListEntry> = list
                .list
                .iter()
                .map(|&i| {
                    let message = a.outer().message_of(&outer[i])?.unwrap_or_default();
                    let distance = a.delta_r_erased(&word, book.word(i))?;
                    Ok(ListEntry { index: i, message, distance: format_frac(&distance) })
                })
                .collect::<Result<_, Error>>()?;
            println!("{} codewords within {}", entries.len(), format_frac(&radius));
            let file = ListFile { version: FORMAT_VERSION, radius: format_frac(&radius), entries };
            save(&out, &file, start.elapsed().as_millis())?;
            Ok(true)
        }
        Command::VerifySingleton { ael, k, delta0, epsilon, inner_cert, subset_cap, out, result } => {
            let a = AelBundle::load_code(&ael)?;
            let delta0 = frac_arg(&delta0)?;
            let eps = frac_arg(&epsilon)?;
            let inner = inner_cert.as_deref().map(load::<CertificateFile>).transpose()?.map(|c| c.certificate);
            let book = a.codebook(DEFAULT_ENUMERATION_CAP)?;
            let report = verify_singleton_on_codebook(&a, &book, k, delta0, eps, inner.as_ref(), subset_cap as u128)?;
            let ms = start.elapsed().as_millis();
            if let Some(path) = &out {
                save(path, &report, ms)?;
            }
            if !report.pass {
                print_witness(&report.certificate);
            }
            finish(pipeline::singleton_record(&instance(&result, &ael), &report), &result, ms)
        }
        Command::VerifyAmplification { ael, enumeration_cap, out, result } => {
            let a = AelBundle::load_code(&ael)?;
            let name = instance(&result, &ael);
            let rec = match a.verify_distance_amplification(enumeration_cap as u128) {
                Ok(r) => {
                    if let Some(path) = &out {
                        save(path, &r, start.elapsed().as_millis())?;
                    }
                    pipeline::amplification_record(&name, &r)
                }
                Err(Error::AmplificationViolation(i, j)) => {
                    println!("violating pair: codewords {i} and {j}");
                    let mut rec = ResultRecord::new(&name, "verify-amplification");
                    rec.push(Check::count(&format!("violation_pair_{i}_{j}"), 0, 1));
                    rec
                }
                Err(e) => return Err(e.into()),
            };
            finish(rec, &result, start.elapsed().as_millis())
        }
        Command::VerifyEml { graph, pairs, seed, result } => {
            let g = GraphFile::load_graph(&graph)?;
            let rec = pipeline::eml_trials(&instance(&result, &graph), &g, pairs, seed)?;
            finish(rec, &result, start.elapsed().as_millis())
        }
        Command::Report { dir, out } => {
            let pass = write_report(&dir, &out)?;
            println!("wrote {}", out.display());
            Ok(pass)
        }
        Command::Run { config, out } => {
            let cfg = ExperimentConfig::load(&config)?;
            let out = out.unwrap_or_else(|| Path::new("runs").join(&cfg.name));
            let pass = pipeline::run_experiment(&cfg, &out)?;
            println!("{}: {}", cfg.name, if pass { "all checks passed" } else { "some checks FAILED" });
            println!("report: {}", out.join("report.csv").display());
            Ok(pass)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ListEntry {
    pub index: usize,
    pub message: Vec<u32>,
    pub distance: String,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ListFile {
    pub version: u32,
    pub radius: String,
    pub entries: Vec<ListEntry>,
}
