//! AC1–AC10, one line per criterion; no libtest harness. Artifacts from two runs
//! with the same root seed are compared byte for byte (minus the header line) for AC10.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use ael_cli::artifacts::{save, strip_header, CertificateFile, Check, ResultRecord, FORMAT_VERSION};
use ael_cli::pipeline::{
    amplification_record, common_error_record, eml_trials, ensemble_trials, outer_decode_trials, singleton_record,
};
use ael_cli::report::write_report;
use ael_core::ael::AelCode;
use ael_core::expander::{random_regular_bipartite, BipartiteGraph};
use ael_core::gf::Field;
use ael_core::inner_search::{
    erasure_monotonicity, exhaustive_arld_check, min_arld_slack, sample_random_linear_code, search_inner_code,
    FoldedRsCode, SearchParams,
};
use ael_core::linear_code::DEFAULT_ENUMERATION_CAP;
use ael_core::list_verify::{
    adversarial_centers, random_centers, verify_common_error_bound, verify_singleton_on_codebook,
};
use ael_core::outer_code::RsCode;
use ael_core::seed::derive_seed;
use ael_core::Frac;

const ROOT_SEED: u64 = 20_240_917;

/// Criteria that cannot hold as stated; see the README.
const KNOWN_UNATTAINABLE: &[&str] = &["AC8"];

struct Outcome {
    pass: bool,
    detail: String,
}

fn record(dir: &Path, id: &str, rec: &ResultRecord) {
    save(&dir.join(format!("{}.result.toml", id.to_lowercase())), rec, 0).unwrap();
}

fn within(rec: &mut ResultRecord, start: Instant, limit: Duration) {
    let ms = start.elapsed().as_millis() as u64;
    // Runtime is deliberately left out of the persisted record so reruns compare equal.
    if ms > limit.as_millis() as u64 {
        rec.push(Check::count(&format!("runtime_over_{}ms", limit.as_millis()), 0, 1));
    }
}

fn summary(rec: &ResultRecord) -> String {
    rec.checks
        .iter()
        .filter(|c| !c.bound.is_empty() || c.parameter.starts_with("epsilon"))
        .map(|c| {
            if c.bound.is_empty() {
                format!("{}={}", c.parameter, c.value)
            } else {
                format!("{}={} vs {}", c.parameter, c.value, c.bound)
            }
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn ael_bin() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_ael"))
}

fn ac1(dir: &Path) -> Outcome {
    let start = Instant::now();
    let seed = derive_seed(ROOT_SEED, "ac1");
    let code = dir.join("ac1-inner.toml");
    let cert = dir.join("ac1-inner.cert.toml");
    let build = Command::new(ael_bin())
        .args(["build-inner", "--p", "2", "--m", "3", "--len", "6", "--dim", "2", "--k", "4"])
        .args(["--delta0", "2/3", "--epsilon-target", "1/6", "--seed", &seed.to_string()])
        .arg("--out")
        .arg(&code)
        .arg("--cert")
        .arg(&cert)
        .output()
        .unwrap();
    let verify = Command::new(ael_bin())
        .args(["verify-inner", "--k", "4", "--delta0", "2/3", "--epsilon", "1/6", "--code"])
        .arg(&code)
        .arg("--result")
        .arg(dir.join("ac1.result.toml"))
        .output()
        .unwrap();
    let c: CertificateFile = ael_cli::artifacts::load(&cert).unwrap();
    let mut rec: ResultRecord = ael_cli::artifacts::load(&dir.join("ac1.result.toml")).unwrap();
    rec.push(Check::count("build_exit_zero", u64::from(build.status.code() == Some(0)), 1)).push(Check::count(
        "verify_exit_zero",
        u64::from(verify.status.code() == Some(0)),
        1,
    ));
    rec.push(Check::frac(
        "tuples_examined",
        Frac::from_integer(c.certificate.tuples_examined as i64),
        Frac::from_integer(700_000),
        true,
    ));
    within(&mut rec, start, Duration::from_secs(300));
    record(dir, "AC1", &rec);
    Outcome { pass: rec.pass(), detail: summary(&rec) }
}

fn ac2(dir: &Path) -> Outcome {
    let start = Instant::now();
    let field = Field::new(2, 2).unwrap();
    let code = sample_random_linear_code(&field, 5, 2, derive_seed(ROOT_SEED, "ac2")).unwrap();
    let book = code.codebook(DEFAULT_ENUMERATION_CAP).unwrap();
    let k = 3;
    let cap = 1u128 << 40;
    let mono = erasure_monotonicity(&book, 4, k, cap).unwrap();
    let delta0 = code.min_distance(DEFAULT_ENUMERATION_CAP).unwrap();
    let cert = min_arld_slack(&book, k, delta0, cap).unwrap();
    let raw = cert.epsilon_raw.unwrap();
    let mut probes = vec![raw, raw - Frac::new(1, 60), Frac::from_integer(0), cert.epsilon_min, Frac::new(-1, 5)];
    probes.extend((1..=5).map(|j| Frac::new(j, 10)));
    let mut agree = 0u64;
    for &eps in &probes {
        let sweep = exhaustive_arld_check(&book, 4, k, delta0, eps, true, cap).unwrap();
        agree += u64::from(sweep.pass == cert.passes(eps));
    }
    let mut rec = ResultRecord::new("ac2", "erasure-monotonicity");
    rec.push(Check::info("codewords", book.size()))
        .push(Check::info("tuples", mono.tuples))
        .push(Check::info("evaluations", mono.evaluations))
        .push(Check::frac("exceptions", Frac::from_integer(mono.exceptions as i64), Frac::from_integer(0), true))
        .push(Check::info("epsilon_raw", ael_core::fraction::format_frac(&raw)))
        .push(Check::count("oracle_agreement", agree, probes.len() as u64));
    within(&mut rec, start, Duration::from_secs(600));
    record(dir, "AC2", &rec);
    Outcome { pass: rec.pass() && book.size() == 16, detail: summary(&rec) }
}

/// The n=12, d=4 instance shared by AC3 and AC6.
fn small_instance() -> AelCode {
    let graph = random_regular_bipartite(12, 4, derive_seed(ROOT_SEED, "ac3-graph"), 1.0, 100).unwrap();
    let inner = RsCode::new(Field::new(2, 2).unwrap(), 4, 2).unwrap().to_linear_code();
    let outer = RsCode::new(Field::new(2, 4).unwrap(), 12, 2).unwrap();
    AelCode::new(graph, inner, outer, None).unwrap()
}

fn ac3(dir: &Path) -> Outcome {
    let start = Instant::now();
    let a = small_instance();
    let mut rec = match a.verify_distance_amplification(DEFAULT_ENUMERATION_CAP) {
        Ok(r) => {
            let mut rec = amplification_record("ac3", &r);
            rec.push(Check::count("pairs", r.pairs, 256 * 255 / 2));
            rec
        }
        Err(e) => {
            let mut rec = ResultRecord::new("ac3", "verify-amplification");
            rec.push(Check::info("error", e)).push(Check::count("violation_free", 0, 1));
            rec
        }
    };
    within(&mut rec, start, Duration::from_secs(30));
    record(dir, "AC3", &rec);
    Outcome { pass: rec.pass(), detail: summary(&rec) }
}

/// AC4 instance: K_{12,12}, searched inner code, RS[12,2]/GF(16).
fn complete_instance(dir: &Path) -> (AelCode, ael_core::inner_search::ArldCertificate) {
    let params = SearchParams {
        len: 12,
        dim: 2,
        k: 4,
        delta0: Frac::new(3, 4),
        epsilon_target: Frac::new(5, 36),
        seed: derive_seed(ROOT_SEED, "ac4-inner"),
        max_tries: 2000,
        subset_cap: 1 << 32,
    };
    let found = search_inner_code(&Field::new(2, 2).unwrap(), &params).unwrap();
    save(
        &dir.join("ac4-inner.cert.toml"),
        &CertificateFile { version: FORMAT_VERSION, certificate: found.certificate.clone() },
        0,
    )
    .unwrap();
    let outer = RsCode::new(Field::new(2, 4).unwrap(), 12, 2).unwrap();
    let a = AelCode::new(BipartiteGraph::complete(12).unwrap(), found.code, outer, None).unwrap();
    (a, found.certificate)
}

fn ac4_ac5(dir: &Path) -> (Outcome, Outcome) {
    let start = Instant::now();
    let (a, inner_cert) = complete_instance(dir);
    let k = 4;
    let delta0 = Frac::new(3, 4);
    let eps = inner_cert.epsilon_min * 2;
    let book = a.codebook(DEFAULT_ENUMERATION_CAP).unwrap();
    let report = verify_singleton_on_codebook(&a, &book, k, delta0, eps, Some(&inner_cert), 1 << 32).unwrap();
    let mut rec = singleton_record("ac4", &report);
    rec.push(Check::count("hypotheses_hold", u64::from(report.hypothesis.applicable), 1))
        .push(Check::count("theorem_holds", u64::from(report.theorem_holds == Some(true)), 1))
        .push(Check::info("inner_epsilon", ael_core::fraction::format_frac(&inner_cert.epsilon_min)));
    within(&mut rec, start, Duration::from_secs(1800));
    save(&dir.join("ac4-singleton.toml"), &report, 0).unwrap();
    record(dir, "AC4", &rec);
    let ac4 = Outcome { pass: rec.pass(), detail: summary(&rec) };

    let ac5 = match (report.pass, adversarial_centers(&book, 50, k, derive_seed(ROOT_SEED, "ac5-adversarial"))) {
        (true, Ok(mut centers)) => {
            centers.extend(random_centers(12, a.alphabet_size(), 200, derive_seed(ROOT_SEED, "ac5-random")));
            let ce = verify_common_error_bound(&book, k, delta0, eps, &report, &centers, 24).unwrap();
            let mut rec = common_error_record("ac5", &ce, k);
            rec.push(Check::count("centers", ce.centers as u64, 250));
            record(dir, "AC5", &rec);
            Outcome { pass: rec.pass(), detail: summary(&rec) }
        }
        _ => Outcome { pass: false, detail: "prerequisite certificate did not pass".into() },
    };
    (ac4, ac5)
}

fn ac6(dir: &Path) -> Outcome {
    let a = small_instance();
    let mut rec = ensemble_trials("ac6", &a, 100, 10, 1000, derive_seed(ROOT_SEED, "ac6")).unwrap();
    rec.push(Check::frac("decode_radius", a.outer().decode_radius(), Frac::new(5, 12), false)).push(Check::frac(
        "decode_radius_exact",
        a.outer().decode_radius(),
        Frac::new(5, 12),
        true,
    ));
    record(dir, "AC6", &rec);
    Outcome { pass: rec.pass(), detail: summary(&rec) }
}

fn ac7(dir: &Path) -> Outcome {
    let g = random_regular_bipartite(64, 8, derive_seed(ROOT_SEED, "ac7-graph"), 1.0, 100).unwrap();
    let mut rec = eml_trials("ac7", &g, 1000, derive_seed(ROOT_SEED, "ac7")).unwrap();
    let k16 = BipartiteGraph::complete(16).unwrap();
    rec.push(Check::float("k16_lambda", k16.lambda(), 1e-9, true));
    record(dir, "AC7", &rec);
    Outcome { pass: rec.pass(), detail: summary(&rec) }
}

fn ac8(dir: &Path) -> Outcome {
    let code = FoldedRsCode::new(Field::new(17, 1).unwrap(), 2, 4, Frac::new(1, 4), None).unwrap();
    let folded = code.as_linear_code();
    let book = folded.codebook(DEFAULT_ENUMERATION_CAP).unwrap();
    let dist = folded.min_distance(DEFAULT_ENUMERATION_CAP).unwrap();
    let cert = min_arld_slack(&book, 3, Frac::new(3, 4), 1 << 32).unwrap();
    save(&dir.join("ac8.cert.toml"), &CertificateFile { version: FORMAT_VERSION, certificate: cert.clone() }, 0)
        .unwrap();
    let mut rec = ResultRecord::new("ac8", "frs");
    rec.push(Check::count("appropriate", u64::from(code.is_appropriate()), 1))
        .push(Check::frac("min_distance_at_least", dist, Frac::new(3, 4), false))
        .push(Check::frac("min_distance_at_most", dist, Frac::new(3, 4), true))
        .push(Check::info("codewords", book.size()))
        .push(Check::info("epsilon_min", ael_core::fraction::format_frac(&cert.epsilon_min)));
    record(dir, "AC8", &rec);
    Outcome { pass: rec.pass(), detail: summary(&rec) }
}

fn ac9(dir: &Path) -> Outcome {
    let rs = RsCode::new(Field::new(2, 4).unwrap(), 12, 2).unwrap();
    let mut rec = outer_decode_trials("ac9", &rs, 500, derive_seed(ROOT_SEED, "ac9")).unwrap();
    rec.push(Check::count("max_errors", rs.max_errors() as u64, 5));
    record(dir, "AC9", &rec);
    Outcome { pass: rec.pass(), detail: summary(&rec) }
}

fn suite(dir: &Path) -> BTreeMap<&'static str, Outcome> {
    let mut out = BTreeMap::new();
    out.insert("AC1", ac1(dir));
    out.insert("AC2", ac2(dir));
    out.insert("AC3", ac3(dir));
    let (a4, a5) = ac4_ac5(dir);
    out.insert("AC4", a4);
    out.insert("AC5", a5);
    out.insert("AC6", ac6(dir));
    out.insert("AC7", ac7(dir));
    out.insert("AC8", ac8(dir));
    out.insert("AC9", ac9(dir));
    write_report(dir, &dir.join("report.csv")).unwrap();
    out
}

fn snapshot(dir: &Path) -> BTreeMap<String, String> {
    let mut files = BTreeMap::new();
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let text = fs::read_to_string(&path).unwrap();
        files.insert(path.file_name().unwrap().to_string_lossy().into_owned(), strip_header(&text));
    }
    files
}

fn main() {
    let first = tempfile::tempdir().unwrap();
    let second = tempfile::tempdir().unwrap();
    let mut results = suite(first.path());
    let rerun = suite(second.path());
    let (a, b) = (snapshot(first.path()), snapshot(second.path()));
    let differing: Vec<&String> = a.keys().filter(|k| a.get(*k) != b.get(*k)).collect();
    let same_verdicts = results.iter().all(|(id, o)| rerun[id].pass == o.pass);
    results.insert(
        "AC10",
        Outcome {
            pass: a.len() == b.len() && differing.is_empty() && same_verdicts,
            detail: format!("{} artifacts compared, {} differ", a.len(), differing.len()),
        },
    );

    let mut order: Vec<&&str> = results.keys().collect();
    order.sort_by_key(|id| id[2..].parse::<u32>().unwrap());
    let mut unexpected = Vec::new();
    for id in order {
        let o = &results[*id];
        let known = KNOWN_UNATTAINABLE.contains(id);
        let tag = match (o.pass, known) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known unattainable)",
            (false, false) => "FAIL",
        };
        println!("{id}: {tag}: {}", o.detail);
        if !o.pass && !known {
            unexpected.push(*id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("failing criteria: {unexpected:?}");
        std::process::exit(1);
    }
}
