//! Verification stages shared by the subcommands and `ael run`.

use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ael_core::ael::{AelCode, AmplificationReport};
use ael_core::arld::tuple_count;
use ael_core::dist_decoder::{ael_unique_decode, decode_from_distributions, planted_ensemble};
use ael_core::expander::{random_regular_bipartite, verify_eml, verify_eml_sets, BipartiteGraph};
use ael_core::gf::Field;
use ael_core::inner_search::{min_arld_slack, search_inner_code, ArldCertificate, SearchParams};
use ael_core::linear_code::DEFAULT_ENUMERATION_CAP;
use ael_core::list_verify::{
    adversarial_centers, random_centers, verify_common_error_bound, verify_singleton_on_codebook, CommonErrorReport,
    SingletonReport,
};
use ael_core::outer_code::RsCode;
use ael_core::seed::derive_seed;
use ael_core::{Error, Frac};

use crate::artifacts::{
    save, AelBundle, CertificateFile, Check, GraphFile, LinearCodeFile, OuterCodeFile, ResultRecord, SearchProvenance,
    FORMAT_VERSION,
};
use crate::config::{ExperimentConfig, InnerKind};
use crate::report::write_report;

fn frac(num: i64, den: i64) -> Frac {
    Frac::new(num, den)
}

pub fn certificate_record(instance: &str, cert: &ArldCertificate, epsilon: Option<Frac>) -> ResultRecord {
    let mut rec = ResultRecord::new(instance, "verify-inner");
    rec.push(Check::info("delta0", ael_core::fraction::format_frac(&cert.delta0)))
        .push(Check::info("k", cert.k))
        .push(Check::info("tuples_examined", cert.tuples_examined));
    match epsilon {
        Some(eps) => rec.push(Check::frac("epsilon_min", cert.epsilon_min, eps, true)),
        None => rec.push(Check::info("epsilon_min", ael_core::fraction::format_frac(&cert.epsilon_min))),
    };
    rec
}

pub fn amplification_record(instance: &str, r: &AmplificationReport) -> ResultRecord {
    let mut rec = ResultRecord::new(instance, "verify-amplification");
    rec.push(Check::info("pairs", r.pairs))
        .push(Check::info("lambda_upper", format!("{:.12e}", r.lambda_upper)))
        .push(Check::float("min_pair_margin", r.min_margin, 0.0, false))
        .push(Check::info("min_delta_r", ael_core::fraction::format_frac(&r.min_delta_r)));
    if !r.vacuous {
        rec.push(Check::float("global_delta_r", ael_core::fraction::to_f64(&r.min_delta_r), r.global_bound, false));
    }
    rec
}

pub fn singleton_record(instance: &str, r: &SingletonReport) -> ResultRecord {
    let mut rec = ResultRecord::new(instance, "verify-singleton");
    let h = &r.hypothesis;
    rec.push(Check::frac("epsilon_min", r.certificate.epsilon_min, r.epsilon, true))
        .push(Check::info("tuples_examined", r.certificate.tuples_examined))
        .push(Check::info("lambda_upper", format!("{:.12e}", h.lambda_upper)))
        .push(Check::info("lambda_required", format!("{:.12e}", h.lambda_required)))
        .push(Check::info("theorem_applicable", h.applicable));
    rec
}

pub fn common_error_record(instance: &str, r: &CommonErrorReport, k: usize) -> ResultRecord {
    let int = |x: usize| Frac::from_integer(x as i64);
    let mut rec = ResultRecord::new(instance, "verify-common-error");
    rec.push(Check::info("centers", r.centers))
        .push(Check::info("tuples_checked", r.tuples_checked))
        .push(Check::frac("violations", int(r.violations.len()), int(0), true));
    if let Some(m) = r.min_margin {
        rec.push(Check::frac("min_margin", m, Frac::from_integer(0), false));
    }
    rec.push(Check::frac("max_ball_count", int(r.max_ball_count), int(k.saturating_sub(1)), true));
    rec
}

/// Random real and indicator pairs against both mixing-lemma forms.
pub fn eml_trials(instance: &str, g: &BipartiteGraph, pairs: usize, seed: u64) -> Result<ResultRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = g.n();
    let (mut real_ok, mut set_ok) = (0u64, 0u64);
    let mut worst: f64 = 0.0;
    for _ in 0..pairs {
        let f: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let h: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let c = verify_eml(g, &f, &h)?;
        real_ok += u64::from(c.pass);
        worst = worst.max(c.deviation / c.bound.max(f64::MIN_POSITIVE));
        let (ps, pt) = (rng.gen::<f64>(), rng.gen::<f64>());
        let s: Vec<bool> = (0..n).map(|_| rng.gen::<f64>() < ps).collect();
        let t: Vec<bool> = (0..n).map(|_| rng.gen::<f64>() < pt).collect();
        let c = verify_eml_sets(g, &s, &t)?;
        set_ok += u64::from(c.pass);
        worst = worst.max(c.deviation / c.bound.max(f64::MIN_POSITIVE));
    }
    let mut rec = ResultRecord::new(instance, "verify-eml");
    rec.push(Check::info("lambda_hat", format!("{:.12e}", g.lambda())))
        .push(Check::count("real_pairs", real_ok, pairs as u64))
        .push(Check::count("indicator_pairs", set_ok, pairs as u64))
        .push(Check::info("max_deviation_ratio", format!("{worst:.6}")));
    Ok(rec)
}

/// Seeded error patterns of weight `0..=max_errors` through the outer decoder.
pub fn outer_decode_trials(instance: &str, rs: &RsCode, trials: usize, seed: u64) -> Result<ResultRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = rs.field();
    let q = field.order();
    let n = rs.len();
    let mut ok = 0u64;
    for _ in 0..trials {
        let msg: Vec<u32> = (0..rs.dim()).map(|_| rng.gen_range(0..q)).collect();
        let cw = rs.encode(&msg)?;
        let w = rng.gen_range(0..=rs.max_errors());
        let mut word = cw.clone();
        for pos in sample(&mut rng, n, w) {
            word[pos] = field.add(word[pos], rng.gen_range(1..q));
        }
        if rs.decode(&word, rs.decode_radius())?.is_some_and(|d| d.codeword == cw && d.message == msg) {
            ok += 1;
        }
    }
    let mut rec = ResultRecord::new(instance, "outer-decode");
    rec.push(Check::info("max_errors", rs.max_errors())).push(Check::count("recovered", ok, trials as u64));
    Ok(rec)
}

/// Planted ensembles within the outer decoding radius, plus the endpoint
/// sweep compared against random thresholds.
pub fn ensemble_trials(
    instance: &str,
    a: &AelCode,
    trials: usize,
    coverage_ensembles: usize,
    thetas: usize,
    seed: u64,
) -> Result<ResultRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let budget = a.outer().decode_radius();
    let q_out = a.outer().field().order();
    let mut ok = 0u64;
    let mut max_disagreement = Frac::from_integer(0);
    let mut ensembles = Vec::new();
    for t in 0..trials.max(coverage_ensembles) {
        let msg: Vec<u32> = (0..a.outer().dim()).map(|_| rng.gen_range(0..q_out)).collect();
        let outer_word = a.outer().encode(&msg)?;
        let ens = planted_ensemble(a, &outer_word, budget, a.len() as u32, rng.gen())?;
        if t < trials {
            let target: Vec<u64> = outer_word.iter().map(|&s| a.phi()[s as usize]).collect();
            max_disagreement = max_disagreement.max(ens.expected_disagreement(&target));
            let out = decode_from_distributions(a, &ens)?;
            if out.decoded.is_some_and(|d| d.outer_codeword == outer_word) {
                ok += 1;
            }
        }
        if t < coverage_ensembles {
            ensembles.push(ens);
        }
    }
    let mut agree = 0u64;
    for ens in &ensembles {
        let ends = ens.thresholds();
        for _ in 0..thetas {
            let theta = frac(rng.gen_range(0..1_000_000), 1_000_000);
            let below = ends.iter().rev().find(|&&e| e <= theta).copied().unwrap_or_default();
            agree += u64::from(ens.round_at(theta) == ens.round_at(below));
        }
    }
    let mut rec = ResultRecord::new(instance, "ensemble-decode");
    rec.push(Check::frac("max_expected_disagreement", max_disagreement, budget, true))
        .push(Check::count("recovered", ok, trials as u64))
        .push(Check::count("threshold_agreement", agree, (ensembles.len() * thetas) as u64));
    Ok(rec)
}

/// Unique decoding from corrupted right symbols, swept over the number of
/// corrupted vertices. Measurements only.
pub fn corruption_sweep(instance: &str, a: &AelCode, trials: usize, seed: u64) -> Result<ResultRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = a.len();
    let q_out = a.outer().field().order();
    let alphabet = a.alphabet_size();
    let mut rec = ResultRecord::new(instance, "corruption-sweep");
    let mut radius = None;
    for t in 0..=n {
        let mut ok = 0usize;
        for _ in 0..trials {
            let msg: Vec<u32> = (0..a.outer().dim()).map(|_| rng.gen_range(0..q_out)).collect();
            let cw = a.encode_message(&msg)?;
            let mut word = cw.clone();
            for pos in sample(&mut rng, n, t) {
                let shift = rng.gen_range(1..alphabet);
                word[pos] = (word[pos] + shift) % alphabet;
            }
            let out = ael_unique_decode(a, &word)?;
            ok += usize::from(out.outcome.decoded.is_some_and(|d| d.codeword == cw));
        }
        if ok < trials && radius.is_none() {
            radius = Some(t.saturating_sub(1));
        }
        rec.push(Check::info(&format!("recovered_at_{t}"), format!("{ok}/{trials}")));
    }
    rec.push(Check::info("empirical_radius", radius.unwrap_or(n)));
    Ok(rec)
}

/// Writes the full pipeline for `cfg` into `out`; returns whether every check passed.
pub fn run_experiment(cfg: &ExperimentConfig, out: &Path) -> Result<bool> {
    let fr = cfg.validate()?;
    let root = cfg.seed;
    let name = cfg.name.as_str();
    let results = out.join("results");
    let cap = cfg.verify.subset_cap as u128;
    let mut records = Vec::new();

    let start = Instant::now();
    let in_field = Field::new(cfg.inner.p, cfg.inner.m)?;
    let (inner, inner_cert, provenance) = match cfg.inner.kind {
        InnerKind::Random => {
            let params = SearchParams {
                len: cfg.inner.len,
                dim: cfg.inner.dim,
                k: cfg.inner.k,
                delta0: fr.delta0,
                epsilon_target: fr.epsilon_target.context("missing inner.epsilon_target")?,
                seed: derive_seed(root, "inner"),
                max_tries: cfg.inner.max_tries,
                subset_cap: cap,
            };
            let found = search_inner_code(&in_field, &params)?;
            let prov = SearchProvenance { root_seed: root, attempt: found.attempt, attempt_seed: found.attempt_seed };
            (found.code, found.certificate, Some(prov))
        }
        InnerKind::Rs => {
            let code = RsCode::new(in_field, cfg.inner.len, cfg.inner.dim)?.to_linear_code();
            let cert = min_arld_slack(&code.codebook(cap)?, cfg.inner.k, fr.delta0, cap)?;
            (code, cert, None)
        }
    };
    let ms = start.elapsed().as_millis();
    save(&out.join("inner.toml"), &LinearCodeFile::from_code(&inner, provenance), ms)?;
    save(
        &out.join("inner.cert.toml"),
        &CertificateFile { version: FORMAT_VERSION, certificate: inner_cert.clone() },
        ms,
    )?;
    records.push(certificate_record(&format!("{name}/inner"), &inner_cert, fr.epsilon_target));

    let start = Instant::now();
    let graph = if cfg.graph.complete {
        BipartiteGraph::complete(cfg.graph.n)?
    } else {
        random_regular_bipartite(
            cfg.graph.n,
            cfg.graph.d,
            derive_seed(root, "graph"),
            cfg.graph.lambda_target,
            cfg.graph.max_tries,
        )?
    };
    save(&out.join("graph.toml"), &GraphFile::from_graph(&graph), start.elapsed().as_millis())?;
    records.push(eml_trials(&format!("{name}/graph"), &graph, cfg.trials.eml_pairs, derive_seed(root, "eml"))?);

    let outer = RsCode::new(Field::new(cfg.outer.p, cfg.outer.m)?, cfg.outer.n, cfg.outer.k)?;
    save(&out.join("outer.toml"), &OuterCodeFile::from_code(&outer), 0)?;
    records.push(outer_decode_trials(
        &format!("{name}/outer"),
        &outer,
        cfg.trials.outer_decode,
        derive_seed(root, "outer-decode"),
    )?);

    let a = AelCode::new(graph, inner, outer, None)?;
    let bundle = AelBundle {
        version: FORMAT_VERSION,
        graph: "graph.toml".into(),
        inner: "inner.toml".into(),
        outer: "outer.toml".into(),
        phi: a.phi().to_vec(),
    };
    save(&out.join("ael.toml"), &bundle, 0)?;

    let ael_name = format!("{name}/ael");
    if cfg.verify.amplification {
        let start = Instant::now();
        let rec = match a.verify_distance_amplification(cfg.verify.enumeration_cap as u128) {
            Ok(r) => {
                save(&out.join("amplification.toml"), &r, start.elapsed().as_millis())?;
                amplification_record(&ael_name, &r)
            }
            Err(Error::AmplificationViolation(i, j)) => {
                let mut rec = ResultRecord::new(&ael_name, "verify-amplification");
                rec.push(Check::count(&format!("violation_pair_{i}_{j}"), 0, 1));
                rec
            }
            Err(e) => return Err(e.into()),
        };
        records.push(rec);
    }
    records.push(ensemble_trials(&ael_name, &a, cfg.trials.ensembles, 10, 1000, derive_seed(root, "ensembles"))?);
    records.push(corruption_sweep(&ael_name, &a, cfg.trials.corruption_trials, derive_seed(root, "corruption"))?);

    if cfg.verify.singleton || cfg.verify.common_error {
        let k = cfg.inner.k;
        let size = a.codeword_count();
        if size > cfg.verify.enumeration_cap as u128 || tuple_count(size as usize, k) > cap {
            let mut rec = ResultRecord::new(&ael_name, "verify-singleton");
            rec.push(Check::info("skipped", format!("{size} codewords exceed the enumeration caps")));
            records.push(rec);
        } else {
            let start = Instant::now();
            let book = a.codebook(DEFAULT_ENUMERATION_CAP)?;
            let eps = fr.epsilon.unwrap_or(inner_cert.epsilon_min * 2);
            let report = verify_singleton_on_codebook(&a, &book, k, fr.delta0, eps, Some(&inner_cert), cap)?;
            save(&out.join("singleton.toml"), &report, start.elapsed().as_millis())?;
            records.push(singleton_record(&ael_name, &report));
            if cfg.verify.common_error && report.pass {
                let mut centers = adversarial_centers(
                    &book,
                    cfg.trials.adversarial_centers,
                    k,
                    derive_seed(root, "centers-adversarial"),
                )?;
                centers.extend(random_centers(
                    a.len(),
                    a.alphabet_size(),
                    cfg.trials.random_centers,
                    derive_seed(root, "centers-random"),
                ));
                let ce = verify_common_error_bound(&book, k, fr.delta0, eps, &report, &centers, cfg.verify.list_size)?;
                records.push(common_error_record(&ael_name, &ce, k));
            }
        }
    }

    let mut pass = true;
    for (i, rec) in records.iter().enumerate() {
        pass &= rec.pass();
        save(&results.join(format!("{i:02}-{}.result.toml", rec.command)), rec, 0)?;
    }
    write_report(&results, &out.join("report.csv"))?;
    Ok(pass)
}
