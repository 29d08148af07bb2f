use ael_core::ael::AelCode;
use ael_core::codebook::hamming;
use ael_core::dist_decoder::ael_unique_decode;
use ael_core::expander::{random_regular_bipartite, BipartiteGraph};
use ael_core::gf::Field;
use ael_core::inner_search::{exhaustive_arld_check, min_arld_slack, sample_random_linear_code};
use ael_core::linear_code::{ErasedWord, DEFAULT_ENUMERATION_CAP};
use ael_core::list_verify::brute_force_list;
use ael_core::outer_code::RsCode;
use ael_core::Frac;
use proptest::prelude::*;

fn instance(seed: u64) -> AelCode {
    let graph = random_regular_bipartite(12, 4, seed, 1.0, 50).unwrap();
    let inner = RsCode::new(Field::new(2, 2).unwrap(), 4, 2).unwrap().to_linear_code();
    let outer = RsCode::new(Field::new(2, 4).unwrap(), 12, 2).unwrap();
    AelCode::new(graph, inner, outer, None).unwrap()
}

#[test]
fn codebook_distance_meets_amplified_bound() {
    let a = instance(5);
    let report = a.verify_distance_amplification(DEFAULT_ENUMERATION_CAP).unwrap();
    let book = a.codebook(DEFAULT_ENUMERATION_CAP).unwrap();
    assert_eq!(book.min_distance().unwrap(), report.min_delta_r);
    if !report.vacuous {
        assert!(ael_core::fraction::to_f64(&report.min_delta_r) >= report.global_bound);
    }
}

#[test]
fn complete_graph_amplifies_to_inner_distance() {
    let inner = sample_random_linear_code(&Field::new(2, 2).unwrap(), 6, 2, 8).unwrap();
    let outer = RsCode::new(Field::new(2, 4).unwrap(), 6, 2).unwrap();
    let delta_in = inner.min_distance(DEFAULT_ENUMERATION_CAP).unwrap();
    let a = AelCode::new(BipartiteGraph::complete(6).unwrap(), inner, outer, None).unwrap();
    let r = a.verify_distance_amplification(DEFAULT_ENUMERATION_CAP).unwrap();
    assert!(r.min_delta_r >= delta_in);
}

#[test]
fn certificate_agrees_with_literal_sweep_on_random_codes() {
    let field = Field::new(3, 1).unwrap();
    for seed in 0..4 {
        let code = sample_random_linear_code(&field, 4, 2, seed).unwrap();
        let book = code.codebook(DEFAULT_ENUMERATION_CAP).unwrap();
        let delta0 = code.min_distance(DEFAULT_ENUMERATION_CAP).unwrap();
        let cert = min_arld_slack(&book, 3, delta0, 1 << 30).unwrap();
        for eps in [Frac::from_integer(0), cert.epsilon_min, Frac::new(1, 8), Frac::new(-1, 8)] {
            let sweep = exhaustive_arld_check(&book, 3, 3, delta0, eps, true, 1 << 30).unwrap();
            assert_eq!(sweep.pass, cert.passes(eps), "seed {seed}, eps {eps}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn unique_decoding_inside_half_distance(m0 in 0u32..16, m1 in 0u32..16, seed in any::<u64>(), t in 0usize..4) {
        let a = instance(11);
        let cw = a.encode_message(&[m0, m1]).unwrap();
        let mut g = cw.clone();
        let mut state = seed;
        for i in 0..t {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let pos = (i * 5 + (state >> 60) as usize) % 12;
            g[pos] = (g[pos] + 1 + (state >> 33) % 255) % 256;
        }
        let book = a.codebook(DEFAULT_ENUMERATION_CAP).unwrap();
        let out = ael_unique_decode(&a, &g).unwrap();
        // Whatever is returned is a codeword; with few errors it is the sent one.
        if let Some(d) = &out.outcome.decoded {
            prop_assert!(book.position(&d.codeword).is_some());
        }
        if t <= 2 {
            prop_assert_eq!(out.outcome.decoded.map(|d| d.codeword), Some(cw.clone()));
        }
        // The brute-force list at the same radius contains the sent codeword.
        let radius = Frac::new(hamming(&g, &cw) as i64, 12);
        let list = brute_force_list(&book, &ErasedWord::plain(&g), radius).unwrap();
        prop_assert!(list.list.iter().any(|&i| book.word(i) == cw.as_slice()));
    }
}
