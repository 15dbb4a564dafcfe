//! Chi-square goodness of fit of the samplers against the uniform law on
//! the 70 labeled cubic graphs on six vertices.

use statrs::distribution::{ChiSquared, ContinuousCDF};

use regraph_core::oracle::GraphClassIndex;
use regraph_core::sampler::{Method, RegularSampler, SamplerConfig};

fn chi_square_p(method: Method, draws: usize, seed: u64) -> f64 {
    let index = GraphClassIndex::build(6, 3).unwrap();
    assert_eq!(index.total(), 70);
    let mut counts = vec![0u64; index.total()];
    let mut cfg = SamplerConfig::regular(6, 3, method, seed);
    if method == Method::EdgeSwapMcmc {
        cfg = cfg.with_thinning(30);
    }
    let mut sampler = RegularSampler::new(cfg).unwrap();
    for _ in 0..draws {
        let g = sampler.next_graph().unwrap();
        counts[index.position(&g).expect("sample is a cubic graph on six vertices")] += 1;
    }
    let expected = draws as f64 / counts.len() as f64;
    let stat: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    1.0 - ChiSquared::new((counts.len() - 1) as f64).unwrap().cdf(stat)
}

#[test]
fn exact_rejection_is_uniform() {
    let p = chi_square_p(Method::ExactRejection, 100_000, 11);
    assert!(p > 0.001, "p = {p}");
}

#[test]
fn swap_chain_is_close_to_uniform() {
    let p = chi_square_p(Method::EdgeSwapMcmc, 20_000, 12);
    assert!(p > 0.001, "p = {p}");
}

#[test]
fn incremental_pairing_covers_the_class() {
    // not exactly uniform, so only support is checked
    let index = GraphClassIndex::build(6, 3).unwrap();
    let mut seen = vec![false; index.total()];
    let mut sampler = RegularSampler::new(SamplerConfig::regular(6, 3, Method::IncrementalPairing, 13)).unwrap();
    for _ in 0..5_000 {
        seen[index.position(&sampler.next_graph().unwrap()).unwrap()] = true;
    }
    assert!(seen.iter().all(|&s| s));
}
