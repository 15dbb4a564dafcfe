//! Random regular graph samplers, the constrained edge-swap chain, and the
//! uv switching with exact forward and backward counts.

mod conditional;
mod pairing;
mod swap;
mod switching;

use alloc::format;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{DegreeSequence, SimpleGraph};

pub use conditional::{conditional_sample, initial_graph, ConditionalSampler};
pub use pairing::{incremental_pairing, pairing_rejection};
pub use swap::{SwapChain, SwapGraph};
pub use switching::{
    apply_switching, backward_switchings, forward_switchings, switching_ratio_estimate, switching_statistics,
    Direction, RunningMoments, SwitchingCounts, SwitchingSummary,
};

/// Generator used by every sampler: ChaCha8 with a 64-bit seed and a
/// separate stream id per worker.
pub type SamplerRng = ChaCha8Rng;

pub fn rng_for(seed: u64, stream: u64) -> SamplerRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Pairing model, restarted until simple. Exactly uniform; the acceptance
    /// rate decays like `exp(-(d^2-1)/4)` so this is for `d <= 4` or so.
    ExactRejection,
    /// Steger-Wormald style: pair random points, skipping loops and
    /// repeated pairs. Asymptotically uniform for moderate `d`.
    IncrementalPairing,
    /// Incremental pairing start followed by `burn_in` double edge swaps;
    /// successive samples are `thinning` swaps apart.
    EdgeSwapMcmc,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::ExactRejection => "exact-rejection",
            Method::IncrementalPairing => "incremental-pairing",
            Method::EdgeSwapMcmc => "edge-swap-mcmc",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "exact-rejection" => Ok(Method::ExactRejection),
            "incremental-pairing" => Ok(Method::IncrementalPairing),
            "edge-swap-mcmc" => Ok(Method::EdgeSwapMcmc),
            other => Err(Error::MalformedInput(format!("unknown sampling method `{other}`"))),
        }
    }
}

/// Restarts allowed before the pairing samplers give up.
pub const DEFAULT_MAX_RESTARTS: u32 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct SamplerConfig {
    pub degrees: DegreeSequence,
    pub method: Method,
    pub seed: u64,
    pub stream: u64,
    /// Swaps before the first sample. `None` means `20 |E|`.
    pub burn_in: Option<u64>,
    /// Swaps between samples. `None` means `5 |E|`.
    pub thinning: Option<u64>,
    pub max_restarts: u32,
}

impl SamplerConfig {
    pub fn new(degrees: DegreeSequence, method: Method, seed: u64) -> Self {
        SamplerConfig {
            degrees,
            method,
            seed,
            stream: 0,
            burn_in: None,
            thinning: None,
            max_restarts: DEFAULT_MAX_RESTARTS,
        }
    }

    pub fn regular(n: usize, d: usize, method: Method, seed: u64) -> Self {
        Self::new(DegreeSequence::regular(n, d), method, seed)
    }

    pub fn with_stream(mut self, stream: u64) -> Self {
        self.stream = stream;
        self
    }

    pub fn with_burn_in(mut self, swaps: u64) -> Self {
        self.burn_in = Some(swaps);
        self
    }

    pub fn with_thinning(mut self, swaps: u64) -> Self {
        self.thinning = Some(swaps);
        self
    }

    pub fn n(&self) -> usize {
        self.degrees.len()
    }

    pub fn edge_total(&self) -> u64 {
        self.degrees.total() / 2
    }

    pub fn burn_in_swaps(&self) -> u64 {
        self.burn_in.unwrap_or(20 * self.edge_total())
    }

    pub fn thinning_swaps(&self) -> u64 {
        self.thinning.unwrap_or(5 * self.edge_total())
    }

    pub fn rng(&self) -> SamplerRng {
        rng_for(self.seed, self.stream)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if self.degrees.total() % 2 == 1 {
            return Err(Error::Model(format!("degree sum {} is odd", self.degrees.total())));
        }
        if n > 0 && self.degrees.max() >= n {
            return Err(Error::Model(format!("degree {} needs more than {n} vertices", self.degrees.max())));
        }
        if n > u32::MAX as usize {
            return Err(Error::Capability(format!("n = {n} exceeds the sampler's vertex range")));
        }
        Ok(())
    }
}

/// A stream of graphs from one configuration. Independent methods draw a
/// fresh graph per call; the swap chain keeps running between calls.
pub struct RegularSampler {
    cfg: SamplerConfig,
    rng: SamplerRng,
    chain: Option<SwapChain>,
}

impl RegularSampler {
    pub fn new(cfg: SamplerConfig) -> Result<Self> {
        cfg.validate()?;
        let rng = cfg.rng();
        Ok(RegularSampler { cfg, rng, chain: None })
    }

    pub fn config(&self) -> &SamplerConfig {
        &self.cfg
    }

    /// Advances to the next sample and hands it to `f` without building a
    /// [`SimpleGraph`].
    pub fn next_with<T>(&mut self, f: impl FnOnce(&SwapGraph) -> T) -> Result<T> {
        match self.cfg.method {
            Method::ExactRejection => {
                let g = pairing_rejection(&self.cfg.degrees, &mut self.rng, self.cfg.max_restarts)?;
                Ok(f(&g))
            }
            Method::IncrementalPairing => {
                let g = incremental_pairing(&self.cfg.degrees, &mut self.rng, self.cfg.max_restarts)?;
                Ok(f(&g))
            }
            Method::EdgeSwapMcmc => {
                match &mut self.chain {
                    Some(chain) => chain.run(self.cfg.thinning_swaps(), &mut self.rng),
                    None => {
                        let start = incremental_pairing(&self.cfg.degrees, &mut self.rng, self.cfg.max_restarts)?;
                        let mut chain = SwapChain::unconstrained(start);
                        chain.run(self.cfg.burn_in_swaps(), &mut self.rng);
                        self.chain = Some(chain);
                    }
                }
                Ok(f(self.chain.as_ref().expect("chain initialised").graph()))
            }
        }
    }

    pub fn next_graph(&mut self) -> Result<SimpleGraph> {
        self.next_with(|g| g.to_simple_graph())
    }
}

/// One graph from `cfg`.
pub fn sample_regular(cfg: &SamplerConfig) -> Result<SimpleGraph> {
    RegularSampler::new(cfg.clone())?.next_graph()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k4_is_the_only_outcome() {
        for method in [Method::ExactRejection, Method::IncrementalPairing, Method::EdgeSwapMcmc] {
            for seed in 0..5 {
                let g = sample_regular(&SamplerConfig::regular(4, 3, method, seed)).unwrap();
                assert_eq!(g, SimpleGraph::complete(4));
            }
        }
    }

    #[test]
    fn large_mcmc_sample_is_regular() {
        let g = sample_regular(&SamplerConfig::regular(1000, 10, Method::EdgeSwapMcmc, 7)).unwrap();
        assert!(g.is_regular(10));
        assert_eq!(g.edge_count(), 5000);
    }

    #[test]
    fn odd_degree_sum_is_a_model_error() {
        let err = sample_regular(&SamplerConfig::regular(5, 3, Method::ExactRejection, 1)).unwrap_err();
        assert!(matches!(err, Error::Model(_)));
        let err = sample_regular(&SamplerConfig::regular(4, 4, Method::ExactRejection, 1)).unwrap_err();
        assert!(matches!(err, Error::Model(_)));
    }

    #[test]
    fn same_seed_same_graph() {
        for method in [Method::ExactRejection, Method::IncrementalPairing, Method::EdgeSwapMcmc] {
            let cfg = SamplerConfig::regular(40, 4, method, 99).with_stream(3);
            assert_eq!(sample_regular(&cfg).unwrap(), sample_regular(&cfg).unwrap());
        }
    }

    #[test]
    fn streams_differ() {
        let a = SamplerConfig::regular(40, 4, Method::IncrementalPairing, 99);
        let b = a.clone().with_stream(1);
        assert_ne!(sample_regular(&a).unwrap(), sample_regular(&b).unwrap());
    }

    #[test]
    fn method_names_round_trip() {
        for m in [Method::ExactRejection, Method::IncrementalPairing, Method::EdgeSwapMcmc] {
            assert_eq!(Method::parse(m.name()).unwrap(), m);
        }
        assert!(Method::parse("gibbs").is_err());
    }
}
