use alloc::format;
use alloc::vec::Vec;

use rand::Rng;

use super::pairing::pairing_rejection;
use super::swap::{SwapChain, SwapGraph};
use super::{Method, SamplerConfig, SamplerRng};
use crate::error::{Error, Result};
use crate::estimates::ConditioningPair;
use crate::graph::{DegreeSequence, SimpleGraph};

fn allowed(g: &SwapGraph, h2: &SimpleGraph, a: usize, b: usize) -> bool {
    a != b && !g.has_edge(a, b) && !h2.has_edge(a, b)
}

/// A member of the class: every edge of `H1`, no edge of `H2`, degrees
/// `dseq`. `H1` is placed first, the largest remaining deficiency is
/// paired greedily, and leftover deficiency is repaired by rewiring random
/// non-required edges `xy` into `ax`, `by`.
pub fn initial_graph<R: Rng + ?Sized>(ctx: &ConditioningPair, dseq: &DegreeSequence, rng: &mut R) -> Result<SwapGraph> {
    let n = dseq.len();
    if ctx.n() != n {
        return Err(Error::MalformedInput(format!("conditioning on {} vertices, degrees for {n}", ctx.n())));
    }
    let (h1, h2) = (ctx.required(), ctx.forbidden());
    let mut deficit: Vec<usize> = dseq
        .residual(h1)
        .map_err(|e| Error::Construction(format!("required edges exceed the degrees: {}", e.message())))?
        .values()
        .to_vec();
    if deficit.iter().sum::<usize>() % 2 == 1 {
        return Err(Error::Construction("residual degree sum is odd".into()));
    }
    let mut g = SwapGraph::from_simple_graph(h1);

    while let Some(a) = (0..n).filter(|&v| deficit[v] > 0).max_by_key(|&v| (deficit[v], core::cmp::Reverse(v))) {
        let mut cands: Vec<usize> = (0..n).filter(|&b| deficit[b] > 0 && allowed(&g, h2, a, b)).collect();
        if cands.is_empty() {
            break;
        }
        cands.sort_by_key(|&b| (core::cmp::Reverse(deficit[b]), b));
        for &b in cands.iter().take(deficit[a]) {
            g.push_edge(a, b);
            deficit[a] -= 1;
            deficit[b] -= 1;
        }
    }

    let budget = 200 * (n + g.edge_count() + 1);
    let mut tries = 0usize;
    loop {
        let open: Vec<usize> = (0..n).filter(|&v| deficit[v] > 0).collect();
        if open.is_empty() {
            return Ok(g);
        }
        if let Some((a, b)) = open
            .iter()
            .enumerate()
            .find_map(|(k, &a)| open[k + 1..].iter().find(|&&b| allowed(&g, h2, a, b)).map(|&b| (a, b)))
        {
            g.push_edge(a, b);
            deficit[a] -= 1;
            deficit[b] -= 1;
            continue;
        }
        let a = open[rng.gen_range(0..open.len())];
        let b = if deficit[a] >= 2 && (open.len() == 1 || rng.gen::<bool>()) {
            a
        } else {
            let others: Vec<usize> = open.iter().copied().filter(|&v| v != a).collect();
            if others.is_empty() {
                return Err(Error::Construction("cannot complete the residual degrees".into()));
            }
            others[rng.gen_range(0..others.len())]
        };
        loop {
            tries += 1;
            if tries > budget || g.edge_count() == 0 {
                return Err(Error::Construction(format!(
                    "no graph with the requested constraints after {tries} repairs"
                )));
            }
            let idx = rng.gen_range(0..g.edge_count());
            let (mut x, mut y) = g.edges()[idx];
            if rng.gen::<bool>() {
                core::mem::swap(&mut x, &mut y);
            }
            let (x, y) = (x as usize, y as usize);
            if h1.has_edge(x, y) || !allowed(&g, h2, a, x) || !allowed(&g, h2, b, y) {
                continue;
            }
            if a == b && x == y {
                continue;
            }
            g.remove_at(idx);
            g.push_edge(a, x);
            g.push_edge(b, y);
            deficit[a] -= 1;
            deficit[b] -= 1;
            break;
        }
    }
}

/// Draws graphs from the class fixed by `ctx` and `dseq`.
///
/// `ExactRejection` samples uniform graphs and keeps the members of the
/// class, so it is exactly uniform. Every other method runs the restricted
/// swap chain from [`initial_graph`].
pub struct ConditionalSampler {
    ctx: ConditioningPair,
    cfg: SamplerConfig,
    rng: SamplerRng,
    chain: Option<SwapChain>,
    started: bool,
}

impl ConditionalSampler {
    pub fn new(ctx: ConditioningPair, cfg: SamplerConfig) -> Result<Self> {
        cfg.validate()?;
        let mut rng = cfg.rng();
        let start = initial_graph(&ctx, &cfg.degrees, &mut rng)?;
        let chain = match cfg.method {
            Method::ExactRejection => None,
            _ => Some(SwapChain::constrained(start, ctx.required(), ctx.forbidden())?),
        };
        Ok(ConditionalSampler { ctx, cfg, rng, chain, started: false })
    }

    fn in_class(&self, g: &SwapGraph) -> bool {
        let (h1, h2) = (self.ctx.required(), self.ctx.forbidden());
        h1.edges().all(|e| g.has_edge(e.lo(), e.hi()))
            && (h2.is_empty() || g.edges().iter().all(|&(a, b)| !h2.has_edge(a as usize, b as usize)))
    }

    pub fn next_with<T>(&mut self, f: impl FnOnce(&SwapGraph) -> T) -> Result<T> {
        if let Some(chain) = &mut self.chain {
            let steps = if self.started { self.cfg.thinning_swaps() } else { self.cfg.burn_in_swaps() };
            self.started = true;
            chain.run(steps, &mut self.rng);
            return Ok(f(chain.graph()));
        }
        for _ in 0..self.cfg.max_restarts {
            let g = pairing_rejection(&self.cfg.degrees, &mut self.rng, self.cfg.max_restarts)?;
            if self.in_class(&g) {
                return Ok(f(&g));
            }
        }
        Err(Error::RetryLimit(format!("no class member in {} uniform draws", self.cfg.max_restarts)))
    }

    pub fn next_graph(&mut self) -> Result<SimpleGraph> {
        self.next_with(|g| g.to_simple_graph())
    }
}

/// One member of the class fixed by `ctx` and `dseq`.
pub fn conditional_sample(ctx: &ConditioningPair, dseq: &DegreeSequence, cfg: &SamplerConfig) -> Result<SimpleGraph> {
    let cfg = SamplerConfig { degrees: dseq.clone(), ..cfg.clone() };
    ConditionalSampler::new(ctx.clone(), cfg)?.next_graph()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::rng_for;

    fn ctx(n: usize, h1: &[(usize, usize)], h2: &[(usize, usize)]) -> ConditioningPair {
        ConditioningPair::new(
            SimpleGraph::from_edges(n, h1.iter().copied()).unwrap(),
            SimpleGraph::from_edges(n, h2.iter().copied()).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn initial_graph_respects_constraints() {
        let c = ctx(10, &[(0, 1), (1, 2), (0, 2)], &[(3, 4), (5, 6), (0, 9)]);
        let dseq = DegreeSequence::regular(10, 3);
        for seed in 0..20 {
            let g = initial_graph(&c, &dseq, &mut rng_for(seed, 0)).unwrap().to_simple_graph();
            assert!(g.is_regular(3));
            assert!(c.required().is_subgraph_of(&g));
            assert!(c.forbidden().is_edge_disjoint(&g));
        }
    }

    #[test]
    fn complete_forbidden_graph_is_infeasible() {
        let c = ConditioningPair::new(SimpleGraph::empty(6), SimpleGraph::complete(6)).unwrap();
        let cfg = SamplerConfig::regular(6, 3, Method::EdgeSwapMcmc, 1);
        let err = conditional_sample(&c, &DegreeSequence::regular(6, 3), &cfg).unwrap_err();
        assert!(matches!(err, Error::Construction(_)));
    }

    #[test]
    fn spanning_h1_pins_the_graph() {
        let k4 = SimpleGraph::complete(4);
        let c = ConditioningPair::new(SimpleGraph::cycle(4), SimpleGraph::empty(4)).unwrap();
        for method in [Method::ExactRejection, Method::EdgeSwapMcmc] {
            let cfg = SamplerConfig::regular(4, 3, method, 2);
            assert_eq!(conditional_sample(&c, &DegreeSequence::regular(4, 3), &cfg).unwrap(), k4);
        }
        // H1 = a perfect matching plus 6-cycle: the unique 3-regular graph containing it
        let mut h1 = SimpleGraph::cycle(6);
        for (a, b) in [(0, 3), (1, 4), (2, 5)] {
            h1.add_edge(a, b).unwrap();
        }
        let c = ConditioningPair::new(h1.clone(), SimpleGraph::empty(6)).unwrap();
        let cfg = SamplerConfig::regular(6, 3, Method::EdgeSwapMcmc, 2);
        assert_eq!(conditional_sample(&c, &DegreeSequence::regular(6, 3), &cfg).unwrap(), h1);
    }

    #[test]
    fn required_degree_overflow() {
        let c = ctx(5, &[(0, 1), (0, 2), (0, 3)], &[]);
        let err = initial_graph(&c, &DegreeSequence::regular(5, 2), &mut rng_for(0, 0)).unwrap_err();
        assert!(matches!(err, Error::Construction(_)));
    }
}
