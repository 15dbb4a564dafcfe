use alloc::format;
use alloc::vec::Vec;

use super::conditional::ConditionalSampler;
use super::SamplerConfig;
use crate::error::{Error, Result};
use crate::estimates::{ConditioningPair, ErrorOrder, ProbEstimate, Source};
use crate::graph::{DegreeSequence, SimpleGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `uv, xy -> ux, vy` on a graph containing `uv`.
    Forward,
    /// `ux, vy -> uv, xy` on a graph avoiding `uv`.
    Backward,
}

/// Switchings available at one graph for the pair `uv`: the exhaustive list
/// and the terms of the closed-form count, each found independently.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchingCounts {
    pub direction: Direction,
    /// Every valid ordered pair `(x, y)`, from a scan over all of `[n]^2`.
    pub pairs: Vec<(usize, usize)>,
    pub m_tilde: u64,
    pub du_tilde: u64,
    pub dv_tilde: u64,
    pub x_u: u64,
    pub x_v: u64,
    pub x_uv: u64,
    pub y1: u64,
    pub y2: u64,
}

impl SwitchingCounts {
    /// `f(G)` or `b(G')` as counted by the scan.
    pub fn count(&self) -> u64 {
        self.pairs.len() as u64
    }

    /// `M~ - 2(d~_u + d~_v) + 2 - X_u - X_v + X_uv` forward,
    /// `d~_u d~_v - Y_1 - Y_2` backward.
    pub fn closed_form(&self) -> i64 {
        let c = |x: u64| x as i64;
        match self.direction {
            Direction::Forward => {
                c(self.m_tilde) - 2 * (c(self.du_tilde) + c(self.dv_tilde)) + 2 - c(self.x_u) - c(self.x_v)
                    + c(self.x_uv)
            }
            Direction::Backward => c(self.du_tilde) * c(self.dv_tilde) - c(self.y1) - c(self.y2),
        }
    }
}

fn check_state(g: &SimpleGraph, u: usize, v: usize, ctx: &ConditioningPair) -> Result<()> {
    if ctx.n() != g.n() {
        return Err(Error::MalformedInput(format!("conditioning on {} vertices, graph on {}", ctx.n(), g.n())));
    }
    if u >= g.n() || v >= g.n() || u == v {
        return Err(Error::OutOfRange(format!("bad vertex pair {u}, {v}")));
    }
    if ctx.union().has_edge(u, v) {
        return Err(Error::Contract(format!("{u}-{v} is fixed by the conditioning")));
    }
    if !ctx.required().is_subgraph_of(g) || !ctx.forbidden().is_edge_disjoint(g) {
        return Err(Error::Contract("graph is outside the conditioned class".into()));
    }
    Ok(())
}

fn residual(g: &SimpleGraph, h1: &SimpleGraph, w: usize) -> u64 {
    (g.degree(w) - h1.degree(w)) as u64
}

fn in_g_or_h2(g: &SimpleGraph, h2: &SimpleGraph, a: usize, b: usize) -> bool {
    g.has_edge(a, b) || h2.has_edge(a, b)
}

fn in_g_minus_h1(g: &SimpleGraph, h1: &SimpleGraph, a: usize, b: usize) -> bool {
    g.has_edge(a, b) && !h1.has_edge(a, b)
}

fn forward_valid(g: &SimpleGraph, ctx: &ConditioningPair, u: usize, v: usize, x: usize, y: usize) -> bool {
    let (h1, h2) = (ctx.required(), ctx.forbidden());
    x != y
        && ![u, v].contains(&x)
        && ![u, v].contains(&y)
        && in_g_minus_h1(g, h1, x, y)
        && !in_g_or_h2(g, h2, u, x)
        && !in_g_or_h2(g, h2, v, y)
}

fn backward_valid(g: &SimpleGraph, ctx: &ConditioningPair, u: usize, v: usize, x: usize, y: usize) -> bool {
    let (h1, h2) = (ctx.required(), ctx.forbidden());
    x != y && x != u && y != v && in_g_minus_h1(g, h1, x, u) && in_g_minus_h1(g, h1, y, v) && !in_g_or_h2(g, h2, x, y)
}

fn scan(n: usize, valid: impl Fn(usize, usize) -> bool) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if valid(x, y) {
                out.push((x, y));
            }
        }
    }
    out
}

fn neighbours_in_g_or_h2(g: &SimpleGraph, h2: &SimpleGraph, w: usize) -> Vec<usize> {
    let mut out: Vec<usize> = g.neighbors(w).iter().chain(h2.neighbors(w)).copied().collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Forward switchings at `g` (which contains `uv`): ordered `(x, y)` with
/// `xy` in `G \ H1`, `u, v, x, y` distinct, and neither `ux` nor `vy` in
/// `G ∪ H2`.
pub fn forward_switchings(g: &SimpleGraph, u: usize, v: usize, ctx: &ConditioningPair) -> Result<SwitchingCounts> {
    check_state(g, u, v, ctx)?;
    if !g.has_edge(u, v) {
        return Err(Error::Contract(format!("forward switching needs {u}-{v} in the graph")));
    }
    let (h1, h2) = (ctx.required(), ctx.forbidden());
    let pairs = scan(g.n(), |x, y| forward_valid(g, ctx, u, v, x, y));

    let outside = |w: usize| w != u && w != v;
    let free_edges_at = |x: usize| g.neighbors(x).iter().filter(|&&y| outside(y) && !h1.has_edge(x, y)).count() as u64;
    let nu: Vec<usize> = neighbours_in_g_or_h2(g, h2, u).into_iter().filter(|&w| outside(w)).collect();
    let nv: Vec<usize> = neighbours_in_g_or_h2(g, h2, v).into_iter().filter(|&w| outside(w)).collect();
    let x_u = nu.iter().map(|&x| free_edges_at(x)).sum();
    let x_v = nv.iter().map(|&y| free_edges_at(y)).sum();
    let x_uv = nu.iter().map(|&x| nv.iter().filter(|&&y| x != y && in_g_minus_h1(g, h1, x, y)).count() as u64).sum();

    Ok(SwitchingCounts {
        direction: Direction::Forward,
        pairs,
        m_tilde: 2 * (g.edge_count() - h1.edge_count()) as u64,
        du_tilde: residual(g, h1, u),
        dv_tilde: residual(g, h1, v),
        x_u,
        x_v,
        x_uv,
        y1: 0,
        y2: 0,
    })
}

/// Backward switchings at `g` (which avoids `uv`): ordered `(x, y)` with
/// `xu`, `yv` in `G \ H1` and `xy` not in `G ∪ H2`.
pub fn backward_switchings(g: &SimpleGraph, u: usize, v: usize, ctx: &ConditioningPair) -> Result<SwitchingCounts> {
    check_state(g, u, v, ctx)?;
    if g.has_edge(u, v) {
        return Err(Error::Contract(format!("backward switching needs {u}-{v} absent")));
    }
    let (h1, h2) = (ctx.required(), ctx.forbidden());
    let pairs = scan(g.n(), |x, y| backward_valid(g, ctx, u, v, x, y));

    let free = |w: usize| -> Vec<usize> { g.neighbors(w).iter().copied().filter(|&x| !h1.has_edge(w, x)).collect() };
    let (nu, nv) = (free(u), free(v));
    let y1 = nu.iter().map(|&x| nv.iter().filter(|&&y| x != y && in_g_or_h2(g, h2, x, y)).count() as u64).sum();
    let y2 = nu.iter().filter(|x| nv.contains(x)).count() as u64;

    Ok(SwitchingCounts {
        direction: Direction::Backward,
        pairs,
        m_tilde: 2 * (g.edge_count() - h1.edge_count()) as u64,
        du_tilde: residual(g, h1, u),
        dv_tilde: residual(g, h1, v),
        x_u: 0,
        x_v: 0,
        x_uv: 0,
        y1,
        y2,
    })
}

/// Applies one switching. The pair must be valid for `direction` at `g`.
pub fn apply_switching(
    g: &SimpleGraph,
    ctx: &ConditioningPair,
    (u, v): (usize, usize),
    (x, y): (usize, usize),
    direction: Direction,
) -> Result<SimpleGraph> {
    check_state(g, u, v, ctx)?;
    if x >= g.n() || y >= g.n() {
        return Err(Error::OutOfRange(format!("bad vertex pair {x}, {y}")));
    }
    let mut out = g.clone();
    match direction {
        Direction::Forward => {
            if !g.has_edge(u, v) || !forward_valid(g, ctx, u, v, x, y) {
                return Err(Error::Contract(format!("({x}, {y}) is not a forward switching for {u}-{v}")));
            }
            out.remove_edge(u, v)?;
            out.remove_edge(x, y)?;
            out.add_edge(u, x)?;
            out.add_edge(v, y)?;
        }
        Direction::Backward => {
            if g.has_edge(u, v) || !backward_valid(g, ctx, u, v, x, y) {
                return Err(Error::Contract(format!("({x}, {y}) is not a backward switching for {u}-{v}")));
            }
            out.remove_edge(u, x)?;
            out.remove_edge(v, y)?;
            out.add_edge(u, v)?;
            out.add_edge(x, y)?;
        }
    }
    Ok(out)
}

/// Streaming mean and variance (Welford).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunningMoments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl RunningMoments {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance; 0 below two observations.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    /// Standard error of the mean.
    pub fn standard_error(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            libm::sqrt(self.variance() / self.count as f64)
        }
    }
}

/// Everything measured while estimating one conditional edge probability by
/// switchings. `f`, `x_u`, `x_v`, `x_uv` are averaged over the class with
/// `uv` present, `b`, `y1`, `y2` over the class with `uv` absent.
#[derive(Debug, Clone, PartialEq)]
pub struct SwitchingSummary {
    pub estimate: ProbEstimate,
    pub f: RunningMoments,
    pub b: RunningMoments,
    pub x_u: RunningMoments,
    pub x_v: RunningMoments,
    pub x_uv: RunningMoments,
    pub y1: RunningMoments,
    pub y2: RunningMoments,
}

/// Monte Carlo estimate of `E b / (E f + E b)`: `f` averaged over the class
/// with `uv` added to `H1`, `b` over the class with `uv` added to `H2`.
/// Each side draws `samples` graphs from its own stream
/// (`2 cfg.stream` and `2 cfg.stream + 1`). The estimate's `error_scale` is
/// the delta-method standard error.
///
/// A side whose class cannot be constructed counts as empty, giving 0 or 1
/// exactly; saturated endpoints give 0 without sampling.
pub fn switching_statistics(
    ctx: &ConditioningPair,
    dseq: &DegreeSequence,
    u: usize,
    v: usize,
    cfg: &SamplerConfig,
    samples: usize,
) -> Result<SwitchingSummary> {
    let fixed = |one: bool| {
        let mut estimate = ProbEstimate::zero(Source::SwitchingMonteCarlo, ErrorOrder::StandardError);
        if one {
            estimate = ProbEstimate { value: 1.0, exact: Some(crate::estimates::int(1)), ..estimate };
        }
        let empty = RunningMoments::default();
        SwitchingSummary { estimate, f: empty, b: empty, x_u: empty, x_v: empty, x_uv: empty, y1: empty, y2: empty }
    };
    if u >= dseq.len() || v >= dseq.len() || u == v {
        return Err(Error::OutOfRange(format!("bad vertex pair {u}, {v}")));
    }
    if ctx.union().has_edge(u, v) {
        return Err(Error::Contract(format!("{u}-{v} is fixed by the conditioning")));
    }
    if samples == 0 {
        return Err(Error::OutOfRange("need at least one sample per side".into()));
    }
    let res = dseq.residual(ctx.required())?;
    if res.get(u) == 0 || res.get(v) == 0 {
        return Ok(fixed(false));
    }
    let side = |c: ConditioningPair, stream: u64| {
        let cfg = SamplerConfig { degrees: dseq.clone(), stream, ..cfg.clone() };
        match ConditionalSampler::new(c, cfg) {
            Ok(s) => Ok(Some(s)),
            Err(Error::Construction(_)) => Ok(None),
            Err(e) => Err(e),
        }
    };
    let plus = side(ctx.with_required(u, v)?, 2 * cfg.stream)?;
    let minus = side(ctx.with_forbidden(u, v)?, 2 * cfg.stream + 1)?;
    let (mut plus, mut minus) = match (plus, minus) {
        (Some(p), Some(m)) => (p, m),
        (None, Some(_)) => return Ok(fixed(false)),
        (Some(_), None) => return Ok(fixed(true)),
        (None, None) => return Err(Error::Construction("neither side of the pair has a member".into())),
    };

    let mut out = fixed(false);
    for _ in 0..samples {
        let c = forward_switchings(&plus.next_graph()?, u, v, ctx)?;
        out.f.push(c.count() as f64);
        out.x_u.push(c.x_u as f64);
        out.x_v.push(c.x_v as f64);
        out.x_uv.push(c.x_uv as f64);
        let c = backward_switchings(&minus.next_graph()?, u, v, ctx)?;
        out.b.push(c.count() as f64);
        out.y1.push(c.y1 as f64);
        out.y2.push(c.y2 as f64);
    }
    let (f, b) = (out.f.mean(), out.b.mean());
    let total = f + b;
    if total == 0.0 {
        return Err(Error::UndefinedProbability("no switchings observed on either side".into()));
    }
    let (vf, vb) = (out.f.standard_error(), out.b.standard_error());
    let var = (f * f * vb * vb + b * b * vf * vf) / (total * total * total * total);
    out.estimate = ProbEstimate {
        value: b / total,
        exact: None,
        source: Source::SwitchingMonteCarlo,
        error_order: ErrorOrder::StandardError,
        error_scale: libm::sqrt(var),
    };
    Ok(out)
}

/// The estimate part of [`switching_statistics`].
pub fn switching_ratio_estimate(
    ctx: &ConditioningPair,
    dseq: &DegreeSequence,
    u: usize,
    v: usize,
    cfg: &SamplerConfig,
    samples: usize,
) -> Result<ProbEstimate> {
    Ok(switching_statistics(ctx, dseq, u, v, cfg, samples)?.estimate)
}
