use alloc::format;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::phi::{bar_phi_with, build_w_set, check_pair, phi, residual};
use super::{int, rat, ConditioningPair, ErrorOrder, ProbEstimate, Source};
use crate::error::{Error, Result};
use crate::graph::{DegreeSequence, Edge, SimpleGraph};

/// Largest `|H|` accepted by [`joint_subgraph_prob`].
pub const JOINT_MAX_EDGES: usize = 50;
/// Largest `|F|` accepted by [`cond_joint_upper_bound`].
pub const UPPER_BOUND_MAX_EDGES: usize = 10;

/// First-order conditional edge probability
/// `(d_u - d_u^{H1})(d_v - d_v^{H1}) / (M - 2|H1|)`.
pub fn cond_edge_prob_baseline(
    ctx: &ConditioningPair,
    dseq: &DegreeSequence,
    u: usize,
    v: usize,
) -> Result<ProbEstimate> {
    check_pair(ctx, u, v)?;
    let r = residual(ctx, dseq)?;
    if r.m_tilde == 0 {
        return Err(Error::Contract("M - 2|H1| must be positive".into()));
    }
    let delta = dseq.max() as f64;
    let scale = delta * delta / r.m as f64;
    let num = r.seq.get(u) as i128 * r.seq.get(v) as i128;
    Ok(ProbEstimate::from_exact(
        rat(num, r.m_tilde as i128),
        Source::BaselineConditional,
        ErrorOrder::DeltaSqOverM,
        scale,
    ))
}

fn special_scale(h_edges: usize, d: usize, n: usize) -> f64 {
    let (h, d, n) = (h_edges as f64, d as f64, n as f64);
    h / (n * n) + h * h / (d * d * n * n) + d * d / (n * n)
}

/// Refined conditional edge probability for `d`-regular degrees:
/// `d~_u d~_v / (dn) * (1 - phi_H(uv) / (dn))`.
///
/// `phi_H` already carries the `-(d-1)/n` first-order correction, so no
/// separate `(1 - (d-1)/n)` factor is applied.
pub fn cond_edge_prob_refined_regular(h: &SimpleGraph, u: usize, v: usize, d: usize, n: usize) -> Result<ProbEstimate> {
    if h.n() != n {
        return Err(Error::MalformedInput(format!("H on {} vertices, n = {n}", h.n())));
    }
    if d * n % 2 == 1 {
        return Err(Error::Model(format!("dn = {} is odd", d * n)));
    }
    if d == 0 {
        return Err(Error::Model("d must be positive".into()));
    }
    // 2|H| <= dn/2
    if 4 * h.edge_count() > d * n {
        return Err(Error::Contract(format!("|H| = {} too large for dn = {}", h.edge_count(), d * n)));
    }
    let phi_h = phi(h, u, v, d)?;
    let scale = special_scale(h.edge_count(), d, n);
    let (du, dv) = (d - h.degree(u), d - h.degree(v));
    if du == 0 || dv == 0 {
        return Ok(ProbEstimate {
            error_scale: scale,
            ..ProbEstimate::zero(Source::RefinedRegular, ErrorOrder::Special)
        });
    }
    let dn = (d * n) as i128;
    let value = rat((du * dv) as i128, dn) * (int(1) - rat(phi_h as i128, dn));
    Ok(ProbEstimate::from_exact(value, Source::RefinedRegular, ErrorOrder::Special, scale))
}

/// Refined conditional edge probability for a general degree sequence:
///
/// `d~_u d~_v / M~ * (1 - M~_2^2/M~^3 - M~_2/M~^2 - sum_W d~_x d~_y / M~^2)
///  * (1 - phi_bar / (M - 2|H1|))`.
pub fn cond_edge_prob_refined_general(
    ctx: &ConditioningPair,
    dseq: &DegreeSequence,
    u: usize,
    v: usize,
) -> Result<ProbEstimate> {
    check_pair(ctx, u, v)?;
    let r = residual(ctx, dseq)?;
    if r.m_tilde == 0 || 2 * r.m_tilde < r.m {
        return Err(Error::Contract(format!("need M~ >= M/2 > 0, got M~ = {}, M = {}", r.m_tilde, r.m)));
    }
    let delta = dseq.max() as f64;
    let m = r.m as f64;
    let scale = delta * delta * delta * delta * delta * dseq.len() as f64 / (m * m * m);
    let (du, dv) = (r.seq.get(u) as i128, r.seq.get(v) as i128);
    if du == 0 || dv == 0 {
        return Ok(ProbEstimate {
            error_scale: scale,
            ..ProbEstimate::zero(Source::RefinedGeneral, ErrorOrder::General)
        });
    }
    let mt = r.m_tilde as i128;
    let m2 = r.m2_tilde as i128;
    let w_sum: i128 =
        build_w_set(ctx, u, v).pairs.iter().map(|&(x, y)| r.seq.get(x) as i128 * r.seq.get(y) as i128).sum();
    let bracket = int(1) - rat(m2 * m2, mt * mt * mt) - rat(m2, mt * mt) - rat(w_sum, mt * mt);
    // M - 2|H1| equals M~; for regular d it is the dn - 2|H1| of the formula
    let denom = r.m as i128 - 2 * ctx.required().edge_count() as i128;
    let correction = int(1) - bar_phi_with(ctx, &r, u, v) / int(denom);
    let value = rat(du * dv, mt) * bracket * correction;
    Ok(ProbEstimate::from_exact(value, Source::RefinedGeneral, ErrorOrder::General, scale))
}

/// `P(H ⊆ G(n, d))` as the product of refined conditionals
/// `P(e_j | H_{j-1}^+)` over the edges of `h` in lexicographic order.
pub fn joint_subgraph_prob(h: &SimpleGraph, d: usize, n: usize) -> Result<ProbEstimate> {
    let order: Vec<Edge> = h.edges().collect();
    joint_subgraph_prob_ordered(h.n(), &order, d, n)
}

/// [`joint_subgraph_prob`] with an explicit edge ordering.
pub fn joint_subgraph_prob_ordered(graph_n: usize, order: &[Edge], d: usize, n: usize) -> Result<ProbEstimate> {
    if graph_n != n {
        return Err(Error::MalformedInput(format!("H on {graph_n} vertices, n = {n}")));
    }
    if order.len() > JOINT_MAX_EDGES {
        return Err(Error::Capability(format!(
            "chained product limited to {JOINT_MAX_EDGES} edges, got {}",
            order.len()
        )));
    }
    let full = SimpleGraph::from_edges(n, order.iter().map(Edge::endpoints))?;
    if full.max_degree() > d {
        return Ok(ProbEstimate::zero(Source::ChainedProduct, ErrorOrder::Chained));
    }
    let mut prefix = SimpleGraph::empty(n);
    let mut product = BigRational::one();
    let mut scale = 0.0;
    for e in order {
        let (u, v) = e.endpoints();
        let step = cond_edge_prob_refined_regular(&prefix, u, v, d, n)?;
        scale += step.error_scale;
        product *= step.exact.expect("refined estimates are exact rationals");
        if product.is_zero() {
            break;
        }
        prefix.add_edge(u, v)?;
    }
    Ok(ProbEstimate::from_exact(product, Source::ChainedProduct, ErrorOrder::Chained, scale))
}

/// Upper bound for `P(F ⊆ G(n, d) | H^+)`: the value is `lambda_F` and the
/// error scale is `1/n + |H|/(dn) + d^2/n^2`, so `band(C).1` is the bound.
pub fn cond_joint_upper_bound(f: &SimpleGraph, h: &SimpleGraph, d: usize, n: usize) -> Result<ProbEstimate> {
    if f.n() != n || h.n() != n {
        return Err(Error::MalformedInput("F and H must live on [n]".into()));
    }
    if !f.is_edge_disjoint(h) {
        return Err(Error::Contract("F and H overlap".into()));
    }
    if f.edge_count() > UPPER_BOUND_MAX_EDGES {
        return Err(Error::Capability(format!("|F| = {} exceeds {UPPER_BOUND_MAX_EDGES}", f.edge_count())));
    }
    if h.max_degree() > d {
        return Err(Error::Contract("H exceeds the degree bound".into()));
    }
    if 4 * h.edge_count() > d * n {
        return Err(Error::Contract("need dn - 2|H| >= dn/2".into()));
    }
    let (nf, df, hf) = (n as f64, d as f64, h.edge_count() as f64);
    let scale = 1.0 / nf + hf / (df * nf) + df * df / (nf * nf);
    let lambda = joint_subgraph_prob(f, d, n)?;
    Ok(ProbEstimate {
        source: Source::CorollaryUpperBound,
        error_order: ErrorOrder::Corollary,
        error_scale: scale,
        ..lambda
    })
}
