use alloc::format;
use alloc::vec::Vec;

use num_rational::BigRational;

use super::{int, rat, ConditioningPair};
use crate::error::{Error, Result};
use crate::graph::{DegreeSequence, SimpleGraph};

fn check_pair_regular(h: &SimpleGraph, u: usize, v: usize, d: usize) -> Result<()> {
    if u >= h.n() || v >= h.n() {
        return Err(Error::OutOfRange(format!("pair {u}-{v} outside [0, {})", h.n())));
    }
    if u == v {
        return Err(Error::MalformedInput(format!("pair {u}-{v} is a loop")));
    }
    if h.has_edge(u, v) {
        return Err(Error::Contract(format!("{u}-{v} already lies in H")));
    }
    if h.max_degree() > d {
        return Err(Error::Contract(format!("H has a vertex of degree {} > d = {d}", h.max_degree())));
    }
    Ok(())
}

/// Second-order correction `phi_H(uv)` for `d`-regular degrees:
///
/// `-d - 2|H| - (d-1)(d_u + d_v) + d_u d_v + sum_{x ~ u} d_x + sum_{y ~ v} d_y`
///
/// with all degrees and neighborhoods taken in `H`.
pub fn phi(h: &SimpleGraph, u: usize, v: usize, d: usize) -> Result<i64> {
    check_pair_regular(h, u, v, d)?;
    let d = d as i64;
    let du = h.degree(u) as i64;
    let dv = h.degree(v) as i64;
    let nbr_sum = |w: usize| h.neighbors(w).iter().map(|&x| h.degree(x) as i64).sum::<i64>();
    Ok(-d - 2 * h.edge_count() as i64 - (d - 1) * (du + dv) + du * dv + nbr_sum(u) + nbr_sum(v))
}

/// `-2|H| - d(1 + d_u + d_v)`, i.e. [`phi`] with its bounded part dropped.
pub fn phi_approx(h: &SimpleGraph, u: usize, v: usize, d: usize) -> Result<i64> {
    check_pair_regular(h, u, v, d)?;
    let d = d as i64;
    Ok(-2 * h.edge_count() as i64 - d * (1 + h.degree(u) as i64 + h.degree(v) as i64))
}

/// Ordered pairs `(x, y)` with `xy ∈ H1 ∪ H2`, `xu, yv ∉ H1 ∪ H2` and
/// `{x, y} ∩ {u, v} = ∅`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WPairSet {
    pub pairs: Vec<(usize, usize)>,
}

impl WPairSet {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

pub fn build_w_set(ctx: &ConditioningPair, u: usize, v: usize) -> WPairSet {
    let union = ctx.union();
    let mut pairs = Vec::new();
    for e in union.edges() {
        let (a, b) = e.endpoints();
        for (x, y) in [(a, b), (b, a)] {
            if x == u || x == v || y == u || y == v {
                continue;
            }
            if union.has_edge(x, u) || union.has_edge(y, v) {
                continue;
            }
            pairs.push((x, y));
        }
    }
    pairs.sort_unstable();
    WPairSet { pairs }
}

pub(super) struct Residual {
    pub seq: DegreeSequence,
    pub m: u64,
    pub m_tilde: u64,
    pub m2_tilde: u128,
}

pub(super) fn residual(ctx: &ConditioningPair, dseq: &DegreeSequence) -> Result<Residual> {
    if dseq.len() != ctx.n() {
        return Err(Error::MalformedInput(format!(
            "degree sequence of length {} for graphs on {} vertices",
            dseq.len(),
            ctx.n()
        )));
    }
    let seq = dseq.residual(ctx.required())?;
    let m_tilde = seq.total();
    let m2_tilde = seq.falling_sum(2);
    Ok(Residual { seq, m: dseq.total(), m_tilde, m2_tilde })
}

pub(super) fn check_pair(ctx: &ConditioningPair, u: usize, v: usize) -> Result<()> {
    if u >= ctx.n() || v >= ctx.n() {
        return Err(Error::OutOfRange(format!("pair {u}-{v} outside [0, {})", ctx.n())));
    }
    if u == v {
        return Err(Error::MalformedInput(format!("pair {u}-{v} is a loop")));
    }
    if ctx.union().has_edge(u, v) {
        return Err(Error::Contract(format!("{u}-{v} lies in H1 ∪ H2")));
    }
    Ok(())
}

pub(super) fn bar_phi_with(ctx: &ConditioningPair, r: &Residual, u: usize, v: usize) -> BigRational {
    let dt = |w: usize| r.seq.get(w) as i128;
    let union = ctx.union();
    let nbr_sum = |w: usize| union.neighbors(w).iter().map(|&x| dt(x)).sum::<i128>();
    let (du, dv) = (dt(u), dt(v));
    let m2_over_m = if r.m_tilde == 0 { int(0) } else { rat(r.m2_tilde as i128, r.m_tilde as i128) };
    int(-2 * (du + dv) + 2 - nbr_sum(u) - nbr_sum(v) + du * dv) - int(du + dv - 2) * m2_over_m
}

/// `phi_bar_{H1}(uv)`:
///
/// `-2(d~_u + d~_v) + 2 - sum_{x ~ u} d~_x - sum_{y ~ v} d~_y
///  - (d~_u + d~_v - 2) M~_2 / M~ + d~_u d~_v`
///
/// with neighborhoods in `H1 ∪ H2` and `d~ = d - d^{H1}`.
pub fn bar_phi(ctx: &ConditioningPair, dseq: &DegreeSequence, u: usize, v: usize) -> Result<BigRational> {
    check_pair(ctx, u, v)?;
    let r = residual(ctx, dseq)?;
    Ok(bar_phi_with(ctx, &r, u, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::SimpleGraph;

    #[test]
    fn phi_examples() {
        assert_eq!(phi(&SimpleGraph::empty(6), 0, 1, 5).unwrap(), -5);
        // single edge {u, w}, d = 4
        let h = SimpleGraph::from_edges(4, [(0, 2)]).unwrap();
        assert_eq!(phi(&h, 0, 1, 4).unwrap(), -8);
        // path u - w - v, d = 7
        let h = SimpleGraph::from_edges(3, [(0, 2), (2, 1)]).unwrap();
        assert_eq!(phi(&h, 0, 1, 7).unwrap(), -18);
        assert_eq!(phi(&h, 0, 1, 7).unwrap(), -3 * 7 + 3);
    }

    #[test]
    fn phi_approx_examples() {
        assert_eq!(phi_approx(&SimpleGraph::empty(6), 0, 1, 5).unwrap(), -5);
        let h = SimpleGraph::from_edges(4, [(0, 2)]).unwrap();
        assert_eq!(phi_approx(&h, 0, 1, 4).unwrap(), -10);
        let h = SimpleGraph::from_edges(3, [(0, 2), (2, 1)]).unwrap();
        assert_eq!(phi_approx(&h, 0, 1, 7).unwrap(), -25);
    }

    #[test]
    fn phi_rejects_edge_in_h() {
        let h = SimpleGraph::from_edges(3, [(0, 1)]).unwrap();
        assert!(matches!(phi(&h, 0, 1, 3), Err(Error::Contract(_))));
        assert!(matches!(phi(&h, 1, 0, 3), Err(Error::Contract(_))));
    }

    #[test]
    fn bar_phi_empty_regular_is_minus_d_squared() {
        // hand expansion: -4d + 2 - (2d - 2)(d - 1) + d^2 = -d^2
        for d in 1..8usize {
            let n = 2 * (d + 2);
            let ctx = ConditioningPair::empty(n);
            let got = bar_phi(&ctx, &DegreeSequence::regular(n, d), 0, 1).unwrap();
            assert_eq!(got, int(-((d * d) as i128)), "d={d}");
        }
    }

    #[test]
    fn bar_phi_unit_residuals() {
        // d~_u = d~_v = 1, no H-neighbors, M~_2 = 0
        let ctx = ConditioningPair::empty(4);
        let got = bar_phi(&ctx, &DegreeSequence::regular(4, 1), 0, 1).unwrap();
        assert_eq!(got, int(-1));
    }

    #[test]
    fn w_set_examples() {
        let empty = ConditioningPair::empty(6);
        assert!(build_w_set(&empty, 0, 1).is_empty());

        let h1 = SimpleGraph::from_edges(6, [(2, 3)]).unwrap();
        let ctx = ConditioningPair::new(h1, SimpleGraph::empty(6)).unwrap();
        assert_eq!(build_w_set(&ctx, 0, 1).pairs, [(2, 3), (3, 2)]);

        // x = 2 adjacent to u = 0 in H1: (2, 3) is excluded, (3, 2) kept
        let h1 = SimpleGraph::from_edges(6, [(2, 0), (2, 3)]).unwrap();
        let ctx = ConditioningPair::new(h1, SimpleGraph::empty(6)).unwrap();
        assert_eq!(build_w_set(&ctx, 0, 1).pairs, [(3, 2)]);

        // only the edge xu: it touches u, so nothing qualifies
        let h1 = SimpleGraph::from_edges(6, [(2, 0)]).unwrap();
        let ctx = ConditioningPair::new(h1, SimpleGraph::empty(6)).unwrap();
        assert!(build_w_set(&ctx, 0, 1).is_empty());
    }

    #[test]
    fn w_set_matches_brute_force() {
        let h1 = SimpleGraph::from_edges(7, [(2, 3), (0, 4), (4, 5)]).unwrap();
        let h2 = SimpleGraph::from_edges(7, [(1, 6), (5, 6), (3, 4)]).unwrap();
        let ctx = ConditioningPair::new(h1, h2).unwrap();
        let (u, v) = (0, 1);
        let uni = ctx.union();
        let mut brute = Vec::new();
        for x in 0..7 {
            for y in 0..7 {
                if x != y
                    && uni.has_edge(x, y)
                    && !uni.has_edge(x, u)
                    && !uni.has_edge(y, v)
                    && ![x, y].iter().any(|&z| z == u || z == v)
                {
                    brute.push((x, y));
                }
            }
        }
        assert_eq!(build_w_set(&ctx, u, v).pairs, brute);
    }

    proptest::proptest! {
        #[test]
        fn phi_and_bar_phi_symmetric(edges in proptest::collection::vec((0usize..9, 0usize..9), 0..12)) {
            let mut h = SimpleGraph::empty(9);
            for (a, b) in edges {
                if a != b && !h.has_edge(a, b) && a.max(b) > 1 {
                    let _ = h.add_edge(a, b);
                }
            }
            let d = h.max_degree().max(1) + 2;
            proptest::prop_assert_eq!(phi(&h, 0, 1, d).unwrap(), phi(&h, 1, 0, d).unwrap());
            let ctx = ConditioningPair::new(h, SimpleGraph::empty(9)).unwrap();
            let seq = DegreeSequence::regular(9, d);
            proptest::prop_assert_eq!(bar_phi(&ctx, &seq, 0, 1).unwrap(), bar_phi(&ctx, &seq, 1, 0).unwrap());
        }
    }
}
