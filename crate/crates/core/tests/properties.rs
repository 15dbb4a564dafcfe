use proptest::prelude::*;
use rand::Rng;

use regraph_core::estimates::ConditioningPair;
use regraph_core::sampler::{
    apply_switching, backward_switchings, forward_switchings, rng_for, sample_regular, Direction, Method, SamplerConfig,
};
use regraph_core::triangles::{enumerate_triangles, triangle_bound_holds};
use regraph_core::{SimpleGraph, TriangleTuple};

fn arb_graph(max_n: usize) -> impl Strategy<Value = SimpleGraph> {
    (3..=max_n).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..3 * n).prop_map(move |pairs| {
            let mut g = SimpleGraph::empty(n);
            for (a, b) in pairs {
                if a != b && !g.has_edge(a, b) {
                    g.add_edge(a, b).unwrap();
                }
            }
            g
        })
    })
}

fn arb_tuple() -> impl Strategy<Value = Vec<[usize; 3]>> {
    proptest::collection::vec(
        proptest::sample::subsequence((0..9).collect::<Vec<usize>>(), 3).prop_map(|v| [v[0], v[1], v[2]]),
        1..6,
    )
}

proptest! {
    #[test]
    fn triangle_bound_on_arbitrary_graphs(g in arb_graph(14)) {
        prop_assert!(triangle_bound_holds(&g));
    }

    #[test]
    fn triangles_survive_relabeling(g in arb_graph(10), seed in any::<u64>()) {
        let mut perm: Vec<usize> = (0..g.n()).collect();
        let mut rng = rng_for(seed, 0);
        for i in (1..perm.len()).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let h = g.relabel(&perm).unwrap();
        prop_assert_eq!(enumerate_triangles(&g).len(), enumerate_triangles(&h).len());
    }

    #[test]
    fn holes_ignore_order_and_labels(tris in arb_tuple(), seed in any::<u64>()) {
        let base = TriangleTuple::new(tris.clone()).unwrap().hole_count();
        let mut rng = rng_for(seed, 1);
        let mut shuffled = tris.clone();
        for i in (1..shuffled.len()).rev() {
            shuffled.swap(i, rng.gen_range(0..=i));
        }
        prop_assert_eq!(TriangleTuple::new(shuffled).unwrap().hole_count(), base);
        let mut perm: Vec<usize> = (0..9).collect();
        for i in (1..9).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let relabeled: Vec<[usize; 3]> = tris.iter().map(|t| [perm[t[0]], perm[t[1]], perm[t[2]]]).collect();
        prop_assert_eq!(TriangleTuple::new(relabeled).unwrap().hole_count(), base);
    }

    #[test]
    fn hit_profile_accounts_for_every_incidence(tris in arb_tuple()) {
        let t = TriangleTuple::new(tris).unwrap();
        let total: usize = t.hit_multiplicities().values().sum();
        prop_assert_eq!(total, 3 * t.len());
    }
}

#[test]
fn triangle_bound_on_sampled_regular_graphs() {
    for seed in 0..200u64 {
        let g = sample_regular(&SamplerConfig::regular(20, 3, Method::IncrementalPairing, seed)).unwrap();
        assert!(triangle_bound_holds(&g));
    }
}

/// Random (graph, pair, conditioning) instances with `n <= 12`; the scan and
/// the closed forms must agree exactly, and every forward switching must
/// land in the class with the same degrees.
#[test]
fn switching_identities_on_random_instances() {
    let mut rng = rng_for(2024, 0);
    let mut checked = 0;
    while checked < 2000 {
        let n = rng.gen_range(5..=12usize);
        let d = rng.gen_range(2..=4usize.min(n - 1));
        if n * d % 2 == 1 {
            continue;
        }
        let g = sample_regular(&SamplerConfig::regular(n, d, Method::IncrementalPairing, rng.gen())).unwrap();
        let mut h1 = SimpleGraph::empty(n);
        let mut h2 = SimpleGraph::empty(n);
        for (a, b) in g.edge_pairs() {
            if rng.gen_bool(0.25) {
                h1.add_edge(a, b).unwrap();
            }
        }
        for _ in 0..rng.gen_range(0..5) {
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if a != b && !g.has_edge(a, b) && !h2.has_edge(a, b) {
                h2.add_edge(a, b).unwrap();
            }
        }
        let ctx = ConditioningPair::new(h1, h2).unwrap();
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if u == v || ctx.union().has_edge(u, v) {
            continue;
        }
        checked += 1;
        if g.has_edge(u, v) {
            let c = forward_switchings(&g, u, v, &ctx).unwrap();
            assert_eq!(c.count() as i64, c.closed_form(), "{c:?}");
            for &(x, y) in &c.pairs {
                let g2 = apply_switching(&g, &ctx, (u, v), (x, y), Direction::Forward).unwrap();
                assert_eq!(g2.degrees(), g.degrees());
                assert!(!g2.has_edge(u, v));
                assert!(ctx.required().is_subgraph_of(&g2) && ctx.forbidden().is_edge_disjoint(&g2));
            }
        } else {
            let c = backward_switchings(&g, u, v, &ctx).unwrap();
            assert_eq!(c.count() as i64, c.closed_form(), "{c:?}");
        }
    }
}
