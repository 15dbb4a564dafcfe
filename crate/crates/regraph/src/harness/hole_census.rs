//! Holes in random tuples of distinct triangles from sampled regular
//! graphs, checked against `holes <= 3 x^{3/2}` (`x` = edges in the union of
//! the tuple) and its worst case `x = 3k`, plus the triangle bound on every
//! sampled graph.

use std::collections::BTreeSet;

use rand::seq::index::sample as sample_indices;
use rayon::prelude::*;

use regraph_core::sampler::{rng_for, RegularSampler};
use regraph_core::triangles::{enumerate_triangles, triangle_bound_holds};
use regraph_core::TriangleTuple;

use super::{new_report, ExperimentConfig, GridPoint, STREAMS_PER_POINT};
use crate::error::HarnessResult;
use crate::report::{Cell, ColumnSpec, Provenance::*, StatReport};

pub const COLUMNS: &[ColumnSpec] = &[
    ColumnSpec { name: "n", provenance: Parameter, description: "number of vertices" },
    ColumnSpec { name: "d", provenance: Parameter, description: "degree" },
    ColumnSpec { name: "k", provenance: Parameter, description: "triangles per tuple" },
    ColumnSpec { name: "graphs", provenance: Parameter, description: "sampled graphs" },
    ColumnSpec { name: "tuples", provenance: MonteCarlo, description: "tuples examined" },
    ColumnSpec {
        name: "skipped",
        provenance: MonteCarlo,
        description: "tuples not drawn because a graph had fewer than k triangles",
    },
    ColumnSpec { name: "mean_triangles", provenance: MonteCarlo, description: "mean triangles per sampled graph" },
    ColumnSpec { name: "mean_holes", provenance: MonteCarlo, description: "mean holes per tuple" },
    ColumnSpec { name: "max_holes", provenance: MonteCarlo, description: "largest hole count seen" },
    ColumnSpec { name: "min_union_edges", provenance: MonteCarlo, description: "fewest edges in a tuple's union" },
    ColumnSpec { name: "max_union_edges", provenance: MonteCarlo, description: "most edges in a tuple's union" },
    ColumnSpec { name: "max_bound_ratio", provenance: MonteCarlo, description: "largest holes / (3 x^{3/2})" },
    ColumnSpec { name: "union_bound_violations", provenance: MonteCarlo, description: "tuples with holes^2 > 9 x^3" },
    ColumnSpec {
        name: "tuple_bound_violations",
        provenance: MonteCarlo,
        description: "tuples with holes > 3 (3k)^{3/2}",
    },
    ColumnSpec {
        name: "triangle_bound_failures",
        provenance: MonteCarlo,
        description: "sampled graphs failing T^2 <= 9 m^3",
    },
];

/// Tuple randomness lives above 2^40, away from the chain streams.
const TUPLE_STREAM_BASE: u64 = 1 << 40;

/// One tuple's measurements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TupleCensus {
    pub holes: u64,
    pub union_edges: u64,
}

impl TupleCensus {
    pub fn of(tuple: &TriangleTuple) -> Self {
        let mut edges = BTreeSet::new();
        for t in tuple.triangles() {
            edges.extend([(t[0], t[1]), (t[1], t[2]), (t[0], t[2])]);
        }
        TupleCensus { holes: tuple.hole_count() as u64, union_edges: edges.len() as u64 }
    }

    /// `holes <= 3 x^{3/2}`, in integers.
    pub fn union_bound_holds(&self) -> bool {
        let (h, x) = (self.holes as u128, self.union_edges as u128);
        h * h <= 9 * x * x * x
    }

    /// `holes <= 3 (3k)^{3/2}`, in integers.
    pub fn tuple_bound_holds(&self, k: usize) -> bool {
        let (h, k) = (self.holes as u128, k as u128);
        h * h <= 243 * k * k * k
    }
}

/// Per-`k` tallies; merging is exact, so chain order does not matter.
#[derive(Debug, Clone)]
struct Tally {
    tuples: u64,
    skipped: u64,
    holes: u64,
    max_holes: u64,
    min_union: u64,
    max_union: u64,
    max_ratio: f64,
    union_violations: u64,
    tuple_violations: u64,
}

impl Default for Tally {
    fn default() -> Self {
        Tally {
            tuples: 0,
            skipped: 0,
            holes: 0,
            max_holes: 0,
            min_union: u64::MAX,
            max_union: 0,
            max_ratio: 0.0,
            union_violations: 0,
            tuple_violations: 0,
        }
    }
}

impl Tally {
    fn add(&mut self, c: TupleCensus, k: usize) {
        self.tuples += 1;
        self.holes += c.holes;
        self.max_holes = self.max_holes.max(c.holes);
        self.min_union = self.min_union.min(c.union_edges);
        self.max_union = self.max_union.max(c.union_edges);
        let ratio = c.holes as f64 / (3.0 * (c.union_edges as f64).powf(1.5));
        self.max_ratio = self.max_ratio.max(ratio);
        self.union_violations += u64::from(!c.union_bound_holds());
        self.tuple_violations += u64::from(!c.tuple_bound_holds(k));
    }

    fn merge(&mut self, o: &Tally) {
        self.tuples += o.tuples;
        self.skipped += o.skipped;
        self.holes += o.holes;
        self.max_holes = self.max_holes.max(o.max_holes);
        self.min_union = self.min_union.min(o.min_union);
        self.max_union = self.max_union.max(o.max_union);
        self.max_ratio = self.max_ratio.max(o.max_ratio);
        self.union_violations += o.union_violations;
        self.tuple_violations += o.tuple_violations;
    }
}

#[derive(Debug, Clone, Default)]
struct ChainResult {
    graphs: u64,
    triangles: u64,
    bound_failures: u64,
    per_k: Vec<Tally>,
}

/// Graphs per chain, tuples per graph: both split as evenly as possible.
fn share(total: usize, parts: usize, i: usize) -> usize {
    total / parts + usize::from(i < total % parts)
}

fn run_chain(
    cfg: &ExperimentConfig,
    index: usize,
    p: GridPoint,
    chain: usize,
    chains: usize,
) -> HarnessResult<ChainResult> {
    let stream = index as u64 * STREAMS_PER_POINT + chain as u64;
    let mut sampler = RegularSampler::new(cfg.sampler_config(p, stream))?;
    let mut rng = rng_for(cfg.seed, TUPLE_STREAM_BASE + stream);
    let mut out = ChainResult { per_k: vec![Tally::default(); cfg.tuple_sizes.len()], ..Default::default() };
    // global index of this chain's first graph
    let first: usize = (0..chain).map(|c| share(cfg.graphs, chains, c)).sum();
    for j in first..first + share(cfg.graphs, chains, chain) {
        let g = sampler.next_graph()?;
        out.graphs += 1;
        out.bound_failures += u64::from(!triangle_bound_holds(&g));
        let tris = enumerate_triangles(&g);
        out.triangles += tris.len() as u64;
        for (slot, &k) in cfg.tuple_sizes.iter().enumerate() {
            let quota = share(cfg.tuples, cfg.graphs, j) as u64;
            if tris.len() < k {
                out.per_k[slot].skipped += quota;
                continue;
            }
            for _ in 0..quota {
                let picks = sample_indices(&mut rng, tris.len(), k).into_iter().map(|i| tris[i]).collect();
                let census = TupleCensus::of(&TriangleTuple::new(picks)?);
                out.per_k[slot].add(census, k);
            }
        }
    }
    Ok(out)
}

pub fn run(cfg: &ExperimentConfig) -> HarnessResult<StatReport> {
    let mut report = new_report(cfg, COLUMNS);
    report.meta("tuple_sizes", format!("{:?}", cfg.tuple_sizes));
    report.meta("tuples_per_size", cfg.tuples);
    let (mut violations, mut failures, mut graphs_total) = (0u64, 0u64, 0u64);
    for (index, &p) in cfg.grid.iter().enumerate() {
        let chains = cfg.chains.min(cfg.graphs);
        let results: Vec<HarnessResult<ChainResult>> =
            (0..chains).into_par_iter().map(|c| run_chain(cfg, index, p, c, chains)).collect();
        let mut total = ChainResult { per_k: vec![Tally::default(); cfg.tuple_sizes.len()], ..Default::default() };
        for r in results {
            let r = r?;
            total.graphs += r.graphs;
            total.triangles += r.triangles;
            total.bound_failures += r.bound_failures;
            for (a, b) in total.per_k.iter_mut().zip(&r.per_k) {
                a.merge(b);
            }
        }
        failures += total.bound_failures;
        graphs_total += total.graphs;
        for (t, &k) in total.per_k.iter().zip(&cfg.tuple_sizes) {
            violations += t.union_violations + t.tuple_violations;
            let seen = t.tuples > 0;
            report.push_row(vec![
                Cell::int(p.n),
                Cell::int(p.d),
                Cell::int(k),
                Cell::int(total.graphs),
                Cell::int(t.tuples),
                Cell::int(t.skipped),
                Cell::float(total.triangles as f64 / total.graphs as f64),
                if seen { Cell::float(t.holes as f64 / t.tuples as f64) } else { Cell::Missing },
                if seen { Cell::int(t.max_holes) } else { Cell::Missing },
                if seen { Cell::int(t.min_union) } else { Cell::Missing },
                if seen { Cell::int(t.max_union) } else { Cell::Missing },
                if seen { Cell::float(t.max_ratio) } else { Cell::Missing },
                Cell::int(t.union_violations),
                Cell::int(t.tuple_violations),
                Cell::int(total.bound_failures),
            ]);
        }
    }
    report.gate("hole-bound", violations == 0, format!("{violations} tuples exceed a hole bound"));
    report.gate(
        "triangle-bound",
        failures == 0,
        format!("{failures} of {graphs_total} sampled graphs fail T^2 <= 9 m^3"),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::ExperimentKind;

    #[test]
    fn census_of_three_triangles_around_a_hole() {
        let t = TriangleTuple::new(vec![[0, 1, 3], [1, 2, 4], [0, 2, 5]]).unwrap();
        let c = TupleCensus::of(&t);
        assert_eq!(c, TupleCensus { holes: 1, union_edges: 9 });
        assert!(c.union_bound_holds() && c.tuple_bound_holds(3));
    }

    #[test]
    fn bounds_in_integers() {
        // 3 * 4^{3/2} = 24
        assert!(TupleCensus { holes: 24, union_edges: 4 }.union_bound_holds());
        assert!(!TupleCensus { holes: 25, union_edges: 4 }.union_bound_holds());
        // 3 * 3^{3/2} = 15.588...
        assert!(TupleCensus { holes: 15, union_edges: 0 }.tuple_bound_holds(1));
        assert!(!TupleCensus { holes: 16, union_edges: 0 }.tuple_bound_holds(1));
    }

    #[test]
    fn shares_cover_the_total() {
        for (total, parts) in [(10, 3), (3, 10), (16, 16)] {
            assert_eq!((0..parts).map(|i| share(total, parts, i)).sum::<usize>(), total);
        }
    }

    #[test]
    fn single_triangles_have_no_holes() {
        let cfg = ExperimentConfig {
            grid: vec![GridPoint::new(30, 6)],
            tuple_sizes: vec![1, 4],
            tuples: 200,
            graphs: 20,
            chains: 4,
            ..ExperimentConfig::defaults(ExperimentKind::HoleCensus)
        };
        let r = run(&cfg).unwrap();
        assert_eq!(r.rows.len(), 2);
        assert_eq!(r.rows[0][r.column_index("max_holes").unwrap()], Cell::int(0));
        assert_eq!(r.rows[0][r.column_index("graphs").unwrap()], Cell::int(20));
        let tuples = r.column("tuples")[0].as_f64().unwrap() + r.column("skipped")[0].as_f64().unwrap();
        assert_eq!(tuples, 200.0);
        assert!(r.passed());
    }
}
