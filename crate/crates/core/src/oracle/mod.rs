//! Exact ground truth for tiny classes: every labeled graph with a given
//! degree sequence and conditioning is visited, and probabilities and count
//! distributions are exact rationals.
//!
//! Two independent counts back each other up: the backtracking
//! [`Enumerator`] and the pairing-model recursion [`count_by_pairings`].

mod distribution;
mod enumerate;
mod pairings;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::estimates::ConditioningPair;
use crate::graph::{DegreeSequence, SimpleGraph};
use crate::pattern::Pattern;

pub use distribution::{factorial_moments, CountDistribution};
pub use enumerate::{mask_triangles, masks_to_graph, Accumulator, Branch, Enumerator, Visitor, MAX_VERTICES};
pub use pairings::count_by_pairings;

/// Largest unconditioned class the oracle agrees to walk.
pub const MAX_CLASS_SIZE: u128 = 20_000_000;

/// Largest class [`GraphClassIndex`] keeps in memory.
pub const MAX_INDEXED_GRAPHS: u64 = 100_000;

/// Size of the unconditioned class for `dseq`, failing with a capability
/// error when it exceeds [`MAX_CLASS_SIZE`] or `n` exceeds [`MAX_VERTICES`].
pub fn check_budget(dseq: &DegreeSequence) -> Result<u128> {
    if dseq.len() > MAX_VERTICES {
        return Err(Error::Capability(format!("n = {} exceeds the oracle limit {MAX_VERTICES}", dseq.len())));
    }
    let size = count_by_pairings(dseq)?;
    if size > MAX_CLASS_SIZE {
        return Err(Error::Capability(format!("class of {size} graphs exceeds the oracle budget {MAX_CLASS_SIZE}")));
    }
    Ok(size)
}

fn regular_sequence(n: usize, d: usize) -> Result<DegreeSequence> {
    if (n * d) % 2 == 1 {
        return Err(Error::Model(format!("n d = {} is odd", n * d)));
    }
    if d >= n && n > 0 {
        return Err(Error::Model(format!("no {d}-regular graph on {n} vertices")));
    }
    Ok(DegreeSequence::regular(n, d))
}

/// A budget-checked class: degrees `dseq`, `H1` present, `H2` absent.
#[derive(Debug, Clone)]
pub struct ExactClass {
    dseq: DegreeSequence,
    ctx: ConditioningPair,
    enumerator: Enumerator,
}

impl ExactClass {
    pub fn new(dseq: DegreeSequence, ctx: ConditioningPair) -> Result<Self> {
        check_budget(&dseq)?;
        let enumerator = Enumerator::new(&dseq, &ctx)?;
        Ok(ExactClass { dseq, ctx, enumerator })
    }

    pub fn regular(n: usize, d: usize, ctx: ConditioningPair) -> Result<Self> {
        ExactClass::new(regular_sequence(n, d)?, ctx)
    }

    pub fn degrees(&self) -> &DegreeSequence {
        &self.dseq
    }

    pub fn conditioning(&self) -> &ConditioningPair {
        &self.ctx
    }

    pub fn enumerator(&self) -> &Enumerator {
        &self.enumerator
    }

    pub fn run<V: Visitor + ?Sized>(&self, visitor: &mut V) -> u64 {
        self.enumerator.run(visitor)
    }
}

/// Visits every labeled `d`-regular graph on `[n]` and returns the total.
pub fn enumerate_regular<V: Visitor + ?Sized>(n: usize, d: usize, visitor: &mut V) -> Result<u64> {
    Ok(ExactClass::regular(n, d, ConditioningPair::empty(n))?.run(visitor))
}

/// Counts class members.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClassCounter(pub u64);

impl Visitor for ClassCounter {
    fn visit(&mut self, _: &[u32]) {
        self.0 += 1;
    }
}

impl Accumulator for ClassCounter {
    fn merge(&mut self, other: Self) {
        self.0 += other.0;
    }
}

/// Counts class members and those containing `uv`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeCounter {
    mask: u32,
    u: usize,
    pub total: u64,
    pub hits: u64,
}

impl EdgeCounter {
    pub fn new(u: usize, v: usize) -> Self {
        EdgeCounter { mask: 1 << v, u, total: 0, hits: 0 }
    }

    /// `hits / total`, or an error for an empty class.
    pub fn probability(&self) -> Result<BigRational> {
        if self.total == 0 {
            return Err(Error::UndefinedProbability("the conditioned class is empty".into()));
        }
        Ok(BigRational::new(BigInt::from(self.hits), BigInt::from(self.total)))
    }
}

impl Visitor for EdgeCounter {
    fn visit(&mut self, adj: &[u32]) {
        self.total += 1;
        if adj[self.u] & self.mask != 0 {
            self.hits += 1;
        }
    }
}

impl Accumulator for EdgeCounter {
    fn merge(&mut self, other: Self) {
        self.total += other.total;
        self.hits += other.hits;
    }
}

/// Number of copies of a pattern (edge subsets isomorphic to it) in a
/// graph given by adjacency masks.
#[derive(Debug, Clone)]
pub struct CopyCounter {
    triangle: bool,
    t: usize,
    /// For pattern vertex `i`, its neighbours among `0..i`.
    back: Vec<Vec<usize>>,
    aut: u64,
}

impl CopyCounter {
    pub fn new(p: &Pattern) -> Result<Self> {
        let t = p.vertex_count();
        let aut = p.aut_size()?;
        let back = (0..t).map(|i| (0..i).filter(|&j| p.has_edge(i, j)).collect()).collect();
        let triangle = t == 3 && p.edge_count() == 3;
        Ok(CopyCounter { triangle, t, back, aut: aut as u64 })
    }

    pub fn count(&self, adj: &[u32]) -> u64 {
        if self.triangle {
            return mask_triangles(adj);
        }
        if self.t > adj.len() {
            return 0;
        }
        let mut image = [0usize; MAX_VERTICES];
        self.embed(adj, 0, 0, &mut image) / self.aut
    }

    fn embed(&self, adj: &[u32], i: usize, used: u32, image: &mut [usize; MAX_VERTICES]) -> u64 {
        if i == self.t {
            return 1;
        }
        let all = if adj.len() == 32 { !0u32 } else { (1u32 << adj.len()) - 1 };
        let mut cand = all & !used;
        for &j in &self.back[i] {
            cand &= adj[image[j]];
        }
        let mut total = 0;
        while cand != 0 {
            let w = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            image[i] = w;
            total += self.embed(adj, i + 1, used | (1 << w), image);
        }
        total
    }
}

/// Histogram of the number of copies of a pattern across the class.
#[derive(Debug, Clone)]
pub struct CopyHistogram {
    counter: CopyCounter,
    pub hist: BTreeMap<u64, u64>,
}

impl CopyHistogram {
    pub fn new(p: &Pattern) -> Result<Self> {
        Ok(CopyHistogram { counter: CopyCounter::new(p)?, hist: BTreeMap::new() })
    }

    pub fn distribution(&self) -> CountDistribution {
        CountDistribution::from_histogram(&self.hist)
    }
}

impl Visitor for CopyHistogram {
    fn visit(&mut self, adj: &[u32]) {
        *self.hist.entry(self.counter.count(adj)).or_insert(0) += 1;
    }
}

impl Accumulator for CopyHistogram {
    fn merge(&mut self, other: Self) {
        for (z, c) in other.hist {
            *self.hist.entry(z).or_insert(0) += c;
        }
    }
}

fn check_pair(n: usize, ctx: &ConditioningPair, u: usize, v: usize) -> Result<()> {
    if u >= n || v >= n || u == v {
        return Err(Error::OutOfRange(format!("bad vertex pair {u}, {v} for n = {n}")));
    }
    if ctx.n() != n {
        return Err(Error::MalformedInput(format!("conditioning on {} vertices, n = {n}", ctx.n())));
    }
    Ok(())
}

/// `P(uv in G | H1 present, H2 absent)` over a class, exactly.
pub fn exact_conditional_edge_prob_for(
    dseq: &DegreeSequence,
    ctx: &ConditioningPair,
    u: usize,
    v: usize,
) -> Result<BigRational> {
    check_pair(dseq.len(), ctx, u, v)?;
    let class = ExactClass::new(dseq.clone(), ctx.clone())?;
    let mut acc = EdgeCounter::new(u, v);
    class.run(&mut acc);
    acc.probability()
}

/// `P(uv in G(n, d) | H1 present, H2 absent)`, exactly.
pub fn exact_conditional_edge_prob(
    n: usize,
    d: usize,
    ctx: &ConditioningPair,
    u: usize,
    v: usize,
) -> Result<BigRational> {
    exact_conditional_edge_prob_for(&regular_sequence(n, d)?, ctx, u, v)
}

/// Exact law of the number of copies of `p` in `G(n, d)`.
pub fn exact_count_distribution(n: usize, d: usize, p: &Pattern) -> Result<CountDistribution> {
    let class = ExactClass::regular(n, d, ConditioningPair::empty(n))?;
    let mut acc = CopyHistogram::new(p)?;
    class.run(&mut acc);
    Ok(acc.distribution())
}

/// All labeled `d`-regular graphs on `[n]`, in enumeration order.
#[derive(Debug, Clone)]
pub struct GraphClassIndex {
    n: usize,
    d: usize,
    graphs: Vec<SimpleGraph>,
    keys: Vec<Vec<(usize, usize)>>,
}

impl GraphClassIndex {
    pub fn build(n: usize, d: usize) -> Result<Self> {
        let class = ExactClass::regular(n, d, ConditioningPair::empty(n))?;
        let size = check_budget(class.degrees())?;
        if size > MAX_INDEXED_GRAPHS as u128 {
            return Err(Error::Capability(format!("{size} graphs is too many to index")));
        }
        let mut graphs = Vec::new();
        class.run(&mut |adj: &[u32]| graphs.push(masks_to_graph(adj)));
        let mut keys: Vec<Vec<(usize, usize)>> = graphs.iter().map(|g| g.edge_pairs()).collect();
        keys.sort();
        Ok(GraphClassIndex { n, d, graphs, keys })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn total(&self) -> usize {
        self.graphs.len()
    }

    pub fn graphs(&self) -> &[SimpleGraph] {
        &self.graphs
    }

    /// Rank of `g` in sorted edge-list order, if it is in the class.
    pub fn position(&self, g: &SimpleGraph) -> Option<usize> {
        self.keys.binary_search(&g.edge_pairs()).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimates::{int, rat};

    fn edge_ctx(n: usize, h1: &[(usize, usize)], h2: &[(usize, usize)]) -> ConditioningPair {
        ConditioningPair::new(
            SimpleGraph::from_edges(n, h1.iter().copied()).unwrap(),
            SimpleGraph::from_edges(n, h2.iter().copied()).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn symmetry_identity() {
        for (n, d) in [(4usize, 3usize), (5, 2), (6, 3), (6, 2), (7, 4)] {
            let p = exact_conditional_edge_prob(n, d, &ConditioningPair::empty(n), 0, 1).unwrap();
            assert_eq!(p, rat(d as i128, n as i128 - 1), "({n},{d})");
        }
    }

    #[test]
    fn two_strategies_agree() {
        for (n, d) in [(4usize, 3usize), (5, 2), (6, 3), (7, 2), (7, 4), (8, 2)] {
            let direct = enumerate_regular(n, d, &mut ClassCounter::default()).unwrap() as u128;
            assert_eq!(direct, count_by_pairings(&DegreeSequence::regular(n, d)).unwrap(), "({n},{d})");
        }
    }

    #[test]
    fn budget_guard() {
        assert!(check_budget(&DegreeSequence::regular(10, 3)).is_ok());
        assert!(check_budget(&DegreeSequence::regular(8, 4)).is_ok());
        assert!(matches!(check_budget(&DegreeSequence::regular(10, 4)), Err(Error::Capability(_))));
        assert!(matches!(check_budget(&DegreeSequence::regular(12, 3)), Err(Error::Capability(_))));
        assert!(matches!(check_budget(&DegreeSequence::regular(40, 2)), Err(Error::Capability(_))));
        assert!(matches!(enumerate_regular(5, 3, &mut ClassCounter::default()), Err(Error::Model(_))));
    }

    #[test]
    fn conditional_probabilities() {
        // H1 = 01: vertex 0 has two free slots among 2..5
        let ctx = edge_ctx(6, &[(0, 1)], &[]);
        let p = exact_conditional_edge_prob(6, 3, &ctx, 0, 2).unwrap();
        assert_eq!(p, rat(1, 2));
        // saturated endpoint
        let ctx = edge_ctx(6, &[(0, 1), (0, 2), (0, 3)], &[]);
        assert_eq!(exact_conditional_edge_prob(6, 3, &ctx, 0, 4).unwrap(), int(0));
        // empty class
        let ctx = edge_ctx(4, &[], &[(0, 1)]);
        assert!(matches!(exact_conditional_edge_prob(4, 3, &ctx, 2, 3), Err(Error::UndefinedProbability(_))));
        assert_eq!(exact_conditional_edge_prob(4, 3, &ConditioningPair::empty(4), 2, 3).unwrap(), int(1));
    }

    #[test]
    fn point_mass_distributions() {
        let tri = Pattern::triangle();
        assert_eq!(exact_count_distribution(4, 3, &tri).unwrap(), CountDistribution::point_mass(4));
        assert_eq!(exact_count_distribution(5, 2, &tri).unwrap(), CountDistribution::point_mass(0));
        // every 2-regular graph on 5 vertices is one 5-cycle
        assert_eq!(exact_count_distribution(5, 2, &Pattern::cycle(5)).unwrap(), CountDistribution::point_mass(1));
    }

    #[test]
    fn triangle_mean_two_ways() {
        // E Z = C(n,3) P(012 is a triangle), the latter from the conditioned class
        let dist = exact_count_distribution(6, 3, &Pattern::triangle()).unwrap();
        assert_eq!(dist.total_probability(), int(1));
        let all = enumerate_regular(6, 3, &mut ClassCounter::default()).unwrap();
        let with = ExactClass::regular(6, 3, edge_ctx(6, &[(0, 1), (1, 2), (0, 2)], &[])).unwrap();
        let hits = with.run(&mut ClassCounter::default());
        assert_eq!(dist.mean(), rat(20 * hits as i128, all as i128));
    }

    #[test]
    fn generic_copy_counter_matches_triangles() {
        let mut generic = CopyCounter::new(&Pattern::triangle()).unwrap();
        generic.triangle = false;
        let fast = CopyCounter::new(&Pattern::triangle()).unwrap();
        enumerate_regular(6, 3, &mut |adj: &[u32]| assert_eq!(generic.count(adj), fast.count(adj))).unwrap();
        // K4 holds 3 four-cycles and 12 paths of length 2
        let k4: Vec<u32> = (0..4).map(|v| 0b1111 & !(1 << v)).collect();
        assert_eq!(CopyCounter::new(&Pattern::cycle(4)).unwrap().count(&k4), 3);
        assert_eq!(CopyCounter::new(&Pattern::path(2)).unwrap().count(&k4), 12);
    }

    #[test]
    fn class_index() {
        let idx = GraphClassIndex::build(6, 3).unwrap();
        assert_eq!(idx.total(), 70);
        for g in idx.graphs() {
            assert!(idx.position(g).is_some());
        }
        assert_eq!(idx.position(&SimpleGraph::cycle(6)), None);
    }
}
