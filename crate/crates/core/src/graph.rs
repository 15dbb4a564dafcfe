//! Labeled simple graphs on `[n]` and degree sequences.
//!
//! Vertices are `0..n` internally; the text formats in the std crate are
//! 1-based.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// An unordered vertex pair, stored with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    lo: usize,
    hi: usize,
}

impl Edge {
    /// Normalizes the endpoint order. Panics on a loop; use
    /// [`Edge::try_new`] for unchecked input.
    pub fn new(u: usize, v: usize) -> Self {
        Self::try_new(u, v).expect("edge endpoints must differ")
    }

    pub fn try_new(u: usize, v: usize) -> Result<Self> {
        if u == v {
            return Err(Error::MalformedInput(format!("self-loop at vertex {u}")));
        }
        Ok(if u < v { Edge { lo: u, hi: v } } else { Edge { lo: v, hi: u } })
    }

    pub fn lo(&self) -> usize {
        self.lo
    }

    pub fn hi(&self) -> usize {
        self.hi
    }

    pub fn endpoints(&self) -> (usize, usize) {
        (self.lo, self.hi)
    }

    pub fn contains(&self, v: usize) -> bool {
        self.lo == v || self.hi == v
    }

    /// The endpoint that is not `v`, if `v` is an endpoint.
    pub fn other(&self, v: usize) -> Option<usize> {
        if self.lo == v {
            Some(self.hi)
        } else if self.hi == v {
            Some(self.lo)
        } else {
            None
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.lo, self.hi)
    }
}

/// A labeled simple graph: an edge set plus sorted neighbor lists kept in
/// sync on every mutation.
#[derive(Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    edges: BTreeSet<Edge>,
    adj: Vec<Vec<usize>>,
}

impl fmt::Debug for SimpleGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SimpleGraph").field("n", &self.n).field("edges", &self.edges).finish()
    }
}

impl SimpleGraph {
    pub fn empty(n: usize) -> Self {
        SimpleGraph { n, edges: BTreeSet::new(), adj: vec![Vec::new(); n] }
    }

    /// Builds a graph from an edge list, rejecting loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = SimpleGraph::empty(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = SimpleGraph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.insert_unchecked(Edge { lo: u, hi: v });
            }
        }
        g
    }

    /// `C_n` on vertices `0..n` with edges `i (i+1 mod n)`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        let mut g = SimpleGraph::empty(n);
        for i in 0..n {
            g.insert_unchecked(Edge::new(i, (i + 1) % n));
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_set(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn degrees(&self) -> DegreeSequence {
        DegreeSequence::new(self.adj.iter().map(Vec::len).collect())
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && u < self.n && v < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.has_edge(e.lo, e.hi)
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            return Err(Error::OutOfRange(format!("vertex {v} not in [0, {})", self.n)));
        }
        Ok(())
    }

    fn insert_unchecked(&mut self, e: Edge) -> bool {
        if !self.edges.insert(e) {
            return false;
        }
        let (u, v) = e.endpoints();
        let pos = self.adj[u].binary_search(&v).unwrap_err();
        self.adj[u].insert(pos, v);
        let pos = self.adj[v].binary_search(&u).unwrap_err();
        self.adj[v].insert(pos, u);
        true
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let e = Edge::try_new(u, v)?;
        if !self.insert_unchecked(e) {
            return Err(Error::MalformedInput(format!("duplicate edge {e}")));
        }
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let e = Edge::try_new(u, v)?;
        if !self.edges.remove(&e) {
            return Err(Error::Contract(format!("edge {e} not present")));
        }
        let pos = self.adj[u].binary_search(&v).expect("adjacency out of sync");
        self.adj[u].remove(pos);
        let pos = self.adj[v].binary_search(&u).expect("adjacency out of sync");
        self.adj[v].remove(pos);
        Ok(())
    }

    pub fn is_regular(&self, d: usize) -> bool {
        self.adj.iter().all(|a| a.len() == d)
    }

    /// Every edge of `self` is an edge of `other`.
    pub fn is_subgraph_of(&self, other: &SimpleGraph) -> bool {
        self.edges.iter().all(|&e| other.contains(e))
    }

    pub fn is_edge_disjoint(&self, other: &SimpleGraph) -> bool {
        let (small, large) = if self.edge_count() <= other.edge_count() { (self, other) } else { (other, self) };
        small.edges.iter().all(|&e| !large.contains(e))
    }

    /// Edge union on the larger of the two vertex sets.
    pub fn union(&self, other: &SimpleGraph) -> SimpleGraph {
        let mut g = SimpleGraph::empty(self.n.max(other.n));
        for &e in self.edges.iter().chain(other.edges.iter()) {
            g.insert_unchecked(e);
        }
        g
    }

    /// Image of the graph under the vertex bijection `perm`.
    pub fn relabel(&self, perm: &[usize]) -> Result<SimpleGraph> {
        if perm.len() != self.n {
            return Err(Error::MalformedInput(format!(
                "permutation has length {} for a graph on {} vertices",
                perm.len(),
                self.n
            )));
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || seen[p] {
                return Err(Error::MalformedInput("relabeling is not a bijection".into()));
            }
            seen[p] = true;
        }
        let mut g = SimpleGraph::empty(self.n);
        for e in self.edges() {
            g.insert_unchecked(Edge::new(perm[e.lo], perm[e.hi]));
        }
        Ok(g)
    }

    /// Edge list as 0-based pairs in lexicographic order.
    pub fn edge_pairs(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(Edge::endpoints).collect()
    }
}

/// `(x)_k = x (x-1) ... (x-k+1)`, saturating at zero once a factor hits 0.
pub fn falling_factorial(x: u64, k: u32) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..k as u64 {
        if i >= x {
            return 0;
        }
        acc *= (x - i) as u128;
    }
    acc
}

/// A degree sequence `d = (d_1, ..., d_n)` with the sums `M` and `M_j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DegreeSequence {
    values: Vec<usize>,
}

impl DegreeSequence {
    pub fn new(values: Vec<usize>) -> Self {
        DegreeSequence { values }
    }

    pub fn regular(n: usize, d: usize) -> Self {
        DegreeSequence { values: vec![d; n] }
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, v: usize) -> usize {
        self.values[v]
    }

    /// `M = sum d_i`.
    pub fn total(&self) -> u64 {
        self.values.iter().map(|&d| d as u64).sum()
    }

    /// `M_j = sum (d_i)_j`; `M_1 = M`.
    pub fn falling_sum(&self, j: u32) -> u128 {
        self.values.iter().map(|&d| falling_factorial(d as u64, j)).sum()
    }

    /// `M` for `j = 1` and `M_j` otherwise.
    pub fn degree_stats(&self, j: u32) -> u128 {
        if j == 1 {
            self.total() as u128
        } else {
            self.falling_sum(j)
        }
    }

    /// `Delta`, the maximum entry.
    pub fn max(&self) -> usize {
        self.values.iter().copied().max().unwrap_or(0)
    }

    /// The common degree if every entry is equal.
    pub fn regular_degree(&self) -> Option<usize> {
        let first = *self.values.first()?;
        self.values.iter().all(|&d| d == first).then_some(first)
    }

    /// `self ⪯ other` entrywise.
    pub fn dominated_by(&self, other: &DegreeSequence) -> bool {
        self.values.len() == other.values.len() && self.values.iter().zip(&other.values).all(|(a, b)| a <= b)
    }

    /// The residual sequence `d - d^H`. Fails when `H` has more edges at a
    /// vertex than `d` allows.
    pub fn residual(&self, h: &SimpleGraph) -> Result<DegreeSequence> {
        if h.n() != self.len() {
            return Err(Error::MalformedInput(format!(
                "graph on {} vertices vs degree sequence of length {}",
                h.n(),
                self.len()
            )));
        }
        let mut out = Vec::with_capacity(self.len());
        for (v, &d) in self.values.iter().enumerate() {
            let dh = h.degree(v);
            if dh > d {
                return Err(Error::Contract(format!("vertex {v} has degree {dh} in H but only {d} allowed")));
            }
            out.push(d - dh);
        }
        Ok(DegreeSequence::new(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_k4() {
        let g = SimpleGraph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(g.edge_count(), 6);
        assert!(g.is_regular(3));
        assert_eq!(g, SimpleGraph::complete(4));
    }

    #[test]
    fn empty_graph_degrees() {
        let g = SimpleGraph::from_edges(3, []).unwrap();
        assert_eq!(g.degrees().values(), &[0, 0, 0]);
    }

    #[test]
    fn rejects_duplicates_loops_and_range() {
        assert!(matches!(SimpleGraph::from_edges(4, [(0, 1), (0, 1)]), Err(Error::MalformedInput(_))));
        assert!(matches!(SimpleGraph::from_edges(4, [(0, 1), (1, 0)]), Err(Error::MalformedInput(_))));
        assert!(matches!(SimpleGraph::from_edges(4, [(2, 2)]), Err(Error::MalformedInput(_))));
        assert!(matches!(SimpleGraph::from_edges(4, [(0, 4)]), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn degree_stats_examples() {
        let r = DegreeSequence::regular(4, 3);
        assert_eq!(r.degree_stats(1), 12);
        assert_eq!(r.degree_stats(2), 24);
        assert_eq!(DegreeSequence::new(vec![2, 1, 1]).degree_stats(2), 2);
    }

    #[test]
    fn add_remove_keeps_adjacency_sorted() {
        let mut g = SimpleGraph::empty(5);
        g.add_edge(3, 0).unwrap();
        g.add_edge(0, 1).unwrap();
        g.add_edge(4, 0).unwrap();
        assert_eq!(g.neighbors(0), &[1, 3, 4]);
        g.remove_edge(0, 3).unwrap();
        assert_eq!(g.neighbors(0), &[1, 4]);
        assert!(!g.has_edge(3, 0));
        assert!(g.remove_edge(0, 3).is_err());
    }

    #[test]
    fn residual_rejects_oversaturation() {
        let h = SimpleGraph::from_edges(3, [(0, 1), (0, 2)]).unwrap();
        assert!(DegreeSequence::regular(3, 1).residual(&h).is_err());
        assert_eq!(DegreeSequence::regular(3, 2).residual(&h).unwrap().values(), &[0, 1, 1]);
    }

    proptest::proptest! {
        #[test]
        fn regular_second_moment(n in 1usize..200, d in 0usize..60) {
            let s = DegreeSequence::regular(n, d);
            proptest::prop_assert_eq!(s.total(), (n * d) as u64);
            proptest::prop_assert_eq!(s.degree_stats(2), (n * d * d.saturating_sub(1)) as u128);
        }
    }
}
