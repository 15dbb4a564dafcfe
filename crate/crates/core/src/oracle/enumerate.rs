use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::estimates::ConditioningPair;
use crate::graph::{DegreeSequence, SimpleGraph};

/// Largest `n` the bitmask enumerator handles.
pub const MAX_VERTICES: usize = 32;

/// Receives each graph of the class as adjacency bitmasks.
pub trait Visitor {
    fn visit(&mut self, adj: &[u32]);
}

/// A visitor whose results from disjoint subtrees can be combined. Merging
/// must be commutative and associative so the outcome does not depend on
/// how subtrees were scheduled.
pub trait Accumulator: Visitor + Sized {
    fn merge(&mut self, other: Self);
}

impl<F: FnMut(&[u32])> Visitor for F {
    fn visit(&mut self, adj: &[u32]) {
        self(adj)
    }
}

/// One subtree: the neighbour set chosen for the first vertex that still
/// needs edges. `vertex == n` marks a class with a single, already
/// complete member.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Branch {
    pub vertex: usize,
    pub set: u32,
}

/// Every labeled simple graph with degree sequence `dseq` that contains
/// `H1` and avoids `H2`, visited vertex by vertex: vertex `v` picks its
/// missing neighbours among later vertices, and a choice is dropped as soon
/// as some later vertex can no longer reach its degree.
#[derive(Debug, Clone)]
pub struct Enumerator {
    n: usize,
    start_adj: Vec<u32>,
    start_res: Vec<u8>,
    /// Pairs never to be added: `H2`, loops.
    blocked: Vec<u32>,
    feasible: bool,
}

fn bit(v: usize) -> u32 {
    1u32 << v
}

fn above(v: usize) -> u32 {
    // vertices strictly greater than v
    if v + 1 >= 32 {
        0
    } else {
        !0u32 << (v + 1)
    }
}

fn for_each_subset(mask: u32, k: u32, f: &mut impl FnMut(u32)) {
    fn go(rest: u32, k: u32, acc: u32, f: &mut impl FnMut(u32)) {
        if k == 0 {
            f(acc);
            return;
        }
        if rest.count_ones() < k {
            return;
        }
        let low = rest & rest.wrapping_neg();
        go(rest ^ low, k - 1, acc | low, f);
        go(rest ^ low, k, acc, f);
    }
    go(mask, k, 0, f);
}

impl Enumerator {
    pub fn new(dseq: &DegreeSequence, ctx: &ConditioningPair) -> Result<Self> {
        let n = dseq.len();
        if n > MAX_VERTICES {
            return Err(Error::Capability(format!("enumeration supports n <= {MAX_VERTICES}, got {n}")));
        }
        if ctx.n() != n {
            return Err(Error::MalformedInput(format!("conditioning on {} vertices, degrees for {n}", ctx.n())));
        }
        let all = if n == 32 { !0u32 } else { (1u32 << n) - 1 };
        let mut start_adj = alloc::vec![0u32; n];
        for e in ctx.required().edges() {
            start_adj[e.lo()] |= bit(e.hi());
            start_adj[e.hi()] |= bit(e.lo());
        }
        let mut blocked: Vec<u32> = (0..n).map(|v| bit(v) | !all).collect();
        for e in ctx.forbidden().edges() {
            blocked[e.lo()] |= bit(e.hi());
            blocked[e.hi()] |= bit(e.lo());
        }
        let mut feasible = true;
        let mut start_res = Vec::with_capacity(n);
        for (v, mask) in start_adj.iter().enumerate() {
            let have = mask.count_ones() as usize;
            let want = dseq.get(v);
            if have > want || want > u8::MAX as usize {
                feasible = false;
                start_res.push(0);
            } else {
                start_res.push((want - have) as u8);
            }
        }
        Ok(Enumerator { n, start_adj, start_res, blocked, feasible })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn positive(&self, res: &[u8]) -> u32 {
        res.iter().enumerate().filter(|(_, &r)| r > 0).fold(0, |m, (w, _)| m | bit(w))
    }

    /// Can every vertex after `v` still find enough partners after `v`?
    fn prunable(&self, v: usize, adj: &[u32], res: &[u8]) -> bool {
        self.starved(above(v), adj, res)
    }

    fn starved(&self, scope: u32, adj: &[u32], res: &[u8]) -> bool {
        let open = self.positive(res) & scope;
        let mut rest = open;
        while rest != 0 {
            let w = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let avail = open & !adj[w] & !self.blocked[w];
            if (avail.count_ones() as u8) < res[w] {
                return true;
            }
        }
        false
    }

    fn next_open(&self, from: usize, res: &[u8]) -> usize {
        (from..self.n).find(|&w| res[w] > 0).unwrap_or(self.n)
    }

    fn candidates(&self, v: usize, adj: &[u32], res: &[u8]) -> u32 {
        self.positive(res) & above(v) & !adj[v] & !self.blocked[v]
    }

    fn apply(v: usize, set: u32, adj: &mut [u32], res: &mut [u8]) {
        adj[v] |= set;
        res[v] = 0;
        let mut rest = set;
        while rest != 0 {
            let w = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            adj[w] |= bit(v);
            res[w] -= 1;
        }
    }

    /// The first-level subtrees, in a fixed order.
    pub fn branches(&self) -> Vec<Branch> {
        if !self.feasible || self.starved(!0, &self.start_adj, &self.start_res) {
            return Vec::new();
        }
        let v = self.next_open(0, &self.start_res);
        if v == self.n {
            return alloc::vec![Branch { vertex: self.n, set: 0 }];
        }
        let cand = self.candidates(v, &self.start_adj, &self.start_res);
        let mut out = Vec::new();
        for_each_subset(cand, self.start_res[v] as u32, &mut |s| out.push(Branch { vertex: v, set: s }));
        out
    }

    /// Visits every graph in one subtree and returns how many there were.
    pub fn run_branch<V: Visitor + ?Sized>(&self, branch: Branch, visitor: &mut V) -> u64 {
        let mut adj = [0u32; MAX_VERTICES];
        let mut res = [0u8; MAX_VERTICES];
        adj[..self.n].copy_from_slice(&self.start_adj);
        res[..self.n].copy_from_slice(&self.start_res);
        let (adj, res) = (&mut adj[..self.n], &mut res[..self.n]);
        if branch.vertex >= self.n {
            visitor.visit(adj);
            return 1;
        }
        Self::apply(branch.vertex, branch.set, adj, res);
        if self.prunable(branch.vertex, adj, res) {
            return 0;
        }
        self.descend(branch.vertex + 1, adj, res, visitor)
    }

    fn descend<V: Visitor + ?Sized>(&self, from: usize, adj: &mut [u32], res: &mut [u8], visitor: &mut V) -> u64 {
        let v = self.next_open(from, res);
        if v == self.n {
            visitor.visit(adj);
            return 1;
        }
        let cand = self.candidates(v, adj, res);
        let need = res[v] as u32;
        let mut total = 0;
        let mut adj_next = [0u32; MAX_VERTICES];
        let mut res_next = [0u8; MAX_VERTICES];
        for_each_subset(cand, need, &mut |set| {
            let (a, r) = (&mut adj_next[..self.n], &mut res_next[..self.n]);
            a.copy_from_slice(adj);
            r.copy_from_slice(res);
            Self::apply(v, set, a, r);
            if !self.prunable(v, a, r) {
                total += self.descend(v + 1, a, r, visitor);
            }
        });
        total
    }

    /// Visits every graph of the class in a fixed order.
    pub fn run<V: Visitor + ?Sized>(&self, visitor: &mut V) -> u64 {
        self.branches().into_iter().map(|b| self.run_branch(b, visitor)).sum()
    }
}

/// The adjacency masks of a visited graph as a [`SimpleGraph`].
pub fn masks_to_graph(adj: &[u32]) -> SimpleGraph {
    let mut g = SimpleGraph::empty(adj.len());
    for (u, &m) in adj.iter().enumerate() {
        let mut rest = m & above(u);
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            g.add_edge(u, v).expect("masks describe a simple graph");
        }
    }
    g
}

/// Triangles in a graph given by adjacency masks.
pub fn mask_triangles(adj: &[u32]) -> u64 {
    let mut t = 0;
    for (u, &mu) in adj.iter().enumerate() {
        let mut rest = mu & above(u);
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            t += (mu & adj[v] & above(v)).count_ones() as u64;
        }
    }
    t
}
