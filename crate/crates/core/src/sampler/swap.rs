use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;

/// Mutable graph tuned for double edge swaps: an indexable edge list for
/// uniform edge choice plus unsorted neighbor lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwapGraph {
    edges: Vec<(u32, u32)>,
    adj: Vec<Vec<u32>>,
}

impl SwapGraph {
    pub fn empty(n: usize) -> Self {
        SwapGraph { edges: Vec::new(), adj: vec![Vec::new(); n] }
    }

    pub fn from_simple_graph(g: &SimpleGraph) -> Self {
        let mut s = SwapGraph::empty(g.n());
        for e in g.edges() {
            s.push_edge(e.lo(), e.hi());
        }
        s
    }

    pub fn to_simple_graph(&self) -> SimpleGraph {
        SimpleGraph::from_edges(self.n(), self.edges.iter().map(|&(a, b)| (a as usize, b as usize)))
            .expect("swap graph stays simple")
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let (x, y) = if self.adj[a].len() <= self.adj[b].len() { (a, b) } else { (b, a) };
        self.adj[x].contains(&(y as u32))
    }

    /// Adds `ab` without checking for loops or duplicates.
    pub(crate) fn push_edge(&mut self, a: usize, b: usize) {
        debug_assert!(a != b && !self.has_edge(a, b));
        self.edges.push((a as u32, b as u32));
        self.adj[a].push(b as u32);
        self.adj[b].push(a as u32);
    }

    fn relink(&mut self, v: u32, from: u32, to: u32) {
        let slot = self.adj[v as usize].iter_mut().find(|x| **x == from).expect("adjacency out of sync");
        *slot = to;
    }

    /// Removes the edge at `idx` (swap-remove, so indices shift).
    pub(crate) fn remove_at(&mut self, idx: usize) -> (u32, u32) {
        let (a, b) = self.edges.swap_remove(idx);
        for (x, y) in [(a, b), (b, a)] {
            let list = &mut self.adj[x as usize];
            let pos = list.iter().position(|&z| z == y).expect("adjacency out of sync");
            list.swap_remove(pos);
        }
        (a, b)
    }

    /// Replaces `ab` at index `i` and `ce` at index `j` by `ac` and `be`.
    fn swap_pair(&mut self, i: usize, j: usize, (a, b): (u32, u32), (c, e): (u32, u32)) {
        self.edges[i] = (a, c);
        self.edges[j] = (b, e);
        self.relink(a, b, c);
        self.relink(b, a, e);
        self.relink(c, e, a);
        self.relink(e, c, b);
    }

    /// Triangle count by neighbor stamping, `O(sum_v d_v^2)`.
    pub fn triangle_count(&self) -> u64 {
        let n = self.n();
        let mut stamp = vec![u32::MAX; n];
        let mut count = 0u64;
        for u in 0..n {
            for &x in &self.adj[u] {
                stamp[x as usize] = u as u32;
            }
            for &v in &self.adj[u] {
                if (v as usize) <= u {
                    continue;
                }
                for &w in &self.adj[v as usize] {
                    if w > v && stamp[w as usize] == u as u32 {
                        count += 1;
                    }
                }
            }
        }
        count
    }
}

/// Double edge swap chain on graphs with a fixed degree sequence,
/// optionally restricted to keep every edge of `H1` and avoid every edge of
/// `H2`. A rejected proposal leaves the graph unchanged, so the stationary
/// law is uniform on the reachable part of the class.
#[derive(Debug, Clone)]
pub struct SwapChain {
    g: SwapGraph,
    locked: Vec<bool>,
    forbidden: Option<SwapGraph>,
    proposed: u64,
    accepted: u64,
}

impl SwapChain {
    pub fn unconstrained(g: SwapGraph) -> Self {
        let locked = vec![false; g.edge_count()];
        SwapChain { g, locked, forbidden: None, proposed: 0, accepted: 0 }
    }

    /// Starts from `g`, which must contain `h1` and avoid `h2`.
    pub fn constrained(g: SwapGraph, h1: &SimpleGraph, h2: &SimpleGraph) -> Result<Self> {
        if h1.n() != g.n() || h2.n() != g.n() {
            return Err(Error::Contract("conditioning graphs live on a different vertex set".into()));
        }
        let locked: Vec<bool> = g.edges.iter().map(|&(a, b)| h1.has_edge(a as usize, b as usize)).collect();
        let held = locked.iter().filter(|&&l| l).count();
        if held != h1.edge_count() {
            return Err(Error::Contract(format!("start graph holds {held} of {} required edges", h1.edge_count())));
        }
        if g.edges.iter().any(|&(a, b)| h2.has_edge(a as usize, b as usize)) {
            return Err(Error::Contract("start graph uses a forbidden edge".into()));
        }
        let forbidden = (!h2.is_empty()).then(|| SwapGraph::from_simple_graph(h2));
        Ok(SwapChain { g, locked, forbidden, proposed: 0, accepted: 0 })
    }

    pub fn graph(&self) -> &SwapGraph {
        &self.g
    }

    pub fn into_graph(self) -> SwapGraph {
        self.g
    }

    /// Fraction of proposals accepted so far.
    pub fn acceptance_rate(&self) -> f64 {
        if self.proposed == 0 {
            0.0
        } else {
            self.accepted as f64 / self.proposed as f64
        }
    }

    /// One proposal: two distinct edges `ab`, `ce` chosen uniformly, `ce`
    /// oriented by a fair coin, replaced by `ac`, `be` if that keeps the
    /// graph simple and respects the constraints.
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> bool {
        let m = self.g.edges.len();
        if m < 2 {
            return false;
        }
        self.proposed += 1;
        let i = rng.gen_range(0..m);
        let mut j = rng.gen_range(0..m - 1);
        if j >= i {
            j += 1;
        }
        let (a, b) = self.g.edges[i];
        let (mut c, mut e) = self.g.edges[j];
        if rng.gen::<bool>() {
            core::mem::swap(&mut c, &mut e);
        }
        if a == c || b == e || self.locked[i] || self.locked[j] {
            return false;
        }
        let (au, bu, cu, eu) = (a as usize, b as usize, c as usize, e as usize);
        if self.g.has_edge(au, cu) || self.g.has_edge(bu, eu) {
            return false;
        }
        if let Some(h2) = &self.forbidden {
            if h2.has_edge(au, cu) || h2.has_edge(bu, eu) {
                return false;
            }
        }
        self.g.swap_pair(i, j, (a, b), (c, e));
        self.accepted += 1;
        true
    }

    pub fn run<R: Rng + ?Sized>(&mut self, steps: u64, rng: &mut R) {
        for _ in 0..steps {
            self.step(rng);
        }
    }
}
