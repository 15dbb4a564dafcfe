//! Small abstract graphs `H` (the things being counted) with their
//! automorphism counts and edge-density profile.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;

/// Largest pattern accepted by [`Pattern::aut_size`].
pub const AUT_MAX_VERTICES: usize = 12;
/// Largest edge count accepted by [`Pattern::rho`]; keeps `C(h, j)` small.
pub const RHO_MAX_EDGES: usize = 20;

/// A small simple graph on vertices `0..t`. Adjacency is kept as bitmasks,
/// so `t` is capped at 32.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    t: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<u32>,
}

impl Pattern {
    pub fn new(t: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if t == 0 {
            return Err(Error::MalformedInput("pattern needs at least one vertex".into()));
        }
        if t > 32 {
            return Err(Error::Capability(format!("pattern with {t} vertices (max 32)")));
        }
        let mut adj = vec![0u32; t];
        let mut list = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a >= t || b >= t {
                return Err(Error::OutOfRange(format!("pattern edge {a}-{b} outside [0, {t})")));
            }
            if a == b {
                return Err(Error::MalformedInput(format!("pattern loop at {a}")));
            }
            if adj[a] >> b & 1 == 1 {
                return Err(Error::MalformedInput(format!("duplicate pattern edge {a}-{b}")));
            }
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
            list.push((a.min(b), a.max(b)));
        }
        list.sort_unstable();
        Ok(Pattern { t, edges: list, adj })
    }

    pub fn from_graph(g: &SimpleGraph) -> Result<Self> {
        Pattern::new(g.n(), &g.edge_pairs())
    }

    pub fn cycle(len: usize) -> Self {
        assert!(len >= 3, "cycle length must be at least 3");
        let edges: Vec<_> = (0..len).map(|i| (i, (i + 1) % len)).collect();
        Pattern::new(len, &edges).expect("valid cycle")
    }

    pub fn complete(t: usize) -> Self {
        let mut edges = Vec::new();
        for a in 0..t {
            for b in a + 1..t {
                edges.push((a, b));
            }
        }
        Pattern::new(t, &edges).expect("valid clique")
    }

    /// The path with `len` edges on `len + 1` vertices.
    pub fn path(len: usize) -> Self {
        let edges: Vec<_> = (0..len).map(|i| (i, i + 1)).collect();
        Pattern::new(len + 1, &edges).expect("valid path")
    }

    pub fn triangle() -> Self {
        Pattern::cycle(3)
    }

    /// Number of vertices `t`.
    pub fn vertex_count(&self) -> usize {
        self.t
    }

    /// Number of edges `h`.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn adjacency_masks(&self) -> &[u32] {
        &self.adj
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.t && b < self.t && self.adj[a] >> b & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn max_degree(&self) -> usize {
        (0..self.t).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Connected with every vertex of degree 2.
    pub fn is_cycle(&self) -> bool {
        if self.t < 3 || self.edges.len() != self.t || (0..self.t).any(|v| self.degree(v) != 2) {
            return false;
        }
        let mut seen = 1u32;
        let mut frontier = 1u32;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = self.adj[v] & !seen;
            seen |= fresh;
            frontier |= fresh;
        }
        seen.count_ones() as usize == self.t
    }

    /// The pattern as a graph on `[n]` via `v -> v`.
    pub fn embed(&self, n: usize) -> Result<SimpleGraph> {
        if n < self.t {
            return Err(Error::OutOfRange(format!("cannot embed {} vertices in {n}", self.t)));
        }
        SimpleGraph::from_edges(n, self.edges.iter().copied())
    }

    /// `|Aut(H)|`, computed as the product of orbit sizes along a chain of
    /// pointwise stabilizers. Each orbit membership test is a backtracking
    /// search over degree-compatible partial maps.
    pub fn aut_size(&self) -> Result<u128> {
        if self.t > AUT_MAX_VERTICES {
            return Err(Error::Capability(format!(
                "automorphism search limited to {AUT_MAX_VERTICES} vertices, got {}",
                self.t
            )));
        }
        let mut total: u128 = 1;
        let mut image: Vec<Option<usize>> = vec![None; self.t];
        let mut used = 0u32;
        for v in 0..self.t {
            let mut orbit = 0u128;
            for w in 0..self.t {
                if used >> w & 1 == 1 || !self.compatible(v, w, &image) {
                    continue;
                }
                image[v] = Some(w);
                if self.extend(v + 1, &mut image, used | 1 << w) {
                    orbit += 1;
                }
                image[v] = None;
            }
            total *= orbit;
            // fix v pointwise for the next stabilizer
            image[v] = Some(v);
            used |= 1 << v;
        }
        Ok(total)
    }

    fn compatible(&self, v: usize, w: usize, image: &[Option<usize>]) -> bool {
        if self.degree(v) != self.degree(w) {
            return false;
        }
        image.iter().enumerate().all(|(x, img)| match img {
            Some(y) => self.has_edge(v, x) == self.has_edge(w, *y),
            None => true,
        })
    }

    fn extend(&self, v: usize, image: &mut [Option<usize>], used: u32) -> bool {
        if v == self.t {
            return true;
        }
        if image[v].is_some() {
            return self.extend(v + 1, image, used);
        }
        for w in 0..self.t {
            if used >> w & 1 == 1 || !self.compatible(v, w, image) {
                continue;
            }
            image[v] = Some(w);
            let ok = self.extend(v + 1, image, used | 1 << w);
            image[v] = None;
            if ok {
                return true;
            }
        }
        false
    }

    /// `rho_H(j) = min_{H' ⊆ H, |H'| = j} |V(H')|/t - j/h`, where `V(H')`
    /// counts only vertices incident to the chosen edges.
    pub fn rho(&self, j: usize) -> Result<Ratio<i64>> {
        let h = self.edges.len();
        if j == 0 || j >= h {
            return Err(Error::OutOfRange(format!("rho needs 1 <= j <= h-1 = {}, got {j}", h.saturating_sub(1))));
        }
        if h > RHO_MAX_EDGES {
            return Err(Error::Capability(format!("rho enumerates C(h, j) subsets; h = {h} exceeds {RHO_MAX_EDGES}")));
        }
        let min_vertices = self.min_span(j);
        let (t, h, j) = (self.t as i64, h as i64, j as i64);
        Ok(Ratio::new(min_vertices as i64 * h - j * t, t * h))
    }

    /// Fewest vertices touched by any `j` edges.
    fn min_span(&self, j: usize) -> u32 {
        let h = self.edges.len();
        let masks: Vec<u32> = self.edges.iter().map(|&(a, b)| 1 << a | 1 << b).collect();
        let mut idx: Vec<usize> = (0..j).collect();
        let mut best = u32::MAX;
        loop {
            let span = idx.iter().fold(0u32, |m, &i| m | masks[i]).count_ones();
            best = best.min(span);
            // next combination in lexicographic order
            let mut k = j;
            while k > 0 && idx[k - 1] == h - j + k - 1 {
                k -= 1;
            }
            if k == 0 {
                return best;
            }
            idx[k - 1] += 1;
            for m in k..j {
                idx[m] = idx[m - 1] + 1;
            }
        }
    }

    /// `rho_H(j) > 0` for every `1 <= j <= h - 1`.
    pub fn is_strictly_balanced(&self) -> Result<bool> {
        let h = self.edges.len();
        for j in 1..h {
            if *self.rho(j)?.numer() <= 0 {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
