//! Triangle listing, tuples of labeled triangles, and holes.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;

/// Every triangle of `g` once, as a sorted triple, in lexicographic order.
pub fn enumerate_triangles(g: &SimpleGraph) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for u in 0..g.n() {
        let nu = g.neighbors(u);
        let start = nu.partition_point(|&x| x <= u);
        for (i, &v) in nu[start..].iter().enumerate() {
            let nv = g.neighbors(v);
            // merge the tails of N(u) and N(v) above v
            let mut a = &nu[start + i + 1..];
            let mut b = &nv[nv.partition_point(|&x| x <= v)..];
            while let (Some(&x), Some(&y)) = (a.first(), b.first()) {
                if x == y {
                    out.push([u, v, x]);
                    a = &a[1..];
                    b = &b[1..];
                } else if x < y {
                    a = &a[1..];
                } else {
                    b = &b[1..];
                }
            }
        }
    }
    out
}

pub fn triangle_count(g: &SimpleGraph) -> u64 {
    enumerate_triangles(g).len() as u64
}

/// `#triangles(g) <= 3 |E(g)|^{3/2}`, checked in integers as
/// `T^2 <= 9 m^3`.
pub fn triangle_bound_holds(g: &SimpleGraph) -> bool {
    let t = triangle_count(g) as u128;
    let m = g.edge_count() as u128;
    t * t <= 9 * m * m * m
}

/// An ordered tuple of labeled triangles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleTuple {
    triangles: Vec<[usize; 3]>,
}

impl TriangleTuple {
    pub fn new(triangles: Vec<[usize; 3]>) -> Result<Self> {
        let mut sorted = Vec::with_capacity(triangles.len());
        for mut tri in triangles {
            tri.sort_unstable();
            if tri[0] == tri[1] || tri[1] == tri[2] {
                return Err(Error::MalformedInput(format!("degenerate triangle {tri:?}")));
            }
            sorted.push(tri);
        }
        Ok(TriangleTuple { triangles: sorted })
    }

    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    /// `h(v)`: the number of triangles in the tuple hitting `v`.
    pub fn hit_multiplicities(&self) -> BTreeMap<usize, usize> {
        let mut hits = BTreeMap::new();
        for tri in &self.triangles {
            for &v in tri {
                *hits.entry(v).or_insert(0) += 1;
            }
        }
        hits
    }

    /// `h_j = #{v : h(v) = j}` indexed by `j` (entry 0 unused).
    pub fn hit_profile(&self) -> Vec<usize> {
        let hits = self.hit_multiplicities();
        let top = hits.values().copied().max().unwrap_or(0);
        let mut profile = vec![0; top + 1];
        for &j in hits.values() {
            profile[j] += 1;
        }
        profile
    }

    /// Number of vertex triples `{x, y, z}` whose three pairs are each
    /// covered by a triangle of the tuple other than `{x, y, z}` itself.
    /// Brute force over all triples of tuple-incident vertices.
    pub fn hole_count(&self) -> usize {
        let verts: Vec<usize> = self.hit_multiplicities().into_keys().collect();
        let k = verts.len();
        let local = |v: usize| verts.binary_search(&v).expect("tuple vertex");
        // carriers[a][b]: how many tuple triangles contain the pair ab
        let mut carriers = vec![vec![0u32; k]; k];
        let mut multiplicity: BTreeMap<[usize; 3], u32> = BTreeMap::new();
        for tri in &self.triangles {
            let l = [local(tri[0]), local(tri[1]), local(tri[2])];
            for (a, b) in [(l[0], l[1]), (l[1], l[2]), (l[0], l[2])] {
                carriers[a][b] += 1;
                carriers[b][a] += 1;
            }
            *multiplicity.entry(l).or_insert(0) += 1;
        }
        let mut holes = 0;
        for x in 0..k {
            for y in x + 1..k {
                if carriers[x][y] == 0 {
                    continue;
                }
                for z in y + 1..k {
                    if carriers[y][z] == 0 || carriers[x][z] == 0 {
                        continue;
                    }
                    let own = multiplicity.get(&[x, y, z]).copied().unwrap_or(0);
                    if carriers[x][y] > own && carriers[y][z] > own && carriers[x][z] > own {
                        holes += 1;
                    }
                }
            }
        }
        holes
    }
}

/// Free-function form of [`TriangleTuple::hole_count`].
pub fn hole_count(tuple: &TriangleTuple) -> usize {
    tuple.hole_count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_triangles(g: &SimpleGraph) -> usize {
        let n = g.n();
        let mut c = 0;
        for a in 0..n {
            for b in a + 1..n {
                for e in b + 1..n {
                    if g.has_edge(a, b) && g.has_edge(b, e) && g.has_edge(a, e) {
                        c += 1;
                    }
                }
            }
        }
        c
    }

    #[test]
    fn triangle_examples() {
        assert_eq!(enumerate_triangles(&SimpleGraph::complete(4)).len(), 4);
        assert_eq!(enumerate_triangles(&SimpleGraph::cycle(6)).len(), 0);
        let mut k4e = SimpleGraph::complete(4);
        k4e.remove_edge(0, 1).unwrap();
        assert_eq!(enumerate_triangles(&k4e).len(), brute_triangles(&k4e));
        assert_eq!(enumerate_triangles(&k4e), vec![[0, 2, 3], [1, 2, 3]]);
    }

    #[test]
    fn bound_examples() {
        assert!(triangle_bound_holds(&SimpleGraph::complete(4)));
        assert!(triangle_bound_holds(&SimpleGraph::empty(5)));
        assert!(triangle_bound_holds(&SimpleGraph::complete(30)));
    }

    fn tuple(v: &[[usize; 3]]) -> TriangleTuple {
        TriangleTuple::new(v.to_vec()).unwrap()
    }

    #[test]
    fn hole_examples() {
        assert_eq!(tuple(&[[1, 2, 3]]).hole_count(), 0);
        assert_eq!(tuple(&[[1, 2, 4], [2, 3, 5], [1, 3, 6]]).hole_count(), 1);
        assert_eq!(tuple(&[[1, 2, 3], [1, 2, 4]]).hole_count(), 0);
    }

    #[test]
    fn hole_counts_triple_even_if_it_is_in_the_tuple() {
        // {1,2,3} is in the tuple, but its edges are also carried elsewhere
        assert_eq!(tuple(&[[1, 2, 3], [1, 2, 4], [2, 3, 5], [1, 3, 6]]).hole_count(), 1);
    }

    #[test]
    fn hit_profile_sums_to_3k() {
        let t = tuple(&[[1, 2, 4], [2, 3, 5], [1, 3, 6]]);
        let profile = t.hit_profile();
        let total: usize = profile.iter().enumerate().map(|(j, &h)| j * h).sum();
        assert_eq!(total, 3 * t.len());
        assert_eq!(profile[2], 3);
        assert_eq!(profile[1], 3);
    }

    #[test]
    fn rejects_degenerate_triangle() {
        assert!(TriangleTuple::new(vec![[1, 1, 2]]).is_err());
    }
}
