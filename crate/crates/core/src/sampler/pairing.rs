use alloc::format;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use super::swap::SwapGraph;
use crate::error::{Error, Result};
use crate::graph::DegreeSequence;

fn points(dseq: &DegreeSequence) -> Vec<u32> {
    let mut pts = Vec::with_capacity(dseq.total() as usize);
    for (v, &d) in dseq.values().iter().enumerate() {
        pts.extend(core::iter::repeat_n(v as u32, d));
    }
    pts
}

/// Uniform perfect matching of the points, restarted until the projection
/// is simple. Every simple graph with degrees `dseq` comes from exactly
/// `prod_v d_v!` matchings, so the accepted graph is exactly uniform.
pub fn pairing_rejection<R: Rng + ?Sized>(dseq: &DegreeSequence, rng: &mut R, max_restarts: u32) -> Result<SwapGraph> {
    if dseq.total() % 2 == 1 {
        return Err(Error::Model(format!("degree sum {} is odd", dseq.total())));
    }
    let mut pts = points(dseq);
    'attempt: for _ in 0..max_restarts {
        pts.shuffle(rng);
        let mut g = SwapGraph::empty(dseq.len());
        for pair in pts.chunks_exact(2) {
            let (a, b) = (pair[0] as usize, pair[1] as usize);
            if a == b || g.has_edge(a, b) {
                continue 'attempt;
            }
            g.push_edge(a, b);
        }
        return Ok(g);
    }
    Err(Error::RetryLimit(format!("no simple pairing in {max_restarts} attempts")))
}

/// Consecutive failed draws before checking whether any legal pair is left.
const STUCK_CHECK: u32 = 64;

/// Pairs two uniformly chosen unpaired points whenever they form a legal
/// edge (distinct vertices, not yet adjacent), restarting from scratch when
/// no legal pair remains.
pub fn incremental_pairing<R: Rng + ?Sized>(
    dseq: &DegreeSequence,
    rng: &mut R,
    max_restarts: u32,
) -> Result<SwapGraph> {
    if dseq.total() % 2 == 1 {
        return Err(Error::Model(format!("degree sum {} is odd", dseq.total())));
    }
    let all = points(dseq);
    'attempt: for _ in 0..max_restarts {
        let mut pts = all.clone();
        let mut g = SwapGraph::empty(dseq.len());
        let mut fails = 0u32;
        while !pts.is_empty() {
            let i = rng.gen_range(0..pts.len());
            let mut j = rng.gen_range(0..pts.len() - 1);
            if j >= i {
                j += 1;
            }
            let (a, b) = (pts[i] as usize, pts[j] as usize);
            if a != b && !g.has_edge(a, b) {
                g.push_edge(a, b);
                pts.swap_remove(i.max(j));
                pts.swap_remove(i.min(j));
                fails = 0;
                continue;
            }
            fails += 1;
            if fails >= STUCK_CHECK {
                if !legal_pair_left(&g, &pts) {
                    continue 'attempt;
                }
                fails = 0;
            }
        }
        return Ok(g);
    }
    Err(Error::RetryLimit(format!("incremental pairing stuck {max_restarts} times")))
}

fn legal_pair_left(g: &SwapGraph, pts: &[u32]) -> bool {
    let mut verts: Vec<u32> = pts.to_vec();
    verts.sort_unstable();
    verts.dedup();
    verts.iter().enumerate().any(|(k, &a)| verts[k + 1..].iter().any(|&b| !g.has_edge(a as usize, b as usize)))
}
