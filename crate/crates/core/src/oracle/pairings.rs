use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::DegreeSequence;

fn overflow() -> Error {
    Error::Capability("pairing count overflows 128 bits".into())
}

struct Dp {
    memo: BTreeMap<Vec<u8>, u128>,
}

impl Dp {
    /// Simple pairings of the points still free on the vertices of `tail`.
    /// The first vertex matches all its points to distinct later vertices:
    /// `r!` ways to assign its points to the chosen vertices times `r_w`
    /// choices of point at each chosen `w`.
    fn count(&mut self, tail: &[u8]) -> Result<u128> {
        let Some((&r, rest)) = tail.split_first() else {
            return Ok(1);
        };
        if let Some(&hit) = self.memo.get(tail) {
            return Ok(hit);
        }
        let open: Vec<usize> = (0..rest.len()).filter(|&i| rest[i] > 0).collect();
        let mut total = 0u128;
        let mut chosen = Vec::with_capacity(r as usize);
        self.choose(rest, &open, 0, r as usize, &mut chosen, &mut total)?;
        let r_fact = (1..=r as u128).product::<u128>();
        let total = total.checked_mul(r_fact).ok_or_else(overflow)?;
        self.memo.insert(tail.to_vec(), total);
        Ok(total)
    }

    fn choose(
        &mut self,
        rest: &[u8],
        open: &[usize],
        from: usize,
        need: usize,
        chosen: &mut Vec<usize>,
        total: &mut u128,
    ) -> Result<()> {
        if need == 0 {
            let mut next = rest.to_vec();
            let mut weight = 1u128;
            for &i in chosen.iter() {
                weight = weight.checked_mul(next[i] as u128).ok_or_else(overflow)?;
                next[i] -= 1;
            }
            let sub = self.count(&next)?;
            *total = weight.checked_mul(sub).and_then(|x| total.checked_add(x)).ok_or_else(overflow)?;
            return Ok(());
        }
        if open.len() - from < need {
            return Ok(());
        }
        for k in from..open.len() {
            chosen.push(open[k]);
            self.choose(rest, open, k + 1, need - 1, chosen, total)?;
            chosen.pop();
        }
        Ok(())
    }
}

/// Number of labeled simple graphs with degree sequence `dseq`, counted in
/// the pairing model: simple perfect matchings of the `d_v` points per
/// vertex, divided by `prod_v d_v!`.
pub fn count_by_pairings(dseq: &DegreeSequence) -> Result<u128> {
    if dseq.total() % 2 == 1 {
        return Ok(0);
    }
    let mut tail = Vec::with_capacity(dseq.len());
    for &d in dseq.values() {
        tail.push(u8::try_from(d).map_err(|_| Error::Capability(format!("degree {d} too large to count")))?);
    }
    let mut dp = Dp { memo: BTreeMap::new() };
    let pairings = dp.count(&tail)?;
    let mut labels = 1u128;
    for &d in dseq.values() {
        for k in 2..=d as u128 {
            labels = labels.checked_mul(k).ok_or_else(overflow)?;
        }
    }
    if pairings % labels != 0 {
        return Err(Error::Model(format!("{pairings} simple pairings not divisible by {labels}")));
    }
    Ok(pairings / labels)
}
