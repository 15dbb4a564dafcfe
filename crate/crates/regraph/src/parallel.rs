//! Oracle enumeration split over first-level subtrees with rayon. Results
//! are merged with commutative accumulators, so they do not depend on the
//! number of worker threads.

use num_rational::BigRational;
use rayon::prelude::*;

use regraph_core::estimates::ConditioningPair;
use regraph_core::oracle::{Accumulator, ClassCounter, CopyHistogram, CountDistribution, EdgeCounter, ExactClass};
use regraph_core::{DegreeSequence, Error, Pattern};

use crate::error::HarnessResult;

/// Runs `make()` accumulators over every subtree of `class` in parallel and
/// merges them.
pub fn par_run<A, F>(class: &ExactClass, make: F) -> A
where
    A: Accumulator + Send,
    F: Fn() -> A + Sync + Send,
{
    let e = class.enumerator();
    e.branches()
        .into_par_iter()
        .map(|b| {
            let mut acc = make();
            e.run_branch(b, &mut acc);
            acc
        })
        .reduce(&make, |mut a, b| {
            a.merge(b);
            a
        })
}

pub fn class_size(dseq: &DegreeSequence, ctx: &ConditioningPair) -> HarnessResult<u64> {
    let class = ExactClass::new(dseq.clone(), ctx.clone())?;
    Ok(par_run(&class, ClassCounter::default).0)
}

pub fn exact_conditional_edge_prob(
    n: usize,
    d: usize,
    ctx: &ConditioningPair,
    u: usize,
    v: usize,
) -> HarnessResult<BigRational> {
    if u >= n || v >= n || u == v {
        return Err(Error::OutOfRange(format!("bad vertex pair {u}, {v} for n = {n}")).into());
    }
    let class = ExactClass::regular(n, d, ctx.clone())?;
    Ok(par_run(&class, || EdgeCounter::new(u, v)).probability()?)
}

pub fn exact_count_distribution(n: usize, d: usize, p: &Pattern) -> HarnessResult<CountDistribution> {
    let class = ExactClass::regular(n, d, ConditioningPair::empty(n))?;
    let proto = CopyHistogram::new(p)?;
    Ok(par_run(&class, || proto.clone()).distribution())
}

#[cfg(test)]
mod tests {
    use super::*;
    use regraph_core::oracle;
    use regraph_core::SimpleGraph;

    #[test]
    fn matches_serial_oracle() {
        let h1 = SimpleGraph::from_edges(8, [(2, 3)]).unwrap();
        let ctx = ConditioningPair::new(h1, SimpleGraph::empty(8)).unwrap();
        assert_eq!(
            exact_conditional_edge_prob(8, 3, &ctx, 0, 1).unwrap(),
            oracle::exact_conditional_edge_prob(8, 3, &ctx, 0, 1).unwrap()
        );
        assert_eq!(
            exact_count_distribution(8, 3, &Pattern::triangle()).unwrap(),
            oracle::exact_count_distribution(8, 3, &Pattern::triangle()).unwrap()
        );
        assert_eq!(class_size(&DegreeSequence::regular(8, 3), &ConditioningPair::empty(8)).unwrap(), 19355);
    }

    #[test]
    fn thread_count_does_not_matter() {
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| exact_count_distribution(8, 3, &Pattern::cycle(4)).unwrap())
        };
        assert_eq!(run(1), run(4));
    }
}
