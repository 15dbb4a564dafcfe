//! Closed-form probability, expectation and variance estimates.
//!
//! Every formula is evaluated in exact rational arithmetic from integer
//! inputs; the `f64` in [`ProbEstimate`] is derived from the exact value at
//! the boundary. Error orders are carried as metadata and never folded into
//! values.

mod conditional;
mod moments;
mod phi;

pub use conditional::{
    cond_edge_prob_baseline, cond_edge_prob_refined_general, cond_edge_prob_refined_regular, cond_joint_upper_bound,
    joint_subgraph_prob, joint_subgraph_prob_ordered,
};
pub use moments::{
    cycle_phi_terms, lambda_cycle, mu_leading, mu_pattern, sigma2_triangle, variance_hypotheses, HypothesisCheck,
    HypothesisReport, TriangleVariance, DEFAULT_HYPOTHESIS_THRESHOLD,
};
pub use phi::{bar_phi, build_w_set, phi, phi_approx, WPairSet};

use alloc::format;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::graph::{Edge, SimpleGraph};

/// Which formula produced an estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    /// `(d_u - d_u^{H1})(d_v - d_v^{H1}) / (M - 2|H1|)`.
    BaselineConditional,
    /// `d~_u d~_v/(dn) (1 - phi_H(uv)/dn)` for regular degrees.
    RefinedRegular,
    /// The general-degree estimate with `phi_bar` and the set `W`.
    RefinedGeneral,
    /// Product of refined conditionals along an edge ordering.
    ChainedProduct,
    /// `lambda_F` used as the upper bound for `P(F | H^+)`.
    CorollaryUpperBound,
    /// `((d-1)/n)^l (1 - sum phi_i / dn)`.
    CycleLambda,
    /// `(n)_t / aut(H) * lambda_H`.
    PatternExpectation,
    /// Two-term variance of the triangle count.
    TriangleVariance,
    /// Switching-ratio Monte Carlo estimate `E b / (E f + E b)`.
    SwitchingMonteCarlo,
}

impl Source {
    pub fn name(&self) -> &'static str {
        match self {
            Source::BaselineConditional => "baseline-conditional",
            Source::RefinedRegular => "refined-regular",
            Source::RefinedGeneral => "refined-general",
            Source::ChainedProduct => "chained-product",
            Source::CorollaryUpperBound => "corollary-upper-bound",
            Source::CycleLambda => "cycle-lambda",
            Source::PatternExpectation => "pattern-expectation",
            Source::TriangleVariance => "triangle-variance",
            Source::SwitchingMonteCarlo => "switching-monte-carlo",
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Symbolic relative (or, for variances, absolute) error order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorOrder {
    DeltaSqOverM,
    Special,
    General,
    Chained,
    Corollary,
    DSqOverNSq,
    D8OverNSq,
    StandardError,
    Exact,
}

impl ErrorOrder {
    pub fn symbol(&self) -> &'static str {
        match self {
            ErrorOrder::DeltaSqOverM => "Δ²/M",
            ErrorOrder::Special => "|H|/n² + |H|²/d²n² + d²/n²",
            ErrorOrder::General => "Δ⁵n/M³",
            ErrorOrder::Chained => "Σ_j (|H_j|/n² + |H_j|²/d²n² + d²/n²)",
            ErrorOrder::Corollary => "1/n + |H|/dn + d²/n²",
            ErrorOrder::DSqOverNSq => "d²/n²",
            ErrorOrder::D8OverNSq => "d⁸/n²",
            ErrorOrder::StandardError => "monte-carlo standard error",
            ErrorOrder::Exact => "0",
        }
    }
}

impl fmt::Display for ErrorOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// An estimate together with where it came from and how wrong it may be.
///
/// `error_scale` is the error order evaluated at the inputs, without any
/// constant; bands are `value * (1 ± C * error_scale)` for a caller-chosen `C`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbEstimate {
    pub value: f64,
    pub exact: Option<BigRational>,
    pub source: Source,
    pub error_order: ErrorOrder,
    pub error_scale: f64,
}

impl ProbEstimate {
    pub(crate) fn from_exact(exact: BigRational, source: Source, error_order: ErrorOrder, error_scale: f64) -> Self {
        let value = exact.to_f64().unwrap_or(f64::NAN);
        ProbEstimate { value, exact: Some(exact), source, error_order, error_scale }
    }

    pub(crate) fn zero(source: Source, error_order: ErrorOrder) -> Self {
        ProbEstimate::from_exact(rat(0, 1), source, error_order, 0.0)
    }

    /// `value * (1 - c * scale), value * (1 + c * scale)`.
    pub fn band(&self, c: f64) -> (f64, f64) {
        (self.value * (1.0 - c * self.error_scale), self.value * (1.0 + c * self.error_scale))
    }

    pub fn relative_error(&self, truth: f64) -> f64 {
        let diff = self.value - truth;
        let diff = if diff < 0.0 { -diff } else { diff };
        diff / truth
    }
}

/// The conditioning `H1` present, `H2` absent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditioningPair {
    h1: SimpleGraph,
    h2: SimpleGraph,
    union: SimpleGraph,
}

impl ConditioningPair {
    pub fn new(h1: SimpleGraph, h2: SimpleGraph) -> Result<Self> {
        if h1.n() != h2.n() {
            return Err(Error::MalformedInput(format!("H1 on {} vertices, H2 on {}", h1.n(), h2.n())));
        }
        if !h1.is_edge_disjoint(&h2) {
            return Err(Error::Contract("H1 and H2 share an edge".into()));
        }
        let union = h1.union(&h2);
        Ok(ConditioningPair { h1, h2, union })
    }

    pub fn empty(n: usize) -> Self {
        ConditioningPair { h1: SimpleGraph::empty(n), h2: SimpleGraph::empty(n), union: SimpleGraph::empty(n) }
    }

    pub fn n(&self) -> usize {
        self.h1.n()
    }

    pub fn required(&self) -> &SimpleGraph {
        &self.h1
    }

    pub fn forbidden(&self) -> &SimpleGraph {
        &self.h2
    }

    /// `H1 ∪ H2`.
    pub fn union(&self) -> &SimpleGraph {
        &self.union
    }

    pub fn mentions(&self, e: Edge) -> bool {
        self.union.contains(e)
    }

    /// Same conditioning with `uv` additionally required.
    pub fn with_required(&self, u: usize, v: usize) -> Result<Self> {
        let mut h1 = self.h1.clone();
        if self.h2.has_edge(u, v) {
            return Err(Error::Contract(format!("{u}-{v} is forbidden")));
        }
        h1.add_edge(u, v)?;
        ConditioningPair::new(h1, self.h2.clone())
    }

    /// Same conditioning with `uv` additionally forbidden.
    pub fn with_forbidden(&self, u: usize, v: usize) -> Result<Self> {
        let mut h2 = self.h2.clone();
        if self.h1.has_edge(u, v) {
            return Err(Error::Contract(format!("{u}-{v} is required")));
        }
        h2.add_edge(u, v)?;
        ConditioningPair::new(self.h1.clone(), h2)
    }
}

pub(crate) fn rat(num: i128, den: i128) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub(crate) fn int(x: i128) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}
