use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use super::{int, joint_subgraph_prob, rat, ErrorOrder, ProbEstimate, Source};
use crate::error::{Error, Result};
use crate::pattern::Pattern;

/// Smallness threshold applied to every hypothesis ratio.
pub const DEFAULT_HYPOTHESIS_THRESHOLD: f64 = 0.1;

fn falling_big(x: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(x.saturating_sub(i)))
}

fn pow_rat(base: &BigRational, k: u32) -> BigRational {
    (0..k).fold(BigRational::one(), |acc, _| acc * base)
}

/// `phi_1, ..., phi_l` for closing a cycle edge by edge:
/// `-d, -2d, -2d - 2(i-3) - 1 (3 <= i <= l-1), -3d + 3 - 2(l-3)`.
pub fn cycle_phi_terms(len: usize, d: usize) -> Vec<i64> {
    let d = d as i64;
    let l = len as i64;
    (1..=l)
        .map(|i| match i {
            1 => -d,
            2 => -2 * d,
            i if i == l => -3 * d + 3 - 2 * (l - 3),
            i => -2 * d - 2 * (i - 3) - 1,
        })
        .collect()
}

/// `lambda_{C_l} = ((d-1)/n)^l (1 - sum_i phi_i / dn)`.
pub fn lambda_cycle(len: usize, d: usize, n: usize) -> Result<ProbEstimate> {
    if len < 3 {
        return Err(Error::OutOfRange(format!("cycle length {len} < 3")));
    }
    if d == 0 || n == 0 {
        return Err(Error::OutOfRange("d and n must be positive".into()));
    }
    let sum: i64 = cycle_phi_terms(len, d).iter().sum();
    let dn = (d * n) as i128;
    let base = rat(d as i128 - 1, n as i128);
    let value = pow_rat(&base, len as u32) * (int(1) - rat(sum as i128, dn));
    let scale = (d * d) as f64 / (n as f64 * n as f64);
    Ok(ProbEstimate::from_exact(value, Source::CycleLambda, ErrorOrder::DSqOverNSq, scale))
}

/// `mu_H = (n)_t / aut(H) * lambda_H`. Cycles use [`lambda_cycle`]; every
/// other pattern uses the chained product on the copy `v -> v`.
pub fn mu_pattern(p: &Pattern, d: usize, n: usize) -> Result<ProbEstimate> {
    let t = p.vertex_count();
    if t > n {
        return Err(Error::OutOfRange(format!("pattern has {t} vertices but n = {n}")));
    }
    if p.max_degree() > d {
        return Ok(ProbEstimate::zero(Source::PatternExpectation, ErrorOrder::DSqOverNSq));
    }
    let lambda = if p.is_cycle() { lambda_cycle(t, d, n)? } else { joint_subgraph_prob(&p.embed(n)?, d, n)? };
    let aut = p.aut_size()?;
    let copies = BigRational::new(falling_big(n as u64, t as u64), BigInt::from(aut));
    let value = copies * lambda.exact.expect("exact lambda");
    Ok(ProbEstimate::from_exact(value, Source::PatternExpectation, lambda.error_order, lambda.error_scale))
}

fn falling_f64(x: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (x - i as f64))
}

/// Leading term `(n)_t / aut(H) * prod_v (d)_{d_v} / (dn)^h`, for real `d`.
pub fn mu_leading(p: &Pattern, d: f64, n: f64) -> Result<f64> {
    let aut = p.aut_size()? as f64;
    let t = p.vertex_count();
    let h = p.edge_count();
    let phi: f64 = (0..t).map(|v| falling_f64(d, p.degree(v))).product();
    let dn_h = (0..h).fold(1.0, |acc, _| acc * d * n);
    Ok(falling_f64(n, t) / aut * phi / dn_h)
}

/// Variance of the triangle count with the four pair-type contributions.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleVariance {
    /// `(n)_3/6 ((d-1)/n)^3 (1 + (6d-3)/dn) - (d-1)^4 (d-2) (n-1)_3 / (2dn^4)`.
    pub estimate: ProbEstimate,
    /// (a) vertex-disjoint pairs: `((d-1)/n)^6 (n)_6 / (2dn)`.
    pub vertex_disjoint: BigRational,
    /// (b) one shared vertex: `-(n)_5 (2d-3)(d-1)^5 / (2dn^6)`.
    pub one_shared_vertex: BigRational,
    /// (c) two shared vertices: `(n)_4 (d-1)^4 (d-2)^2 / (2dn^5)`.
    pub two_shared_vertices: BigRational,
    /// (d) identical pairs: `(n)_3/6 ((d-1)/n)^3 (1 + (6d-3)/dn)`.
    pub identical: BigRational,
}

impl TriangleVariance {
    pub fn value(&self) -> f64 {
        self.estimate.value
    }

    pub fn case_values(&self) -> [f64; 4] {
        [
            self.vertex_disjoint.to_f64().unwrap_or(f64::NAN),
            self.one_shared_vertex.to_f64().unwrap_or(f64::NAN),
            self.two_shared_vertices.to_f64().unwrap_or(f64::NAN),
            self.identical.to_f64().unwrap_or(f64::NAN),
        ]
    }
}

pub fn sigma2_triangle(d: usize, n: usize) -> Result<TriangleVariance> {
    if d < 2 || n <= d {
        return Err(Error::OutOfRange(format!("need d >= 2 and n > d, got d = {d}, n = {n}")));
    }
    let (di, ni) = (d as i128, n as i128);
    let nu = n as u64;
    let n_pow = |k: u32| BigInt::from(ni).pow(k);
    let dm1 = |k: u32| BigInt::from(di - 1).pow(k);
    let two_d = BigInt::from(2 * di);

    let base = rat(di - 1, ni);
    let vertex_disjoint = pow_rat(&base, 6) * BigRational::new(falling_big(nu, 6), two_d.clone() * BigInt::from(ni));
    let one_shared_vertex =
        -BigRational::new(falling_big(nu, 5) * BigInt::from(2 * di - 3) * dm1(5), two_d.clone() * n_pow(6));
    let two_shared_vertices =
        BigRational::new(falling_big(nu, 4) * dm1(4) * BigInt::from(di - 2).pow(2), two_d.clone() * n_pow(5));
    let identical =
        BigRational::new(falling_big(nu, 3), BigInt::from(6)) * pow_rat(&base, 3) * (int(1) + rat(6 * di - 3, di * ni));
    let overlap = BigRational::new(dm1(4) * BigInt::from(di - 2) * falling_big(nu - 1, 3), two_d * n_pow(4));
    let total = identical.clone() - overlap;
    let (df, nf) = (d as f64, n as f64);
    let scale = df * df * df * df * df * df * df * df / (nf * nf);
    Ok(TriangleVariance {
        estimate: ProbEstimate::from_exact(total, Source::TriangleVariance, ErrorOrder::D8OverNSq, scale),
        vertex_disjoint,
        one_shared_vertex,
        two_shared_vertices,
        identical,
    })
}

/// One smallness condition evaluated at `(d, n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisCheck {
    pub label: String,
    pub ratio: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HypothesisReport {
    pub threshold: f64,
    pub checks: Vec<HypothesisCheck>,
}

impl HypothesisReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Evaluates `d^{h-1}/n^{h-t+1}`, `d^{h+2}/n^{h-t+2}` and
/// `mu^{1-j/h} / n^{t rho(j)}` for `1 <= j <= h-1`, each against `threshold`.
pub fn variance_hypotheses(p: &Pattern, d: f64, n: f64, threshold: f64) -> Result<HypothesisReport> {
    if !p.is_strictly_balanced()? {
        return Err(Error::Contract("variance hypotheses need a strictly balanced pattern".into()));
    }
    let t = p.vertex_count() as f64;
    let h = p.edge_count() as f64;
    let mut checks = Vec::new();
    let mut push = |label: String, ratio: f64| {
        checks.push(HypothesisCheck { label, ratio, pass: ratio <= threshold });
    };
    push("d^(h-1)/n^(h-t+1)".into(), libm::pow(d, h - 1.0) / libm::pow(n, h - t + 1.0));
    push("d^(h+2)/n^(h-t+2)".into(), libm::pow(d, h + 2.0) / libm::pow(n, h - t + 2.0));
    let mu = mu_leading(p, d, n)?;
    for j in 1..p.edge_count() {
        let rho = p.rho(j)?;
        let rho = *rho.numer() as f64 / *rho.denom() as f64;
        let ratio = libm::pow(mu, 1.0 - j as f64 / h) / libm::pow(n, t * rho);
        push(format!("mu^(1-{j}/h)/n^(t*rho({j}))"), ratio);
    }
    Ok(HypothesisReport { threshold, checks })
}
