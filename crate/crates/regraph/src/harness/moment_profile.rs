//! Factorial moments `E (Z)_k` of the triangle count relative to `mu^k`:
//! exact at oracle-sized points, sampled otherwise.

use num_rational::BigRational;
use num_traits::ToPrimitive;

use regraph_core::estimates::mu_pattern;
use regraph_core::oracle::{check_budget, factorial_moments, CountDistribution};
use regraph_core::{DegreeSequence, Pattern};

use super::{new_report, sample_triangle_counts, ExperimentConfig};
use crate::error::HarnessResult;
use crate::parallel::exact_count_distribution;
use crate::report::{Cell, ColumnSpec, Provenance::*, StatReport};
use crate::stats;

pub const COLUMNS: &[ColumnSpec] = &[
    ColumnSpec { name: "n", provenance: Parameter, description: "number of vertices" },
    ColumnSpec { name: "d", provenance: Parameter, description: "degree" },
    ColumnSpec { name: "k", provenance: Parameter, description: "factorial moment order" },
    ColumnSpec { name: "mode", provenance: Parameter, description: "oracle-exact or monte-carlo" },
    ColumnSpec { name: "samples", provenance: Parameter, description: "sampled graphs (0 in exact mode)" },
    ColumnSpec { name: "mu", provenance: Formula, description: "expected triangle count estimate as a float" },
    ColumnSpec { name: "mu_exact", provenance: Formula, description: "the same estimate as a fraction" },
    ColumnSpec { name: "mu_k", provenance: Formula, description: "mu^k" },
    ColumnSpec { name: "factorial_moment_exact", provenance: OracleExact, description: "E (Z)_k as a fraction" },
    ColumnSpec { name: "exact_ratio", provenance: OracleExact, description: "E (Z)_k / mu^k from the exact moment" },
    ColumnSpec { name: "factorial_moment", provenance: MonteCarlo, description: "sample mean of (Z)_k" },
    ColumnSpec { name: "ratio", provenance: MonteCarlo, description: "sampled E (Z)_k / mu^k" },
    ColumnSpec { name: "ratio_se", provenance: MonteCarlo, description: "standard error of ratio" },
    ColumnSpec {
        name: "high_variance",
        provenance: MonteCarlo,
        description: "sampled with k > 3: unreliable, not gated",
    },
];

/// Largest order whose Monte Carlo estimate is treated as reliable.
pub const RELIABLE_K: u32 = 3;

fn falling(z: u64, k: u32) -> f64 {
    (0..k as u64).map(|i| z as f64 - i as f64).product()
}

/// `E (Z)_k / mu^k` for `k = 1..=k_max`, exactly.
pub fn exact_ratios(dist: &CountDistribution, mu: &BigRational, k_max: u32) -> Vec<BigRational> {
    factorial_moments(dist, k_max).into_iter().zip(1..).map(|(m, k)| m / num_traits::pow(mu.clone(), k)).collect()
}

pub fn run(cfg: &ExperimentConfig) -> HarnessResult<StatReport> {
    let tri = Pattern::triangle();
    let mut report = new_report(cfg, COLUMNS);
    report.meta("k_max", cfg.k_max);
    report.meta("reliable_k", RELIABLE_K);
    for (index, &p) in cfg.grid.iter().enumerate() {
        let mu_est = mu_pattern(&tri, p.d, p.n)?;
        let mu = mu_est.value;
        let mu_exact = mu_est.exact.clone();
        let base = |k: u32, mode: &str, samples: usize| {
            vec![
                Cell::int(p.n),
                Cell::int(p.d),
                Cell::int(k),
                Cell::text(mode),
                Cell::int(samples),
                Cell::float(mu),
                mu_exact.as_ref().map_or(Cell::Missing, |m| Cell::text(m.to_string())),
                Cell::float(mu.powi(k as i32)),
            ]
        };
        if check_budget(&DegreeSequence::regular(p.n, p.d)).is_ok() {
            let dist = exact_count_distribution(p.n, p.d, &tri)?;
            let moments = factorial_moments(&dist, cfg.k_max);
            let ratios = mu_exact.as_ref().map(|m| exact_ratios(&dist, m, cfg.k_max));
            for (k, m) in (1..).zip(moments) {
                let mut row = base(k, "oracle-exact", 0);
                let ratio = match &ratios {
                    Some(r) => r[k as usize - 1].to_f64().unwrap_or(f64::NAN),
                    None => m.to_f64().unwrap_or(f64::NAN) / mu.powi(k as i32),
                };
                row.extend([
                    Cell::text(m.to_string()),
                    Cell::float(ratio),
                    Cell::Missing,
                    Cell::Missing,
                    Cell::Missing,
                    Cell::Missing,
                ]);
                report.push_row(row);
            }
        } else {
            let counts = sample_triangle_counts(cfg, index, p)?;
            for k in 1..=cfg.k_max {
                let xs: Vec<f64> = counts.iter().map(|&z| falling(z, k)).collect();
                let mk = mu.powi(k as i32);
                let mut row = base(k, "monte-carlo", counts.len());
                row.extend([
                    Cell::Missing,
                    Cell::Missing,
                    Cell::float(stats::mean(&xs)),
                    Cell::float(stats::mean(&xs) / mk),
                    Cell::float(stats::standard_error(&xs) / mk),
                    Cell::Bool(k > RELIABLE_K),
                ]);
                report.push_row(row);
            }
        }
    }
    Ok(report)
}
