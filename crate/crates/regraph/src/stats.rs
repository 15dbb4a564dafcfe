//! Sample statistics and the Anderson-Darling test against a fully
//! specified normal.

use statrs::distribution::{ContinuousCDF, Normal};

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance.
pub fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() as f64 - 1.0)
}

pub fn standard_error(xs: &[f64]) -> f64 {
    (variance(xs) / xs.len() as f64).sqrt()
}

/// Moment skewness `m3 / m2^{3/2}` with population central moments.
pub fn skewness(xs: &[f64]) -> f64 {
    let m = mean(xs);
    let n = xs.len() as f64;
    let m2 = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n;
    let m3 = xs.iter().map(|x| (x - m).powi(3)).sum::<f64>() / n;
    m3 / m2.powf(1.5)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AndersonDarling {
    pub statistic: f64,
    pub p_value: f64,
}

/// `A^2` of `xs` against `N(mu, sigma^2)` with both parameters known, and its
/// upper-tail p-value.
pub fn anderson_darling(xs: &[f64], mu: f64, sigma: f64) -> AndersonDarling {
    let normal = Normal::new(mu, sigma).expect("sigma must be positive and finite");
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let z: Vec<f64> = sorted.iter().map(|&x| normal.cdf(x).clamp(1e-300, 1.0 - 1e-16)).collect();
    let s: f64 = (0..n).map(|i| (2 * i + 1) as f64 * (z[i].ln() + (1.0 - z[n - 1 - i]).ln())).sum();
    let statistic = -(n as f64) - s / n as f64;
    AndersonDarling { statistic, p_value: 1.0 - ad_cdf(n, statistic) }
}

/// Limiting distribution of `A^2` (Marsaglia & Marsaglia, 2004).
fn ad_inf(z: f64) -> f64 {
    if z <= 0.0 {
        return 0.0;
    }
    if z < 2.0 {
        (-1.2337141 / z).exp() / z.sqrt()
            * (2.00012 + (0.247105 - (0.0649821 - (0.0347962 - (0.011672 - 0.00168691 * z) * z) * z) * z) * z)
    } else {
        (-(1.0776 - (2.30695 - (0.43424 - (0.082433 - (0.008056 - 0.0003146 * z) * z) * z) * z) * z).exp()).exp()
    }
}

/// Finite-`n` correction to [`ad_inf`], also from Marsaglia & Marsaglia.
fn ad_errfix(n: usize, x: f64) -> f64 {
    let n = n as f64;
    if x > 0.8 {
        return (-130.2137 + (745.2337 - (1705.091 - (1950.646 - (1116.360 - 255.7844 * x) * x) * x) * x) * x) / n;
    }
    let c = 0.01265 + 0.1757 / n;
    if x < c {
        let t = x / c;
        let t = t.sqrt() * (1.0 - t) * (49.0 * t - 102.0);
        return t * (0.0037 / (n * n) + 0.00078 / n + 0.00006) / n;
    }
    let t = (x - c) / (0.8 - c);
    let t = -0.00022633 + (6.54034 - (14.6538 - (14.458 - (8.259 - 1.91864 * t) * t) * t) * t) * t;
    t * (0.04213 + 0.01365 / n) / n
}

/// `P(A^2 <= z)` for a sample of size `n`.
pub fn ad_cdf(n: usize, z: f64) -> f64 {
    let x = ad_inf(z);
    (x + ad_errfix(n, x)).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn basic_moments() {
        let xs = [1.0, 2.0, 3.0, 4.0, 10.0];
        assert_eq!(mean(&xs), 4.0);
        assert_eq!(variance(&xs), 12.5);
        assert!(skewness(&xs) > 1.0);
        assert!(skewness(&[1.0, 2.0, 3.0]).abs() < 1e-12);
    }

    #[test]
    fn asymptotic_critical_values() {
        // classical upper percentage points of A^2 for a fully specified law
        for (z, p) in [(1.933, 0.90), (2.492, 0.95), (3.070, 0.975), (3.857, 0.99)] {
            assert!((ad_inf(z) - p).abs() < 1e-3, "z = {z}: {}", ad_inf(z));
        }
        assert!((ad_cdf(1_000_000, 2.492) - 0.95).abs() < 1e-3);
    }

    #[test]
    fn normal_samples_pass_and_shifted_fail() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        // Box-Muller
        let xs: Vec<f64> = (0..2000)
            .map(|_| {
                let (a, b): (f64, f64) = (rng.gen(), rng.gen());
                5.0 + 2.0 * (-2.0 * (1.0 - a).ln()).sqrt() * (std::f64::consts::TAU * b).cos()
            })
            .collect();
        let ok = anderson_darling(&xs, 5.0, 2.0);
        assert!(ok.p_value > 0.01, "{ok:?}");
        let bad = anderson_darling(&xs, 5.5, 2.0);
        assert!(bad.p_value < 1e-4, "{bad:?}");
    }
}
