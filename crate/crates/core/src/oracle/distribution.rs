use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exact law of a nonnegative integer count over a finite uniform class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountDistribution {
    pmf: BTreeMap<u64, BigRational>,
}

impl CountDistribution {
    /// From `value -> number of class members`.
    pub fn from_histogram(hist: &BTreeMap<u64, u64>) -> Self {
        let total: u64 = hist.values().sum();
        let pmf = hist
            .iter()
            .filter(|(_, &c)| c > 0)
            .map(|(&z, &c)| (z, BigRational::new(BigInt::from(c), BigInt::from(total))))
            .collect();
        CountDistribution { pmf }
    }

    pub fn point_mass(z: u64) -> Self {
        CountDistribution { pmf: [(z, BigRational::one())].into_iter().collect() }
    }

    pub fn pmf(&self) -> &BTreeMap<u64, BigRational> {
        &self.pmf
    }

    pub fn total_probability(&self) -> BigRational {
        self.pmf.values().fold(BigRational::zero(), |acc, p| acc + p)
    }

    fn expect(&self, f: impl Fn(u64) -> BigInt) -> BigRational {
        self.pmf.iter().fold(BigRational::zero(), |acc, (&z, p)| acc + p * BigRational::from_integer(f(z)))
    }

    pub fn mean(&self) -> BigRational {
        self.expect(BigInt::from)
    }

    pub fn variance(&self) -> BigRational {
        let m = self.mean();
        self.expect(|z| BigInt::from(z) * BigInt::from(z)) - &m * &m
    }

    /// `E (Z)_k = sum_z P(Z = z) z (z-1) ... (z-k+1)`.
    pub fn factorial_moment(&self, k: u32) -> BigRational {
        self.expect(|z| (0..k as u64).fold(BigInt::one(), |acc, i| acc * BigInt::from(z.saturating_sub(i))))
    }
}

/// `E (Z)_1, ..., E (Z)_{k_max}`.
pub fn factorial_moments(dist: &CountDistribution, k_max: u32) -> Vec<BigRational> {
    (1..=k_max).map(|k| dist.factorial_moment(k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimates::{int, rat};

    #[test]
    fn point_masses() {
        let four = CountDistribution::point_mass(4);
        assert_eq!(factorial_moments(&four, 3), alloc::vec![int(4), int(12), int(24)]);
        assert_eq!(four.variance(), int(0));
        let zero = CountDistribution::point_mass(0);
        assert!(factorial_moments(&zero, 4).iter().all(|m| m.is_zero()));
    }

    #[test]
    fn histogram_moments() {
        let hist: BTreeMap<u64, u64> = [(0, 2), (1, 1), (3, 1)].into_iter().collect();
        let d = CountDistribution::from_histogram(&hist);
        assert_eq!(d.total_probability(), int(1));
        assert_eq!(d.mean(), int(1));
        assert_eq!(d.variance(), rat(10, 4) - int(1));
        assert_eq!(d.factorial_moment(2), rat(6, 4));
        assert_eq!(d.factorial_moment(3), rat(6, 4));
        assert_eq!(d.factorial_moment(4), int(0));
    }
}
