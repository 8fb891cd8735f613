//! Zipf content popularity and the three-level caching split.

use crate::error::{config, domain, Result};
use serde::{Deserialize, Serialize};

/// Library of `n_files` equally sized files ranked by popularity. The top
/// `m1` files are cached at D2D users, the top `m2` at small cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContentConfig {
    pub n_files: usize,
    pub m1: usize,
    pub m2: usize,
    pub gamma: f64,
    pub file_size_bits: f64,
}

impl ContentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.m1 < 1 || self.m1 > self.m2 || self.m2 > self.n_files {
            return Err(config(format!(
                "need 1 <= M1 <= M2 <= N, got M1={} M2={} N={}",
                self.m1, self.m2, self.n_files
            )));
        }
        if !(self.gamma >= 0.0) || !self.gamma.is_finite() {
            return Err(config(format!("Zipf exponent must be finite and >= 0, got {}", self.gamma)));
        }
        if !(self.file_size_bits > 0.0) || !self.file_size_bits.is_finite() {
            return Err(config(format!("file size must be positive, got {}", self.file_size_bits)));
        }
        Ok(())
    }
}

/// Zipf pmf over ranks `1..=n` with a cached normalizer.
#[derive(Debug, Clone, PartialEq)]
pub struct Popularity {
    pmf: Vec<f64>,
}

impl Popularity {
    pub fn new(cfg: &ContentConfig) -> Result<Self> {
        cfg.validate()?;
        let raw: Vec<f64> = (1..=cfg.n_files).map(|i| (i as f64).powf(-cfg.gamma)).collect();
        let norm: f64 = raw.iter().rev().sum();
        Ok(Self { pmf: raw.into_iter().map(|v| v / norm).collect() })
    }

    pub fn n_files(&self) -> usize {
        self.pmf.len()
    }

    /// Probability that a request targets the file of rank `i`.
    pub fn pmf(&self, i: usize) -> Result<f64> {
        if i == 0 || i > self.pmf.len() {
            return Err(domain(format!("rank {i} outside 1..={}", self.pmf.len())));
        }
        Ok(self.pmf[i - 1])
    }

    /// Probability mass of ranks `a..=b`; zero when `a > b`.
    pub fn mass(&self, a: usize, b: usize) -> Result<f64> {
        if a > b {
            return Ok(0.0);
        }
        if a == 0 || b > self.pmf.len() {
            return Err(domain(format!("rank range {a}..={b} outside 1..={}", self.pmf.len())));
        }
        Ok(self.pmf[a - 1..b].iter().rev().sum())
    }
}

/// Zipf probability of rank `i`.
pub fn zipf_pmf(i: usize, cfg: &ContentConfig) -> Result<f64> {
    Popularity::new(cfg)?.pmf(i)
}

/// Cumulative popularity of ranks `a..=b`.
pub fn f_pop(a: usize, b: usize, cfg: &ContentConfig) -> Result<f64> {
    Popularity::new(cfg)?.mass(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cfg(gamma: f64) -> ContentConfig {
        ContentConfig { n_files: 1000, m1: 10, m2: 100, gamma, file_size_bits: 1e8 }
    }

    #[test]
    fn uniform_when_gamma_is_zero() {
        let p = Popularity::new(&cfg(0.0)).unwrap();
        assert!((p.mass(1, 10).unwrap() - 0.01).abs() < 1e-15);
    }

    #[test]
    fn gamma_one_head_mass() {
        let c = ContentConfig { n_files: 1000, m1: 1, m2: 1, gamma: 1.0, file_size_bits: 1.0 };
        let h: f64 = (1..=1000).map(|i| 1.0 / i as f64).sum();
        assert!((f_pop(1, 1, &c).unwrap() - 1.0 / h).abs() < 1e-14);
        assert!((1.0 / h - 0.1336).abs() < 1e-4);
    }

    #[test]
    fn boundaries() {
        let p = Popularity::new(&cfg(0.8)).unwrap();
        assert_eq!(p.mass(11, 10).unwrap(), 0.0);
        assert!(p.mass(0, 3).is_err());
        assert!(p.pmf(1001).is_err());
        let bad = ContentConfig { m1: 200, ..cfg(0.8) };
        assert!(Popularity::new(&bad).is_err());
        let neg = cfg(-0.1);
        assert!(Popularity::new(&neg).is_err());
    }

    proptest! {
        #[test]
        fn partition_sums_to_one(gamma in 0.0f64..3.0, m1 in 1usize..50, extra in 0usize..400) {
            let c = ContentConfig { n_files: 500, m1, m2: (m1 + extra).min(500), gamma, file_size_bits: 1.0 };
            let p = Popularity::new(&c).unwrap();
            let total = p.mass(1, c.m1).unwrap() + p.mass(c.m1 + 1, c.m2).unwrap() + p.mass(c.m2 + 1, c.n_files).unwrap();
            prop_assert!((total - 1.0).abs() < 1e-12);
        }

        #[test]
        fn pmf_is_nonincreasing(gamma in 0.0f64..3.0, i in 1usize..499) {
            let p = Popularity::new(&cfg(gamma)).unwrap();
            prop_assert!(p.pmf(i).unwrap() >= p.pmf(i + 1).unwrap());
        }

        #[test]
        fn head_mass_grows_with_gamma(g in 0.0f64..2.5, dg in 0.0f64..0.5) {
            let a = Popularity::new(&cfg(g)).unwrap().mass(1, 10).unwrap();
            let b = Popularity::new(&cfg(g + dg)).unwrap().mass(1, 10).unwrap();
            prop_assert!(b >= a - 1e-15);
        }
    }
}
