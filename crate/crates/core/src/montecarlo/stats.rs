use serde::{Deserialize, Serialize};

/// A sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub se: f64,
    /// Number of observations behind the estimate.
    pub n: u64,
}

impl Estimate {
    /// Proportion of `hits` among `n` trials with its binomial standard error.
    pub fn proportion(hits: u64, n: u64) -> Self {
        if n == 0 {
            return Self { mean: f64::NAN, se: f64::NAN, n };
        }
        let p = hits as f64 / n as f64;
        Self { mean: p, se: (p * (1.0 - p) / n as f64).sqrt(), n }
    }

    /// Deviation from `target` in units of the standard error.
    pub fn z(&self, target: f64) -> f64 {
        (self.mean - target) / self.se
    }
}

/// Streaming mean and variance (Welford).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Running {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Running {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn estimate(&self) -> Estimate {
        let se = if self.n > 1 { (self.m2 / (self.n - 1) as f64 / self.n as f64).sqrt() } else { f64::NAN };
        Estimate { mean: if self.n > 0 { self.mean } else { f64::NAN }, se, n: self.n }
    }
}

/// Kolmogorov-Smirnov statistic of `samples` against the continuous `cdf`.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs: Vec<f64> = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (k, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - k as f64 / n).max((k + 1) as f64 / n - f);
    }
    d
}

/// Asymptotic p-value of the KS statistic `d` for `n` samples.
pub fn ks_pvalue(d: f64, n: usize) -> f64 {
    let sn = (n as f64).sqrt();
    let t = (sn + 0.12 + 0.11 / sn) * d;
    if t < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let term = (-2.0 * (k * k) as f64 * t * t).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Ratio estimator over batches: `sum(num_b) / sum(den_b)` with its batch-means standard error.
pub fn batch_ratio(num: &[f64], den: &[f64]) -> Estimate {
    let b = num.len();
    let tn: f64 = num.iter().sum();
    let td: f64 = den.iter().sum();
    let mean = tn / td;
    if b < 2 || td == 0.0 {
        return Estimate { mean, se: f64::NAN, n: b as u64 };
    }
    let ss: f64 = num.iter().zip(den).map(|(a, c)| (a - mean * c).powi(2)).sum();
    let dbar = td / b as f64;
    Estimate { mean, se: (ss / ((b * (b - 1)) as f64)).sqrt() / dbar, n: b as u64 }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ks_pvalue_reference_points() {
        // Kolmogorov distribution: P(K > 1.358) = 0.05, P(K > 1.628) = 0.01.
        let n = 1_000_000;
        let scale = (n as f64).sqrt() + 0.12;
        assert!((ks_pvalue(1.3581 / scale, n) - 0.05).abs() < 2e-4);
        assert!((ks_pvalue(1.6276 / scale, n) - 0.01).abs() < 1e-4);
    }

    #[test]
    fn ks_statistic_of_a_perfect_grid() {
        let xs: Vec<f64> = (0..100).map(|k| (k as f64 + 0.5) / 100.0).collect();
        assert!((ks_statistic(&xs, |x| x) - 0.005).abs() < 1e-12);
    }

    #[test]
    fn running_matches_two_pass() {
        let xs = [1.0, 4.0, 2.5, 7.0, -1.0];
        let mut r = Running::default();
        xs.iter().for_each(|&x| r.push(x));
        let m = xs.iter().sum::<f64>() / 5.0;
        let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / 4.0;
        let e = r.estimate();
        assert!((e.mean - m).abs() < 1e-14 && (e.se - (v / 5.0).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn batch_ratio_equal_batches_is_plain_batch_means() {
        let num = [2.0, 4.0, 3.0, 5.0];
        let den = [1.0; 4];
        let e = batch_ratio(&num, &den);
        let v = [2.0f64, 4.0, 3.0, 5.0].iter().map(|x| (x - 3.5).powi(2)).sum::<f64>() / 3.0;
        assert!((e.mean - 3.5).abs() < 1e-15 && (e.se - (v / 4.0).sqrt()).abs() < 1e-14);
    }
}
