//! User-state matrix, per-node arrival rates, service rates and loads.
//!
//! Rows are user classes 1-4, each split into a backhaul-free (odd row) and
//! backhaul-needed (even row) state; columns are the D2D, SBS, MBS and local
//! tiers.

use crate::association::{AssocProbs, NetworkConfig, Tier};
use crate::content::{ContentConfig, Popularity};
use crate::error::{config, Error, Result};
use crate::rates::{ActiveIntensities, RateTable};
use serde::{Deserialize, Serialize};
use std::io::{self, Write};

pub const ROWS: usize = 8;
pub const COLS: usize = 4;
pub type Matrix = [[f64; COLS]; ROWS];

pub const COLUMN_NAMES: [&str; COLS] = ["d2d", "sbs", "mbs", "local"];

/// Penalty on the rate of backhaul-needed states: `f(u) = delta * u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BackhaulPolicy {
    pub delta: f64,
}

impl Default for BackhaulPolicy {
    fn default() -> Self {
        Self { delta: 0.8 }
    }
}

impl BackhaulPolicy {
    pub fn apply(&self, rate: f64) -> f64 {
        self.delta * rate
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrafficConfig {
    /// Requests per second per macro cell.
    pub request_rate: f64,
    /// Inverse of the mean number of contents per request.
    pub content_rate: f64,
    pub bandwidth_hz: f64,
    /// Bits per nat.
    pub eta: f64,
    pub backhaul: BackhaulPolicy,
    /// Scheduling weight of each (row, tier) state.
    pub weights: Matrix,
}

impl Default for TrafficConfig {
    fn default() -> Self {
        Self {
            request_rate: 0.2,
            content_rate: 1.0,
            bandwidth_hz: 70e6,
            eta: 1.443,
            backhaul: BackhaulPolicy::default(),
            weights: [[1.0; COLS]; ROWS],
        }
    }
}

impl TrafficConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("request rate", self.request_rate),
            ("content rate", self.content_rate),
            ("bandwidth", self.bandwidth_hz),
            ("eta", self.eta),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(config(format!("{name} must be positive, got {v}")));
            }
        }
        let d = self.backhaul.delta;
        if !(d > 0.0 && d <= 1.0) {
            return Err(config(format!("backhaul scale must lie in (0, 1], got {d}")));
        }
        if self.weights.iter().flatten().any(|&w| !(w > 0.0) || !w.is_finite()) {
            return Err(config("all weights must be positive"));
        }
        Ok(())
    }
}

/// `min(alpha lambda0, lambda0 G1 (1 - alpha) F(1, M1))`.
pub fn active_d2d_intensity(
    cfg: &NetworkConfig,
    assoc: &AssocProbs,
    pop: &Popularity,
    content: &ContentConfig,
) -> Result<f64> {
    let demand = cfg.lambda0 * assoc.tier[0] * (1.0 - cfg.alpha) * pop.mass(1, content.m1)?;
    Ok((cfg.alpha * cfg.lambda0).min(demand))
}

pub fn active_intensities(
    cfg: &NetworkConfig,
    assoc: &AssocProbs,
    pop: &Popularity,
    content: &ContentConfig,
) -> Result<ActiveIntensities> {
    Ok(ActiveIntensities {
        d2d: active_d2d_intensity(cfg, assoc, pop, content)?,
        sbs: cfg.lambda_p2 * cfg.mean_cluster_size,
        mbs: cfg.lambda3,
        local: cfg.alpha * cfg.lambda0,
    })
}

/// Probability of each (state, tier) pair for the typical user.
pub fn build_state_matrix(alpha: f64, assoc: &AssocProbs, pop: &Popularity, content: &ContentConfig) -> Result<Matrix> {
    let (m1, m2, n) = (content.m1, content.m2, content.n_files);
    let f = |a: usize, b: usize| pop.mass(a, b);
    let g = assoc.tier;
    let p23 = assoc.pairwise[1][2];
    let p32 = assoc.pairwise[2][1];
    let p123 = assoc.ordered_prob([Tier::D2d, Tier::Sbs, Tier::Mbs]);
    let p132 = assoc.ordered_prob([Tier::D2d, Tier::Mbs, Tier::Sbs]);
    let na = 1.0 - alpha;
    let mut d = [[0.0; COLS]; ROWS];
    d[0] = [g[0] * na * f(1, m1)?, g[1] * na * f(1, m2)?, g[2] * na, 0.0];
    d[1] = [0.0, g[1] * na * f(m2 + 1, n)?, 0.0, 0.0];
    d[2] = [0.0, p23 * alpha * f(m1 + 1, m2)?, p32 * alpha * f(m1 + 1, n)?, 0.0];
    d[3] = [0.0, p23 * alpha * f(m2 + 1, n)?, 0.0, 0.0];
    d[4] = [0.0, p123 * na * f(m1 + 1, m2)?, p132 * na * f(m1 + 1, n)?, 0.0];
    d[5] = [0.0, p123 * na * f(m2 + 1, n)?, 0.0, 0.0];
    d[6] = [0.0, 0.0, 0.0, alpha * f(1, m1)?];
    let tol = 1e-9;
    if let Some(v) = d.iter().flatten().find(|&&v| !(-tol..=1.0 + tol).contains(&v)) {
        return Err(Error::Range(format!("state probability {v} outside [0, 1]")));
    }
    Ok(d)
}

/// Mean intensity of nodes able to serve each column.
pub fn column_intensities(active: &ActiveIntensities) -> [f64; COLS] {
    [active.d2d, active.sbs, active.mbs, active.local]
}

/// Request arrival rate per serving node for each state.
pub fn arrival_rates(
    d: &Matrix,
    traffic: &TrafficConfig,
    cfg: &NetworkConfig,
    active: &ActiveIntensities,
) -> Result<Matrix> {
    let lam = column_intensities(active);
    let mut z = [[0.0; COLS]; ROWS];
    for i in 0..ROWS {
        for j in 0..COLS {
            if d[i][j] == 0.0 {
                continue;
            }
            if lam[j] <= 0.0 {
                return Err(config(format!("column {} has offered load but no active nodes", COLUMN_NAMES[j])));
            }
            z[i][j] = traffic.request_rate * cfg.lambda3 * d[i][j] / lam[j];
        }
    }
    Ok(z)
}

/// Service-capable rate in bits/s for each state; local retrieval is
/// instantaneous, represented by an infinite rate.
pub fn rate_matrix(d: &Matrix, rates: &RateTable, traffic: &TrafficConfig) -> Result<Matrix> {
    let mut a = [[0.0; COLS]; ROWS];
    for m in 0..4 {
        for j in 0..COLS {
            for (row, backhaul) in [(2 * m, false), (2 * m + 1, true)] {
                if d[row][j] == 0.0 {
                    continue;
                }
                if m == 3 {
                    a[row][j] = f64::INFINITY;
                    continue;
                }
                let tier = Tier::ALL[j];
                let u = rates
                    .get(m as u8 + 1, tier)
                    .ok_or_else(|| config(format!("missing rate for case {} tier {}", m + 1, tier.number())))?;
                let u = if backhaul { traffic.backhaul.apply(u) } else { u };
                a[row][j] = traffic.eta * traffic.bandwidth_hz * u;
            }
        }
    }
    Ok(a)
}

/// Offered loads of the per-tier queues.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Loads {
    /// Completion rate in requests/s.
    pub mu: Matrix,
    /// Traffic demand in bits/s.
    pub rho: Matrix,
    /// Dimensionless load `zeta / mu`.
    pub rho_prime: Matrix,
    /// Critical traffic value in bits/s per column (zero for idle columns).
    pub rho_c: [f64; COLS],
}

pub fn loads(zeta: &Matrix, a: &Matrix, traffic: &TrafficConfig, content: &ContentConfig) -> Result<Loads> {
    let s = content.file_size_bits;
    let mut out =
        Loads { mu: [[0.0; COLS]; ROWS], rho: [[0.0; COLS]; ROWS], rho_prime: [[0.0; COLS]; ROWS], rho_c: [0.0; COLS] };
    for j in 0..COLS {
        let mut demand = 0.0;
        let mut time = 0.0;
        for i in 0..ROWS {
            out.mu[i][j] = a[i][j] * traffic.content_rate / s;
            if zeta[i][j] == 0.0 {
                continue;
            }
            if a[i][j] == 0.0 {
                return Err(Error::Unstable(format!(
                    "row {} column {} has arrivals but zero rate",
                    i + 1,
                    COLUMN_NAMES[j]
                )));
            }
            let rho = zeta[i][j] * s / traffic.content_rate;
            out.rho[i][j] = rho;
            out.rho_prime[i][j] = zeta[i][j] / out.mu[i][j];
            demand += rho;
            time += rho / a[i][j];
        }
        if time > 0.0 {
            out.rho_c[j] = demand / time;
        }
    }
    Ok(out)
}

/// Writes each matrix as one CSV row with columns named `r<row>.<tier>`.
pub fn write_matrices_csv<W: Write>(mut out: W, named: &[(&str, &Matrix)]) -> io::Result<()> {
    write!(out, "quantity")?;
    for i in 0..ROWS {
        for name in COLUMN_NAMES {
            write!(out, ",r{}.{}", i + 1, name)?;
        }
    }
    writeln!(out)?;
    for (label, m) in named {
        write!(out, "{label}")?;
        for row in m.iter() {
            for v in row {
                write!(out, ",{v:e}")?;
            }
        }
        writeln!(out)?;
    }
    Ok(())
}
