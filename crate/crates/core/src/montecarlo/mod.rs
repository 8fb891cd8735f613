//! Brute-force oracles: spatial simulation of the network and a
//! discrete-event simulation of the weighted processor-sharing queue.

mod des;
mod spatial;
mod stats;
mod validate;

pub use des::{dps_des, DesClass, DesOptions, DesResult};
pub use spatial::{
    association_from_distances, empirical_association, empirical_ergodic_rate, empirical_rate_table, nearest_distances,
    rate_window, AssocEstimate, EmpiricalRateCell, EmpiricalRates, MIN_RATE_HITS,
};
pub use stats::{batch_ratio, ks_pvalue, ks_statistic, Estimate, Running};
pub use validate::{association_checks, contact_checks, rate_checks, Check, Verdict};

use crate::error::{domain, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Parameters of a spatial Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McRunSpec {
    pub realizations: u64,
    /// Radius of the simulated disk; chosen from the contact laws when absent.
    pub window: Option<f64>,
    /// Extra radius for cluster centres; chosen per tier when absent.
    pub guard: Option<f64>,
    pub seed: u64,
    /// Unit-mean Rayleigh fading on every link; unit gains otherwise.
    pub rayleigh: bool,
}

impl McRunSpec {
    pub fn new(realizations: u64, seed: u64) -> Self {
        Self { realizations, window: None, guard: None, seed, rayleigh: true }
    }

    pub fn validate(&self) -> Result<()> {
        if self.realizations == 0 {
            return Err(domain("at least one realization is required"));
        }
        if let Some(w) = self.window {
            if !(w > 0.0) || !w.is_finite() {
                return Err(domain(format!("window must be positive, got {w}")));
            }
        }
        if let Some(g) = self.guard {
            if !(g >= 0.0) || !g.is_finite() {
                return Err(domain(format!("guard must be non-negative, got {g}")));
            }
        }
        Ok(())
    }
}

/// Independent random stream `index` of `seed`.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
