//! Tier point-process layouts, contact-distance laws and spatial sampling.

mod sampler;
mod thomas;

pub use sampler::{default_guard, default_window, sample_tier, sample_tier_with, write_points_csv, PointSet};
pub use thomas::{tcp_contact_ccdf, tcp_contact_pdf, ThomasContact};

use crate::error::{config, domain, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::Arc;

/// Spatial law of one tier's transmitters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TierLayout {
    /// Homogeneous Poisson process. Zero intensity denotes an empty tier.
    Poisson { intensity: f64 },
    /// Thomas cluster process: Poisson parents, Poisson(`mean_daughters`)
    /// daughters per parent, isotropic Gaussian scatter `sigma` per axis.
    Thomas { parent_intensity: f64, mean_daughters: f64, sigma: f64 },
}

impl TierLayout {
    pub fn validate(&self) -> Result<()> {
        match *self {
            TierLayout::Poisson { intensity } => {
                if !(intensity >= 0.0) || !intensity.is_finite() {
                    return Err(config(format!("Poisson intensity must be >= 0, got {intensity}")));
                }
            }
            TierLayout::Thomas { parent_intensity, mean_daughters, sigma } => {
                for (name, v) in
                    [("parent intensity", parent_intensity), ("mean daughters", mean_daughters), ("sigma", sigma)]
                {
                    if !(v > 0.0) || !v.is_finite() {
                        return Err(config(format!("Thomas {name} must be positive, got {v}")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Mean number of points per unit area.
    pub fn effective_intensity(&self) -> f64 {
        match *self {
            TierLayout::Poisson { intensity } => intensity,
            TierLayout::Thomas { parent_intensity, mean_daughters, .. } => parent_intensity * mean_daughters,
        }
    }

    /// Poisson process with the same mean intensity.
    pub fn poisson_equivalent(&self) -> TierLayout {
        TierLayout::Poisson { intensity: self.effective_intensity() }
    }
}

fn check_r(r: f64) -> Result<()> {
    if r.is_nan() || r < 0.0 {
        return Err(domain(format!("distance must be >= 0, got {r}")));
    }
    Ok(())
}

/// Density of the nearest-point distance of a Poisson process.
pub fn ppp_contact_pdf(intensity: f64, r: f64) -> Result<f64> {
    check_r(r)?;
    Ok(2.0 * PI * intensity * r * (-PI * intensity * r * r).exp())
}

/// Probability that a Poisson process has no point within distance `r`.
pub fn ppp_contact_ccdf(intensity: f64, r: f64) -> Result<f64> {
    check_r(r)?;
    Ok((-PI * intensity * r * r).exp())
}

/// Hazard of the contact distance, `-d/dr log P(R > r)`, for one tier.
///
/// For Poisson tiers this is `2 pi lambda r`; for Thomas tiers it is computed
/// by direct quadrature over parent distances.
pub fn tau(layout: &TierLayout, r: f64) -> Result<f64> {
    check_r(r)?;
    layout.validate()?;
    match *layout {
        TierLayout::Poisson { intensity } => Ok(2.0 * PI * intensity * r),
        TierLayout::Thomas { .. } => Ok(thomas::hazard_and_log_ccdf(layout, r)?.0),
    }
}

/// Contact-distance law prepared for repeated evaluation.
#[derive(Debug, Clone)]
pub enum ContactLaw {
    Poisson { intensity: f64 },
    Thomas(Arc<ThomasContact>),
}

impl ContactLaw {
    /// Builds the law; Thomas tiers are tabulated eagerly.
    pub fn new(layout: &TierLayout) -> Result<Self> {
        layout.validate()?;
        Ok(match *layout {
            TierLayout::Poisson { intensity } => ContactLaw::Poisson { intensity },
            TierLayout::Thomas { .. } => ContactLaw::Thomas(Arc::new(ThomasContact::new(layout)?)),
        })
    }

    /// `-log P(R > r)`.
    pub fn cumulative_hazard(&self, r: f64) -> f64 {
        match self {
            ContactLaw::Poisson { intensity } => PI * intensity * r * r,
            ContactLaw::Thomas(t) => t.cumulative_hazard(r),
        }
    }

    pub fn hazard(&self, r: f64) -> f64 {
        match self {
            ContactLaw::Poisson { intensity } => 2.0 * PI * intensity * r,
            ContactLaw::Thomas(t) => t.hazard(r),
        }
    }

    pub fn ccdf(&self, r: f64) -> f64 {
        (-self.cumulative_hazard(r)).exp()
    }

    pub fn pdf(&self, r: f64) -> f64 {
        match self {
            ContactLaw::Poisson { intensity } => 2.0 * PI * intensity * r * (-PI * intensity * r * r).exp(),
            ContactLaw::Thomas(t) => {
                let (g, h) = t.hazard_and_cumulative(r);
                g * (-h).exp()
            }
        }
    }

    /// Whether the tier contains no points at all.
    pub fn is_empty(&self) -> bool {
        matches!(self, ContactLaw::Poisson { intensity } if *intensity == 0.0)
    }

    /// Median contact distance, infinite for an empty tier.
    pub fn median(&self) -> f64 {
        self.quantile(0.5)
    }

    /// Distance `r` with `P(R <= r) = p`.
    pub fn quantile(&self, p: f64) -> f64 {
        let target = -(1.0 - p).ln();
        match self {
            ContactLaw::Poisson { intensity } => {
                if *intensity == 0.0 {
                    f64::INFINITY
                } else {
                    (target / (PI * intensity)).sqrt()
                }
            }
            ContactLaw::Thomas(t) => t.inverse_cumulative_hazard(target),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ppp_contact_law() {
        let lam = 1e-5;
        assert_eq!(ppp_contact_ccdf(lam, 0.0).unwrap(), 1.0);
        assert_eq!(ppp_contact_pdf(lam, 0.0).unwrap(), 0.0);
        assert!(ppp_contact_pdf(lam, -1.0).is_err());
        // median sqrt(ln 2 / (pi lambda))
        let law = ContactLaw::new(&TierLayout::Poisson { intensity: lam }).unwrap();
        let m = law.median();
        assert!((m - (2f64.ln() / (PI * lam)).sqrt()).abs() < 1e-9);
        assert!((law.ccdf(m) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn ppp_pdf_integrates_to_one() {
        use crate::specfun::{integrate, Domain, QuadratureSpec};
        let lam = 3e-6;
        let v = integrate(
            |r| ppp_contact_pdf(lam, r).unwrap(),
            Domain::SemiInfinite { start: 0.0, scale: 300.0 },
            &QuadratureSpec::with_tol(1e-12, 0.0),
        )
        .unwrap()
        .value;
        assert!((v - 1.0).abs() < 1e-10);
    }

    #[test]
    fn layout_validation() {
        assert!(TierLayout::Poisson { intensity: -1.0 }.validate().is_err());
        assert!(TierLayout::Thomas { parent_intensity: 1.0, mean_daughters: 0.0, sigma: 1.0 }.validate().is_err());
        let t = TierLayout::Thomas { parent_intensity: 2.0, mean_daughters: 5.0, sigma: 1.0 };
        assert_eq!(t.effective_intensity(), 10.0);
        assert_eq!(tau(&TierLayout::Poisson { intensity: 1.0 }, 2.0).unwrap(), 4.0 * PI);
    }
}
