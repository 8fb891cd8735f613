use super::{ContactLaw, TierLayout};
use crate::error::{domain, Result};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use std::f64::consts::PI;
use std::io::{self, Write};

/// Points of one tier inside a disk centred at the origin.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PointSet {
    pub points: Vec<[f64; 2]>,
}

impl PointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Distance of the point nearest to the origin.
    pub fn nearest_distance(&self) -> Option<f64> {
        self.points.iter().map(|p| p[0].hypot(p[1])).min_by(f64::total_cmp)
    }
}

/// Extra radius simulated around the window so that clusters centred outside
/// it still contribute their daughters.
pub fn default_guard(layout: &TierLayout, window: f64) -> f64 {
    match *layout {
        TierLayout::Poisson { .. } => 0.0,
        TierLayout::Thomas { sigma, .. } => (6.0 * sigma).max(0.5 * window),
    }
}

/// Five times the largest finite median contact distance among the tiers.
pub fn default_window(laws: &[ContactLaw]) -> f64 {
    5.0 * laws.iter().map(ContactLaw::median).filter(|m| m.is_finite()).fold(0.0, f64::max)
}

pub(crate) fn poisson_count<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> usize {
    if mean <= 0.0 {
        return 0;
    }
    let d = Poisson::new(mean).expect("positive finite mean");
    let v: f64 = d.sample(rng);
    v as usize
}

fn uniform_in_disk<R: Rng + ?Sized>(radius: f64, rng: &mut R) -> [f64; 2] {
    let r = radius * rng.gen::<f64>().sqrt();
    let t = 2.0 * PI * rng.gen::<f64>();
    [r * t.cos(), r * t.sin()]
}

/// Samples one realization of `layout` restricted to the disk of radius
/// `window`. Thomas parents are drawn in the disk enlarged by `guard`.
pub fn sample_tier_with<R: Rng + ?Sized>(
    layout: &TierLayout,
    window: f64,
    guard: f64,
    rng: &mut R,
) -> Result<PointSet> {
    layout.validate()?;
    if !(window > 0.0) || !(guard >= 0.0) {
        return Err(domain(format!("window {window} and guard {guard} must be positive")));
    }
    let mut points = Vec::new();
    match *layout {
        TierLayout::Poisson { intensity } => {
            let n = poisson_count(intensity * PI * window * window, rng);
            points.extend((0..n).map(|_| uniform_in_disk(window, rng)));
        }
        TierLayout::Thomas { parent_intensity, mean_daughters, sigma } => {
            let outer = window + guard;
            let parents = poisson_count(parent_intensity * PI * outer * outer, rng);
            let w2 = window * window;
            let daughters = Poisson::new(mean_daughters).expect("validated");
            for _ in 0..parents {
                let c = uniform_in_disk(outer, rng);
                let k: f64 = daughters.sample(rng);
                for _ in 0..k as usize {
                    let dx: f64 = rng.sample(StandardNormal);
                    let dy: f64 = rng.sample(StandardNormal);
                    let p = [c[0] + sigma * dx, c[1] + sigma * dy];
                    if p[0] * p[0] + p[1] * p[1] <= w2 {
                        points.push(p);
                    }
                }
            }
        }
    }
    Ok(PointSet { points })
}

/// Deterministic sample for a given seed.
pub fn sample_tier(layout: &TierLayout, window: f64, guard: f64, seed: u64) -> Result<PointSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_tier_with(layout, window, guard, &mut rng)
}

/// Writes `x,y,tier` rows for each `(tier, points)` pair.
pub fn write_points_csv<W: Write>(mut out: W, sets: &[(usize, &PointSet)]) -> io::Result<()> {
    writeln!(out, "x,y,tier")?;
    for (tier, set) in sets {
        for p in &set.points {
            writeln!(out, "{:.6},{:.6},{}", p[0], p[1], tier)?;
        }
    }
    Ok(())
}
