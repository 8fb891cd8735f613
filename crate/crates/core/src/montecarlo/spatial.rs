use super::stats::{Estimate, Running};
use super::{stream_rng, McRunSpec};
use crate::association::{other_infra, Network, NetworkConfig, Tier, ORDERINGS};
use crate::error::{domain, Error, Result};
use crate::geometry::{default_guard, default_window, sample_tier_with, ContactLaw, PointSet};
use crate::rates::ActiveIntensities;
use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

/// Fewest conditioning-event hits for an empirical rate to be reported.
pub const MIN_RATE_HITS: u64 = 500;

fn laws(cfg: &NetworkConfig) -> Result<Vec<ContactLaw>> {
    Tier::ALL.iter().map(|&t| ContactLaw::new(&cfg.layout(t))).collect()
}

fn guards(cfg: &NetworkConfig, spec: &McRunSpec, window: f64) -> [f64; 3] {
    Tier::ALL.map(|t| spec.guard.unwrap_or_else(|| default_guard(&cfg.layout(t), window)))
}

fn sample_all<R: Rng>(cfg: &NetworkConfig, window: f64, guards: &[f64; 3], rng: &mut R) -> Result<[PointSet; 3]> {
    Ok([
        sample_tier_with(&cfg.layout(Tier::D2d), window, guards[0], rng)?,
        sample_tier_with(&cfg.layout(Tier::Sbs), window, guards[1], rng)?,
        sample_tier_with(&cfg.layout(Tier::Mbs), window, guards[2], rng)?,
    ])
}

/// Nearest distance of each tier in every realization (infinite when the
/// window holds no point of that tier).
pub fn nearest_distances(cfg: &NetworkConfig, spec: &McRunSpec) -> Result<Vec<[f64; 3]>> {
    cfg.validate()?;
    spec.validate()?;
    let window = match spec.window {
        Some(w) => w,
        None => default_window(&laws(cfg)?),
    };
    let guards = guards(cfg, spec, window);
    (0..spec.realizations)
        .map(|k| {
            let mut rng = stream_rng(spec.seed, k);
            let sets = sample_all(cfg, window, &guards, &mut rng)?;
            Ok(sets.map(|s| s.nearest_distance().unwrap_or(f64::INFINITY)))
        })
        .collect()
}

/// Empirical association frequencies with binomial standard errors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssocEstimate {
    pub tier: [Estimate; 3],
    /// Indexed like [`ORDERINGS`].
    pub ordered: [Estimate; 6],
    pub pairwise: [[Estimate; 3]; 3],
    pub realizations: u64,
}

// Tiers sorted by received power, strongest first; ties keep tier order.
fn ranking(cfg: &NetworkConfig, d: &[f64; 3]) -> [Tier; 3] {
    let score = |t: Tier| {
        let r = d[t.idx()];
        if r.is_finite() {
            cfg.powers[t.idx()].ln() - cfg.beta * r.ln()
        } else {
            f64::NEG_INFINITY
        }
    };
    let mut order = Tier::ALL;
    order.sort_by(|a, b| score(*b).total_cmp(&score(*a)));
    order
}

pub fn association_from_distances(cfg: &NetworkConfig, distances: &[[f64; 3]]) -> AssocEstimate {
    let n = distances.len() as u64;
    let mut tier = [0u64; 3];
    let mut ordered = [0u64; 6];
    let mut pairwise = [[0u64; 3]; 3];
    for d in distances {
        let order = ranking(cfg, d);
        tier[order[0].idx()] += 1;
        if let Some(k) = ORDERINGS.iter().position(|o| *o == order) {
            ordered[k] += 1;
        }
        for (a, &ta) in order.iter().enumerate() {
            for &tb in &order[a + 1..] {
                pairwise[ta.idx()][tb.idx()] += 1;
            }
        }
    }
    AssocEstimate {
        tier: tier.map(|h| Estimate::proportion(h, n)),
        ordered: ordered.map(|h| Estimate::proportion(h, n)),
        pairwise: pairwise.map(|row| row.map(|h| Estimate::proportion(h, n))),
        realizations: n,
    }
}

/// Direct application of the max-power rule to simulated networks.
pub fn empirical_association(cfg: &NetworkConfig, spec: &McRunSpec) -> Result<AssocEstimate> {
    Ok(association_from_distances(cfg, &nearest_distances(cfg, spec)?))
}

/// Simulation radius for rate estimates: wide enough that interference from
/// outside it is under 0.5% of the interference beyond the median distance
/// to the nearest transmitter of any tier, and at least the association window.
pub fn rate_window(net: &Network) -> f64 {
    let laws: Vec<ContactLaw> = Tier::ALL.iter().map(|&t| net.law(t).clone()).collect();
    let base = default_window(&laws);
    let beta = net.config().beta;
    let total = |r: f64| laws.iter().map(|l| l.cumulative_hazard(r)).sum::<f64>();
    let (mut lo, mut hi) = (0.0, base.max(1e-12));
    while total(hi) < std::f64::consts::LN_2 {
        hi *= 2.0;
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if total(mid) < std::f64::consts::LN_2 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    base.max(hi * 200f64.powf(1.0 / (beta - 2.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalRateCell {
    pub case: u8,
    pub tier: Tier,
    /// Conditional mean of `ln(1 + SINR)`, nats/s/Hz.
    pub nats: Estimate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalRates {
    pub cells: Vec<EmpiricalRateCell>,
    pub realizations: u64,
    pub window: f64,
}

impl EmpiricalRates {
    pub fn get(&self, case: u8, tier: Tier) -> Option<&Estimate> {
        self.cells.iter().find(|c| c.case == case && c.tier == tier).map(|c| &c.nats)
    }
}

const CELLS: [(u8, Tier); 7] =
    [(1, Tier::D2d), (1, Tier::Sbs), (1, Tier::Mbs), (2, Tier::Sbs), (2, Tier::Mbs), (3, Tier::Sbs), (3, Tier::Mbs)];

fn cell_index(case: u8, tier: Tier) -> Option<usize> {
    CELLS.iter().position(|&c| c == (case, tier))
}

struct Link {
    tier: Tier,
    index: usize,
}

/// Path gains `P r^-beta` of every simulated point plus nearest index per tier.
struct Snapshot {
    gains: [Vec<f64>; 3],
    nearest: [Option<usize>; 3],
    distance: [f64; 3],
}

impl Snapshot {
    fn new(cfg: &NetworkConfig, sets: &[PointSet; 3]) -> Self {
        let mut gains: [Vec<f64>; 3] = Default::default();
        let mut nearest = [None; 3];
        let mut distance = [f64::INFINITY; 3];
        for t in Tier::ALL {
            let k = t.idx();
            for (n, p) in sets[k].points.iter().enumerate() {
                let r2 = p[0] * p[0] + p[1] * p[1];
                if r2.sqrt() < distance[k] {
                    distance[k] = r2.sqrt();
                    nearest[k] = Some(n);
                }
                gains[k].push(cfg.powers[k] * r2.powf(-0.5 * cfg.beta));
            }
        }
        Self { gains, nearest, distance }
    }

    /// `ln(1 + SINR)` of `serving`. D2D points other than the server are
    /// active with probability `keep`; `silent` D2D point never transmits.
    #[allow(clippy::too_many_arguments)]
    fn log_rate<R: Rng>(
        &self,
        serving: &Link,
        keep: f64,
        silent: Option<usize>,
        noise: f64,
        rayleigh: bool,
        interference_on: bool,
        rng: &mut R,
    ) -> f64 {
        let fade = |rng: &mut R| if rayleigh { rng.sample::<f64, _>(Exp1) } else { 1.0 };
        let signal = self.gains[serving.tier.idx()][serving.index] * fade(rng);
        let mut interference = 0.0;
        for t in Tier::ALL.into_iter().filter(|_| interference_on) {
            for (n, &g) in self.gains[t.idx()].iter().enumerate() {
                if t == serving.tier && n == serving.index {
                    continue;
                }
                if t == Tier::D2d && (Some(n) == silent || rng.gen::<f64>() >= keep) {
                    continue;
                }
                interference += g * fade(rng);
            }
        }
        (signal / (interference + noise)).ln_1p()
    }
}

/// Conditional means of `ln(1 + SINR)` for every (case, tier) cell.
///
/// Case 1: the strongest tier serves. Case 2: the stronger of the small and
/// macro cell serves, D2D ignored in the comparison. Case 3: D2D is strongest
/// but declines; the second tier serves and the nearest D2D point is silent.
pub fn empirical_rate_table(net: &Network, active: &ActiveIntensities, spec: &McRunSpec) -> Result<EmpiricalRates> {
    rate_table_impl(net, active, spec, true)
}

fn rate_table_impl(
    net: &Network,
    active: &ActiveIntensities,
    spec: &McRunSpec,
    interference_on: bool,
) -> Result<EmpiricalRates> {
    spec.validate()?;
    let cfg = net.config();
    let d2d_intensity = cfg.layout(Tier::D2d).effective_intensity();
    let keep = if d2d_intensity > 0.0 { active.d2d / d2d_intensity } else { 0.0 };
    if !(0.0..=1.0 + 1e-12).contains(&keep) {
        return Err(domain(format!("active D2D intensity {} exceeds the D2D intensity {d2d_intensity}", active.d2d)));
    }
    let window = spec.window.unwrap_or_else(|| rate_window(net));
    let guards = guards(cfg, spec, window);
    let mut acc = [Running::default(); 7];
    for k in 0..spec.realizations {
        let mut rng = stream_rng(spec.seed, k);
        let sets = sample_all(cfg, window, &guards, &mut rng)?;
        let snap = Snapshot::new(cfg, &sets);
        let order = ranking(cfg, &snap.distance);
        let mut eval = |case: u8, tier: Tier, silent: Option<usize>, rng: &mut rand_chacha::ChaCha8Rng| {
            if let (Some(index), Some(cell)) = (snap.nearest[tier.idx()], cell_index(case, tier)) {
                let link = Link { tier, index };
                acc[cell].push(snap.log_rate(&link, keep, silent, cfg.noise, spec.rayleigh, interference_on, rng));
            }
        };
        eval(1, order[0], None, &mut rng);
        let infra = if order.iter().position(|&t| t == Tier::Sbs) < order.iter().position(|&t| t == Tier::Mbs) {
            Tier::Sbs
        } else {
            Tier::Mbs
        };
        eval(2, infra, None, &mut rng);
        if order[0] == Tier::D2d {
            eval(3, order[1], snap.nearest[0], &mut rng);
        }
    }
    let cells = CELLS
        .iter()
        .zip(acc.iter())
        .map(|(&(case, tier), r)| EmpiricalRateCell { case, tier, nats: r.estimate() })
        .collect();
    Ok(EmpiricalRates { cells, realizations: spec.realizations, window })
}

/// Empirical ergodic rate of one cell; fails when its conditioning event was
/// hit fewer than [`MIN_RATE_HITS`] times.
pub fn empirical_ergodic_rate(
    case: u8,
    tier: Tier,
    net: &Network,
    active: &ActiveIntensities,
    spec: &McRunSpec,
) -> Result<Estimate> {
    match (case, tier) {
        (1, _) => {}
        (2 | 3, t) => {
            other_infra(t)?;
        }
        _ => return Err(domain(format!("unknown case {case}"))),
    }
    let table = empirical_rate_table(net, active, spec)?;
    let e = *table.get(case, tier).expect("every cell is tracked");
    if e.n < MIN_RATE_HITS {
        return Err(Error::InsufficientSamples { hits: e.n, required: MIN_RATE_HITS });
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::association::SbsMode;
    use crate::specfun::{integrate, Domain, QuadratureSpec};
    use std::f64::consts::PI;

    fn fig3() -> NetworkConfig {
        NetworkConfig {
            lambda0: 1000.0 / (PI * 1e6),
            alpha: 0.1,
            powers: [3.0, 13.0, 193.0],
            beta: 4.0,
            lambda_p2: 3.0 / (PI * 1e6),
            mean_cluster_size: 10.0,
            sigma: 250.0,
            lambda3: 2.0 / (PI * 1e6),
            noise: 0.0,
            mode: SbsMode::Clustered,
        }
    }

    fn macro_only(noise: f64) -> NetworkConfig {
        NetworkConfig { alpha: 0.0, lambda_p2: 0.0, lambda3: 1e-5, noise, mode: SbsMode::Baseline, ..fig3() }
    }

    #[test]
    fn single_tier_always_wins() {
        let est = empirical_association(&macro_only(0.0), &McRunSpec::new(200, 1)).unwrap();
        assert_eq!(est.tier[2].mean, 1.0);
        assert_eq!(est.tier[0].mean + est.tier[1].mean, 0.0);
    }

    #[test]
    fn orderings_partition_and_runs_repeat() {
        let spec = McRunSpec::new(300, 9);
        let a = empirical_association(&fig3(), &spec).unwrap();
        let total: u64 = a.ordered.iter().map(|e| (e.mean * e.n as f64).round() as u64).sum();
        assert_eq!(total, 300);
        assert_eq!(a, empirical_association(&fig3(), &spec).unwrap());
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert!((a.pairwise[i][j].mean + a.pairwise[j][i].mean - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn noise_limited_rate_matches_quadrature() {
        let cfg = macro_only(2e-10);
        let net = Network::new(&cfg).unwrap();
        let active = ActiveIntensities { d2d: 0.0, sbs: 0.0, mbs: cfg.lambda3, local: 0.0 };
        let table = rate_table_impl(&net, &active, &McRunSpec::new(20_000, 5), false).unwrap();
        let est = *table.get(1, Tier::Mbs).unwrap();
        let spec = QuadratureSpec::with_tol(1e-9, 1e-14);
        let faded = |a: f64| {
            integrate(|h| (-h).exp() * (a * h).ln_1p(), Domain::SemiInfinite { start: 0.0, scale: 1.0 }, &spec)
                .unwrap()
                .value
        };
        let lam = cfg.lambda3;
        let oracle = integrate(
            |r| 2.0 * PI * lam * r * (-PI * lam * r * r).exp() * faded(cfg.powers[2] * r.powi(-4) / cfg.noise),
            Domain::SemiInfinite { start: 0.0, scale: 100.0 },
            &spec,
        )
        .unwrap()
        .value;
        assert!((est.mean - oracle).abs() < 3.0 * est.se, "{est:?} vs {oracle}");
    }

    #[test]
    fn case2_never_served_by_d2d_and_few_hits_are_reported() {
        let cfg = fig3();
        let net = Network::new(&cfg).unwrap();
        let active = ActiveIntensities { d2d: 0.5 * cfg.alpha * cfg.lambda0, sbs: 0.0, mbs: 0.0, local: 0.0 };
        let spec = McRunSpec::new(50, 2);
        let t = empirical_rate_table(&net, &active, &spec).unwrap();
        assert!(t.get(2, Tier::D2d).is_none());
        assert_eq!(t.get(2, Tier::Sbs).unwrap().n + t.get(2, Tier::Mbs).unwrap().n, 50);
        assert!(matches!(
            empirical_ergodic_rate(1, Tier::Mbs, &net, &active, &spec),
            Err(Error::InsufficientSamples { required: 500, .. })
        ));
    }

    #[test]
    fn poisson_macro_rate_with_noise_matches_analytic() {
        use crate::rates::{ergodic_rate_case1, RateOptions};
        let cfg = macro_only(2e-10);
        let net = Network::new(&cfg).unwrap();
        let active = ActiveIntensities { d2d: 0.0, sbs: 0.0, mbs: cfg.lambda3, local: 0.0 };
        let est = empirical_ergodic_rate(1, Tier::Mbs, &net, &active, &McRunSpec::new(20_000, 6)).unwrap();
        let exact = ergodic_rate_case1(Tier::Mbs, &net, &active, &RateOptions::default()).unwrap();
        assert!((est.mean - exact).abs() < 3.0 * est.se + 0.005 * exact, "{est:?} vs {exact}");
    }
}
