//! Max-received-power association probabilities and serving-distance laws.

use crate::error::{config, Error, Result};
use crate::geometry::{ContactLaw, TierLayout};
use crate::specfun::{integrate, Domain, QuadratureSpec};
use serde::{Deserialize, Serialize};

/// Transmitter tiers, ordered as D2D users, small cells, macro cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tier {
    D2d,
    Sbs,
    Mbs,
}

impl Tier {
    pub const ALL: [Tier; 3] = [Tier::D2d, Tier::Sbs, Tier::Mbs];

    /// Zero-based position in per-tier arrays.
    pub fn idx(self) -> usize {
        self as usize
    }

    /// One-based tier number.
    pub fn number(self) -> usize {
        self.idx() + 1
    }

    pub fn from_number(n: usize) -> Result<Tier> {
        match n {
            1 => Ok(Tier::D2d),
            2 => Ok(Tier::Sbs),
            3 => Ok(Tier::Mbs),
            _ => Err(config(format!("tier number must be 1, 2 or 3, got {n}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Tier::D2d => "d2d",
            Tier::Sbs => "sbs",
            Tier::Mbs => "mbs",
        }
    }
}

/// Whether small cells are clustered or replaced by a Poisson process of the
/// same mean intensity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SbsMode {
    #[default]
    Clustered,
    Baseline,
}

/// Densities, powers and propagation parameters of the three-tier network.
/// Lengths and intensities may use any consistent unit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkConfig {
    /// Intensity of users.
    pub lambda0: f64,
    /// Fraction of users that are cache-enabled (D2D transmitters).
    pub alpha: f64,
    /// Transmit powers of D2D, SBS and MBS.
    pub powers: [f64; 3],
    /// Path-loss exponent.
    pub beta: f64,
    /// Intensity of SBS cluster centres.
    pub lambda_p2: f64,
    /// Mean number of SBSs per cluster.
    pub mean_cluster_size: f64,
    /// Gaussian scatter of SBSs around their cluster centre.
    pub sigma: f64,
    /// Intensity of macro cells.
    pub lambda3: f64,
    /// Noise power at the receiver.
    pub noise: f64,
    pub mode: SbsMode,
}

impl NetworkConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("lambda0", self.lambda0),
            ("mean cluster size", self.mean_cluster_size),
            ("sigma", self.sigma),
            ("P1", self.powers[0]),
            ("P2", self.powers[1]),
            ("P3", self.powers[2]),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(config(format!("{name} must be positive and finite, got {v}")));
            }
        }
        for (name, v) in [("lambda_p2", self.lambda_p2), ("lambda3", self.lambda3)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(config(format!("{name} must be >= 0 and finite, got {v}")));
            }
        }
        if self.alpha == 0.0 && self.lambda_p2 == 0.0 && self.lambda3 == 0.0 {
            return Err(config("every tier is empty"));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(config(format!("alpha must lie in [0, 1], got {}", self.alpha)));
        }
        if !(self.beta > 2.0) || !self.beta.is_finite() {
            return Err(config(format!("path-loss exponent must exceed 2, got {}", self.beta)));
        }
        if !(self.noise >= 0.0) || !self.noise.is_finite() {
            return Err(config(format!("noise power must be >= 0, got {}", self.noise)));
        }
        Ok(())
    }

    /// Spatial law of `tier` under the configured mode.
    pub fn layout(&self, tier: Tier) -> TierLayout {
        match tier {
            Tier::D2d => TierLayout::Poisson { intensity: self.alpha * self.lambda0 },
            Tier::Sbs if self.lambda_p2 == 0.0 => TierLayout::Poisson { intensity: 0.0 },
            Tier::Sbs => {
                let t = TierLayout::Thomas {
                    parent_intensity: self.lambda_p2,
                    mean_daughters: self.mean_cluster_size,
                    sigma: self.sigma,
                };
                match self.mode {
                    SbsMode::Clustered => t,
                    SbsMode::Baseline => t.poisson_equivalent(),
                }
            }
            Tier::Mbs => TierLayout::Poisson { intensity: self.lambda3 },
        }
    }

    pub fn with_mode(&self, mode: SbsMode) -> Self {
        Self { mode, ..self.clone() }
    }

    /// `(P_a / P_b)^(1/beta)`: the distance scale at which tier `a` matches
    /// the power received from tier `b`.
    pub fn power_scale(&self, a: Tier, b: Tier) -> f64 {
        (self.powers[a.idx()] / self.powers[b.idx()]).powf(1.0 / self.beta)
    }
}

/// The six strict orderings of the tiers by received power, strongest first.
pub const ORDERINGS: [[Tier; 3]; 6] = [
    [Tier::D2d, Tier::Sbs, Tier::Mbs],
    [Tier::D2d, Tier::Mbs, Tier::Sbs],
    [Tier::Sbs, Tier::D2d, Tier::Mbs],
    [Tier::Sbs, Tier::Mbs, Tier::D2d],
    [Tier::Mbs, Tier::D2d, Tier::Sbs],
    [Tier::Mbs, Tier::Sbs, Tier::D2d],
];

/// Association probabilities of a configured network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssocProbs {
    /// Probability that each tier offers the strongest signal.
    pub tier: [f64; 3],
    /// Probability of each entry of [`ORDERINGS`].
    pub ordered: [f64; 6],
    /// `pairwise[i][j]`: tier `i` beats tier `j` when only those two compete.
    pub pairwise: [[f64; 3]; 3],
}

impl AssocProbs {
    pub fn ordered_prob(&self, order: [Tier; 3]) -> f64 {
        let k = ORDERINGS.iter().position(|o| *o == order).expect("orderings cover all permutations");
        self.ordered[k]
    }
}

/// A network with contact laws prepared and association probabilities evaluated.
#[derive(Debug, Clone)]
pub struct Network {
    cfg: NetworkConfig,
    laws: [ContactLaw; 3],
    probs: AssocProbs,
}

fn assoc_spec() -> QuadratureSpec {
    QuadratureSpec::with_tol(1e-10, 1e-14)
}

impl Network {
    pub fn new(cfg: &NetworkConfig) -> Result<Self> {
        cfg.validate()?;
        let laws = [
            ContactLaw::new(&cfg.layout(Tier::D2d))?,
            ContactLaw::new(&cfg.layout(Tier::Sbs))?,
            ContactLaw::new(&cfg.layout(Tier::Mbs))?,
        ];
        let mut net = Self {
            cfg: cfg.clone(),
            laws,
            probs: AssocProbs { tier: [0.0; 3], ordered: [0.0; 6], pairwise: [[0.0; 3]; 3] },
        };
        let mut probs = net.probs.clone();
        for t in Tier::ALL {
            probs.tier[t.idx()] = net.compute_tier(t)?;
        }
        for (k, o) in ORDERINGS.iter().enumerate() {
            probs.ordered[k] = net.compute_ordered(*o)?;
        }
        for a in Tier::ALL {
            for b in Tier::ALL {
                if a != b {
                    probs.pairwise[a.idx()][b.idx()] = net.compute_pairwise(a, b)?;
                }
            }
        }
        net.probs = probs;
        Ok(net)
    }

    pub fn config(&self) -> &NetworkConfig {
        &self.cfg
    }

    pub fn law(&self, t: Tier) -> &ContactLaw {
        &self.laws[t.idx()]
    }

    pub fn probs(&self) -> &AssocProbs {
        &self.probs
    }

    pub(crate) fn scale(&self, a: Tier, b: Tier) -> f64 {
        self.cfg.power_scale(a, b)
    }

    fn length_scale(&self, t: Tier) -> f64 {
        let m = self.law(t).median();
        if m.is_finite() && m > 0.0 {
            m
        } else {
            1.0
        }
    }

    /// Probability that no tier other than `serving` is stronger, given the
    /// serving transmitter at distance `r`.
    fn others_weaker(&self, serving: Tier, r: f64) -> f64 {
        let h: f64 = Tier::ALL
            .iter()
            .filter(|&&l| l != serving)
            .map(|&l| self.law(l).cumulative_hazard(self.scale(l, serving) * r))
            .sum();
        (-h).exp()
    }

    fn compute_tier(&self, i: Tier) -> Result<f64> {
        if self.law(i).is_empty() {
            return Ok(0.0);
        }
        let v = integrate(
            |r| self.law(i).pdf(r) * self.others_weaker(i, r),
            Domain::SemiInfinite { start: 0.0, scale: self.length_scale(i) },
            &assoc_spec(),
        )?;
        Ok(v.value)
    }

    fn compute_ordered(&self, o: [Tier; 3]) -> Result<f64> {
        let [i, j, k] = o;
        if self.law(i).is_empty() || self.law(j).is_empty() {
            return Ok(0.0);
        }
        let c_ji = self.scale(j, i);
        let c_kj = self.scale(k, j);
        let inner_spec = QuadratureSpec::with_tol(1e-11, 1e-15);
        let mut failure = None;
        let outer = integrate(
            |r| {
                let fi = self.law(i).pdf(r);
                if fi == 0.0 {
                    return 0.0;
                }
                let inner = integrate(
                    |u| self.law(j).pdf(u) * self.law(k).ccdf(c_kj * u),
                    Domain::SemiInfinite { start: c_ji * r, scale: self.length_scale(j) },
                    &inner_spec,
                );
                match inner {
                    Ok(e) => fi * e.value,
                    Err(e) => {
                        failure.get_or_insert(e);
                        0.0
                    }
                }
            },
            Domain::SemiInfinite { start: 0.0, scale: self.length_scale(i) },
            &assoc_spec(),
        )?;
        match failure {
            Some(e) => Err(e),
            None => Ok(outer.value),
        }
    }

    fn compute_pairwise(&self, i: Tier, j: Tier) -> Result<f64> {
        if self.law(i).is_empty() {
            return Ok(0.0);
        }
        let c = self.scale(j, i);
        Ok(integrate(
            |r| self.law(i).pdf(r) * self.law(j).ccdf(c * r),
            Domain::SemiInfinite { start: 0.0, scale: self.length_scale(i) },
            &assoc_spec(),
        )?
        .value)
    }

    /// Density of the serving distance given that `i` is the strongest tier.
    pub fn serving_pdf_case1(&self, i: Tier, x: f64) -> Result<f64> {
        let g = self.probs.tier[i.idx()];
        if g <= 0.0 {
            return Err(Error::MeasureZero(format!("tier {} never serves", i.number())));
        }
        Ok(self.law(i).pdf(x) * self.others_weaker(i, x) / g)
    }

    /// Density of the serving distance when only small and macro cells
    /// compete and `i` wins.
    pub fn serving_pdf_case2(&self, i: Tier, x: f64) -> Result<f64> {
        let j = other_infra(i)?;
        let p = self.probs.pairwise[i.idx()][j.idx()];
        if p <= 0.0 {
            return Err(Error::MeasureZero(format!("tier {} never beats tier {}", i.number(), j.number())));
        }
        Ok(self.law(i).pdf(x) * self.law(j).ccdf(self.scale(j, i) * x) / p)
    }

    /// Joint density of the nearest D2D distance `x` and serving distance `y`
    /// when the D2D tier is strongest but cannot serve, tier `j` is second and
    /// the remaining infrastructure tier is weakest.
    pub fn serving_pdf_case3(&self, j: Tier, x: f64, y: f64) -> Result<f64> {
        let k = other_infra(j)?;
        let p = self.probs.ordered_prob([Tier::D2d, j, k]);
        if p <= 0.0 {
            return Err(Error::MeasureZero(format!(
                "ordering (1, {}, {}) has probability zero",
                j.number(),
                k.number()
            )));
        }
        if x > self.scale(Tier::D2d, j) * y {
            return Ok(0.0);
        }
        Ok(self.law(Tier::D2d).pdf(x) * self.law(j).pdf(y) * self.law(k).ccdf(self.scale(k, j) * y) / p)
    }
}

/// The other infrastructure tier: small cell for macro and vice versa.
pub(crate) fn other_infra(t: Tier) -> Result<Tier> {
    match t {
        Tier::Sbs => Ok(Tier::Mbs),
        Tier::Mbs => Ok(Tier::Sbs),
        Tier::D2d => Err(config("expected an infrastructure tier (2 or 3)")),
    }
}

/// Probability that `i` is the strongest tier.
pub fn tier_assoc_prob(i: Tier, net: &Network) -> f64 {
    net.probs.tier[i.idx()]
}

/// Probability that the tiers rank `i > j > k` by received power.
pub fn ordered_assoc_prob(i: Tier, j: Tier, k: Tier, net: &Network) -> Result<f64> {
    if i == j || j == k || i == k {
        return Err(config("ordering needs three distinct tiers"));
    }
    Ok(net.probs.ordered_prob([i, j, k]))
}

/// Probability that tier `i` beats tier `j` when only the two compete.
pub fn pairwise_assoc_prob(i: Tier, j: Tier, net: &Network) -> Result<f64> {
    if i == j {
        return Err(config("pairwise comparison needs two distinct tiers"));
    }
    Ok(net.probs.pairwise[i.idx()][j.idx()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    pub(crate) fn fig3() -> NetworkConfig {
        let lambda0 = 1000.0 / (PI * 1e6);
        NetworkConfig {
            lambda0,
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

    #[test]
    fn partitions_sum_to_one() {
        for mode in [SbsMode::Clustered, SbsMode::Baseline] {
            let net = Network::new(&fig3().with_mode(mode)).unwrap();
            let p = net.probs();
            assert!((p.tier.iter().sum::<f64>() - 1.0).abs() < 1e-8);
            assert!((p.ordered.iter().sum::<f64>() - 1.0).abs() < 1e-8);
            for t in Tier::ALL {
                let marginal: f64 = ORDERINGS.iter().zip(&p.ordered).filter(|(o, _)| o[0] == t).map(|(_, v)| v).sum();
                assert!((marginal - p.tier[t.idx()]).abs() < 1e-8);
            }
            for a in Tier::ALL {
                for b in Tier::ALL {
                    if a != b {
                        assert!((p.pairwise[a.idx()][b.idx()] + p.pairwise[b.idx()][a.idx()] - 1.0).abs() < 1e-8);
                    }
                }
            }
        }
    }

    #[test]
    fn ordered_matches_single_integral_form() {
        // P(i > j > k) = int f_j(u) Fbar_k(c_kj u) (1 - Fbar_i(c_ij u)) du
        let net = Network::new(&fig3()).unwrap();
        for o in ORDERINGS {
            let [i, j, k] = o;
            let v = integrate(
                |u| {
                    net.law(j).pdf(u)
                        * net.law(k).ccdf(net.scale(k, j) * u)
                        * (1.0 - net.law(i).ccdf(net.scale(i, j) * u))
                },
                Domain::SemiInfinite { start: 0.0, scale: 300.0 },
                &QuadratureSpec::with_tol(1e-11, 1e-15),
            )
            .unwrap()
            .value;
            assert!((v - net.probs().ordered_prob(o)).abs() < 1e-8, "{o:?}");
        }
    }

    #[test]
    fn poisson_closed_form_in_baseline() {
        let cfg = fig3().with_mode(SbsMode::Baseline);
        let net = Network::new(&cfg).unwrap();
        let lam = [cfg.alpha * cfg.lambda0, cfg.lambda_p2 * cfg.mean_cluster_size, cfg.lambda3];
        let w: Vec<f64> = (0..3).map(|i| lam[i] * cfg.powers[i].powf(2.0 / cfg.beta)).collect();
        let tot: f64 = w.iter().sum();
        for i in 0..3 {
            assert!((net.probs().tier[i] - w[i] / tot).abs() < 1e-9);
        }
    }

    #[test]
    fn clustering_lowers_small_cell_association() {
        let c = Network::new(&fig3()).unwrap();
        let b = Network::new(&fig3().with_mode(SbsMode::Baseline)).unwrap();
        assert!(c.probs().tier[1] < b.probs().tier[1]);
    }

    #[test]
    fn serving_densities_are_normalized() {
        let net = Network::new(&fig3()).unwrap();
        let spec = QuadratureSpec::with_tol(1e-9, 1e-14);
        let dom = Domain::SemiInfinite { start: 0.0, scale: 300.0 };
        for t in Tier::ALL {
            let v = integrate(|x| net.serving_pdf_case1(t, x).unwrap(), dom, &spec).unwrap().value;
            assert!((v - 1.0).abs() < 1e-6, "case1 {t:?} {v}");
        }
        for t in [Tier::Sbs, Tier::Mbs] {
            let v = integrate(|x| net.serving_pdf_case2(t, x).unwrap(), dom, &spec).unwrap().value;
            assert!((v - 1.0).abs() < 1e-6, "case2 {t:?} {v}");
            let c = net.scale(Tier::D2d, t);
            let v = integrate(
                |y| {
                    integrate(|x| net.serving_pdf_case3(t, x, y).unwrap(), Domain::Finite { lo: 0.0, hi: c * y }, &spec)
                        .unwrap()
                        .value
                },
                dom,
                &spec,
            )
            .unwrap()
            .value;
            assert!((v - 1.0).abs() < 1e-6, "case3 {t:?} {v}");
        }
    }

    #[test]
    fn no_d2d_users_means_case_three_is_impossible() {
        let net = Network::new(&NetworkConfig { alpha: 0.0, ..fig3() }).unwrap();
        assert_eq!(net.probs().tier[0], 0.0);
        assert!(matches!(net.serving_pdf_case3(Tier::Sbs, 1.0, 2.0), Err(Error::MeasureZero(_))));
    }

    #[test]
    fn symmetric_poisson_tiers_are_exchangeable() {
        let lam = 1e-5;
        let cfg = NetworkConfig {
            lambda0: lam,
            alpha: 1.0,
            powers: [5.0, 5.0, 5.0],
            lambda_p2: lam / 10.0,
            mean_cluster_size: 10.0,
            lambda3: lam,
            mode: SbsMode::Baseline,
            ..fig3()
        };
        let net = Network::new(&cfg).unwrap();
        for v in net.probs().ordered {
            assert!((v - 1.0 / 6.0).abs() < 1e-8);
        }
    }

    #[test]
    fn validation_rejects_bad_configs() {
        assert!(Network::new(&NetworkConfig { alpha: 1.5, ..fig3() }).is_err());
        assert!(Network::new(&NetworkConfig { beta: 2.0, ..fig3() }).is_err());
        assert!(Network::new(&NetworkConfig { sigma: 0.0, ..fig3() }).is_err());
    }
}
