//! Ergodic rates of the three association cases under Rayleigh fading.
//!
//! Every rate is `E[ln(1 + SINR)]` in nats/s/Hz, evaluated as
//! `int_0^inf M(s) / (1 + s) ds` averaged over the serving-distance law,
//! where `M` is the Laplace transform of interference plus noise normalized
//! by the serving link's mean received power.

mod laplace;

pub use laplace::{ppp_log_laplace, ClusterKernel};

use crate::association::{other_infra, Network, SbsMode, Tier};
use crate::error::{Error, Result};
use crate::specfun::{integrate, Domain, QuadratureSpec};
use laplace::{ClusterLaplace, ClusterTier};
use serde::{Deserialize, Serialize};

/// Intensities of transmitters that are actually active.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActiveIntensities {
    pub d2d: f64,
    pub sbs: f64,
    pub mbs: f64,
    /// Users served from their own cache.
    pub local: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateOptions {
    pub kernel: ClusterKernel,
    /// Radius around the user free of active D2D transmitters when only
    /// infrastructure tiers compete; zero for no exclusion.
    pub case2_d2d_exclusion: f64,
    /// Relative tolerance of the outermost integral.
    pub rel_tol: f64,
}

impl Default for RateOptions {
    fn default() -> Self {
        Self { kernel: ClusterKernel::Conditioned, case2_d2d_exclusion: 0.0, rel_tol: 1e-6 }
    }
}

/// One defined cell of the rate table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateCell {
    pub case: u8,
    pub tier: Tier,
    pub nats: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct RateTable {
    pub cells: Vec<RateCell>,
}

impl RateTable {
    pub fn get(&self, case: u8, tier: Tier) -> Option<f64> {
        self.cells.iter().find(|c| c.case == case && c.tier == tier).map(|c| c.nats)
    }
}

/// Interference from infrastructure tiers (and noise) seen by a user served
/// by `serving` at distance `x`, with every infrastructure tier known to be
/// weaker than the serving link.
struct InfraField<'a> {
    net: &'a Network,
    serving: Tier,
    x: f64,
    cluster: Option<ClusterLaplace>,
}

impl<'a> InfraField<'a> {
    fn new(net: &'a Network, serving: Tier, x: f64, opts: &RateOptions) -> Self {
        let cfg = net.config();
        let cluster = (cfg.mode == SbsMode::Clustered).then(|| {
            let t = ClusterTier { lp: cfg.lambda_p2, m: cfg.mean_cluster_size, sigma: cfg.sigma, beta: cfg.beta };
            let excl = net.scale(Tier::Sbs, serving) * x;
            let kappa = cfg.powers[1] / cfg.powers[serving.idx()];
            ClusterLaplace::new(&t, x, excl, kappa, serving == Tier::Sbs, opts.kernel)
        });
        Self { net, serving, x, cluster }
    }

    fn log_laplace(&self, s: f64) -> f64 {
        let cfg = self.net.config();
        let p_i = cfg.powers[self.serving.idx()];
        let sbs = match &self.cluster {
            Some(c) => c.log_laplace(s),
            None => -ppp_log_laplace(
                cfg.lambda_p2 * cfg.mean_cluster_size,
                s,
                cfg.powers[1] / p_i,
                self.x,
                self.net.scale(Tier::Sbs, self.serving) * self.x,
                cfg.beta,
            ),
        };
        let mbs = ppp_log_laplace(
            cfg.lambda3,
            s,
            cfg.powers[2] / p_i,
            self.x,
            self.net.scale(Tier::Mbs, self.serving) * self.x,
            cfg.beta,
        );
        let noise = s * cfg.noise * self.x.powf(cfg.beta) / p_i;
        sbs - mbs - noise
    }
}

fn inner_spec(opts: &RateOptions, depth: i32) -> QuadratureSpec {
    QuadratureSpec { max_subdivisions: 400, ..QuadratureSpec::with_tol(opts.rel_tol * 0.1f64.powi(depth), 1e-13) }
}

/// `int_0^inf exp(log_m(s)) / (1 + s) ds`.
fn hamdi_integral(log_m: impl FnMut(f64) -> f64, spec: &QuadratureSpec) -> Result<f64> {
    let mut log_m = log_m;
    Ok(integrate(|s| (log_m(s)).exp() / (1.0 + s), Domain::SemiInfinite { start: 0.0, scale: 1.0 }, spec)?.value)
}

/// Integrates a fallible integrand, surfacing the first inner failure.
fn integrate_fallible(mut f: impl FnMut(f64) -> Result<f64>, domain: Domain, spec: &QuadratureSpec) -> Result<f64> {
    let mut failure = None;
    let v = integrate(
        |x| match f(x) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        domain,
        spec,
    );
    match failure {
        Some(e) => Err(e),
        None => Ok(v?.value),
    }
}

fn check_interference(net: &Network, active: &ActiveIntensities) -> Result<()> {
    let cfg = net.config();
    let any = active.d2d > 0.0 || cfg.lambda_p2 * cfg.mean_cluster_size > 0.0 || cfg.lambda3 > 0.0;
    if !any && cfg.noise == 0.0 {
        return Err(Error::Divergent("no interference and no noise: the rate is unbounded".into()));
    }
    Ok(())
}

fn serving_scale(net: &Network, t: Tier) -> f64 {
    let m = net.law(t).median();
    if m.is_finite() && m > 0.0 {
        m
    } else {
        1.0
    }
}

/// Laplace transform of normalized interference plus noise when tier `i` is
/// the strongest and serves at distance `x`.
pub fn laplace_interference_case1(
    s: f64,
    x: f64,
    i: Tier,
    net: &Network,
    active: &ActiveIntensities,
    opts: &RateOptions,
) -> Result<f64> {
    if !(s >= 0.0) || !(x > 0.0) {
        return Err(crate::error::domain(format!("need s >= 0 and x > 0, got s={s} x={x}")));
    }
    let field = InfraField::new(net, i, x, opts);
    Ok(case1_log_laplace(&field, s, active).exp())
}

fn case1_log_laplace(field: &InfraField, s: f64, active: &ActiveIntensities) -> f64 {
    let cfg = field.net.config();
    let i = field.serving;
    let d2d = ppp_log_laplace(
        active.d2d,
        s,
        cfg.powers[0] / cfg.powers[i.idx()],
        field.x,
        field.net.scale(Tier::D2d, i) * field.x,
        cfg.beta,
    );
    field.log_laplace(s) - d2d
}

/// Ergodic rate of a user whose strongest tier `i` serves it.
pub fn ergodic_rate_case1(i: Tier, net: &Network, active: &ActiveIntensities, opts: &RateOptions) -> Result<f64> {
    check_interference(net, active)?;
    if net.probs().tier[i.idx()] <= 0.0 {
        return Err(Error::MeasureZero(format!("tier {} never serves", i.number())));
    }
    integrate_fallible(
        |x| {
            let f = net.serving_pdf_case1(i, x)?;
            if f == 0.0 {
                return Ok(0.0);
            }
            let field = InfraField::new(net, i, x, opts);
            Ok(f * hamdi_integral(|s| case1_log_laplace(&field, s, active), &inner_spec(opts, 1))?)
        },
        Domain::SemiInfinite { start: 0.0, scale: serving_scale(net, i) },
        &inner_spec(opts, 0),
    )
}

/// Ergodic rate of a cache-enabled user served by infrastructure tier
/// `i` (small or macro cell) after comparing only those two tiers.
pub fn ergodic_rate_case2(i: Tier, net: &Network, active: &ActiveIntensities, opts: &RateOptions) -> Result<f64> {
    other_infra(i)?;
    check_interference(net, active)?;
    let cfg = net.config();
    integrate_fallible(
        |x| {
            let f = net.serving_pdf_case2(i, x)?;
            if f == 0.0 {
                return Ok(0.0);
            }
            let field = InfraField::new(net, i, x, opts);
            let kappa = cfg.powers[0] / cfg.powers[i.idx()];
            Ok(f * hamdi_integral(
                |s| field.log_laplace(s) - ppp_log_laplace(active.d2d, s, kappa, x, opts.case2_d2d_exclusion, cfg.beta),
                &inner_spec(opts, 1),
            )?)
        },
        Domain::SemiInfinite { start: 0.0, scale: serving_scale(net, i) },
        &inner_spec(opts, 0),
    )
}

/// Ergodic rate of a user whose strongest tier is D2D but who is served by
/// infrastructure tier `j`, the second strongest. The nearest D2D user
/// (which declined) does not transmit; active D2D users lie beyond it.
pub fn ergodic_rate_case3(j: Tier, net: &Network, active: &ActiveIntensities, opts: &RateOptions) -> Result<f64> {
    let k = other_infra(j)?;
    check_interference(net, active)?;
    let cfg = net.config();
    let p = net.probs().ordered_prob([Tier::D2d, j, k]);
    if p <= 0.0 {
        return Err(Error::MeasureZero(format!("ordering (1, {}, {}) has probability zero", j.number(), k.number())));
    }
    let c1j = net.scale(Tier::D2d, j);
    let ckj = net.scale(k, j);
    let kappa = cfg.powers[0] / cfg.powers[j.idx()];
    let d2d = net.law(Tier::D2d);
    integrate_fallible(
        |y| {
            let fy = net.law(j).pdf(y) * net.law(k).ccdf(ckj * y) / p;
            if fy == 0.0 {
                return Ok(0.0);
            }
            let field = InfraField::new(net, j, y, opts);
            let inner = inner_spec(opts, 2);
            let u = integrate_fallible(
                |s| {
                    let infra = field.log_laplace(s);
                    let near = integrate(
                        |x| d2d.pdf(x) * (-ppp_log_laplace(active.d2d, s, kappa, y, x, cfg.beta)).exp(),
                        Domain::Finite { lo: 0.0, hi: c1j * y },
                        &inner,
                    )?
                    .value;
                    Ok(infra.exp() * near / (1.0 + s))
                },
                Domain::SemiInfinite { start: 0.0, scale: 1.0 },
                &inner_spec(opts, 1),
            )?;
            Ok(fy * u)
        },
        Domain::SemiInfinite { start: 0.0, scale: serving_scale(net, j) },
        &inner_spec(opts, 0),
    )
}

/// All defined rate cells; cells whose conditioning event is impossible are omitted.
pub fn rate_table(net: &Network, active: &ActiveIntensities, opts: &RateOptions) -> Result<RateTable> {
    let mut cells = Vec::new();
    let mut push = |case: u8, tier: Tier, r: Result<f64>| -> Result<()> {
        match r {
            Ok(nats) => {
                cells.push(RateCell { case, tier, nats });
                Ok(())
            }
            Err(Error::MeasureZero(_)) => Ok(()),
            Err(e) => Err(e),
        }
    };
    for t in Tier::ALL {
        push(1, t, ergodic_rate_case1(t, net, active, opts))?;
    }
    for t in [Tier::Sbs, Tier::Mbs] {
        push(2, t, ergodic_rate_case2(t, net, active, opts))?;
    }
    for t in [Tier::Sbs, Tier::Mbs] {
        push(3, t, ergodic_rate_case3(t, net, active, opts))?;
    }
    Ok(RateTable { cells })
}
