//! Laplace transforms of the interference from each tier.

use crate::specfun::{interference_2f1_unchecked, marcum_pair, rician_pdf_unchecked, GaussLegendre};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// How interference from clustered small cells is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ClusterKernel {
    /// Exact: clusters conditioned on the empty association ball, plus the
    /// siblings of the serving small cell when it belongs to a cluster.
    #[default]
    Conditioned,
    /// Unconditioned cluster field restricted to points beyond the
    /// exclusion radius, as for a Poisson tier; no intra-cluster term.
    Unconditioned,
}

/// `-log` of the Laplace transform of Poisson interference.
///
/// Interferers of intensity `lam` lie beyond radius `excl`; a link at
/// distance `rho` contributes `1 / (1 + (rho/x)^beta / (s kappa))`, where `x`
/// is the serving distance and `kappa` the interferer-to-serving power ratio.
pub fn ppp_log_laplace(lam: f64, s: f64, kappa: f64, x: f64, excl: f64, beta: f64) -> f64 {
    let k = s * kappa;
    if lam == 0.0 || k == 0.0 {
        return 0.0;
    }
    if excl <= 0.0 {
        let d = 2.0 / beta;
        return 2.0 * PI * lam * x * x * (PI / beta) / (2.0 * PI / beta).sin() * k.powf(d);
    }
    let c = excl / x;
    let cb = c.powf(beta);
    2.0 * PI * lam * x * x * k * c * c / cb / (beta - 2.0) * interference_2f1_unchecked(beta, k / cb)
}

/// Parameters of the clustered small-cell tier.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ClusterTier {
    pub lp: f64,
    pub m: f64,
    pub sigma: f64,
    pub beta: f64,
}

/// Cluster-interference Laplace transform for a fixed serving distance,
/// exclusion radius and power ratio, tabulated on fixed quadrature nodes so
/// that each evaluation in `s` is a sparse matrix-vector product.
pub(crate) struct ClusterLaplace {
    m: f64,
    kappa: f64,
    e_w: Vec<f64>,
    a_w: Vec<f64>,
    a0: f64,
    rows: Vec<(usize, usize)>,
    k_w: Vec<f64>,
    k_u: Vec<f64>,
}

const Z_NODES: usize = 8;
const RHO_NODES: usize = 6;
const TAIL_NODES: usize = 32;
const SUPPORT: f64 = 9.0;

impl ClusterLaplace {
    /// `x`: serving distance; `excl`: radius of the ball known to be free of
    /// small cells; `kappa`: small-cell power over serving power; `serving`:
    /// whether the serving transmitter is itself a small cell at distance `x`.
    pub fn new(t: &ClusterTier, x: f64, excl: f64, kappa: f64, serving: bool, kernel: ClusterKernel) -> Self {
        let sigma = t.sigma;
        let conditioned = kernel == ClusterKernel::Conditioned;
        let serving = serving && conditioned;
        let gl_z = GaussLegendre::new(Z_NODES);
        let gl_r = GaussLegendre::new(RHO_NODES);
        let gl_t = GaussLegendre::new(TAIL_NODES);

        let z0 = (excl - (SUPPORT + 1.0) * sigma).max(0.0);
        let z1 = excl + (SUPPORT + 1.0) * sigma;
        let mut zs: Vec<(f64, f64)> = Vec::new();
        let panels = ((z1 - z0) / sigma).ceil().max(1.0) as usize;
        for p in 0..panels {
            let lo = z0 + (z1 - z0) * p as f64 / panels as f64;
            let hi = z0 + (z1 - z0) * (p + 1) as f64 / panels as f64;
            zs.extend(gl_z.mapped(lo, hi));
        }
        let len = excl.max(sigma);
        for (tt, w) in gl_t.mapped(0.0, 1.0) {
            zs.push((z1 + len * tt / (1.0 - tt), w * len / ((1.0 - tt) * (1.0 - tt))));
        }

        let v_e = excl / sigma;
        let v_x = x / sigma;
        let mut out = Self {
            m: t.m,
            kappa,
            e_w: Vec::with_capacity(zs.len()),
            a_w: Vec::new(),
            a0: 0.0,
            rows: Vec::with_capacity(zs.len()),
            k_w: Vec::new(),
            k_u: Vec::new(),
        };
        for (z, w) in zs {
            let a = z / sigma;
            let void = if conditioned { (-t.m * marcum_pair(a, v_e).1).exp() } else { 1.0 };
            out.e_w.push(w * 2.0 * PI * t.lp * z * void);
            if serving {
                let aw = w * 2.0 * PI * t.lp * t.m * z * rician_pdf_unchecked(a, v_x) / sigma * void;
                out.a_w.push(aw);
                out.a0 += aw;
            }
            let start = out.k_w.len();
            let lo = excl.max(if a > SUPPORT { z - SUPPORT * sigma } else { 0.0 });
            let hi = z + SUPPORT * sigma;
            let mut p_lo = lo;
            while p_lo < hi {
                let width = sigma.min(0.3 * p_lo.max(1e-3 * sigma));
                let p_hi = (p_lo + width).min(hi);
                for (rho, wr) in gl_r.mapped(p_lo, p_hi) {
                    let k = wr * rician_pdf_unchecked(a, rho / sigma) / sigma;
                    if k > 0.0 {
                        out.k_w.push(k);
                        out.k_u.push((rho / x).powf(t.beta));
                    }
                }
                p_lo = p_hi;
            }
            out.rows.push((start, out.k_w.len()));
        }
        out
    }

    /// `log` of the Laplace transform at `s`.
    pub fn log_laplace(&self, s: f64) -> f64 {
        let k = s * self.kappa;
        if k == 0.0 {
            return 0.0;
        }
        let inv = 1.0 / k;
        let mut e = 0.0;
        let mut a = 0.0;
        let serving = !self.a_w.is_empty();
        for (n, &(lo, hi)) in self.rows.iter().enumerate() {
            let mut j = 0.0;
            for (w, u) in self.k_w[lo..hi].iter().zip(&self.k_u[lo..hi]) {
                j += w / (1.0 + u * inv);
            }
            let mj = self.m * j;
            e += self.e_w[n] * -(-mj).exp_m1();
            if serving {
                a += self.a_w[n] * (-mj).exp();
            }
        }
        if serving {
            -e + (a / self.a0).ln()
        } else {
            -e
        }
    }

    /// Normalizer of the sibling term; equals the contact-distance hazard at `x`.
    #[cfg(test)]
    pub fn sibling_normalizer(&self) -> f64 {
        self.a0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{integrate, integrate_with_breaks, Domain, QuadratureSpec};

    fn ppp_reference(lam: f64, s: f64, kappa: f64, x: f64, excl: f64, beta: f64) -> f64 {
        let spec = QuadratureSpec::with_tol(1e-12, 0.0);
        2.0 * PI
            * lam
            * integrate(
                |r| r / (1.0 + (r / x).powf(beta) / (s * kappa)),
                Domain::SemiInfinite { start: excl, scale: x },
                &spec,
            )
            .unwrap()
            .value
    }

    #[test]
    fn poisson_exponent_matches_direct_integral() {
        for &(s, kappa, excl) in &[(0.5, 1.0, 100.0), (3.0, 13.0 / 193.0, 51.0), (40.0, 3.0, 250.0), (1.0, 2.0, 0.0)] {
            for beta in [3.0, 4.0, 5.5] {
                let got = ppp_log_laplace(2e-5, s, kappa, 100.0, excl, beta);
                let want = ppp_reference(2e-5, s, kappa, 100.0, excl, beta);
                assert!((got / want - 1.0).abs() < 1e-9, "s={s} excl={excl} beta={beta}");
            }
        }
        // vanishing exclusion approaches the closed form
        let a = ppp_log_laplace(1e-5, 2.0, 1.0, 80.0, 80.0 * 1e-6, 4.0);
        let b = ppp_log_laplace(1e-5, 2.0, 1.0, 80.0, 0.0, 4.0);
        assert!((a / b - 1.0).abs() < 1e-4);
        assert_eq!(ppp_log_laplace(1e-5, 0.0, 1.0, 80.0, 10.0, 4.0), 0.0);
    }

    fn tier() -> ClusterTier {
        ClusterTier { lp: 3.0 / (PI * 1e6), m: 10.0, sigma: 250.0, beta: 4.0 }
    }

    // Nested adaptive evaluation of the same functional.
    fn reference(t: &ClusterTier, s: f64, x: f64, excl: f64, kappa: f64, serving: bool, kernel: ClusterKernel) -> f64 {
        let spec = QuadratureSpec::with_tol(1e-10, 1e-16);
        let g = |rho: f64| 1.0 / (1.0 + (rho / x).powf(t.beta) / (s * kappa));
        let j = |z: f64| {
            integrate_with_breaks(
                |rho| g(rho) * rician_pdf_unchecked(z / t.sigma, rho / t.sigma) / t.sigma,
                Domain::SemiInfinite { start: excl, scale: t.sigma },
                &[z - 5.0 * t.sigma, z, z + 5.0 * t.sigma],
                &spec,
            )
            .unwrap()
            .value
        };
        let cond = kernel == ClusterKernel::Conditioned;
        let void = |z: f64| if cond { (-t.m * marcum_pair(z / t.sigma, excl / t.sigma).1).exp() } else { 1.0 };
        let brk = [excl - 5.0 * t.sigma, excl, excl + 5.0 * t.sigma];
        let e = integrate_with_breaks(
            |z| 2.0 * PI * t.lp * z * void(z) * -(-t.m * j(z)).exp_m1(),
            Domain::SemiInfinite { start: 0.0, scale: excl.max(t.sigma) },
            &brk,
            &spec,
        )
        .unwrap()
        .value;
        if !(serving && cond) {
            return -e;
        }
        let a = |s_on: bool| {
            integrate_with_breaks(
                |z| {
                    let base =
                        2.0 * PI * t.lp * t.m * z * rician_pdf_unchecked(z / t.sigma, x / t.sigma) / t.sigma * void(z);
                    if s_on {
                        base * (-t.m * j(z)).exp()
                    } else {
                        base
                    }
                },
                Domain::SemiInfinite { start: 0.0, scale: excl.max(t.sigma) },
                &brk,
                &spec,
            )
            .unwrap()
            .value
        };
        -e + (a(true) / a(false)).ln()
    }

    #[test]
    fn grid_matches_nested_quadrature() {
        let t = tier();
        let cases = [
            (300.0, 153.0, 13.0 / 193.0, false, ClusterKernel::Conditioned),
            (120.0, 120.0, 1.0, true, ClusterKernel::Conditioned),
            (600.0, 600.0, 1.0, true, ClusterKernel::Conditioned),
            (80.0, 130.0, 13.0 / 3.0, false, ClusterKernel::Conditioned),
            (200.0, 100.0, 0.5, false, ClusterKernel::Unconditioned),
        ];
        for &(x, excl, kappa, serving, kernel) in &cases {
            let grid = ClusterLaplace::new(&t, x, excl, kappa, serving, kernel);
            for &s in &[0.05, 1.0, 20.0, 1e3] {
                let got = grid.log_laplace(s);
                let want = reference(&t, s, x, excl, kappa, serving, kernel);
                assert!((got - want).abs() < 1e-6 * want.abs().max(1e-2), "x={x} s={s} got={got} want={want}");
            }
        }
    }

    #[test]
    fn sibling_normalizer_is_the_contact_hazard() {
        let layout = crate::geometry::TierLayout::Thomas {
            parent_intensity: 3.0 / (PI * 1e6),
            mean_daughters: 10.0,
            sigma: 250.0,
        };
        for &x in &[50.0, 400.0, 1500.0] {
            let grid = ClusterLaplace::new(&tier(), x, x, 1.0, true, ClusterKernel::Conditioned);
            let tau = crate::geometry::tau(&layout, x).unwrap();
            assert!((grid.sibling_normalizer() / tau - 1.0).abs() < 1e-7, "x={x}");
        }
    }

    #[test]
    fn laplace_is_one_at_zero_and_decreasing() {
        let grid = ClusterLaplace::new(&tier(), 200.0, 200.0, 1.0, true, ClusterKernel::Conditioned);
        assert_eq!(grid.log_laplace(0.0), 0.0);
        let mut prev = 0.0;
        for k in 1..60 {
            let v = grid.log_laplace(1.25f64.powi(k) * 1e-3);
            assert!(v <= prev + 1e-12);
            prev = v;
        }
    }
}
