use super::{check_r, TierLayout};
use crate::error::{domain, Result};
use crate::specfun::{integrate_with_breaks, marcum_pair, rician_pdf_unchecked, Domain, QuadratureSpec};
use std::f64::consts::PI;

/// Cumulative hazard at which the table stops; beyond it the CCDF is below e^-60.
const H_CAP: f64 = 60.0;
const NODES: usize = 17;
const H_TOL: f64 = 1e-9;
const G_TOL: f64 = 1e-8;
const MAX_DEPTH: u32 = 14;

struct Params {
    lp: f64,
    m: f64,
    sigma: f64,
}

fn params(layout: &TierLayout) -> Result<Params> {
    layout.validate()?;
    match *layout {
        TierLayout::Thomas { parent_intensity, mean_daughters, sigma } => {
            Ok(Params { lp: parent_intensity, m: mean_daughters, sigma })
        }
        TierLayout::Poisson { .. } => Err(domain("expected a Thomas cluster layout")),
    }
}

// Returns (hazard, cumulative hazard) at r by quadrature over the parent distance.
//
// With u = z/sigma and v = r/sigma, a daughter of a parent at distance z falls
// inside b(0, r) with probability 1 - Q1(u, v), so
//   H(r) = 2 pi lp sigma^2 int u (1 - exp(-m (1 - Q1(u, v)))) du,
//   H'(r) = 2 pi lp m sigma int u q(u, v) exp(-m (1 - Q1(u, v))) du.
fn exact(p: &Params, r: f64) -> Result<(f64, f64)> {
    if r == 0.0 {
        return Ok((0.0, 0.0));
    }
    let v = r / p.sigma;
    let u_max = v + 12.0 * p.m.sqrt().max(1.0);
    let breaks = [v - 8.0, v, v + 8.0];
    let spec = QuadratureSpec { max_subdivisions: 500, ..QuadratureSpec::with_tol(1e-11, 1e-14) };
    let cum = integrate_with_breaks(
        |u| u * (-(-p.m * marcum_pair(u, v).1).exp_m1()),
        Domain::Finite { lo: 0.0, hi: u_max },
        &breaks,
        &spec,
    )?
    .value;
    let haz = integrate_with_breaks(
        |u| u * rician_pdf_unchecked(u, v) * (-p.m * marcum_pair(u, v).1).exp(),
        Domain::Finite { lo: 0.0, hi: u_max },
        &breaks,
        &spec,
    )?
    .value;
    Ok((2.0 * PI * p.lp * p.m * p.sigma * haz, 2.0 * PI * p.lp * p.sigma * p.sigma * cum))
}

pub(super) fn hazard_and_log_ccdf(layout: &TierLayout, r: f64) -> Result<(f64, f64)> {
    exact(&params(layout)?, r)
}

/// Contact-distance CCDF of a Thomas cluster process, by direct quadrature.
pub fn tcp_contact_ccdf(r: f64, layout: &TierLayout) -> Result<f64> {
    check_r(r)?;
    Ok((-exact(&params(layout)?, r)?.1).exp())
}

/// Contact-distance density of a Thomas cluster process, by direct quadrature.
pub fn tcp_contact_pdf(r: f64, layout: &TierLayout) -> Result<f64> {
    check_r(r)?;
    let (g, h) = exact(&params(layout)?, r)?;
    Ok(g * (-h).exp())
}

#[derive(Debug, Clone)]
struct Panel {
    lo: f64,
    hi: f64,
    h: [f64; NODES],
    g: [f64; NODES],
}

fn cheb_nodes() -> [f64; NODES] {
    let mut x = [0.0; NODES];
    for (j, xj) in x.iter_mut().enumerate() {
        *xj = (PI * j as f64 / (NODES - 1) as f64).cos();
    }
    x
}

fn bary(x: f64, nodes: &[f64; NODES], f: &[f64; NODES]) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for j in 0..NODES {
        let d = x - nodes[j];
        if d == 0.0 {
            return f[j];
        }
        let mut w = if j % 2 == 0 { 1.0 } else { -1.0 };
        if j == 0 || j == NODES - 1 {
            w *= 0.5;
        }
        let t = w / d;
        num += t * f[j];
        den += t;
    }
    num / den
}

/// Tabulated contact law of a Thomas cluster process.
///
/// The cumulative hazard and hazard are stored on adaptively refined
/// Chebyshev panels covering `[0, r_max]`, where `r_max` is the point at which
/// the CCDF drops below `e^-60`.
#[derive(Debug, Clone)]
pub struct ThomasContact {
    panels: Vec<Panel>,
    nodes: [f64; NODES],
    r_max: f64,
    h_max: f64,
    g_max: f64,
}

impl ThomasContact {
    pub fn new(layout: &TierLayout) -> Result<Self> {
        let p = params(layout)?;
        let mut r_max = (H_CAP / (PI * p.lp * (-(-p.m).exp_m1()))).sqrt();
        while exact(&p, r_max)?.1 < H_CAP {
            r_max *= 1.25;
        }
        let nodes = cheb_nodes();
        let (g_end, _) = exact(&p, r_max)?;
        let g_floor = 1e-3 * g_end;
        let width = (2.0 * p.sigma).min(r_max / 4.0);
        let count = (r_max / width).ceil() as usize;
        let mut panels = Vec::new();
        for k in 0..count {
            let lo = r_max * k as f64 / count as f64;
            let hi = r_max * (k + 1) as f64 / count as f64;
            build_panel(&p, &nodes, lo, hi, g_floor, 0, &mut panels)?;
        }
        let last = panels.last().expect("at least one panel");
        let (h_max, g_max) = (last.h[0], last.g[0]);
        Ok(Self { panels, nodes, r_max, h_max, g_max })
    }

    fn locate(&self, r: f64) -> &Panel {
        let i = self.panels.partition_point(|p| p.hi < r);
        &self.panels[i.min(self.panels.len() - 1)]
    }

    fn local(&self, panel: &Panel, r: f64) -> f64 {
        (2.0 * r - panel.lo - panel.hi) / (panel.hi - panel.lo)
    }

    /// Returns (hazard, cumulative hazard) at `r`.
    pub fn hazard_and_cumulative(&self, r: f64) -> (f64, f64) {
        if r <= 0.0 {
            return (0.0, 0.0);
        }
        if r >= self.r_max {
            return (self.g_max, self.h_max + self.g_max * (r - self.r_max));
        }
        let p = self.locate(r);
        let x = self.local(p, r);
        (bary(x, &self.nodes, &p.g), bary(x, &self.nodes, &p.h))
    }

    pub fn cumulative_hazard(&self, r: f64) -> f64 {
        self.hazard_and_cumulative(r).1
    }

    pub fn hazard(&self, r: f64) -> f64 {
        self.hazard_and_cumulative(r).0
    }

    pub fn ccdf(&self, r: f64) -> f64 {
        (-self.cumulative_hazard(r)).exp()
    }

    pub fn pdf(&self, r: f64) -> f64 {
        let (g, h) = self.hazard_and_cumulative(r);
        g * (-h).exp()
    }

    /// Distance beyond which the CCDF is below `e^-60`.
    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub(super) fn inverse_cumulative_hazard(&self, target: f64) -> f64 {
        if target <= 0.0 {
            return 0.0;
        }
        if target >= self.h_max {
            return self.r_max + (target - self.h_max) / self.g_max;
        }
        let (mut lo, mut hi) = (0.0, self.r_max);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.cumulative_hazard(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-13 * hi {
                break;
            }
        }
        0.5 * (lo + hi)
    }
}

fn build_panel(
    p: &Params,
    nodes: &[f64; NODES],
    lo: f64,
    hi: f64,
    g_floor: f64,
    depth: u32,
    out: &mut Vec<Panel>,
) -> Result<()> {
    let map = |x: f64| 0.5 * (lo + hi) + 0.5 * (hi - lo) * x;
    let mut h = [0.0; NODES];
    let mut g = [0.0; NODES];
    for j in 0..NODES {
        let (gj, hj) = exact(p, map(nodes[j]))?;
        h[j] = hj;
        g[j] = gj;
    }
    let mut ok = true;
    if depth < MAX_DEPTH {
        for &x in &[-0.67, 0.31] {
            let (ge, he) = exact(p, map(x))?;
            let dh = (bary(x, nodes, &h) - he).abs();
            let dg = (bary(x, nodes, &g) - ge).abs();
            if dh > H_TOL || dg > G_TOL * ge.abs().max(g_floor) {
                ok = false;
                break;
            }
        }
    }
    if ok {
        out.push(Panel { lo, hi, h, g });
        Ok(())
    } else {
        let mid = 0.5 * (lo + hi);
        build_panel(p, nodes, lo, mid, g_floor, depth + 1, out)?;
        build_panel(p, nodes, mid, hi, g_floor, depth + 1, out)
    }
}
