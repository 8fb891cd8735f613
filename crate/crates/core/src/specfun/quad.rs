use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Tolerances and limits for adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub truncation: TruncationPolicy,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { rel_tol: 1e-7, abs_tol: 1e-10, max_subdivisions: 2000, truncation: TruncationPolicy::Transform }
    }
}

impl QuadratureSpec {
    pub fn with_tol(rel_tol: f64, abs_tol: f64) -> Self {
        Self { rel_tol, abs_tol, ..Self::default() }
    }
}

/// How semi-infinite ranges are handled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TruncationPolicy {
    /// Map `[start, inf)` onto `(0, 1]` with `x = start + scale (1-t)/t`.
    Transform,
    /// Cut the range where a Gaussian envelope centred at `mode` with width
    /// `sigma` falls below `abs_tol * 1e-2`, never closer than `12 sigma`.
    GaussianEnvelope { mode: f64, sigma: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Finite { lo: f64, hi: f64 },
    SemiInfinite { start: f64, scale: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// Adaptive 21-point Gauss-Kronrod quadrature, bisecting the interval with
/// the largest error estimate until the global tolerance is met.
pub fn integrate<F: FnMut(f64) -> f64>(f: F, domain: Domain, spec: &QuadratureSpec) -> Result<Estimate> {
    integrate_with_breaks(f, domain, &[], spec)
}

/// As [`integrate`], with interior points where the integrand is known to
/// change character. Points outside the domain are ignored.
pub fn integrate_with_breaks<F: FnMut(f64) -> f64>(
    mut f: F,
    domain: Domain,
    breaks: &[f64],
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    match domain {
        Domain::Finite { lo, hi } => {
            if !(lo.is_finite() && hi.is_finite()) {
                return Err(crate::error::domain("finite domain needs finite limits"));
            }
            if lo == hi {
                return Ok(Estimate { value: 0.0, error: 0.0, evaluations: 0 });
            }
            let (a, b, sign) = if lo < hi { (lo, hi, 1.0) } else { (hi, lo, -1.0) };
            let pts = interval_points(a, b, breaks.iter().copied());
            let est = adapt(&mut f, &pts, spec)?;
            Ok(Estimate { value: sign * est.value, ..est })
        }
        Domain::SemiInfinite { start, scale } => match spec.truncation {
            TruncationPolicy::GaussianEnvelope { mode, sigma } => {
                let reach = (2.0 * (100.0 / spec.abs_tol.max(1e-300)).ln()).sqrt().max(12.0);
                let hi = (mode + reach * sigma).max(start);
                integrate_with_breaks(f, Domain::Finite { lo: start, hi }, breaks, spec)
            }
            TruncationPolicy::Transform => {
                let scale = if scale > 0.0 && scale.is_finite() { scale } else { 1.0 };
                let to_t = |x: f64| scale / (x - start + scale);
                let mut g = |t: f64| {
                    let x = start + scale * (1.0 - t) / t;
                    let v = f(x);
                    if v == 0.0 {
                        0.0
                    } else {
                        v * scale / (t * t)
                    }
                };
                let inner = breaks.iter().filter(|&&x| x > start && x.is_finite()).map(|&x| to_t(x));
                let pts = interval_points(0.0, 1.0, inner);
                adapt(&mut g, &pts, spec)
            }
        },
    }
}

fn interval_points(a: f64, b: f64, inner: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut pts: Vec<f64> =
        std::iter::once(a).chain(inner.filter(|&x| x > a && x < b)).chain(std::iter::once(b)).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

struct Piece {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn adapt<F: FnMut(f64) -> f64>(f: &mut F, pts: &[f64], spec: &QuadratureSpec) -> Result<Estimate> {
    let mut heap = BinaryHeap::new();
    let mut value = 0.0;
    let mut error = 0.0;
    let mut evaluations = 0;
    for w in pts.windows(2) {
        let (v, e) = gk21(f, w[0], w[1]);
        evaluations += 21;
        value += v;
        error += e;
        heap.push(Piece { lo: w[0], hi: w[1], value: v, error: e });
    }
    let mut splits = 0;
    loop {
        if !value.is_finite() {
            return Err(Error::Divergent(format!("integrand produced {value}")));
        }
        let target = spec.abs_tol.max(spec.rel_tol * value.abs());
        if error <= target {
            return Ok(Estimate { value, error, evaluations });
        }
        let Some(worst) = heap.pop() else {
            return Ok(Estimate { value, error, evaluations });
        };
        let mid = 0.5 * (worst.lo + worst.hi);
        let too_narrow =
            mid <= worst.lo || mid >= worst.hi || (worst.hi - worst.lo) <= 1e-13 * worst.lo.abs().max(worst.hi.abs());
        if splits >= spec.max_subdivisions || too_narrow {
            return Err(Error::NoConvergence { estimate: value, error });
        }
        let (v1, e1) = gk21(f, worst.lo, mid);
        let (v2, e2) = gk21(f, mid, worst.hi);
        evaluations += 42;
        splits += 1;
        value += v1 + v2 - worst.value;
        error += e1 + e2 - worst.error;
        // Guard against drift from repeated incremental updates.
        if error < 0.0 {
            error = heap.iter().map(|p| p.error).sum::<f64>() + e1 + e2;
        }
        heap.push(Piece { lo: worst.lo, hi: mid, value: v1, error: e1 });
        heap.push(Piece { lo: mid, hi: worst.hi, value: v2, error: e2 });
    }
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_478_726,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

fn gk21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut resk = WGK[10] * fc;
    let mut resg = 0.0;
    let mut resabs = resk.abs();
    let mut fv = [(0.0, 0.0); 10];
    for (j, slot) in fv.iter_mut().enumerate() {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
        *slot = (f1, f2);
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[10] * (fc - mean).abs();
    for (j, &(f1, f2)) in fv.iter().enumerate() {
        resasc += WGK[j] * ((f1 - mean).abs() + (f2 - mean).abs());
    }
    let value = resk * h;
    let resabs = resabs * h.abs();
    let resasc = resasc * h.abs();
    let mut err = ((resk - resg) * h).abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * resabs;
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) && err < floor {
        err = floor;
    }
    (value, err)
}

/// Gauss-Legendre rule with `n` nodes on `[-1, 1]`, for fixed-node kernels.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        let nf = n as f64;
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                let pn = if n == 1 { x } else { p1 };
                let pn1 = if n == 1 { 1.0 } else { p0 };
                dp = nf * (x * pn - pn1) / (x * x - 1.0);
                let dx = pn / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[m - 1] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        self.nodes.iter().zip(&self.weights).map(move |(&x, &w)| (c + h * x, h * w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exactness_of_gauss_legendre() {
        for n in [1, 2, 5, 12, 48] {
            let gl = GaussLegendre::new(n);
            let deg = 2 * n - 1;
            let got: f64 = gl.mapped(0.0, 2.0).map(|(x, w)| w * x.powi(deg as i32)).sum();
            let want = 2f64.powi(deg as i32 + 1) / (deg as f64 + 1.0);
            assert!(((got - want) / want).abs() < 1e-13, "n={n}");
            assert!((gl.weights.iter().sum::<f64>() - 2.0).abs() < 1e-13);
        }
    }

    #[test]
    fn gaussian_on_half_line() {
        let spec = QuadratureSpec::with_tol(1e-12, 0.0);
        let v = integrate(|x| (-x * x).exp(), Domain::SemiInfinite { start: 0.0, scale: 1.0 }, &spec).unwrap().value;
        assert!((v - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn envelope_truncation() {
        let spec = QuadratureSpec {
            truncation: TruncationPolicy::GaussianEnvelope { mode: 3.0, sigma: 0.5 },
            ..QuadratureSpec::with_tol(1e-12, 1e-14)
        };
        let v =
            integrate(|x| (-(x - 3.0) * (x - 3.0) / 0.5).exp(), Domain::SemiInfinite { start: 3.0, scale: 1.0 }, &spec)
                .unwrap()
                .value;
        assert!((v - (std::f64::consts::PI * 0.5).sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn endpoint_singularity_and_breaks() {
        let spec = QuadratureSpec::with_tol(1e-10, 0.0);
        let v = integrate(|x| 1.0 / x.sqrt(), Domain::Finite { lo: 0.0, hi: 1.0 }, &spec).unwrap().value;
        assert!((v - 2.0).abs() < 1e-9);
        let v = integrate_with_breaks(|x| (x - 0.3).abs(), Domain::Finite { lo: 0.0, hi: 1.0 }, &[0.3], &spec)
            .unwrap()
            .value;
        assert!((v - (0.045 + 0.245)).abs() < 1e-14);
        let v = integrate(|x| x, Domain::Finite { lo: 1.0, hi: 0.0 }, &spec).unwrap().value;
        assert!((v + 0.5).abs() < 1e-15);
    }

    #[test]
    fn failure_reports_best_estimate() {
        let spec = QuadratureSpec { max_subdivisions: 3, ..QuadratureSpec::with_tol(1e-14, 0.0) };
        match integrate(|x| (1.0 / x).sin(), Domain::Finite { lo: 1e-4, hi: 1.0 }, &spec) {
            Err(Error::NoConvergence { estimate, error }) => {
                assert!(estimate.is_finite() && error > 0.0)
            }
            other => panic!("expected failure, got {other:?}"),
        }
    }
}
