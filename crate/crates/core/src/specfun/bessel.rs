use crate::error::{domain, Error, Result};

const SERIES_LIMIT: f64 = 30.0;

/// Modified Bessel function of the first kind, order zero.
///
/// Returns a range error once the result no longer fits in an `f64`
/// (around `z = 713.98`).
pub fn bessel_i0(z: f64) -> Result<f64> {
    check_arg(z)?;
    let v = if z <= SERIES_LIMIT {
        series(z)
    } else {
        let half = (0.5 * z).exp();
        i0_scaled_unchecked(z) * half * half
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Range(format!("I0({z}) overflows f64")))
    }
}

/// Exponentially scaled Bessel function `exp(-z) I0(z)`, finite for all `z >= 0`.
pub fn bessel_i0_scaled(z: f64) -> Result<f64> {
    check_arg(z)?;
    Ok(i0_scaled_unchecked(z))
}

fn check_arg(z: f64) -> Result<()> {
    if z.is_nan() || z < 0.0 {
        return Err(domain(format!("I0 argument must be >= 0, got {z}")));
    }
    Ok(())
}

pub(crate) fn i0_scaled_unchecked(z: f64) -> f64 {
    if z <= SERIES_LIMIT {
        series(z) * (-z).exp()
    } else if z.is_infinite() {
        0.0
    } else {
        asymptotic_scaled(z)
    }
}

fn series(z: f64) -> f64 {
    let q = 0.25 * z * z;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    while term > sum * 1e-17 {
        term *= q / (k * k);
        sum += term;
        k += 1.0;
    }
    sum
}

// exp(-z) I0(z) ~ (2 pi z)^{-1/2} sum_k prod_{j<=k} (2j-1)^2 / (8 j z)
fn asymptotic_scaled(z: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..60 {
        let kf = k as f64;
        let next = term * (2.0 * kf - 1.0).powi(2) / (8.0 * kf * z);
        if next > term {
            break;
        }
        term = next;
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
    }
    sum / (2.0 * std::f64::consts::PI * z).sqrt()
}
