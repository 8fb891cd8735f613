use crate::error::{domain, Result};
use std::f64::consts::PI;

/// `2F1(1, 1 - 2/beta; 2 - 2/beta; -s)`, the hypergeometric factor in the
/// Laplace transform of Poisson interference with path-loss exponent `beta`.
///
/// Equivalent to `int_0^1 dw / (1 + s w^(beta/(beta-2)))`; for `beta = 4` it is
/// `atan(sqrt(s)) / sqrt(s)`.
pub fn gauss_2f1_interference(beta: f64, s: f64) -> Result<f64> {
    if !(beta > 2.0) || beta.is_infinite() {
        return Err(domain(format!("path-loss exponent must exceed 2, got {beta}")));
    }
    if s.is_nan() || s < 0.0 {
        return Err(domain(format!("argument must be >= 0, got {s}")));
    }
    Ok(interference_2f1_unchecked(beta, s))
}

pub(crate) fn interference_2f1_unchecked(beta: f64, z: f64) -> f64 {
    let delta = 2.0 / beta;
    let b = 1.0 - delta;
    if z == 0.0 {
        return 1.0;
    }
    if z.is_infinite() {
        return 0.0;
    }
    if z <= 2.0 {
        // Pfaff: (1+z)^{-1} 2F1(1, 1; 2 - delta; z/(1+z)).
        let w = z / (1.0 + z);
        let c = 2.0 - delta;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 0.0;
        loop {
            term *= (k + 1.0) / (c + k) * w;
            sum += term;
            k += 1.0;
            if term < 1e-17 * sum {
                break;
            }
        }
        sum / (1.0 + z)
    } else {
        // Reflection to 1/z: b pi / (sin(pi b) z^b) - (b/z) sum_k (-1/z)^k / (delta + k).
        let u = -1.0 / z;
        let mut pw = 1.0;
        let mut sum = 0.0;
        let mut k = 0.0;
        loop {
            let t = pw / (delta + k);
            sum += t;
            if t.abs() < 1e-17 * sum.abs() {
                break;
            }
            pw *= u;
            k += 1.0;
        }
        b * PI / ((PI * b).sin() * z.powf(b)) - b / z * sum
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{integrate, Domain, QuadratureSpec};

    fn oracle(beta: f64, s: f64) -> f64 {
        let p = beta / (beta - 2.0);
        let spec = QuadratureSpec { rel_tol: 1e-13, abs_tol: 0.0, ..Default::default() };
        integrate(|w| 1.0 / (1.0 + s * w.powf(p)), Domain::Finite { lo: 0.0, hi: 1.0 }, &spec).unwrap().value
    }

    #[test]
    fn beta_four_closed_form() {
        for &s in &[0.0, 1e-6, 0.3, 1.0, 1.99, 2.0, 2.01, 7.5, 1e3, 1e6, 1e12] {
            let got = gauss_2f1_interference(4.0, s).unwrap();
            let want = if s == 0.0 { 1.0 } else { s.sqrt().atan() / s.sqrt() };
            assert!(((got - want) / want).abs() < 1e-13, "s={s} got={got} want={want}");
        }
    }

    #[test]
    fn general_beta_matches_integral() {
        for &beta in &[2.5, 3.0, 3.5, 4.5, 6.0] {
            for &s in &[0.1, 0.9, 1.5, 2.0, 3.0, 40.0, 1e4, 1e6] {
                let got = gauss_2f1_interference(beta, s).unwrap();
                let want = oracle(beta, s);
                assert!(((got - want) / want).abs() < 1e-10, "beta={beta} s={s} {got} {want}");
            }
        }
    }

    #[test]
    fn rejects_bad_exponent() {
        assert!(gauss_2f1_interference(2.0, 1.0).is_err());
        assert!(gauss_2f1_interference(1.5, 1.0).is_err());
        assert!(gauss_2f1_interference(4.0, -1.0).is_err());
    }
}
