//! Thin wrapper over double-exponential quadrature with a convergence check.

use crate::error::{Error, Result};

/// `∫_a^b f` to absolute accuracy `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let out = quadrature::integrate(f, a, b, tol);
    if !out.integral.is_finite() || out.error_estimate > 1e3 * tol.max(f64::EPSILON) {
        return Err(Error::NonConvergence(format!(
            "quadrature on [{a}, {b}] reached error estimate {:e} (target {tol:e})",
            out.error_estimate
        )));
    }
    Ok(out.integral)
}

/// Sum of [`integrate`] over `panels` equal pieces of `[a, b]`, each to
/// `tol / panels`.
pub fn integrate_panels<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize, tol: f64) -> Result<f64> {
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for i in 0..panels {
        let lo = a + h * i as f64;
        let hi = if i + 1 == panels { b } else { lo + h };
        total += integrate(&f, lo, hi, tol / panels as f64)?;
    }
    Ok(total)
}

/// Composite midpoint rule with `n` cells; for integrands that are only
/// Hölder continuous, where adaptive error estimates are unreliable.
pub fn midpoint<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    (0..n).map(|i| f(a + h * (i as f64 + 0.5))).sum::<f64>() * h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_and_gaussian() {
        let v = integrate(|x| x * x, 0.0, 3.0, 1e-12).unwrap();
        assert!((v - 9.0).abs() < 1e-10);
        let g = integrate(|x| (-x * x).exp(), -10.0, 10.0, 1e-12).unwrap();
        assert!((g - std::f64::consts::PI.sqrt()).abs() < 1e-10);
    }
}
