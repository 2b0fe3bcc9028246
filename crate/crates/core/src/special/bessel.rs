//! Bessel functions of the first kind for real order nu > -1/2, and the
//! removable-singularity kernel J_nu(x) / x^nu that drives the radial
//! transform.
//!
//! Evaluation strategy: ascending power series up to `max(12, 2|nu|)`,
//! Hankel asymptotic expansion beyond. The series is written for the kernel
//! (no x^nu division), so the x -> 0 limit 1 / (2^nu Gamma(nu+1)) falls out
//! of the leading term instead of a 0/0.

use crate::error::{Error, Result};
use crate::special::gamma::gamma;

/// Real Bessel order, restricted to nu > -1/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselOrder(f64);

impl BesselOrder {
    pub fn new(nu: f64) -> Result<Self> {
        if !nu.is_finite() || nu <= -0.5 {
            return Err(Error::domain(format!(
                "Bessel order must be finite and > -1/2, got {nu}"
            )));
        }
        Ok(BesselOrder(nu))
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// Order raised by one, used by the recurrence d/dx (x^-nu J_nu) = -x^-nu J_{nu+1}.
    pub fn next(self) -> BesselOrder {
        BesselOrder(self.0 + 1.0)
    }

    /// Value of J_nu(x)/x^nu at x = 0.
    pub fn kernel_at_zero(self) -> f64 {
        1.0 / (2f64.powf(self.0) * gamma(self.0 + 1.0))
    }
}

fn series_cutoff(nu: f64) -> f64 {
    12f64.max(2.0 * nu.abs())
}

/// Ascending series for J_nu(x)/x^nu; converges fast for x below the cutoff.
fn kernel_series(nu: f64, x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 1.0 / (2f64.powf(nu) * gamma(nu + 1.0));
    let mut sum = term;
    for k in 1..200 {
        term *= q / (k as f64 * (nu + k as f64));
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-280) {
            break;
        }
    }
    sum
}

/// Hankel asymptotic expansion of J_nu(x) for large x.
///
/// Terms are accumulated until they stop shrinking (asymptotic truncation at
/// the smallest term); at x >= 12 and moderate order that happens far below
/// 1e-14 absolute.
fn j_asymptotic(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0; // A_m, running product term
    let mut best = f64::INFINITY;
    for m in 1..=24u32 {
        let tm = 2.0 * m as f64 - 1.0;
        a *= (mu - tm * tm) / (m as f64 * 8.0 * x);
        if a.abs() >= best {
            break; // series started diverging
        }
        best = a.abs();
        // m odd -> contributes to Q, m even -> to P, with alternating signs
        let k = m / 2;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        if m % 2 == 1 {
            q += sign * a;
        } else {
            p += sign * a;
        }
    }
    let omega = x - nu * std::f64::consts::FRAC_PI_2 - std::f64::consts::FRAC_PI_4;
    (2.0 / (std::f64::consts::PI * x)).sqrt() * (p * omega.cos() - q * omega.sin())
}

/// J_nu(x) for x >= 0.
pub fn bessel_j(order: BesselOrder, x: f64) -> Result<f64> {
    let nu = order.get();
    if !(x >= 0.0) {
        return Err(Error::domain(format!("bessel_j: x must be >= 0, got {x}")));
    }
    if x <= series_cutoff(nu) {
        Ok(kernel_series(nu, x) * x.powf(nu))
    } else {
        Ok(j_asymptotic(nu, x))
    }
}

/// The kernel J_nu(x) / x^nu, smooth at x = 0.
pub fn bessel_kernel(order: BesselOrder, x: f64) -> Result<f64> {
    let nu = order.get();
    if !(x >= 0.0) {
        return Err(Error::domain(format!(
            "bessel_kernel: x must be >= 0, got {x}"
        )));
    }
    if x <= series_cutoff(nu) {
        Ok(kernel_series(nu, x))
    } else {
        Ok(j_asymptotic(nu, x) / x.powf(nu))
    }
}

/// Unchecked fast path for quadrature loops (x must already be >= 0).
pub(crate) fn kernel_unchecked(nu: f64, x: f64) -> f64 {
    if x <= series_cutoff(nu) {
        kernel_series(nu, x)
    } else {
        j_asymptotic(nu, x) / x.powf(nu)
    }
}
