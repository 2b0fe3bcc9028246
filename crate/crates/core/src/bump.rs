//! Littlewood-Paley machinery: the smooth cutoff R, the ring function
//! psi(r) = R(r/2) - R(r), and the induced frequency projectors.
//!
//! R is the canonical exp-based bump: 1 on [0,1/2], 0 on [1,inf), and
//! g(1-r)/(g(1-r)+g(r-1/2)) with g(x) = exp(-1/x) in between. It is C-infty
//! and monotone; any other admissible choice would have to pass the same
//! property suite.
//!
//! psi(2^{-j} r) is evaluated as R(2^{-j-1} r) - R(2^{-j} r). Dyadic partial
//! sums then telescope exactly (power-of-two scalings are exact in floating
//! point), so the partition-of-unity identities hold to machine precision
//! rather than to quadrature accuracy.

use num_complex::Complex64;

use crate::error::Result;
use crate::grid::RadialProfile;
use crate::transform::Transform;

fn g(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

/// The smooth non-increasing cutoff R.
pub fn cutoff(r: f64) -> f64 {
    if r <= 0.5 {
        1.0
    } else if r >= 1.0 {
        0.0
    } else {
        let a = g(1.0 - r);
        a / (a + g(r - 0.5))
    }
}

/// The ring function psi(r) = R(r/2) - R(r), supported on [1/2, 2].
pub fn ring(r: f64) -> f64 {
    cutoff(0.5 * r) - cutoff(r)
}

/// psi(2^{-j} r), supported on [2^{j-1}, 2^{j+1}].
pub fn ring_dyadic(j: i32, r: f64) -> f64 {
    let tw = 2f64.powi(-j);
    cutoff(0.5 * tw * r) - cutoff(tw * r)
}

/// Frequency band selector for `project`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Band {
    /// S_0: multiplier R(s) on [0, 1].
    Low,
    /// Dyadic ring j: multiplier psi(2^{-j} s) on [2^{j-1}, 2^{j+1}].
    Dyadic(i32),
}

impl Band {
    pub fn multiplier(self) -> impl Fn(f64) -> f64 {
        move |s| match self {
            Band::Low => cutoff(s),
            Band::Dyadic(j) => ring_dyadic(j, s),
        }
    }
}

/// Apply the projector S_0 or Delta-tilde_j to a physical-space profile.
pub fn project(transform: &Transform, f: &RadialProfile, band: Band) -> Result<RadialProfile> {
    let m = band.multiplier();
    transform.apply_multiplier(f, move |s| Complex64::new(m(s), 0.0))
}
