//! Special functions: Gamma, Bessel J of real order, and the asymptotic
//! auxiliary function h(r).

pub mod bessel;
pub mod gamma;
pub mod haux;

pub use bessel::{bessel_j, bessel_kernel, BesselOrder};
pub use gamma::{gamma, ln_gamma};
pub use haux::HAux;

/// Constant C_N in the decomposition J_nu(x)/x^nu = C_N (e^{ix} h + e^{-ix} conj h),
/// read off the integral representation of J_nu: C_N = 2^{-nu}/(Gamma(nu+1/2) Gamma(1/2)).
pub fn decomposition_constant(effective_dim: f64) -> f64 {
    let nu = (effective_dim - 2.0) / 2.0;
    2f64.powf(-nu) / (gamma(nu + 0.5) * gamma(0.5))
}
