//! Radial Dunkl spectral calculus.
//!
//! The crate computes with radial functions under the weighted measure
//! r^{N-1} dr, N = 2 gamma + n possibly non-integer:
//!
//! - [`special`]: Gamma, Bessel J of real order, and the asymptotic
//!   auxiliary function of the Bessel kernel decomposition;
//! - [`transform`]: the self-inverse Bessel-kernel (Hankel-type) transform
//!   on composite Gauss-Legendre grids, with Fourier-multiplier application;
//! - [`bump`]: the smooth Littlewood-Paley cutoff/ring pair and the induced
//!   frequency projectors;
//! - [`phase`]: the catalog of dispersive phases (wave, Schrodinger,
//!   fractional, fourth-order, Klein-Gordon, beam) behind one trait,
//!   resolved by name at runtime;
//! - [`kernel`]: frequency-localized propagator kernels by phase-adaptive
//!   oscillatory quadrature, kernel sweeps, and propagator application;
//! - [`decay`]: decay-exponent fits against the predicted regime ceilings,
//!   Besov and Strichartz norms, proposition-level verification;
//! - [`solver`]: exact linear spectral propagation and a Picard/Duhamel
//!   fixed-point solver for power nonlinearities on radial data.

pub mod bump;
pub mod decay;
pub mod error;
pub mod grid;
pub mod kernel;
pub mod phase;
pub mod quad;
pub mod selftest;
pub mod solver;
pub mod special;
pub mod suite;
pub mod transform;

pub use error::{Error, Result};
pub use grid::{EffectiveDimension, RadialGrid, RadialProfile, Space};
pub use transform::Transform;
