//! The radial Dunkl transform: a Hankel-type integral transform with kernel
//! J_nu(rs)/(rs)^nu against r^{N-1} dr, nu = (N-2)/2.
//!
//! Normalization: the kernel is used raw with unit prefactor,
//!
//!   (F f)(s) = int_0^inf f(r) J_nu(rs)/(rs)^nu r^{N-1} dr.
//!
//! This is the unique constant making the transform self-inverse on the
//! measure r^{N-1} dr: the Gaussian e^{-r^2/2} is a fixed point, forward and
//! inverse coincide, and Plancherel holds. Written against the kernel
//! normalized to 1 at the origin, the same operator carries the prefactor
//! d_N = 1/(2^{(N-2)/2} Gamma(N/2)). Angular normalization of the ambient
//! weighted measure is a configurable constant (default 1) entering norms
//! only; decay exponents never see it.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{RadialGrid, RadialProfile, Space};
use crate::special::bessel::kernel_unchecked;

/// Fraction of weighted L1 mass allowed in the last decade of the grid
/// before a transform flags the result as truncated.
const TAIL_THRESHOLD: f64 = 1e-10;

/// Radial transform bound to one grid, with the kernel matrix cached.
///
/// The frequency grid defaults to the physical grid, so one symmetric matrix
/// serves both directions.
pub struct Transform {
    grid: Arc<RadialGrid>,
    /// kernel[i * n + j] = k_nu(r_i * r_j)
    kernel: Vec<f64>,
}

impl Transform {
    pub fn new(grid: &Arc<RadialGrid>) -> Self {
        let n = grid.len();
        let nu = grid.dim().bessel_nu();
        let nodes = grid.nodes();
        let mut kernel = vec![0.0; n * n];
        kernel
            .par_chunks_mut(n)
            .enumerate()
            .for_each(|(i, row)| {
                let ri = nodes[i];
                for (j, cell) in row.iter_mut().enumerate() {
                    *cell = kernel_unchecked(nu, ri * nodes[j]);
                }
            });
        Transform {
            grid: grid.clone(),
            kernel,
        }
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    fn check_profile(&self, f: &RadialProfile, expected: Space) -> Result<()> {
        if !Arc::ptr_eq(f.grid(), &self.grid) {
            return Err(Error::domain("profile belongs to a different grid"));
        }
        if f.space() != expected {
            return Err(Error::SpaceMismatch {
                expected: expected.name(),
                got: f.space().name(),
            });
        }
        Ok(())
    }

    /// Weighted-L1 fraction carried by the last decade [0.9 r_max, r_max];
    /// the caller-responsibility decay precondition, checked heuristically.
    fn tail_fraction(&self, f: &RadialProfile) -> f64 {
        let cut = 0.9 * self.grid.r_max();
        let mut tail = 0.0;
        let mut total = 0.0;
        for ((r, w), v) in self
            .grid
            .nodes()
            .iter()
            .zip(self.grid.weights())
            .zip(f.values())
        {
            let m = w * v.norm();
            total += m;
            if *r >= cut {
                tail += m;
            }
        }
        if total == 0.0 {
            0.0
        } else {
            tail / total
        }
    }

    fn apply_kernel(&self, values: &[Complex64]) -> Vec<Complex64> {
        let n = self.grid.len();
        let weights = self.grid.weights();
        let weighted: Vec<Complex64> = weights
            .iter()
            .zip(values)
            .map(|(w, v)| w * v)
            .collect();
        (0..n)
            .map(|i| {
                let row = &self.kernel[i * n..(i + 1) * n];
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, v) in row.iter().zip(&weighted) {
                    acc += k * v;
                }
                acc
            })
            .collect()
    }

    fn transform_impl(&self, f: &RadialProfile, from: Space, to: Space) -> Result<RadialProfile> {
        self.check_profile(f, from)?;
        let tail = self.tail_fraction(f);
        let mut out = RadialProfile::from_values(&self.grid, to, self.apply_kernel(f.values()))?;
        out.truncation = f.truncation;
        if tail > TAIL_THRESHOLD {
            out.truncation = Some(out.truncation.map_or(tail, |t| t.max(tail)));
        }
        Ok(out)
    }

    /// Physical -> frequency.
    pub fn forward(&self, f: &RadialProfile) -> Result<RadialProfile> {
        self.transform_impl(f, Space::Physical, Space::Frequency)
    }

    /// Frequency -> physical. Same kernel and normalization as `forward`.
    pub fn inverse(&self, g: &RadialProfile) -> Result<RadialProfile> {
        self.transform_impl(g, Space::Frequency, Space::Physical)
    }

    /// Transform evaluated on caller-chosen output nodes (direct quadrature).
    pub fn forward_to(&self, f: &RadialProfile, out_nodes: &[f64]) -> Result<Vec<Complex64>> {
        self.check_profile(f, Space::Physical)?;
        let nu = self.grid.dim().bessel_nu();
        let nodes = self.grid.nodes();
        let weights = self.grid.weights();
        Ok(out_nodes
            .iter()
            .map(|&s| {
                if !(s >= 0.0) {
                    return Complex64::new(f64::NAN, 0.0);
                }
                let mut acc = Complex64::new(0.0, 0.0);
                for ((r, w), v) in nodes.iter().zip(weights).zip(f.values()) {
                    acc += w * kernel_unchecked(nu, r * s) * v;
                }
                acc
            })
            .collect())
    }

    /// Fourier-multiplier application: inverse( m(s) * forward(f) ).
    pub fn apply_multiplier<M: Fn(f64) -> Complex64>(
        &self,
        f: &RadialProfile,
        m: M,
    ) -> Result<RadialProfile> {
        let mut hat = self.forward(f)?;
        for (s, v) in self.grid.nodes().iter().zip(hat.values_mut()) {
            *v *= m(*s);
        }
        self.inverse(&hat)
    }
}

/// Weighted Lebesgue norm (sigma_N int |f|^p r^{N-1} dr)^(1/p); p = infinity
/// gives the max over nodes.
pub fn weighted_lp_norm(f: &RadialProfile, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::domain(format!("Lp norm needs p >= 1, got {p}")));
    }
    if p.is_infinite() {
        return Ok(f.sup_norm());
    }
    let grid = f.grid();
    let mut acc = 0.0;
    for (w, v) in grid.weights().iter().zip(f.values()) {
        acc += w * v.norm().powf(p);
    }
    Ok((grid.sigma() * acc).powf(1.0 / p))
}
