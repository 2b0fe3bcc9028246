//! Frequency-localized propagator kernels and full propagator application.
//!
//! The central object is the band kernel
//!
//!   II_j(s) = 2^{jN}/Gamma(N/2) int_{1/2}^{2} e^{it phi(2^j r)} psi(r)
//!             J_nu(rs)/(rs)^nu r^{N-1} dr,
//!
//! together with its low-frequency companion over the cutoff R on [0, 1].
//! Both are evaluated by direct phase-adaptive quadrature: the combined
//! local frequency |t| 2^j phi'(2^j r) + s sets the panel subdivision, so
//! the Bessel oscillation (wavelength ~ 2 pi / s) and the propagator phase
//! are resolved together without any analytic splitting.

use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bump::{cutoff, ring, ring_dyadic};
use crate::error::{Error, Result};
use crate::grid::{EffectiveDimension, RadialProfile};
use crate::phase::Phase;
use crate::quad::{oscillatory_integral_seeded, OscSettings};
use crate::special::bessel::kernel_unchecked;
use crate::special::gamma::gamma;
use crate::transform::Transform;

/// One evaluated kernel point.
#[derive(Debug, Clone, Copy)]
pub struct KernelPoint {
    pub value: Complex64,
    pub err_est: f64,
    pub panels: usize,
}

/// Absolute tolerance matched to the kernel's 2^{jN} scale.
pub fn default_band_tol(dim: EffectiveDimension, j: i32) -> f64 {
    1e-10 * 2f64.powf(j as f64 * dim.n_eff()).max(1.0)
}

pub const DEFAULT_LOW_TOL: f64 = 1e-10;

fn dphi_of(phase: &dyn Phase, r: f64) -> Result<f64> {
    phase.dphi(r).ok_or_else(|| {
        Error::domain(format!(
            "phase '{}' must supply phi' for oscillatory quadrature",
            phase.name()
        ))
    })
}

/// II_j(s): the dyadic band kernel.
pub fn kernel_band(
    phase: &dyn Phase,
    dim: EffectiveDimension,
    t: f64,
    j: i32,
    s: f64,
    tol: f64,
) -> Result<KernelPoint> {
    if !(tol > 0.0) {
        return Err(Error::domain("kernel tolerance must be positive"));
    }
    if !(s >= 0.0) || !s.is_finite() || !t.is_finite() {
        return Err(Error::domain(format!("kernel_band needs finite t, s >= 0 (t={t}, s={s})")));
    }
    dphi_of(phase, 1.0)?;

    let n_eff = dim.n_eff();
    let nu = dim.bessel_nu();
    let tw = 2f64.powi(j);
    let prefactor = 2f64.powf(j as f64 * n_eff) / gamma(n_eff / 2.0);

    let integrand = |r: f64| -> Complex64 {
        let amp = ring(r) * kernel_unchecked(nu, r * s) * r.powf(n_eff - 1.0);
        Complex64::from_polar(amp, t * phase.phi(tw * r))
    };
    let local_freq = |r: f64| t.abs() * tw * phase.dphi(tw * r).unwrap_or(0.0).abs() + s;

    let out = oscillatory_integral_seeded(
        integrand,
        &[0.5, 2.0],
        local_freq,
        tol / prefactor,
        OscSettings::default(),
        &format!("II_j({s}) phase={} t={t} j={j}", phase.name()),
    )
    .map_err(|e| scale_accuracy(e, prefactor))?;

    Ok(KernelPoint {
        value: prefactor * out.value,
        err_est: prefactor * out.err_est,
        panels: out.panels,
    })
}

/// Low-frequency kernel: the cutoff R replaces the ring, support [0, 1],
/// prefactor 1/Gamma(N/2).
pub fn kernel_low(
    phase: &dyn Phase,
    dim: EffectiveDimension,
    t: f64,
    s: f64,
    tol: f64,
) -> Result<KernelPoint> {
    if !(tol > 0.0) {
        return Err(Error::domain("kernel tolerance must be positive"));
    }
    if !(s >= 0.0) || !s.is_finite() || !t.is_finite() {
        return Err(Error::domain(format!("kernel_low needs finite t, s >= 0 (t={t}, s={s})")));
    }
    dphi_of(phase, 1.0)?;

    let n_eff = dim.n_eff();
    let nu = dim.bessel_nu();
    let prefactor = 1.0 / gamma(n_eff / 2.0);

    let integrand = |r: f64| -> Complex64 {
        if r == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let amp = cutoff(r) * kernel_unchecked(nu, r * s) * r.powf(n_eff - 1.0);
        Complex64::from_polar(amp, t * phase.phi(r))
    };
    let local_freq = |r: f64| {
        if r == 0.0 {
            s
        } else {
            t.abs() * phase.dphi(r).unwrap_or(0.0).abs() + s
        }
    };

    // geometric grading toward r = 0 keeps fractional r^{N-1} accurate
    let mut seeds = vec![0.0];
    let mut e = 0.125 * 0.25f64.powi(10);
    while e < 0.125 {
        seeds.push(e);
        e *= 4.0;
    }
    for k in 1..=8 {
        seeds.push(k as f64 / 8.0);
    }

    let out = oscillatory_integral_seeded(
        integrand,
        &seeds,
        local_freq,
        tol / prefactor,
        OscSettings::default(),
        &format!("S0 kernel phase={} t={t} s={s}", phase.name()),
    )
    .map_err(|e| scale_accuracy(e, prefactor))?;

    Ok(KernelPoint {
        value: prefactor * out.value,
        err_est: prefactor * out.err_est,
        panels: out.panels,
    })
}

fn scale_accuracy(e: Error, prefactor: f64) -> Error {
    match e {
        Error::Accuracy {
            estimate,
            tolerance,
            context,
        } => Error::Accuracy {
            estimate: estimate * prefactor,
            tolerance: tolerance * prefactor,
            context,
        },
        other => other,
    }
}

// ---- sweep machinery -------------------------------------------------------

/// One row of a kernel sweep; `j = None` marks the low-frequency kernel.
#[derive(Debug, Clone, Copy)]
pub struct SweepSample {
    pub t: f64,
    pub j: Option<i32>,
    pub s: f64,
    pub value: Complex64,
    pub err_est: f64,
    pub panels: usize,
}

/// Kernel evaluations over (t, j, s) grids for one phase and dimension.
#[derive(Debug, Clone)]
pub struct KernelSweep {
    pub phase_name: String,
    pub n_eff: f64,
    pub samples: Vec<SweepSample>,
}

impl KernelSweep {
    /// sup of |value| over all samples.
    pub fn sup_abs(&self) -> f64 {
        self.samples.iter().map(|s| s.value.norm()).fold(0.0, f64::max)
    }

    /// Largest panel count spent on a single sample.
    pub fn max_panels(&self) -> usize {
        self.samples.iter().map(|s| s.panels).max().unwrap_or(0)
    }

    /// CSV with header `phase,N,t,j,s,re,im,abs,err_est`.
    pub fn export_csv(&self, path: &Path) -> Result<()> {
        let mut out = String::from("# schema=1\nphase,N,t,j,s,re,im,abs,err_est\n");
        for r in &self.samples {
            let j = r.j.map_or("S0".to_string(), |j| j.to_string());
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                self.phase_name,
                self.n_eff,
                r.t,
                j,
                r.s,
                r.value.re,
                r.value.im,
                r.value.norm(),
                r.err_est
            ));
        }
        std::fs::write(path, out)?;
        Ok(())
    }
}

/// The s-grid a band sweep samples: a fixed window [0, 10], a log-spaced
/// window around the stationary set s ~ |t| 2^j phi'(2^j r), and a linear
/// refinement around its center so nearly-linear phases (wave) cannot slip
/// their sharp peak between log-spaced points.
pub fn band_s_grid(phase: &dyn Phase, t: f64, j: i32) -> Vec<f64> {
    let tw = 2f64.powi(j);
    let mut d_lo = f64::INFINITY;
    let mut d_hi = 0.0f64;
    for i in 0..=48 {
        let r = 0.5 + 1.5 * i as f64 / 48.0;
        if let Some(d) = phase.dphi(tw * r) {
            let d = d.abs() * tw;
            d_lo = d_lo.min(d);
            d_hi = d_hi.max(d);
        }
    }
    let mut pts: Vec<f64> = (0..100).map(|i| 10.0 * i as f64 / 99.0).collect();
    let s_lo = 0.5 * t.abs() * d_lo;
    let s_hi = 2.0 * t.abs() * d_hi;
    if s_hi > 10.0 {
        let lo = s_lo.max(10.0);
        for i in 0..300 {
            pts.push(lo * (s_hi / lo).powf(i as f64 / 299.0));
        }
    }
    if let Some(d) = phase.dphi(tw) {
        let s_c = t.abs() * tw * d.abs();
        if s_c > 0.0 {
            let lo = (s_c - 25.0).max(0.0);
            for i in 0..=200 {
                pts.push(lo + (s_c + 25.0 - lo) * i as f64 / 200.0);
            }
        }
    }
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    pts
}

/// The s-grid for low-frequency sweeps: [0, 10], a log window up to twice
/// the largest stationary frequency, and a linear refinement around the
/// upper stationary edge s = |t| phi'(1) where phases with constant phi'
/// (wave) concentrate a sharp peak.
pub fn low_s_grid(phase: &dyn Phase, t: f64) -> Vec<f64> {
    let mut d_hi = 0.0f64;
    for i in 1..=64 {
        let r = i as f64 / 64.0;
        if let Some(d) = phase.dphi(r) {
            d_hi = d_hi.max(d.abs());
        }
    }
    let mut pts: Vec<f64> = (0..100).map(|i| 10.0 * i as f64 / 99.0).collect();
    let s_hi = 2.0 * t.abs() * d_hi;
    if s_hi > 10.0 {
        for i in 0..300 {
            pts.push(10.0 * (s_hi / 10.0).powf(i as f64 / 299.0));
        }
    }
    if let Some(d) = phase.dphi(1.0) {
        let s_c = t.abs() * d.abs();
        if s_c > 0.0 {
            let lo = (s_c - 25.0).max(0.0);
            for i in 0..=200 {
                pts.push(lo + (s_c + 25.0 - lo) * i as f64 / 200.0);
            }
        }
    }
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    pts
}

/// Evaluate II_j over the adapted s-grid; parallel over s, deterministic
/// sample order.
pub fn sweep_band(
    phase: &dyn Phase,
    dim: EffectiveDimension,
    t: f64,
    j: i32,
    tol: f64,
) -> Result<KernelSweep> {
    let grid = band_s_grid(phase, t, j);
    let samples: Result<Vec<SweepSample>> = grid
        .par_iter()
        .map(|&s| {
            kernel_band(phase, dim, t, j, s, tol).map(|p| SweepSample {
                t,
                j: Some(j),
                s,
                value: p.value,
                err_est: p.err_est,
                panels: p.panels,
            })
        })
        .collect();
    Ok(KernelSweep {
        phase_name: phase.name().to_string(),
        n_eff: dim.n_eff(),
        samples: samples?,
    })
}

/// Evaluate the low-frequency kernel over its s-grid.
pub fn sweep_low(
    phase: &dyn Phase,
    dim: EffectiveDimension,
    t: f64,
    tol: f64,
) -> Result<KernelSweep> {
    let grid = low_s_grid(phase, t);
    let samples: Result<Vec<SweepSample>> = grid
        .par_iter()
        .map(|&s| {
            kernel_low(phase, dim, t, s, tol).map(|p| SweepSample {
                t,
                j: None,
                s,
                value: p.value,
                err_est: p.err_est,
                panels: p.panels,
            })
        })
        .collect();
    Ok(KernelSweep {
        phase_name: phase.name().to_string(),
        n_eff: dim.n_eff(),
        samples: samples?,
    })
}

// ---- propagator application -------------------------------------------------

/// e^{it phi(sqrt(-Delta_kappa))} applied to a physical-space profile.
pub fn evolve(
    transform: &Transform,
    phase: &dyn Phase,
    t: f64,
    u0: &RadialProfile,
) -> Result<RadialProfile> {
    transform.apply_multiplier(u0, |s| Complex64::from_polar(1.0, t * phase.phi(s)))
}

/// Propagator restricted to the dyadic band j.
pub fn evolve_band(
    transform: &Transform,
    phase: &dyn Phase,
    t: f64,
    j: i32,
    u0: &RadialProfile,
) -> Result<RadialProfile> {
    transform.apply_multiplier(u0, |s| {
        Complex64::from_polar(ring_dyadic(j, s), t * phase.phi(s))
    })
}

/// Cheap shared handle used by sweep drivers.
pub type PhaseRef = Arc<dyn Phase>;
