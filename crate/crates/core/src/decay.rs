//! Decay-exponent fits against the theory's predictions, plus discrete Besov
//! and Strichartz norms.
//!
//! Sweeps produce sup_s |kernel| per time; `fit_decay` turns those into a
//! log-log least-squares exponent; `predicted_exponent` carries the
//! regime-ceiling exponents selected by each phase's classification
//! constants; `verify_proposition` runs both time regimes for one equation
//! and reports structured pass/fail.

use std::fmt::Write as _;
use std::path::Path;

use crate::bump::Band;
use crate::error::{Error, Result};
use crate::grid::{EffectiveDimension, RadialProfile};
use crate::kernel::{default_band_tol, sweep_band, sweep_low, DEFAULT_LOW_TOL};
use crate::phase::Phase;
use crate::transform::{weighted_lp_norm, Transform};

/// Result of a log-log least-squares fit of M(t) ~ C t^{-theta}.
#[derive(Debug, Clone, Copy)]
pub struct DecayFit {
    pub theta_hat: f64,
    pub intercept: f64,
    /// RMS of log-residuals.
    pub residual: f64,
    pub t_range: (f64, f64),
}

/// Fit -slope of log M against log t. Needs at least 4 strictly increasing
/// times and positive magnitudes.
pub fn fit_decay(samples: &[(f64, f64)]) -> Result<DecayFit> {
    if samples.len() < 4 {
        return Err(Error::domain(format!(
            "decay fit needs >= 4 samples, got {}",
            samples.len()
        )));
    }
    for w in samples.windows(2) {
        if !(w[1].0 > w[0].0) {
            return Err(Error::domain("decay fit needs strictly increasing t"));
        }
    }
    if samples.iter().any(|&(t, m)| !(t > 0.0) || !(m > 0.0)) {
        return Err(Error::domain("decay fit needs t > 0 and M > 0"));
    }

    let n = samples.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(t, m) in samples {
        let (x, y) = (t.ln(), m.ln());
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    let mut rss = 0.0;
    for &(t, m) in samples {
        let e = m.ln() - (slope * t.ln() + intercept);
        rss += e * e;
    }
    Ok(DecayFit {
        theta_hat: -slope,
        intercept,
        residual: (rss / n).sqrt(),
        t_range: (samples[0].0, samples[samples.len() - 1].0),
    })
}

/// Which kernel object and frequency regime a prediction refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Fixed dyadic band, j >= 0.
    HighFreqBand,
    /// Fixed dyadic band, j < 0.
    LowFreqBand,
    /// Summed low-frequency kernel (the S_0 piece).
    LowFreqSum,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::HighFreqBand => "high-band",
            Regime::LowFreqBand => "low-band",
            Regime::LowFreqSum => "low-sum",
        }
    }
}

/// The regime-ceiling decay exponent selected by the phase's conditions.
///
/// A band with curvature (alpha present) reaches (N-1+theta)/2 at theta = 1,
/// i.e. N/2; without curvature the ceiling is (N-1)/2. The summed
/// low-frequency kernel reaches min(N/m2, N/2) when the curvature constant
/// matches m2, else min(N/m2, (N-1)/2).
pub fn predicted_exponent(
    phase: &dyn Phase,
    dim: EffectiveDimension,
    regime: Regime,
) -> Result<f64> {
    let n = dim.n_eff();
    if !(n > 1.0) {
        return Err(Error::domain("predictions need effective dimension N > 1"));
    }
    let c = phase.constants();
    let ceiling = |has_curvature: bool| {
        if has_curvature {
            n / 2.0
        } else {
            (n - 1.0) / 2.0
        }
    };
    match regime {
        Regime::HighFreqBand => Ok(ceiling(c.alpha1.is_some())),
        Regime::LowFreqBand => Ok(ceiling(c.alpha2.is_some())),
        Regime::LowFreqSum => {
            if !(c.m2 > 0.0) {
                return Err(Error::domain("low-frequency sum needs m2 > 0"));
            }
            let with_c4 = matches!(c.alpha2, Some(a2) if (a2 - c.m2).abs() < 1e-12);
            if with_c4 {
                Ok((n / c.m2).min(n / 2.0))
            } else {
                Ok((n / c.m2).min((n - 1.0) / 2.0))
            }
        }
    }
}

/// Default large-time fit window: 9 log-uniform points on [10^1.75, 10^3.25].
/// The first decade past t = 10 still carries pre-asymptotic transients that
/// bias the fitted exponent high, so the window sits one notch later.
pub fn default_large_t_grid() -> Vec<f64> {
    log_grid(10f64.powf(1.75), 10f64.powf(3.25), 9)
}

/// Default small-time window: 9 log-uniform points on [1e-3, 0.3].
pub fn default_small_t_grid() -> Vec<f64> {
    log_grid(1e-3, 0.3, 9)
}

pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| lo * (hi / lo).powf(i as f64 / (count - 1) as f64))
        .collect()
}

/// sup_s |kernel| per time over the regime's kernel object, then fit.
pub fn sweep_and_fit(
    phase: &dyn Phase,
    dim: EffectiveDimension,
    regime: Regime,
    j: i32,
    t_grid: &[f64],
) -> Result<DecayFit> {
    let mut points = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let sup = match regime {
            Regime::HighFreqBand | Regime::LowFreqBand => {
                sweep_band(phase, dim, t, j, default_band_tol(dim, j))?.sup_abs()
            }
            Regime::LowFreqSum => sweep_low(phase, dim, t, DEFAULT_LOW_TOL)?.sup_abs(),
        };
        points.push((t, sup));
    }
    fit_decay(&points)
}

// ---- proposition verification ------------------------------------------------

/// Named dispersive-decay statements of the concrete equations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Proposition {
    WaveDecay,
    FractionalDecay,
    FourthOrderDecay,
    KgDecay,
    BeamDecay,
}

#[derive(Debug, Clone)]
pub struct RegimeReport {
    pub regime: Regime,
    pub time_window: &'static str,
    pub theta_pred: f64,
    pub fit: DecayFit,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct PropositionReport {
    pub phase_name: String,
    pub n_eff: f64,
    pub regimes: Vec<RegimeReport>,
}

impl PropositionReport {
    pub fn pass(&self) -> bool {
        self.regimes.iter().all(|r| r.pass)
    }

    /// CSV rows `phase,N,regime,theta_pred,theta_fit,residual,pass`.
    pub fn export_csv(&self, path: &Path) -> Result<()> {
        let mut out = String::from("# schema=1\nphase,N,regime,theta_pred,theta_fit,residual,pass\n");
        for r in &self.regimes {
            out.push_str(&format!(
                "{},{},{}-{},{},{},{},{}\n",
                self.phase_name,
                self.n_eff,
                r.regime.name(),
                r.time_window,
                r.theta_pred,
                r.fit.theta_hat,
                r.fit.residual,
                r.pass
            ));
        }
        std::fs::write(path, out)?;
        Ok(())
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "decay verification: phase={} N={}",
            self.phase_name, self.n_eff
        );
        for r in &self.regimes {
            let _ = writeln!(
                s,
                "  [{}] {:9} {:8}: theta_pred={:7.4} theta_fit={:7.4} residual={:.4} (tol {:.2})",
                if r.pass { "PASS" } else { "FAIL" },
                r.regime.name(),
                r.time_window,
                r.theta_pred,
                r.fit.theta_hat,
                r.fit.residual,
                r.tolerance
            );
        }
        s
    }
}

/// Run the large-time and small-time sweeps for one proposition and compare
/// fitted exponents against the predictions.
///
/// Large time: the dyadic band at j = 0 is checked against the band ceiling
/// and the summed low-frequency kernel against the min-formula; the
/// proposition-level decay is the worse of the two, so both must land.
/// Small time: kernels stay bounded, the fitted exponent must sit near 0.
pub fn verify_proposition(
    phase: &dyn Phase,
    dim: EffectiveDimension,
    proposition: Proposition,
    tolerance: f64,
) -> Result<PropositionReport> {
    let expected = match proposition {
        Proposition::WaveDecay => "wave",
        Proposition::FractionalDecay => "schrodinger/fractional",
        Proposition::FourthOrderDecay => "fourth-order",
        Proposition::KgDecay => "klein-gordon",
        Proposition::BeamDecay => "beam",
    };
    if !phase_matches(proposition, phase.name()) {
        return Err(Error::domain(format!(
            "proposition expects a {expected} phase, got '{}'",
            phase.name()
        )));
    }

    let large = default_large_t_grid();
    let small = default_small_t_grid();
    let mut regimes = Vec::new();

    for (regime, pred) in [
        (
            Regime::HighFreqBand,
            predicted_exponent(phase, dim, Regime::HighFreqBand)?,
        ),
        (
            Regime::LowFreqSum,
            predicted_exponent(phase, dim, Regime::LowFreqSum)?,
        ),
    ] {
        let fit = sweep_and_fit(phase, dim, regime, 0, &large)?;
        regimes.push(RegimeReport {
            regime,
            time_window: "large-t",
            theta_pred: pred,
            pass: (fit.theta_hat - pred).abs() <= tolerance,
            fit,
            tolerance,
        });
    }

    // |t| <= 1: bounded kernels, exponent ~ 0 on the band at j = 0
    let fit = sweep_and_fit(phase, dim, Regime::HighFreqBand, 0, &small)?;
    regimes.push(RegimeReport {
        regime: Regime::HighFreqBand,
        time_window: "small-t",
        theta_pred: 0.0,
        pass: fit.theta_hat.abs() <= 0.1,
        fit,
        tolerance: 0.1,
    });

    Ok(PropositionReport {
        phase_name: phase.name().to_string(),
        n_eff: dim.n_eff(),
        regimes,
    })
}

fn phase_matches(p: Proposition, name: &str) -> bool {
    match p {
        Proposition::WaveDecay => name == "wave",
        Proposition::FractionalDecay => {
            name == "schrodinger" || name.starts_with("fractional:")
        }
        Proposition::FourthOrderDecay => name == "fourth-order",
        Proposition::KgDecay => name == "klein-gordon",
        Proposition::BeamDecay => name == "beam",
    }
}

// ---- Besov and Strichartz norms ----------------------------------------------

/// Parameters of the dyadic Besov norm.
#[derive(Debug, Clone, Copy)]
pub struct BesovParams {
    /// Regularity weight 2^{js}.
    pub s: f64,
    /// Spatial integrability, p in [2, inf].
    pub p: f64,
    /// Dyadic summability, q in [1, inf].
    pub q: f64,
    /// Truncation depth of the dyadic sum.
    pub j_max: i32,
}

impl BesovParams {
    pub fn new(s: f64, p: f64, q: f64, j_max: i32) -> Result<Self> {
        if !(p >= 2.0) || !(q >= 1.0) || j_max < 0 || s.is_nan() {
            return Err(Error::domain(format!(
                "Besov parameters out of range: s={s}, p={p}, q={q}, j_max={j_max}"
            )));
        }
        Ok(BesovParams { s, p, q, j_max })
    }

    /// Default dyadic truncation depth 12; the tail check flags profiles
    /// whose last band still carries mass.
    pub fn with_default_truncation(s: f64, p: f64, q: f64) -> Result<Self> {
        Self::new(s, p, q, 12)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BesovNorm {
    pub value: f64,
    /// Relative size of the last dyadic term, recorded when it exceeds the
    /// 1e-8 truncation budget.
    pub truncation: Option<f64>,
}

/// ||S_0 u||_p + ( sum_j 2^{jsq} ||Delta_j u||_p^q )^{1/q}; q = inf takes the
/// sup over bands.
///
/// p = 2 band norms are taken on the frequency side (equal by Plancherel and
/// immune to the physical box truncating a band-limited tail); other p go
/// through the projected physical profile.
pub fn besov_norm(
    transform: &Transform,
    u: &RadialProfile,
    bp: BesovParams,
) -> Result<BesovNorm> {
    let hat = transform.forward(u)?;
    let grid = transform.grid();
    let band_lp = |band: Band| -> Result<f64> {
        let m = band.multiplier();
        let mut clipped = hat.clone();
        for (s, v) in grid.nodes().iter().zip(clipped.values_mut()) {
            *v *= m(*s);
        }
        if bp.p == 2.0 {
            weighted_lp_norm(&clipped, 2.0)
        } else {
            weighted_lp_norm(&transform.inverse(&clipped)?, bp.p)
        }
    };
    let low_norm = band_lp(Band::Low)?;

    let mut acc: f64 = 0.0;
    let mut sup: f64 = 0.0;
    let mut last_term = 0.0;
    for j in 0..=bp.j_max {
        let norm = band_lp(Band::Dyadic(j))?;
        let weighted = 2f64.powf(j as f64 * bp.s) * norm;
        last_term = weighted;
        if bp.q.is_infinite() {
            sup = sup.max(weighted);
        } else {
            acc += weighted.powf(bp.q);
        }
    }
    let dyadic = if bp.q.is_infinite() {
        sup
    } else {
        acc.powf(1.0 / bp.q)
    };
    let value = low_norm + dyadic;
    let truncation = if value > 0.0 && last_term / value > 1e-8 {
        Some(last_term / value)
    } else {
        None
    };
    Ok(BesovNorm { value, truncation })
}

/// Spatial norm selector for trajectory norms.
#[derive(Debug, Clone, Copy)]
pub enum SpatialNorm {
    Lebesgue(f64),
    Besov(BesovParams),
}

/// Discrete space-time norm ( int ||u(t)||^{r_t} dt )^{1/r_t} over a uniform
/// time grid, trapezoidal in time; r_t = inf takes the max.
pub fn strichartz_norm(
    transform: &Transform,
    times: &[f64],
    trajectory: &[RadialProfile],
    r_t: f64,
    spatial: SpatialNorm,
) -> Result<f64> {
    if times.len() != trajectory.len() || times.is_empty() {
        return Err(Error::domain("trajectory and time grid must match"));
    }
    if !(r_t >= 1.0) {
        return Err(Error::domain("time exponent must satisfy r_t >= 1"));
    }
    let mut spatial_norms = Vec::with_capacity(times.len());
    for u in trajectory {
        let n = match spatial {
            SpatialNorm::Lebesgue(p) => weighted_lp_norm(u, p)?,
            SpatialNorm::Besov(bp) => besov_norm(transform, u, bp)?.value,
        };
        spatial_norms.push(n);
    }
    if r_t.is_infinite() {
        return Ok(spatial_norms.iter().cloned().fold(0.0, f64::max));
    }
    if times.len() == 1 {
        // single snapshot: measure dt^{1/r_t} with unit weight
        return Ok(spatial_norms[0]);
    }
    let mut acc = 0.0;
    for k in 0..times.len() {
        let dt = if k == 0 {
            0.5 * (times[1] - times[0])
        } else if k == times.len() - 1 {
            0.5 * (times[k] - times[k - 1])
        } else {
            0.5 * (times[k + 1] - times[k - 1])
        };
        acc += dt * spatial_norms[k].powf(r_t);
    }
    Ok(acc.powf(1.0 / r_t))
}

/// Advisory Strichartz admissibility check 2/r + N/p <= N/2 for the
/// Schrodinger-scale pairs; returns a warning string instead of refusing.
pub fn admissibility_warning(
    dim: EffectiveDimension,
    r_t: f64,
    p: f64,
) -> Option<String> {
    let n = dim.n_eff();
    let lhs = 2.0 / r_t + n / p;
    if lhs > n / 2.0 + 1e-12 {
        Some(format!(
            "pair (r={r_t}, p={p}) is not admissible at N={n}: 2/r + N/p = {lhs:.4} > N/2 = {:.4}",
            n / 2.0
        ))
    } else {
        None
    }
}

/// Direct multiplier-side Sobolev norm ||(1+s^2)^{s/2} F u||_2, the
/// comparison partner of besov_norm(s, 2, 2).
pub fn sobolev_norm(transform: &Transform, u: &RadialProfile, s_reg: f64) -> Result<f64> {
    let hat = transform.forward(u)?;
    let grid = hat.grid();
    let mut acc = 0.0;
    for ((node, w), v) in grid
        .nodes()
        .iter()
        .zip(grid.weights())
        .zip(hat.values())
    {
        acc += w * (1.0 + node * node).powf(s_reg) * v.norm_sqr();
    }
    Ok((grid.sigma() * acc).sqrt())
}

/// Frame band for the fixed bump: at any frequency at most two of
/// {R, psi_j} are nonzero and they sum to 1, so the l2 aggregate of the
/// pieces sits within [1/sqrt(2), 1] of the total; folding the outer sum
/// into the two-term norm gives the [1/sqrt(3), sqrt(3)] comparison band
/// asserted by the tests.
pub fn frame_band() -> (f64, f64) {
    (1.0 / 3f64.sqrt(), 3f64.sqrt())
}
