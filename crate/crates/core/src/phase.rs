//! The dispersive phase catalog behind a common trait.
//!
//! Each propagator e^{it phi(sqrt(-Delta_kappa))} is specified by its radial
//! phase function phi together with growth/curvature classification
//! constants: (m1, alpha1) describe |phi'| ~ r^{m1-1} and |phi''| ~
//! r^{alpha1-2} at high frequency r >= 1, (m2, alpha2) the same at low
//! frequency 0 < r < 1. A curvature constant is absent when phi'' vanishes
//! identically (plane-wave case), which switches the predicted decay regime.
//!
//! Variants are registered by name and resolved at runtime, so the CLI and
//! sweep drivers stay agnostic of the concrete phase.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Growth/curvature classification of a phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseConstants {
    /// |phi'(r)| ~ r^{m1 - 1} for r >= 1.
    pub m1: f64,
    /// |phi'(r)| ~ r^{m2 - 1} for 0 < r < 1.
    pub m2: f64,
    /// |phi''(r)| ~ r^{alpha1 - 2} for r >= 1; `None` when phi'' vanishes.
    pub alpha1: Option<f64>,
    /// |phi''(r)| ~ r^{alpha2 - 2} for 0 < r < 1; `None` when phi'' vanishes.
    pub alpha2: Option<f64>,
}

/// A dispersive phase: phi and its first two radial derivatives.
pub trait Phase: Send + Sync {
    fn name(&self) -> &str;
    fn phi(&self, r: f64) -> f64;
    fn dphi(&self, r: f64) -> Option<f64>;
    fn d2phi(&self, r: f64) -> Option<f64>;
    fn constants(&self) -> PhaseConstants;
}

impl fmt::Debug for dyn Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Phase({})", self.name())
    }
}

/// phi, phi' or phi'' at r > 0.
pub fn phase_eval(phase: &dyn Phase, r: f64, derivative: u8) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::domain(format!(
            "phase evaluation needs r > 0, got {r}"
        )));
    }
    match derivative {
        0 => Ok(phase.phi(r)),
        1 => phase.dphi(r).ok_or_else(|| {
            Error::domain(format!("phase '{}' has no first derivative", phase.name()))
        }),
        2 => phase.d2phi(r).ok_or_else(|| {
            Error::domain(format!(
                "phase '{}' has no second derivative",
                phase.name()
            ))
        }),
        d => Err(Error::domain(format!(
            "derivative order must be 0, 1 or 2, got {d}"
        ))),
    }
}

// ---- catalog ---------------------------------------------------------------

/// phi(r) = r. Wave propagator; phi'' vanishes, so only the first-derivative
/// conditions hold (m1 = m2 = 1).
pub struct Wave;

impl Phase for Wave {
    fn name(&self) -> &str {
        "wave"
    }
    fn phi(&self, r: f64) -> f64 {
        r
    }
    fn dphi(&self, _r: f64) -> Option<f64> {
        Some(1.0)
    }
    fn d2phi(&self, _r: f64) -> Option<f64> {
        Some(0.0)
    }
    fn constants(&self) -> PhaseConstants {
        PhaseConstants {
            m1: 1.0,
            m2: 1.0,
            alpha1: None,
            alpha2: None,
        }
    }
}

/// phi(r) = r^mu with 0 < mu <= 2, mu != 1. All four conditions hold with
/// m1 = alpha1 = m2 = alpha2 = mu; mu = 2 is the Schrodinger propagator.
pub struct FractionalSchrodinger {
    mu: f64,
    name: String,
}

impl FractionalSchrodinger {
    pub fn new(mu: f64) -> Result<Self> {
        if !(mu > 0.0 && mu <= 2.0) || (mu - 1.0).abs() < 1e-12 {
            return Err(Error::domain(format!(
                "fractional exponent must lie in (0, 2], mu != 1, got {mu}"
            )));
        }
        let name = if mu == 2.0 {
            "schrodinger".to_string()
        } else {
            format!("fractional:{mu}")
        };
        Ok(FractionalSchrodinger { mu, name })
    }

    pub fn schrodinger() -> Self {
        FractionalSchrodinger::new(2.0).unwrap()
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }
}

impl Phase for FractionalSchrodinger {
    fn name(&self) -> &str {
        &self.name
    }
    fn phi(&self, r: f64) -> f64 {
        r.powf(self.mu)
    }
    fn dphi(&self, r: f64) -> Option<f64> {
        Some(self.mu * r.powf(self.mu - 1.0))
    }
    fn d2phi(&self, r: f64) -> Option<f64> {
        Some(self.mu * (self.mu - 1.0) * r.powf(self.mu - 2.0))
    }
    fn constants(&self) -> PhaseConstants {
        PhaseConstants {
            m1: self.mu,
            m2: self.mu,
            alpha1: Some(self.mu),
            alpha2: Some(self.mu),
        }
    }
}

/// phi(r) = r^4 + r^2: fourth-order Schrodinger. m1 = alpha1 = 4,
/// m2 = alpha2 = 2.
pub struct FourthOrder;

impl Phase for FourthOrder {
    fn name(&self) -> &str {
        "fourth-order"
    }
    fn phi(&self, r: f64) -> f64 {
        r * r * (r * r + 1.0)
    }
    fn dphi(&self, r: f64) -> Option<f64> {
        Some(4.0 * r * r * r + 2.0 * r)
    }
    fn d2phi(&self, r: f64) -> Option<f64> {
        Some(12.0 * r * r + 2.0)
    }
    fn constants(&self) -> PhaseConstants {
        PhaseConstants {
            m1: 4.0,
            m2: 2.0,
            alpha1: Some(4.0),
            alpha2: Some(2.0),
        }
    }
}

/// phi(r) = sqrt(1 + r^2): Klein-Gordon. m1 = 1, alpha1 = -1, m2 = alpha2 = 2.
pub struct KleinGordon;

impl Phase for KleinGordon {
    fn name(&self) -> &str {
        "klein-gordon"
    }
    fn phi(&self, r: f64) -> f64 {
        (1.0 + r * r).sqrt()
    }
    fn dphi(&self, r: f64) -> Option<f64> {
        Some(r / (1.0 + r * r).sqrt())
    }
    fn d2phi(&self, r: f64) -> Option<f64> {
        Some((1.0 + r * r).powf(-1.5))
    }
    fn constants(&self) -> PhaseConstants {
        PhaseConstants {
            m1: 1.0,
            m2: 2.0,
            alpha1: Some(-1.0),
            alpha2: Some(2.0),
        }
    }
}

/// phi(r) = sqrt(1 + r^4): beam. m1 = alpha1 = 2, m2 = alpha2 = 4.
pub struct Beam;

impl Phase for Beam {
    fn name(&self) -> &str {
        "beam"
    }
    fn phi(&self, r: f64) -> f64 {
        (1.0 + r.powi(4)).sqrt()
    }
    fn dphi(&self, r: f64) -> Option<f64> {
        Some(2.0 * r.powi(3) / (1.0 + r.powi(4)).sqrt())
    }
    fn d2phi(&self, r: f64) -> Option<f64> {
        Some((6.0 * r * r + 2.0 * r.powi(6)) * (1.0 + r.powi(4)).powf(-1.5))
    }
    fn constants(&self) -> PhaseConstants {
        PhaseConstants {
            m1: 2.0,
            m2: 4.0,
            alpha1: Some(2.0),
            alpha2: Some(4.0),
        }
    }
}

/// User-supplied phase. The caller provides whatever derivatives it has and
/// its own classification constants; nothing is verified symbolically.
pub struct Custom {
    pub name: String,
    pub phi: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub dphi: Option<Arc<dyn Fn(f64) -> f64 + Send + Sync>>,
    pub d2phi: Option<Arc<dyn Fn(f64) -> f64 + Send + Sync>>,
    pub constants: PhaseConstants,
}

impl Phase for Custom {
    fn name(&self) -> &str {
        &self.name
    }
    fn phi(&self, r: f64) -> f64 {
        (self.phi)(r)
    }
    fn dphi(&self, r: f64) -> Option<f64> {
        self.dphi.as_ref().map(|f| f(r))
    }
    fn d2phi(&self, r: f64) -> Option<f64> {
        self.d2phi.as_ref().map(|f| f(r))
    }
    fn constants(&self) -> PhaseConstants {
        self.constants
    }
}

// ---- registry --------------------------------------------------------------

/// Catalog names accepted by `resolve`.
pub fn catalog_names() -> &'static [&'static str] {
    &[
        "wave",
        "schrodinger",
        "fractional:<mu>",
        "fourth-order",
        "klein-gordon",
        "beam",
    ]
}

/// Resolve a phase by name. `fractional:<mu>` carries its exponent inline;
/// `kg` is accepted for `klein-gordon`.
pub fn resolve(name: &str) -> Result<Arc<dyn Phase>> {
    let key = name.trim().to_ascii_lowercase();
    match key.as_str() {
        "wave" => Ok(Arc::new(Wave)),
        "schrodinger" => Ok(Arc::new(FractionalSchrodinger::schrodinger())),
        "fourth-order" | "fourth_order" | "fourthorder" => Ok(Arc::new(FourthOrder)),
        "klein-gordon" | "klein_gordon" | "kleingordon" | "kg" => Ok(Arc::new(KleinGordon)),
        "beam" => Ok(Arc::new(Beam)),
        _ => {
            if let Some(mu) = key.strip_prefix("fractional:") {
                let mu: f64 = mu.parse().map_err(|_| {
                    Error::domain(format!("bad fractional exponent '{mu}'"))
                })?;
                return Ok(Arc::new(FractionalSchrodinger::new(mu)?));
            }
            Err(Error::UnknownPhase(
                name.to_string(),
                catalog_names().join(", "),
            ))
        }
    }
}

/// One representative of each catalog variant (fractional taken at mu = 1.5).
pub fn catalog() -> Vec<Arc<dyn Phase>> {
    vec![
        Arc::new(Wave),
        Arc::new(FractionalSchrodinger::schrodinger()),
        Arc::new(FractionalSchrodinger::new(1.5).unwrap()),
        Arc::new(FourthOrder),
        Arc::new(KleinGordon),
        Arc::new(Beam),
    ]
}
