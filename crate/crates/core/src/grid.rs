//! Radial quadrature grids and sampled radial profiles.
//!
//! Everything downstream integrates against the weighted measure r^{N-1} dr,
//! where N = 2*gamma + n is the effective dimension (possibly non-integer).
//! Grids are composite 16-point Gauss-Legendre panels on [0, r_max]; the
//! first panel is graded geometrically toward 0 so fractional powers r^{N-1}
//! keep full quadrature accuracy.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::gl16_nodes;

/// Effective dimension N = 2*gamma + n attached to an ambient dimension and a
/// total multiplicity gamma. The multiplicity function enters radial
/// computations only through gamma, so this is all the root-system data the
/// crate carries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveDimension {
    n: u32,
    gamma: f64,
}

impl EffectiveDimension {
    pub fn new(n: u32, gamma: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::domain("ambient dimension n must be >= 1"));
        }
        if !(gamma >= 0.0) || !gamma.is_finite() {
            return Err(Error::domain(format!(
                "multiplicity sum gamma must be finite and >= 0, got {gamma}"
            )));
        }
        Ok(EffectiveDimension { n, gamma })
    }

    /// Build from the effective dimension alone (n = 1, gamma = (N-1)/2).
    pub fn from_effective(n_eff: f64) -> Result<Self> {
        if !(n_eff >= 1.0) || !n_eff.is_finite() {
            return Err(Error::domain(format!(
                "effective dimension must be finite and >= 1, got {n_eff}"
            )));
        }
        Ok(EffectiveDimension {
            n: 1,
            gamma: (n_eff - 1.0) / 2.0,
        })
    }

    pub fn ambient(&self) -> u32 {
        self.n
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// N = 2*gamma + n.
    pub fn n_eff(&self) -> f64 {
        2.0 * self.gamma + self.n as f64
    }

    /// Bessel order of the radial transform kernel, (N-2)/2.
    pub fn bessel_nu(&self) -> f64 {
        (self.n_eff() - 2.0) / 2.0
    }
}

impl fmt::Display for EffectiveDimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N={}", self.n_eff())
    }
}

/// Which side of the transform a profile lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    Physical,
    Frequency,
}

impl Space {
    pub fn name(self) -> &'static str {
        match self {
            Space::Physical => "physical",
            Space::Frequency => "frequency",
        }
    }
}

/// Quadrature grid for integrals over [0, r_max] against r^{N-1} dr.
///
/// `weights` already contain the r^{N-1} factor, so plain dot products
/// against sampled values are weighted integrals.
#[derive(Debug)]
pub struct RadialGrid {
    dim: EffectiveDimension,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    r_max: f64,
    panels: usize,
    /// Angular constant of the weighted sphere measure; enters the norms only.
    sigma: f64,
}

impl RadialGrid {
    pub fn new(dim: EffectiveDimension, r_max: f64, panels: usize) -> Result<Arc<Self>> {
        Self::with_sigma(dim, r_max, panels, 1.0)
    }

    /// Grid with an explicit angular constant sigma_N (the weighted sphere
    /// integral, not computable without the root system; it scales norms
    /// only, never exponents).
    pub fn with_sigma(
        dim: EffectiveDimension,
        r_max: f64,
        panels: usize,
        sigma: f64,
    ) -> Result<Arc<Self>> {
        if !(r_max > 0.0) || panels == 0 || !(sigma > 0.0) {
            return Err(Error::domain(
                "grid needs r_max > 0, panels >= 1 and sigma > 0",
            ));
        }
        let n_eff = dim.n_eff();
        let mut edges = Vec::with_capacity(panels + 12);
        let first = r_max / panels as f64;
        // geometric grading of the first panel keeps r^{N-1} accurate for
        // non-integer N
        edges.push(0.0);
        let mut e = first * 0.25f64.powi(11);
        while e < first {
            edges.push(e);
            e *= 4.0;
        }
        for k in 1..=panels {
            edges.push(r_max * k as f64 / panels as f64);
        }

        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for w in edges.windows(2) {
            for (x, gw) in gl16_nodes(w[0], w[1]) {
                nodes.push(x);
                weights.push(gw * x.powf(n_eff - 1.0));
            }
        }

        let grid = RadialGrid {
            dim,
            nodes,
            weights,
            r_max,
            panels,
            sigma,
        };
        // constructor self-check: integral of 1 against r^{N-1} dr
        let total: f64 = grid.weights.iter().sum();
        let exact = r_max.powf(n_eff) / n_eff;
        if ((total - exact) / exact).abs() > 1e-10 {
            return Err(Error::domain(format!(
                "grid weight check failed: {total:.15e} vs {exact:.15e} for {dim}"
            )));
        }
        Ok(Arc::new(grid))
    }

    /// Default discretization: 48 panels of 16 nodes on [0, 30].
    pub fn standard(dim: EffectiveDimension) -> Result<Arc<Self>> {
        RadialGrid::new(dim, 30.0, 48)
    }

    pub fn dim(&self) -> EffectiveDimension {
        self.dim
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Weighted integral of complex samples on this grid.
    pub fn integrate(&self, values: &[Complex64]) -> Complex64 {
        debug_assert_eq!(values.len(), self.nodes.len());
        self.weights
            .iter()
            .zip(values)
            .map(|(w, v)| w * v)
            .sum()
    }
}

/// A radial function sampled on a grid, tagged with the space it lives in.
#[derive(Debug, Clone)]
pub struct RadialProfile {
    grid: Arc<RadialGrid>,
    values: Vec<Complex64>,
    space: Space,
    /// Tail-mass fraction recorded when a transform saw a profile whose
    /// last decade carried more than the truncation threshold.
    pub truncation: Option<f64>,
}

impl RadialProfile {
    pub fn from_fn<F: Fn(f64) -> Complex64>(
        grid: &Arc<RadialGrid>,
        space: Space,
        f: F,
    ) -> Result<Self> {
        let values: Vec<Complex64> = grid.nodes().iter().map(|&r| f(r)).collect();
        Self::from_values(grid, space, values)
    }

    pub fn from_real_fn<F: Fn(f64) -> f64>(
        grid: &Arc<RadialGrid>,
        space: Space,
        f: F,
    ) -> Result<Self> {
        Self::from_fn(grid, space, |r| Complex64::new(f(r), 0.0))
    }

    pub fn from_values(
        grid: &Arc<RadialGrid>,
        space: Space,
        values: Vec<Complex64>,
    ) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::domain(format!(
                "profile has {} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::domain("profile contains non-finite samples"));
        }
        Ok(RadialProfile {
            grid: grid.clone(),
            values,
            space,
            truncation: None,
        })
    }

    pub fn zeros(grid: &Arc<RadialGrid>, space: Space) -> Self {
        RadialProfile {
            grid: grid.clone(),
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
            space,
            truncation: None,
        }
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// a*self + b*other, same grid and space required.
    pub fn linear_combination(&self, a: Complex64, other: &Self, b: Complex64) -> Result<Self> {
        if !Arc::ptr_eq(&self.grid, &other.grid) || self.space != other.space {
            return Err(Error::domain(
                "linear combination needs matching grid and space",
            ));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Self::from_values(&self.grid, self.space, values)
    }

    pub fn scale(&self, a: Complex64) -> Self {
        let mut out = self.clone();
        for v in &mut out.values {
            *v *= a;
        }
        out
    }

    /// Relative weighted-L2 distance to another profile on the same grid.
    pub fn relative_l2_distance(&self, other: &Self) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for ((w, x), y) in self
            .grid
            .weights()
            .iter()
            .zip(&self.values)
            .zip(&other.values)
        {
            num += w * (x - y).norm_sqr();
            den += w * y.norm_sqr();
        }
        if den == 0.0 {
            num.sqrt()
        } else {
            (num / den).sqrt()
        }
    }

    /// Maximum modulus over the grid nodes.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    // ---- CSV interchange -------------------------------------------------

    /// Write `r,value_re,value_im` rows with the schema and metadata comment
    /// lines needed to rebuild the grid on import.
    pub fn export_csv(&self, path: &Path) -> Result<()> {
        let mut out = String::new();
        out.push_str("# schema=1\n");
        out.push_str(&format!(
            "# N={},space={},r_max={},panels={}\n",
            self.grid.dim().n_eff(),
            self.space.name(),
            self.grid.r_max(),
            self.grid.panels()
        ));
        out.push_str("r,value_re,value_im\n");
        for (r, v) in self.grid.nodes().iter().zip(&self.values) {
            out.push_str(&format!("{},{},{}\n", r, v.re, v.im));
        }
        std::fs::write(path, out)?;
        Ok(())
    }

    /// Read a profile written by `export_csv`, rebuilding its grid from the
    /// metadata line and checking the nodes match.
    pub fn import_csv(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let perr = |reason: &str| Error::Parse {
            path: path.display().to_string(),
            reason: reason.to_string(),
        };

        let mut n_eff = None;
        let mut space = None;
        let mut r_max = None;
        let mut panels = None;
        let mut rows: Vec<(f64, Complex64)> = Vec::new();
        let mut saw_header = false;

        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(meta) = line.strip_prefix('#') {
                for item in meta.trim().split(',') {
                    let mut kv = item.splitn(2, '=');
                    match (kv.next().map(str::trim), kv.next().map(str::trim)) {
                        (Some("N"), Some(v)) => n_eff = v.parse::<f64>().ok(),
                        (Some("space"), Some("physical")) => space = Some(Space::Physical),
                        (Some("space"), Some("frequency")) => space = Some(Space::Frequency),
                        (Some("r_max"), Some(v)) => r_max = v.parse::<f64>().ok(),
                        (Some("panels"), Some(v)) => panels = v.parse::<usize>().ok(),
                        _ => {}
                    }
                }
                continue;
            }
            if line == "r,value_re,value_im" {
                saw_header = true;
                continue;
            }
            let mut cols = line.split(',');
            let r: f64 = cols
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| perr("bad r column"))?;
            let re: f64 = cols
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| perr("bad value_re column"))?;
            let im: f64 = cols
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| perr("bad value_im column"))?;
            rows.push((r, Complex64::new(re, im)));
        }

        if !saw_header {
            return Err(perr("missing header row"));
        }
        let n_eff = n_eff.ok_or_else(|| perr("missing N metadata"))?;
        let space = space.ok_or_else(|| perr("missing space metadata"))?;
        let r_max = r_max.ok_or_else(|| perr("missing r_max metadata"))?;
        let panels = panels.ok_or_else(|| perr("missing panels metadata"))?;

        let dim = EffectiveDimension::from_effective(n_eff)?;
        let grid = RadialGrid::new(dim, r_max, panels)?;
        if grid.len() != rows.len() {
            return Err(perr("node count does not match grid metadata"));
        }
        for (g, (r, _)) in grid.nodes().iter().zip(&rows) {
            if (g - r).abs() > 1e-12 * (1.0 + g.abs()) {
                return Err(perr("node values do not match grid metadata"));
            }
        }
        Self::from_values(&grid, space, rows.into_iter().map(|(_, v)| v).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn dim(n_eff: f64) -> EffectiveDimension {
        EffectiveDimension::from_effective(n_eff).unwrap()
    }

    #[test]
    fn dimension_accounting() {
        let d = EffectiveDimension::new(3, 0.75).unwrap();
        assert_relative_eq!(d.n_eff(), 4.5);
        assert_relative_eq!(d.bessel_nu(), 1.25);
        assert!(EffectiveDimension::new(0, 1.0).is_err());
        assert!(EffectiveDimension::new(2, -0.5).is_err());
    }

    #[test]
    fn unit_interval_moment_matches_one_over_n() {
        for &n_eff in &[1.2, 2.0, 3.0, 3.5, 5.0, 7.25] {
            let g = RadialGrid::new(dim(n_eff), 1.0, 48).unwrap();
            let total: f64 = g.weights().iter().sum();
            assert_relative_eq!(total, 1.0 / n_eff, max_relative = 1e-10);
        }
    }

    #[test]
    fn nodes_strictly_increasing_weights_positive() {
        let g = RadialGrid::standard(dim(3.5)).unwrap();
        for w in g.nodes().windows(2) {
            assert!(w[1] > w[0]);
        }
        assert!(g.weights().iter().all(|&w| w > 0.0));
    }

    #[test]
    fn gaussian_moment_on_standard_grid() {
        // int_0^inf e^{-r^2} r^2 dr = sqrt(pi)/4
        let g = RadialGrid::standard(dim(3.0)).unwrap();
        let vals: Vec<Complex64> = g
            .nodes()
            .iter()
            .map(|&r| Complex64::new((-r * r).exp(), 0.0))
            .collect();
        let got = g.integrate(&vals).re;
        assert_relative_eq!(
            got,
            std::f64::consts::PI.sqrt() / 4.0,
            max_relative = 1e-12
        );
    }

    #[test]
    fn profile_validation() {
        let g = RadialGrid::standard(dim(3.0)).unwrap();
        assert!(RadialProfile::from_values(&g, Space::Physical, vec![]).is_err());
        let mut vals = vec![Complex64::new(0.0, 0.0); g.len()];
        vals[3] = Complex64::new(f64::NAN, 0.0);
        assert!(RadialProfile::from_values(&g, Space::Physical, vals).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let g = RadialGrid::new(dim(3.5), 12.0, 20).unwrap();
        let p = RadialProfile::from_fn(&g, Space::Frequency, |r| {
            Complex64::new((-r).exp() * (3.0 * r).cos(), 0.25 * r)
        })
        .unwrap();
        let dir = std::env::temp_dir().join("dunkl_radial_grid_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("profile.csv");
        p.export_csv(&path).unwrap();
        let q = RadialProfile::import_csv(&path).unwrap();
        assert_eq!(q.space(), Space::Frequency);
        assert_eq!(q.len(), p.len());
        assert!(p.relative_l2_distance(&q) < 1e-14);
    }
}
