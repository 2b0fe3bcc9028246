//! Frequency-localization properties that need a physical box of a few
//! hundred: the S0-identity on low-band profiles, the Besov reduction on the
//! same profiles, and double-transform band-support exactness.

mod common;

use common::AsymmetricHarness;
use num_complex::Complex64;

use dunkl_radial::bump::{cutoff, ring_dyadic};

fn low_band_hat(h: &AsymmetricHarness) -> Vec<Complex64> {
    h.s_nodes
        .iter()
        .map(|&s| Complex64::new(cutoff(s + 0.5), 0.0))
        .collect()
}

#[test]
fn s0_identity_on_low_band_profile() {
    // transform supported in [0, 1/2], where R = 1: S0 f = f to 1e-8
    let h = AsymmetricHarness::new(3.0, 300.0, 0.7);
    let hat = low_band_hat(&h);
    let f = h.synthesize(&hat);
    let f_hat = h.analyze(&f);
    let projected_hat: Vec<Complex64> = h
        .s_nodes
        .iter()
        .zip(&f_hat)
        .map(|(&s, v)| cutoff(s) * v)
        .collect();
    let proj = h.synthesize(&projected_hat);
    let num: f64 = h
        .r_weights
        .iter()
        .zip(proj.iter().zip(&f))
        .map(|(w, (a, b))| w * (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let den = h.l2_physical(&f);
    assert!(num / den < 1e-8, "S0 defect {:.3e}", num / den);
}

#[test]
fn besov_reduces_to_lp_on_low_band_profile() {
    // every dyadic piece vanishes, the S0 piece is the whole norm:
    // ||S0 f|| + (sum_j 2^{2jsq-ish} ||Delta_j f||^2)^{1/2} = ||f||_2
    let h = AsymmetricHarness::new(3.0, 300.0, 2.2);
    let hat = low_band_hat(&h);
    let f = h.synthesize(&hat);
    let f_hat = h.analyze(&f);

    let piece_norm = |m: &dyn Fn(f64) -> f64| -> f64 {
        let clipped: Vec<Complex64> = h
            .s_nodes
            .iter()
            .zip(&f_hat)
            .map(|(&s, v)| m(s) * v)
            .collect();
        h.l2_frequency(&clipped)
    };

    let s_reg = 0.7f64;
    let low = piece_norm(&|s| cutoff(s));
    let mut dyadic = 0.0;
    for j in 0..=4 {
        let n = piece_norm(&|s| ring_dyadic(j, s));
        dyadic += (2f64.powf(j as f64 * s_reg) * n).powi(2);
    }
    let besov = low + dyadic.sqrt();
    let l2 = h.l2_physical(&f);
    let rel = (besov - l2).abs() / l2;
    assert!(rel < 1e-7, "besov {besov} vs l2 {l2}: rel {rel:.3e}");
}

#[test]
fn band_support_exact_through_double_transform() {
    // forward(project(f, Delta_1)) off [1, 4] below 1e-10 of its peak
    let h = AsymmetricHarness::new(3.0, 300.0, 4.5);
    // spectrum spread across the bands: wide Gaussian transform
    let f: Vec<Complex64> = h
        .r_nodes
        .iter()
        .map(|&r| Complex64::new((-r * r / 2.0).exp(), 0.0))
        .collect();
    let f_hat = h.analyze(&f);
    let banded_hat: Vec<Complex64> = h
        .s_nodes
        .iter()
        .zip(&f_hat)
        .map(|(&s, v)| ring_dyadic(1, s) * v)
        .collect();
    let proj = h.synthesize(&banded_hat);
    let proj_hat = h.analyze(&proj);

    let peak = proj_hat.iter().map(|v| v.norm()).fold(0.0, f64::max);
    assert!(peak > 1e-6, "band carries no mass, test is vacuous");
    let mut worst: f64 = 0.0;
    for (&s, v) in h.s_nodes.iter().zip(&proj_hat) {
        if !(1.0..=4.0).contains(&s) {
            worst = worst.max(v.norm() / peak);
        }
    }
    assert!(worst < 1e-10, "off-band leak {worst:.3e}");
}
