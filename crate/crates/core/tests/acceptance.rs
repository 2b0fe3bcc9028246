//! Acceptance suite: every numbered criterion as one test, with its
//! tolerances pinned in code and one pass line printed per criterion.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

mod common;

use std::sync::Arc;

use common::AsymmetricHarness;
use num_complex::Complex64;

use dunkl_radial::bump::{cutoff, ring_dyadic};
use dunkl_radial::decay::{default_large_t_grid, fit_decay, sweep_and_fit, Regime};
use dunkl_radial::grid::{EffectiveDimension, RadialGrid, RadialProfile, Space};
use dunkl_radial::kernel::{self, default_band_tol};
use dunkl_radial::phase::{self, Phase};
use dunkl_radial::solver::{
    self, critical_index, CauchyData, CriticalEquation, EquationTag, NonlinearitySpec,
    SecondOrderKind, SolverConfig,
};
use dunkl_radial::special::{bessel, decomposition_constant, HAux};
use dunkl_radial::suite::schwartz_suite;
use dunkl_radial::transform::{weighted_lp_norm, Transform};

fn pass(criterion: u32, detail: &str) {
    println!("[PASS] criterion {criterion}: {detail}");
}

fn dim(n_eff: f64) -> EffectiveDimension {
    EffectiveDimension::from_effective(n_eff).unwrap()
}

fn standard(n_eff: f64) -> (Arc<RadialGrid>, Transform) {
    let g = RadialGrid::standard(dim(n_eff)).unwrap();
    let t = Transform::new(&g);
    (g, t)
}

#[test]
fn criterion_01_transform_correctness() {
    let mut worst_fp: f64 = 0.0;
    let mut worst_rt: f64 = 0.0;
    for &n_eff in &[2.0, 3.0, 3.5, 5.0] {
        let (g, t) = standard(n_eff);
        let f = RadialProfile::from_real_fn(&g, Space::Physical, |r| (-0.5 * r * r).exp())
            .unwrap();
        let hat = t.forward(&f).unwrap();
        let expect =
            RadialProfile::from_real_fn(&g, Space::Frequency, |s| (-0.5 * s * s).exp()).unwrap();
        worst_fp = worst_fp.max(hat.relative_l2_distance(&expect));
        let back = t.inverse(&hat).unwrap();
        worst_rt = worst_rt.max(back.relative_l2_distance(&f));
    }
    assert!(worst_fp < 1e-7, "Gaussian fixed-point defect {worst_fp:.3e}");
    assert!(worst_rt < 1e-7, "round-trip defect {worst_rt:.3e}");

    let (g, t) = standard(3.0);
    let mut worst_p: f64 = 0.0;
    for f in schwartz_suite(&g, 20260809, 10).unwrap() {
        let n1 = weighted_lp_norm(&f, 2.0).unwrap();
        let n2 = weighted_lp_norm(&t.forward(&f).unwrap(), 2.0).unwrap();
        worst_p = worst_p.max((n1 - n2).abs() / n1);
    }
    assert!(worst_p < 1e-7, "Plancherel defect {worst_p:.3e}");
    pass(
        1,
        &format!(
            "fixed point {worst_fp:.1e}, round trip {worst_rt:.1e}, Plancherel {worst_p:.1e} (tol 1e-7)"
        ),
    );
}

#[test]
fn criterion_02_littlewood_paley() {
    // partition of unity at 1e-12 on 1000 samples
    let mut worst: f64 = 0.0;
    for i in 0..1000 {
        let r = 1000.0 * i as f64 / 999.0;
        let jmax = if r <= 1.0 { 1 } else { r.log2().ceil() as i32 + 1 };
        let mut acc = cutoff(r);
        for j in 0..=jmax {
            acc += ring_dyadic(j, r);
        }
        worst = worst.max((acc - 1.0).abs());
    }
    let mut worst_h: f64 = 0.0;
    for i in 0..1000 {
        let r = 1e-3 * (1e6f64).powf(i as f64 / 999.0);
        let lo = (r.log2().floor() as i32) - 2;
        let hi = (r.log2().ceil() as i32) + 2;
        let acc: f64 = (lo..=hi).map(|j| ring_dyadic(j, r)).sum();
        worst_h = worst_h.max((acc - 1.0).abs());
    }
    assert!(worst < 1e-12 && worst_h < 1e-12, "partition defects {worst:.2e}, {worst_h:.2e}");

    // band-support exactness through the double transform at 1e-10, on the
    // rate-matched asymmetric box that keeps the projected tail below budget
    let h = AsymmetricHarness::new(3.0, 300.0, 4.5);
    let f: Vec<Complex64> = h
        .r_nodes
        .iter()
        .map(|&r| Complex64::new((-r * r / 2.0).exp(), 0.0))
        .collect();
    let f_hat = h.analyze(&f);
    let banded: Vec<Complex64> = h
        .s_nodes
        .iter()
        .zip(&f_hat)
        .map(|(&s, v)| ring_dyadic(1, s) * v)
        .collect();
    let proj_hat = h.analyze(&h.synthesize(&banded));
    let peak = proj_hat.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut leak: f64 = 0.0;
    for (&s, v) in h.s_nodes.iter().zip(&proj_hat) {
        if !(1.0..=4.0).contains(&s) {
            leak = leak.max(v.norm() / peak);
        }
    }
    assert!(leak < 1e-10, "band-support leak {leak:.3e}");
    pass(
        2,
        &format!("partition {worst:.1e}/{worst_h:.1e} (tol 1e-12), band-support leak {leak:.1e} (tol 1e-10)"),
    );
}

#[test]
fn criterion_03_bessel_property_suite() {
    // recurrence to 1e-6
    let fd_step = 1e-5;
    let mut worst_rec: f64 = 0.0;
    for &nu in &[0.0, 0.5, 0.75, 1.5] {
        let o = bessel::BesselOrder::new(nu).unwrap();
        for i in 0..100 {
            let x = 0.1 + 19.9 * i as f64 / 99.0;
            let fd = (bessel::bessel_kernel(o, x + fd_step).unwrap()
                - bessel::bessel_kernel(o, x - fd_step).unwrap())
                / (2.0 * fd_step);
            let rhs = -bessel::bessel_j(o.next(), x).unwrap() / x.powf(nu);
            worst_rec = worst_rec.max((fd - rhs).abs() / rhs.abs().max(1e-6));
        }
    }
    assert!(worst_rec < 1e-6, "recurrence defect {worst_rec:.3e}");

    // decay envelope stable to 5% between the top two decades
    let mut worst_env: f64 = 0.0;
    for &nu in &[0.0, 0.5, 1.5] {
        let o = bessel::BesselOrder::new(nu).unwrap();
        let env = |lo: f64, hi: f64| {
            (0..2000)
                .map(|i| {
                    let x = lo * (hi / lo).powf(i as f64 / 1999.0);
                    bessel::bessel_j(o, x).unwrap().abs() * x.sqrt()
                })
                .fold(0.0, f64::max)
        };
        let (m2, m3) = (env(1e2, 1e3), env(1e3, 1e4));
        worst_env = worst_env.max(((m2 - m3) / m3).abs());
    }
    assert!(worst_env < 0.05, "envelope drift {worst_env:.3}");

    // decomposition identity to 1e-6 for N in {3, 5}
    let mut worst_dec: f64 = 0.0;
    for &n_eff in &[3.0, 5.0] {
        let h = HAux::new(n_eff).unwrap();
        let c = decomposition_constant(n_eff);
        let nu = bessel::BesselOrder::new((n_eff - 2.0) / 2.0).unwrap();
        for i in 0..200 {
            let x = 1.0 + 49.0 * i as f64 / 199.0;
            let hv = h.eval(x, 0).unwrap();
            let rec = c * (Complex64::from_polar(1.0, x) * hv
                + Complex64::from_polar(1.0, -x) * hv.conj());
            let direct = bessel::bessel_kernel(nu, x).unwrap();
            worst_dec = worst_dec.max((rec.re - direct).abs() / direct.abs().max(1e-4));
        }
    }
    assert!(worst_dec < 1e-6, "decomposition defect {worst_dec:.3e}");
    pass(
        3,
        &format!(
            "recurrence {worst_rec:.1e} (tol 1e-6), envelope {worst_env:.3} (tol 0.05), decomposition {worst_dec:.1e} (tol 1e-6)"
        ),
    );
}

fn fitted_theta(phase: &dyn Phase, regime: Regime) -> f64 {
    sweep_and_fit(phase, dim(3.0), regime, 0, &default_large_t_grid())
        .unwrap()
        .theta_hat
}

#[test]
fn criterion_04_wave_high_frequency_decay() {
    let theta = fitted_theta(&phase::Wave, Regime::HighFreqBand);
    assert!(
        (0.85..=1.15).contains(&theta),
        "wave theta_hat {theta} outside [0.85, 1.15]"
    );
    pass(4, &format!("wave band theta_hat {theta:.4} in [0.85, 1.15] (pred 1)"));
}

#[test]
fn criterion_05_schrodinger_high_frequency_decay() {
    let theta = fitted_theta(&phase::FractionalSchrodinger::schrodinger(), Regime::HighFreqBand);
    assert!(
        (1.35..=1.65).contains(&theta),
        "schrodinger theta_hat {theta} outside [1.35, 1.65]"
    );
    pass(5, &format!("schrodinger band theta_hat {theta:.4} in [1.35, 1.65] (pred 1.5)"));
}

#[test]
fn criterion_06_klein_gordon_low_frequency_sum_decay() {
    let theta = fitted_theta(&phase::KleinGordon, Regime::LowFreqSum);
    assert!(
        (1.35..=1.65).contains(&theta),
        "klein-gordon theta_hat {theta} outside [1.35, 1.65]"
    );
    pass(6, &format!("klein-gordon S0 theta_hat {theta:.4} in [1.35, 1.65] (pred 1.5)"));
}

#[test]
fn criterion_07_beam_low_frequency_sum_decay() {
    let theta = fitted_theta(&phase::Beam, Regime::LowFreqSum);
    assert!(
        (0.60..=0.90).contains(&theta),
        "beam theta_hat {theta} outside [0.60, 0.90]"
    );
    pass(7, &format!("beam S0 theta_hat {theta:.4} in [0.60, 0.90] (pred 0.75)"));
}

#[test]
fn criterion_08_frequency_scaling_uniformity() {
    // Schrodinger at t = 100: log2 sup_s |II_j| affine in j with slope
    // N - m1 N/2 = 0 within +-0.3
    let d = dim(3.0);
    let sch = phase::FractionalSchrodinger::schrodinger();
    let t = 100.0;
    let mut points = Vec::new();
    for j in 0..=4 {
        let sup = kernel::sweep_band(&sch, d, t, j, default_band_tol(d, j))
            .unwrap()
            .sup_abs();
        points.push((j as f64, sup.log2()));
    }
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    assert!(
        slope.abs() <= 0.3,
        "j-scaling slope {slope:.4} outside +-0.3 (sups {points:?})"
    );
    pass(8, &format!("j-uniformity slope {slope:.4} within +-0.3 of 0"));
}

#[test]
fn criterion_09_unitarity_and_group_law() {
    let (g, tr) = standard(3.0);
    let u = RadialProfile::from_real_fn(&g, Space::Physical, |r| (-0.5 * r * r).exp()).unwrap();
    let base = weighted_lp_norm(&u, 2.0).unwrap();
    let mut worst_u: f64 = 0.0;
    let mut worst_g: f64 = 0.0;
    for p in phase::catalog() {
        for &t in &[0.1, 1.0, 10.0] {
            // spectral norm: the full-space L2 norm of the evolved state
            let mut hat = tr.forward(&u).unwrap();
            for (s, v) in g.nodes().iter().zip(hat.values_mut()) {
                *v *= Complex64::from_polar(1.0, t * p.phi(*s));
            }
            worst_u = worst_u.max((weighted_lp_norm(&hat, 2.0).unwrap() - base).abs() / base);
        }
        // group law through the physical pipeline; the window keeps the
        // intermediate state inside the box (fourth-order transports at
        // ~4 s^3, the s=0-kinked phases shed algebraic tails linear in t)
        let (t1, t2) = match p.name() {
            "fourth-order" => (0.02, 0.01),
            "wave" => (0.05, 0.03),
            n if n.starts_with("fractional:") => (0.05, 0.03),
            _ => (0.7, 0.4),
        };
        let two = kernel::evolve(
            &tr,
            p.as_ref(),
            t2,
            &kernel::evolve(&tr, p.as_ref(), t1, &u).unwrap(),
        )
        .unwrap();
        let one = kernel::evolve(&tr, p.as_ref(), t1 + t2, &u).unwrap();
        worst_g = worst_g.max(two.relative_l2_distance(&one));
    }
    assert!(worst_u < 1e-6, "unitarity defect {worst_u:.3e}");
    assert!(worst_g < 1e-6, "group law defect {worst_g:.3e}");
    pass(
        9,
        &format!("six phases: unitarity {worst_u:.1e}, group law {worst_g:.1e} (tol 1e-6)"),
    );
}

#[test]
fn criterion_10_linear_conservation() {
    let (g, tr) = standard(3.0);
    let t_grid: Vec<f64> = (0..=20).map(|k| 0.5 * k as f64).collect();
    let u0 = RadialProfile::from_real_fn(&g, Space::Physical, |r| (-0.5 * r * r).exp()).unwrap();
    let u1 = RadialProfile::from_real_fn(&g, Space::Physical, |r| 0.3 * (-r * r).exp()).unwrap();

    let mut worst: f64 = 0.0;
    for kind in [
        SecondOrderKind::Wave,
        SecondOrderKind::KleinGordon,
        SecondOrderKind::Beam,
    ] {
        let data = CauchyData::new(
            EquationTag::SecondOrder(kind),
            u0.clone(),
            Some(u1.clone()),
        )
        .unwrap();
        let traj = solver::solve_linear(&tr, &data, &t_grid).unwrap();
        let e0 = traj.energy[0].unwrap();
        for e in &traj.energy {
            worst = worst.max((e.unwrap() - e0).abs() / e0);
        }
    }
    let sch: Arc<dyn Phase> = Arc::new(phase::FractionalSchrodinger::schrodinger());
    let data = CauchyData::new(EquationTag::Dispersive(sch), u0, None).unwrap();
    let traj = solver::solve_linear(&tr, &data, &t_grid).unwrap();
    let m0 = traj.mass[0];
    for m in &traj.mass {
        worst = worst.max((m - m0).abs() / m0);
    }
    assert!(worst < 1e-6, "conservation drift {worst:.3e}");
    pass(10, &format!("mass/energy drift {worst:.1e} over t in [0,10] (tol 1e-6)"));
}

#[test]
fn criterion_11_nonlinear_kg_small_data() {
    // N = 2, alpha = 1.8 inside (alpha_K(2), 4/N) = (sqrt 2, 2), delta = 1e-3
    let d2 = EffectiveDimension::new(1, 0.5).unwrap();
    assert_eq!(d2.n_eff(), 2.0);
    let g = RadialGrid::standard(d2).unwrap();
    let tr = Transform::new(&g);
    let u0 =
        RadialProfile::from_real_fn(&g, Space::Physical, |r| 1e-3 * (-0.5 * r * r).exp()).unwrap();
    let u1 = RadialProfile::zeros(&g, Space::Physical);
    let data = CauchyData::new(
        EquationTag::SecondOrder(SecondOrderKind::KleinGordon),
        u0,
        Some(u1),
    )
    .unwrap();
    let nl = NonlinearitySpec::new(1.8, 1.0).unwrap();
    let eps = 1e-11;

    let run = |horizon: f64| {
        let cfg = SolverConfig::new(horizon, 0.05, eps, 25).unwrap();
        solver::solve_nonlinear(&tr, &data, nl, &cfg).unwrap()
    };
    let (traj20, report) = run(20.0);
    assert!(report.converged, "{}", report.summary());

    // geometric once below the first iterate
    let first = report.increments[0];
    for (k, inc) in report.increments.iter().enumerate().skip(1) {
        if *inc < first {
            let ratio = report.ratios[k - 1];
            assert!(ratio <= 0.5, "ratio {ratio} above 1/2: {}", report.summary());
        }
    }
    assert!(
        report.residual < 10.0 * eps,
        "Duhamel residual {:.3e} vs 10 eps {:.1e}",
        report.residual,
        10.0 * eps
    );

    // solution sup-norm within 2x the linear part on [0, 20]
    let lin = solver::solve_linear(&tr, &data, &traj20.times).unwrap();
    let sup_nl = traj20.sup_norm();
    let sup_lin = lin.sup_norm();
    assert!(
        sup_nl <= 2.0 * sup_lin,
        "nonlinear sup {sup_nl:.3e} vs linear {sup_lin:.3e}"
    );

    // stability of the bound as T doubles
    let (traj40, report40) = run(40.0);
    assert!(report40.converged);
    let sup40 = traj40.sup_norm();
    assert!(
        sup40 <= 1.1 * sup_nl,
        "sup over [0,40] = {sup40:.6e} vs 1.1 x sup over [0,20] = {:.6e}",
        1.1 * sup_nl
    );
    pass(
        11,
        &format!(
            "converged in {} iterations, residual {:.1e} < 10 eps, sup ratio {:.3} <= 2, T-doubling drift {:.3} <= 1.1",
            report.iterations,
            report.residual,
            sup_nl / sup_lin,
            sup40 / sup_nl
        ),
    );
}

#[test]
fn criterion_12_critical_indices() {
    let kg3 = critical_index(CriticalEquation::KleinGordon, 3.0).unwrap();
    assert_eq!(kg3, 1.0, "alpha_K(3) must be exactly 1");
    let b3 = critical_index(CriticalEquation::Beam, 3.0).unwrap();
    let expect = (1.0 + 97f64.sqrt()) / 6.0;
    assert!(
        (b3 - expect).abs() < 1e-12,
        "alpha_B(3) = {b3:.15} vs (1+sqrt 97)/6 = {expect:.15}"
    );
    pass(
        12,
        &format!("alpha_K(3) = 1 exact, alpha_B(3) = {b3:.12} to 1e-12"),
    );
}

#[test]
fn decay_fit_soundness_gate() {
    // anchor for criteria 4-7: the fitter recovers exact power laws exactly
    let samples: Vec<(f64, f64)> = (0..9)
        .map(|i| {
            let t = 10.0 * 2f64.powi(i);
            (t, 5.0 * t.powf(-1.5))
        })
        .collect();
    let fit = fit_decay(&samples).unwrap();
    assert!((fit.theta_hat - 1.5).abs() < 1e-12 && fit.residual < 1e-12);
}
