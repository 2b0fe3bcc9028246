//! `dunkl`: kernel sweeps, decay-exponent verification, spectral evolution
//! and the nonlinear small-data solver, emitting CSV artifacts.
//!
//! Exit codes: 0 success, 1 numerical-verdict failure, 2 usage/config error,
//! 3 accuracy budget exceeded.

mod config;

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use dunkl_radial::decay::{
    self, default_large_t_grid, log_grid, sweep_and_fit, Proposition, Regime,
};
use dunkl_radial::grid::{EffectiveDimension, RadialGrid, RadialProfile, Space};
use dunkl_radial::kernel::{self, default_band_tol, DEFAULT_LOW_TOL};
use dunkl_radial::phase;
use dunkl_radial::solver::{
    self, CauchyData, EquationTag, NonlinearitySpec, SecondOrderKind, SolverConfig,
};
use dunkl_radial::suite::schwartz_suite;
use dunkl_radial::transform::Transform;
use dunkl_radial::Error;

#[derive(Parser)]
#[command(
    name = "dunkl",
    about = "radial Dunkl dispersive toolbox",
    version,
    propagate_version = true
)]
struct Cli {
    /// Flat key=value config file with [section] headers; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker threads for sweeps (default: hardware parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Output directory (flag > DUNKL_OUT env var > current directory).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate frequency-localized propagator kernels over an s-grid.
    Kernel(KernelArgs),
    /// Fit decay exponents and compare against the predicted ceilings.
    Decay(DecayArgs),
    /// Evolve initial data under a catalog propagator.
    Evolve(EvolveArgs),
    /// Picard/Duhamel solve of a nonlinear second-order equation.
    Solve(SolveArgs),
    /// Run every module's property suite.
    Selftest(SelftestArgs),
}

#[derive(Args, Clone)]
struct DimArgs {
    /// Effective dimension N = 2 gamma + n (alternative to --n/--gamma; defaults to 3).
    #[arg(long = "N", value_name = "N")]
    n_eff: Option<f64>,
    /// Ambient dimension n.
    #[arg(long)]
    n: Option<u32>,
    /// Multiplicity sum gamma.
    #[arg(long)]
    gamma: Option<f64>,
}

impl DimArgs {
    fn resolve(&self) -> Result<EffectiveDimension, Error> {
        match (self.n_eff, self.n, self.gamma) {
            (Some(n_eff), None, None) => {
                let d = EffectiveDimension::from_effective(n_eff)?;
                if d.n_eff() <= 1.0 {
                    return Err(Error::domain("effective dimension must satisfy N > 1"));
                }
                Ok(d)
            }
            (None, Some(n), Some(gamma)) => EffectiveDimension::new(n, gamma),
            (None, Some(n), None) => EffectiveDimension::new(n, 0.0),
            (None, None, None) => EffectiveDimension::from_effective(3.0),
            _ => Err(Error::domain(
                "give either --N or --n (with optional --gamma)",
            )),
        }
    }
}

#[derive(Args)]
struct KernelArgs {
    /// Phase name: wave | schrodinger | fractional:<mu> | fourth-order | klein-gordon | beam.
    #[arg(long)]
    phase: Option<String>,
    #[command(flatten)]
    dim: DimArgs,
    /// Dyadic band index (conflicts with --low).
    #[arg(long, allow_hyphen_values = true)]
    j: Option<i32>,
    /// Evaluate the low-frequency S0 kernel instead of a band.
    #[arg(long)]
    low: bool,
    /// Time(s) to evaluate at (repeatable).
    #[arg(long, required = true, allow_hyphen_values = true)]
    t: Vec<f64>,
    /// s-grid: "auto" (regime-adapted) or "lo:hi:count" (log-spaced).
    #[arg(long, default_value = "auto")]
    s_grid: String,
    /// Quadrature tolerance (absolute; default adapted to the band scale).
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct DecayArgs {
    #[arg(long)]
    phase: Option<String>,
    #[command(flatten)]
    dim: DimArgs,
    /// Regime: high (band j=0, large t) | low (S0 sum, large t) | small
    /// (band j=0, |t| <= 1) | all (proposition-level verification).
    #[arg(long, default_value = "all")]
    regime: String,
    /// Fitted-exponent tolerance.
    #[arg(long, default_value_t = 0.15)]
    tol: f64,
    /// Override the time window as "lo:hi:count" (log-spaced).
    #[arg(long)]
    t_window: Option<String>,
}

#[derive(Args)]
struct EvolveArgs {
    #[arg(long)]
    phase: Option<String>,
    #[command(flatten)]
    dim: DimArgs,
    /// Evolution time(s); repeatable, a trajectory is written per time.
    #[arg(long, required = true, allow_hyphen_values = true)]
    t: Vec<f64>,
    /// Initial data: "gaussian", "suite:<k>" (seeded profile k) or a profile CSV path.
    #[arg(long, default_value = "gaussian")]
    data: String,
    /// Seed for suite-generated data.
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct SolveArgs {
    /// Equation: kg | beam | wave.
    #[arg(long)]
    eq: String,
    #[command(flatten)]
    dim: DimArgs,
    /// Nonlinearity power alpha in F(u) = lambda |u|^alpha u.
    #[arg(long)]
    alpha: f64,
    /// Coupling lambda.
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Data amplitude: u0 = delta * gaussian, u1 = 0.
    #[arg(long, default_value_t = 1e-3)]
    delta: f64,
    /// Horizon T.
    #[arg(long = "T", default_value_t = 20.0)]
    horizon: f64,
    /// Time step.
    #[arg(long, default_value_t = 0.05)]
    dt: f64,
    /// Picard stopping tolerance.
    #[arg(long, default_value_t = 1e-11)]
    eps: f64,
    /// Iteration cap.
    #[arg(long, default_value_t = 25)]
    max_iter: usize,
}

#[derive(Args)]
struct SelftestArgs {
    /// Seed of the profile-suite draws.
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

fn main() -> ExitCode {
    let raw: Vec<String> = std::env::args().collect();
    let merged = match config::merge_config_args(raw) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(merged) {
        Ok(c) => c,
        Err(e) => {
            // clap handles --help/--version with success
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("thread pool: {e}");
            return ExitCode::from(2);
        }
    }

    let out_dir = cli
        .out
        .clone()
        .or_else(|| std::env::var_os("DUNKL_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    if let Err(e) = std::fs::create_dir_all(&out_dir) {
        eprintln!("cannot create output directory {}: {e}", out_dir.display());
        return ExitCode::from(2);
    }

    let result = match &cli.command {
        Command::Kernel(args) => cmd_kernel(args, &out_dir),
        Command::Decay(args) => cmd_decay(args, &out_dir),
        Command::Evolve(args) => cmd_evolve(args, &out_dir),
        Command::Solve(args) => cmd_solve(args, &out_dir),
        Command::Selftest(args) => cmd_selftest(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Accuracy { .. } => 3,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}

fn resolve_phase(name: &Option<String>) -> Result<Arc<dyn phase::Phase>, Error> {
    match name {
        Some(n) => phase::resolve(n),
        None => Err(Error::domain("--phase is required")),
    }
}

fn parse_grid_spec(spec: &str) -> Result<Vec<f64>, Error> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::domain(format!(
            "grid spec must be lo:hi:count, got '{spec}'"
        )));
    }
    let lo: f64 = parts[0]
        .parse()
        .map_err(|_| Error::domain("bad grid lower bound"))?;
    let hi: f64 = parts[1]
        .parse()
        .map_err(|_| Error::domain("bad grid upper bound"))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|_| Error::domain("bad grid count"))?;
    if !(hi > lo) || !(lo > 0.0) || count < 2 {
        return Err(Error::domain("grid spec needs 0 < lo < hi and count >= 2"));
    }
    Ok(log_grid(lo, hi, count))
}

fn cmd_kernel(args: &KernelArgs, out_dir: &std::path::Path) -> Result<ExitCode, Error> {
    let phase = resolve_phase(&args.phase)?;
    let dim = args.dim.resolve()?;
    if dim.n_eff() <= 1.0 {
        return Err(Error::domain("kernel sweeps need N > 1"));
    }
    if args.low == args.j.is_some() {
        return Err(Error::domain("give exactly one of --j or --low"));
    }

    let mut all_pass_tol = true;
    for &t in &args.t {
        let sweep = if args.low {
            let tol = args.tol.unwrap_or(DEFAULT_LOW_TOL);
            if args.s_grid == "auto" {
                kernel::sweep_low(phase.as_ref(), dim, t, tol)?
            } else {
                sweep_custom(phase.as_ref(), dim, t, None, &args.s_grid, tol)?
            }
        } else {
            let j = args.j.unwrap();
            let tol = args.tol.unwrap_or_else(|| default_band_tol(dim, j));
            if args.s_grid == "auto" {
                kernel::sweep_band(phase.as_ref(), dim, t, j, tol)?
            } else {
                sweep_custom(phase.as_ref(), dim, t, Some(j), &args.s_grid, tol)?
            }
        };
        let tag = args.j.map_or("S0".to_string(), |j| format!("j{j}"));
        let file = out_dir.join(format!(
            "kernel_{}_N{}_{}_t{}.csv",
            sweep.phase_name.replace(':', "_"),
            sweep.n_eff,
            tag,
            t
        ));
        sweep.export_csv(&file)?;
        let tol_used = args.tol.unwrap_or_else(|| match args.j {
            Some(j) => default_band_tol(dim, j),
            None => DEFAULT_LOW_TOL,
        });
        let worst = sweep
            .samples
            .iter()
            .map(|s| s.err_est)
            .fold(0.0, f64::max);
        all_pass_tol &= worst <= tol_used;
        println!(
            "kernel sweep t={t}: {} samples, sup|K| = {:.6e}, worst err {:.2e} -> {}",
            sweep.samples.len(),
            sweep.sup_abs(),
            worst,
            file.display()
        );
    }
    Ok(if all_pass_tol {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    })
}

fn sweep_custom(
    p: &dyn phase::Phase,
    dim: EffectiveDimension,
    t: f64,
    j: Option<i32>,
    spec: &str,
    tol: f64,
) -> Result<kernel::KernelSweep, Error> {
    let grid = parse_grid_spec(spec)?;
    let mut samples = Vec::with_capacity(grid.len());
    for &s in &grid {
        let point = match j {
            Some(j) => kernel::kernel_band(p, dim, t, j, s, tol)?,
            None => kernel::kernel_low(p, dim, t, s, tol)?,
        };
        samples.push(kernel::SweepSample {
            t,
            j,
            s,
            value: point.value,
            err_est: point.err_est,
            panels: point.panels,
        });
    }
    Ok(kernel::KernelSweep {
        phase_name: p.name().to_string(),
        n_eff: dim.n_eff(),
        samples,
    })
}

fn cmd_decay(args: &DecayArgs, out_dir: &std::path::Path) -> Result<ExitCode, Error> {
    let phase = resolve_phase(&args.phase)?;
    let dim = args.dim.resolve()?;
    if dim.n_eff() <= 1.0 {
        return Err(Error::domain("decay fits need N > 1"));
    }

    let t_grid = match &args.t_window {
        Some(spec) => parse_grid_spec(spec)?,
        None => default_large_t_grid(),
    };

    let report = match args.regime.as_str() {
        "all" => {
            if args.t_window.is_some() {
                return Err(Error::domain(
                    "--t-window applies to single-regime fits; --regime all uses the built-in windows",
                ));
            }
            let prop = match phase.name() {
                "wave" => Proposition::WaveDecay,
                "schrodinger" => Proposition::FractionalDecay,
                n if n.starts_with("fractional:") => Proposition::FractionalDecay,
                "fourth-order" => Proposition::FourthOrderDecay,
                "klein-gordon" => Proposition::KgDecay,
                "beam" => Proposition::BeamDecay,
                other => return Err(Error::domain(format!("no proposition for '{other}'"))),
            };
            decay::verify_proposition(phase.as_ref(), dim, prop, args.tol)?
        }
        one => {
            let (regime, window, pred) = match one {
                "high" => (
                    Regime::HighFreqBand,
                    "large-t",
                    decay::predicted_exponent(phase.as_ref(), dim, Regime::HighFreqBand)?,
                ),
                "low" => (
                    Regime::LowFreqSum,
                    "large-t",
                    decay::predicted_exponent(phase.as_ref(), dim, Regime::LowFreqSum)?,
                ),
                "small" => (Regime::HighFreqBand, "small-t", 0.0),
                other => {
                    return Err(Error::domain(format!(
                        "regime must be high|low|small|all, got '{other}'"
                    )))
                }
            };
            let grid = if window == "small-t" && args.t_window.is_none() {
                decay::default_small_t_grid()
            } else {
                t_grid.clone()
            };
            let fit = sweep_and_fit(phase.as_ref(), dim, regime, 0, &grid)?;
            let tol = if window == "small-t" { 0.1 } else { args.tol };
            decay::PropositionReport {
                phase_name: phase.name().to_string(),
                n_eff: dim.n_eff(),
                regimes: vec![decay::RegimeReport {
                    regime,
                    time_window: if window == "small-t" { "small-t" } else { "large-t" },
                    theta_pred: pred,
                    pass: (fit.theta_hat - pred).abs() <= tol,
                    fit,
                    tolerance: tol,
                }],
            }
        }
    };

    let file = out_dir.join(format!(
        "decay_{}_N{}.csv",
        report.phase_name.replace(':', "_"),
        report.n_eff
    ));
    report.export_csv(&file)?;
    print!("{}", report.summary());
    println!("report -> {}", file.display());
    Ok(if report.pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn load_data(
    args_data: &str,
    seed: u64,
    grid: &Arc<RadialGrid>,
) -> Result<RadialProfile, Error> {
    match args_data {
        "gaussian" => {
            RadialProfile::from_real_fn(grid, Space::Physical, |r| (-0.5 * r * r).exp())
        }
        other => {
            if let Some(k) = other.strip_prefix("suite:") {
                let k: usize = k
                    .parse()
                    .map_err(|_| Error::domain("bad suite index in --data"))?;
                let suite = schwartz_suite(grid, seed, k + 1)?;
                Ok(suite.into_iter().nth(k).unwrap())
            } else {
                let p = RadialProfile::import_csv(std::path::Path::new(other))?;
                if p.space() != Space::Physical {
                    return Err(Error::domain("--data profile must be physical-space"));
                }
                Ok(p)
            }
        }
    }
}

fn cmd_evolve(args: &EvolveArgs, out_dir: &std::path::Path) -> Result<ExitCode, Error> {
    let phase = resolve_phase(&args.phase)?;
    let dim = args.dim.resolve()?;
    if dim.n_eff() <= 1.0 {
        return Err(Error::domain("evolution needs N > 1"));
    }
    let grid = RadialGrid::standard(dim)?;
    let transform = Transform::new(&grid);
    let u0 = load_data(&args.data, args.seed, &grid)?;

    let data = CauchyData::new(EquationTag::Dispersive(phase.clone()), u0, None)?;
    let mut times = args.t.clone();
    times.insert(0, 0.0);
    let traj = solver::solve_linear(&transform, &data, &times)?;
    let stem = format!(
        "evolve_{}_N{}",
        phase.name().replace(':', "_"),
        dim.n_eff()
    );
    traj.export(out_dir, &stem)?;
    let drift = traj
        .mass
        .iter()
        .map(|m| (m - traj.mass[0]).abs() / traj.mass[0])
        .fold(0.0, f64::max);
    println!(
        "evolved {} snapshot(s); mass drift {:.2e} -> {}",
        traj.snapshots.len(),
        drift,
        out_dir.join(format!("{stem}_index.csv")).display()
    );
    Ok(if drift < 1e-6 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_solve(args: &SolveArgs, out_dir: &std::path::Path) -> Result<ExitCode, Error> {
    let dim = args.dim.resolve()?;
    if dim.n_eff() <= 1.0 {
        return Err(Error::domain("the solver needs N > 1"));
    }
    let kind = match args.eq.as_str() {
        "kg" | "klein-gordon" => SecondOrderKind::KleinGordon,
        "beam" => SecondOrderKind::Beam,
        "wave" => SecondOrderKind::Wave,
        other => return Err(Error::domain(format!("unknown equation '{other}'"))),
    };
    let grid = RadialGrid::standard(dim)?;
    let transform = Transform::new(&grid);
    let delta = args.delta;
    let u0 = RadialProfile::from_real_fn(&grid, Space::Physical, move |r| {
        delta * (-0.5 * r * r).exp()
    })?;
    let u1 = RadialProfile::zeros(&grid, Space::Physical);
    let data = CauchyData::new(EquationTag::SecondOrder(kind), u0, Some(u1))?;
    let nl = NonlinearitySpec::new(args.alpha, args.lambda)?;
    let cfg = SolverConfig::new(args.horizon, args.dt, args.eps, args.max_iter)?;

    let (traj, report) = solver::solve_nonlinear(&transform, &data, nl, &cfg)?;
    let stem = format!("solve_{}_N{}_alpha{}", kind.name(), dim.n_eff(), args.alpha);
    traj.export(out_dir, &stem)?;
    std::fs::write(
        out_dir.join(format!("{stem}_convergence.txt")),
        report.summary(),
    )?;
    print!("{}", report.summary());
    println!(
        "trajectory -> {}",
        out_dir.join(format!("{stem}_index.csv")).display()
    );
    Ok(if report.converged {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_selftest(args: &SelftestArgs) -> Result<ExitCode, Error> {
    let results = dunkl_radial::selftest::run_all(args.seed);
    let mut pass = true;
    for r in &results {
        println!(
            "[{}] {:32} {}",
            if r.pass { "PASS" } else { "FAIL" },
            r.name,
            r.detail
        );
        pass &= r.pass;
    }
    Ok(if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
