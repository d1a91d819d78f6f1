//! Command-line front end: configuration-driven runs, profile and
//! exact-solution dumps, gated experiments, and figure data.
//!
//! Exit codes: 0 when everything ran and every gate passed, 1 when a
//! gate failed, 2 for usage or configuration problems (one diagnostic
//! line naming the offending field).

use clap::{Args, Parser, Subcommand};
use pmelab::config::{self, Config, ExperimentKind};
use pmelab::diagnostics::ExperimentReport;
use pmelab::error::Error;
use pmelab::experiments::{
    experiment_decay, experiment_theorem1, experiment_theorem1b, experiment_theorem2,
    experiment_theorem3, viscosity_series,
};
use pmelab::figures;
use pmelab::params::Parameters;
use pmelab::pool;
use pmelab::profiles::{ProfileKind, ProfileSpec};
use pmelab::report::{curves_csv, render_summary, report_csv, write_text};
use pmelab::solver::{riemann_exact, RiemannProblem};
use pmelab::Result;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "pmelab",
    version,
    about = "Numerical laboratory for the large-time behaviour of a singular-density nonlinear diffusion"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Integrate the configured scenario and dump snapshot curves.
    Simulate(SimulateArgs),
    /// Sample a closed-form profile onto a grid as CSV.
    Profiles(ProfilesArgs),
    /// Dump the exact solution of a two-state line problem.
    Riemann(RiemannArgs),
    /// Run gated diagnostics from a config file.
    Experiment(ExperimentArgs),
    /// Emit plot-ready CSV for figure 1, 2 or 3.
    Figures(FiguresArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// Configuration file; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides the config's output_dir).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ProfilesArgs {
    /// Profile kind: F, W, EK, V, BD, tilde_F, tilde_EK, tilde_BD.
    #[arg(long)]
    kind: String,
    #[arg(long)]
    m: f64,
    #[arg(long = "N")]
    dim: u32,
    /// Profile constant (k, K, or D depending on the kind).
    #[arg(long = "constant", alias = "K", alias = "k", alias = "D")]
    constant: f64,
    /// Evaluation time (the line-frame clock for W and V).
    #[arg(long = "t", alias = "tau")]
    time: f64,
    #[arg(long, default_value_t = (-8.0f64).exp())]
    r_min: f64,
    #[arg(long, default_value_t = (2.0f64).exp())]
    r_max: f64,
    #[arg(long, default_value_t = -2.0, allow_hyphen_values = true)]
    s_min: f64,
    #[arg(long, default_value_t = 10.0)]
    s_max: f64,
    #[arg(long, default_value_t = 2049)]
    n: usize,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RiemannArgs {
    #[arg(long)]
    m: f64,
    /// Left state w_l ≥ 0.
    #[arg(long)]
    left: f64,
    /// Right state w_r ≥ 0.
    #[arg(long)]
    right: f64,
    #[arg(long)]
    tau: f64,
    #[arg(long, default_value_t = -2.0, allow_hyphen_values = true)]
    s_min: f64,
    #[arg(long, default_value_t = 6.0)]
    s_max: f64,
    #[arg(long, default_value_t = 2049)]
    n: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// theorem1 | theorem1b | theorem2 | theorem3 | decay | viscosity;
    /// omitted: run the config's own list.
    name: Option<String>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FiguresArgs {
    /// Figure number: 1, 2 or 3.
    which: u8,
    /// Grid size override.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

fn main() {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(true) => {}
        Ok(false) => std::process::exit(1),
        Err(e) => {
            eprintln!("pmelab: {e}");
            std::process::exit(2);
        }
    }
}

/// Ok(true): success and every gate passed.  Ok(false): a gate failed.
fn dispatch(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Simulate(a) => simulate(a),
        Cmd::Profiles(a) => profiles_dump(a),
        Cmd::Riemann(a) => riemann_dump(a),
        Cmd::Experiment(a) => experiment(a),
        Cmd::Figures(a) => figures_dump(a),
    }
}

fn load_config(path: &Option<PathBuf>) -> Result<Config> {
    match path {
        Some(p) => config::load(p),
        None => Ok(Config::default()),
    }
}

fn emit_file(path: &Path, text: &str) -> Result<()> {
    write_text(path, text)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn simulate(a: SimulateArgs) -> Result<bool> {
    let cfg = load_config(&a.config)?;
    let out_dir = a.out.unwrap_or_else(|| PathBuf::from(&cfg.scenario.output_dir));
    let run = pmelab::experiments::run_scenario(cfg.scenario_spec()?)?;
    let mut rows = Vec::new();
    for (i, r) in run.u0.grid.nodes().enumerate() {
        rows.push((r, format!("u t={}", run.spec.t0), run.u0.values[i]));
    }
    for u in &run.radial {
        let label = format!("u t={}", u.t);
        for (i, r) in u.grid.nodes().enumerate() {
            rows.push((r, label.clone(), u.values[i]));
        }
    }
    let csv = curves_csv(rows.iter().map(|(x, c, v)| (*x, c.as_str(), *v)));
    emit_file(&out_dir.join(format!("{}_snapshots.csv", run.spec.name)), &csv)?;
    println!(
        "{}: {} steps, mass drift {:.3e}",
        run.spec.name, run.line.steps, run.line.mass_drift
    );
    for w in &run.line.warnings {
        println!("warning: {w}");
    }
    Ok(true)
}

fn kind_label(kind: ProfileKind) -> &'static str {
    match kind {
        ProfileKind::F => "F",
        ProfileKind::W => "W",
        ProfileKind::Ek => "E_K",
        ProfileKind::V => "V",
        ProfileKind::Bd => "B_D",
        ProfileKind::TildeF => "tilde_F",
        ProfileKind::TildeEk => "tilde_E_K",
        ProfileKind::TildeBd => "tilde_B_D",
    }
}

/// Interface abscissae worth landing on exactly (edges, cutoffs) so a
/// plotted dump shows the corner instead of straddling it.
fn notable_points(kind: ProfileKind, c: f64, p: &Parameters, time: f64) -> Vec<f64> {
    let nm2 = p.nm2();
    let tm = time.powf(1.0 / p.m);
    let kappa = 1.0 / ((p.m - 1.0) * nm2);
    match kind {
        ProfileKind::F => vec![(-c * tm / nm2).exp(), 1.0],
        ProfileKind::W => vec![c * tm],
        ProfileKind::Ek => {
            vec![(-p.m * c.powf(p.m - 1.0) * nm2 * time).exp(), 1.0]
        }
        ProfileKind::V => vec![0.0, p.m * c.powf(p.m - 1.0) * time],
        ProfileKind::Bd => vec![(c * p.m * nm2).exp() * time.powf(kappa)],
        ProfileKind::TildeF => vec![1.0, (c * tm / nm2).exp()],
        ProfileKind::TildeEk => {
            vec![1.0, (p.m * c.powf(p.m - 1.0) * nm2 * time).exp()]
        }
        ProfileKind::TildeBd => vec![(-c * p.m * nm2).exp() / time.powf(kappa)],
    }
}

fn profiles_dump(a: ProfilesArgs) -> Result<bool> {
    let kind = ProfileKind::parse(&a.kind)?;
    let p = Parameters::new(a.m, a.dim)?;
    let spec = ProfileSpec::new(kind, a.constant, p)?;
    let (lo, hi) = if kind.is_line_frame() { (a.s_min, a.s_max) } else { (a.r_min, a.r_max) };
    if !(hi > lo) || a.n < 2 {
        return Err(Error::Validation(format!(
            "dump grid needs lo < hi and n >= 2, got [{lo}, {hi}] with n = {}",
            a.n
        )));
    }
    let mut xs: Vec<f64> = if kind.is_line_frame() {
        let dx = (hi - lo) / (a.n - 1) as f64;
        (0..a.n).map(|i| lo + dx * i as f64).collect()
    } else {
        pmelab::grid::RadialGrid::new(lo, hi, a.n)?.nodes().collect()
    };
    for x in notable_points(kind, a.constant, &p, a.time) {
        if x > lo && x < hi {
            xs.push(x);
        }
    }
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let label = format!("{} t={}", kind_label(kind), a.time);
    let rows = xs
        .iter()
        .map(|&x| Ok((x, spec.eval(x, a.time)?)))
        .collect::<Result<Vec<_>>>()?;
    let csv = curves_csv(rows.iter().map(|&(x, v)| (x, label.as_str(), v)));
    match &a.out {
        Some(path) => emit_file(path, &csv)?,
        None => print!("{csv}"),
    }
    Ok(true)
}

fn riemann_dump(a: RiemannArgs) -> Result<bool> {
    let rp = RiemannProblem::new(a.left, a.right, a.m)?;
    if !(a.s_max > a.s_min) || a.n < 2 {
        return Err(Error::Validation(format!(
            "dump grid needs s_min < s_max and n >= 2, got [{}, {}] with n = {}",
            a.s_min, a.s_max, a.n
        )));
    }
    let dx = (a.s_max - a.s_min) / (a.n - 1) as f64;
    let label = format!("w tau={}", a.tau);
    let rows = (0..a.n)
        .map(|i| {
            let s = a.s_min + dx * i as f64;
            Ok((s, riemann_exact(&rp, s, a.tau)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let csv = curves_csv(rows.iter().map(|&(x, v)| (x, label.as_str(), v)));
    match &a.out {
        Some(path) => emit_file(path, &csv)?,
        None => print!("{csv}"),
    }
    Ok(true)
}

fn run_one(kind: ExperimentKind, cfg: &Config) -> Result<ExperimentReport> {
    match kind {
        ExperimentKind::Theorem1 => {
            experiment_theorem1(cfg.scenario_spec()?, &cfg.theorem1.p_list, &cfg.theorem1_gate())
        }
        ExperimentKind::Theorem1b => experiment_theorem1b(
            cfg.scenario_spec()?,
            &cfg.theorem1b_gate(),
            cfg.theorem1b.bernstein_c,
        ),
        ExperimentKind::Theorem2 => experiment_theorem2(
            cfg.scenario_spec()?,
            cfg.theorem2.k,
            cfg.theorem2.window_rate,
            &cfg.theorem2_gate(),
            cfg.theorem2.boundary_tol,
        ),
        ExperimentKind::Theorem3 => {
            experiment_theorem3(cfg.scenario_spec()?, cfg.theorem3.delta, &cfg.theorem3_gate())
        }
        ExperimentKind::Decay => experiment_decay(cfg.scenario_spec()?, cfg.decay.alpha_margin),
        ExperimentKind::Viscosity => viscosity_series(&cfg.viscosity_sweep()?),
    }
}

fn experiment(a: ExperimentArgs) -> Result<bool> {
    let cfg = load_config(&a.config)?;
    let kinds: Vec<ExperimentKind> = match &a.name {
        Some(name) => vec![ExperimentKind::parse(name)?],
        None => cfg.run.clone(),
    };
    if kinds.is_empty() {
        return Err(Error::Config("[experiment] run: empty experiment list".into()));
    }
    let out_dir = a.out.unwrap_or_else(|| PathBuf::from(&cfg.scenario.output_dir));
    let workers = pool::worker_count()?;
    let tasks: Vec<_> = kinds
        .iter()
        .map(|&kind| {
            let cfg = &cfg;
            move || run_one(kind, cfg)
        })
        .collect();
    let results = pool::run_tasks(tasks, workers);
    let mut all_pass = true;
    for (kind, result) in kinds.iter().zip(results) {
        let report = result?;
        let path = out_dir.join(format!("{}_report.csv", report.scenario.replace('/', "_")));
        write_text(&path, &report_csv(&report))?;
        print!("{}", render_summary(&report));
        println!("wrote {} ({})", path.display(), kind.as_str());
        all_pass &= report.all_pass();
    }
    Ok(all_pass)
}

fn figures_dump(a: FiguresArgs) -> Result<bool> {
    let n = match a.n {
        Some(n) => n,
        None => figures::default_n(a.which)?,
    };
    for file in figures::figure(a.which, n)? {
        emit_file(&a.out.join(file.filename), &file.csv)?;
    }
    Ok(true)
}
