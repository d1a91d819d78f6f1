//! Plain-text run configuration.
//!
//! The format is INI-like: `[section]` headers, `key = value` lines,
//! `#` or `;` comments, blank lines ignored.  Parsing is strict —
//! unknown sections, unknown keys, and duplicate keys are errors that
//! name the offending field — while every key has a default, so a file
//! only states what it changes.  Floats are emitted with Rust's
//! shortest round-trip formatting, which makes `parse(emit(c)) == c`
//! exact, not approximate.
//!
//! Custom tabulated initial data is a programmatic interface only; the
//! file format offers the two named shapes.

use crate::error::{Error, Result};
use crate::experiments::{ScenarioSpec, TrendGate, ViscositySweep};
use crate::grid::InitialCondition;
use crate::params::Parameters;
use crate::solver::BoundaryCondition;
use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

// ---------------------------------------------------------------------------
// Typed sections.
// ---------------------------------------------------------------------------

/// Which diagnostic to run; `[experiment] run` holds a list of these.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExperimentKind {
    Theorem1,
    Theorem1b,
    Theorem2,
    Theorem3,
    Decay,
    Viscosity,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 6] = [
        ExperimentKind::Theorem1,
        ExperimentKind::Theorem1b,
        ExperimentKind::Theorem2,
        ExperimentKind::Theorem3,
        ExperimentKind::Decay,
        ExperimentKind::Viscosity,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::Theorem1 => "theorem1",
            ExperimentKind::Theorem1b => "theorem1b",
            ExperimentKind::Theorem2 => "theorem2",
            ExperimentKind::Theorem3 => "theorem3",
            ExperimentKind::Decay => "decay",
            ExperimentKind::Viscosity => "viscosity",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == text)
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown experiment '{text}' (expected one of theorem1, theorem1b, theorem2, theorem3, decay, viscosity)"
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSection {
    pub name: String,
    pub m: f64,
    pub dim: u32,
    pub ic: InitialCondition,
    pub r_min: f64,
    pub r_max: f64,
    pub n: usize,
    pub cfl: f64,
    pub t0: f64,
    pub snapshots: Vec<f64>,
    pub eps_diff: f64,
    pub bc_left: BoundaryCondition,
    pub bc_right: BoundaryCondition,
    pub max_steps: u64,
    pub output_dir: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Theorem1Section {
    pub p_list: Vec<f64>,
    pub factor: f64,
    pub window: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Theorem1bSection {
    pub factor: f64,
    pub window: Option<(f64, f64)>,
    pub bernstein_c: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Theorem2Section {
    pub k: f64,
    pub window_rate: f64,
    pub factor: f64,
    pub window: Option<(f64, f64)>,
    pub boundary_tol: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Theorem3Section {
    pub delta: f64,
    pub factor: f64,
    pub window: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecaySection {
    pub alpha_margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ViscositySection {
    pub k: f64,
    pub s_min: f64,
    pub s_max: f64,
    pub n: usize,
    pub tau_end: f64,
    pub lambdas: Vec<f64>,
    pub cfl: f64,
    pub max_steps: u64,
}

/// The whole configuration: one scenario, the experiments to run on
/// it, and per-experiment gate thresholds.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub scenario: ScenarioSection,
    pub run: Vec<ExperimentKind>,
    pub theorem1: Theorem1Section,
    pub theorem1b: Theorem1bSection,
    pub theorem2: Theorem2Section,
    pub theorem3: Theorem3Section,
    pub decay: DecaySection,
    pub viscosity: ViscositySection,
}

impl Default for Config {
    fn default() -> Self {
        Config::bump_default()
    }
}

impl Config {
    /// Canonical compactly-supported scenario: quadratic bump data at
    /// m = 3, N = 3, horizon t = 200, with the ramp-profile, graph,
    /// decay, and outer-region diagnostics selected.
    pub fn bump_default() -> Self {
        Config {
            scenario: ScenarioSection {
                name: "bump".into(),
                m: 3.0,
                dim: 3,
                ic: InitialCondition::Bump,
                r_min: (-6.0f64).exp(),
                r_max: (3.0f64).exp(),
                n: 8192,
                cfl: 0.9,
                t0: 0.0,
                snapshots: vec![
                    0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 30.0, 50.0, 70.0, 100.0, 140.0,
                    200.0,
                ],
                eps_diff: 1.0,
                bc_left: BoundaryCondition::Dirichlet(0.0),
                bc_right: BoundaryCondition::Dirichlet(0.0),
                max_steps: 400_000_000,
                output_dir: "out".into(),
            },
            run: vec![
                ExperimentKind::Theorem1,
                ExperimentKind::Theorem1b,
                ExperimentKind::Decay,
                ExperimentKind::Theorem3,
            ],
            theorem1: Theorem1Section {
                p_list: vec![1.0, 2.0],
                factor: 4.0,
                window: Some((1.0, 200.0)),
            },
            theorem1b: Theorem1bSection {
                factor: 4.0,
                window: Some((1.0, 200.0)),
                bernstein_c: 2.0,
            },
            theorem2: Theorem2Section {
                k: 1.0,
                window_rate: 8.0,
                factor: 4.0,
                window: Some((1.0, 50.0)),
                boundary_tol: 1e-2,
            },
            theorem3: Theorem3Section { delta: 0.5, factor: 3.0, window: Some((1.0, 100.0)) },
            decay: DecaySection { alpha_margin: 0.1 },
            viscosity: ViscositySection {
                k: 1.0,
                s_min: -1.0,
                s_max: 4.0,
                n: 2048,
                tau_end: 1.0,
                lambdas: vec![10.0, 100.0, 1000.0],
                cfl: 0.9,
                max_steps: 400_000_000,
            },
        }
    }

    /// Plateau scenario: level-1 data with a linear cutoff, on a grid
    /// deep enough that the origin proxy stays clean to t = 50.
    pub fn plateau_default() -> Self {
        let mut c = Config::bump_default();
        c.scenario.name = "plateau".into();
        c.scenario.ic = InitialCondition::Plateau { k: 1.0, plateau_end: 0.5, support: 1.0 };
        c.scenario.r_min = (-195.0f64).exp();
        c.scenario.r_max = (10.0f64).exp();
        c.scenario.n = 4096;
        c.scenario.snapshots = vec![1.0, 2.0, 5.0, 10.0, 20.0, 50.0];
        c.scenario.bc_right = BoundaryCondition::Dirichlet(1.0);
        c.run = vec![ExperimentKind::Theorem2];
        c
    }

    pub fn scenario_spec(&self) -> Result<ScenarioSpec> {
        let s = &self.scenario;
        Ok(ScenarioSpec {
            name: s.name.clone(),
            ic: s.ic.clone(),
            params: Parameters::new(s.m, s.dim)?,
            r_min: s.r_min,
            r_max: s.r_max,
            n: s.n,
            cfl: s.cfl,
            bc_left: s.bc_left,
            bc_right: s.bc_right,
            t0: s.t0,
            snapshot_times: s.snapshots.clone(),
            eps_diff: s.eps_diff,
            max_steps: s.max_steps,
        })
    }

    pub fn viscosity_sweep(&self) -> Result<ViscositySweep> {
        let v = &self.viscosity;
        Ok(ViscositySweep {
            params: Parameters::new(self.scenario.m, self.scenario.dim)?,
            k_level: v.k,
            s_min: v.s_min,
            s_max: v.s_max,
            n: v.n,
            tau_end: v.tau_end,
            lambdas: v.lambdas.clone(),
            cfl: v.cfl,
            max_steps: v.max_steps,
        })
    }

    pub fn theorem1_gate(&self) -> TrendGate {
        TrendGate { factor: self.theorem1.factor, window: self.theorem1.window }
    }

    pub fn theorem1b_gate(&self) -> TrendGate {
        TrendGate { factor: self.theorem1b.factor, window: self.theorem1b.window }
    }

    pub fn theorem2_gate(&self) -> TrendGate {
        TrendGate { factor: self.theorem2.factor, window: self.theorem2.window }
    }

    pub fn theorem3_gate(&self) -> TrendGate {
        TrendGate { factor: self.theorem3.factor, window: self.theorem3.window }
    }
}

// ---------------------------------------------------------------------------
// Emission.
// ---------------------------------------------------------------------------

fn join_f64(xs: &[f64]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn window_str(w: Option<(f64, f64)>) -> String {
    match w {
        None => "final_decade".into(),
        Some((lo, hi)) => format!("{lo}, {hi}"),
    }
}

fn ic_str(ic: &InitialCondition) -> String {
    match ic {
        InitialCondition::Bump => "bump".into(),
        InitialCondition::Plateau { k, plateau_end, support } => {
            format!("plateau {k} {plateau_end} {support}")
        }
        InitialCondition::Custom(_) => "custom".into(),
    }
}

fn bc_str(bc: BoundaryCondition) -> String {
    match bc {
        BoundaryCondition::Dirichlet(v) => format!("dirichlet {v}"),
        BoundaryCondition::NeumannZero => "neumann".into(),
    }
}

/// Render a configuration in canonical section and key order.
pub fn emit(c: &Config) -> String {
    let mut out = String::new();
    let s = &c.scenario;
    let _ = writeln!(out, "[scenario]");
    let _ = writeln!(out, "name = {}", s.name);
    let _ = writeln!(out, "m = {}", s.m);
    let _ = writeln!(out, "N = {}", s.dim);
    let _ = writeln!(out, "ic = {}", ic_str(&s.ic));
    let _ = writeln!(out, "r_min = {}", s.r_min);
    let _ = writeln!(out, "r_max = {}", s.r_max);
    let _ = writeln!(out, "n = {}", s.n);
    let _ = writeln!(out, "cfl = {}", s.cfl);
    let _ = writeln!(out, "t0 = {}", s.t0);
    let _ = writeln!(out, "snapshots = {}", join_f64(&s.snapshots));
    let _ = writeln!(out, "eps_diff = {}", s.eps_diff);
    let _ = writeln!(out, "bc_left = {}", bc_str(s.bc_left));
    let _ = writeln!(out, "bc_right = {}", bc_str(s.bc_right));
    let _ = writeln!(out, "max_steps = {}", s.max_steps);
    let _ = writeln!(out, "output_dir = {}", s.output_dir);
    let _ = writeln!(out);
    let _ = writeln!(out, "[experiment]");
    let _ = writeln!(
        out,
        "run = {}",
        c.run.iter().map(|k| k.as_str()).collect::<Vec<_>>().join(", ")
    );
    let _ = writeln!(out);
    let _ = writeln!(out, "[theorem1]");
    let _ = writeln!(out, "p_list = {}", join_f64(&c.theorem1.p_list));
    let _ = writeln!(out, "factor = {}", c.theorem1.factor);
    let _ = writeln!(out, "window = {}", window_str(c.theorem1.window));
    let _ = writeln!(out);
    let _ = writeln!(out, "[theorem1b]");
    let _ = writeln!(out, "factor = {}", c.theorem1b.factor);
    let _ = writeln!(out, "window = {}", window_str(c.theorem1b.window));
    let _ = writeln!(out, "bernstein_c = {}", c.theorem1b.bernstein_c);
    let _ = writeln!(out);
    let _ = writeln!(out, "[theorem2]");
    let _ = writeln!(out, "K = {}", c.theorem2.k);
    let _ = writeln!(out, "R = {}", c.theorem2.window_rate);
    let _ = writeln!(out, "factor = {}", c.theorem2.factor);
    let _ = writeln!(out, "window = {}", window_str(c.theorem2.window));
    let _ = writeln!(out, "boundary_tol = {}", c.theorem2.boundary_tol);
    let _ = writeln!(out);
    let _ = writeln!(out, "[theorem3]");
    let _ = writeln!(out, "delta = {}", c.theorem3.delta);
    let _ = writeln!(out, "factor = {}", c.theorem3.factor);
    let _ = writeln!(out, "window = {}", window_str(c.theorem3.window));
    let _ = writeln!(out);
    let _ = writeln!(out, "[decay]");
    let _ = writeln!(out, "alpha_margin = {}", c.decay.alpha_margin);
    let _ = writeln!(out);
    let _ = writeln!(out, "[viscosity]");
    let _ = writeln!(out, "K = {}", c.viscosity.k);
    let _ = writeln!(out, "s_min = {}", c.viscosity.s_min);
    let _ = writeln!(out, "s_max = {}", c.viscosity.s_max);
    let _ = writeln!(out, "n = {}", c.viscosity.n);
    let _ = writeln!(out, "tau_end = {}", c.viscosity.tau_end);
    let _ = writeln!(out, "lambdas = {}", join_f64(&c.viscosity.lambdas));
    let _ = writeln!(out, "cfl = {}", c.viscosity.cfl);
    let _ = writeln!(out, "max_steps = {}", c.viscosity.max_steps);
    out
}

// ---------------------------------------------------------------------------
// Parsing.
// ---------------------------------------------------------------------------

fn field(section: &str, key: &str) -> String {
    format!("[{section}] {key}")
}

fn parse_f64(section: &str, key: &str, v: &str) -> Result<f64> {
    v.trim().parse().map_err(|_| {
        Error::Config(format!("{}: expected a number, got '{v}'", field(section, key)))
    })
}

fn parse_int<T: std::str::FromStr>(section: &str, key: &str, v: &str) -> Result<T> {
    v.trim().parse().map_err(|_| {
        Error::Config(format!("{}: expected an integer, got '{v}'", field(section, key)))
    })
}

fn parse_f64_list(section: &str, key: &str, v: &str) -> Result<Vec<f64>> {
    v.split(',').map(|tok| parse_f64(section, key, tok)).collect()
}

fn parse_window(section: &str, key: &str, v: &str) -> Result<Option<(f64, f64)>> {
    if v.trim() == "final_decade" {
        return Ok(None);
    }
    let parts = parse_f64_list(section, key, v)?;
    if parts.len() != 2 {
        return Err(Error::Config(format!(
            "{}: expected 'final_decade' or 't_lo, t_hi', got '{v}'",
            field(section, key)
        )));
    }
    Ok(Some((parts[0], parts[1])))
}

fn parse_ic(section: &str, key: &str, v: &str) -> Result<InitialCondition> {
    let toks: Vec<&str> = v.split_whitespace().collect();
    match toks.as_slice() {
        ["bump"] => Ok(InitialCondition::Bump),
        ["plateau", k, edge, support] => InitialCondition::plateau(
            parse_f64(section, key, k)?,
            parse_f64(section, key, edge)?,
            parse_f64(section, key, support)?,
        ),
        _ => Err(Error::Config(format!(
            "{}: expected 'bump' or 'plateau <K> <plateau_end> <support>', got '{v}'",
            field(section, key)
        ))),
    }
}

fn parse_bc(section: &str, key: &str, v: &str) -> Result<BoundaryCondition> {
    let toks: Vec<&str> = v.split_whitespace().collect();
    match toks.as_slice() {
        ["neumann"] => Ok(BoundaryCondition::NeumannZero),
        ["dirichlet", val] => Ok(BoundaryCondition::Dirichlet(parse_f64(section, key, val)?)),
        _ => Err(Error::Config(format!(
            "{}: expected 'neumann' or 'dirichlet <value>', got '{v}'",
            field(section, key)
        ))),
    }
}

fn parse_kinds(v: &str) -> Result<Vec<ExperimentKind>> {
    v.split(',').map(|tok| ExperimentKind::parse(tok.trim())).collect()
}

/// Parse configuration text over the defaults.
pub fn parse(text: &str) -> Result<Config> {
    let mut c = Config::default();
    let mut section = String::new();
    let mut seen = BTreeSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let Some(name) = name.strip_suffix(']') else {
                return Err(Error::Config(format!("line {}: unterminated section header", idx + 1)));
            };
            section = name.trim().to_string();
            match section.as_str() {
                "scenario" | "experiment" | "theorem1" | "theorem1b" | "theorem2"
                | "theorem3" | "decay" | "viscosity" => {}
                other => return Err(Error::Config(format!("unknown section '[{other}]'"))),
            }
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Config(format!("line {}: expected 'key = value', got '{line}'", idx + 1)));
        };
        let key = key.trim();
        let value = value.trim();
        if section.is_empty() {
            return Err(Error::Config(format!("line {}: key '{key}' before any [section]", idx + 1)));
        }
        if !seen.insert(format!("{section}.{key}")) {
            return Err(Error::Config(format!("{}: duplicate key", field(&section, key))));
        }
        apply(&mut c, &section, key, value)?;
    }
    Ok(c)
}

fn apply(c: &mut Config, sec: &str, key: &str, v: &str) -> Result<()> {
    match (sec, key) {
        ("scenario", "name") => c.scenario.name = v.to_string(),
        ("scenario", "m") => c.scenario.m = parse_f64(sec, key, v)?,
        ("scenario", "N") => c.scenario.dim = parse_int(sec, key, v)?,
        ("scenario", "ic") => c.scenario.ic = parse_ic(sec, key, v)?,
        ("scenario", "r_min") => c.scenario.r_min = parse_f64(sec, key, v)?,
        ("scenario", "r_max") => c.scenario.r_max = parse_f64(sec, key, v)?,
        ("scenario", "n") => c.scenario.n = parse_int(sec, key, v)?,
        ("scenario", "cfl") => c.scenario.cfl = parse_f64(sec, key, v)?,
        ("scenario", "t0") => c.scenario.t0 = parse_f64(sec, key, v)?,
        ("scenario", "snapshots") => c.scenario.snapshots = parse_f64_list(sec, key, v)?,
        ("scenario", "eps_diff") => c.scenario.eps_diff = parse_f64(sec, key, v)?,
        ("scenario", "bc_left") => c.scenario.bc_left = parse_bc(sec, key, v)?,
        ("scenario", "bc_right") => c.scenario.bc_right = parse_bc(sec, key, v)?,
        ("scenario", "max_steps") => c.scenario.max_steps = parse_int(sec, key, v)?,
        ("scenario", "output_dir") => c.scenario.output_dir = v.to_string(),
        ("experiment", "run") => c.run = parse_kinds(v)?,
        ("theorem1", "p_list") => c.theorem1.p_list = parse_f64_list(sec, key, v)?,
        ("theorem1", "factor") => c.theorem1.factor = parse_f64(sec, key, v)?,
        ("theorem1", "window") => c.theorem1.window = parse_window(sec, key, v)?,
        ("theorem1b", "factor") => c.theorem1b.factor = parse_f64(sec, key, v)?,
        ("theorem1b", "window") => c.theorem1b.window = parse_window(sec, key, v)?,
        ("theorem1b", "bernstein_c") => c.theorem1b.bernstein_c = parse_f64(sec, key, v)?,
        ("theorem2", "K") => c.theorem2.k = parse_f64(sec, key, v)?,
        ("theorem2", "R") => c.theorem2.window_rate = parse_f64(sec, key, v)?,
        ("theorem2", "factor") => c.theorem2.factor = parse_f64(sec, key, v)?,
        ("theorem2", "window") => c.theorem2.window = parse_window(sec, key, v)?,
        ("theorem2", "boundary_tol") => c.theorem2.boundary_tol = parse_f64(sec, key, v)?,
        ("theorem3", "delta") => c.theorem3.delta = parse_f64(sec, key, v)?,
        ("theorem3", "factor") => c.theorem3.factor = parse_f64(sec, key, v)?,
        ("theorem3", "window") => c.theorem3.window = parse_window(sec, key, v)?,
        ("decay", "alpha_margin") => c.decay.alpha_margin = parse_f64(sec, key, v)?,
        ("viscosity", "K") => c.viscosity.k = parse_f64(sec, key, v)?,
        ("viscosity", "s_min") => c.viscosity.s_min = parse_f64(sec, key, v)?,
        ("viscosity", "s_max") => c.viscosity.s_max = parse_f64(sec, key, v)?,
        ("viscosity", "n") => c.viscosity.n = parse_int(sec, key, v)?,
        ("viscosity", "tau_end") => c.viscosity.tau_end = parse_f64(sec, key, v)?,
        ("viscosity", "lambdas") => c.viscosity.lambdas = parse_f64_list(sec, key, v)?,
        ("viscosity", "cfl") => c.viscosity.cfl = parse_f64(sec, key, v)?,
        ("viscosity", "max_steps") => c.viscosity.max_steps = parse_int(sec, key, v)?,
        _ => {
            return Err(Error::Config(format!("unknown key '{key}' in [{sec}]")));
        }
    }
    Ok(())
}

pub fn load(path: &Path) -> Result<Config> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("reading {}: {e}", path.display())))?;
    parse(&text)
}
