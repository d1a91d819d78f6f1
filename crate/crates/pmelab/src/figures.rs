//! Plot-ready CSV data for the three anchor scenarios (all m = 3,
//! N = 3): the bump run against the self-similar ramp profile, the
//! plateau run against its closed-form limit, and a run whose maximum
//! starts away from the origin and migrates toward it.
//!
//! Rendering is out of scope — the emitted `x,curve,value` files are
//! the contract, consumable by any plotting tool, and byte-stable
//! across reruns.

use crate::error::{Error, Result};
use crate::experiments::{run_scenario, ScenarioRun, ScenarioSpec};
use crate::grid::{InitialCondition, RadialGrid};
use crate::params::Parameters;
use crate::profiles::{eval_ek, eval_f, solve_k};
use crate::report::curves_csv;
use crate::solver::BoundaryCondition;

/// One emitted file: base name plus rendered CSV content.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedCsv {
    pub filename: String,
    pub csv: String,
}

/// Grid size each figure uses unless overridden.
pub fn default_n(which: u8) -> Result<usize> {
    match which {
        1 | 2 => Ok(2048),
        3 => Ok(1024),
        other => Err(Error::Validation(format!("no figure {other}; choose 1, 2, or 3"))),
    }
}

/// Produce the CSV files for figure 1, 2 or 3 at grid size `n`.
pub fn figure(which: u8, n: usize) -> Result<Vec<NamedCsv>> {
    match which {
        1 => figure1(n),
        2 => figure2(n),
        3 => figure3(n),
        other => Err(Error::Validation(format!("no figure {other}; choose 1, 2, or 3"))),
    }
}

fn base_spec(name: &str, ic: InitialCondition, r_min: f64, r_max: f64, n: usize) -> ScenarioSpec {
    ScenarioSpec {
        name: name.into(),
        ic,
        params: Parameters::new(3.0, 3).expect("m = 3, N = 3 is valid"),
        r_min,
        r_max,
        n,
        cfl: 0.9,
        bc_left: BoundaryCondition::Dirichlet(0.0),
        bc_right: BoundaryCondition::Dirichlet(0.0),
        t0: 0.0,
        snapshot_times: Vec::new(),
        eps_diff: 1.0,
        max_steps: u64::MAX,
    }
}

fn evolution_rows(run: &ScenarioRun) -> Vec<(f64, String, f64)> {
    let mut rows = Vec::new();
    for (i, r) in run.u0.grid.nodes().enumerate() {
        rows.push((r, "u t=0".to_string(), run.u0.values[i]));
    }
    for u in &run.radial {
        let label = format!("u t={}", u.t);
        for (i, r) in u.grid.nodes().enumerate() {
            rows.push((r, label.clone(), u.values[i]));
        }
    }
    rows
}

fn csv_of(rows: &[(f64, String, f64)]) -> String {
    curves_csv(rows.iter().map(|(x, name, v)| (*x, name.as_str(), *v)))
}

/// Bump data versus the mass-matched ramp profile F.
fn figure1(n: usize) -> Result<Vec<NamedCsv>> {
    let mut spec =
        base_spec("fig1", InitialCondition::Bump, (-6.0f64).exp(), (3.0f64).exp(), n);
    spec.snapshot_times = vec![0.5, 2.0, 10.0];
    let run = run_scenario(spec)?;
    let p = &run.spec.params;
    let k = solve_k(crate::diagnostics::weighted_mass_m(&run.u0, p), p)?;
    let mut profile_rows = Vec::new();
    for u in &run.radial {
        let label = format!("F t={}", u.t);
        for r in u.grid.nodes() {
            profile_rows.push((r, label.clone(), eval_f(p, k, r, u.t)?));
        }
    }
    Ok(vec![
        NamedCsv { filename: "fig1_profile.csv".into(), csv: csv_of(&profile_rows) },
        NamedCsv { filename: "fig1_evolution.csv".into(), csv: csv_of(&evolution_rows(&run)) },
    ])
}

/// Plateau data versus the closed-form plateau profile E_K.
fn figure2(n: usize) -> Result<Vec<NamedCsv>> {
    let mut spec = base_spec(
        "fig2",
        InitialCondition::Plateau { k: 1.0, plateau_end: 0.5, support: 1.0 },
        (-30.0f64).exp(),
        (5.0f64).exp(),
        n,
    );
    spec.snapshot_times = vec![0.5, 1.0, 2.0, 5.0];
    spec.bc_right = BoundaryCondition::Dirichlet(1.0);
    let run = run_scenario(spec)?;
    let p = &run.spec.params;
    let mut profile_rows = Vec::new();
    for u in &run.radial {
        let label = format!("E t={}", u.t);
        for r in u.grid.nodes() {
            profile_rows.push((r, label.clone(), eval_ek(p, 1.0, r, u.t)?));
        }
    }
    Ok(vec![
        NamedCsv { filename: "fig2_profile.csv".into(), csv: csv_of(&profile_rows) },
        NamedCsv { filename: "fig2_evolution.csv".into(), csv: csv_of(&evolution_rows(&run)) },
    ])
}

/// Data whose maximum sits away from the origin: the max then drifts
/// to the origin and flattens.  Emits the evolution plus a
/// (max value, argmax radius) track.
fn figure3(n: usize) -> Result<Vec<NamedCsv>> {
    let r_min = (-6.0f64).exp();
    let r_max = (2.0f64).exp();
    let grid = RadialGrid::new(r_min, r_max, n)?;
    let plateau = InitialCondition::Plateau { k: 0.5, plateau_end: 1.0, support: 2.0 };
    let shape = |r: f64| plateau.eval(r).max((4.0 * (r - 0.5) * (1.5 - r)).max(0.0));
    let points: Vec<(f64, f64)> = grid.nodes().map(|r| (r, shape(r))).collect();
    let mut spec =
        base_spec("fig3", InitialCondition::custom(points)?, r_min, r_max, n);
    spec.snapshot_times = vec![0.1, 0.5, 1.0, 2.0, 5.0, 10.0];
    let run = run_scenario(spec)?;
    let mut track_rows = Vec::new();
    for u in &run.radial {
        let (mut best_i, mut best) = (0, f64::NEG_INFINITY);
        for (i, &v) in u.values.iter().enumerate() {
            if v > best {
                best = v;
                best_i = i;
            }
        }
        track_rows.push((u.t, "max_u".to_string(), best));
        track_rows.push((u.t, "argmax_r".to_string(), u.grid.node(best_i)));
    }
    Ok(vec![
        NamedCsv { filename: "fig3_evolution.csv".into(), csv: csv_of(&evolution_rows(&run)) },
        NamedCsv { filename: "fig3_maximum.csv".into(), csv: csv_of(&track_rows) },
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure1_emits_profile_and_evolution() {
        let files = figure(1, 192).unwrap();
        assert_eq!(files.len(), 2);
        assert_eq!(files[0].filename, "fig1_profile.csv");
        assert!(files[0].csv.starts_with("x,curve,value\n"));
        assert!(files[1].csv.contains("u t=0.5"));
        assert!(files[1].csv.contains("u t=10"));
    }

    #[test]
    fn figures_are_deterministic() {
        assert_eq!(figure(1, 160).unwrap(), figure(1, 160).unwrap());
        assert_eq!(figure(3, 160).unwrap(), figure(3, 160).unwrap());
    }

    #[test]
    fn figure3_maximum_migrates_toward_the_origin() {
        let files = figure(3, 512).unwrap();
        let track = &files[1].csv;
        let mut argmax = Vec::new();
        for line in track.lines().skip(1) {
            let mut cols = line.split(',');
            let t: f64 = cols.next().unwrap().parse().unwrap();
            let name = cols.next().unwrap();
            let v: f64 = cols.next().unwrap().parse().unwrap();
            if name == "argmax_r" {
                argmax.push((t, v));
            }
        }
        assert_eq!(argmax.len(), 6);
        let first = argmax.iter().find(|&&(t, _)| t == 0.1).unwrap().1;
        let last = argmax.iter().find(|&&(t, _)| t == 10.0).unwrap().1;
        assert!(
            (first - 1.0).abs() < 0.2,
            "early maximum sits near r = 1, got {first}"
        );
        assert!(last < 0.5 * first, "maximum must migrate inward: {first} -> {last}");
    }

    #[test]
    fn unknown_figure_is_rejected() {
        assert!(figure(4, 64).is_err());
        assert!(default_n(0).is_err());
        assert_eq!(default_n(3).unwrap(), 1024);
    }
}
