//! Theorem-level experiments: each one runs (or reuses) a scenario,
//! tracks the functionals its statement is about, and records pass/fail
//! gates on the resulting trends.
//!
//! The expensive part of every experiment is the time integration, so
//! the experiment logic is split in two layers: `run_scenario` produces
//! a [`ScenarioRun`] (line snapshots plus their radial views), and the
//! `*_series` functions turn one into an [`ExperimentReport`].  The
//! `experiment_*` wrappers bundle both for callers that own their run;
//! callers comparing several diagnostics of one solution (as the
//! acceptance suite does) share a single `ScenarioRun`.

use crate::diagnostics::{
    decay_fit, graph_distance, l12_norm, norm_pn, weighted_mass_m, ExperimentReport, FittedRate,
};
use crate::error::{Error, Result};
use crate::grid::{InitialCondition, LineField, MultiGraph, RadialField, RadialGrid};
use crate::params::Parameters;
use crate::profiles::{
    bd_l12_mass, eval_bd, eval_ek, eval_f, fbar_graph, solve_d, solve_k, solve_k_quadrature,
};
use crate::solver::{riemann_exact, run_line, BoundaryCondition, LineRun, RiemannProblem, SolverConfig};
use crate::transforms::{tr1_forward, tr1_inverse};

// ---------------------------------------------------------------------------
// Scenarios.
// ---------------------------------------------------------------------------

/// A complete description of one solver run: radially-posed data, the
/// log grid, line-frame boundary conditions (left = s_min = the large-r
/// side), and the snapshot schedule in the radial clock t.
#[derive(Debug, Clone)]
pub struct ScenarioSpec {
    pub name: String,
    pub ic: InitialCondition,
    pub params: Parameters,
    pub r_min: f64,
    pub r_max: f64,
    pub n: usize,
    pub cfl: f64,
    pub bc_left: BoundaryCondition,
    pub bc_right: BoundaryCondition,
    /// Data are sampled at this time (0 for raw initial data; positive
    /// when starting from a profile snapshot).
    pub t0: f64,
    pub snapshot_times: Vec<f64>,
    pub eps_diff: f64,
    pub max_steps: u64,
}

/// The finished run: initial radial data, line snapshots, and their
/// radial views (index-aligned with `line.snapshots`).
#[derive(Debug, Clone)]
pub struct ScenarioRun {
    pub spec: ScenarioSpec,
    pub u0: RadialField,
    pub line: LineRun,
    pub radial: Vec<RadialField>,
}

/// Integrate a scenario in the line frame and cache the radial views.
pub fn run_scenario(spec: ScenarioSpec) -> Result<ScenarioRun> {
    let p = spec.params;
    let grid = RadialGrid::new(spec.r_min, spec.r_max, spec.n)?;
    let u0 = RadialField::from_fn(grid, spec.t0, |r| spec.ic.eval(r))?;
    let w0 = tr1_forward(&u0, &p)?;
    let scale = p.nm2() * p.nm2();
    let t_end = spec.snapshot_times.last().copied().unwrap_or(spec.t0);
    let cfg = SolverConfig::new(
        spec.cfl,
        spec.bc_left,
        spec.bc_right,
        t_end * scale,
        spec.snapshot_times.iter().map(|&t| t * scale).collect(),
        spec.max_steps,
    )?;
    let line = run_line(w0, &cfg, &p, spec.eps_diff)?;
    let radial =
        line.snapshots.iter().map(|w| tr1_inverse(w, &p)).collect::<Result<Vec<_>>>()?;
    Ok(ScenarioRun { spec, u0, line, radial })
}

// ---------------------------------------------------------------------------
// Trend gates.
// ---------------------------------------------------------------------------

/// PASS when a series decreases by at least `factor` across a time
/// window (default: the final decade).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrendGate {
    pub factor: f64,
    /// (t_lo, t_hi); None gates on [t_end/10, t_end].
    pub window: Option<(f64, f64)>,
}

impl TrendGate {
    pub fn final_decade(factor: f64) -> Self {
        TrendGate { factor, window: None }
    }

    pub fn over(factor: f64, t_lo: f64, t_hi: f64) -> Self {
        TrendGate { factor, window: Some((t_lo, t_hi)) }
    }

    /// Evaluate against a (time, value) series; returns (pass, detail).
    pub fn check(&self, series: &[(f64, f64)]) -> (bool, String) {
        if series.len() < 2 {
            return (false, "fewer than two series points".into());
        }
        let t_end = series[series.len() - 1].0;
        let (lo, hi) = self.window.unwrap_or((t_end / 10.0, t_end));
        let first = series.iter().find(|&&(t, _)| t >= lo);
        let last = series.iter().rev().find(|&&(t, _)| t <= hi);
        let (Some(&(t0, v0)), Some(&(t1, v1))) = (first, last) else {
            return (false, format!("no series points inside the window [{lo}, {hi}]"));
        };
        if t1 <= t0 {
            return (false, format!("window [{lo}, {hi}] holds no decrease interval"));
        }
        if v1 == 0.0 {
            return (true, format!("{v0:.4e} @ t={t0} -> 0 @ t={t1} (need >= {}x)", self.factor));
        }
        let ratio = v0 / v1;
        (
            ratio >= self.factor,
            format!(
                "{v0:.4e} @ t={t0} -> {v1:.4e} @ t={t1} (ratio {ratio:.2}, need >= {}x)",
                self.factor
            ),
        )
    }
}

fn fit_rate(report: &mut ExperimentReport, name: &str) {
    let series = report.series_of(name);
    match decay_fit(&series) {
        Ok(fit) => {
            report
                .fitted_rates
                .insert(name.to_string(), FittedRate { exponent: fit.alpha, residual: 1.0 - fit.r2 });
        }
        Err(e) => report.warnings.push(format!("no decay fit for '{name}': {e}")),
    }
}

fn adopt_run_warnings(report: &mut ExperimentReport, run: &ScenarioRun) {
    report.warnings.extend(run.line.warnings.iter().cloned());
}

// ---------------------------------------------------------------------------
// Weighted error functional of the ramp-profile comparison.
// ---------------------------------------------------------------------------

fn ep_name(p_exp: f64) -> String {
    if p_exp.fract() == 0.0 {
        format!("e_p{}", p_exp as i64)
    } else {
        format!("e_p{p_exp}")
    }
}

/// t^{(p−1)/(m·p)}·‖u(t) − F(t)‖_{p,N} (unrooted, rooted).
pub(crate) fn ep_functional(
    u: &RadialField,
    k: f64,
    p_exp: f64,
    p: &Parameters,
) -> Result<(f64, f64)> {
    let t = u.t;
    let diff = RadialField::new(
        u.grid,
        u.grid
            .nodes()
            .zip(&u.values)
            .map(|(r, &v)| Ok((v - eval_f(p, k, r, t)?).abs()))
            .collect::<Result<Vec<_>>>()?,
        t,
    )?;
    let norm = norm_pn(&diff, p_exp, p)?;
    let prefactor = t.powf((p_exp - 1.0) / (p.m * p_exp));
    Ok((prefactor * norm.unrooted, prefactor * norm.rooted))
}

// ---------------------------------------------------------------------------
// Theorem 1: weighted p-norm convergence to the ramp profile.
// ---------------------------------------------------------------------------

/// Weighted-norm error series e_p(t) against the mass-matched ramp
/// profile, for each p in `p_list`.  Gates: the e_p1 trend, and
/// agreement of the closed-form k with the quadrature root-finder.
pub fn theorem1_series(
    run: &ScenarioRun,
    p_list: &[f64],
    gate: &TrendGate,
) -> Result<ExperimentReport> {
    let p = &run.spec.params;
    let mut report = ExperimentReport::new(format!("{}/theorem1", run.spec.name), *p);
    adopt_run_warnings(&mut report, run);
    let m_u0 = weighted_mass_m(&run.u0, p);
    let k = solve_k(m_u0, p)?;
    let k_quad = solve_k_quadrature(m_u0, p)?;
    report.push_point(0.0, "k", k)?;
    let k_err = (k - k_quad).abs() / k.max(1e-300);
    report.push_gate(
        "k closed form vs quadrature",
        k_err <= 1e-9,
        format!("k={k:.12}, quadrature {k_quad:.12}, relative gap {k_err:.2e} (need <= 1e-9)"),
    );
    for u in &run.radial {
        if u.t <= 0.0 {
            continue;
        }
        for &pe in p_list {
            let (unrooted, rooted) = ep_functional(u, k, pe, p)?;
            report.push_point(u.t, ep_name(pe), unrooted)?;
            if pe != 1.0 {
                report.push_point(u.t, format!("{}_rooted", ep_name(pe)), rooted)?;
            }
        }
    }
    let series = report.series_of("e_p1");
    let (pass, detail) = gate.check(&series);
    report.push_gate("e_p1 trend", pass, detail);
    fit_rate(&mut report, "e_p1");
    Ok(report)
}

pub fn experiment_theorem1(
    spec: ScenarioSpec,
    p_list: &[f64],
    gate: &TrendGate,
) -> Result<ExperimentReport> {
    theorem1_series(&run_scenario(spec)?, p_list, gate)
}

// ---------------------------------------------------------------------------
// Theorem 1b: convergence in the sense of graphs.
// ---------------------------------------------------------------------------

/// The rescaled solution ū(y, t) = t^{1/m}·u(e^{−y·t^{1/m}}, t) as a
/// univalued graph over increasing y.
pub fn ubar_graph(u: &RadialField, p: &Parameters) -> Result<MultiGraph> {
    if !(u.t > 0.0) {
        return Err(Error::Validation(format!("graph rescaling needs t > 0, got {}", u.t)));
    }
    let tm = u.t.powf(1.0 / p.m);
    // r increasing means y = −log(r)/t^{1/m} decreasing: reverse.
    MultiGraph::univalued(
        u.grid
            .nodes()
            .zip(&u.values)
            .map(|(r, &v)| (-r.ln() / tm, tm * v))
            .collect::<Vec<_>>()
            .into_iter()
            .rev(),
    )
}

/// Largest discrete slope of ū^{m−1} in y at one snapshot.
fn bernstein_slope(u: &RadialField, p: &Parameters) -> f64 {
    let tm = u.t.powf(1.0 / p.m);
    let dy = u.grid.dlog / tm;
    let e = p.m - 1.0;
    let pw = |v: f64| if e == 2.0 { v * v } else { v.powf(e) };
    let mut worst = f64::NEG_INFINITY;
    // y decreases with r, so the slope in y pairs cell i+1 (smaller y)
    // with cell i: d(v^{m-1})/dy = (pw(v_i) - pw(v_{i+1}))/dy reading
    // left-to-right in y after the reversal.
    let vals = &u.values;
    for i in 0..vals.len() - 1 {
        let slope = (pw(tm * vals[i]) - pw(tm * vals[i + 1])) / dy;
        worst = worst.max(slope);
    }
    worst
}

/// Graph-distance series between ū(·, t) and the stationary ramp with
/// jump, plus the discrete gradient bound max (ū^{m−1})_y ≤ 1/m + C·ds.
pub fn theorem1b_series(
    run: &ScenarioRun,
    gate: &TrendGate,
    bernstein_c: f64,
) -> Result<ExperimentReport> {
    let p = &run.spec.params;
    let mut report = ExperimentReport::new(format!("{}/theorem1b", run.spec.name), *p);
    adopt_run_warnings(&mut report, run);
    let k = solve_k(weighted_mass_m(&run.u0, p), p)?;
    report.push_point(0.0, "k", k)?;
    let ds = run.line.snapshots[0].grid.ds;
    let mut worst_excess = f64::NEG_INFINITY;
    for u in &run.radial {
        if u.t <= 0.0 {
            continue;
        }
        let ubar = ubar_graph(u, p)?;
        let reference = fbar_graph(p, k, ubar.x_min(), ubar.x_max(), 2049)?;
        let d = graph_distance(&ubar, &reference)?;
        report.push_point(u.t, "hausdorff", d.hausdorff)?;
        report.push_point(u.t, "pointwise_sup", d.pointwise_sup)?;
        let slope = bernstein_slope(u, p);
        report.push_point(u.t, "bernstein_slope", slope)?;
        worst_excess = worst_excess.max(slope - 1.0 / p.m);
    }
    let series = report.series_of("hausdorff");
    let (pass, detail) = gate.check(&series);
    report.push_gate("hausdorff trend", pass, detail);
    let bound = bernstein_c * ds;
    report.push_gate(
        "gradient bound",
        worst_excess <= bound,
        format!(
            "max slope excess over 1/m: {worst_excess:.4e} (allowed C*ds = {bound:.4e}, C = {bernstein_c})"
        ),
    );
    fit_rate(&mut report, "hausdorff");
    Ok(report)
}

pub fn experiment_theorem1b(
    spec: ScenarioSpec,
    gate: &TrendGate,
    bernstein_c: f64,
) -> Result<ExperimentReport> {
    theorem1b_series(&run_scenario(spec)?, gate, bernstein_c)
}

// ---------------------------------------------------------------------------
// Theorem 2: uniform convergence to the plateau profile.
// ---------------------------------------------------------------------------

/// Sup-error series against the plateau profile on the expanding
/// windows {e^{−R·t} ≤ r ≤ e^{R·t}}, the boundary proxy |u(r_min,t)−K|,
/// and a monotonicity check (data nonincreasing in r must stay so).
pub fn theorem2_series(
    run: &ScenarioRun,
    k_level: f64,
    window_rate: f64,
    gate: &TrendGate,
    boundary_tol: f64,
) -> Result<ExperimentReport> {
    if !(k_level > 0.0) {
        return Err(Error::Validation(format!("plateau level must be positive, got {k_level}")));
    }
    let p = &run.spec.params;
    let mut report = ExperimentReport::new(format!("{}/theorem2", run.spec.name), *p);
    adopt_run_warnings(&mut report, run);
    let mut worst_gap = 0.0f64;
    let mut worst_monotone = 0.0f64;
    for u in &run.radial {
        if u.t <= 0.0 {
            continue;
        }
        let r_lo = (-window_rate * u.t).exp();
        let r_hi = (window_rate * u.t).exp();
        let mut sup = 0.0f64;
        for (i, r) in u.grid.nodes().enumerate() {
            if r < r_lo || r > r_hi {
                continue;
            }
            sup = sup.max((u.values[i] - eval_ek(p, k_level, r, u.t)?).abs());
        }
        report.push_point(u.t, "sup_err_window", sup)?;
        let gap = (u.values[0] - k_level).abs();
        report.push_point(u.t, "boundary_gap", gap)?;
        worst_gap = worst_gap.max(gap);
        // u must stay nonincreasing in r: flag the worst upward jump.
        let climb = u
            .values
            .windows(2)
            .map(|ab| ab[1] - ab[0])
            .fold(0.0f64, f64::max);
        worst_monotone = worst_monotone.max(climb);
    }
    let series = report.series_of("sup_err_window");
    let (pass, detail) = gate.check(&series);
    report.push_gate("sup error trend", pass, detail);
    report.push_gate(
        "origin value",
        worst_gap <= boundary_tol,
        format!("max |u(r_min,t) - K| = {worst_gap:.4e} (need <= {boundary_tol:.1e})"),
    );
    report.push_gate(
        "monotone in r",
        worst_monotone <= 1e-12 * k_level,
        format!("worst upward slope step {worst_monotone:.3e}"),
    );

    // NOTE: u(r_min) proxies u(0): the grid must extend ≥ 30% past the
    // plateau edge at the horizon for the proxy to be trustworthy.
    let t_end = run.spec.snapshot_times.last().copied().unwrap_or(0.0);
    let edge_s = p.m * k_level.powf(p.m - 1.0) * p.nm2() * p.nm2() * t_end;
    let s_max = -p.nm2() * run.spec.r_min.ln();
    if s_max < 1.3 * edge_s {
        report.warnings.push(format!(
            "grid reaches s = {s_max:.1} but the plateau edge reaches {edge_s:.1} at t = {t_end}; \
             the origin proxy may be contaminated"
        ));
    }
    Ok(report)
}

pub fn experiment_theorem2(
    spec: ScenarioSpec,
    k_level: f64,
    window_rate: f64,
    gate: &TrendGate,
    boundary_tol: f64,
) -> Result<ExperimentReport> {
    theorem2_series(&run_scenario(spec)?, k_level, window_rate, gate, boundary_tol)
}

// ---------------------------------------------------------------------------
// Theorem 3: outer-region convergence to the logarithmic solution.
// ---------------------------------------------------------------------------

/// Outer-region error series sup {r ≥ δ·t^{1/((m−1)(N−2))}} of
/// t^{1/(m−1)}·|u − B_D|, with D matched to the data's weighted mass.
pub fn theorem3_series(run: &ScenarioRun, delta: f64, gate: &TrendGate) -> Result<ExperimentReport> {
    if !(delta > 0.0) {
        return Err(Error::Validation(format!("outer-region delta must be positive, got {delta}")));
    }
    let p = &run.spec.params;
    let mut report = ExperimentReport::new(format!("{}/theorem3", run.spec.name), *p);
    adopt_run_warnings(&mut report, run);
    let mass = l12_norm(&run.u0, p);
    let d_level = solve_d(mass, p, 1.0)?;
    report.push_point(0.0, "D", d_level)?;
    let matched = bd_l12_mass(d_level, p, 1.0)?;
    let self_err = (matched - mass).abs() / mass;
    report.push_gate(
        "D self-consistency",
        self_err <= 1e-8,
        format!("mass(D) reproduces the data mass to {self_err:.2e} (need <= 1e-8)"),
    );
    let kappa = 1.0 / ((p.m - 1.0) * p.nm2());
    let scaling = 1.0 / (p.m - 1.0);
    for u in &run.radial {
        if u.t <= 0.0 {
            continue;
        }
        let r_lo = delta * u.t.powf(kappa);
        let mut sup = 0.0f64;
        for (i, r) in u.grid.nodes().enumerate() {
            if r < r_lo {
                continue;
            }
            sup = sup.max((u.values[i] - eval_bd(p, d_level, r, u.t)?).abs());
        }
        report.push_point(u.t, "outer_err", u.t.powf(scaling) * sup)?;
    }
    let series = report.series_of("outer_err");
    let (pass, detail) = gate.check(&series);
    report.push_gate("outer error trend", pass, detail);
    Ok(report)
}

pub fn experiment_theorem3(
    spec: ScenarioSpec,
    delta: f64,
    gate: &TrendGate,
) -> Result<ExperimentReport> {
    theorem3_series(&run_scenario(spec)?, delta, gate)
}

// ---------------------------------------------------------------------------
// Sup-norm decay rate.
// ---------------------------------------------------------------------------

/// Sup-norm decay series and its fitted exponent; gate: the fitted
/// alpha lies within `alpha_margin` (relatively) of the target 1/m.
pub fn decay_series(run: &ScenarioRun, alpha_margin: f64) -> Result<ExperimentReport> {
    let p = &run.spec.params;
    let mut report = ExperimentReport::new(format!("{}/decay", run.spec.name), *p);
    adopt_run_warnings(&mut report, run);
    for u in &run.radial {
        if u.t <= 0.0 {
            continue;
        }
        report.push_point(u.t, "sup_u", u.max_value())?;
    }
    let series = report.series_of("sup_u");
    let fit = decay_fit(&series)?;
    report
        .fitted_rates
        .insert("sup_u".into(), FittedRate { exponent: fit.alpha, residual: 1.0 - fit.r2 });
    let target = 1.0 / p.m;
    let (lo, hi) = (target * (1.0 - alpha_margin), target * (1.0 + alpha_margin));
    report.push_gate(
        "decay exponent",
        fit.alpha >= lo && fit.alpha <= hi,
        format!(
            "fitted alpha = {:.4} over the final decade (need within [{lo:.4}, {hi:.4}], r2 = {:.6})",
            fit.alpha, fit.r2
        ),
    );
    Ok(report)
}

pub fn experiment_decay(spec: ScenarioSpec, alpha_margin: f64) -> Result<ExperimentReport> {
    decay_series(&run_scenario(spec)?, alpha_margin)
}

// ---------------------------------------------------------------------------
// Vanishing-viscosity sweep.
// ---------------------------------------------------------------------------

/// Controls for the viscosity sweep: Heaviside data 0 → K on a line
/// grid, integrated to `tau_end` with diffusion 1/λ for each λ, then
/// compared in L¹ against the exact rarefaction fan.
#[derive(Debug, Clone)]
pub struct ViscositySweep {
    pub params: Parameters,
    pub k_level: f64,
    pub s_min: f64,
    pub s_max: f64,
    pub n: usize,
    pub tau_end: f64,
    pub lambdas: Vec<f64>,
    pub cfl: f64,
    pub max_steps: u64,
}

fn heaviside_run(sweep: &ViscositySweep, eps: f64) -> Result<LineField> {
    let g = crate::grid::LineGrid::new(sweep.s_min, sweep.s_max, sweep.n)?;
    let k = sweep.k_level;
    let w0 = LineField::from_fn(g, 0.0, |s| if s < 0.0 { 0.0 } else { k })?;
    let cfg = SolverConfig::new(
        sweep.cfl,
        BoundaryCondition::Dirichlet(0.0),
        BoundaryCondition::Dirichlet(k),
        sweep.tau_end,
        vec![sweep.tau_end],
        sweep.max_steps,
    )?;
    let run = run_line(w0, &cfg, &sweep.params, eps)?;
    Ok(run.snapshots.into_iter().next().expect("one snapshot requested"))
}

fn l1_distance_to_fan(w: &LineField, sweep: &ViscositySweep) -> Result<f64> {
    let rp = RiemannProblem::new(0.0, sweep.k_level, sweep.params.m)?;
    let mut acc = 0.0;
    for (j, s) in w.grid.centers().enumerate() {
        acc += (w.values[j] - riemann_exact(&rp, s, w.tau)?).abs();
    }
    Ok(acc * w.grid.ds)
}

/// L¹ distance to the exact fan for each λ (series keyed by λ), plus
/// the pure-advection scheme's own error as the comparison floor.
/// Gates: distances strictly decreasing in λ; the finest λ within
/// 3× the floor.
pub fn viscosity_series(sweep: &ViscositySweep) -> Result<ExperimentReport> {
    if sweep.lambdas.len() < 2 || sweep.lambdas.windows(2).any(|ab| ab[0] >= ab[1]) {
        return Err(Error::Validation(
            "viscosity sweep needs at least two strictly increasing lambdas".into(),
        ));
    }
    let mut report = ExperimentReport::new("viscosity", sweep.params);
    let mut errors = Vec::with_capacity(sweep.lambdas.len());
    for &lambda in &sweep.lambdas {
        if !(lambda > 0.0) {
            return Err(Error::Validation(format!("lambda must be positive, got {lambda}")));
        }
        let w = heaviside_run(sweep, 1.0 / lambda)?;
        let err = l1_distance_to_fan(&w, sweep)?;
        report.push_point(lambda, "l1_distance_to_fan", err)?;
        errors.push(err);
    }
    let w0 = heaviside_run(sweep, 0.0)?;
    let floor = l1_distance_to_fan(&w0, sweep)?;
    report.push_point(*sweep.lambdas.last().unwrap(), "scheme_self_error", floor)?;
    let decreasing = errors.windows(2).all(|ab| ab[1] < ab[0]);
    let shown: Vec<String> = errors.iter().map(|e| format!("{e:.3e}")).collect();
    report.push_gate(
        "errors decrease in lambda",
        decreasing,
        format!("L1 errors [{}] across lambda = {:?}", shown.join(", "), sweep.lambdas),
    );
    let last = *errors.last().unwrap();
    report.push_gate(
        "limit error near scheme floor",
        last <= 3.0 * floor,
        format!("final error {last:.4e} vs 3x scheme self-error {:.4e}", 3.0 * floor),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p33() -> Parameters {
        Parameters::new(3.0, 3).unwrap()
    }

    fn short_bump(n: usize, times: Vec<f64>) -> ScenarioSpec {
        ScenarioSpec {
            name: "bump-test".into(),
            ic: InitialCondition::Bump,
            params: p33(),
            r_min: (-6.0f64).exp(),
            r_max: (3.0f64).exp(),
            n,
            cfl: 0.9,
            bc_left: BoundaryCondition::Dirichlet(0.0),
            bc_right: BoundaryCondition::Dirichlet(0.0),
            t0: 0.0,
            snapshot_times: times,
            eps_diff: 1.0,
            max_steps: u64::MAX,
        }
    }

    #[test]
    fn ramp_error_functional_vanishes_on_the_exact_profile() {
        let p = p33();
        let k = 0.8;
        let g = RadialGrid::new((-5.0f64).exp(), 1.5, 4097).unwrap();
        for t in [1.0, 10.0] {
            let f = RadialField::from_fn(g, t, |r| eval_f(&p, k, r, t).unwrap()).unwrap();
            for pe in [1.0, 2.0] {
                let (unrooted, _) = ep_functional(&f, k, pe, &p).unwrap();
                assert!(unrooted.abs() < 1e-12, "t={t} p={pe}: {unrooted}");
            }
        }
    }

    #[test]
    fn trend_gate_reads_windows_correctly() {
        let series = vec![(1.0, 8.0), (5.0, 4.0), (10.0, 2.0), (100.0, 1.0)];
        let (pass, _) = TrendGate::over(4.0, 1.0, 100.0).check(&series);
        assert!(pass, "8 -> 1 is an 8x decrease");
        let (pass, _) = TrendGate::over(4.0, 5.0, 100.0).check(&series);
        assert!(pass, "4 -> 1 meets the 4x bar exactly");
        let (pass, _) = TrendGate::over(4.1, 5.0, 100.0).check(&series);
        assert!(!pass, "4 -> 1 misses a 4.1x bar");
        // Default window is the final decade [10, 100].
        let (pass, detail) = TrendGate::final_decade(2.0).check(&series);
        assert!(pass, "{detail}");
        // A series hitting exactly zero passes any factor.
        let (pass, _) = TrendGate::over(1e9, 1.0, 2.0).check(&[(1.0, 0.5), (2.0, 0.0)]);
        assert!(pass);
    }

    #[test]
    fn ubar_graph_is_increasing_in_y_and_scales_w() {
        let p = p33();
        let g = RadialGrid::new(0.1, 2.0, 65).unwrap();
        let t = 4.0;
        let u = RadialField::from_fn(g, t, |r| 1.0 / (1.0 + r)).unwrap();
        let graph = ubar_graph(&u, &p).unwrap();
        let s = graph.samples();
        assert_eq!(s.len(), 65);
        assert!(s.windows(2).all(|ab| ab[0].x < ab[1].x));
        // First sample = largest r: y = −ln 2 / t^{1/3}.
        let tm = t.powf(1.0 / 3.0);
        assert!((s[0].x - (-(2.0f64).ln() / tm)).abs() < 1e-14);
        assert!((s[0].lo - tm / 3.0).abs() < 1e-14, "value scaled by t^{{1/m}}");
    }

    /// Band-wise deviation from the plateau profile after restarting on
    /// it: (foot band, fan band, plateau band, outside support).
    fn plateau_restart_deviation(n: usize) -> (f64, f64, f64, f64) {
        let p = p33();
        let grid = RadialGrid::new((-15.0f64).exp(), (5.0f64).exp(), n).unwrap();
        let points: Vec<(f64, f64)> =
            grid.nodes().map(|r| (r, eval_ek(&p, 1.0, r, 1.0).unwrap())).collect();
        let spec = ScenarioSpec {
            name: "plateau-restart".into(),
            ic: InitialCondition::custom(points).unwrap(),
            params: p,
            r_min: grid.r_min,
            r_max: grid.r_max,
            n,
            cfl: 0.9,
            bc_left: BoundaryCondition::Dirichlet(0.0),
            bc_right: BoundaryCondition::Dirichlet(1.0),
            t0: 1.0,
            snapshot_times: vec![1.2],
            eps_diff: 1.0,
            max_steps: u64::MAX,
        };
        let run = run_scenario(spec).unwrap();
        let u = &run.radial[0];
        let (mut foot, mut fan, mut plat, mut outside) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for (i, r) in u.grid.nodes().enumerate() {
            let s = -r.ln();
            let e = (u.values[i] - eval_ek(&p, 1.0, r, u.t).unwrap()).abs();
            match s {
                s if s < -0.5 => outside = outside.max(e),
                s if s < 0.5 => foot = foot.max(e),
                s if s < 2.5 => fan = fan.max(e),
                s if (5.0..14.0).contains(&s) => plat = plat.max(e),
                _ => {}
            }
        }
        (foot, fan, plat, outside)
    }

    #[test]
    fn plateau_profile_restart_shows_a_localized_grid_independent_defect() {
        // The plateau profile is the large-time limit, not an invariant
        // solution: its line-frame image solves only the convection
        // part, so restarting on it exposes a genuine deviation at the
        // foot of its ramp (r near 1) where the neglected diffusion
        // flux is singular.  The deviation must be localized there and
        // independent of resolution — the profile's defect, not the
        // scheme's.
        let coarse = plateau_restart_deviation(1024);
        let fine = plateau_restart_deviation(2048);
        for dev in [&coarse, &fine] {
            let (foot, fan, plat, outside) = *dev;
            assert!(foot < 0.2, "foot-band deviation {foot} out of scale");
            assert!(fan < 5e-2, "fan-band deviation {fan} out of scale");
            assert!(plat < 2e-2, "plateau-band deviation {plat} out of scale");
            assert!(outside <= 1e-12, "support must not leak outward: {outside}");
        }
        // Grid-converged: the two resolutions agree on the defect size.
        assert!(
            (fine.0 - coarse.0).abs() <= 0.25 * fine.0,
            "foot deviation looks like scheme error: {} vs {}",
            coarse.0,
            fine.0
        );
        assert!((fine.1 - coarse.1).abs() <= 0.25 * fine.1);
    }

    #[test]
    fn outer_region_error_is_small_when_started_on_the_exact_solution() {
        let p = p33();
        let n = 2048;
        let grid = RadialGrid::new((-6.0f64).exp(), (1.0f64).exp(), n).unwrap();
        let d = -0.374;
        let points: Vec<(f64, f64)> =
            grid.nodes().map(|r| (r, eval_bd(&p, d, r, 1.0).unwrap())).collect();
        let edge = grid.nodes().next().unwrap();
        let spec = ScenarioSpec {
            name: "bd-floor".into(),
            ic: InitialCondition::custom(points).unwrap(),
            params: p,
            r_min: grid.r_min,
            r_max: grid.r_max,
            n,
            cfl: 0.9,
            bc_left: BoundaryCondition::Dirichlet(0.0),
            bc_right: BoundaryCondition::Dirichlet(eval_bd(&p, d, edge, 1.0).unwrap()),
            t0: 1.0,
            snapshot_times: vec![1.25, 1.5],
            eps_diff: 1.0,
            max_steps: u64::MAX,
        };
        let run = run_scenario(spec).unwrap();
        for u in &run.radial {
            let mut sup = 0.0f64;
            for (i, r) in u.grid.nodes().enumerate() {
                if r < 0.05 * u.t.sqrt() {
                    continue;
                }
                sup = sup.max(
                    u.t.sqrt() * (u.values[i] - eval_bd(&p, d, r, u.t).unwrap()).abs(),
                );
            }
            assert!(sup < 2e-2, "t={}: outer error {sup}", u.t);
        }
    }

    #[test]
    fn viscosity_errors_shrink_with_lambda() {
        let sweep = ViscositySweep {
            params: p33(),
            k_level: 1.0,
            s_min: -1.0,
            s_max: 3.0,
            n: 512,
            tau_end: 0.5,
            lambdas: vec![8.0, 16.0],
            cfl: 0.9,
            max_steps: u64::MAX,
        };
        let report = viscosity_series(&sweep).unwrap();
        let series = report.series_of("l1_distance_to_fan");
        assert_eq!(series.len(), 2);
        assert!(
            series[1].1 < series[0].1,
            "lambda=16 error {} must sit below lambda=8 error {}",
            series[1].1,
            series[0].1
        );
        let gate = &report.gates[0];
        assert!(gate.pass, "{}", gate.detail);
    }

    #[test]
    fn small_bump_run_produces_well_formed_reports() {
        // A coarse, short run exercising the full report plumbing.
        let run = run_scenario(short_bump(512, vec![0.5, 1.0, 2.0, 4.0, 6.0])).unwrap();
        let rep =
            theorem1_series(&run, &[1.0, 2.0], &TrendGate::over(1.0, 0.5, 6.0)).unwrap();
        assert!(rep.gates.iter().any(|g| g.name.contains("k closed form") && g.pass));
        assert_eq!(rep.series_of("e_p1").len(), 5);
        assert_eq!(rep.series_of("e_p2_rooted").len(), 5);

        let rep1b = theorem1b_series(&run, &TrendGate::over(1.0, 0.5, 6.0), 10.0).unwrap();
        assert_eq!(rep1b.series_of("hausdorff").len(), 5);
        let slopes = rep1b.series_of("bernstein_slope");
        assert!(slopes.iter().all(|&(_, v)| v.is_finite()));

        let rep3 = theorem3_series(&run, 0.5, &TrendGate::over(1.0, 0.5, 6.0)).unwrap();
        assert!(rep3.gates.iter().any(|g| g.name.contains("self-consistency") && g.pass));

        // Decay fit needs a decade: 0.5 → 6 spans just over one.
        let repd = decay_series(&run, 0.5).unwrap();
        assert!(repd.fitted_rates.contains_key("sup_u"));
    }
}
