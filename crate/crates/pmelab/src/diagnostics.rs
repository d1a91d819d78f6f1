//! Convergence functionals: weighted masses and norms, the two graph
//! metrics, the entropy-slope residual, and log-log decay fits, plus the
//! report container experiments fill.
//!
//! Weight conventions, radially reduced (h radial, ω₁ the unit-sphere
//! area):
//!
//! * weighted mass  M(h)   = ω₁·∫ r⁻¹ h dr      (the |x|⁻ᴺ weight),
//! * ‖h‖_{p,N}             = ω₁·∫ r⁻¹ |h|ᵖ dr    (unrooted; the rooted
//!   value is reported alongside),
//! * L¹ with |x|⁻² weight  = ω₁·∫ r^{N−3} h dr.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::grid::{GraphSample, LineField, MultiGraph, RadialField};
use crate::params::Parameters;
use crate::quad::quad_radial;

// ---------------------------------------------------------------------------
// Weighted masses and norms.
// ---------------------------------------------------------------------------

/// ω₁·∫ r⁻¹ u dr — the mass fixing the ramp constant k.
pub fn weighted_mass_m(u: &RadialField, p: &Parameters) -> f64 {
    p.omega1 * quad_radial(u, |r| 1.0 / r)
}

/// ω₁·∫ r^{N−3} u dr — the conserved |x|⁻²-weighted mass fixing D.
pub fn l12_norm(u: &RadialField, p: &Parameters) -> f64 {
    p.omega1 * quad_radial(u, |r| r.powf(p.nm2() - 1.0))
}

/// Both readings of the weighted p-norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PNorm {
    /// ω₁·∫ r⁻¹|h|ᵖ dr, the p-th power integral.
    pub unrooted: f64,
    /// unrooted^{1/p}.
    pub rooted: f64,
}

/// Weighted p-norm of a radial field, p ≥ 1.
pub fn norm_pn(h: &RadialField, p_exp: f64, p: &Parameters) -> Result<PNorm> {
    if !(p_exp >= 1.0) {
        return Err(Error::Validation(format!("p-norm needs p >= 1, got {p_exp}")));
    }
    let grid = h.grid;
    let integrand = RadialField::new(
        grid,
        h.values.iter().map(|&v| v.abs().powf(p_exp)).collect(),
        h.t,
    )?;
    let unrooted = p.omega1 * quad_radial(&integrand, |r| 1.0 / r);
    Ok(PNorm { unrooted, rooted: unrooted.powf(1.0 / p_exp) })
}

// ---------------------------------------------------------------------------
// Graph metrics.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphDistance {
    /// Sup over shared abscissae of the interval-to-interval gap.
    pub pointwise_sup: f64,
    /// Two-sided Hausdorff distance between the filled planar graphs.
    pub hausdorff: f64,
}

#[inline]
fn midpoint(s: &GraphSample) -> f64 {
    0.5 * (s.lo + s.hi)
}

/// The y-interval the filled graph covers at abscissa `x`: the sample's
/// own [lo, hi] when `x` is a sample, otherwise the point on the
/// connecting segment between the bracketing samples.
fn interval_at(g: &MultiGraph, x: f64) -> Option<(f64, f64)> {
    let s = g.samples();
    if x < s[0].x || x > s[s.len() - 1].x {
        return None;
    }
    let i = s.partition_point(|p| p.x < x);
    if i < s.len() && s[i].x == x {
        return Some((s[i].lo, s[i].hi));
    }
    let (a, b) = (&s[i - 1], &s[i]);
    // Endpoints of the connecting segment: each sample contributes the
    // point of its interval closest to its neighbour's level.
    let ya = midpoint(b).clamp(a.lo, a.hi);
    let yb = midpoint(a).clamp(b.lo, b.hi);
    let t = (x - a.x) / (b.x - a.x);
    let y = ya + t * (yb - ya);
    Some((y, y))
}

fn interval_gap(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0.max(b.0) - a.1.min(b.1)).max(0.0)
}

/// Distinct sample abscissae of both graphs inside the shared range.
fn shared_abscissae(f: &MultiGraph, g: &MultiGraph) -> Vec<f64> {
    let lo = f.x_min().max(g.x_min());
    let hi = f.x_max().min(g.x_max());
    let mut xs: Vec<f64> = f
        .samples()
        .iter()
        .chain(g.samples())
        .map(|s| s.x)
        .filter(|&x| x >= lo && x <= hi)
        .collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs
}

/// The filled graph as a planar polyline: connecting segments between
/// consecutive samples plus the vertical segment of every jump.
fn graph_segments(g: &MultiGraph) -> Vec<((f64, f64), (f64, f64))> {
    let s = g.samples();
    let mut segs = Vec::with_capacity(2 * s.len());
    for p in s {
        if p.hi > p.lo {
            segs.push(((p.x, p.lo), (p.x, p.hi)));
        }
    }
    for ab in s.windows(2) {
        let (a, b) = (&ab[0], &ab[1]);
        let ya = midpoint(b).clamp(a.lo, a.hi);
        let yb = midpoint(a).clamp(b.lo, b.hi);
        segs.push(((a.x, ya), (b.x, yb)));
    }
    segs
}

/// Subdivide segments into points at spacing ≤ `delta` (endpoints always
/// included) — deterministic, so identical graphs give identical sets.
fn discretize(segs: &[((f64, f64), (f64, f64))], delta: f64) -> Vec<(f64, f64)> {
    let mut pts = Vec::new();
    for &((x0, y0), (x1, y1)) in segs {
        let len = ((x1 - x0).powi(2) + (y1 - y0).powi(2)).sqrt();
        let pieces = (len / delta).ceil().max(1.0) as usize;
        for i in 0..=pieces {
            let t = i as f64 / pieces as f64;
            pts.push((x0 + t * (x1 - x0), y0 + t * (y1 - y0)));
        }
    }
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pts.dedup();
    pts
}

/// Squared distance from `q` to the nearest point of `pts` (x-sorted),
/// scanning outward from the insertion index and pruning once the x-gap
/// alone exceeds the best distance.
fn nearest_sq(pts: &[(f64, f64)], q: (f64, f64)) -> f64 {
    let i = pts.partition_point(|p| p.0 < q.0);
    let mut best = f64::INFINITY;
    let mut l = i;
    let mut r = i;
    loop {
        let mut moved = false;
        if l > 0 {
            let p = pts[l - 1];
            let dx = q.0 - p.0;
            if dx * dx < best {
                let d = dx * dx + (q.1 - p.1).powi(2);
                best = best.min(d);
                l -= 1;
                moved = true;
            } else {
                l = 0; // everything further left is no closer in x
            }
        }
        if r < pts.len() {
            let p = pts[r];
            let dx = p.0 - q.0;
            if dx * dx < best {
                let d = dx * dx + (q.1 - p.1).powi(2);
                best = best.min(d);
                r += 1;
                moved = true;
            } else {
                r = pts.len();
            }
        }
        if !moved && l == 0 && r == pts.len() {
            break;
        }
    }
    best
}

fn directed_hausdorff(from: &[(f64, f64)], to: &[(f64, f64)]) -> f64 {
    from.iter().map(|&q| nearest_sq(to, q)).fold(0.0f64, f64::max).sqrt()
}

/// Both graph metrics between a numerical graph and a reference graph.
///
/// The pointwise metric takes, at every sample abscissa of either graph
/// inside the shared range, the gap between the two y-intervals there
/// (zero when they overlap — a value inside a filled jump counts as a
/// hit).  The Hausdorff metric treats both filled graphs as planar sets,
/// subdivided at 10⁻³ of the joint bounding-box diagonal.
pub fn graph_distance(g_num: &MultiGraph, g_ref: &MultiGraph) -> Result<GraphDistance> {
    if g_num.x_max() < g_ref.x_min() || g_ref.x_max() < g_num.x_min() {
        return Err(Error::Validation(format!(
            "graphs cover disjoint abscissa ranges [{}, {}] and [{}, {}]",
            g_num.x_min(),
            g_num.x_max(),
            g_ref.x_min(),
            g_ref.x_max()
        )));
    }
    let mut pointwise = 0.0f64;
    for x in shared_abscissae(g_num, g_ref) {
        if let (Some(a), Some(b)) = (interval_at(g_num, x), interval_at(g_ref, x)) {
            pointwise = pointwise.max(interval_gap(a, b));
        }
    }

    let mut xs = f64::INFINITY;
    let mut xe = f64::NEG_INFINITY;
    let mut ys = f64::INFINITY;
    let mut ye = f64::NEG_INFINITY;
    for s in g_num.samples().iter().chain(g_ref.samples()) {
        xs = xs.min(s.x);
        xe = xe.max(s.x);
        ys = ys.min(s.lo);
        ye = ye.max(s.hi);
    }
    let diam = ((xe - xs).powi(2) + (ye - ys).powi(2)).sqrt();
    let delta = (1e-3 * diam).max(1e-12);
    let a = discretize(&graph_segments(g_num), delta);
    let b = discretize(&graph_segments(g_ref), delta);
    let hausdorff = directed_hausdorff(&a, &b).max(directed_hausdorff(&b, &a));
    Ok(GraphDistance { pointwise_sup: pointwise, hausdorff })
}

// ---------------------------------------------------------------------------
// Entropy residual and decay fits.
// ---------------------------------------------------------------------------

/// Worst excess of the discrete slope of w^{m−1} over the entropy bound
/// 1/(m·τ): max_j [(w_{j+1}^{m−1} − w_j^{m−1})/ds − 1/(m·τ)].  Positive
/// means the bound is violated somewhere.
pub fn entropy_residual(w: &LineField, p: &Parameters) -> Result<f64> {
    if !(w.tau > 0.0) {
        return Err(Error::Validation(format!(
            "entropy bound needs tau > 0, got {}",
            w.tau
        )));
    }
    let e = p.m - 1.0;
    let pw = |v: f64| if e == 2.0 { v * v } else { v.powf(e) };
    let bound = 1.0 / (p.m * w.tau);
    let mut worst = f64::NEG_INFINITY;
    for ab in w.values.windows(2) {
        worst = worst.max((pw(ab[1]) - pw(ab[0])) / w.grid.ds - bound);
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    /// Decay exponent: sup-norm ≈ C·t^{−alpha}.
    pub alpha: f64,
    /// Coefficient of determination of the log-log fit.
    pub r2: f64,
}

/// Least-squares fit of log(value) against log(t) over the final decade
/// of the series; returns the negated slope.  Needs at least five
/// points spanning at least one decade, all values positive.
pub fn decay_fit(series: &[(f64, f64)]) -> Result<DecayFit> {
    if series.len() < 5 {
        return Err(Error::Validation(format!(
            "decay fit needs at least 5 points, got {}",
            series.len()
        )));
    }
    if series.windows(2).any(|ab| ab[0].0 >= ab[1].0) {
        return Err(Error::Validation("decay fit needs strictly increasing times".into()));
    }
    if series.iter().any(|&(t, v)| !(t > 0.0) || !(v > 0.0)) {
        return Err(Error::Validation("decay fit needs positive times and values".into()));
    }
    let t_hi = series[series.len() - 1].0;
    if t_hi / series[0].0 < 10.0 {
        return Err(Error::Validation(format!(
            "decay fit needs times spanning a decade, got [{}, {t_hi}]",
            series[0].0
        )));
    }
    let window: Vec<(f64, f64)> =
        series.iter().filter(|&&(t, _)| t >= t_hi / 10.0).map(|&(t, v)| (t.ln(), v.ln())).collect();
    let n = window.len() as f64;
    let mean_x = window.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = window.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = window.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = window.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let slope = sxy / sxx;
    let sse: f64 = window
        .iter()
        .map(|p| (p.1 - (mean_y + slope * (p.0 - mean_x))).powi(2))
        .sum();
    let sst: f64 = window.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let r2 = if sst > 0.0 { 1.0 - sse / sst } else { 1.0 };
    Ok(DecayFit { alpha: -slope, r2 })
}

// ---------------------------------------------------------------------------
// Experiment reports.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FittedRate {
    pub exponent: f64,
    /// 1 − r² of the log-log fit.
    pub residual: f64,
}

/// One named pass/fail verdict with a human-readable justification.
#[derive(Debug, Clone, PartialEq)]
pub struct GateResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Everything an experiment produces: the time series of every
/// functional it tracked, fitted decay rates, warnings, and its gate
/// verdicts.  Series times are strictly increasing per functional.
#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub scenario: String,
    pub params: Parameters,
    series: Vec<(f64, String, f64)>,
    pub fitted_rates: BTreeMap<String, FittedRate>,
    pub warnings: Vec<String>,
    pub gates: Vec<GateResult>,
}

impl ExperimentReport {
    pub fn new(scenario: impl Into<String>, params: Parameters) -> Self {
        ExperimentReport {
            scenario: scenario.into(),
            params,
            series: Vec::new(),
            fitted_rates: BTreeMap::new(),
            warnings: Vec::new(),
            gates: Vec::new(),
        }
    }

    /// Append one datum; times must strictly increase within a functional.
    pub fn push_point(&mut self, time: f64, name: impl Into<String>, value: f64) -> Result<()> {
        let name = name.into();
        if let Some(last) = self.series.iter().rev().find(|(_, n, _)| *n == name) {
            if time <= last.0 {
                return Err(Error::Validation(format!(
                    "series '{name}' must have strictly increasing times: {time} after {}",
                    last.0
                )));
            }
        }
        self.series.push((time, name, value));
        Ok(())
    }

    pub fn series(&self) -> &[(f64, String, f64)] {
        &self.series
    }

    /// The (time, value) track of one functional.
    pub fn series_of(&self, name: &str) -> Vec<(f64, f64)> {
        self.series.iter().filter(|(_, n, _)| n == name).map(|&(t, _, v)| (t, v)).collect()
    }

    pub fn push_gate(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.gates.push(GateResult { name: name.into(), pass, detail: detail.into() });
    }

    /// True when every gate passed (vacuously true without gates).
    pub fn all_pass(&self) -> bool {
        self.gates.iter().all(|g| g.pass)
    }
}
