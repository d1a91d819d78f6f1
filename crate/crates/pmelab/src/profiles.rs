//! Closed-form profiles: the explicit solutions and large-time limits of
//! the flow, plus solvers for their free constants.
//!
//! Radial frame (r, t):
//!
//! * `F` — self-similar ramp with a hole around the origin and a jump at
//!   r = e^{−k·t^{1/m}}; the large-time shape of solutions with vanishing
//!   data at the origin.  Its free constant k is fixed by the weighted
//!   mass ∫|x|⁻ᴺu₀.
//! * `E_K` — level-K plateau around the origin glued to a logarithmic
//!   ramp vanishing at r = 1; the limit shape when u₀(0) = K > 0.
//! * `B_D` — an exact solution with logarithmic profile,
//!   t^{−1/(m−1)}·[D − log(r·t^{−1/((m−1)(N−2))})/(m(N−2))]₊^{1/(m−1)},
//!   governing the outer region.  Valid for every real D.
//!
//! Line frame (s, τ), s = −(N−2)·log r: `W` and `V` are the images of `F`
//! and `E_K` — a rarefaction ramp with a shock at s = k·τ^{1/m}, and the
//! Heaviside rarefaction fan of the limit conservation law.
//!
//! Tilde profiles are the density-inversion images r^{(2−N)/m}·(·)(1/r,t),
//! living on the reciprocal supports.
//!
//! Scalar evaluators return the outer (nonzero-side) value at an exact
//! jump abscissa, except `W`, whose cutoff value is 0 by convention; the
//! multivalued graph exports carry the filled vertical segment instead.

use crate::error::{Error, Result};
use crate::grid::{GraphSample, MultiGraph};
use crate::params::Parameters;
use crate::quad::{adaptive_simpson, bisect, expand_bracket};

/// [x]₊^e: powers are taken of the positive part only, so free-boundary
/// brackets never produce NaN.
#[inline]
fn pos_pow(x: f64, e: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x.powf(e)
    }
}

fn need_positive_time(t: f64) -> Result<()> {
    if t > 0.0 {
        Ok(())
    } else {
        Err(Error::Validation(format!("profile evaluation needs t > 0, got {t}")))
    }
}

fn need_positive_radius(r: f64) -> Result<()> {
    if r > 0.0 {
        Ok(())
    } else {
        Err(Error::Validation(format!("profile evaluation needs r > 0, got {r}")))
    }
}

// ---------------------------------------------------------------------------
// Radial-frame profiles.
// ---------------------------------------------------------------------------

/// Self-similar ramp profile with hole:
/// F(r,t) = t^{−1/m}·[−log(r)·t^{−1/m}/(m(N−2))]₊^{1/(m−1)} outside the
/// hole r < e^{−k·t^{1/m}}, and 0 inside.  At the jump abscissa the outer
/// (positive) branch value is returned.
pub fn eval_f(p: &Parameters, k: f64, r: f64, t: f64) -> Result<f64> {
    need_positive_time(t)?;
    need_positive_radius(r)?;
    let tm = t.powf(-1.0 / p.m);
    if r < (-k / tm).exp() {
        // r < e^{−k·t^{1/m}}: the hole.
        return Ok(0.0);
    }
    let arg = -r.ln() * tm / (p.m * p.nm2());
    Ok(tm * pos_pow(arg, 1.0 / (p.m - 1.0)))
}

/// Level-K plateau glued to a logarithmic ramp:
/// K for r ≤ e^{−m·K^{m−1}·(N−2)·t}, then
/// [−log(r)/(m·(N−2)·t)]^{1/(m−1)} until it vanishes at r = 1; continuous
/// across both interfaces.
pub fn eval_ek(p: &Parameters, k_level: f64, r: f64, t: f64) -> Result<f64> {
    need_positive_time(t)?;
    need_positive_radius(r)?;
    let edge = (-p.m * k_level.powf(p.m - 1.0) * p.nm2() * t).exp();
    if r <= edge {
        return Ok(k_level);
    }
    if r >= 1.0 {
        return Ok(0.0);
    }
    let arg = -r.ln() / (p.m * p.nm2() * t);
    Ok(pos_pow(arg, 1.0 / (p.m - 1.0)))
}

/// Exact logarithmic solution
/// B_D(r,t) = t^{−1/(m−1)}·[D − log(r·t^{−1/((m−1)(N−2))})/(m(N−2))]₊^{1/(m−1)},
/// supported on r < e^{D·m·(N−2)}·t^{1/((m−1)(N−2))} and unbounded at the
/// origin.  D may be any real number.
pub fn eval_bd(p: &Parameters, d: f64, r: f64, t: f64) -> Result<f64> {
    need_positive_time(t)?;
    need_positive_radius(r)?;
    let kappa = 1.0 / ((p.m - 1.0) * p.nm2());
    let arg = d - (r.ln() - kappa * t.ln()) / (p.m * p.nm2());
    Ok(t.powf(-1.0 / (p.m - 1.0)) * pos_pow(arg, 1.0 / (p.m - 1.0)))
}

// ---------------------------------------------------------------------------
// Line-frame profiles.
// ---------------------------------------------------------------------------

/// Rarefaction ramp with shock: τ^{−1/m}·(s·τ^{−1/m}/m)^{1/(m−1)} on
/// 0 ≤ s < k·τ^{1/m}, and 0 elsewhere (including at the shock abscissa).
pub fn eval_w(p: &Parameters, k: f64, s: f64, tau: f64) -> Result<f64> {
    need_positive_time(tau)?;
    let tm = tau.powf(-1.0 / p.m);
    if s < 0.0 || s >= k / tm {
        return Ok(0.0);
    }
    Ok(tm * pos_pow(s * tm / p.m, 1.0 / (p.m - 1.0)))
}

/// Rarefaction fan of the limit conservation law with Heaviside data
/// 0 → K: 0 for s ≤ 0, the fan (s/(mτ))^{1/(m−1)} in between, K beyond
/// s = m·K^{m−1}·τ; continuous and nondecreasing in s.
pub fn eval_v(p: &Parameters, k_level: f64, s: f64, tau: f64) -> Result<f64> {
    need_positive_time(tau)?;
    if s <= 0.0 {
        return Ok(0.0);
    }
    if s >= p.m * k_level.powf(p.m - 1.0) * tau {
        return Ok(k_level);
    }
    Ok(pos_pow(s / (p.m * tau), 1.0 / (p.m - 1.0)))
}

// ---------------------------------------------------------------------------
// Density-inversion images.
// ---------------------------------------------------------------------------

#[inline]
fn tilde_weight(p: &Parameters, r: f64) -> f64 {
    r.powf((2.0 - p.dim as f64) / p.m)
}

/// F̃(r,t) = r^{(2−N)/m}·F(1/r,t), supported on [1, e^{k·t^{1/m}}].
pub fn eval_tilde_f(p: &Parameters, k: f64, r: f64, t: f64) -> Result<f64> {
    need_positive_radius(r)?;
    Ok(tilde_weight(p, r) * eval_f(p, k, 1.0 / r, t)?)
}

/// Ẽ_K(r,t) = r^{(2−N)/m}·E_K(1/r,t), supported on [1, ∞).
pub fn eval_tilde_ek(p: &Parameters, k_level: f64, r: f64, t: f64) -> Result<f64> {
    need_positive_radius(r)?;
    Ok(tilde_weight(p, r) * eval_ek(p, k_level, 1.0 / r, t)?)
}

/// B̃_D(r,t) = r^{(2−N)/m}·B_D(1/r,t), supported outside a shrinking ball:
/// r > e^{−D·m·(N−2)}·t^{−1/((m−1)(N−2))}.
pub fn eval_tilde_bd(p: &Parameters, d: f64, r: f64, t: f64) -> Result<f64> {
    need_positive_radius(r)?;
    Ok(tilde_weight(p, r) * eval_bd(p, d, 1.0 / r, t)?)
}

// ---------------------------------------------------------------------------
// Profile dispatch (CLI surface).
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    F,
    W,
    Ek,
    V,
    Bd,
    TildeF,
    TildeEk,
    TildeBd,
}

impl ProfileKind {
    pub fn parse(name: &str) -> Result<Self> {
        match name.to_ascii_uppercase().as_str() {
            "F" => Ok(ProfileKind::F),
            "W" => Ok(ProfileKind::W),
            "EK" => Ok(ProfileKind::Ek),
            "V" => Ok(ProfileKind::V),
            "BD" => Ok(ProfileKind::Bd),
            "TILDE_F" | "TILDEF" => Ok(ProfileKind::TildeF),
            "TILDE_EK" | "TILDEEK" => Ok(ProfileKind::TildeEk),
            "TILDE_BD" | "TILDEBD" => Ok(ProfileKind::TildeBd),
            other => Err(Error::Validation(format!("unknown profile kind '{other}'"))),
        }
    }

    /// W and V live in (s, τ); everything else in (r, t).
    pub fn is_line_frame(&self) -> bool {
        matches!(self, ProfileKind::W | ProfileKind::V)
    }
}

/// A profile kind together with its one free constant (k, K, or D).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileSpec {
    pub kind: ProfileKind,
    pub constant: f64,
    pub params: Parameters,
}

impl ProfileSpec {
    pub fn new(kind: ProfileKind, constant: f64, params: Parameters) -> Result<Self> {
        let needs_positive = !matches!(kind, ProfileKind::Bd | ProfileKind::TildeBd);
        if needs_positive && !(constant > 0.0) {
            return Err(Error::Validation(format!(
                "profile constant must be positive for {kind:?}, got {constant}"
            )));
        }
        if !constant.is_finite() {
            return Err(Error::Validation(format!("profile constant must be finite, got {constant}")));
        }
        Ok(ProfileSpec { kind, constant, params })
    }

    /// Evaluate at abscissa `x` (s or r depending on the frame) and time.
    pub fn eval(&self, x: f64, time: f64) -> Result<f64> {
        let p = &self.params;
        let c = self.constant;
        match self.kind {
            ProfileKind::F => eval_f(p, c, x, time),
            ProfileKind::W => eval_w(p, c, x, time),
            ProfileKind::Ek => eval_ek(p, c, x, time),
            ProfileKind::V => eval_v(p, c, x, time),
            ProfileKind::Bd => eval_bd(p, c, x, time),
            ProfileKind::TildeF => eval_tilde_f(p, c, x, time),
            ProfileKind::TildeEk => eval_tilde_ek(p, c, x, time),
            ProfileKind::TildeBd => eval_tilde_bd(p, c, x, time),
        }
    }

    /// Fill a radial grid at time `t` (radial-frame kinds only).
    pub fn fill_radial(&self, grid: crate::grid::RadialGrid, t: f64) -> Result<crate::grid::RadialField> {
        if self.kind.is_line_frame() {
            return Err(Error::Validation(format!(
                "{:?} lives in the line frame; sample it on a line grid",
                self.kind
            )));
        }
        let values = grid.nodes().map(|r| self.eval(r, t)).collect::<Result<Vec<_>>>()?;
        crate::grid::RadialField::new(grid, values, t)
    }

    /// Fill a line grid at time `tau` (line-frame kinds only).
    pub fn fill_line(&self, grid: crate::grid::LineGrid, tau: f64) -> Result<crate::grid::LineField> {
        if !self.kind.is_line_frame() {
            return Err(Error::Validation(format!(
                "{:?} lives in the radial frame; sample it on a radial grid",
                self.kind
            )));
        }
        let values = grid.centers().map(|s| self.eval(s, tau)).collect::<Result<Vec<_>>>()?;
        crate::grid::LineField::new(grid, values, tau)
    }
}

// ---------------------------------------------------------------------------
// Multivalued exports.
// ---------------------------------------------------------------------------

/// The stationary decay-frame ramp F̄(y) = [y/(m(N−2))]₊^{1/(m−1)} on
/// y < k with the filled jump [0, (k/(m(N−2)))^{1/(m−1)}] at y = k and 0
/// beyond — the graph of t^{1/m}·F(e^{−y·t^{1/m}}, t) for every t.
pub fn fbar_graph(p: &Parameters, k: f64, y_min: f64, y_max: f64, n: usize) -> Result<MultiGraph> {
    if !(k > 0.0) {
        return Err(Error::Validation(format!("ramp constant must be positive, got {k}")));
    }
    let top = pos_pow(k / (p.m * p.nm2()), 1.0 / (p.m - 1.0));
    ramp_with_jump(y_min, y_max, n, k, top, |y| {
        pos_pow(y / (p.m * p.nm2()), 1.0 / (p.m - 1.0))
    })
}

/// The ramp-with-shock graph of W(·, τ): ramp on [0, k·τ^{1/m}), filled
/// vertical segment [0, τ^{−1/m}·(k/m)^{1/(m−1)}] at the shock, 0 beyond.
pub fn w_multigraph(
    p: &Parameters,
    k: f64,
    tau: f64,
    s_min: f64,
    s_max: f64,
    n: usize,
) -> Result<MultiGraph> {
    need_positive_time(tau)?;
    if !(k > 0.0) {
        return Err(Error::Validation(format!("ramp constant must be positive, got {k}")));
    }
    let tm = tau.powf(-1.0 / p.m);
    let shock = k / tm;
    let top = tm * pos_pow(shock * tm / p.m, 1.0 / (p.m - 1.0));
    ramp_with_jump(s_min, s_max, n, shock, top, |s| {
        if s < 0.0 {
            0.0
        } else {
            tm * pos_pow(s * tm / p.m, 1.0 / (p.m - 1.0))
        }
    })
}

/// Uniform sampling of a ramp that drops to 0 at `jump_x` (vertical
/// segment [0, `top`]), with plain values elsewhere.  Samples colliding
/// with the jump abscissa are absorbed into the jump sample.
fn ramp_with_jump(
    x_min: f64,
    x_max: f64,
    n: usize,
    jump_x: f64,
    top: f64,
    f: impl Fn(f64) -> f64,
) -> Result<MultiGraph> {
    if n < 2 {
        return Err(Error::Validation("graph sampling needs at least two points".into()));
    }
    if !(x_max > x_min) {
        return Err(Error::Validation(format!(
            "graph sampling needs x_min < x_max, got [{x_min}, {x_max}]"
        )));
    }
    let dx = (x_max - x_min) / (n - 1) as f64;
    let mut samples = Vec::with_capacity(n + 1);
    let jump_inside = jump_x > x_min && jump_x < x_max;
    for i in 0..n {
        let x = x_min + i as f64 * dx;
        if jump_inside && (x - jump_x).abs() < 0.5 * dx {
            continue; // replaced by the exact jump sample below
        }
        let y = if x < jump_x { f(x) } else { 0.0 };
        samples.push(GraphSample { x, lo: y, hi: y });
    }
    if jump_inside {
        let pos = samples.partition_point(|s| s.x < jump_x);
        samples.insert(pos, GraphSample { x: jump_x, lo: 0.0, hi: top });
    }
    MultiGraph::new(samples)
}

// ---------------------------------------------------------------------------
// Mass matching.
// ---------------------------------------------------------------------------

/// The ramp constant k matching a weighted initial mass M = ∫|x|⁻ᴺu₀:
/// the unique k > 0 with ∫₀ᵏ (y/m)^{1/(m−1)} dy = (N−2)·M/ω₁.  Closed
/// form k = m·(M_w/(m−1))^{(m−1)/m}; [`solve_k_quadrature`] is the
/// independent root-finder it is checked against.
pub fn solve_k(m_u0: f64, p: &Parameters) -> Result<f64> {
    if !(m_u0 > 0.0) {
        return Err(Error::Validation(format!("weighted mass must be positive, got {m_u0}")));
    }
    let m_w = p.nm2() * m_u0 / p.omega1;
    Ok(p.m * (m_w / (p.m - 1.0)).powf((p.m - 1.0) / p.m))
}

/// Same constant found by bisection on the quadrature of the ramp mass —
/// no use of the closed form.
pub fn solve_k_quadrature(m_u0: f64, p: &Parameters) -> Result<f64> {
    if !(m_u0 > 0.0) {
        return Err(Error::Validation(format!("weighted mass must be positive, got {m_u0}")));
    }
    let m_w = p.nm2() * m_u0 / p.omega1;
    let e = 1.0 / (p.m - 1.0);
    let m = p.m;
    let ramp_mass = |k: f64| adaptive_simpson(&|y: f64| pos_pow(y / m, e), 0.0, k, 1e-14 * (1.0 + m_w));
    let mut hi = 1.0;
    while ramp_mass(hi) < m_w {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::Validation(format!("mass {m_w} out of reachable range")));
        }
    }
    bisect(|k| ramp_mass(k) - m_w, 0.0, hi, 1e-13 * hi.max(1.0))
}

/// Weighted L¹ mass ω₁·∫ r^{N−3}·B_D(r, t_ref) dr of the logarithmic
/// solution, by quadrature in x = −log r (the integrand decays like
/// e^{−(N−2)x} there).  Time-independent up to quadrature error, since
/// B_D solves the flow exactly.
pub fn bd_l12_mass(d: f64, p: &Parameters, t_ref: f64) -> Result<f64> {
    need_positive_time(t_ref)?;
    let nm2 = p.nm2();
    let kappa = 1.0 / ((p.m - 1.0) * nm2);
    // Support edge in x = −log r: B_D > 0 exactly for x > x0.
    let x0 = -d * p.m * nm2 - kappa * t_ref.ln();
    let scale = (-nm2 * x0).exp() * t_ref.powf(-1.0 / (p.m - 1.0));
    let integrand = |x: f64| {
        let r = (-x).exp();
        (-nm2 * x).exp() * eval_bd(p, d, r, t_ref).unwrap_or(0.0)
    };
    // One panel per e-fold of decay: a single Simpson pass over the
    // whole range would probe only the exponentially small tail and
    // accept prematurely.  The first panel holds the fractional-power
    // corner at x0; the adaptive splitter resolves it.
    let panels = 120usize;
    let width = 1.0 / nm2;
    let per_tol = (1e-12 * scale + 1e-300) / panels as f64;
    let mut acc = 0.0;
    for i in 0..panels {
        let a = x0 + width * i as f64;
        acc += adaptive_simpson(&integrand, a, a + width, per_tol);
    }
    Ok(p.omega1 * acc)
}

/// The level constant D matching a weighted L¹ mass ‖u₀‖ under
/// d ↦ ‖B_d‖: strictly increasing over the whole real line, so bisection
/// after geometric bracket expansion finds the unique root.  Low-mass
/// data land at negative D.
pub fn solve_d(l12_mass: f64, p: &Parameters, t_ref: f64) -> Result<f64> {
    if !(l12_mass > 0.0) {
        return Err(Error::Validation(format!("weighted mass must be positive, got {l12_mass}")));
    }
    need_positive_time(t_ref)?;
    let objective = |d: f64| bd_l12_mass(d, p, t_ref).map(|m| m - l12_mass).unwrap_or(f64::NAN);
    let (lo, hi) = expand_bracket(objective, -1.0, 1.0)?;
    bisect(objective, lo, hi, 1e-12)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{LineField, LineGrid, RadialField, RadialGrid};
    use crate::transforms::{tr1_inverse, tr2_invert_density};
    use std::f64::consts::PI;

    fn p33() -> Parameters {
        Parameters::new(3.0, 3).unwrap()
    }

    #[test]
    fn ramp_profile_point_values() {
        let p = p33();
        // Direct substitution: m=3, N=3, k=1, t=1, r=e^{−1/2}:
        // F = (0.5/(3·1))^{1/2} = (1/6)^{1/2}.
        let got = eval_f(&p, 1.0, (-0.5f64).exp(), 1.0).unwrap();
        assert!((got - (1.0 / 6.0f64).sqrt()).abs() < 1e-14, "got {got}");
        // Zero at and beyond r = 1.
        assert_eq!(eval_f(&p, 1.0, 1.0, 1.0).unwrap(), 0.0);
        assert_eq!(eval_f(&p, 1.0, 3.7, 2.0).unwrap(), 0.0);
        // Inside the hole: zero; at the jump abscissa: the outer value.
        let r_jump = (-1.0f64).exp();
        assert_eq!(eval_f(&p, 1.0, r_jump * 0.999999, 1.0).unwrap(), 0.0);
        let shock_height = (1.0 / (3.0 * 1.0f64)).sqrt(); // (k/(m(N−2)))^{1/(m−1)}
        assert!((eval_f(&p, 1.0, r_jump, 1.0).unwrap() - shock_height).abs() < 1e-14);
        assert!(eval_f(&p, 1.0, 0.5, 0.0).is_err(), "t = 0 rejected");
    }

    #[test]
    fn ramp_profile_is_stationary_in_decay_coordinates() {
        // t^{1/m}·F(e^{−y·t^{1/m}}, t) must not depend on t.
        let p = p33();
        let k = 0.75;
        let mut reference = Vec::new();
        for (ti, &t) in [1.0f64, 4.0, 16.0].iter().enumerate() {
            let tm = t.powf(1.0 / 3.0);
            for (yi, y) in (0..200).map(|i| -0.2 + i as f64 * 0.01).enumerate() {
                let scaled = tm * eval_f(&p, k, (-y * tm).exp(), t).unwrap();
                if ti == 0 {
                    reference.push(scaled);
                } else {
                    assert!(
                        (scaled - reference[yi]).abs() <= 1e-12,
                        "t={t} y={y}: {scaled} vs {}",
                        reference[yi]
                    );
                }
            }
        }
    }

    #[test]
    fn plateau_profile_interfaces_are_continuous() {
        let p = p33();
        // Plateau edge for K=1, t=1 sits at r = e^{−m·K²·(N−2)·t} = e^{−3}.
        let edge = (-3.0f64).exp();
        assert!((eval_ek(&p, 1.0, edge, 1.0).unwrap() - 1.0).abs() < 1e-13);
        assert!((eval_ek(&p, 1.0, edge * 1.0000001, 1.0).unwrap() - 1.0).abs() < 1e-6);
        // Halfway down the log ramp: (1.5/3)^{1/2}.
        let got = eval_ek(&p, 1.0, (-1.5f64).exp(), 1.0).unwrap();
        assert!((got - 0.5f64.sqrt()).abs() < 1e-14);
        // Vanishes continuously at r = 1 and stays 0 beyond.
        assert_eq!(eval_ek(&p, 1.0, 1.0, 1.0).unwrap(), 0.0);
        assert!(eval_ek(&p, 1.0, 1.0 - 1e-9, 1.0).unwrap() < 1e-4);
        assert_eq!(eval_ek(&p, 1.0, 2.0, 1.0).unwrap(), 0.0);
        // General (m, N, K): interface continuity within rounding.
        let p = Parameters::new(2.2, 5).unwrap();
        let k_level = 1.7f64;
        let edge = (-p.m * k_level.powf(p.m - 1.0) * p.nm2() * 0.3).exp();
        let inner = eval_ek(&p, k_level, edge, 0.3).unwrap();
        let outer = eval_ek(&p, k_level, edge * (1.0 + 1e-12), 0.3).unwrap();
        assert!((inner - k_level).abs() < 1e-12);
        assert!((outer - k_level).abs() < 1e-10 * k_level);
    }

    #[test]
    fn shock_profile_cutoff_convention() {
        let p = p33();
        let tau = 4.0f64;
        let shock = 1.0 * tau.powf(1.0 / 3.0); // k·τ^{1/m} with k=1
        assert_eq!(eval_w(&p, 1.0, -0.3, tau).unwrap(), 0.0);
        assert_eq!(eval_w(&p, 1.0, shock, tau).unwrap(), 0.0, "0 at the cutoff");
        let left = eval_w(&p, 1.0, shock * (1.0 - 1e-12), tau).unwrap();
        let height = tau.powf(-1.0 / 3.0) * (1.0f64 / 3.0).sqrt();
        assert!((left - height).abs() < 1e-9, "left limit {left} vs jump height {height}");
    }

    #[test]
    fn shock_speed_matches_jump_condition() {
        // The shock s*(τ) = k·τ^{1/m} must travel at (f(W₋)−f(0))/(W₋−0)
        // = W₋^{m−1} for the flux f(w) = wᵐ.
        for (m, k, tau) in
            [(3.0f64, 1.0f64, 1.0f64), (3.0, 0.59, 7.0), (2.5, 2.0, 3.0), (2.0, 0.3, 11.0)]
        {
            let p = Parameters::new(m, 3).unwrap();
            let speed = k / m * tau.powf(1.0 / m - 1.0); // d(k·τ^{1/m})/dτ
            let w_left = tau.powf(-1.0 / m) * (k / m).powf(1.0 / (m - 1.0));
            let rh = w_left.powf(m - 1.0);
            assert!((speed - rh).abs() <= 1e-13 * rh, "m={m} k={k} tau={tau}");
            // And the evaluator reproduces the left state.
            let s = k * tau.powf(1.0 / m) * (1.0 - 1e-10);
            let got = eval_w(&p, k, s, tau).unwrap();
            assert!((got - w_left).abs() < 1e-8 * w_left);
        }
    }

    #[test]
    fn rarefaction_fan_shape() {
        let p = p33();
        assert_eq!(eval_v(&p, 1.0, -1.0, 1.0).unwrap(), 0.0);
        assert_eq!(eval_v(&p, 1.0, 0.0, 1.0).unwrap(), 0.0);
        // Fan value at s = mτ/4: (1/4)^{1/2}.
        assert!((eval_v(&p, 1.0, 0.75, 1.0).unwrap() - 0.5).abs() < 1e-14);
        // Continuous at the fan/plateau interface s = m·K^{m−1}·τ.
        assert!((eval_v(&p, 1.0, 3.0, 1.0).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(eval_v(&p, 1.0, 5.0, 1.0).unwrap(), 1.0);
    }

    #[test]
    fn fan_and_plateau_profiles_correspond_under_the_change_of_variables() {
        // Pulling V(·,τ) back to the radial frame must give E_K exactly.
        for dim in [3u32, 4] {
            let p = Parameters::new(3.0, dim).unwrap();
            let g = LineGrid::new(-2.0, 9.0, 500).unwrap();
            let tau = 2.0;
            let w = LineField::from_fn(g, tau, |s| eval_v(&p, 1.3, s, tau).unwrap()).unwrap();
            let u = tr1_inverse(&w, &p).unwrap();
            for (i, r) in u.grid.nodes().enumerate() {
                let expect = eval_ek(&p, 1.3, r, u.t).unwrap();
                assert!(
                    (u.values[i] - expect).abs() <= 1e-12 * expect.max(1.0),
                    "dim={dim} r={r}: {} vs {expect}",
                    u.values[i]
                );
            }
        }
    }

    #[test]
    fn ramp_profiles_correspond_under_the_change_of_variables() {
        let p = p33();
        let g = LineGrid::new(-1.0, 2.5, 499).unwrap();
        let tau = 3.0;
        let k = 0.8;
        let w = LineField::from_fn(g, tau, |s| eval_w(&p, k, s, tau).unwrap()).unwrap();
        let u = tr1_inverse(&w, &p).unwrap();
        for (i, r) in u.grid.nodes().enumerate() {
            let expect = eval_f(&p, k, r, u.t).unwrap();
            assert!(
                (u.values[i] - expect).abs() <= 1e-12 * expect.max(1.0),
                "r={r}: {} vs {expect}",
                u.values[i]
            );
        }
    }

    #[test]
    fn logarithmic_solution_point_values() {
        let p = p33();
        let d = 0.5;
        // At r = t^{1/((m−1)(N−2))} the log term vanishes: value t^{−1/2}·√D.
        for t in [1.0f64, 9.0] {
            let r = t.powf(0.5);
            let got = eval_bd(&p, d, r, t).unwrap();
            let expect = t.powf(-0.5) * d.sqrt();
            assert!((got - expect).abs() < 1e-14, "t={t}: {got} vs {expect}");
        }
        // Vanishes at the support edge r = e^{D·m·(N−2)}·t^{1/2} and beyond.
        let edge = (d * 3.0f64).exp();
        assert_eq!(eval_bd(&p, d, edge, 1.0).unwrap(), 0.0);
        assert_eq!(eval_bd(&p, d, edge * 2.0, 1.0).unwrap(), 0.0);
        assert!(eval_bd(&p, d, edge * (1.0 - 1e-10), 1.0).unwrap() > 0.0);
        // Negative levels are legitimate: just a smaller, shifted support.
        let neg = eval_bd(&p, -0.374, 0.1, 1.0).unwrap();
        assert!(neg > 0.0);
    }

    #[test]
    fn inversion_images_match_the_grid_transform() {
        // Pointwise tilde evaluators must agree with tr2 applied to a
        // sampled base profile.
        let p = p33();
        let g = RadialGrid::new(0.05, 0.9, 301).unwrap();
        let t = 2.0;
        let base = RadialField::from_fn(g, t, |r| eval_ek(&p, 1.0, r, t).unwrap()).unwrap();
        let img = tr2_invert_density(&base, &p).unwrap();
        for (i, rho) in img.grid.nodes().enumerate() {
            let expect = eval_tilde_ek(&p, 1.0, rho, t).unwrap();
            assert!(
                (img.values[i] - expect).abs() <= 1e-13 * expect.max(1.0),
                "rho={rho}: {} vs {expect}",
                img.values[i]
            );
        }
    }

    #[test]
    fn inversion_image_supports() {
        let p = p33();
        // Ẽ_K vanishes on (0, 1].
        assert_eq!(eval_tilde_ek(&p, 1.0, 0.3, 1.0).unwrap(), 0.0);
        assert_eq!(eval_tilde_ek(&p, 1.0, 1.0, 1.0).unwrap(), 0.0);
        assert!(eval_tilde_ek(&p, 1.0, 1.5, 1.0).unwrap() > 0.0);
        // F̃ lives on [1, e^{k·t^{1/m}}].
        let k = 1.0;
        assert_eq!(eval_tilde_f(&p, k, 0.9, 1.0).unwrap(), 0.0);
        assert!(eval_tilde_f(&p, k, 1.5, 1.0).unwrap() > 0.0);
        assert_eq!(eval_tilde_f(&p, k, 1.0f64.exp() * 1.001, 1.0).unwrap(), 0.0);
        // B̃_D vanishes inside the shrinking ball r ≤ e^{−D·m·(N−2)}·t^{−1/2}.
        let d = 0.5;
        let edge = (-d * 3.0f64).exp();
        assert_eq!(eval_tilde_bd(&p, d, edge * 0.99, 1.0).unwrap(), 0.0);
        assert!(eval_tilde_bd(&p, d, edge * 1.01, 1.0).unwrap() > 0.0);
    }

    #[test]
    fn ramp_constant_closed_form_agrees_with_quadrature() {
        // m=3, N=3, M_w = 2/(3√3) was hand-checked to give k = 1.
        let p = p33();
        let m_u0 = 4.0 * PI * 2.0 / (3.0 * 3.0f64.sqrt());
        let k = solve_k(m_u0, &p).unwrap();
        assert!((k - 1.0).abs() < 1e-12, "closed form k = {k}");
        let kq = solve_k_quadrature(m_u0, &p).unwrap();
        assert!((kq - 1.0).abs() < 1e-10, "quadrature k = {kq}");

        // The two paths agree across exponents and dimensions.
        for (m, dim, mass) in [(3.0, 3, 0.4), (2.0, 3, 1.7), (2.5, 4, 0.9), (4.0, 5, 3.3)] {
            let p = Parameters::new(m, dim).unwrap();
            let a = solve_k(mass, &p).unwrap();
            let b = solve_k_quadrature(mass, &p).unwrap();
            assert!((a - b).abs() <= 1e-9 * a, "m={m} N={dim}: {a} vs {b}");
        }
        assert!(solve_k(0.0, &p).is_err());
        // k → 0 with the mass.
        assert!(solve_k(1e-12, &p).unwrap() < 1e-7);
        // Strictly increasing in the mass.
        let ks: Vec<f64> =
            [0.1, 0.5, 1.0, 2.0].iter().map(|&mm| solve_k(mm, &p).unwrap()).collect();
        assert!(ks.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn logarithmic_mass_matches_hand_integral() {
        // m=3, N=3: ω₁·∫ B_D(r,1) dr = 4π·e^{3D}·Γ(3/2)/√3 = 2π^{3/2}·e^{3D}/√3,
        // via the substitution y = D − log(r)/3.
        let p = p33();
        for d in [-0.4f64, 0.0, 0.3, 1.0] {
            let exact = 2.0 * PI.powf(1.5) * (3.0 * d).exp() / 3.0f64.sqrt();
            let got = bd_l12_mass(d, &p, 1.0).unwrap();
            assert!(
                (got - exact).abs() <= 1e-9 * exact,
                "d={d}: {got} vs {exact} (rel {})",
                ((got - exact) / exact).abs()
            );
        }
    }

    #[test]
    fn logarithmic_mass_is_time_independent() {
        let p = p33();
        let m1 = bd_l12_mass(0.5, &p, 1.0).unwrap();
        let m10 = bd_l12_mass(0.5, &p, 10.0).unwrap();
        assert!((m1 - m10).abs() <= 1e-8 * m1, "{m1} vs {m10}");
        let p = Parameters::new(2.0, 4).unwrap();
        let m1 = bd_l12_mass(0.8, &p, 1.0).unwrap();
        let m10 = bd_l12_mass(0.8, &p, 10.0).unwrap();
        assert!((m1 - m10).abs() <= 1e-8 * m1, "{m1} vs {m10}");
    }

    #[test]
    fn level_matching_round_trips() {
        let p = p33();
        for d_star in [0.5, 1.0, 2.0, -0.374] {
            let mass = bd_l12_mass(d_star, &p, 1.0).unwrap();
            let d = solve_d(mass, &p, 1.0).unwrap();
            assert!((d - d_star).abs() < 1e-9, "round trip {d_star} → {d}");
        }
        // Monotone: more mass, higher level.
        let masses: Vec<f64> =
            [-1.0, 0.0, 1.0].iter().map(|&d| bd_l12_mass(d, &p, 1.0).unwrap()).collect();
        assert!(masses.windows(2).all(|w| w[1] > w[0]));
        assert!(solve_d(-1.0, &p, 1.0).is_err());
    }

    #[test]
    fn multivalued_exports_carry_the_jump() {
        let p = p33();
        let g = fbar_graph(&p, 1.0, -0.5, 2.0, 100).unwrap();
        let jump: Vec<_> = g.samples().iter().filter(|s| s.hi > s.lo).collect();
        assert_eq!(jump.len(), 1, "exactly one multivalued abscissa");
        assert_eq!(jump[0].x, 1.0);
        assert_eq!(jump[0].lo, 0.0);
        assert!((jump[0].hi - (1.0 / 3.0f64).sqrt()).abs() < 1e-14);

        let tau = 8.0;
        let wg = w_multigraph(&p, 1.0, tau, -1.0, 4.0, 64).unwrap();
        let jump: Vec<_> = wg.samples().iter().filter(|s| s.hi > s.lo).collect();
        assert_eq!(jump.len(), 1);
        assert!((jump[0].x - 2.0).abs() < 1e-14); // k·τ^{1/3} = 2
        let height = tau.powf(-1.0 / 3.0) * (1.0f64 / 3.0).sqrt();
        assert!((jump[0].hi - height).abs() < 1e-14);
    }

    #[test]
    fn profile_spec_validates_constants() {
        let p = p33();
        assert!(ProfileSpec::new(ProfileKind::F, 0.0, p).is_err());
        assert!(ProfileSpec::new(ProfileKind::Bd, -0.374, p).is_ok(), "negative D is valid");
        assert!(ProfileSpec::new(ProfileKind::Bd, f64::NAN, p).is_err());
        let spec = ProfileSpec::new(ProfileKind::Ek, 1.0, p).unwrap();
        assert!((spec.eval((-1.5f64).exp(), 1.0).unwrap() - 0.5f64.sqrt()).abs() < 1e-14);
        assert!(ProfileKind::parse("tilde_bd").is_ok());
        assert!(ProfileKind::parse("nope").is_err());
    }
}
