//! Exact changes of variables between the radial and line frames.
//!
//! The radial flow |x|⁻²uₜ = Δ(uᵐ) in dimension N becomes, under
//!
//! ```text
//!     s = −(N−2)·log r,     τ = (N−2)²·t,     w(s,τ) = u(r,t),
//! ```
//!
//! the 1-D convection–diffusion equation w_τ = (wᵐ)_ss − (wᵐ)_s.  Because
//! radial grids are log-spaced, this map is a pure relabelling: radial
//! nodes land exactly on line cell centers (in reversed order, since the
//! map is decreasing) and no value is ever interpolated.  The same holds
//! for the density inversion ũ(r,t) = r^{(2−N)/m}·u(1/r,t), an involution
//! connecting the |x|⁻² flow to the critical-exponent γ₂ = N−(N−2)/m flow.
//!
//! Two rescalings feed the large-time diagnostics: the decay frame
//! v(y) = τ^{1/m}·w(y·τ^{1/m}, τ), in which the limit ramp profile is
//! stationary, and the hyperbolic frame w_λ(s,τ) = w(λs, λτ), in which the
//! diffusion coefficient shrinks to 1/λ.

use crate::error::{Error, Result};
use crate::grid::{LineField, LineGrid, MultiGraph, RadialField, RadialGrid};
use crate::params::Parameters;

/// Radial field → line field.  Values are copied exactly (reversed order);
/// only the coordinates are relabelled.
pub fn tr1_forward(u: &RadialField, p: &Parameters) -> Result<LineField> {
    let nm2 = p.nm2();
    let n = u.grid.n;
    let ds = nm2 * u.grid.dlog;
    // Largest radius maps to the smallest s.
    let s_first = -nm2 * u.grid.r_max.ln();
    let grid = LineGrid::new(s_first - 0.5 * ds, s_first + (n as f64 - 0.5) * ds, n)?;
    let values = u.values.iter().rev().cloned().collect();
    LineField::new(grid, values, nm2 * nm2 * u.t)
}

/// Line field → radial field; exact inverse of [`tr1_forward`].
pub fn tr1_inverse(w: &LineField, p: &Parameters) -> Result<RadialField> {
    let nm2 = p.nm2();
    let n = w.grid.n;
    let r_min = (-w.grid.center(n - 1) / nm2).exp();
    let r_max = (-w.grid.center(0) / nm2).exp();
    let grid = RadialGrid::new(r_min, r_max, n)?;
    let values = w.values.iter().rev().cloned().collect();
    RadialField::new(grid, values, w.tau / (nm2 * nm2))
}

/// Density inversion ũ(r,t) = r^{(2−N)/m}·u(1/r,t) on the reciprocal
/// domain [1/r_max, 1/r_min].  Applying it twice returns the original
/// field up to floating-point rounding.
pub fn tr2_invert_density(u: &RadialField, p: &Parameters) -> Result<RadialField> {
    let expo = (2.0 - p.dim as f64) / p.m;
    let n = u.grid.n;
    let grid = RadialGrid::new(1.0 / u.grid.r_max, 1.0 / u.grid.r_min, n)?;
    let values: Vec<f64> = (0..n)
        .map(|i| {
            let rho = grid.node(i);
            rho.powf(expo) * u.values[n - 1 - i]
        })
        .collect();
    RadialField::new(grid, values, u.t)
}

/// Decay-frame rescaling: samples of v(y) = τ^{1/m}·w(y·τ^{1/m}, τ) at the
/// image points y = s·τ^{−1/m} of the grid centers (a univalued graph on a
/// non-uniform abscissa set).
pub fn rescale_decay(w: &LineField, p: &Parameters) -> Result<MultiGraph> {
    if !(w.tau > 0.0) {
        return Err(Error::Validation(format!(
            "decay rescaling needs tau > 0, got {}",
            w.tau
        )));
    }
    let scale = w.tau.powf(1.0 / p.m);
    MultiGraph::univalued(
        w.grid
            .centers()
            .zip(w.values.iter())
            .map(|(s, &v)| (s / scale, scale * v)),
    )
}

/// Hyperbolic rescaling w_λ(s,τ) = w(λs, λτ) sampled on `grid` at time
/// `tau`.  The underlying solution is supplied as an evaluator returning
/// `None` outside its available window.
pub fn rescale_hyperbolic(
    eval: impl Fn(f64, f64) -> Option<f64>,
    lambda: f64,
    grid: LineGrid,
    tau: f64,
) -> Result<LineField> {
    if !(lambda > 0.0) {
        return Err(Error::Validation(format!("lambda must be positive, got {lambda}")));
    }
    let mut values = Vec::with_capacity(grid.n);
    for s in grid.centers() {
        match eval(lambda * s, lambda * tau) {
            Some(v) => values.push(v),
            None => {
                return Err(Error::Solver(format!(
                    "requested window point (s={}, tau={}) outside available data",
                    lambda * s,
                    lambda * tau
                )))
            }
        }
    }
    LineField::new(grid, values, tau)
}
