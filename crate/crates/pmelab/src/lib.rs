//! pmelab — a numerical laboratory for the radial singular-density porous
//! medium flow
//!
//! ```text
//!     |x|⁻² ∂ₜu = Δ(uᵐ),      m > 1,  x ∈ ℝᴺ,  N ≥ 3.
//! ```
//!
//! The density weight |x|⁻² is critical: substituting s = −(N−2)·log r,
//! τ = (N−2)²·t turns the radial flow into the 1-D convection–diffusion
//! equation w_τ = (wᵐ)_ss − (wᵐ)_s, whose large-time limits are entropy
//! solutions of the conservation law w_τ + (wᵐ)_s = 0.  The crate provides
//!
//! * the exact changes of variables ([`transforms`]),
//! * every closed-form profile and special solution that the flow selects
//!   at large times, with mass-matching solvers for their free constants
//!   ([`profiles`]),
//! * a monotone explicit finite-volume solver for both frames plus an exact
//!   Riemann solver for the limit conservation law ([`solver`]),
//! * convergence functionals: weighted norms, graph distances, entropy and
//!   Bernstein bounds, decay-rate fits ([`diagnostics`]), and the canned
//!   long-time experiments built from them ([`experiments`]),
//! * a batch CLI with deterministic CSV output (`pmelab`, see [`figures`],
//!   [`config`], [`report`]).

pub mod config;
pub mod diagnostics;
pub mod error;
pub mod experiments;
pub mod figures;
pub mod grid;
pub mod params;
pub mod pool;
pub mod profiles;
pub mod quad;
pub mod report;
pub mod solver;
pub mod transforms;

pub use error::{Error, Result};
pub use params::Parameters;
