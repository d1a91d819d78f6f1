//! Quadrature and scalar root finding.
//!
//! Two grid integrators match the two field representations: the line field
//! is a set of cell averages, so its integral is the midpoint/finite-volume
//! sum; the radial field is point values on a non-uniform (log-spaced) node
//! set, integrated by the trapezoidal rule.  Both are exact for integrands
//! that are linear on each cell/interval.
//!
//! [`adaptive_simpson`] serves the mass-matching solvers, which need
//! integrals of closed-form profiles with fractional-power corners at free
//! boundaries; adaptive bisection of the interval handles the corner.

use crate::error::{Error, Result};
use crate::grid::{LineField, RadialField};

/// ∫ weight(s)·w(s) ds over the line grid: midpoint rule on cells, which is
/// the natural integral of a cell-average field (covers the full
/// [s_min, s_max] span, unlike node trapezoid).
pub fn quad_line(w: &LineField, weight: impl Fn(f64) -> f64) -> f64 {
    let ds = w.grid.ds;
    w.values
        .iter()
        .enumerate()
        .map(|(j, &v)| weight(w.grid.center(j)) * v)
        .sum::<f64>()
        * ds
}

/// ∫ weight(r)·u(r) dr over the radial node set (non-uniform trapezoid).
pub fn quad_radial(u: &RadialField, weight: impl Fn(f64) -> f64) -> f64 {
    let mut acc = 0.0;
    let mut prev_r = u.grid.node(0);
    let mut prev_f = weight(prev_r) * u.values[0];
    for i in 1..u.grid.n {
        let r = u.grid.node(i);
        let f = weight(r) * u.values[i];
        acc += 0.5 * (f + prev_f) * (r - prev_r);
        prev_r = r;
        prev_f = f;
    }
    acc
}

/// Adaptive Simpson integration of `f` on [a, b] to absolute tolerance
/// `tol`.  Recursion depth is capped; integrands with integrable
/// fractional-power corners converge well before the cap.
pub fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
        h / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &impl Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, m - a);
        let right = simpson(fm, frm, fb, b - m);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
    }
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let fb = f(b);
    let whole = simpson(fa, fm, fb, b - a);
    recurse(f, a, b, fa, fm, fb, whole, tol, 52)
}

/// Root of a continuous function on a sign-changing bracket, by bisection.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::Validation(format!(
            "bisection bracket [{lo}, {hi}] does not change sign"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol {
            return Ok(mid);
        }
        let fmid = f(mid);
        if fmid == 0.0 {
            return Ok(mid);
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Expand [lo, hi] geometrically about its midpoint until `f` changes sign
/// across it.  Reports the last bracket tried on failure.
pub fn expand_bracket(f: impl Fn(f64) -> f64, lo0: f64, hi0: f64) -> Result<(f64, f64)> {
    let (mut lo, mut hi) = (lo0, hi0);
    for _ in 0..120 {
        if f(lo).signum() != f(hi).signum() {
            return Ok((lo, hi));
        }
        let mid = 0.5 * (lo + hi);
        let half = (hi - lo).max(1.0);
        lo = mid - half;
        hi = mid + half;
    }
    Err(Error::Validation(format!(
        "no sign change found while expanding bracket; last tried [{lo}, {hi}]"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{InitialCondition, LineGrid, RadialGrid};

    #[test]
    fn line_quadrature_is_exact_for_constants_and_linear() {
        let g = LineGrid::new(0.0, 1.0, 7).unwrap();
        let one = LineField::from_fn(g, 0.0, |_| 1.0).unwrap();
        assert!((quad_line(&one, |_| 1.0) - 1.0).abs() < 1e-15);

        // w(s) = s on [0,1]: midpoint sums are exact for linear integrands.
        let lin = LineField::from_fn(g, 0.0, |s| s).unwrap();
        assert!((quad_line(&lin, |_| 1.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn radial_quadrature_converges_at_second_order() {
        // Smooth integrand on a log grid; halving the spacing must shrink
        // the error by at least 3.5x.
        let exact = 2.0_f64.ln(); // ∫ 1/r dr over [1, 2]
        let mut errors = Vec::new();
        for n in [64usize, 128] {
            let g = RadialGrid::new(1.0, 2.0, n + 1).unwrap();
            let u = RadialField::from_fn(g, 0.0, |_| 1.0).unwrap();
            errors.push((quad_radial(&u, |r| 1.0 / r) - exact).abs());
        }
        assert!(errors[0] / errors[1] > 3.5, "ratio {}", errors[0] / errors[1]);
    }

    #[test]
    fn radial_quadrature_matches_hand_integral_for_bump_weight() {
        // ∫ r⁻¹·max{(r−0.5)(1.5−r),0} dr over [0.25, 2] = 1 − (3/4)·ln 3,
        // by expanding the parabola: ∫(−r + 2 − 0.75/r) dr on [0.5, 1.5].
        let exact = 1.0 - 0.75 * 3.0_f64.ln();
        let ic = InitialCondition::Bump;
        let g = RadialGrid::new(0.25, 2.0, 4097).unwrap();
        let u = RadialField::from_fn(g, 0.0, |r| ic.eval(r)).unwrap();
        let got = quad_radial(&u, |r| 1.0 / r);
        assert!(
            (got - exact).abs() < 5e-7,
            "expected {exact}, got {got} (diff {})",
            (got - exact).abs()
        );
    }

    #[test]
    fn adaptive_simpson_handles_fractional_power_corner() {
        // ∫₀¹ √y dy = 2/3, with a derivative singularity at 0.
        let got = adaptive_simpson(&|y: f64| y.sqrt(), 0.0, 1.0, 1e-12);
        assert!((got - 2.0 / 3.0).abs() < 1e-10, "got {got}");
        // Smooth case to tight tolerance: ∫₀^π sin = 2.
        let got = adaptive_simpson(&f64::sin, 0.0, std::f64::consts::PI, 1e-13);
        assert!((got - 2.0).abs() < 1e-12);
    }

    #[test]
    fn bisection_and_bracket_expansion() {
        let f = |x: f64| x * x * x - 2.0;
        let root = bisect(f, 0.0, 2.0, 1e-14).unwrap();
        assert!((root - 2.0_f64.powf(1.0 / 3.0)).abs() < 1e-12);

        let (lo, hi) = expand_bracket(f, 100.0, 101.0).unwrap();
        assert!(f(lo).signum() != f(hi).signum());
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12).is_err());
    }
}
