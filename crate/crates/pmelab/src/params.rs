//! Global problem parameters.
//!
//! Everything in the crate is parameterised by the exponent m > 1 and the
//! dimension N ≥ 3, plus three constants derived from them:
//!
//! * θ = −1/(N−2) — the exponent of the radial substitution r = e^{θs},
//! * γ₂ = N − (N−2)/m — the second critical density exponent, reached by
//!   the inversion map ũ(r) = r^{(2−N)/m} u(1/r),
//! * ω₁ = 2π^{N/2}/Γ(N/2) — the area of the unit sphere S^{N−1}, the
//!   factor that reduces N-dimensional weighted integrals to radial ones.

use crate::error::{Error, Result};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Parameters {
    pub m: f64,
    /// Spatial dimension N.
    pub dim: u32,
    /// θ = −1/(N−2).
    pub theta: f64,
    /// γ₂ = N − (N−2)/m.
    pub gamma2: f64,
    /// Area of the unit sphere in dimension N.
    pub omega1: f64,
}

impl Parameters {
    pub fn new(m: f64, dim: u32) -> Result<Self> {
        if !(m > 1.0) {
            return Err(Error::Validation(format!("m must exceed 1, got {m}")));
        }
        if dim < 3 {
            return Err(Error::Validation(format!("N must be at least 3, got {dim}")));
        }
        let nf = dim as f64;
        Ok(Parameters {
            m,
            dim,
            theta: -1.0 / (nf - 2.0),
            gamma2: nf - (nf - 2.0) / m,
            omega1: 2.0 * PI.powf(nf / 2.0) / gamma_half(dim),
        })
    }

    /// N − 2 as a float; appears in almost every formula.
    #[inline]
    pub fn nm2(&self) -> f64 {
        self.dim as f64 - 2.0
    }
}

/// Γ(n/2) for integer n ≥ 1.  Even n: Γ(k) = (k−1)!.  Odd n = 2k+1:
/// Γ(k + 1/2) = (2k)!·√π/(4^k·k!).
fn gamma_half(n: u32) -> f64 {
    if n % 2 == 0 {
        let k = n / 2;
        (1..k).map(|i| i as f64).product()
    } else {
        let k = (n - 1) / 2;
        let mut val = PI.sqrt();
        for i in 0..k {
            // Γ(x+1) = x·Γ(x) climbing from Γ(1/2) = √π.
            val *= i as f64 + 0.5;
        }
        val
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_constants_match_direct_substitution() {
        let p = Parameters::new(3.0, 3).unwrap();
        assert_eq!(p.theta, -1.0);
        assert!((p.gamma2 - 8.0 / 3.0).abs() < 1e-15);
        assert!((p.omega1 - 4.0 * PI).abs() < 1e-12);

        let p = Parameters::new(2.0, 4).unwrap();
        assert_eq!(p.theta, -0.5);
        assert_eq!(p.gamma2, 3.0);
        assert!((p.omega1 - 2.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn sphere_area_in_higher_dimensions() {
        // |S⁴| = 8π²/3 (N=5), |S⁵| = π³ (N=6).
        let p5 = Parameters::new(2.0, 5).unwrap();
        assert!((p5.omega1 - 8.0 * PI * PI / 3.0).abs() < 1e-12);
        let p6 = Parameters::new(2.0, 6).unwrap();
        assert!((p6.omega1 - PI.powi(3)).abs() < 1e-12);
    }

    #[test]
    fn rejects_out_of_range_parameters() {
        assert!(Parameters::new(1.0, 3).is_err()); // boundary of m > 1
        assert!(Parameters::new(0.5, 3).is_err());
        assert!(Parameters::new(3.0, 2).is_err());
        let msg = format!("{}", Parameters::new(1.0, 3).unwrap_err());
        assert!(msg.contains("m must exceed 1"));
    }
}
