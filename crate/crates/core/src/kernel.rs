//! State parameters and the coefficients of the normally ordered Gaussian
//! kernel of a displaced squeezed thermal state
//!
//! ```text
//! rho_s = 1/(tau1 tau2) :exp{ -(q-Q)^2 / (2 tau1^2) - (p-P)^2 / (2 tau2^2) }:
//! ```
//!
//! where `2 tau1^2 = (2 nbar + 1) e^{2r} + 1` and `2 tau2^2 = (2 nbar + 1) e^{-2r} + 1`.
//! Expanding the exponent in ladder operators gives
//! `-A a^dag a + B^* a + B a^dag + C a^2 + C a^dag^2 + D`; every closed form in
//! this crate is written in terms of these coefficients.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Below this |sigma| the Legendre form of the photon number distribution is
/// indeterminate and the direct finite sum is used instead.
pub const SIGMA_DEGENERATE: f64 = 1e-8;

/// Physical inputs of a photon-added squeezed thermal state.
///
/// The displacement is stored as the quadrature pair `(q, p)` with
/// `beta = (q + i p) / sqrt(2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateParams {
    pub nbar: f64,
    pub r: f64,
    pub beta_q: f64,
    pub beta_p: f64,
    pub m: u32,
}

impl StateParams {
    /// Undisplaced state.
    pub fn new(nbar: f64, r: f64, m: u32) -> Self {
        Self {
            nbar,
            r,
            beta_q: 0.0,
            beta_p: 0.0,
            m,
        }
    }

    pub fn with_displacement(mut self, q: f64, p: f64) -> Self {
        self.beta_q = q;
        self.beta_p = p;
        self
    }

    pub fn with_beta(self, beta: Complex64) -> Self {
        let (q, p) = beta_to_quadratures(beta);
        self.with_displacement(q, p)
    }

    pub fn with_m(mut self, m: u32) -> Self {
        self.m = m;
        self
    }

    /// Complex displacement amplitude.
    pub fn beta(&self) -> Complex64 {
        quadratures_to_beta(self.beta_q, self.beta_p)
    }

    pub fn is_undisplaced(&self) -> bool {
        self.beta_q == 0.0 && self.beta_p == 0.0
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("nbar", self.nbar),
            ("r", self.r),
            ("beta_q", self.beta_q),
            ("beta_p", self.beta_p),
        ] {
            if !value.is_finite() {
                return Err(Error::Domain(format!("{name} must be finite, got {value}")));
            }
        }
        if self.nbar < 0.0 {
            return Err(Error::Domain(format!(
                "nbar must be non-negative, got {}",
                self.nbar
            )));
        }
        Ok(())
    }
}

pub fn quadratures_to_beta(q: f64, p: f64) -> Complex64 {
    Complex64::new(q, p) / std::f64::consts::SQRT_2
}

pub fn beta_to_quadratures(beta: Complex64) -> (f64, f64) {
    let scaled = beta * std::f64::consts::SQRT_2;
    (scaled.re, scaled.im)
}

/// Gaussian-kernel coefficients derived from [`StateParams`].
///
/// `sigma_sq = (1-A)^2 - 4C^2 = (tau1^2-1)(tau2^2-1)/(tau1^2 tau2^2)` is kept
/// signed: for strongly squeezed cold states `tau2^2 < 1` and it is negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelCoeffs {
    pub tau1_sq: f64,
    pub tau2_sq: f64,
    pub a: f64,
    pub b: Complex64,
    pub c: f64,
    pub d: f64,
    pub f: f64,
    pub sigma_sq: f64,
}

impl KernelCoeffs {
    /// `tau1 * tau2`, the prefactor of the normally ordered kernel.
    pub fn tau_product(&self) -> f64 {
        (self.tau1_sq * self.tau2_sq).sqrt()
    }

    /// `sigma` when it is real (`sigma_sq >= 0`).
    pub fn sigma(&self) -> Option<f64> {
        (self.sigma_sq >= 0.0).then(|| self.sigma_sq.sqrt())
    }

    /// True when `|sigma|` is below [`SIGMA_DEGENERATE`].
    pub fn is_sigma_degenerate(&self) -> bool {
        self.sigma_sq.abs().sqrt() < SIGMA_DEGENERATE
    }

    /// `A^2 - 4C^2 = 1/(tau1^2 tau2^2)`.
    pub fn a_discriminant(&self) -> f64 {
        (self.a - 2.0 * self.c) * (self.a + 2.0 * self.c)
    }

    /// `F^2 - 4C^2`.
    pub fn f_discriminant(&self) -> f64 {
        (self.f - 2.0 * self.c) * (self.f + 2.0 * self.c)
    }
}

pub fn derive_kernel(params: &StateParams) -> Result<KernelCoeffs> {
    params.validate()?;
    let thermal = 2.0 * params.nbar + 1.0;
    let tau1_sq = 0.5 * (thermal * (2.0 * params.r).exp() + 1.0);
    let tau2_sq = 0.5 * (thermal * (-2.0 * params.r).exp() + 1.0);
    if !tau1_sq.is_finite() || !tau2_sq.is_finite() {
        return Err(Error::Domain(format!(
            "squeezing r = {} overflows the kernel widths",
            params.r
        )));
    }

    let inv1 = 1.0 / tau1_sq;
    let inv2 = 1.0 / tau2_sq;
    let (q, p) = (params.beta_q, params.beta_p);

    let a = 0.5 * inv1 + 0.5 * inv2;
    let b = Complex64::new(q * inv1, p * inv2) / std::f64::consts::SQRT_2;
    let c = -0.25 * inv1 + 0.25 * inv2;
    let d = -0.5 * q * q * inv1 - 0.5 * p * p * inv2;
    let f = 2.0 - a;
    // (1-A)^2 - 4C^2 factored as (1-A-2C)(1-A+2C) = (1 - 1/tau2^2)(1 - 1/tau1^2).
    let sigma_sq = (1.0 - inv2) * (1.0 - inv1);

    let coeffs = KernelCoeffs {
        tau1_sq,
        tau2_sq,
        a,
        b,
        c,
        d,
        f,
        sigma_sq,
    };
    if !(2.0 * c.abs() < a) || !(coeffs.f_discriminant() > 0.0) {
        return Err(Error::NumericConsistency {
            context: "derive_kernel",
            detail: format!("Gaussian convergence |2C| < A or F^2 > 4C^2 fails: A={a}, C={c}"),
        });
    }
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn vacuum_limit() {
        let k = derive_kernel(&StateParams::new(0.0, 0.0, 0)).unwrap();
        assert_eq!(k.tau1_sq, 1.0);
        assert_eq!(k.tau2_sq, 1.0);
        assert_eq!(k.a, 1.0);
        assert_eq!(k.c, 0.0);
        assert_eq!(k.b, Complex64::new(0.0, 0.0));
        assert_eq!(k.d, 0.0);
        assert_eq!(k.sigma(), Some(0.0));
        assert!(k.is_sigma_degenerate());
    }

    #[test]
    fn thermal_nbar_one() {
        let k = derive_kernel(&StateParams::new(1.0, 0.0, 0)).unwrap();
        assert_eq!(k.tau1_sq, 2.0);
        assert_eq!(k.tau2_sq, 2.0);
        assert_eq!(k.a, 0.5);
        assert_eq!(k.c, 0.0);
        assert_relative_eq!(k.sigma().unwrap(), 0.5, epsilon = 1e-15);
        assert_eq!(k.f, 1.5);
    }

    #[test]
    fn squeezed_thermal_widths() {
        let k = derive_kernel(&StateParams::new(0.5, 0.3, 0)).unwrap();
        assert_relative_eq!(k.tau1_sq, (2.0 * 0.6f64.exp() + 1.0) / 2.0, epsilon = 1e-15);
        assert_relative_eq!(k.tau2_sq, (2.0 * (-0.6f64).exp() + 1.0) / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn sigma_matches_both_definitions() {
        let k = derive_kernel(&StateParams::new(0.7, 0.4, 0)).unwrap();
        let direct = (1.0 - k.a).powi(2) - 4.0 * k.c * k.c;
        assert_relative_eq!(k.sigma_sq, direct, max_relative = 1e-12);
        let via_tau = (k.tau1_sq - 1.0) * (k.tau2_sq - 1.0) / (k.tau1_sq * k.tau2_sq);
        assert_relative_eq!(k.sigma_sq, via_tau, max_relative = 1e-12);
    }

    #[test]
    fn squeezed_vacuum_has_negative_sigma_sq() {
        let k = derive_kernel(&StateParams::new(0.0, 0.3, 0)).unwrap();
        assert!(k.tau2_sq < 1.0);
        assert!(k.sigma_sq < 0.0);
        assert_eq!(k.sigma(), None);
        assert_relative_eq!(k.a, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn displacement_enters_b_and_d_only() {
        let base = derive_kernel(&StateParams::new(0.5, 0.3, 0)).unwrap();
        let k = derive_kernel(&StateParams::new(0.5, 0.3, 0).with_displacement(0.4, -0.2)).unwrap();
        assert_eq!(base.a, k.a);
        assert_eq!(base.c, k.c);
        assert!(k.d < 0.0);
        assert_relative_eq!(k.b.re, 0.4 / k.tau1_sq / 2f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(k.b.im, -0.2 / k.tau2_sq / 2f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn beta_round_trip() {
        let beta = Complex64::new(0.3, -1.1);
        let params = StateParams::new(0.0, 0.0, 0).with_beta(beta);
        assert_relative_eq!(params.beta().re, beta.re, epsilon = 1e-15);
        assert_relative_eq!(params.beta().im, beta.im, epsilon = 1e-15);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            derive_kernel(&StateParams::new(-0.1, 0.0, 0)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            derive_kernel(&StateParams::new(0.1, f64::NAN, 0)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            derive_kernel(&StateParams::new(0.1, 0.0, 0).with_displacement(f64::INFINITY, 0.0)),
            Err(Error::Domain(_))
        ));
    }

    proptest! {
        #[test]
        fn kernel_invariants(nbar in 0.0f64..5.0, r in -2.0f64..2.0, q in -3.0f64..3.0, p in -3.0f64..3.0) {
            let k = derive_kernel(&StateParams::new(nbar, r, 0).with_displacement(q, p)).unwrap();
            prop_assert!(k.tau1_sq * k.tau2_sq >= 1.0 - 1e-12);
            prop_assert!(k.a > 0.0 && k.a <= 1.0 + 1e-15);
            prop_assert!(2.0 * k.c.abs() < k.a);
            prop_assert!(k.d <= 0.0);
            prop_assert!((k.f - (2.0 - k.a)).abs() == 0.0);
            prop_assert!(k.f_discriminant() > 0.0);
            let disc = k.a_discriminant() * k.tau1_sq * k.tau2_sq;
            prop_assert!((disc - 1.0).abs() < 1e-12);
        }

        #[test]
        fn squeezing_sign_swaps_widths(nbar in 0.0f64..5.0, r in -2.0f64..2.0) {
            let plus = derive_kernel(&StateParams::new(nbar, r, 0)).unwrap();
            let minus = derive_kernel(&StateParams::new(nbar, -r, 0)).unwrap();
            prop_assert_eq!(plus.tau1_sq, minus.tau2_sq);
            prop_assert_eq!(plus.tau2_sq, minus.tau1_sq);
            prop_assert!((plus.c + minus.c).abs() <= 1e-15 * plus.c.abs().max(1e-300));
        }

        #[test]
        fn a_equals_one_only_without_thermal_noise(nbar in 1e-3f64..5.0, r in -2.0f64..2.0) {
            let k = derive_kernel(&StateParams::new(nbar, r, 0)).unwrap();
            prop_assert!(k.a < 1.0);
            let pure = derive_kernel(&StateParams::new(0.0, r, 0)).unwrap();
            prop_assert!((pure.a - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn product_equality_only_at_vacuum() {
        let k = derive_kernel(&StateParams::new(0.0, 0.0, 0)).unwrap();
        assert_eq!(k.tau1_sq * k.tau2_sq, 1.0);
        for (nbar, r) in [(0.0, 0.1), (0.1, 0.0), (0.2, -0.3)] {
            let k = derive_kernel(&StateParams::new(nbar, r, 0)).unwrap();
            assert!(k.tau1_sq * k.tau2_sq > 1.0);
        }
    }
}
