//! Static Wigner function, normalized to unit mass under `dx dy` with
//! `alpha = (x + i y) / sqrt(2)`.
//!
//! The general form is
//!
//! ```text
//! W = e^{2|alpha|^2 + D} / (pi tau1 tau2 N_m)
//!     * d^m/dF^m [ (F^2-4C^2)^{-1/2} exp((-F|E|^2 + 2C Re E^2)/(F^2-4C^2)) ]
//! ```
//!
//! with `E = B - 2 alpha`. The growing factor `e^{2|alpha|^2 + D}` is folded
//! into the exponent of the jet before exponentiation.

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{assert_real, Error, Result};
use crate::grid::{NegativityMetrics, PhaseGrid, Window};
use crate::jets::Jet;
use crate::kernel::{derive_kernel, KernelCoeffs, StateParams};
use crate::moments::{norm_constants_from_kernel, REALNESS_TOLERANCE};

/// Static Wigner function of one state, with its normalization computed once.
#[derive(Debug, Clone)]
pub struct WignerEvaluator {
    params: StateParams,
    kernel: KernelCoeffs,
    /// `1 / (pi tau1 tau2 N_m)`
    scale: f64,
}

impl WignerEvaluator {
    pub fn new(params: &StateParams) -> Result<Self> {
        let kernel = derive_kernel(params)?;
        let norm = norm_constants_from_kernel(&kernel, params.m)?[params.m as usize];
        Ok(Self {
            params: *params,
            kernel,
            scale: 1.0 / (PI * kernel.tau_product() * norm),
        })
    }

    pub fn params(&self) -> &StateParams {
        &self.params
    }

    pub fn kernel(&self) -> &KernelCoeffs {
        &self.kernel
    }

    /// Dispatches to the closed forms for undisplaced `m <= 1`.
    pub fn point(&self, x: f64, y: f64) -> Result<f64> {
        if self.params.is_undisplaced() {
            match self.params.m {
                0 => return Ok(gaussian_m0(&self.params, x, y)),
                1 => return Ok(wigner_m1_coeffs(&self.params)?.evaluate(&self.params, x, y)),
                _ => {}
            }
        }
        self.point_generic(x, y)
    }

    /// Jet evaluation of the general form, valid for every `m` and displacement.
    pub fn point_generic(&self, x: f64, y: f64) -> Result<f64> {
        let k = &self.kernel;
        let order = self.params.m as usize;
        let e_re = k.b.re - SQRT_2 * x;
        let e_im = k.b.im - SQRT_2 * y;
        let e_abs_sq = e_re * e_re + e_im * e_im;
        let e_sq_re = e_re * e_re - e_im * e_im;

        let f = Jet::variable(k.f, order);
        let lower = f.shift(-2.0 * k.c);
        let upper = f.shift(2.0 * k.c);
        let inv_sqrt = lower.powf(-0.5)?.mul(&upper.powf(-0.5)?)?;
        let numerator = f.scale(-e_abs_sq).shift(2.0 * k.c * e_sq_re);
        let exponent = numerator
            .div(&lower.mul(&upper)?)?
            .shift(x * x + y * y + k.d);
        let g = inv_sqrt.mul(&exponent.exp())?;
        assert_real(
            g.derivative(order)? * self.scale,
            REALNESS_TOLERANCE,
            "wigner_point",
        )
    }

    pub fn grid(&self, window: Window, nx: usize, ny: usize) -> Result<PhaseGrid> {
        Ok(PhaseGrid::from_fn(window, nx, ny, |x, y| self.point(x, y))?.with_params(self.params))
    }
}

/// `W(x, y)` of the photon-added state.
pub fn wigner_point(params: &StateParams, x: f64, y: f64) -> Result<f64> {
    WignerEvaluator::new(params)?.point(x, y)
}

/// `W(x, y)` through the jet path only, bypassing the closed forms.
pub fn wigner_point_generic(params: &StateParams, x: f64, y: f64) -> Result<f64> {
    WignerEvaluator::new(params)?.point_generic(x, y)
}

pub fn wigner_grid(params: &StateParams, window: Window, nx: usize, ny: usize) -> Result<PhaseGrid> {
    WignerEvaluator::new(params)?.grid(window, nx, ny)
}

pub fn negativity_metrics(grid: &PhaseGrid) -> NegativityMetrics {
    grid.negativity()
}

/// `exp(-(e^{-2r} x^2 + e^{2r} y^2)/(2 nbar + 1))`, the envelope of every
/// undisplaced closed form.
fn envelope(params: &StateParams, x: f64, y: f64) -> f64 {
    let thermal = 2.0 * params.nbar + 1.0;
    let e2r = (2.0 * params.r).exp();
    (-(x * x / e2r + e2r * y * y) / thermal).exp()
}

fn gaussian_m0(params: &StateParams, x: f64, y: f64) -> f64 {
    envelope(params, x, y) / (PI * (2.0 * params.nbar + 1.0))
}

/// Undisplaced single-photon form
/// `W = (M x^2 + N y^2 + Upsilon) / pi * envelope(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct M1Coeffs {
    /// Coefficient of `x^2`.
    pub x2: f64,
    /// Coefficient of `y^2`.
    pub y2: f64,
    /// Value of `pi W` at the origin.
    pub upsilon: f64,
}

impl M1Coeffs {
    pub fn evaluate(&self, params: &StateParams, x: f64, y: f64) -> f64 {
        (self.x2 * x * x + self.y2 * y * y + self.upsilon) / PI * envelope(params, x, y)
    }
}

pub fn wigner_m1_coeffs(params: &StateParams) -> Result<M1Coeffs> {
    if !params.is_undisplaced() || params.m != 1 {
        return Err(Error::Domain(
            "single-photon closed form requires beta = 0 and m = 1".into(),
        ));
    }
    let k = derive_kernel(params)?;
    let (t1, t2) = (k.tau1_sq, k.tau2_sq);
    let sum = t1 + t2;
    let denom = sum * (2.0 * params.nbar + 1.0).powi(3);
    let e2r = (2.0 * params.r).exp();
    Ok(M1Coeffs {
        x2: (2.0 * t1 / e2r).powi(2) / denom,
        y2: (2.0 * t2 * e2r).powi(2) / denom,
        upsilon: (sum - 4.0 * t1 * t2) / denom,
    })
}
