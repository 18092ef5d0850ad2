//! Normalization constants `N_m = tr(a^dag^m rho_s a^m)` and photon statistics.
//!
//! `N_m` is the m-th A-derivative of the Gaussian integral
//! `(A^2-4C^2)^{-1/2} exp[(A|B|^2 + C B*^2 + C B^2)/(A^2-4C^2)]`, times
//! `(-1)^m e^D / (tau1 tau2)`. One jet of order `m + 2` yields `N_m`, `N_{m+1}`
//! and `N_{m+2}` together.

use num_complex::Complex64;

use crate::error::{assert_real, Error, Result};
use crate::jets::Jet;
use crate::kernel::{derive_kernel, KernelCoeffs, StateParams};

pub(crate) const REALNESS_TOLERANCE: f64 = 1e-10;

/// Jet in `A` of `e^D (A^2-4C^2)^{-1/2} exp[(A|B|^2 + 2C Re B^2)/(A^2-4C^2)]`.
pub(crate) fn normalization_jet(kernel: &KernelCoeffs, order: usize) -> Result<Jet> {
    let a = Jet::variable(kernel.a, order);
    let lower = a.shift(-2.0 * kernel.c);
    let upper = a.shift(2.0 * kernel.c);
    // The factored discriminant keeps all Taylor terms of the same sign.
    let inv_sqrt = lower.powf(-0.5)?.mul(&upper.powf(-0.5)?)?;
    let b = kernel.b;
    if b == Complex64::new(0.0, 0.0) {
        return Ok(inv_sqrt);
    }
    let cross = kernel.c * (b.conj() * b.conj() + b * b);
    let numerator = a.scale(b.norm_sqr()).shift(cross);
    let discriminant = lower.mul(&upper)?;
    let exponent = numerator.div(&discriminant)?.shift(kernel.d);
    Ok(inv_sqrt.mul(&exponent.exp())?)
}

/// `[N_0, ..., N_max]` for the base state of `params` (its `m` is ignored).
pub fn norm_constants(params: &StateParams, max_m: u32) -> Result<Vec<f64>> {
    let kernel = derive_kernel(params)?;
    norm_constants_from_kernel(&kernel, max_m)
}

pub(crate) fn norm_constants_from_kernel(kernel: &KernelCoeffs, max_m: u32) -> Result<Vec<f64>> {
    let jet = normalization_jet(kernel, max_m as usize)?;
    let prefactor = 1.0 / kernel.tau_product();
    let mut out = Vec::with_capacity(max_m as usize + 1);
    for (k, derivative) in jet.derivatives().into_iter().enumerate() {
        let signed = if k % 2 == 0 { derivative } else { -derivative };
        let value = assert_real(signed * prefactor, REALNESS_TOLERANCE, "norm_constant")?;
        if !(value > 0.0) {
            return Err(Error::NumericConsistency {
                context: "norm_constant",
                detail: format!("N_{k} = {value} is not positive"),
            });
        }
        out.push(value);
    }
    Ok(out)
}

/// `N_m` for `m = params.m`.
pub fn norm_constant(params: &StateParams) -> Result<f64> {
    Ok(*norm_constants(params, params.m)?
        .last()
        .expect("at least N_0"))
}

/// Photon statistics of the photon-added state derived from `(N_m, N_{m+1}, N_{m+2})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonStatistics {
    pub norm: [f64; 3],
    /// `<a^dag a>`
    pub mean_photon: f64,
    /// `<a^dag^2 a^2>`
    pub second_factorial_moment: f64,
}

impl PhotonStatistics {
    /// Mandel Q in the form `(N2 - 4N1 + 2N0)/(N1 - N0) - (N1 - N0)/N0`.
    pub fn mandel_q(&self) -> Result<f64> {
        if self.mean_photon <= 1e-14 {
            return Err(Error::UndefinedMandelQ);
        }
        let [n0, n1, n2] = self.norm;
        Ok((n2 - 4.0 * n1 + 2.0 * n0) / (n1 - n0) - (n1 - n0) / n0)
    }
}

pub fn photon_statistics(params: &StateParams) -> Result<PhotonStatistics> {
    let m = params.m as usize;
    let norms = norm_constants(params, params.m + 2)?;
    let norm = [norms[m], norms[m + 1], norms[m + 2]];
    let [n0, n1, n2] = norm;
    let mean_photon = n1 / n0 - 1.0;
    let ratio2 = n2 / n0;
    let second_factorial_moment = ratio2 - 4.0 * n1 / n0 + 2.0;
    let floor = -1e-12 * ratio2.max(1.0);
    if mean_photon < floor || second_factorial_moment < floor {
        return Err(Error::NumericConsistency {
            context: "photon_statistics",
            detail: format!(
                "negative moment: <n> = {mean_photon}, <a+^2 a^2> = {second_factorial_moment}"
            ),
        });
    }
    Ok(PhotonStatistics {
        norm,
        mean_photon: mean_photon.max(0.0),
        second_factorial_moment: second_factorial_moment.max(0.0),
    })
}

pub fn mean_photon(params: &StateParams) -> Result<f64> {
    Ok(photon_statistics(params)?.mean_photon)
}

pub fn second_factorial_moment(params: &StateParams) -> Result<f64> {
    Ok(photon_statistics(params)?.second_factorial_moment)
}

pub fn mandel_q(params: &StateParams) -> Result<f64> {
    photon_statistics(params)?.mandel_q()
}

/// Bracket scan step in `r` for [`q_threshold`].
pub const THRESHOLD_SCAN_STEP: f64 = 0.01;
/// Bisection tolerance in `r` for [`q_threshold`].
pub const THRESHOLD_TOLERANCE: f64 = 1e-4;

/// Smallest `r` in `[0, r_max]` with `Q_M(r) >= 0` for an undisplaced state
/// with thermal occupation `nbar` and `m` added photons.
///
/// Returns `Some(0.0)` when the state is already non-sub-Poissonian at `r = 0`
/// and `None` when no crossing is found up to `r_max`.
pub fn q_threshold(nbar: f64, m: u32, r_max: f64) -> Result<Option<f64>> {
    let q_at = |r: f64| mandel_q(&StateParams::new(nbar, r, m));
    let mut lo = 0.0;
    let q_start = match q_at(lo) {
        Ok(q) => q,
        Err(Error::UndefinedMandelQ) => {
            lo = THRESHOLD_SCAN_STEP;
            q_at(lo)?
        }
        Err(e) => return Err(e),
    };
    if q_start >= 0.0 {
        return Ok(Some(lo));
    }
    let steps = (r_max / THRESHOLD_SCAN_STEP).round() as usize;
    for i in 1..=steps {
        let hi = (i as f64 * THRESHOLD_SCAN_STEP).min(r_max);
        if hi <= lo {
            continue;
        }
        let q_hi = q_at(hi)?;
        if q_hi >= 0.0 {
            let (mut a, mut b) = (lo, hi);
            while b - a > THRESHOLD_TOLERANCE {
                let mid = 0.5 * (a + b);
                if q_at(mid)? >= 0.0 {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            return Ok(Some(0.5 * (a + b)));
        }
        lo = hi;
    }
    Ok(None)
}
