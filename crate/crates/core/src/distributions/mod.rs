//! Photon number distribution `P(n) = <n|rho_m|n>` of the photon-added state.
//!
//! Three closed forms are provided:
//!
//! * [`pnd_hermite_sum`]: general displacement, a finite sum over squared
//!   complex Hermite values;
//! * [`pnd_legendre`] and [`pnd_finite_sum`]: the undisplaced state, as a
//!   scaled Legendre polynomial or as the equivalent double sum;
//! * [`pnd_squeezed_thermal`]: the undisplaced state without added photons.
//!
//! [`pnd`] and [`pnd_profile`] dispatch between them.

pub mod polynomials;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{derive_kernel, KernelCoeffs, StateParams};
use crate::moments::norm_constants_from_kernel;

pub use polynomials::{
    hermite, legendre, ln_abs_scaled_hermite_sequence, legendre_sum_form, scaled_hermite_sequence, scaled_legendre_sequence,
};

const NEGATIVE_TOLERANCE: f64 = -1e-12;

/// Probabilities `P(0..=n_max)` with the unaccounted tail weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PndProfile {
    pub params: StateParams,
    pub n_max: usize,
    pub probs: Vec<f64>,
    pub tail_deficit: f64,
}

impl PndProfile {
    pub fn argmax(&self) -> usize {
        self.probs
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (n, &p)| {
                if p > best.1 {
                    (n, p)
                } else {
                    best
                }
            })
            .0
    }

    pub fn mean(&self) -> f64 {
        self.probs.iter().enumerate().map(|(n, p)| n as f64 * p).sum::<f64>() / self.mass()
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.probs
            .iter()
            .enumerate()
            .map(|(n, p)| (n as f64 - mean).powi(2) * p)
            .sum::<f64>()
            / self.mass()
    }

    pub fn mass(&self) -> f64 {
        self.probs.iter().sum()
    }
}

pub fn pnd(params: &StateParams, n: usize) -> Result<f64> {
    Ok(pnd_values(params, n)?[n])
}

pub fn pnd_profile(params: &StateParams, n_max: usize) -> Result<PndProfile> {
    if n_max < params.m as usize {
        return Err(Error::Usage(format!(
            "n_max = {n_max} must be at least m = {}",
            params.m
        )));
    }
    let probs = pnd_values(params, n_max)?;
    let tail_deficit = 1.0 - probs.iter().sum::<f64>();
    Ok(PndProfile {
        params: *params,
        n_max,
        probs,
        tail_deficit,
    })
}

fn pnd_values(params: &StateParams, n_max: usize) -> Result<Vec<f64>> {
    let kernel = derive_kernel(params)?;
    if !params.is_undisplaced() {
        pnd_hermite_sum(params, n_max)
    } else if kernel.is_sigma_degenerate() {
        pnd_finite_sum(params, n_max)
    } else {
        pnd_legendre(params, n_max)
    }
}

/// Natural-log factorials `ln k!` for `k = 0..=n`.
fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    out.push(acc);
    for k in 1..=n {
        acc += (k as f64).ln();
        out.push(acc);
    }
    out
}

/// Sums non-negative terms given by their logarithms, smallest first.
fn sum_log_terms(mut logs: Vec<f64>) -> f64 {
    logs.retain(|t| *t > f64::NEG_INFINITY);
    if logs.is_empty() {
        return 0.0;
    }
    logs.sort_by(|a, b| a.total_cmp(b));
    let top = *logs.last().unwrap();
    top.exp() * logs.iter().map(|t| (t - top).exp()).sum::<f64>()
}

/// `l * ln(base)` with `0^0 = 1`.
fn ln_pow(base: f64, l: usize) -> f64 {
    if l == 0 {
        0.0
    } else {
        l as f64 * base.ln()
    }
}

struct Normalizer {
    kernel: KernelCoeffs,
    /// `ln(tau1 tau2 N_m)`
    ln_norm: f64,
}

impl Normalizer {
    fn new(params: &StateParams) -> Result<Self> {
        let kernel = derive_kernel(params)?;
        let norms = norm_constants_from_kernel(&kernel, params.m)?;
        let ln_norm = kernel.tau_product().ln() + norms[params.m as usize].ln();
        Ok(Self { kernel, ln_norm })
    }
}

fn finish(context: &'static str, values: Vec<f64>) -> Result<Vec<f64>> {
    for (n, &p) in values.iter().enumerate() {
        if !p.is_finite() || p < NEGATIVE_TOLERANCE {
            return Err(Error::NumericConsistency {
                context,
                detail: format!("P({n}) = {p}"),
            });
        }
    }
    Ok(values.into_iter().map(|p| p.max(0.0)).collect())
}

fn require_undisplaced(params: &StateParams, form: &str) -> Result<()> {
    if params.is_undisplaced() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{form} requires beta = 0")))
    }
}

/// General-displacement form
/// `P(n) = e^D/(tau1 tau2 N_m) sum_l n! (1-A)^l |C|^{k-l} |H_{k-l}(iB/2sqrt C)|^2 / (l! ((k-l)!)^2)`
/// with `k = n - m`.
pub fn pnd_hermite_sum(params: &StateParams, n_max: usize) -> Result<Vec<f64>> {
    let norm = Normalizer::new(params)?;
    let k = &norm.kernel;
    let m = params.m as usize;
    let lnf = ln_factorials(n_max);
    let base = (1.0 - k.a).max(0.0);
    let ln_u = ln_abs_scaled_hermite_sequence(n_max.saturating_sub(m), k.b, k.c);
    let ln_prefactor = k.d - norm.ln_norm;

    let mut values = vec![0.0; n_max + 1];
    for (n, slot) in values.iter_mut().enumerate().skip(m) {
        let span = n - m;
        let terms = (0..=span)
            .filter(|&l| l == 0 || base > 0.0)
            .map(|l| {
                let j = span - l;
                lnf[n] + ln_pow(base, l) + 2.0 * ln_u[j] - lnf[l] - 2.0 * lnf[j]
            })
            .collect();
        *slot = (ln_prefactor).exp() * sum_log_terms(terms);
    }
    finish("pnd_hermite_sum", values)
}

/// Undisplaced double-sum form
/// `P(n) = sum_j n! (1-A)^{k-2j} |C|^{2j} / ((k-2j)! (j!)^2) / (tau1 tau2 N_m)`.
pub fn pnd_finite_sum(params: &StateParams, n_max: usize) -> Result<Vec<f64>> {
    require_undisplaced(params, "pnd_finite_sum")?;
    let norm = Normalizer::new(params)?;
    let k = &norm.kernel;
    let m = params.m as usize;
    let lnf = ln_factorials(n_max);
    let base = (1.0 - k.a).max(0.0);
    let c_abs = k.c.abs();

    let mut values = vec![0.0; n_max + 1];
    for (n, slot) in values.iter_mut().enumerate().skip(m) {
        let span = n - m;
        let terms = (0..=span / 2)
            .filter(|&j| (span - 2 * j == 0 || base > 0.0) && (j == 0 || c_abs > 0.0))
            .map(|j| {
                let l = span - 2 * j;
                lnf[n] + ln_pow(base, l) + ln_pow(c_abs, 2 * j) - lnf[l] - 2.0 * lnf[j]
            })
            .collect();
        *slot = sum_log_terms(terms) * (-norm.ln_norm).exp();
    }
    finish("pnd_finite_sum", values)
}

/// Undisplaced Legendre form
/// `P(n) = (-1)^m n! sigma^{n-m} P_{n-m}((1-A)/sigma) / ((n-m)! d^m/dA^m (A^2-4C^2)^{-1/2})`.
///
/// `sigma^k P_k(x / sigma)` is evaluated by the scaled Bonnet recurrence, so
/// negative `sigma^2` (strongly squeezed cold states) is handled without
/// complex arithmetic.
pub fn pnd_legendre(params: &StateParams, n_max: usize) -> Result<Vec<f64>> {
    require_undisplaced(params, "pnd_legendre")?;
    let norm = Normalizer::new(params)?;
    let k = &norm.kernel;
    let m = params.m as usize;
    let lnf = ln_factorials(n_max);
    let scaled = scaled_legendre_sequence(n_max.saturating_sub(m), 1.0 - k.a, k.sigma_sq);

    let mut values = vec![0.0; n_max + 1];
    for (n, slot) in values.iter_mut().enumerate().skip(m) {
        let span = n - m;
        *slot = scaled[span] * (lnf[n] - lnf[span] - norm.ln_norm).exp();
    }
    finish("pnd_legendre", values)
}

/// Undisplaced state without added photons:
/// `P(n) = sigma^n P_n((1-A)/sigma) / (tau1 tau2)`.
pub fn pnd_squeezed_thermal(params: &StateParams, n_max: usize) -> Result<Vec<f64>> {
    require_undisplaced(params, "pnd_squeezed_thermal")?;
    if params.m != 0 {
        return Err(Error::Domain("pnd_squeezed_thermal requires m = 0".into()));
    }
    let k = derive_kernel(params)?;
    let scale = 1.0 / k.tau_product();
    let values = scaled_legendre_sequence(n_max, 1.0 - k.a, k.sigma_sq)
        .into_iter()
        .map(|q| q * scale)
        .collect();
    finish("pnd_squeezed_thermal", values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn vacuum() {
        let p = pnd_profile(&StateParams::new(0.0, 0.0, 0), 10).unwrap();
        assert_relative_eq!(p.probs[0], 1.0, epsilon = 1e-15);
        assert!(p.probs[1..].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn thermal_is_geometric() {
        let params = StateParams::new(1.0, 0.0, 0);
        for n in 0..30 {
            assert_relative_eq!(
                pnd(&params, n).unwrap(),
                0.5f64.powi(n as i32 + 1),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn support_starts_at_m() {
        let params = StateParams::new(1.0, 0.3, 1);
        assert_eq!(pnd(&params, 0).unwrap(), 0.0);
        let params = StateParams::new(0.5, 0.3, 3).with_displacement(0.4, -0.2);
        let p = pnd_profile(&params, 10).unwrap();
        assert!(p.probs[..3].iter().all(|&v| v == 0.0));
        assert!(p.probs[3] > 0.0);
    }

    #[test]
    fn photon_added_vacuum_is_fock() {
        let p = pnd_profile(&StateParams::new(0.0, 0.0, 4), 8).unwrap();
        for (n, &v) in p.probs.iter().enumerate() {
            let expected = if n == 4 { 1.0 } else { 0.0 };
            assert_relative_eq!(v, expected, epsilon = 1e-14);
        }
    }

    #[test]
    fn squeezed_vacuum_has_even_support() {
        let p = pnd_profile(&StateParams::new(0.0, 0.5, 0), 20).unwrap();
        for n in (1..20).step_by(2) {
            assert!(p.probs[n].abs() < 1e-15);
        }
        // P(0) of a squeezed vacuum is 1/cosh r.
        assert_relative_eq!(p.probs[0], 1.0 / 0.5f64.cosh(), max_relative = 1e-13);
    }

    #[test]
    fn legendre_and_finite_sum_agree() {
        for (nbar, r, m) in [(0.5, 0.3, 0), (1.0, 0.8, 2), (0.0, -0.5, 1), (0.3, 0.1, 5)] {
            let params = StateParams::new(nbar, r, m);
            let a = pnd_legendre(&params, 60).unwrap();
            let b = pnd_finite_sum(&params, 60).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() <= 1e-12 * x.abs().max(1e-300) + 1e-300, "{x} vs {y}");
            }
        }
    }

    #[test]
    fn hermite_form_reduces_to_legendre_form() {
        for (nbar, r, m) in [(0.5, 0.3, 0), (1.0, 0.8, 2), (0.0, -0.5, 1), (1.0, 0.0, 3)] {
            let params = StateParams::new(nbar, r, m);
            let a = pnd_hermite_sum(&params, 60).unwrap();
            let b = pnd_legendre(&params, 60).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() <= 1e-9 * y.abs() + 1e-300);
            }
        }
    }

    #[test]
    fn squeezed_thermal_form_equals_m0_legendre_form() {
        let params = StateParams::new(0.5, 0.3, 0);
        let a = pnd_squeezed_thermal(&params, 40).unwrap();
        let b = pnd_legendre(&params, 40).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() <= 4.0 * f64::EPSILON * x.abs());
        }
    }

    #[test]
    fn degenerate_sigma_dispatch() {
        // tau2^2 = 1 when e^{2r} = 2 nbar + 1: sigma = 0 with 1 - A > 0.
        let r = 0.5 * 2f64.ln();
        let params = StateParams::new(0.5, r, 1);
        let k = derive_kernel(&params).unwrap();
        assert!(k.is_sigma_degenerate());
        let p = pnd_profile(&params, 120).unwrap();
        assert!(p.tail_deficit.abs() < 1e-6);
    }

    #[test]
    fn normalization_over_test_grid() {
        let mut over_budget_at_120 = Vec::new();
        for nbar in [0.0, 0.5, 1.0] {
            for r in [-0.5, 0.0, 0.3, 0.8] {
                for m in 0..=5 {
                    for (q, p) in [(0.0, 0.0), (0.4, -0.2)] {
                        let params = StateParams::new(nbar, r, m).with_displacement(q, p);
                        let wide = pnd_profile(&params, 600).unwrap();
                        assert!(wide.tail_deficit.abs() < 1e-10, "{params:?}: {}", wide.tail_deficit);
                        let short = pnd_profile(&params, 120).unwrap();
                        if short.tail_deficit.abs() >= 1e-6 {
                            over_budget_at_120.push((nbar, r, m, short.tail_deficit));
                        }
                    }
                }
            }
        }
        eprintln!("tail beyond n = 120 exceeds 1e-6 at: {over_budget_at_120:?}");
    }

    #[test]
    fn profile_requires_nmax_at_least_m() {
        assert!(matches!(
            pnd_profile(&StateParams::new(0.5, 0.0, 4), 3),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn figure_two_shapes() {
        let p0 = pnd_profile(&StateParams::new(1.0, 0.3, 0), 60).unwrap();
        assert!(p0.mass() >= 0.999);
        assert_eq!(p0.argmax(), 0);
        let p1 = pnd_profile(&StateParams::new(1.0, 0.3, 1), 60).unwrap();
        assert!(p1.argmax() >= 1);
        let wide = pnd_profile(&StateParams::new(1.0, 0.8, 1), 120).unwrap();
        assert!(wide.variance() > p1.variance());
    }

    #[test]
    fn forms_reject_displacement() {
        let params = StateParams::new(0.5, 0.3, 0).with_displacement(0.1, 0.0);
        assert!(matches!(pnd_legendre(&params, 5), Err(Error::Domain(_))));
        assert!(matches!(pnd_finite_sum(&params, 5), Err(Error::Domain(_))));
        assert!(matches!(pnd_squeezed_thermal(&params, 5), Err(Error::Domain(_))));
    }
}
