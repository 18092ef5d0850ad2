//! Amplitude damping by its Kraus sum.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::DensityMatrix;
use crate::error::{Error, Result};

/// Photon loss with survival probability `eta = e^{-2 kt}`:
/// `rho'_{ij} = sum_k sqrt(C(i+k,k) C(j+k,k)) eta^{(i+j)/2} (1-eta)^k rho_{i+k,j+k}`.
pub fn damp(rho: &DensityMatrix, kt: f64) -> Result<DensityMatrix> {
    if !(kt.is_finite() && kt >= 0.0) {
        return Err(Error::Domain(format!("kt must be finite and non-negative, got {kt}")));
    }
    if kt == 0.0 {
        return Ok(rho.clone());
    }
    let d = rho.dim();
    let ln_eta = -2.0 * kt;
    let ln_loss = (-(-2.0 * kt).exp_m1()).ln();
    let mut ln_fact = vec![0.0; d];
    for n in 1..d {
        ln_fact[n] = ln_fact[n - 1] + (n as f64).ln();
    }
    // The weight factors as u(i,k) u(j,k) with
    // u(i,k) = sqrt(C(i+k,k)) eta^{i/2} (1-eta)^{k/2}; row i of `u` holds k = 0..d-i.
    let u: Vec<Vec<f64>> = (0..d)
        .map(|i| {
            (0..d - i)
                .map(|k| {
                    let loss = if k == 0 { 0.0 } else { 0.5 * k as f64 * ln_loss };
                    let ln_binom = ln_fact[i + k] - ln_fact[k] - ln_fact[i];
                    (0.5 * ln_binom + 0.5 * i as f64 * ln_eta + loss).exp()
                })
                .collect()
        })
        .collect();
    let entries = DMatrix::from_fn(d, d, |i, j| {
        let (ui, uj) = (&u[i], &u[j]);
        let mut sum = Complex64::new(0.0, 0.0);
        for k in 0..d - i.max(j) {
            sum += rho.get(i + k, j + k) * (ui[k] * uj[k]);
        }
        sum
    });
    DensityMatrix::from_matrix(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{build_pasts, build_pasts_auto};
    use crate::kernel::StateParams;
    use approx::assert_relative_eq;

    #[test]
    fn zero_time_is_identity() {
        let s = build_pasts(&StateParams::new(0.5, 0.3, 1), 60).unwrap();
        assert_eq!(damp(&s.rho, 0.0).unwrap(), s.rho);
    }

    #[test]
    fn one_photon_decay() {
        let kt = 0.3;
        let eta = (-2.0f64 * kt).exp();
        let out = damp(&DensityMatrix::fock(1, 4).unwrap(), kt).unwrap();
        assert_relative_eq!(out.population(1), eta, max_relative = 1e-14);
        assert_relative_eq!(out.population(0), 1.0 - eta, max_relative = 1e-14);
    }

    #[test]
    fn preserves_trace_and_hermiticity() {
        let s = build_pasts(&StateParams::new(0.5, 0.3, 2).with_displacement(0.4, -0.2), 80).unwrap();
        let out = damp(&s.rho, 0.2).unwrap();
        assert_relative_eq!(out.trace(), 1.0, epsilon = 1e-10);
        assert!(out.hermiticity_defect() < 1e-14);
        assert!(out.min_eigenvalue() > -1e-10);
    }

    #[test]
    fn semigroup() {
        let s = build_pasts(&StateParams::new(0.5, 0.3, 1), 80).unwrap();
        let twice = damp(&damp(&s.rho, 0.1).unwrap(), 0.15).unwrap();
        let once = damp(&s.rho, 0.25).unwrap();
        let diff = (twice.entries() - once.entries()).map(|z| z.norm()).max();
        assert!(diff < 1e-12, "{diff}");
    }

    #[test]
    fn long_time_is_vacuum() {
        let s = build_pasts_auto(&StateParams::new(1.0, 0.8, 3)).unwrap();
        let out = damp(&s.rho, 20.0).unwrap();
        let vac = DensityMatrix::fock(0, out.dim()).unwrap();
        assert!(out.trace_distance(&vac).unwrap() < 1e-8);
    }
}
