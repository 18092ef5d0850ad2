//! Truncated Fock-space reference implementation.
//!
//! States are built from the thermal diagonal with dense matrix exponentials
//! of the truncated squeeze and displacement generators, then raised `m`
//! times. Nothing here uses the Gaussian-kernel closed forms, so the oracle
//! can validate them.
//!
//! The displacement is factored as `D(beta) = Phi R Phi^dag` with
//! `R = exp(|beta| (a^dag - a))` real and `Phi = diag(e^{i n arg beta})`, so
//! every matrix product is real and each phase conjugation is elementwise.

mod channel;
mod parity;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernel::StateParams;

pub use channel::damp;
pub use parity::displaced_parity_wigner;

/// Largest admissible leakage estimate for an oracle state.
pub const LEAKAGE_THRESHOLD: f64 = 1e-10;
/// Upper bound of the automatic cutoff search.
pub const MAX_AUTO_CUTOFF: usize = 480;
const MIN_AUTO_CUTOFF: usize = 40;

/// Hermitian density matrix on Fock levels `0..dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn from_matrix(entries: DMatrix<Complex64>) -> Result<Self> {
        if !entries.is_square() || entries.nrows() == 0 {
            return Err(Error::Domain("density matrix must be square and non-empty".into()));
        }
        Ok(Self { entries })
    }

    /// `|n><n|` on `dim` levels.
    pub fn fock(n: usize, dim: usize) -> Result<Self> {
        if n >= dim {
            return Err(Error::Domain(format!("level {n} outside dimension {dim}")));
        }
        let mut entries = DMatrix::zeros(dim, dim);
        entries[(n, n)] = Complex64::new(1.0, 0.0);
        Self::from_matrix(entries)
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|n| self.entries[(n, n)].re).sum()
    }

    pub fn normalized(&self) -> Self {
        let t = self.trace();
        Self {
            entries: self.entries.map(|z| z / t),
        }
    }

    /// `max |rho_ij - conj(rho_ji)|`
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.entries[(i, j)] - self.entries[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let hermitian = (&self.entries + self.entries.adjoint()).map(|z| z * 0.5);
        hermitian
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// `<n|rho|n>`, zero beyond the truncation.
    pub fn population(&self, n: usize) -> f64 {
        if n < self.dim() {
            self.entries[(n, n)].re
        } else {
            0.0
        }
    }

    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|n| self.population(n)).collect()
    }

    /// `tr(rho a^dag a)`
    pub fn mean_photon(&self) -> f64 {
        (0..self.dim()).map(|n| n as f64 * self.population(n)).sum()
    }

    /// `tr(rho a^dag^2 a^2)`
    pub fn second_factorial_moment(&self) -> f64 {
        (0..self.dim())
            .map(|n| (n * n.saturating_sub(1)) as f64 * self.population(n))
            .sum()
    }

    /// `(a^dag^m rho a^m)_{ij} = sqrt(i!/(i-m)!) sqrt(j!/(j-m)!) rho_{i-m, j-m}`,
    /// unnormalized, on the same levels.
    pub fn raise(&self, m: usize) -> Self {
        let d = self.dim();
        let weight: Vec<f64> = (0..d)
            .map(|i| {
                if i < m {
                    0.0
                } else {
                    ((i - m + 1)..=i).map(|k| (k as f64).sqrt()).product()
                }
            })
            .collect();
        let entries = DMatrix::from_fn(d, d, |i, j| {
            if i < m || j < m {
                Complex64::new(0.0, 0.0)
            } else {
                self.entries[(i - m, j - m)] * (weight[i] * weight[j])
            }
        });
        Self { entries }
    }

    /// Trace weight in the top quarter of levels relative to the full trace.
    pub fn edge_weight(&self) -> f64 {
        let d = self.dim();
        let start = d - d / 4;
        (start..d).map(|n| self.population(n)).sum::<f64>() / self.trace()
    }

    /// Wigner function under `dx dy`, `alpha = (x + i y)/sqrt(2)`.
    pub fn wigner(&self, x: f64, y: f64) -> f64 {
        displaced_parity_wigner(self, x, y)
    }

    pub fn damp(&self, kt: f64) -> Result<Self> {
        damp(self, kt)
    }

    /// Trace norm of `self - other` on a common support, via eigenvalues.
    pub fn trace_distance(&self, other: &Self) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::Domain("dimension mismatch".into()));
        }
        let diff = &self.entries - &other.entries;
        let hermitian = (&diff + diff.adjoint()).map(|z| z * 0.5);
        Ok(0.5 * hermitian.symmetric_eigenvalues().iter().map(|v| v.abs()).sum::<f64>())
    }
}

/// Annihilation operator on `dim` levels.
pub fn annihilation(dim: usize) -> DMatrix<f64> {
    DMatrix::from_fn(dim, dim, |i, j| if j == i + 1 { (j as f64).sqrt() } else { 0.0 })
}

/// `exp[(r/2)(a^dag^2 - a^2)]`, real orthogonal on the truncated space.
pub fn squeeze_operator(r: f64, dim: usize) -> DMatrix<f64> {
    let a = annihilation(dim);
    let a2 = &a * &a;
    ((a2.transpose() - a2) * (0.5 * r)).exp()
}

/// `exp(s (a^dag - a))` for real `s`.
pub fn real_displacement(s: f64, dim: usize) -> DMatrix<f64> {
    let a = annihilation(dim);
    ((a.transpose() - a) * s).exp()
}

/// `exp(beta a^dag - beta^* a)` as a complex matrix.
pub fn displacement_operator(beta: Complex64, dim: usize) -> DMatrix<Complex64> {
    let real = real_displacement(beta.norm(), dim);
    let phase: Vec<Complex64> = (0..dim)
        .map(|n| Complex64::from_polar(1.0, n as f64 * beta.arg()))
        .collect();
    DMatrix::from_fn(dim, dim, |i, j| phase[i] * real[(i, j)] * phase[j].conj())
}

/// Displaced squeezed thermal state `D S rho_c S^dag D^dag` on levels `0..=cutoff`.
#[derive(Debug, Clone)]
pub struct SqueezedThermalFock {
    params: StateParams,
    rho: DensityMatrix,
    thermal_tail: f64,
}

impl SqueezedThermalFock {
    pub fn new(params: &StateParams, cutoff: usize) -> Result<Self> {
        params.validate()?;
        if cutoff < 1 {
            return Err(Error::Usage("cutoff must be at least 1".into()));
        }
        let dim = cutoff + 1;
        let ratio = params.nbar / (1.0 + params.nbar);
        let thermal = DMatrix::from_fn(dim, dim, |i, j| {
            if i == j {
                ratio.powi(i as i32) / (1.0 + params.nbar)
            } else {
                0.0
            }
        });
        let s = squeeze_operator(params.r, dim);
        let x = &s * thermal * s.transpose();
        let beta = params.beta();
        let entries = if beta.norm() > 0.0 {
            // D X D^dag = Phi R (Phi^dag X Phi) R^T Phi^dag.
            let phi = beta.arg();
            let rotate = |sign: f64| {
                let re = DMatrix::from_fn(dim, dim, |i, j| x[(i, j)] * ((i as f64 - j as f64) * phi * sign).cos());
                let im = DMatrix::from_fn(dim, dim, |i, j| x[(i, j)] * ((i as f64 - j as f64) * phi * sign).sin());
                (re, im)
            };
            let (y_re, y_im) = rotate(-1.0);
            let d = real_displacement(beta.norm(), dim);
            let z_re = &d * y_re * d.transpose();
            let z_im = &d * y_im * d.transpose();
            DMatrix::from_fn(dim, dim, |i, j| {
                Complex64::new(z_re[(i, j)], z_im[(i, j)])
                    * Complex64::from_polar(1.0, (i as f64 - j as f64) * phi)
            })
        } else {
            x.map(|v| Complex64::new(v, 0.0))
        };
        Ok(Self {
            params: *params,
            rho: DensityMatrix { entries },
            thermal_tail: ratio.powi(dim as i32),
        })
    }

    pub fn params(&self) -> &StateParams {
        &self.params
    }

    pub fn cutoff(&self) -> usize {
        self.rho.dim() - 1
    }

    pub fn density(&self) -> &DensityMatrix {
        &self.rho
    }

    /// Photon-added state with `m` raisings; fails when the leakage estimate
    /// exceeds [`LEAKAGE_THRESHOLD`].
    pub fn photon_added(&self, m: u32) -> Result<FockState> {
        let raised = self.rho.raise(m as usize);
        let trace = raised.trace();
        let leakage = raised.edge_weight() + self.thermal_tail;
        if !(leakage <= LEAKAGE_THRESHOLD) {
            return Err(Error::CutoffTooSmall {
                cutoff: self.cutoff(),
                leakage,
                threshold: LEAKAGE_THRESHOLD,
            });
        }
        Ok(FockState {
            params: self.params.with_m(m),
            cutoff: self.cutoff(),
            norm: trace,
            leakage,
            rho: raised.normalized(),
        })
    }
}

/// Normalized oracle state with the raw trace `tr(a^dag^m rho_s a^m)`.
#[derive(Debug, Clone)]
pub struct FockState {
    pub params: StateParams,
    pub cutoff: usize,
    pub norm: f64,
    pub leakage: f64,
    pub rho: DensityMatrix,
}

pub fn build_pasts(params: &StateParams, cutoff: usize) -> Result<FockState> {
    SqueezedThermalFock::new(params, cutoff)?.photon_added(params.m)
}

/// Starting cutoff from the slowest geometric decay of the squeezed thermal
/// populations, `lambda = (2V-1)/(2V+1)` with `V = (2 nbar + 1) e^{2|r|}/2`.
pub fn initial_cutoff(params: &StateParams) -> usize {
    let v = 0.5 * (2.0 * params.nbar + 1.0) * (2.0 * params.r.abs()).exp();
    let lambda = (2.0 * v - 1.0) / (2.0 * v + 1.0);
    let geometric = if lambda > 0.0 {
        (1e-13f64).ln() / lambda.ln()
    } else {
        0.0
    };
    let shift = 4.0 * params.m as f64 + 4.0 * params.beta().norm_sqr() + 20.0;
    ((geometric + shift).ceil() as usize).clamp(MIN_AUTO_CUTOFF, MAX_AUTO_CUTOFF)
}

/// Smallest cutoff on the growth sequence from [`initial_cutoff`] that passes
/// the leakage check, with the built oracle state.
pub fn build_pasts_auto(params: &StateParams) -> Result<FockState> {
    let mut cutoff = initial_cutoff(params);
    loop {
        match build_pasts(params, cutoff) {
            Err(Error::CutoffTooSmall { .. }) if cutoff < MAX_AUTO_CUTOFF => {
                cutoff = (cutoff + cutoff / 3).min(MAX_AUTO_CUTOFF);
            }
            other => return other,
        }
    }
}

pub fn oracle_moments(dm: &DensityMatrix) -> (f64, f64) {
    (dm.mean_photon(), dm.second_factorial_moment())
}

pub fn oracle_pnd(dm: &DensityMatrix, n: usize) -> f64 {
    dm.population(n)
}

/// `N_m = tr(a^dag^m rho_s a^m)` at a fixed cutoff.
pub fn oracle_norm(params: &StateParams, cutoff: usize) -> Result<f64> {
    Ok(build_pasts(params, cutoff)?.norm)
}

pub fn oracle_wigner(dm: &DensityMatrix, x: f64, y: f64) -> f64 {
    dm.wigner(x, y)
}
