//! Photon-added squeezed thermal states.
//!
//! A state `rho_m ∝ a^dag^m D(beta) S(r) rho_c S^dag(r) D^dag(beta) a^m` built on
//! a thermal field `rho_c` with mean occupation `nbar`. The crate provides:
//!
//! * normalization constants and photon statistics ([`moments`]),
//! * the photon number distribution ([`distributions`]),
//! * the static Wigner function and its negativity ([`wigner`], [`grid`]),
//! * evolution under photon loss ([`channel`]),
//! * a truncated Fock-space oracle ([`fock`]) and comparison suites ([`verify`]).
//!
//! Derivatives of Gaussian integrals with respect to a kernel coefficient are
//! taken exactly with truncated Taylor series ([`jets`]).

pub mod channel;
pub mod distributions;
pub mod error;
pub mod fock;
pub mod grid;
pub mod jets;
pub mod kernel;
pub mod moments;
pub mod verify;
pub mod wigner;

pub use error::{Error, Result};
pub use grid::{NegativityMetrics, PhaseGrid, Window};
pub use jets::{Jet, JetError};
pub use kernel::{derive_kernel, KernelCoeffs, StateParams};
