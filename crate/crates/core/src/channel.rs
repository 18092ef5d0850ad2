//! Wigner function under zero-temperature photon loss.
//!
//! With `eta^2 = e^{-2 kt}` and `T = 1 - eta^2`, an initial `W_0` (unit mass
//! under `dx dy`) evolves to
//!
//! ```text
//! W_t(x, y) = integral W_0(x', y') G(x - eta x', y - eta y') dx' dy',
//! G(u, v) = exp(-(u^2 + v^2)/T) / (pi T).
//! ```
//!
//! For undisplaced states the integral has the closed form
//! `W_t = 2 / (pi tau1 tau2 N_m) d^m/dF^m [ sqrt(N/T^2) exp(R |alpha|^2 + K (x^2 - y^2)) ]`,
//! evaluated here in a rearrangement that is finite as `kt -> 0`:
//!
//! ```text
//! Delta = F^2 - 4C^2,  P = 4F - 2 Delta,  M = T P + 2 eta^2 Delta,
//! den   = (M - 8CT)(M + 8CT),
//! N = T^2 Delta / den,  R = (128 C^2 T - 4 Delta eta^2 P - 2 T P^2) / den,
//! K = 16 C eta^2 Delta / den.
//! ```

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{assert_real, Error, Result};
use crate::grid::{PhaseGrid, Window};
use crate::jets::Jet;
use crate::kernel::{derive_kernel, KernelCoeffs, StateParams};
use crate::moments::{norm_constants_from_kernel, REALNESS_TOLERANCE};
use crate::wigner::WignerEvaluator;

/// Closed-form coefficients at the kernel value of `F`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvolvedCoeffs {
    pub kt: f64,
    /// `1 - e^{-2 kt}`
    pub t: f64,
    pub n_c: f64,
    pub r_c: f64,
    pub k_c: f64,
}

fn check_kt(kt: f64) -> Result<()> {
    if kt.is_finite() && kt >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("kt must be finite and non-negative, got {kt}")))
    }
}

fn require_undisplaced(params: &StateParams) -> Result<()> {
    if params.is_undisplaced() {
        Ok(())
    } else {
        Err(Error::Domain(
            "closed-form evolution requires beta = 0; use the quadrature path".into(),
        ))
    }
}

/// Jets in `F` of `(sqrt(Delta/den), R, K)` for one `kt > 0`.
#[derive(Debug, Clone)]
struct ChannelJets {
    amplitude: Jet,
    r_c: Jet,
    k_c: Jet,
}

fn channel_jets(kernel: &KernelCoeffs, kt: f64, order: usize) -> Result<ChannelJets> {
    let eta_sq = (-2.0 * kt).exp();
    let t = -(-2.0 * kt).exp_m1();
    let c = kernel.c;
    let f = Jet::variable(kernel.f, order);
    let delta = f.shift(-2.0 * c).mul(&f.shift(2.0 * c))?;
    let p = f.scale(4.0).sub(&delta.scale(2.0))?;
    let m = p.scale(t).add(&delta.scale(2.0 * eta_sq))?;
    let lower = m.shift(-8.0 * c * t);
    let upper = m.shift(8.0 * c * t);
    if !(lower.value().re > 0.0 && upper.value().re > 0.0) {
        return Err(Error::NumericConsistency {
            context: "evolved_coeffs",
            detail: format!(
                "channel denominator factors are not positive: {}, {}",
                lower.value().re,
                upper.value().re
            ),
        });
    }
    let den = lower.mul(&upper)?;
    let r_num = delta
        .mul(&p)?
        .scale(-4.0 * eta_sq)
        .sub(&p.mul(&p)?.scale(2.0 * t))?
        .shift(128.0 * c * c * t);
    let r_c = r_num.div(&den)?;
    let k_c = delta.scale(16.0 * c * eta_sq).div(&den)?;
    let amplitude = delta.powf(0.5)?.mul(&lower.powf(-0.5)?)?.mul(&upper.powf(-0.5)?)?;
    Ok(ChannelJets {
        amplitude,
        r_c,
        k_c,
    })
}

pub fn evolved_coeffs(params: &StateParams, kt: f64) -> Result<EvolvedCoeffs> {
    check_kt(kt)?;
    require_undisplaced(params)?;
    if kt == 0.0 {
        return Err(Error::Domain(
            "evolved coefficients are undefined at kt = 0; use the static path".into(),
        ));
    }
    let kernel = derive_kernel(params)?;
    let jets = channel_jets(&kernel, kt, 0)?;
    let t = -(-2.0 * kt).exp_m1();
    Ok(EvolvedCoeffs {
        kt,
        t,
        n_c: t * t * jets.amplitude.value().re.powi(2),
        r_c: jets.r_c.value().re,
        k_c: jets.k_c.value().re,
    })
}

/// Closed-form evolved Wigner function of one undisplaced state.
#[derive(Debug, Clone)]
pub struct EvolvedWigner {
    kt: f64,
    order: usize,
    static_path: Option<WignerEvaluator>,
    jets: Option<ChannelJets>,
    /// `2 / (pi tau1 tau2 N_m)`
    scale: f64,
}

impl EvolvedWigner {
    pub fn new(params: &StateParams, kt: f64) -> Result<Self> {
        check_kt(kt)?;
        require_undisplaced(params)?;
        let order = params.m as usize;
        if kt == 0.0 {
            return Ok(Self {
                kt,
                order,
                static_path: Some(WignerEvaluator::new(params)?),
                jets: None,
                scale: 0.0,
            });
        }
        let kernel = derive_kernel(params)?;
        let norm = norm_constants_from_kernel(&kernel, params.m)?[order];
        Ok(Self {
            kt,
            order,
            static_path: None,
            jets: Some(channel_jets(&kernel, kt, order)?),
            scale: 2.0 / (PI * kernel.tau_product() * norm),
        })
    }

    pub fn kt(&self) -> f64 {
        self.kt
    }

    pub fn point(&self, x: f64, y: f64) -> Result<f64> {
        if let Some(static_path) = &self.static_path {
            return static_path.point(x, y);
        }
        let jets = self.jets.as_ref().expect("jets exist for kt > 0");
        let exponent = jets
            .r_c
            .scale(0.5 * (x * x + y * y))
            .add(&jets.k_c.scale(x * x - y * y))?;
        let g = jets.amplitude.mul(&exponent.exp())?;
        assert_real(
            g.derivative(self.order)? * self.scale,
            REALNESS_TOLERANCE,
            "wigner_evolved_point",
        )
    }
}

pub fn wigner_evolved_point(params: &StateParams, kt: f64, x: f64, y: f64) -> Result<f64> {
    EvolvedWigner::new(params, kt)?.point(x, y)
}

pub fn evolved_grid(
    params: &StateParams,
    kt: f64,
    window: Window,
    nx: usize,
    ny: usize,
) -> Result<PhaseGrid> {
    let ev = EvolvedWigner::new(params, kt)?;
    Ok(PhaseGrid::from_fn(window, nx, ny, |x, y| ev.point(x, y))?
        .with_params(*params)
        .with_kt(kt))
}

/// Default node count per axis for the convolution quadrature.
pub const DEFAULT_QUAD_NODES: usize = 301;
/// Largest tolerated `|1 - mass|` of the sampled initial Wigner function.
pub const QUAD_MASS_TOLERANCE: f64 = 1e-3;

/// Tensor-product trapezoid over the initial Wigner function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadSpec {
    pub nodes: usize,
    /// `None` sizes the window from the initial state.
    pub window: Option<Window>,
}

impl Default for QuadSpec {
    fn default() -> Self {
        Self {
            nodes: DEFAULT_QUAD_NODES,
            window: None,
        }
    }
}

/// Six quadrature standard deviations of the squeezed thermal envelope,
/// widened by `sqrt(2m + 1)` for the added photons, around the displacement.
pub fn auto_window(params: &StateParams) -> Window {
    let thermal = 2.0 * params.nbar + 1.0;
    let spread = (2.0 * params.m as f64 + 1.0).sqrt() * 6.0;
    let sx = (0.5 * thermal * (2.0 * params.r).exp()).sqrt() * spread;
    let sy = (0.5 * thermal * (-2.0 * params.r).exp()).sqrt() * spread;
    Window::new(
        params.beta_q - sx,
        params.beta_q + sx,
        params.beta_p - sy,
        params.beta_p + sy,
    )
}

/// Weighted samples of the initial Wigner function, reusable across output
/// points and `kt` values.
#[derive(Debug, Clone)]
pub struct ConvolutionQuadrature {
    params: StateParams,
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// Row-major `w_x w_y W_0 dx dy`.
    weights: Vec<f64>,
    mass: f64,
}

impl ConvolutionQuadrature {
    pub fn new(params: &StateParams, spec: &QuadSpec) -> Result<Self> {
        let window = spec.window.unwrap_or_else(|| auto_window(params));
        let initial = WignerEvaluator::new(params)?.grid(window, spec.nodes, spec.nodes)?;
        let (nx, ny) = (initial.nx, initial.ny);
        let cell = initial.dx() * initial.dy();
        let edge = |i: usize, n: usize| if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        let mut weights = Vec::with_capacity(nx * ny);
        for iy in 0..ny {
            for ix in 0..nx {
                weights.push(edge(ix, nx) * edge(iy, ny) * cell * initial.get(ix, iy));
            }
        }
        let mass: f64 = weights.iter().sum();
        if (1.0 - mass).abs() > QUAD_MASS_TOLERANCE {
            return Err(Error::QuadratureWindow {
                deficit: 1.0 - mass,
                threshold: QUAD_MASS_TOLERANCE,
            });
        }
        Ok(Self {
            params: *params,
            xs: (0..nx).map(|i| initial.x(i)).collect(),
            ys: (0..ny).map(|i| initial.y(i)).collect(),
            weights,
            mass,
        })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn params(&self) -> &StateParams {
        &self.params
    }

    /// Evolved grid tagged with the state and `kt`.
    pub fn grid(&self, kt: f64, window: Window, nx: usize, ny: usize) -> Result<PhaseGrid> {
        Ok(PhaseGrid::from_fn(window, nx, ny, |x, y| self.evolve_point(kt, x, y))?
            .with_params(self.params)
            .with_kt(kt))
    }

    pub fn evolve_point(&self, kt: f64, x: f64, y: f64) -> Result<f64> {
        check_kt(kt)?;
        if kt == 0.0 {
            return Err(Error::Domain("quadrature requires kt > 0".into()));
        }
        let eta = (-kt).exp();
        let t = -(-2.0 * kt).exp_m1();
        let kernel_1d = |u: f64| (-u * u / t).exp();
        let gx: Vec<f64> = self.xs.iter().map(|&xi| kernel_1d(x - eta * xi)).collect();
        let nx = self.xs.len();
        let mut total = 0.0;
        for (iy, &yi) in self.ys.iter().enumerate() {
            let gy = kernel_1d(y - eta * yi);
            if gy == 0.0 {
                continue;
            }
            let row = &self.weights[iy * nx..(iy + 1) * nx];
            total += gy * row.iter().zip(&gx).map(|(w, g)| w * g).sum::<f64>();
        }
        Ok(total / (PI * t))
    }
}

/// Evolved Wigner function by direct quadrature of the loss convolution.
/// Works for displaced states.
pub fn wigner_evolved_numeric(
    params: &StateParams,
    kt: f64,
    x: f64,
    y: f64,
    spec: &QuadSpec,
) -> Result<f64> {
    check_kt(kt)?;
    if kt == 0.0 {
        return WignerEvaluator::new(params)?.point(x, y);
    }
    ConvolutionQuadrature::new(params, spec)?.evolve_point(kt, x, y)
}

/// Grid minima of the evolved Wigner function over a list of `kt` values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NegativityScan {
    pub params: StateParams,
    pub window: Window,
    pub nodes: usize,
    pub kt_values: Vec<f64>,
    pub minima: Vec<f64>,
    pub threshold: Option<f64>,
}

/// Lattice used for grid minima in scans and threshold searches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanLattice {
    pub window: Window,
    pub nodes: usize,
}

impl Default for ScanLattice {
    fn default() -> Self {
        Self {
            window: Window::default(),
            nodes: 101,
        }
    }
}

fn grid_minimum(params: &StateParams, kt: f64, lattice: &ScanLattice) -> Result<f64> {
    Ok(evolved_grid(params, kt, lattice.window, lattice.nodes, lattice.nodes)?
        .negativity()
        .min_value)
}

/// Slack allowed when checking that grid minima do not decrease with `kt`.
const MONOTONE_SLACK: f64 = 1e-12;

pub fn negativity_scan(
    params: &StateParams,
    kt_values: &[f64],
    lattice: &ScanLattice,
) -> Result<NegativityScan> {
    let minima = kt_values
        .iter()
        .map(|&kt| grid_minimum(params, kt, lattice))
        .collect::<Result<Vec<_>>>()?;
    Ok(NegativityScan {
        params: *params,
        window: lattice.window,
        nodes: lattice.nodes,
        kt_values: kt_values.to_vec(),
        minima,
        threshold: None,
    })
}

impl NegativityScan {
    /// The negative part `min(grid minimum, 0)` is non-decreasing along
    /// increasing `kt`. Once the grid is non-negative its minimum sits in the
    /// shrinking tails and carries no information.
    pub fn is_monotone(&self) -> bool {
        let mut pairs: Vec<(f64, f64)> = self
            .kt_values
            .iter()
            .copied()
            .zip(self.minima.iter().map(|v| v.min(0.0)))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        pairs.windows(2).all(|w| w[1].1 >= w[0].1 - MONOTONE_SLACK)
    }
}

/// Bisection tolerance in `kt` for [`negativity_threshold`].
pub const KT_THRESHOLD_TOLERANCE: f64 = 1e-4;
/// Uniform scan points used to bracket and check monotonicity.
const THRESHOLD_SCAN_POINTS: usize = 17;

/// Smallest `kt` in `[kt_lo, kt_hi]` at which the grid minimum is at least `-eps`.
pub fn negativity_threshold(
    params: &StateParams,
    kt_lo: f64,
    kt_hi: f64,
    eps: f64,
    lattice: &ScanLattice,
) -> Result<NegativityScan> {
    check_kt(kt_lo)?;
    check_kt(kt_hi)?;
    if params.m == 0 {
        return Err(Error::Domain("negativity threshold requires m >= 1".into()));
    }
    if !(kt_lo < kt_hi) {
        return Err(Error::Usage(format!("empty kt interval [{kt_lo}, {kt_hi}]")));
    }
    let kts: Vec<f64> = (0..THRESHOLD_SCAN_POINTS)
        .map(|i| {
            let t = i as f64 / (THRESHOLD_SCAN_POINTS - 1) as f64;
            kt_lo * (1.0 - t) + kt_hi * t
        })
        .collect();
    let mut scan = negativity_scan(params, &kts, lattice)?;
    if !scan.is_monotone() {
        return Err(Error::NumericConsistency {
            context: "negativity_threshold",
            detail: format!("grid minima are not monotone in kt: {:?}", scan.minima),
        });
    }
    let cleared = |min: f64| min >= -eps;
    if cleared(scan.minima[0]) || !cleared(*scan.minima.last().unwrap()) {
        return Err(Error::NotBracketed(format!(
            "grid minimum crosses -{eps} nowhere in kt in [{kt_lo}, {kt_hi}]: {} .. {}",
            scan.minima[0],
            scan.minima.last().unwrap()
        )));
    }
    let hi_index = scan.minima.iter().position(|&v| cleared(v)).unwrap();
    let (mut a, mut b) = (kts[hi_index - 1], kts[hi_index]);
    while b - a > KT_THRESHOLD_TOLERANCE {
        let mid = 0.5 * (a + b);
        if cleared(grid_minimum(params, mid, lattice)?) {
            b = mid;
        } else {
            a = mid;
        }
    }
    scan.threshold = Some(0.5 * (a + b));
    Ok(scan)
}
