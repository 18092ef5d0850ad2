//! Closed forms against the Fock oracle over a fixed parameter grid.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::EvolvedWigner;
use crate::distributions::pnd_profile;
use crate::error::{Error, Result};
use crate::fock::{build_pasts, build_pasts_auto, FockState};
use crate::kernel::StateParams;
use crate::moments::{norm_constant, photon_statistics};
use crate::wigner::WignerEvaluator;

pub const GRID_NBAR: [f64; 3] = [0.0, 0.5, 1.0];
pub const GRID_R: [f64; 4] = [-0.5, 0.0, 0.3, 0.8];
pub const GRID_DISPLACEMENTS: [(f64, f64); 2] = [(0.0, 0.0), (0.4, -0.2)];
pub const GRID_MAX_M: u32 = 5;

pub const NORM_TOLERANCE: f64 = 1e-6;
pub const MOMENT_TOLERANCE: f64 = 1e-6;
pub const PND_TOLERANCE: f64 = 1e-7;
pub const PND_MAX_N: usize = 40;
pub const WIGNER_TOLERANCE: f64 = 1e-7;
pub const WIGNER_MAX_M: u32 = 3;
pub const EVOLVED_TOLERANCE: f64 = 1e-6;
pub const EVOLVED_KT: [f64; 3] = [0.05, 0.2, 0.4];

/// Phase-space probe points for Wigner comparisons.
pub const PROBES: [(f64, f64); 9] = [
    (0.0, 0.0),
    (0.7, -0.4),
    (-1.2, 0.9),
    (1.5, 0.3),
    (-0.3, -1.6),
    (0.2, 0.5),
    (-0.8, -0.8),
    (1.9, -1.4),
    (-2.2, 0.1),
];

/// Values below this are compared absolutely rather than relatively.
const RELATIVE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    Norms,
    Moments,
    Pnd,
    Wigner,
    Evolved,
    All,
}

impl Scope {
    pub fn suites(self) -> Vec<Scope> {
        match self {
            Scope::All => vec![Scope::Norms, Scope::Moments, Scope::Pnd, Scope::Wigner, Scope::Evolved],
            s => vec![s],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Scope::Norms => "norms",
            Scope::Moments => "moments",
            Scope::Pnd => "pnd",
            Scope::Wigner => "wigner",
            Scope::Evolved => "evolved",
            Scope::All => "all",
        }
    }
}

impl std::str::FromStr for Scope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "norms" => Scope::Norms,
            "moments" => Scope::Moments,
            "pnd" => Scope::Pnd,
            "wigner" => Scope::Wigner,
            "evolved" => Scope::Evolved,
            "all" => Scope::All,
            other => return Err(Error::Usage(format!("unknown scope '{other}'"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CutoffPolicy {
    /// Grow the cutoff per state until the leakage check passes.
    Auto,
    Fixed(usize),
}

impl CutoffPolicy {
    pub fn build(&self, params: &StateParams) -> Result<FockState> {
        match *self {
            CutoffPolicy::Auto => build_pasts_auto(params),
            CutoffPolicy::Fixed(c) => build_pasts(params, c),
        }
    }
}

/// One closed-form value against its oracle value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub params: StateParams,
    pub quantity: String,
    pub closed_form: f64,
    pub oracle: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    /// `relative` or `absolute`.
    pub metric: String,
    pub tolerance: f64,
    pub comparisons: usize,
    pub max_deviation: f64,
    pub worst: Option<Comparison>,
    pub largest_cutoff: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub cutoff: CutoffPolicy,
    pub suites: Vec<SuiteReport>,
    pub passed: bool,
}

pub fn relative_deviation(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(RELATIVE_FLOOR)
}

/// Every grid point with `m <= max_m`, optionally undisplaced only.
pub fn test_grid(max_m: u32, undisplaced_only: bool) -> Vec<StateParams> {
    let mut out = Vec::new();
    for &nbar in &GRID_NBAR {
        for &r in &GRID_R {
            for &(q, p) in &GRID_DISPLACEMENTS {
                if undisplaced_only && (q, p) != (0.0, 0.0) {
                    continue;
                }
                for m in 0..=max_m {
                    out.push(StateParams::new(nbar, r, m).with_displacement(q, p));
                }
            }
        }
    }
    out
}

struct Collected {
    comparisons: Vec<Comparison>,
    cutoff: usize,
}

fn compare(params: &StateParams, quantity: String, closed: f64, oracle: f64, relative: bool) -> Comparison {
    Comparison {
        params: *params,
        quantity,
        closed_form: closed,
        oracle,
        deviation: if relative {
            relative_deviation(closed, oracle)
        } else {
            (closed - oracle).abs()
        },
    }
}

fn run_point(suite: Scope, params: &StateParams, policy: &CutoffPolicy) -> Result<Collected> {
    let state = policy.build(params)?;
    let mut comparisons = Vec::new();
    match suite {
        Scope::Norms => {
            comparisons.push(compare(params, format!("N_{}", params.m), norm_constant(params)?, state.norm, true));
        }
        Scope::Moments => {
            let stats = photon_statistics(params)?;
            comparisons.push(compare(
                params,
                "<a+ a>".into(),
                stats.mean_photon,
                state.rho.mean_photon(),
                true,
            ));
            comparisons.push(compare(
                params,
                "<a+^2 a^2>".into(),
                stats.second_factorial_moment,
                state.rho.second_factorial_moment(),
                true,
            ));
        }
        Scope::Pnd => {
            let profile = pnd_profile(params, PND_MAX_N)?;
            for (n, &p) in profile.probs.iter().enumerate() {
                comparisons.push(compare(params, format!("P({n})"), p, state.rho.population(n), false));
            }
        }
        Scope::Wigner => {
            let ev = WignerEvaluator::new(params)?;
            for &(x, y) in &PROBES {
                comparisons.push(compare(
                    params,
                    format!("W({x}, {y})"),
                    ev.point(x, y)?,
                    state.rho.wigner(x, y),
                    false,
                ));
            }
        }
        Scope::Evolved => {
            for &kt in &EVOLVED_KT {
                let ev = EvolvedWigner::new(params, kt)?;
                let damped = state.rho.damp(kt)?;
                for &(x, y) in &PROBES {
                    comparisons.push(compare(
                        params,
                        format!("W_kt={kt}({x}, {y})"),
                        ev.point(x, y)?,
                        damped.wigner(x, y),
                        false,
                    ));
                }
            }
        }
        Scope::All => unreachable!("expanded by Scope::suites"),
    }
    Ok(Collected {
        comparisons,
        cutoff: state.cutoff,
    })
}

pub fn run_suite(suite: Scope, policy: &CutoffPolicy) -> Result<SuiteReport> {
    let (grid, tolerance, relative) = match suite {
        Scope::Norms => (test_grid(GRID_MAX_M, false), NORM_TOLERANCE, true),
        Scope::Moments => (test_grid(GRID_MAX_M, false), MOMENT_TOLERANCE, true),
        Scope::Pnd => (test_grid(GRID_MAX_M, false), PND_TOLERANCE, false),
        Scope::Wigner => (test_grid(WIGNER_MAX_M, false), WIGNER_TOLERANCE, false),
        Scope::Evolved => (test_grid(GRID_MAX_M, true), EVOLVED_TOLERANCE, false),
        Scope::All => return Err(Error::Usage("run_suite takes a single suite".into())),
    };
    let collected = grid
        .par_iter()
        .map(|p| run_point(suite, p, policy))
        .collect::<Result<Vec<_>>>()?;
    let largest_cutoff = collected.iter().map(|c| c.cutoff).max().unwrap_or(0);
    let all: Vec<Comparison> = collected.into_iter().flat_map(|c| c.comparisons).collect();
    let worst = all
        .iter()
        .max_by(|a, b| a.deviation.total_cmp(&b.deviation))
        .cloned();
    let max_deviation = worst.as_ref().map_or(0.0, |w| w.deviation);
    Ok(SuiteReport {
        suite: suite.name().into(),
        metric: if relative { "relative" } else { "absolute" }.into(),
        tolerance,
        comparisons: all.len(),
        max_deviation,
        worst,
        largest_cutoff,
        passed: max_deviation < tolerance,
    })
}

pub fn verify(scope: Scope, policy: CutoffPolicy) -> Result<VerifyReport> {
    let suites = scope
        .suites()
        .into_iter()
        .map(|s| run_suite(s, &policy))
        .collect::<Result<Vec<_>>>()?;
    let passed = suites.iter().all(|s| s.passed);
    Ok(VerifyReport {
        cutoff: policy,
        suites,
        passed,
    })
}
