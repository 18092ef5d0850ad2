//! Photon-loss channel: semigroup, limits and independent references.

use pasts_core::channel::{evolved_coeffs, ConvolutionQuadrature, EvolvedWigner, QuadSpec};
use pasts_core::Error;
use pasts_core::fock::build_pasts_auto;
use pasts_core::verify::PROBES;
use pasts_core::wigner::wigner_point;
use pasts_core::StateParams;

#[test]
fn composed_oracle_losses_match_closed_form_at_summed_time() {
    let params = StateParams::new(0.5, 0.3, 2);
    let state = build_pasts_auto(&params).unwrap();
    for (kt1, kt2) in [(0.05, 0.1), (0.2, 0.2), (0.01, 0.39)] {
        let composed = state.rho.damp(kt1).unwrap().damp(kt2).unwrap();
        let ev = EvolvedWigner::new(&params, kt1 + kt2).unwrap();
        for &(x, y) in &PROBES {
            let diff = (ev.point(x, y).unwrap() - composed.wigner(x, y)).abs();
            assert!(diff < 1e-9, "kt = {kt1} + {kt2} at ({x}, {y}): {diff}");
        }
    }
}

#[test]
fn small_time_approaches_static() {
    let params = StateParams::new(0.3, 0.5, 3);
    for &(x, y) in &PROBES {
        let w0 = wigner_point(&params, x, y).unwrap();
        let w = EvolvedWigner::new(&params, 1e-9).unwrap().point(x, y).unwrap();
        assert!((w - w0).abs() < 1e-7, "({x}, {y})");
    }
}

#[test]
fn long_time_is_vacuum() {
    let params = StateParams::new(1.0, 0.8, 3);
    let ev = EvolvedWigner::new(&params, 25.0).unwrap();
    for &(x, y) in &PROBES {
        let vac = (-(x * x + y * y)).exp() / std::f64::consts::PI;
        assert!((ev.point(x, y).unwrap() - vac).abs() < 1e-12);
    }
}

#[test]
fn quadrature_matches_closed_form() {
    let params = StateParams::new(0.2, 0.3, 1);
    let quad = ConvolutionQuadrature::new(&params, &QuadSpec::default()).unwrap();
    for kt in [0.1, 0.3] {
        let ev = EvolvedWigner::new(&params, kt).unwrap();
        for &(x, y) in &PROBES {
            let diff = (ev.point(x, y).unwrap() - quad.evolve_point(kt, x, y).unwrap()).abs();
            assert!(diff < 1e-8, "kt {kt} ({x}, {y}): {diff}");
        }
    }
}

#[test]
fn displaced_closed_form_is_refused() {
    let params = StateParams::new(0.5, 0.3, 1).with_displacement(0.4, -0.2);
    assert!(matches!(EvolvedWigner::new(&params, 0.1), Err(Error::Domain(_))));
}

#[test]
fn loss_parameter() {
    let params = StateParams::new(0.5, 0.3, 1);
    for kt in [0.05, 0.4, 2.0] {
        let c = evolved_coeffs(&params, kt).unwrap();
        assert!((c.t + (-2.0f64 * kt).exp_m1()).abs() < 1e-15);
    }
}
