//! Jet derivatives of the Gaussian integrands against contour stencils.

mod common;

use common::{circle_stencil_derivatives, normalization_integrand, wigner_integrand};
use pasts_core::moments::norm_constants;
use pasts_core::wigner::WignerEvaluator;
use pasts_core::{derive_kernel, StateParams};
use proptest::prelude::*;

const NODES: usize = 64;

fn state() -> impl Strategy<Value = StateParams> {
    (0.0..1.0f64, -0.8..0.8f64, -0.5..0.5f64, -0.5..0.5f64)
        .prop_map(|(n, r, q, p)| StateParams::new(n, r, 4).with_displacement(q, p))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn normalization_derivatives(params in state()) {
        let k = derive_kernel(&params).unwrap();
        let norms = norm_constants(&params, 4).unwrap();
        let radius = 0.4 * (k.a - 2.0 * k.c.abs());
        let fd = circle_stencil_derivatives(|a| normalization_integrand(&k, a), k.a, radius, NODES, 4);
        for (m, (d, scale)) in fd.iter().enumerate() {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            let reference = sign * d.re / k.tau_product();
            prop_assert!(
                (norms[m] - reference).abs() < 1e-9 * scale.max(norms[m].abs()),
                "m = {m}: {} vs {reference}", norms[m]
            );
        }
    }

    #[test]
    fn wigner_derivatives(params in state(), x in -2.0..2.0f64, y in -2.0..2.0f64) {
        let k = derive_kernel(&params).unwrap();
        let f0 = 2.0 - k.a;
        let radius = 0.4 * (f0 - 2.0 * k.c.abs());
        let fd = circle_stencil_derivatives(|f| wigner_integrand(&k, x, y, f), f0, radius, NODES, 4);
        let norms = norm_constants(&params, 4).unwrap();
        for m in 0..=4u32 {
            let (d, scale) = fd[m as usize];
            let reference = d.re / (std::f64::consts::PI * k.tau_product() * norms[m as usize]);
            let value = WignerEvaluator::new(&params.with_m(m)).unwrap().point_generic(x, y).unwrap();
            let tol = 1e-9 * (scale / (std::f64::consts::PI * k.tau_product() * norms[m as usize])).max(1.0);
            prop_assert!((value - reference).abs() < tol, "m = {m}: {value} vs {reference}");
        }
    }
}
