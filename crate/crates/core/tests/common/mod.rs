//! Independent scalar references shared by the integration tests.
#![allow(dead_code)]

use num_complex::Complex64;
use pasts_core::KernelCoeffs;

/// Derivatives `f^{(k)}(z0)` for `k = 0..=max_k` from a central stencil of
/// `nodes` points on the circle `|z - z0| = radius` (discrete Cauchy formula),
/// together with the natural scale `k! max|f| / radius^k` of each estimate.
pub fn circle_stencil_derivatives(
    f: impl Fn(Complex64) -> Complex64,
    z0: f64,
    radius: f64,
    nodes: usize,
    max_k: usize,
) -> Vec<(Complex64, f64)> {
    let samples: Vec<(Complex64, Complex64)> = (0..nodes)
        .map(|j| {
            let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / nodes as f64);
            (w, f(Complex64::new(z0, 0.0) + w * radius))
        })
        .collect();
    let peak = samples.iter().map(|(_, v)| v.norm()).fold(0.0, f64::max);
    let mut factorial = 1.0;
    (0..=max_k)
        .map(|k| {
            if k > 0 {
                factorial *= k as f64;
            }
            let coeff: Complex64 = samples
                .iter()
                .map(|(w, v)| v * w.powi(-(k as i32)))
                .sum::<Complex64>()
                / nodes as f64;
            let scale = factorial / radius.powi(k as i32);
            (coeff * scale, peak * scale)
        })
        .collect()
}

/// `e^D (A-2C)^{-1/2} (A+2C)^{-1/2} exp[(A|B|^2 + C(B*^2 + B^2)) / ((A-2C)(A+2C))]`
/// at complex `A`.
pub fn normalization_integrand(k: &KernelCoeffs, a: Complex64) -> Complex64 {
    let lower = a - 2.0 * k.c;
    let upper = a + 2.0 * k.c;
    let b = k.b;
    let cross = k.c * (b.conj() * b.conj() + b * b);
    let exponent = (a * b.norm_sqr() + cross) / (lower * upper) + k.d;
    lower.powf(-0.5) * upper.powf(-0.5) * exponent.exp()
}

/// `e^{x^2+y^2+D} (F^2-4C^2)^{-1/2} exp[(-F|E|^2 + C(E*^2 + E^2))/(F^2-4C^2)]`
/// with `E = B - (x + i y) sqrt 2`, at complex `F`.
pub fn wigner_integrand(k: &KernelCoeffs, x: f64, y: f64, f: Complex64) -> Complex64 {
    let e = k.b - Complex64::new(x, y) * std::f64::consts::SQRT_2;
    let lower = f - 2.0 * k.c;
    let upper = f + 2.0 * k.c;
    let exponent = (-f * e.norm_sqr() + k.c * (e.conj() * e.conj() + e * e)) / (lower * upper)
        + (x * x + y * y + k.d);
    lower.powf(-0.5) * upper.powf(-0.5) * exponent.exp()
}
