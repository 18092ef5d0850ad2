//! Wigner function from a density matrix by the iterative Laguerre recurrence
//! for displaced-parity matrix elements.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::DensityMatrix;

/// `W(x, y)` under `dx dy`, equal to `(1/pi) tr[rho D(alpha) Pi D(alpha)^dag]`
/// with `alpha = (x + i y)/sqrt(2)`.
pub fn displaced_parity_wigner(rho: &DensityMatrix, x: f64, y: f64) -> f64 {
    let dim = rho.dim();
    let a = Complex64::new(x, y) * std::f64::consts::FRAC_1_SQRT_2;
    let two_a = a * 2.0;
    let two_a_conj = a.conj() * 2.0;
    // w[n] holds the (row, n) element of the current recurrence row.
    let mut w = vec![Complex64::new(0.0, 0.0); dim];
    w[0] = Complex64::new((-2.0 * a.norm_sqr()).exp() / PI, 0.0);
    let mut total = rho.get(0, 0).re * w[0].re;
    for n in 1..dim {
        w[n] = two_a * w[n - 1] / (n as f64).sqrt();
        total += 2.0 * (rho.get(0, n) * w[n]).re;
    }
    for row in 1..dim {
        let sqrt_row = (row as f64).sqrt();
        let mut temp = w[row];
        w[row] = (two_a_conj * temp - w[row - 1] * sqrt_row) / sqrt_row;
        total += (rho.get(row, row) * w[row]).re;
        for n in (row + 1)..dim {
            let next = (two_a * w[n - 1] - temp * sqrt_row) / (n as f64).sqrt();
            temp = w[n];
            w[n] = next;
            total += 2.0 * (rho.get(row, n) * w[n]).re;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{displacement_operator, DensityMatrix};
    use approx::assert_relative_eq;
    use nalgebra::DMatrix;

    #[test]
    fn fock_state_centres() {
        assert_relative_eq!(displaced_parity_wigner(&DensityMatrix::fock(0, 3).unwrap(), 0.0, 0.0), 1.0 / PI);
        assert_relative_eq!(
            displaced_parity_wigner(&DensityMatrix::fock(1, 3).unwrap(), 0.0, 0.0),
            -1.0 / PI
        );
    }

    #[test]
    fn recurrence_matches_brute_force_parity() {
        // Random Hermitian positive matrix on 8 levels; D(alpha) built on 80.
        let small = 8;
        let big = 80;
        let g = DMatrix::from_fn(small, small, |i, j| {
            Complex64::new(((i * 7 + j * 3) % 5) as f64 - 2.0, ((i + 2 * j) % 3) as f64 - 1.0)
        });
        let mut rho = &g * g.adjoint();
        let t = rho.trace();
        rho /= t;
        let dm = DensityMatrix::from_matrix(rho.clone()).unwrap();
        for (x, y) in [(0.0, 0.0), (0.4, -0.3), (-0.9, 0.6)] {
            let alpha = Complex64::new(x, y) / 2f64.sqrt();
            let d = displacement_operator(alpha, big);
            let parity = DMatrix::from_fn(big, big, |i, j| {
                if i == j {
                    Complex64::new(if i % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            });
            let op = &d * parity * d.adjoint();
            let mut tr = Complex64::new(0.0, 0.0);
            for i in 0..small {
                for j in 0..small {
                    tr += rho[(i, j)] * op[(j, i)];
                }
            }
            assert_relative_eq!(displaced_parity_wigner(&dm, x, y), tr.re / PI, epsilon = 1e-12);
        }
    }
}
