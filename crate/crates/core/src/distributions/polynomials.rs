//! Hermite and Legendre polynomial evaluators.

use num_complex::Complex64;

/// Physicists' Hermite polynomial `H_n(z)` via `H_{n+1} = 2z H_n - 2n H_{n-1}`.
pub fn hermite(n: usize, z: Complex64) -> Complex64 {
    let mut prev = Complex64::new(1.0, 0.0);
    if n == 0 {
        return prev;
    }
    let mut cur = z * 2.0;
    for k in 1..n {
        let next = z * cur * 2.0 - prev * (2.0 * k as f64);
        prev = cur;
        cur = next;
    }
    cur
}

/// `u_k = (sqrt C)^k H_k(i b / (2 sqrt C))` for `k = 0..=k_max`.
///
/// Uses `u_{k+1} = i b u_k - 2 k C u_{k-1}`, which involves `C` only through
/// its value, so it is branch-free and stays finite as `C -> 0`.
pub fn scaled_hermite_sequence(k_max: usize, b: Complex64, c: f64) -> Vec<Complex64> {
    let ib = Complex64::new(0.0, 1.0) * b;
    let mut out = Vec::with_capacity(k_max + 1);
    out.push(Complex64::new(1.0, 0.0));
    if k_max >= 1 {
        out.push(ib);
    }
    for k in 1..k_max {
        let next = ib * out[k] - out[k - 1] * (2.0 * k as f64 * c);
        out.push(next);
    }
    out
}

/// `ln |u_k|` for the sequence of [`scaled_hermite_sequence`], rescaled as it
/// runs so that large `k` neither overflows nor underflows.
pub fn ln_abs_scaled_hermite_sequence(k_max: usize, b: Complex64, c: f64) -> Vec<f64> {
    const RESCALE_ABOVE: f64 = 1e150;
    let ib = Complex64::new(0.0, 1.0) * b;
    let mut out = Vec::with_capacity(k_max + 1);
    out.push(0.0);
    let mut prev = Complex64::new(1.0, 0.0);
    let mut cur = ib;
    let mut ln_offset = 0.0;
    if k_max >= 1 {
        out.push(cur.norm().ln());
    }
    for k in 1..k_max {
        let next = ib * cur - prev * (2.0 * k as f64 * c);
        prev = cur;
        cur = next;
        let size = cur.norm().max(prev.norm());
        if size > RESCALE_ABOVE {
            prev /= size;
            cur /= size;
            ln_offset += size.ln();
        }
        out.push(cur.norm().ln() + ln_offset);
    }
    out
}

/// Legendre polynomial `P_n(x)` via Bonnet's recurrence. Valid for any real `x`.
pub fn legendre(n: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = x;
    for k in 1..n {
        let next = ((2 * k + 1) as f64 * x * cur - k as f64 * prev) / (k + 1) as f64;
        prev = cur;
        cur = next;
    }
    cur
}

/// `P_n(x) = x^n sum_l n! (1 - 1/x^2)^l / (2^{2l} (l!)^2 (n-2l)!)` for `x != 0`.
pub fn legendre_sum_form(n: usize, x: f64) -> f64 {
    let u = 1.0 - 1.0 / (x * x);
    let mut term = 1.0; // l = 0: n!/(n!) = 1
    let mut sum = term;
    for l in 1..=n / 2 {
        // ratio of consecutive terms: u (n-2l+2)(n-2l+1) / (4 l^2)
        let num = ((n - 2 * l + 2) * (n - 2 * l + 1)) as f64;
        term *= u * num / (4.0 * (l * l) as f64);
        sum += term;
    }
    x.powi(n as i32) * sum
}

/// `Q_k = sigma^k P_k(lead / sigma)` for `k = 0..=n`, written through `sigma^2`
/// only: `(k+1) Q_{k+1} = (2k+1) lead Q_k - k sigma^2 Q_{k-1}`.
///
/// Stays finite as `sigma -> 0` and is valid for `sigma^2 < 0`.
pub fn scaled_legendre_sequence(n: usize, lead: f64, sigma_sq: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(1.0);
    if n >= 1 {
        out.push(lead);
    }
    for k in 1..n {
        let next = ((2 * k + 1) as f64 * lead * out[k] - k as f64 * sigma_sq * out[k - 1])
            / (k + 1) as f64;
        out.push(next);
    }
    out
}
