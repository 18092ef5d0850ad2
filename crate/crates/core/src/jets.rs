//! Univariate truncated Taylor series with complex coefficients.
//!
//! A [`Jet`] of order `n` at expansion point `a` stores `coeffs[k] = f^(k)(a) / k!`
//! for `k = 0..=n`. Arithmetic and elementary functions propagate the
//! coefficients exactly up to truncation, so `derivative(k)` returns the k-th
//! derivative of any composite expression without finite differencing.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JetError {
    #[error("jet order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("jet expansion point mismatch: {left} vs {right}")]
    PointMismatch { left: f64, right: f64 },
    #[error("singular jet operation `{op}`: value coefficient is zero")]
    Singularity { op: &'static str },
    #[error("derivative order {k} exceeds jet order {order}")]
    DerivativeOrder { k: usize, order: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    point: f64,
    coeffs: Vec<Complex64>,
}

impl Jet {
    /// The independent variable `t` expanded at `point`: coefficients `[point, 1, 0, ...]`.
    pub fn variable(point: f64, order: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
        coeffs[0] = Complex64::new(point, 0.0);
        if order >= 1 {
            coeffs[1] = Complex64::new(1.0, 0.0);
        }
        Self { point, coeffs }
    }

    pub fn constant(value: impl Into<Complex64>, point: f64, order: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
        coeffs[0] = value.into();
        Self { point, coeffs }
    }

    /// Builds a jet from raw Taylor coefficients.
    pub fn from_coeffs(point: f64, coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least the value coefficient");
        Self { point, coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn point(&self) -> f64 {
        self.point
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn value(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// `k! * coeffs[k]`.
    pub fn derivative(&self, k: usize) -> Result<Complex64, JetError> {
        if k > self.order() {
            return Err(JetError::DerivativeOrder {
                k,
                order: self.order(),
            });
        }
        Ok(self.coeffs[k] * factorial(k))
    }

    /// All derivatives `0..=order`.
    pub fn derivatives(&self) -> Vec<Complex64> {
        let mut fact = 1.0;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if k > 0 {
                    fact *= k as f64;
                }
                c * fact
            })
            .collect()
    }

    fn check_compatible(&self, other: &Jet) -> Result<(), JetError> {
        if self.order() != other.order() {
            return Err(JetError::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        if self.point != other.point {
            return Err(JetError::PointMismatch {
                left: self.point,
                right: other.point,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Jet) -> Result<Jet, JetError> {
        self.check_compatible(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Jet) -> Result<Jet, JetError> {
        self.check_compatible(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, other: &Jet) -> Result<Jet, JetError> {
        self.check_compatible(other)?;
        let n = self.coeffs.len();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (k, slot) in out.iter_mut().enumerate() {
            *slot = (0..=k).map(|j| self.coeffs[j] * other.coeffs[k - j]).sum();
        }
        Ok(Jet {
            point: self.point,
            coeffs: out,
        })
    }

    pub fn div(&self, other: &Jet) -> Result<Jet, JetError> {
        self.mul(&other.recip()?)
    }

    /// Multiplies every coefficient by `factor`.
    pub fn scale(&self, factor: impl Into<Complex64>) -> Jet {
        let factor = factor.into();
        self.map(|c| c * factor)
    }

    /// Adds `offset` to the value coefficient.
    pub fn shift(&self, offset: impl Into<Complex64>) -> Jet {
        let mut out = self.clone();
        out.coeffs[0] += offset.into();
        out
    }

    pub fn neg(&self) -> Jet {
        self.map(|c| -c)
    }

    pub fn exp(&self) -> Jet {
        let n = self.coeffs.len();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        out[0] = self.coeffs[0].exp();
        // k y_k = sum_{j=1}^{k} j x_j y_{k-j}
        for k in 1..n {
            let acc: Complex64 = (1..=k)
                .map(|j| self.coeffs[j] * out[k - j] * j as f64)
                .sum();
            out[k] = acc / k as f64;
        }
        Jet {
            point: self.point,
            coeffs: out,
        }
    }

    /// `x^exponent` on the principal branch.
    pub fn powf(&self, exponent: f64) -> Result<Jet, JetError> {
        let x0 = self.coeffs[0];
        if x0 == Complex64::new(0.0, 0.0) {
            return Err(JetError::Singularity { op: "powf" });
        }
        let n = self.coeffs.len();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        out[0] = if x0.im == 0.0 && x0.re > 0.0 {
            Complex64::new(x0.re.powf(exponent), 0.0)
        } else {
            x0.powf(exponent)
        };
        // k x_0 y_k = sum_{j=1}^{k} (exponent * j - (k - j)) x_j y_{k-j}
        for k in 1..n {
            let acc: Complex64 = (1..=k)
                .map(|j| self.coeffs[j] * out[k - j] * (exponent * j as f64 - (k - j) as f64))
                .sum();
            out[k] = acc / (x0 * k as f64);
        }
        Ok(Jet {
            point: self.point,
            coeffs: out,
        })
    }

    pub fn sqrt(&self) -> Result<Jet, JetError> {
        self.powf(0.5)
    }

    pub fn recip(&self) -> Result<Jet, JetError> {
        let x0 = self.coeffs[0];
        if x0 == Complex64::new(0.0, 0.0) {
            return Err(JetError::Singularity { op: "recip" });
        }
        let n = self.coeffs.len();
        let inv = x0.inv();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        out[0] = inv;
        for k in 1..n {
            let acc: Complex64 = (1..=k).map(|j| self.coeffs[j] * out[k - j]).sum();
            out[k] = -acc * inv;
        }
        Ok(Jet {
            point: self.point,
            coeffs: out,
        })
    }

    fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Jet {
        Jet {
            point: self.point,
            coeffs: self.coeffs.iter().map(|&c| f(c)).collect(),
        }
    }

    fn zip_with(&self, other: &Jet, f: impl Fn(Complex64, Complex64) -> Complex64) -> Jet {
        Jet {
            point: self.point,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}
