use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::dot;

/// Kernel function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum KernelSpec {
    /// `x·z`
    Linear,
    /// `(gamma·x·z + coef0)^degree`
    #[serde(rename = "poly")]
    Polynomial { gamma: f64, degree: u32, coef0: f64 },
    /// `exp(-gamma·‖x−z‖²)`
    Rbf { gamma: f64 },
}

impl KernelSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            KernelSpec::Linear => Ok(()),
            KernelSpec::Polynomial { gamma, degree, coef0 } => {
                if !(gamma > 0.0 && gamma.is_finite()) {
                    return Err(Error::InvalidParameter(format!("gamma must be > 0, got {gamma}")));
                }
                if degree == 0 {
                    return Err(Error::InvalidParameter("degree must be >= 1".into()));
                }
                if !coef0.is_finite() {
                    return Err(Error::InvalidParameter("coef0 must be finite".into()));
                }
                Ok(())
            }
            KernelSpec::Rbf { gamma } => {
                if gamma > 0.0 && gamma.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter(format!("gamma must be > 0, got {gamma}")))
                }
            }
        }
    }

    #[inline]
    pub fn eval_unchecked(&self, x: &[f64], z: &[f64]) -> f64 {
        match *self {
            KernelSpec::Linear => dot(x, z),
            KernelSpec::Polynomial { gamma, degree, coef0 } => {
                (gamma * dot(x, z) + coef0).powi(degree as i32)
            }
            KernelSpec::Rbf { gamma } => {
                let d2: f64 = x.iter().zip(z).map(|(a, b)| (a - b) * (a - b)).sum();
                (-gamma * d2).exp()
            }
        }
    }
}

/// Evaluates `K(x, z)`.
pub fn kernel_eval(kernel: &KernelSpec, x: &[f64], z: &[f64]) -> Result<f64> {
    if x.len() != z.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            actual: z.len(),
        });
    }
    Ok(kernel.eval_unchecked(x, z))
}
