//! Binary soft-margin SVMs.
//!
//! Two solvers are provided:
//!
//! * [`train_linear_svm`]: dual coordinate descent on the hinge-loss problem
//!   with the bias folded into the weights through a constant feature. The
//!   bias is therefore regularized and the dual has box constraints only.
//! * [`train_kernel_svm`]: SMO with maximal-violating-pair working-set
//!   selection on the usual dual with the `Σ αᵢyᵢ = 0` constraint.
//!
//! [`train`] dispatches on the kernel kind.

mod kernel;
mod linear;
mod smo;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use kernel::{kernel_eval, KernelSpec};
pub use linear::{solve_linear_dual, train_linear_svm, LinearSolution};
pub use smo::{solve_kernel_dual, train_kernel_svm, KernelSolution};

pub const DEFAULT_LINEAR_TOL: f64 = 1e-4;
pub const DEFAULT_KERNEL_TOL: f64 = 1e-3;

/// SVM hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmParams {
    #[serde(rename = "C")]
    pub c: f64,
    pub kernel: KernelSpec,
    /// Epochs for the linear solver, pair updates for SMO.
    pub max_iter: usize,
    /// Stopping tolerance; `None` uses the solver's default.
    pub tol: Option<f64>,
    pub seed: u64,
}

impl Default for SvmParams {
    fn default() -> Self {
        Self {
            c: 1.0,
            kernel: KernelSpec::Linear,
            max_iter: 100_000,
            tol: None,
            seed: 0,
        }
    }
}

impl SvmParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::InvalidParameter(format!("C must be > 0, got {}", self.c)));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter("max_iter must be >= 1".into()));
        }
        if let Some(tol) = self.tol {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(Error::InvalidParameter(format!("tol must be > 0, got {tol}")));
            }
        }
        self.kernel.validate()
    }

    pub fn linear_tol(&self) -> f64 {
        self.tol.unwrap_or(DEFAULT_LINEAR_TOL)
    }

    pub fn kernel_tol(&self) -> f64 {
        self.tol.unwrap_or(DEFAULT_KERNEL_TOL)
    }
}

/// A binary training problem: `t` rows of dimension `dim` with ±1 targets.
#[derive(Debug, Clone)]
pub struct Problem {
    x: Vec<f64>,
    dim: usize,
    y: Vec<f64>,
}

impl Problem {
    pub fn new<R: AsRef<[f64]>>(rows: &[R], y: &[f64]) -> Result<Self> {
        let dim = rows.first().map_or(0, |r| r.as_ref().len());
        let mut x = Vec::with_capacity(rows.len() * dim);
        for r in rows {
            let r = r.as_ref();
            if r.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: r.len(),
                });
            }
            x.extend_from_slice(r);
        }
        Self::from_flat(x, dim, y.to_vec())
    }

    pub fn from_flat(x: Vec<f64>, dim: usize, y: Vec<f64>) -> Result<Self> {
        if y.is_empty() || dim == 0 {
            return Err(Error::Empty("SVM training problem is empty".into()));
        }
        if x.len() != y.len() * dim {
            return Err(Error::DimensionMismatch {
                expected: y.len() * dim,
                actual: x.len(),
            });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        if y.iter().any(|&v| v != 1.0 && v != -1.0) {
            return Err(Error::InvalidParameter("targets must be +1 or -1".into()));
        }
        if !(y.contains(&1.0) && y.contains(&-1.0)) {
            return Err(Error::SingleClass);
        }
        Ok(Self { x, dim, y })
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.x[i * self.dim..(i + 1) * self.dim]
    }

    pub fn targets(&self) -> &[f64] {
        &self.y
    }
}

/// Solver bookkeeping for one training run.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Diagnostics {
    pub iterations: usize,
    pub converged: bool,
    /// Largest KKT violation measured at the last check.
    pub max_violation: f64,
}

/// Trained decision function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Decision {
    Linear {
        w: Vec<f64>,
        b: f64,
    },
    Kernel {
        kernel: KernelSpec,
        #[serde(rename = "sv")]
        support: Vec<Vec<f64>>,
        alpha_y: Vec<f64>,
        b: f64,
    },
}

/// A trained binary SVM. Only the decision function is serialized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "Decision", into = "Decision")]
pub struct SvmModel {
    pub decision: Decision,
    pub diagnostics: Diagnostics,
}

impl From<Decision> for SvmModel {
    fn from(decision: Decision) -> Self {
        Self {
            decision,
            diagnostics: Diagnostics::default(),
        }
    }
}

impl From<SvmModel> for Decision {
    fn from(m: SvmModel) -> Self {
        m.decision
    }
}

/// Which side of the hyperplane a point falls on. `f(x) = 0` is positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Positive,
    Negative,
}

impl Branch {
    #[inline]
    pub fn of(value: f64) -> Self {
        if value >= 0.0 {
            Branch::Positive
        } else {
            Branch::Negative
        }
    }
}

impl SvmModel {
    pub fn linear(w: Vec<f64>, b: f64) -> Self {
        Decision::Linear { w, b }.into()
    }

    /// Input dimension the model expects, if it can be determined.
    pub fn dim(&self) -> Option<usize> {
        match &self.decision {
            Decision::Linear { w, .. } => Some(w.len()),
            Decision::Kernel { support, .. } => support.first().map(Vec::len),
        }
    }

    /// `f(x)` without the dimension check.
    pub fn decision_value_unchecked(&self, x: &[f64]) -> f64 {
        match &self.decision {
            Decision::Linear { w, b } => dot(w, x) + b,
            Decision::Kernel {
                kernel,
                support,
                alpha_y,
                b,
            } => {
                support
                    .iter()
                    .zip(alpha_y)
                    .map(|(s, a)| a * kernel.eval_unchecked(s, x))
                    .sum::<f64>()
                    + b
            }
        }
    }

    pub fn decision_value(&self, x: &[f64]) -> Result<f64> {
        if let Some(d) = self.dim() {
            if d != x.len() {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    actual: x.len(),
                });
            }
        }
        Ok(self.decision_value_unchecked(x))
    }

    pub fn branch(&self, x: &[f64]) -> Result<Branch> {
        self.decision_value(x).map(Branch::of)
    }

    pub fn is_finite(&self) -> bool {
        match &self.decision {
            Decision::Linear { w, b } => b.is_finite() && w.iter().all(|v| v.is_finite()),
            Decision::Kernel {
                support, alpha_y, b, ..
            } => {
                b.is_finite()
                    && alpha_y.iter().all(|v| v.is_finite())
                    && support.iter().flatten().all(|v| v.is_finite())
            }
        }
    }
}

/// Trains with the solver matching the kernel: coordinate descent for
/// linear, SMO otherwise.
pub fn train(problem: &Problem, params: &SvmParams) -> Result<SvmModel> {
    match params.kernel {
        KernelSpec::Linear => train_linear_svm(problem, params),
        _ => train_kernel_svm(problem, params),
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
