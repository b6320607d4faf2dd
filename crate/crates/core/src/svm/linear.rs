//! Dual coordinate descent for the L1-loss (hinge) linear SVM.
//!
//! Each row is augmented with a constant 1 so the bias is the last weight.
//! The dual is `max Σα − ½‖Σ αᵢyᵢx̂ᵢ‖²` subject to `0 ≤ αᵢ ≤ C`, solved one
//! coordinate at a time with a fresh random permutation every epoch.

use rand::seq::SliceRandom;

use crate::error::Result;
use crate::rng::rng_from_seed;

use super::{dot, Diagnostics, Problem, SvmModel, SvmParams};

/// Dual variables and augmented weights from a linear solve.
#[derive(Debug, Clone)]
pub struct LinearSolution {
    pub alpha: Vec<f64>,
    /// Weights followed by the bias.
    pub w_aug: Vec<f64>,
    pub diagnostics: Diagnostics,
}

impl LinearSolution {
    /// Dual objective `Σα − ½‖w‖²` (bias included in `w`).
    pub fn dual_objective(&self) -> f64 {
        self.alpha.iter().sum::<f64>() - 0.5 * dot(&self.w_aug, &self.w_aug)
    }
}

/// `Σ αᵢyᵢx̂ᵢ` over augmented rows.
pub(crate) fn weights_from_alpha(problem: &Problem, alpha: &[f64]) -> Vec<f64> {
    let dim = problem.dim();
    let mut w = vec![0.0; dim + 1];
    for (i, (&a, &y)) in alpha.iter().zip(problem.targets()).enumerate() {
        if a == 0.0 {
            continue;
        }
        let ay = a * y;
        for (wj, xj) in w.iter_mut().zip(problem.row(i)) {
            *wj += ay * xj;
        }
        w[dim] += ay;
    }
    w
}

pub fn solve_linear_dual(problem: &Problem, params: &SvmParams) -> Result<LinearSolution> {
    params.validate()?;
    let t = problem.len();
    let dim = problem.dim();
    let c = params.c;
    let tol = params.linear_tol();
    let y = problem.targets();

    let diag: Vec<f64> = (0..t).map(|i| dot(problem.row(i), problem.row(i)) + 1.0).collect();
    let mut alpha = vec![0.0; t];
    let mut w = vec![0.0; dim + 1];
    let mut order: Vec<usize> = (0..t).collect();
    let mut rng = rng_from_seed(params.seed);

    let mut diagnostics = Diagnostics::default();
    for epoch in 1..=params.max_iter {
        order.shuffle(&mut rng);
        let mut max_violation = 0.0f64;
        for &i in &order {
            let xi = problem.row(i);
            let g = y[i] * (dot(&w[..dim], xi) + w[dim]) - 1.0;
            let pg = if alpha[i] <= 0.0 {
                g.min(0.0)
            } else if alpha[i] >= c {
                g.max(0.0)
            } else {
                g
            };
            max_violation = max_violation.max(pg.abs());
            if pg != 0.0 {
                let old = alpha[i];
                alpha[i] = (old - g / diag[i]).clamp(0.0, c);
                let d = (alpha[i] - old) * y[i];
                if d != 0.0 {
                    for (wj, xj) in w[..dim].iter_mut().zip(xi) {
                        *wj += d * xj;
                    }
                    w[dim] += d;
                }
            }
        }
        diagnostics.iterations = epoch;
        diagnostics.max_violation = max_violation;
        if max_violation < tol {
            diagnostics.converged = true;
            break;
        }
    }

    // rebuild from α so the stored weights match the dual exactly
    let w_aug = weights_from_alpha(problem, &alpha);
    Ok(LinearSolution {
        alpha,
        w_aug,
        diagnostics,
    })
}

pub fn train_linear_svm(problem: &Problem, params: &SvmParams) -> Result<SvmModel> {
    let sol = solve_linear_dual(problem, params)?;
    let mut w = sol.w_aug;
    let b = w.pop().expect("augmented weights");
    let mut model = SvmModel::linear(w, b);
    model.diagnostics = sol.diagnostics;
    Ok(model)
}
