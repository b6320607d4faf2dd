//! SMO for the kernel SVM dual
//!
//! `min ½αᵀQα − Σα` s.t. `0 ≤ α ≤ C`, `yᵀα = 0`, with `Qᵢⱼ = yᵢyⱼK(xᵢ, xⱼ)`.
//! Working pairs are chosen as the maximal violating pair; the run stops
//! once the violation drops below `tol` or after `max_iter` pair updates.

use crate::error::Result;

use super::{Decision, Diagnostics, KernelSpec, Problem, SvmModel, SvmParams};

const TAU: f64 = 1e-12;
const FULL_CACHE_LIMIT: usize = 2048;

#[derive(Debug, Clone)]
pub struct KernelSolution {
    pub alpha: Vec<f64>,
    /// Decision function is `Σ αᵢyᵢK(xᵢ, x) − rho`.
    pub rho: f64,
    pub diagnostics: Diagnostics,
}

impl KernelSolution {
    /// `Σα − ½αᵀQα`.
    pub fn dual_objective(&self, problem: &Problem, kernel: &KernelSpec) -> f64 {
        let y = problem.targets();
        let t = problem.len();
        let mut quad = 0.0;
        for i in 0..t {
            if self.alpha[i] == 0.0 {
                continue;
            }
            for j in 0..t {
                quad += self.alpha[i]
                    * self.alpha[j]
                    * y[i]
                    * y[j]
                    * kernel.eval_unchecked(problem.row(i), problem.row(j));
            }
        }
        self.alpha.iter().sum::<f64>() - 0.5 * quad
    }
}

/// Rows of `Q`, either precomputed or evaluated on demand.
enum QMatrix<'a> {
    Full { t: usize, q: Vec<f64> },
    OnDemand {
        problem: &'a Problem,
        kernel: KernelSpec,
        row: Vec<f64>,
    },
}

impl<'a> QMatrix<'a> {
    fn new(problem: &'a Problem, kernel: KernelSpec) -> Self {
        let t = problem.len();
        if t <= FULL_CACHE_LIMIT {
            let y = problem.targets();
            let mut q = vec![0.0; t * t];
            for i in 0..t {
                for j in i..t {
                    let v = y[i] * y[j] * kernel.eval_unchecked(problem.row(i), problem.row(j));
                    q[i * t + j] = v;
                    q[j * t + i] = v;
                }
            }
            QMatrix::Full { t, q }
        } else {
            QMatrix::OnDemand {
                problem,
                kernel,
                row: vec![0.0; t],
            }
        }
    }

    fn row(&mut self, i: usize) -> &[f64] {
        match self {
            QMatrix::Full { t, q } => &q[i * *t..(i + 1) * *t],
            QMatrix::OnDemand { problem, kernel, row } => {
                let y = problem.targets();
                let xi = problem.row(i);
                for (j, r) in row.iter_mut().enumerate() {
                    *r = y[i] * y[j] * kernel.eval_unchecked(xi, problem.row(j));
                }
                row
            }
        }
    }
}

pub fn solve_kernel_dual(problem: &Problem, params: &SvmParams) -> Result<KernelSolution> {
    params.validate()?;
    let t = problem.len();
    let c = params.c;
    let tol = params.kernel_tol();
    let y = problem.targets();
    let kernel = params.kernel;

    let qd: Vec<f64> = (0..t)
        .map(|i| kernel.eval_unchecked(problem.row(i), problem.row(i)))
        .collect();
    let mut q = QMatrix::new(problem, kernel);
    let mut alpha = vec![0.0; t];
    let mut grad = vec![-1.0; t];

    let in_up = |a: f64, yi: f64| (yi > 0.0 && a < c) || (yi < 0.0 && a > 0.0);
    let in_low = |a: f64, yi: f64| (yi > 0.0 && a > 0.0) || (yi < 0.0 && a < c);

    let mut diagnostics = Diagnostics::default();
    loop {
        let mut i_sel = None;
        let mut j_sel = None;
        let mut gmax = f64::NEG_INFINITY;
        let mut gmin = f64::INFINITY;
        for k in 0..t {
            let v = -y[k] * grad[k];
            if in_up(alpha[k], y[k]) && v > gmax {
                gmax = v;
                i_sel = Some(k);
            }
            if in_low(alpha[k], y[k]) && v < gmin {
                gmin = v;
                j_sel = Some(k);
            }
        }
        let violation = gmax - gmin;
        diagnostics.max_violation = if violation.is_finite() { violation.max(0.0) } else { 0.0 };
        let (i, j) = match (i_sel, j_sel) {
            (Some(i), Some(j)) if violation >= tol => (i, j),
            _ => {
                diagnostics.converged = true;
                break;
            }
        };
        if diagnostics.iterations >= params.max_iter {
            break;
        }
        diagnostics.iterations += 1;

        let q_ij = q.row(i)[j];
        let (old_i, old_j) = (alpha[i], alpha[j]);
        if y[i] != y[j] {
            let quad = (qd[i] + qd[j] + 2.0 * q_ij).max(TAU);
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > 0.0 {
                if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if diff > 0.0 {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if alpha[j] > c {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            let quad = (qd[i] + qd[j] - 2.0 * q_ij).max(TAU);
            let delta = (grad[i] - grad[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > c {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if alpha[j] < 0.0 {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if sum > c {
                if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }
        let (di, dj) = (alpha[i] - old_i, alpha[j] - old_j);
        if di != 0.0 {
            let row = q.row(i);
            grad.iter_mut().zip(row).for_each(|(g, r)| *g += r * di);
        }
        if dj != 0.0 {
            let row = q.row(j);
            grad.iter_mut().zip(row).for_each(|(g, r)| *g += r * dj);
        }
    }

    let rho = compute_rho(&alpha, &grad, y, c);
    Ok(KernelSolution {
        alpha,
        rho,
        diagnostics,
    })
}

/// Offset from free multipliers, or the midpoint of the feasible interval
/// when every multiplier sits at a bound.
fn compute_rho(alpha: &[f64], grad: &[f64], y: &[f64], c: f64) -> f64 {
    let mut ub = f64::INFINITY;
    let mut lb = f64::NEG_INFINITY;
    let mut free_sum = 0.0;
    let mut n_free = 0usize;
    for ((&a, &g), &yi) in alpha.iter().zip(grad).zip(y) {
        let yg = yi * g;
        if a >= c {
            if yi < 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else if a <= 0.0 {
            if yi > 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            n_free += 1;
            free_sum += yg;
        }
    }
    if n_free > 0 {
        free_sum / n_free as f64
    } else {
        (ub + lb) / 2.0
    }
}

pub fn train_kernel_svm(problem: &Problem, params: &SvmParams) -> Result<SvmModel> {
    let sol = solve_kernel_dual(problem, params)?;
    let y = problem.targets();
    let mut support = Vec::new();
    let mut alpha_y = Vec::new();
    for (i, &a) in sol.alpha.iter().enumerate() {
        if a > 0.0 {
            support.push(problem.row(i).to_vec());
            alpha_y.push(a * y[i]);
        }
    }
    Ok(SvmModel {
        decision: Decision::Kernel {
            kernel: params.kernel,
            support,
            alpha_y,
            b: -sol.rho,
        },
        diagnostics: sol.diagnostics,
    })
}
