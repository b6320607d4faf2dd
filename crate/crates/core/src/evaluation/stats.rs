//! Friedman rank test, Holm step-down post-hoc and win/tie/loss counts for
//! comparing several classifiers over several datasets.
//!
//! Accuracies are rounded to four decimals before ranking or comparing, so
//! values that agree to the precision results are usually reported at count
//! as ties. Rank 1 is the highest accuracy.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::special::{chi_square_sf, normal_two_sided_p};

pub const ALPHA: f64 = 0.05;

/// Rounds to four decimals.
pub fn round4(v: f64) -> f64 {
    (v * 1e4).round() / 1e4
}

fn check_shape(matrix: &[Vec<f64>]) -> Result<(usize, usize)> {
    let n = matrix.len();
    let k = matrix.first().map_or(0, Vec::len);
    if n < 2 || k < 2 {
        return Err(Error::Shape(format!(
            "need at least 2 datasets and 2 algorithms, got {n}x{k}"
        )));
    }
    if matrix.iter().any(|r| r.len() != k) {
        return Err(Error::Shape("rows have different lengths".into()));
    }
    if matrix.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::Shape("matrix has missing or non-finite cells".into()));
    }
    Ok((n, k))
}

/// Ranks of one row, 1 = largest, ties share their average rank.
pub fn rank_row(row: &[f64]) -> Vec<f64> {
    let values: Vec<f64> = row.iter().map(|&v| round4(v)).collect();
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end
        let avg = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = avg;
        }
        start = end;
    }
    ranks
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FriedmanResult {
    pub avg_ranks: Vec<f64>,
    /// χ²_F with k − 1 degrees of freedom.
    pub statistic: f64,
    pub pvalue: f64,
    /// Iman–Davenport F refinement, reported for reference.
    pub iman_davenport: f64,
}

/// Friedman test over an `N datasets × k algorithms` matrix.
pub fn friedman_test(matrix: &[Vec<f64>]) -> Result<FriedmanResult> {
    let (n, k) = check_shape(matrix)?;
    let mut avg_ranks = vec![0.0; k];
    for row in matrix {
        for (acc, r) in avg_ranks.iter_mut().zip(rank_row(row)) {
            *acc += r;
        }
    }
    avg_ranks.iter_mut().for_each(|r| *r /= n as f64);
    let (nf, kf) = (n as f64, k as f64);
    let sum_sq: f64 = avg_ranks.iter().map(|r| r * r).sum();
    let statistic = (12.0 * nf / (kf * (kf + 1.0)) * (sum_sq - kf * (kf + 1.0).powi(2) / 4.0)).max(0.0);
    let pvalue = chi_square_sf(statistic, kf - 1.0);
    let denom = nf * (kf - 1.0) - statistic;
    let iman_davenport = if denom > 0.0 {
        (nf - 1.0) * statistic / denom
    } else {
        f64::INFINITY
    };
    Ok(FriedmanResult {
        avg_ranks,
        statistic,
        pvalue,
        iman_davenport,
    })
}

/// Holm step-down adjustment; output is in input order.
///
/// With raw p-values sorted ascending, `adj_(i) = max_{l ≤ i} min(1, (m − l + 1)·p_(l))`.
pub fn holm_adjust(raw: &[f64]) -> Vec<f64> {
    let m = raw.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| raw[a].total_cmp(&raw[b]));
    let mut adjusted = vec![0.0; m];
    let mut running = 0.0f64;
    for (pos, &i) in order.iter().enumerate() {
        running = running.max(((m - pos) as f64 * raw[i]).min(1.0));
        adjusted[i] = running;
    }
    adjusted
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HolmComparison {
    pub index: usize,
    pub z: f64,
    pub raw_p: f64,
    pub adjusted_p: f64,
    pub reject: bool,
}

/// Compares every algorithm against `control` using average ranks.
///
/// `z = (R_j − R_control) / sqrt(k(k+1)/(6N))`, raw p two-sided normal.
pub fn holm_posthoc(avg_ranks: &[f64], n_datasets: usize, control: usize) -> Result<Vec<HolmComparison>> {
    let k = avg_ranks.len();
    if k < 2 || n_datasets == 0 || control >= k {
        return Err(Error::Shape("post-hoc needs k >= 2, N >= 1 and a valid control".into()));
    }
    let se = (k as f64 * (k as f64 + 1.0) / (6.0 * n_datasets as f64)).sqrt();
    let others: Vec<usize> = (0..k).filter(|&j| j != control).collect();
    let zs: Vec<f64> = others.iter().map(|&j| (avg_ranks[j] - avg_ranks[control]) / se).collect();
    let raw: Vec<f64> = zs.iter().map(|&z| normal_two_sided_p(z)).collect();
    let adjusted = holm_adjust(&raw);
    Ok(others
        .iter()
        .enumerate()
        .map(|(i, &j)| HolmComparison {
            index: j,
            z: zs[i],
            raw_p: raw[i],
            adjusted_p: adjusted[i],
            reject: adjusted[i] < ALPHA,
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WinTieLoss {
    pub win: usize,
    pub tie: usize,
    pub loss: usize,
}

/// Counts, per algorithm, datasets where `control` is better, equal or worse.
pub fn win_tie_loss(matrix: &[Vec<f64>], control: usize) -> Result<Vec<WinTieLoss>> {
    let (_, k) = check_shape(matrix)?;
    if control >= k {
        return Err(Error::Shape(format!("control index {control} out of range")));
    }
    Ok((0..k)
        .map(|j| {
            let mut wtl = WinTieLoss { win: 0, tie: 0, loss: 0 };
            for row in matrix {
                let (c, o) = (round4(row[control]), round4(row[j]));
                if c > o {
                    wtl.win += 1;
                } else if c < o {
                    wtl.loss += 1;
                } else {
                    wtl.tie += 1;
                }
            }
            wtl
        })
        .collect())
}

/// Per-algorithm line of a comparison report. The control has no p-values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmSummary {
    pub name: String,
    pub avg_rank: f64,
    pub raw_p: Option<f64>,
    pub adjusted_p: Option<f64>,
    pub reject: Option<bool>,
    pub win: Option<usize>,
    pub tie: Option<usize>,
    pub loss: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub algorithms: Vec<String>,
    pub datasets: Vec<String>,
    pub accuracy_matrix: Vec<Vec<f64>>,
    pub avg_ranks: Vec<f64>,
    pub friedman_statistic: f64,
    pub friedman_pvalue: f64,
    pub iman_davenport_statistic: f64,
    pub control: String,
    /// Control first, then the others by ascending average rank.
    pub rows: Vec<AlgorithmSummary>,
}

/// Friedman test, then Holm against `control` (default: best average rank).
pub fn compare(
    algorithms: &[String],
    datasets: &[String],
    matrix: &[Vec<f64>],
    control: Option<&str>,
) -> Result<ComparisonReport> {
    let (n, k) = check_shape(matrix)?;
    if algorithms.len() != k || datasets.len() != n {
        return Err(Error::Shape("names do not match the matrix".into()));
    }
    let friedman = friedman_test(matrix)?;
    let control_idx = match control {
        Some(name) => algorithms
            .iter()
            .position(|a| a == name)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown control algorithm {name:?}")))?,
        None => (0..k).fold(0, |best, j| {
            if friedman.avg_ranks[j] < friedman.avg_ranks[best] {
                j
            } else {
                best
            }
        }),
    };
    let holm = holm_posthoc(&friedman.avg_ranks, n, control_idx)?;
    let wtl = win_tie_loss(matrix, control_idx)?;

    let mut rows = vec![AlgorithmSummary {
        name: algorithms[control_idx].clone(),
        avg_rank: friedman.avg_ranks[control_idx],
        raw_p: None,
        adjusted_p: None,
        reject: None,
        win: None,
        tie: None,
        loss: None,
    }];
    let mut others: Vec<&HolmComparison> = holm.iter().collect();
    others.sort_by(|a, b| {
        friedman.avg_ranks[a.index]
            .total_cmp(&friedman.avg_ranks[b.index])
            .then(a.index.cmp(&b.index))
    });
    rows.extend(others.into_iter().map(|h| AlgorithmSummary {
        name: algorithms[h.index].clone(),
        avg_rank: friedman.avg_ranks[h.index],
        raw_p: Some(h.raw_p),
        adjusted_p: Some(h.adjusted_p),
        reject: Some(h.reject),
        win: Some(wtl[h.index].win),
        tie: Some(wtl[h.index].tie),
        loss: Some(wtl[h.index].loss),
    }));

    Ok(ComparisonReport {
        algorithms: algorithms.to_vec(),
        datasets: datasets.to_vec(),
        accuracy_matrix: matrix.to_vec(),
        avg_ranks: friedman.avg_ranks,
        friedman_statistic: friedman.statistic,
        friedman_pvalue: friedman.pvalue,
        iman_davenport_statistic: friedman.iman_davenport,
        control: algorithms[control_idx].clone(),
        rows,
    })
}

impl ComparisonReport {
    pub fn row(&self, name: &str) -> Option<&AlgorithmSummary> {
        self.rows.iter().find(|r| r.name == name)
    }

    /// CSV with columns `classifier,pvalue,rank,win,tie,loss`; the control's
    /// p-value and counts are `-`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("classifier,pvalue,rank,win,tie,loss\n");
        let opt = |v: Option<usize>| v.map_or("-".to_string(), |v| v.to_string());
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.name,
                r.adjusted_p.map_or("-".to_string(), |p| format!("{p:e}")),
                r.avg_rank,
                opt(r.win),
                opt(r.tie),
                opt(r.loss)
            ));
        }
        out
    }
}
