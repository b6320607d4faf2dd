//! Repeated stratified cross-validation, grid search and the rank-based
//! comparison of several classifiers.

mod grid;
pub mod special;
pub mod stats;

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{standardize, stratified_kfold, Dataset};
use crate::ensemble::{fit_ensemble, OdteParams};
use crate::error::{Error, Result};
use crate::rng::mix;

pub use grid::{grid_search, grid_search_by, GridEntry, GridResult, ParamGrid};
pub use special::{chi_square_sf, normal_cdf, regularized_gamma};
pub use stats::{
    compare, friedman_test, holm_adjust, holm_posthoc, rank_row, win_tie_loss, AlgorithmSummary,
    ComparisonReport, FriedmanResult, HolmComparison, WinTieLoss,
};

/// Fraction of positions where `predicted` equals `truth`.
pub fn accuracy(predicted: &[usize], truth: &[usize]) -> Result<f64> {
    if predicted.len() != truth.len() {
        return Err(Error::DimensionMismatch {
            expected: truth.len(),
            actual: predicted.len(),
        });
    }
    if truth.is_empty() {
        return Err(Error::Empty("accuracy of an empty sequence".into()));
    }
    let hits = predicted.iter().zip(truth).filter(|(p, t)| p == t).count();
    Ok(hits as f64 / truth.len() as f64)
}

/// Predictions for one test fold.
#[derive(Debug, Clone)]
pub struct FoldOutcome {
    pub predictions: Vec<usize>,
    /// Mean node count of the fitted trees, when the learner has any.
    pub mean_tree_nodes: Option<f64>,
}

/// Anything that can be fitted on one fold and scored on another.
pub trait Learner: Sync {
    fn fit_predict(&self, train: &Dataset, test: &Dataset, seed: u64) -> Result<FoldOutcome>;
}

impl Learner for OdteParams {
    fn fit_predict(&self, train: &Dataset, test: &Dataset, seed: u64) -> Result<FoldOutcome> {
        let params = OdteParams {
            seed,
            ..self.clone()
        };
        let model = fit_ensemble(train, &params)?;
        Ok(FoldOutcome {
            predictions: model.predict_view(&test.full_view())?,
            mean_tree_nodes: Some(model.size_stats().mean_nodes),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvConfig {
    pub repetitions: usize,
    pub folds: usize,
    /// One seed per repetition; drives the fold split and the fitted models.
    pub seeds: Vec<u64>,
    pub standardize: bool,
}

impl CvConfig {
    /// `repetitions × folds` with seeds `mix(root_seed, r)`.
    pub fn new(repetitions: usize, folds: usize, root_seed: u64) -> Self {
        Self {
            repetitions,
            folds,
            seeds: default_seeds(root_seed, repetitions),
            standardize: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::InvalidParameter("repetitions must be >= 1".into()));
        }
        if self.folds < 2 {
            return Err(Error::InvalidParameter("folds must be >= 2".into()));
        }
        if self.seeds.len() != self.repetitions {
            return Err(Error::InvalidParameter(format!(
                "{} seeds given for {} repetitions",
                self.seeds.len(),
                self.repetitions
            )));
        }
        Ok(())
    }
}

impl Default for CvConfig {
    fn default() -> Self {
        Self::new(10, 5, 57)
    }
}

pub fn default_seeds(root_seed: u64, n: usize) -> Vec<u64> {
    (0..n as u64).map(|r| mix(root_seed, r)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub dataset_name: String,
    pub repetitions: usize,
    pub folds: usize,
    /// Indexed by `repetition * folds + fold`.
    pub fold_accuracies: Vec<f64>,
    pub mean: f64,
    /// Population standard deviation of the fold accuracies.
    pub std: f64,
    pub seeds_used: Vec<u64>,
    pub mean_tree_nodes: Option<f64>,
    pub wall_time_seconds: Option<f64>,
}

impl CvReport {
    /// One line per fold: `dataset,repetition,fold,accuracy`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("dataset,repetition,fold,accuracy\n");
        for (i, acc) in self.fold_accuracies.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                self.dataset_name,
                i / self.folds,
                i % self.folds,
                acc
            ));
        }
        out
    }
}

/// Population mean and standard deviation.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Repeated stratified k-fold cross-validation.
///
/// Repetition `r` splits with `config.seeds[r]`; the learner on fold `f`
/// receives `mix(config.seeds[r], f)`. Folds run in parallel and the result
/// does not depend on scheduling.
pub fn cross_validate<L: Learner>(
    dataset: &Dataset,
    dataset_name: &str,
    learner: &L,
    config: &CvConfig,
) -> Result<CvReport> {
    config.validate()?;
    let start = Instant::now();
    let splits = config
        .seeds
        .iter()
        .map(|&s| stratified_kfold(dataset, config.folds, s))
        .collect::<Result<Vec<_>>>()?;
    let jobs: Vec<(usize, usize)> = (0..config.repetitions)
        .flat_map(|r| (0..config.folds).map(move |f| (r, f)))
        .collect();
    let outcomes = jobs
        .par_iter()
        .map(|&(r, f)| {
            let fold = &splits[r][f];
            let (train, test) = if config.standardize {
                let (_, mut scaled) = standardize(&fold.train, &[&fold.test]);
                let test = scaled.pop().expect("one extra split");
                (scaled.pop().expect("train split"), test)
            } else {
                (fold.train.materialize(), fold.test.materialize())
            };
            let out = learner.fit_predict(&train, &test, mix(config.seeds[r], f as u64))?;
            Ok((accuracy(&out.predictions, test.labels())?, out.mean_tree_nodes))
        })
        .collect::<Result<Vec<_>>>()?;

    let fold_accuracies: Vec<f64> = outcomes.iter().map(|o| o.0).collect();
    let (mean, std) = mean_std(&fold_accuracies);
    let nodes: Vec<f64> = outcomes.iter().filter_map(|o| o.1).collect();
    let mean_tree_nodes = (!nodes.is_empty()).then(|| nodes.iter().sum::<f64>() / nodes.len() as f64);
    Ok(CvReport {
        dataset_name: dataset_name.to_string(),
        repetitions: config.repetitions,
        folds: config.folds,
        fold_accuracies,
        mean,
        std,
        seeds_used: config.seeds.clone(),
        mean_tree_nodes,
        wall_time_seconds: Some(start.elapsed().as_secs_f64()),
    })
}
