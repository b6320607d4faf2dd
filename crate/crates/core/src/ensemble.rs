//! Bagged ensembles of oblique trees with majority voting, and their JSON
//! model files.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{bootstrap, Dataset, SampleView, Standardizer};
use crate::error::{Error, Result};
use crate::rng::mix;
use crate::stree::{self, node_count, predict_tree, MaxFeatures, StreeParams, TreeNode};

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OdteParams {
    pub n_trees: usize,
    pub base: StreeParams,
    /// Rows drawn per tree; `None` means as many as the training set.
    pub bootstrap_size: Option<usize>,
    pub max_features: MaxFeatures,
    /// When false every tree sees the training set unchanged.
    pub bootstrap: bool,
    pub seed: u64,
}

impl Default for OdteParams {
    fn default() -> Self {
        Self {
            n_trees: 100,
            base: StreeParams::default(),
            bootstrap_size: None,
            max_features: MaxFeatures::All,
            bootstrap: true,
            seed: 0,
        }
    }
}

impl OdteParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_trees == 0 {
            return Err(Error::InvalidParameter("n_trees must be >= 1".into()));
        }
        if self.bootstrap_size == Some(0) {
            return Err(Error::InvalidParameter("bootstrap size must be >= 1".into()));
        }
        if let MaxFeatures::Count(0) = self.max_features {
            return Err(Error::InvalidParameter("max_features must be >= 1".into()));
        }
        self.base.validate()
    }

    /// Seed of tree `i`.
    pub fn tree_seed(&self, i: usize) -> u64 {
        mix(self.seed, i as u64)
    }

    /// Parameters tree `i` is grown with.
    pub fn tree_params(&self, i: usize) -> StreeParams {
        StreeParams {
            seed: self.tree_seed(i),
            max_features: self.max_features,
            ..self.base.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ensemble {
    pub schema_version: u64,
    pub vocabulary: Vec<String>,
    pub n_features: usize,
    pub params: OdteParams,
    pub per_tree_seeds: Vec<u64>,
    pub trees: Vec<TreeNode>,
    /// Scaling applied to every input before it reaches the trees.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub standardizer: Option<Standardizer>,
}

/// Trains `params.n_trees` trees, tree `i` on a bootstrap drawn with
/// `params.tree_seed(i)`. Trees are trained in parallel on the current
/// rayon pool; the result does not depend on the pool size.
pub fn fit_ensemble(dataset: &Dataset, params: &OdteParams) -> Result<Ensemble> {
    params.validate()?;
    let size = params.bootstrap_size.unwrap_or(dataset.n_rows());
    let seeds: Vec<u64> = (0..params.n_trees).map(|i| params.tree_seed(i)).collect();
    let trees = seeds
        .par_iter()
        .enumerate()
        .map(|(i, &seed)| {
            let view = if params.bootstrap {
                bootstrap(dataset, size, seed)?
            } else {
                dataset.full_view()
            };
            stree::build(&view, &params.tree_params(i))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Ensemble {
        schema_version: SCHEMA_VERSION,
        vocabulary: dataset.vocabulary().to_vec(),
        n_features: dataset.n_features(),
        params: params.clone(),
        per_tree_seeds: seeds,
        trees,
        standardizer: None,
    })
}

/// Label with the most votes, ties to the lowest vocabulary index.
pub fn majority(votes: &[usize]) -> usize {
    stree::mode(votes)
}

impl Ensemble {
    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n_features {
            return Err(Error::DimensionMismatch {
                expected: self.n_features,
                actual: x.len(),
            });
        }
        Ok(())
    }

    /// Per-label vote counts for `x`.
    pub fn votes(&self, x: &[f64]) -> Result<Vec<usize>> {
        self.check_dim(x)?;
        let scaled;
        let x = match &self.standardizer {
            Some(s) => {
                scaled = s.transform_row(x);
                &scaled[..]
            }
            None => x,
        };
        let mut votes = vec![0; self.vocabulary.len()];
        for tree in &self.trees {
            votes[predict_tree(tree, x)?] += 1;
        }
        Ok(votes)
    }

    pub fn predict(&self, x: &[f64]) -> Result<usize> {
        self.votes(x).map(|v| majority(&v))
    }

    pub fn predict_batch<R: AsRef<[f64]> + Sync>(&self, rows: &[R]) -> Result<Vec<usize>> {
        rows.par_iter().map(|r| self.predict(r.as_ref())).collect()
    }

    pub fn predict_view(&self, view: &SampleView) -> Result<Vec<usize>> {
        (0..view.len())
            .into_par_iter()
            .map(|i| self.predict(view.row(i)))
            .collect()
    }

    pub fn size_stats(&self) -> SizeStats {
        ensemble_size_stats(self)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string(self).map_err(|e| Error::Corrupted(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        // check the version before committing to the full schema
        let probe: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Corrupted(e.to_string()))?;
        let version = probe
            .get("schema_version")
            .and_then(serde_json::Value::as_u64)
            .ok_or_else(|| Error::Corrupted("missing schema_version".into()))?;
        if version != SCHEMA_VERSION {
            return Err(Error::SchemaMismatch {
                found: version,
                supported: SCHEMA_VERSION,
            });
        }
        let ens: Ensemble =
            serde_json::from_value(probe).map_err(|e| Error::Corrupted(e.to_string()))?;
        if ens.trees.is_empty() || ens.vocabulary.is_empty() {
            return Err(Error::Corrupted("ensemble has no trees or labels".into()));
        }
        if let Some(s) = &ens.standardizer {
            if s.mean.len() != ens.n_features || s.std.len() != ens.n_features {
                return Err(Error::Corrupted("standardizer width differs from n_features".into()));
            }
        }
        Ok(ens)
    }
}

pub fn save_model(ensemble: &Ensemble, path: &Path) -> Result<()> {
    std::fs::write(path, ensemble.to_json()?).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_model(path: &Path) -> Result<Ensemble> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ensemble::from_json(&text)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeStats {
    pub mean_nodes: f64,
    pub max_depth_observed: usize,
    pub per_tree_nodes: Vec<usize>,
}

pub fn ensemble_size_stats(ensemble: &Ensemble) -> SizeStats {
    let per_tree_nodes: Vec<usize> = ensemble.trees.iter().map(node_count).collect();
    let mean_nodes = per_tree_nodes.iter().sum::<usize>() as f64 / per_tree_nodes.len().max(1) as f64;
    SizeStats {
        mean_nodes,
        max_depth_observed: ensemble.trees.iter().map(TreeNode::depth).max().unwrap_or(0),
        per_tree_nodes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::svm::SvmModel;

    fn leaf(label: usize, k: usize) -> TreeNode {
        let mut counts = vec![0; k];
        counts[label] = 1;
        TreeNode::leaf(counts)
    }

    fn ensemble_of(trees: Vec<TreeNode>, k: usize) -> Ensemble {
        Ensemble {
            schema_version: SCHEMA_VERSION,
            vocabulary: (0..k).map(|i| format!("c{i}")).collect(),
            n_features: 1,
            params: OdteParams::default(),
            per_tree_seeds: vec![0; trees.len()],
            trees,
            standardizer: None,
        }
    }

    #[test]
    fn vote_rules() {
        assert_eq!(majority(&[2, 1, 0]), 0);
        let e = ensemble_of(vec![leaf(0, 3), leaf(0, 3), leaf(1, 3)], 3);
        assert_eq!(e.predict(&[0.0]).unwrap(), 0);
        let e = ensemble_of(vec![leaf(1, 3), leaf(0, 3)], 3);
        assert_eq!(e.predict(&[0.0]).unwrap(), 0);
        let e = ensemble_of(vec![leaf(2, 3); 4], 3);
        assert_eq!(e.predict(&[0.0]).unwrap(), 2);
        assert_eq!(e.votes(&[0.0]).unwrap().iter().sum::<usize>(), 4);
        assert!(e.predict(&[0.0, 1.0]).is_err());
    }

    #[test]
    fn empty_and_single_batches() {
        let e = ensemble_of(vec![leaf(1, 2)], 2);
        assert!(e.predict_batch::<Vec<f64>>(&[]).unwrap().is_empty());
        assert_eq!(e.predict_batch(&[[3.0]]).unwrap(), [e.predict(&[3.0]).unwrap()]);
    }

    #[test]
    fn size_stats_means() {
        let three = TreeNode::Internal {
            ig: 1.0,
            model: SvmModel::linear(vec![1.0], 0.0),
            feature_subset: vec![0],
            pos: Box::new(leaf(0, 2)),
            neg: Box::new(leaf(1, 2)),
        };
        assert_eq!(ensemble_of(vec![three.clone()], 2).size_stats().mean_nodes, 3.0);
        let s = ensemble_of(vec![leaf(0, 2), three], 2).size_stats();
        assert_eq!(s.mean_nodes, 2.0);
        assert_eq!(s.per_tree_nodes, [1, 3]);
        assert_eq!(s.max_depth_observed, 1);
    }

    #[test]
    fn schema_version_is_checked() {
        let e = ensemble_of(vec![leaf(0, 2)], 2);
        let text = e.to_json().unwrap().replacen("\"schema_version\":1", "\"schema_version\":9999", 1);
        assert!(matches!(
            Ensemble::from_json(&text),
            Err(Error::SchemaMismatch { found: 9999, .. })
        ));
    }

    #[test]
    fn truncated_payload_is_corrupted() {
        let e = ensemble_of(vec![leaf(0, 2)], 2);
        let text = e.to_json().unwrap();
        assert!(matches!(
            Ensemble::from_json(&text[..text.len() / 2]),
            Err(Error::Corrupted(_))
        ));
    }

    #[test]
    fn params_validation() {
        let p = OdteParams {
            n_trees: 0,
            ..OdteParams::default()
        };
        assert!(p.validate().is_err());
    }
}
