//! Oblique decision trees whose internal nodes are SVM hyperplanes, bagged
//! ensembles of them, and the cross-validation and rank statistics used to
//! compare classifiers.
//!
//! ```
//! use odte_core::{fit_ensemble, Dataset, OdteParams};
//!
//! let rows = vec![vec![0.0, 0.0], vec![0.1, 0.2], vec![1.0, 1.0], vec![0.9, 1.1]];
//! let data = Dataset::from_named_labels(rows, &["a", "a", "b", "b"]).unwrap();
//! let params = OdteParams { n_trees: 5, ..OdteParams::default() };
//! let model = fit_ensemble(&data, &params).unwrap();
//! assert_eq!(model.trees.len(), 5);
//! ```

pub mod config;
pub mod data;
pub mod ensemble;
pub mod error;
pub mod evaluation;
pub mod rng;
pub mod stree;
pub mod svm;

pub use config::Hyperparameters;
pub use data::{bootstrap, load_csv, stratified_kfold, Dataset, LabelColumn, SampleView, Standardizer};
pub use ensemble::{fit_ensemble, load_model, save_model, Ensemble, OdteParams, SizeStats};
pub use error::{Error, Result};
pub use evaluation::{cross_validate, CvConfig, CvReport, ComparisonReport, Learner};
pub use rng::mix;
pub use stree::{predict_tree, MaxFeatures, MulticlassStrategy, Splitter, StreeParams, TreeNode};
pub use svm::{KernelSpec, SvmModel, SvmParams};
