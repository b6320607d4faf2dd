//! Oblique decision trees with SVM splits.
//!
//! At every internal node the labels present are reduced to binary
//! problems (one-vs-one or one-vs-rest), one SVM is trained per problem,
//! and each SVM's sign partitions *all* rows reaching the node. The model
//! whose partition has the highest information gain is kept; the others are
//! discarded. Growth stops on pure nodes, at the depth limit, below
//! `min_samples_split` rows, or when no candidate has positive gain.

mod impurity;

use rand::seq::index::sample;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::data::SampleView;
use crate::error::{Error, Result};
use crate::rng::{mix, rng_from_seed, Rng};
use crate::svm::{self, Branch, Problem, SvmModel, SvmParams};

pub use impurity::{entropy, entropy_from_counts, gain_from_counts, information_gain};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MulticlassStrategy {
    Ovo,
    Ovr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Splitter {
    /// Highest gain, ties to the lowest candidate index.
    Best,
    /// Uniform among candidates with positive gain.
    Random,
}

/// How many features each tree may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum MaxFeatures {
    #[default]
    All,
    Count(usize),
}

impl MaxFeatures {
    pub fn resolve(self, n_features: usize) -> usize {
        match self {
            MaxFeatures::All => n_features,
            MaxFeatures::Count(k) => k.min(n_features),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StreeParams {
    pub svm: SvmParams,
    pub multiclass_strategy: MulticlassStrategy,
    /// `None` grows until another stopping rule fires.
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
    pub splitter: Splitter,
    pub max_features: MaxFeatures,
    /// A node becomes a leaf once its majority class reaches this proportion.
    pub purity_threshold: f64,
    pub seed: u64,
}

impl Default for StreeParams {
    fn default() -> Self {
        Self {
            svm: SvmParams::default(),
            multiclass_strategy: MulticlassStrategy::Ovo,
            max_depth: None,
            min_samples_split: 2,
            splitter: Splitter::Random,
            max_features: MaxFeatures::All,
            purity_threshold: 1.0,
            seed: 0,
        }
    }
}

impl StreeParams {
    pub fn validate(&self) -> Result<()> {
        self.svm.validate()?;
        if self.min_samples_split < 2 {
            return Err(Error::InvalidParameter("min_samples_split must be >= 2".into()));
        }
        if let MaxFeatures::Count(0) = self.max_features {
            return Err(Error::InvalidParameter("max_features must be >= 1".into()));
        }
        if !(self.purity_threshold > 0.0 && self.purity_threshold <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "purity threshold must be in (0, 1], got {}",
                self.purity_threshold
            )));
        }
        Ok(())
    }
}

/// A tree node. Child `pos` receives rows with `f(x) ≥ 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TreeNode {
    Leaf {
        label: usize,
        counts: Vec<usize>,
    },
    Internal {
        ig: f64,
        model: SvmModel,
        feature_subset: Vec<usize>,
        pos: Box<TreeNode>,
        neg: Box<TreeNode>,
    },
}

impl TreeNode {
    pub fn leaf(counts: Vec<usize>) -> Self {
        TreeNode::Leaf {
            label: mode(&counts),
            counts,
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, TreeNode::Leaf { .. })
    }

    /// Depth of the deepest leaf; a lone leaf has depth 0.
    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Internal { pos, neg, .. } => 1 + pos.depth().max(neg.depth()),
        }
    }
}

/// Index of the largest count, ties to the lowest index.
pub fn mode(counts: &[usize]) -> usize {
    let mut best = 0;
    for (i, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = i;
        }
    }
    best
}

/// One binary sub-problem at a node. Rows of `positive` get `+1`; rows of
/// `negative` get `-1`, or every other label when `negative` is `None`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Candidate {
    pub positive: usize,
    pub negative: Option<usize>,
}

/// Binary problems for the labels present at a node, in enumeration order.
///
/// `present` must be in vocabulary order. Two labels always yield a single
/// candidate with the first label positive.
pub fn enumerate_candidates(present: &[usize], strategy: MulticlassStrategy) -> Result<Vec<Candidate>> {
    if present.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least two labels to split, found {}",
            present.len()
        )));
    }
    if present.len() == 2 {
        return Ok(vec![Candidate {
            positive: present[0],
            negative: Some(present[1]),
        }]);
    }
    Ok(match strategy {
        MulticlassStrategy::Ovo => present
            .iter()
            .enumerate()
            .flat_map(|(a, &ca)| {
                present[a + 1..].iter().map(move |&cb| Candidate {
                    positive: ca,
                    negative: Some(cb),
                })
            })
            .collect(),
        MulticlassStrategy::Ovr => present
            .iter()
            .map(|&c| Candidate {
                positive: c,
                negative: None,
            })
            .collect(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CandidateScore {
    pub index: usize,
    pub ig: f64,
    pub pos_size: usize,
    pub neg_size: usize,
}

/// A trained candidate and the partition of the node's rows it induces.
/// Partitions hold positions within the view.
#[derive(Debug, Clone)]
pub struct CandidateEval {
    pub model: SvmModel,
    pub score: CandidateScore,
    pub pos: Vec<usize>,
    pub neg: Vec<usize>,
}

fn project<'a>(x: &'a [f64], subset: &[usize], full: bool) -> std::borrow::Cow<'a, [f64]> {
    if full {
        std::borrow::Cow::Borrowed(x)
    } else {
        std::borrow::Cow::Owned(subset.iter().map(|&j| x[j]).collect())
    }
}

fn is_full_subset(subset: &[usize], n: usize) -> bool {
    subset.len() == n
}

/// Trains one candidate SVM and scores its partition of the whole view.
///
/// One-vs-one candidates train on their two labels only; the resulting
/// hyperplane still routes rows of every other label.
pub fn evaluate_candidate(
    view: &SampleView,
    index: usize,
    candidate: Candidate,
    feature_subset: &[usize],
    svm_params: &SvmParams,
) -> Result<CandidateEval> {
    let n = view.dataset().n_features();
    let full = is_full_subset(feature_subset, n);
    let dim = feature_subset.len();
    let mut x = Vec::with_capacity(view.len() * dim);
    let mut y = Vec::with_capacity(view.len());
    for i in 0..view.len() {
        let label = view.label(i);
        let target = if label == candidate.positive {
            1.0
        } else {
            match candidate.negative {
                Some(neg) if neg != label => continue,
                _ => -1.0,
            }
        };
        x.extend_from_slice(&project(view.row(i), feature_subset, full));
        y.push(target);
    }
    let problem = Problem::from_flat(x, dim, y)?;
    let model = svm::train(&problem, svm_params)?;

    let k = view.dataset().n_classes();
    let mut parent_counts = vec![0usize; k];
    let mut pos_counts = vec![0usize; k];
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for i in 0..view.len() {
        let label = view.label(i);
        parent_counts[label] += 1;
        let f = model.decision_value_unchecked(&project(view.row(i), feature_subset, full));
        match Branch::of(f) {
            Branch::Positive => {
                pos_counts[label] += 1;
                pos.push(i);
            }
            Branch::Negative => neg.push(i),
        }
    }
    let ig = gain_from_counts(&parent_counts, &pos_counts);
    Ok(CandidateEval {
        model,
        score: CandidateScore {
            index,
            ig,
            pos_size: pos.len(),
            neg_size: neg.len(),
        },
        pos,
        neg,
    })
}

/// Picks the split among scored candidates.
pub fn select_split(gains: &[f64], splitter: Splitter, rng: &mut Rng) -> usize {
    let best = gains
        .iter()
        .enumerate()
        .fold(0, |best, (i, &g)| if g > gains[best] { i } else { best });
    match splitter {
        Splitter::Best => best,
        Splitter::Random => {
            let positive: Vec<usize> = (0..gains.len()).filter(|&i| gains[i] > 0.0).collect();
            if positive.is_empty() {
                best
            } else {
                positive[rng.random_range(0..positive.len())]
            }
        }
    }
}

/// What happened at one node while growing a tree.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeRecord {
    pub depth: usize,
    pub rows: usize,
    pub labels_present: usize,
    pub svms_trained: usize,
    pub scores: Vec<CandidateScore>,
    pub chosen: Option<usize>,
}

/// Grows one tree, optionally recording per-node decisions.
pub struct TreeBuilder<'p> {
    params: &'p StreeParams,
    next_node: u64,
    svms_trained: usize,
    trace: Option<Vec<NodeRecord>>,
}

const FEATURE_STREAM: u64 = u64::MAX;
const SPLITTER_STREAM: u64 = u64::MAX - 1;

impl<'p> TreeBuilder<'p> {
    pub fn new(params: &'p StreeParams) -> Self {
        Self {
            params,
            next_node: 0,
            svms_trained: 0,
            trace: None,
        }
    }

    pub fn with_trace(mut self) -> Self {
        self.trace = Some(Vec::new());
        self
    }

    pub fn svms_trained(&self) -> usize {
        self.svms_trained
    }

    pub fn trace(&self) -> Option<&[NodeRecord]> {
        self.trace.as_deref()
    }

    /// Feature columns the tree may use, drawn once per tree.
    pub fn feature_subset(&self, n_features: usize) -> Vec<usize> {
        let k = self.params.max_features.resolve(n_features);
        if k >= n_features {
            return (0..n_features).collect();
        }
        let mut rng = rng_from_seed(mix(self.params.seed, FEATURE_STREAM));
        let mut subset = sample(&mut rng, n_features, k).into_vec();
        subset.sort_unstable();
        subset
    }

    pub fn build(&mut self, view: &SampleView) -> Result<TreeNode> {
        self.params.validate()?;
        if view.is_empty() {
            return Err(Error::Empty("cannot grow a tree on an empty sample".into()));
        }
        let subset = self.feature_subset(view.dataset().n_features());
        self.grow(view, &subset, 0)
    }

    fn record(&mut self, rec: NodeRecord) {
        if let Some(trace) = self.trace.as_mut() {
            trace.push(rec);
        }
    }

    fn grow(&mut self, view: &SampleView, subset: &[usize], depth: usize) -> Result<TreeNode> {
        let node_seed = mix(self.params.seed, self.next_node);
        self.next_node += 1;

        let counts = view.class_counts();
        let t = view.len();
        let majority = counts.iter().copied().max().unwrap_or(0);
        let present: Vec<usize> = (0..counts.len()).filter(|&l| counts[l] > 0).collect();
        let mut record = NodeRecord {
            depth,
            rows: t,
            labels_present: present.len(),
            svms_trained: 0,
            scores: Vec::new(),
            chosen: None,
        };

        let pure = present.len() < 2 || majority as f64 >= self.params.purity_threshold * t as f64;
        let too_deep = self.params.max_depth.is_some_and(|d| depth >= d);
        if pure || too_deep || t < self.params.min_samples_split {
            self.record(record);
            return Ok(TreeNode::leaf(counts));
        }

        let candidates = enumerate_candidates(&present, self.params.multiclass_strategy)?;
        let mut evals = Vec::with_capacity(candidates.len());
        for (j, &cand) in candidates.iter().enumerate() {
            let svm_params = SvmParams {
                seed: mix(node_seed, j as u64),
                ..self.params.svm.clone()
            };
            evals.push(evaluate_candidate(view, j, cand, subset, &svm_params)?);
            self.svms_trained += 1;
            record.svms_trained += 1;
        }
        let gains: Vec<f64> = evals.iter().map(|e| e.score.ig).collect();
        record.scores = evals.iter().map(|e| e.score.clone()).collect();

        let mut rng = rng_from_seed(mix(node_seed, SPLITTER_STREAM));
        let chosen = select_split(&gains, self.params.splitter, &mut rng);
        let eval = evals.swap_remove(chosen);
        if eval.score.ig.is_nan() || eval.score.ig <= 0.0 || eval.pos.is_empty() || eval.neg.is_empty() {
            self.record(record);
            return Ok(TreeNode::leaf(counts));
        }
        record.chosen = Some(chosen);
        self.record(record);

        let rows = view.indices();
        let pos_view = SampleView::new(view.dataset(), eval.pos.iter().map(|&i| rows[i]).collect())?;
        let neg_view = SampleView::new(view.dataset(), eval.neg.iter().map(|&i| rows[i]).collect())?;
        let pos = self.grow(&pos_view, subset, depth + 1)?;
        let neg = self.grow(&neg_view, subset, depth + 1)?;
        Ok(TreeNode::Internal {
            ig: eval.score.ig,
            model: eval.model,
            feature_subset: subset.to_vec(),
            pos: Box::new(pos),
            neg: Box::new(neg),
        })
    }
}

/// Grows a tree on `view`.
pub fn build(view: &SampleView, params: &StreeParams) -> Result<TreeNode> {
    TreeBuilder::new(params).build(view)
}

/// Routes `x` to a leaf and returns its label.
pub fn predict_tree(root: &TreeNode, x: &[f64]) -> Result<usize> {
    let mut node = root;
    loop {
        match node {
            TreeNode::Leaf { label, .. } => return Ok(*label),
            TreeNode::Internal {
                model,
                feature_subset,
                pos,
                neg,
                ..
            } => {
                if let Some(&last) = feature_subset.last() {
                    if last >= x.len() {
                        return Err(Error::DimensionMismatch {
                            expected: last + 1,
                            actual: x.len(),
                        });
                    }
                }
                let full = feature_subset.len() == x.len();
                let f = model.decision_value(&project(x, feature_subset, full))?;
                node = match Branch::of(f) {
                    Branch::Positive => pos,
                    Branch::Negative => neg,
                };
            }
        }
    }
}

/// Total number of nodes, leaves included.
pub fn node_count(root: &TreeNode) -> usize {
    match root {
        TreeNode::Leaf { .. } => 1,
        TreeNode::Internal { pos, neg, .. } => 1 + node_count(pos) + node_count(neg),
    }
}
