//! Datasets, CSV ingestion and seeded sampling.

use std::collections::HashMap;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::rng_from_seed;

/// An immutable feature matrix with encoded labels.
///
/// Features are stored row-major. Labels are indices into `vocabulary`,
/// whose order (first appearance in the source file) drives every
/// downstream tie-break.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    features: Vec<f64>,
    n_rows: usize,
    n_features: usize,
    labels: Vec<usize>,
    vocabulary: Vec<String>,
    feature_names: Vec<String>,
}

impl Dataset {
    /// Builds a dataset from rows of features and encoded labels.
    ///
    /// Subsets of a larger dataset may leave some vocabulary entries unused,
    /// so that is not checked here.
    pub fn new(
        rows: Vec<Vec<f64>>,
        labels: Vec<usize>,
        vocabulary: Vec<String>,
        feature_names: Option<Vec<String>>,
    ) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Empty("dataset has no rows".into()));
        }
        let n_features = rows[0].len();
        if n_features == 0 {
            return Err(Error::Empty("dataset has no feature columns".into()));
        }
        if vocabulary.is_empty() {
            return Err(Error::Empty("label vocabulary is empty".into()));
        }
        if labels.len() != rows.len() {
            return Err(Error::DimensionMismatch {
                expected: rows.len(),
                actual: labels.len(),
            });
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= vocabulary.len()) {
            return Err(Error::InvalidParameter(format!(
                "label index {bad} outside vocabulary of size {}",
                vocabulary.len()
            )));
        }
        let mut features = Vec::with_capacity(rows.len() * n_features);
        for row in &rows {
            if row.len() != n_features {
                return Err(Error::DimensionMismatch {
                    expected: n_features,
                    actual: row.len(),
                });
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite);
            }
            features.extend_from_slice(row);
        }
        let feature_names = match feature_names {
            Some(names) if names.len() == n_features => names,
            Some(names) => {
                return Err(Error::DimensionMismatch {
                    expected: n_features,
                    actual: names.len(),
                })
            }
            None => (0..n_features).map(|j| format!("x{j}")).collect(),
        };
        Ok(Self {
            features,
            n_rows: rows.len(),
            n_features,
            labels,
            vocabulary,
            feature_names,
        })
    }

    /// Builds a dataset from label names, encoding them in first-appearance order.
    pub fn from_named_labels<S: AsRef<str>>(rows: Vec<Vec<f64>>, names: &[S]) -> Result<Self> {
        let mut vocabulary: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let labels = names
            .iter()
            .map(|name| {
                let name = name.as_ref();
                *index.entry(name.to_string()).or_insert_with(|| {
                    vocabulary.push(name.to_string());
                    vocabulary.len() - 1
                })
            })
            .collect();
        Self::new(rows, labels, vocabulary, None)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn n_classes(&self) -> usize {
        self.vocabulary.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.features[i * self.n_features..(i + 1) * self.n_features]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> {
        self.features.chunks_exact(self.n_features)
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    pub fn vocabulary(&self) -> &[String] {
        &self.vocabulary
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    /// View over every row, in order.
    pub fn full_view(&self) -> SampleView<'_> {
        SampleView {
            dataset: self,
            rows: (0..self.n_rows).collect(),
        }
    }

    /// View over the given rows. Duplicates are allowed.
    pub fn view(&self, rows: Vec<usize>) -> Result<SampleView<'_>> {
        SampleView::new(self, rows)
    }

    /// Copies the listed rows into a new dataset with the same vocabulary.
    pub fn select(&self, rows: &[usize]) -> Result<Dataset> {
        if rows.is_empty() {
            return Err(Error::Empty("row selection is empty".into()));
        }
        let mut features = Vec::with_capacity(rows.len() * self.n_features);
        let mut labels = Vec::with_capacity(rows.len());
        for &r in rows {
            if r >= self.n_rows {
                return Err(Error::InvalidParameter(format!("row index {r} out of range")));
            }
            features.extend_from_slice(self.row(r));
            labels.push(self.labels[r]);
        }
        Ok(Dataset {
            features,
            n_rows: rows.len(),
            n_features: self.n_features,
            labels,
            vocabulary: self.vocabulary.clone(),
            feature_names: self.feature_names.clone(),
        })
    }
}

/// A (possibly repeating) selection of rows from a dataset.
#[derive(Debug, Clone)]
pub struct SampleView<'a> {
    dataset: &'a Dataset,
    rows: Vec<usize>,
}

impl<'a> SampleView<'a> {
    pub fn new(dataset: &'a Dataset, rows: Vec<usize>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Empty("sample view has no rows".into()));
        }
        if let Some(&r) = rows.iter().find(|&&r| r >= dataset.n_rows) {
            return Err(Error::InvalidParameter(format!("row index {r} out of range")));
        }
        Ok(Self { dataset, rows })
    }

    pub fn dataset(&self) -> &'a Dataset {
        self.dataset
    }

    pub fn indices(&self) -> &[usize] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Features of the `i`-th row of the view.
    pub fn row(&self, i: usize) -> &'a [f64] {
        self.dataset.row(self.rows[i])
    }

    pub fn label(&self, i: usize) -> usize {
        self.dataset.labels[self.rows[i]]
    }

    pub fn labels(&self) -> Vec<usize> {
        self.rows.iter().map(|&r| self.dataset.labels[r]).collect()
    }

    /// Per-class counts indexed by vocabulary position.
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.dataset.n_classes()];
        for &r in &self.rows {
            counts[self.dataset.labels[r]] += 1;
        }
        counts
    }

    /// Labels present in the view, in vocabulary order.
    pub fn present_labels(&self) -> Vec<usize> {
        self.class_counts()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(l, _)| l)
            .collect()
    }

    pub fn materialize(&self) -> Dataset {
        // rows are validated at construction
        self.dataset.select(&self.rows).expect("valid view")
    }
}

/// Which CSV column holds the class label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelColumn {
    Last,
    Name(String),
    Index(usize),
}

impl std::str::FromStr for LabelColumn {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(if s == "last" {
            LabelColumn::Last
        } else {
            LabelColumn::Name(s.to_string())
        })
    }
}

/// Raw string cells of a CSV file.
#[derive(Debug, Clone)]
pub struct RawTable {
    pub header: Option<Vec<String>>,
    pub rows: Vec<Vec<String>>,
    pub width: usize,
}

impl RawTable {
    pub fn read(path: &Path, has_header: bool) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_reader(file, has_header)
    }

    pub fn from_reader<R: std::io::Read>(reader: R, has_header: bool) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(has_header)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let header = if has_header {
            let h = rdr.headers().map_err(|e| csv_error(e, 0))?;
            if h.is_empty() {
                None
            } else {
                Some(h.iter().map(str::to_string).collect::<Vec<_>>())
            }
        } else {
            None
        };
        let mut rows = Vec::new();
        let mut width = header.as_ref().map_or(0, Vec::len);
        for (i, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| csv_error(e, i + 1))?;
            // skip fully blank lines
            if record.len() == 1 && record[0].is_empty() {
                continue;
            }
            if width == 0 {
                width = record.len();
            }
            if record.len() != width {
                return Err(Error::Parse {
                    row: i + 1,
                    column: record.len().min(width) + 1,
                    message: format!("expected {width} fields, found {}", record.len()),
                });
            }
            rows.push(record.iter().map(str::to_string).collect());
        }
        Ok(Self {
            header,
            rows,
            width,
        })
    }

    pub fn resolve_label_column(&self, label: &LabelColumn) -> Result<usize> {
        if self.width == 0 {
            return Err(Error::Empty("file has no columns".into()));
        }
        match label {
            LabelColumn::Last => Ok(self.width - 1),
            LabelColumn::Index(i) if *i < self.width => Ok(*i),
            LabelColumn::Index(i) => Err(Error::LabelColumn(i.to_string())),
            LabelColumn::Name(name) => self
                .header
                .as_ref()
                .and_then(|h| h.iter().position(|c| c == name))
                .or_else(|| {
                    // headerless files may name the column by position
                    name.parse::<usize>().ok().filter(|&i| i < self.width)
                })
                .ok_or_else(|| Error::LabelColumn(name.clone())),
        }
    }

    /// Parses every column except `skip` as a feature. Rows are 1-based in errors.
    pub fn feature_rows(&self, skip: Option<usize>) -> Result<Vec<Vec<f64>>> {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(j, _)| Some(*j) != skip)
                    .map(|(j, cell)| parse_cell(cell, i + 1, j + 1))
                    .collect()
            })
            .collect()
    }

    pub fn into_dataset(self, label: &LabelColumn) -> Result<Dataset> {
        if self.rows.is_empty() {
            return Err(Error::Empty("file has no data rows".into()));
        }
        let label_col = self.resolve_label_column(label)?;
        if self.width < 2 {
            return Err(Error::Empty("file has no feature columns".into()));
        }
        let features = self.feature_rows(Some(label_col))?;
        let mut names = Vec::with_capacity(self.rows.len());
        for (i, row) in self.rows.iter().enumerate() {
            let cell = &row[label_col];
            if cell.is_empty() {
                return Err(Error::MissingValue {
                    row: i + 1,
                    column: label_col + 1,
                });
            }
            names.push(cell.as_str());
        }
        let mut ds = Dataset::from_named_labels(features, &names)?;
        if let Some(header) = &self.header {
            ds.feature_names = header
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != label_col)
                .map(|(_, h)| h.clone())
                .collect();
        }
        Ok(ds)
    }
}

fn parse_cell(cell: &str, row: usize, column: usize) -> Result<f64> {
    if cell.is_empty() || cell == "?" {
        return Err(Error::MissingValue { row, column });
    }
    match cell.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::NonNumeric {
            row,
            column,
            value: cell.to_string(),
        }),
    }
}

fn csv_error(e: csv::Error, row: usize) -> Error {
    let row = e.position().map_or(row, |p| p.record() as usize);
    Error::Parse {
        row,
        column: 0,
        message: e.to_string(),
    }
}

/// Loads a CSV file. Feature columns must be numeric and complete.
pub fn load_csv(path: &Path, label: &LabelColumn, has_header: bool) -> Result<Dataset> {
    RawTable::read(path, has_header)?.into_dataset(label)
}

/// Per-feature affine scaling fitted on a training sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl Standardizer {
    /// Population mean and standard deviation of each feature over `train`.
    pub fn fit(train: &SampleView) -> Self {
        let n = train.dataset().n_features();
        let t = train.len() as f64;
        let mut mean = vec![0.0; n];
        for i in 0..train.len() {
            for (m, v) in mean.iter_mut().zip(train.row(i)) {
                *m += v;
            }
        }
        mean.iter_mut().for_each(|m| *m /= t);
        let mut var = vec![0.0; n];
        for i in 0..train.len() {
            for ((s, v), m) in var.iter_mut().zip(train.row(i)).zip(&mean) {
                *s += (v - m) * (v - m);
            }
        }
        let std = var.into_iter().map(|s| (s / t).sqrt()).collect();
        Self { mean, std }
    }

    /// Applies `(x - mean) / std`; zero-variance features pass through unchanged.
    pub fn transform_row(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .zip(self.mean.iter().zip(&self.std))
            .map(|(&x, (&m, &s))| if s > 0.0 { (x - m) / s } else { x })
            .collect()
    }

    pub fn transform(&self, view: &SampleView) -> Dataset {
        let mut ds = view.materialize();
        let n = ds.n_features;
        for chunk in ds.features.chunks_exact_mut(n) {
            let scaled = self.transform_row(chunk);
            chunk.copy_from_slice(&scaled);
        }
        ds
    }
}

/// Fits a [`Standardizer`] on `train` and applies it to `train` followed by `others`.
pub fn standardize(train: &SampleView, others: &[&SampleView]) -> (Standardizer, Vec<Dataset>) {
    let scaler = Standardizer::fit(train);
    let mut out = Vec::with_capacity(others.len() + 1);
    out.push(scaler.transform(train));
    out.extend(others.iter().map(|v| scaler.transform(v)));
    (scaler, out)
}

/// Draws `size` rows uniformly with replacement.
pub fn bootstrap(dataset: &Dataset, size: usize, seed: u64) -> Result<SampleView<'_>> {
    if size == 0 {
        return Err(Error::InvalidParameter("bootstrap size must be >= 1".into()));
    }
    let mut rng = rng_from_seed(seed);
    let m = dataset.n_rows();
    let rows = (0..size).map(|_| rng.random_range(0..m)).collect();
    SampleView::new(dataset, rows)
}

/// One train/test split of a cross-validation run.
#[derive(Debug, Clone)]
pub struct Fold<'a> {
    pub train: SampleView<'a>,
    pub test: SampleView<'a>,
}

/// Stratified k-fold split.
///
/// Each class's rows are shuffled and dealt round-robin across folds, with
/// the starting fold carried over from class to class so that fold sizes
/// stay balanced as well. Classes with fewer members than `folds` are spread
/// best-effort. Index lists inside each view are ascending.
pub fn stratified_kfold(dataset: &Dataset, folds: usize, seed: u64) -> Result<Vec<Fold<'_>>> {
    let m = dataset.n_rows();
    if folds < 2 {
        return Err(Error::InvalidParameter("folds must be >= 2".into()));
    }
    if folds > m {
        return Err(Error::InvalidParameter(format!(
            "{folds} folds requested for {m} rows"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); dataset.n_classes()];
    for (i, &l) in dataset.labels().iter().enumerate() {
        by_class[l].push(i);
    }
    let mut assignment = vec![0usize; m];
    let mut next = 0usize;
    for members in &mut by_class {
        members.shuffle(&mut rng);
        for &r in members.iter() {
            assignment[r] = next;
            next = (next + 1) % folds;
        }
    }
    (0..folds)
        .map(|f| {
            let (test, train): (Vec<usize>, Vec<usize>) = (0..m).partition(|&r| assignment[r] == f);
            Ok(Fold {
                train: SampleView::new(dataset, train)?,
                test: SampleView::new(dataset, test)?,
            })
        })
        .collect()
}
