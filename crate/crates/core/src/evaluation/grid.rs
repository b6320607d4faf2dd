//! Exhaustive hyperparameter search.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::{normalize_key, Hyperparameters};
use crate::data::Dataset;
use crate::ensemble::OdteParams;
use crate::error::{Error, Result};

use super::{cross_validate, CvConfig};

/// Ordered list of `(key, candidate values)`.
///
/// Configurations are visited lexicographically: the first key varies
/// slowest, the last key fastest.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ParamGrid(pub Vec<(String, Vec<Value>)>);

impl ParamGrid {
    /// Reads a JSON object of `key → [values]`, keeping the key order.
    /// A scalar is treated as a one-element list.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| Error::InvalidParameter(format!("grid: {e}")))?;
        let Value::Object(map) = value else {
            return Err(Error::InvalidParameter("grid must be a JSON object".into()));
        };
        let entries = map
            .into_iter()
            .map(|(k, v)| match v {
                Value::Array(vs) => (normalize_key(&k), vs),
                v => (normalize_key(&k), vec![v]),
            })
            .collect();
        Ok(Self(entries))
    }

    pub fn validate(&self) -> Result<()> {
        if self.0.is_empty() {
            return Err(Error::InvalidParameter("empty grid".into()));
        }
        if let Some((k, _)) = self.0.iter().find(|(_, vs)| vs.is_empty()) {
            return Err(Error::InvalidParameter(format!("no values for {k:?}")));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|(_, vs)| vs.len()).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Every configuration, in visiting order.
    pub fn assignments(&self) -> Vec<Vec<(String, Value)>> {
        let mut out = vec![Vec::new()];
        for (key, values) in &self.0 {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    values.iter().map(move |v| {
                        let mut a = prefix.clone();
                        a.push((key.clone(), v.clone()));
                        a
                    })
                })
                .collect();
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridEntry {
    pub assignment: Vec<(String, Value)>,
    pub mean: f64,
    pub std: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridResult {
    /// Position of the winner in `table`.
    pub best_index: usize,
    pub best: Hyperparameters,
    pub best_params: OdteParams,
    pub table: Vec<GridEntry>,
}

/// Scores every configuration with `score`, returning the table and the
/// index of the best mean; ties go to the earliest configuration.
pub fn grid_search_by<F>(grid: &ParamGrid, mut score: F) -> Result<(usize, Vec<GridEntry>)>
where
    F: FnMut(&[(String, Value)]) -> Result<(f64, f64)>,
{
    grid.validate()?;
    let mut table = Vec::with_capacity(grid.len());
    let mut best = 0;
    for assignment in grid.assignments() {
        let (mean, std) = score(&assignment)?;
        if mean > table.get(best).map_or(f64::NEG_INFINITY, |e: &GridEntry| e.mean) {
            best = table.len();
        }
        table.push(GridEntry { assignment, mean, std });
    }
    Ok((best, table))
}

/// Grid search over ODTE hyperparameters by inner cross-validation.
///
/// Each configuration overrides `base` and is scored with the same
/// `inner` folds, so differences come from the parameters alone.
pub fn grid_search(
    dataset: &Dataset,
    grid: &ParamGrid,
    base: &Hyperparameters,
    inner: &CvConfig,
    seed: u64,
) -> Result<GridResult> {
    let resolve = |assignment: &[(String, Value)]| -> Result<Hyperparameters> {
        let mut h = base.clone();
        for (k, v) in assignment {
            h.set(k, v.clone())?;
        }
        Ok(h)
    };
    // validate every configuration before spending time on any of them
    grid.validate()?;
    for a in grid.assignments() {
        resolve(&a)?.to_odte(dataset.n_features(), seed)?;
    }
    let (best_index, table) = grid_search_by(grid, |a| {
        let params = resolve(a)?.to_odte(dataset.n_features(), seed)?;
        let report = cross_validate(dataset, "", &params, inner)?;
        Ok((report.mean, report.std))
    })?;
    let best = resolve(&table[best_index].assignment)?;
    let best_params = best.to_odte(dataset.n_features(), seed)?;
    Ok(GridResult {
        best_index,
        best,
        best_params,
        table,
    })
}
