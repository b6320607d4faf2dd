//! Flat, string-keyed hyperparameter set shared by the CLI flags and the
//! grid search. Unset entries fall back to the library defaults.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::ensemble::OdteParams;
use crate::error::{Error, Result};
use crate::stree::{MaxFeatures, MulticlassStrategy, Splitter, StreeParams};
use crate::svm::{KernelSpec, SvmParams};

pub const DEFAULT_DEGREE: u32 = 3;
pub const DEFAULT_COEF0: f64 = 0.0;

/// Accepted keys, in the order they are documented.
pub const KEYS: [&str; 15] = [
    "C",
    "kernel",
    "gamma",
    "degree",
    "coef0",
    "strategy",
    "splitter",
    "max_depth",
    "max_iter",
    "tol",
    "min_samples_split",
    "n_trees",
    "max_features",
    "bootstrap_size",
    "purity_threshold",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelKind {
    Linear,
    Poly,
    Rbf,
}

impl std::str::FromStr for KernelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Self::Linear),
            "poly" | "polynomial" => Ok(Self::Poly),
            "rbf" => Ok(Self::Rbf),
            _ => Err(Error::InvalidParameter(format!("unknown kernel {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Hyperparameters {
    #[serde(rename = "C", skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel: Option<KernelKind>,
    /// Defaults to `1 / n_features` for the poly and rbf kernels.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coef0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strategy: Option<MulticlassStrategy>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub splitter: Option<Splitter>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_depth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_samples_split: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_trees: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_features: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bootstrap_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub purity_threshold: Option<f64>,
}

fn parse<T: serde::de::DeserializeOwned>(key: &str, value: Value) -> Result<T> {
    // accept numbers written as strings, as they arrive from the command line
    let value = match value {
        Value::String(s) => serde_json::from_str(&s).unwrap_or(Value::String(s)),
        v => v,
    };
    serde_json::from_value(value.clone())
        .map_err(|_| Error::InvalidParameter(format!("bad value {value} for {key}")))
}

/// Normalizes `--max-depth`, `max-depth` and `max_depth` to `max_depth`.
pub fn normalize_key(key: &str) -> String {
    let k = key.trim_start_matches('-').replace('-', "_");
    if k.eq_ignore_ascii_case("c") {
        "C".to_string()
    } else {
        k
    }
}

impl Hyperparameters {
    /// Sets one entry; `null` clears it.
    pub fn set(&mut self, key: &str, value: Value) -> Result<()> {
        let key = normalize_key(key);
        let value = if value.is_null() { None } else { Some(value) };
        macro_rules! assign {
            ($field:ident) => {
                self.$field = value.map(|v| parse(&key, v)).transpose()?
            };
        }
        match key.as_str() {
            "C" => assign!(c),
            "kernel" => {
                self.kernel = value
                    .map(|v| match v {
                        Value::String(s) => s.parse(),
                        v => Err(Error::InvalidParameter(format!("bad value {v} for kernel"))),
                    })
                    .transpose()?
            }
            "gamma" => assign!(gamma),
            "degree" => assign!(degree),
            "coef0" => assign!(coef0),
            "strategy" | "multiclass_strategy" => assign!(strategy),
            "splitter" => assign!(splitter),
            "max_depth" => assign!(max_depth),
            "max_iter" => assign!(max_iter),
            "tol" => assign!(tol),
            "min_samples_split" => assign!(min_samples_split),
            "n_trees" | "n_estimators" => assign!(n_trees),
            "max_features" => assign!(max_features),
            "bootstrap_size" | "max_samples" => assign!(bootstrap_size),
            "purity_threshold" => assign!(purity_threshold),
            _ => return Err(Error::InvalidParameter(format!("unknown hyperparameter {key:?}"))),
        }
        Ok(())
    }

    /// Entries of `other` that are set override ours.
    pub fn merged(&self, other: &Hyperparameters) -> Result<Hyperparameters> {
        let mut out = self.clone();
        let Value::Object(map) = serde_json::to_value(other).map_err(|e| Error::InvalidParameter(e.to_string()))?
        else {
            unreachable!("struct serializes to an object")
        };
        for (k, v) in map {
            out.set(&k, v)?;
        }
        Ok(out)
    }

    pub fn kernel_spec(&self, n_features: usize) -> KernelSpec {
        let gamma = self.gamma.unwrap_or(1.0 / n_features.max(1) as f64);
        match self.kernel.unwrap_or(KernelKind::Linear) {
            KernelKind::Linear => KernelSpec::Linear,
            KernelKind::Poly => KernelSpec::Polynomial {
                gamma,
                degree: self.degree.unwrap_or(DEFAULT_DEGREE),
                coef0: self.coef0.unwrap_or(DEFAULT_COEF0),
            },
            KernelKind::Rbf => KernelSpec::Rbf { gamma },
        }
    }

    /// Validated ensemble parameters for data with `n_features` columns.
    pub fn to_odte(&self, n_features: usize, seed: u64) -> Result<OdteParams> {
        let svm_default = SvmParams::default();
        let tree_default = StreeParams::default();
        let odte_default = OdteParams::default();
        let max_features = match self.max_features {
            None => MaxFeatures::All,
            Some(k) => MaxFeatures::Count(k),
        };
        let params = OdteParams {
            n_trees: self.n_trees.unwrap_or(odte_default.n_trees),
            base: StreeParams {
                svm: SvmParams {
                    c: self.c.unwrap_or(svm_default.c),
                    kernel: self.kernel_spec(n_features),
                    max_iter: self.max_iter.unwrap_or(svm_default.max_iter),
                    tol: self.tol,
                    seed: 0,
                },
                multiclass_strategy: self.strategy.unwrap_or(tree_default.multiclass_strategy),
                max_depth: self.max_depth,
                min_samples_split: self.min_samples_split.unwrap_or(tree_default.min_samples_split),
                splitter: self.splitter.unwrap_or(tree_default.splitter),
                max_features,
                purity_threshold: self.purity_threshold.unwrap_or(tree_default.purity_threshold),
                seed: 0,
            },
            bootstrap_size: self.bootstrap_size,
            max_features,
            bootstrap: true,
            seed,
        };
        params.validate()?;
        Ok(params)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn defaults_match_library() {
        let p = Hyperparameters::default().to_odte(4, 7).unwrap();
        let d = OdteParams {
            seed: 7,
            ..OdteParams::default()
        };
        assert_eq!(p, d);
    }

    #[test]
    fn set_and_convert() {
        let mut h = Hyperparameters::default();
        h.set("--C", json!(0.5)).unwrap();
        h.set("kernel", json!("rbf")).unwrap();
        h.set("max-depth", json!("3")).unwrap();
        h.set("splitter", json!("best")).unwrap();
        let p = h.to_odte(4, 0).unwrap();
        assert_eq!(p.base.svm.c, 0.5);
        assert_eq!(p.base.svm.kernel, KernelSpec::Rbf { gamma: 0.25 });
        assert_eq!(p.base.max_depth, Some(3));
        assert_eq!(p.base.splitter, Splitter::Best);
    }

    #[test]
    fn rejects_bad_input() {
        let mut h = Hyperparameters::default();
        assert!(h.set("nope", json!(1)).is_err());
        assert!(h.set("kernel", json!("sigmoid")).is_err());
        assert!(h.set("max_depth", json!(-1)).is_err());
        h.set("C", json!(-1.0)).unwrap();
        assert!(h.to_odte(2, 0).is_err());
    }

    #[test]
    fn merge_overrides() {
        let mut a = Hyperparameters::default();
        a.set("C", json!(2.0)).unwrap();
        a.set("n_trees", json!(5)).unwrap();
        let mut b = Hyperparameters::default();
        b.set("C", json!(0.1)).unwrap();
        let m = a.merged(&b).unwrap();
        assert_eq!(m.c, Some(0.1));
        assert_eq!(m.n_trees, Some(5));
    }
}
