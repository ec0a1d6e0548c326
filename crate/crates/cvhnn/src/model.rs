use std::fs;
use std::path::Path;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::activation::ActivationSpec;
use crate::complex::ComplexValue;
use crate::error::{Error, Result};
use crate::state::ComplexPair;
use crate::weights::{self, HermitianReport, WeightMatrix};

/// A complex-valued Hopfield network: weights, thresholds and activation.
///
/// On disk a model is a JSON document
///
/// ```json
/// {
///   "n": 2,
///   "activation": {"kind": "csign", "K": 4, "Q": 1, "R": 1.0, "boundary_epsilon": 0.0},
///   "weights": [[[0.0, 0.0], [0.0, 1.0]], [[0.0, -1.0], [0.0, 0.0]]],
///   "thresholds": [[0.0, 0.0], [0.0, 0.0]]
/// }
/// ```
///
/// with complex numbers written as `[re, im]` and weights stored row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelFile", into = "ModelFile")]
pub struct NetworkModel {
    weights: WeightMatrix,
    thresholds: Vec<ComplexValue>,
    activation: ActivationSpec,
}

impl NetworkModel {
    pub fn new(weights: WeightMatrix, thresholds: Vec<ComplexValue>, activation: ActivationSpec) -> Result<Self> {
        let (rows, cols) = weights.dim();
        if rows != cols {
            return Err(Error::Dimension {
                expected: rows,
                found: cols,
            });
        }
        if thresholds.len() != rows {
            return Err(Error::Dimension {
                expected: rows,
                found: thresholds.len(),
            });
        }
        if rows == 0 {
            return Err(Error::InvalidConfig("a network needs at least one neuron".into()));
        }
        Ok(NetworkModel {
            weights,
            thresholds,
            activation,
        })
    }

    /// Model with all thresholds zero.
    pub fn with_zero_thresholds(weights: WeightMatrix, activation: ActivationSpec) -> Result<Self> {
        let n = weights.nrows();
        Self::new(weights, vec![ComplexValue::new(0.0, 0.0); n], activation)
    }

    pub fn n(&self) -> usize {
        self.thresholds.len()
    }

    pub fn weights(&self) -> &WeightMatrix {
        &self.weights
    }

    pub fn thresholds(&self) -> &[ComplexValue] {
        &self.thresholds
    }

    pub fn activation(&self) -> &ActivationSpec {
        &self.activation
    }

    /// Same weights and thresholds under another activation.
    pub fn with_activation(mut self, activation: ActivationSpec) -> Self {
        self.activation = activation;
        self
    }

    pub fn validate_hermitian(&self) -> HermitianReport {
        weights::validate(self.weights.view()).expect("weights are square by construction")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut text = self.to_json()?;
        text.push('\n');
        Ok(fs::write(path, text)?)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    n: usize,
    activation: ActivationSpec,
    weights: Vec<Vec<ComplexPair>>,
    thresholds: Vec<ComplexPair>,
}

impl TryFrom<ModelFile> for NetworkModel {
    type Error = Error;

    fn try_from(file: ModelFile) -> Result<Self> {
        let n = file.n;
        if file.weights.len() != n {
            return Err(Error::Dimension {
                expected: n,
                found: file.weights.len(),
            });
        }
        if let Some(row) = file.weights.iter().find(|row| row.len() != n) {
            return Err(Error::Dimension {
                expected: n,
                found: row.len(),
            });
        }
        let flat: Vec<ComplexValue> = file.weights.into_iter().flatten().map(Into::into).collect();
        let weights = Array2::from_shape_vec((n, n), flat).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        let thresholds = file.thresholds.into_iter().map(Into::into).collect();
        NetworkModel::new(weights, thresholds, file.activation)
    }
}

impl From<NetworkModel> for ModelFile {
    fn from(model: NetworkModel) -> Self {
        ModelFile {
            n: model.n(),
            activation: model.activation,
            weights: model
                .weights
                .rows()
                .into_iter()
                .map(|row| row.iter().map(|&z| z.into()).collect())
                .collect(),
            thresholds: model.thresholds.into_iter().map(Into::into).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{random_hermitian, WeightGenConfig};

    #[test]
    fn json_round_trip_is_exact() {
        let w = random_hermitian(&WeightGenConfig { n: 7, seed: 3 });
        let model = NetworkModel::with_zero_thresholds(w, ActivationSpec::cosign(3, 2.0, 4).unwrap()).unwrap();
        let text = model.to_json().unwrap();
        let back = NetworkModel::from_json(&text).unwrap();
        assert_eq!(back, model);
        assert_eq!(back.validate_hermitian().max_violation, 0.0);
        assert_eq!(back.to_json().unwrap(), text);
    }

    #[test]
    fn documented_example_parses() {
        let text = r#"{
          "n": 2,
          "activation": {"kind": "csign", "K": 4, "Q": 1, "R": 1.0, "boundary_epsilon": 0.0},
          "weights": [[[0.0, 0.0], [0.0, 1.0]], [[0.0, -1.0], [0.0, 0.0]]],
          "thresholds": [[0.0, 0.0], [0.0, 0.0]]
        }"#;
        let model = NetworkModel::from_json(text).unwrap();
        assert_eq!(model.n(), 2);
        assert_eq!(model.weights()[[0, 1]], ComplexValue::new(0.0, 1.0));
        assert!(model.validate_hermitian().passes());
    }

    #[test]
    fn dimension_errors() {
        let text = r#"{"n": 2, "activation": {"kind": "split-sign", "K": 1, "Q": 1, "R": 1.0},
            "weights": [[[0.0, 0.0], [1.0, 0.0]]], "thresholds": [[0.0, 0.0], [0.0, 0.0]]}"#;
        assert!(NetworkModel::from_json(text).is_err());
        let text = r#"{"n": 1, "activation": {"kind": "split-sign", "K": 1, "Q": 1, "R": 1.0},
            "weights": [[[0.0, 0.0]]], "thresholds": []}"#;
        assert!(NetworkModel::from_json(text).is_err());
        assert!(NetworkModel::from_json(r#"{"n": 1"#).is_err());
    }
}
