//! The JSON model file:
//!
//! ```json
//! { "version": "1",
//!   "vertices": ["v1", "v2"],
//!   "edges": [{ "from": "v1", "to": "v2", "beta": 2.0 }],
//!   "sigma": { "v1": 1.0, "v2": 1.0 } }
//! ```

use std::collections::{BTreeMap, HashMap};

use bnspect_core::{GraphError, LinearBn, WeightedDag};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub const MODEL_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub version: String,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeRecord>,
    pub sigma: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub from: String,
    pub to: String,
    pub beta: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelFileError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("version: unsupported model version {0:?} (expected \"1\")")]
    Version(String),
    #[error("vertices: model has no vertices")]
    NoVertices,
    #[error("vertices[{index}]: duplicate label {label:?}")]
    DuplicateLabel { index: usize, label: String },
    #[error("{field}: unknown vertex {label:?}")]
    UnknownVertex { field: String, label: String },
    #[error("edges[{index}].beta: weight must be finite and nonzero, got {value}")]
    InvalidBeta { index: usize, value: f64 },
    #[error("edges[{index}]: {source}")]
    Edge { index: usize, source: GraphError },
    #[error("sigma: missing noise scale for vertex {0:?}")]
    MissingSigma(String),
    #[error("sigma.{label}: noise scale must be positive and finite, got {value}")]
    InvalidSigma { label: String, value: f64 },
    #[error("edges: {0}")]
    Graph(GraphError),
}

impl ModelFile {
    pub fn from_bn(bn: &LinearBn) -> Self {
        let labels = bn.dag().labels();
        Self {
            version: MODEL_VERSION.to_string(),
            vertices: labels.to_vec(),
            edges: bn
                .dag()
                .edges()
                .map(|(from, to, beta)| EdgeRecord {
                    from: labels[from].clone(),
                    to: labels[to].clone(),
                    beta,
                })
                .collect(),
            sigma: labels
                .iter()
                .cloned()
                .zip(bn.sigma().iter().copied())
                .collect(),
        }
    }

    pub fn to_bn(&self) -> Result<LinearBn, ModelFileError> {
        if self.version != MODEL_VERSION {
            return Err(ModelFileError::Version(self.version.clone()));
        }
        if self.vertices.is_empty() {
            return Err(ModelFileError::NoVertices);
        }
        let mut index: HashMap<&str, usize> = HashMap::new();
        for (i, label) in self.vertices.iter().enumerate() {
            if index.insert(label.as_str(), i).is_some() {
                return Err(ModelFileError::DuplicateLabel {
                    index: i,
                    label: label.clone(),
                });
            }
        }
        let lookup = |field: String, label: &str| {
            index
                .get(label)
                .copied()
                .ok_or_else(|| ModelFileError::UnknownVertex {
                    field,
                    label: label.to_string(),
                })
        };

        let mut edges = Vec::with_capacity(self.edges.len());
        let mut seen = HashMap::new();
        for (k, e) in self.edges.iter().enumerate() {
            let from = lookup(format!("edges[{k}].from"), &e.from)?;
            let to = lookup(format!("edges[{k}].to"), &e.to)?;
            if e.beta == 0.0 || !e.beta.is_finite() {
                return Err(ModelFileError::InvalidBeta {
                    index: k,
                    value: e.beta,
                });
            }
            if from == to {
                return Err(ModelFileError::Edge {
                    index: k,
                    source: GraphError::SelfLoop(from),
                });
            }
            if seen.insert((from, to), k).is_some() {
                return Err(ModelFileError::Edge {
                    index: k,
                    source: GraphError::DuplicateEdge { from, to },
                });
            }
            edges.push((from, to, e.beta));
        }

        for label in self.sigma.keys() {
            lookup(format!("sigma.{label}"), label)?;
        }
        let sigma = self
            .vertices
            .iter()
            .map(|label| {
                let value = *self
                    .sigma
                    .get(label)
                    .ok_or_else(|| ModelFileError::MissingSigma(label.clone()))?;
                if value > 0.0 && value.is_finite() {
                    Ok(value)
                } else {
                    Err(ModelFileError::InvalidSigma {
                        label: label.clone(),
                        value,
                    })
                }
            })
            .collect::<Result<Vec<_>, _>>()?;

        let dag = WeightedDag::new(self.vertices.clone(), edges).map_err(ModelFileError::Graph)?;
        Ok(LinearBn::new(dag, sigma).expect("sigma validated above"))
    }
}

/// Parses and validates a model file.
pub fn parse_model(text: &str) -> Result<LinearBn, ModelFileError> {
    let file: ModelFile = serde_json::from_str(text).map_err(|e| ModelFileError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    file.to_bn()
}

/// Pretty-printed model file with a trailing newline. Floats use the
/// shortest representation that parses back to the same value.
pub fn serialize_model(bn: &LinearBn) -> String {
    let mut text = serde_json::to_string_pretty(&ModelFile::from_bn(bn))
        .expect("model files contain only finite numbers and strings");
    text.push('\n');
    text
}

/// Hex SHA-256 of the serialized model.
pub fn model_digest(bn: &LinearBn) -> String {
    sha256_hex(serialize_model(bn).as_bytes())
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}
