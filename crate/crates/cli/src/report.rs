//! Analysis reports for a model (exact `Ω`) or a data set (estimated `Ω̂`).
//!
//! Reports are JSON. Every float is written in scientific notation with 17
//! significant digits so identical inputs give byte-identical output.

use bnspect_core::spectral::{
    symmetric_eigenvalues, symmetry_about, tree_test_lambda, tree_test_symmetry,
};
use bnspect_core::{LinearBn, SpectralError, TreeTestVerdict};
use nalgebra::DMatrix;
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;
use serde_json::value::RawValue;

use crate::model::model_digest;

/// `{:.16e}`, i.e. 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn raw(x: f64) -> Box<RawValue> {
    assert!(x.is_finite(), "report values are finite");
    RawValue::from_string(fmt17(x)).expect("scientific notation is valid JSON")
}

fn ser_f64<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    raw(*x).serialize(s)
}

fn ser_vec_f64<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&raw(*x))?;
    }
    seq.end()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub criterion: &'static str,
    pub passed: bool,
    #[serde(serialize_with = "ser_f64")]
    pub statistic: f64,
    #[serde(serialize_with = "ser_f64")]
    pub threshold: f64,
    pub reading: &'static str,
}

impl From<TreeTestVerdict> for Verdict {
    fn from(v: TreeTestVerdict) -> Self {
        Self {
            criterion: v.criterion.as_str(),
            passed: v.passed,
            statistic: v.statistic,
            threshold: v.threshold,
            reading: v.describe(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem1Section {
    #[serde(serialize_with = "ser_f64")]
    pub precision_residual_abs: f64,
    #[serde(serialize_with = "ser_f64")]
    pub precision_residual_rel: f64,
    #[serde(serialize_with = "ser_f64")]
    pub normalized_residual: f64,
    pub passed: bool,
}

/// Structure-dependent fields; absent for reports built from data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelSection {
    /// ∇ of the structural hypergraph (max edge size).
    pub max_edge_size_st: usize,
    /// Δ of the structural hypergraph (max vertex degree).
    pub max_degree_st: usize,
    pub max_indegree: usize,
    pub moral_graph_is_forest: bool,
    pub theorem1: Theorem1Section,
    pub assumption1_violations: Vec<[String; 2]>,
    pub assumption2_max_power: usize,
    pub assumption2_violations: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdicts {
    pub theorem2: Verdict,
    pub theorem3: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub source: &'static str,
    pub digest: String,
    #[serde(serialize_with = "ser_f64")]
    pub tol: f64,
    pub vertices: Vec<String>,
    #[serde(serialize_with = "ser_vec_f64")]
    pub eigenvalues: Vec<f64>,
    #[serde(serialize_with = "ser_f64")]
    pub lambda1: f64,
    #[serde(serialize_with = "ser_f64")]
    pub symmetry_residual: f64,
    /// `null` when built from data: structure and assumptions are not observable.
    pub model: Option<ModelSection>,
    pub verdicts: Verdicts,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

fn spectral_part(
    omega: &DMatrix<f64>,
    tol: f64,
) -> Result<(Vec<f64>, f64, f64, Verdicts), SpectralError> {
    let spectrum = symmetric_eigenvalues(omega)?;
    let lambda1 = spectrum.largest().unwrap_or(0.0);
    let residual = symmetry_about(&spectrum, 1.0, tol).max_residual;
    let verdicts = Verdicts {
        theorem2: tree_test_lambda(omega, tol)?.into(),
        theorem3: tree_test_symmetry(omega, tol)?.into(),
    };
    Ok((spectrum.eigenvalues().to_vec(), lambda1, residual, verdicts))
}

/// Full report for a model. Pure function of `(bn, tol)`.
pub fn analyze_model(bn: &LinearBn, tol: f64) -> AnalysisReport {
    let omega = bn.precision().normalized_precision;
    let (eigenvalues, lambda1, symmetry_residual, verdicts) =
        spectral_part(&omega, tol).expect("model Ω is symmetric with unit diagonal");
    let dag = bn.dag();
    let labels = dag.labels();
    let stats = bn.structural_hypergraph().stats();
    let t1 = bn.verify_theorem1(tol);
    let s_max = bn.default_assumption2_power();
    let model = ModelSection {
        max_edge_size_st: stats.max_edge_size,
        max_degree_st: stats.max_degree,
        max_indegree: dag.max_indegree(),
        moral_graph_is_forest: dag.moralize().is_forest(),
        theorem1: Theorem1Section {
            precision_residual_abs: t1.precision_abs,
            precision_residual_rel: t1.precision_rel,
            normalized_residual: t1.normalized_abs,
            passed: t1.passed,
        },
        assumption1_violations: bn
            .check_assumption1(tol)
            .into_iter()
            .map(|(i, j)| [labels[i].clone(), labels[j].clone()])
            .collect(),
        assumption2_max_power: s_max,
        assumption2_violations: bn
            .check_assumption2(s_max, tol)
            .expect("default power is odd"),
    };
    AnalysisReport {
        source: "model",
        digest: model_digest(bn),
        tol,
        vertices: labels.to_vec(),
        eigenvalues,
        lambda1,
        symmetry_residual,
        model: Some(model),
        verdicts,
    }
}

/// Report on an estimated `Ω̂`; structural fields are left out.
pub fn analyze_estimate(
    omega_hat: &DMatrix<f64>,
    labels: Vec<String>,
    digest: String,
    tol: f64,
) -> Result<AnalysisReport, SpectralError> {
    let (eigenvalues, lambda1, symmetry_residual, verdicts) = spectral_part(omega_hat, tol)?;
    Ok(AnalysisReport {
        source: "data",
        digest,
        tol,
        vertices: labels,
        eigenvalues,
        lambda1,
        symmetry_residual,
        model: None,
        verdicts,
    })
}
