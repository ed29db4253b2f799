//! Seeded generators for DAGs and linear Bayesian networks, a sampler for
//! `X = (I - Aᵀ)^{-1} ε`, and empirical estimation of `Ω`.
//!
//! Every generator draws a random topological order first and only adds
//! edges that point forward in it, so no rejection step is needed. A
//! [`ChaCha8Rng`] seeded from the 64-bit seed owns all randomness; the same
//! configuration always produces bit-identical output.

use nalgebra::DMatrix;
use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::ModelError;
use crate::graph::WeightedDag;
use crate::linear_bn::{normalize_unit_diagonal, LinearBn};

/// Probability that a vertex (other than the first in the order) becomes a
/// root in [`random_forest_bn`].
pub const FOREST_ROOT_PROBABILITY: f64 = 0.25;

/// Distribution of edge weights.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightDist {
    /// Uniform on `[-hi, -lo] ∪ [lo, hi]`, `0 < lo ≤ hi`.
    Uniform { lo: f64, hi: f64 },
    /// Uniform over a fixed set of values. Intended for adversarial tests
    /// where exact cancellations are wanted.
    Discrete(Vec<f64>),
}

impl Default for WeightDist {
    fn default() -> Self {
        WeightDist::Uniform { lo: 0.3, hi: 2.0 }
    }
}

impl WeightDist {
    fn validate(&self) -> Result<(), ModelError> {
        match *self {
            WeightDist::Uniform { lo, hi } if !(lo > 0.0 && lo <= hi && hi.is_finite()) => {
                Err(ModelError::WeightSupport { lo, hi })
            }
            WeightDist::Discrete(ref values)
                if values.is_empty() || values.iter().any(|v| *v == 0.0 || !v.is_finite()) =>
            {
                Err(ModelError::WeightSupport { lo: 0.0, hi: 0.0 })
            }
            _ => Ok(()),
        }
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        match self {
            WeightDist::Uniform { lo, hi } => {
                let magnitude = if lo == hi {
                    *lo
                } else {
                    rng.random_range(*lo..*hi)
                };
                if rng.random_bool(0.5) {
                    magnitude
                } else {
                    -magnitude
                }
            }
            WeightDist::Discrete(values) => values[rng.random_range(0..values.len())],
        }
    }
}

/// Uniform distribution of noise scales on `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaDist {
    pub lo: f64,
    pub hi: f64,
}

impl Default for SigmaDist {
    fn default() -> Self {
        SigmaDist { lo: 0.5, hi: 2.0 }
    }
}

impl SigmaDist {
    fn validate(&self) -> Result<(), ModelError> {
        if self.lo > 0.0 && self.lo <= self.hi && self.hi.is_finite() {
            Ok(())
        } else {
            Err(ModelError::SigmaRange {
                lo: self.lo,
                hi: self.hi,
            })
        }
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        if self.lo == self.hi {
            self.lo
        } else {
            rng.random_range(self.lo..self.hi)
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Distributions {
    pub weights: WeightDist,
    pub sigma: SigmaDist,
}

/// How edges are placed along the random topological order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Structure {
    /// Each forward pair independently with this probability.
    EdgeProbability(f64),
    /// Vertex at position `t` gets a uniform number of parents in
    /// `0..=min(K, t)`, chosen uniformly among earlier vertices.
    MaxIndegree(usize),
    /// At most one parent per vertex.
    Forest,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    pub n: usize,
    pub structure: Structure,
    pub distributions: Distributions,
    pub seed: u64,
}

impl GeneratorConfig {
    pub fn new(n: usize, structure: Structure, seed: u64) -> Self {
        Self {
            n,
            structure,
            distributions: Distributions::default(),
            seed,
        }
    }

    fn validate(&self) -> Result<(), ModelError> {
        if self.n == 0 {
            return Err(ModelError::NoVertices);
        }
        if let Structure::EdgeProbability(p) = self.structure {
            if !(0.0..=1.0).contains(&p) {
                return Err(ModelError::EdgeProbability(p));
            }
        }
        self.distributions.weights.validate()?;
        self.distributions.sigma.validate()
    }
}

fn generate(config: &GeneratorConfig) -> Result<LinearBn, ModelError> {
    config.validate()?;
    let n = config.n;
    let dists = &config.distributions;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);

    let mut edges = Vec::new();
    for t in 1..n {
        let child = order[t];
        let parent_positions: Vec<usize> = match config.structure {
            Structure::EdgeProbability(p) => (0..t).filter(|_| rng.random_bool(p)).collect(),
            Structure::MaxIndegree(k) => {
                let count = rng.random_range(0..=k.min(t));
                let mut picked = index::sample(&mut rng, t, count).into_vec();
                picked.sort_unstable();
                picked
            }
            Structure::Forest => {
                if rng.random_bool(FOREST_ROOT_PROBABILITY) {
                    Vec::new()
                } else {
                    vec![rng.random_range(0..t)]
                }
            }
        };
        for pos in parent_positions {
            edges.push((order[pos], child, dists.weights.sample(&mut rng)));
        }
    }
    let sigma = (0..n).map(|_| dists.sigma.sample(&mut rng)).collect();
    let dag = WeightedDag::unlabeled(n, edges)?;
    Ok(LinearBn::new(dag, sigma)?)
}

/// The DAG part of [`random_bn`].
pub fn random_dag(config: &GeneratorConfig) -> Result<WeightedDag, ModelError> {
    Ok(generate(config)?.dag().clone())
}

pub fn random_bn(config: &GeneratorConfig) -> Result<LinearBn, ModelError> {
    generate(config)
}

/// Every vertex is a root or the child of one uniformly chosen earlier
/// vertex, so the moral graph is a forest.
pub fn random_forest_bn(
    n: usize,
    seed: u64,
    distributions: &Distributions,
) -> Result<LinearBn, ModelError> {
    generate(&GeneratorConfig {
        n,
        structure: Structure::Forest,
        distributions: distributions.clone(),
        seed,
    })
}

pub fn random_bounded_indegree_bn(
    n: usize,
    max_indegree: usize,
    seed: u64,
    distributions: &Distributions,
) -> Result<LinearBn, ModelError> {
    generate(&GeneratorConfig {
        n,
        structure: Structure::MaxIndegree(max_indegree),
        distributions: distributions.clone(),
        seed,
    })
}

/// Noise law used by [`sample_data`]; both have mean 0 and standard
/// deviation `σ_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Noise {
    #[default]
    Gaussian,
    /// Uniform on `[-σ√3, σ√3]`.
    Uniform,
}

/// Observations in rows, variables in columns (in vertex order).
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    labels: Vec<String>,
    values: DMatrix<f64>,
}

impl DataMatrix {
    /// Panics if the label count differs from the column count.
    pub fn new(labels: Vec<String>, values: DMatrix<f64>) -> Self {
        assert_eq!(labels.len(), values.ncols(), "one label per column");
        Self { labels, values }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn rows(&self) -> usize {
        self.values.nrows()
    }

    pub fn cols(&self) -> usize {
        self.values.ncols()
    }

    /// Unbiased sample covariance; `None` with fewer than two rows.
    pub fn sample_covariance(&self) -> Option<DMatrix<f64>> {
        let rows = self.rows();
        if rows < 2 {
            return None;
        }
        let means = self.values.row_mean();
        let mut centered = self.values.clone();
        for mut row in centered.row_iter_mut() {
            row -= &means;
        }
        Some(centered.tr_mul(&centered) / (rows as f64 - 1.0))
    }
}

/// Draws `rows` independent observations of the network.
pub fn sample_data(bn: &LinearBn, rows: usize, seed: u64, noise: Noise) -> DataMatrix {
    let p = bn.len();
    let dag = bn.dag();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = DMatrix::<f64>::zeros(rows, p);
    let mut x = vec![0.0; p];
    for r in 0..rows {
        for &j in dag.topological_order() {
            let z: f64 = match noise {
                Noise::Gaussian => StandardNormal.sample(&mut rng),
                Noise::Uniform => rng.random_range(-3f64.sqrt()..3f64.sqrt()),
            };
            let parents = dag.weighted_parents(j).expect("j is in range");
            x[j] = parents.iter().map(|&(i, beta)| beta * x[i]).sum::<f64>() + bn.sigma()[j] * z;
        }
        for (j, v) in x.iter().enumerate() {
            values[(r, j)] = *v;
        }
    }
    DataMatrix::new(bn.dag().labels().to_vec(), values)
}

/// Smallest squared Cholesky pivot of the sample correlation matrix accepted
/// as nonsingular.
const MIN_CORRELATION_PIVOT: f64 = 1e-12;

/// `Ω̂ = diag(S⁻¹)^{-1/2} S⁻¹ diag(S⁻¹)^{-1/2}` for the unbiased sample
/// covariance `S`. The normalization is invariant to rescaling columns, so
/// the inverse is taken of the sample correlation matrix.
pub fn empirical_normalized_precision(data: &DataMatrix) -> Result<DMatrix<f64>, ModelError> {
    let p = data.cols();
    if data.rows() <= p {
        return Err(ModelError::SingularCovariance);
    }
    let s = data
        .sample_covariance()
        .ok_or(ModelError::SingularCovariance)?;
    let sd: Vec<f64> = s.diagonal().iter().map(|v| v.sqrt()).collect();
    if sd.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(ModelError::SingularCovariance);
    }
    let corr = DMatrix::from_fn(p, p, |i, j| {
        if i == j {
            1.0
        } else {
            s[(i, j)] / (sd[i] * sd[j])
        }
    });
    let chol = corr.cholesky().ok_or(ModelError::SingularCovariance)?;
    if chol
        .l_dirty()
        .diagonal()
        .iter()
        .any(|d| d * d < MIN_CORRELATION_PIVOT)
    {
        return Err(ModelError::SingularCovariance);
    }
    let inv = chol.inverse();
    let inv = (&inv + inv.transpose()) * 0.5;
    Ok(normalize_unit_diagonal(&inv))
}
