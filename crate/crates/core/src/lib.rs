//! Spectral analysis of linear Bayesian networks through their structural
//! hypergraphs.
//!
//! A linear Bayesian network `X = Aᵀ X + ε` over a weighted DAG induces a
//! weighted hypergraph with one edge per vertex (the vertex plus its parents).
//! The Kirchhoff Laplacian of that hypergraph equals the precision matrix of
//! `X`, and its normalized Laplacian equals the normalized precision `Ω`.
//! The spectrum of `Ω` then tells whether the moral graph is a tree:
//!
//! * a tree moral graph forces `λ₁(Ω) ≤ 2`;
//! * a tree moral graph makes the spectrum of `Ω` symmetric about 1, and
//!   under generic (faithful) weights only a tree does.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`graph`] | weighted DAGs, moral graphs, forest and bipartite checks |
//! | [`hypergraph`] | weighted hypergraphs and their six matrices |
//! | [`linear_bn`] | networks, structural hypergraphs, covariance/precision, assumption checks |
//! | [`spectral`] | eigenvalues, Rayleigh quotients, tree tests |
//! | [`random`] | seeded generators, sampling, empirical precision |

pub mod error;
pub mod graph;
pub mod hypergraph;
pub mod linear_bn;
pub mod random;
pub mod spectral;

pub use error::{BnError, GraphError, HypergraphError, ModelError, SpectralError};
pub use graph::{is_acyclic, Bipartition, UndirectedGraph, WeightedDag};
pub use hypergraph::{HypergraphStats, WeightedHypergraph};
pub use linear_bn::{LinearBn, PrecisionPair, Theorem1Residuals};
pub use spectral::{Criterion, Spectrum, SymmetryCheck, TreeTestVerdict};

/// Default tolerance for verdicts on exact (model-derived) matrices.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Largest absolute entry of a matrix; 0 for empty matrices.
pub fn max_abs(m: &nalgebra::DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}
