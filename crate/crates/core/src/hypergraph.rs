//! Weighted, incidence-simple hypergraphs.
//!
//! Each incidence `(v, e)` carries a nonzero real weight `ω(v, e)`; absent
//! incidences have weight zero. From the weights we build
//!
//! ```text
//! H[i][k] = ω(v_i, e_k)                        incidence
//! M       = diag(m_i),  m_i = Σ_e ω(v_i, e)²   magnitude
//! A[i][j] = -Σ_e ω(v_i, e) ω(v_j, e),  i ≠ j   adjacency (A[i][i] = 0)
//! K       = M - A = H Hᵀ                       Kirchhoff Laplacian
//! C       = M^{-1/2} A M^{-1/2}                normalized adjacency
//! L       = I - C = M^{-1/2} K M^{-1/2}        normalized Laplacian
//! ```
//!
//! Matrices are dense. Edges keep insertion order.

use nalgebra::DMatrix;

use crate::error::HypergraphError;

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedHypergraph {
    n_vertices: usize,
    /// Per edge: `(vertex, weight)` sorted by vertex.
    edges: Vec<Vec<(usize, f64)>>,
}

/// Degree, size, magnitude and effect statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct HypergraphStats {
    pub degrees: Vec<usize>,
    pub edge_sizes: Vec<usize>,
    pub magnitudes: Vec<f64>,
    pub effects: Vec<f64>,
    /// Maximum vertex degree (Δ).
    pub max_degree: usize,
    /// Maximum edge size (∇).
    pub max_edge_size: usize,
}

impl WeightedHypergraph {
    /// A hypergraph with `n_vertices` vertices and no edges.
    pub fn new(n_vertices: usize) -> Self {
        Self {
            n_vertices,
            edges: Vec::new(),
        }
    }

    /// Appends an edge with the given incidences and returns its index.
    /// An edge with no incidences is allowed.
    pub fn add_edge<I>(&mut self, incidences: I) -> Result<usize, HypergraphError>
    where
        I: IntoIterator<Item = (usize, f64)>,
    {
        let edge = self.edges.len();
        let mut members: Vec<(usize, f64)> = Vec::new();
        for (vertex, weight) in incidences {
            if vertex >= self.n_vertices {
                return Err(HypergraphError::VertexOutOfRange {
                    index: vertex,
                    len: self.n_vertices,
                });
            }
            if weight == 0.0 || !weight.is_finite() {
                return Err(HypergraphError::InvalidWeight { vertex, edge });
            }
            if members.iter().any(|&(v, _)| v == vertex) {
                return Err(HypergraphError::DuplicateIncidence { vertex, edge });
            }
            members.push((vertex, weight));
        }
        members.sort_by_key(|&(v, _)| v);
        self.edges.push(members);
        Ok(edge)
    }

    /// Builds a hypergraph from a dense incidence matrix (rows = vertices,
    /// columns = edges); zero entries are non-incidences.
    pub fn from_incidence_matrix(h: &DMatrix<f64>) -> Result<Self, HypergraphError> {
        let mut g = Self::new(h.nrows());
        for k in 0..h.ncols() {
            let col = h.column(k);
            g.add_edge(
                col.iter()
                    .enumerate()
                    .filter(|(_, &w)| w != 0.0)
                    .map(|(i, &w)| (i, w)),
            )?;
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.n_vertices
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Incidences of edge `k` as `(vertex, weight)` sorted by vertex.
    pub fn edge(&self, k: usize) -> &[(usize, f64)] {
        &self.edges[k]
    }

    pub fn edges(&self) -> impl Iterator<Item = &[(usize, f64)]> {
        self.edges.iter().map(Vec::as_slice)
    }

    /// `ω(v, e)`, zero when `v` is not incident to `e`.
    pub fn weight(&self, vertex: usize, edge: usize) -> f64 {
        self.edges
            .get(edge)
            .and_then(|members| members.iter().find(|&&(v, _)| v == vertex))
            .map_or(0.0, |&(_, w)| w)
    }

    pub fn stats(&self) -> HypergraphStats {
        let mut degrees = vec![0usize; self.n_vertices];
        let mut magnitudes = vec![0.0; self.n_vertices];
        let mut edge_sizes = Vec::with_capacity(self.edges.len());
        let mut effects = Vec::with_capacity(self.edges.len());
        for members in &self.edges {
            edge_sizes.push(members.len());
            effects.push(members.iter().map(|&(_, w)| w * w).sum());
            for &(v, w) in members {
                degrees[v] += 1;
                magnitudes[v] += w * w;
            }
        }
        HypergraphStats {
            max_degree: degrees.iter().copied().max().unwrap_or(0),
            max_edge_size: edge_sizes.iter().copied().max().unwrap_or(0),
            degrees,
            edge_sizes,
            magnitudes,
            effects,
        }
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        let mut m = vec![0.0; self.n_vertices];
        for members in &self.edges {
            for &(v, w) in members {
                m[v] += w * w;
            }
        }
        m
    }

    /// `1/√m_i` per vertex, or the first vertex with zero magnitude.
    pub fn inv_sqrt_magnitudes(&self) -> Result<Vec<f64>, HypergraphError> {
        self.magnitudes()
            .into_iter()
            .enumerate()
            .map(|(i, m)| {
                if m > 0.0 {
                    Ok(1.0 / m.sqrt())
                } else {
                    Err(HypergraphError::ZeroMagnitude(i))
                }
            })
            .collect()
    }

    pub fn incidence_matrix(&self) -> DMatrix<f64> {
        let mut h = DMatrix::zeros(self.n_vertices, self.edges.len());
        for (k, members) in self.edges.iter().enumerate() {
            for &(v, w) in members {
                h[(v, k)] = w;
            }
        }
        h
    }

    pub fn magnitude_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_vec(self.magnitudes()))
    }

    /// Off-diagonal entries accumulate `-ω_i ω_j` over shared edges only, so
    /// vertex pairs with no common edge stay exactly zero, as does the
    /// diagonal.
    pub fn adjacency_matrix(&self) -> DMatrix<f64> {
        let n = self.n_vertices;
        let mut a = DMatrix::zeros(n, n);
        for members in &self.edges {
            for (x, &(i, wi)) in members.iter().enumerate() {
                for &(j, wj) in &members[x + 1..] {
                    let z = -wi * wj;
                    a[(i, j)] += z;
                    a[(j, i)] += z;
                }
            }
        }
        a
    }

    /// `M - A`. Equal to `H Hᵀ` up to rounding.
    pub fn kirchhoff_laplacian(&self) -> DMatrix<f64> {
        let mut k = -self.adjacency_matrix();
        for (i, m) in self.magnitudes().into_iter().enumerate() {
            k[(i, i)] = m;
        }
        k
    }

    pub fn normalized_adjacency(&self) -> Result<DMatrix<f64>, HypergraphError> {
        let s = self.inv_sqrt_magnitudes()?;
        let mut c = self.adjacency_matrix();
        for j in 0..self.n_vertices {
            for i in 0..self.n_vertices {
                if i != j {
                    c[(i, j)] *= s[i] * s[j];
                }
            }
        }
        Ok(c)
    }

    /// `I - C`, with the diagonal set to exactly 1.
    pub fn normalized_laplacian(&self) -> Result<DMatrix<f64>, HypergraphError> {
        let mut l = -self.normalized_adjacency()?;
        l.fill_diagonal(1.0);
        Ok(l)
    }
}
