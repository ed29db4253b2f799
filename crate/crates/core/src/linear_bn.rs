//! Linear Bayesian networks `X = Aᵀ X + ε` and their structural hypergraphs.

use nalgebra::{DMatrix, DVector};

use crate::error::BnError;
use crate::graph::WeightedDag;
use crate::hypergraph::WeightedHypergraph;
use crate::max_abs;

/// A weighted DAG with an independent noise term of scale `σ_i > 0` per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearBn {
    dag: WeightedDag,
    sigma: Vec<f64>,
}

/// Precision matrix `Σ⁻¹` and its normalization
/// `Ω = diag(Σ⁻¹)^{-1/2} Σ⁻¹ diag(Σ⁻¹)^{-1/2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecisionPair {
    pub precision: DMatrix<f64>,
    pub normalized_precision: DMatrix<f64>,
}

/// Entrywise residuals between the precision matrices and the Laplacians of
/// the structural hypergraph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem1Residuals {
    /// `max |Σ⁻¹ - K|`.
    pub precision_abs: f64,
    /// `precision_abs / max |K|` (or `precision_abs` when `K = 0`).
    pub precision_rel: f64,
    /// `max |Ω - L|`.
    pub normalized_abs: f64,
    pub tol: f64,
    pub passed: bool,
}

impl LinearBn {
    pub fn new(dag: WeightedDag, sigma: Vec<f64>) -> Result<Self, BnError> {
        if sigma.len() != dag.len() {
            return Err(BnError::SigmaLength {
                expected: dag.len(),
                got: sigma.len(),
            });
        }
        if let Some((vertex, &value)) = sigma
            .iter()
            .enumerate()
            .find(|(_, s)| !(s.is_finite() && **s > 0.0))
        {
            return Err(BnError::InvalidSigma { vertex, value });
        }
        Ok(Self { dag, sigma })
    }

    pub fn dag(&self) -> &WeightedDag {
        &self.dag
    }

    pub fn sigma(&self) -> &[f64] {
        &self.sigma
    }

    pub fn len(&self) -> usize {
        self.dag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dag.is_empty()
    }

    /// One edge per vertex `k`: `{v_k} ∪ pa(v_k)` with weight `1/σ_k` on
    /// `v_k` and `-β_ik/σ_k` on each parent `v_i`. Edge `k` is indexed by
    /// vertex `k`.
    pub fn structural_hypergraph(&self) -> WeightedHypergraph {
        let mut h = WeightedHypergraph::new(self.len());
        for k in 0..self.len() {
            let s = self.sigma[k];
            let parents = self.dag.weighted_parents(k).expect("k is in range");
            let incidences = std::iter::once((k, 1.0 / s))
                .chain(parents.iter().map(|&(i, beta)| (i, -beta / s)));
            h.add_edge(incidences)
                .expect("DAG weights are nonzero and finite, sigma positive");
        }
        h
    }

    /// `(I - A)^{-1}`, filled row by row in reverse topological order using
    /// `T_i = e_i + Σ_{j ∈ ch(i)} β_ij T_j`.
    fn total_effects(&self) -> DMatrix<f64> {
        let n = self.len();
        let mut t = DMatrix::<f64>::identity(n, n);
        for &i in self.dag.topological_order().iter().rev() {
            let children = self.dag.children(i).expect("i is in range");
            for j in children {
                let beta = self.dag.weight(i, j).expect("edge exists");
                let row_j = t.row(j).clone_owned();
                let mut row_i = t.row_mut(i);
                row_i += row_j * beta;
            }
        }
        t
    }

    /// `Σ = (I - Aᵀ)^{-1} Σ_ε (I - A)^{-1}`.
    pub fn covariance(&self) -> DMatrix<f64> {
        let t = self.total_effects();
        let noise = DMatrix::from_diagonal(&DVector::from_iterator(
            self.len(),
            self.sigma.iter().map(|s| s * s),
        ));
        let sigma = t.transpose() * noise * &t;
        symmetrize(sigma)
    }

    /// `Σ⁻¹ = (I - A) Σ_ε⁻¹ (I - Aᵀ)` by direct product, plus its
    /// normalization. Never inverts `Σ`.
    pub fn precision(&self) -> PrecisionPair {
        let n = self.len();
        let i_minus_a = DMatrix::<f64>::identity(n, n) - self.dag.adjacency_matrix();
        let inv_noise = DMatrix::from_diagonal(&DVector::from_iterator(
            n,
            self.sigma.iter().map(|s| 1.0 / (s * s)),
        ));
        let precision = symmetrize(&i_minus_a * inv_noise * i_minus_a.transpose());
        let normalized_precision = normalize_unit_diagonal(&precision);
        PrecisionPair {
            precision,
            normalized_precision,
        }
    }

    /// Compares `Σ⁻¹` against `K(G_ST)` (relative to `max |K|`) and `Ω`
    /// against `L(G_ST)` (absolute).
    pub fn verify_theorem1(&self, tol: f64) -> Theorem1Residuals {
        let pair = self.precision();
        let h = self.structural_hypergraph();
        let k = h.kirchhoff_laplacian();
        let l = h
            .normalized_laplacian()
            .expect("structural hypergraph magnitudes are at least 1/σ²");
        let precision_abs = max_abs(&(&pair.precision - &k));
        let scale = max_abs(&k);
        let precision_rel = if scale > 0.0 {
            precision_abs / scale
        } else {
            precision_abs
        };
        let normalized_abs = max_abs(&(&pair.normalized_precision - &l));
        Theorem1Residuals {
            precision_abs,
            precision_rel,
            normalized_abs,
            tol,
            passed: precision_rel <= tol && normalized_abs <= tol,
        }
    }

    /// Pairs `(i, j)`, `i < j`, whose summed incidence products
    /// `Σ_e ω(v_i,e) ω(v_j,e)` cancel to within `tol` although some single
    /// product exceeds `tol`.
    pub fn check_assumption1(&self, tol: f64) -> Vec<(usize, usize)> {
        let n = self.len();
        let h = self.structural_hypergraph();
        let mut sums = DMatrix::<f64>::zeros(n, n);
        let mut largest = DMatrix::<f64>::zeros(n, n);
        for members in h.edges() {
            for (x, &(i, wi)) in members.iter().enumerate() {
                for &(j, wj) in &members[x + 1..] {
                    let prod = wi * wj;
                    sums[(i, j)] += prod;
                    largest[(i, j)] = largest[(i, j)].max(prod.abs());
                }
            }
        }
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if sums[(i, j)].abs() <= tol && largest[(i, j)] > tol {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Largest odd power worth checking: `2p - 1`.
    pub fn default_assumption2_power(&self) -> usize {
        (2 * self.len()).saturating_sub(1).max(1)
    }

    /// Odd powers `s ≤ s_max` for which `tr(C^s)` vanishes (`|tr| ≤ tol·p`)
    /// while some diagonal entry of `C^s` exceeds `tol`, with `C` the
    /// normalized adjacency of the structural hypergraph.
    pub fn check_assumption2(&self, s_max: usize, tol: f64) -> Result<Vec<usize>, BnError> {
        if s_max.is_multiple_of(2) {
            return Err(BnError::EvenPower(s_max));
        }
        let n = self.len();
        let c = self
            .structural_hypergraph()
            .normalized_adjacency()
            .expect("structural hypergraph magnitudes are positive");
        let c2 = &c * &c;
        let mut power = c.clone();
        let mut out = Vec::new();
        let mut s = 1;
        loop {
            let trace = power.trace();
            let max_diag = power.diagonal().iter().fold(0.0_f64, |m, x| m.max(x.abs()));
            if trace.abs() <= tol * n as f64 && max_diag > tol {
                out.push(s);
            }
            if s + 2 > s_max {
                break;
            }
            power = &power * &c2;
            s += 2;
        }
        Ok(out)
    }
}

fn symmetrize(m: DMatrix<f64>) -> DMatrix<f64> {
    (&m + m.transpose()) * 0.5
}

/// `D^{-1/2} P D^{-1/2}` with `D = diag(P)`; the diagonal is set to exactly 1.
/// Callers guarantee a positive diagonal.
pub(crate) fn normalize_unit_diagonal(p: &DMatrix<f64>) -> DMatrix<f64> {
    let scale: Vec<f64> = p.diagonal().iter().map(|d| 1.0 / d.sqrt()).collect();
    let mut omega = p.clone();
    for j in 0..p.ncols() {
        for i in 0..p.nrows() {
            omega[(i, j)] = if i == j {
                1.0
            } else {
                p[(i, j)] * scale[i] * scale[j]
            };
        }
    }
    omega
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: usize, cols: usize, data: &[f64]) -> DMatrix<f64> {
        DMatrix::from_row_slice(rows, cols, data)
    }

    fn close(a: &DMatrix<f64>, b: &DMatrix<f64>, tol: f64) -> bool {
        a.shape() == b.shape() && max_abs(&(a - b)) <= tol
    }

    fn bn(n: usize, edges: &[(usize, usize, f64)], sigma: &[f64]) -> LinearBn {
        LinearBn::new(
            WeightedDag::unlabeled(n, edges.iter().copied()).unwrap(),
            sigma.to_vec(),
        )
        .unwrap()
    }

    fn chain() -> LinearBn {
        bn(2, &[(0, 1, 2.0)], &[1.0, 1.0])
    }

    fn collider() -> LinearBn {
        bn(3, &[(0, 2, 1.0), (1, 2, 1.0)], &[1.0, 1.0, 1.0])
    }

    #[test]
    fn sigma_validation() {
        let dag = WeightedDag::unlabeled(2, []).unwrap();
        assert_eq!(
            LinearBn::new(dag.clone(), vec![1.0]),
            Err(BnError::SigmaLength {
                expected: 2,
                got: 1
            })
        );
        assert!(matches!(
            LinearBn::new(dag.clone(), vec![1.0, 0.0]),
            Err(BnError::InvalidSigma { vertex: 1, .. })
        ));
        assert!(LinearBn::new(dag, vec![1.0, f64::INFINITY]).is_err());
    }

    #[test]
    fn structural_hypergraph_examples() {
        let h = chain().structural_hypergraph();
        assert_eq!(h.edge_count(), 2);
        assert_eq!(h.weight(0, 0), 1.0);
        assert_eq!(h.weight(0, 1), -2.0);
        assert_eq!(h.weight(1, 1), 1.0);
        assert_eq!(h.incidence_matrix(), mat(2, 2, &[1.0, -2.0, 0.0, 1.0]));

        let root = bn(2, &[], &[1.0, 2.0]).structural_hypergraph();
        assert_eq!(root.edge(1), &[(1, 0.5)]);

        let h = collider().structural_hypergraph();
        assert_eq!(h.edge(2), &[(0, -1.0), (1, -1.0), (2, 1.0)]);
        assert_eq!(h.stats().max_edge_size, 3);
    }

    #[test]
    fn covariance_examples() {
        assert_eq!(
            bn(3, &[], &[1.0, 2.0, 3.0]).covariance(),
            DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 4.0, 9.0]))
        );
        assert!(close(
            &chain().covariance(),
            &mat(2, 2, &[1.0, 2.0, 2.0, 5.0]),
            1e-14
        ));
        assert_eq!(bn(1, &[], &[3.0]).covariance(), mat(1, 1, &[9.0]));
    }

    #[test]
    fn covariance_handles_non_topological_indexing() {
        // v3 -> v1 -> v2
        let b = bn(3, &[(2, 0, 0.5), (0, 1, -1.5)], &[1.0, 0.7, 1.3]);
        let prod = b.covariance() * b.precision().precision;
        assert!(close(&prod, &DMatrix::identity(3, 3), 1e-12));
    }

    #[test]
    fn precision_examples() {
        let p = chain().precision();
        assert!(close(
            &p.precision,
            &mat(2, 2, &[5.0, -2.0, -2.0, 1.0]),
            1e-14
        ));
        let r = 2.0 / 5f64.sqrt();
        assert!(close(
            &p.normalized_precision,
            &mat(2, 2, &[1.0, -r, -r, 1.0]),
            1e-14
        ));

        let p = bn(3, &[], &[1.0, 2.0, 3.0]).precision();
        let d = DVector::from_vec(vec![1.0, 0.25, 1.0 / 9.0]);
        assert!(close(&p.precision, &DMatrix::from_diagonal(&d), 1e-15));
        assert_eq!(p.normalized_precision, DMatrix::identity(3, 3));

        let p = collider().precision();
        let expected = mat(3, 3, &[2.0, 1.0, -1.0, 1.0, 2.0, -1.0, -1.0, -1.0, 1.0]);
        assert!(close(&p.precision, &expected, 1e-15));
    }

    #[test]
    fn single_vertex_normalized_precision_is_one() {
        let p = bn(1, &[], &[0.3]).precision();
        assert_eq!(p.normalized_precision, mat(1, 1, &[1.0]));
    }

    #[test]
    fn theorem1_examples() {
        let r = chain().verify_theorem1(1e-12);
        assert!(r.passed);
        assert!(r.precision_abs <= 1e-12 && r.normalized_abs <= 1e-12);

        let r = bn(4, &[], &[1.0, 2.0, 0.5, 3.0]).verify_theorem1(1e-12);
        assert_eq!((r.precision_abs, r.normalized_abs), (0.0, 0.0));
        assert!(r.passed);
    }

    #[test]
    fn assumption1_examples() {
        let cancel = bn(3, &[(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)], &[1.0; 3]);
        assert_eq!(cancel.check_assumption1(1e-9), vec![(0, 1)]);
        assert!(chain().check_assumption1(1e-9).is_empty());
        assert!(bn(3, &[], &[1.0; 3]).check_assumption1(1e-9).is_empty());
    }

    #[test]
    fn assumption2_examples() {
        assert!(chain().check_assumption2(3, 1e-9).unwrap().is_empty());
        assert!(collider().check_assumption2(3, 1e-9).unwrap().is_empty());
        assert_eq!(
            chain().check_assumption2(4, 1e-9),
            Err(BnError::EvenPower(4))
        );
        assert_eq!(chain().default_assumption2_power(), 3);
    }

    #[test]
    fn structural_magnitudes_dominate_self_weight() {
        let b = bn(3, &[(0, 2, 0.4), (1, 2, -1.1)], &[0.5, 1.5, 2.0]);
        let m = b.structural_hypergraph().magnitudes();
        for (mi, s) in m.iter().zip(b.sigma()) {
            assert!(*mi >= 1.0 / (s * s));
        }
    }
}
