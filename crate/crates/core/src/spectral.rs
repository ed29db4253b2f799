//! Eigenvalues of symmetric matrices and the spectral tree tests.
//!
//! For a linear Bayesian network with normalized precision `Ω`:
//!
//! * if the moral graph is a forest, `λ₁(Ω) ≤ 2` ([`tree_test_lambda`]);
//!   the converse does not hold, so a pass only means "consistent with a tree";
//! * the moral graph is a forest exactly when the spectrum of `Ω` is symmetric
//!   about 1, given generic weights ([`tree_test_symmetry`]).

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::SpectralError;
use crate::hypergraph::WeightedHypergraph;
use crate::max_abs;

/// Eigenvalues sorted in descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
}

impl Spectrum {
    /// Sorts the given eigenvalues in descending order.
    pub fn from_unsorted(mut eigenvalues: Vec<f64>) -> Self {
        eigenvalues.sort_by(|a, b| b.total_cmp(a));
        Self { eigenvalues }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn largest(&self) -> Option<f64> {
        self.eigenvalues.first().copied()
    }

    pub fn smallest(&self) -> Option<f64> {
        self.eigenvalues.last().copied()
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    /// `λ₁(Ω) ≤ 2 + tol`.
    LambdaBound,
    /// Spectrum of `Ω` symmetric about 1 within `tol`.
    Symmetry,
}

impl Criterion {
    pub fn as_str(self) -> &'static str {
        match self {
            Criterion::LambdaBound => "lambda_bound",
            Criterion::Symmetry => "symmetry",
        }
    }
}

/// Outcome of a tree test; `passed` iff `statistic <= threshold`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeTestVerdict {
    pub criterion: Criterion,
    pub passed: bool,
    pub statistic: f64,
    pub threshold: f64,
}

impl TreeTestVerdict {
    fn new(criterion: Criterion, statistic: f64, threshold: f64) -> Self {
        Self {
            criterion,
            passed: statistic <= threshold,
            statistic,
            threshold,
        }
    }

    /// Human-readable reading of the verdict. A passed eigenvalue bound is
    /// necessary for, but not proof of, a tree moral graph.
    pub fn describe(&self) -> &'static str {
        match (self.criterion, self.passed) {
            (Criterion::LambdaBound, true) => "consistent with tree",
            (Criterion::LambdaBound, false) => "not a tree",
            (Criterion::Symmetry, true) => "tree (under faithfulness)",
            (Criterion::Symmetry, false) => "not a tree",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryCheck {
    pub symmetric: bool,
    pub max_residual: f64,
}

/// `max(λ₁, ∇)` comparison for the normalized Laplacian of a hypergraph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaBound {
    pub lambda1: f64,
    pub max_edge_size: usize,
    pub holds: bool,
}

/// Slack used by the `λ₁(L) ≤ ∇` check.
pub const EDGE_SIZE_BOUND_SLACK: f64 = 1e-9;

fn check_symmetric(m: &DMatrix<f64>) -> Result<DMatrix<f64>, SpectralError> {
    if !m.is_square() {
        return Err(SpectralError::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    let asymmetry = max_abs(&(m - m.transpose()));
    if asymmetry > 1e-10 * max_abs(m).max(1.0) {
        return Err(SpectralError::NotSymmetric { asymmetry });
    }
    Ok((m + m.transpose()) * 0.5)
}

/// Descending eigenvalues of a symmetric matrix. The input is symmetrized
/// after the asymmetry check.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Result<Spectrum, SpectralError> {
    let sym = check_symmetric(m)?;
    if sym.is_empty() {
        return Ok(Spectrum::from_unsorted(Vec::new()));
    }
    let values = SymmetricEigen::new(sym).eigenvalues;
    Ok(Spectrum::from_unsorted(values.iter().copied().collect()))
}

/// Eigenvalues plus orthonormal eigenvectors; column `k` of the returned
/// matrix belongs to `spectrum.eigenvalues()[k]`.
pub fn symmetric_eigen(m: &DMatrix<f64>) -> Result<(Spectrum, DMatrix<f64>), SpectralError> {
    let sym = check_symmetric(m)?;
    let n = sym.nrows();
    if n == 0 {
        return Ok((Spectrum::from_unsorted(Vec::new()), DMatrix::zeros(0, 0)));
    }
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, k| eig.eigenvectors[(i, order[k])]);
    Ok((
        Spectrum {
            eigenvalues: values,
        },
        vectors,
    ))
}

/// `xᵀ L x / xᵀ x` for the normalized Laplacian `L`, evaluated edge by edge
/// as `Σ_e (Σ_i ω(v_i,e) x_i / √m_i)² / Σ_i x_i²` without forming `L`.
pub fn rayleigh_quotient(h: &WeightedHypergraph, x: &[f64]) -> Result<f64, SpectralError> {
    if x.len() != h.vertex_count() {
        return Err(SpectralError::DimensionMismatch {
            expected: h.vertex_count(),
            got: x.len(),
        });
    }
    let norm2: f64 = x.iter().map(|v| v * v).sum();
    if norm2 == 0.0 {
        return Err(SpectralError::ZeroVector);
    }
    let scale = h.inv_sqrt_magnitudes()?;
    let numerator: f64 = h
        .edges()
        .map(|members| {
            let s: f64 = members.iter().map(|&(i, w)| w * x[i] * scale[i]).sum();
            s * s
        })
        .sum();
    Ok(numerator / norm2)
}

/// `L x` computed through the incidences, `M^{-1/2} H Hᵀ M^{-1/2} x`.
fn apply_normalized_laplacian(h: &WeightedHypergraph, scale: &[f64], x: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; x.len()];
    for members in h.edges() {
        let y: f64 = members.iter().map(|&(i, w)| w * x[i] * scale[i]).sum();
        for &(i, w) in members {
            out[i] += scale[i] * w * y;
        }
    }
    out
}

/// Largest eigenvalue of `L(h)` against the maximum edge size `∇`.
pub fn max_eigenvalue_bound(h: &WeightedHypergraph) -> Result<LambdaBound, SpectralError> {
    let l = h.normalized_laplacian()?;
    let lambda1 = symmetric_eigenvalues(&l)?.largest().unwrap_or(0.0);
    let max_edge_size = h.stats().max_edge_size;
    Ok(LambdaBound {
        lambda1,
        max_edge_size,
        holds: lambda1 <= max_edge_size as f64 + EDGE_SIZE_BOUND_SLACK,
    })
}

fn check_normalized(omega: &DMatrix<f64>, tol: f64) -> Result<DMatrix<f64>, SpectralError> {
    let sym = check_symmetric(omega)?;
    if let Some((index, &value)) = sym
        .diagonal()
        .iter()
        .enumerate()
        .find(|(_, d)| (**d - 1.0).abs() > tol)
    {
        return Err(SpectralError::NotNormalized { index, value });
    }
    Ok(sym)
}

/// Passes iff `λ₁(Ω) ≤ 2 + tol`.
pub fn tree_test_lambda(omega: &DMatrix<f64>, tol: f64) -> Result<TreeTestVerdict, SpectralError> {
    let sym = check_normalized(omega, tol)?;
    let lambda1 = symmetric_eigenvalues(&sym)?.largest().unwrap_or(0.0);
    Ok(TreeTestVerdict::new(
        Criterion::LambdaBound,
        lambda1,
        2.0 + tol,
    ))
}

/// Pairs `λ_i` with `λ_{p+1-i}` and reports `max |λ_i + λ_{p+1-i} - 2a|`.
/// For an odd-length spectrum the middle value pairs with itself.
pub fn symmetry_about(spectrum: &Spectrum, a: f64, tol: f64) -> SymmetryCheck {
    let ev = spectrum.eigenvalues();
    let p = ev.len();
    let max_residual = (0..p.div_ceil(2))
        .map(|i| (ev[i] + ev[p - 1 - i] - 2.0 * a).abs())
        .fold(0.0_f64, f64::max);
    SymmetryCheck {
        symmetric: max_residual <= tol,
        max_residual,
    }
}

/// Passes iff the spectrum of `Ω` is symmetric about 1 within `tol`.
pub fn tree_test_symmetry(
    omega: &DMatrix<f64>,
    tol: f64,
) -> Result<TreeTestVerdict, SpectralError> {
    let sym = check_normalized(omega, tol)?;
    let check = symmetry_about(&symmetric_eigenvalues(&sym)?, 1.0, tol);
    Ok(TreeTestVerdict::new(
        Criterion::Symmetry,
        check.max_residual,
        tol,
    ))
}

/// `tr(C^s)` for odd `s`, by repeated multiplication.
pub fn odd_power_trace(c: &DMatrix<f64>, s: usize) -> Result<f64, SpectralError> {
    if s.is_multiple_of(2) {
        return Err(SpectralError::EvenPower(s));
    }
    if !c.is_square() {
        return Err(SpectralError::NotSquare {
            rows: c.nrows(),
            cols: c.ncols(),
        });
    }
    let mut power = c.clone();
    for _ in 1..s {
        power = &power * c;
    }
    Ok(power.trace())
}

/// Largest Rayleigh quotient of `L(h)` seen over `trials` random Gaussian
/// directions, followed by power iteration from the best direction found.
/// The result never exceeds `λ₁(L)` beyond rounding.
pub fn minmax_check(
    h: &WeightedHypergraph,
    trials: usize,
    seed: u64,
) -> Result<f64, SpectralError> {
    let n = h.vertex_count();
    let scale = h.inv_sqrt_magnitudes()?;
    if n == 0 {
        return Ok(0.0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = f64::NEG_INFINITY;
    let mut best_x = vec![1.0; n];
    for _ in 0..trials.max(1) {
        let x: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        if x.iter().all(|v| *v == 0.0) {
            continue;
        }
        let r = rayleigh_quotient(h, &x)?;
        if r > best {
            best = r;
            best_x = x;
        }
    }

    let mut x = best_x;
    for _ in 0..200 {
        let y = apply_normalized_laplacian(h, &scale, &x);
        let norm = DVector::from_column_slice(&y).norm();
        if norm == 0.0 {
            break;
        }
        x = y.into_iter().map(|v| v / norm).collect();
        best = best.max(rayleigh_quotient(h, &x)?);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightedDag;
    use crate::linear_bn::LinearBn;

    fn mat(n: usize, data: &[f64]) -> DMatrix<f64> {
        DMatrix::from_row_slice(n, n, data)
    }

    fn chain() -> LinearBn {
        LinearBn::new(
            WeightedDag::unlabeled(2, [(0, 1, 2.0)]).unwrap(),
            vec![1.0, 1.0],
        )
        .unwrap()
    }

    fn collider() -> LinearBn {
        LinearBn::new(
            WeightedDag::unlabeled(3, [(0, 2, 1.0), (1, 2, 1.0)]).unwrap(),
            vec![1.0; 3],
        )
        .unwrap()
    }

    fn diagonal_only(n: usize) -> WeightedHypergraph {
        let mut h = WeightedHypergraph::new(n);
        for v in 0..n {
            h.add_edge([(v, 0.5 + v as f64)]).unwrap();
        }
        h
    }

    /// Roots of the monic cubic `t³ + b t² + c t + d` by the trigonometric
    /// method; assumes three real roots. Returned descending.
    fn cubic_roots(b: f64, c: f64, d: f64) -> [f64; 3] {
        let p = c - b * b / 3.0;
        let q = 2.0 * b.powi(3) / 27.0 - b * c / 3.0 + d;
        let r = 2.0 * (-p / 3.0).sqrt();
        let phi = ((3.0 * q) / (p * r)).clamp(-1.0, 1.0).acos() / 3.0;
        let mut roots = [0.0; 3];
        for (k, root) in roots.iter_mut().enumerate() {
            *root = r * (phi - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() - b / 3.0;
        }
        roots.sort_by(|x, y| y.total_cmp(x));
        roots
    }

    /// Characteristic polynomial coefficients of a 3×3 matrix.
    fn char_poly3(m: &DMatrix<f64>) -> (f64, f64, f64) {
        let tr = m.trace();
        let minors = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)] + m[(0, 0)] * m[(2, 2)]
            - m[(0, 2)] * m[(2, 0)]
            + m[(1, 1)] * m[(2, 2)]
            - m[(1, 2)] * m[(2, 1)];
        let det = m.determinant();
        (-tr, minors, -det)
    }

    #[test]
    fn eigenvalue_examples() {
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 4.0, 9.0]));
        assert_eq!(
            symmetric_eigenvalues(&d).unwrap().eigenvalues(),
            &[9.0, 4.0, 1.0]
        );

        let omega = chain().precision().normalized_precision;
        let ev = symmetric_eigenvalues(&omega).unwrap();
        let r = 2.0 / 5f64.sqrt();
        assert!((ev.eigenvalues()[0] - (1.0 + r)).abs() < 1e-12);
        assert!((ev.eigenvalues()[1] - (1.0 - r)).abs() < 1e-12);

        let omega = collider().precision().normalized_precision;
        let (b, c, d) = char_poly3(&omega);
        let oracle = cubic_roots(b, c, d);
        let ev = symmetric_eigenvalues(&omega).unwrap();
        let s17 = 17f64.sqrt();
        let closed = [(5.0 + s17) / 4.0, 0.5, (5.0 - s17) / 4.0];
        for k in 0..3 {
            assert!((oracle[k] - closed[k]).abs() < 1e-12);
            assert!((ev.eigenvalues()[k] - closed[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn eigen_reconstruction() {
        let m = mat(3, &[2.0, -1.0, 0.3, -1.0, 1.5, 0.7, 0.3, 0.7, -0.4]);
        let (spec, q) = symmetric_eigen(&m).unwrap();
        let lambda = DMatrix::from_diagonal(&DVector::from_column_slice(spec.eigenvalues()));
        let rebuilt = &q * lambda * q.transpose();
        assert!(max_abs(&(rebuilt - &m)) <= 1e-9 * max_abs(&m));
        assert!(spec.eigenvalues().windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn rejects_asymmetric_and_non_square() {
        let m = mat(2, &[1.0, 0.5, 0.4, 1.0]);
        assert!(matches!(
            symmetric_eigenvalues(&m),
            Err(SpectralError::NotSymmetric { .. })
        ));
        let rect = DMatrix::<f64>::zeros(2, 3);
        assert!(matches!(
            symmetric_eigenvalues(&rect),
            Err(SpectralError::NotSquare { rows: 2, cols: 3 })
        ));
        // tiny asymmetry is absorbed
        let m = mat(2, &[1.0, 0.5, 0.5 + 1e-13, 1.0]);
        assert!(symmetric_eigenvalues(&m).is_ok());
    }

    #[test]
    fn rayleigh_examples() {
        let h = chain().structural_hypergraph();
        let r = rayleigh_quotient(&h, &[1.0, 1.0]).unwrap();
        assert!((r - (1.0 - 2.0 / 5f64.sqrt())).abs() < 1e-12);
        let l = h.normalized_laplacian().unwrap();
        let x = DVector::from_vec(vec![1.0, 1.0]);
        assert!((r - (x.transpose() * &l * &x)[0] / x.norm_squared()).abs() < 1e-12);

        assert!((rayleigh_quotient(&h, &[1.0, 0.0]).unwrap() - 1.0).abs() < 1e-15);

        let (spec, q) = symmetric_eigen(&l).unwrap();
        let top: Vec<f64> = q.column(0).iter().copied().collect();
        assert!((rayleigh_quotient(&h, &top).unwrap() - spec.eigenvalues()[0]).abs() < 1e-9);
    }

    #[test]
    fn rayleigh_errors() {
        let h = chain().structural_hypergraph();
        assert_eq!(
            rayleigh_quotient(&h, &[0.0, 0.0]),
            Err(SpectralError::ZeroVector)
        );
        assert!(matches!(
            rayleigh_quotient(&h, &[1.0]),
            Err(SpectralError::DimensionMismatch { .. })
        ));
        let mut isolated = WeightedHypergraph::new(2);
        isolated.add_edge([(0, 1.0)]).unwrap();
        assert!(matches!(
            rayleigh_quotient(&isolated, &[1.0, 1.0]),
            Err(SpectralError::Hypergraph(_))
        ));
    }

    #[test]
    fn edge_size_bound_examples() {
        let b = max_eigenvalue_bound(&chain().structural_hypergraph()).unwrap();
        assert!((b.lambda1 - (1.0 + 2.0 / 5f64.sqrt())).abs() < 1e-12);
        assert_eq!(b.max_edge_size, 2);
        assert!(b.holds);

        let b = max_eigenvalue_bound(&collider().structural_hypergraph()).unwrap();
        assert!((b.lambda1 - (5.0 + 17f64.sqrt()) / 4.0).abs() < 1e-12);
        assert_eq!(b.max_edge_size, 3);
        assert!(b.holds);

        let b = max_eigenvalue_bound(&diagonal_only(4)).unwrap();
        assert!((b.lambda1 - 1.0).abs() < 1e-15);
        assert_eq!(b.max_edge_size, 1);
        assert!(b.holds);
    }

    #[test]
    fn lambda_test_examples() {
        let v = tree_test_lambda(&chain().precision().normalized_precision, 1e-8).unwrap();
        assert!(v.passed);
        assert!((v.statistic - 1.894427190999916).abs() < 1e-12);
        assert_eq!(v.describe(), "consistent with tree");

        let v = tree_test_lambda(&collider().precision().normalized_precision, 1e-8).unwrap();
        assert!(!v.passed);
        assert!((v.statistic - 2.2807764064044154).abs() < 1e-12);

        let v = tree_test_lambda(&DMatrix::identity(4, 4), 1e-8).unwrap();
        assert!(v.passed);
        assert_eq!(v.statistic, 1.0);
        assert_eq!(v.threshold, 2.0 + 1e-8);
    }

    #[test]
    fn tree_tests_reject_unnormalized_input() {
        let m = mat(2, &[2.0, 0.1, 0.1, 1.0]);
        assert!(matches!(
            tree_test_lambda(&m, 1e-8),
            Err(SpectralError::NotNormalized { index: 0, .. })
        ));
        assert!(matches!(
            tree_test_symmetry(&m, 1e-8),
            Err(SpectralError::NotNormalized { index: 0, .. })
        ));
        let asym = mat(2, &[1.0, 0.1, 0.3, 1.0]);
        assert!(matches!(
            tree_test_symmetry(&asym, 1e-8),
            Err(SpectralError::NotSymmetric { .. })
        ));
    }

    #[test]
    fn symmetry_examples() {
        let r = 2.0 / 5f64.sqrt();
        let s = symmetry_about(&Spectrum::from_unsorted(vec![1.0 - r, 1.0 + r]), 1.0, 1e-12);
        assert!(s.symmetric && s.max_residual < 1e-15);

        let s = symmetry_about(&Spectrum::from_unsorted(vec![1.0; 3]), 1.0, 0.0);
        assert!(s.symmetric);

        let s = symmetry_about(
            &Spectrum::from_unsorted(vec![2.2808, 0.5, 0.2192]),
            1.0,
            1e-8,
        );
        assert!(!s.symmetric);
        assert!((s.max_residual - 1.0).abs() < 1e-12);

        assert!(symmetry_about(&Spectrum::from_unsorted(vec![]), 1.0, 0.0).symmetric);
    }

    #[test]
    fn symmetry_test_examples() {
        let v = tree_test_symmetry(&chain().precision().normalized_precision, 1e-8).unwrap();
        assert!(v.passed);
        let v = tree_test_symmetry(&collider().precision().normalized_precision, 1e-8).unwrap();
        assert!(!v.passed);
        assert_eq!(v.describe(), "not a tree");
        let v = tree_test_symmetry(&DMatrix::identity(5, 5), 1e-8).unwrap();
        assert!(v.passed && v.statistic == 0.0);
    }

    #[test]
    fn odd_power_trace_examples() {
        let c = mat(2, &[0.0, 0.7, 0.7, 0.0]);
        assert_eq!(odd_power_trace(&c, 3).unwrap(), 0.0);

        let c = collider()
            .structural_hypergraph()
            .normalized_adjacency()
            .unwrap();
        let c12 = c[(0, 1)];
        let c13 = c[(0, 2)];
        let c23 = c[(1, 2)];
        let triangle = 6.0 * c12 * c13 * c23;
        assert!((triangle + 1.5).abs() < 1e-12);
        assert!((odd_power_trace(&c, 3).unwrap() + 1.5).abs() < 1e-12);

        let zero = DMatrix::<f64>::zeros(4, 4);
        assert_eq!(odd_power_trace(&zero, 7).unwrap(), 0.0);
        assert_eq!(odd_power_trace(&zero, 2), Err(SpectralError::EvenPower(2)));
    }

    #[test]
    fn minmax_examples() {
        let h = chain().structural_hypergraph();
        let lambda1 = 1.0 + 2.0 / 5f64.sqrt();
        let best = minmax_check(&h, 10_000, 3).unwrap();
        assert!(best <= lambda1 + 1e-9 && best >= lambda1 - 0.01);

        let best = minmax_check(&diagonal_only(3), 50, 9).unwrap();
        assert!((best - 1.0).abs() < 1e-12);

        let h = collider().structural_hypergraph();
        let best = minmax_check(&h, 1, 0).unwrap();
        assert!((best - (5.0 + 17f64.sqrt()) / 4.0).abs() < 1e-9);
    }
}
