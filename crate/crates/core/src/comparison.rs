//! Crisp pairwise comparison matrices and priority extraction.
//!
//! A [`ComparisonMatrix`] is a positive reciprocal matrix of Saaty-scale
//! judgments: unit diagonal, `a[j][i] = 1 / a[i][j]`. Weights come either
//! from the principal eigenvector (power iteration) or from normalized row
//! geometric means. Consistency is judged by `CI = (lambda_max - n)/(n - 1)`
//! against Saaty's random index.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative reciprocity tolerance for exact input.
pub const STRICT_TOLERANCE: f64 = 1e-9;
/// Relative reciprocity tolerance for data typed with rounded reciprocals (`0.14` for `1/7`).
pub const LENIENT_TOLERANCE: f64 = 0.05;
/// Consistency ratio above which judgments are flagged as incoherent.
pub const CR_THRESHOLD: f64 = 0.10;

const POWER_TOLERANCE: f64 = 1e-12;
const POWER_MAX_ITERATIONS: usize = 10_000;

/// Saaty's random consistency index, indexed by `n - 1` for `n = 1..=15`.
pub const RANDOM_INDEX: [f64; 15] = [
    0.0, 0.0, 0.58, 0.90, 1.12, 1.24, 1.32, 1.41, 1.45, 1.49, 1.51, 1.54, 1.56, 1.57, 1.58,
];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatrixError {
    #[error("matrix is empty")]
    Empty,
    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NonSquare { row: usize, len: usize, expected: usize },
    #[error("entry ({i}, {j}) = {value} is not strictly positive")]
    NonPositiveEntry { i: usize, j: usize, value: f64 },
    #[error("diagonal entry ({i}, {i}) = {value}, expected 1")]
    DiagonalNotOne { i: usize, value: f64 },
    #[error("reciprocity violated at ({i}, {j}): a_ij = {a_ij}, a_ji = {a_ji}")]
    ReciprocityViolation { i: usize, j: usize, a_ij: f64, a_ji: f64 },
    #[error("power iteration did not converge within {iterations} iterations")]
    ConvergenceFailure { iterations: usize },
    #[error("no random index for order {n} (supported up to {})", RANDOM_INDEX.len())]
    UnsupportedOrder { n: usize },
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
}

/// How strictly reciprocity is checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strictness {
    Strict,
    #[default]
    Lenient,
}

impl Strictness {
    pub fn tolerance(self) -> f64 {
        match self {
            Strictness::Strict => STRICT_TOLERANCE,
            Strictness::Lenient => LENIENT_TOLERANCE,
        }
    }
}

/// Which route produced a [`WeightVector`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightMethod {
    Eigen,
    #[serde(alias = "geomean")]
    GeometricMean,
    Extent,
}

impl WeightMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            WeightMethod::Eigen => "eigen",
            WeightMethod::GeometricMean => "geometric-mean",
            WeightMethod::Extent => "extent",
        }
    }
}

/// Normalized priority vector; entries are non-negative and sum to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightVector {
    weights: Vec<f64>,
    method: WeightMethod,
}

impl WeightVector {
    /// Normalizes `raw` to unit sum. Returns `None` if the sum is not positive
    /// or any entry is negative or non-finite.
    pub fn normalized(raw: Vec<f64>, method: WeightMethod) -> Option<Self> {
        if raw.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return None;
        }
        let total: f64 = raw.iter().sum();
        if !(total > 0.0) {
            return None;
        }
        let weights = raw.into_iter().map(|w| w / total).collect();
        Some(Self { weights, method })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn method(&self) -> WeightMethod {
        self.method
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.weights[i]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub lambda_max: f64,
    pub ci: f64,
    pub cr: f64,
    pub consistent: bool,
}

/// Validated positive reciprocal matrix with element labels.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonMatrix {
    n: usize,
    entries: Vec<f64>,
    labels: Vec<String>,
}

/// A lower-triangle cell that was overwritten during repair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellRepair {
    pub i: usize,
    pub j: usize,
    pub before: f64,
    pub after: f64,
}

pub(crate) fn default_labels(n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("#{k}")).collect()
}

fn check_square<T>(raw: &[Vec<T>]) -> Result<usize, MatrixError> {
    let n = raw.len();
    if n == 0 {
        return Err(MatrixError::Empty);
    }
    for (row, r) in raw.iter().enumerate() {
        if r.len() != n {
            return Err(MatrixError::NonSquare { row, len: r.len(), expected: n });
        }
    }
    Ok(n)
}

fn reciprocal_within(a_ij: f64, a_ji: f64, tolerance: f64) -> bool {
    (a_ij * a_ji - 1.0).abs() <= tolerance
}

/// Checks a raw square array against the reciprocal-matrix axioms.
///
/// The first violation in row-major order is reported. In lenient mode the
/// accepted matrix has its lower triangle snapped to exact reciprocals of the
/// upper triangle.
pub fn validate_matrix(raw: &[Vec<f64>], strictness: Strictness) -> Result<ComparisonMatrix, MatrixError> {
    let n = check_square(raw)?;
    let tolerance = strictness.tolerance();
    for i in 0..n {
        for j in 0..n {
            let v = raw[i][j];
            if !(v > 0.0) || !v.is_finite() {
                return Err(MatrixError::NonPositiveEntry { i, j, value: v });
            }
        }
    }
    for i in 0..n {
        let d = raw[i][i];
        if (d - 1.0).abs() > tolerance {
            return Err(MatrixError::DiagonalNotOne { i, value: d });
        }
        for j in (i + 1)..n {
            if !reciprocal_within(raw[i][j], raw[j][i], tolerance) {
                return Err(MatrixError::ReciprocityViolation { i, j, a_ij: raw[i][j], a_ji: raw[j][i] });
            }
        }
    }
    let entries = match strictness {
        Strictness::Strict => raw.iter().flatten().copied().collect(),
        Strictness::Lenient => fill_from_upper(raw, n),
    };
    Ok(ComparisonMatrix { n, entries, labels: default_labels(n) })
}

fn fill_from_upper(raw: &[Vec<f64>], n: usize) -> Vec<f64> {
    let mut entries = vec![1.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            entries[i * n + j] = raw[i][j];
            entries[j * n + i] = 1.0 / raw[i][j];
        }
    }
    entries
}

/// Rebuilds a reciprocal matrix from the strict upper triangle.
pub fn repair_matrix(raw: &[Vec<f64>]) -> Result<ComparisonMatrix, MatrixError> {
    repair_matrix_logged(raw).map(|(m, _)| m)
}

/// Like [`repair_matrix`], also reporting every diagonal or lower cell whose
/// value was off by more than the lenient tolerance.
pub fn repair_matrix_logged(raw: &[Vec<f64>]) -> Result<(ComparisonMatrix, Vec<CellRepair>), MatrixError> {
    let n = check_square(raw)?;
    for i in 0..n {
        for j in (i + 1)..n {
            let v = raw[i][j];
            if !(v > 0.0) || !v.is_finite() {
                return Err(MatrixError::NonPositiveEntry { i, j, value: v });
            }
        }
    }
    let entries = fill_from_upper(raw, n);
    let mut log = Vec::new();
    for i in 0..n {
        for j in 0..=i {
            let before = raw[i][j];
            let after = entries[i * n + j];
            let off = if before > 0.0 {
                (before / after - 1.0).abs() > LENIENT_TOLERANCE
            } else {
                true
            };
            if off {
                log.push(CellRepair { i, j, before, after });
            }
        }
    }
    Ok((ComparisonMatrix { n, entries, labels: default_labels(n) }, log))
}

impl ComparisonMatrix {
    /// Builds a reciprocal matrix from the strict upper triangle given row by
    /// row: `upper[k]` holds `a[i][i+1..n]` for row `i`.
    pub fn from_upper(n: usize, upper: &[f64]) -> Result<Self, MatrixError> {
        if n == 0 {
            return Err(MatrixError::Empty);
        }
        let expected = n * (n - 1) / 2;
        if upper.len() != expected {
            return Err(MatrixError::NonSquare { row: 0, len: upper.len(), expected });
        }
        let mut raw = vec![vec![1.0; n]; n];
        let mut k = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                raw[i][j] = upper[k];
                k += 1;
            }
        }
        repair_matrix(&raw)
    }

    /// Consistent matrix `a[i][j] = w[i] / w[j]`.
    pub fn from_weights(w: &[f64]) -> Result<Self, MatrixError> {
        let n = w.len();
        if n == 0 {
            return Err(MatrixError::Empty);
        }
        for (i, &wi) in w.iter().enumerate() {
            if !(wi > 0.0) {
                return Err(MatrixError::NonPositiveEntry { i, j: i, value: wi });
            }
        }
        let raw: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| w[i] / w[j]).collect()).collect();
        repair_matrix(&raw)
    }

    pub fn with_labels<S: Into<String>>(mut self, labels: impl IntoIterator<Item = S>) -> Result<Self, MatrixError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() != self.n {
            return Err(MatrixError::LabelCount { expected: self.n, got: labels.len() });
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    /// Strict upper triangle in row-major order.
    pub fn upper(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n * (self.n - 1) / 2);
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                out.push(self.get(i, j));
            }
        }
        out
    }

    /// Simultaneous row/column permutation: new element `k` is old `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.n;
        assert_eq!(perm.len(), n, "permutation length");
        let mut entries = vec![0.0; n * n];
        for a in 0..n {
            for b in 0..n {
                entries[a * n + b] = self.get(perm[a], perm[b]);
            }
        }
        let labels = perm.iter().map(|&p| self.labels[p].clone()).collect();
        Self { n, entries, labels }
    }

    fn mul_vec(&self, w: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.row(i).iter().zip(w).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// Principal eigenvector by power iteration, plus `lambda_max` as the mean of
/// `(Aw)_i / w_i`.
pub fn eigen_weights(m: &ComparisonMatrix) -> Result<(WeightVector, f64), MatrixError> {
    let n = m.order();
    let mut w = vec![1.0 / n as f64; n];
    let mut converged = false;
    for _ in 0..POWER_MAX_ITERATIONS {
        let mut next = m.mul_vec(&w);
        let total: f64 = next.iter().sum();
        next.iter_mut().for_each(|x| *x /= total);
        let delta = next
            .iter()
            .zip(&w)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        w = next;
        if delta < POWER_TOLERANCE {
            converged = true;
            break;
        }
    }
    if !converged || w.iter().any(|x| !x.is_finite()) {
        return Err(MatrixError::ConvergenceFailure { iterations: POWER_MAX_ITERATIONS });
    }
    let aw = m.mul_vec(&w);
    let lambda_max = aw.iter().zip(&w).map(|(a, b)| a / b).sum::<f64>() / n as f64;
    let weights = WeightVector::normalized(w, WeightMethod::Eigen)
        .ok_or(MatrixError::ConvergenceFailure { iterations: POWER_MAX_ITERATIONS })?;
    Ok((weights, lambda_max))
}

/// Normalized row geometric means, computed in log space.
pub fn geometric_mean_weights(m: &ComparisonMatrix) -> WeightVector {
    let n = m.order() as f64;
    let raw: Vec<f64> = (0..m.order())
        .map(|i| (m.row(i).iter().map(|a| a.ln()).sum::<f64>() / n).exp())
        .collect();
    WeightVector::normalized(raw, WeightMethod::GeometricMean).expect("row geometric means are positive")
}

pub fn random_index(n: usize) -> Option<f64> {
    n.checked_sub(1).and_then(|k| RANDOM_INDEX.get(k)).copied()
}

/// Consistency index from `lambda_max`; zero for orders below 2.
pub fn consistency_index(lambda_max: f64, n: usize) -> f64 {
    if n < 2 {
        0.0
    } else {
        (lambda_max - n as f64) / (n as f64 - 1.0)
    }
}

pub fn consistency(m: &ComparisonMatrix) -> Result<ConsistencyReport, MatrixError> {
    let n = m.order();
    let ri = random_index(n).ok_or(MatrixError::UnsupportedOrder { n })?;
    let (_, lambda_max) = eigen_weights(m)?;
    let ci = consistency_index(lambda_max, n);
    // Orders 1 and 2 are always consistent; RI is zero there.
    let cr = if ri > 0.0 { ci / ri } else { 0.0 };
    Ok(ConsistencyReport { lambda_max, ci, cr, consistent: cr <= CR_THRESHOLD })
}
