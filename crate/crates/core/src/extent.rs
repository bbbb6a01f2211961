//! Extent analysis: fuzzy comparison matrix to crisp priorities.
//!
//! Row sums of the fuzzy matrix are divided by the grand total to obtain
//! synthetic extents `S_i`. Each extent is scored by its worst degree of
//! possibility of dominating another, `min_k V(S_i >= S_k)`, and the scores
//! are normalized.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::comparison::{WeightMethod, WeightVector};
use crate::fuzzy::{FuzzyMatrix, Tfn};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExtentError {
    #[error("grand total {0} has a zero component")]
    DegenerateTotal(Tfn),
    #[error("every extent is strictly dominated; possibility scores are all zero")]
    DegenerateWeights,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtentSet {
    pub row_sums: Vec<Tfn>,
    pub column_sums: Vec<Tfn>,
    /// Sum of every cell, before inversion.
    pub total: Tfn,
    pub extents: Vec<Tfn>,
}

/// `V(S_i >= S_j)` for every ordered pair; the diagonal is 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PossibilityMatrix {
    n: usize,
    values: Vec<f64>,
}

impl PossibilityMatrix {
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    /// `min_{k != i} V(S_i >= S_k)`; 1 for a single extent.
    pub fn min_over_others(&self, i: usize) -> f64 {
        (0..self.n).filter(|&k| k != i).map(|k| self.get(i, k)).fold(1.0, f64::min)
    }
}

pub fn synthetic_extents(fm: &FuzzyMatrix) -> Result<ExtentSet, ExtentError> {
    let n = fm.order();
    let zero = Tfn::crisp(0.0);
    let row_sums: Vec<Tfn> = (0..n).map(|i| fm.row(i).iter().fold(zero, |acc, &c| acc.add(c))).collect();
    let column_sums: Vec<Tfn> = (0..n)
        .map(|j| (0..n).fold(zero, |acc, i| acc.add(fm.get(i, j))))
        .collect();
    let total = row_sums.iter().fold(zero, |acc, &r| acc.add(r));
    if total.l() <= 0.0 {
        return Err(ExtentError::DegenerateTotal(total));
    }
    // r ⊗ total^-1 = (r.l / total.u, r.m / total.m, r.u / total.l)
    let extents = row_sums
        .iter()
        .map(|r| Tfn::new(r.l() / total.u(), r.m() / total.m(), r.u() / total.l()).expect("ordered components"))
        .collect();
    Ok(ExtentSet { row_sums, column_sums, total, extents })
}

/// Degree of possibility `V(a >= b)`: the height of the intersection of the
/// right leg of `a` with the left leg of `b`.
pub fn possibility(a: Tfn, b: Tfn) -> f64 {
    if a.m() >= b.m() {
        return 1.0;
    }
    if b.l() >= a.u() {
        return 0.0;
    }
    // a.m < b.m and b.l < a.u keep the denominator strictly negative
    let v = (b.l() - a.u()) / ((a.m() - a.u()) - (b.m() - b.l()));
    if !(0.0..=1.0).contains(&v) {
        let excess = if v > 1.0 { v - 1.0 } else { -v };
        if excess > 1e-9 {
            log::warn!("possibility {v} clamped to [0, 1] for {a} >= {b}");
        }
    }
    v.clamp(0.0, 1.0)
}

pub fn possibility_matrix(extents: &[Tfn]) -> PossibilityMatrix {
    let n = extents.len();
    let mut values = Vec::with_capacity(n * n);
    for a in extents {
        for b in extents {
            values.push(possibility(*a, *b));
        }
    }
    PossibilityMatrix { n, values }
}

/// Full intermediate trace of one extent computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtentTrace {
    pub extents: ExtentSet,
    pub possibility: PossibilityMatrix,
    pub raw: Vec<f64>,
    pub weights: WeightVector,
}

pub fn extent_trace(fm: &FuzzyMatrix) -> Result<ExtentTrace, ExtentError> {
    let extents = synthetic_extents(fm)?;
    let possibility = possibility_matrix(&extents.extents);
    let raw: Vec<f64> = (0..fm.order()).map(|i| possibility.min_over_others(i)).collect();
    let weights = WeightVector::normalized(raw.clone(), WeightMethod::Extent).ok_or(ExtentError::DegenerateWeights)?;
    Ok(ExtentTrace { extents, possibility, raw, weights })
}

pub fn extent_weights(fm: &FuzzyMatrix) -> Result<WeightVector, ExtentError> {
    extent_trace(fm).map(|t| t.weights)
}
