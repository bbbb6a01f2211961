//! Triangular fuzzy numbers and fuzzy pairwise comparison matrices.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::comparison::{default_labels, Strictness, LENIENT_TOLERANCE};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FuzzyError {
    #[error("malformed fuzzy number ({l}, {m}, {u}): requires l <= m <= u")]
    Malformed { l: f64, m: f64, u: f64 },
    #[error("fuzzy operand {0} must be strictly positive")]
    NonPositiveOperand(Tfn),
    #[error("{0} is outside the 1..9 judgment scale")]
    OutOfScale(u32),
    #[error("cannot parse fuzzy number from {0:?}")]
    Parse(String),
    #[error("fuzzy matrix is empty")]
    Empty,
    #[error("fuzzy matrix is not square: row {row} has {len} entries, expected {expected}")]
    NonSquare { row: usize, len: usize, expected: usize },
    #[error("cell ({i}, {j}) holds malformed fuzzy number {tfn}")]
    MalformedCell { i: usize, j: usize, tfn: Tfn },
    #[error("cell ({i}, {j}) = {tfn} is not strictly positive")]
    NonPositiveCell { i: usize, j: usize, tfn: Tfn },
    #[error("diagonal cell ({i}, {i}) = {tfn}, expected (1, 1, 1)")]
    DiagonalNotOne { i: usize, tfn: Tfn },
    #[error("fuzzy reciprocity violated at ({i}, {j}): {a_ij} vs {a_ji}")]
    ReciprocityViolation { i: usize, j: usize, a_ij: Tfn, a_ji: Tfn },
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
}

/// Triangular fuzzy number `(l, m, u)` with `l <= m <= u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct Tfn {
    l: f64,
    m: f64,
    u: f64,
}

impl TryFrom<[f64; 3]> for Tfn {
    type Error = FuzzyError;

    fn try_from([l, m, u]: [f64; 3]) -> Result<Self, Self::Error> {
        Tfn::new(l, m, u)
    }
}

impl From<Tfn> for [f64; 3] {
    fn from(t: Tfn) -> Self {
        [t.l, t.m, t.u]
    }
}

pub const ONE: Tfn = Tfn { l: 1.0, m: 1.0, u: 1.0 };

impl Tfn {
    pub fn new(l: f64, m: f64, u: f64) -> Result<Self, FuzzyError> {
        if l <= m && m <= u && l.is_finite() && u.is_finite() {
            Ok(Self { l, m, u })
        } else {
            Err(FuzzyError::Malformed { l, m, u })
        }
    }

    /// Degenerate fuzzy number `(v, v, v)`.
    pub fn crisp(v: f64) -> Self {
        Self { l: v, m: v, u: v }
    }

    /// Internal constructor for values whose ordering is already known.
    pub(crate) fn raw(l: f64, m: f64, u: f64) -> Self {
        debug_assert!(l <= m && m <= u, "({l}, {m}, {u})");
        Self { l, m, u }
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn is_positive(&self) -> bool {
        self.l > 0.0
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(self, other: Tfn) -> Tfn {
        Tfn::raw(self.l + other.l, self.m + other.m, self.u + other.u)
    }

    /// Component-wise product, the usual approximation for positive operands.
    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: Tfn) -> Result<Tfn, FuzzyError> {
        for t in [self, other] {
            if !t.is_positive() {
                return Err(FuzzyError::NonPositiveOperand(t));
            }
        }
        Ok(Tfn::raw(self.l * other.l, self.m * other.m, self.u * other.u))
    }

    /// `(1/u, 1/m, 1/l)`.
    pub fn invert(self) -> Result<Tfn, FuzzyError> {
        if !self.is_positive() {
            return Err(FuzzyError::NonPositiveOperand(self));
        }
        Ok(Tfn::raw(1.0 / self.u, 1.0 / self.m, 1.0 / self.l))
    }

    pub fn scale(self, k: f64) -> Tfn {
        assert!(k > 0.0, "scale factor must be positive");
        Tfn::raw(self.l * k, self.m * k, self.u * k)
    }

    /// Triangular membership grade of `x`. A vertical leg (`l == m` or
    /// `m == u`) is a step that attains 1 at `m`.
    pub fn membership_at(&self, x: f64) -> f64 {
        if x < self.l || x > self.u {
            0.0
        } else if x == self.m {
            1.0
        } else if x < self.m {
            (x - self.l) / (self.m - self.l)
        } else {
            (self.u - x) / (self.u - self.m)
        }
    }

    pub fn defuzzify(&self, attitude: Attitude) -> f64 {
        match attitude {
            Attitude::Pessimistic => self.l,
            Attitude::Moderate => self.m,
            Attitude::Optimistic => self.u,
        }
    }

    /// True if `other` is the reciprocal of `self` within a relative tolerance.
    pub fn is_reciprocal_of(&self, other: &Tfn, tolerance: f64) -> bool {
        (self.l * other.u - 1.0).abs() <= tolerance
            && (self.m * other.m - 1.0).abs() <= tolerance
            && (self.u * other.l - 1.0).abs() <= tolerance
    }
}

pub fn tfn_add(a: Tfn, b: Tfn) -> Tfn {
    a.add(b)
}

pub fn tfn_mul(a: Tfn, b: Tfn) -> Result<Tfn, FuzzyError> {
    a.mul(b)
}

pub fn tfn_invert(a: Tfn) -> Result<Tfn, FuzzyError> {
    a.invert()
}

impl fmt::Display for Tfn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.4}/{:.4}/{:.4}", self.l, self.m, self.u)
    }
}

/// Accepts `[l, m, u]`, `(l, m, u)` and `l/m/u`.
impl FromStr for Tfn {
    type Err = FuzzyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim();
        let inner = trimmed
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .or_else(|| trimmed.strip_prefix('(').and_then(|r| r.strip_suffix(')')));
        let parts: Vec<&str> = match inner {
            Some(body) => body.split(',').collect(),
            None => trimmed.split('/').collect(),
        };
        if parts.len() != 3 {
            return Err(FuzzyError::Parse(s.to_string()));
        }
        let mut vals = [0.0; 3];
        for (slot, p) in vals.iter_mut().zip(&parts) {
            *slot = p.trim().parse().map_err(|_| FuzzyError::Parse(s.to_string()))?;
        }
        Tfn::new(vals[0], vals[1], vals[2])
    }
}

/// Decision maker's attitude when collapsing a fuzzy judgment to a crisp one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Attitude {
    Pessimistic,
    Moderate,
    Optimistic,
}

impl Attitude {
    pub const ALL: [Attitude; 3] = [Attitude::Pessimistic, Attitude::Moderate, Attitude::Optimistic];

    pub fn as_str(self) -> &'static str {
        match self {
            Attitude::Pessimistic => "pessimistic",
            Attitude::Moderate => "moderate",
            Attitude::Optimistic => "optimistic",
        }
    }
}

impl FromStr for Attitude {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "pessimistic" => Ok(Attitude::Pessimistic),
            "moderate" => Ok(Attitude::Moderate),
            "optimistic" => Ok(Attitude::Optimistic),
            other => Err(format!("unknown attitude {other:?}")),
        }
    }
}

pub fn defuzzify(a: Tfn, attitude: Attitude) -> f64 {
    a.defuzzify(attitude)
}

/// Fuzzy counterpart of a 1..9 judgment. Odd values follow the usual fuzzy
/// scale (1 is exact, 9 is capped at the scale maximum); even values spread
/// by 2 on either side, clamped to `[1, 9]`.
pub fn scale_to_tfn(saaty: u32, reciprocal: bool) -> Result<Tfn, FuzzyError> {
    let t = match saaty {
        1 => ONE,
        3 => Tfn::raw(1.0, 3.0, 5.0),
        5 => Tfn::raw(3.0, 5.0, 7.0),
        7 => Tfn::raw(5.0, 7.0, 9.0),
        9 => Tfn::raw(7.0, 9.0, 9.0),
        k @ (2 | 4 | 6 | 8) => {
            let k = k as f64;
            Tfn::raw((k - 2.0).max(1.0), k, (k + 2.0).min(9.0))
        }
        other => return Err(FuzzyError::OutOfScale(other)),
    };
    if reciprocal {
        t.invert()
    } else {
        Ok(t)
    }
}

/// A fuzzy cell rewritten by lenient repair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzyCellRepair {
    pub i: usize,
    pub j: usize,
    pub before: [f64; 3],
    pub after: Tfn,
}

/// Square matrix of fuzzy judgments with unit diagonal and (approximately)
/// reciprocal off-diagonal cells.
///
/// Reciprocity is only required within [`LENIENT_TOLERANCE`] because
/// hand-typed tables carry rounded reciprocals; cells are kept as given.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyMatrix {
    n: usize,
    cells: Vec<Tfn>,
    labels: Vec<String>,
}

/// Raw cell as read from input, possibly violating `l <= m <= u`.
pub type RawTfn = [f64; 3];

fn check_square<T>(raw: &[Vec<T>]) -> Result<usize, FuzzyError> {
    let n = raw.len();
    if n == 0 {
        return Err(FuzzyError::Empty);
    }
    for (row, r) in raw.iter().enumerate() {
        if r.len() != n {
            return Err(FuzzyError::NonSquare { row, len: r.len(), expected: n });
        }
    }
    Ok(n)
}

fn well_formed(c: RawTfn) -> Option<Tfn> {
    Tfn::new(c[0], c[1], c[2]).ok().filter(Tfn::is_positive)
}

fn sorted(c: RawTfn) -> RawTfn {
    let mut s = c;
    s.sort_by(f64::total_cmp);
    s
}

impl FuzzyMatrix {
    /// Strict validation: every cell well formed and positive, unit diagonal,
    /// reciprocity within the lenient tolerance. No cell is altered.
    pub fn validate(raw: &[Vec<RawTfn>]) -> Result<Self, FuzzyError> {
        let n = check_square(raw)?;
        let mut cells = Vec::with_capacity(n * n);
        for (i, row) in raw.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                let t = Tfn::new(c[0], c[1], c[2]).map_err(|_| FuzzyError::MalformedCell {
                    i,
                    j,
                    tfn: Tfn { l: c[0], m: c[1], u: c[2] },
                })?;
                if !t.is_positive() {
                    return Err(FuzzyError::NonPositiveCell { i, j, tfn: t });
                }
                cells.push(t);
            }
        }
        for i in 0..n {
            let d = cells[i * n + i];
            if !d.is_reciprocal_of(&ONE, LENIENT_TOLERANCE) {
                return Err(FuzzyError::DiagonalNotOne { i, tfn: d });
            }
            for j in (i + 1)..n {
                let (a, b) = (cells[i * n + j], cells[j * n + i]);
                if !a.is_reciprocal_of(&b, LENIENT_TOLERANCE) {
                    return Err(FuzzyError::ReciprocityViolation { i, j, a_ij: a, a_ji: b });
                }
            }
        }
        Ok(Self { n, cells, labels: default_labels(n) })
    }

    /// Validates in strict mode, or repairs in lenient mode.
    pub fn load(raw: &[Vec<RawTfn>], strictness: Strictness) -> Result<(Self, Vec<FuzzyCellRepair>), FuzzyError> {
        match strictness {
            Strictness::Strict => Self::validate(raw).map(|m| (m, Vec::new())),
            Strictness::Lenient => Self::repair(raw),
        }
    }

    /// Lenient repair, upper triangle authoritative.
    ///
    /// The diagonal becomes `(1,1,1)`. A pair whose cells are well formed and
    /// reciprocal within tolerance is kept verbatim. Otherwise the lower cell
    /// is replaced by the inverse of the upper one; if the upper cell is itself
    /// malformed it is taken from the inverse of a well-formed lower cell, or
    /// re-sorted when both are malformed.
    pub fn repair(raw: &[Vec<RawTfn>]) -> Result<(Self, Vec<FuzzyCellRepair>), FuzzyError> {
        let n = check_square(raw)?;
        let mut cells = vec![ONE; n * n];
        let mut log = Vec::new();
        for i in 0..n {
            if well_formed(raw[i][i]) != Some(ONE) {
                log.push(FuzzyCellRepair { i, j: i, before: raw[i][i], after: ONE });
            }
            for j in (i + 1)..n {
                let (up, lo) = (raw[i][j], raw[j][i]);
                let (a, b) = match (well_formed(up), well_formed(lo)) {
                    (Some(a), Some(b)) if a.is_reciprocal_of(&b, LENIENT_TOLERANCE) => (a, b),
                    (Some(a), _) => {
                        let b = a.invert()?;
                        log.push(FuzzyCellRepair { i: j, j: i, before: lo, after: b });
                        (a, b)
                    }
                    (None, Some(b)) => {
                        let a = b.invert()?;
                        log.push(FuzzyCellRepair { i, j, before: up, after: a });
                        (a, b)
                    }
                    (None, None) => {
                        let s = sorted(up);
                        let a = well_formed(s).ok_or(FuzzyError::NonPositiveCell {
                            i,
                            j,
                            tfn: Tfn { l: s[0], m: s[1], u: s[2] },
                        })?;
                        let b = a.invert()?;
                        log.push(FuzzyCellRepair { i, j, before: up, after: a });
                        log.push(FuzzyCellRepair { i: j, j: i, before: lo, after: b });
                        (a, b)
                    }
                };
                cells[i * n + j] = a;
                cells[j * n + i] = b;
            }
        }
        Ok((Self { n, cells, labels: default_labels(n) }, log))
    }

    /// Builds from the strict upper triangle (row-major), lower cells are exact inverses.
    pub fn from_upper(n: usize, upper: &[Tfn]) -> Result<Self, FuzzyError> {
        if n == 0 {
            return Err(FuzzyError::Empty);
        }
        let expected = n * (n - 1) / 2;
        if upper.len() != expected {
            return Err(FuzzyError::NonSquare { row: 0, len: upper.len(), expected });
        }
        let mut cells = vec![ONE; n * n];
        let mut k = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                let a = upper[k];
                k += 1;
                if !a.is_positive() {
                    return Err(FuzzyError::NonPositiveCell { i, j, tfn: a });
                }
                cells[i * n + j] = a;
                cells[j * n + i] = a.invert()?;
            }
        }
        Ok(Self { n, cells, labels: default_labels(n) })
    }

    pub fn with_labels<S: Into<String>>(mut self, labels: impl IntoIterator<Item = S>) -> Result<Self, FuzzyError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() != self.n {
            return Err(FuzzyError::LabelCount { expected: self.n, got: labels.len() });
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

    pub fn get(&self, i: usize, j: usize) -> Tfn {
        self.cells[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[Tfn] {
        &self.cells[i * self.n..(i + 1) * self.n]
    }

    pub fn upper(&self) -> Vec<Tfn> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                out.push(self.get(i, j));
            }
        }
        out
    }

    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.n;
        assert_eq!(perm.len(), n, "permutation length");
        let mut cells = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                cells.push(self.get(perm[a], perm[b]));
            }
        }
        let labels = perm.iter().map(|&p| self.labels[p].clone()).collect();
        Self { n, cells, labels }
    }

    /// Multiplies every cell by `k`. The result is no longer reciprocal; used
    /// to probe scale invariance of the extent computation.
    pub fn scaled(&self, k: f64) -> Self {
        Self {
            n: self.n,
            cells: self.cells.iter().map(|c| c.scale(k)).collect(),
            labels: self.labels.clone(),
        }
    }

    /// Strict upper triangle collapsed with `attitude`.
    pub fn defuzzified_upper(&self, attitude: Attitude) -> Vec<f64> {
        self.upper().iter().map(|t| t.defuzzify(attitude)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(l: f64, m: f64, u: f64) -> Tfn {
        Tfn::new(l, m, u).unwrap()
    }

    fn close(a: Tfn, b: Tfn, tol: f64) -> bool {
        (a.l - b.l).abs() <= tol && (a.m - b.m).abs() <= tol && (a.u - b.u).abs() <= tol
    }

    #[test]
    fn addition() {
        assert_eq!(tfn_add(ONE, Tfn::crisp(0.0)), ONE);
        let c2 = [t(3.0, 5.0, 7.0), ONE, ONE, t(5.0, 7.0, 9.0)];
        assert_eq!(c2.into_iter().fold(Tfn::crisp(0.0), tfn_add), t(10.0, 14.0, 18.0));
        let c1 = [ONE, t(0.14, 0.2, 0.33), t(0.2, 0.33, 1.0), ONE];
        let sum = c1.into_iter().fold(Tfn::crisp(0.0), tfn_add);
        assert!(close(sum, t(2.34, 2.53, 3.33), 1e-12), "{sum}");
    }

    #[test]
    fn multiplication() {
        let x = t(2.0, 3.0, 4.0);
        assert_eq!(tfn_mul(ONE, x).unwrap(), x);
        assert_eq!(tfn_mul(x, t(0.5, 1.0, 2.0)).unwrap(), t(1.0, 3.0, 8.0));
        let s2 = tfn_mul(t(10.0, 14.0, 18.0), t(1.0 / 39.73, 1.0 / 30.816, 1.0 / 22.563)).unwrap();
        assert!(close(s2, t(0.2517, 0.4543, 0.7978), 5e-5), "{s2}");
        assert!(matches!(tfn_mul(Tfn::crisp(0.0), x), Err(FuzzyError::NonPositiveOperand(_))));
    }

    #[test]
    fn inversion() {
        let inv = tfn_invert(t(1.0, 3.0, 5.0)).unwrap();
        assert!(close(inv, t(0.2, 1.0 / 3.0, 1.0), 1e-15));
        assert_eq!(tfn_invert(ONE).unwrap(), ONE);
        assert!(tfn_invert(t(0.0, 1.0, 2.0)).is_err());
    }

    #[test]
    fn membership() {
        let x = t(1.0, 3.0, 5.0);
        assert_eq!(x.membership_at(3.0), 1.0);
        assert_eq!(x.membership_at(2.0), 0.5);
        assert_eq!(x.membership_at(4.5), 0.25);
        assert_eq!(x.membership_at(7.0), 0.0);
        assert_eq!(x.membership_at(0.5), 0.0);
        // vertical legs
        let step = t(1.0, 1.0, 3.0);
        assert_eq!(step.membership_at(1.0), 1.0);
        assert_eq!(step.membership_at(2.0), 0.5);
        assert_eq!(ONE.membership_at(1.0), 1.0);
    }

    #[test]
    fn scale() {
        assert_eq!(scale_to_tfn(5, false).unwrap(), t(3.0, 5.0, 7.0));
        assert_eq!(scale_to_tfn(1, false).unwrap(), ONE);
        assert_eq!(scale_to_tfn(9, false).unwrap(), t(7.0, 9.0, 9.0));
        assert_eq!(scale_to_tfn(2, false).unwrap(), t(1.0, 2.0, 4.0));
        assert_eq!(scale_to_tfn(8, false).unwrap(), t(6.0, 8.0, 9.0));
        let r7 = scale_to_tfn(7, true).unwrap();
        assert!(close(r7, t(1.0 / 9.0, 1.0 / 7.0, 1.0 / 5.0), 1e-15));
        assert_eq!(scale_to_tfn(0, false), Err(FuzzyError::OutOfScale(0)));
        assert_eq!(scale_to_tfn(10, true), Err(FuzzyError::OutOfScale(10)));
        for k in 1..=9 {
            assert_eq!(scale_to_tfn(k, false).unwrap().m(), k as f64);
        }
    }

    #[test]
    fn attitudes() {
        let x = t(3.0, 5.0, 7.0);
        assert_eq!(defuzzify(x, Attitude::Optimistic), 7.0);
        assert_eq!(defuzzify(x, Attitude::Moderate), 5.0);
        assert_eq!(defuzzify(x, Attitude::Pessimistic), 3.0);
        assert_eq!("Optimistic".parse::<Attitude>().unwrap(), Attitude::Optimistic);
        assert!("hopeful".parse::<Attitude>().is_err());
    }

    #[test]
    fn text_forms() {
        assert_eq!(t(0.2, 1.0 / 3.0, 1.0).to_string(), "0.2000/0.3333/1.0000");
        assert_eq!("[0.14, 0.2, 0.33]".parse::<Tfn>().unwrap(), t(0.14, 0.2, 0.33));
        assert_eq!("1/3/5".parse::<Tfn>().unwrap(), t(1.0, 3.0, 5.0));
        assert!(matches!("[0.11, 0.2, 0.14]".parse::<Tfn>(), Err(FuzzyError::Malformed { .. })));
        assert!(matches!("1/3".parse::<Tfn>(), Err(FuzzyError::Parse(_))));
        let json = serde_json::to_string(&t(1.0, 3.0, 5.0)).unwrap();
        assert_eq!(json, "[1.0,3.0,5.0]");
        assert!(serde_json::from_str::<Tfn>("[3.0,1.0,5.0]").is_err());
    }

    fn uncertainty_as_typed() -> Vec<Vec<RawTfn>> {
        vec![
            vec![[1.0, 1.0, 1.0], [3.0, 5.0, 7.0], [3.0, 5.0, 7.0]],
            vec![[0.14, 0.2, 0.32], [1.0, 1.0, 1.0], [5.0, 7.0, 9.0]],
            vec![[0.14, 0.2, 0.33], [0.11, 0.2, 0.14], [1.0, 1.0, 1.0]],
        ]
    }

    #[test]
    fn strict_rejects_malformed_cell() {
        let err = FuzzyMatrix::validate(&uncertainty_as_typed()).unwrap_err();
        assert!(matches!(err, FuzzyError::MalformedCell { i: 2, j: 1, .. }), "{err}");
    }

    #[test]
    fn lenient_repairs_only_the_bad_cell() {
        let (m, log) = FuzzyMatrix::repair(&uncertainty_as_typed()).unwrap();
        assert_eq!(log.len(), 1);
        assert_eq!((log[0].i, log[0].j), (2, 1));
        assert!(close(m.get(2, 1), t(1.0 / 9.0, 1.0 / 7.0, 1.0 / 5.0), 1e-15));
        // rounded but acceptable reciprocals are kept as typed
        assert_eq!(m.get(1, 0), t(0.14, 0.2, 0.32));
        assert!(FuzzyMatrix::validate(&m_rows(&m)).is_ok());
    }

    fn m_rows(m: &FuzzyMatrix) -> Vec<Vec<RawTfn>> {
        (0..m.order()).map(|i| m.row(i).iter().map(|&c| c.into()).collect()).collect()
    }

    #[test]
    fn repair_prefers_upper_and_falls_back() {
        // malformed upper, sound lower
        let raw = vec![vec![[1.0; 3], [5.0, 3.0, 7.0]], vec![[1.0 / 7.0, 0.2, 1.0 / 3.0], [1.0; 3]]];
        let (m, log) = FuzzyMatrix::repair(&raw).unwrap();
        assert!(close(m.get(0, 1), t(3.0, 5.0, 7.0), 1e-12));
        assert_eq!(log.len(), 1);
        // both malformed: re-sort upper
        let raw = vec![vec![[1.0; 3], [5.0, 3.0, 7.0]], vec![[0.5, 0.1, 0.2], [2.0, 1.0, 1.0]]];
        let (m, log) = FuzzyMatrix::repair(&raw).unwrap();
        assert_eq!(m.get(0, 1), t(3.0, 5.0, 7.0));
        assert_eq!(m.get(1, 1), ONE);
        assert_eq!(log.len(), 3);
    }

    #[test]
    fn from_upper_inverts() {
        let m = FuzzyMatrix::from_upper(2, &[t(1.0, 3.0, 5.0)]).unwrap();
        assert!(close(m.get(1, 0), t(0.2, 1.0 / 3.0, 1.0), 1e-15));
        assert_eq!(m.defuzzified_upper(Attitude::Optimistic), vec![5.0]);
    }
}
