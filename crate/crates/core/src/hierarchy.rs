//! Goal / criteria / alternatives hierarchies and their synthesis.
//!
//! Global scores use distributive synthesis:
//! `score[a] = sum_c criteria_weight[c] * local_weight[c][a]`.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::comparison::{
    consistency, eigen_weights, geometric_mean_weights, ComparisonMatrix, ConsistencyReport, MatrixError,
    WeightMethod, WeightVector,
};
use crate::extent::{extent_weights, ExtentError};
use crate::fuzzy::{Attitude, FuzzyError, FuzzyMatrix, Tfn};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("{matrix}: {source}")]
    Matrix { matrix: MatrixSelector, source: MatrixError },
    #[error("{matrix}: {source}")]
    Fuzzy { matrix: MatrixSelector, source: FuzzyError },
    #[error("{matrix}: {source}")]
    Extent { matrix: MatrixSelector, source: ExtentError },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("operation requires a {expected} problem")]
    ModeMismatch { expected: Mode },
    #[error("rankings cover different alternative sets")]
    AlternativeSetMismatch,
    #[error("{0}")]
    InvalidProblem(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Crisp,
    Fuzzy,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Crisp => "crisp",
            Mode::Fuzzy => "fuzzy",
        })
    }
}

/// Identifies one judgment matrix inside a problem.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixSelector {
    Criteria,
    /// Alternatives compared under the named criterion.
    Criterion(String),
}

impl fmt::Display for MatrixSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixSelector::Criteria => f.write_str("criteria matrix"),
            MatrixSelector::Criterion(name) => write!(f, "alternatives under {name:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Judgments {
    Crisp { criteria: ComparisonMatrix, alternatives: Vec<ComparisonMatrix> },
    Fuzzy { criteria: FuzzyMatrix, alternatives: Vec<FuzzyMatrix> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecisionProblem {
    goal: String,
    criteria: Vec<String>,
    alternatives: Vec<String>,
    judgments: Judgments,
}

fn check_names(kind: &str, names: &[String]) -> Result<(), EngineError> {
    if names.is_empty() {
        return Err(EngineError::InvalidProblem(format!("{kind} list is empty")));
    }
    let mut seen = HashSet::new();
    for n in names {
        if n.trim().is_empty() {
            return Err(EngineError::InvalidProblem(format!("blank name in {kind}")));
        }
        if !seen.insert(n.as_str()) {
            return Err(EngineError::InvalidProblem(format!("duplicate name {n:?} in {kind}")));
        }
    }
    Ok(())
}

fn order_check(selector: &MatrixSelector, got: usize, expected: usize) -> Result<(), EngineError> {
    if got == expected {
        Ok(())
    } else {
        Err(EngineError::DimensionMismatch(format!("{selector} has order {got}, expected {expected}")))
    }
}

impl DecisionProblem {
    pub fn new(
        goal: impl Into<String>,
        criteria: Vec<String>,
        alternatives: Vec<String>,
        judgments: Judgments,
    ) -> Result<Self, EngineError> {
        check_names("criteria", &criteria)?;
        check_names("alternatives", &alternatives)?;
        let judgments = match judgments {
            Judgments::Crisp { criteria: cm, alternatives: ams } => {
                order_check(&MatrixSelector::Criteria, cm.order(), criteria.len())?;
                if ams.len() != criteria.len() {
                    return Err(EngineError::DimensionMismatch(format!(
                        "{} alternative matrices for {} criteria",
                        ams.len(),
                        criteria.len()
                    )));
                }
                let cm = cm.with_labels(criteria.iter().cloned()).expect("order checked");
                let ams = ams
                    .into_iter()
                    .zip(&criteria)
                    .map(|(m, c)| {
                        order_check(&MatrixSelector::Criterion(c.clone()), m.order(), alternatives.len())?;
                        Ok(m.with_labels(alternatives.iter().cloned()).expect("order checked"))
                    })
                    .collect::<Result<_, EngineError>>()?;
                Judgments::Crisp { criteria: cm, alternatives: ams }
            }
            Judgments::Fuzzy { criteria: cm, alternatives: ams } => {
                order_check(&MatrixSelector::Criteria, cm.order(), criteria.len())?;
                if ams.len() != criteria.len() {
                    return Err(EngineError::DimensionMismatch(format!(
                        "{} alternative matrices for {} criteria",
                        ams.len(),
                        criteria.len()
                    )));
                }
                let cm = cm.with_labels(criteria.iter().cloned()).expect("order checked");
                let ams = ams
                    .into_iter()
                    .zip(&criteria)
                    .map(|(m, c)| {
                        order_check(&MatrixSelector::Criterion(c.clone()), m.order(), alternatives.len())?;
                        Ok(m.with_labels(alternatives.iter().cloned()).expect("order checked"))
                    })
                    .collect::<Result<_, EngineError>>()?;
                Judgments::Fuzzy { criteria: cm, alternatives: ams }
            }
        };
        Ok(Self { goal: goal.into(), criteria, alternatives, judgments })
    }

    pub fn goal(&self) -> &str {
        &self.goal
    }

    pub fn criteria(&self) -> &[String] {
        &self.criteria
    }

    pub fn alternatives(&self) -> &[String] {
        &self.alternatives
    }

    pub fn judgments(&self) -> &Judgments {
        &self.judgments
    }

    pub fn mode(&self) -> Mode {
        match self.judgments {
            Judgments::Crisp { .. } => Mode::Crisp,
            Judgments::Fuzzy { .. } => Mode::Fuzzy,
        }
    }

    /// Criteria matrix first, then one selector per criterion.
    pub fn selectors(&self) -> Vec<MatrixSelector> {
        std::iter::once(MatrixSelector::Criteria)
            .chain(self.criteria.iter().cloned().map(MatrixSelector::Criterion))
            .collect()
    }

    /// Crisp problem obtained by collapsing every fuzzy judgment with
    /// `attitude`. The upper triangle is kept; lower cells become exact
    /// reciprocals.
    pub fn defuzzified(&self, attitude: Attitude) -> Result<DecisionProblem, EngineError> {
        let Judgments::Fuzzy { criteria, alternatives } = &self.judgments else {
            return Err(EngineError::ModeMismatch { expected: Mode::Fuzzy });
        };
        let collapse = |m: &FuzzyMatrix, sel: MatrixSelector| {
            ComparisonMatrix::from_upper(m.order(), &m.defuzzified_upper(attitude))
                .map_err(|source| EngineError::Matrix { matrix: sel, source })
        };
        let cm = collapse(criteria, MatrixSelector::Criteria)?;
        let ams = alternatives
            .iter()
            .zip(&self.criteria)
            .map(|(m, c)| collapse(m, MatrixSelector::Criterion(c.clone())))
            .collect::<Result<_, _>>()?;
        DecisionProblem::new(
            self.goal.clone(),
            self.criteria.clone(),
            self.alternatives.clone(),
            Judgments::Crisp { criteria: cm, alternatives: ams },
        )
    }

    /// Relabels alternatives: new alternative `k` is old `perm[k]`.
    pub fn permute_alternatives(&self, perm: &[usize]) -> DecisionProblem {
        let alternatives = perm.iter().map(|&p| self.alternatives[p].clone()).collect();
        let judgments = match &self.judgments {
            Judgments::Crisp { criteria, alternatives } => Judgments::Crisp {
                criteria: criteria.clone(),
                alternatives: alternatives.iter().map(|m| m.permuted(perm)).collect(),
            },
            Judgments::Fuzzy { criteria, alternatives } => Judgments::Fuzzy {
                criteria: criteria.clone(),
                alternatives: alternatives.iter().map(|m| m.permuted(perm)).collect(),
            },
        };
        DecisionProblem { goal: self.goal.clone(), criteria: self.criteria.clone(), alternatives, judgments }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixDiagnostic {
    pub matrix: MatrixSelector,
    pub report: ConsistencyReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedResult {
    pub goal: String,
    pub criteria: Vec<String>,
    pub alternatives: Vec<String>,
    pub method: WeightMethod,
    pub attitude: Option<Attitude>,
    pub criteria_weights: WeightVector,
    /// One vector over alternatives per criterion.
    pub local_weights: Vec<WeightVector>,
    pub global_scores: Vec<f64>,
    /// Alternative indices, best first.
    pub rank_order: Vec<usize>,
    /// Crisp mode only; criteria matrix first.
    pub diagnostics: Vec<MatrixDiagnostic>,
}

impl RankedResult {
    pub fn top(&self) -> usize {
        self.rank_order[0]
    }

    /// Position of each alternative in the ranking (0 = best).
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.rank_order.len()];
        for (p, &a) in self.rank_order.iter().enumerate() {
            pos[a] = p;
        }
        pos
    }
}

/// Descending by score, ties (to 1e-12) broken by input index.
pub fn rank_order(scores: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by_key(|&i| (-(scores[i] * 1e12).round() as i64, i));
    idx
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CrispMethod {
    Eigen,
    #[serde(alias = "geomean")]
    GeometricMean,
}

impl std::str::FromStr for CrispMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "eigen" => Ok(CrispMethod::Eigen),
            "geomean" | "geometric-mean" => Ok(CrispMethod::GeometricMean),
            other => Err(format!("unknown method {other:?} (expected eigen or geomean)")),
        }
    }
}

/// How to solve a problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Solve {
    Crisp(CrispMethod),
    Fuzzy,
    Attitude(Attitude),
}

impl Solve {
    /// The natural default for a problem's mode.
    pub fn default_for(mode: Mode) -> Solve {
        match mode {
            Mode::Crisp => Solve::Crisp(CrispMethod::GeometricMean),
            Mode::Fuzzy => Solve::Fuzzy,
        }
    }
}

pub fn solve(p: &DecisionProblem, how: Solve) -> Result<RankedResult, EngineError> {
    match how {
        Solve::Crisp(method) => solve_crisp(p, method),
        Solve::Fuzzy => solve_fuzzy(p),
        Solve::Attitude(a) => what_if_attitude(p, a),
    }
}

fn crisp_weights(m: &ComparisonMatrix, method: CrispMethod, sel: &MatrixSelector) -> Result<WeightVector, EngineError> {
    match method {
        CrispMethod::Eigen => eigen_weights(m)
            .map(|(w, _)| w)
            .map_err(|source| EngineError::Matrix { matrix: sel.clone(), source }),
        CrispMethod::GeometricMean => Ok(geometric_mean_weights(m)),
    }
}

pub fn solve_crisp(p: &DecisionProblem, method: CrispMethod) -> Result<RankedResult, EngineError> {
    let Judgments::Crisp { criteria, alternatives } = &p.judgments else {
        return Err(EngineError::ModeMismatch { expected: Mode::Crisp });
    };
    let selectors = p.selectors();
    let mut diagnostics = Vec::with_capacity(selectors.len());
    let matrices = std::iter::once(criteria).chain(alternatives);
    for (m, sel) in matrices.zip(&selectors) {
        let report = consistency(m).map_err(|source| EngineError::Matrix { matrix: sel.clone(), source })?;
        diagnostics.push(MatrixDiagnostic { matrix: sel.clone(), report });
    }
    let criteria_weights = crisp_weights(criteria, method, &selectors[0])?;
    let local_weights = alternatives
        .iter()
        .zip(&selectors[1..])
        .map(|(m, sel)| crisp_weights(m, method, sel))
        .collect::<Result<Vec<_>, _>>()?;
    finish(p, criteria_weights, local_weights, diagnostics, None)
}

pub fn solve_fuzzy(p: &DecisionProblem) -> Result<RankedResult, EngineError> {
    let Judgments::Fuzzy { criteria, alternatives } = &p.judgments else {
        return Err(EngineError::ModeMismatch { expected: Mode::Fuzzy });
    };
    let selectors = p.selectors();
    let weigh = |m: &FuzzyMatrix, sel: &MatrixSelector| {
        extent_weights(m).map_err(|source| EngineError::Extent { matrix: sel.clone(), source })
    };
    let criteria_weights = weigh(criteria, &selectors[0])?;
    let local_weights = alternatives
        .iter()
        .zip(&selectors[1..])
        .map(|(m, sel)| weigh(m, sel))
        .collect::<Result<Vec<_>, _>>()?;
    finish(p, criteria_weights, local_weights, Vec::new(), None)
}

fn finish(
    p: &DecisionProblem,
    criteria_weights: WeightVector,
    local_weights: Vec<WeightVector>,
    diagnostics: Vec<MatrixDiagnostic>,
    attitude: Option<Attitude>,
) -> Result<RankedResult, EngineError> {
    let locals: Vec<&[f64]> = local_weights.iter().map(WeightVector::weights).collect();
    let global_scores = aggregate_global(criteria_weights.weights(), &locals)?;
    Ok(RankedResult {
        goal: p.goal.clone(),
        criteria: p.criteria.clone(),
        alternatives: p.alternatives.clone(),
        method: criteria_weights.method(),
        attitude,
        rank_order: rank_order(&global_scores),
        criteria_weights,
        local_weights,
        global_scores,
        diagnostics,
    })
}

/// Weighted sum of local priorities. Inputs are used as given; when each
/// sums to one, so does the output.
pub fn aggregate_global(criteria_w: &[f64], locals: &[&[f64]]) -> Result<Vec<f64>, EngineError> {
    if criteria_w.len() != locals.len() {
        return Err(EngineError::DimensionMismatch(format!(
            "{} criteria weights for {} local vectors",
            criteria_w.len(),
            locals.len()
        )));
    }
    let Some(first) = locals.first() else {
        return Err(EngineError::DimensionMismatch("no criteria".into()));
    };
    let n = first.len();
    if let Some(bad) = locals.iter().find(|l| l.len() != n) {
        return Err(EngineError::DimensionMismatch(format!(
            "local vectors of lengths {n} and {}",
            bad.len()
        )));
    }
    let mut scores = vec![0.0; n];
    for (cw, local) in criteria_w.iter().zip(locals) {
        for (s, lw) in scores.iter_mut().zip(local.iter()) {
            *s += cw * lw;
        }
    }
    Ok(scores)
}

/// Defuzzifies with `attitude` and solves the crisp problem by geometric mean.
pub fn what_if_attitude(p: &DecisionProblem, attitude: Attitude) -> Result<RankedResult, EngineError> {
    let crisp = p.defuzzified(attitude)?;
    let mut r = solve_crisp(&crisp, CrispMethod::GeometricMean)?;
    r.attitude = Some(attitude);
    Ok(r)
}

/// A pair of alternatives whose relative order differs between two rankings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankFlip {
    pub first: usize,
    pub second: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingSide {
    pub label: String,
    pub scores: Vec<f64>,
    pub rank_order: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub alternatives: Vec<String>,
    pub left: RankingSide,
    pub right: RankingSide,
    pub flips: Vec<RankFlip>,
    pub top_choice_agrees: bool,
}

pub fn describe(r: &RankedResult) -> String {
    match (r.attitude, r.method) {
        (Some(a), _) => format!("{} attitude", a.as_str()),
        (None, WeightMethod::Extent) => "fuzzy AHP (extent analysis)".to_string(),
        (None, m) => format!("classical AHP ({})", m.as_str()),
    }
}

fn flips_between(a: &[usize], b: &[usize], among: usize) -> Vec<RankFlip> {
    // a and b are position vectors
    let mut out = Vec::new();
    for x in 0..among {
        for y in (x + 1)..among {
            if (a[x] < a[y]) != (b[x] < b[y]) {
                out.push(RankFlip { first: x, second: y });
            }
        }
    }
    out
}

pub fn compare_rankings(r1: &RankedResult, r2: &RankedResult) -> Result<ComparisonReport, EngineError> {
    if r1.alternatives != r2.alternatives {
        return Err(EngineError::AlternativeSetMismatch);
    }
    let n = r1.alternatives.len();
    let flips = flips_between(&r1.positions(), &r2.positions(), n);
    let side = |r: &RankedResult| RankingSide {
        label: describe(r),
        scores: r.global_scores.clone(),
        rank_order: r.rank_order.clone(),
    };
    Ok(ComparisonReport {
        alternatives: r1.alternatives.clone(),
        left: side(r1),
        right: side(r2),
        top_choice_agrees: r1.top() == r2.top(),
        flips,
    })
}

/// Judgments of a new alternative against each existing one, per criterion:
/// `judgments[c][k]` is how the new alternative compares to alternative `k`.
#[derive(Debug, Clone, PartialEq)]
pub enum ProbeJudgments {
    Crisp(Vec<Vec<f64>>),
    Fuzzy(Vec<Vec<Tfn>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewAlternative {
    pub name: String,
    pub judgments: ProbeJudgments,
}

impl NewAlternative {
    /// An exact copy of alternative `k` under every criterion.
    pub fn clone_of(p: &DecisionProblem, k: usize, name: impl Into<String>) -> Self {
        let judgments = match &p.judgments {
            Judgments::Crisp { alternatives, .. } => {
                ProbeJudgments::Crisp(alternatives.iter().map(|m| m.row(k).to_vec()).collect())
            }
            Judgments::Fuzzy { alternatives, .. } => {
                ProbeJudgments::Fuzzy(alternatives.iter().map(|m| m.row(k).to_vec()).collect())
            }
        };
        Self { name: name.into(), judgments }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub added: Option<String>,
    pub before: RankedResult,
    pub after: RankedResult,
    /// Pairs of pre-existing alternatives whose relative order changed.
    pub flips: Vec<RankFlip>,
}

impl ProbeReport {
    pub fn reversed(&self) -> bool {
        !self.flips.is_empty()
    }
}

fn extend_problem(p: &DecisionProblem, new: &NewAlternative) -> Result<DecisionProblem, EngineError> {
    let n = p.alternatives.len();
    let mut alternatives = p.alternatives.clone();
    alternatives.push(new.name.clone());
    let bad_shape = |what: &str| EngineError::DimensionMismatch(format!("new alternative: {what}"));
    let judgments = match (&p.judgments, &new.judgments) {
        (Judgments::Crisp { criteria, alternatives: ams }, ProbeJudgments::Crisp(cols)) => {
            if cols.len() != ams.len() || cols.iter().any(|c| c.len() != n) {
                return Err(bad_shape("expected one value per existing alternative per criterion"));
            }
            let ams = ams
                .iter()
                .zip(cols)
                .zip(&p.criteria)
                .map(|((m, col), c)| {
                    let mut raw: Vec<Vec<f64>> = m.to_rows();
                    for (k, row) in raw.iter_mut().enumerate() {
                        row.push(1.0 / col[k]);
                    }
                    let mut last = col.clone();
                    last.push(1.0);
                    raw.push(last);
                    crate::comparison::repair_matrix(&raw)
                        .map_err(|source| EngineError::Matrix { matrix: MatrixSelector::Criterion(c.clone()), source })
                })
                .collect::<Result<_, _>>()?;
            Judgments::Crisp { criteria: criteria.clone(), alternatives: ams }
        }
        (Judgments::Fuzzy { criteria, alternatives: ams }, ProbeJudgments::Fuzzy(cols)) => {
            if cols.len() != ams.len() || cols.iter().any(|c| c.len() != n) {
                return Err(bad_shape("expected one value per existing alternative per criterion"));
            }
            let ams = ams
                .iter()
                .zip(cols)
                .zip(&p.criteria)
                .map(|((m, col), c)| {
                    let sel = || MatrixSelector::Criterion(c.clone());
                    let mut upper = Vec::new();
                    for i in 0..=n {
                        for j in (i + 1)..=n {
                            let cell = if j < n {
                                m.get(i, j)
                            } else {
                                col[i].invert().map_err(|source| EngineError::Fuzzy { matrix: sel(), source })?
                            };
                            upper.push(cell);
                        }
                    }
                    FuzzyMatrix::from_upper(n + 1, &upper).map_err(|source| EngineError::Fuzzy { matrix: sel(), source })
                })
                .collect::<Result<_, _>>()?;
            Judgments::Fuzzy { criteria: criteria.clone(), alternatives: ams }
        }
        (j, _) => {
            let expected = match j {
                Judgments::Crisp { .. } => Mode::Crisp,
                Judgments::Fuzzy { .. } => Mode::Fuzzy,
            };
            return Err(EngineError::ModeMismatch { expected });
        }
    };
    DecisionProblem::new(p.goal.clone(), p.criteria.clone(), alternatives, judgments)
}

/// Solves before and after appending `new` and reports order changes among
/// the original alternatives.
pub fn rank_reversal_probe(
    p: &DecisionProblem,
    new: Option<&NewAlternative>,
    how: Solve,
) -> Result<ProbeReport, EngineError> {
    let before = solve(p, how)?;
    let Some(new) = new else {
        return Ok(ProbeReport { added: None, after: before.clone(), before, flips: Vec::new() });
    };
    let extended = extend_problem(p, new)?;
    let after = solve(&extended, how)?;
    let flips = flips_between(&before.positions(), &after.positions(), p.alternatives.len());
    Ok(ProbeReport { added: Some(new.name.clone()), before, after, flips })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(prefix: &str, n: usize) -> Vec<String> {
        (1..=n).map(|k| format!("{prefix}{k}")).collect()
    }

    fn consistent_problem(cw: &[f64], locals: &[Vec<f64>]) -> DecisionProblem {
        DecisionProblem::new(
            "goal",
            names("C", cw.len()),
            names("A", locals[0].len()),
            Judgments::Crisp {
                criteria: ComparisonMatrix::from_weights(cw).unwrap(),
                alternatives: locals.iter().map(|w| ComparisonMatrix::from_weights(w).unwrap()).collect(),
            },
        )
        .unwrap()
    }

    #[test]
    fn single_criterion_uniform() {
        let p = DecisionProblem::new(
            "g",
            names("C", 1),
            names("A", 3),
            Judgments::Crisp {
                criteria: ComparisonMatrix::from_upper(1, &[]).unwrap(),
                alternatives: vec![ComparisonMatrix::from_upper(3, &[1.0, 1.0, 1.0]).unwrap()],
            },
        )
        .unwrap();
        let r = solve_crisp(&p, CrispMethod::Eigen).unwrap();
        for s in &r.global_scores {
            assert!((s - 1.0 / 3.0).abs() < 1e-12);
        }
        assert_eq!(r.rank_order, vec![0, 1, 2]);
        assert_eq!(r.diagnostics.len(), 2);
    }

    #[test]
    fn consistent_products() {
        let cw = [0.5, 0.3, 0.2];
        let locals = vec![vec![0.6, 0.4], vec![0.1, 0.9], vec![0.5, 0.5]];
        let p = consistent_problem(&cw, &locals);
        for method in [CrispMethod::Eigen, CrispMethod::GeometricMean] {
            let r = solve_crisp(&p, method).unwrap();
            for a in 0..2 {
                let expected: f64 = (0..3).map(|c| cw[c] * locals[c][a]).sum();
                assert!((r.global_scores[a] - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn aggregation() {
        assert_eq!(aggregate_global(&[1.0], &[&[0.2, 0.8]]).unwrap(), vec![0.2, 0.8]);
        let mean = aggregate_global(&[0.5, 0.5], &[&[0.2, 0.8], &[0.6, 0.4]]).unwrap();
        assert!((mean[0] - 0.4).abs() < 1e-15 && (mean[1] - 0.6).abs() < 1e-15);
        assert!(matches!(aggregate_global(&[1.0], &[]), Err(EngineError::DimensionMismatch(_))));
        assert!(matches!(
            aggregate_global(&[0.5, 0.5], &[&[0.2, 0.8], &[1.0]]),
            Err(EngineError::DimensionMismatch(_))
        ));
    }

    #[test]
    fn ranking_ties_by_index() {
        assert_eq!(rank_order(&[0.2, 0.5, 0.3]), vec![1, 2, 0]);
        assert_eq!(rank_order(&[0.25, 0.5, 0.25]), vec![1, 0, 2]);
        assert_eq!(rank_order(&[0.5, 0.5 + 1e-15]), vec![0, 1]);
    }

    #[test]
    fn problem_shape_checks() {
        let bad = DecisionProblem::new(
            "g",
            names("C", 2),
            names("A", 2),
            Judgments::Crisp {
                criteria: ComparisonMatrix::from_upper(2, &[2.0]).unwrap(),
                alternatives: vec![ComparisonMatrix::from_upper(2, &[2.0]).unwrap()],
            },
        );
        assert!(matches!(bad, Err(EngineError::DimensionMismatch(_))));
        let dup = DecisionProblem::new(
            "g",
            vec!["C".into(), "C".into()],
            names("A", 2),
            Judgments::Crisp {
                criteria: ComparisonMatrix::from_upper(2, &[2.0]).unwrap(),
                alternatives: vec![ComparisonMatrix::from_upper(2, &[2.0]).unwrap(); 2],
            },
        );
        assert!(matches!(dup, Err(EngineError::InvalidProblem(_))));
    }

    fn result_with(scores: Vec<f64>) -> RankedResult {
        let n = scores.len();
        RankedResult {
            goal: "g".into(),
            criteria: vec!["C".into()],
            alternatives: names("A", n),
            method: WeightMethod::Eigen,
            attitude: None,
            criteria_weights: WeightVector::normalized(vec![1.0], WeightMethod::Eigen).unwrap(),
            local_weights: vec![WeightVector::normalized(scores.clone(), WeightMethod::Eigen).unwrap()],
            rank_order: rank_order(&scores),
            global_scores: scores,
            diagnostics: vec![],
        }
    }

    #[test]
    fn comparison_flips() {
        let a = result_with(vec![0.6, 0.4]);
        let b = result_with(vec![0.3, 0.7]);
        let same = compare_rankings(&a, &a).unwrap();
        assert!(same.flips.is_empty() && same.top_choice_agrees);
        let swapped = compare_rankings(&a, &b).unwrap();
        assert_eq!(swapped.flips, vec![RankFlip { first: 0, second: 1 }]);
        assert!(!swapped.top_choice_agrees);
        let other = result_with(vec![0.2, 0.3, 0.5]);
        assert_eq!(compare_rankings(&a, &other), Err(EngineError::AlternativeSetMismatch));
    }

    #[test]
    fn mode_guards() {
        let p = consistent_problem(&[0.5, 0.5], &[vec![0.5, 0.5], vec![0.5, 0.5]]);
        assert_eq!(solve_fuzzy(&p), Err(EngineError::ModeMismatch { expected: Mode::Fuzzy }));
        assert!(matches!(what_if_attitude(&p, Attitude::Moderate), Err(EngineError::ModeMismatch { .. })));
    }

    #[test]
    fn probe_without_new_alternative_is_noop() {
        let p = consistent_problem(&[0.7, 0.3], &[vec![0.6, 0.4], vec![0.2, 0.8]]);
        let r = rank_reversal_probe(&p, None, Solve::Crisp(CrispMethod::Eigen)).unwrap();
        assert!(!r.reversed());
        assert_eq!(r.before, r.after);
        assert_eq!(r.added, None);
    }

    #[test]
    fn probe_rejects_wrong_shape() {
        let p = consistent_problem(&[0.7, 0.3], &[vec![0.6, 0.4], vec![0.2, 0.8]]);
        let new = NewAlternative { name: "X".into(), judgments: ProbeJudgments::Crisp(vec![vec![1.0]]) };
        assert!(matches!(
            rank_reversal_probe(&p, Some(&new), Solve::Crisp(CrispMethod::Eigen)),
            Err(EngineError::DimensionMismatch(_))
        ));
        let fuzzy = NewAlternative { name: "X".into(), judgments: ProbeJudgments::Fuzzy(vec![]) };
        assert!(matches!(
            rank_reversal_probe(&p, Some(&fuzzy), Solve::Crisp(CrispMethod::Eigen)),
            Err(EngineError::ModeMismatch { .. })
        ));
    }
}
