//! Serializable views of solver output with numbers fixed at 4 decimals.

use std::fmt;
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::comparison::ConsistencyReport;
use crate::hierarchy::{ComparisonReport, MatrixSelector, ProbeReport, RankedResult, RankingSide};

/// A decimal with exactly four fractional digits, stored in ten-thousandths.
/// Serialized as a string such as `"0.3217"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dec4(i64);

impl Dec4 {
    pub fn from_f64(x: f64) -> Self {
        Dec4((x * 1e4).round() as i64)
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 1e4
    }
}

impl From<f64> for Dec4 {
    fn from(x: f64) -> Self {
        Dec4::from_f64(x)
    }
}

impl fmt::Display for Dec4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let abs = self.0.unsigned_abs();
        let s = format!("{sign}{}.{:04}", abs / 10_000, abs % 10_000);
        f.pad(&s)
    }
}

impl FromStr for Dec4 {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let x: f64 = s.trim().parse().map_err(|_| format!("not a decimal: {s:?}"))?;
        if !x.is_finite() {
            return Err(format!("not a finite decimal: {s:?}"));
        }
        Ok(Dec4::from_f64(x))
    }
}

impl Serialize for Dec4 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Dec4 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Number(f64),
        }
        match Repr::deserialize(d)? {
            Repr::Text(s) => s.parse().map_err(de::Error::custom),
            Repr::Number(x) => Ok(Dec4::from_f64(x)),
        }
    }
}

pub fn dec4s(xs: &[f64]) -> Vec<Dec4> {
    xs.iter().copied().map(Dec4::from_f64).collect()
}

pub fn selector_name(sel: &MatrixSelector) -> String {
    match sel {
        MatrixSelector::Criteria => "criteria".to_string(),
        MatrixSelector::Criterion(c) => c.clone(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsistencyView {
    pub matrix: String,
    pub lambda_max: Dec4,
    pub ci: Dec4,
    pub cr: Dec4,
    pub consistent: bool,
}

impl ConsistencyView {
    pub fn new(matrix: impl Into<String>, r: &ConsistencyReport) -> Self {
        Self {
            matrix: matrix.into(),
            lambda_max: r.lambda_max.into(),
            ci: r.ci.into(),
            cr: r.cr.into(),
            consistent: r.consistent,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalWeightsView {
    pub criterion: String,
    pub weights: Vec<Dec4>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultReport {
    pub goal: String,
    pub method: String,
    pub attitude: Option<String>,
    pub criteria: Vec<String>,
    pub alternatives: Vec<String>,
    pub criteria_weights: Vec<Dec4>,
    pub local_weights: Vec<LocalWeightsView>,
    pub global_scores: Vec<Dec4>,
    /// Alternative names, best first.
    pub ranking: Vec<String>,
    pub consistency: Vec<ConsistencyView>,
}

impl From<&RankedResult> for ResultReport {
    fn from(r: &RankedResult) -> Self {
        Self {
            goal: r.goal.clone(),
            method: r.method.as_str().to_string(),
            attitude: r.attitude.map(|a| a.as_str().to_string()),
            criteria: r.criteria.clone(),
            alternatives: r.alternatives.clone(),
            criteria_weights: dec4s(r.criteria_weights.weights()),
            local_weights: r
                .criteria
                .iter()
                .zip(&r.local_weights)
                .map(|(c, w)| LocalWeightsView { criterion: c.clone(), weights: dec4s(w.weights()) })
                .collect(),
            global_scores: dec4s(&r.global_scores),
            ranking: r.rank_order.iter().map(|&k| r.alternatives[k].clone()).collect(),
            consistency: r
                .diagnostics
                .iter()
                .map(|d| ConsistencyView::new(selector_name(&d.matrix), &d.report))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideView {
    pub label: String,
    pub scores: Vec<Dec4>,
    pub ranking: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonView {
    pub alternatives: Vec<String>,
    pub left: SideView,
    pub right: SideView,
    pub flips: Vec<[String; 2]>,
    pub top_choice_agrees: bool,
}

fn side_view(s: &RankingSide, names: &[String]) -> SideView {
    SideView {
        label: s.label.clone(),
        scores: dec4s(&s.scores),
        ranking: s.rank_order.iter().map(|&k| names[k].clone()).collect(),
    }
}

impl From<&ComparisonReport> for ComparisonView {
    fn from(c: &ComparisonReport) -> Self {
        let names = &c.alternatives;
        Self {
            alternatives: names.clone(),
            left: side_view(&c.left, names),
            right: side_view(&c.right, names),
            flips: c
                .flips
                .iter()
                .map(|f| [names[f.first].clone(), names[f.second].clone()])
                .collect(),
            top_choice_agrees: c.top_choice_agrees,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeView {
    pub added: Option<String>,
    pub before: ResultReport,
    pub after: ResultReport,
    pub flips: Vec<[String; 2]>,
    pub rank_reversal: bool,
}

impl From<&ProbeReport> for ProbeView {
    fn from(p: &ProbeReport) -> Self {
        let names = &p.before.alternatives;
        Self {
            added: p.added.clone(),
            before: (&p.before).into(),
            after: (&p.after).into(),
            flips: p
                .flips
                .iter()
                .map(|f| [names[f.first].clone(), names[f.second].clone()])
                .collect(),
            rank_reversal: p.reversed(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dec4_formatting() {
        assert_eq!(Dec4::from_f64(0.32167873).to_string(), "0.3217");
        assert_eq!(Dec4::from_f64(4.0).to_string(), "4.0000");
        assert_eq!(Dec4::from_f64(-1e-17).to_string(), "0.0000");
        assert_eq!(Dec4::from_f64(-0.00051).to_string(), "-0.0005");
        assert_eq!(Dec4::from_f64(12.3456).to_string(), "12.3456");
        assert_eq!(format!("{:>8}", Dec4::from_f64(0.5)), "  0.5000");
    }

    #[test]
    fn dec4_serde() {
        let v = vec![Dec4::from_f64(0.1), Dec4::from_f64(0.25)];
        let json = serde_json::to_string(&v).unwrap();
        assert_eq!(json, r#"["0.1000","0.2500"]"#);
        let back: Vec<Dec4> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, v);
        let from_num: Dec4 = serde_json::from_str("0.12346").unwrap();
        assert_eq!(from_num.to_string(), "0.1235");
        assert!(serde_json::from_str::<Dec4>(r#""abc""#).is_err());
    }
}
