//! Problem documents, CSV matrix import, and result persistence.
//!
//! The canonical problem format is JSON holding only the strict upper
//! triangle of every matrix, so reciprocity cannot be violated on disk.
//! Full-matrix CSV exists for data typed straight from printed tables and
//! goes through validation or repair.

use std::collections::{BTreeMap, HashSet};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::comparison::{repair_matrix_logged, validate_matrix, ComparisonMatrix, MatrixError, Strictness};
use crate::fuzzy::{scale_to_tfn, FuzzyError, FuzzyMatrix, RawTfn, Tfn};
use crate::hierarchy::{DecisionProblem, EngineError, Judgments, MatrixSelector, Mode, RankedResult};
use crate::report::ResultReport;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{field}: {message}")]
    Field { field: String, message: String },
    #[error("{field}: unknown judgment label {label:?}")]
    UnknownLabel { field: String, label: String },
    #[error("unsupported schema version {0} (supported: {SCHEMA_VERSION})")]
    UnsupportedSchema(u32),
    #[error("{matrix}: {source}")]
    Crisp { matrix: MatrixSelector, source: MatrixError },
    #[error("{matrix}: {source}")]
    Fuzzy { matrix: MatrixSelector, source: FuzzyError },
    #[error("[{section}] {source}")]
    Csv { section: String, source: CsvError },
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl StoreError {
    fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        StoreError::Field { field: field.into(), message: message.into() }
    }

    /// True for input that is malformed as text, as opposed to well-formed
    /// input with invalid judgments.
    pub fn is_parse_error(&self) -> bool {
        matches!(
            self,
            StoreError::Syntax { .. } | StoreError::Field { .. } | StoreError::UnknownLabel { .. } | StoreError::Csv { .. }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CsvError {
    #[error("row {row} has {len} fields, expected {expected}")]
    RaggedRows { row: usize, len: usize, expected: usize },
    #[error("bad number {text:?} at row {row}, column {col}")]
    BadNumber { row: usize, col: usize, text: String },
    #[error("no rows")]
    Empty,
    #[error("unreadable CSV: {0}")]
    Malformed(String),
}

/// One judgment as written in a problem document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CellValue {
    Number(f64),
    Saaty {
        saaty: u32,
        #[serde(default)]
        reciprocal: bool,
    },
    Label {
        label: String,
        #[serde(default)]
        reciprocal: bool,
    },
    Triple([f64; 3]),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellEntry {
    pub i: usize,
    pub j: usize,
    pub value: CellValue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemDocument {
    pub schema: u32,
    pub goal: String,
    pub mode: Mode,
    pub criteria: Vec<String>,
    pub alternatives: Vec<String>,
    pub criteria_matrix: Vec<CellEntry>,
    /// Keyed by criterion name.
    pub alternative_matrices: BTreeMap<String, Vec<CellEntry>>,
}

/// Saaty intensity for a verbal judgment. Matching ignores case and
/// surrounding whitespace.
pub fn label_to_saaty(label: &str) -> Option<u32> {
    let l = label.trim().to_ascii_lowercase();
    let k = match l.as_str() {
        "equally important" | "equal importance" | "equal" | "just equal" => 1,
        "moderately important" | "moderately important with one over another" | "moderate importance" => 3,
        "strongly important" | "strong importance" => 5,
        "very strongly important" | "very strong importance" => 7,
        "extremely important" | "extreme importance" => 9,
        other => {
            let digit = other.strip_prefix("intermediate")?.trim().trim_matches(|c| c == '(' || c == ')');
            match digit {
                "2" => 2,
                "4" => 4,
                "6" => 6,
                "8" => 8,
                _ => return None,
            }
        }
    };
    Some(k)
}

/// Verbal labels for the odd intensities, in scale order.
pub const SAATY_LABELS: [(u32, &str); 5] = [
    (1, "Equally important"),
    (3, "Moderately important"),
    (5, "Strongly important"),
    (7, "Very strongly important"),
    (9, "Extremely important"),
];

fn saaty_value(field: &str, k: u32, reciprocal: bool) -> Result<f64, StoreError> {
    if !(1..=9).contains(&k) {
        return Err(StoreError::field(field, format!("{k} is outside the 1..9 judgment scale")));
    }
    Ok(if reciprocal { 1.0 / k as f64 } else { k as f64 })
}

impl CellValue {
    /// Crisp judgment ratio.
    pub fn to_crisp(&self, field: &str) -> Result<f64, StoreError> {
        match self {
            CellValue::Number(v) if *v > 0.0 && v.is_finite() => Ok(*v),
            CellValue::Number(v) => Err(StoreError::field(field, format!("judgment {v} must be positive"))),
            CellValue::Saaty { saaty, reciprocal } => saaty_value(field, *saaty, *reciprocal),
            CellValue::Label { label, reciprocal } => {
                let k = label_to_saaty(label)
                    .ok_or_else(|| StoreError::UnknownLabel { field: field.into(), label: label.clone() })?;
                saaty_value(field, k, *reciprocal)
            }
            CellValue::Triple(_) => Err(StoreError::field(field, "fuzzy triple in a crisp problem")),
        }
    }

    /// Fuzzy judgment, possibly malformed (`l <= m <= u` not yet checked).
    pub fn to_raw_fuzzy(&self, field: &str) -> Result<RawTfn, StoreError> {
        let scaled = |k: u32, reciprocal: bool| {
            scale_to_tfn(k, reciprocal)
                .map(<[f64; 3]>::from)
                .map_err(|e| StoreError::field(field, e.to_string()))
        };
        match self {
            CellValue::Number(v) if *v > 0.0 && v.is_finite() => Ok([*v; 3]),
            CellValue::Number(v) => Err(StoreError::field(field, format!("judgment {v} must be positive"))),
            CellValue::Saaty { saaty, reciprocal } => scaled(*saaty, *reciprocal),
            CellValue::Label { label, reciprocal } => {
                let k = label_to_saaty(label)
                    .ok_or_else(|| StoreError::UnknownLabel { field: field.into(), label: label.clone() })?;
                scaled(k, *reciprocal)
            }
            CellValue::Triple(t) => Ok(*t),
        }
    }
}

/// A cell rewritten while loading in lenient mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepairEntry {
    pub matrix: MatrixSelector,
    pub i: usize,
    pub j: usize,
    pub before: String,
    pub after: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedProblem {
    pub problem: DecisionProblem,
    pub repairs: Vec<RepairEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::Json,
        }
    }
}

const BUNDLED: [(&str, &str); 4] = [
    ("paper-case-crisp.json", include_str!("../fixtures/paper-case-crisp.json")),
    ("paper-case-fuzzy.json", include_str!("../fixtures/paper-case-fuzzy.json")),
    ("paper-case-asprinted-crisp.csv", include_str!("../fixtures/paper-case-asprinted-crisp.csv")),
    ("paper-case-asprinted-fuzzy.csv", include_str!("../fixtures/paper-case-asprinted-fuzzy.csv")),
];

/// Text of a fixture shipped with the library.
pub fn bundled_fixture(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

pub fn bundled_fixture_names() -> impl Iterator<Item = &'static str> {
    BUNDLED.iter().map(|(n, _)| *n)
}

pub fn load_bundled(name: &str, strictness: Strictness) -> Result<LoadedProblem, StoreError> {
    let text = bundled_fixture(name)
        .ok_or_else(|| StoreError::field("fixture", format!("no bundled fixture named {name:?}")))?;
    load_problem_str(text, Format::from_path(Path::new(name)), strictness)
}

/// Reads a problem file; a name that does not exist on disk but matches a
/// bundled fixture loads the fixture.
pub fn load_problem_path(path: &Path, strictness: Strictness) -> Result<LoadedProblem, StoreError> {
    match std::fs::read_to_string(path) {
        Ok(text) => load_problem_str(&text, Format::from_path(path), strictness),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            match path.to_str().filter(|_| path.components().count() == 1).and_then(bundled_fixture) {
                Some(_) => load_bundled(path.to_str().unwrap(), strictness),
                None => Err(StoreError::Io { path: path.to_path_buf(), source: e }),
            }
        }
        Err(source) => Err(StoreError::Io { path: path.to_path_buf(), source }),
    }
}

pub fn load_problem_str(text: &str, format: Format, strictness: Strictness) -> Result<LoadedProblem, StoreError> {
    match format {
        Format::Json => {
            let doc: ProblemDocument = serde_json::from_str(text).map_err(|e| StoreError::Syntax {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            })?;
            doc.to_problem(strictness)
        }
        Format::Csv => load_problem_csv(text, strictness),
    }
}

fn check_list(field: &str, names: &[String]) -> Result<(), StoreError> {
    if names.is_empty() {
        return Err(StoreError::field(field, "must list at least one name"));
    }
    let mut seen = HashSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(StoreError::field(field, format!("duplicate name {n:?}")));
        }
    }
    Ok(())
}

/// Places every upper-triangle entry, rejecting gaps, duplicates and
/// out-of-range indices.
fn place_cells<'a>(field: &str, n: usize, cells: &'a [CellEntry]) -> Result<Vec<&'a CellValue>, StoreError> {
    let mut slots: Vec<Option<&CellValue>> = vec![None; n * n];
    for (k, c) in cells.iter().enumerate() {
        let f = format!("{field}[{k}]");
        if c.i >= n || c.j >= n {
            return Err(StoreError::field(f, format!("cell ({}, {}) outside a {n}x{n} matrix", c.i, c.j)));
        }
        if c.i >= c.j {
            return Err(StoreError::field(f, format!("cell ({}, {}) is not in the upper triangle", c.i, c.j)));
        }
        let slot = &mut slots[c.i * n + c.j];
        if slot.is_some() {
            return Err(StoreError::field(f, format!("cell ({}, {}) given twice", c.i, c.j)));
        }
        *slot = Some(&c.value);
    }
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            out.push(slots[i * n + j].ok_or_else(|| StoreError::field(field, format!("cell ({i}, {j}) is missing")))?);
        }
    }
    Ok(out)
}

fn fmt_raw(t: RawTfn) -> String {
    format!("{}/{}/{}", t[0], t[1], t[2])
}

impl ProblemDocument {
    fn matrix_cells(&self, sel: &MatrixSelector) -> Option<&Vec<CellEntry>> {
        match sel {
            MatrixSelector::Criteria => Some(&self.criteria_matrix),
            MatrixSelector::Criterion(c) => self.alternative_matrices.get(c),
        }
    }

    pub fn to_problem(&self, strictness: Strictness) -> Result<LoadedProblem, StoreError> {
        if self.schema != SCHEMA_VERSION {
            return Err(StoreError::UnsupportedSchema(self.schema));
        }
        check_list("criteria", &self.criteria)?;
        check_list("alternatives", &self.alternatives)?;
        for key in self.alternative_matrices.keys() {
            if !self.criteria.contains(key) {
                return Err(StoreError::field("alternative_matrices", format!("{key:?} is not a criterion")));
            }
        }
        let selectors: Vec<MatrixSelector> = std::iter::once(MatrixSelector::Criteria)
            .chain(self.criteria.iter().cloned().map(MatrixSelector::Criterion))
            .collect();
        let mut repairs = Vec::new();
        let judgments = match self.mode {
            Mode::Crisp => {
                let mut mats = Vec::with_capacity(selectors.len());
                for sel in &selectors {
                    let (field, n) = self.field_and_order(sel);
                    let cells = self
                        .matrix_cells(sel)
                        .ok_or_else(|| StoreError::field(&field, "matrix is missing"))?;
                    let values = place_cells(&field, n, cells)?
                        .into_iter()
                        .map(|v| v.to_crisp(&field))
                        .collect::<Result<Vec<_>, _>>()?;
                    let m = ComparisonMatrix::from_upper(n, &values)
                        .map_err(|source| StoreError::Crisp { matrix: sel.clone(), source })?;
                    mats.push(m);
                }
                let criteria = mats.remove(0);
                Judgments::Crisp { criteria, alternatives: mats }
            }
            Mode::Fuzzy => {
                let mut mats = Vec::with_capacity(selectors.len());
                for sel in &selectors {
                    let (field, n) = self.field_and_order(sel);
                    let cells = self
                        .matrix_cells(sel)
                        .ok_or_else(|| StoreError::field(&field, "matrix is missing"))?;
                    let raw = place_cells(&field, n, cells)?
                        .into_iter()
                        .map(|v| v.to_raw_fuzzy(&field))
                        .collect::<Result<Vec<_>, _>>()?;
                    let mut upper = Vec::with_capacity(raw.len());
                    let mut k = 0;
                    for i in 0..n {
                        for j in (i + 1)..n {
                            let r = raw[k];
                            k += 1;
                            let t = match (Tfn::new(r[0], r[1], r[2]), strictness) {
                                (Ok(t), _) => t,
                                (Err(_), Strictness::Strict) => {
                                    return Err(StoreError::Fuzzy {
                                        matrix: sel.clone(),
                                        source: FuzzyError::Malformed { l: r[0], m: r[1], u: r[2] },
                                    })
                                }
                                (Err(_), Strictness::Lenient) => {
                                    let mut s = r;
                                    s.sort_by(f64::total_cmp);
                                    let t = Tfn::new(s[0], s[1], s[2]).expect("sorted");
                                    repairs.push(RepairEntry {
                                        matrix: sel.clone(),
                                        i,
                                        j,
                                        before: fmt_raw(r),
                                        after: t.to_string(),
                                    });
                                    t
                                }
                            };
                            upper.push(t);
                        }
                    }
                    let m = FuzzyMatrix::from_upper(n, &upper)
                        .map_err(|source| StoreError::Fuzzy { matrix: sel.clone(), source })?;
                    mats.push(m);
                }
                let criteria = mats.remove(0);
                Judgments::Fuzzy { criteria, alternatives: mats }
            }
        };
        let problem = DecisionProblem::new(self.goal.clone(), self.criteria.clone(), self.alternatives.clone(), judgments)?;
        Ok(LoadedProblem { problem, repairs })
    }

    fn field_and_order(&self, sel: &MatrixSelector) -> (String, usize) {
        match sel {
            MatrixSelector::Criteria => ("criteria_matrix".to_string(), self.criteria.len()),
            MatrixSelector::Criterion(c) => (format!("alternative_matrices[{c:?}]"), self.alternatives.len()),
        }
    }

    /// Canonical document for a problem: crisp cells as numbers, fuzzy cells
    /// as triples.
    pub fn from_problem(p: &DecisionProblem) -> Self {
        fn entries<T>(n: usize, get: impl Fn(usize, usize) -> T, wrap: impl Fn(T) -> CellValue) -> Vec<CellEntry> {
            let mut out = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    out.push(CellEntry { i, j, value: wrap(get(i, j)) });
                }
            }
            out
        }
        let (criteria_matrix, alternative_matrices) = match p.judgments() {
            Judgments::Crisp { criteria, alternatives } => (
                entries(criteria.order(), |i, j| criteria.get(i, j), CellValue::Number),
                p.criteria()
                    .iter()
                    .zip(alternatives)
                    .map(|(c, m)| (c.clone(), entries(m.order(), |i, j| m.get(i, j), CellValue::Number)))
                    .collect(),
            ),
            Judgments::Fuzzy { criteria, alternatives } => (
                entries(criteria.order(), |i, j| criteria.get(i, j), |t| CellValue::Triple(t.into())),
                p.criteria()
                    .iter()
                    .zip(alternatives)
                    .map(|(c, m)| (c.clone(), entries(m.order(), |i, j| m.get(i, j), |t| CellValue::Triple(t.into()))))
                    .collect(),
            ),
        };
        Self {
            schema: SCHEMA_VERSION,
            goal: p.goal().to_string(),
            mode: p.mode(),
            criteria: p.criteria().to_vec(),
            alternatives: p.alternatives().to_vec(),
            criteria_matrix,
            alternative_matrices,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }
}

/// A full square matrix read from CSV, before validation.
#[derive(Debug, Clone, PartialEq)]
pub enum RawMatrix {
    Crisp(Vec<Vec<f64>>),
    Fuzzy(Vec<Vec<RawTfn>>),
}

impl RawMatrix {
    pub fn order(&self) -> usize {
        match self {
            RawMatrix::Crisp(m) => m.len(),
            RawMatrix::Fuzzy(m) => m.len(),
        }
    }
}

fn parse_ratio(text: &str) -> Option<f64> {
    let t = text.trim();
    match t.split_once('/') {
        Some((a, b)) => {
            let (a, b): (f64, f64) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
            (b != 0.0).then(|| a / b)
        }
        None => t.parse().ok(),
    }
}

fn parse_fuzzy_field(text: &str) -> Option<RawTfn> {
    let parts: Vec<&str> = text.trim().split('/').collect();
    match parts.as_slice() {
        [l, m, u] => Some([l.trim().parse().ok()?, m.trim().parse().ok()?, u.trim().parse().ok()?]),
        _ => parse_ratio(text).map(|v| [v; 3]),
    }
}

/// Parses `n` lines of `n` comma-separated fields. Crisp fields are numbers
/// or fractions (`1/7`); fuzzy fields are `l/m/u`. Rows and columns in
/// errors are 1-based.
pub fn import_matrix_csv(text: &str, mode: Mode) -> Result<RawMatrix, CsvError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut records = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CsvError::Malformed(e.to_string()))?;
        if record.iter().any(|f| !f.is_empty()) {
            records.push(record);
        }
    }
    let rows: Vec<Vec<&str>> = records.iter().map(|r| r.iter().collect()).collect();
    if rows.is_empty() {
        return Err(CsvError::Empty);
    }
    let n = rows[0].len();
    for (r, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(CsvError::RaggedRows { row: r + 1, len: row.len(), expected: n });
        }
    }
    if rows.len() != n {
        return Err(CsvError::RaggedRows { row: rows.len(), len: n, expected: rows.len() });
    }
    let bad = |r: usize, c: usize, t: &str| CsvError::BadNumber { row: r + 1, col: c + 1, text: t.trim().to_string() };
    match mode {
        Mode::Crisp => {
            let mut out = Vec::with_capacity(n);
            for (r, row) in rows.iter().enumerate() {
                let parsed = row
                    .iter()
                    .enumerate()
                    .map(|(c, t)| parse_ratio(t).ok_or_else(|| bad(r, c, t)))
                    .collect::<Result<Vec<_>, _>>()?;
                out.push(parsed);
            }
            Ok(RawMatrix::Crisp(out))
        }
        Mode::Fuzzy => {
            let mut out = Vec::with_capacity(n);
            for (r, row) in rows.iter().enumerate() {
                let parsed = row
                    .iter()
                    .enumerate()
                    .map(|(c, t)| parse_fuzzy_field(t).ok_or_else(|| bad(r, c, t)))
                    .collect::<Result<Vec<_>, _>>()?;
                out.push(parsed);
            }
            Ok(RawMatrix::Fuzzy(out))
        }
    }
}

fn split_names(s: &str) -> Vec<String> {
    s.split(',').map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect()
}

/// Multi-matrix CSV problem:
///
/// ```text
/// # goal: Select an estimation model
/// # mode: crisp
/// # criteria: Reliability, MMRE
/// # alternatives: Expert, COCOMO
/// [criteria]
/// 1,3
/// 1/3,1
/// [Reliability]
/// ...
/// ```
///
/// Every section holds a full square matrix. Strict mode validates each as
/// given; lenient mode repairs with the upper triangle authoritative and
/// logs every cell it had to rewrite.
pub fn load_problem_csv(text: &str, strictness: Strictness) -> Result<LoadedProblem, StoreError> {
    let mut goal = String::new();
    let mut mode = None;
    let mut criteria = Vec::new();
    let mut alternatives = Vec::new();
    let mut sections: Vec<(String, String)> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let t = line.trim();
        if let Some(directive) = t.strip_prefix('#') {
            let Some((key, value)) = directive.split_once(':') else { continue };
            match key.trim().to_ascii_lowercase().as_str() {
                "goal" => goal = value.trim().to_string(),
                "mode" => {
                    mode = Some(match value.trim() {
                        "crisp" => Mode::Crisp,
                        "fuzzy" => Mode::Fuzzy,
                        other => {
                            return Err(StoreError::Syntax {
                                line: lineno + 1,
                                column: 1,
                                message: format!("unknown mode {other:?}"),
                            })
                        }
                    })
                }
                "criteria" => criteria = split_names(value),
                "alternatives" => alternatives = split_names(value),
                _ => {}
            }
        } else if let Some(name) = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            sections.push((name.trim().to_string(), String::new()));
        } else if !t.is_empty() {
            let Some((_, body)) = sections.last_mut() else {
                return Err(StoreError::Syntax {
                    line: lineno + 1,
                    column: 1,
                    message: "matrix row before any [section] header".into(),
                });
            };
            body.push_str(t);
            body.push('\n');
        }
    }
    let mode = mode.ok_or_else(|| StoreError::field("mode", "missing `# mode:` directive"))?;
    check_list("criteria", &criteria)?;
    check_list("alternatives", &alternatives)?;

    let find = |name: &str| sections.iter().find(|(s, _)| s == name).map(|(_, body)| body.as_str());
    let selectors: Vec<MatrixSelector> = std::iter::once(MatrixSelector::Criteria)
        .chain(criteria.iter().cloned().map(MatrixSelector::Criterion))
        .collect();
    let mut repairs = Vec::new();
    let mut crisp = Vec::new();
    let mut fuzzy = Vec::new();
    for sel in &selectors {
        let section = match sel {
            MatrixSelector::Criteria => "criteria".to_string(),
            MatrixSelector::Criterion(c) => c.clone(),
        };
        let body = find(&section).ok_or_else(|| StoreError::field(format!("[{section}]"), "section is missing"))?;
        let raw = import_matrix_csv(body, mode).map_err(|source| StoreError::Csv { section: section.clone(), source })?;
        match raw {
            RawMatrix::Crisp(rows) => {
                let m = match strictness {
                    Strictness::Strict => validate_matrix(&rows, Strictness::Strict),
                    Strictness::Lenient => repair_matrix_logged(&rows).map(|(m, log)| {
                        repairs.extend(log.into_iter().map(|c| RepairEntry {
                            matrix: sel.clone(),
                            i: c.i,
                            j: c.j,
                            before: format!("{:.4}", c.before),
                            after: format!("{:.4}", c.after),
                        }));
                        m
                    }),
                }
                .map_err(|source| StoreError::Crisp { matrix: sel.clone(), source })?;
                crisp.push(m);
            }
            RawMatrix::Fuzzy(rows) => {
                let (m, log) =
                    FuzzyMatrix::load(&rows, strictness).map_err(|source| StoreError::Fuzzy { matrix: sel.clone(), source })?;
                repairs.extend(log.into_iter().map(|c| RepairEntry {
                    matrix: sel.clone(),
                    i: c.i,
                    j: c.j,
                    before: fmt_raw(c.before),
                    after: c.after.to_string(),
                }));
                fuzzy.push(m);
            }
        }
    }
    let judgments = match mode {
        Mode::Crisp => {
            let criteria_m = crisp.remove(0);
            Judgments::Crisp { criteria: criteria_m, alternatives: crisp }
        }
        Mode::Fuzzy => {
            let criteria_m = fuzzy.remove(0);
            Judgments::Fuzzy { criteria: criteria_m, alternatives: fuzzy }
        }
    };
    let problem = DecisionProblem::new(goal, criteria, alternatives, judgments)?;
    Ok(LoadedProblem { problem, repairs })
}

/// Writes `contents` next to `path` and renames it into place, so readers
/// never see a partial file.
pub fn write_atomically(path: &Path, contents: &[u8]) -> Result<(), StoreError> {
    let io_err = |source| StoreError::Io { path: path.to_path_buf(), source };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(contents).map_err(io_err)?;
    tmp.as_file().sync_all().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

pub fn render_result(r: &RankedResult) -> String {
    let mut s = serde_json::to_string_pretty(&ResultReport::from(r)).expect("report serializes");
    s.push('\n');
    s
}

pub fn save_result(r: &RankedResult, path: &Path) -> Result<(), StoreError> {
    write_atomically(path, render_result(r).as_bytes())
}

pub fn read_result(path: &Path) -> Result<ResultReport, StoreError> {
    let text = std::fs::read_to_string(path).map_err(|source| StoreError::Io { path: path.to_path_buf(), source })?;
    serde_json::from_str(&text).map_err(|e| StoreError::Syntax { line: e.line(), column: e.column(), message: e.to_string() })
}

pub fn save_problem(doc: &ProblemDocument, path: &Path) -> Result<(), StoreError> {
    write_atomically(path, doc.to_json().as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels() {
        assert_eq!(label_to_saaty("Strongly important"), Some(5));
        assert_eq!(label_to_saaty("  equally IMPORTANT "), Some(1));
        assert_eq!(label_to_saaty("Moderately important with one over another"), Some(3));
        assert_eq!(label_to_saaty("intermediate (4)"), Some(4));
        assert_eq!(label_to_saaty("intermediate 5"), None);
        assert_eq!(label_to_saaty("kind of important"), None);
        for (k, name) in SAATY_LABELS {
            assert_eq!(label_to_saaty(name), Some(k));
        }
    }

    #[test]
    fn cell_values() {
        let label = CellValue::Label { label: "Strongly important".into(), reciprocal: false };
        assert_eq!(label.to_crisp("f").unwrap(), 5.0);
        assert_eq!(label.to_raw_fuzzy("f").unwrap(), [3.0, 5.0, 7.0]);
        let rec = CellValue::Saaty { saaty: 7, reciprocal: true };
        assert_eq!(rec.to_crisp("f").unwrap(), 1.0 / 7.0);
        assert!(CellValue::Saaty { saaty: 12, reciprocal: false }.to_crisp("f").is_err());
        assert!(CellValue::Triple([1.0, 2.0, 3.0]).to_crisp("f").is_err());
        assert!(matches!(
            CellValue::Label { label: "meh".into(), reciprocal: false }.to_crisp("f"),
            Err(StoreError::UnknownLabel { .. })
        ));
        let parsed: Vec<CellValue> =
            serde_json::from_str(r#"[0.5, {"saaty": 3}, {"label": "Equally important"}, [1, 3, 5]]"#).unwrap();
        assert_eq!(
            parsed,
            vec![
                CellValue::Number(0.5),
                CellValue::Saaty { saaty: 3, reciprocal: false },
                CellValue::Label { label: "Equally important".into(), reciprocal: false },
                CellValue::Triple([1.0, 3.0, 5.0]),
            ]
        );
    }

    #[test]
    fn csv_import() {
        assert_eq!(
            import_matrix_csv("1,3\n0.333,1", Mode::Crisp).unwrap(),
            RawMatrix::Crisp(vec![vec![1.0, 3.0], vec![0.333, 1.0]])
        );
        assert_eq!(
            import_matrix_csv("1,3\n0.333", Mode::Crisp),
            Err(CsvError::RaggedRows { row: 2, len: 1, expected: 2 })
        );
        assert_eq!(
            import_matrix_csv("1,x\n1,1", Mode::Crisp),
            Err(CsvError::BadNumber { row: 1, col: 2, text: "x".into() })
        );
        assert_eq!(import_matrix_csv("1, 1/4\n4,1", Mode::Crisp).unwrap(), RawMatrix::Crisp(vec![vec![1.0, 0.25], vec![4.0, 1.0]]));
        assert!(matches!(import_matrix_csv("1,2\n1,2\n1,2", Mode::Crisp), Err(CsvError::RaggedRows { .. })));
        assert_eq!(
            import_matrix_csv("1/1/1,1/3/5\n0.2/0.33/1,1", Mode::Fuzzy).unwrap(),
            RawMatrix::Fuzzy(vec![vec![[1.0; 3], [1.0, 3.0, 5.0]], vec![[0.2, 0.33, 1.0], [1.0; 3]]])
        );
        assert_eq!(import_matrix_csv("\n\n", Mode::Fuzzy), Err(CsvError::Empty));
    }

    fn doc(mode: Mode) -> ProblemDocument {
        serde_json::from_value(serde_json::json!({
            "schema": 1, "goal": "g", "mode": mode,
            "criteria": ["C1", "C2"], "alternatives": ["A1", "A2"],
            "criteria_matrix": [{"i": 0, "j": 1, "value": {"label": "Strongly important"}}],
            "alternative_matrices": {
                "C1": [{"i": 0, "j": 1, "value": 3}],
                "C2": [{"i": 0, "j": 1, "value": {"saaty": 3, "reciprocal": true}}]
            }
        }))
        .unwrap()
    }

    #[test]
    fn document_to_problem() {
        let p = doc(Mode::Crisp).to_problem(Strictness::Strict).unwrap().problem;
        let Judgments::Crisp { criteria, .. } = p.judgments() else { panic!() };
        assert_eq!(criteria.get(0, 1), 5.0);
        assert_eq!(criteria.get(1, 0), 0.2);
        let f = doc(Mode::Fuzzy).to_problem(Strictness::Strict).unwrap().problem;
        assert_eq!(f.mode(), Mode::Fuzzy);
    }

    #[test]
    fn document_errors() {
        let mut d = doc(Mode::Crisp);
        d.criteria.clear();
        assert!(d.to_problem(Strictness::Lenient).unwrap_err().is_parse_error());

        let mut d = doc(Mode::Crisp);
        d.schema = 7;
        assert!(matches!(d.to_problem(Strictness::Lenient), Err(StoreError::UnsupportedSchema(7))));

        let mut d = doc(Mode::Crisp);
        d.criteria_matrix.push(d.criteria_matrix[0].clone());
        assert!(d.to_problem(Strictness::Lenient).unwrap_err().to_string().contains("twice"));

        let mut d = doc(Mode::Crisp);
        d.criteria_matrix[0].i = 1;
        d.criteria_matrix[0].j = 0;
        assert!(d.to_problem(Strictness::Lenient).unwrap_err().to_string().contains("upper triangle"));

        let mut d = doc(Mode::Crisp);
        d.alternative_matrices.remove("C2");
        assert!(d.to_problem(Strictness::Lenient).unwrap_err().to_string().contains("missing"));

        let mut d = doc(Mode::Crisp);
        d.alternative_matrices.get_mut("C1").unwrap().clear();
        assert!(d.to_problem(Strictness::Lenient).unwrap_err().to_string().contains("cell (0, 1) is missing"));

        let bad_json = load_problem_str("{\n  \"schema\": 1,\n  oops", Format::Json, Strictness::Lenient).unwrap_err();
        assert!(matches!(bad_json, StoreError::Syntax { line: 3, .. }), "{bad_json}");
    }

    #[test]
    fn malformed_triple_strict_vs_lenient() {
        let mut d = doc(Mode::Fuzzy);
        d.criteria_matrix[0].value = CellValue::Triple([5.0, 3.0, 7.0]);
        assert!(matches!(d.to_problem(Strictness::Strict), Err(StoreError::Fuzzy { .. })));
        let loaded = d.to_problem(Strictness::Lenient).unwrap();
        assert_eq!(loaded.repairs.len(), 1);
        assert_eq!(loaded.repairs[0].after, "3.0000/5.0000/7.0000");
    }

    #[test]
    fn csv_problem_requires_sections() {
        let text = "# mode: crisp\n# criteria: C1\n# alternatives: A1, A2\n[criteria]\n1\n";
        let err = load_problem_csv(text, Strictness::Lenient).unwrap_err();
        assert!(err.to_string().contains("[C1]"), "{err}");
        let orphan = "# mode: crisp\n1,2\n";
        assert!(matches!(load_problem_csv(orphan, Strictness::Lenient), Err(StoreError::Syntax { line: 2, .. })));
    }
}
