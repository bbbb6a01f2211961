//! In-memory sessions holding a problem whose judgments arrive one cell at a
//! time.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::{Arc, Mutex, RwLock};

use chrono::{DateTime, Utc};
use fahp_core::comparison::{consistency, ComparisonMatrix, CR_THRESHOLD, RANDOM_INDEX};
use fahp_core::hierarchy::compare_rankings;
use fahp_core::report::{ComparisonView, ConsistencyView, Dec4};
use fahp_core::store::{render_result, CellEntry, CellValue, SCHEMA_VERSION};
use fahp_core::{
    solve, Attitude, CrispMethod, DecisionProblem, FuzzyMatrix, Judgments, MatrixSelector, Mode, ProblemDocument,
    Solve, Tfn,
};
use serde::{Deserialize, Serialize};

use crate::error::{ApiError, MissingCell};

const MIN_JUDGMENT: f64 = 1.0 / 9.0;
const MAX_JUDGMENT: f64 = 9.0;
const RANGE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NewSession {
    #[serde(default)]
    pub goal: String,
    pub mode: Mode,
    pub criteria: Vec<String>,
    pub alternatives: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JudgmentRequest {
    pub matrix: MatrixSelector,
    pub i: usize,
    pub j: usize,
    pub value: CellValue,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveRequest {
    pub method: Option<String>,
    pub attitude: Option<Attitude>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareRequest {
    pub attitudes: Option<[Attitude; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Completion {
    pub set: usize,
    pub total: usize,
    pub fraction: Dec4,
}

impl Completion {
    fn new(set: usize, total: usize) -> Self {
        let fraction = if total == 0 { 1.0 } else { set as f64 / total as f64 };
        Self { set, total, fraction: Dec4::from_f64(fraction) }
    }
}

/// Response to a single judgment.
#[derive(Debug, Clone, Serialize)]
pub struct IncrementalStatus {
    pub session: String,
    pub version: u64,
    pub matrix: MatrixSelector,
    pub i: usize,
    pub j: usize,
    pub completion: Completion,
    pub matrix_completion: Completion,
    /// Present once a crisp matrix is complete.
    pub consistency: Option<ConsistencyView>,
    pub warning: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum ShownValue {
    Crisp(Dec4),
    Fuzzy([Dec4; 3]),
}

#[derive(Debug, Clone, Serialize)]
pub struct CellView {
    pub i: usize,
    pub j: usize,
    pub value: ShownValue,
}

#[derive(Debug, Clone, Serialize)]
pub struct MatrixView {
    pub matrix: MatrixSelector,
    pub order: usize,
    pub completion: Completion,
    pub cells: Vec<CellView>,
    pub missing: Vec<[usize; 2]>,
    pub consistency: Option<ConsistencyView>,
    pub warning: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SessionView {
    pub id: String,
    pub goal: String,
    pub mode: Mode,
    pub criteria: Vec<String>,
    pub alternatives: Vec<String>,
    pub created_at: DateTime<Utc>,
    pub updated_at: DateTime<Utc>,
    pub version: u64,
    pub completion: Completion,
    pub matrices: Vec<MatrixView>,
}

#[derive(Debug, Clone)]
enum Cells {
    Crisp(Vec<Option<f64>>),
    Fuzzy(Vec<Option<Tfn>>),
}

impl Cells {
    fn empty(mode: Mode, n: usize) -> Self {
        let len = n * n.saturating_sub(1) / 2;
        match mode {
            Mode::Crisp => Cells::Crisp(vec![None; len]),
            Mode::Fuzzy => Cells::Fuzzy(vec![None; len]),
        }
    }

    fn is_set(&self, k: usize) -> bool {
        match self {
            Cells::Crisp(v) => v[k].is_some(),
            Cells::Fuzzy(v) => v[k].is_some(),
        }
    }

    fn len(&self) -> usize {
        match self {
            Cells::Crisp(v) => v.len(),
            Cells::Fuzzy(v) => v.len(),
        }
    }

    fn set_count(&self) -> usize {
        (0..self.len()).filter(|&k| self.is_set(k)).count()
    }

    fn shown(&self, k: usize) -> Option<ShownValue> {
        match self {
            Cells::Crisp(v) => v[k].map(|x| ShownValue::Crisp(Dec4::from_f64(x))),
            Cells::Fuzzy(v) => v[k].map(|t| ShownValue::Fuzzy([t.l().into(), t.m().into(), t.u().into()])),
        }
    }

    fn exported(&self, k: usize) -> Option<CellValue> {
        match self {
            Cells::Crisp(v) => v[k].map(CellValue::Number),
            Cells::Fuzzy(v) => v[k].map(|t| CellValue::Triple(t.into())),
        }
    }
}

/// Index of `(i, j)`, `i < j`, in the row-major strict upper triangle.
fn upper_index(n: usize, i: usize, j: usize) -> usize {
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

fn upper_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| ((i + 1)..n).map(move |j| (i, j)))
}

fn check_names(what: &str, names: &[String]) -> Result<(), ApiError> {
    if names.len() < 2 {
        return Err(ApiError::BadRequest(format!("at least 2 {what} are required, got {}", names.len())));
    }
    if names.len() > RANDOM_INDEX.len() {
        return Err(ApiError::BadRequest(format!("at most {} {what} are supported", RANDOM_INDEX.len())));
    }
    let mut seen = HashSet::new();
    for name in names {
        if name.trim().is_empty() {
            return Err(ApiError::BadRequest(format!("{what} names must not be blank")));
        }
        if !seen.insert(name.as_str()) {
            return Err(ApiError::BadRequest(format!("duplicate name {name:?} in {what}")));
        }
    }
    Ok(())
}

fn in_range(x: f64) -> bool {
    (MIN_JUDGMENT - RANGE_SLACK..=MAX_JUDGMENT + RANGE_SLACK).contains(&x)
}

#[derive(Debug)]
pub struct Session {
    id: String,
    goal: String,
    mode: Mode,
    criteria: Vec<String>,
    alternatives: Vec<String>,
    /// Criteria matrix first, then one per criterion.
    matrices: Vec<Cells>,
    created_at: DateTime<Utc>,
    updated_at: DateTime<Utc>,
    version: u64,
    results: HashMap<Solve, Arc<str>>,
}

impl Session {
    pub fn new(spec: NewSession) -> Result<Self, ApiError> {
        check_names("criteria", &spec.criteria)?;
        check_names("alternatives", &spec.alternatives)?;
        let mut matrices = vec![Cells::empty(spec.mode, spec.criteria.len())];
        matrices.extend(spec.criteria.iter().map(|_| Cells::empty(spec.mode, spec.alternatives.len())));
        let now = Utc::now();
        Ok(Self {
            id: uuid::Uuid::new_v4().to_string(),
            goal: spec.goal,
            mode: spec.mode,
            criteria: spec.criteria,
            alternatives: spec.alternatives,
            matrices,
            created_at: now,
            updated_at: now,
            version: 0,
            results: HashMap::new(),
        })
    }

    /// A fully populated session holding every judgment of `p`.
    pub fn from_problem(p: &DecisionProblem) -> Result<Self, ApiError> {
        let mut s = Session::new(NewSession {
            goal: p.goal().to_string(),
            mode: p.mode(),
            criteria: p.criteria().to_vec(),
            alternatives: p.alternatives().to_vec(),
        })?;
        s.matrices = match p.judgments() {
            Judgments::Crisp { criteria, alternatives } => std::iter::once(criteria)
                .chain(alternatives)
                .map(|m| Cells::Crisp(m.upper().into_iter().map(Some).collect()))
                .collect(),
            Judgments::Fuzzy { criteria, alternatives } => std::iter::once(criteria)
                .chain(alternatives)
                .map(|m| Cells::Fuzzy(m.upper().into_iter().map(Some).collect()))
                .collect(),
        };
        Ok(s)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn version(&self) -> u64 {
        self.version
    }

    fn selector(&self, k: usize) -> MatrixSelector {
        match k {
            0 => MatrixSelector::Criteria,
            k => MatrixSelector::Criterion(self.criteria[k - 1].clone()),
        }
    }

    fn matrix_index(&self, sel: &MatrixSelector) -> Result<usize, ApiError> {
        match sel {
            MatrixSelector::Criteria => Ok(0),
            MatrixSelector::Criterion(name) => self
                .criteria
                .iter()
                .position(|c| c == name)
                .map(|k| k + 1)
                .ok_or_else(|| ApiError::UnknownMatrix(format!("criterion {name:?}"))),
        }
    }

    fn order(&self, k: usize) -> usize {
        if k == 0 {
            self.criteria.len()
        } else {
            self.alternatives.len()
        }
    }

    pub fn completion(&self) -> Completion {
        let set = self.matrices.iter().map(Cells::set_count).sum();
        let total = self.matrices.iter().map(Cells::len).sum();
        Completion::new(set, total)
    }

    pub fn missing(&self) -> Vec<MissingCell> {
        let mut out = Vec::new();
        for (k, cells) in self.matrices.iter().enumerate() {
            for (idx, (i, j)) in upper_pairs(self.order(k)).enumerate() {
                if !cells.is_set(idx) {
                    out.push(MissingCell { matrix: self.selector(k), i, j });
                }
            }
        }
        out
    }

    fn parse_value(&self, value: &CellValue, field: &str) -> Result<Value, ApiError> {
        match self.mode {
            Mode::Crisp => {
                if let CellValue::Number(x) = value {
                    if !in_range(*x) {
                        return Err(ApiError::CellOutOfRange(format!(
                            "judgment {x} is outside the scale [1/9, 9]"
                        )));
                    }
                }
                let x = value.to_crisp(field).map_err(|e| ApiError::BadRequest(e.to_string()))?;
                Ok(Value::Crisp(x))
            }
            Mode::Fuzzy => {
                let r = value.to_raw_fuzzy(field).map_err(|e| ApiError::BadRequest(e.to_string()))?;
                let t = Tfn::new(r[0], r[1], r[2])
                    .map_err(|e| ApiError::CellOutOfRange(format!("{e}")))?;
                if !(in_range(t.l()) && in_range(t.u())) {
                    return Err(ApiError::CellOutOfRange(format!("judgment {t} is outside the scale [1/9, 9]")));
                }
                Ok(Value::Fuzzy(t))
            }
        }
    }

    /// Stores one upper-triangle judgment.
    pub fn submit(&mut self, req: &JudgmentRequest) -> Result<IncrementalStatus, ApiError> {
        let k = self.matrix_index(&req.matrix)?;
        let n = self.order(k);
        let (i, j) = (req.i, req.j);
        if i >= j || j >= n {
            return Err(ApiError::LowerTriangleRejected { i, j, n });
        }
        let field = format!("{} ({i}, {j})", req.matrix);
        let value = self.parse_value(&req.value, &field)?;
        let idx = upper_index(n, i, j);
        match (&mut self.matrices[k], value) {
            (Cells::Crisp(v), Value::Crisp(x)) => v[idx] = Some(x),
            (Cells::Fuzzy(v), Value::Fuzzy(t)) => v[idx] = Some(t),
            _ => unreachable!("value parsed for the session mode"),
        }
        self.version += 1;
        self.updated_at = Utc::now();
        self.results.clear();
        let (consistency, warning) = self.live_consistency(k);
        Ok(IncrementalStatus {
            session: self.id.clone(),
            version: self.version,
            matrix: req.matrix.clone(),
            i,
            j,
            completion: self.completion(),
            matrix_completion: Completion::new(self.matrices[k].set_count(), self.matrices[k].len()),
            consistency,
            warning,
        })
    }

    fn crisp_matrix(&self, k: usize) -> Option<ComparisonMatrix> {
        let Cells::Crisp(v) = &self.matrices[k] else { return None };
        let upper: Option<Vec<f64>> = v.iter().copied().collect();
        ComparisonMatrix::from_upper(self.order(k), &upper?).ok()
    }

    fn fuzzy_matrix(&self, k: usize) -> Option<FuzzyMatrix> {
        let Cells::Fuzzy(v) = &self.matrices[k] else { return None };
        let upper: Option<Vec<Tfn>> = v.iter().copied().collect();
        FuzzyMatrix::from_upper(self.order(k), &upper?).ok()
    }

    fn live_consistency(&self, k: usize) -> (Option<ConsistencyView>, Option<String>) {
        let Some(m) = self.crisp_matrix(k) else { return (None, None) };
        let Ok(report) = consistency(&m) else { return (None, None) };
        let name = fahp_core::report::selector_name(&self.selector(k));
        let warning = (!report.consistent).then(|| {
            format!(
                "consistency ratio {} of {} exceeds {CR_THRESHOLD:.2}; consider revising these judgments",
                Dec4::from_f64(report.cr),
                self.selector(k)
            )
        });
        (Some(ConsistencyView::new(name, &report)), warning)
    }

    pub fn to_problem(&self) -> Result<DecisionProblem, ApiError> {
        let missing = self.missing();
        if !missing.is_empty() {
            return Err(ApiError::IncompleteJudgments(missing));
        }
        let k_all = 0..self.matrices.len();
        let judgments = match self.mode {
            Mode::Crisp => {
                let mut ms: Vec<ComparisonMatrix> = k_all.map(|k| self.crisp_matrix(k).expect("complete")).collect();
                let criteria = ms.remove(0);
                Judgments::Crisp { criteria, alternatives: ms }
            }
            Mode::Fuzzy => {
                let mut ms: Vec<FuzzyMatrix> = k_all.map(|k| self.fuzzy_matrix(k).expect("complete")).collect();
                let criteria = ms.remove(0);
                Judgments::Fuzzy { criteria, alternatives: ms }
            }
        };
        Ok(DecisionProblem::new(self.goal.clone(), self.criteria.clone(), self.alternatives.clone(), judgments)?)
    }

    fn resolve(&self, req: &SolveRequest) -> Result<Solve, ApiError> {
        match (req.method.as_deref(), req.attitude) {
            (Some(_), Some(_)) => Err(ApiError::BadRequest("give either method or attitude, not both".into())),
            (None, Some(a)) => Ok(Solve::Attitude(a)),
            (Some("extent"), None) => Ok(Solve::Fuzzy),
            (Some(m), None) => m.parse::<CrispMethod>().map(Solve::Crisp).map_err(ApiError::BadRequest),
            (None, None) => Ok(Solve::default_for(self.mode)),
        }
    }

    /// Solves the complete problem. Results are cached until the next edit,
    /// so repeated requests return the same bytes.
    pub fn solve(&mut self, req: &SolveRequest) -> Result<Arc<str>, ApiError> {
        let how = self.resolve(req)?;
        if let Some(body) = self.results.get(&how) {
            return Ok(body.clone());
        }
        let problem = self.to_problem()?;
        let result = solve(&problem, how)?;
        let body: Arc<str> = render_result(&result).into();
        self.results.insert(how, body.clone());
        Ok(body)
    }

    /// Crisp sessions: eigenvector against geometric mean. Fuzzy sessions:
    /// classical AHP on middle values against extent analysis, or two
    /// attitudes.
    pub fn compare(&self, req: &CompareRequest) -> Result<ComparisonView, ApiError> {
        let problem = self.to_problem()?;
        let (left, right) = match (self.mode, req.attitudes) {
            (Mode::Crisp, None) => (Solve::Crisp(CrispMethod::Eigen), Solve::Crisp(CrispMethod::GeometricMean)),
            (Mode::Fuzzy, None) => (Solve::Attitude(Attitude::Moderate), Solve::Fuzzy),
            (_, Some([a, b])) => (Solve::Attitude(a), Solve::Attitude(b)),
        };
        let report = compare_rankings(&solve(&problem, left)?, &solve(&problem, right)?)?;
        Ok(ComparisonView::from(&report))
    }

    pub fn view(&self) -> SessionView {
        let matrices = self
            .matrices
            .iter()
            .enumerate()
            .map(|(k, cells)| {
                let mut shown = Vec::new();
                let mut missing = Vec::new();
                for (idx, (i, j)) in upper_pairs(self.order(k)).enumerate() {
                    match cells.shown(idx) {
                        Some(value) => shown.push(CellView { i, j, value }),
                        None => missing.push([i, j]),
                    }
                }
                let (consistency, warning) = self.live_consistency(k);
                MatrixView {
                    matrix: self.selector(k),
                    order: self.order(k),
                    completion: Completion::new(cells.set_count(), cells.len()),
                    cells: shown,
                    missing,
                    consistency,
                    warning,
                }
            })
            .collect();
        SessionView {
            id: self.id.clone(),
            goal: self.goal.clone(),
            mode: self.mode,
            criteria: self.criteria.clone(),
            alternatives: self.alternatives.clone(),
            created_at: self.created_at,
            updated_at: self.updated_at,
            version: self.version,
            completion: self.completion(),
            matrices,
        }
    }

    /// Problem document holding the judgments set so far, at full precision.
    pub fn document(&self) -> ProblemDocument {
        let entries = |k: usize| -> Vec<CellEntry> {
            upper_pairs(self.order(k))
                .enumerate()
                .filter_map(|(idx, (i, j))| self.matrices[k].exported(idx).map(|value| CellEntry { i, j, value }))
                .collect()
        };
        let alternative_matrices: BTreeMap<String, Vec<CellEntry>> =
            self.criteria.iter().enumerate().map(|(c, name)| (name.clone(), entries(c + 1))).collect();
        ProblemDocument {
            schema: SCHEMA_VERSION,
            goal: self.goal.clone(),
            mode: self.mode,
            criteria: self.criteria.clone(),
            alternatives: self.alternatives.clone(),
            criteria_matrix: entries(0),
            alternative_matrices,
        }
    }
}

enum Value {
    Crisp(f64),
    Fuzzy(Tfn),
}

/// All live sessions. Each session sits behind its own lock, so edits to
/// one session never wait on another.
#[derive(Debug, Clone, Default)]
pub struct SessionStore {
    sessions: Arc<RwLock<HashMap<String, Arc<Mutex<Session>>>>>,
}

impl SessionStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&self, session: Session) -> Arc<Mutex<Session>> {
        let id = session.id.clone();
        let handle = Arc::new(Mutex::new(session));
        self.sessions.write().expect("session map lock").insert(id, handle.clone());
        handle
    }

    pub fn get(&self, id: &str) -> Result<Arc<Mutex<Session>>, ApiError> {
        self.sessions
            .read()
            .expect("session map lock")
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::UnknownSession(id.to_string()))
    }

    pub fn len(&self) -> usize {
        self.sessions.read().expect("session map lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
