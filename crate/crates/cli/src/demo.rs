//! The bundled effort-estimation case, end to end, from the judgments as
//! typed: repair, extent analysis, classical AHP and a side-by-side view.

use std::fmt::Write;

use fahp_core::extent::{extent_trace, ExtentTrace};
use fahp_core::hierarchy::compare_rankings;
use fahp_core::report::{selector_name, ComparisonView, Dec4, ResultReport};
use fahp_core::store::{load_bundled, RepairEntry, StoreError};
use fahp_core::{
    solve_crisp, solve_fuzzy, what_if_attitude, Attitude, CrispMethod, EngineError, Judgments, MatrixSelector,
    Strictness, Tfn,
};
use serde::Serialize;

use crate::render;

const FUZZY_CASE: &str = "paper-case-asprinted-fuzzy.csv";
const CRISP_CASE: &str = "paper-case-asprinted-crisp.csv";

#[derive(Debug, Serialize)]
pub struct DemoRepair {
    pub problem: &'static str,
    pub matrix: String,
    pub i: usize,
    pub j: usize,
    pub before: String,
    pub after: String,
}

#[derive(Debug, Serialize)]
pub struct ExtentView {
    pub matrix: String,
    pub labels: Vec<String>,
    pub row_sums: Vec<[Dec4; 3]>,
    pub column_sums: Vec<[Dec4; 3]>,
    pub total: [Dec4; 3],
    pub extents: Vec<[Dec4; 3]>,
    pub possibility: Vec<Vec<Dec4>>,
    pub raw: Vec<Dec4>,
    pub weights: Vec<Dec4>,
}

#[derive(Debug, Serialize)]
pub struct DemoReport {
    pub repairs: Vec<DemoRepair>,
    pub extent_analysis: Vec<ExtentView>,
    pub fuzzy: ResultReport,
    pub classical: ResultReport,
    pub classical_eigen: ResultReport,
    pub comparison: ComparisonView,
    pub attitudes: Vec<ResultReport>,
}

fn dec3(t: Tfn) -> [Dec4; 3] {
    [t.l().into(), t.m().into(), t.u().into()]
}

fn extent_view(matrix: String, labels: &[String], t: &ExtentTrace) -> ExtentView {
    let n = labels.len();
    ExtentView {
        matrix,
        labels: labels.to_vec(),
        row_sums: t.extents.row_sums.iter().copied().map(dec3).collect(),
        column_sums: t.extents.column_sums.iter().copied().map(dec3).collect(),
        total: dec3(t.extents.total),
        extents: t.extents.extents.iter().copied().map(dec3).collect(),
        possibility: (0..n).map(|i| (0..n).map(|j| t.possibility.get(i, j).into()).collect()).collect(),
        raw: t.raw.iter().copied().map(Dec4::from).collect(),
        weights: t.weights.weights().iter().copied().map(Dec4::from).collect(),
    }
}

fn repair_rows<'a>(problem: &'static str, entries: &'a [RepairEntry]) -> impl Iterator<Item = DemoRepair> + 'a {
    entries.iter().map(move |e| DemoRepair {
        problem,
        matrix: selector_name(&e.matrix),
        i: e.i,
        j: e.j,
        before: e.before.clone(),
        after: e.after.clone(),
    })
}

pub struct Demo {
    pub report: DemoReport,
    traces: Vec<(String, Vec<String>, ExtentTrace)>,
    fuzzy_repairs: Vec<RepairEntry>,
    crisp_repairs: Vec<RepairEntry>,
    fuzzy: fahp_core::RankedResult,
    classical: fahp_core::RankedResult,
    eigen: fahp_core::RankedResult,
    comparison: fahp_core::ComparisonReport,
    attitudes: Vec<fahp_core::RankedResult>,
}

pub fn run() -> Result<Demo, StoreError> {
    let fuzzy_loaded = load_bundled(FUZZY_CASE, Strictness::Lenient)?;
    let crisp_loaded = load_bundled(CRISP_CASE, Strictness::Lenient)?;
    let fp = &fuzzy_loaded.problem;
    let Judgments::Fuzzy { criteria, alternatives } = fp.judgments() else {
        unreachable!("bundled fuzzy case")
    };
    let mut traces = Vec::new();
    let selectors = fp.selectors();
    for (sel, m) in selectors.iter().zip(std::iter::once(criteria).chain(alternatives)) {
        let t = extent_trace(m).map_err(|source| EngineError::Extent { matrix: sel.clone(), source })?;
        let labels = match sel {
            MatrixSelector::Criteria => fp.criteria().to_vec(),
            MatrixSelector::Criterion(_) => fp.alternatives().to_vec(),
        };
        traces.push((selector_name(sel), labels, t));
    }

    let fuzzy = solve_fuzzy(fp)?;
    let classical = solve_crisp(&crisp_loaded.problem, CrispMethod::GeometricMean)?;
    let eigen = solve_crisp(&crisp_loaded.problem, CrispMethod::Eigen)?;
    let comparison = compare_rankings(&classical, &fuzzy)?;
    let attitudes = Attitude::ALL
        .iter()
        .map(|&a| what_if_attitude(fp, a))
        .collect::<Result<Vec<_>, _>>()?;

    let report = DemoReport {
        repairs: repair_rows("fuzzy", &fuzzy_loaded.repairs)
            .chain(repair_rows("classical", &crisp_loaded.repairs))
            .collect(),
        extent_analysis: traces.iter().map(|(name, labels, t)| extent_view(name.clone(), labels, t)).collect(),
        fuzzy: (&fuzzy).into(),
        classical: (&classical).into(),
        classical_eigen: (&eigen).into(),
        comparison: (&comparison).into(),
        attitudes: attitudes.iter().map(ResultReport::from).collect(),
    };
    Ok(Demo {
        report,
        traces,
        fuzzy_repairs: fuzzy_loaded.repairs,
        crisp_repairs: crisp_loaded.repairs,
        fuzzy,
        classical,
        eigen,
        comparison,
        attitudes,
    })
}

impl Demo {
    pub fn text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "Effort estimation model selection: judgments as typed, lenient loading");
        let _ = writeln!(out);
        let _ = writeln!(out, "Repair log");
        if self.fuzzy_repairs.is_empty() && self.crisp_repairs.is_empty() {
            let _ = writeln!(out, "  (no cells repaired)");
        }
        render::repairs(&mut out, "fuzzy      ", &self.fuzzy_repairs);
        render::repairs(&mut out, "classical  ", &self.crisp_repairs);
        let _ = writeln!(out);

        for (name, labels, t) in &self.traces {
            let _ = writeln!(out, "Extent analysis: {name}");
            render::extent_trace(&mut out, labels, t);
            let _ = writeln!(out);
        }

        let _ = writeln!(out, "== Fuzzy AHP ==");
        out.push_str(&render::result(&self.fuzzy, &[]));
        let _ = writeln!(out);
        let _ = writeln!(out, "== Classical AHP, geometric mean ==");
        out.push_str(&render::result(&self.classical, &[]));
        let _ = writeln!(out);
        let _ = writeln!(out, "== Classical AHP, eigenvector ==");
        let aw = self.eigen.alternatives.iter().map(|a| a.chars().count()).max().unwrap_or(0);
        for (pos, &k) in self.eigen.rank_order.iter().enumerate() {
            let _ = writeln!(
                out,
                "  {}. {:<aw$}  {}",
                pos + 1,
                self.eigen.alternatives[k],
                render::d(self.eigen.global_scores[k])
            );
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "== Side by side ==");
        out.push_str(&render::side_by_side(&self.comparison));
        let _ = writeln!(out);
        let _ = writeln!(out, "== Attitudes (classical AHP on collapsed fuzzy judgments) ==");
        let names = &self.fuzzy.alternatives;
        let aw = names.iter().map(|a| a.chars().count()).max().unwrap_or(0).max(11);
        let _ = write!(out, "  {:<aw$}", "alternative");
        for a in &self.attitudes {
            let _ = write!(out, "  {:>11}", a.attitude.map(|x| x.as_str()).unwrap_or(""));
        }
        let _ = writeln!(out);
        for (k, name) in names.iter().enumerate() {
            let _ = write!(out, "  {name:<aw$}");
            for a in &self.attitudes {
                let rank = a.rank_order.iter().position(|&x| x == k).unwrap() + 1;
                let _ = write!(out, "  {:>11}", format!("{} ({rank})", render::d(a.global_scores[k])));
            }
            let _ = writeln!(out);
        }
        out
    }
}
