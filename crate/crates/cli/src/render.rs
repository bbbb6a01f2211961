//! Plain-text rendering. Every number goes through `Dec4` so text and JSON
//! output agree digit for digit.

use std::fmt::Write;

use fahp_core::extent::ExtentTrace;
use fahp_core::hierarchy::{describe, ComparisonReport, ProbeReport, RankedResult};
use fahp_core::report::{selector_name, ConsistencyView, Dec4};
use fahp_core::store::RepairEntry;
use fahp_core::Tfn;

pub fn d(x: f64) -> Dec4 {
    Dec4::from_f64(x)
}

pub fn tfn(t: Tfn) -> String {
    format!("({}, {}, {})", d(t.l()), d(t.m()), d(t.u()))
}

fn width<'a>(names: impl IntoIterator<Item = &'a String>) -> usize {
    names.into_iter().map(|n| n.chars().count()).max().unwrap_or(0)
}

pub fn repairs(out: &mut String, label: &str, entries: &[RepairEntry]) {
    for e in entries {
        let _ = writeln!(
            out,
            "  {label}{} ({}, {}): {} -> {}",
            selector_name(&e.matrix),
            e.i + 1,
            e.j + 1,
            e.before,
            e.after
        );
    }
}

pub fn consistency_table(out: &mut String, rows: &[ConsistencyView]) {
    let w = rows.iter().map(|r| r.matrix.chars().count()).max().unwrap_or(0).max(6);
    let _ = writeln!(out, "  {:<w$}  {:>9}  {:>7}  {:>7}", "matrix", "lambda", "CI", "CR");
    for r in rows {
        let flag = if r.consistent { "ok" } else { "inconsistent (CR > 0.10)" };
        let _ = writeln!(out, "  {:<w$}  {:>9}  {:>7}  {:>7}  {flag}", r.matrix, r.lambda_max, r.ci, r.cr);
    }
}

pub fn result(r: &RankedResult, loaded_repairs: &[RepairEntry]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "Goal: {}", r.goal);
    let _ = writeln!(out, "Method: {}", describe(r));
    let _ = writeln!(out);

    let cw = width(&r.criteria).max(9);
    let _ = writeln!(out, "Criteria weights");
    for (c, w) in r.criteria.iter().zip(r.criteria_weights.weights()) {
        let _ = writeln!(out, "  {c:<cw$}  {}", d(*w));
    }
    let _ = writeln!(out);

    let _ = writeln!(out, "Local weights");
    let cols: Vec<usize> = r.alternatives.iter().map(|a| a.chars().count().max(6)).collect();
    let _ = write!(out, "  {:<cw$}", "");
    for (a, w) in r.alternatives.iter().zip(&cols) {
        let _ = write!(out, "  {a:>w$}");
    }
    let _ = writeln!(out);
    for (c, lw) in r.criteria.iter().zip(&r.local_weights) {
        let _ = write!(out, "  {c:<cw$}");
        for (x, w) in lw.weights().iter().zip(&cols) {
            let _ = write!(out, "  {:>w$}", d(*x).to_string());
        }
        let _ = writeln!(out);
    }
    let _ = writeln!(out);

    let aw = width(&r.alternatives);
    let _ = writeln!(out, "Global scores");
    for (pos, &k) in r.rank_order.iter().enumerate() {
        let _ = writeln!(out, "  {}. {:<aw$}  {}", pos + 1, r.alternatives[k], d(r.global_scores[k]));
    }

    if !r.diagnostics.is_empty() {
        let _ = writeln!(out);
        let _ = writeln!(out, "Consistency");
        let rows: Vec<ConsistencyView> = r
            .diagnostics
            .iter()
            .map(|m| ConsistencyView::new(selector_name(&m.matrix), &m.report))
            .collect();
        consistency_table(&mut out, &rows);
    }
    if !loaded_repairs.is_empty() {
        let _ = writeln!(out);
        let _ = writeln!(out, "Repaired cells");
        repairs(&mut out, "", loaded_repairs);
    }
    out
}

/// Scores of both rankings next to each other, with ranks in parentheses.
pub fn side_by_side(c: &ComparisonReport) -> String {
    let mut out = String::new();
    let aw = width(&c.alternatives).max(11);
    let lw = c.left.label.chars().count().max(13);
    let rw = c.right.label.chars().count().max(13);
    let _ = writeln!(out, "  {:<aw$}  {:>lw$}  {:>rw$}", "alternative", c.left.label, c.right.label);
    let rank = |order: &[usize], k: usize| order.iter().position(|&x| x == k).unwrap() + 1;
    for (k, a) in c.alternatives.iter().enumerate() {
        let l = format!("{} ({})", d(c.left.scores[k]), rank(&c.left.rank_order, k));
        let r = format!("{} ({})", d(c.right.scores[k]), rank(&c.right.rank_order, k));
        let _ = writeln!(out, "  {a:<aw$}  {l:>lw$}  {r:>rw$}");
    }
    let _ = writeln!(out);
    let _ = writeln!(
        out,
        "Top choice: {}",
        if c.top_choice_agrees {
            format!("both pick {}", c.alternatives[c.left.rank_order[0]])
        } else {
            format!(
                "{} vs {}",
                c.alternatives[c.left.rank_order[0]],
                c.alternatives[c.right.rank_order[0]]
            )
        }
    );
    if c.flips.is_empty() {
        let _ = writeln!(out, "Rank flips: none");
    } else {
        let _ = writeln!(out, "Rank flips:");
        for f in &c.flips {
            let _ = writeln!(out, "  {} / {}", c.alternatives[f.first], c.alternatives[f.second]);
        }
    }
    out
}

pub fn probe(p: &ProbeReport) -> String {
    let mut out = String::new();
    match &p.added {
        Some(name) => {
            let _ = writeln!(out, "Added: {name}");
        }
        None => {
            let _ = writeln!(out, "Added: nothing");
        }
    }
    let _ = writeln!(out, "Method: {}", describe(&p.before));
    let _ = writeln!(out);
    for (title, r) in [("Before", &p.before), ("After", &p.after)] {
        let aw = width(&r.alternatives);
        let _ = writeln!(out, "{title}");
        for (pos, &k) in r.rank_order.iter().enumerate() {
            let _ = writeln!(out, "  {}. {:<aw$}  {}", pos + 1, r.alternatives[k], d(r.global_scores[k]));
        }
        let _ = writeln!(out);
    }
    if p.reversed() {
        let _ = writeln!(out, "Rank reversal: yes");
        for f in &p.flips {
            let names = &p.before.alternatives;
            let _ = writeln!(out, "  {} / {}", names[f.first], names[f.second]);
        }
    } else {
        let _ = writeln!(out, "Rank reversal: no");
    }
    out
}

/// Row and column sums, extents, possibility matrix and weights of one
/// fuzzy matrix.
pub fn extent_trace(out: &mut String, labels: &[String], t: &ExtentTrace) {
    let lw = width(labels);
    let _ = writeln!(out, "  Row sums");
    for (l, s) in labels.iter().zip(&t.extents.row_sums) {
        let _ = writeln!(out, "    {l:<lw$}  {}", tfn(*s));
    }
    let _ = writeln!(out, "  Column sums");
    for (l, s) in labels.iter().zip(&t.extents.column_sums) {
        let _ = writeln!(out, "    {l:<lw$}  {}", tfn(*s));
    }
    let _ = writeln!(out, "  Grand total  {}", tfn(t.extents.total));
    let _ = writeln!(out, "  Synthetic extents");
    for (k, (l, s)) in labels.iter().zip(&t.extents.extents).enumerate() {
        let _ = writeln!(out, "    S{} {l:<lw$}  {}", k + 1, tfn(*s));
    }
    let n = labels.len();
    let _ = writeln!(out, "  Degree of possibility V(Si >= Sj)");
    let _ = write!(out, "    {:<4}", "");
    for j in 0..n {
        let _ = write!(out, "  {:>6}", format!("S{}", j + 1));
    }
    let _ = writeln!(out);
    for i in 0..n {
        let _ = write!(out, "    {:<4}", format!("S{}", i + 1));
        for j in 0..n {
            let _ = write!(out, "  {}", d(t.possibility.get(i, j)));
        }
        let _ = writeln!(out);
    }
    let _ = writeln!(out, "  Weights (min V, then normalized)");
    for (l, (raw, w)) in labels.iter().zip(t.raw.iter().zip(t.weights.weights())) {
        let _ = writeln!(out, "    {l:<lw$}  {}  {}", d(*raw), d(*w));
    }
}
