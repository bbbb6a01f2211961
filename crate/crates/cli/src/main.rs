//! `fahp`: solve, check and compare AHP problems from the command line.

mod demo;
mod render;

use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fahp_core::hierarchy::compare_rankings;
use fahp_core::report::{selector_name, ComparisonView, ConsistencyView, ProbeView, ResultReport};
use fahp_core::store::{write_atomically, LoadedProblem};
use fahp_core::{
    load_problem_path, rank_reversal_probe, solve, Attitude, CrispMethod, DecisionProblem, Mode, NewAlternative,
    ProbeJudgments, Solve, Strictness, Tfn,
};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "fahp", version, about = "Classical and fuzzy AHP decision engine")]
struct Cli {
    /// Reject non-reciprocal or malformed judgments instead of repairing them.
    #[arg(long, global = true)]
    strict: bool,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write the output to this file instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rank the alternatives of a problem.
    Solve {
        problem: PathBuf,
        /// eigen or geomean (crisp problems).
        #[arg(long, conflicts_with = "attitude")]
        method: Option<CrispMethod>,
        /// Collapse fuzzy judgments with this attitude and solve classically.
        #[arg(long)]
        attitude: Option<Attitude>,
    },
    /// Consistency ratio of every judgment matrix.
    Consistency { problem: PathBuf },
    /// Two rankings side by side.
    ///
    /// One crisp problem: eigenvector against geometric mean. One fuzzy
    /// problem: classical AHP on middle values against extent analysis, or
    /// two attitudes with --attitudes. Two problems: each solved its default
    /// way.
    Compare {
        problem: PathBuf,
        other: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', num_args = 1, conflicts_with = "other")]
        attitudes: Option<Vec<Attitude>>,
    },
    /// Solve a fuzzy problem as seen by a pessimistic, moderate or optimistic
    /// decision maker.
    WhatIf {
        problem: PathBuf,
        #[arg(long)]
        attitude: Attitude,
    },
    /// Add an alternative and report order changes among the existing ones.
    ///
    /// --add takes `NAME:v,v,v;v,v,v`: for each criterion, the new
    /// alternative judged against every existing one. A single group applies
    /// to all criteria. Crisp values are numbers or fractions, fuzzy values
    /// are `l/m/u`.
    Probe {
        problem: PathBuf,
        #[arg(long, conflicts_with = "copy_of", required_unless_present = "copy_of")]
        add: Option<String>,
        /// Add an exact copy of the named alternative.
        #[arg(long)]
        copy_of: Option<String>,
        #[arg(long)]
        method: Option<CrispMethod>,
    },
    /// The bundled effort-estimation case with every intermediate step.
    Demo,
    /// Run the HTTP service.
    Serve {
        #[arg(long, env = "FAHP_PORT", default_value_t = 8080)]
        port: u16,
        #[arg(long, env = "FAHP_HOST", default_value = "127.0.0.1")]
        host: IpAddr,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Invalid(String),
}

impl Failure {
    fn invalid(e: impl std::fmt::Display) -> Self {
        Failure::Invalid(e.to_string())
    }
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("output serializes");
    s.push('\n');
    s
}

fn strictness(cli: &Cli) -> Strictness {
    if cli.strict {
        Strictness::Strict
    } else {
        Strictness::Lenient
    }
}

fn load(path: &Path, strictness: Strictness) -> Result<LoadedProblem, Failure> {
    let loaded = load_problem_path(path, strictness).map_err(Failure::invalid)?;
    for r in &loaded.repairs {
        log::warn!(
            "repaired {} ({}, {}): {} -> {}",
            selector_name(&r.matrix),
            r.i + 1,
            r.j + 1,
            r.before,
            r.after
        );
    }
    Ok(loaded)
}

fn solve_how(p: &DecisionProblem, method: Option<CrispMethod>, attitude: Option<Attitude>) -> Result<Solve, Failure> {
    match (p.mode(), method, attitude) {
        (_, Some(_), Some(_)) => Err(Failure::Usage("--method and --attitude are exclusive".into())),
        (Mode::Crisp, Some(m), None) => Ok(Solve::Crisp(m)),
        (Mode::Crisp, None, Some(_)) => {
            Err(Failure::Invalid("--attitude needs a fuzzy problem; this one is crisp".into()))
        }
        (Mode::Fuzzy, Some(_), None) => Err(Failure::Invalid(
            "--method applies to crisp problems; use --attitude to solve fuzzy judgments classically".into(),
        )),
        (Mode::Fuzzy, None, Some(a)) => Ok(Solve::Attitude(a)),
        (mode, None, None) => Ok(Solve::default_for(mode)),
    }
}

fn parse_value(text: &str, mode: Mode) -> Result<ProbeValue, String> {
    let t = text.trim();
    let bad = || format!("bad judgment {t:?}");
    match mode {
        Mode::Crisp => {
            let v = match t.split_once('/') {
                Some((a, b)) => {
                    let (a, b): (f64, f64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
                    a / b
                }
                None => t.parse().map_err(|_| bad())?,
            };
            if v > 0.0 && v.is_finite() {
                Ok(ProbeValue::Crisp(v))
            } else {
                Err(bad())
            }
        }
        Mode::Fuzzy => {
            let tfn = match t.parse::<Tfn>() {
                Ok(x) => x,
                Err(_) => Tfn::crisp(t.parse().map_err(|_| bad())?),
            };
            if tfn.is_positive() {
                Ok(ProbeValue::Fuzzy(tfn))
            } else {
                Err(bad())
            }
        }
    }
}

enum ProbeValue {
    Crisp(f64),
    Fuzzy(Tfn),
}

/// Parses `NAME:v,v;v,v`.
fn parse_addition(spec: &str, p: &DecisionProblem) -> Result<NewAlternative, Failure> {
    let usage = |m: String| Failure::Usage(format!("--add {spec:?}: {m}"));
    let (name, body) = spec.split_once(':').ok_or_else(|| usage("expected NAME:values".into()))?;
    let name = name.trim();
    if name.is_empty() {
        return Err(usage("the new alternative needs a name".into()));
    }
    let groups: Vec<Vec<ProbeValue>> = body
        .split(';')
        .map(|g| g.split(',').map(|v| parse_value(v, p.mode())).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()
        .map_err(usage)?;
    let nc = p.criteria().len();
    let na = p.alternatives().len();
    if groups.len() != 1 && groups.len() != nc {
        return Err(usage(format!("expected 1 or {nc} groups separated by ';', got {}", groups.len())));
    }
    if let Some(g) = groups.iter().find(|g| g.len() != na) {
        return Err(usage(format!("each group needs {na} values, one per existing alternative; got {}", g.len())));
    }
    let pick = |c: usize| &groups[if groups.len() == 1 { 0 } else { c }];
    let judgments = match p.mode() {
        Mode::Crisp => ProbeJudgments::Crisp(
            (0..nc)
                .map(|c| pick(c).iter().map(|v| if let ProbeValue::Crisp(x) = v { *x } else { unreachable!() }).collect())
                .collect(),
        ),
        Mode::Fuzzy => ProbeJudgments::Fuzzy(
            (0..nc)
                .map(|c| pick(c).iter().map(|v| if let ProbeValue::Fuzzy(t) = v { *t } else { unreachable!() }).collect())
                .collect(),
        ),
    };
    Ok(NewAlternative { name: name.to_string(), judgments })
}

fn run(cli: &Cli) -> Result<String, Failure> {
    let strict = strictness(cli);
    let text = cli.format == Format::Text;
    match &cli.command {
        Command::Solve { problem, method, attitude } => {
            let loaded = load(problem, strict)?;
            let how = solve_how(&loaded.problem, *method, *attitude)?;
            let r = solve(&loaded.problem, how).map_err(Failure::invalid)?;
            Ok(if text { render::result(&r, &loaded.repairs) } else { json(&ResultReport::from(&r)) })
        }
        Command::WhatIf { problem, attitude } => {
            let loaded = load(problem, strict)?;
            if loaded.problem.mode() != Mode::Fuzzy {
                return Err(Failure::Invalid("what-if needs a fuzzy problem".into()));
            }
            let r = solve(&loaded.problem, Solve::Attitude(*attitude)).map_err(Failure::invalid)?;
            if !text {
                return Ok(json(&ResultReport::from(&r)));
            }
            let mut out = render::result(&r, &loaded.repairs);
            if *attitude != Attitude::Moderate {
                let base = solve(&loaded.problem, Solve::Attitude(Attitude::Moderate)).map_err(Failure::invalid)?;
                let c = compare_rankings(&base, &r).map_err(Failure::invalid)?;
                out.push_str("\nAgainst the moderate attitude\n");
                out.push_str(&render::side_by_side(&c));
            }
            Ok(out)
        }
        Command::Consistency { problem } => {
            let loaded = load(problem, strict)?;
            let p = &loaded.problem;
            let (crisp, note) = match p.mode() {
                Mode::Crisp => (p.clone(), None),
                Mode::Fuzzy => (
                    p.defuzzified(Attitude::Moderate).map_err(Failure::invalid)?,
                    Some("fuzzy judgments, checked on their middle values"),
                ),
            };
            let r = solve(&crisp, Solve::Crisp(CrispMethod::Eigen)).map_err(Failure::invalid)?;
            let rows: Vec<ConsistencyView> = r
                .diagnostics
                .iter()
                .map(|d| ConsistencyView::new(selector_name(&d.matrix), &d.report))
                .collect();
            if !text {
                return Ok(json(&rows));
            }
            let mut out = String::new();
            if let Some(n) = note {
                out.push_str(&format!("({n})\n"));
            }
            render::consistency_table(&mut out, &rows);
            if !loaded.repairs.is_empty() {
                out.push_str("\nRepaired cells\n");
                render::repairs(&mut out, "", &loaded.repairs);
            }
            Ok(out)
        }
        Command::Compare { problem, other, attitudes } => {
            let loaded = load(problem, strict)?;
            let p = &loaded.problem;
            let (left, right) = match (other, attitudes) {
                (Some(path), _) => {
                    let q = load(path, strict)?.problem;
                    (
                        solve(p, Solve::default_for(p.mode())).map_err(Failure::invalid)?,
                        solve(&q, Solve::default_for(q.mode())).map_err(Failure::invalid)?,
                    )
                }
                (None, Some(atts)) => {
                    let [a, b] = atts.as_slice() else {
                        return Err(Failure::Usage("--attitudes takes exactly two attitudes, e.g. pessimistic,optimistic".into()));
                    };
                    (
                        solve(p, Solve::Attitude(*a)).map_err(Failure::invalid)?,
                        solve(p, Solve::Attitude(*b)).map_err(Failure::invalid)?,
                    )
                }
                (None, None) => {
                    let (l, r) = match p.mode() {
                        Mode::Crisp => (Solve::Crisp(CrispMethod::Eigen), Solve::Crisp(CrispMethod::GeometricMean)),
                        Mode::Fuzzy => (Solve::Attitude(Attitude::Moderate), Solve::Fuzzy),
                    };
                    (solve(p, l).map_err(Failure::invalid)?, solve(p, r).map_err(Failure::invalid)?)
                }
            };
            let c = compare_rankings(&left, &right).map_err(Failure::invalid)?;
            Ok(if text { render::side_by_side(&c) } else { json(&ComparisonView::from(&c)) })
        }
        Command::Probe { problem, add, copy_of, method } => {
            let loaded = load(problem, strict)?;
            let p = &loaded.problem;
            let new = match (add, copy_of) {
                (Some(spec), _) => parse_addition(spec, p)?,
                (None, Some(name)) => {
                    let k = p
                        .alternatives()
                        .iter()
                        .position(|a| a == name)
                        .ok_or_else(|| Failure::Invalid(format!("no alternative named {name:?}")))?;
                    NewAlternative::clone_of(p, k, format!("{name} (copy)"))
                }
                (None, None) => unreachable!("clap requires one of --add, --copy-of"),
            };
            let how = solve_how(p, *method, None)?;
            let rep = rank_reversal_probe(p, Some(&new), how).map_err(Failure::invalid)?;
            Ok(if text { render::probe(&rep) } else { json(&ProbeView::from(&rep)) })
        }
        Command::Demo => {
            let d = demo::run().map_err(Failure::invalid)?;
            Ok(if text { d.text() } else { json(&d.report) })
        }
        Command::Serve { .. } => unreachable!("handled in main"),
    }
}

fn serve(host: IpAddr, port: u16) -> ExitCode {
    let runtime = match tokio::runtime::Builder::new_multi_thread().enable_all().build() {
        Ok(rt) => rt,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match runtime.block_on(fahp_service::serve(SocketAddr::new(host, port))) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Command::Serve { port, host } = cli.command {
        return serve(host, port);
    }
    match run(&cli) {
        Ok(out) => match &cli.output {
            Some(path) => match write_atomically(path, out.as_bytes()) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            },
            None => {
                print!("{out}");
                ExitCode::SUCCESS
            }
        },
        Err(Failure::Usage(m)) => {
            eprintln!("usage error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Invalid(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
