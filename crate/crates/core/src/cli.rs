//! Batch command-line front end.
//!
//! Exit codes: 0 success, 1 usage, 2 unreadable or malformed input,
//! 3 law counterexample, 4 evaluation failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::catalog::Catalog;
use crate::enumerator::{
    enumerate_lattice, export_dot, find_nondistributive_triple, sublattice_candidates, verify_boolean_sublattice,
    SublatticeReport,
};
use crate::error::Error;
use crate::expr::{evaluate, parse, Expr};
use crate::json::{catalog_from_json, universe_from_json};
use crate::laws::{is_exhaustive, quantified_check, LawId, Verdict};
use crate::relation::Relation;
use crate::rewriter::{normalize, Status, Strategy};
use crate::universe::Universe;

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_COUNTEREXAMPLE: i32 = 3;
pub const EXIT_EVAL: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "relattice", version, about = "Relational lattice workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate an expression against a catalog.
    Eval {
        #[arg(short, long)]
        universe: PathBuf,
        #[arg(short, long)]
        catalog: PathBuf,
        #[arg(short, long)]
        expr: String,
        /// Print an aligned table instead of JSON.
        #[arg(long)]
        table: bool,
    },
    /// Rewrite an expression with the built-in rules.
    Rewrite {
        #[arg(short, long)]
        universe: PathBuf,
        #[arg(short, long)]
        catalog: PathBuf,
        #[arg(short, long)]
        expr: String,
        #[arg(long, value_enum, default_value_t = StrategyArg::Pushdown)]
        strategy: StrategyArg,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,
        /// Emit every step as a JSON line before the result.
        #[arg(long)]
        trace: bool,
    },
    /// Check lattice laws over the universe.
    Laws {
        #[arg(short, long)]
        universe: PathBuf,
        #[arg(long, value_parser = parse_law)]
        law: Option<LawId>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Enumerate the whole lattice of a tiny universe.
    Enum {
        #[arg(short, long)]
        universe: PathBuf,
        /// Write the Hasse diagram as DOT to this path.
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        check_sublattices: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StrategyArg {
    Pushdown,
    Exhaustive,
}

fn parse_law(s: &str) -> Result<LawId, String> {
    s.parse()
}

/// A failure already classified by exit code.
struct Failure {
    code: i32,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Failure {
            code: EXIT_INPUT,
            kind: "input",
            message: message.to_string(),
        }
    }

    fn eval(e: Error) -> Self {
        Failure {
            code: EXIT_EVAL,
            kind: "eval",
            message: e.to_string(),
        }
    }
}

fn single_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Runs one invocation, writing results to `out` and diagnostics to `err`.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            let first = first.strip_prefix("error: ").unwrap_or(first);
            let _ = writeln!(err, "error: usage: {}", single_line(first));
            return EXIT_USAGE;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}: {}", f.kind, single_line(&f.message));
            f.code
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_universe(path: &Path) -> Result<Universe, Failure> {
    universe_from_json(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_catalog(u: &Universe, path: &Path) -> Result<Catalog, Failure> {
    catalog_from_json(u, &read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn parse_expr(text: &str) -> Result<Expr, Failure> {
    parse(text).map_err(|e| Failure {
        code: EXIT_INPUT,
        kind: "syntax",
        message: e.to_string(),
    })
}

fn emit(out: &mut dyn Write, line: &str) -> Result<(), Failure> {
    writeln!(out, "{line}").map_err(|e| Failure {
        code: EXIT_INPUT,
        kind: "io",
        message: e.to_string(),
    })
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Command::Eval {
            universe,
            catalog,
            expr,
            table,
        } => {
            let u = load_universe(&universe)?;
            let c = load_catalog(&u, &catalog)?;
            let e = parse_expr(&expr)?;
            let r = evaluate(&e, &c).map_err(Failure::eval)?;
            if table {
                write!(out, "{}", r.to_table()).map_err(Failure::input)?;
            } else {
                emit(out, &crate::json::relation_to_json(&r))?;
            }
            Ok(0)
        }
        Command::Rewrite {
            universe,
            catalog,
            expr,
            strategy,
            budget,
            trace,
        } => {
            let u = load_universe(&universe)?;
            let c = load_catalog(&u, &catalog)?;
            let e = parse_expr(&expr)?;
            let strategy = match strategy {
                StrategyArg::Pushdown => Strategy::Pushdown,
                StrategyArg::Exhaustive => Strategy::Exhaustive,
            };
            let budget = usize::try_from(budget).unwrap_or(usize::MAX);
            let n = normalize(&e, &c, strategy, budget).map_err(Failure::eval)?;
            if trace {
                for step in &n.trace {
                    emit(out, &step.to_json_line())?;
                }
                #[derive(Serialize)]
                struct Done {
                    result: String,
                    status: Status,
                    steps: usize,
                }
                let done = Done {
                    result: n.expr.to_string(),
                    status: n.status,
                    steps: n.trace.len(),
                };
                emit(out, &serde_json::to_string(&done).expect("serializes"))?;
            } else {
                emit(out, &n.expr.to_string())?;
            }
            Ok(0)
        }
        Command::Laws {
            universe,
            law,
            samples,
            seed,
        } => {
            let u = load_universe(&universe)?;
            let laws: Vec<LawId> = match law {
                Some(l) => vec![l],
                None => LawId::ALL.to_vec(),
            };
            let mode = if is_exhaustive(&u) { "exhaustive" } else { "sampled" };
            let mut failed = false;
            for law in laws {
                let report = quantified_check(&u, law, samples, seed);
                failed |= report.verdict == Verdict::Counterexample;
                #[derive(Serialize)]
                struct Line<'a> {
                    law: LawId,
                    verdict: Verdict,
                    mode: &'a str,
                    checked: usize,
                    guard_failed: usize,
                    witness: &'a Option<Vec<Relation>>,
                }
                let line = Line {
                    law,
                    verdict: report.verdict,
                    mode,
                    checked: report.checked,
                    guard_failed: report.guard_failed,
                    witness: &report.witness,
                };
                emit(out, &serde_json::to_string(&line).expect("serializes"))?;
            }
            Ok(if failed { EXIT_COUNTEREXAMPLE } else { 0 })
        }
        Command::Enum {
            universe,
            dot,
            check_sublattices,
        } => {
            let u = load_universe(&universe)?;
            let g = enumerate_lattice(&u).map_err(Failure::eval)?;
            if let Some(path) = dot {
                std::fs::write(&path, export_dot(&g))
                    .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            }
            let axioms: Vec<(LawId, Verdict)> = LawId::AXIOMS
                .iter()
                .map(|&law| (law, quantified_check(&u, law, 1000, 0).verdict))
                .collect();
            let triple = find_nondistributive_triple(&g)
                .map(|(a, b, c)| [a, b, c].map(|i| g.label(i).to_string()));
            #[derive(Serialize)]
            struct Sub {
                name: String,
                size: usize,
                boolean: bool,
                report: SublatticeReport,
            }
            let sublattices: Option<Vec<Sub>> = check_sublattices.then(|| {
                sublattice_candidates(&g, &u)
                    .into_iter()
                    .map(|(name, members)| {
                        let report = verify_boolean_sublattice(&g, &members);
                        Sub {
                            name,
                            size: members.len(),
                            boolean: report.is_boolean(),
                            report,
                        }
                    })
                    .collect()
            });
            #[derive(Serialize)]
            struct Summary {
                elements: usize,
                covers: usize,
                axioms: std::collections::BTreeMap<&'static str, Verdict>,
                nondistributive_triple: Option<[String; 3]>,
                #[serde(skip_serializing_if = "Option::is_none")]
                sublattices: Option<Vec<Sub>>,
            }
            let summary = Summary {
                elements: g.len(),
                covers: g.covers().len(),
                axioms: axioms.into_iter().map(|(l, v)| (l.name(), v)).collect(),
                nondistributive_triple: triple,
                sublattices,
            };
            emit(out, &serde_json::to_string(&summary).expect("serializes"))?;
            Ok(0)
        }
    }
}
