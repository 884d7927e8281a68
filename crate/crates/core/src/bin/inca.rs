use std::fs;
use std::io::{ErrorKind, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use inca::am::Context;
use inca::attribution::{most_probable_suspects, AttributionQuery, Comparison};
use inca::bridge::{InCaFramework, PossibilityMode};
use inca::em::{is_consistent, lp_bounds, DEFAULT_MAX_ATOMS};
use inca::kb::{
    load, parse_evidence, parse_formula, parse_literal, parse_world, KbDocument, LoadOptions,
};
use inca::language::{Literal, World};
use inca::output::{forest_text, ArgumentJson, Report};
use inca::IncaError;

#[derive(Parser)]
#[command(
    name = "inca",
    version,
    about = "Probabilistic attribution queries over InCA knowledge bases"
)]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Largest environmental universe to enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_ATOMS)]
    max_atoms: usize,

    /// How possibility is read.
    #[arg(long, global = true, value_enum, default_value_t = PossArg::Supported)]
    poss_mode: PossArg,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum PossArg {
    Supported,
    Unopposed,
}

#[derive(Clone, Copy, ValueEnum)]
enum ComparisonArg {
    Midpoint,
    LowerBound,
}

#[derive(Args)]
struct KbArg {
    /// Knowledge-base file.
    file: PathBuf,
}

#[derive(Args)]
struct LiteralArg {
    file: PathBuf,
    /// Analytical literal, e.g. `isCap(baja,worm123)` or `neg condOp(mojave,worm123)`.
    #[arg(short, long)]
    literal: String,
}

#[derive(Subcommand)]
enum Command {
    /// Parse, ground and check a knowledge base.
    Check(KbArg),
    /// List the worlds of the environmental model.
    Worlds(KbArg),
    /// Tightest probability interval the environmental model entails for a formula.
    Entail {
        file: PathBuf,
        #[arg(short, long)]
        query: String,
    },
    /// List the arguments for a literal.
    Args(LiteralArg),
    /// Warrant status of a literal, in the whole program or in one world.
    Warrant {
        #[command(flatten)]
        target: LiteralArg,
        /// World as a comma-separated atom list; `{}` is the empty world.
        #[arg(short, long)]
        world: Option<String>,
    },
    /// Worlds in which a literal is warranted.
    Nec(LiteralArg),
    /// Worlds in which a literal is possible.
    Poss(LiteralArg),
    /// Probability interval for a literal.
    Bounds(LiteralArg),
    /// Rank suspects for an operation.
    Attribute {
        file: PathBuf,
        #[arg(long = "op")]
        operation: String,
        #[arg(long, value_delimiter = ',', required = true)]
        suspects: Vec<String>,
        /// Evidence file of `formula.` and `formula : p +- e.` lines.
        #[arg(long)]
        evidence: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ComparisonArg::Midpoint)]
        comparison: ComparisonArg,
    },
    /// Marked dialectical trees for a literal in a world.
    Explain {
        #[command(flatten)]
        target: LiteralArg,
        #[arg(short, long)]
        world: String,
    },
}

struct Failure(String);

impl Failure {
    fn at(path: &Path, e: IncaError) -> Self {
        match e {
            IncaError::Parse(p) => Failure(format!("{}:{p}", path.display())),
            other => Failure(other.to_string()),
        }
    }
}

impl From<IncaError> for Failure {
    fn from(e: IncaError) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<(Report, String), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn open(path: &Path, cli: &Cli) -> Result<(KbDocument, InCaFramework), Failure> {
    let source = read(path)?;
    let mode = match cli.poss_mode {
        PossArg::Supported => PossibilityMode::Supported,
        PossArg::Unopposed => PossibilityMode::Unopposed,
    };
    let options = LoadOptions {
        max_atoms: cli.max_atoms,
        mode,
    };
    load(&source, options).map_err(|e| Failure::at(path, e))
}

fn literal(text: &str) -> Result<Literal, Failure> {
    parse_literal(text).map_err(|e| Failure(format!("literal: {e}")))
}

fn world(fw: &InCaFramework, text: &str) -> Result<World, Failure> {
    let w = parse_world(text).map_err(|e| Failure(format!("world: {e}")))?;
    fw.check_world(&w)?;
    Ok(w)
}

fn world_lines(worlds: &[World]) -> String {
    worlds.iter().map(|w| format!("{w}\n")).collect()
}

fn run(cli: &Cli) -> Outcome {
    let path_str = |p: &Path| p.display().to_string();
    match &cli.command {
        Command::Check(KbArg { file }) => {
            let (doc, fw) = open(file, cli)?;
            let worlds = fw.worlds()?;
            if !is_consistent(fw.em())? {
                return Err(IncaError::InconsistentKb.into());
            }
            let summary = json!({
                "atoms": fw.em().universe().len(),
                "worlds": worlds.len(),
                "emFormulas": doc.em.len(),
                "elements": fw.program().len(),
                "arguments": fw.dialectic().arguments().len(),
            });
            let text = format!(
                "ok: {} atoms, {} worlds, {} environmental formulas, {} ground elements, {} arguments\n",
                fw.em().universe().len(),
                worlds.len(),
                doc.em.len(),
                fw.program().len(),
                fw.dialectic().arguments().len()
            );
            Ok((
                Report::new("check", summary).with_query("file", path_str(file)),
                text,
            ))
        }
        Command::Worlds(KbArg { file }) => {
            let (_, fw) = open(file, cli)?;
            let worlds = fw.worlds()?;
            let report = Report::new("worlds", json!(worlds.len()))
                .with_query("file", path_str(file))
                .with_worlds(&worlds);
            Ok((report, world_lines(&worlds)))
        }
        Command::Entail { file, query } => {
            let (_, fw) = open(file, cli)?;
            let q = parse_formula(query).map_err(|e| Failure(format!("query: {e}")))?;
            let interval = lp_bounds(fw.em(), &q)?;
            let report = Report::new("entail", json!(interval.to_string()))
                .with_query("file", path_str(file))
                .with_query("formula", q.to_string())
                .with_interval(&interval);
            Ok((report, format!("{interval}\n")))
        }
        Command::Args(LiteralArg { file, literal: l }) => {
            let (_, fw) = open(file, cli)?;
            let lit = literal(l)?;
            let d = fw.dialectic();
            let found = d.arguments_for(&lit);
            let list: Vec<ArgumentJson> = found.iter().map(|&a| ArgumentJson::new(d, a)).collect();
            let text = found
                .iter()
                .map(|&a| format!("{}\n", d.argument(a).display(d.program())))
                .collect();
            let report = Report::new("args", serde_json::to_value(list).expect("serializes"))
                .with_query("file", path_str(file))
                .with_query("literal", lit.to_string());
            Ok((report, text))
        }
        Command::Warrant { target, world: w } => {
            let (_, fw) = open(&target.file, cli)?;
            let lit = literal(&target.literal)?;
            let mut report = Report::new("warrant", Value::Null)
                .with_query("file", path_str(&target.file))
                .with_query("literal", lit.to_string());
            let (status, forest) = match w {
                Some(w) => {
                    let w = world(&fw, w)?;
                    report = report.with_query("world", inca::output::world_json(&w));
                    (
                        fw.warrant_status_in(&w, &lit)?,
                        fw.marked_forest_in(&w, &lit)?,
                    )
                }
                None => {
                    let ctx = Context::all();
                    let d = fw.dialectic();
                    (d.warrant_status(&lit, &ctx)?, d.marked_forest(&lit, &ctx))
                }
            };
            report.result = json!(status.as_str());
            let report = report.with_forest(fw.dialectic(), &forest);
            Ok((report, format!("{}\n", status.as_str())))
        }
        Command::Nec(LiteralArg { file, literal: l })
        | Command::Poss(LiteralArg { file, literal: l }) => {
            let (_, fw) = open(file, cli)?;
            let lit = literal(l)?;
            let (name, worlds) = match &cli.command {
                Command::Nec(_) => ("nec", fw.nec_set(&lit)?),
                _ => ("poss", fw.poss_set(&lit)?),
            };
            let report = Report::new(name, json!(worlds.len()))
                .with_query("file", path_str(file))
                .with_query("literal", lit.to_string())
                .with_worlds(&worlds);
            Ok((report, world_lines(&worlds)))
        }
        Command::Bounds(LiteralArg { file, literal: l }) => {
            let (_, fw) = open(file, cli)?;
            let lit = literal(l)?;
            let interval = fw.prob_bounds(&lit)?;
            let report = Report::new("bounds", json!(interval.to_string()))
                .with_query("file", path_str(file))
                .with_query("literal", lit.to_string())
                .with_interval(&interval);
            Ok((report, format!("{interval}\n")))
        }
        Command::Attribute {
            file,
            operation,
            suspects,
            evidence,
            comparison,
        } => {
            let (_, fw) = open(file, cli)?;
            let mut evidence_items = Vec::new();
            if let Some(path) = evidence {
                let source = read(path)?;
                evidence_items = parse_evidence(&source)
                    .map_err(|e| Failure(format!("{}:{e}", path.display())))?
                    .into_iter()
                    .map(|s| s.value)
                    .collect();
            }
            let names: Vec<&str> = suspects.iter().map(String::as_str).collect();
            let comparison = match comparison {
                ComparisonArg::Midpoint => Comparison::Midpoint,
                ComparisonArg::LowerBound => Comparison::LowerBoundDominance,
            };
            let query = AttributionQuery::new(&names, operation)
                .with_evidence(evidence_items)
                .with_comparison(comparison);
            let answer = most_probable_suspects(&fw, &query)?;

            let mut text = format!("most probable: {}\n", answer.most_probable.join(", "));
            for (s, i) in &answer.per_suspect {
                text.push_str(&format!("{s}: {i}\n"));
            }
            for (s, t) in &answer.trace {
                if let Some(t) = t {
                    text.push_str(&format!("\n{s} is warranted in {}:\n", t.world));
                    text.push_str(&forest_text(fw.dialectic(), &t.forest));
                }
            }
            let mut report = Report::new("attribute", json!(answer.most_probable))
                .with_query("file", path_str(file))
                .with_query("operation", operation.as_str())
                .with_query("suspects", suspects.clone());
            if let Some(path) = evidence {
                report = report.with_query("evidence", path_str(path));
            }
            Ok((report.with_answer(fw.dialectic(), &answer), text))
        }
        Command::Explain { target, world: w } => {
            let (_, fw) = open(&target.file, cli)?;
            let lit = literal(&target.literal)?;
            let w = world(&fw, w)?;
            let status = fw.warrant_status_in(&w, &lit)?;
            let forest = fw.marked_forest_in(&w, &lit)?;
            let mut text = format!("{lit} in {w}: {}\n", status.as_str());
            if forest.is_empty() {
                text.push_str("no argument for it is valid in this world\n");
            }
            text.push_str(&forest_text(fw.dialectic(), &forest));
            let report = Report::new("explain", json!(status.as_str()))
                .with_query("file", path_str(&target.file))
                .with_query("literal", lit.to_string())
                .with_query("world", inca::output::world_json(&w))
                .with_forest(fw.dialectic(), &forest);
            Ok((report, text))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((report, text)) => {
            let mut out = std::io::stdout().lock();
            let written = if cli.json {
                writeln!(out, "{}", report.to_json())
            } else {
                out.write_all(text.as_bytes())
            };
            match written.and_then(|_| out.flush()) {
                Err(e) if e.kind() != ErrorKind::BrokenPipe => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
                _ => ExitCode::SUCCESS,
            }
        }
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
