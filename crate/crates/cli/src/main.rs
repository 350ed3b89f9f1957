use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;
use subfactor_index5::catalog::{
    classify_pair, entry, pipeline_inputs, reproduce_classification, Fate, PairRecord, Report, ReportOptions,
};
use subfactor_index5::connections::{allowed_branch_points, build_cells, count_gauge_orbits, f_value, SolveOptions};
use subfactor_index5::graph_ops::star_profile;
use subfactor_index5::obstructions::{run_battery, BatteryOptions};
use subfactor_index5::spectral::pair_dimensions;
use subfactor_index5::{
    norm_squared, pair_isomorphic, parse_bigraph, serialize_bigraph, Bigraph, BigraphPair, Execution, INDEX,
};

const MISMATCH: u8 = 2;
const INPUT_ERROR: u8 = 1;

/// Principal graph pairs at index 5: parsing, exact spectra, obstructions,
/// connection search and the classification pipeline.
///
/// A PAIR argument is a catalog name (`G_5`, `S4<S5`, ...), two graph strings
/// joined by a comma, a single graph string used on both sides, or a file
/// holding two lines or a JSON object with `plus` and `minus`.
#[derive(Parser)]
#[command(name = "index5", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate one graph string, printing its layers
    Parse { string: String },
    /// Exact norm, dimensions, supertransitivity and star profile
    Info { pair: String },
    /// Run the obstruction battery
    Obstruct {
        pair: String,
        /// Stop at the first elimination
        #[arg(long)]
        short_circuit: bool,
    },
    /// Test two pairs for isomorphism
    Iso {
        first: String,
        second: String,
        /// Also allow matching against the opposite of the second pair
        #[arg(long)]
        opposite: bool,
    },
    /// Search for bi-unitary connections and count gauge orbits
    Connect {
        pair: String,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Classify one pair, or every pipeline entry with --all
    Classify {
        #[arg(required_unless_present = "all", conflicts_with = "all")]
        pair: Option<String>,
        #[arg(long)]
        all: bool,
        #[arg(long)]
        sequential: bool,
    },
    /// Run the full pipeline and print the report
    Report {
        #[arg(long, conflicts_with = "markdown")]
        json: bool,
        #[arg(long)]
        markdown: bool,
        /// Attach connection search results for the realized pairs
        #[arg(long)]
        connections: bool,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Points on the unit circle where the 2222 branch function hits an allowed value
    Branch {
        #[arg(long, default_value_t = 4096)]
        samples: usize,
    },
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, default_value_t = 32)]
    restarts: usize,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Run restarts and catalog entries on one thread
    #[arg(long)]
    sequential: bool,
}

impl SolverArgs {
    fn execution(&self) -> Execution {
        execution(self.sequential)
    }

    fn options(&self) -> SolveOptions {
        SolveOptions {
            restarts: self.restarts,
            tol: self.tol,
            seed: self.seed,
            execution: self.execution(),
            ..SolveOptions::default()
        }
    }
}

fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(INPUT_ERROR)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(INPUT_ERROR)
        }
    }
}

fn emit(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        // a closed pipe (e.g. `| head`) is not an error
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    emit(&format!("{}\n", serde_json::to_string_pretty(value)?))
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Parse { string } => {
            let g = parse_bigraph(&string)?;
            print_json(&json!({
                "string": serialize_bigraph(&g),
                "layer_sizes": g.layer_sizes(),
                "vertices": g.vertex_count(),
                "edges": g.edge_count(),
                "simply_laced": g.is_simply_laced(),
            }))?;
        }
        Command::Info { pair } => {
            let (name, p) = resolve_pair(&pair)?;
            print_json(&info(&name, &p))?;
        }
        Command::Obstruct { pair, short_circuit } => {
            let (_, p) = resolve_pair(&pair)?;
            let battery = run_battery(&p, BatteryOptions { short_circuit })?;
            print_json(&battery)?;
        }
        Command::Iso {
            first,
            second,
            opposite,
        } => {
            let (_, a) = resolve_pair(&first)?;
            let (_, b) = resolve_pair(&second)?;
            let iso = pair_isomorphic(&a, &b, opposite);
            print_json(&json!({ "isomorphic": iso.is_some(), "iso": iso }))?;
        }
        Command::Connect { pair, solver } => {
            let (_, p) = resolve_pair(&pair)?;
            let cells = build_cells(&p)?;
            print_json(&count_gauge_orbits(&cells, &solver.options()))?;
        }
        Command::Classify { pair: Some(pair), .. } => {
            let input = resolve(&pair)?;
            let name = input.name;
            let record = classify_pair(&name, &input.pair)?;
            print_json(&record)?;
            if let Some(expected) = input.expected {
                if expected != record.fate {
                    eprintln!("mismatch: {name}: expected {expected}, computed {}", record.fate);
                    return Ok(ExitCode::from(MISMATCH));
                }
            }
        }
        Command::Classify {
            pair: None, sequential, ..
        } => {
            let report = reproduce_classification(ReportOptions {
                execution: execution(sequential),
                ..ReportOptions::default()
            })?;
            print_json(&json!({ "records": report.records, "summary": report.summary }))?;
            return Ok(finish(&report));
        }
        Command::Report {
            json: _,
            markdown,
            connections,
            solver,
        } => {
            let report = reproduce_classification(ReportOptions {
                execution: solver.execution(),
                connections: connections.then(|| solver.options()),
            })?;
            if markdown {
                emit(&report.to_markdown())?;
            } else {
                emit(&format!("{}\n", report.to_json()))?;
            }
            return Ok(finish(&report));
        }
        Command::Branch { samples } => {
            let one = f_value(Complex64::new(1.0, 0.0));
            print_json(&json!({
                "f_at_one": [one.re, one.im],
                "roots": allowed_branch_points(samples),
            }))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn finish(report: &Report) -> ExitCode {
    if report.is_consistent() {
        return ExitCode::SUCCESS;
    }
    for m in &report.mismatches {
        eprintln!("mismatch: {m}");
    }
    ExitCode::from(MISMATCH)
}

fn info(name: &str, p: &BigraphPair) -> serde_json::Value {
    let side = |g: &Bigraph| {
        let s = norm_squared(g, Some(INDEX));
        json!({
            "string": g.to_string(),
            "norm_sq": s.report(),
            "index_five": s.exact_target.is_some(),
            "supertransitivity": subfactor_index5::supertransitivity(g),
            "star_profile": star_profile(g).map(|s| json!({ "label": s.label(), "arms": s.arms })),
        })
    };
    let dims = match pair_dimensions(p) {
        Ok((plus, minus)) => json!({ "plus": plus, "minus": minus }),
        Err(e) => json!({ "error": e.to_string() }),
    };
    json!({
        "name": name,
        "plus": side(p.plus()),
        "minus": side(p.minus()),
        "dimensions": dims,
    })
}

struct Input {
    name: String,
    pair: BigraphPair,
    /// Known for pipeline entries of the catalog and for files that state it.
    expected: Option<Fate>,
}

fn resolve_pair(arg: &str) -> Result<(String, BigraphPair)> {
    resolve(arg).map(|i| (i.name, i.pair))
}

/// Catalog name, `plus,minus`, a single graph string, or a file.
fn resolve(arg: &str) -> Result<Input> {
    let plain = |pair| Input {
        name: arg.to_string(),
        pair,
        expected: None,
    };
    if let Some(e) = entry(arg) {
        let expected = pipeline_inputs(std::slice::from_ref(&e))
            .into_iter()
            .find(|(n, _, _)| *n == e.name)
            .map(|(_, _, fate)| fate);
        return Ok(Input {
            name: e.name,
            pair: e.pair,
            expected,
        });
    }
    if let Some((plus, minus)) = arg.split_once(',') {
        return Ok(plain(BigraphPair::parse(plus.trim(), minus.trim())?));
    }
    if arg.starts_with("bwd") {
        return Ok(plain(BigraphPair::symmetric(parse_bigraph(arg)?)));
    }
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {arg}"))?;
        let record = PairRecord::parse_text(&text).map_err(|e| anyhow!("{arg}: {e}"))?;
        let pair = record.pair().with_context(|| format!("parsing {arg}"))?;
        return Ok(Input {
            name: record.name.unwrap_or_else(|| arg.to_string()),
            pair,
            expected: record.expected_fate,
        });
    }
    bail!("`{arg}` is not a catalog name, a graph string, a `plus,minus` pair or a readable file")
}
