//! Command-line front end. Every subcommand parses its inputs, calls the
//! library, and prints one JSON document on standard output.
//!
//! Exit codes: 0 success, 2 input error, 3 enumeration cap exceeded.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cascade::{induced_failure_set, simulate_cascade};
use crate::error::Error;
use crate::harness::{gen_network, parse_sweep, run_experiment, write_outputs};
use crate::ilp::{build_ilp, variable_map, write_lp};
use crate::model::{format_network, parse_network, EntityId, InterdependentNetwork};
use crate::solvers::{reduce_setcover, solve_alg1_special_case, solve_exact, solve_heuristic};
use crate::vulnerability::{k_most_vulnerable_exact, k_most_vulnerable_greedy, DEFAULT_CAP};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "aeap",
    version,
    about = "Cascading failures and auxiliary entity allocation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VulnArg {
    Exact,
    Greedy,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SolverArg {
    Heuristic,
    Exact,
    Alg1,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Simulate the cascade caused by an initial failure set.
    Simulate {
        #[arg(long)]
        net: PathBuf,
        /// Comma-separated entities, e.g. b2,b3 (may be empty).
        #[arg(long, default_value = "")]
        fail: String,
        /// Also write the per-step failure table as CSV.
        #[arg(long)]
        trace_csv: Option<PathBuf>,
    },
    /// Find the k entities whose failure brings down the most entities.
    Vulnerable {
        #[arg(long)]
        net: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "exact")]
        method: VulnArg,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
    },
    /// Choose s rules to receive an auxiliary entity.
    Aeap {
        #[arg(long)]
        net: PathBuf,
        #[arg(long, default_value = "")]
        attacked: String,
        #[arg(long)]
        s: usize,
        #[arg(long, value_enum, default_value = "heuristic")]
        method: SolverArg,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
    },
    /// Write the 0/1 program as an LP file plus a JSON variable map.
    ExportLp {
        #[arg(long)]
        net: PathBuf,
        #[arg(long, default_value = "")]
        attacked: String,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        out: PathBuf,
        /// Variable map path; defaults to the LP path with a .map.json suffix.
        #[arg(long)]
        map: Option<PathBuf>,
    },
    /// Generate a random network from a key=value config.
    Gen {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a sweep and write records.csv and one SVG per instance.
    Experiment {
        #[arg(long)]
        sweep: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Build an allocation instance from a set-cover instance.
    ReduceSetcover {
        /// Comma-separated universe elements.
        #[arg(long)]
        universe: String,
        /// Subsets separated by ';', elements by ',', e.g. "1,2;2,3".
        #[arg(long)]
        subsets: String,
        #[arg(long)]
        x: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Cap(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded { .. } => Failure::Cap(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<Value, Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> std::result::Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> std::result::Result<InterdependentNetwork, Failure> {
    Ok(parse_network(&read(path)?)?)
}

/// Parses `e1,e2,...`; an empty string is the empty set.
pub fn parse_entity_list(text: &str) -> Result<BTreeSet<EntityId>, String> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<EntityId>()
                .map_err(|_| format!("not an entity: {s:?}"))
        })
        .collect()
}

fn parse_numbers(text: &str) -> Result<BTreeSet<u32>, String> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<u32>().map_err(|_| format!("not a number: {s:?}")))
        .collect()
}

fn entities(text: &str) -> std::result::Result<BTreeSet<EntityId>, Failure> {
    parse_entity_list(text).map_err(Failure::Input)
}

fn names(set: &BTreeSet<EntityId>) -> Vec<String> {
    set.iter().map(|e| e.to_string()).collect()
}

fn execute(command: Command) -> Outcome {
    match command {
        Command::Simulate {
            net,
            fail,
            trace_csv,
        } => {
            let net = load(&net)?;
            let trace = simulate_cascade(&net, &entities(&fail)?)?;
            if let Some(path) = &trace_csv {
                write(path, &trace.to_csv())?;
            }
            let times: serde_json::Map<String, Value> = trace
                .fail_times()
                .iter()
                .map(|(e, t)| (e.to_string(), json!(t)))
                .collect();
            Ok(json!({
                "initial": names(trace.initial()),
                "failed": names(&trace.failed_set()),
                "induced": names(&induced_failure_set(&trace)),
                "fail_times": times,
                "horizon": trace.horizon(),
                "last_step": trace.last_step(),
            }))
        }
        Command::Vulnerable {
            net,
            k,
            method,
            cap,
        } => {
            let net = load(&net)?;
            let res = match method {
                VulnArg::Exact => k_most_vulnerable_exact(&net, k, cap)?,
                VulnArg::Greedy => k_most_vulnerable_greedy(&net, k)?,
            };
            Ok(serde_json::to_value(&res).expect("serialisable"))
        }
        Command::Aeap {
            net,
            attacked,
            s,
            method,
            cap,
        } => {
            let net = load(&net)?;
            let attacked = entities(&attacked)?;
            let sol = match method {
                SolverArg::Heuristic => solve_heuristic(&net, &attacked, s)?,
                SolverArg::Exact => solve_exact(&net, &attacked, s, cap)?,
                SolverArg::Alg1 => solve_alg1_special_case(&net, &attacked, s)?,
            };
            Ok(serde_json::to_value(sol.report()).expect("serialisable"))
        }
        Command::ExportLp {
            net,
            attacked,
            s,
            out,
            map,
        } => {
            let net = load(&net)?;
            let model = build_ilp(&net, &entities(&attacked)?, s)?;
            let map = map.unwrap_or_else(|| {
                let mut p = out.clone().into_os_string();
                p.push(".map.json");
                PathBuf::from(p)
            });
            write(&out, &write_lp(&model))?;
            let sidecar =
                serde_json::to_string_pretty(&variable_map(&model)).expect("serialisable");
            write(&map, &(sidecar + "\n"))?;
            Ok(json!({
                "lp": out.display().to_string(),
                "map": map.display().to_string(),
                "objective_offset": model.objective_offset(),
                "stats": model.stats(),
            }))
        }
        Command::Gen { config, out } => {
            let cfg = parse_sweep(&read(&config)?)?;
            let net = gen_network(&cfg.generator)?;
            let text = format_network(&net);
            let mut doc = json!({
                "entities": net.len(),
                "rules": net.idrs().iter().filter(|d| !d.is_empty()).count(),
                "seed": cfg.generator.seed,
            });
            match out {
                Some(path) => {
                    write(&path, &text)?;
                    doc["out"] = json!(path.display().to_string());
                }
                None => doc["network"] = json!(text),
            }
            Ok(doc)
        }
        Command::Experiment { sweep, out_dir } => {
            let cfg = parse_sweep(&read(&sweep)?)?;
            let records = run_experiment(&cfg.instances(), &cfg.options)?;
            let files = write_outputs(&records, &out_dir)
                .map_err(|e| Failure::Input(format!("{}: {e}", out_dir.display())))?;
            let gaps: Vec<f64> = records.iter().filter_map(|r| r.gap_percent).collect();
            let mean = if gaps.is_empty() {
                0.0
            } else {
                gaps.iter().sum::<f64>() / gaps.len() as f64
            };
            let max = gaps.iter().copied().fold(0.0, f64::max);
            Ok(json!({
                "records": records.len(),
                "capped": records.iter().filter(|r| r.protected_exact.is_none()).count(),
                "mean_gap_pct": mean,
                "max_gap_pct": max,
                "files": files.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
            }))
        }
        Command::ReduceSetcover {
            universe,
            subsets,
            x,
            out,
        } => {
            let universe = parse_numbers(&universe).map_err(Failure::Input)?;
            let subsets = subsets
                .split(';')
                .map(parse_numbers)
                .collect::<Result<Vec<_>, _>>()
                .map_err(Failure::Input)?;
            let red = reduce_setcover(&universe, &subsets, x)?;
            let text = format_network(&red.network);
            let mut doc = json!({
                "attacked": names(&red.attacked),
                "s": red.s,
                "p_f_target": red.p_f_target,
                "subset_entities": red.subset_entities.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
            });
            match out {
                Some(path) => {
                    write(&path, &text)?;
                    doc["out"] = json!(path.display().to_string());
                }
                None => doc["network"] = json!(text),
            }
            Ok(doc)
        }
    }
}

/// Runs the CLI with explicit streams and returns the exit code.
pub fn run_with_io<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(cli.command) {
        Ok(doc) => {
            let _ = writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&doc).expect("serialisable")
            );
            EXIT_OK
        }
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
        Err(Failure::Cap(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_CAP
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_io(
        args,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}
