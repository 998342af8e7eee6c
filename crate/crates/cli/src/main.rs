//! `jkscatter`: JK residues of quivers and the matching scattering diagrams.

mod commands;
mod input;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use jkscatter::quiver_jk::SignMode;
use serde_json::json;

use commands::JkOptions;
use input::{bipartite_problem, parse_dimension, parse_quiver_file, Problem};
use report::{Failure, Outcome, EXIT_INPUT};

#[derive(Parser)]
#[command(name = "jkscatter", version, about = "Jeffrey-Kirwan residues of quivers and rank-2 scattering diagrams")]
struct Cli {
    /// Emit a flat CSV table instead of the JSON report.
    #[arg(long, global = true)]
    csv: bool,
    /// Add wall-clock timing to the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

/// A quiver file, or inline complete bipartite data.
#[derive(Args)]
struct QuiverInput {
    /// JSON quiver file.
    file: Option<PathBuf>,
    #[arg(long, conflicts_with = "file")]
    l1: Option<usize>,
    #[arg(long, conflicts_with = "file")]
    l2: Option<usize>,
    /// Dimension vector, e.g. "1,1;1".
    #[arg(long, conflicts_with = "file")]
    d: Option<String>,
    /// Stability, e.g. "1,1,-2".
    #[arg(long, conflicts_with = "file")]
    zeta: Option<String>,
}

impl QuiverInput {
    fn load(&self) -> Result<Problem, Failure> {
        if let Some(f) = &self.file {
            return parse_quiver_file(f);
        }
        match (self.l1, self.l2, &self.d, &self.zeta) {
            (Some(l1), Some(l2), Some(d), Some(z)) => bipartite_problem(l1, l2, d, z),
            _ => Err(Failure::invalid("give a quiver file or all of --l1, --l2, --d, --zeta".into())),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Sign {
    Paper,
    Mero,
}

#[derive(Subcommand)]
enum Command {
    /// Spanning trees of the reduced quiver, their coefficients and the Weist count.
    Trees {
        #[command(flatten)]
        input: QuiverInput,
    },
    /// Global JK residue of Z_Q.
    Jk {
        #[command(flatten)]
        input: QuiverInput,
        #[arg(long, default_value = "1")]
        lambda: String,
        /// "seed:<u64>" or an explicit list "p/q,p/q,...".
        #[arg(long, default_value = "seed:0")]
        rcharges: String,
        /// One R-charge per original arrow; false gives one per reduced arrow.
        #[arg(long, default_value_t = true, action = ArgAction::Set)]
        split_multiplicities: bool,
        #[arg(long, value_enum, default_value = "paper")]
        sign: Sign,
    },
    /// Abelianized JK residue.
    JkAb {
        #[command(flatten)]
        input: QuiverInput,
        /// Closed-form large-R limit.
        #[arg(long)]
        infinity: bool,
        #[arg(long, default_value = "1")]
        lambda: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated lambdas, reported against the limit.
        #[arg(long, conflicts_with = "infinity")]
        sweep: Option<String>,
    },
    /// Consistent completion of the bipartite initial diagram.
    Scatter {
        #[arg(long)]
        l1: usize,
        #[arg(long)]
        l2: usize,
        #[arg(long)]
        order: u32,
        /// Only the ray with this direction, "a,b".
        #[arg(long)]
        ray: Option<String>,
    },
    /// Log coefficient c_d of a dimension vector.
    ExtractCd {
        #[arg(long)]
        l1: usize,
        #[arg(long)]
        l2: usize,
        #[arg(long)]
        d: String,
        #[arg(long)]
        order: u32,
    },
    /// Compare c_d with the JK side for a complete bipartite quiver.
    VerifyMain {
        #[arg(long)]
        l1: usize,
        #[arg(long)]
        l2: usize,
        #[arg(long)]
        d: String,
        #[arg(long)]
        zeta: String,
        #[arg(long)]
        order: u32,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Trees { .. } => "trees",
            Command::Jk { .. } => "jk",
            Command::JkAb { .. } => "jk-ab",
            Command::Scatter { .. } => "scatter",
            Command::ExtractCd { .. } => "extract-cd",
            Command::VerifyMain { .. } => "verify-main",
        }
    }

    fn run(&self) -> Result<Outcome, Failure> {
        match self {
            Command::Trees { input } => commands::trees(&input.load()?),
            Command::Jk { input, lambda, rcharges, split_multiplicities, sign } => {
                let sign = match sign {
                    Sign::Paper => SignMode::Paper,
                    Sign::Mero => SignMode::Mero,
                };
                let o = JkOptions { lambda, rcharges, split: *split_multiplicities, sign };
                commands::jk(&input.load()?, &o)
            }
            Command::JkAb { input, infinity, lambda, seed, sweep } => {
                commands::jk_ab(&input.load()?, *infinity, lambda, *seed, sweep.as_deref())
            }
            Command::Scatter { l1, l2, order, ray } => commands::scatter_walls(*l1, *l2, *order, ray.as_deref()),
            Command::ExtractCd { l1, l2, d, order } => commands::extract(*l1, *l2, &parse_dimension(d, *l1, *l2)?, *order),
            Command::VerifyMain { l1, l2, d, zeta, order } => {
                commands::verify(*l1, *l2, &bipartite_problem(*l1, *l2, d, zeta)?, *order)
            }
        }
    }
}

fn limit_threads() -> Result<(), Failure> {
    let Ok(text) = std::env::var("JKSCATTER_THREADS") else {
        return Ok(());
    };
    let n: usize = text
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::invalid(format!("JKSCATTER_THREADS must be a positive integer, got {text:?}")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Failure::invalid(e.to_string()))
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let name = cli.command.name();
    let start = Instant::now();
    let outcome = limit_threads().and_then(|_| cli.command.run());
    let elapsed = start.elapsed().as_micros() as u64;
    let code = match outcome {
        Ok(o) => {
            if cli.csv {
                match o.table.render() {
                    Ok(text) => emit(&text),
                    Err(f) => {
                        eprintln!("jkscatter: {}", f.message);
                        return ExitCode::from(EXIT_INPUT as u8);
                    }
                }
                if cli.timing {
                    eprintln!("timing_us: {elapsed}");
                }
            } else {
                let mut r = json!({ "command": name, "argv": argv, "inputs": o.inputs, "result": o.result });
                if cli.timing {
                    r["timing_us"] = json!(elapsed);
                }
                emit(&(serde_json::to_string_pretty(&r).expect("report serializes") + "\n"));
            }
            o.code
        }
        Err(f) => {
            let r = json!({ "command": name, "argv": argv, "error": f.to_json() });
            emit(&(serde_json::to_string_pretty(&r).expect("report serializes") + "\n"));
            eprintln!("jkscatter: {}", f.message);
            f.code
        }
    };
    ExitCode::from(code as u8)
}
