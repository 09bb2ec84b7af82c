mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use commands::{out_path, BenchArgs, DecomposeArgs, RecolourArgs, TraceSink};
use report::{RunReport, Status};

/// Decompositions of bounded-degree graphs, recolouring paths and reduction
/// gadgets.
#[derive(Debug, Parser)]
#[command(name = "kdecomp", version)]
struct Cli {
    /// Emit trace events as JSON lines before the report.
    #[arg(long, global = true)]
    trace: bool,
    /// Add wall-clock time to the report (makes output run-dependent).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Split V into A (independent) and B (k-2 degenerate).
    Decompose {
        #[arg(long)]
        k: usize,
        #[arg(long = "in")]
        input: PathBuf,
        /// Use the general algorithm even when the cubic one applies.
        #[arg(long)]
        force_general: bool,
    },
    /// Find a single-vertex recolouring path between two (Δ+1)-colourings.
    Recolour(RecolourOpts),
    /// Build the reduction graph of a 1-in-k SAT instance.
    Gadget {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        /// Write `<prefix>.gr` and `<prefix>.labels.json` instead of inlining.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a decomposition or a recolouring path.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Generate random instances.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Exhaustive reference solvers for small inputs.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Time the solvers on doubling input sizes.
    #[command(subcommand)]
    Bench(BenchCommand),
}

#[derive(Debug, Args)]
struct RecolourOpts {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    from: PathBuf,
    #[arg(long)]
    to: PathBuf,
    /// Defaults to the colour count of the `--from` file.
    #[arg(long)]
    k: Option<usize>,
}

impl RecolourOpts {
    fn args(&self) -> RecolourArgs<'_> {
        RecolourArgs {
            input: &self.input,
            from: &self.from,
            to: &self.to,
            k: self.k,
        }
    }
}

#[derive(Debug, Subcommand)]
enum VerifyCommand {
    Decomposition {
        #[arg(long = "in")]
        input: PathBuf,
        /// Decomposition payload or a full `decompose` report.
        #[arg(long)]
        decomposition: PathBuf,
        #[arg(long)]
        k: Option<usize>,
    },
    Path {
        #[command(flatten)]
        recolour: RecolourOpts,
        /// Path payload or a full `recolour` report.
        #[arg(long)]
        path: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum GenCommand {
    Regular {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Subcubic {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Edge probability; without it a sparse near-cubic graph is built.
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Colouring {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum OracleCommand {
    Decompose {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        budget_n: Option<usize>,
    },
    Recolour {
        #[command(flatten)]
        recolour: RecolourOpts,
        #[arg(long)]
        budget_states: Option<u64>,
    },
    Sat {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        budget_n: Option<usize>,
    },
}

#[derive(Debug, Args)]
struct BenchOpts {
    #[arg(long)]
    start: Option<usize>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, default_value_t = 5)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl BenchOpts {
    fn args(&self, start: usize, steps: usize) -> BenchArgs {
        BenchArgs {
            start: self.start.unwrap_or(start),
            steps: self.steps.unwrap_or(steps),
            reps: self.reps,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Subcommand)]
enum BenchCommand {
    Cubic(BenchOpts),
    Kdegen {
        #[arg(long, default_value_t = 4)]
        k: usize,
        #[command(flatten)]
        opts: BenchOpts,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Decompose { .. } => "decompose",
            Command::Recolour(_) => "recolour",
            Command::Gadget { .. } => "gadget",
            Command::Verify(VerifyCommand::Decomposition { .. }) => "verify decomposition",
            Command::Verify(VerifyCommand::Path { .. }) => "verify path",
            Command::Gen(GenCommand::Regular { .. }) => "gen regular",
            Command::Gen(GenCommand::Subcubic { .. }) => "gen subcubic",
            Command::Gen(GenCommand::Colouring { .. }) => "gen colouring",
            Command::Oracle(OracleCommand::Decompose { .. }) => "oracle decompose",
            Command::Oracle(OracleCommand::Recolour { .. }) => "oracle recolour",
            Command::Oracle(OracleCommand::Sat { .. }) => "oracle sat",
            Command::Bench(BenchCommand::Cubic(_)) => "bench cubic",
            Command::Bench(BenchCommand::Kdegen { .. }) => "bench kdegen",
        }
    }
}

fn dispatch(cli: &Cli, report: &mut RunReport, sink: &mut TraceSink) -> anyhow::Result<()> {
    match &cli.command {
        Command::Decompose {
            k,
            input,
            force_general,
        } => commands::decompose(
            report,
            sink,
            DecomposeArgs {
                k: *k,
                input,
                force_general: *force_general,
                trace: cli.trace,
            },
        ),
        Command::Recolour(opts) => commands::recolour(report, opts.args()),
        Command::Gadget { input, k, out } => commands::gadget(report, input, *k, out_path(out)),
        Command::Verify(VerifyCommand::Decomposition {
            input,
            decomposition,
            k,
        }) => commands::verify_decomposition_cmd(report, input, decomposition, *k),
        Command::Verify(VerifyCommand::Path { recolour, path }) => {
            commands::verify_path_cmd(report, recolour.args(), path)
        }
        Command::Gen(GenCommand::Regular { k, n, seed, out }) => {
            commands::gen_regular(report, *k, *n, *seed, out_path(out))
        }
        Command::Gen(GenCommand::Subcubic { n, seed, p, out }) => {
            commands::gen_subcubic(report, *n, *seed, *p, out_path(out))
        }
        Command::Gen(GenCommand::Colouring {
            input,
            k,
            seed,
            out,
        }) => commands::gen_colouring(report, input, *k, *seed, out_path(out)),
        Command::Oracle(OracleCommand::Decompose { input, k, budget_n }) => {
            commands::oracle_decompose(report, input, *k, *budget_n)
        }
        Command::Oracle(OracleCommand::Recolour {
            recolour,
            budget_states,
        }) => commands::oracle_recolour(report, recolour.args(), *budget_states),
        Command::Oracle(OracleCommand::Sat { input, budget_n }) => {
            commands::oracle_sat(report, input, *budget_n)
        }
        Command::Bench(BenchCommand::Cubic(opts)) => {
            commands::bench_cubic(report, opts.args(10_000, 7))
        }
        Command::Bench(BenchCommand::Kdegen { k, opts }) => {
            commands::bench_kdegen(report, *k, opts.args(500, 4))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let started = Instant::now();
    let mut report = RunReport::new(cli.command.name());
    let mut sink = TraceSink::new();
    if let Err(e) = dispatch(&cli, &mut report, &mut sink) {
        eprintln!("error: {e:#}");
        report.status = Status::Error;
        report.reason = Some(format!("{e:#}"));
    }
    if cli.timing {
        report.wall_time_ms = Some(started.elapsed().as_secs_f64() * 1e3);
    }
    let mut out = std::io::stdout().lock();
    let printed = sink
        .iter()
        .try_for_each(|line| writeln!(out, "{line}"))
        .and_then(|()| {
            let text = serde_json::to_string(&report).expect("report serializes");
            writeln!(out, "{text}")
        });
    if let Err(e) = printed {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(report.status.exit_code() as u8)
}
