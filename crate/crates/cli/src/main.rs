use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use meshfab::perf::TileModel;

mod commands;

#[derive(Parser, Debug)]
#[command(name = "meshfab", version, about = "Message-programmed compute fabric simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct FabricArgs {
    /// Fabric description (`key=value` lines); 64x64 at 200 MHz when omitted.
    #[arg(long, value_name = "PATH")]
    fabric: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Assemble message text into packed 64-bit words, one hex word per line.
    Asm {
        /// Assembly file; `-` reads stdin.
        input: PathBuf,
    },
    /// Turn hex words back into assembly.
    Disasm {
        input: PathBuf,
    },
    /// Execute a schedule file and report the final fabric state.
    Run {
        schedule: PathBuf,
        #[command(flatten)]
        fabric: FabricArgs,
        /// Print the event trace (or write trace.csv with --out).
        #[arg(long)]
        trace: bool,
        /// Directory for state.csv, outputs.csv and trace.csv.
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Rank the nodes of an interaction network on the simulated fabric.
    Pagerank(PagerankArgs),
    /// Emit a cost-model sweep as CSV.
    Sweep(SweepArgs),
    /// Print a ready-made schedule.
    Schedule(ScheduleArgs),
    /// Print a seeded synthetic interaction network as an edge list.
    Generate {
        #[arg(long, default_value_t = 64)]
        nodes: usize,
        /// Links added per new node.
        #[arg(long, default_value_t = 2)]
        links: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
struct PagerankArgs {
    /// Tab-separated edge list; a seeded synthetic network when omitted.
    edges: Option<PathBuf>,
    /// Size of the synthetic network.
    #[arg(long, default_value_t = 64)]
    nodes: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    directed: bool,
    #[arg(long, default_value_t = 0.85)]
    damping: f64,
    #[arg(long, default_value_t = 100)]
    iters: u32,
    /// Rows in the rank table.
    #[arg(long, default_value_t = 10)]
    top: usize,
    #[command(flatten)]
    fabric: FabricArgs,
    /// Skip simulation; print the analytic runtime for --nodes and --iters.
    #[arg(long)]
    model_only: bool,
    #[arg(long, value_enum, default_value_t = ModelArg::Fractional)]
    model: ModelArg,
    /// Directory for ranks.csv and summary.csv.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(value_enum)]
    kind: SweepKind,
    /// First N; 256 for matvec-latency, 1000 for pagerank-throughput.
    #[arg(long)]
    from: Option<u64>,
    /// Last N; 8192 for matvec-latency, 5000 for pagerank-throughput.
    #[arg(long)]
    to: Option<u64>,
    /// Additive step; matvec-latency doubles when omitted, throughput uses 1000.
    #[arg(long)]
    step: Option<u64>,
    #[arg(long, default_value_t = 100)]
    iters: u32,
    /// Tile model for the throughput sweep; both when omitted.
    #[arg(long, value_enum)]
    model: Option<ModelArg>,
    #[command(flatten)]
    fabric: FabricArgs,
    /// Directory for sweep.csv; stdout when omitted.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ScheduleArgs {
    #[arg(value_enum)]
    kind: ScheduleKind,
    /// Matrix rows for `matvec`.
    #[arg(long, default_value_t = 4)]
    rows: usize,
    /// Matrix columns for `matvec`.
    #[arg(long, default_value_t = 3)]
    cols: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    fabric: FabricArgs,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum SweepKind {
    MatvecLatency,
    PagerankThroughput,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum ScheduleKind {
    /// Three products summed at site 3 of a 1x4 strip.
    Walkthrough,
    /// Random matrix times random vector.
    Matvec,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum ModelArg {
    Fractional,
    Ceil,
}

impl From<ModelArg> for TileModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Fractional => TileModel::Fractional,
            ModelArg::Ceil => TileModel::Ceil,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {:#}", failure.error);
            ExitCode::from(failure.kind as u8)
        }
    }
}
