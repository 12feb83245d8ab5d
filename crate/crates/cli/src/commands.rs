use std::fmt::Write as _;
use std::fs;
use std::io::Read as _;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context as _};
use meshfab::fabric::{trace_csv, trace_text, Fabric, FabricConfig};
use meshfab::isa::{assemble, disassemble, from_hex, to_hex};
use meshfab::kernel::{build_matvec, build_tiled_matvec, walkthrough, InjectionSchedule, Matrix, ScheduleError};
use meshfab::pagerank::{
    fabric_pagerank, load_graph, rank_csv, rank_report, summary_csv, synthetic_network, FabricRunError,
    PageRankParams,
};
use meshfab::perf::{matvec_sweep, sweep_csv, throughput_sweep, tiled_runtime, CostParams, TileModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Command, FabricArgs, PagerankArgs, ScheduleArgs, ScheduleKind, SweepArgs, SweepKind};

pub const MAX_CYCLES_ENV: &str = "MESHFAB_MAX_CYCLES";

/// Process exit status for each failure class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureKind {
    Usage = 1,
    Parse = 2,
    Simulation = 3,
}

#[derive(Debug)]
pub struct Failure {
    pub kind: FailureKind,
    pub error: anyhow::Error,
}

type Outcome<T> = Result<T, Failure>;

trait Classify<T> {
    fn or_fail(self, kind: FailureKind) -> Outcome<T>;
}

impl<T, E: Into<anyhow::Error>> Classify<T> for Result<T, E> {
    fn or_fail(self, kind: FailureKind) -> Outcome<T> {
        self.map_err(|e| Failure { kind, error: e.into() })
    }
}

fn usage(msg: String) -> Failure {
    Failure {
        kind: FailureKind::Usage,
        error: anyhow!(msg),
    }
}

pub fn dispatch(cmd: Command) -> Outcome<()> {
    match cmd {
        Command::Asm { input } => {
            let words = assemble(&read_input(&input)?).or_fail(FailureKind::Parse)?;
            print!("{}", to_hex(&words).or_fail(FailureKind::Parse)?);
            Ok(())
        }
        Command::Disasm { input } => {
            let words = from_hex(&read_input(&input)?).or_fail(FailureKind::Parse)?;
            print!("{}", disassemble(&words));
            Ok(())
        }
        Command::Run {
            schedule,
            fabric,
            trace,
            out,
        } => cmd_run(&schedule, &fabric, trace, out.as_deref()),
        Command::Pagerank(args) => cmd_pagerank(&args),
        Command::Sweep(args) => cmd_sweep(&args),
        Command::Schedule(args) => cmd_schedule(&args),
        Command::Generate { nodes, links, seed } => {
            let g = synthetic_network(nodes, links, seed).or_fail(FailureKind::Usage)?;
            print!("{}", g.to_edge_list());
            Ok(())
        }
    }
}

fn read_input(path: &Path) -> Outcome<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).or_fail(FailureKind::Usage)?;
        return Ok(s);
    }
    fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .or_fail(FailureKind::Usage)
}

fn write_output(dir: &Path, name: &str, content: &str) -> Outcome<PathBuf> {
    fs::create_dir_all(dir)
        .with_context(|| format!("cannot create {}", dir.display()))
        .or_fail(FailureKind::Usage)?;
    let path = dir.join(name);
    fs::write(&path, content)
        .with_context(|| format!("cannot write {}", path.display()))
        .or_fail(FailureKind::Usage)?;
    Ok(path)
}

fn load_fabric(args: &FabricArgs) -> Outcome<FabricConfig> {
    let mut cfg = match &args.fabric {
        Some(path) => read_input(path)?
            .parse::<FabricConfig>()
            .with_context(|| format!("in {}", path.display()))
            .or_fail(FailureKind::Parse)?,
        None => FabricConfig::default(),
    };
    if let Ok(raw) = std::env::var(MAX_CYCLES_ENV) {
        cfg.max_cycles = raw
            .trim()
            .parse()
            .map_err(|_| usage(format!("{MAX_CYCLES_ENV}={raw} is not a cycle count")))?;
    }
    Ok(cfg)
}

fn cmd_run(schedule: &Path, fabric: &FabricArgs, trace: bool, out: Option<&Path>) -> Outcome<()> {
    let cfg = load_fabric(fabric)?;
    let sched = InjectionSchedule::parse(&read_input(schedule)?).or_fail(FailureKind::Parse)?;
    sched.validate().or_fail(FailureKind::Parse)?;
    let mut sim = Fabric::new(cfg).or_fail(FailureKind::Usage)?.with_tracing(trace || out.is_some());
    let result = sim.run(&sched);
    let outcome = match result {
        Ok(o) => o,
        Err(e) => {
            if let Some(dir) = out {
                write_output(dir, "trace.csv", &trace_csv(&sim.take_trace()))?;
            }
            return Err(e).or_fail(FailureKind::Simulation);
        }
    };

    let mut report = String::new();
    for note in &sched.notes {
        let _ = writeln!(report, "note: {note}");
    }
    let _ = writeln!(report, "timesteps: {}", outcome.timesteps);
    if sched.expected_timesteps != outcome.timesteps {
        let _ = writeln!(report, "expected timesteps: {}", sched.expected_timesteps);
    }
    for (addr, v) in outcome.final_values.iter().enumerate() {
        if *v != 0.0 || sim.site(addr).nonfinite_flag {
            let _ = writeln!(report, "site {addr}: {v:?}");
        }
    }
    for (slot, v) in &outcome.outputs {
        let _ = writeln!(report, "output {slot}: {v:?}");
    }
    if sim.nonfinite_count() > 0 {
        let _ = writeln!(report, "non-finite results: {}", sim.nonfinite_count());
    }
    print!("{report}");

    match out {
        Some(dir) => {
            let state: String = std::iter::once("site,value\n".to_string())
                .chain(outcome.final_values.iter().enumerate().map(|(a, v)| format!("{a},{v:?}\n")))
                .collect();
            let outputs: String = std::iter::once("slot,value\n".to_string())
                .chain(outcome.outputs.iter().map(|(s, v)| format!("{s},{v:?}\n")))
                .collect();
            write_output(dir, "state.csv", &state)?;
            write_output(dir, "outputs.csv", &outputs)?;
            write_output(dir, "trace.csv", &trace_csv(&outcome.trace))?;
        }
        None if trace => print!("{}", trace_text(&outcome.trace)),
        None => {}
    }
    Ok(())
}

fn cmd_pagerank(args: &PagerankArgs) -> Outcome<()> {
    let cfg = load_fabric(&args.fabric)?;
    let iterations = args.iters as usize;
    if args.model_only {
        let params = CostParams::new(cfg.sites(), cfg.clock_hz).or_fail(FailureKind::Usage)?;
        let model: TileModel = args.model.into();
        let r = tiled_runtime(args.nodes as u64, iterations as u64, &params).or_fail(FailureKind::Usage)?;
        println!(
            "N={} n={} S={} f={} Hz model={model}: {} timesteps, {:.3} ms",
            args.nodes,
            iterations,
            params.sites,
            params.clock_hz,
            r.timesteps(model),
            r.seconds(model) * 1e3
        );
        return Ok(());
    }

    let graph = match &args.edges {
        Some(path) => load_graph(&read_input(path)?, args.directed)
            .with_context(|| format!("in {}", path.display()))
            .or_fail(FailureKind::Parse)?,
        None => synthetic_network(args.nodes, 2, args.seed).or_fail(FailureKind::Usage)?,
    };
    let params = PageRankParams::new(args.damping, iterations);
    let result = fabric_pagerank(&graph, &params, &cfg).map_err(|e| {
        let kind = match e {
            FabricRunError::Sim(_) | FabricRunError::MissingOutput(_) => FailureKind::Simulation,
            FabricRunError::Graph(_) | FabricRunError::Schedule(_) => FailureKind::Usage,
        };
        Failure { kind, error: e.into() }
    })?;
    if result.nonfinite > 0 {
        eprintln!("warning: {} non-finite intermediate results", result.nonfinite);
    }

    let scores: Vec<f64> = result.ranks.iter().map(|&v| v as f64).collect();
    let labels = graph.labels();
    let summary = summary_csv(
        graph.node_count(),
        result.iterations,
        args.damping,
        result.timesteps,
        result.model_seconds,
    );
    match &args.out {
        Some(dir) => {
            write_output(dir, "ranks.csv", &rank_csv(&rank_report(&scores, labels, scores.len())))?;
            write_output(dir, "summary.csv", &summary)?;
            print!("{}", rank_csv(&rank_report(&scores, labels, args.top)));
        }
        None => {
            print!("{}", rank_csv(&rank_report(&scores, labels, args.top)));
            print!("{summary}");
        }
    }
    Ok(())
}

fn cmd_sweep(args: &SweepArgs) -> Outcome<()> {
    let cfg = load_fabric(&args.fabric)?;
    let params = CostParams::new(cfg.sites(), cfg.clock_hz).or_fail(FailureKind::Usage)?;
    if args.step == Some(0) {
        return Err(usage("--step must be positive".into()));
    }
    let rows = match args.kind {
        SweepKind::MatvecLatency => {
            let (from, to) = (args.from.unwrap_or(256), args.to.unwrap_or(8192));
            matvec_sweep(points(from, to, args.step), &params)
        }
        SweepKind::PagerankThroughput => {
            let (from, to) = (args.from.unwrap_or(1000), args.to.unwrap_or(5000));
            let models = match args.model {
                Some(m) => vec![m.into()],
                None => vec![TileModel::Fractional, TileModel::Ceil],
            };
            let nodes = points(from, to, Some(args.step.unwrap_or(1000)));
            throughput_sweep(nodes, args.iters as u64, &params, &models).or_fail(FailureKind::Usage)?
        }
    };
    let csv = sweep_csv(&rows);
    match &args.out {
        Some(dir) => {
            let path = write_output(dir, "sweep.csv", &csv)?;
            println!("wrote {} rows to {}", rows.len(), path.display());
        }
        None => print!("{csv}"),
    }
    Ok(())
}

/// `from..=to` by `step`, or doubling when no step is given.
fn points(from: u64, to: u64, step: Option<u64>) -> Vec<u64> {
    let mut out = Vec::new();
    let mut n = from;
    while n <= to && n > 0 {
        out.push(n);
        n = match step {
            Some(s) => n + s,
            None => n * 2,
        };
    }
    out
}

fn cmd_schedule(args: &ScheduleArgs) -> Outcome<()> {
    let sched = match args.kind {
        ScheduleKind::Walkthrough => walkthrough().1,
        ScheduleKind::Matvec => {
            let cfg = load_fabric(&args.fabric)?;
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            let a = Matrix::from_fn(args.rows, args.cols, |_, _| rng.random_range(-1.0f32..1.0));
            let b: Vec<f32> = (0..args.cols).map(|_| rng.random_range(-1.0f32..1.0)).collect();
            match build_matvec(&a, &b, &cfg) {
                Ok(s) => s,
                Err(ScheduleError::NeedsTiling { .. }) => build_tiled_matvec(&a, &b, &cfg).or_fail(FailureKind::Usage)?.1,
                Err(e) => return Err(e).or_fail(FailureKind::Usage),
            }
        }
    };
    print!("{}", sched.to_text());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::points;

    #[test]
    fn doubling_and_stepped_ranges() {
        assert_eq!(points(256, 8192, None), [256, 512, 1024, 2048, 4096, 8192]);
        assert_eq!(points(1000, 5000, Some(1000)), [1000, 2000, 3000, 4000, 5000]);
        assert!(points(10, 5, Some(1)).is_empty());
        assert!(points(0, 5, None).is_empty());
    }
}
