//! `rewire`: simulate rewiring chains and processes, compute motif
//! densities, run the verification suite and summarize trajectories.
//!
//! Exit status is 0 on success, 1 when a verification check fails and 2 on
//! any configuration, input or output error.

mod run_config;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rewire::chain::{self, TrajectoryRecord};
use rewire::config::ConfigFile;
use rewire::ctmc;
use rewire::edgelist::{parse_edge_list, parse_snapshots, write_snapshots};
use rewire::graph::Graph;
use rewire::limits::{densities_csv, motif_densities, DensityEstimate};
use rewire::measures::{pair_stat, EdgeCounts, MapLaw};
use rewire::rng::stream_rng;
use rewire::verify::run_suite;

use run_config::RunConfig;

#[derive(Debug, Parser)]
#[command(name = "rewire", version, about = "Exchangeable graph rewiring: simulation and verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate a discrete-time chain driven by the [kernel] section.
    SimulateDiscrete(Common),
    /// Simulate a continuous-time process from the [global.*] and [local] sections.
    SimulateCtmc(Common),
    /// Motif densities of an edge-list graph, or of a map drawn from [kernel].
    Densities {
        #[command(flatten)]
        common: Common,
        /// Edge-list graph to analyze.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Run an exhaustive verification suite.
    Verify(Common),
    /// Summarize trajectory (`.jsonl`) or snapshot files as CSV.
    Summarize {
        #[command(flatten)]
        common: Common,
        files: Vec<PathBuf>,
    },
}

/// Flags shared by every subcommand; they override the config file.
#[derive(Debug, Default, Args)]
pub struct Common {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    horizon: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long = "motif-order")]
    motif_order: Option<usize>,
    #[arg(long)]
    suite: Option<String>,
    /// Initial state as an edge-list file.
    #[arg(long)]
    initial: Option<PathBuf>,
    /// Comma-separated snapshot times.
    #[arg(long)]
    snapshots: Option<String>,
    /// Monte Carlo sample count for densities beyond the exact cap.
    #[arg(long)]
    samples: Option<u64>,
    /// Also write the rewiring maps of a discrete simulation.
    #[arg(long = "record-maps")]
    record_maps: bool,
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    VerificationFailed,
}

impl From<rewire::Error> for CliError {
    fn from(e: rewire::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::VerificationFailed) => ExitCode::from(1),
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> CliResult<()> {
    match command {
        Command::SimulateDiscrete(common) => {
            let (file, cfg) = load(&common)?;
            simulate_discrete(&file, &cfg)
        }
        Command::SimulateCtmc(common) => {
            let (file, cfg) = load(&common)?;
            simulate_ctmc(&file, &cfg)
        }
        Command::Densities { common, input } => {
            let (file, cfg) = load(&common)?;
            densities(&file, &cfg, input.as_deref())
        }
        Command::Verify(common) => {
            let (_, cfg) = load(&common)?;
            verify(&cfg)
        }
        Command::Summarize { common, files } => {
            let (_, cfg) = load(&common)?;
            summarize(&cfg, &files)
        }
    }
}

fn load(common: &Common) -> CliResult<(ConfigFile, RunConfig)> {
    let file = match &common.config {
        Some(path) => {
            let text = read(path)?;
            ConfigFile::parse(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
        }
        None => ConfigFile::default(),
    };
    let cfg = RunConfig::resolve(&file, common)?;
    Ok((file, cfg))
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn write(dir: &Path, name: &str, contents: &[u8]) -> CliResult<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| CliError::Config(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    Ok(path)
}

fn initial_state(cfg: &RunConfig) -> CliResult<Graph> {
    match &cfg.initial {
        Some(path) => {
            let g = parse_edge_list(&read(path)?).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            if cfg.n.is_some_and(|n| n != g.order()) {
                return Err(CliError::Config(format!(
                    "initial state has order {} but n = {}",
                    g.order(),
                    cfg.n.unwrap_or(0)
                )));
            }
            Ok(g)
        }
        None => Ok(Graph::empty(cfg.require_n()?)),
    }
}

fn simulate_discrete(file: &ConfigFile, cfg: &RunConfig) -> CliResult<()> {
    let kernel = file
        .kernel_spec()?
        .ok_or_else(|| CliError::Config("simulate-discrete needs a [kernel] section".into()))?;
    let steps = cfg
        .steps
        .ok_or_else(|| CliError::Config("missing `steps` (set it in [run] or pass --steps)".into()))?;
    let g0 = initial_state(cfg)?;
    let mut rng = stream_rng(cfg.seed, 0);
    let mut traj = chain::simulate(&g0, &kernel, steps, &mut rng, cfg.record_maps)?;
    traj.seed = Some(cfg.seed);
    let mut buf = Vec::new();
    traj.write_jsonl(&mut buf)?;
    let path = write(&cfg.out, "trajectory.jsonl", &buf)?;
    println!("wrote {} states to {}", traj.states.len(), path.display());
    if cfg.record_maps {
        let mut buf = Vec::new();
        traj.write_maps_jsonl(&mut buf)?;
        let path = write(&cfg.out, "maps.jsonl", &buf)?;
        println!("wrote {steps} maps to {}", path.display());
    }
    Ok(())
}

fn simulate_ctmc(file: &ConfigFile, cfg: &RunConfig) -> CliResult<()> {
    let spec = file.measure_spec()?;
    let horizon = cfg
        .horizon
        .ok_or_else(|| CliError::Config("missing `horizon` (set it in [run] or pass --horizon)".into()))?;
    let g0 = initial_state(cfg)?;
    let grid = if cfg.snapshots.is_empty() {
        if horizon > 0.0 {
            vec![0.0, horizon]
        } else {
            vec![0.0]
        }
    } else {
        cfg.snapshots.clone()
    };
    let mut rng = stream_rng(cfg.seed, 0);
    let traj = ctmc::simulate_ctmc(&g0, &spec, horizon, &grid, &mut rng)?;
    let mut buf = Vec::new();
    traj.write_event_log(&mut buf)?;
    let events = write(&cfg.out, "events.jsonl", &buf)?;
    let snaps = write_snapshots(traj.snapshots.iter().map(|(t, g)| (*t, g)));
    let snapshots = write(&cfg.out, "snapshots.txt", snaps.as_bytes())?;
    let rates = ctmc::rate_summary(&spec, g0.order());
    let rates_json = serde_json::to_vec_pretty(&rates).map_err(|e| CliError::Config(e.to_string()))?;
    write(&cfg.out, "rates.json", &rates_json)?;
    println!(
        "wrote {} events to {} and {} snapshots to {}",
        traj.events.len(),
        events.display(),
        traj.snapshots.len(),
        snapshots.display()
    );
    Ok(())
}

fn densities(file: &ConfigFile, cfg: &RunConfig, input: Option<&Path>) -> CliResult<()> {
    let m = cfg.motif_order.unwrap_or(2);
    let mut rng = stream_rng(cfg.seed, 0);
    let estimates: Vec<DensityEstimate> = match input {
        Some(path) => {
            let g = parse_edge_list(&read(path)?).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            motif_densities(&g, m, cfg.samples, &mut rng)?
        }
        None => {
            let kernel = file.kernel_spec()?.ok_or_else(|| {
                CliError::Config("densities needs --input or a [kernel] section to sample a map from".into())
            })?;
            let w = kernel.sample_map(cfg.require_n()?, &mut rng)?;
            motif_densities(&w, m, cfg.samples, &mut rng)?
        }
    };
    let path = write(&cfg.out, "densities.csv", densities_csv(&estimates).as_bytes())?;
    println!("wrote {} order-{m} densities to {}", estimates.len(), path.display());
    Ok(())
}

fn verify(cfg: &RunConfig) -> CliResult<()> {
    let suite = cfg.suite.as_deref().unwrap_or("default");
    let report = run_suite(suite, cfg.seed)?;
    let json = serde_json::to_vec_pretty(&report).map_err(|e| CliError::Config(e.to_string()))?;
    let path = write(&cfg.out, "verify.json", &json)?;
    print!("{}", report.summary());
    println!(
        "{}: {} of {} cases passed; report written to {}",
        if report.passed { "PASS" } else { "FAIL" },
        report.cases.iter().filter(|c| c.passed).count(),
        report.cases.len(),
        path.display()
    );
    if report.passed {
        Ok(())
    } else {
        Err(CliError::VerificationFailed)
    }
}

/// `(time or step, state)` pairs from a trajectory or snapshot file.
fn load_run(path: &Path) -> CliResult<Vec<(f64, Graph)>> {
    let text = read(path)?;
    let context = |e: rewire::Error| CliError::Config(format!("{}: {e}", path.display()));
    if path.extension().is_some_and(|x| x == "jsonl") {
        text.lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(idx, line)| {
                let rec: TrajectoryRecord = serde_json::from_str(line)
                    .map_err(|e| context(rewire::Error::parse(idx + 1, e.to_string())))?;
                let g = rec.to_graph().map_err(|e| context(rewire::Error::parse(idx + 1, e.to_string())))?;
                Ok((rec.m as f64, g))
            })
            .collect()
    } else {
        parse_snapshots(&text).map_err(context)
    }
}

fn summarize(cfg: &RunConfig, files: &[PathBuf]) -> CliResult<()> {
    if files.is_empty() {
        return Err(CliError::Config("summarize needs at least one trajectory file".into()));
    }
    let mut summary = String::from("run,t,n0,n1,edge_density,n00,n01,n10,n11\n");
    let mut dens = String::from("run,t,motif_id,order,mode,value,sample_count\n");
    let mut rng = stream_rng(cfg.seed, 0);
    for (run, path) in files.iter().enumerate() {
        let states = load_run(path)?;
        let mut prev: Option<&Graph> = None;
        for (t, g) in &states {
            let c = EdgeCounts::of(g);
            let density = c.n1 as f64 / (c.n0 + c.n1).max(1) as f64;
            let stat = match prev {
                Some(p) if p.order() == g.order() => {
                    let s = pair_stat(p, g)?;
                    format!("{},{},{},{}", s.n00, s.n01, s.n10, s.n11)
                }
                _ => ",,,".to_string(),
            };
            let _ = writeln!(summary, "{run},{t},{},{},{density},{stat}", c.n0, c.n1);
            prev = Some(g);
        }
        if let (Some(m), Some((t, last))) = (cfg.motif_order, states.last()) {
            if m <= last.order() {
                for e in motif_densities(last, m, cfg.samples, &mut rng)? {
                    let samples = e.sample_count.map(|s| s.to_string()).unwrap_or_default();
                    let _ = writeln!(
                        dens,
                        "{run},{t},{},{},{},{},{samples}",
                        e.motif,
                        e.order,
                        e.mode.as_str(),
                        e.value
                    );
                }
            }
        }
    }
    let path = write(&cfg.out, "summary.csv", summary.as_bytes())?;
    println!("wrote {}", path.display());
    if cfg.motif_order.is_some() {
        let path = write(&cfg.out, "summary_densities.csv", dens.as_bytes())?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
