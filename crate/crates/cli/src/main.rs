use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hrcqea::harness::{run_experiment, summarize_dir, ExperimentConfig, SummaryRow};
use hrcqea::problems::{generate_instance, save_instance};
use hrcqea::{Error, SeededRng};

#[derive(Parser)]
#[command(name = "hrcqea", version, about = "Hybrid real-coded quantum evolutionary algorithm experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write trace/summary CSVs.
    Run(RunArgs),
    /// Generate a random 0-1 knapsack instance file.
    GenKnapsack {
        #[arg(long)]
        items: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Rebuild summary.csv from the trace files in a directory.
    Summarize {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(clap::Args)]
struct RunArgs {
    /// `key = value` config file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    problem: Option<String>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    algo: Option<String>,
    #[arg(long)]
    pop: Option<usize>,
    #[arg(long)]
    gens: Option<usize>,
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Knapsack instance file.
    #[arg(long)]
    instance: Option<PathBuf>,
    /// Extra `key=value` settings (c1, c2, delta, lambda, m1, m2, kappa, tau, m, ...).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl RunArgs {
    fn to_config(&self) -> Result<ExperimentConfig, Error> {
        let mut pairs: Vec<(String, String)> = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::Io { path: path.clone(), source: e })?;
                hrcqea::harness::parse_config_text(&text, path)?
            }
            None => Vec::new(),
        };
        let mut flag = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                pairs.push((k.to_owned(), v));
            }
        };
        flag("problem", self.problem.clone());
        flag("dim", self.dim.map(|v| v.to_string()));
        flag("algo", self.algo.clone());
        flag("pop", self.pop.map(|v| v.to_string()));
        flag("gens", self.gens.map(|v| v.to_string()));
        flag("runs", self.runs.map(|v| v.to_string()));
        flag("seed", self.seed.map(|v| v.to_string()));
        flag("out", self.out.as_ref().map(|p| p.display().to_string()));
        flag("instance", self.instance.as_ref().map(|p| p.display().to_string()));
        for kv in &self.set {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("--set expects KEY=VALUE, got `{kv}`")))?;
            pairs.push((k.trim().to_owned(), v.trim().to_owned()));
        }
        ExperimentConfig::from_pairs(pairs)
    }
}

fn print_summary(rows: &[SummaryRow]) {
    println!("{:<10} {:<7} {:>5} {:>5} {:>12} {:>12} {:>12} {:>12}", "problem", "algo", "dim", "runs", "best", "worst", "mean", "sigma");
    for r in rows {
        println!(
            "{:<10} {:<7} {:>5} {:>5} {:>12.5e} {:>12.5e} {:>12.5e} {:>12.5e}",
            r.problem, r.algorithm, r.dimension, r.runs, r.best, r.worst, r.mean, r.sigma
        );
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Run(args) => {
            let config = args.to_config()?;
            eprintln!(
                "running {} on {} (D={}) with N={}, T_max={}, {} runs from seed {}",
                config.algorithm,
                config.problem.name(),
                config.dimension(),
                config.population_size,
                config.t_max,
                config.runs,
                config.base_seed
            );
            let report = run_experiment(&config)?;
            let evals: u64 = report.evaluations.iter().sum();
            eprintln!("{} objective evaluations in total", evals);
            if let Some(p) = &report.instance_path {
                eprintln!("instance: {}", p.display());
            }
            eprintln!("trace:    {}", report.trace_path.display());
            eprintln!("summary:  {}", report.summary_path.display());
            let s = report.stats;
            println!("best {:e} worst {:e} mean {:e} sigma {:e}", s.best, s.worst, s.mean, s.sigma);
        }
        Command::GenKnapsack { items, seed, out } => {
            let inst = generate_instance(items, &mut SeededRng::new(seed))?;
            save_instance(&inst, &out)?;
            eprintln!("wrote {} items (capacity {}) to {}", inst.len(), inst.capacity(), out.display());
        }
        Command::Summarize { input } => {
            let rows = summarize_dir(Path::new(&input))?;
            print_summary(&rows);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config() { 1 } else { 2 })
        }
    }
}
