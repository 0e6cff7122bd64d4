//! Multi-run experiments and their on-disk artifacts.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use super::config::{Algorithm, ExperimentConfig, ProblemSpec};
use super::output::{
    parse_trace_file_name, read_summary_csv, read_trace_csv, trace_file_name, write_summary_csv,
    write_trace_csv, SummaryRow, TraceRow,
};
use super::stats::SummaryStats;
use super::{run_hrcqea, Generation, HrcqeaSettings, RunRecord};
use crate::baseline_qea::run_qea_knapsack;
use crate::error::{Error, Result};
use crate::problems::{generate_instance, load_instance, save_instance, Benchmark, KnapsackProblem};
use crate::rng::SeededRng;
use crate::selection::Sense;

pub const SUMMARY_FILE: &str = "summary.csv";

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub stats: SummaryStats,
    pub records: Vec<RunRecord>,
    pub evaluations: Vec<u64>,
    pub trace_path: PathBuf,
    pub summary_path: PathBuf,
    /// Knapsack instance file used, when one was generated or loaded.
    pub instance_path: Option<PathBuf>,
}

impl ExperimentReport {
    pub fn finals(&self) -> Vec<f64> {
        self.records.iter().filter_map(RunRecord::final_best).collect()
    }
}

fn prepare_out_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let probe = dir.join(".write-probe");
    fs::write(&probe, b"").map_err(|e| Error::io(dir, e))?;
    let _ = fs::remove_file(probe);
    Ok(())
}

#[cfg(feature = "parallel")]
fn map_runs<T: Send>(runs: usize, f: impl Fn(usize) -> Result<T> + Sync + Send) -> Result<Vec<T>> {
    use rayon::prelude::*;
    (0..runs).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_runs<T: Send>(runs: usize, f: impl Fn(usize) -> Result<T> + Sync + Send) -> Result<Vec<T>> {
    (0..runs).map(f).collect()
}

/// Runs `config.runs` independent runs of `runner` (seeded `base_seed + r`)
/// and writes the trace and summary files.
pub fn run_experiment_with<F>(
    config: &ExperimentConfig,
    sense: Sense,
    runner: F,
) -> Result<ExperimentReport>
where
    F: Fn(u64) -> Result<(RunRecord, u64)> + Sync + Send,
{
    config.validate()?;
    prepare_out_dir(&config.out_dir)?;
    let problem = config.problem.name().to_owned();
    let algorithm = config.algorithm.name();
    let dimension = config.dimension();

    let results = map_runs(config.runs, |r| runner(config.base_seed.wrapping_add(r as u64)))?;
    let (records, evaluations): (Vec<_>, Vec<_>) = results.into_iter().unzip();

    let mut rows = Vec::new();
    for (run, record) in records.iter().enumerate() {
        assert!(record.is_monotone(sense), "run {run}: best-fitness trace is not monotone");
        rows.extend(record.rows.iter().map(|g| TraceRow {
            run,
            generation: g.generation,
            best_fitness: g.best_fitness,
            mean_fitness: g.mean_fitness,
            avg_rotation_angle: g.avg_rotation_angle,
        }));
    }
    let trace_path = config.out_dir.join(trace_file_name(&problem, algorithm, dimension));
    write_trace_csv(&trace_path, &rows)?;

    let finals: Vec<f64> = records.iter().filter_map(RunRecord::final_best).collect();
    let stats = SummaryStats::from_finals(&finals, sense).expect("runs >= 1");
    let summary_path = config.out_dir.join(SUMMARY_FILE);
    merge_summary(
        &summary_path,
        SummaryRow {
            problem,
            algorithm: algorithm.to_owned(),
            dimension,
            runs: config.runs,
            best: stats.best,
            worst: stats.worst,
            mean: stats.mean,
            sigma: stats.sigma,
        },
    )?;

    Ok(ExperimentReport { stats, records, evaluations, trace_path, summary_path, instance_path: None })
}

/// Keeps one row per (problem, algorithm) pair, replacing an older row.
fn merge_summary(path: &Path, row: SummaryRow) -> Result<()> {
    let mut rows = if path.exists() { read_summary_csv(path)? } else { Vec::new() };
    rows.retain(|r| !(r.problem == row.problem && r.algorithm == row.algorithm));
    rows.push(row);
    rows.sort_by(|a, b| (&a.problem, &a.algorithm).cmp(&(&b.problem, &b.algorithm)));
    write_summary_csv(path, &rows)
}

/// Resolves the problem described by `config` and runs the experiment.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    prepare_out_dir(&config.out_dir)?;
    let settings = HrcqeaSettings {
        population_size: config.population_size,
        t_max: config.t_max,
        params: config.params,
    };

    match &config.problem {
        ProblemSpec::Benchmark { kind, dimension } => {
            let problem = Benchmark::new(*kind, *dimension);
            run_experiment_with(config, Sense::Minimize, |seed| {
                let out = run_hrcqea(&problem, &settings, seed)?;
                Ok((out.record, out.evaluations))
            })
        }
        ProblemSpec::Knapsack { instance, items, write_back } => {
            let (inst, path) = match instance {
                Some(p) => (load_instance(p)?, p.clone()),
                None => {
                    let inst = generate_instance(*items, &mut SeededRng::new(config.base_seed))?;
                    let p = config
                        .out_dir
                        .join(format!("knapsack-n{}-seed{}.txt", items, config.base_seed));
                    save_instance(&inst, &p)?;
                    (inst, p)
                }
            };
            let mut config = config.clone();
            config.problem = ProblemSpec::Knapsack {
                instance: Some(path.clone()),
                items: inst.len(),
                write_back: *write_back,
            };
            let inst = Arc::new(inst);
            let mut report = match config.algorithm {
                Algorithm::Hrcqea => {
                    let problem = KnapsackProblem::new(inst).with_write_back(*write_back);
                    run_experiment_with(&config, Sense::Maximize, |seed| {
                        let out = run_hrcqea(&problem, &settings, seed)?;
                        Ok((out.record, out.evaluations))
                    })?
                }
                Algorithm::Qea => run_experiment_with(&config, Sense::Maximize, |seed| {
                    let out = run_qea_knapsack(
                        &inst,
                        config.population_size,
                        config.t_max,
                        &config.qea_policy,
                        &mut SeededRng::new(seed),
                    );
                    let rows = out
                        .trace
                        .iter()
                        .enumerate()
                        .map(|(t, g)| Generation {
                            generation: t,
                            best_fitness: g.best_fitness,
                            mean_fitness: g.mean_fitness,
                            avg_rotation_angle: g.avg_rotation_angle,
                        })
                        .collect();
                    Ok((RunRecord { rows }, out.evaluations))
                })?,
            };
            report.instance_path = Some(path);
            Ok(report)
        }
    }
}

fn sense_for(problem: &str) -> Sense {
    if problem == "knapsack" { Sense::Maximize } else { Sense::Minimize }
}

/// Rebuilds `summary.csv` in `dir` from every trace file found there.
pub fn summarize_dir(dir: &Path) -> Result<Vec<SummaryRow>> {
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut names: Vec<String> = entries
        .filter_map(|e| e.ok())
        .filter_map(|e| e.file_name().into_string().ok())
        .filter(|n| parse_trace_file_name(n).is_some())
        .collect();
    names.sort();

    let mut rows = Vec::new();
    for name in names {
        let (problem, algorithm, dimension) = parse_trace_file_name(&name).expect("filtered above");
        let trace = read_trace_csv(&dir.join(&name))?;
        let mut finals: Vec<(usize, usize, f64)> = Vec::new();
        for row in trace {
            match finals.iter_mut().find(|(run, _, _)| *run == row.run) {
                Some(slot) if row.generation >= slot.1 => *slot = (row.run, row.generation, row.best_fitness),
                Some(_) => {}
                None => finals.push((row.run, row.generation, row.best_fitness)),
            }
        }
        let values: Vec<f64> = finals.iter().map(|f| f.2).collect();
        let Some(stats) = SummaryStats::from_finals(&values, sense_for(&problem)) else {
            continue;
        };
        rows.push(SummaryRow {
            problem,
            algorithm,
            dimension,
            runs: values.len(),
            best: stats.best,
            worst: stats.worst,
            mean: stats.mean,
            sigma: stats.sigma,
        });
    }
    write_summary_csv(&dir.join(SUMMARY_FILE), &rows)?;
    Ok(rows)
}
