//! The HRCQEA generation loop, experiment configuration, multi-run
//! statistics and CSV output.

mod config;
mod experiment;
mod output;
mod stats;

pub use config::{parse_config_text, Algorithm, ExperimentConfig, ProblemSpec};
pub use experiment::{run_experiment, run_experiment_with, summarize_dir, ExperimentReport};
pub use output::{
    read_summary_csv, read_trace_csv, trace_file_name, write_summary_csv, write_trace_csv,
    SummaryRow, TraceRow,
};
pub use stats::SummaryStats;

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::Result;
use crate::particle::{average_rotation_angle, new_swarm, Swarm, TriploidChromosome};
use crate::problems::{Bounds, Problem};
use crate::rng::{RandomSource, SeededRng};
use crate::selection::{refresh_bests, Sense};
use crate::variation::{
    crossover_round, multi_gene_triggered, smm_multi_gene, smm_single_gene, BestContext,
    SearchMode, VariationParams,
};

/// Settings for one HRCQEA run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HrcqeaSettings {
    pub population_size: usize,
    pub t_max: usize,
    pub params: VariationParams,
}

/// One generation of a run trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Generation {
    pub generation: usize,
    pub best_fitness: f64,
    pub mean_fitness: f64,
    /// Mean last-applied rotation angle of the particle holding the global best.
    pub avg_rotation_angle: f64,
}

/// Per-generation trace of a run, generation 0 included.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunRecord {
    pub rows: Vec<Generation>,
}

impl RunRecord {
    pub fn final_best(&self) -> Option<f64> {
        self.rows.last().map(|r| r.best_fitness)
    }

    /// True when the best-fitness column never worsens.
    pub fn is_monotone(&self, sense: Sense) -> bool {
        self.rows.windows(2).all(|w| sense.not_worse(w[1].best_fitness, w[0].best_fitness))
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub best: TriploidChromosome,
    pub record: RunRecord,
    /// Objective evaluations spent, initialisation included.
    pub evaluations: u64,
}

impl RunOutcome {
    pub fn best_fitness(&self) -> f64 {
        self.best.fitness()
    }
}

/// Counts objective calls for the budget report.
struct Counted<'a, P: ?Sized> {
    inner: &'a P,
    calls: AtomicU64,
}

impl<P: Problem + ?Sized> Problem for Counted<'_, P> {
    fn name(&self) -> &str {
        self.inner.name()
    }
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }
    fn bounds(&self, index: usize) -> Bounds {
        self.inner.bounds(index)
    }
    fn sense(&self) -> Sense {
        self.inner.sense()
    }
    fn evaluate(&self, x: &mut [f64], rng: &mut dyn RandomSource) -> f64 {
        self.calls.fetch_add(1, Ordering::Relaxed);
        self.inner.evaluate(x, rng)
    }
}

fn snapshot(swarm: &Swarm) -> Generation {
    Generation {
        generation: swarm.generation,
        best_fitness: swarm.global_best.fitness(),
        mean_fitness: swarm.mean_fitness(),
        avg_rotation_angle: average_rotation_angle(&swarm.particles[swarm.global_best_index]),
    }
}

/// One generation of the loop: fine then coarse single-gene mutations per
/// particle, the periodic multi-gene pass, the periodic crossover round, and
/// the archive refresh.
pub fn step_generation<P: Problem + ?Sized>(
    swarm: &mut Swarm,
    problem: &P,
    settings: &HrcqeaSettings,
    rng: &mut dyn RandomSource,
) {
    let params = &settings.params;
    let sense = problem.sense();
    swarm.generation += 1;
    let t = swarm.generation;

    let Swarm { particles, personal_bests, global_best, .. } = swarm;
    for (p, pb) in particles.iter_mut().zip(personal_bests.iter()) {
        let bests = BestContext { personal: pb.positions(), global: global_best.positions() };
        for _ in 0..params.fine_steps {
            smm_single_gene(p, bests, problem, SearchMode::Fine, params, rng);
        }
        for _ in 0..params.coarse_steps {
            smm_single_gene(p, bests, problem, SearchMode::Coarse, params, rng);
        }
    }

    if t.is_multiple_of(params.multi_gene_period) {
        for (p, pb) in particles.iter_mut().zip(personal_bests.iter()) {
            if multi_gene_triggered(p, sense) {
                let bests = BestContext { personal: pb.positions(), global: global_best.positions() };
                smm_multi_gene(p, bests, problem, params, rng, t, settings.t_max);
            }
        }
    }

    if t.is_multiple_of(params.crossover_period) {
        crossover_round(swarm, problem, params, rng);
        refresh_bests(swarm, sense);
    }
    refresh_bests(swarm, sense);
}

/// Full HRCQEA run from a fresh swarm seeded with `seed`.
pub fn run_hrcqea<P: Problem + ?Sized>(
    problem: &P,
    settings: &HrcqeaSettings,
    seed: u64,
) -> Result<RunOutcome> {
    settings.params.validate()?;
    let counted = Counted { inner: problem, calls: AtomicU64::new(0) };
    let mut rng = SeededRng::new(seed);
    let mut swarm = new_swarm(&counted, settings.population_size, &mut rng)?;

    let mut record = RunRecord { rows: Vec::with_capacity(settings.t_max + 1) };
    record.rows.push(snapshot(&swarm));
    for _ in 0..settings.t_max {
        step_generation(&mut swarm, &counted, settings, &mut rng);
        record.rows.push(snapshot(&swarm));
    }

    Ok(RunOutcome {
        best: swarm.global_best,
        record,
        evaluations: counted.calls.into_inner(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{Benchmark, BenchmarkKind};

    fn settings(d: usize, n: usize, t: usize) -> HrcqeaSettings {
        HrcqeaSettings { population_size: n, t_max: t, params: VariationParams::for_dimension(d) }
    }

    #[test]
    fn short_sphere_run_improves() {
        let problem = Benchmark::new(BenchmarkKind::Sphere, 2);
        let out = run_hrcqea(&problem, &settings(2, 4, 50), 11).unwrap();
        assert_eq!(out.record.rows.len(), 51);
        let first = out.record.rows[0].best_fitness;
        assert!(out.best_fitness() <= first);
        assert!(out.record.is_monotone(Sense::Minimize));
        assert_eq!(out.record.final_best(), Some(out.best_fitness()));
    }

    #[test]
    fn runs_replay_exactly() {
        let problem = Benchmark::new(BenchmarkKind::Rastrigin, 5);
        let a = run_hrcqea(&problem, &settings(5, 4, 30), 5).unwrap();
        let b = run_hrcqea(&problem, &settings(5, 4, 30), 5).unwrap();
        assert_eq!(a.record, b.record);
        assert_eq!(a.best, b.best);
        let c = run_hrcqea(&problem, &settings(5, 4, 30), 6).unwrap();
        assert_ne!(a.record, c.record);
    }

    #[test]
    fn evaluation_budget_without_periodic_operators() {
        let problem = Benchmark::new(BenchmarkKind::Sphere, 4);
        let mut s = settings(4, 3, 4);
        s.params.multi_gene_period = 1000;
        s.params.crossover_period = 1000;
        let out = run_hrcqea(&problem, &s, 1).unwrap();
        let per_gen = 3 * (s.params.fine_steps + s.params.coarse_steps) as u64;
        assert_eq!(out.evaluations, 3 + 4 * per_gen);
    }

    #[test]
    fn invariants_hold_through_a_run() {
        let problem = Benchmark::new(BenchmarkKind::Ackley, 6);
        let s = HrcqeaSettings {
            params: VariationParams { crossover_period: 7, ..VariationParams::for_dimension(6) },
            ..settings(6, 5, 40)
        };
        let mut rng = SeededRng::new(21);
        let mut swarm = new_swarm(&problem, s.population_size, &mut rng).unwrap();
        let mut last = swarm.global_best.fitness();
        for _ in 0..s.t_max {
            step_generation(&mut swarm, &problem, &s, &mut rng);
            assert!(swarm.global_best.fitness() <= last);
            last = swarm.global_best.fitness();
            for (p, b) in swarm.particles.iter().zip(&swarm.personal_bests) {
                assert!(b.fitness() <= p.fitness());
                assert!(swarm.global_best.fitness() <= b.fitness());
                for a in p.alleles() {
                    assert!((a.norm_sq() - 1.0).abs() < 1e-12);
                    assert!(problem.bounds(0).contains(a.x));
                }
            }
        }
    }
}
