//! Hybrid real-coded quantum evolutionary algorithm (HRCQEA).
//!
//! Each particle is a triploid chromosome: a real position plus one qubit
//! amplitude pair per coordinate. Positions move by single- and multi-gene
//! mutation whose step size is read from the amplitudes; amplitudes turn by a
//! rotation angle built from the PSO velocity terms. Arithmetic crossover
//! against personal bests, hill-climbing acceptance and elitist archives
//! complete the loop. A binary QEA is included as a knapsack baseline.

pub mod baseline_qea;
pub mod error;
pub mod harness;
pub mod particle;
pub mod problems;
pub mod rng;
pub mod selection;
pub mod variation;

pub use error::{Error, Result};
pub use particle::{average_rotation_angle, new_swarm, Allele, Swarm, TriploidChromosome};
pub use problems::{Benchmark, BenchmarkKind, Bounds, KnapsackInstance, KnapsackProblem, Problem};
pub use rng::{RandomSource, ScriptedRng, SeededRng};
pub use selection::{hcs_accept, refresh_bests, Sense};
pub use variation::{SearchMode, VariationParams};
