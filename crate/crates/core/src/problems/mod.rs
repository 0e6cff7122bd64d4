//! Objectives: the five continuous benchmarks and the 0-1 knapsack.

mod benchmarks;
mod knapsack;

pub use benchmarks::{ackley, griewank, rastrigin, schwefel, sphere, Benchmark, BenchmarkKind};
pub use knapsack::{
    generate_instance, knapsack_fitness, load_instance, make_binary, repair, save_instance,
    write_back, BinarySolution, KnapsackInstance, KnapsackProblem,
};

use crate::rng::RandomSource;
use crate::selection::Sense;

/// Closed interval `[min, max]` for one coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub min: f64,
    pub max: f64,
}

impl Bounds {
    pub const fn new(min: f64, max: f64) -> Self {
        Self { min, max }
    }

    pub fn width(&self) -> f64 {
        self.max - self.min
    }

    pub fn contains(&self, x: f64) -> bool {
        self.min <= x && x <= self.max
    }
}

/// An objective over a box.
///
/// `evaluate` receives the position mutably: an objective that decodes and
/// repairs its input may write the repaired point back. Objectives that need
/// randomness (repair) draw from the caller's stream so runs stay replayable.
pub trait Problem: Send + Sync {
    fn name(&self) -> &str;
    fn dimension(&self) -> usize;
    fn bounds(&self, index: usize) -> Bounds;
    fn sense(&self) -> Sense;
    fn evaluate(&self, x: &mut [f64], rng: &mut dyn RandomSource) -> f64;
}

impl<P: Problem + ?Sized> Problem for &P {
    fn name(&self) -> &str {
        (**self).name()
    }
    fn dimension(&self) -> usize {
        (**self).dimension()
    }
    fn bounds(&self, index: usize) -> Bounds {
        (**self).bounds(index)
    }
    fn sense(&self) -> Sense {
        (**self).sense()
    }
    fn evaluate(&self, x: &mut [f64], rng: &mut dyn RandomSource) -> f64 {
        (**self).evaluate(x, rng)
    }
}
