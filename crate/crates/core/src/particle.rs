//! Triploid chromosomes (particles) and the swarm that holds them.
//!
//! A chromosome stores, per allele, a real variable `x`, a qubit amplitude
//! pair `(alpha, beta)`, the last rotation angle applied to that pair and a
//! counter of consecutive invalid evolutions. Storage is column-wise so the
//! position row can be handed to an objective without copying.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::problems::Problem;
use crate::rng::RandomSource;
use crate::selection::Sense;

/// One column of a triploid chromosome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Allele {
    pub x: f64,
    pub alpha: f64,
    pub beta: f64,
    pub theta_last: f64,
    pub invalid_count: u32,
}

impl Allele {
    /// Allele at `x` in equal superposition.
    pub fn new(x: f64) -> Self {
        Self { x, alpha: FRAC_1_SQRT_2, beta: FRAC_1_SQRT_2, theta_last: 0.0, invalid_count: 0 }
    }

    pub fn norm_sq(&self) -> f64 {
        self.alpha * self.alpha + self.beta * self.beta
    }
}

#[derive(Debug, Clone)]
pub struct TriploidChromosome {
    x: Vec<f64>,
    alpha: Vec<f64>,
    beta: Vec<f64>,
    theta_last: Vec<f64>,
    invalid_count: Vec<u32>,
    fitness: f64,
    dirty: bool,
}

impl TriploidChromosome {
    pub fn from_alleles(alleles: impl IntoIterator<Item = Allele>) -> Self {
        let mut c = Self {
            x: Vec::new(),
            alpha: Vec::new(),
            beta: Vec::new(),
            theta_last: Vec::new(),
            invalid_count: Vec::new(),
            fitness: f64::NAN,
            dirty: true,
        };
        for a in alleles {
            c.x.push(a.x);
            c.alpha.push(a.alpha);
            c.beta.push(a.beta);
            c.theta_last.push(a.theta_last);
            c.invalid_count.push(a.invalid_count);
        }
        c
    }

    /// Fresh chromosome at `position` with every amplitude pair at `(1/√2, 1/√2)`.
    pub fn at_position(position: Vec<f64>) -> Self {
        let n = position.len();
        Self {
            x: position,
            alpha: vec![FRAC_1_SQRT_2; n],
            beta: vec![FRAC_1_SQRT_2; n],
            theta_last: vec![0.0; n],
            invalid_count: vec![0; n],
            fitness: f64::NAN,
            dirty: true,
        }
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn allele(&self, i: usize) -> Allele {
        Allele {
            x: self.x[i],
            alpha: self.alpha[i],
            beta: self.beta[i],
            theta_last: self.theta_last[i],
            invalid_count: self.invalid_count[i],
        }
    }

    pub fn alleles(&self) -> impl Iterator<Item = Allele> + '_ {
        (0..self.len()).map(|i| self.allele(i))
    }

    pub fn positions(&self) -> &[f64] {
        &self.x
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alpha
    }

    pub fn betas(&self) -> &[f64] {
        &self.beta
    }

    pub fn theta_lasts(&self) -> &[f64] {
        &self.theta_last
    }

    pub fn invalid_counts(&self) -> &[u32] {
        &self.invalid_count
    }

    pub fn amplitudes(&self, i: usize) -> (f64, f64) {
        (self.alpha[i], self.beta[i])
    }

    pub fn set_amplitudes(&mut self, i: usize, alpha: f64, beta: f64) {
        self.alpha[i] = alpha;
        self.beta[i] = beta;
    }

    pub fn set_theta_last(&mut self, i: usize, theta: f64) {
        self.theta_last[i] = theta;
    }

    /// Bumps the invalid-evolution counter of allele `i`, returning the new count.
    pub fn record_invalid(&mut self, i: usize) -> u32 {
        self.invalid_count[i] = self.invalid_count[i].saturating_add(1);
        self.invalid_count[i]
    }

    pub fn reset_invalid(&mut self, i: usize) {
        self.invalid_count[i] = 0;
    }

    /// Moves one real variable; the cached fitness becomes stale.
    pub fn set_x(&mut self, i: usize, x: f64) {
        self.x[i] = x;
        self.dirty = true;
    }

    /// Replaces the whole position row with an already-evaluated one.
    pub fn accept_position(&mut self, position: &[f64], fitness: f64) {
        self.x.copy_from_slice(position);
        self.fitness = fitness;
        self.dirty = false;
    }

    pub fn is_dirty(&self) -> bool {
        self.dirty
    }

    /// Cached fitness. Only meaningful when the chromosome is not dirty.
    pub fn fitness(&self) -> f64 {
        debug_assert!(!self.dirty, "fitness read from a stale chromosome");
        self.fitness
    }

    pub fn set_fitness(&mut self, fitness: f64) {
        self.fitness = fitness;
        self.dirty = false;
    }

    /// Evaluates the position if stale. The objective may rewrite the position
    /// (knapsack repair write-back).
    pub fn evaluate<P: Problem + ?Sized>(&mut self, problem: &P, rng: &mut dyn RandomSource) -> f64 {
        if self.dirty {
            self.fitness = problem.evaluate(&mut self.x, rng);
            self.dirty = false;
        }
        self.fitness
    }
}

// A stale fitness is meaningless, so it does not take part in equality.
impl PartialEq for TriploidChromosome {
    fn eq(&self, other: &Self) -> bool {
        self.x == other.x
            && self.alpha == other.alpha
            && self.beta == other.beta
            && self.theta_last == other.theta_last
            && self.invalid_count == other.invalid_count
            && self.dirty == other.dirty
            && (self.dirty || self.fitness == other.fitness)
    }
}

/// Mean of the last applied rotation angles over all alleles.
pub fn average_rotation_angle(p: &TriploidChromosome) -> f64 {
    if p.is_empty() {
        return 0.0;
    }
    p.theta_lasts().iter().sum::<f64>() / p.len() as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct Swarm {
    pub particles: Vec<TriploidChromosome>,
    pub personal_bests: Vec<TriploidChromosome>,
    pub global_best: TriploidChromosome,
    /// Index of the personal best the global archive was copied from.
    pub global_best_index: usize,
    pub generation: usize,
}

impl Swarm {
    /// Builds the archives from already-evaluated particles.
    pub fn from_particles(particles: Vec<TriploidChromosome>, sense: Sense) -> Self {
        assert!(!particles.is_empty());
        let idx = sense
            .best_index(particles.iter().map(|p| p.fitness()))
            .expect("non-empty swarm");
        Self {
            personal_bests: particles.clone(),
            global_best: particles[idx].clone(),
            global_best_index: idx,
            particles,
            generation: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.particles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.particles.is_empty()
    }

    pub fn mean_fitness(&self) -> f64 {
        self.particles.iter().map(|p| p.fitness()).sum::<f64>() / self.len() as f64
    }
}

/// Random initial swarm: positions uniform in the box, equal superposition.
pub fn new_swarm<P: Problem + ?Sized>(
    problem: &P,
    population_size: usize,
    rng: &mut dyn RandomSource,
) -> Result<Swarm> {
    if population_size < 2 {
        return Err(Error::PopulationTooSmall(population_size));
    }
    let n = problem.dimension();
    if n == 0 {
        return Err(Error::EmptyDimension);
    }

    let mut particles = Vec::with_capacity(population_size);
    for _ in 0..population_size {
        let position = (0..n)
            .map(|i| {
                let b = problem.bounds(i);
                b.min + b.width() * rng.uniform()
            })
            .collect();
        let mut p = TriploidChromosome::at_position(position);
        p.evaluate(problem, rng);
        particles.push(p);
    }
    Ok(Swarm::from_particles(particles, problem.sense()))
}
