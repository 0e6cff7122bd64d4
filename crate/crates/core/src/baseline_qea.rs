//! Binary quantum-inspired EA for the 0-1 knapsack.
//!
//! Each individual is a string of qubits. A generation observes every string
//! into a bit vector, repairs and scores it, rotates each qubit toward the
//! individual's stored best, and keeps the better of the stored and observed
//! solutions.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::problems::{repair, BinarySolution, KnapsackInstance};
use crate::rng::RandomSource;
use crate::variation::qrg_rotate;

#[derive(Debug, Clone, PartialEq)]
pub struct QubitString {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
}

impl QubitString {
    /// Uniform superposition over all `2^n` strings.
    pub fn uniform(n: usize) -> Self {
        Self { alpha: vec![FRAC_1_SQRT_2; n], beta: vec![FRAC_1_SQRT_2; n] }
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObservedSolution {
    pub bits: BinarySolution,
    pub fitness: f64,
}

/// Collapses each qubit to `1` with probability `|β|²`.
pub fn observe(q: &QubitString, rng: &mut dyn RandomSource) -> BinarySolution {
    BinarySolution(q.beta.iter().map(|b| rng.uniform() < b * b).collect())
}

/// Rotation-angle lookup for the Q-gate.
///
/// A qubit turns by `magnitude` toward the stored best's bit when the observed
/// bit disagrees with it and the stored best is strictly fitter; otherwise it
/// is left alone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnglePolicy {
    pub magnitude: f64,
}

impl Default for AnglePolicy {
    fn default() -> Self {
        Self { magnitude: 0.01 * PI }
    }
}

impl AnglePolicy {
    /// Unsigned step for one qubit; zero means no rotation.
    pub fn step(&self, observed: bool, best: bool, best_fitter: bool) -> f64 {
        if observed != best && best_fitter {
            self.magnitude
        } else {
            0.0
        }
    }
}

/// Signed angle that turns `(alpha, beta)` by `step` toward `|1⟩` (`to_one`)
/// or `|0⟩`, taking the quadrant of the amplitude pair into account.
pub fn directed_angle(alpha: f64, beta: f64, to_one: bool, step: f64) -> f64 {
    if step == 0.0 {
        return 0.0;
    }
    let ab = alpha * beta;
    // Positive angle increases |β| in quadrants I and III.
    let sign = if ab > 0.0 {
        1.0
    } else if ab < 0.0 {
        -1.0
    } else if to_one {
        // On an axis: already at |1⟩ when alpha is zero.
        if alpha == 0.0 { 0.0 } else { 1.0 }
    } else if beta == 0.0 {
        0.0
    } else {
        1.0
    };
    if to_one { sign * step } else { -sign * step }
}

/// Rotates every qubit of `q` toward `best` per `policy`. Returns the mean
/// signed angle applied.
pub fn qgate_update(
    q: &mut QubitString,
    observed: &BinarySolution,
    best: &BinarySolution,
    best_fitter: bool,
    policy: &AnglePolicy,
) -> f64 {
    let mut total = 0.0;
    for i in 0..q.len() {
        let step = policy.step(observed.0[i], best.0[i], best_fitter);
        let theta = directed_angle(q.alpha[i], q.beta[i], best.0[i], step);
        if theta != 0.0 {
            let (a, b) = qrg_rotate(q.alpha[i], q.beta[i], theta);
            q.alpha[i] = a;
            q.beta[i] = b;
            total += theta;
        }
    }
    if q.is_empty() { 0.0 } else { total / q.len() as f64 }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QeaGeneration {
    pub best_fitness: f64,
    pub mean_fitness: f64,
    /// Mean signed rotation applied to the qubit string holding the best.
    pub avg_rotation_angle: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QeaOutcome {
    pub best: ObservedSolution,
    /// One entry per generation, generation 0 included.
    pub trace: Vec<QeaGeneration>,
    pub evaluations: u64,
}

fn observe_and_score(
    q: &QubitString,
    inst: &KnapsackInstance,
    rng: &mut dyn RandomSource,
) -> ObservedSolution {
    let mut bits = observe(q, rng);
    repair(&mut bits, inst, rng);
    let fitness = bits.profit(inst);
    ObservedSolution { bits, fitness }
}

/// Runs the QEA for `t_max` generations after the initial observation.
pub fn run_qea_knapsack(
    inst: &KnapsackInstance,
    population_size: usize,
    t_max: usize,
    policy: &AnglePolicy,
    rng: &mut dyn RandomSource,
) -> QeaOutcome {
    assert!(population_size >= 1, "population must be non-empty");
    let n = inst.len();
    let mut qubits = vec![QubitString::uniform(n); population_size];
    let mut stored: Vec<ObservedSolution> =
        qubits.iter().map(|q| observe_and_score(q, inst, rng)).collect();
    let mut evaluations = population_size as u64;

    let pick_best = |stored: &[ObservedSolution]| {
        let mut k = 0;
        for (j, s) in stored.iter().enumerate() {
            if s.fitness > stored[k].fitness {
                k = j;
            }
        }
        k
    };

    let mut best_idx = pick_best(&stored);
    let mut best = stored[best_idx].clone();
    let mut trace = Vec::with_capacity(t_max + 1);
    trace.push(QeaGeneration {
        best_fitness: best.fitness,
        mean_fitness: stored.iter().map(|s| s.fitness).sum::<f64>() / population_size as f64,
        avg_rotation_angle: 0.0,
    });

    let mut angles = vec![0.0; population_size];
    for _ in 1..=t_max {
        let observed: Vec<ObservedSolution> =
            qubits.iter().map(|q| observe_and_score(q, inst, rng)).collect();
        evaluations += population_size as u64;

        for j in 0..population_size {
            let best_fitter = stored[j].fitness > observed[j].fitness;
            angles[j] = qgate_update(&mut qubits[j], &observed[j].bits, &stored[j].bits, best_fitter, policy);
        }
        for (s, o) in stored.iter_mut().zip(observed.iter()) {
            if o.fitness > s.fitness {
                s.clone_from(o);
            }
        }
        best_idx = pick_best(&stored);
        if stored[best_idx].fitness > best.fitness {
            best.clone_from(&stored[best_idx]);
        }
        trace.push(QeaGeneration {
            best_fitness: best.fitness,
            mean_fitness: observed.iter().map(|s| s.fitness).sum::<f64>() / population_size as f64,
            avg_rotation_angle: angles[best_idx],
        });
    }

    QeaOutcome { best, trace, evaluations }
}
