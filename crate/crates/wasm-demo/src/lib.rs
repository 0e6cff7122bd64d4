//! wasm-bindgen bindings behind `www/index.html`.
//!
//! Three operations are exposed: a traced HRCQEA run on a benchmark, a
//! sampled 2-D landscape of a benchmark, and a side-by-side knapsack run of
//! HRCQEA against the binary QEA. Each has a plain Rust twin returning
//! `Result<_, String>` so the logic is testable off the browser.

use std::sync::Arc;

use hrcqea::baseline_qea::{run_qea_knapsack, AnglePolicy};
use hrcqea::harness::{run_hrcqea, HrcqeaSettings};
use hrcqea::problems::generate_instance;
use hrcqea::{Benchmark, BenchmarkKind, KnapsackProblem, SeededRng, VariationParams};
use wasm_bindgen::prelude::*;

/// Hard caps keeping a single call responsive in a browser tab.
const MAX_DIM: u32 = 100;
const MAX_POP: u32 = 50;
const MAX_GENS: u32 = 20_000;
const MAX_ITEMS: u32 = 500;
const MAX_RUNS: u32 = 50;
const MAX_RESOLUTION: u32 = 512;

fn check(name: &str, value: u32, lo: u32, hi: u32) -> Result<usize, String> {
    if (lo..=hi).contains(&value) {
        Ok(value as usize)
    } else {
        Err(format!("{name} must be in {lo}..={hi}, got {value}"))
    }
}

fn kind(name: &str) -> Result<BenchmarkKind, String> {
    name.parse()
}

/// Per-generation columns of one benchmark run.
#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct BenchmarkTrace {
    best: Vec<f64>,
    mean: Vec<f64>,
    angle: Vec<f64>,
    position: Vec<f64>,
    evaluations: f64,
}

#[wasm_bindgen]
impl BenchmarkTrace {
    /// Best-so-far fitness, generation 0 first.
    pub fn best(&self) -> Vec<f64> {
        self.best.clone()
    }
    pub fn mean(&self) -> Vec<f64> {
        self.mean.clone()
    }
    /// Mean last rotation angle of the particle holding the global best.
    pub fn angle(&self) -> Vec<f64> {
        self.angle.clone()
    }
    /// Final global-best position.
    pub fn position(&self) -> Vec<f64> {
        self.position.clone()
    }
    pub fn evaluations(&self) -> f64 {
        self.evaluations
    }
}

pub fn benchmark_trace(problem: &str, dim: u32, pop: u32, gens: u32, seed: u32) -> Result<BenchmarkTrace, String> {
    let problem = Benchmark::new(kind(problem)?, check("dim", dim, 1, MAX_DIM)?);
    let settings = HrcqeaSettings {
        population_size: check("pop", pop, 2, MAX_POP)?,
        t_max: check("gens", gens, 1, MAX_GENS)?,
        params: VariationParams::for_dimension(problem.dimension),
    };
    let out = run_hrcqea(&problem, &settings, u64::from(seed)).map_err(|e| e.to_string())?;
    let rows = &out.record.rows;
    Ok(BenchmarkTrace {
        best: rows.iter().map(|r| r.best_fitness).collect(),
        mean: rows.iter().map(|r| r.mean_fitness).collect(),
        angle: rows.iter().map(|r| r.avg_rotation_angle).collect(),
        position: out.best.positions().to_vec(),
        evaluations: out.evaluations as f64,
    })
}

/// Row-major `resolution x resolution` grid of a 2-D benchmark over its box.
/// Row 0 is the lowest second coordinate.
pub fn landscape(problem: &str, resolution: u32) -> Result<Vec<f64>, String> {
    let kind = kind(problem)?;
    let n = check("resolution", resolution, 2, MAX_RESOLUTION)?;
    let b = kind.bounds();
    let step = b.width() / (n - 1) as f64;
    let mut grid = Vec::with_capacity(n * n);
    for row in 0..n {
        let y = b.min + row as f64 * step;
        for col in 0..n {
            grid.push(kind.eval(&[b.min + col as f64 * step, y]));
        }
    }
    Ok(grid)
}

/// Outcome of running both algorithms on one generated knapsack instance.
#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct KnapsackComparison {
    hrcqea_finals: Vec<f64>,
    qea_finals: Vec<f64>,
    hrcqea_curve: Vec<f64>,
    qea_curve: Vec<f64>,
    capacity: f64,
}

#[wasm_bindgen]
impl KnapsackComparison {
    /// Final best profit of each HRCQEA run.
    pub fn hrcqea_finals(&self) -> Vec<f64> {
        self.hrcqea_finals.clone()
    }
    pub fn qea_finals(&self) -> Vec<f64> {
        self.qea_finals.clone()
    }
    /// Best-so-far profit averaged over runs, per generation.
    pub fn hrcqea_curve(&self) -> Vec<f64> {
        self.hrcqea_curve.clone()
    }
    pub fn qea_curve(&self) -> Vec<f64> {
        self.qea_curve.clone()
    }
    pub fn capacity(&self) -> f64 {
        self.capacity
    }
}

fn accumulate(curve: &mut [f64], values: impl Iterator<Item = f64>) {
    for (c, v) in curve.iter_mut().zip(values) {
        *c += v;
    }
}

pub fn knapsack_compare(items: u32, instance_seed: u32, gens: u32, runs: u32) -> Result<KnapsackComparison, String> {
    let items = check("items", items, 2, MAX_ITEMS)?;
    let gens = check("gens", gens, 1, MAX_GENS)?;
    let runs = check("runs", runs, 1, MAX_RUNS)?;
    let inst = generate_instance(items, &mut SeededRng::new(u64::from(instance_seed))).map_err(|e| e.to_string())?;
    let capacity = inst.capacity();
    let problem = KnapsackProblem::new(Arc::new(inst.clone()));
    let settings = HrcqeaSettings { population_size: 10, t_max: gens, params: VariationParams::knapsack() };

    let mut out = KnapsackComparison {
        hrcqea_finals: Vec::with_capacity(runs),
        qea_finals: Vec::with_capacity(runs),
        hrcqea_curve: vec![0.0; gens + 1],
        qea_curve: vec![0.0; gens + 1],
        capacity,
    };
    for seed in 1..=runs as u64 {
        let h = run_hrcqea(&problem, &settings, seed).map_err(|e| e.to_string())?;
        out.hrcqea_finals.push(h.best_fitness());
        accumulate(&mut out.hrcqea_curve, h.record.rows.iter().map(|r| r.best_fitness));

        let q = run_qea_knapsack(&inst, 10, gens, &AnglePolicy::default(), &mut SeededRng::new(seed));
        out.qea_finals.push(q.best.fitness);
        accumulate(&mut out.qea_curve, q.trace.iter().map(|g| g.best_fitness));
    }
    for c in out.hrcqea_curve.iter_mut().chain(out.qea_curve.iter_mut()) {
        *c /= runs as f64;
    }
    Ok(out)
}

#[wasm_bindgen(js_name = benchmarkTrace)]
pub fn benchmark_trace_js(problem: &str, dim: u32, pop: u32, gens: u32, seed: u32) -> Result<BenchmarkTrace, JsError> {
    benchmark_trace(problem, dim, pop, gens, seed).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = landscape)]
pub fn landscape_js(problem: &str, resolution: u32) -> Result<Vec<f64>, JsError> {
    landscape(problem, resolution).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = knapsackCompare)]
pub fn knapsack_compare_js(items: u32, instance_seed: u32, gens: u32, runs: u32) -> Result<KnapsackComparison, JsError> {
    knapsack_compare(items, instance_seed, gens, runs).map_err(|e| JsError::new(&e))
}
