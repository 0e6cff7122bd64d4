//! 0-1 knapsack: instances, the threshold decoder, random repair and the
//! real-coded objective wrapper.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use super::{Bounds, Problem};
use crate::error::{Error, Result};
use crate::particle::TriploidChromosome;
use crate::rng::RandomSource;
use crate::selection::Sense;

/// Profit offset added to each weight.
const PROFIT_OFFSET: f64 = 5.0;
/// Upper end of the weight range; the lower end is 1.
const MAX_WEIGHT: f64 = 10.0;
/// Generated weights live on a 2^-32 grid so `w + 5`, `Σw` and `Σw / 2` are exact.
const WEIGHT_GRID: f64 = 4_294_967_296.0;

#[derive(Debug, Clone, PartialEq)]
pub struct KnapsackInstance {
    weights: Vec<f64>,
    profits: Vec<f64>,
    capacity: f64,
}

impl KnapsackInstance {
    pub fn new(weights: Vec<f64>, profits: Vec<f64>, capacity: f64) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Validation("instance has no items".into()));
        }
        if weights.len() != profits.len() {
            return Err(Error::Validation(format!(
                "{} weights but {} profits",
                weights.len(),
                profits.len()
            )));
        }
        if !(capacity > 0.0 && capacity.is_finite()) {
            return Err(Error::Validation(format!("capacity must be positive, got {capacity}")));
        }
        for (i, (&w, &p)) in weights.iter().zip(&profits).enumerate() {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::Validation(format!("item {i}: weight must be positive, got {w}")));
            }
            if !(p > 0.0 && p.is_finite()) {
                return Err(Error::Validation(format!("item {i}: profit must be positive, got {p}")));
            }
        }
        let total: f64 = weights.iter().sum();
        if capacity >= total {
            return Err(Error::Validation(format!(
                "capacity {capacity} admits every item (total weight {total})"
            )));
        }
        Ok(Self { weights, profits, capacity })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn profits(&self) -> &[f64] {
        &self.profits
    }

    pub fn capacity(&self) -> f64 {
        self.capacity
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Selected-item bit vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinarySolution(pub Vec<bool>);

impl BinarySolution {
    pub fn empty(n: usize) -> Self {
        Self(vec![false; n])
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self, inst: &KnapsackInstance) -> f64 {
        self.selected().map(|i| inst.weights[i]).sum()
    }

    pub fn profit(&self, inst: &KnapsackInstance) -> f64 {
        self.selected().map(|i| inst.profits[i]).sum()
    }

    pub fn is_feasible(&self, inst: &KnapsackInstance) -> bool {
        self.weight(inst) <= inst.capacity
    }

    pub fn selected(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }
}

/// Threshold decoding of a real position: `x ≥ 0.5` selects the item.
pub fn make_binary(x: &[f64]) -> BinarySolution {
    BinarySolution(x.iter().map(|&v| v >= 0.5).collect())
}

/// Random repair. Drops uniformly chosen selected items until the load fits,
/// then scans the unselected items once in random order, adding each one
/// that still fits.
pub fn repair(z: &mut BinarySolution, inst: &KnapsackInstance, rng: &mut dyn RandomSource) {
    debug_assert_eq!(z.len(), inst.len());
    let mut load = z.weight(inst);

    if load > inst.capacity {
        let mut chosen: Vec<usize> = z.selected().collect();
        while load > inst.capacity {
            let k = rng.index(chosen.len());
            let item = chosen.swap_remove(k);
            z.0[item] = false;
            load -= inst.weights[item];
        }
        // Rebuild the sum so later checks do not accumulate subtraction error.
        load = z.weight(inst);
    }

    let mut free: Vec<usize> = (0..inst.len()).filter(|&i| !z.0[i]).collect();
    for k in (1..free.len()).rev() {
        let j = rng.index(k + 1);
        free.swap(k, j);
    }
    for item in free {
        if load + inst.weights[item] <= inst.capacity {
            z.0[item] = true;
            load += inst.weights[item];
        }
    }
}

/// Writes bits into a real position (`1 → 1.0`, `0 → 0.0`).
pub fn write_back(z: &BinarySolution, x: &mut [f64]) {
    for (v, &b) in x.iter_mut().zip(z.bits()) {
        *v = if b { 1.0 } else { 0.0 };
    }
}

/// Decode, repair, write back, and return the repaired profit.
pub fn knapsack_fitness(
    p: &mut TriploidChromosome,
    inst: &KnapsackInstance,
    rng: &mut dyn RandomSource,
) -> f64 {
    let problem = KnapsackProblem::new(Arc::new(inst.clone()));
    p.evaluate(&problem, rng)
}

/// Random instance: `w ~ U[1, 10]`, `p = w + 5`, `C = Σw / 2`.
pub fn generate_instance(n: usize, rng: &mut dyn RandomSource) -> Result<KnapsackInstance> {
    if n == 0 {
        return Err(Error::Validation("instance has no items".into()));
    }
    let weights: Vec<f64> = (0..n)
        .map(|_| 1.0 + ((MAX_WEIGHT - 1.0) * rng.uniform() * WEIGHT_GRID).floor() / WEIGHT_GRID)
        .collect();
    let profits = weights.iter().map(|w| w + PROFIT_OFFSET).collect();
    let capacity = weights.iter().sum::<f64>() / 2.0;
    KnapsackInstance::new(weights, profits, capacity)
}

pub fn save_instance(inst: &KnapsackInstance, path: &Path) -> Result<()> {
    let mut out = String::new();
    let _ = writeln!(out, "# 0-1 knapsack instance: weight profit per line");
    let _ = writeln!(out, "n {}", inst.len());
    let _ = writeln!(out, "capacity {}", inst.capacity);
    for (w, p) in inst.weights.iter().zip(&inst.profits) {
        let _ = writeln!(out, "{w} {p}");
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

pub fn load_instance(path: &Path) -> Result<KnapsackInstance> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_instance(&text, path)
}

fn parse_instance(text: &str, path: &Path) -> Result<KnapsackInstance> {
    let err = |line: usize, message: String| Error::Parse { path: path.to_owned(), line, message };
    let parse_real = |line: usize, tok: &str| {
        tok.parse::<f64>().map_err(|_| err(line, format!("expected a real number, found `{tok}`")))
    };

    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (ln, header) = lines.next().ok_or_else(|| err(1, "missing `n <count>` line".into()))?;
    let n = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["n", count] => count
            .parse::<usize>()
            .map_err(|_| err(ln, format!("expected an item count, found `{count}`")))?,
        _ => return Err(err(ln, format!("expected `n <count>`, found `{header}`"))),
    };
    if n == 0 {
        return Err(Error::Validation("instance has no items".into()));
    }

    let (ln, cap_line) =
        lines.next().ok_or_else(|| err(ln + 1, "missing `capacity <real>` line".into()))?;
    let capacity = match cap_line.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["capacity", c] => parse_real(ln, c)?,
        _ => return Err(err(ln, format!("expected `capacity <real>`, found `{cap_line}`"))),
    };

    let mut weights = Vec::with_capacity(n);
    let mut profits = Vec::with_capacity(n);
    let mut last = ln;
    for (ln, line) in lines {
        last = ln;
        if weights.len() == n {
            return Err(err(ln, format!("more than the declared {n} items")));
        }
        match line.split_whitespace().collect::<Vec<_>>().as_slice() {
            [w, p] => {
                weights.push(parse_real(ln, w)?);
                profits.push(parse_real(ln, p)?);
            }
            _ => return Err(err(ln, format!("expected `<weight> <profit>`, found `{line}`"))),
        }
    }
    if weights.len() != n {
        return Err(err(last, format!("declared {n} items but found {}", weights.len())));
    }
    KnapsackInstance::new(weights, profits, capacity)
}

/// Knapsack as a maximisation problem over `[0, 1]^n` real positions.
#[derive(Debug, Clone)]
pub struct KnapsackProblem {
    instance: Arc<KnapsackInstance>,
    /// Rewrite the evaluated position to the repaired bits.
    pub write_back: bool,
}

impl KnapsackProblem {
    pub fn new(instance: Arc<KnapsackInstance>) -> Self {
        Self { instance, write_back: true }
    }

    pub fn with_write_back(mut self, on: bool) -> Self {
        self.write_back = on;
        self
    }

    pub fn instance(&self) -> &KnapsackInstance {
        &self.instance
    }
}

impl Problem for KnapsackProblem {
    fn name(&self) -> &str {
        "knapsack"
    }

    fn dimension(&self) -> usize {
        self.instance.len()
    }

    fn bounds(&self, _index: usize) -> Bounds {
        Bounds::new(0.0, 1.0)
    }

    fn sense(&self) -> Sense {
        Sense::Maximize
    }

    fn evaluate(&self, x: &mut [f64], rng: &mut dyn RandomSource) -> f64 {
        let mut z = make_binary(x);
        repair(&mut z, &self.instance, rng);
        if self.write_back {
            write_back(&z, x);
        }
        z.profit(&self.instance)
    }
}
