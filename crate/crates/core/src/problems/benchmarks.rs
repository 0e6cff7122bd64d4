use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;

use super::{Bounds, Problem};
use crate::rng::RandomSource;
use crate::selection::Sense;

pub fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

pub fn rastrigin(x: &[f64]) -> f64 {
    10.0 * x.len() as f64 + x.iter().map(|v| v * v - 10.0 * (2.0 * PI * v).cos()).sum::<f64>()
}

pub fn ackley(x: &[f64]) -> f64 {
    let d = x.len() as f64;
    let sq = x.iter().map(|v| v * v).sum::<f64>() / d;
    let cs = x.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / d;
    -20.0 * (-0.2 * sq.sqrt()).exp() - cs.exp() + 20.0 + E
}

/// Schwefel 2.26 shifted by `418.9829·D`, so its floor sits near zero.
pub fn schwefel(x: &[f64]) -> f64 {
    418.9829 * x.len() as f64 - x.iter().map(|v| v * v.abs().sqrt().sin()).sum::<f64>()
}

pub fn griewank(x: &[f64]) -> f64 {
    let sum = x.iter().map(|v| v * v).sum::<f64>() / 4000.0;
    let prod = x
        .iter()
        .enumerate()
        .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
        .product::<f64>();
    sum - prod + 1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BenchmarkKind {
    Sphere,
    Rastrigin,
    Ackley,
    Schwefel,
    Griewank,
}

impl BenchmarkKind {
    pub const ALL: [BenchmarkKind; 5] = [
        BenchmarkKind::Sphere,
        BenchmarkKind::Rastrigin,
        BenchmarkKind::Ackley,
        BenchmarkKind::Schwefel,
        BenchmarkKind::Griewank,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BenchmarkKind::Sphere => "sphere",
            BenchmarkKind::Rastrigin => "rastrigin",
            BenchmarkKind::Ackley => "ackley",
            BenchmarkKind::Schwefel => "schwefel",
            BenchmarkKind::Griewank => "griewank",
        }
    }

    /// Per-coordinate search box.
    pub fn bounds(self) -> Bounds {
        match self {
            BenchmarkKind::Sphere => Bounds::new(-100.0, 100.0),
            BenchmarkKind::Rastrigin => Bounds::new(-5.12, 5.12),
            BenchmarkKind::Ackley => Bounds::new(-32.0, 32.0),
            BenchmarkKind::Schwefel => Bounds::new(-500.0, 500.0),
            BenchmarkKind::Griewank => Bounds::new(-600.0, 600.0),
        }
    }

    /// Coordinate value of the global minimiser (same on every axis).
    pub fn optimum_coordinate(self) -> f64 {
        match self {
            BenchmarkKind::Schwefel => 420.9687,
            _ => 0.0,
        }
    }

    pub fn eval(self, x: &[f64]) -> f64 {
        match self {
            BenchmarkKind::Sphere => sphere(x),
            BenchmarkKind::Rastrigin => rastrigin(x),
            BenchmarkKind::Ackley => ackley(x),
            BenchmarkKind::Schwefel => schwefel(x),
            BenchmarkKind::Griewank => griewank(x),
        }
    }
}

impl fmt::Display for BenchmarkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BenchmarkKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sphere" | "f1" => Ok(BenchmarkKind::Sphere),
            "rastrigin" | "f2" => Ok(BenchmarkKind::Rastrigin),
            "ackley" | "f3" => Ok(BenchmarkKind::Ackley),
            "schwefel" | "f4" => Ok(BenchmarkKind::Schwefel),
            "griewank" | "f5" => Ok(BenchmarkKind::Griewank),
            other => Err(format!("unknown benchmark `{other}`")),
        }
    }
}

/// A benchmark function fixed to a dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Benchmark {
    pub kind: BenchmarkKind,
    pub dimension: usize,
}

impl Benchmark {
    pub fn new(kind: BenchmarkKind, dimension: usize) -> Self {
        Self { kind, dimension }
    }
}

impl Problem for Benchmark {
    fn name(&self) -> &str {
        self.kind.name()
    }

    fn dimension(&self) -> usize {
        self.dimension
    }

    fn bounds(&self, _index: usize) -> Bounds {
        self.kind.bounds()
    }

    fn sense(&self) -> Sense {
        Sense::Minimize
    }

    fn evaluate(&self, x: &mut [f64], _rng: &mut dyn RandomSource) -> f64 {
        self.kind.eval(x)
    }
}
