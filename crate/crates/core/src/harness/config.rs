//! Experiment configuration.
//!
//! Files are flat `key = value` lines with `#` comments. The same keys are
//! accepted as overrides (the CLI feeds its flags through [`ExperimentConfig::from_pairs`]),
//! later pairs winning over earlier ones.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::baseline_qea::AnglePolicy;
use crate::error::{Error, Result};
use crate::problems::BenchmarkKind;
use crate::variation::VariationParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Hrcqea,
    Qea,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Hrcqea => "hrcqea",
            Algorithm::Qea => "qea",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hrcqea" => Ok(Algorithm::Hrcqea),
            "qea" => Ok(Algorithm::Qea),
            other => Err(Error::Config(format!("unknown algorithm `{other}` (expected hrcqea or qea)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProblemSpec {
    Benchmark { kind: BenchmarkKind, dimension: usize },
    /// Loaded from `instance` when given, otherwise generated with `items`
    /// items from the experiment's base seed.
    Knapsack { instance: Option<PathBuf>, items: usize, write_back: bool },
}

impl ProblemSpec {
    pub fn name(&self) -> &str {
        match self {
            ProblemSpec::Benchmark { kind, .. } => kind.name(),
            ProblemSpec::Knapsack { .. } => "knapsack",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub problem: ProblemSpec,
    pub algorithm: Algorithm,
    pub population_size: usize,
    pub t_max: usize,
    pub runs: usize,
    pub base_seed: u64,
    pub params: VariationParams,
    pub qea_policy: AnglePolicy,
    pub out_dir: PathBuf,
}

const KEYS: &[&str] = &[
    "problem", "dim", "items", "instance", "write_back", "algo", "pop", "gens", "runs", "seed",
    "out", "c1", "c2", "delta", "lambda", "m1", "m2", "kappa", "tau", "m", "multi_mode", "qea_angle",
];

/// Parses `key = value` lines. Returns pairs in file order.
pub fn parse_config_text(text: &str, path: &Path) -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(Error::Parse {
                path: path.to_owned(),
                line: i + 1,
                message: format!("expected `key = value`, found `{line}`"),
            });
        };
        let key = k.trim().to_ascii_lowercase();
        if !KEYS.contains(&key.as_str()) {
            return Err(Error::Parse {
                path: path.to_owned(),
                line: i + 1,
                message: format!("unknown key `{key}`"),
            });
        }
        pairs.push((key, v.trim().to_owned()));
    }
    Ok(pairs)
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse::<T>()
        .map_err(|_| Error::Config(format!("`{key}`: cannot parse `{value}`")))
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_pairs(parse_config_text(&text, path)?)
    }

    /// Builds a config from ordered `(key, value)` pairs on top of the
    /// defaults. Variation defaults follow the problem: step counts from the
    /// dimension for benchmarks, the knapsack preset otherwise.
    pub fn from_pairs<K, V>(pairs: impl IntoIterator<Item = (K, V)>) -> Result<Self>
    where
        K: AsRef<str>,
        V: AsRef<str>,
    {
        let mut map = BTreeMap::new();
        for (k, v) in pairs {
            let key = k.as_ref().to_ascii_lowercase();
            if !KEYS.contains(&key.as_str()) {
                return Err(Error::Config(format!("unknown key `{key}`")));
            }
            map.insert(key, v.as_ref().to_owned());
        }
        let get = |k: &str| map.get(k).map(String::as_str);

        let problem_name = get("problem").unwrap_or("sphere");
        let dim: Option<usize> = get("dim").map(|v| parse_value("dim", v)).transpose()?;
        let problem = if problem_name.eq_ignore_ascii_case("knapsack") {
            let items = match get("items") {
                Some(v) => parse_value("items", v)?,
                None => dim.unwrap_or(100),
            };
            let write_back = get("write_back").map(|v| parse_value("write_back", v)).transpose()?.unwrap_or(true);
            ProblemSpec::Knapsack { instance: get("instance").map(PathBuf::from), items, write_back }
        } else {
            let kind = problem_name.parse::<BenchmarkKind>().map_err(Error::Config)?;
            ProblemSpec::Benchmark { kind, dimension: dim.unwrap_or(30) }
        };

        let mut params = match &problem {
            ProblemSpec::Benchmark { dimension, .. } => VariationParams::for_dimension(*dimension),
            ProblemSpec::Knapsack { .. } => VariationParams::knapsack(),
        };
        if let Some(v) = get("c1") { params.cognitive_factor = parse_value("c1", v)?; }
        if let Some(v) = get("c2") { params.social_factor = parse_value("c2", v)?; }
        if let Some(v) = get("delta") { params.sum_count = parse_value("delta", v)?; }
        if let Some(v) = get("lambda") { params.escape_threshold = parse_value("lambda", v)?; }
        if let Some(v) = get("m1") { params.fine_steps = parse_value("m1", v)?; }
        if let Some(v) = get("m2") { params.coarse_steps = parse_value("m2", v)?; }
        if let Some(v) = get("kappa") { params.multi_gene_period = parse_value("kappa", v)?; }
        if let Some(v) = get("tau") { params.crossover_period = parse_value("tau", v)?; }
        if let Some(v) = get("m") { params.crossover_repeats = parse_value("m", v)?; }
        if let Some(v) = get("multi_mode") { params.multi_gene_mode = v.parse()?; }

        let mut qea_policy = AnglePolicy::default();
        if let Some(v) = get("qea_angle") {
            qea_policy.magnitude = parse_value::<f64>("qea_angle", v)? * std::f64::consts::PI;
        }

        let config = Self {
            problem,
            algorithm: get("algo").map(str::parse).transpose()?.unwrap_or(Algorithm::Hrcqea),
            population_size: get("pop").map(|v| parse_value("pop", v)).transpose()?.unwrap_or(10),
            t_max: get("gens").map(|v| parse_value("gens", v)).transpose()?.unwrap_or(4000),
            runs: get("runs").map(|v| parse_value("runs", v)).transpose()?.unwrap_or(50),
            base_seed: get("seed").map(|v| parse_value("seed", v)).transpose()?.unwrap_or(1),
            params,
            qea_policy,
            out_dir: PathBuf::from(get("out").unwrap_or("results")),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn dimension(&self) -> usize {
        match &self.problem {
            ProblemSpec::Benchmark { dimension, .. } => *dimension,
            ProblemSpec::Knapsack { items, .. } => *items,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.runs == 0 {
            return bad("runs must be >= 1".into());
        }
        if self.t_max == 0 {
            return bad("gens must be >= 1".into());
        }
        match self.algorithm {
            Algorithm::Hrcqea if self.population_size < 2 => {
                return bad(format!("pop must be >= 2 for hrcqea, got {}", self.population_size));
            }
            Algorithm::Qea if self.population_size == 0 => return bad("pop must be >= 1".into()),
            Algorithm::Qea if !matches!(self.problem, ProblemSpec::Knapsack { .. }) => {
                return bad("the qea baseline only supports the knapsack problem".into());
            }
            _ => {}
        }
        if let ProblemSpec::Knapsack { instance: None, items: 0, .. } = self.problem {
            return bad("items must be >= 1".into());
        }
        if let ProblemSpec::Benchmark { dimension: 0, .. } = self.problem {
            return bad("dim must be >= 1".into());
        }
        self.params.validate()
    }
}
