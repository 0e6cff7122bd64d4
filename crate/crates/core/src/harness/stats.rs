use crate::selection::Sense;

/// Best, worst, mean and population standard deviation of final fitnesses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryStats {
    pub best: f64,
    pub worst: f64,
    pub mean: f64,
    pub sigma: f64,
}

impl SummaryStats {
    pub fn from_finals(finals: &[f64], sense: Sense) -> Option<Self> {
        if finals.is_empty() {
            return None;
        }
        let n = finals.len() as f64;
        let lo = finals.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = finals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mean = finals.iter().sum::<f64>() / n;
        let var = finals.iter().map(|f| (f - mean).powi(2)).sum::<f64>() / n;
        let (best, worst) = match sense {
            Sense::Minimize => (lo, hi),
            Sense::Maximize => (hi, lo),
        };
        // A constant sample can produce a mean one ulp outside [lo, hi].
        Some(Self { best, worst, mean: mean.clamp(lo, hi), sigma: var.sqrt() })
    }
}
