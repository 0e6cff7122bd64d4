//! Position and amplitude operators.
//!
//! Single-gene mutation perturbs one real variable with a step scaled by one
//! of the allele's amplitudes (fine or coarse search). A rejected step leaves
//! the position alone and instead turns the amplitude pair: by a PSO-style
//! angle toward the personal and global bests while the allele's run of
//! rejections is short, and by a hard shrink once the run exceeds the escape
//! threshold. Multi-gene mutation and arithmetic crossover reuse the same
//! pieces.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::particle::{average_rotation_angle, Swarm, TriploidChromosome};
use crate::problems::{Bounds, Problem};
use crate::rng::RandomSource;
use crate::selection::{hcs_accept, Sense};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Fine,
    Coarse,
}

impl std::str::FromStr for SearchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fine" => Ok(SearchMode::Fine),
            "coarse" => Ok(SearchMode::Coarse),
            other => Err(Error::Config(format!("unknown search mode `{other}` (fine|coarse)"))),
        }
    }
}

impl SearchMode {
    /// Step scale ξ for this mode. Minimisation searches finely with |α| and
    /// coarsely with |β|; maximisation swaps the roles.
    pub fn step_scale(self, sense: Sense, alpha: f64, beta: f64) -> f64 {
        match (sense, self) {
            (Sense::Minimize, SearchMode::Fine) | (Sense::Maximize, SearchMode::Coarse) => alpha.abs(),
            (Sense::Minimize, SearchMode::Coarse) | (Sense::Maximize, SearchMode::Fine) => beta.abs(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariationParams {
    /// Weight on the personal-best term of the rotation angle.
    pub cognitive_factor: f64,
    /// Weight on the global-best term of the rotation angle.
    pub social_factor: f64,
    /// Number of uniforms summed per perturbation. Must be even.
    pub sum_count: u32,
    /// Consecutive rejections tolerated before the amplitude escape kicks in.
    pub escape_threshold: u32,
    pub fine_steps: usize,
    pub coarse_steps: usize,
    /// Generations between multi-gene mutation passes.
    pub multi_gene_period: usize,
    /// Generations between crossover rounds.
    pub crossover_period: usize,
    /// Crossover attempts per particle in a round.
    pub crossover_repeats: usize,
    /// Step scale used by the multi-gene mutation.
    pub multi_gene_mode: SearchMode,
}

impl VariationParams {
    /// Continuous-benchmark defaults with step counts `round(1.5·D)` and `round(0.5·D)`.
    pub fn for_dimension(dimension: usize) -> Self {
        let d = dimension as f64;
        Self {
            cognitive_factor: PI,
            social_factor: PI,
            sum_count: 12,
            escape_threshold: 1,
            fine_steps: round_half_up(1.5 * d),
            coarse_steps: round_half_up(0.5 * d),
            multi_gene_period: 5,
            crossover_period: 500,
            crossover_repeats: 10,
            multi_gene_mode: SearchMode::Fine,
        }
    }

    /// Knapsack defaults: 45 fine and 15 coarse steps, multi-gene every
    /// generation in coarse mode.
    ///
    /// Written-back positions sit on {0, 1}, so every rotation angle is a
    /// multiple of pi and leaves amplitude magnitudes alone, while the escape
    /// keeps shrinking |beta|. The fine scale under maximisation is |beta|, so
    /// fine multi-gene moves would fade out.
    pub fn knapsack() -> Self {
        Self {
            fine_steps: 45,
            coarse_steps: 15,
            multi_gene_period: 1,
            multi_gene_mode: SearchMode::Coarse,
            ..Self::for_dimension(30)
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_owned()));
        if self.sum_count < 2 || !self.sum_count.is_multiple_of(2) {
            return bad("delta must be an even integer >= 2");
        }
        if self.fine_steps + self.coarse_steps == 0 {
            return bad("m1 + m2 must be positive");
        }
        if self.multi_gene_period == 0 {
            return bad("kappa must be >= 1");
        }
        if self.crossover_period == 0 {
            return bad("tau must be >= 1");
        }
        if !self.cognitive_factor.is_finite() || !self.social_factor.is_finite() {
            return bad("c1 and c2 must be finite");
        }
        Ok(())
    }
}

fn round_half_up(v: f64) -> usize {
    (v + 0.5).floor() as usize
}

/// Displacement `(x_max − x_min) · Δx · ξ` with `Δx = Σ r_g − δ/2` over `δ` uniforms.
pub fn perturbation(rng: &mut dyn RandomSource, sum_count: u32, xi: f64, bounds: Bounds) -> f64 {
    let sum: f64 = (0..sum_count).map(|_| rng.uniform()).sum();
    let dx = sum - f64::from(sum_count) / 2.0;
    bounds.width() * dx * xi
}

/// Reflects `x` off the walls until it lies in `bounds`.
///
/// Points more than a few widths out are folded with the closed-form triangle
/// wave, which is what the repeated reflection converges to.
pub fn clip_to_bounds(x: f64, bounds: Bounds) -> f64 {
    let Bounds { min, max } = bounds;
    debug_assert!(min < max);
    if !x.is_finite() {
        return if x == f64::NEG_INFINITY { min } else { max };
    }
    let mut v = x;
    for _ in 0..8 {
        if v > max {
            v = 2.0 * max - v;
        } else if v < min {
            v = 2.0 * min - v;
        } else {
            return v;
        }
    }
    let w = max - min;
    let mut y = (x - min).rem_euclid(2.0 * w);
    if y > w {
        y = 2.0 * w - y;
    }
    (min + y).clamp(min, max)
}

/// PSO rotation angle `c1·(x_pbest − x) + c2·(x_gbest − x)`.
#[inline]
pub fn rotation_angle(x_current: f64, x_pbest: f64, x_gbest: f64, params: &VariationParams) -> f64 {
    params.cognitive_factor * (x_pbest - x_current) + params.social_factor * (x_gbest - x_current)
}

/// Applies the 2×2 rotation gate.
#[inline]
pub fn qrg_rotate(alpha: f64, beta: f64, theta: f64) -> (f64, f64) {
    let (s, c) = theta.sin_cos();
    (c * alpha - s * beta, s * alpha + c * beta)
}

/// Shrinks the search-mode amplitude by `fix(c/5) + 1` and recomputes its
/// partner as the positive root.
pub fn amplitude_escape(alpha: f64, beta: f64, invalid_count: u32, sense: Sense) -> (f64, f64) {
    let divisor = f64::from(invalid_count / 5 + 1);
    match sense {
        Sense::Minimize => {
            let a = alpha / divisor;
            (a, partner(a))
        }
        Sense::Maximize => {
            let b = beta / divisor;
            (partner(b), b)
        }
    }
}

#[inline]
fn partner(amp: f64) -> f64 {
    (1.0 - amp * amp).max(0.0).sqrt()
}

/// Positions of the particle's personal best and the swarm's global best.
#[derive(Debug, Clone, Copy)]
pub struct BestContext<'a> {
    pub personal: &'a [f64],
    pub global: &'a [f64],
}

/// Amplitude update after a rejected step on allele `i`.
fn penalize(
    p: &mut TriploidChromosome,
    i: usize,
    bests: BestContext<'_>,
    params: &VariationParams,
    sense: Sense,
) {
    let count = p.record_invalid(i);
    let (alpha, beta) = p.amplitudes(i);
    if count <= params.escape_threshold {
        let theta = rotation_angle(p.positions()[i], bests.personal[i], bests.global[i], params);
        let (a, b) = qrg_rotate(alpha, beta, theta);
        p.set_amplitudes(i, a, b);
        p.set_theta_last(i, theta);
    } else {
        let (a, b) = amplitude_escape(alpha, beta, count, sense);
        p.set_amplitudes(i, a, b);
    }
}

/// One single-gene mutation with hill-climbing acceptance.
///
/// Draw order: allele index, then `sum_count` uniforms for the step, then
/// whatever the objective consumes. Returns true on a valid (strictly
/// improving) evolution.
pub fn smm_single_gene<P: Problem + ?Sized>(
    p: &mut TriploidChromosome,
    bests: BestContext<'_>,
    problem: &P,
    mode: SearchMode,
    params: &VariationParams,
    rng: &mut dyn RandomSource,
) -> bool {
    let sense = problem.sense();
    let current = p.evaluate(problem, rng);
    let i = rng.index(p.len());
    let bounds = problem.bounds(i);
    let (alpha, beta) = p.amplitudes(i);
    let xi = mode.step_scale(sense, alpha, beta);

    let mut candidate = p.positions().to_vec();
    candidate[i] = clip_to_bounds(candidate[i] + perturbation(rng, params.sum_count, xi, bounds), bounds);
    let fitness = problem.evaluate(&mut candidate, rng);

    if hcs_accept(current, fitness, sense) {
        p.accept_position(&candidate, fitness);
        p.reset_invalid(i);
        true
    } else {
        penalize(p, i, bests, params, sense);
        false
    }
}

/// Number of alleles mutated together: `ceil(n/4 · (1 − t/(t_max+1)))`, at least 1.
pub fn gene_count_schedule(n: usize, t: usize, t_max: usize) -> usize {
    let frac = 1.0 - t as f64 / (t_max as f64 + 1.0);
    let k = (n as f64 / 4.0 * frac).ceil() as usize;
    k.clamp(1, n.max(1))
}

/// Multi-gene trigger: the mean applied angle points away from the bests
/// (negative when minimising, positive when maximising).
pub fn multi_gene_triggered(p: &TriploidChromosome, sense: Sense) -> bool {
    let theta = average_rotation_angle(p);
    match sense {
        Sense::Minimize => theta < 0.0,
        Sense::Maximize => theta > 0.0,
    }
}

/// Mutates `gene_count_schedule(n, t, t_max)` distinct alleles at once with
/// `params.multi_gene_mode` and keeps the joint move only if it strictly improves.
pub fn smm_multi_gene<P: Problem + ?Sized>(
    p: &mut TriploidChromosome,
    bests: BestContext<'_>,
    problem: &P,
    params: &VariationParams,
    rng: &mut dyn RandomSource,
    t: usize,
    t_max: usize,
) -> bool {
    let sense = problem.sense();
    let current = p.evaluate(problem, rng);
    let n = p.len();
    let k = gene_count_schedule(n, t, t_max);

    // Partial Fisher-Yates: the first k slots hold a uniform k-subset.
    let mut order: Vec<usize> = (0..n).collect();
    for s in 0..k {
        let j = s + rng.index(n - s);
        order.swap(s, j);
    }
    let chosen = &order[..k];

    let mut candidate = p.positions().to_vec();
    for &i in chosen {
        let bounds = problem.bounds(i);
        let (alpha, beta) = p.amplitudes(i);
        let xi = params.multi_gene_mode.step_scale(sense, alpha, beta);
        candidate[i] = clip_to_bounds(candidate[i] + perturbation(rng, params.sum_count, xi, bounds), bounds);
    }
    let fitness = problem.evaluate(&mut candidate, rng);

    if hcs_accept(current, fitness, sense) {
        p.accept_position(&candidate, fitness);
        for &i in chosen {
            p.reset_invalid(i);
        }
        true
    } else {
        for &i in chosen {
            penalize(p, i, bests, params, sense);
        }
        false
    }
}

/// Midpoint of two particles; beta is the positive partner of the mean alpha.
pub fn average_individual(pu: &TriploidChromosome, pv: &TriploidChromosome) -> Result<TriploidChromosome> {
    if pu.len() != pv.len() {
        return Err(Error::LengthMismatch(pu.len(), pv.len()));
    }
    let x = pu.positions().iter().zip(pv.positions()).map(|(a, b)| (a + b) / 2.0).collect();
    let mut avg = TriploidChromosome::at_position(x);
    for (i, (a, b)) in pu.alphas().iter().zip(pv.alphas()).enumerate() {
        let alpha = (a + b) / 2.0;
        if alpha.abs() > 1.0 {
            return Err(Error::AmplitudeOutOfRange(alpha));
        }
        avg.set_amplitudes(i, alpha, partner(alpha));
    }
    Ok(avg)
}

/// Blends the averaged individual with a personal best, one uniform weight per
/// allele. `d1` leans toward the personal best by `r`, `d2` by `1 − r`.
pub fn arithmetic_crossover(
    avg: &TriploidChromosome,
    best: &TriploidChromosome,
    rng: &mut dyn RandomSource,
) -> (TriploidChromosome, TriploidChromosome) {
    debug_assert_eq!(avg.len(), best.len());
    let n = avg.len();
    let mut d1 = TriploidChromosome::at_position(vec![0.0; n]);
    let mut d2 = TriploidChromosome::at_position(vec![0.0; n]);
    for i in 0..n {
        let r = rng.uniform();
        let (xb, xa) = (best.positions()[i], avg.positions()[i]);
        let (ab, aa) = (best.alphas()[i], avg.alphas()[i]);

        let a1 = r * ab + (1.0 - r) * aa;
        d1.set_x(i, r * xb + (1.0 - r) * xa);
        d1.set_amplitudes(i, a1, partner(a1));

        let a2 = (1.0 - r) * ab + r * aa;
        d2.set_x(i, (1.0 - r) * xb + r * xa);
        d2.set_amplitudes(i, a2, partner(a2));
    }
    (d1, d2)
}

/// One crossover round: every particle tries `crossover_repeats` offspring
/// pairs and keeps the better child only if it strictly beats the particle.
/// Archives are left for the caller to refresh. Returns the number of
/// replacements.
pub fn crossover_round<P: Problem + ?Sized>(
    swarm: &mut Swarm,
    problem: &P,
    params: &VariationParams,
    rng: &mut dyn RandomSource,
) -> usize {
    let sense = problem.sense();
    let n = swarm.len();
    debug_assert!(n >= 2);
    let mut replaced = 0;
    for u in 0..n {
        for _ in 0..params.crossover_repeats {
            let mut v = rng.index(n - 1);
            if v >= u {
                v += 1;
            }
            let avg = average_individual(&swarm.particles[u], &swarm.particles[v])
                .expect("swarm particles share a dimension");
            let (mut d1, mut d2) = arithmetic_crossover(&avg, &swarm.personal_bests[u], rng);
            let f1 = d1.evaluate(problem, rng);
            let f2 = d2.evaluate(problem, rng);
            let child = if sense.not_worse(f1, f2) { d1 } else { d2 };

            if hcs_accept(swarm.particles[u].fitness(), child.fitness(), sense) {
                swarm.particles[u] = child;
                replaced += 1;
            }
        }
    }
    replaced
}
