//! Hill-climbing acceptance and the elitist best archives.

use crate::particle::Swarm;

/// Direction of optimisation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Minimize,
    Maximize,
}

impl Sense {
    /// Strict comparison: `a` is better than `b`.
    #[inline]
    pub fn better(self, a: f64, b: f64) -> bool {
        match self {
            Sense::Minimize => a < b,
            Sense::Maximize => a > b,
        }
    }

    /// `a` is better than or equal to `b`.
    #[inline]
    pub fn not_worse(self, a: f64, b: f64) -> bool {
        !self.better(b, a)
    }

    /// Index of the best value, first one wins ties.
    pub fn best_index(self, values: impl IntoIterator<Item = f64>) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (i, v) in values.into_iter().enumerate() {
            match best {
                Some((_, b)) if !self.better(v, b) => {}
                _ => best = Some((i, v)),
            }
        }
        best.map(|(i, _)| i)
    }
}

/// HCS: the child replaces the parent only on strict improvement.
#[inline]
pub fn hcs_accept(parent_fitness: f64, child_fitness: f64, sense: Sense) -> bool {
    sense.better(child_fitness, parent_fitness)
}

/// Copies strictly improved particles into their personal-best slots, then
/// promotes the best personal best to the global archive if it strictly
/// improves on it. Returns true when the global best changed.
pub fn refresh_bests(swarm: &mut Swarm, sense: Sense) -> bool {
    for (particle, best) in swarm.particles.iter().zip(swarm.personal_bests.iter_mut()) {
        if hcs_accept(best.fitness(), particle.fitness(), sense) {
            best.clone_from(particle);
        }
    }

    let Some(idx) = sense.best_index(swarm.personal_bests.iter().map(|b| b.fitness())) else {
        return false;
    };
    if hcs_accept(swarm.global_best.fitness(), swarm.personal_bests[idx].fitness(), sense) {
        swarm.global_best.clone_from(&swarm.personal_bests[idx]);
        swarm.global_best_index = idx;
        true
    } else {
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::particle::TriploidChromosome;
    use crate::rng::{RandomSource, SeededRng};

    fn particle(x: f64, fitness: f64) -> TriploidChromosome {
        let mut p = TriploidChromosome::at_position(vec![x]);
        p.set_fitness(fitness);
        p
    }

    fn swarm_of(fits: &[f64]) -> Swarm {
        let particles: Vec<_> = fits.iter().map(|&f| particle(f, f)).collect();
        Swarm::from_particles(particles, Sense::Minimize)
    }

    #[test]
    fn hcs_minimize() {
        assert!(hcs_accept(5.0, 3.0, Sense::Minimize));
        assert!(!hcs_accept(5.0, 5.0, Sense::Minimize));
        assert!(!hcs_accept(5.0, 7.0, Sense::Minimize));
    }

    #[test]
    fn hcs_maximize() {
        assert!(hcs_accept(600.0, 609.0, Sense::Maximize));
        assert!(!hcs_accept(609.0, 609.0, Sense::Maximize));
        assert!(!hcs_accept(609.0, 600.0, Sense::Maximize));
    }

    #[test]
    fn best_index_prefers_first_on_ties() {
        assert_eq!(Sense::Minimize.best_index([3.0, 1.0, 1.0]), Some(1));
        assert_eq!(Sense::Maximize.best_index([3.0, 1.0, 3.0]), Some(0));
        assert_eq!(Sense::Maximize.best_index(std::iter::empty()), None);
    }

    #[test]
    fn unchanged_particles_leave_archives_bitwise_equal() {
        let mut swarm = swarm_of(&[4.0, 2.0, 9.0]);
        let before = swarm.clone();
        assert!(!refresh_bests(&mut swarm, Sense::Minimize));
        assert_eq!(swarm.personal_bests, before.personal_bests);
        assert_eq!(swarm.global_best, before.global_best);
    }

    #[test]
    fn improving_particle_updates_both_archives() {
        let mut swarm = swarm_of(&[4.0, 2.0, 9.0]);
        swarm.particles[2] = particle(0.5, 0.5);
        assert!(refresh_bests(&mut swarm, Sense::Minimize));
        assert_eq!(swarm.personal_bests[2].fitness(), 0.5);
        assert_eq!(swarm.global_best.fitness(), 0.5);
        assert_eq!(swarm.global_best_index, 2);
        assert_eq!(swarm.global_best.positions(), &[0.5]);
    }

    #[test]
    fn archives_are_copies() {
        let mut swarm = swarm_of(&[4.0, 2.0]);
        swarm.particles[1] = particle(1.0, 1.0);
        refresh_bests(&mut swarm, Sense::Minimize);
        swarm.particles[1].set_x(0, 77.0);
        assert_eq!(swarm.personal_bests[1].positions(), &[1.0]);
        assert_eq!(swarm.global_best.positions(), &[1.0]);
    }

    #[test]
    fn randomized_archive_sequence_is_monotone() {
        for sense in [Sense::Minimize, Sense::Maximize] {
            let mut rng = SeededRng::new(99);
            let mut swarm = swarm_of(&[50.0; 5]);
            let mut last_global = swarm.global_best.fitness();
            let mut last_personal: Vec<f64> =
                swarm.personal_bests.iter().map(|b| b.fitness()).collect();
            for _ in 0..1000 {
                let j = rng.index(5);
                let f = 100.0 * rng.uniform();
                swarm.particles[j] = particle(f, f);
                refresh_bests(&mut swarm, sense);

                let g = swarm.global_best.fitness();
                assert!(sense.not_worse(g, last_global));
                last_global = g;
                for (k, b) in swarm.personal_bests.iter().enumerate() {
                    assert!(sense.not_worse(b.fitness(), last_personal[k]));
                    assert!(sense.not_worse(b.fitness(), swarm.particles[k].fitness()));
                    assert!(sense.not_worse(g, b.fitness()));
                    last_personal[k] = b.fitness();
                }
            }
        }
    }
}
