//! Shared swarm records: search box, particles, swarms, the objective
//! interface and evaluation accounting.

use crate::error::{Error, Result};
use crate::rng::RandomSource;
use serde::{Deserialize, Serialize};

/// Axis-aligned search box.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
    diagonal_length: f64,
}

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                got: upper.len(),
            });
        }
        if lower.is_empty() {
            return Err(Error::Empty("bounds"));
        }
        for (dim, (&lo, &hi)) in lower.iter().zip(&upper).enumerate() {
            // also rejects NaN
            if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
                return Err(Error::InvalidBounds {
                    dim,
                    lower: lo,
                    upper: hi,
                });
            }
        }
        let diagonal_length = lower
            .iter()
            .zip(&upper)
            .map(|(lo, hi)| (hi - lo) * (hi - lo))
            .sum::<f64>()
            .sqrt();
        Ok(Self {
            lower,
            upper,
            diagonal_length,
        })
    }

    /// The same interval `[lo, hi]` in every one of `dim` dimensions.
    pub fn uniform(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    /// Width `upper[d] - lower[d]` of dimension `d`.
    pub fn width(&self, d: usize) -> f64 {
        self.upper[d] - self.lower[d]
    }

    /// Euclidean length of `upper - lower`, the longest diagonal of the box.
    pub fn diagonal_length(&self) -> f64 {
        self.diagonal_length
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (lo, hi))| lo <= v && v <= hi)
    }

    /// Per-dimension velocity cap `factor * (upper - lower)`.
    pub fn velocity_cap(&self, factor: f64) -> Vec<f64> {
        (0..self.dim()).map(|d| factor * self.width(d)).collect()
    }
}

/// Clip every coordinate of `position` into the box. Coordinates already
/// inside are left bit-identical.
pub fn clamp_to_bounds(position: &mut [f64], bounds: &Bounds) {
    debug_assert_eq!(position.len(), bounds.dim());
    for ((x, lo), hi) in position.iter_mut().zip(bounds.lower()).zip(bounds.upper()) {
        if *x < *lo {
            *x = *lo;
        } else if *x > *hi {
            *x = *hi;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Particle {
    pub position: Vec<f64>,
    pub velocity: Vec<f64>,
    pub best_position: Vec<f64>,
    pub best_fitness: f64,
    pub current_fitness: f64,
}

impl Particle {
    /// A particle at rest whose personal best is its current point.
    pub fn at_rest(position: Vec<f64>, fitness: f64) -> Self {
        let dim = position.len();
        Self {
            best_position: position.clone(),
            position,
            velocity: vec![0.0; dim],
            best_fitness: fitness,
            current_fitness: fitness,
        }
    }

    /// Record a fresh evaluation of the current position, promoting it to the
    /// personal best when it improves. Returns whether it improved.
    pub fn record(&mut self, fitness: f64) -> bool {
        self.current_fitness = fitness;
        if fitness < self.best_fitness {
            self.best_fitness = fitness;
            self.best_position.clone_from(&self.position);
            true
        } else {
            false
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SwarmRole {
    ExplorationSub,
    Exploitation,
    Convergence,
}

/// A set of particles sharing one global best.
///
/// `global_best_fitness` never exceeds the best personal best in the swarm.
/// It can be strictly lower when the swarm was spawned from, or rebuilt
/// around, an incumbent that none of the current particles holds.
#[derive(Debug, Clone, PartialEq)]
pub struct Swarm {
    pub particles: Vec<Particle>,
    pub global_best_position: Vec<f64>,
    pub global_best_fitness: f64,
    pub role: SwarmRole,
}

impl Swarm {
    /// Build a swarm whose global best is the best personal best.
    pub fn from_particles(particles: Vec<Particle>, role: SwarmRole) -> Result<Self> {
        let best = particles
            .iter()
            .min_by(|a, b| a.best_fitness.total_cmp(&b.best_fitness))
            .ok_or(Error::Empty("swarm"))?;
        Ok(Self {
            global_best_position: best.best_position.clone(),
            global_best_fitness: best.best_fitness,
            particles,
            role,
        })
    }

    pub fn len(&self) -> usize {
        self.particles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.particles.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.global_best_position.len()
    }

    /// Promote particle `i`'s personal best to global best if it is better.
    pub fn offer(&mut self, i: usize) -> bool {
        let p = &self.particles[i];
        if p.best_fitness < self.global_best_fitness {
            self.global_best_fitness = p.best_fitness;
            self.global_best_position.clone_from(&p.best_position);
            true
        } else {
            false
        }
    }

    /// Smallest personal best currently held by a particle.
    pub fn best_particle_fitness(&self) -> f64 {
        self.particles
            .iter()
            .map(|p| p.best_fitness)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Function to minimize over a box.
pub trait Objective: Sync {
    fn dimension(&self) -> usize;

    fn bounds(&self) -> &Bounds;

    /// Raw objective value at `x` (length [`dimension`](Self::dimension)).
    fn value(&self, x: &[f64]) -> f64;

    /// Known optimal value, used to report errors `f(x) - f(x*)`.
    fn optimum_value(&self) -> f64 {
        0.0
    }
}

impl<O: Objective + ?Sized> Objective for &O {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }
    fn bounds(&self) -> &Bounds {
        (**self).bounds()
    }
    fn value(&self, x: &[f64]) -> f64 {
        (**self).value(x)
    }
    fn optimum_value(&self) -> f64 {
        (**self).optimum_value()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalCounter {
    pub used: usize,
    pub budget: usize,
}

impl EvalCounter {
    pub fn new(budget: usize) -> Self {
        Self { used: 0, budget }
    }

    pub fn remaining(&self) -> usize {
        self.budget.saturating_sub(self.used)
    }

    pub fn can_afford(&self, n: usize) -> bool {
        self.remaining() >= n
    }
}

/// Budgeted access to an objective. Every call to [`evaluate`](Self::evaluate)
/// costs exactly one function evaluation.
pub struct Evaluator<'a, O: Objective + ?Sized> {
    objective: &'a O,
    counter: EvalCounter,
}

impl<'a, O: Objective + ?Sized> Evaluator<'a, O> {
    pub fn new(objective: &'a O, budget: usize) -> Self {
        Self {
            objective,
            counter: EvalCounter::new(budget),
        }
    }

    pub fn objective(&self) -> &'a O {
        self.objective
    }

    pub fn bounds(&self) -> &'a Bounds {
        self.objective.bounds()
    }

    pub fn counter(&self) -> EvalCounter {
        self.counter
    }

    pub fn used(&self) -> usize {
        self.counter.used
    }

    pub fn can_afford(&self, n: usize) -> bool {
        self.counter.can_afford(n)
    }

    /// Fail with [`Error::BudgetExhausted`] unless `n` evaluations remain.
    pub fn require(&self, n: usize) -> Result<()> {
        if self.can_afford(n) {
            Ok(())
        } else {
            Err(self.exhausted(0))
        }
    }

    pub(crate) fn exhausted(&self, evaluated: usize) -> Error {
        Error::BudgetExhausted {
            budget: self.counter.budget,
            evaluated,
        }
    }

    pub fn evaluate(&mut self, x: &[f64]) -> Result<f64> {
        let dim = self.objective.dimension();
        if x.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: x.len(),
            });
        }
        if self.counter.used >= self.counter.budget {
            return Err(self.exhausted(0));
        }
        self.counter.used += 1;
        Ok(self.objective.value(x))
    }
}

pub(crate) fn check_vmax(vmax: &[f64], dim: usize) -> Result<()> {
    if vmax.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: vmax.len(),
        });
    }
    if let Some(v) = vmax.iter().find(|v| !(**v > 0.0)) {
        return Err(Error::InvalidConfig(format!("vmax must be positive, got {v}")));
    }
    Ok(())
}

/// Draw a velocity uniformly from `[-vmax, vmax]` per dimension.
pub(crate) fn random_velocity<R: RandomSource>(rng: &mut R, vmax: &[f64]) -> Vec<f64> {
    vmax.iter().map(|&v| rng.uniform_range(-v, v)).collect()
}

/// Scatter `size` particles uniformly over the objective's box.
///
/// Per particle the draws are: `D` uniforms for the position, then `D`
/// uniforms for the velocity. Consumes `size` evaluations.
pub fn initialize_swarm<O, R>(
    eval: &mut Evaluator<'_, O>,
    size: usize,
    role: SwarmRole,
    rng: &mut R,
    vmax: &[f64],
) -> Result<Swarm>
where
    O: Objective + ?Sized,
    R: RandomSource,
{
    if size == 0 {
        return Err(Error::Empty("swarm"));
    }
    let bounds = eval.bounds();
    check_vmax(vmax, bounds.dim())?;
    let mut particles = Vec::with_capacity(size);
    for done in 0..size {
        let position: Vec<f64> = bounds
            .lower()
            .iter()
            .zip(bounds.upper())
            .map(|(&lo, &hi)| rng.uniform_range(lo, hi))
            .collect();
        let velocity = random_velocity(rng, vmax);
        let fitness = eval.evaluate(&position).map_err(|e| match e {
            Error::BudgetExhausted { budget, .. } => Error::BudgetExhausted {
                budget,
                evaluated: done,
            },
            other => other,
        })?;
        let mut p = Particle::at_rest(position, fitness);
        p.velocity = velocity;
        particles.push(p);
    }
    Swarm::from_particles(particles, role)
}
