//! Swarm transition operators.
//!
//! Each operator mutates or builds one swarm, spends evaluations through the
//! supplied [`Evaluator`] and leaves every coordinate inside the search box.
//! Spawning and reconstruction are all-or-nothing: they check the budget up
//! front. [`pso_step`] moves particles one at a time and stops at the first
//! particle it cannot afford.

use crate::error::{Error, Result};
use crate::model::{
    check_vmax, clamp_to_bounds, random_velocity, Evaluator, Objective, Particle, Swarm, SwarmRole,
};
use crate::rng::RandomSource;

pub const DEFAULT_C1: f64 = 1.49445;
pub const DEFAULT_C2: f64 = 1.49445;
pub const DEFAULT_VMAX_FACTOR: f64 = 0.01;
/// Standard deviation of the relative offsets used when spawning a swarm.
pub const DEFAULT_SPAWN_SIGMA: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct KinematicParams {
    pub omega: f64,
    pub c1: f64,
    pub c2: f64,
    pub vmax: Vec<f64>,
}

impl KinematicParams {
    pub fn new(omega: f64, vmax: Vec<f64>) -> Self {
        Self {
            omega,
            c1: DEFAULT_C1,
            c2: DEFAULT_C2,
            vmax,
        }
    }
}

/// One velocity/position update of the selected particles (all when
/// `subset` is `None`).
///
/// For each particle, in selection order, two uniforms `r1, r2` are drawn
/// per dimension. The velocity is capped at `±vmax`, the moved position is
/// clamped into the box and evaluated, and personal and global bests are
/// updated immediately. Returns the number of particles moved.
pub fn pso_step<O, R>(
    swarm: &mut Swarm,
    params: &KinematicParams,
    eval: &mut Evaluator<'_, O>,
    rng: &mut R,
    subset: Option<&[usize]>,
) -> Result<usize>
where
    O: Objective + ?Sized,
    R: RandomSource,
{
    let bounds = eval.bounds();
    check_vmax(&params.vmax, bounds.dim())?;
    let all: Vec<usize>;
    let selected = match subset {
        Some(s) => {
            if let Some(&bad) = s.iter().find(|&&i| i >= swarm.len()) {
                return Err(Error::InvalidConfig(format!(
                    "particle index {bad} out of range for swarm of {}",
                    swarm.len()
                )));
            }
            s
        }
        None => {
            all = (0..swarm.len()).collect();
            &all
        }
    };

    for (moved, &i) in selected.iter().enumerate() {
        if !eval.can_afford(1) {
            return Err(eval.exhausted(moved));
        }
        let gbest = &swarm.global_best_position;
        let p = &mut swarm.particles[i];
        for d in 0..p.position.len() {
            let r1 = rng.uniform();
            let r2 = rng.uniform();
            let x = p.position[d];
            let v = params.omega * p.velocity[d]
                + params.c1 * r1 * (p.best_position[d] - x)
                + params.c2 * r2 * (gbest[d] - x);
            let cap = params.vmax[d];
            p.velocity[d] = v.clamp(-cap, cap);
            p.position[d] = x + p.velocity[d];
        }
        clamp_to_bounds(&mut p.position, bounds);
        let f = eval.evaluate(&p.position)?;
        p.record(f);
        swarm.offer(i);
    }
    Ok(selected.len())
}

/// Build a swarm of `size` particles around `seed`: each coordinate is
/// `seed[d] + (upper[d] - lower[d]) * N(0, sigma^2)`, clamped.
///
/// Per particle the draws are `D` Gaussians for the offset, then `D`
/// uniforms for the velocity. The swarm's global best is the better of the
/// spawned particles and the seed itself (`seed_fitness` is already known
/// and costs nothing). Consumes `size` evaluations.
#[allow(clippy::too_many_arguments)]
pub fn spawn_artificial_swarm<O, R>(
    seed: &[f64],
    seed_fitness: f64,
    size: usize,
    sigma: f64,
    vmax: &[f64],
    role: SwarmRole,
    eval: &mut Evaluator<'_, O>,
    rng: &mut R,
) -> Result<Swarm>
where
    O: Objective + ?Sized,
    R: RandomSource,
{
    let bounds = eval.bounds();
    if seed.len() != bounds.dim() {
        return Err(Error::DimensionMismatch {
            expected: bounds.dim(),
            got: seed.len(),
        });
    }
    if size == 0 {
        return Err(Error::Empty("swarm"));
    }
    check_vmax(vmax, bounds.dim())?;
    check_sigma(sigma)?;
    eval.require(size)?;

    let mut particles = Vec::with_capacity(size);
    for _ in 0..size {
        let mut position: Vec<f64> = seed
            .iter()
            .enumerate()
            .map(|(d, &s)| s + bounds.width(d) * sigma * rng.standard_normal())
            .collect();
        clamp_to_bounds(&mut position, bounds);
        let velocity = random_velocity(rng, vmax);
        let f = eval.evaluate(&position)?;
        let mut p = Particle::at_rest(position, f);
        p.velocity = velocity;
        particles.push(p);
    }
    let mut swarm = Swarm::from_particles(particles, role)?;
    if seed_fitness < swarm.global_best_fitness {
        swarm.global_best_fitness = seed_fitness;
        swarm.global_best_position = seed.to_vec();
    }
    Ok(swarm)
}

/// Indices of the `n` particles with the largest current fitness, worst
/// first; equal fitness ranks the lower index first.
pub fn worst_particles(swarm: &Swarm, n: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..swarm.len()).collect();
    idx.sort_by(|&a, &b| {
        let fa = swarm.particles[a].current_fitness;
        let fb = swarm.particles[b].current_fitness;
        fb.total_cmp(&fa).then(a.cmp(&b))
    });
    idx.truncate(n);
    idx
}

/// Replace the `count` worst particles with copies of the global best that
/// differ in one random dimension `d`:
/// `best[d] + (upper[d] - lower[d]) * N(0, sigma^2)`.
///
/// Per rebuilt particle the draws are one index for `d`, then one Gaussian.
/// Rebuilt particles get zero velocity and a personal best equal to their
/// new point. Returns the rebuilt indices, worst first.
pub fn partial_reconstruct<O, R>(
    swarm: &mut Swarm,
    count: usize,
    sigma: f64,
    eval: &mut Evaluator<'_, O>,
    rng: &mut R,
) -> Result<Vec<usize>>
where
    O: Objective + ?Sized,
    R: RandomSource,
{
    if count > swarm.len() {
        return Err(Error::InvalidConfig(format!(
            "cannot rebuild {count} particles of a swarm of {}",
            swarm.len()
        )));
    }
    check_sigma(sigma)?;
    eval.require(count)?;
    let bounds = eval.bounds();
    let best = swarm.global_best_position.clone();
    let targets = worst_particles(swarm, count);
    for &i in &targets {
        let mut position = best.clone();
        let d = rng.index(position.len());
        position[d] += bounds.width(d) * sigma * rng.standard_normal();
        clamp_to_bounds(&mut position, bounds);
        let f = eval.evaluate(&position)?;
        swarm.particles[i] = Particle::at_rest(position, f);
        swarm.offer(i);
    }
    Ok(targets)
}

/// Rebuild every particle around the global best, perturbing all
/// dimensions: `best + (upper - lower) * N(0, sigma^2)` per coordinate.
///
/// Velocities are zeroed and personal bests reset to the new points. The
/// previous global best is kept unless a rebuilt particle beats it.
pub fn full_reconstruct<O, R>(
    swarm: &mut Swarm,
    sigma: f64,
    eval: &mut Evaluator<'_, O>,
    rng: &mut R,
) -> Result<()>
where
    O: Objective + ?Sized,
    R: RandomSource,
{
    check_sigma(sigma)?;
    eval.require(swarm.len())?;
    let bounds = eval.bounds();
    let best = swarm.global_best_position.clone();
    for i in 0..swarm.len() {
        let mut position: Vec<f64> = best
            .iter()
            .enumerate()
            .map(|(d, &b)| b + bounds.width(d) * sigma * rng.standard_normal())
            .collect();
        clamp_to_bounds(&mut position, bounds);
        let f = eval.evaluate(&position)?;
        swarm.particles[i] = Particle::at_rest(position, f);
        swarm.offer(i);
    }
    Ok(())
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!("sigma must be positive, got {sigma}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::{BenchmarkFunction, ObjectiveSpec};
    use crate::diversity::position_diversity;
    use crate::model::{initialize_swarm, Bounds};
    use crate::rng::RngStream;

    /// Replays fixed uniform and Gaussian values.
    struct Fixed {
        uniform: f64,
        normal: f64,
    }

    impl RandomSource for Fixed {
        fn uniform(&mut self) -> f64 {
            self.uniform
        }
        fn standard_normal(&mut self) -> f64 {
            self.normal
        }
    }

    fn sphere(dim: usize) -> ObjectiveSpec {
        ObjectiveSpec::new(BenchmarkFunction::Sphere, dim).unwrap()
    }

    fn single(position: Vec<f64>, velocity: Vec<f64>, best: Vec<f64>, obj: &ObjectiveSpec) -> Swarm {
        let f = obj.value(&best);
        let mut p = Particle::at_rest(best.clone(), f);
        p.current_fitness = obj.value(&position);
        p.position = position;
        p.velocity = velocity;
        Swarm::from_particles(vec![p], SwarmRole::Exploitation).unwrap()
    }

    #[test]
    fn fixed_point_does_not_move() {
        let obj = sphere(3);
        let x = vec![1.0, -2.0, 3.0];
        let mut s = single(x.clone(), vec![0.0; 3], x.clone(), &obj);
        let before = s.clone();
        let mut eval = Evaluator::new(&obj, 10);
        let params = KinematicParams::new(0.7, obj.bounds().velocity_cap(0.01));
        pso_step(&mut s, &params, &mut eval, &mut RngStream::new(1), None).unwrap();
        assert_eq!(s.particles[0].position, x);
        assert_eq!(s.particles[0].current_fitness, before.particles[0].current_fitness);
        assert_eq!(eval.used(), 1);
    }

    #[test]
    fn hand_computed_step() {
        // one particle at 0 with v = 1, pbest 2; a second particle pins gbest at 4
        let obj = ObjectiveSpec::new(BenchmarkFunction::Sphere, 1)
            .unwrap()
            .with_bounds(Bounds::uniform(1, -100.0, 100.0).unwrap())
            .unwrap();
        let mut s = single(vec![0.0], vec![1.0], vec![2.0], &obj);
        s.global_best_position = vec![4.0];
        let mut params = KinematicParams::new(0.5, vec![2.0]);
        params.c1 = 1.49445;
        params.c2 = 1.49445;
        let mut eval = Evaluator::new(&obj, 10);
        let mut rng = Fixed { uniform: 0.5, normal: 0.0 };
        pso_step(&mut s, &params, &mut eval, &mut rng, None).unwrap();
        assert_eq!(s.particles[0].velocity, vec![2.0]);
        assert_eq!(s.particles[0].position, vec![2.0]);
        // uncapped velocity would have been 4.98335
        let mut wide = params.clone();
        wide.vmax = vec![10.0];
        let mut s2 = single(vec![0.0], vec![1.0], vec![2.0], &obj);
        s2.global_best_position = vec![4.0];
        pso_step(&mut s2, &wide, &mut eval, &mut rng, None).unwrap();
        assert!((s2.particles[0].velocity[0] - 4.98335).abs() < 1e-12);
    }

    #[test]
    fn subset_costs_exactly_its_size() {
        let obj = sphere(5);
        let vmax = obj.bounds().velocity_cap(0.01);
        let mut rng = RngStream::new(3);
        let mut eval = Evaluator::new(&obj, 1000);
        let mut s = initialize_swarm(&mut eval, 20, SwarmRole::Exploitation, &mut rng, &vmax).unwrap();
        let before = s.clone();
        let used = eval.used();
        let subset = [3, 7, 11];
        pso_step(&mut s, &KinematicParams::new(0.6, vmax), &mut eval, &mut rng, Some(&subset)).unwrap();
        assert_eq!(eval.used() - used, 3);
        for i in 0..20 {
            if !subset.contains(&i) {
                assert_eq!(s.particles[i], before.particles[i]);
            }
        }
    }

    #[test]
    fn step_stops_when_budget_runs_out() {
        let obj = sphere(2);
        let vmax = obj.bounds().velocity_cap(0.01);
        let mut rng = RngStream::new(3);
        let mut eval = Evaluator::new(&obj, 13);
        let mut s = initialize_swarm(&mut eval, 10, SwarmRole::Exploitation, &mut rng, &vmax).unwrap();
        let before = s.clone();
        let err = pso_step(&mut s, &KinematicParams::new(0.6, vmax), &mut eval, &mut rng, None).unwrap_err();
        assert_eq!(err, Error::BudgetExhausted { budget: 13, evaluated: 3 });
        assert_eq!(eval.used(), 13);
        assert_eq!(s.particles[5], before.particles[5]);
    }

    #[test]
    fn bad_subset_rejected() {
        let obj = sphere(1);
        let mut s = single(vec![0.0], vec![0.0], vec![0.0], &obj);
        let mut eval = Evaluator::new(&obj, 10);
        let params = KinematicParams::new(0.5, vec![1.0]);
        assert!(pso_step(&mut s, &params, &mut eval, &mut RngStream::new(0), Some(&[1])).is_err());
    }

    #[test]
    fn spawn_without_perturbation_sits_on_seed() {
        let obj = sphere(4);
        let vmax = obj.bounds().velocity_cap(0.01);
        let seed = vec![5.0, -5.0, 1.0, 0.0];
        let mut eval = Evaluator::new(&obj, 100);
        let mut rng = Fixed { uniform: 0.5, normal: 0.0 };
        let s = spawn_artificial_swarm(&seed, obj.value(&seed), 8, 0.1, &vmax, SwarmRole::Exploitation, &mut eval, &mut rng)
            .unwrap();
        assert_eq!(eval.used(), 8);
        assert!(s.particles.iter().all(|p| p.position == seed));
    }

    #[test]
    fn spawn_offset_arithmetic() {
        // dr = 0.1 * 0.5 = 0.05 on a width-200 box gives an offset of 10
        let obj = sphere(3);
        let vmax = obj.bounds().velocity_cap(0.01);
        let mut eval = Evaluator::new(&obj, 100);
        let mut rng = Fixed { uniform: 0.5, normal: 0.5 };
        let s = spawn_artificial_swarm(&[0.0; 3], 0.0, 2, 0.1, &vmax, SwarmRole::Exploitation, &mut eval, &mut rng)
            .unwrap();
        for p in &s.particles {
            for &x in &p.position {
                assert!((x - 10.0).abs() < 1e-12);
            }
        }
        // the seed (fitness 0) beats every spawned particle and is retained
        assert_eq!(s.global_best_fitness, 0.0);
        assert_eq!(s.global_best_position, vec![0.0; 3]);
    }

    #[test]
    fn spawn_rejects_short_budget() {
        let obj = sphere(2);
        let vmax = obj.bounds().velocity_cap(0.01);
        let mut eval = Evaluator::new(&obj, 5);
        let err = spawn_artificial_swarm(&[0.0; 2], 0.0, 6, 0.1, &vmax, SwarmRole::Convergence, &mut eval, &mut RngStream::new(1))
            .unwrap_err();
        assert!(matches!(err, Error::BudgetExhausted { .. }));
        assert_eq!(eval.used(), 0);
    }

    #[test]
    fn partial_zero_perturbation_lands_on_best() {
        let obj = sphere(3);
        let vmax = obj.bounds().velocity_cap(0.01);
        let mut rng = RngStream::new(8);
        let mut eval = Evaluator::new(&obj, 1000);
        let mut s = initialize_swarm(&mut eval, 10, SwarmRole::Exploitation, &mut rng, &vmax).unwrap();
        let best = s.global_best_position.clone();
        let rebuilt =
            partial_reconstruct(&mut s, 4, 0.15, &mut eval, &mut Fixed { uniform: 0.3, normal: 0.0 }).unwrap();
        assert_eq!(rebuilt.len(), 4);
        for &i in &rebuilt {
            assert_eq!(s.particles[i].position, best);
            assert_eq!(s.particles[i].velocity, vec![0.0; 3]);
        }
    }

    #[test]
    fn partial_single_dimension_arithmetic() {
        let obj = sphere(3);
        let mut eval = Evaluator::new(&obj, 100);
        let best = vec![50.0, 20.0, -30.0];
        let worse = Particle::at_rest(vec![90.0, 90.0, 90.0], obj.value(&[90.0; 3]));
        let good = Particle::at_rest(best.clone(), obj.value(&best));
        let mut s = Swarm::from_particles(vec![worse, good], SwarmRole::Exploitation).unwrap();
        // uniform 0.1 selects dimension 0; normal 1.0 with sigma 0.1 gives r = 0.1
        let mut rng = Fixed { uniform: 0.1, normal: 1.0 };
        let rebuilt = partial_reconstruct(&mut s, 1, 0.1, &mut eval, &mut rng).unwrap();
        assert_eq!(rebuilt, vec![0]);
        let p = &s.particles[0];
        assert!((p.position[0] - 70.0).abs() < 1e-12);
        assert_eq!(&p.position[1..], &best[1..]);
        assert_eq!(s.particles[1].position, best);
    }

    #[test]
    fn partial_changes_only_the_worst() {
        let obj = sphere(4);
        let vmax = obj.bounds().velocity_cap(0.01);
        let mut rng = RngStream::new(12);
        let mut eval = Evaluator::new(&obj, 1000);
        let mut s = initialize_swarm(&mut eval, 40, SwarmRole::Exploitation, &mut rng, &vmax).unwrap();
        let before = s.clone();
        let mut oracle: Vec<(f64, usize)> =
            before.particles.iter().enumerate().map(|(i, p)| (p.current_fitness, i)).collect();
        oracle.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
        let expected: Vec<usize> = oracle[..10].iter().map(|&(_, i)| i).collect();
        let used = eval.used();
        let rebuilt = partial_reconstruct(&mut s, 10, 0.2, &mut eval, &mut rng).unwrap();
        assert_eq!(rebuilt, expected);
        assert_eq!(eval.used() - used, 10);
        for i in 0..40 {
            if !expected.contains(&i) {
                assert_eq!(s.particles[i], before.particles[i]);
            }
        }
    }

    #[test]
    fn worst_ties_prefer_lower_index() {
        let ps = vec![
            Particle::at_rest(vec![0.0], 1.0),
            Particle::at_rest(vec![0.0], 3.0),
            Particle::at_rest(vec![0.0], 3.0),
            Particle::at_rest(vec![0.0], 2.0),
        ];
        let s = Swarm::from_particles(ps, SwarmRole::Exploitation).unwrap();
        assert_eq!(worst_particles(&s, 3), vec![1, 2, 3]);
    }

    #[test]
    fn partial_rejects_oversized_count() {
        let obj = sphere(1);
        let mut s = single(vec![0.0], vec![0.0], vec![0.0], &obj);
        let mut eval = Evaluator::new(&obj, 10);
        assert!(partial_reconstruct(&mut s, 2, 0.1, &mut eval, &mut RngStream::new(0)).is_err());
    }

    #[test]
    fn full_collapse_and_retention() {
        let obj = sphere(5);
        let vmax = obj.bounds().velocity_cap(0.01);
        let mut rng = RngStream::new(4);
        let mut eval = Evaluator::new(&obj, 1000);
        let mut s = initialize_swarm(&mut eval, 20, SwarmRole::Convergence, &mut rng, &vmax).unwrap();
        let best_before = s.global_best_fitness;
        full_reconstruct(&mut s, 0.2, &mut eval, &mut Fixed { uniform: 0.0, normal: 0.0 }).unwrap();
        let (ep, _) = position_diversity(&s.particles, obj.bounds(), 10).unwrap();
        assert_eq!(ep, 0.0);
        assert!(s.global_best_fitness <= best_before);

        let best_before = s.global_best_fitness;
        full_reconstruct(&mut s, 0.2, &mut eval, &mut rng).unwrap();
        assert!(s.global_best_fitness <= best_before);
        for p in &s.particles {
            assert!(obj.bounds().contains(&p.position));
            assert_eq!(p.best_position, p.position);
        }
    }
}
