//! Three-phase multi-swarm controller.
//!
//! While fewer than `N_total / 3` iterations have been consumed, the
//! controller alternates two phases:
//!
//! * **Exploration**: `n_er / sub_swarm_size` independent sub-swarms are
//!   scattered over the box and iterate `N_1` times, each with its own global
//!   best and an inertia weight taken from its own hybrid diversity.
//! * **Exploitation**: an artificial swarm of `n_ei` particles is spawned
//!   around the best exploration particle. Every iteration rebuilds the `N_s`
//!   worst particles and moves the other `n_ei - N_s`, so each iteration costs
//!   exactly `n_ei` evaluations. The phase ends after `N_2` iterations or
//!   when the evolution rate drops below `beta`.
//!
//! Then a convergence swarm of `n_c` particles is spawned around the best
//! solution seen so far and runs until the budget cannot pay for another
//! iteration. Each convergence iteration either rebuilds the whole swarm
//! (with a probability that grows with consecutive stagnant iterations) or
//! moves every particle.
//!
//! The budget is checked before each iteration and spawn, so a run stops
//! with fewer than `n_c` evaluations unspent.

use crate::adaptation::{
    evolution_rate, omega_exploration_with, omega_standard, reconstruct_probability,
    sigma_reconstruction, FitnessHistory, StagnationCounter,
};
use crate::diversity::hybrid_diversity;
use crate::error::{Error, Result};
use crate::model::{initialize_swarm, Evaluator, Objective, Swarm, SwarmRole};
use crate::ops::{full_reconstruct, partial_reconstruct, pso_step, spawn_artificial_swarm, KinematicParams};
use crate::rng::{RandomSource, RngStream};

use super::config::AmpsoConfig;
use super::result::{IterationView, Phase, PhaseSpan, RunObserver, RunResult, TracePoint};

pub fn run_ampso<O: Objective + ?Sized>(config: &AmpsoConfig, objective: &O, seed: u64) -> Result<RunResult> {
    run_ampso_observed(config, objective, seed, &mut ())
}

pub fn run_ampso_observed<O, Obs>(
    config: &AmpsoConfig,
    objective: &O,
    seed: u64,
    observer: &mut Obs,
) -> Result<RunResult>
where
    O: Objective + ?Sized,
    Obs: RunObserver + ?Sized,
{
    config.validate()?;
    let mut run = Controller::new(config, objective, seed, observer);
    run.execute()?;
    Ok(run.finish())
}

/// Diversity and inertia averaged over the sub-swarms of one exploration
/// iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExplorationStep {
    pub diversity: f64,
    pub omega: f64,
}

/// Move every sub-swarm once. Sub-swarms share nothing but the evaluator and
/// the random stream; each uses its own global best and its own diversity.
pub fn exploration_iteration<O, R>(
    subswarms: &mut [Swarm],
    config: &AmpsoConfig,
    vmax: &[f64],
    eval: &mut Evaluator<'_, O>,
    rng: &mut R,
) -> Result<ExplorationStep>
where
    O: Objective + ?Sized,
    R: RandomSource,
{
    let bounds = eval.bounds();
    let mut params = KinematicParams {
        omega: 0.0,
        c1: config.c1,
        c2: config.c2,
        vmax: vmax.to_vec(),
    };
    let (mut e_sum, mut w_sum) = (0.0, 0.0);
    for sub in subswarms.iter_mut() {
        let e = hybrid_diversity(&sub.particles, bounds, config.q)?.hybrid;
        params.omega = omega_exploration_with(e, config.explore_omega_a, config.explore_omega_b);
        pso_step(sub, &params, eval, rng, None)?;
        e_sum += e;
        w_sum += params.omega;
    }
    let n = subswarms.len().max(1) as f64;
    Ok(ExplorationStep {
        diversity: e_sum / n,
        omega: w_sum / n,
    })
}

struct Incumbent {
    position: Vec<f64>,
    fitness: f64,
}

impl Incumbent {
    fn offer(&mut self, swarm: &Swarm) {
        if swarm.global_best_fitness < self.fitness || self.position.is_empty() {
            self.fitness = swarm.global_best_fitness;
            self.position.clone_from(&swarm.global_best_position);
        }
    }
}

struct Controller<'a, O: Objective + ?Sized, Obs: RunObserver + ?Sized> {
    cfg: &'a AmpsoConfig,
    eval: Evaluator<'a, O>,
    rng: RngStream,
    observer: &'a mut Obs,
    vmax: Vec<f64>,
    best: Incumbent,
    n_i: usize,
    trace: Vec<TracePoint>,
    phase_log: Vec<PhaseSpan>,
    history: FitnessHistory,
}

impl<'a, O, Obs> Controller<'a, O, Obs>
where
    O: Objective + ?Sized,
    Obs: RunObserver + ?Sized,
{
    fn new(cfg: &'a AmpsoConfig, objective: &'a O, seed: u64, observer: &'a mut Obs) -> Self {
        Self {
            cfg,
            eval: Evaluator::new(objective, cfg.fe_budget),
            rng: RngStream::new(seed),
            observer,
            vmax: objective.bounds().velocity_cap(cfg.vmax_factor),
            best: Incumbent {
                position: Vec::new(),
                fitness: f64::INFINITY,
            },
            n_i: 0,
            trace: Vec::new(),
            phase_log: Vec::new(),
            history: FitnessHistory::new(cfg.k),
        }
    }

    fn execute(&mut self) -> Result<()> {
        loop {
            let Some(subswarms) = self.explore()? else {
                return Ok(());
            };
            let seed = subswarms
                .iter()
                .min_by(|a, b| a.global_best_fitness.total_cmp(&b.global_best_fitness))
                .map(|s| (s.global_best_position.clone(), s.global_best_fitness))
                .ok_or(Error::Empty("exploration swarm"))?;
            if !self.exploit(&seed.0, seed.1)? {
                return Ok(());
            }
            if 3 * self.n_i > self.cfg.n_total() {
                break;
            }
        }
        self.converge()
    }

    fn finish(self) -> RunResult {
        let optimum = self.eval.objective().optimum_value();
        RunResult {
            seed: self.rng.seed(),
            best_error: self.best.fitness - optimum,
            best_fitness: self.best.fitness,
            best_position: self.best.position,
            fe_used: self.eval.used(),
            fe_budget: self.cfg.fe_budget,
            iterations: self.n_i,
            trace: self.trace,
            phase_log: self.phase_log,
        }
    }

    fn begin(&mut self, phase: Phase) {
        let fe = self.eval.used();
        self.phase_log.push(PhaseSpan {
            phase,
            start_fe: fe,
            end_fe: fe,
        });
        self.history.clear();
    }

    fn end(&mut self) {
        if let Some(span) = self.phase_log.last_mut() {
            span.end_fe = self.eval.used();
        }
    }

    fn params(&self, omega: f64) -> KinematicParams {
        KinematicParams {
            omega,
            c1: self.cfg.c1,
            c2: self.cfg.c2,
            vmax: self.vmax.clone(),
        }
    }

    /// Record the iteration that just finished and return its evolution rate.
    fn record(
        &mut self,
        phase: Phase,
        swarms: &[Swarm],
        fe_before: usize,
        diversity: f64,
        omega: f64,
    ) -> f64 {
        self.n_i += 1;
        let swarm_best = swarms
            .iter()
            .map(|s| s.global_best_fitness)
            .fold(f64::INFINITY, f64::min);
        for s in swarms {
            self.best.offer(s);
        }
        self.history.push(swarm_best);
        let er = evolution_rate(&self.history);
        let point = TracePoint {
            fe: self.eval.used(),
            iteration: self.n_i,
            phase,
            best_error: self.best.fitness - self.eval.objective().optimum_value(),
            diversity,
            omega,
            er,
        };
        self.observer.on_iteration(&IterationView {
            point: &point,
            iteration_fes: point.fe - fe_before,
            swarms,
        });
        self.trace.push(point);
        er
    }

    /// Scatter fresh sub-swarms and run one exploration block. `None` when
    /// the budget ran out.
    fn explore(&mut self) -> Result<Option<Vec<Swarm>>> {
        let cfg = self.cfg;
        if !self.eval.can_afford(cfg.n_er) {
            return Ok(None);
        }
        self.begin(Phase::Exploration);
        let mut subswarms = Vec::with_capacity(cfg.sub_swarm_count());
        for _ in 0..cfg.sub_swarm_count() {
            let s = initialize_swarm(
                &mut self.eval,
                cfg.sub_swarm_size,
                SwarmRole::ExplorationSub,
                &mut self.rng,
                &self.vmax,
            )?;
            self.best.offer(&s);
            subswarms.push(s);
        }
        self.observer.on_spawn(Phase::Exploration, self.eval.used());

        for _ in 0..cfg.n1() {
            if !self.eval.can_afford(cfg.n_er) {
                self.end();
                return Ok(None);
            }
            let fe_before = self.eval.used();
            let step = exploration_iteration(&mut subswarms, cfg, &self.vmax, &mut self.eval, &mut self.rng)?;
            self.record(Phase::Exploration, &subswarms, fe_before, step.diversity, step.omega);
        }
        self.end();
        Ok(Some(subswarms))
    }

    /// Spawn and run one exploitation swarm. `false` when the budget ran out.
    fn exploit(&mut self, seed: &[f64], seed_fitness: f64) -> Result<bool> {
        let cfg = self.cfg;
        if !self.eval.can_afford(cfg.n_ei) {
            return Ok(false);
        }
        self.begin(Phase::Exploitation);
        let mut swarm = spawn_artificial_swarm(
            seed,
            seed_fitness,
            cfg.n_ei,
            cfg.spawn_sigma,
            &self.vmax,
            SwarmRole::Exploitation,
            &mut self.eval,
            &mut self.rng,
        )?;
        self.best.offer(&swarm);
        self.observer.on_spawn(Phase::Exploitation, self.eval.used());

        let n_s = cfg.n_s();
        for _t in 1..=cfg.n2() {
            if !self.eval.can_afford(cfg.n_ei) {
                self.end();
                return Ok(false);
            }
            let fe_before = self.eval.used();
            let e = hybrid_diversity(&swarm.particles, self.eval.bounds(), cfg.q)?.hybrid;
            let omega = omega_standard(e);
            let sigma = sigma_reconstruction(e);

            let rebuilt = partial_reconstruct(&mut swarm, n_s, sigma, &mut self.eval, &mut self.rng)?;
            let mut rest: Vec<usize> = (0..swarm.len()).filter(|i| !rebuilt.contains(i)).collect();
            self.rng.shuffle(&mut rest);
            pso_step(&mut swarm, &self.params(omega), &mut self.eval, &mut self.rng, Some(&rest))?;

            let er = self.record(Phase::Exploitation, std::slice::from_ref(&swarm), fe_before, e, omega);
            if er < cfg.beta {
                break;
            }
        }
        self.end();
        Ok(true)
    }

    fn converge(&mut self) -> Result<()> {
        let cfg = self.cfg;
        if !self.eval.can_afford(cfg.n_c) || self.best.position.is_empty() {
            return Ok(());
        }
        self.begin(Phase::Convergence);
        let seed = self.best.position.clone();
        let mut swarm = spawn_artificial_swarm(
            &seed,
            self.best.fitness,
            cfg.n_c,
            cfg.spawn_sigma,
            &self.vmax,
            SwarmRole::Convergence,
            &mut self.eval,
            &mut self.rng,
        )?;
        self.best.offer(&swarm);
        self.observer.on_spawn(Phase::Convergence, self.eval.used());

        let n_total = cfg.n_total();
        let mut stagnation = StagnationCounter::default();
        while self.eval.can_afford(cfg.n_c) {
            let fe_before = self.eval.used();
            let e = hybrid_diversity(&swarm.particles, self.eval.bounds(), cfg.q)?.hybrid;
            let omega = omega_standard(e);
            let sigma = sigma_reconstruction(e);

            let p_rebuild = reconstruct_probability(n_total, stagnation.count());
            let rebuild = self.rng.uniform() < p_rebuild;
            if rebuild {
                full_reconstruct(&mut swarm, sigma, &mut self.eval, &mut self.rng)?;
            } else {
                pso_step(&mut swarm, &self.params(omega), &mut self.eval, &mut self.rng, None)?;
            }

            let er = self.record(Phase::Convergence, std::slice::from_ref(&swarm), fe_before, e, omega);
            if rebuild {
                stagnation.reset();
            } else {
                stagnation.observe(er, cfg.beta);
            }
        }
        self.end();
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::{BenchmarkFunction, ObjectiveSpec};

    fn small_config(dim: usize) -> AmpsoConfig {
        AmpsoConfig::for_dimension(dim)
    }

    #[test]
    fn rejects_invalid_config_before_evaluating() {
        let obj = ObjectiveSpec::new(BenchmarkFunction::Sphere, 2).unwrap();
        let mut cfg = small_config(2);
        cfg.sub_swarm_size = 3;
        assert!(matches!(run_ampso(&cfg, &obj, 1), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn sphere_run_respects_budget_and_improves() {
        let obj = ObjectiveSpec::new(BenchmarkFunction::Sphere, 2).unwrap();
        let cfg = small_config(2);
        let r = run_ampso(&cfg, &obj, 7).unwrap();
        assert!(r.fe_used <= cfg.fe_budget);
        assert!(r.fe_used > cfg.fe_budget - cfg.n_c);
        assert!(r.best_error < 1e-3, "{}", r.best_error);
        assert_eq!(obj.value(&r.best_position), r.best_fitness);
    }

    #[test]
    fn same_seed_same_run() {
        let obj = ObjectiveSpec::new(BenchmarkFunction::Rastrigin, 3).unwrap();
        let cfg = small_config(3);
        let a = run_ampso(&cfg, &obj, 99).unwrap();
        let b = run_ampso(&cfg, &obj, 99).unwrap();
        assert_eq!(a, b);
        let c = run_ampso(&cfg, &obj, 100).unwrap();
        assert_ne!(a.trace, c.trace);
    }

    #[test]
    fn phase_signature_shape() {
        let obj = ObjectiveSpec::new(BenchmarkFunction::Ackley, 2).unwrap();
        let r = run_ampso(&small_config(2), &obj, 3).unwrap();
        let sig = r.phase_signature();
        assert!(sig.ends_with('C'), "{sig}");
        let head = &sig[..sig.len() - 1];
        assert!(!head.is_empty() && head.len() % 2 == 0, "{sig}");
        assert!(head.as_bytes().chunks(2).all(|c| c == b"EI"), "{sig}");
    }

    #[test]
    fn tiny_budget_stops_cleanly() {
        let obj = ObjectiveSpec::new(BenchmarkFunction::Sphere, 1).unwrap();
        let mut cfg = small_config(1);
        cfg.fe_budget = 2000;
        let r = run_ampso(&cfg, &obj, 1).unwrap();
        assert!(r.fe_used <= 2000 && r.fe_used > 2000 - cfg.n_c);
    }
}
