//! Global-best PSO with inertia decreasing linearly from 0.9 to 0.4, the
//! comparison baseline.

use crate::adaptation::{evolution_rate, FitnessHistory};
use crate::diversity::hybrid_diversity;
use crate::error::Result;
use crate::model::{initialize_swarm, Evaluator, Objective, SwarmRole};
use crate::ops::{pso_step, KinematicParams};
use crate::rng::RngStream;

use super::config::AmpsoConfig;
use super::result::{IterationView, Phase, PhaseSpan, RunObserver, RunResult, TracePoint};

pub const GPSO_OMEGA_START: f64 = 0.9;
pub const GPSO_OMEGA_END: f64 = 0.4;

/// Inertia at 1-based iteration `k` of `n_total`.
pub fn gpso_inertia(k: usize, n_total: usize) -> f64 {
    let frac = (k as f64 / n_total.max(1) as f64).min(1.0);
    GPSO_OMEGA_START - (GPSO_OMEGA_START - GPSO_OMEGA_END) * frac
}

/// Run the baseline with a swarm of `config.n_c` particles and the same
/// budget, velocity cap and acceleration constants as the multi-swarm run.
pub fn run_gpso<O: Objective + ?Sized>(config: &AmpsoConfig, objective: &O, seed: u64) -> Result<RunResult> {
    run_gpso_observed(config, objective, seed, &mut ())
}

pub fn run_gpso_observed<O, Obs>(
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
    let optimum = objective.optimum_value();
    let mut eval = Evaluator::new(objective, config.fe_budget);
    let mut rng = RngStream::new(seed);
    let vmax = objective.bounds().velocity_cap(config.vmax_factor);
    let n_total = config.n_total();
    let mut trace = Vec::new();
    let mut phase_log = Vec::new();
    let mut iterations = 0;

    let mut swarm = None;
    if eval.can_afford(config.n_c) {
        let s = initialize_swarm(&mut eval, config.n_c, SwarmRole::Convergence, &mut rng, &vmax)?;
        observer.on_spawn(Phase::Global, eval.used());
        phase_log.push(PhaseSpan {
            phase: Phase::Global,
            start_fe: 0,
            end_fe: eval.used(),
        });
        swarm = Some(s);
    }

    let mut history = FitnessHistory::new(config.k);
    if let Some(swarm) = swarm.as_mut() {
        let mut params = KinematicParams {
            omega: GPSO_OMEGA_START,
            c1: config.c1,
            c2: config.c2,
            vmax: vmax.clone(),
        };
        while eval.can_afford(swarm.len()) {
            let fe_before = eval.used();
            iterations += 1;
            let e = hybrid_diversity(&swarm.particles, objective.bounds(), config.q)?.hybrid;
            params.omega = gpso_inertia(iterations, n_total);
            pso_step(swarm, &params, &mut eval, &mut rng, None)?;
            history.push(swarm.global_best_fitness);
            let point = TracePoint {
                fe: eval.used(),
                iteration: iterations,
                phase: Phase::Global,
                best_error: swarm.global_best_fitness - optimum,
                diversity: e,
                omega: params.omega,
                er: evolution_rate(&history),
            };
            observer.on_iteration(&IterationView {
                point: &point,
                iteration_fes: point.fe - fe_before,
                swarms: std::slice::from_ref(swarm),
            });
            trace.push(point);
        }
        if let Some(span) = phase_log.last_mut() {
            span.end_fe = eval.used();
        }
    }

    let (best_position, best_fitness) = swarm
        .map(|s| (s.global_best_position, s.global_best_fitness))
        .unwrap_or((Vec::new(), f64::INFINITY));
    Ok(RunResult {
        seed,
        best_error: best_fitness - optimum,
        best_fitness,
        best_position,
        fe_used: eval.used(),
        fe_budget: config.fe_budget,
        iterations,
        trace,
        phase_log,
    })
}
