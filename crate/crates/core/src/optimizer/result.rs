use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::Swarm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Phase {
    Exploration,
    Exploitation,
    Convergence,
    /// The single swarm of the global-best baseline.
    Global,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Exploration => "Exploration",
            Phase::Exploitation => "Exploitation",
            Phase::Convergence => "Convergence",
            Phase::Global => "Global",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// State after one controller iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    /// Evaluations used so far, including any spawn that preceded the iteration.
    pub fe: usize,
    /// Total iterations consumed so far (`N_i`).
    pub iteration: usize,
    pub phase: Phase,
    /// Best-ever error `f - f*`.
    pub best_error: f64,
    /// Hybrid diversity `E` that drove the iteration (mean over sub-swarms
    /// during exploration).
    pub diversity: f64,
    /// Inertia weight used (mean over sub-swarms during exploration).
    pub omega: f64,
    /// Evolution rate of the active swarm after the iteration.
    pub er: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseSpan {
    pub phase: Phase,
    pub start_fe: usize,
    pub end_fe: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub seed: u64,
    pub best_position: Vec<f64>,
    /// Raw objective value at `best_position`.
    pub best_fitness: f64,
    pub best_error: f64,
    pub fe_used: usize,
    pub fe_budget: usize,
    pub iterations: usize,
    pub trace: Vec<TracePoint>,
    pub phase_log: Vec<PhaseSpan>,
}

impl RunResult {
    /// Phase sequence as a compact string such as `"EIEIC"`.
    pub fn phase_signature(&self) -> String {
        self.phase_log
            .iter()
            .map(|s| match s.phase {
                Phase::Exploration => 'E',
                Phase::Exploitation => 'I',
                Phase::Convergence => 'C',
                Phase::Global => 'G',
            })
            .collect()
    }
}

/// What an observer sees after each iteration.
pub struct IterationView<'a> {
    pub point: &'a TracePoint,
    /// Evaluations spent by this iteration alone.
    pub iteration_fes: usize,
    /// Swarms active in the iteration (all sub-swarms during exploration).
    pub swarms: &'a [Swarm],
}

/// Hooks into a running optimizer, for instrumentation and tests.
pub trait RunObserver {
    /// A new swarm was created; `fe` is the evaluation count after creating it.
    fn on_spawn(&mut self, _phase: Phase, _fe: usize) {}

    fn on_iteration(&mut self, _view: &IterationView<'_>) {}
}

impl RunObserver for () {}
