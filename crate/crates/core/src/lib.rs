//! Adaptive multi-swarm particle swarm optimization.
//!
//! A run moves through three phases. Short-lived exploration sub-swarms scan
//! the search space, an exploitation swarm is spawned around the best point
//! they found, and once exploitation stalls a final convergence swarm refines
//! the incumbent. Inertia weights, reconstruction spreads and restart
//! probabilities are driven by histogram-entropy diversity and by the
//! evolution rate of the global best.
//!
//! ```
//! use ampso::{run_ampso, AmpsoConfig, BenchmarkFunction, ObjectiveSpec};
//!
//! let objective = ObjectiveSpec::new(BenchmarkFunction::Sphere, 2).unwrap();
//! let mut config = AmpsoConfig::for_dimension(2);
//! config.fe_budget = 4_000;
//! let result = run_ampso(&config, &objective, 7).unwrap();
//! assert!(result.fe_used <= 4_000);
//! ```

pub mod adaptation;
pub mod benchmarks;
pub mod diversity;
pub mod error;
pub mod harness;
pub mod model;
pub mod ops;
pub mod optimizer;
pub mod rng;

pub use benchmarks::{BenchmarkFunction, ObjectiveSpec, Rotation};
pub use error::{Error, Result};
pub use model::{Bounds, Evaluator, Objective, Particle, Swarm, SwarmRole};
pub use optimizer::{
    run_ampso, run_ampso_observed, run_gpso, run_gpso_observed, Algorithm, AmpsoConfig, Phase,
    RunObserver, RunResult, TracePoint,
};
pub use rng::{RandomSource, RngStream};
