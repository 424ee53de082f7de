//! The multi-swarm controller and the global-best baseline.

mod ampso;
mod config;
mod gpso;
mod result;

pub use ampso::{exploration_iteration, run_ampso, run_ampso_observed, ExplorationStep};
pub use config::{AmpsoConfig, FES_PER_DIMENSION};
pub use gpso::{gpso_inertia, run_gpso, run_gpso_observed, GPSO_OMEGA_END, GPSO_OMEGA_START};
pub use result::{IterationView, Phase, PhaseSpan, RunObserver, RunResult, TracePoint};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::Objective;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Ampso,
    Gpso,
}

impl Algorithm {
    pub const ALL: [Algorithm; 2] = [Algorithm::Ampso, Algorithm::Gpso];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Ampso => "ampso",
            Algorithm::Gpso => "gpso",
        }
    }

    pub fn run<O: Objective + ?Sized>(self, config: &AmpsoConfig, objective: &O, seed: u64) -> Result<RunResult> {
        match self {
            Algorithm::Ampso => run_ampso(config, objective, seed),
            Algorithm::Gpso => run_gpso(config, objective, seed),
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "ampso" => Ok(Algorithm::Ampso),
            "gpso" => Ok(Algorithm::Gpso),
            other => Err(format!("unknown algorithm `{other}`; available: ampso, gpso")),
        }
    }
}
