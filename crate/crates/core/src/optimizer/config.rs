use serde::{Deserialize, Serialize};

use crate::adaptation::{EXPLORATION_OMEGA_A, EXPLORATION_OMEGA_B};
use crate::diversity::DEFAULT_BINS;
use crate::error::{Error, Result};
use crate::ops::{DEFAULT_C1, DEFAULT_C2, DEFAULT_SPAWN_SIGMA, DEFAULT_VMAX_FACTOR};

/// Evaluations per dimension in the default budget.
pub const FES_PER_DIMENSION: usize = 10_000;

/// Tunables of the multi-swarm optimizer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AmpsoConfig {
    /// Total size of the exploration swarm.
    pub n_er: usize,
    /// Size of each exploration sub-swarm; must divide `n_er`.
    pub sub_swarm_size: usize,
    /// Exploitation swarm size.
    pub n_ei: usize,
    /// Convergence swarm size. Also sets the iteration budget
    /// `N_total = fe_budget / n_c`.
    pub n_c: usize,
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    /// Evolution-rate threshold below which a swarm counts as stagnant.
    pub beta: f64,
    /// Evolution-rate window.
    pub k: usize,
    /// Entropy bin count.
    pub q: usize,
    pub c1: f64,
    pub c2: f64,
    pub vmax_factor: f64,
    pub fe_budget: usize,
    /// Relative Gaussian spread used when spawning artificial swarms.
    pub spawn_sigma: f64,
    pub explore_omega_a: f64,
    pub explore_omega_b: f64,
}

impl Default for AmpsoConfig {
    fn default() -> Self {
        Self::for_dimension(10)
    }
}

impl AmpsoConfig {
    /// Defaults with a budget of `10000 * dim` evaluations.
    pub fn for_dimension(dim: usize) -> Self {
        Self {
            n_er: 10,
            sub_swarm_size: 5,
            n_ei: 40,
            n_c: 40,
            alpha1: 0.02,
            alpha2: 0.2,
            alpha3: 0.25,
            beta: 0.001,
            k: 50,
            q: DEFAULT_BINS,
            c1: DEFAULT_C1,
            c2: DEFAULT_C2,
            vmax_factor: DEFAULT_VMAX_FACTOR,
            fe_budget: FES_PER_DIMENSION * dim,
            spawn_sigma: DEFAULT_SPAWN_SIGMA,
            explore_omega_a: EXPLORATION_OMEGA_A,
            explore_omega_b: EXPLORATION_OMEGA_B,
        }
    }

    /// Iteration budget `N_total = fe_budget / n_c`.
    pub fn n_total(&self) -> usize {
        self.fe_budget / self.n_c.max(1)
    }

    /// Exploration iterations per block, `N_1 = round(alpha1 * N_total)`.
    pub fn n1(&self) -> usize {
        (self.alpha1 * self.n_total() as f64).round() as usize
    }

    /// Exploitation iteration cap, `N_2 = round(alpha2 * N_total)`.
    pub fn n2(&self) -> usize {
        (self.alpha2 * self.n_total() as f64).round() as usize
    }

    /// Particles rebuilt per exploitation iteration, `N_s = round(alpha3 * n_ei)`.
    pub fn n_s(&self) -> usize {
        (self.alpha3 * self.n_ei as f64).round() as usize
    }

    pub fn sub_swarm_count(&self) -> usize {
        self.n_er / self.sub_swarm_size.max(1)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidConfig(msg));
        if self.n_er == 0 || self.sub_swarm_size == 0 || self.n_ei == 0 || self.n_c == 0 {
            return fail("swarm sizes must be positive".into());
        }
        if !self.n_er.is_multiple_of(self.sub_swarm_size) {
            return fail(format!(
                "sub_swarm_size {} does not divide n_er {}",
                self.sub_swarm_size, self.n_er
            ));
        }
        for (name, a) in [("alpha1", self.alpha1), ("alpha2", self.alpha2), ("alpha3", self.alpha3)] {
            if !(0.0..=1.0).contains(&a) {
                return fail(format!("{name} must lie in [0, 1], got {a}"));
            }
        }
        let n_s = self.n_s();
        if n_s < 1 || n_s >= self.n_ei {
            return fail(format!("N_s = {n_s} must satisfy 1 <= N_s < n_ei = {}", self.n_ei));
        }
        if self.n1() == 0 || self.n2() == 0 {
            return fail(format!(
                "budget {} too small: N_1 = {} and N_2 = {} must both be at least 1",
                self.fe_budget,
                self.n1(),
                self.n2()
            ));
        }
        if self.q < 2 {
            return fail(format!("q must be at least 2, got {}", self.q));
        }
        if self.k == 0 {
            return fail("k must be positive".into());
        }
        if !(self.beta >= 0.0) {
            return fail(format!("beta must be non-negative, got {}", self.beta));
        }
        if !(self.vmax_factor > 0.0) {
            return fail(format!("vmax_factor must be positive, got {}", self.vmax_factor));
        }
        if !(self.spawn_sigma > 0.0) {
            return fail(format!("spawn_sigma must be positive, got {}", self.spawn_sigma));
        }
        if !(self.c1 >= 0.0 && self.c2 >= 0.0) {
            return fail("c1 and c2 must be non-negative".into());
        }
        if !(self.explore_omega_a.is_finite() && self.explore_omega_b.is_finite()) {
            return fail("exploration omega constants must be finite".into());
        }
        Ok(())
    }
}
