//! Scalar control laws: evolution rate, the three sigmoid parameter
//! mappings and the convergence-phase reconstruction probability.

use std::collections::VecDeque;

/// Guard added to `|bf(t-1)|` in the evolution-rate denominator.
pub const EVOLUTION_RATE_EPS: f64 = 1e-12;

/// Default constants `(a, b)` of the exploration inertia law
/// `1 / (1 + a * exp(-b * E))`.
pub const EXPLORATION_OMEGA_A: f64 = 0.67;
pub const EXPLORATION_OMEGA_B: f64 = 2.67;
pub const EXPLORATION_OMEGA_RANGE: (f64, f64) = (0.6, 0.9);

/// Global-best fitness per iteration of one swarm, `bf(1), bf(2), ...`.
///
/// Only `bf(1)` and the most recent `K + 1` values are retained.
#[derive(Debug, Clone)]
pub struct FitnessHistory {
    window: usize,
    first: Option<f64>,
    recent: VecDeque<f64>,
    t: usize,
}

impl FitnessHistory {
    pub fn new(window: usize) -> Self {
        let window = window.max(1);
        Self {
            window,
            first: None,
            recent: VecDeque::with_capacity(window + 1),
            t: 0,
        }
    }

    /// Append `bf(t + 1)`.
    pub fn push(&mut self, best: f64) {
        debug_assert!(
            self.recent.back().is_none_or(|&last| best <= last || best.is_nan()),
            "global best must not worsen"
        );
        if self.first.is_none() {
            self.first = Some(best);
        }
        if self.recent.len() == self.window + 1 {
            self.recent.pop_front();
        }
        self.recent.push_back(best);
        self.t += 1;
    }

    /// Index of the latest entry; 0 while empty.
    pub fn t(&self) -> usize {
        self.t
    }

    pub fn window(&self) -> usize {
        self.window
    }

    /// `bf(i)` for `i` within the retained range.
    pub fn get(&self, i: usize) -> Option<f64> {
        if i == 0 || i > self.t {
            return None;
        }
        if i == 1 {
            return self.first;
        }
        let oldest = self.t + 1 - self.recent.len();
        if i < oldest {
            return None;
        }
        self.recent.get(i - oldest).copied()
    }

    pub fn latest(&self) -> Option<f64> {
        self.recent.back().copied()
    }

    pub fn clear(&mut self) {
        self.first = None;
        self.recent.clear();
        self.t = 0;
    }
}

/// Evolution rate `Er(t)` at the latest entry of `history`:
///
/// * `t = 1`: 1
/// * `1 < t < K`: `(bf(1) - bf(t)) / (t * bf(t-1))`
/// * `t >= K`: `(bf(t-K) - bf(t)) / (K * bf(t-1))`
///
/// The denominator uses `|bf(t-1)| + EVOLUTION_RATE_EPS`. At `t = K` the
/// missing `bf(0)` is replaced by `bf(1)`. An empty history yields 1.
pub fn evolution_rate(history: &FitnessHistory) -> f64 {
    let t = history.t();
    if t <= 1 {
        return 1.0;
    }
    let k = history.window();
    let current = history.get(t).expect("latest entry retained");
    let prev = history.get(t - 1).expect("previous entry retained");
    let (reference, span) = if t >= k {
        // there is no bf(0); at t == K the window starts from bf(1)
        (history.get((t - k).max(1)).expect("window retained"), k)
    } else {
        (history.get(1).expect("first entry retained"), t)
    };
    (reference - current) / (span as f64 * (prev.abs() + EVOLUTION_RATE_EPS))
}

/// Raw exploration inertia `1 / (1 + a * exp(-b * E))`, before clamping.
pub fn omega_exploration_raw(e: f64, a: f64, b: f64) -> f64 {
    1.0 / (1.0 + a * (-b * e.clamp(0.0, 1.0)).exp())
}

/// Exploration inertia with the default constants, clamped to `[0.6, 0.9]`.
pub fn omega_exploration(e: f64) -> f64 {
    omega_exploration_with(e, EXPLORATION_OMEGA_A, EXPLORATION_OMEGA_B)
}

pub fn omega_exploration_with(e: f64, a: f64, b: f64) -> f64 {
    let (lo, hi) = EXPLORATION_OMEGA_RANGE;
    omega_exploration_raw(e, a, b).clamp(lo, hi)
}

/// Exploitation and convergence inertia `1 / (1 + 4^-E)`, spanning `[0.5, 0.8]`.
pub fn omega_standard(e: f64) -> f64 {
    let e = e.clamp(0.0, 1.0);
    1.0 / (1.0 + (-(4f64.ln()) * e).exp())
}

/// Reconstruction spread `1 / (1 + 9 (4/9)^E)`, spanning `[0.1, 0.2]`.
pub fn sigma_reconstruction(e: f64) -> f64 {
    let e = e.clamp(0.0, 1.0);
    1.0 / (1.0 + 9.0 * ((4f64.ln() - 9f64.ln()) * e).exp())
}

/// Probability `1 / (1 + exp(0.01 * N_total - N_ne))` of rebuilding the
/// convergence swarm after `stagnant` non-improving iterations.
pub fn reconstruct_probability(n_total: usize, stagnant: usize) -> f64 {
    let x = 0.01 * n_total as f64 - stagnant as f64;
    if x > 700.0 {
        0.0
    } else if x < -700.0 {
        1.0
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// Consecutive stagnant iterations `N_ne` of the convergence swarm.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StagnationCounter {
    count: usize,
}

impl StagnationCounter {
    pub fn count(&self) -> usize {
        self.count
    }

    /// Count one iteration whose evolution rate was `rate`. Progress at or
    /// above `threshold` breaks the streak.
    pub fn observe(&mut self, rate: f64, threshold: f64) {
        if rate < threshold {
            self.count += 1;
        } else {
            self.count = 0;
        }
    }

    pub fn reset(&mut self) {
        self.count = 0;
    }
}
