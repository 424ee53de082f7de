//! Swarm diversity measures.
//!
//! The controller is driven by the hybrid entropy `E = (E_p + E_f) / 2`:
//! `E_p` averages per-dimension histogram entropies of the particle
//! coordinates binned over the full search box, and `E_f` is the histogram
//! entropy of the current fitness values binned over their observed range.
//! Entropies use logarithm base `Q` (the bin count), so each lies in `[0, 1]`.
//!
//! The two distance-based measures (`adap_*`) are kept as diagnostics.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Bounds, Particle};

pub const DEFAULT_BINS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiversityReading {
    /// Position entropy `E_p`.
    pub position: f64,
    /// Fitness entropy `E_f`.
    pub fitness: f64,
    /// Hybrid `E = (E_p + E_f) / 2`.
    pub hybrid: f64,
    /// Per-dimension position entropies `E_d`.
    pub per_dimension: Vec<f64>,
}

/// Normalized Shannon entropy of `values` binned into `bins` equal parts of
/// `[lo, hi]`. Values outside the range fall in the nearest end bin. A
/// degenerate range (`hi == lo`) has entropy 0.
pub fn histogram_entropy(values: &[f64], lo: f64, hi: f64, bins: usize) -> Result<f64> {
    if bins < 2 {
        return Err(Error::TooFewBins(bins));
    }
    if values.is_empty() {
        return Err(Error::Empty("entropy input"));
    }
    if !(hi > lo) {
        return Ok(0.0);
    }
    let mut counts = vec![0usize; bins];
    let scale = bins as f64 / (hi - lo);
    for &v in values {
        let b = ((v - lo) * scale).floor();
        // NaN maps to bin 0 through the saturating cast
        let b = if b < 0.0 { 0 } else { (b as usize).min(bins - 1) };
        counts[b] += 1;
    }
    Ok(entropy_of_counts(&counts, values.len()))
}

fn entropy_of_counts(counts: &[usize], n: usize) -> f64 {
    let n = n as f64;
    let h: f64 = counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum();
    (h / (counts.len() as f64).ln()).clamp(0.0, 1.0)
}

/// Position entropy `E_p` and per-dimension entropies `E_d`.
pub fn position_diversity(
    particles: &[Particle],
    bounds: &Bounds,
    bins: usize,
) -> Result<(f64, Vec<f64>)> {
    if particles.is_empty() {
        return Err(Error::Empty("swarm"));
    }
    let dim = bounds.dim();
    let mut column = vec![0.0; particles.len()];
    let mut per_dim = Vec::with_capacity(dim);
    for d in 0..dim {
        for (c, p) in column.iter_mut().zip(particles) {
            *c = p.position[d];
        }
        per_dim.push(histogram_entropy(
            &column,
            bounds.lower()[d],
            bounds.upper()[d],
            bins,
        )?);
    }
    let mean = per_dim.iter().sum::<f64>() / dim as f64;
    Ok((mean, per_dim))
}

/// Fitness entropy `E_f` of the current fitness values over their own
/// `[min, max]`.
pub fn fitness_diversity(particles: &[Particle], bins: usize) -> Result<f64> {
    if particles.is_empty() {
        return Err(Error::Empty("swarm"));
    }
    let values: Vec<f64> = particles.iter().map(|p| p.current_fitness).collect();
    let (lo, hi) = values
        .iter()
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    histogram_entropy(&values, lo, hi, bins)
}

pub fn hybrid_diversity(
    particles: &[Particle],
    bounds: &Bounds,
    bins: usize,
) -> Result<DiversityReading> {
    let (position, per_dimension) = position_diversity(particles, bounds, bins)?;
    let fitness = fitness_diversity(particles, bins)?;
    Ok(DiversityReading {
        position,
        fitness,
        hybrid: (position + fitness) / 2.0,
        per_dimension,
    })
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Mean distance to the swarm centroid, normalized by `N * L` where `L` is
/// the box diagonal.
pub fn adap_center_diversity(particles: &[Particle], bounds: &Bounds) -> Result<f64> {
    if particles.is_empty() {
        return Err(Error::Empty("swarm"));
    }
    let n = particles.len() as f64;
    let mut center = vec![0.0; bounds.dim()];
    for p in particles {
        for (c, x) in center.iter_mut().zip(&p.position) {
            *c += x;
        }
    }
    center.iter_mut().for_each(|c| *c /= n);
    let total: f64 = particles.iter().map(|p| distance(&p.position, &center)).sum();
    Ok(total / (n * bounds.diagonal_length()))
}

/// Mean over particles of the mean distance to every particle, normalized
/// by `N * L`.
pub fn adap_pairwise_diversity(particles: &[Particle], bounds: &Bounds) -> Result<f64> {
    if particles.is_empty() {
        return Err(Error::Empty("swarm"));
    }
    let n = particles.len();
    let mut total = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            total += 2.0 * distance(&particles[i].position, &particles[j].position);
        }
    }
    let n = n as f64;
    Ok(total / n / (n * bounds.diagonal_length()))
}
