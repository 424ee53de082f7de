#![allow(dead_code)]

use std::sync::atomic::{AtomicUsize, Ordering};

use ampso::{Bounds, Objective, Particle, RandomSource};

/// Counts every call to the wrapped objective.
pub struct Spy<O> {
    pub inner: O,
    pub calls: AtomicUsize,
}

impl<O> Spy<O> {
    pub fn new(inner: O) -> Self {
        Self { inner, calls: AtomicUsize::new(0) }
    }

    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::SeqCst)
    }
}

impl<O: Objective> Objective for Spy<O> {
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }
    fn bounds(&self) -> &Bounds {
        self.inner.bounds()
    }
    fn value(&self, x: &[f64]) -> f64 {
        self.calls.fetch_add(1, Ordering::SeqCst);
        self.inner.value(x)
    }
    fn optimum_value(&self) -> f64 {
        self.inner.optimum_value()
    }
}

/// Replays a fixed list of uniforms and Gaussians, cycling when exhausted.
pub struct Replay {
    pub uniforms: Vec<f64>,
    pub normals: Vec<f64>,
    pub u: usize,
    pub n: usize,
}

impl Replay {
    pub fn new(uniforms: Vec<f64>, normals: Vec<f64>) -> Self {
        Self { uniforms, normals, u: 0, n: 0 }
    }
}

impl RandomSource for Replay {
    fn uniform(&mut self) -> f64 {
        let v = self.uniforms[self.u % self.uniforms.len()];
        self.u += 1;
        v
    }
    fn standard_normal(&mut self) -> f64 {
        let v = self.normals[self.n % self.normals.len()];
        self.n += 1;
        v
    }
}

pub fn euclid(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..a.len() {
        s += (a[i] - b[i]).powi(2);
    }
    s.sqrt()
}

pub fn diag(bounds: &Bounds) -> f64 {
    let mut s = 0.0;
    for d in 0..bounds.dim() {
        s += (bounds.upper()[d] - bounds.lower()[d]).powi(2);
    }
    s.sqrt()
}

/// Centroid distance diversity, computed the long way.
pub fn brute_center(ps: &[Particle], bounds: &Bounds) -> f64 {
    let n = ps.len();
    let dim = bounds.dim();
    let mut total = 0.0;
    for i in 0..n {
        let mut c = vec![0.0; dim];
        for p in ps {
            for d in 0..dim {
                c[d] += p.position[d] / n as f64;
            }
        }
        total += euclid(&ps[i].position, &c);
    }
    total / n as f64 / diag(bounds)
}

/// Pairwise distance diversity over all ordered pairs.
pub fn brute_pairwise(ps: &[Particle], bounds: &Bounds) -> f64 {
    let n = ps.len();
    let mut total = 0.0;
    for i in 0..n {
        let mut row = 0.0;
        for j in 0..n {
            row += euclid(&ps[i].position, &ps[j].position);
        }
        total += row / n as f64;
    }
    total / n as f64 / diag(bounds)
}

/// Evolution rate straight from the piecewise definition over the whole
/// history `bf[0] = bf(1), ...`.
pub fn direct_evolution_rate(bf: &[f64], k: usize) -> f64 {
    let t = bf.len();
    if t <= 1 {
        return 1.0;
    }
    let at = |i: usize| bf[i - 1];
    let denom = at(t - 1).abs() + 1e-12;
    if t < k {
        (at(1) - at(t)) / (t as f64 * denom)
    } else {
        let from = if t > k { t - k } else { 1 };
        (at(from) - at(t)) / (k as f64 * denom)
    }
}

/// Welford one-pass mean and population standard deviation, plus extremes.
pub fn one_pass_stats(values: &[f64]) -> (f64, f64, f64, f64) {
    let mut mean = 0.0;
    let mut m2 = 0.0;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (i, &v) in values.iter().enumerate() {
        let delta = v - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (v - mean);
        lo = lo.min(v);
        hi = hi.max(v);
    }
    (mean, (m2 / values.len() as f64).sqrt(), lo, hi)
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
