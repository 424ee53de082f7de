//! Registry of classical test functions and the shift/rotation transform
//! used to build shifted-rotated variants of them.

use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Bounds, Objective};
use crate::rng::RandomSource;

/// Location of the 1-D minimum of `-x sin(sqrt|x|)` on `[-500, 500]`.
pub const SCHWEFEL_226_ARGMIN: f64 = 420.968_743_696_169;

/// `-min x sin(sqrt|x|)` over `[-500, 500]`; makes Schwefel 2.26 zero at its optimum.
const SCHWEFEL_226_OFFSET: f64 = 418.982_887_272_433_8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Modality {
    Unimodal,
    Multimodal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BenchmarkFunction {
    Sphere,
    Rosenbrock,
    Ackley,
    Rastrigin,
    Griewank,
    #[serde(rename = "schwefel_226")]
    Schwefel226,
}

impl BenchmarkFunction {
    pub const ALL: [BenchmarkFunction; 6] = [
        BenchmarkFunction::Sphere,
        BenchmarkFunction::Rosenbrock,
        BenchmarkFunction::Ackley,
        BenchmarkFunction::Rastrigin,
        BenchmarkFunction::Griewank,
        BenchmarkFunction::Schwefel226,
    ];

    pub fn names() -> Vec<&'static str> {
        Self::ALL.iter().map(|f| f.name()).collect()
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Sphere => "sphere",
            Self::Rosenbrock => "rosenbrock",
            Self::Ackley => "ackley",
            Self::Rastrigin => "rastrigin",
            Self::Griewank => "griewank",
            Self::Schwefel226 => "schwefel_226",
        }
    }

    pub fn modality(self) -> Modality {
        match self {
            Self::Sphere | Self::Rosenbrock => Modality::Unimodal,
            _ => Modality::Multimodal,
        }
    }

    /// `[-100, 100]^D`, except Schwefel 2.26 which needs `[-500, 500]^D`.
    pub fn default_bounds(self, dim: usize) -> Result<Bounds> {
        match self {
            Self::Schwefel226 => Bounds::uniform(dim, -500.0, 500.0),
            _ => Bounds::uniform(dim, -100.0, 100.0),
        }
    }

    pub fn optimum_position(self, dim: usize) -> Vec<f64> {
        let v = match self {
            Self::Rosenbrock => 1.0,
            Self::Schwefel226 => SCHWEFEL_226_ARGMIN,
            _ => 0.0,
        };
        vec![v; dim]
    }

    pub fn optimum_value(self) -> f64 {
        0.0
    }

    pub fn eval(self, x: &[f64]) -> f64 {
        match self {
            Self::Sphere => sphere(x),
            Self::Rosenbrock => rosenbrock(x),
            Self::Ackley => ackley(x),
            Self::Rastrigin => rastrigin(x),
            Self::Griewank => griewank(x),
            Self::Schwefel226 => schwefel_226(x),
        }
    }
}

impl fmt::Display for BenchmarkFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BenchmarkFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnknownFunction {
                name: s.to_string(),
                available: Self::names(),
            })
    }
}

/// Evaluate a registry function by name.
pub fn eval_registry_function(name: &str, x: &[f64]) -> Result<f64> {
    Ok(name.parse::<BenchmarkFunction>()?.eval(x))
}

pub fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

pub fn rosenbrock(x: &[f64]) -> f64 {
    x.windows(2)
        .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
        .sum()
}

pub fn ackley(x: &[f64]) -> f64 {
    if x.is_empty() {
        return 0.0;
    }
    let n = x.len() as f64;
    let sq = x.iter().map(|v| v * v).sum::<f64>() / n;
    let cs = x.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / n;
    -20.0 * (-0.2 * sq.sqrt()).exp() - cs.exp() + 20.0 + E
}

pub fn rastrigin(x: &[f64]) -> f64 {
    x.iter()
        .map(|v| v * v - 10.0 * (2.0 * PI * v).cos() + 10.0)
        .sum()
}

pub fn griewank(x: &[f64]) -> f64 {
    let sum = x.iter().map(|v| v * v).sum::<f64>() / 4000.0;
    let prod = x
        .iter()
        .enumerate()
        .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
        .product::<f64>();
    1.0 + sum - prod
}

pub fn schwefel_226(x: &[f64]) -> f64 {
    SCHWEFEL_226_OFFSET * x.len() as f64 - x.iter().map(|v| v * v.abs().sqrt().sin()).sum::<f64>()
}

/// Orthogonal `D x D` matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Rotation {
    dim: usize,
    rows: Vec<f64>,
}

impl Rotation {
    pub const ORTHOGONALITY_TOL: f64 = 1e-8;

    /// Validate `rows` (row-major, `dim * dim` entries) as an orthogonal matrix.
    pub fn new(dim: usize, rows: Vec<f64>) -> Result<Self> {
        if rows.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: rows.len(),
            });
        }
        let m = DMatrix::from_row_slice(dim, dim, &rows);
        let deviation = (m.transpose() * &m - DMatrix::<f64>::identity(dim, dim)).amax();
        if !(deviation <= Self::ORTHOGONALITY_TOL) {
            return Err(Error::NonOrthogonalRotation { deviation });
        }
        Ok(Self { dim, rows })
    }

    pub fn identity(dim: usize) -> Self {
        let mut rows = vec![0.0; dim * dim];
        for i in 0..dim {
            rows[i * dim + i] = 1.0;
        }
        Self { dim, rows }
    }

    /// Random orthogonal matrix from the QR factorization of a Gaussian matrix.
    pub fn random<R: RandomSource>(dim: usize, rng: &mut R) -> Self {
        let g = DMatrix::from_fn(dim, dim, |_, _| rng.standard_normal());
        let qr = g.qr();
        let (mut q, r) = (qr.q(), qr.r());
        // sign fix so the distribution is Haar
        for j in 0..dim {
            if r[(j, j)] < 0.0 {
                q.column_mut(j).neg_mut();
            }
        }
        let rows = (0..dim)
            .flat_map(|i| (0..dim).map(move |j| (i, j)))
            .map(|(i, j)| q[(i, j)])
            .collect();
        Self { dim, rows }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i * self.dim..(i + 1) * self.dim]
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn apply_transpose(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for (i, vi) in v.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += a * vi;
            }
        }
        out
    }
}

/// A registry function on a box, optionally composed with
/// `z = rotation * (x - shift)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveSpec {
    pub function: BenchmarkFunction,
    pub dimension: usize,
    pub bounds: Bounds,
    pub shift: Option<Vec<f64>>,
    pub rotation: Option<Rotation>,
}

impl ObjectiveSpec {
    /// Untransformed function on its default bounds.
    pub fn new(function: BenchmarkFunction, dimension: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidConfig("dimension must be at least 1".into()));
        }
        Ok(Self {
            function,
            dimension,
            bounds: function.default_bounds(dimension)?,
            shift: None,
            rotation: None,
        })
    }

    pub fn with_bounds(mut self, bounds: Bounds) -> Result<Self> {
        if bounds.dim() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                got: bounds.dim(),
            });
        }
        self.bounds = bounds;
        Ok(self)
    }

    /// Transformed argument `rotation * (x - shift)`.
    pub fn transform(&self, x: &[f64]) -> Vec<f64> {
        let shifted: Vec<f64> = match &self.shift {
            Some(o) => x.iter().zip(o).map(|(a, b)| a - b).collect(),
            None => x.to_vec(),
        };
        match &self.rotation {
            Some(r) => r.apply(&shifted),
            None => shifted,
        }
    }

    /// Minimizer in the original coordinates: `shift + rotation^T * z*`.
    pub fn optimum_position(&self) -> Vec<f64> {
        let z = self.function.optimum_position(self.dimension);
        let mut x = match &self.rotation {
            Some(r) => r.apply_transpose(&z),
            None => z,
        };
        if let Some(o) = &self.shift {
            for (a, b) in x.iter_mut().zip(o) {
                *a += b;
            }
        }
        x
    }
}

impl Objective for ObjectiveSpec {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn bounds(&self) -> &Bounds {
        &self.bounds
    }

    fn value(&self, x: &[f64]) -> f64 {
        if self.shift.is_none() && self.rotation.is_none() {
            self.function.eval(x)
        } else {
            self.function.eval(&self.transform(x))
        }
    }

    fn optimum_value(&self) -> f64 {
        self.function.optimum_value()
    }
}

/// Shifted and rotated variant of a registry function, evaluating
/// `f(rotation * (x - shift))`.
pub fn compose_transform(
    function: BenchmarkFunction,
    shift: Vec<f64>,
    rotation: Rotation,
) -> Result<ObjectiveSpec> {
    let dim = shift.len();
    if rotation.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: rotation.dim(),
        });
    }
    let mut spec = ObjectiveSpec::new(function, dim)?;
    spec.shift = Some(shift);
    spec.rotation = Some(rotation);
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    #[test]
    fn zero_optima() {
        for d in [1, 2, 10, 30] {
            let z = vec![0.0; d];
            assert_eq!(sphere(&z), 0.0);
            assert!(ackley(&z).abs() < 1e-12);
            assert_eq!(rastrigin(&z), 0.0);
            assert_eq!(griewank(&z), 0.0);
        }
    }

    #[test]
    fn rastrigin_at_unit_axis() {
        assert!((rastrigin(&[1.0, 0.0, 0.0]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn griewank_at_pi_pi() {
        // frozen from a direct evaluation of 1 + sum x^2/4000 - prod cos(x_i/sqrt(i))
        let expected = 0.399_234_935_121_731_25;
        assert!((griewank(&[PI, PI]) - expected).abs() < 1e-14);
    }

    #[test]
    fn schwefel_optimum_close_to_zero() {
        for d in [1, 10, 30] {
            let x = vec![420.9687; d];
            assert!(schwefel_226(&x).abs() < 1e-3);
            let x = vec![SCHWEFEL_226_ARGMIN; d];
            assert!(schwefel_226(&x).abs() < 1e-9 * d as f64);
        }
    }

    #[test]
    fn registry_optima() {
        for f in BenchmarkFunction::ALL {
            for d in [1, 2, 5, 10] {
                let x = f.optimum_position(d);
                let v = f.eval(&x);
                assert!((v - f.optimum_value()).abs() < 1e-9, "{f} D={d}: {v}");
            }
        }
    }

    #[test]
    fn names_round_trip() {
        for f in BenchmarkFunction::ALL {
            assert_eq!(f.name().parse::<BenchmarkFunction>().unwrap(), f);
        }
    }

    #[test]
    fn unknown_name_lists_available() {
        let err = eval_registry_function("nosuch", &[0.0]).unwrap_err();
        let msg = err.to_string();
        for name in BenchmarkFunction::names() {
            assert!(msg.contains(name), "{msg}");
        }
    }

    #[test]
    fn default_bounds() {
        let b = BenchmarkFunction::Rastrigin.default_bounds(3).unwrap();
        assert_eq!(b.lower(), &[-100.0; 3]);
        let b = BenchmarkFunction::Schwefel226.default_bounds(3).unwrap();
        assert_eq!(b.upper(), &[500.0; 3]);
    }

    #[test]
    fn shifted_sphere() {
        let spec = compose_transform(BenchmarkFunction::Sphere, vec![1.0, 1.0], Rotation::identity(2))
            .unwrap();
        assert_eq!(spec.value(&[1.0, 1.0]), 0.0);
        assert_eq!(spec.value(&[0.0, 0.0]), 2.0);
    }

    #[test]
    fn non_orthogonal_rejected() {
        let err = Rotation::new(2, vec![1.0, 0.1, 0.0, 1.0]).unwrap_err();
        assert!(matches!(err, Error::NonOrthogonalRotation { .. }));
        assert!(Rotation::new(2, vec![0.0, 1.0, -1.0, 0.0]).is_ok());
        assert!(Rotation::new(2, vec![1.0; 3]).is_err());
    }

    #[test]
    fn random_rotation_is_orthogonal() {
        let mut rng = RngStream::new(9);
        for d in [1, 2, 5, 10] {
            let r = Rotation::random(d, &mut rng);
            Rotation::new(d, r.rows.clone()).unwrap();
        }
    }

    #[test]
    fn rotated_optimum_moves_to_shift() {
        let mut rng = RngStream::new(21);
        for f in BenchmarkFunction::ALL {
            let d = 6;
            let shift: Vec<f64> = (0..d).map(|_| rng.uniform_range(-50.0, 50.0)).collect();
            let spec = compose_transform(f, shift.clone(), Rotation::random(d, &mut rng)).unwrap();
            let xs = spec.optimum_position();
            assert!((spec.value(&xs) - f.optimum_value()).abs() < 1e-9, "{f}");
            if f.optimum_position(d).iter().all(|&v| v == 0.0) {
                assert!((spec.value(&shift) - f.optimum_value()).abs() < 1e-9, "{f}");
            }
        }
    }
}
