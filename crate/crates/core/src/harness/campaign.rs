use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::benchmarks::{BenchmarkFunction, ObjectiveSpec};
use crate::error::{Error, Result};
use crate::optimizer::{Algorithm, AmpsoConfig};

use super::stats::StatsSummary;

/// Field-name keyed overrides layered on top of
/// [`AmpsoConfig::for_dimension`]. Keys are the `AmpsoConfig` field names.
pub type ConfigOverrides = Map<String, Value>;

/// Defaults for `dim` with `overrides` applied. Unknown keys and ill-typed
/// values are rejected.
pub fn apply_overrides(dim: usize, overrides: &ConfigOverrides) -> Result<AmpsoConfig> {
    let base = AmpsoConfig::for_dimension(dim);
    if overrides.is_empty() {
        return Ok(base);
    }
    let mut value = serde_json::to_value(&base)?;
    let fields = value.as_object_mut().expect("config serializes to an object");
    for (k, v) in overrides {
        fields.insert(k.clone(), v.clone());
    }
    serde_json::from_value(value).map_err(|e| Error::InvalidConfig(e.to_string()))
}

#[derive(Debug, Clone)]
pub struct CampaignSpec {
    pub algorithms: Vec<Algorithm>,
    pub functions: Vec<BenchmarkFunction>,
    pub dimensions: Vec<usize>,
    pub runs: usize,
    /// Run `r` (0-based) uses seed `base_seed + r`.
    pub base_seed: u64,
    pub overrides: ConfigOverrides,
    /// Worker threads; 0 lets the pool decide.
    pub jobs: usize,
}

impl CampaignSpec {
    pub fn seed_for(&self, run: usize) -> u64 {
        self.base_seed.wrapping_add(run as u64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub algorithm: Algorithm,
    pub function: BenchmarkFunction,
    pub dim: usize,
    pub run: usize,
    pub seed: u64,
    pub best_error: f64,
    pub fe_used: usize,
}

/// One (algorithm, function, dimension) cell of the summary table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub algorithm: Algorithm,
    pub function: BenchmarkFunction,
    pub dim: usize,
    pub runs: usize,
    pub mean: f64,
    pub std: f64,
    pub best: f64,
    pub worst: f64,
    pub median: f64,
}

impl CellSummary {
    pub fn stats(&self) -> StatsSummary {
        StatsSummary {
            mean: self.mean,
            std: self.std,
            best: self.best,
            worst: self.worst,
            median: self.median,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellFailure {
    pub algorithm: Algorithm,
    pub function: BenchmarkFunction,
    pub dim: usize,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CampaignReport {
    pub cells: Vec<CellSummary>,
    pub runs: Vec<RunRecord>,
    pub failures: Vec<CellFailure>,
}

impl CampaignReport {
    pub fn cell(&self, algorithm: Algorithm, function: BenchmarkFunction, dim: usize) -> Option<&CellSummary> {
        self.cells
            .iter()
            .find(|c| c.algorithm == algorithm && c.function == function && c.dim == dim)
    }
}

type CellKey = (Algorithm, BenchmarkFunction, usize);

/// Run every `(algorithm, function, dimension)` cell `runs` times. A cell
/// whose setup or any run fails is reported in `failures`; the others still
/// run. Output order is independent of `jobs`.
pub fn run_campaign(spec: &CampaignSpec) -> Result<CampaignReport> {
    if spec.runs == 0 {
        return Err(Error::InvalidConfig("runs must be at least 1".into()));
    }
    let mut cells: Vec<CellKey> = Vec::new();
    for &f in &spec.functions {
        for &d in &spec.dimensions {
            for &a in &spec.algorithms {
                cells.push((a, f, d));
            }
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs)
        .build()
        .map_err(|e| Error::Io(e.to_string()))?;

    let tasks: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|c| (0..spec.runs).map(move |r| (c, r)))
        .collect();
    let outcomes: Vec<Result<RunRecord>> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(c, run)| {
                let (algorithm, function, dim) = cells[c];
                let config = apply_overrides(dim, &spec.overrides)?;
                let objective = ObjectiveSpec::new(function, dim)?;
                let seed = spec.seed_for(run);
                let result = algorithm.run(&config, &objective, seed)?;
                Ok(RunRecord {
                    algorithm,
                    function,
                    dim,
                    run,
                    seed,
                    best_error: result.best_error,
                    fe_used: result.fe_used,
                })
            })
            .collect()
    });

    let mut report = CampaignReport::default();
    for (c, chunk) in outcomes.chunks(spec.runs).enumerate() {
        let (algorithm, function, dim) = cells[c];
        match chunk.iter().cloned().collect::<Result<Vec<RunRecord>>>() {
            Ok(records) => {
                let errors: Vec<f64> = records.iter().map(|r| r.best_error).collect();
                let s = StatsSummary::from_values(&errors)?;
                report.cells.push(CellSummary {
                    algorithm,
                    function,
                    dim,
                    runs: records.len(),
                    mean: s.mean,
                    std: s.std,
                    best: s.best,
                    worst: s.worst,
                    median: s.median,
                });
                report.runs.extend(records);
            }
            Err(e) => report.failures.push(CellFailure {
                algorithm,
                function,
                dim,
                error: e.to_string(),
            }),
        }
    }
    Ok(report)
}
