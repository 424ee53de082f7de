use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::optimizer::{Algorithm, TracePoint};

use super::campaign::{CampaignReport, CellFailure, CellSummary, RunRecord};

pub const STD_CONVENTION: &str = "population";

/// Contents of `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryDocument {
    pub std_convention: String,
    pub cells: Vec<CellSummary>,
    pub failures: Vec<CellFailure>,
}

/// Keep a trace point whenever at least `stride` evaluations passed since the
/// last kept one. The first and last points are always kept.
pub fn strided(trace: &[TracePoint], stride: usize) -> Vec<&TracePoint> {
    let mut out: Vec<&TracePoint> = Vec::new();
    for (i, p) in trace.iter().enumerate() {
        let due = match out.last() {
            None => true,
            Some(last) => p.fe >= last.fe + stride.max(1),
        };
        if due || i + 1 == trace.len() {
            out.push(p);
        }
    }
    out
}

#[derive(Serialize)]
struct TraceRow<'a> {
    fe: usize,
    iteration: usize,
    phase: &'a str,
    best_error: f64,
    diversity: f64,
    omega: f64,
    er: f64,
}

/// Trace CSV with columns `fe,iteration,phase,best_error,diversity,omega,er`.
pub fn write_trace_csv<W: Write>(trace: &[TracePoint], stride: usize, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for p in strided(trace, stride) {
        w.serialize(TraceRow {
            fe: p.fe,
            iteration: p.iteration,
            phase: p.phase.as_str(),
            best_error: p.best_error,
            diversity: p.diversity,
            omega: p.omega,
            er: p.er,
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_runs_csv<W: Write>(runs: &[RunRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in runs {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_runs_csv(path: &Path) -> Result<Vec<RunRecord>> {
    let mut r = csv::Reader::from_path(path)?;
    let rows = r.deserialize().collect::<std::result::Result<Vec<RunRecord>, _>>()?;
    Ok(rows)
}

pub fn write_summary_json<W: Write>(report: &CampaignReport, mut out: W) -> Result<()> {
    let doc = SummaryDocument {
        std_convention: STD_CONVENTION.to_string(),
        cells: report.cells.clone(),
        failures: report.failures.clone(),
    };
    serde_json::to_writer_pretty(&mut out, &doc)?;
    out.write_all(b"\n")?;
    Ok(())
}

/// Side-by-side table: one row per (function, dimension, statistic), one
/// column per algorithm.
pub fn write_table_csv<W: Write>(report: &CampaignReport, out: W) -> Result<()> {
    let mut algorithms: Vec<Algorithm> = report.cells.iter().map(|c| c.algorithm).collect();
    algorithms.sort();
    algorithms.dedup();
    let mut rows: Vec<_> = report.cells.iter().map(|c| (c.function, c.dim)).collect();
    rows.dedup();
    rows.sort();
    rows.dedup();

    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["function".to_string(), "dim".into(), "item".into()];
    header.extend(algorithms.iter().map(|a| a.name().to_string()));
    w.write_record(&header)?;
    for (function, dim) in rows {
        for item in ["Mean", "Std", "Best", "Worst", "Median"] {
            let mut record = vec![function.name().to_string(), dim.to_string(), item.to_string()];
            for &a in &algorithms {
                let cell = report.cell(a, function, dim).map(|c| {
                    let s = c.stats();
                    match item {
                        "Mean" => s.mean,
                        "Std" => s.std,
                        "Best" => s.best,
                        "Worst" => s.worst,
                        _ => s.median,
                    }
                });
                record.push(cell.map(|v| format!("{v:.6e}")).unwrap_or_default());
            }
            w.write_record(&record)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Write `bytes` to `path` through a temporary file and a rename.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Write the campaign outputs into `dir`: `summary.json`, `table.csv`,
/// `runs.csv` and one `cells/<algorithm>_<function>_<dim>.json` per cell.
pub fn write_campaign(report: &CampaignReport, dir: &Path) -> Result<()> {
    let cells_dir = dir.join("cells");
    fs::create_dir_all(&cells_dir)?;
    for cell in &report.cells {
        let runs: Vec<&RunRecord> = report
            .runs
            .iter()
            .filter(|r| r.algorithm == cell.algorithm && r.function == cell.function && r.dim == cell.dim)
            .collect();
        let body = serde_json::json!({ "summary": cell, "runs": runs });
        let mut bytes = serde_json::to_vec_pretty(&body)?;
        bytes.push(b'\n');
        let name = format!("{}_{}_{}.json", cell.algorithm, cell.function, cell.dim);
        write_atomic(&cells_dir.join(name), &bytes)?;
    }

    let mut buf = Vec::new();
    write_summary_json(report, &mut buf)?;
    write_atomic(&dir.join("summary.json"), &buf)?;

    let mut buf = Vec::new();
    write_table_csv(report, &mut buf)?;
    write_atomic(&dir.join("table.csv"), &buf)?;

    let mut buf = Vec::new();
    write_runs_csv(&report.runs, &mut buf)?;
    write_atomic(&dir.join("runs.csv"), &buf)?;
    Ok(())
}
