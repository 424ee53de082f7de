//! Experiment plumbing: repeated seeded runs, summary statistics and the
//! CSV/JSON files the command-line runner writes.

mod campaign;
mod output;
mod stats;

pub use campaign::{
    apply_overrides, run_campaign, CampaignReport, CampaignSpec, CellFailure, CellSummary,
    ConfigOverrides, RunRecord,
};
pub use output::{
    read_runs_csv, strided, write_campaign, write_runs_csv, write_summary_json, write_table_csv,
    write_trace_csv, SummaryDocument, STD_CONVENTION,
};
pub use stats::StatsSummary;
