//! Evaluation: influence extraction, rank correlation, error metrics,
//! tolerance sweeps and a cascade simulator for synthetic ground truth.

mod cascade;
mod influence;
mod log;
mod metrics;
mod report;
mod spearman;
mod sweep;

pub use cascade::{item_label, simulate_item, simulate_la_cascades};
pub use influence::{empirical_influence, write_influence_csv, Influence, InfluenceEntry, InfluenceFilter};
pub use log::{parse_broadcast_log, write_broadcast_log, BroadcastLog, BroadcastRecord, ItemCascade};
pub use metrics::{rms_diff, rms_error};
pub use report::{
    correlation_report, labeled_scores, write_report_csv, ReportConfig, ReportRow, ALPHA_PRESETS,
};
pub use spearman::{average_ranks, spearman, spearman_paired, Correlation};
pub use sweep::{delta_sweep, write_sweep_csv, SweepConfig, SweepResult};
