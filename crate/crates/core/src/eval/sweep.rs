use std::io::Write;
use std::time::Duration;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::metrics::rms_diff;
use crate::centrality::{exact_scores, CentralityParams, Measure, StartingVector};
use crate::error::Result;
use crate::graph::{DegreeConditioning, DirectedGraph};
use crate::push::{approximate, PopOrder, PushParams};

/// Settings shared by every row of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub alpha: f64,
    pub starting: StartingVector,
    pub conditioning: DegreeConditioning,
    pub order: PopOrder,
    /// Compare each row against the exact solution. Off for graphs where
    /// the exact solve is too expensive; only push counts are reported.
    pub with_rms: bool,
}

impl SweepConfig {
    pub fn new(alpha: f64) -> Self {
        SweepConfig {
            alpha,
            starting: StartingVector::MeasureDefault,
            conditioning: DegreeConditioning::default(),
            order: PopOrder::Fifo,
            with_rms: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub delta: f64,
    pub pushes: Option<u64>,
    pub theoretical_bound: Option<f64>,
    pub rms_error: Option<f64>,
    #[serde(rename = "wall_time_ms", serialize_with = "millis")]
    pub wall_time: Duration,
    /// Solver error for this row, if any.
    pub error: Option<String>,
}

fn millis<S: Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64() * 1e3)
}

/// Tolerance of the exact reference used for rms errors.
const REFERENCE_TOL: f64 = 1e-13;

/// Runs the push approximation once per δ with identical starting vectors.
///
/// Rows are independent and may run in parallel on the current rayon
/// pool; a failing row records its error instead of aborting the sweep.
/// The result is sorted by descending δ. An error computing the exact
/// reference is returned as is.
pub fn delta_sweep(
    g: &DirectedGraph,
    measure: Measure,
    deltas: &[f64],
    cfg: &SweepConfig,
) -> Result<Vec<SweepResult>> {
    let reference = if cfg.with_rms {
        let p = CentralityParams::with_alpha(cfg.alpha)
            .starting(cfg.starting.clone())
            .conditioning(cfg.conditioning)
            .tol(REFERENCE_TOL)
            .max_iter(1_000_000);
        Some(exact_scores(g, measure, &p)?.scores)
    } else {
        None
    };

    let mut rows: Vec<SweepResult> = deltas
        .par_iter()
        .map(|&delta| {
            let params = PushParams::new(cfg.alpha, delta)
                .starting(cfg.starting.clone())
                .conditioning(cfg.conditioning)
                .order(cfg.order);
            match approximate(g, measure, &params) {
                Ok((sv, stats)) => {
                    let rms = reference
                        .as_ref()
                        .map(|exact| rms_diff(&sv.scores, exact))
                        .transpose();
                    let (rms_error, error) = match rms {
                        Ok(r) => (r, None),
                        Err(e) => (None, Some(e.to_string())),
                    };
                    SweepResult {
                        delta,
                        pushes: Some(stats.pushes),
                        theoretical_bound: stats.theoretical_bound,
                        rms_error,
                        wall_time: stats.wall_time,
                        error,
                    }
                }
                Err(e) => SweepResult {
                    delta,
                    pushes: None,
                    theoretical_bound: None,
                    rms_error: None,
                    wall_time: Duration::ZERO,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    rows.sort_by(|a, b| b.delta.total_cmp(&a.delta));
    Ok(rows)
}

/// Writes `delta,pushes,theoretical_bound,rms_error,wall_time_ms`. Missing
/// values are empty fields.
pub fn write_sweep_csv<W: Write>(rows: &[SweepResult], out: W) -> Result<()> {
    fn opt<T: ToString>(v: Option<T>) -> String {
        v.map(|v| v.to_string()).unwrap_or_default()
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["delta", "pushes", "theoretical_bound", "rms_error", "wall_time_ms"])?;
    for r in rows {
        w.write_record([
            r.delta.to_string(),
            opt(r.pushes),
            opt(r.theoretical_bound),
            opt(r.rms_error),
            format!("{:.3}", r.wall_time.as_secs_f64() * 1e3),
        ])?;
    }
    w.flush()?;
    Ok(())
}
