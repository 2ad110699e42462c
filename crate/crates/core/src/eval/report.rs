use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::influence::{empirical_influence, Influence, InfluenceFilter};
use super::log::BroadcastLog;
use super::spearman::{spearman, Correlation};
use crate::centrality::{exact_scores, CentralityParams, Measure, StartingVector};
use crate::error::Result;
use crate::graph::{DegreeConditioning, DirectedGraph};
use crate::push::{approximate, PushParams};

/// Damping and attenuation values commonly used for influence studies on
/// follower graphs.
pub const ALPHA_PRESETS: [f64; 3] = [9e-4, 1e-4, 0.9];

#[derive(Debug, Clone, PartialEq)]
pub struct ReportConfig {
    pub measures: Vec<Measure>,
    pub alphas: Vec<f64>,
    /// `None` computes the measure exactly.
    pub deltas: Vec<Option<f64>>,
    pub filter: InfluenceFilter,
    pub conditioning: DegreeConditioning,
    pub starting: StartingVector,
    /// Run the walk measures on the reversed graph, so that a node's score
    /// counts the walks it generates rather than receives.
    pub transpose_walks: bool,
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig {
            measures: vec![Measure::LaPr, Measure::Ac, Measure::LaAc],
            alphas: ALPHA_PRESETS.to_vec(),
            deltas: vec![None],
            filter: InfluenceFilter::default(),
            conditioning: DegreeConditioning::default(),
            starting: StartingVector::MeasureDefault,
            transpose_walks: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub measure: Measure,
    pub alpha: f64,
    pub delta: Option<f64>,
    pub transposed: bool,
    pub rho: Correlation,
    /// Users present in both the influence table and the graph.
    pub n_users: usize,
    /// Why `rho` is missing, if it is.
    pub note: Option<String>,
}

/// Scores of one measure, keyed by node label.
pub fn labeled_scores(
    g: &DirectedGraph,
    measure: Measure,
    alpha: f64,
    delta: Option<f64>,
    cfg: &ReportConfig,
) -> Result<BTreeMap<String, f64>> {
    let scores = match delta {
        None => {
            let p = CentralityParams::with_alpha(alpha)
                .starting(cfg.starting.clone())
                .conditioning(cfg.conditioning);
            exact_scores(g, measure, &p)?.scores
        }
        Some(delta) => {
            let p = PushParams::new(alpha, delta)
                .starting(cfg.starting.clone())
                .conditioning(cfg.conditioning);
            approximate(g, measure, &p)?.0.scores
        }
    };
    Ok(g.labels().iter().cloned().zip(scores).collect())
}

/// Spearman correlation of each (measure, alpha, delta) ranking with
/// empirical influence. Per-row failures are recorded in the row.
pub fn correlation_report(
    g: &DirectedGraph,
    log: &BroadcastLog,
    cfg: &ReportConfig,
) -> Result<(Influence, Vec<ReportRow>)> {
    let influence = empirical_influence(log, g, &cfg.filter)?;
    let target = influence.score_map();
    let n_users = target.keys().filter(|k| g.label_index().contains_key(k.as_str())).count();
    let reversed = g.transpose();

    let mut jobs = Vec::new();
    for &m in &cfg.measures {
        for &a in &cfg.alphas {
            for &d in &cfg.deltas {
                jobs.push((m, a, d));
            }
        }
    }
    let rows = jobs
        .par_iter()
        .map(|&(measure, alpha, delta)| {
            let transposed = measure.is_walk() && cfg.transpose_walks;
            let graph = if transposed { &reversed } else { g };
            let (rho, note) = match labeled_scores(graph, measure, alpha, delta, cfg)
                .and_then(|scores| spearman(&scores, &target))
            {
                Ok(Correlation::Undefined(why)) => (Correlation::Undefined(why.clone()), Some(why)),
                Ok(rho) => (rho, None),
                Err(e) => {
                    let why = e.to_string();
                    (Correlation::Undefined(why.clone()), Some(why))
                }
            };
            ReportRow {
                measure,
                alpha,
                delta,
                transposed,
                rho,
                n_users,
                note,
            }
        })
        .collect();
    Ok((influence, rows))
}

/// Writes `measure,alpha,delta,rho,n_users,transposed,note`. An exact row
/// has an empty delta, a missing correlation is `NaN`.
pub fn write_report_csv<W: Write>(rows: &[ReportRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["measure", "alpha", "delta", "rho", "n_users", "transposed", "note"])?;
    for r in rows {
        w.write_record([
            r.measure.name().to_string(),
            r.alpha.to_string(),
            r.delta.map(|d| d.to_string()).unwrap_or_default(),
            r.rho.value().to_string(),
            r.n_users.to_string(),
            r.transposed.to_string(),
            r.note.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
