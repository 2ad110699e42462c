use std::io::Write;

use serde::Serialize;

use super::{Measure, ParamsSnapshot, ScoreVector};
use crate::error::{Error, Result};
use crate::graph::DirectedGraph;

fn ordered<'a>(sv: &ScoreVector, g: &'a DirectedGraph) -> Result<Vec<(&'a str, f64)>> {
    if sv.len() != g.node_count() {
        return Err(Error::Shape {
            expected: g.node_count(),
            found: sv.len(),
        });
    }
    let mut rows: Vec<(&str, f64)> = g
        .nodes()
        .map(|u| (g.label(u), sv.scores[u as usize]))
        .collect();
    rows.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    Ok(rows)
}

/// `node_label,score` rows, highest score first, ties by label.
pub fn write_scores_csv<W: Write>(sv: &ScoreVector, g: &DirectedGraph, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["node_label", "score"])?;
    for (label, score) in ordered(sv, g)? {
        w.write_record([label, &score.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct JsonScores<'a> {
    measure: Measure,
    params: &'a ParamsSnapshot,
    iterations: usize,
    converged: bool,
    scores: Vec<JsonRow<'a>>,
}

#[derive(Serialize)]
struct JsonRow<'a> {
    node: &'a str,
    score: f64,
}

/// JSON variant carrying the parameter snapshot and convergence metadata.
pub fn write_scores_json<W: Write>(sv: &ScoreVector, g: &DirectedGraph, out: W) -> Result<()> {
    let doc = JsonScores {
        measure: sv.measure,
        params: &sv.params,
        iterations: sv.iterations,
        converged: sv.converged,
        scores: ordered(sv, g)?
            .into_iter()
            .map(|(node, score)| JsonRow { node, score })
            .collect(),
    };
    serde_json::to_writer_pretty(out, &doc)?;
    Ok(())
}
