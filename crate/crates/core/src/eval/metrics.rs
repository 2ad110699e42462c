use crate::centrality::ScoreVector;
use crate::error::{Error, Result};

/// Root-mean-square difference of two equally long vectors.
pub fn rms_diff(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Shape {
            expected: a.len(),
            found: b.len(),
        });
    }
    if a.is_empty() {
        return Ok(0.0);
    }
    let ss: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    Ok((ss / a.len() as f64).sqrt())
}

pub fn rms_error(a: &ScoreVector, b: &ScoreVector) -> Result<f64> {
    rms_diff(&a.scores, &b.scores)
}
