//! Centrality measures, their parameters, and score vectors.
//!
//! Four measures are supported:
//!
//! | measure | recurrence (componentwise) |
//! |---------|----------------------------|
//! | PR      | `x[j] = (1-α) s[j] + α Σ_{i→j} x[i] / d_out(i)` |
//! | laPR    | `x[j] = (1-α) s[j] + α Σ_{i→j} x[i] / (d_out(i) d_in(j))` |
//! | AC      | `x[i] = s[i] + α Σ_{i→j} x[j]` |
//! | laAC    | `x[i] = s[i] + α Σ_{i→j} x[j] / d_in(j)` |
//!
//! The walk-based measures (PR, laPR) propagate score along edge
//! direction; the broadcast measures (AC, laAC) accumulate score from the
//! nodes a node can reach. Every division by a degree uses conditioned
//! degrees, see [`DegreeConditioning`].

mod dense;
mod exact;
mod output;
mod spectral;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use dense::{dense_solve, dense_solve_oracle, DENSE_NODE_LIMIT};
pub use exact::{
    alpha_centrality_exact, check_divergence, exact_scores, la_alpha_centrality_exact,
    la_pagerank_exact, pagerank_exact, DIVERGENCE_MARGIN,
};
pub use output::{write_scores_csv, write_scores_json};
pub use spectral::{spectral_radius, SpectralEstimate, TransferMatrix};

use crate::error::{Error, Result};
use crate::graph::{condition_degrees, ConditionedDegrees, DegreeConditioning, DirectedGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Pr,
    LaPr,
    Ac,
    LaAc,
}

impl Measure {
    pub const ALL: [Measure; 4] = [Measure::Pr, Measure::LaPr, Measure::Ac, Measure::LaAc];

    pub fn name(self) -> &'static str {
        match self {
            Measure::Pr => "pr",
            Measure::LaPr => "lapr",
            Measure::Ac => "ac",
            Measure::LaAc => "laac",
        }
    }

    /// Walk-based measures (PR family) as opposed to broadcast measures.
    pub fn is_walk(self) -> bool {
        matches!(self, Measure::Pr | Measure::LaPr)
    }

    pub fn default_start(self) -> StartingVector {
        match self {
            Measure::Pr | Measure::LaPr => StartingVector::Uniform,
            Measure::Ac => StartingVector::OutDegree,
            Measure::LaAc => StartingVector::LaOutDegree,
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "pr" | "pagerank" => Ok(Measure::Pr),
            "lapr" => Ok(Measure::LaPr),
            "ac" => Ok(Measure::Ac),
            "laac" => Ok(Measure::LaAc),
            other => Err(Error::Param(format!("unknown measure {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StartingVector {
    /// Whatever [`Measure::default_start`] picks.
    #[default]
    MeasureDefault,
    /// `s[i] = 1/|V|`.
    Uniform,
    /// `s[i] = 1/d_in(i)`.
    IndegreeInverse,
    /// `s[i] = d_out(i)` (raw).
    OutDegree,
    /// `s[i] = Σ_{i→j} 1/d_in(j)`.
    LaOutDegree,
    Custom(Vec<f64>),
}

impl StartingVector {
    pub fn name(&self) -> &'static str {
        match self {
            StartingVector::MeasureDefault => "default",
            StartingVector::Uniform => "uniform",
            StartingVector::IndegreeInverse => "indegree-inverse",
            StartingVector::OutDegree => "out-degree",
            StartingVector::LaOutDegree => "la-out-degree",
            StartingVector::Custom(_) => "custom",
        }
    }

    /// Replaces `MeasureDefault` by the concrete choice for `measure`.
    pub fn for_measure(&self, measure: Measure) -> StartingVector {
        match self {
            StartingVector::MeasureDefault => measure.default_start(),
            other => other.clone(),
        }
    }

    fn needs_degrees(&self) -> bool {
        matches!(
            self,
            StartingVector::IndegreeInverse | StartingVector::LaOutDegree
        )
    }

    /// Materializes the vector. `degrees` must be present when the choice
    /// divides by a degree.
    pub fn resolve(
        &self,
        measure: Measure,
        g: &DirectedGraph,
        degrees: Option<&ConditionedDegrees>,
    ) -> Result<Vec<f64>> {
        let n = g.node_count();
        let need = || {
            degrees.ok_or_else(|| {
                Error::Conditioning("starting vector needs conditioned degrees".into())
            })
        };
        let s = match self.for_measure(measure) {
            StartingVector::MeasureDefault => unreachable!("resolved above"),
            StartingVector::Uniform => vec![1.0 / n as f64; n],
            StartingVector::IndegreeInverse => {
                let d = need()?;
                (0..n).map(|u| d.in_inv(u)).collect()
            }
            StartingVector::OutDegree => g.out_degrees().into_iter().map(|d| d as f64).collect(),
            StartingVector::LaOutDegree => {
                let d = need()?;
                g.nodes()
                    .map(|u| {
                        g.out_neighbors(u)
                            .iter()
                            .map(|&v| d.in_inv(v as usize))
                            .sum()
                    })
                    .collect()
            }
            StartingVector::Custom(v) => {
                validate_source(&v, n)?;
                v
            }
        };
        Ok(s)
    }
}

/// Checks a user-supplied starting vector.
pub fn validate_source(s: &[f64], n: usize) -> Result<()> {
    if s.len() != n {
        return Err(Error::Shape {
            expected: n,
            found: s.len(),
        });
    }
    if let Some(bad) = s.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
        return Err(Error::Param(format!(
            "starting vector entries must be finite and >= 0, found {bad}"
        )));
    }
    if s.iter().all(|&x| x == 0.0) {
        return Err(Error::Param("starting vector is all zeros".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentralityParams {
    pub alpha: f64,
    pub starting: StartingVector,
    /// Infinity-norm change between sweeps that counts as converged.
    pub tol: f64,
    pub max_iter: usize,
    pub conditioning: DegreeConditioning,
}

impl Default for CentralityParams {
    fn default() -> Self {
        CentralityParams {
            alpha: 0.85,
            starting: StartingVector::MeasureDefault,
            tol: 1e-10,
            max_iter: 10_000,
            conditioning: DegreeConditioning::default(),
        }
    }
}

impl CentralityParams {
    pub fn with_alpha(alpha: f64) -> Self {
        CentralityParams {
            alpha,
            ..Default::default()
        }
    }

    pub fn starting(mut self, starting: StartingVector) -> Self {
        self.starting = starting;
        self
    }

    pub fn conditioning(mut self, conditioning: DegreeConditioning) -> Self {
        self.conditioning = conditioning;
        self
    }

    pub fn tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    /// Range checks. Walk measures need `alpha` in [0, 1); broadcast
    /// measures accept any finite `alpha >= 0` and are gated on the
    /// spectral radius by the solvers instead.
    pub fn validate(&self, measure: Measure) -> Result<()> {
        validate_alpha(measure, self.alpha)?;
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::Param(format!("tol must be positive, got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::Param("max_iter must be positive".into()));
        }
        Ok(())
    }

    /// Conditioned degrees when `measure` or the starting vector divides by
    /// a degree; `None` otherwise.
    pub(crate) fn degrees_for(
        &self,
        measure: Measure,
        g: &DirectedGraph,
    ) -> Result<Option<ConditionedDegrees>> {
        let needed =
            measure != Measure::Ac || self.starting.for_measure(measure).needs_degrees();
        if needed {
            condition_degrees(g, &self.conditioning).map(Some)
        } else {
            Ok(None)
        }
    }
}

pub(crate) fn validate_alpha(measure: Measure, alpha: f64) -> Result<()> {
    if measure.is_walk() {
        if !(0.0..1.0).contains(&alpha) {
            return Err(Error::Param(format!("alpha must lie in [0, 1), got {alpha}")));
        }
    } else if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(Error::Param(format!(
            "alpha must be finite and non-negative, got {alpha}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Sparse fixed-point iteration.
    Iterative,
    /// Dense Gaussian elimination.
    Dense,
    /// Residual push.
    Push,
}

/// Parameters a score vector was produced with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsSnapshot {
    pub method: Method,
    pub alpha: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    pub starting: String,
    pub conditioning: DegreeConditioning,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
}

impl ParamsSnapshot {
    pub(crate) fn exact(method: Method, measure: Measure, p: &CentralityParams) -> Self {
        ParamsSnapshot {
            method,
            alpha: p.alpha,
            delta: None,
            starting: p.starting.for_measure(measure).name().to_string(),
            conditioning: p.conditioning,
            tol: (method == Method::Iterative).then_some(p.tol),
            max_iter: (method == Method::Iterative).then_some(p.max_iter),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreVector {
    pub measure: Measure,
    pub scores: Vec<f64>,
    pub params: ParamsSnapshot,
    pub iterations: usize,
    pub converged: bool,
}

impl ScoreVector {
    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    /// Node ids ordered by descending score, ties by ascending id.
    pub fn ranking(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.scores.len()).collect();
        order.sort_by(|&a, &b| self.scores[b].total_cmp(&self.scores[a]).then(a.cmp(&b)));
        order
    }
}

/// Largest absolute componentwise difference.
pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
