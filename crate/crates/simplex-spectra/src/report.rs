//! Machine-readable census reports: the full eigenpair inventory for a
//! given (n, m) with classifications, count checks, and CSV projection.

use crate::classify::{classify, Classification, ClassifyError};
use crate::frame::{build_frame, FrameError};
use crate::stationary::{census, to_eigenpair, StationaryError, Structure};
use crate::tensor::{SymTensor, TensorError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Stationary(#[from] StationaryError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportPoint {
    pub u: Vec<f64>,
    pub alpha: f64,
    pub beta: f64,
    pub structure: Structure,
    pub kkt_residual: f64,
    pub objective: f64,
    pub v: Vec<f64>,
    pub lambda: f64,
    pub classification: Classification,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CensusReport {
    pub schema_version: String,
    pub tool_version: String,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub count: usize,
    pub expected_count: Option<usize>,
    pub upper_bound: usize,
    pub count_matches_expected: Option<bool>,
    pub count_within_bound: bool,
    pub points: Vec<ReportPoint>,
}

/// Full pipeline: frame -> tensor -> enumerate -> classify -> v-space.
/// Points arrive sorted by (objective descending, then lexicographic u).
pub fn census_report(n: usize, m: usize, seed: u64) -> Result<CensusReport, ReportError> {
    let frame = build_frame(n)?;
    let tensor = SymTensor::from_frame(&frame, m)?;
    let c = census(n, m)?;
    let mut points = Vec::with_capacity(c.points.len());
    for sp in &c.points {
        let pair = to_eigenpair(&frame, &tensor, sp)?;
        let classification = classify(sp, n, m)?;
        points.push(ReportPoint {
            u: sp.u.clone(),
            alpha: sp.alpha,
            beta: sp.beta,
            structure: sp.structure.clone(),
            kkt_residual: sp.kkt_residual,
            objective: sp.objective,
            v: pair.v,
            lambda: pair.lambda,
            classification,
        });
    }
    Ok(CensusReport {
        schema_version: SCHEMA_VERSION.into(),
        tool_version: env!("CARGO_PKG_VERSION").into(),
        n,
        m,
        seed,
        count: c.count,
        expected_count: c.expected_count,
        upper_bound: c.upper_bound,
        count_matches_expected: c.count_matches_expected,
        count_within_bound: c.count_within_bound,
        points,
    })
}

fn structure_label(s: &Structure) -> String {
    match s {
        Structure::TwoValue { k, .. } => format!("two_value(k={k})"),
        Structure::ThreeValue { p, q, s, .. } => format!("three_value(p={p},q={q},s={s})"),
    }
}

fn float_csv(x: f64) -> String {
    format!("{x:.17e}")
}

/// Flat CSV projection of a census report, one row per point.
pub fn census_csv(report: &CensusReport) -> String {
    let mut out = String::from("index,structure,verdict,lambda,alpha,beta,kkt_residual,u,v\n");
    for (i, p) in report.points.iter().enumerate() {
        let u = p.u.iter().map(|&x| float_csv(x)).collect::<Vec<_>>().join(";");
        let v = p.v.iter().map(|&x| float_csv(x)).collect::<Vec<_>>().join(";");
        out.push_str(&format!(
            "{i},{},{:?},{},{},{},{},{u},{v}\n",
            structure_label(&p.structure),
            p.classification.verdict,
            float_csv(p.lambda),
            float_csv(p.alpha),
            float_csv(p.beta),
            float_csv(p.kkt_residual),
        ));
    }
    out
}
