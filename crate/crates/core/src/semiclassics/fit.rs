use super::{BoundFlag, BoundReport};
use crate::error::{LabError, Result};
use serde::Serialize;

/// Least-squares fit `log g = log c - c' E`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ImprovementFit {
    pub c: f64,
    pub cprime: f64,
    /// Largest absolute residual in `log g`.
    pub residual: f64,
    pub n_points: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

/// Fits `(E, g)` pairs; every gap must be strictly positive.
pub fn fit_exponential(points: &[(f64, f64)]) -> Result<ImprovementFit> {
    if points.len() < 5 {
        return Err(LabError::InvalidInput(format!("need at least 5 points, got {}", points.len())));
    }
    if let Some(&(e, g)) = points.iter().find(|p| !(p.1 > 0.0)) {
        return Err(LabError::BoundViolation(format!("nonpositive gap {g} at E = {e}")));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1.ln()).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1.ln() - my)).sum();
    if sxx == 0.0 {
        return Err(LabError::InvalidInput("all points share one E value".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = points
        .iter()
        .map(|p| (p.1.ln() - (intercept + slope * p.0)).abs())
        .fold(0.0, f64::max);
    let spread = points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max)
        - points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let diagnostic = ((slope * spread).abs() < 1e-9).then(|| "no exponential decay resolved".to_string());
    Ok(ImprovementFit { c: intercept.exp(), cprime: -slope, residual, n_points: points.len(), diagnostic })
}

/// Fits the gaps of a sweep against its exponent arguments. Rows flagged as
/// violations surface as errors; rows without an asserted bound are skipped.
pub fn fit_improvement_constants(reports: &[BoundReport]) -> Result<ImprovementFit> {
    let mut pts = Vec::new();
    for r in reports {
        match r.flag {
            BoundFlag::Violation => {
                return Err(LabError::BoundViolation(r.csv_row()));
            }
            BoundFlag::Ok => pts.push((r.e_arg, r.gap)),
            _ => {}
        }
    }
    fit_exponential(&pts)
}
