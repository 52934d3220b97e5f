//! Semiclassical constants, Riesz means, free and magnetic main terms, the
//! Aizenman–Lieb lift, bound reports and fits of the improvement constants.

mod fit;
mod report;

pub use fit::{fit_exponential, fit_improvement_constants, ImprovementFit};
pub use report::{bound_report, BoundFlag, BoundReport, Direction, DomainGeometry};

use crate::error::{LabError, Result};
use crate::operators::Spectrum;
use statrs::function::gamma::ln_gamma;
use std::f64::consts::PI;

/// Cutoff and order of a Riesz mean.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct RieszQuery {
    pub lambda: f64,
    pub gamma: f64,
}

impl RieszQuery {
    pub fn new(lambda: f64, gamma: f64) -> Result<Self> {
        if !(lambda >= 0.0) || !(gamma >= 0.0) {
            return Err(LabError::InvalidInput(format!("need Lambda >= 0 and gamma >= 0, got {lambda}, {gamma}")));
        }
        Ok(Self { lambda, gamma })
    }
}

/// `Gamma(1+gamma) / ((4 pi)^{d/2} Gamma(1+gamma+d/2))`.
pub fn semiclassical_constant(gamma: f64, dim: usize) -> f64 {
    let d = dim as f64;
    (ln_gamma(1.0 + gamma) - 0.5 * d * (4.0 * PI).ln() - ln_gamma(1.0 + gamma + 0.5 * d)).exp()
}

/// `(x)^gamma` for `x > 0`, with `x^0 = 1`.
fn pow_pos(x: f64, gamma: f64) -> f64 {
    if gamma == 0.0 {
        1.0
    } else {
        x.powf(gamma)
    }
}

/// `sum_{lambda_n < Lambda} (Lambda - lambda_n)^gamma`; for `gamma = 0` the
/// number of eigenvalues below `Lambda`.
pub fn riesz_mean(spectrum: &Spectrum, q: RieszQuery) -> Result<f64> {
    spectrum.require_complete_below(q.lambda)?;
    Ok(riesz_sum(&spectrum.eigenvalues, q.lambda, q.gamma))
}

/// Riesz sum of a plain list of values (no completeness check).
pub fn riesz_sum(values: &[f64], lambda: f64, gamma: f64) -> f64 {
    // fold from +0.0: an empty f64 sum is -0.0
    values.iter().filter(|&&l| l < lambda).map(|&l| pow_pos(lambda - l, gamma)).fold(0.0, |a, x| a + x)
}

/// Free (`b = 0`) or magnetic phase-space term:
/// `G0 = L_{gamma,d} Lambda^{gamma+d/2}`, `GB = (B/2pi) sum_k (Lambda - B(2k-1))_+^gamma`.
pub fn g_function(b: f64, gamma: f64, lambda: f64, dim: usize) -> Result<f64> {
    if b < 0.0 || gamma < 0.0 {
        return Err(LabError::InvalidInput(format!("need B >= 0 and gamma >= 0, got {b}, {gamma}")));
    }
    if lambda <= 0.0 {
        return Ok(0.0);
    }
    if b == 0.0 {
        return Ok(semiclassical_constant(gamma, dim) * lambda.powf(gamma + 0.5 * dim as f64));
    }
    if dim != 2 {
        return Err(LabError::InvalidInput("magnetic main terms are two-dimensional".into()));
    }
    let mut total = 0.0;
    let mut k = 1usize;
    loop {
        let level = b * (2 * k - 1) as f64;
        if level >= lambda {
            break;
        }
        total += pow_pos(lambda - level, gamma);
        k += 1;
    }
    Ok(b / (2.0 * PI) * total)
}

/// `|Omega| * g_function(B, gamma, Lambda)`.
pub fn main_term(area: f64, q: RieszQuery, b: f64, dim: usize) -> Result<f64> {
    if !(area > 0.0) {
        return Err(LabError::InvalidInput(format!("measure {area} must be positive")));
    }
    Ok(area * g_function(b, q.gamma, q.lambda, dim)?)
}

/// `gamma (gamma-1) ∫ (Lambda-lambda)^{gamma-2} R1(lambda) dlambda` for
/// `R1(lambda) = sum_i w_i (lambda - mu_i)_+`, integrated exactly between
/// consecutive breakpoints `mu_i`.
pub fn lift_weighted(points: &[(f64, f64)], lambda: f64, gamma: f64) -> f64 {
    assert!(gamma > 1.0, "the lift needs gamma > 1");
    let mut pts: Vec<(f64, f64)> = points.iter().copied().filter(|p| p.0 < lambda).collect();
    if pts.is_empty() {
        return 0.0;
    }
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (mut c, mut s) = (0.0, 0.0);
    let mut total = 0.0;
    for (i, &(mu, w)) in pts.iter().enumerate() {
        c += w;
        s += w * mu;
        let a = mu;
        let b = pts.get(i + 1).map_or(lambda, |p| p.0);
        if b <= a {
            continue;
        }
        // on [a, b]: R1 = c lambda - s = -c (Lambda - lambda) + (c Lambda - s)
        let i1 = ((lambda - a).powf(gamma) - (lambda - b).powf(gamma)) / gamma;
        let i2 = ((lambda - a).powf(gamma - 1.0) - (lambda - b).powf(gamma - 1.0)) / (gamma - 1.0);
        total += -c * i1 + (c * lambda - s) * i2;
    }
    gamma * (gamma - 1.0) * total
}

/// Riesz mean of order `gamma > 1` recovered from order-one Riesz means by
/// the Aizenman–Lieb identity; errors if it disagrees with the direct sum
/// beyond `1e-6` relative (an implementation fault).
pub fn aizenman_lieb_lift(spectrum: &Spectrum, lambda: f64, gamma: f64) -> Result<f64> {
    if !(gamma > 1.0) {
        return Err(LabError::InvalidInput(format!("the lift needs gamma > 1, got {gamma}")));
    }
    spectrum.require_complete_below(lambda)?;
    let pts: Vec<(f64, f64)> = spectrum.eigenvalues.iter().map(|&l| (l, 1.0)).collect();
    let lift = lift_weighted(&pts, lambda, gamma);
    let direct = riesz_sum(&spectrum.eigenvalues, lambda, gamma);
    if (lift - direct).abs() > 1e-6 * direct.abs().max(f64::MIN_POSITIVE) && (lift - direct).abs() > 1e-300 {
        return Err(LabError::QuadratureMismatch { lift, direct });
    }
    Ok(lift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::Completeness;

    #[test]
    fn constants_in_closed_form() {
        assert!((semiclassical_constant(1.0, 2) - 1.0 / (8.0 * PI)).abs() < 1e-15);
        assert!((semiclassical_constant(0.0, 2) - 1.0 / (4.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn riesz_examples() {
        let s = Spectrum::from_values(vec![1.0, 3.0, 5.0], Completeness::Full);
        assert_eq!(riesz_mean(&s, RieszQuery::new(4.0, 1.0).unwrap()).unwrap(), 4.0);
        assert_eq!(riesz_mean(&s, RieszQuery::new(4.0, 0.0).unwrap()).unwrap(), 2.0);
        assert_eq!(riesz_mean(&s, RieszQuery::new(0.0, 2.0).unwrap()).unwrap(), 0.0);
        let partial = Spectrum::from_values(vec![1.0, 3.0], Completeness::Below(3.5));
        assert!(riesz_mean(&partial, RieszQuery::new(4.0, 1.0).unwrap()).is_err());
    }

    #[test]
    fn magnetic_g() {
        assert!((g_function(1.0, 1.0, 4.0, 2).unwrap() - 4.0 / (2.0 * PI)).abs() < 1e-15);
        assert_eq!(g_function(1.0, 1.0, 1.0, 2).unwrap(), 0.0);
    }

    #[test]
    fn lift_small_cases() {
        let one = Spectrum::from_values(vec![1.0], Completeness::Full);
        assert!((aizenman_lieb_lift(&one, 2.0, 2.0).unwrap() - 1.0).abs() < 1e-14);
        let two = Spectrum::from_values(vec![1.0, 3.0], Completeness::Full);
        assert!((aizenman_lieb_lift(&two, 4.0, 2.0).unwrap() - 10.0).abs() < 1e-13);
        let frac = lift_weighted(&[(0.5, 1.0), (2.0, 3.0)], 3.0, 1.5);
        let direct = 2.5f64.powf(1.5) + 3.0;
        assert!((frac - direct).abs() < 1e-13);
    }
}
