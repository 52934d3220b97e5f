use super::{main_term, riesz_mean, RieszQuery};
use crate::error::{LabError, Result};
use crate::geometry::{self, GridDomain};
use crate::operators::{validity_cap, BoundaryCondition, Spectrum};
use serde::Serialize;

/// Geometric inputs of a report, computed once per domain.
#[derive(Clone, Debug, Serialize)]
pub struct DomainGeometry {
    pub label: String,
    pub dim: usize,
    pub h: f64,
    pub measure: f64,
    pub inradius: f64,
    pub width: f64,
    pub theta: f64,
    pub rho_theta: f64,
}

impl DomainGeometry {
    /// Computes every quantity with `rho_theta` resolved to `tol`.
    pub fn compute(label: &str, domain: &GridDomain, theta: f64, tol: f64) -> Result<Self> {
        Ok(Self {
            label: label.to_string(),
            dim: domain.dim(),
            h: domain.spacing(),
            measure: geometry::measure(domain),
            inradius: geometry::inradius(domain)?,
            width: geometry::width(domain, geometry::DEFAULT_DIRECTIONS)?,
            theta,
            rho_theta: geometry::regularized_inradius(domain, theta, tol)?,
        })
    }
}

/// Which side of the main term the bound puts the Riesz mean on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// Riesz mean below the main term (Dirichlet).
    Upper,
    /// Riesz mean above the main term (Neumann).
    Lower,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundFlag {
    Ok,
    /// Order below one: reported, never asserted.
    PolyaNoBound,
    Violation,
    /// Main term zero (cutoff below every level); ratio undefined.
    DegenerateMain,
}

impl BoundFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundFlag::Ok => "ok",
            BoundFlag::PolyaNoBound => "polya-no-bound",
            BoundFlag::Violation => "violation",
            BoundFlag::DegenerateMain => "degenerate-main",
        }
    }
}

/// One row of a bound sweep.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub domain: String,
    pub bc: BoundaryCondition,
    pub b: f64,
    pub gamma: f64,
    pub lambda: f64,
    pub riesz: f64,
    pub main: f64,
    pub ratio: f64,
    /// `|1 - ratio|`.
    pub gap: f64,
    pub direction: Direction,
    pub rho_theta: f64,
    pub width: f64,
    /// Exponent argument `rho_theta sqrt(Lambda) (+ rho_theta^2 B)`.
    pub e_arg: f64,
    /// Same with the width in place of `rho_theta`.
    pub e_width: f64,
    pub flag: BoundFlag,
    pub remainders: Option<(f64, f64)>,
}

impl BoundReport {
    pub fn csv_header() -> &'static str {
        "domain,bc,B,gamma,Lambda,riesz,main,ratio,gap,rho_theta,width,E,flag"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.domain,
            self.bc,
            self.b,
            self.gamma,
            self.lambda,
            self.riesz,
            self.main,
            self.ratio,
            self.gap,
            self.rho_theta,
            self.width,
            self.e_arg,
            self.flag.as_str()
        )
    }
}

/// Assembles one report. Cutoffs beyond `0.05/h^2` are refused unless
/// `allow_beyond_cap` is set.
pub fn bound_report(
    geom: &DomainGeometry,
    spectrum: &Spectrum,
    q: RieszQuery,
    b: f64,
    bc: BoundaryCondition,
    allow_beyond_cap: bool,
) -> Result<BoundReport> {
    let cap = validity_cap(geom.h);
    if q.lambda > cap * (1.0 + 1e-12) && !allow_beyond_cap {
        return Err(LabError::BeyondCap { lambda: q.lambda, cap });
    }
    let riesz = riesz_mean(spectrum, q)?;
    let main = main_term(geom.measure, q, b, geom.dim)?;
    let direction = if bc.is_dirichlet() { Direction::Upper } else { Direction::Lower };
    let ratio = if main > 0.0 { riesz / main } else { f64::NAN };
    let gap = (1.0 - ratio).abs();
    let flag = if main <= 0.0 {
        BoundFlag::DegenerateMain
    } else if q.gamma < 1.0 {
        BoundFlag::PolyaNoBound
    } else if (direction == Direction::Upper && ratio >= 1.0) || (direction == Direction::Lower && ratio <= 1.0) {
        BoundFlag::Violation
    } else {
        BoundFlag::Ok
    };
    let sl = q.lambda.sqrt();
    Ok(BoundReport {
        domain: geom.label.clone(),
        bc,
        b,
        gamma: q.gamma,
        lambda: q.lambda,
        riesz,
        main,
        ratio,
        gap,
        direction,
        rho_theta: geom.rho_theta,
        width: geom.width,
        e_arg: geom.rho_theta * sl + geom.rho_theta.powi(2) * b,
        e_width: geom.width * sl + geom.width.powi(2) * b,
        flag,
        remainders: None,
    })
}
