use crate::error::{LabError, Result};
use crate::geometry::GridDomain;
use crate::operators::{
    eigensolve, landau_hamiltonian, laplacian, BoundaryCondition, DiscreteOperator, Dispersion, EigenOptions,
    EigenRequest, LandauParams, Spectrum,
};
use crate::semiclassics::{bound_report, BoundFlag, BoundReport, DomainGeometry, RieszQuery};
use crate::uncertainty::{landau_level_masses, zero_extend, FourierProfile, UncertaintyRow};
use rayon::prelude::*;

/// Centre of the raster's bounding box (the default gauge origin).
pub fn domain_center(domain: &GridDomain) -> [f64; 2] {
    let o = domain.origin();
    let h = domain.spacing();
    [o[0] + 0.5 * (domain.nx() as f64 - 1.0) * h, o[1] + 0.5 * (domain.ny() as f64 - 1.0) * h]
}

/// Laplacian for `b = 0`, Peierls Hamiltonian gauged at the domain centre otherwise.
pub fn build_operator(domain: &GridDomain, bc: BoundaryCondition, b: f64) -> Result<DiscreteOperator> {
    if b == 0.0 {
        laplacian(domain, bc)
    } else {
        let params = LandauParams::new(b)?.with_gauge_origin(domain_center(domain));
        landau_hamiltonian(domain, params, bc)
    }
}

/// Field parameters of an operator, if magnetic.
pub fn landau_params(op: &DiscreteOperator) -> Option<LandauParams> {
    match op.kind() {
        crate::operators::OperatorKind::Landau(p) => Some(*p),
        _ => None,
    }
}

/// Spectrum below the largest cutoff plus one report per `(gamma, Lambda)`.
pub struct BoundSeries {
    pub bc: BoundaryCondition,
    pub b: f64,
    pub op: DiscreteOperator,
    pub spectrum: Spectrum,
    pub reports: Vec<BoundReport>,
}

impl BoundSeries {
    pub fn label(&self) -> String {
        if self.b > 0.0 {
            format!("{} B={}", self.bc, self.b)
        } else {
            self.bc.to_string()
        }
    }
}

#[allow(clippy::too_many_arguments)]
pub fn bound_series(
    geom: &DomainGeometry,
    domain: &GridDomain,
    bc: BoundaryCondition,
    b: f64,
    gammas: &[f64],
    lambdas: &[f64],
    allow_beyond_cap: bool,
    vectors: bool,
) -> Result<BoundSeries> {
    let op = build_operator(domain, bc, b)?;
    let top = lambdas.iter().copied().fold(0.0, f64::max);
    let opts = EigenOptions { vectors, ..EigenOptions::default() };
    let spectrum = eigensolve(&op, EigenRequest::Below(top), &opts)?;
    let mut reports = Vec::with_capacity(gammas.len() * lambdas.len());
    for &g in gammas {
        for &l in lambdas {
            reports.push(bound_report(geom, &spectrum, RieszQuery::new(l, g)?, b, bc, allow_beyond_cap)?);
        }
    }
    Ok(BoundSeries { bc, b, op, spectrum, reports })
}

/// The first row flagged as a violation, as an error carrying the row.
pub fn first_violation(reports: &[BoundReport]) -> Result<()> {
    match reports.iter().find(|r| r.flag == BoundFlag::Violation) {
        Some(r) => Err(LabError::BoundViolation(format!("{}\n{}", BoundReport::csv_header(), r.csv_row()))),
        None => Ok(()),
    }
}

/// High-energy masses of every eigenfunction below each cutoff: Fourier
/// masses for `B = 0`, Landau-level masses otherwise.
pub fn uncertainty_rows(
    series: &BoundSeries,
    rho_theta: f64,
    lambdas: &[f64],
    pad: usize,
    dispersion: Dispersion,
) -> Result<Vec<UncertaintyRow>> {
    let vectors = series.spectrum.vectors()?;
    let vals = &series.spectrum.eigenvalues;
    let params = landau_params(&series.op);
    let top = lambdas.iter().copied().fold(0.0, f64::max);
    let per: Vec<Vec<UncertaintyRow>> = vectors
        .par_iter()
        .zip(vals.par_iter())
        .enumerate()
        .map(|(n, (v, &lam))| -> Result<Vec<UncertaintyRow>> {
            let f = zero_extend(v, &series.op, pad)?;
            let total = f.norm_sqr();
            let mut rows = Vec::new();
            let high: Box<dyn Fn(f64) -> f64> = match params {
                None => {
                    let prof = FourierProfile::new(&f, dispersion);
                    Box::new(move |l| prof.at(l).relative_high())
                }
                Some(p) => {
                    let kmax = if top < p.b { 0 } else { ((top / p.b + 1.0) / 2.0).floor() as usize };
                    let levels = landau_level_masses(&f, &p, kmax)?;
                    let rest = total - levels.iter().sum::<f64>();
                    if rest < -1e-6 * total {
                        return Err(LabError::NegativeMass(rest));
                    }
                    Box::new(move |l| {
                        let low: f64 = levels.iter().enumerate().filter(|(k, _)| p.b * (2 * k + 1) as f64 <= l).map(|(_, m)| m).sum();
                        ((total - low) / total).max(0.0)
                    })
                }
            };
            for &l in lambdas.iter().filter(|&&l| lam < l) {
                let e_arg = rho_theta * l.sqrt() + rho_theta * rho_theta * series.b;
                rows.push(UncertaintyRow { n: n + 1, lambda_n: lam, lambda: l, mass_high_rel: high(l), rho_theta, e_arg });
            }
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    Ok(per.into_iter().flatten().collect())
}
