use super::config::ExperimentConfig;
use super::pipeline::{bound_series, build_operator, first_violation, uncertainty_rows, BoundSeries};
use super::plot::{log_scatter_svg, Series};
use crate::abstract_traces::{upper_bound_strictness, verify_suite};
use crate::error::{LabError, Result};
use crate::geometry::{complement_thickness, regularized_inradius_scan, GridDomain};
use crate::operators::{
    eigensolve, landau_levels, write_spectrum_csv, BoundaryCondition, EigenOptions, EigenRequest, SpectrumMeta,
};
use crate::semiclassics::{fit_improvement_constants, BoundFlag, BoundReport, DomainGeometry, ImprovementFit};
use crate::uncertainty::{remainders_free, write_remainder_csv, write_uncertainty_csv, FreeRemainders};
use serde::Serialize;
use serde_json::{json, Value};
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    fs::create_dir_all(dir)?;
    Ok(BufWriter::new(File::create(dir.join(name))?))
}

fn write_json(dir: &Path, name: &str, v: &impl Serialize) -> Result<()> {
    let mut w = create(dir, name)?;
    serde_json::to_writer_pretty(&mut w, v).map_err(|e| LabError::Config(e.to_string()))?;
    writeln!(w)?;
    Ok(())
}

fn geometry_of(cfg: &ExperimentConfig) -> Result<(GridDomain, DomainGeometry)> {
    let (label, domain) = cfg.domain()?;
    let geom = DomainGeometry::compute(&label, &domain, cfg.theta, cfg.tol)?;
    Ok((domain, geom))
}

/// `geometry`: measure, inradius, width, regularized inradius and the
/// complement thickness certificate `(rho_theta + 2h, 1 - theta - 0.05)`.
pub fn run_geometry(cfg: &ExperimentConfig) -> Result<Value> {
    let (domain, geom) = geometry_of(cfg)?;
    let scan = regularized_inradius_scan(&domain, cfg.theta, cfg.tol)?;
    let cert = complement_thickness(&domain, geom.rho_theta + 2.0 * cfg.h, 1.0 - cfg.theta - 0.05)?;
    let out = json!({
        "domain": geom.label,
        "domain_hash": domain.content_hash(),
        "cells": domain.active_count(),
        "h": cfg.h,
        "measure": geom.measure,
        "inradius": geom.inradius,
        "width": geom.width,
        "theta": cfg.theta,
        "rho_theta": geom.rho_theta,
        "sup_ratio_at_rho_theta": scan.sup_ratio,
        "complement_thickness": cert,
    });
    write_json(&cfg.out, "geometry.json", &out)?;
    Ok(out)
}

/// `spectrum`: eigenvalues per boundary condition (`count` lowest, or all
/// below the largest cutoff).
pub fn run_spectrum(cfg: &ExperimentConfig) -> Result<Value> {
    let (_, domain) = cfg.domain()?;
    let top = cfg.lambdas.iter().copied().fold(0.0, f64::max);
    let mut counts = serde_json::Map::new();
    for &bc in &cfg.bcs {
        let op = build_operator(&domain, bc, cfg.b)?;
        let request = cfg.count.map_or(EigenRequest::Below(top), EigenRequest::Lowest);
        let s = eigensolve(&op, request, &EigenOptions::values_only())?;
        let meta = SpectrumMeta { h: cfg.h, bc: bc.to_string(), b: cfg.b, domain_hash: domain.content_hash() };
        write_spectrum_csv(create(&cfg.out, &format!("spectrum_{bc}.csv"))?, &s, &meta)?;
        counts.insert(bc.to_string(), json!({ "eigenvalues": s.len(), "complete_below": s.complete_below() }));
    }
    let out = Value::Object(counts);
    write_json(&cfg.out, "spectrum.json", &out)?;
    Ok(out)
}

fn write_bounds(dir: &Path, name: &str, series: &[BoundSeries]) -> Result<()> {
    let mut w = create(dir, name)?;
    writeln!(w, "{}", BoundReport::csv_header())?;
    for s in series {
        for r in &s.reports {
            writeln!(w, "{}", r.csv_row())?;
        }
    }
    Ok(())
}

fn gap_plot(dir: &Path, name: &str, title: &str, series: &[BoundSeries]) -> Result<()> {
    let mut plot = Vec::new();
    for s in series {
        let mut gammas: Vec<f64> = s.reports.iter().map(|r| r.gamma).collect();
        gammas.dedup();
        for g in gammas {
            let points = s
                .reports
                .iter()
                .filter(|r| r.gamma == g && r.flag == BoundFlag::Ok)
                .map(|r| (r.e_arg, r.gap))
                .collect();
            plot.push(Series { label: format!("{} gamma={g}", s.label()), points });
        }
    }
    let svg = log_scatter_svg(title, "E", "gap |1 - ratio|", &plot);
    create(dir, name)?.write_all(svg.as_bytes())?;
    Ok(())
}

#[derive(Serialize)]
struct FitRow {
    series: String,
    gamma: f64,
    #[serde(flatten)]
    fit: Option<ImprovementFit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn fits(series: &[BoundSeries]) -> Result<Vec<FitRow>> {
    let mut out = Vec::new();
    for s in series {
        let mut gammas: Vec<f64> = s.reports.iter().map(|r| r.gamma).collect();
        gammas.dedup();
        for g in gammas {
            let rows: Vec<BoundReport> = s.reports.iter().filter(|r| r.gamma == g).cloned().collect();
            if rows.iter().all(|r| r.flag == BoundFlag::PolyaNoBound) {
                continue;
            }
            match fit_improvement_constants(&rows) {
                Ok(f) => out.push(FitRow { series: s.label(), gamma: g, fit: Some(f), error: None }),
                Err(e @ LabError::BoundViolation(_)) => return Err(e),
                Err(e) => out.push(FitRow { series: s.label(), gamma: g, fit: None, error: Some(e.to_string()) }),
            }
        }
    }
    Ok(out)
}

fn sweep(cfg: &ExperimentConfig, b: f64, vectors: bool) -> Result<(GridDomain, DomainGeometry, Vec<BoundSeries>)> {
    let (domain, geom) = geometry_of(cfg)?;
    let series = cfg
        .bcs
        .iter()
        .map(|&bc| bound_series(&geom, &domain, bc, b, &cfg.gammas, &cfg.lambdas, cfg.allow_beyond_cap, vectors))
        .collect::<Result<Vec<_>>>()?;
    Ok((domain, geom, series))
}

/// `bounds`: ratio sweeps per boundary condition and order; a violation
/// under the cap is an error carrying the offending row (artifacts are
/// written first).
pub fn run_bounds(cfg: &ExperimentConfig) -> Result<Value> {
    let (_, geom, series) = sweep(cfg, cfg.b, false)?;
    write_bounds(&cfg.out, "bounds.csv", &series)?;
    gap_plot(&cfg.out, "gap_vs_E.svg", &format!("{}: gap vs E", geom.label), &series)?;
    for s in &series {
        first_violation(&s.reports)?;
    }
    let fitted = fits(&series)?;
    let out = json!({ "domain": geom.label, "rows": series.iter().map(|s| s.reports.len()).sum::<usize>(), "fits": fitted });
    write_json(&cfg.out, "bounds.json", &out)?;
    Ok(out)
}

/// `landau`: lowest Peierls eigenvalues against the Landau levels, magnetic
/// bound sweeps and magnetic high-energy masses.
pub fn run_landau(cfg: &ExperimentConfig) -> Result<Value> {
    let b = if cfg.b > 0.0 { cfg.b } else { 1.0 };
    let (domain, geom) = geometry_of(cfg)?;
    let count = cfg.count.unwrap_or(8);
    let lowest = {
        let op = build_operator(&domain, BoundaryCondition::Dirichlet, b)?;
        eigensolve(&op, EigenRequest::Lowest(count), &EigenOptions::values_only())?
    };
    let mut w = create(&cfg.out, "landau_levels.csv")?;
    writeln!(w, "index,eigenvalue,nearest_level,relative_deviation")?;
    for (i, &l) in lowest.eigenvalues.iter().enumerate() {
        let k = ((l / b + 1.0) / 2.0).round().max(1.0);
        let level = b * (2.0 * k - 1.0);
        writeln!(w, "{},{},{},{}", i + 1, l, level, (l - level) / level)?;
    }
    drop(w);
    let series = cfg
        .bcs
        .iter()
        .map(|&bc| bound_series(&geom, &domain, bc, b, &cfg.gammas, &cfg.lambdas, cfg.allow_beyond_cap, true))
        .collect::<Result<Vec<_>>>()?;
    write_bounds(&cfg.out, "bounds_magnetic.csv", &series)?;
    gap_plot(&cfg.out, "gap_vs_E.svg", &format!("{} B={b}: gap vs E", geom.label), &series)?;
    let mut rows = Vec::new();
    for s in &series {
        rows.extend(uncertainty_rows(s, geom.rho_theta, &cfg.lambdas, cfg.pad, cfg.dispersion)?);
    }
    write_uncertainty_csv(create(&cfg.out, "uncertainty_magnetic.csv")?, &rows)?;
    for s in &series {
        first_violation(&s.reports)?;
    }
    let min_mass = rows.iter().map(|r| r.mass_high_rel).fold(f64::INFINITY, f64::min);
    let out = json!({
        "B": b,
        "lowest_eigenvalue": lowest.eigenvalues.first(),
        "levels_below_cutoff": landau_levels(b, cfg.lambdas.iter().copied().fold(0.0, f64::max)),
        "min_relative_high_mass": if rows.is_empty() { Value::Null } else { json!(min_mass) },
        "fits": fits(&series)?,
    });
    write_json(&cfg.out, "landau.json", &out)?;
    Ok(out)
}

/// `uncertainty`: high-energy masses of the eigenfunctions below each
/// cutoff and, without field, the remainder terms.
pub fn run_uncertainty(cfg: &ExperimentConfig) -> Result<Value> {
    let (domain, geom, series) = sweep(cfg, cfg.b, true)?;
    let mut rows = Vec::new();
    for s in &series {
        rows.extend(uncertainty_rows(s, geom.rho_theta, &cfg.lambdas, cfg.pad, cfg.dispersion)?);
    }
    write_uncertainty_csv(create(&cfg.out, "uncertainty.csv")?, &rows)?;
    let plot: Vec<Series> = vec![Series {
        label: geom.label.clone(),
        points: rows.iter().map(|r| (r.e_arg, r.mass_high_rel)).collect(),
    }];
    create(&cfg.out, "mass_vs_E.svg")?.write_all(log_scatter_svg("high-energy mass", "E", "relative mass", &plot).as_bytes())?;

    let mut remainders = serde_json::Map::new();
    if cfg.b == 0.0 {
        for &bc in &cfg.bcs {
            let op = build_operator(&domain, bc, 0.0)?;
            let request = if bc.is_dirichlet() {
                EigenRequest::Below(cfg.lambdas.iter().copied().fold(0.0, f64::max))
            } else {
                EigenRequest::All
            };
            let spec = match eigensolve(&op, request, &EigenOptions::default()) {
                Ok(s) => s,
                Err(LabError::DenseCapExceeded { n, cap }) => {
                    log::warn!("{bc}: remainders need all {n} eigenpairs (dense cap {cap}); skipped");
                    continue;
                }
                Err(e) => return Err(e),
            };
            let rem: Vec<FreeRemainders> = cfg
                .lambdas
                .iter()
                .map(|&l| remainders_free(&op, &spec, l, cfg.pad, cfg.dispersion))
                .collect::<Result<_>>()?;
            write_remainder_csv(create(&cfg.out, &format!("remainders_{bc}.csv"))?, &rem)?;
            let min = rem.iter().map(|r| r.r_less.min(r.r_greater)).fold(f64::INFINITY, f64::min);
            remainders.insert(bc.to_string(), json!({ "min_remainder": min }));
        }
    }
    let out = json!({
        "rows": rows.len(),
        "min_relative_high_mass": rows.iter().map(|r| r.mass_high_rel).fold(f64::INFINITY, f64::min),
        "remainders": remainders,
    });
    write_json(&cfg.out, "uncertainty.json", &out)?;
    Ok(out)
}

/// `verify-lemma`: the randomized suite of both exact identities, plus the
/// strictness frequency of the finite upper bound.
pub fn run_verify_lemma(cfg: &ExperimentConfig) -> Result<Value> {
    let summary = verify_suite(cfg.trials, cfg.seed, 12, 30);
    write_json(&cfg.out, "verify_lemma.json", &summary)?;
    let strictness = upper_bound_strictness(cfg.trials, cfg.seed ^ 0xb1c)?;
    write_json(&cfg.out, "bly_kroger.json", &strictness)?;
    if summary.failures > 0 {
        return Err(LabError::IdentityResidual { residual: summary.max_residual, threshold: 1e-10 });
    }
    Ok(json!({ "suite": summary, "upper_bound": strictness }))
}

/// `report`: geometry, bound sweeps with fitted constants, uncertainty
/// masses and the identity suite, with a summary.
pub fn run_report(cfg: &ExperimentConfig) -> Result<Value> {
    let geometry = run_geometry(cfg)?;
    let (_, geom, series) = sweep(cfg, cfg.b, true)?;
    write_bounds(&cfg.out, "bounds.csv", &series)?;
    gap_plot(&cfg.out, "gap_vs_E.svg", &format!("{}: gap vs E", geom.label), &series)?;
    for s in &series {
        first_violation(&s.reports)?;
    }
    let fitted = fits(&series)?;
    let mut rows = Vec::new();
    for s in &series {
        rows.extend(uncertainty_rows(s, geom.rho_theta, &cfg.lambdas, cfg.pad, cfg.dispersion)?);
    }
    write_uncertainty_csv(create(&cfg.out, "uncertainty.csv")?, &rows)?;
    let lemma = run_verify_lemma(cfg)?;
    let out = json!({
        "geometry": geometry,
        "fits": fitted,
        "min_relative_high_mass": rows.iter().map(|r| r.mass_high_rel).fold(f64::INFINITY, f64::min),
        "verify_lemma": lemma,
    });
    write_json(&cfg.out, "summary.json", &out)?;
    Ok(out)
}
