use super::zero_extend;
use crate::error::{LabError, Result};
use crate::operators::{mode_eigenvalue, Completeness, DiscreteOperator, Dispersion, OperatorKind, Spectrum};
use rayon::prelude::*;
use serde::Serialize;
use std::io::Write;

/// Remainder terms of the trace identity for a grid Laplacian `L` on `Omega`,
/// the zero extension `J` into a torus and the torus Laplacian `L_hat`.
///
/// Dirichlet: `riesz + R'_< + R'_> = main`, `main = (#Omega/#torus) sum (lambda(xi) - Lambda)_-`.
/// Neumann: `riesz = main + R_< + R_>`, `main = -sum_{lambda(xi)<Lambda} <J* u_xi, (L - Lambda) J* u_xi>`.
#[derive(Clone, Debug, Serialize)]
pub struct FreeRemainders {
    pub lambda: f64,
    pub riesz: f64,
    pub main: f64,
    pub r_less: f64,
    pub r_greater: f64,
    /// Identity defect relative to `max(|main|, |riesz|)`.
    pub identity_residual: f64,
    /// Relative disagreement of `R'_>` computed from all eigenvectors and
    /// from the completeness relation, when both are available.
    pub trick_defect: Option<f64>,
}

fn pos(x: f64) -> f64 {
    x.max(0.0)
}

fn neg(x: f64) -> f64 {
    (-x).max(0.0)
}

/// Per-eigenvector overlaps `|<u_xi, J psi_n>|^2` are obtained by one DFT each.
/// Dirichlet needs only the eigenvectors below `Lambda` (the completeness
/// relation `sum_n |<u_xi, J psi_n>|^2 = #Omega/#torus` supplies the rest);
/// Neumann needs the full spectrum.
pub fn remainders_free(
    op: &DiscreteOperator,
    spectrum: &Spectrum,
    cutoff: f64,
    pad: usize,
    dispersion: Dispersion,
) -> Result<FreeRemainders> {
    if !matches!(op.kind(), OperatorKind::Laplacian) {
        return Err(LabError::InvalidInput("free remainders need a field-free Laplacian".into()));
    }
    let dirichlet = op.boundary_condition().is_dirichlet();
    let full = spectrum.completeness == Completeness::Full;
    if !dirichlet && !full {
        return Err(LabError::IncompleteSpectrum { requested: f64::INFINITY, complete_below: spectrum.complete_below() });
    }
    spectrum.require_complete_below(cutoff)?;
    let vectors = spectrum.vectors()?;
    let vals = &spectrum.eigenvalues;

    let probe = zero_extend(&vectors[0], op, pad)?;
    let dims = probe.dims();
    let h = op.spacing();
    let modes: Vec<f64> = (0..dims[1])
        .flat_map(|ky| (0..dims[0]).map(move |kx| (kx, ky)))
        .map(|(kx, ky)| mode_eigenvalue([kx, ky], dims, h, dispersion))
        .collect();
    let ratio = op.n() as f64 / modes.len() as f64;
    let cell = probe.cell_volume();

    struct PerVector {
        low: bool,
        // sum_xi w(lambda(xi)) O
        a: f64,
        b: f64,
        overlap: Option<Vec<f64>>,
    }
    let per: Vec<PerVector> = vectors
        .par_iter()
        .zip(vals.par_iter())
        .map(|(v, &lam)| -> Result<PerVector> {
            let ext = zero_extend(v, op, pad)?;
            let o: Vec<f64> = ext.mode_masses().iter().map(|m| m / cell).collect();
            let low = lam < cutoff;
            let (a, b) = if dirichlet {
                if low {
                    // R'_< weight
                    (modes.iter().zip(&o).map(|(&m, &w)| pos(m - cutoff) * w).sum(), 0.0)
                } else {
                    // direct R'_> weight
                    (0.0, modes.iter().zip(&o).map(|(&m, &w)| neg(m - cutoff) * w).sum())
                }
            } else {
                let above: f64 = modes.iter().zip(&o).filter(|(&m, _)| m >= cutoff).map(|(_, w)| w).sum();
                (above, 1.0 - above)
            };
            Ok(PerVector { low, a, b, overlap: (dirichlet && low).then_some(o) })
        })
        .collect::<Result<_>>()?;

    let riesz: f64 = vals.iter().filter(|&&l| l < cutoff).map(|&l| cutoff - l).sum();
    if dirichlet {
        let main = ratio * modes.iter().map(|&m| neg(m - cutoff)).sum::<f64>();
        let r_less: f64 = per.iter().filter(|p| p.low).map(|p| p.a).sum();
        let mut low_acc = vec![0.0; modes.len()];
        for p in per.iter().filter_map(|p| p.overlap.as_ref()) {
            for (acc, w) in low_acc.iter_mut().zip(p) {
                *acc += w;
            }
        }
        let trick: f64 = modes.iter().zip(&low_acc).map(|(&m, &w)| neg(m - cutoff) * (ratio - w)).sum();
        let (r_greater, trick_defect) = if full {
            let direct: f64 = per.iter().filter(|p| !p.low).map(|p| p.b).sum();
            (direct, Some((direct - trick).abs() / main.abs().max(f64::MIN_POSITIVE)))
        } else {
            (trick, None)
        };
        let scale = main.abs().max(riesz.abs()).max(f64::MIN_POSITIVE);
        let identity_residual = (riesz + r_less + r_greater - main).abs() / scale;
        Ok(FreeRemainders { lambda: cutoff, riesz, main, r_less, r_greater, identity_residual, trick_defect })
    } else {
        // part-one terms: R_< uses the mass at or above Lambda, R_> the mass below
        let mut r_less = 0.0;
        let mut r_greater = 0.0;
        let mut main = 0.0;
        for (p, &lam) in per.iter().zip(vals) {
            if lam < cutoff {
                r_less += (cutoff - lam) * p.a;
            } else {
                r_greater += (lam - cutoff) * p.b;
            }
            main -= (lam - cutoff) * p.b;
        }
        let scale = main.abs().max(riesz.abs()).max(f64::MIN_POSITIVE);
        let identity_residual = (riesz - (main + r_less + r_greater)).abs() / scale;
        Ok(FreeRemainders { lambda: cutoff, riesz, main, r_less, r_greater, identity_residual, trick_defect: None })
    }
}

pub fn write_remainder_csv<W: Write>(mut w: W, rows: &[FreeRemainders]) -> Result<()> {
    writeln!(w, "Lambda,riesz,main,R_less,R_greater,identity_residual")?;
    for r in rows {
        writeln!(w, "{},{},{},{},{},{}", r.lambda, r.riesz, r.main, r.r_less, r.r_greater, r.identity_residual)?;
    }
    Ok(())
}
