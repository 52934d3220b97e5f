//! Zero extension onto a torus, Fourier and Landau-level high-energy masses,
//! the two-projection inequality, and the free remainder terms.

mod landau;
mod projection;
mod remainders;

pub use landau::{
    landau_high_energy_mass, landau_kernel, landau_level_masses, landau_projection_apply, laguerre,
    magnetic_gradient_identity, truncation_radius, LandauKernel,
};
pub use projection::{projection_lemma_check, random_projection, ProjectionLemma};
pub use remainders::{remainders_free, write_remainder_csv, FreeRemainders};

use crate::error::{LabError, Result};
use crate::fourier::Fft2;
use crate::geometry::GridDomain;
use crate::operators::{mode_eigenvalue, DiscreteOperator, Dispersion};
use num_complex::Complex64;
use serde::Serialize;
use std::io::Write;

/// Default padding factor of the zero extension.
pub const DEFAULT_PAD: usize = 4;

/// A function on an `nx x ny` torus of spacing `h` (`ny = 1` in one
/// dimension), vanishing off `support`.
#[derive(Clone, Debug)]
pub struct ExtendedFunction {
    dim: usize,
    h: f64,
    nx: usize,
    ny: usize,
    /// Physical centre of torus cell `(0, 0)`.
    origin: [f64; 2],
    values: Vec<Complex64>,
    support: Vec<bool>,
}

impl ExtendedFunction {
    /// Wraps raw torus data; values off the support must vanish.
    pub fn new(
        dim: usize,
        h: f64,
        dims: [usize; 2],
        origin: [f64; 2],
        values: Vec<Complex64>,
        support: Vec<bool>,
    ) -> Result<Self> {
        let n = dims[0] * dims[1];
        if values.len() != n || support.len() != n || (dim == 1 && dims[1] != 1) {
            return Err(LabError::InvalidInput("torus data of inconsistent size".into()));
        }
        if values.iter().zip(&support).any(|(v, &s)| !s && *v != Complex64::default()) {
            return Err(LabError::InvalidInput("nonzero value off the support".into()));
        }
        Ok(Self { dim, h, nx: dims[0], ny: dims[1], origin, values, support })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn spacing(&self) -> f64 {
        self.h
    }
    pub fn dims(&self) -> [usize; 2] {
        [self.nx, self.ny]
    }
    pub fn origin(&self) -> [f64; 2] {
        self.origin
    }
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
    pub fn support(&self) -> &[bool] {
        &self.support
    }

    pub fn cell_center(&self, ix: usize, iy: usize) -> [f64; 2] {
        [self.origin[0] + ix as f64 * self.h, self.origin[1] + iy as f64 * self.h]
    }

    pub fn cell_volume(&self) -> f64 {
        self.h.powi(self.dim as i32)
    }

    /// `h^d sum |f|^2`.
    pub fn norm_sqr(&self) -> f64 {
        self.cell_volume() * self.values.iter().map(|v| v.norm_sqr()).sum::<f64>()
    }

    /// Bounding box `(ix0, iy0, ix1, iy1)` (inclusive) of the support.
    pub fn support_box(&self) -> Option<[usize; 4]> {
        let mut b: Option<[usize; 4]> = None;
        for iy in 0..self.ny {
            for ix in 0..self.nx {
                if self.support[iy * self.nx + ix] {
                    b = Some(match b {
                        None => [ix, iy, ix, iy],
                        Some(q) => [q[0].min(ix), q[1].min(iy), q[2].max(ix), q[3].max(iy)],
                    });
                }
            }
        }
        b
    }

    /// `<self, other> = h^d sum conj(f) g`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        let s: Complex64 = self.values.iter().zip(&other.values).map(|(a, b)| a.conj() * b).sum();
        s * self.cell_volume()
    }

    /// `sum_modes |F(k)|^2 h^d / N`: per-mode masses in DFT order.
    pub fn mode_masses(&self) -> Vec<f64> {
        let mut buf = self.values.clone();
        Fft2::new(self.nx, self.ny).forward(&mut buf);
        let w = self.cell_volume() / buf.len() as f64;
        buf.iter().map(|c| c.norm_sqr() * w).collect()
    }
}

/// Places a raster on `domain` (row-major, zero outside the mask) in the
/// middle of a torus `pad` times larger per side.
pub fn zero_extend_raster(raster: &[Complex64], domain: &GridDomain, pad: usize) -> Result<ExtendedFunction> {
    if pad < 2 {
        return Err(LabError::InvalidInput(format!("pad factor {pad} must be at least 2")));
    }
    let (nx, ny) = (domain.nx(), domain.ny());
    if raster.len() != nx * ny {
        return Err(LabError::InvalidInput("raster does not match the domain".into()));
    }
    let dim = domain.dim();
    let tx = pad * nx;
    let ty = if dim == 1 { 1 } else { pad * ny };
    let (ox, oy) = ((tx - nx) / 2, (ty - ny) / 2);
    let mut values = vec![Complex64::default(); tx * ty];
    let mut support = vec![false; tx * ty];
    for iy in 0..ny {
        for ix in 0..nx {
            if domain.mask()[iy * nx + ix] {
                let t = (iy + oy) * tx + ix + ox;
                values[t] = raster[iy * nx + ix];
                support[t] = true;
            }
        }
    }
    let h = domain.spacing();
    let o = domain.origin();
    let origin = [o[0] - ox as f64 * h, o[1] - oy as f64 * h];
    ExtendedFunction::new(dim, h, [tx, ty], origin, values, support)
}

/// Zero extension of a vector indexed like `op`'s unknowns.
pub fn zero_extend(psi: &[Complex64], op: &DiscreteOperator, pad: usize) -> Result<ExtendedFunction> {
    if psi.len() != op.n() {
        return Err(LabError::InvalidInput(format!("vector of length {} for {} unknowns", psi.len(), op.n())));
    }
    zero_extend_raster(&op.to_raster(psi), op.domain(), pad)
}

/// Split of `||f||^2` at a cutoff.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectralMass {
    pub lambda: f64,
    pub mass_low: f64,
    pub mass_high: f64,
    pub total: f64,
}

impl SpectralMass {
    pub fn relative_high(&self) -> f64 {
        if self.total > 0.0 {
            self.mass_high / self.total
        } else {
            0.0
        }
    }

    /// `|low + high - total| / total`.
    pub fn parseval_defect(&self) -> f64 {
        (self.mass_low + self.mass_high - self.total).abs() / self.total.max(f64::MIN_POSITIVE)
    }
}

/// Fourier masses of one function, reusable across cutoffs.
#[derive(Clone, Debug)]
pub struct FourierProfile {
    /// `(mode eigenvalue, mass)` sorted by eigenvalue.
    modes: Vec<(f64, f64)>,
    /// `suffix[i] = sum_{j >= i} mass_j`.
    suffix: Vec<f64>,
    total: f64,
}

impl FourierProfile {
    pub fn new(f: &ExtendedFunction, dispersion: Dispersion) -> Self {
        let masses = f.mode_masses();
        let [nx, ny] = f.dims();
        let mut modes = Vec::with_capacity(masses.len());
        for ky in 0..ny {
            for kx in 0..nx {
                let ev = mode_eigenvalue([kx, ky], [nx, ny], f.spacing(), dispersion);
                modes.push((ev, masses[ky * nx + kx]));
            }
        }
        modes.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut suffix = vec![0.0; modes.len() + 1];
        for i in (0..modes.len()).rev() {
            suffix[i] = suffix[i + 1] + modes[i].1;
        }
        Self { modes, suffix, total: f.norm_sqr() }
    }

    /// Mass of the modes with eigenvalue strictly above `cutoff`.
    pub fn at(&self, cutoff: f64) -> SpectralMass {
        let first = self.modes.partition_point(|m| m.0 <= cutoff);
        let mass_high = self.suffix[first];
        SpectralMass { lambda: cutoff, mass_low: self.suffix[0] - mass_high, mass_high, total: self.total }
    }

    /// Largest mode eigenvalue.
    pub fn max_eigenvalue(&self) -> f64 {
        self.modes.last().map_or(0.0, |m| m.0)
    }
}

/// `sum_{lambda(k) > Lambda} |f^(k)|^2`, normalized so that the parts add
/// up to `||f||^2`.
pub fn high_energy_mass(f: &ExtendedFunction, cutoff: f64, dispersion: Dispersion) -> Result<SpectralMass> {
    if !(cutoff >= 0.0) {
        return Err(LabError::InvalidInput(format!("cutoff {cutoff} must be nonnegative")));
    }
    Ok(FourierProfile::new(f, dispersion).at(cutoff))
}

/// One row of an uncertainty sweep.
#[derive(Clone, Debug, Serialize)]
pub struct UncertaintyRow {
    pub n: usize,
    pub lambda_n: f64,
    pub lambda: f64,
    pub mass_high_rel: f64,
    pub rho_theta: f64,
    pub e_arg: f64,
}

pub fn write_uncertainty_csv<W: Write>(mut w: W, rows: &[UncertaintyRow]) -> Result<()> {
    writeln!(w, "n,lambda_n,Lambda,mass_high_rel,rho_theta,E")?;
    for r in rows {
        writeln!(w, "{},{},{},{},{},{}", r.n, r.lambda_n, r.lambda, r.mass_high_rel, r.rho_theta, r.e_arg)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_cell() -> ExtendedFunction {
        let d = GridDomain::full_box(2, 0.25, [0.125, 0.125], 4, 4).unwrap();
        let mut r = vec![Complex64::default(); 16];
        r[5] = Complex64::new(1.0, 0.0);
        zero_extend_raster(&r, &d, 2).unwrap()
    }

    #[test]
    fn single_cell_norm() {
        let f = unit_cell();
        assert!((f.norm_sqr() - 0.0625).abs() < 1e-15);
        assert_eq!(f.dims(), [8, 8]);
        // centre of the torus cell holding the value is the original one
        let idx = f.values().iter().position(|v| v.re == 1.0).unwrap();
        let c = f.cell_center(idx % 8, idx / 8);
        assert!((c[0] - 0.375).abs() < 1e-15 && (c[1] - 0.375).abs() < 1e-15);
    }

    #[test]
    fn mass_limits() {
        let f = unit_cell();
        for disp in [Dispersion::Discrete, Dispersion::Continuum] {
            let p = FourierProfile::new(&f, disp);
            let top = p.at(p.max_eigenvalue());
            assert_eq!(top.mass_high, 0.0);
            assert!(top.parseval_defect() < 1e-12);
            let m = p.at(0.0);
            assert!(m.mass_high > 0.0 && m.mass_high < m.total);
        }
    }

    #[test]
    fn mean_free_function_is_all_high() {
        let d = GridDomain::full_box(1, 0.25, [0.125, 0.0], 4, 1).unwrap();
        let r: Vec<Complex64> = [1.0, -1.0, 1.0, -1.0].iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let f = zero_extend_raster(&r, &d, 2).unwrap();
        let m = high_energy_mass(&f, 0.0, Dispersion::Continuum).unwrap();
        assert!((m.mass_high - m.total).abs() < 1e-14);
    }
}
