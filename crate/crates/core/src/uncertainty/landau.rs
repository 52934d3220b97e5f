//! Landau-level projections in the symmetric gauge
//! `A(x) = (B/2) (x2 - a2, -(x1 - a1))`, for `H = (-i grad + A)^2`.
//!
//! The lowest level is spanned by `g(z) e^{-B|x-a|^2/4}` with `g` entire in
//! `z = (x1 - a1) + i (x2 - a2)`; ladder operators built from the magnetic
//! momenta give the kernel of the spectral projection onto `B(2k-1)`:
//!
//! `K_k(x, y) = (B/2pi) e^{i(B/2)(x2 y1 - x1 y2)} e^{-B|x-y|^2/4} L_{k-1}(B|x-y|^2/2)`
//!
//! (coordinates relative to `a`). The diagonal is `B/2pi`; idempotency and
//! the eigen-relation are checked numerically in the tests.

use super::{ExtendedFunction, SpectralMass};
use crate::error::{LabError, Result};
use crate::operators::LandauParams;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Relative size below which the kernel is dropped.
const KERNEL_CUTOFF: f64 = 1e-12;

/// Laguerre polynomial `L_n(t)` by the three-term recurrence.
pub fn laguerre(n: usize, t: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 1.0 - t);
    if n == 0 {
        return prev;
    }
    for m in 1..n {
        let next = ((2 * m + 1) as f64 - t) * cur / (m + 1) as f64 - m as f64 * prev / (m + 1) as f64;
        prev = cur;
        cur = next;
    }
    cur
}

/// Kernel of the projection onto level `k >= 1`.
#[derive(Clone, Copy, Debug)]
pub struct LandauKernel {
    pub b: f64,
    pub k: usize,
    pub gauge_origin: [f64; 2],
}

impl LandauKernel {
    pub fn new(params: &LandauParams, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(LabError::InvalidInput("Landau levels are numbered from 1".into()));
        }
        Ok(Self { b: params.b, k, gauge_origin: params.gauge_origin })
    }

    /// Modulus part as a function of `|x - y|^2`.
    pub fn radial(&self, dist_sqr: f64) -> f64 {
        self.b / (2.0 * PI) * (-self.b * dist_sqr / 4.0).exp() * laguerre(self.k - 1, self.b * dist_sqr / 2.0)
    }

    pub fn eval(&self, x: [f64; 2], y: [f64; 2]) -> Complex64 {
        let a = self.gauge_origin;
        let (x1, x2, y1, y2) = (x[0] - a[0], x[1] - a[1], y[0] - a[0], y[1] - a[1]);
        let d = (x1 - y1).powi(2) + (x2 - y2).powi(2);
        Complex64::from_polar(self.radial(d), 0.5 * self.b * (x2 * y1 - x1 * y2))
    }

    /// Radius beyond which `|K| < 1e-12 B/2pi`.
    pub fn truncation_radius(&self) -> f64 {
        truncation_radius(self.b, self.k)
    }
}

/// `K_k(x, y)` for the given field and gauge.
pub fn landau_kernel(params: &LandauParams, k: usize, x: [f64; 2], y: [f64; 2]) -> Result<Complex64> {
    Ok(LandauKernel::new(params, k)?.eval(x, y))
}

/// Smallest radius with `e^{-s/2} |L_{k-1}(s)| < 1e-12` for all `s = B r^2/2` beyond it.
pub fn truncation_radius(b: f64, k: usize) -> f64 {
    let n = k.saturating_sub(1);
    let s_max = 120.0 + 8.0 * n as f64;
    let steps = (s_max * 200.0) as usize;
    let mut last = 0.0;
    for i in 0..=steps {
        let s = s_max * i as f64 / steps as f64;
        if (-s / 2.0).exp() * laguerre(n, s).abs() >= KERNEL_CUTOFF {
            last = s;
        }
    }
    let s = last + s_max / steps as f64;
    (2.0 * s / b).sqrt()
}

fn check_planar(f: &ExtendedFunction) -> Result<()> {
    if f.dim() != 2 {
        return Err(LabError::InvalidInput("Landau projections are two-dimensional".into()));
    }
    Ok(())
}

/// `(Pi_k f)(x) = h^2 sum_y K_k(x, y) f(y)` on the torus grid (no wrap);
/// returns the projected function and its squared norm.
pub fn landau_projection_apply(
    f: &ExtendedFunction,
    k: usize,
    params: &LandauParams,
) -> Result<(ExtendedFunction, f64)> {
    check_planar(f)?;
    let kernel = LandauKernel::new(params, k)?;
    let h = f.spacing();
    let [nx, ny] = f.dims();
    let radius = kernel.truncation_radius();
    let rc = (radius / h).floor() as usize;
    let Some([x0, y0, x1, y1]) = f.support_box() else {
        return Ok((f.clone(), 0.0));
    };
    if x0 < rc || y0 < rc || x1 + rc >= nx || y1 + rc >= ny {
        return Err(LabError::TruncationExceedsTorus { radius });
    }
    let ri = rc as isize;
    let mut offsets = Vec::new();
    for j in -ri..=ri {
        for i in -ri..=ri {
            let s = ((i * i + j * j) as f64) * h * h;
            if s <= radius * radius {
                offsets.push((i, j, kernel.radial(s) * h * h));
            }
        }
    }
    let mut out = vec![Complex64::default(); nx * ny];
    let mut support = vec![false; nx * ny];
    let span = 2 * rc + 1;
    let mut alpha = vec![Complex64::default(); span];
    let mut beta = vec![Complex64::default(); span];
    let a = params.gauge_origin;
    for iy in y0..=y1 {
        for ix in x0..=x1 {
            let src = f.values()[iy * nx + ix];
            if src == Complex64::default() {
                continue;
            }
            let y = f.cell_center(ix, iy);
            // phase for x = y + (i, j) h: (B/2) h (j y1 - i y2)
            powers(0.5 * params.b * h * (y[0] - a[0]), rc, &mut alpha);
            powers(-0.5 * params.b * h * (y[1] - a[1]), rc, &mut beta);
            for &(i, j, g) in &offsets {
                let t = (iy as isize + j) as usize * nx + (ix as isize + i) as usize;
                out[t] += src * g * alpha[(j + ri) as usize] * beta[(i + ri) as usize];
                support[t] = true;
            }
        }
    }
    let g = ExtendedFunction::new(2, h, [nx, ny], f.origin(), out, support)?;
    let n2 = g.norm_sqr();
    Ok((g, n2))
}

/// `out[m + r] = e^{i m w}` for `m` in `[-r, r]`.
fn powers(w: f64, r: usize, out: &mut [Complex64]) {
    let step = Complex64::from_polar(1.0, w);
    out[r] = Complex64::new(1.0, 0.0);
    for m in 1..=r {
        out[r + m] = out[r + m - 1] * step;
        out[r - m] = out[r + m].conj();
    }
}

/// `<f, Pi_k f>` for `k = 1..=kmax`, i.e. `||Pi_k f||^2`, from the
/// quadratic form over the support (no truncation, no torus constraint).
pub fn landau_level_masses(f: &ExtendedFunction, params: &LandauParams, kmax: usize) -> Result<Vec<f64>> {
    check_planar(f)?;
    let h = f.spacing();
    let [nx, _] = f.dims();
    let Some([x0, y0, x1, y1]) = f.support_box() else {
        return Ok(vec![0.0; kmax]);
    };
    let pts: Vec<(isize, isize, Complex64)> = (y0..=y1)
        .flat_map(|iy| (x0..=x1).map(move |ix| (ix, iy)))
        .filter_map(|(ix, iy)| {
            let v = f.values()[iy * nx + ix];
            (v != Complex64::default()).then_some((ix as isize, iy as isize, v))
        })
        .collect();
    let (w, hgt) = (x1 - x0, y1 - y0);
    let (sw, sh) = (2 * w + 1, 2 * hgt + 1);
    let a = params.gauge_origin;
    let mut masses = Vec::with_capacity(kmax);
    for k in 1..=kmax {
        let kernel = LandauKernel::new(params, k)?;
        let mut table = vec![0.0; sw * sh];
        for dy in 0..sh {
            for dx in 0..sw {
                let (i, j) = (dx as f64 - w as f64, dy as f64 - hgt as f64);
                table[dy * sw + dx] = kernel.radial((i * i + j * j) * h * h);
            }
        }
        let total: Complex64 = pts
            .par_iter()
            .map(|&(yx, yy, fy)| {
                let c = f.cell_center(yx as usize, yy as usize);
                let mut alpha = vec![Complex64::default(); 2 * hgt + 1];
                let mut beta = vec![Complex64::default(); 2 * w + 1];
                powers(0.5 * params.b * h * (c[0] - a[0]), hgt, &mut alpha);
                powers(-0.5 * params.b * h * (c[1] - a[1]), w, &mut beta);
                let mut acc = Complex64::default();
                for &(xx, xy, fx) in &pts {
                    let (i, j) = (xx - yx + w as isize, xy - yy + hgt as isize);
                    let g = table[j as usize * sw + i as usize];
                    acc += fx.conj() * g * alpha[j as usize] * beta[i as usize];
                }
                acc * fy
            })
            .sum();
        masses.push(total.re * h.powi(4));
    }
    Ok(masses)
}

/// `||f||^2 - sum_{B(2k-1) <= Lambda} ||Pi_k f||^2`; clamps roundoff
/// negatives and errors below `-1e-6 ||f||^2`.
pub fn landau_high_energy_mass(f: &ExtendedFunction, params: &LandauParams, cutoff: f64) -> Result<SpectralMass> {
    if !(cutoff > 0.0) {
        return Err(LabError::InvalidInput(format!("cutoff {cutoff} must be positive")));
    }
    let b = params.b;
    let kmax = if cutoff < b { 0 } else { ((cutoff / b + 1.0) / 2.0).floor() as usize };
    let total = f.norm_sqr();
    let mass_low: f64 = landau_level_masses(f, params, kmax)?.iter().sum();
    let mut mass_high = total - mass_low;
    if mass_high < -1e-6 * total {
        return Err(LabError::NegativeMass(mass_high));
    }
    if mass_high < 0.0 {
        mass_high = 0.0;
    }
    Ok(SpectralMass { lambda: cutoff, mass_low: total - mass_high, mass_high, total })
}

/// `int |(grad + iA)_x K_k(x, x')|^2 dx'` at the gauge origin by quadrature
/// with spacing `hq`, against `(B/2pi) B(2k-1)`.
pub fn magnetic_gradient_identity(params: &LandauParams, k: usize, hq: f64) -> Result<(f64, f64)> {
    let kernel = LandauKernel::new(params, k)?;
    let x = params.gauge_origin;
    let r = kernel.truncation_radius();
    let m = (r / hq).ceil() as isize;
    let delta = 1e-5 / params.b.sqrt();
    let mut total = 0.0;
    for j in -m..=m {
        for i in -m..=m {
            let y = [x[0] + i as f64 * hq, x[1] + j as f64 * hq];
            // A vanishes at the gauge origin
            let d1 = (kernel.eval([x[0] + delta, x[1]], y) - kernel.eval([x[0] - delta, x[1]], y)) / (2.0 * delta);
            let d2 = (kernel.eval([x[0], x[1] + delta], y) - kernel.eval([x[0], x[1] - delta], y)) / (2.0 * delta);
            total += (d1.norm_sqr() + d2.norm_sqr()) * hq * hq;
        }
    }
    let b = params.b;
    Ok((total, b / (2.0 * PI) * b * (2 * k - 1) as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laguerre_values() {
        assert_eq!(laguerre(0, 3.0), 1.0);
        assert_eq!(laguerre(1, 3.0), -2.0);
        // L_2(t) = (t^2 - 4t + 2)/2
        assert!((laguerre(2, 3.0) + 0.5).abs() < 1e-15);
        // L_3(t) = (-t^3 + 9t^2 - 18t + 6)/6
        assert!((laguerre(3, 1.5) - (-3.375 + 20.25 - 27.0 + 6.0) / 6.0).abs() < 1e-14);
    }

    #[test]
    fn diagonal_and_hermiticity() {
        let p = LandauParams::new(3.0).unwrap().with_gauge_origin([0.2, -0.1]);
        for k in 1..5 {
            let kern = LandauKernel::new(&p, k).unwrap();
            assert!((kern.eval([0.7, 0.3], [0.7, 0.3]).re - 3.0 / (2.0 * PI)).abs() < 1e-15);
            let (x, y) = ([0.1, 0.5], [-0.4, 0.2]);
            assert!((kern.eval(x, y) - kern.eval(y, x).conj()).norm() < 1e-15);
        }
    }

    #[test]
    fn truncation_bound() {
        for k in [1, 3] {
            let r = truncation_radius(2.0, k);
            let kern = LandauKernel { b: 2.0, k, gauge_origin: [0.0; 2] };
            for t in 0..50 {
                let s = (r + 0.05 * t as f64).powi(2);
                assert!(kern.radial(s).abs() < 1e-12 * 2.0 / (2.0 * PI));
            }
        }
    }

    #[test]
    fn gradient_identity() {
        let p = LandauParams::new(2.0).unwrap();
        for k in 1..=3 {
            let (v, e) = magnetic_gradient_identity(&p, k, 0.05).unwrap();
            assert!((v - e).abs() < 1e-2 * e, "k={k}: {v} vs {e}");
        }
    }
}
