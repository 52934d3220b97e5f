//! Two-dimensional FFTs on row-major buffers (`index = iy * nx + ix`).

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

/// Planned 2-D transform of fixed shape. `ny = 1` gives a 1-D transform.
pub struct Fft2 {
    nx: usize,
    ny: usize,
    row_fwd: Arc<dyn Fft<f64>>,
    row_inv: Arc<dyn Fft<f64>>,
    col_fwd: Arc<dyn Fft<f64>>,
    col_inv: Arc<dyn Fft<f64>>,
}

impl Fft2 {
    pub fn new(nx: usize, ny: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            nx,
            ny,
            row_fwd: planner.plan_fft_forward(nx),
            row_inv: planner.plan_fft_inverse(nx),
            col_fwd: planner.plan_fft_forward(ny),
            col_inv: planner.plan_fft_inverse(ny),
        }
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Unnormalized forward transform, `sum_x f(x) e^{-2 pi i k.x/N}`.
    pub fn forward(&self, buf: &mut [Complex64]) {
        self.run(buf, &self.row_fwd, &self.col_fwd);
    }

    /// Unnormalized inverse transform (no `1/N` factor).
    pub fn inverse(&self, buf: &mut [Complex64]) {
        self.run(buf, &self.row_inv, &self.col_inv);
    }

    fn run(&self, buf: &mut [Complex64], row: &Arc<dyn Fft<f64>>, col: &Arc<dyn Fft<f64>>) {
        assert_eq!(buf.len(), self.len());
        row.process(buf);
        if self.ny > 1 {
            let mut t = transpose(buf, self.nx, self.ny);
            col.process(&mut t);
            let back = transpose(&t, self.ny, self.nx);
            buf.copy_from_slice(&back);
        }
    }
}

fn transpose(src: &[Complex64], nx: usize, ny: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); src.len()];
    for iy in 0..ny {
        for ix in 0..nx {
            out[ix * ny + iy] = src[iy * nx + ix];
        }
    }
    out
}

/// Smallest integer `>= n` with no prime factors beyond 5.
pub fn smooth_size(n: usize) -> usize {
    let mut m = n.max(1);
    loop {
        let mut k = m;
        for p in [2, 3, 5] {
            while k.is_multiple_of(p) {
                k /= p;
            }
        }
        if k == 1 {
            return m;
        }
        m += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_and_against_direct_dft() {
        let (nx, ny) = (6, 5);
        let data: Vec<Complex64> = (0..nx * ny)
            .map(|i| Complex64::new((i as f64).sin(), (i as f64 * 0.3).cos()))
            .collect();
        let fft = Fft2::new(nx, ny);
        let mut buf = data.clone();
        fft.forward(&mut buf);
        // direct DFT at one frequency
        let (kx, ky) = (2usize, 3usize);
        let mut direct = Complex64::new(0.0, 0.0);
        for iy in 0..ny {
            for ix in 0..nx {
                let ph = -2.0 * std::f64::consts::PI
                    * (kx as f64 * ix as f64 / nx as f64 + ky as f64 * iy as f64 / ny as f64);
                direct += data[iy * nx + ix] * Complex64::from_polar(1.0, ph);
            }
        }
        assert!((buf[ky * nx + kx] - direct).norm() < 1e-12);
        fft.inverse(&mut buf);
        for (a, b) in buf.iter().zip(&data) {
            assert!((a / (nx * ny) as f64 - b).norm() < 1e-13);
        }
    }

    #[test]
    fn smooth_sizes() {
        assert_eq!(smooth_size(7), 8);
        assert_eq!(smooth_size(11), 12);
        assert_eq!(smooth_size(128), 128);
        assert_eq!(smooth_size(49), 50);
    }
}
