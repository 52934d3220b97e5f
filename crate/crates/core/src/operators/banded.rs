//! Banded `L D L^H` factorization without pivoting, used for shift-invert
//! solves and for Sylvester inertia counts.

use super::scalar::Scalar;
use super::sparse::SparseHermitian;

/// Factorization of `A - shift` for a Hermitian band matrix.
pub struct BandLdl<T: Scalar> {
    n: usize,
    b: usize,
    /// Row `i` holds `L[i][i-b .. i]` at `i*b ..`, leading entries unused.
    lower: Vec<T>,
    d: Vec<f64>,
}

/// A pivot was too small to continue; the shift should be perturbed.
#[derive(Debug)]
pub struct TinyPivot;

impl<T: Scalar> BandLdl<T> {
    pub fn factor(a: &SparseHermitian, shift: f64) -> Result<Self, TinyPivot> {
        let n = a.n();
        let b = a.bandwidth().max(1);
        let pivot_floor = 1e-13 * a.norm_inf().max(shift.abs()).max(f64::MIN_POSITIVE);
        let mut lower = vec![T::zero(); n * b];
        let mut d = vec![0.0; n];
        let mut row = vec![T::zero(); b];
        let mut ld = vec![T::zero(); b];
        for i in 0..n {
            let lo = i.saturating_sub(b);
            row.iter_mut().for_each(|v| *v = T::zero());
            let mut diag = -shift;
            for (j, v) in a.row(i) {
                if j < i {
                    row[j + b - i] = T::from_c64(v);
                } else if j == i {
                    diag += v.re;
                }
            }
            // row[k + b - i] becomes L[i][k] * D[k] while sweeping k upward
            for j in lo..i {
                let sj = j + b - i;
                let mut acc = row[sj];
                let lj = &lower[j * b..(j + 1) * b];
                let lo_j = j.saturating_sub(b).max(lo);
                for k in lo_j..j {
                    acc = acc - ld[k + b - i] * lj[k + b - j].conj();
                }
                ld[sj] = acc;
                let l = acc.scale(1.0 / d[j]);
                lower[i * b + sj] = l;
                diag -= (acc * l.conj()).re();
            }
            if diag.abs() < pivot_floor || !diag.is_finite() {
                return Err(TinyPivot);
            }
            d[i] = diag;
            ld.iter_mut().for_each(|v| *v = T::zero());
        }
        Ok(Self { n, b, lower, d })
    }

    /// Number of negative pivots = number of eigenvalues below the shift.
    pub fn negative_count(&self) -> usize {
        self.d.iter().filter(|&&x| x < 0.0).count()
    }

    /// Solves `(A - shift) x = rhs` in place.
    pub fn solve(&self, x: &mut [T]) {
        let (n, b) = (self.n, self.b);
        for i in 0..n {
            let lo = i.saturating_sub(b);
            let li = &self.lower[i * b..(i + 1) * b];
            let mut acc = x[i];
            for k in lo..i {
                acc = acc - li[k + b - i] * x[k];
            }
            x[i] = acc;
        }
        for (xi, &di) in x.iter_mut().zip(&self.d) {
            *xi = xi.scale(1.0 / di);
        }
        for j in (0..n).rev() {
            let lo = j.saturating_sub(b);
            let lj = &self.lower[j * b..(j + 1) * b];
            let xj = x[j];
            for k in lo..j {
                x[k] = x[k] - lj[k + b - j].conj() * xj;
            }
        }
    }
}
