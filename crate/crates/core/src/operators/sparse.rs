use super::scalar::Scalar;
use num_complex::Complex64;

/// Compressed-row Hermitian matrix. Values are stored complex; `is_real`
/// records that every imaginary part is zero.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseHermitian {
    n: usize,
    row_ptr: Vec<usize>,
    col: Vec<usize>,
    val: Vec<Complex64>,
    real: bool,
}

impl SparseHermitian {
    /// Assembles from `(row, col, value)` triplets, summing duplicates.
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, Complex64)>) -> Self {
        triplets.sort_by_key(|&(i, j, _)| (i, j));
        let mut row_ptr = vec![0usize; n + 1];
        let mut col = Vec::with_capacity(triplets.len());
        let mut val: Vec<Complex64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in triplets {
            if last == Some((i, j)) {
                *val.last_mut().unwrap() += v;
            } else {
                col.push(j);
                val.push(v);
                row_ptr[i + 1] += 1;
                last = Some((i, j));
            }
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        let real = val.iter().all(|v| v.im == 0.0);
        Self { n, row_ptr, col, val, real }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn nnz(&self) -> usize {
        self.val.len()
    }

    /// Entries of row `i` as `(col, value)`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col[r.clone()].iter().copied().zip(self.val[r].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.row(i).find(|&(c, _)| c == j).map(|(_, v)| v).unwrap_or_default()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i).re).collect()
    }

    pub fn trace(&self) -> f64 {
        self.diagonal().iter().sum()
    }

    /// Maximal absolute row sum (an upper bound for the spectral norm).
    pub fn norm_inf(&self) -> f64 {
        (0..self.n).map(|i| self.row(i).map(|(_, v)| v.norm()).sum::<f64>()).fold(0.0, f64::max)
    }

    /// Largest `|i - j|` over stored entries.
    pub fn bandwidth(&self) -> usize {
        (0..self.n).flat_map(|i| self.row(i).map(move |(j, _)| i.abs_diff(j))).max().unwrap_or(0)
    }

    /// Largest `|a_ij - conj(a_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                worst = worst.max((v - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn matvec<T: Scalar>(&self, x: &[T], y: &mut [T]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = T::zero();
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc = acc + T::from_c64(self.val[k]) * x[self.col[k]];
            }
            *yi = acc;
        }
    }

    /// `<x, A x>` real part.
    pub fn quadratic_form(&self, x: &[Complex64]) -> f64 {
        let mut y = vec![Complex64::default(); self.n];
        self.matvec(x, &mut y);
        x.iter().zip(&y).map(|(a, b)| (a.conj() * b).re).sum()
    }

    pub fn to_dense(&self) -> Vec<Vec<Complex64>> {
        let mut m = vec![vec![Complex64::default(); self.n]; self.n];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in self.row(i) {
                row[j] = v;
            }
        }
        m
    }

    /// Largest entrywise difference, relative to the largest entry of `self`.
    pub fn relative_difference(&self, other: &SparseHermitian) -> f64 {
        assert_eq!(self.n, other.n);
        let scale = self.val.iter().map(|v| v.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                worst = worst.max((v - other.get(i, j)).norm());
            }
            for (j, v) in other.row(i) {
                worst = worst.max((v - self.get(i, j)).norm());
            }
        }
        worst / scale
    }
}
