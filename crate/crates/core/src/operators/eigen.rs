//! Eigensolvers: dense Hermitian decomposition for full spectra and small
//! problems, shift-invert Lanczos with locking for partial spectra of large
//! ones. Partial results are cross-checked with inertia counts.

use super::banded::BandLdl;
use super::build::DiscreteOperator;
use super::scalar::{axpy_neg, dot, norm, Scalar};
use super::sparse::SparseHermitian;
use super::spectrum::{Completeness, Spectrum};
use crate::error::{LabError, Result};
use faer::{c64, Mat, Side};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

/// Which eigenpairs to compute.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum EigenRequest {
    All,
    Lowest(usize),
    /// Every eigenvalue strictly below the cutoff.
    Below(f64),
}

#[derive(Clone, Debug)]
pub struct EigenOptions {
    pub vectors: bool,
    /// Largest size for a full dense decomposition.
    pub dense_cap: usize,
    /// Partial requests at or below this size are answered densely too.
    pub dense_partial_max: usize,
    /// Target residual `||A v - lambda v|| / ||A||` for iterative pairs.
    pub tol: f64,
    /// Residual bound every returned pair must meet.
    pub accept_tol: f64,
    pub max_restarts: usize,
    pub seed: u64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            vectors: true,
            dense_cap: 6000,
            dense_partial_max: 1024,
            tol: 1e-10,
            accept_tol: 1e-7,
            max_restarts: 400,
            seed: 0x5eed,
        }
    }
}

impl EigenOptions {
    pub fn values_only() -> Self {
        Self { vectors: false, ..Self::default() }
    }
}

/// Grid operators are nonnegative: eigenvalues within roundoff below zero
/// (e.g. the Neumann constant mode) are reported as exactly zero.
pub fn eigensolve(op: &DiscreteOperator, request: EigenRequest, opts: &EigenOptions) -> Result<Spectrum> {
    let mut s = eigensolve_matrix(op.matrix(), request, opts)?;
    let floor = -1e-11 * op.matrix().norm_inf();
    for v in &mut s.eigenvalues {
        if *v < 0.0 && *v > floor {
            *v = 0.0;
        }
    }
    Ok(s)
}

pub fn eigensolve_matrix(a: &SparseHermitian, request: EigenRequest, opts: &EigenOptions) -> Result<Spectrum> {
    let n = a.n();
    let dense = match request {
        EigenRequest::All => {
            if n > opts.dense_cap {
                return Err(LabError::DenseCapExceeded { n, cap: opts.dense_cap });
            }
            true
        }
        _ => n <= opts.dense_partial_max,
    };
    let spectrum = if dense {
        let full = dense_eigen(a, opts.vectors)?;
        restrict(full, request, n)
    } else if a.is_real() {
        lanczos::<f64>(a, request, opts)?
    } else {
        lanczos::<Complex64>(a, request, opts)?
    };
    if let Some(vecs) = &spectrum.eigenvectors {
        let worst = worst_residual(a, &spectrum.eigenvalues, vecs);
        let target = opts.accept_tol * a.norm_inf();
        if worst > target {
            return Err(LabError::NonConvergence { residual: worst, target });
        }
    }
    Ok(spectrum)
}

fn restrict(full: Spectrum, request: EigenRequest, n: usize) -> Spectrum {
    let keep = match request {
        EigenRequest::All => n,
        EigenRequest::Lowest(m) => m.min(n),
        EigenRequest::Below(cut) => full.eigenvalues.partition_point(|&l| l < cut),
    };
    let completeness = match request {
        EigenRequest::All => Completeness::Full,
        EigenRequest::Lowest(m) if m >= n => Completeness::Full,
        EigenRequest::Lowest(m) => Completeness::Lowest(m),
        EigenRequest::Below(cut) => Completeness::Below(cut),
    };
    Spectrum {
        eigenvalues: full.eigenvalues[..keep].to_vec(),
        eigenvectors: full.eigenvectors.map(|mut v| {
            v.truncate(keep);
            v
        }),
        completeness,
    }
}

fn dense_eigen(a: &SparseHermitian, vectors: bool) -> Result<Spectrum> {
    let n = a.n();
    let fail = |e: &dyn std::fmt::Debug| LabError::Linalg(format!("dense eigensolver: {e:?}"));
    if a.is_real() {
        let mut m = Mat::<f64>::zeros(n, n);
        for i in 0..n {
            for (j, v) in a.row(i) {
                m[(i, j)] = v.re;
            }
        }
        if vectors {
            let e = m.self_adjoint_eigen(Side::Lower).map_err(|e| fail(&e))?;
            let (s, u) = (e.S().column_vector(), e.U());
            let values = (0..n).map(|k| s[k]).collect();
            let vecs = (0..n).map(|k| (0..n).map(|i| Complex64::new(u[(i, k)], 0.0)).collect()).collect();
            Ok(Spectrum { eigenvalues: values, eigenvectors: Some(vecs), completeness: Completeness::Full })
        } else {
            let values = m.self_adjoint_eigenvalues(Side::Lower).map_err(|e| fail(&e))?;
            Ok(Spectrum::from_values(values, Completeness::Full))
        }
    } else {
        let mut m = Mat::<c64>::zeros(n, n);
        for i in 0..n {
            for (j, v) in a.row(i) {
                m[(i, j)] = v;
            }
        }
        if vectors {
            let e = m.self_adjoint_eigen(Side::Lower).map_err(|e| fail(&e))?;
            let (s, u) = (e.S().column_vector(), e.U());
            let values = (0..n).map(|k| s[k].re).collect();
            let vecs = (0..n).map(|k| (0..n).map(|i| u[(i, k)]).collect()).collect();
            Ok(Spectrum { eigenvalues: values, eigenvectors: Some(vecs), completeness: Completeness::Full })
        } else {
            let values = m.self_adjoint_eigenvalues(Side::Lower).map_err(|e| fail(&e))?;
            Ok(Spectrum::from_values(values, Completeness::Full))
        }
    }
}

/// Largest `||A v - lambda v||` over the given pairs.
pub fn worst_residual(a: &SparseHermitian, values: &[f64], vectors: &[Vec<Complex64>]) -> f64 {
    let mut y = vec![Complex64::default(); a.n()];
    let mut worst = 0.0f64;
    for (l, v) in values.iter().zip(vectors) {
        a.matvec(v, &mut y);
        let r: f64 = y.iter().zip(v).map(|(yi, vi)| (yi - vi * *l).norm_sqr()).sum();
        worst = worst.max(r.sqrt());
    }
    worst
}

/// Number of eigenvalues strictly below `cutoff`, by the inertia of an
/// `L D L^H` factorization of `A - cutoff`. A vanishing pivot (eigenvalue
/// at the cutoff) moves the cutoff down by `1e-10 ||A||` steps.
pub fn count_below(a: &SparseHermitian, cutoff: f64) -> Result<usize> {
    let eps = 1e-10 * a.norm_inf().max(cutoff.abs()).max(1.0);
    for k in 0..8 {
        let shift = cutoff - k as f64 * eps;
        let count = if a.is_real() {
            BandLdl::<f64>::factor(a, shift).map(|f| f.negative_count())
        } else {
            BandLdl::<Complex64>::factor(a, shift).map(|f| f.negative_count())
        };
        if let Ok(c) = count {
            return Ok(c);
        }
    }
    Err(LabError::Linalg(format!("no stable factorization near cutoff {cutoff}")))
}

fn random_vector<T: Scalar>(n: usize, rng: &mut ChaCha8Rng) -> Vec<T> {
    (0..n)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            T::from_c64(Complex64::new(re, im))
        })
        .collect()
}

/// Orthogonalizes `w` against `basis` twice (classical Gram-Schmidt with one
/// reorthogonalization pass).
fn orthogonalize<T: Scalar>(w: &mut [T], basis: &[Vec<T>]) {
    for _ in 0..2 {
        for q in basis {
            let c = dot(q, w);
            axpy_neg(c, q, w);
        }
    }
}

struct Pair<T> {
    value: f64,
    vector: Vec<T>,
    residual: f64,
}

fn rayleigh<T: Scalar>(a: &SparseHermitian, x: &[T]) -> (f64, f64) {
    let mut y = vec![T::zero(); x.len()];
    a.matvec(x, &mut y);
    let value = dot(x, &y).re();
    let r = y.iter().zip(x).map(|(yi, xi)| (*yi - xi.scale(value)).abs2()).sum::<f64>().sqrt();
    (value, r)
}

/// One Lanczos run on `(A - sigma)^{-1}` restricted to the complement of
/// `locked`; returns the Ritz pairs of the `want` smallest `A`-eigenvalues.
fn lanczos_run<T: Scalar>(
    a: &SparseHermitian,
    fact: &BandLdl<T>,
    start: Vec<T>,
    locked: &[Vec<T>],
    kdim: usize,
    want: usize,
) -> Result<Vec<Pair<T>>> {
    let n = a.n();
    let mut q = start;
    orthogonalize(&mut q, locked);
    let nq = norm(&q);
    if nq == 0.0 {
        return Ok(Vec::new());
    }
    q.iter_mut().for_each(|v| *v = v.scale(1.0 / nq));
    let mut basis: Vec<Vec<T>> = vec![q];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    for j in 0..kdim {
        let mut w = basis[j].clone();
        fact.solve(&mut w);
        if j > 0 {
            axpy_neg(T::from_real(beta[j - 1]), &basis[j - 1], &mut w);
        }
        let aj = dot(&basis[j], &w).re();
        axpy_neg(T::from_real(aj), &basis[j], &mut w);
        alpha.push(aj);
        orthogonalize(&mut w, locked);
        orthogonalize(&mut w, &basis);
        let bj = norm(&w);
        if j + 1 == kdim || basis.len() + locked.len() >= n || bj <= 1e-13 * aj.abs().max(f64::MIN_POSITIVE) {
            break;
        }
        beta.push(bj);
        w.iter_mut().for_each(|v| *v = v.scale(1.0 / bj));
        basis.push(w);
    }
    let k = alpha.len();
    let t = Mat::<f64>::from_fn(k, k, |i, j| {
        if i == j {
            alpha[i]
        } else if i == j + 1 {
            beta[j]
        } else if j == i + 1 {
            beta[i]
        } else {
            0.0
        }
    });
    let e = t.self_adjoint_eigen(Side::Lower).map_err(|e| LabError::Linalg(format!("{e:?}")))?;
    let (mu, s) = (e.S().column_vector(), e.U());
    // largest mu of the inverse = smallest eigenvalue of A
    let mut pairs = Vec::new();
    for r in (0..k).rev().take(want) {
        if mu[r] <= 0.0 {
            break;
        }
        let mut x = vec![T::zero(); n];
        for (c, v) in basis.iter().enumerate() {
            let coef = T::from_real(s[(c, r)]);
            for (xi, vi) in x.iter_mut().zip(v) {
                *xi = *xi + coef * *vi;
            }
        }
        let nx = norm(&x);
        x.iter_mut().for_each(|v| *v = v.scale(1.0 / nx));
        let (value, residual) = rayleigh(a, &x);
        pairs.push(Pair { value, vector: x, residual });
    }
    Ok(pairs)
}

fn lanczos<T: Scalar>(a: &SparseHermitian, request: EigenRequest, opts: &EigenOptions) -> Result<Spectrum> {
    let n = a.n();
    let anorm = a.norm_inf();
    let tol = opts.tol * anorm;
    let accept = opts.accept_tol * anorm;
    let (mut target, cutoff) = match request {
        EigenRequest::Lowest(m) => (m.min(n), None),
        EigenRequest::Below(cut) => (count_below(a, cut)?, Some(cut)),
        EigenRequest::All => unreachable!("full spectra are dense"),
    };
    let sigma = -match cutoff {
        Some(cut) => (0.1 * cut).max(1e-4 * anorm),
        None => 1e-4 * anorm,
    };
    let fact = factor_shifted::<T>(a, sigma)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut locked: Vec<Pair<T>> = Vec::new();
    let mut start: Vec<T> = random_vector(n, &mut rng);
    let mut best_unconverged = f64::INFINITY;
    let mut restarts = 0;
    let found = |locked: &[Pair<T>]| match cutoff {
        Some(cut) => locked.iter().filter(|p| p.value < cut).count(),
        None => locked.len(),
    };
    loop {
        let have = found(&locked);
        if have >= target {
            if cutoff.is_some() {
                break;
            }
            // make sure nothing below the m-th value was skipped
            let mut vals: Vec<f64> = locked.iter().map(|p| p.value).collect();
            vals.sort_by(f64::total_cmp);
            let probe = vals[target - 1] - (1e-8 * anorm).max(4.0 * accept);
            let below = count_below(a, probe)?;
            let present = vals.iter().filter(|&&v| v < probe).count();
            if below <= present {
                break;
            }
            target += below - present;
            continue;
        }
        if restarts >= opts.max_restarts || locked.len() >= n {
            return Err(LabError::NonConvergence { residual: best_unconverged, target: tol });
        }
        restarts += 1;
        let want = target - have;
        let kdim = (2 * want + 40).min(n - locked.len());
        let locked_vecs: Vec<Vec<T>> = locked.iter().map(|p| p.vector.clone()).collect();
        let pairs = lanczos_run(a, &fact, start, &locked_vecs, kdim, want)?;
        let mut next: Vec<T> = random_vector(n, &mut rng);
        let rn = norm(&next);
        next.iter_mut().for_each(|v| *v = v.scale(0.1 / rn));
        best_unconverged = f64::INFINITY;
        for p in pairs {
            if p.residual <= tol {
                locked.push(p);
            } else {
                best_unconverged = best_unconverged.min(p.residual);
                for (s, v) in next.iter_mut().zip(&p.vector) {
                    *s = *s + *v;
                }
            }
        }
        // stagnation with acceptable residuals: accept rather than spin
        if restarts > opts.max_restarts / 2 && best_unconverged <= accept {
            let locked_vecs: Vec<Vec<T>> = locked.iter().map(|p| p.vector.clone()).collect();
            let pairs = lanczos_run(a, &fact, next.clone(), &locked_vecs, kdim, want)?;
            locked.extend(pairs.into_iter().filter(|p| p.residual <= accept));
        }
        start = next;
    }
    locked.sort_by(|x, y| x.value.total_cmp(&y.value));
    let keep = match cutoff {
        Some(cut) => locked.iter().filter(|p| p.value < cut).count(),
        None => request_len(request).min(locked.len()),
    };
    locked.truncate(keep);
    let completeness = match request {
        EigenRequest::Below(cut) => Completeness::Below(cut),
        EigenRequest::Lowest(m) if m >= n => Completeness::Full,
        EigenRequest::Lowest(m) => Completeness::Lowest(m),
        EigenRequest::All => Completeness::Full,
    };
    let eigenvalues = locked.iter().map(|p| p.value).collect();
    let eigenvectors = opts
        .vectors
        .then(|| locked.into_iter().map(|p| p.vector.into_iter().map(T::to_c64).collect()).collect());
    Ok(Spectrum { eigenvalues, eigenvectors, completeness })
}

fn request_len(r: EigenRequest) -> usize {
    match r {
        EigenRequest::Lowest(m) => m,
        _ => usize::MAX,
    }
}

fn factor_shifted<T: Scalar>(a: &SparseHermitian, sigma: f64) -> Result<BandLdl<T>> {
    let mut s = sigma;
    for _ in 0..8 {
        if let Ok(f) = BandLdl::<T>::factor(a, s) {
            return Ok(f);
        }
        s *= 1.5;
    }
    Err(LabError::Linalg(format!("shifted factorization failed near {sigma}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_shape, Shape};
    use crate::operators::{laplacian, BoundaryCondition};

    #[test]
    fn three_point_chain() {
        let d = make_shape(&Shape::Interval { length: 3.0 }, 1.0).unwrap();
        let op = laplacian(&d, BoundaryCondition::DirichletCompressed).unwrap();
        let s = eigensolve(&op, EigenRequest::All, &EigenOptions::default()).unwrap();
        let r2 = 2f64.sqrt();
        for (got, want) in s.eigenvalues.iter().zip([2.0 - r2, 2.0, 2.0 + r2]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn lanczos_matches_dense_with_degeneracies() {
        let d = make_shape(&Shape::Rectangle { width: 1.0, height: 1.0 }, 1.0 / 24.0).unwrap();
        let op = laplacian(&d, BoundaryCondition::Dirichlet).unwrap();
        let dense = eigensolve(&op, EigenRequest::Below(400.0), &EigenOptions::default()).unwrap();
        let iter_opts = EigenOptions { dense_partial_max: 0, ..EigenOptions::default() };
        let it = eigensolve(&op, EigenRequest::Below(400.0), &iter_opts).unwrap();
        assert_eq!(dense.len(), it.len());
        for (a, b) in dense.eigenvalues.iter().zip(&it.eigenvalues) {
            assert!((a - b).abs() < 1e-8 * 400.0, "{a} vs {b}");
        }
        assert!(it.gram_defect().unwrap() < 1e-8);
        let low = eigensolve(&op, EigenRequest::Lowest(7), &iter_opts).unwrap();
        for (a, b) in dense.eigenvalues.iter().zip(&low.eigenvalues) {
            assert!((a - b).abs() < 1e-8 * 400.0);
        }
    }

    #[test]
    fn inertia_count_matches_dense() {
        let d = make_shape(&Shape::LShape { side: 1.0 }, 1.0 / 16.0).unwrap();
        let op = laplacian(&d, BoundaryCondition::Neumann).unwrap();
        let all = eigensolve(&op, EigenRequest::All, &EigenOptions::values_only()).unwrap();
        for cut in [0.5, 50.0, 123.0, 700.0] {
            let want = all.eigenvalues.iter().filter(|&&l| l < cut).count();
            assert_eq!(count_below(op.matrix(), cut).unwrap(), want);
        }
    }
}
