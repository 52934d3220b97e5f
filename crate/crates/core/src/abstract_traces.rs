//! Exact finite-dimensional trace identities relating the Riesz mean of an
//! operator `L` on `H` to spectral data of `L_hat` on a larger space, through
//! an isometry `J: H -> H_hat`.
//!
//! Spectral projections use the strict convention `E(mu) = sum_{lambda < mu}`;
//! an eigenvalue exactly at the cutoff belongs to the complementary part.

use crate::error::{LabError, Result};
use faer::{c64, Mat, Side};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

/// `(J, L, L_hat)` with `J` an `m x n` isometry.
#[derive(Clone, Debug)]
pub struct TracePairInstance {
    pub n: usize,
    pub m: usize,
    pub j: Mat<c64>,
    pub l: Mat<c64>,
    pub lhat: Mat<c64>,
    /// `L = J* L_hat J` holds by construction.
    pub compressed: bool,
}

/// Terms of one identity; `part` is 1 (general `L`) or 2 (compressed `L`).
#[derive(Clone, Debug, Serialize)]
pub struct RemainderSet {
    pub part: u8,
    /// `Tr(L - Lambda)_-`.
    pub lhs: f64,
    pub main: f64,
    pub r_less: f64,
    pub r_greater: f64,
    pub residual: f64,
    /// `max(1, Tr L_hat)`; thresholds are relative to it.
    pub scale: f64,
}

impl RemainderSet {
    pub fn min_remainder(&self) -> f64 {
        self.r_less.min(self.r_greater)
    }
}

fn gaussian(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Mat<c64> {
    Mat::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        c64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

/// Orthonormal columns spanning a Gaussian `rows x cols` matrix.
fn random_isometry(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Mat<c64> {
    gaussian(rows, cols, rng).qr().compute_thin_Q()
}

fn hermitize(a: &Mat<c64>) -> Mat<c64> {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5)
}

/// `U diag(d) U*` with Haar-like `U` and `d` uniform in `[0, top]`; a few
/// eigenvalues are repeated to exercise degeneracies.
fn random_psd(k: usize, top: f64, rng: &mut ChaCha8Rng) -> Mat<c64> {
    let u = random_isometry(k, k, rng);
    let mut d: Vec<f64> = (0..k).map(|_| rng.random::<f64>() * top).collect();
    if k >= 3 && rng.random::<f64>() < 0.3 {
        d[1] = d[0];
    }
    let ud = Mat::from_fn(k, k, |i, j| u[(i, j)] * d[j]);
    hermitize(&(&ud * u.adjoint()))
}

fn eigh(a: &Mat<c64>) -> Result<(Vec<f64>, Mat<c64>)> {
    let e = a.self_adjoint_eigen(Side::Lower).map_err(|e| LabError::Linalg(format!("{e:?}")))?;
    let s = e.S().column_vector();
    let vals = (0..a.nrows()).map(|i| s[i].re).collect();
    Ok((vals, e.U().to_owned()))
}

fn trace(a: &Mat<c64>) -> f64 {
    (0..a.nrows()).map(|i| a[(i, i)].re).sum()
}

fn neg_part(x: f64) -> f64 {
    (-x).max(0.0)
}

fn pos_part(x: f64) -> f64 {
    x.max(0.0)
}

/// Random instance; with `compressed` set, `L = J* L_hat J`.
pub fn random_instance(n: usize, m: usize, seed: u64, compressed: bool) -> Result<TracePairInstance> {
    if n == 0 || n > m {
        return Err(LabError::InvalidInput(format!("need 1 <= n <= m, got n = {n}, m = {m}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let j = random_isometry(m, n, &mut rng);
    let lhat = random_psd(m, 10.0, &mut rng);
    let l = if compressed {
        hermitize(&(j.adjoint() * &lhat * &j))
    } else {
        random_psd(n, 10.0, &mut rng)
    };
    Ok(TracePairInstance { n, m, j, l, lhat, compressed })
}

impl TracePairInstance {
    /// Builds an instance from given matrices, checking the invariants.
    pub fn new(j: Mat<c64>, l: Mat<c64>, lhat: Mat<c64>, compressed: bool) -> Result<Self> {
        let (m, n) = (j.nrows(), j.ncols());
        if l.nrows() != n || l.ncols() != n || lhat.nrows() != m || lhat.ncols() != m {
            return Err(LabError::InvalidInput("inconsistent matrix shapes".into()));
        }
        let inst = Self { n, m, j, l, lhat, compressed };
        let defect = inst.isometry_defect();
        if defect > 1e-12 {
            return Err(LabError::InvalidInput(format!("J*J differs from the identity by {defect:.2e}")));
        }
        Ok(inst)
    }

    /// Largest entry of `J*J - I`.
    pub fn isometry_defect(&self) -> f64 {
        let g = self.j.adjoint() * &self.j;
        let mut worst = 0.0f64;
        for r in 0..self.n {
            for c in 0..self.n {
                let t = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((g[(r, c)] - c64::new(t, 0.0)).norm());
            }
        }
        worst
    }

    /// Same instance seen through a unitary `W`: `L_hat -> W L_hat W*`, `J -> W J`.
    pub fn conjugated(&self, w: &Mat<c64>) -> Self {
        Self {
            n: self.n,
            m: self.m,
            j: w * &self.j,
            l: self.l.clone(),
            lhat: hermitize(&(w * &self.lhat * w.adjoint())),
            compressed: self.compressed,
        }
    }

    pub fn scale(&self) -> f64 {
        trace(&self.lhat).max(1.0)
    }

    /// Smallest and largest eigenvalue of `L_hat`.
    pub fn lhat_range(&self) -> Result<(f64, f64)> {
        let (v, _) = eigh(&self.lhat)?;
        Ok((v[0], v[v.len() - 1]))
    }

    /// Norm bound for choosing cutoffs.
    pub fn l_norm(&self) -> f64 {
        eigh(&self.l).map(|(v, _)| v.iter().fold(0.0f64, |a, x| a.max(x.abs()))).unwrap_or(0.0)
    }
}

/// Spectral data shared by both identities.
struct Decomposed {
    lambda: Vec<f64>,
    mu: Vec<f64>,
    /// `overlap[(j, i)] = |<u_j, J v_i>|^2`.
    overlap: Mat<f64>,
    u: Mat<c64>,
}

fn decompose(inst: &TracePairInstance) -> Result<Decomposed> {
    let (lambda, v) = eigh(&inst.l)?;
    let (mu, u) = eigh(&inst.lhat)?;
    let c = u.adjoint() * &inst.j * &v;
    let overlap = Mat::from_fn(inst.m, inst.n, |j, i| c[(j, i)].norm_sqr());
    Ok(Decomposed { lambda, mu, overlap, u })
}

fn low_projection(u: &Mat<c64>, mu: &[f64], cutoff: f64) -> Mat<c64> {
    let k = u.nrows();
    Mat::from_fn(k, k, |r, c| {
        let mut acc = c64::new(0.0, 0.0);
        for (j, &m) in mu.iter().enumerate() {
            if m < cutoff {
                acc += u[(r, j)] * u[(c, j)].conj();
            }
        }
        acc
    })
}

fn check(set: RemainderSet) -> Result<RemainderSet> {
    let threshold = 1e-8 * set.scale;
    if set.residual > threshold {
        return Err(LabError::IdentityResidual { residual: set.residual, threshold });
    }
    Ok(set)
}

/// General `L`: `Tr(L-Λ)_- = -Tr(Ê J (L-Λ) J* Ê) + R_< + R_>`.
pub fn verify_neumann_identity(inst: &TracePairInstance, cutoff: f64) -> Result<RemainderSet> {
    let d = decompose(inst)?;
    let lhs: f64 = d.lambda.iter().map(|&l| neg_part(l - cutoff)).sum();
    let p = low_projection(&d.u, &d.mu, cutoff);
    let shifted = Mat::from_fn(inst.n, inst.n, |r, c| {
        inst.l[(r, c)] - if r == c { c64::new(cutoff, 0.0) } else { c64::new(0.0, 0.0) }
    });
    let main = -trace(&(&p * &inst.j * &shifted * inst.j.adjoint() * &p));
    let (mut r_less, mut r_greater) = (0.0, 0.0);
    for (i, &l) in d.lambda.iter().enumerate() {
        for (j, &m) in d.mu.iter().enumerate() {
            let o = d.overlap[(j, i)];
            if m >= cutoff {
                r_less += neg_part(l - cutoff) * o;
            } else {
                r_greater += pos_part(l - cutoff) * o;
            }
        }
    }
    let residual = (lhs - (main + r_less + r_greater)).abs();
    check(RemainderSet { part: 1, lhs, main, r_less, r_greater, residual, scale: inst.scale() })
}

/// Compressed `L = J* L̂ J`: `Tr(L-Λ)_- = Tr J*(L̂-Λ)_- J - R'_< - R'_>`.
pub fn verify_dirichlet_identity(inst: &TracePairInstance, cutoff: f64) -> Result<RemainderSet> {
    if !inst.compressed {
        return Err(LabError::InvalidInput("the second identity needs L = J* L_hat J".into()));
    }
    let d = decompose(inst)?;
    let lhs: f64 = d.lambda.iter().map(|&l| neg_part(l - cutoff)).sum();
    let neg = Mat::from_fn(inst.m, inst.m, |r, c| {
        let mut acc = c64::new(0.0, 0.0);
        for (j, &m) in d.mu.iter().enumerate() {
            acc += d.u[(r, j)] * d.u[(c, j)].conj() * neg_part(m - cutoff);
        }
        acc
    });
    let main = trace(&(inst.j.adjoint() * &neg * &inst.j));
    let (mut r_less, mut r_greater) = (0.0, 0.0);
    for (i, &l) in d.lambda.iter().enumerate() {
        for (j, &m) in d.mu.iter().enumerate() {
            let o = d.overlap[(j, i)];
            if l < cutoff {
                r_less += pos_part(m - cutoff) * o;
            } else {
                r_greater += neg_part(m - cutoff) * o;
            }
        }
    }
    let residual = (lhs - (main - r_less - r_greater)).abs();
    check(RemainderSet { part: 2, lhs, main, r_less, r_greater, residual, scale: inst.scale() })
}

/// `Tr(Ê J (L-Λ)_- J* Ê⊥)` plus its adjoint; vanishes identically.
pub fn cross_term_trace(inst: &TracePairInstance, cutoff: f64) -> Result<f64> {
    let d = decompose(inst)?;
    let (lambda, v) = eigh(&inst.l)?;
    let neg = Mat::from_fn(inst.n, inst.n, |r, c| {
        let mut acc = c64::new(0.0, 0.0);
        for (i, &l) in lambda.iter().enumerate() {
            acc += v[(r, i)] * v[(c, i)].conj() * neg_part(l - cutoff);
        }
        acc
    });
    let p = low_projection(&d.u, &d.mu, cutoff);
    let q = Mat::from_fn(inst.m, inst.m, |r, c| {
        (if r == c { c64::new(1.0, 0.0) } else { c64::new(0.0, 0.0) }) - p[(r, c)]
    });
    let x = &p * &inst.j * &neg * inst.j.adjoint() * &q;
    Ok(2.0 * trace(&x))
}

/// Ordered triple from the compressed identity and the general identity
/// applied to the same `L`: `neumann_main <= lhs <= dirichlet_main`.
#[derive(Clone, Debug, Serialize)]
pub struct BlyKroger {
    pub lhs: f64,
    pub dirichlet_main: f64,
    pub neumann_main: f64,
    /// `R'_< + R'_>`, the slack of the upper bound.
    pub gap: f64,
    pub upper_holds: bool,
    pub lower_holds: bool,
}

pub fn bly_kroger_finite(inst: &TracePairInstance, cutoff: f64) -> Result<BlyKroger> {
    let two = verify_dirichlet_identity(inst, cutoff)?;
    let one = verify_neumann_identity(inst, cutoff)?;
    let slack = 1e-10 * inst.scale();
    let out = BlyKroger {
        lhs: two.lhs,
        dirichlet_main: two.main,
        neumann_main: one.main,
        gap: two.r_less + two.r_greater,
        upper_holds: two.lhs <= two.main + slack,
        lower_holds: one.main <= one.lhs + slack,
    };
    if !out.upper_holds || !out.lower_holds {
        return Err(LabError::BoundViolation(format!(
            "finite bound fails: {} <= {} <= {}",
            out.neumann_main, out.lhs, out.dirichlet_main
        )));
    }
    Ok(out)
}

/// Randomized suite summary.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationSummary {
    pub trials: usize,
    /// Largest residual divided by its scale.
    pub max_residual: f64,
    /// Smallest remainder divided by its scale.
    pub min_remainder: f64,
    pub failures: usize,
}

/// Seed of trial `t` in a suite seeded by `seed`.
pub fn trial_seed(seed: u64, t: usize) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(t as u64)
}

/// Runs `trials` random instances for each identity (`n <= n_max`,
/// `n <= m <= m_max`, cutoff uniform in `[0, 2 ||L||]`).
pub fn verify_suite(trials: usize, seed: u64, n_max: usize, m_max: usize) -> VerificationSummary {
    use rayon::prelude::*;
    let per_trial: Vec<(f64, f64, usize)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, t));
            let n = rng.random_range(1..=n_max);
            let m = rng.random_range(n..=m_max.max(n));
            let mut worst = (0.0f64, f64::INFINITY, 0usize);
            for compressed in [false, true] {
                let outcome = random_instance(n, m, rng.random(), compressed).and_then(|inst| {
                    let cutoff = rng.random::<f64>() * 2.0 * inst.l_norm();
                    if compressed {
                        verify_dirichlet_identity(&inst, cutoff)
                    } else {
                        verify_neumann_identity(&inst, cutoff)
                    }
                });
                match outcome {
                    Ok(r) => {
                        let res = r.residual / r.scale;
                        let rem = r.min_remainder() / r.scale;
                        worst.0 = worst.0.max(res);
                        worst.1 = worst.1.min(rem);
                        if res > 1e-10 || rem < -1e-12 {
                            worst.2 += 1;
                        }
                    }
                    Err(_) => worst.2 += 1,
                }
            }
            worst
        })
        .collect();
    VerificationSummary {
        trials,
        max_residual: per_trial.iter().map(|w| w.0).fold(0.0, f64::max),
        min_remainder: per_trial.iter().map(|w| w.1).fold(f64::INFINITY, f64::min),
        failures: per_trial.iter().map(|w| w.2).sum(),
    }
}

/// How often the finite upper bound is strict.
#[derive(Clone, Debug, Serialize)]
pub struct StrictnessSummary {
    pub trials: usize,
    /// Trials whose cutoff lies strictly inside the spectral range of `L_hat`
    /// (outside it both remainders vanish identically).
    pub eligible: usize,
    /// Eligible trials with `R'_< + R'_> > 1e-12 scale`.
    pub strict: usize,
}

/// Random compressed instances with `n < m` and cutoffs in `[0, 2 ||L||]`.
pub fn upper_bound_strictness(trials: usize, seed: u64) -> Result<StrictnessSummary> {
    let (mut eligible, mut strict) = (0, 0);
    for t in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, t));
        let n = rng.random_range(1..12);
        let m = rng.random_range(n + 1..=30);
        let inst = random_instance(n, m, rng.random(), true)?;
        let cutoff = rng.random::<f64>() * 2.0 * inst.l_norm();
        let bk = bly_kroger_finite(&inst, cutoff)?;
        let (lo, hi) = inst.lhat_range()?;
        if lo < cutoff && cutoff < hi {
            eligible += 1;
            if bk.gap > 1e-12 * inst.scale() {
                strict += 1;
            }
        }
    }
    Ok(StrictnessSummary { trials, eligible, strict })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_determinism() {
        let a = random_instance(5, 9, 42, true).unwrap();
        let b = random_instance(5, 9, 42, true).unwrap();
        assert_eq!(a.lhat, b.lhat);
        assert_eq!(a.j, b.j);
        assert!(a.isometry_defect() < 1e-12);
    }

    #[test]
    fn identity_isometry_collapses_remainders() {
        let mut inst = random_instance(6, 6, 3, true).unwrap();
        inst.j = Mat::identity(6, 6);
        inst.l = inst.lhat.clone();
        for cutoff in [0.0, 2.5, 7.0, 30.0] {
            let one = verify_neumann_identity(&inst, cutoff).unwrap();
            let two = verify_dirichlet_identity(&inst, cutoff).unwrap();
            for r in [one.r_less, one.r_greater, two.r_less, two.r_greater] {
                assert!(r.abs() < 1e-12);
            }
            assert!((one.main - one.lhs).abs() < 1e-10);
        }
    }

    #[test]
    fn cutoff_zero() {
        let inst = random_instance(4, 10, 8, false).unwrap();
        let one = verify_neumann_identity(&inst, 0.0).unwrap();
        assert_eq!(one.lhs, 0.0);
        assert!(one.r_less.abs() < 1e-14);
    }

    #[test]
    fn cross_terms_cancel() {
        let inst = random_instance(7, 15, 5, true).unwrap();
        assert!(cross_term_trace(&inst, 4.0).unwrap().abs() < 1e-10);
    }
}
