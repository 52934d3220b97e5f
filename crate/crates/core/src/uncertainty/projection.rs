use crate::error::{LabError, Result};
use faer::{c64, Mat};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

/// Both sides of the two-projection inequality
/// `||PQg||^2 ||(1-P)Qg||^2 >= ||Qg||^2 ||(1-Q)(1-P)Qg||^2`
/// and, for `g` in `ran Q` but not in `ran P`, of
/// `||Pg||^2 >= ||g||^2 ||(1-Q)(1-P)g||^2 / ||(1-P)g||^2`.
#[derive(Clone, Debug, Serialize)]
pub struct ProjectionLemma {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    /// `(lhs, rhs, holds)` of the second form when it applies.
    pub second: Option<(f64, f64, bool)>,
}

fn apply(a: &Mat<c64>, g: &[c64]) -> Vec<c64> {
    (0..a.nrows()).map(|i| (0..a.ncols()).map(|j| a[(i, j)] * g[j]).sum()).collect()
}

fn complement(a: &Mat<c64>, g: &[c64]) -> Vec<c64> {
    apply(a, g).iter().zip(g).map(|(pg, x)| x - pg).collect()
}

fn nsq(v: &[c64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

fn check_projection(p: &Mat<c64>, name: &str) -> Result<()> {
    let n = p.nrows();
    if p.ncols() != n {
        return Err(LabError::NotProjection(format!("{name} is not square")));
    }
    let p2 = p * p;
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((p[(i, j)] - p[(j, i)].conj()).norm()).max((p2[(i, j)] - p[(i, j)]).norm());
        }
    }
    if worst > 1e-10 {
        return Err(LabError::NotProjection(format!("{name} misses Hermitian idempotency by {worst:.2e}")));
    }
    Ok(())
}

pub fn projection_lemma_check(p: &Mat<c64>, q: &Mat<c64>, g: &[c64]) -> Result<ProjectionLemma> {
    check_projection(p, "P")?;
    check_projection(q, "Q")?;
    if q.nrows() != p.nrows() || g.len() != p.nrows() {
        return Err(LabError::InvalidInput("dimension mismatch".into()));
    }
    let qg = apply(q, g);
    let pqg = apply(p, &qg);
    let rest = complement(p, &qg);
    let lhs = nsq(&pqg) * nsq(&rest);
    let rhs = nsq(&qg) * nsq(&complement(q, &rest));
    let scale = nsq(g).powi(2).max(f64::MIN_POSITIVE);
    let holds = lhs >= rhs - 1e-12 * scale;

    let gn = nsq(g);
    let off_q = nsq(&complement(q, g));
    let off_p = complement(p, g);
    let second = (off_q <= 1e-20 * gn && nsq(&off_p) > 1e-20 * gn).then(|| {
        let l = nsq(&apply(p, g));
        let r = gn * nsq(&complement(q, &off_p)) / nsq(&off_p);
        (l, r, l >= r - 1e-12 * gn.max(f64::MIN_POSITIVE))
    });
    Ok(ProjectionLemma { lhs, rhs, holds, second })
}

/// Orthogonal projection onto the span of `rank` Gaussian vectors.
pub fn random_projection<R: Rng>(dim: usize, rank: usize, rng: &mut R) -> Mat<c64> {
    if rank == 0 {
        return Mat::zeros(dim, dim);
    }
    let g = Mat::from_fn(dim, rank, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        c64::new(re, im)
    });
    let u = g.qr().compute_thin_Q();
    let p = &u * u.adjoint();
    Mat::from_fn(dim, dim, |i, j| (p[(i, j)] + p[(j, i)].conj()) * 0.5)
}
