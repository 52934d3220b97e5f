//! `‖PQg‖² ‖(1-P)Qg‖² ≥ ‖Qg‖² ‖(1-Q)(1-P)Qg‖²` for orthogonal projections
//! P, Q, checked on random pairs, plus the form it takes for g in ran Q.
//!
//!     cargo run --example projection_lemma

use faer::c64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use riesz_lab::uncertainty::{projection_lemma_check, random_projection};

fn main() -> riesz_lab::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut held, mut tightest) = (0, f64::INFINITY);
    for _ in 0..500 {
        let dim = rng.random_range(2..=10);
        let p = random_projection(dim, rng.random_range(1..dim), &mut rng);
        let q = random_projection(dim, rng.random_range(1..dim), &mut rng);
        let g: Vec<c64> = (0..dim).map(|_| c64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
        let r = projection_lemma_check(&p, &q, &g)?;
        held += r.holds as usize;
        tightest = tightest.min(r.lhs - r.rhs);
    }
    println!("held in {held}/500 trials, smallest slack {tightest:.3e}");

    // a vector in ran Q: the second form of the inequality applies
    let p = random_projection(6, 2, &mut rng);
    let q = random_projection(6, 3, &mut rng);
    let x: Vec<c64> = (0..6).map(|i| c64::new(i as f64, 1.0)).collect();
    let g: Vec<c64> = (0..6).map(|i| (0..6).map(|j| q[(i, j)] * x[j]).sum()).collect();
    let r = projection_lemma_check(&p, &q, &g)?;
    println!("g in ran Q: lhs {:.4}, rhs {:.4}, second form {:?}", r.lhs, r.rhs, r.second);
    Ok(())
}
