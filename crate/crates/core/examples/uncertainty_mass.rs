//! Eigenfunctions of a bounded domain cannot be band-limited: the Fourier
//! mass above any cutoff is positive, decaying roughly like exp(-c rho_theta sqrt(Λ)).
//! Also the exact discrete trace identity behind the Dirichlet bound.
//!
//!     cargo run --release --example uncertainty_mass

use riesz_lab::geometry::{make_shape, regularized_inradius, Shape};
use riesz_lab::operators::{eigensolve, laplacian, BoundaryCondition, Dispersion, EigenOptions, EigenRequest};
use riesz_lab::uncertainty::{remainders_free, zero_extend, FourierProfile};

fn main() -> riesz_lab::Result<()> {
    let h = 1.0 / 64.0;
    let d = make_shape(&Shape::Disk { radius: 0.5 }, h)?;
    let rho = regularized_inradius(&d, 0.25, h)?;
    let op = laplacian(&d, BoundaryCondition::Dirichlet)?;
    let s = eigensolve(&op, EigenRequest::Lowest(3), &EigenOptions::default())?;
    println!("disk R = 1/2, rho_theta = {rho:.4}");
    println!("{:>3} {:>9} {:>8} {:>8} {:>12}", "n", "lambda_n", "Lambda", "E", "high/total");
    for (n, (v, l)) in s.vectors()?.iter().zip(&s.eigenvalues).enumerate() {
        let prof = FourierProfile::new(&zero_extend(v, &op, 4)?, Dispersion::Continuum);
        for cutoff in [1.5 * l, 3.0 * l, 6.0 * l] {
            let m = prof.at(cutoff);
            println!("{:>3} {l:>9.3} {cutoff:>8.1} {:>8.3} {:>12.4e}", n + 1, rho * cutoff.sqrt(), m.relative_high());
        }
    }

    // Riesz mean + R'_< + R'_> = (#Ω/#torus) Σ_ξ (λ(ξ) - Λ)_- exactly
    let sq = make_shape(&Shape::Rectangle { width: 1.0, height: 1.0 }, 1.0 / 16.0)?;
    let op = laplacian(&sq, BoundaryCondition::DirichletCompressed)?;
    let all = eigensolve(&op, EigenRequest::All, &EigenOptions::default())?;
    println!("\n{:>6} {:>10} {:>10} {:>10} {:>10} {:>9}", "Lambda", "riesz", "main", "R'_<", "R'_>", "residual");
    for cutoff in [20.0, 50.0, 80.0] {
        let r = remainders_free(&op, &all, cutoff, 4, Dispersion::Discrete)?;
        println!(
            "{cutoff:>6} {:>10.4} {:>10.4} {:>10.4} {:>10.4} {:>9.1e}",
            r.riesz, r.main, r.r_less, r.r_greater, r.identity_residual
        );
    }
    Ok(())
}
