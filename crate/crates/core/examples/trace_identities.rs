//! The finite-dimensional identities behind both bounds: for an isometry
//! `J` and `L = J* L̂ J`, the Riesz mean of `L` equals the main term minus
//! two nonnegative remainders.
//!
//!     cargo run --example trace_identities

use riesz_lab::abstract_traces::{
    bly_kroger_finite, random_instance, upper_bound_strictness, verify_dirichlet_identity, verify_neumann_identity,
    verify_suite,
};

fn main() -> riesz_lab::Result<()> {
    let inst = random_instance(6, 15, 2024, true)?;
    let (lo, hi) = inst.lhat_range()?;
    println!("n = {}, m = {}, spec(L̂) ⊂ [{lo:.3}, {hi:.3}]", inst.n, inst.m);
    println!("{:>7} {:>9} {:>9} {:>9} {:>9} {:>9}", "Lambda", "Tr(L-Λ)-", "main", "R_<", "R_>", "residual");
    for cutoff in [1.0, 3.0, 6.0, 12.0] {
        let two = verify_dirichlet_identity(&inst, cutoff)?;
        println!(
            "{cutoff:>7} {:>9.4} {:>9.4} {:>9.4} {:>9.4} {:>9.1e}",
            two.lhs, two.main, two.r_less, two.r_greater, two.residual
        );
    }
    let one = verify_neumann_identity(&inst, 6.0)?;
    let bk = bly_kroger_finite(&inst, 6.0)?;
    println!("\ngeneral identity at Λ = 6: main {:.4}, R_< {:.4}, R_> {:.4}", one.main, one.r_less, one.r_greater);
    println!("{:.4} <= {:.4} <= {:.4}", bk.neumann_main, bk.lhs, bk.dirichlet_main);

    let suite = verify_suite(300, 1, 12, 30);
    println!("\n{} random instances: max residual {:.2e}, min remainder {:.2e}, failures {}",
        suite.trials, suite.max_residual, suite.min_remainder, suite.failures);
    let strict = upper_bound_strictness(300, 1)?;
    println!("upper bound strict in {}/{} instances with Λ inside spec(L̂)", strict.strict, strict.eligible);
    Ok(())
}
