//! Compute a kernel from its operator pair by marching along characteristics.
//!
//! For `A = D²` and `B = D² + μ²` the kernel solves `K_tt − K_xx = μ² K`
//! with `K(x,x) = 1` and `K_t(x,0) = 0`, whose solution is
//! `J0(μ sqrt(x² − t²))`. The lattice error should fall by 4 per halving of h.

use transmutation::conditions::KernelField;
use transmutation::goursat::{compare, potential_from_diagonal, solve, Boundary, GoursatProblem};
use transmutation::{Expression, Params};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let exact = Expression::parse("besselj(0, sqrt(abs(x^2 - t^2)))")?;
    for boundary in [Boundary::Neumann, Boundary::Robin, Boundary::Reflect] {
        let mut previous: Option<f64> = None;
        print!("{:<8}", boundary.name());
        for k in 5..=8 {
            let mut problem = GoursatProblem::telegraph(1.0, 2.0, 2f64.powi(-k), false);
            problem.boundary = boundary;
            let err = compare(&solve(&problem)?, &exact, &Params::new()).max;
            match previous {
                Some(p) => print!("  h=1/{:<4} {err:.2e} (order {:.2})", 1 << k, (p / err).log2()),
                None => print!("  h=1/{:<4} {err:.2e}", 1 << k),
            }
            previous = Some(err);
        }
        println!();
    }

    // The lattice interpolates to a smooth field with exact jets of the cubic
    // stencil; here its value off the lattice.
    let grid = solve(&GoursatProblem::telegraph(1.0, 2.0, 1.0 / 64.0, false))?;
    let jet = grid.interpolant().jet(1.37, 0.61)?;
    let want = exact.eval_at(1.37, 0.61, &Params::new())?;
    println!("\nK(1.37, 0.61): interpolated {:.10}, exact {want:.10}", jet.value);

    // A drift term b1 bends the diagonal: K(x,x) = exp(-x^2/2) for b1 = 2x.
    let mut drift = GoursatProblem::new(1.0, 1.0 / 64.0);
    drift.b1 = Expression::parse("2*x")?;
    let (dx, diag) = solve(&drift)?.diagonal();
    let slope = potential_from_diagonal(&diag, dx)?;
    let mid = diag.len() / 2;
    let x = mid as f64 * dx;
    println!(
        "diagonal at x = {x}: {:.12} (exp(-x^2/2) = {:.12}), 2 dK/dx = {:.6} (exact {:.6})",
        diag[mid],
        (-x * x / 2.0).exp(),
        slope[mid],
        -2.0 * x * (-x * x / 2.0).exp()
    );
    Ok(())
}
