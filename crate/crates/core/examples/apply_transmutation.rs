//! Evaluate `T f0(x) = ∫₀ˣ K(x,t) f0(t) dt` and compare with the image `f1`.
//!
//! The integrand's endpoint singularities `(x−t)^α t^β` go into the weight of
//! a Gauss–Jacobi rule. The remaining factor is smooth, so modest orders
//! already reach rounding level.

use transmutation::kernels::get_case;
use transmutation::quadrature::{apply_table, identity_error, identity_xs};
use transmutation::Params;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // nu = 1/2 reduces the Poisson integral to sqrt(2/pi) sin x.
    let poisson = get_case("poisson_bessel", &Params::new().with("nu", 0.5))?;
    println!("{:>6} {:>20} {:>20}", "x", "T f0", "sqrt(2/pi) sin x");
    for row in apply_table(&poisson, &[0.5, 1.0, 2.0, 3.0], 64)? {
        let closed = (2.0 / std::f64::consts::PI).sqrt() * row.x.sin();
        println!("{:>6.2} {:>20.16} {:>20.16}", row.x, row.transformed, closed);
    }

    println!("\nconvergence in the quadrature order:");
    for name in ["sonin", "sine_to_bessel", "cosh_1f2"] {
        let case = get_case(name, &Params::new())?;
        let xs = identity_xs(&case);
        let errs: Vec<String> = [8, 16, 32, 64]
            .iter()
            .map(|&n| identity_error(&case, &xs, n).map(|e| format!("{e:.1e}")))
            .collect::<Result<_, _>>()?;
        println!("  {name:<15} n = 8, 16, 32, 64: {}", errs.join("  "));
    }
    Ok(())
}
