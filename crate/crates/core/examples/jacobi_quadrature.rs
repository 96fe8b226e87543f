//! Gauss–Jacobi rules for the weight `(1−s)^α (1+s)^β` on `[−1, 1]`.

use transmutation::quadrature::jacobi_rule;
use transmutation::specfun::beta;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rule = jacobi_rule(5, -0.5, 0.0)?;
    println!("n = 5, alpha = -1/2, beta = 0");
    for (s, w) in rule.nodes.iter().zip(&rule.weights) {
        println!("  node {s:>22.17}  weight {w:.17}");
    }
    println!("  weight sum {:.17} (exact 2 sqrt 2 = {:.17})", rule.weights.iter().sum::<f64>(), 2.0 * 2f64.sqrt());

    // A rule of order n is exact for polynomials of degree 2n-1.
    let rule = jacobi_rule(4, 0.5, 0.5)?;
    let got = rule.integrate(|s| s.powi(6));
    // ∫ s^6 sqrt(1-s^2) ds = B(7/2, 3/2)
    let exact = beta(3.5, 1.5)?;
    println!("\nn = 4, alpha = beta = 1/2: ∫ s^6 w = {got:.17} vs {exact:.17}");

    // One order lower is no longer exact.
    let low = jacobi_rule(3, 0.5, 0.5)?.integrate(|s| s.powi(6));
    println!("n = 3 gives {low:.17}");
    Ok(())
}
