//! Closed-form expressions and their exact second-order jets.
//!
//! Every kernel, input and coefficient is an [`Expression`]. Evaluating it on
//! a [`transmutation::Jet2`] yields the value together with all first and
//! second partials in `x` and `t`, exact to rounding. Here the jet is compared
//! against central finite differences.

use transmutation::{Expression, Params};

fn main() {
    let params = Params::new().with("mu", 1.0);
    let k = Expression::parse("besselj(0, mu*sqrt(x^2 - t^2))").expect("valid expression");
    println!("K(x,t) = {k}");

    let (x, t) = (1.3, 0.4);
    let jet = k.eval_jet(x, t, &params).expect("inside the domain");
    let f = |x: f64, t: f64| k.eval_at(x, t, &params).unwrap();
    let h = 1e-4;
    let fd = [
        ("K_x", jet.dx, (f(x + h, t) - f(x - h, t)) / (2.0 * h)),
        ("K_t", jet.dt, (f(x, t + h) - f(x, t - h)) / (2.0 * h)),
        ("K_xx", jet.dxx, (f(x + h, t) - 2.0 * f(x, t) + f(x - h, t)) / (h * h)),
        ("K_tt", jet.dtt, (f(x, t + h) - 2.0 * f(x, t) + f(x, t - h)) / (h * h)),
        (
            "K_xt",
            jet.dxt,
            (f(x + h, t + h) - f(x + h, t - h) - f(x - h, t + h) + f(x - h, t - h)) / (4.0 * h * h),
        ),
    ];
    println!("value {:.15}", jet.value);
    for (name, exact, approx) in fd {
        println!("{name:<5} jet {exact:>20.15}  finite difference {approx:>20.15}");
    }

    // The telegraph equation K_tt - K_xx = mu^2 K holds identically.
    println!("K_tt - K_xx - mu^2 K = {:.2e}", jet.dtt - jet.dxx - jet.value);

    // Parse errors point at the offending byte.
    if let Err(e) = Expression::parse("sin(x) * (t +") {
        println!("parse error: {e}");
    }
}
