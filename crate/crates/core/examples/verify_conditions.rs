//! Check the existence conditions for one catalog case.
//!
//! ```text
//! cargo run --example verify_conditions -- lowndes nu=2
//! ```
//!
//! A perturbed copy of the case is verified as well, to show that the
//! hyperbolic residual is a real test.

use transmutation::conditions::{verify_all, VerificationReport, VerifyConfig};
use transmutation::kernels::{get_case, Coefficient};
use transmutation::Params;

fn print(report: &VerificationReport) {
    for c in &report.conditions {
        let slope = c.decay_slope.map(|k| format!(" slope {k:.2}")).unwrap_or_default();
        let note = if c.informational { " (finite nonzero limit)" } else { "" };
        println!(
            "  {:<15} {:<4} max {:.2e}{slope}{note}",
            c.id,
            if c.pass { "ok" } else { "FAIL" },
            c.max_residual
        );
    }
    println!("  overall: {}", if report.overall_pass { "pass" } else { "FAIL" });
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "vekua_telegraph".to_string());
    let overrides = match args.next() {
        Some(text) => Params::parse_assignments(&text)?,
        None => Params::new(),
    };
    let case = get_case(&name, &overrides)?;
    let cfg = VerifyConfig::default();

    println!("{name}:");
    print(&verify_all(&case, &cfg)?);

    println!("{name} with c1 shifted by 0.1:");
    print(&verify_all(&case.corrupted(Coefficient::C1, 0.1), &cfg)?);
    Ok(())
}
