//! Walk the built-in catalog: names, defaults, formulas and admissibility.
//!
//! ```text
//! cargo run --example catalog_tour
//! ```

use transmutation::kernels::{default_params, describe, get_case, list_cases, CatalogError};
use transmutation::Params;

fn main() -> Result<(), CatalogError> {
    println!("{} cases:", list_cases().len());
    for name in list_cases() {
        let defaults: Vec<String> = default_params(name)?.iter().map(|(k, v)| format!("{k}={v}")).collect();
        println!("  {name:<16} {}", defaults.join(", "));
    }

    println!();
    print!("{}", describe(&get_case("vekua_telegraph", &Params::new())?));

    // Overrides are merged over the defaults and checked against each
    // case's admissibility constraints.
    let sonin = get_case("sonin", &Params::new().with("mu", 1.5))?;
    println!("\nsonin with mu = 1.5: kernel {}", sonin.kernel);
    for bad in [Params::new().with("mu", -2.0), Params::new().with("kappa", 1.0)] {
        match get_case("sonin", &bad) {
            Err(e) => println!("rejected: {e}"),
            Ok(_) => unreachable!("inadmissible overrides must be rejected"),
        }
    }
    Ok(())
}
