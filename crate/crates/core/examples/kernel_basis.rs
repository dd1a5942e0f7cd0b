//! Kernel of the canonical family of `x - y^3` over `F_3`.

use jacobian_hd::expr::{format_polynomial, parse_int, var_names};
use jacobian_hd::higher_deriv::{kernel_up_to_degree, HigherDerivationSpec};
use jacobian_hd::poly::PrimeField;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let vars = var_names("x,y");
    let f = parse_int("x - y^3", &vars)?;
    let spec = HigherDerivationSpec::canonical(&[f], PrimeField::new(3)?, 64)?;
    let kernel = kernel_up_to_degree(&spec, 6, 10)?;
    println!("dimension {} up to degree {}", kernel.basis.len(), kernel.dmax);
    for g in &kernel.basis {
        println!("  {}", format_polynomial(g, &vars));
    }
    Ok(())
}
