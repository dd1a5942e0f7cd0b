//! Checks that the canonical family commutes with a change of coordinates.

use jacobian_hd::decide::conjugation_check;
use jacobian_hd::expr::{parse_int, var_names};
use jacobian_hd::poly::PrimeField;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let vars = var_names("x,y");
    let parse = |s: &str| parse_int(s, &vars);
    let tuple = [parse("x - y^3")?];
    let sigma = [parse("x + y^2")?, parse("y")?];
    let sigma_inv = [parse("x - y^2")?, parse("y")?];
    let outcome = conjugation_check(&tuple, &sigma, &sigma_inv, PrimeField::new(3)?, 16)?;
    println!("{outcome:?}");
    Ok(())
}
