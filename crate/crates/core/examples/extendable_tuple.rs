//! Extends a pair in three variables to a full coordinate system.

use jacobian_hd::decide::{decide_extendable, Budgets};
use jacobian_hd::expr::{parse_int, var_names};
use jacobian_hd::poly::PrimeField;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let vars = var_names("x,y,z");
    let tuple = [parse_int("x + y^2", &vars)?, parse_int("z + x*y", &vars)?];
    let verdict = decide_extendable(&tuple, PrimeField::new(2)?, &Budgets::default())?;
    println!("{}", verdict.render_text(&vars));
    Ok(())
}
