use jacobian_hd::expr::{format_polynomial, parse_int, parse_mod, var_names};
use jacobian_hd::poly::PrimeField;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let vars = var_names("x,y,z");
    let g = parse_int("(x + 2*y)^3 - 4*z*x", &vars)?;
    println!("over Z:   {}", format_polynomial(&g, &vars));
    let h = parse_mod("(x + 2*y)^3 - 4*z*x", &vars, PrimeField::new(3)?)?;
    println!("over F_3: {}", format_polynomial(&h, &vars));
    match parse_int("x + * y", &vars) {
        Ok(_) => unreachable!(),
        Err(e) => println!("error: {e}"),
    }
    Ok(())
}
