//! Recognises polynomials in a single variable and rejects `xy`.

use jacobian_hd::decide::{decide_univariate, Budgets};
use jacobian_hd::expr::{parse_int, var_names};
use jacobian_hd::poly::PrimeField;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let vars = var_names("x,y");
    let field = PrimeField::new(3)?;
    for text in ["(x - y^3)^2 + (x - y^3)", "x*y"] {
        let f = parse_int(text, &vars)?;
        let verdict = decide_univariate(&f, field, &Budgets::default())?;
        println!("f = {text}");
        println!("{}", verdict.render_text(&vars));
    }
    Ok(())
}
