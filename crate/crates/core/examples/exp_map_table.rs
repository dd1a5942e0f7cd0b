//! Integer brackets of the canonical derivation and the resulting family.

use jacobian_hd::expr::{format_polynomial, format_series, parse_int, var_names};
use jacobian_hd::higher_deriv::HigherDerivationSpec;
use jacobian_hd::jacobian::{bracket_power, delta_tilde, FactorialSplit};
use jacobian_hd::poly::{IntPolynomial, Integers, PrimeField};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let vars = var_names("x,y");
    let field = PrimeField::new(3)?;
    let f = parse_int("x - y^3", &vars)?;
    let d = delta_tilde(&[f.clone()])?;

    let x = IntPolynomial::var(Integers, 2, 0);
    for ell in 1..=4 {
        let split = FactorialSplit::new(ell, field);
        let b = bracket_power(&d, &x, ell as usize)?;
        println!("l = {ell}: {ell}! = 3^{}*m, m^-1 = {} mod 3  [d]^l(x) = {}", split.e, split.m_inv, format_polynomial(&b, &vars));
    }

    let spec = HigherDerivationSpec::canonical(&[f], field, 16)?;
    for (name, image) in vars.iter().zip(spec.images()) {
        println!("phi({name}) = {}", format_series(image, &vars));
    }
    Ok(())
}
