//! The plain Jacobian derivation of `x - y^3` does not fix it in characteristic 3,
//! while the lifted one does.

use jacobian_hd::expr::{format_series, parse_int, parse_mod, var_names};
use jacobian_hd::higher_deriv::{fixes_polynomial, is_jacobian_type, Fixes, HigherDerivationSpec};
use jacobian_hd::jacobian::CharZeroDerivation;
use jacobian_hd::poly::PrimeField;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let vars = var_names("x,y");
    let field = PrimeField::new(3)?;
    let f = parse_int("x - y^3", &vars)?;
    let f_mod = parse_mod("x - y^3", &vars, field)?;

    // Mod 3 the Jacobian derivation of x - y^3 is d/dy.
    let plain = HigherDerivationSpec::exp_of(CharZeroDerivation::partial(2, 1), field, 16)?;
    let lifted = HigherDerivationSpec::canonical(&[f.clone()], field, 16)?;

    for (label, spec) in [("plain", &plain), ("lifted", &lifted)] {
        println!("{label}:");
        println!("  phi(f) = {}", format_series(&spec.apply(&f_mod)?, &vars));
        match fixes_polynomial(spec, &f_mod)? {
            Fixes::PassUpTo(t) => println!("  fixes f through t^{t}"),
            Fixes::FailsAtOrder { order, residual } => {
                println!("  moves f at order {order}: residual {}", format_series(&residual, &vars))
            }
        }
        println!("  Jacobian type: {}", is_jacobian_type(spec, &[f.clone()])?.passed());
    }
    Ok(())
}
