//! Decides whether random automorphism components are variables and prints
//! the certificate.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use jacobian_hd::automorphism::random_automorphism;
use jacobian_hd::decide::{decide_variable, Budgets};
use jacobian_hd::expr::{format_polynomial, var_names};
use jacobian_hd::poly::PrimeField;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let vars = var_names("x,y");
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for p in [2, 3, 5] {
        let sigma = random_automorphism(&mut rng, 2, p, 3);
        let f = &sigma.map[0];
        let verdict = decide_variable(f, PrimeField::new(p)?, &Budgets::default())?;
        println!("p = {p}, f = {}", format_polynomial(f, &vars));
        println!("{}", verdict.render_text(&vars));
    }
    Ok(())
}
