//! Loads a hand-written family from JSON and checks its axioms.

use jacobian_hd::expr::parse_int;
use jacobian_hd::higher_deriv::{
    is_iterative_up_to, is_jacobian_type, is_locally_finite_up_to, load_spec_json, verify_axioms,
};

const SPEC: &str = r#"{
  "p": 2,
  "vars": ["x", "y"],
  "trunc": 8,
  "images": {
    "x": ["x", "x", "x", "x", "x", "x", "x", "x", "x"],
    "y": ["y", "y"]
  },
  "exact": ["y"]
}"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let loaded = load_spec_json(SPEC)?;
    let spec = &loaded.spec;
    let x = spec.images()[0].constant_term().clone();
    let y = spec.images()[1].constant_term().clone();

    let axioms = verify_axioms(spec, &[(x.clone(), y.clone()), (&x * &y, &x + &y)])?;
    println!("axioms pass: {}", axioms.passed());
    println!("local finiteness: {:?}", is_locally_finite_up_to(spec));
    println!("iterativity: {:?}", is_iterative_up_to(spec)?);

    let xy = parse_int("x*y", &loaded.vars)?;
    for (name, check) in is_jacobian_type(spec, &[xy])?.checks() {
        println!("{name}: {check:?}");
    }
    Ok(())
}
