use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use jacobian_hd::automorphism::random_automorphism;
use jacobian_hd::decide::{decide_variable, Budgets};
use jacobian_hd::expr::{format_polynomial, parse_int, parse_mod, var_names};
use jacobian_hd::higher_deriv::{
    canonical_exp_map, fixes_polynomial, is_iterative_up_to, kernel_up_to_degree, verify_axioms, ExpOutcome,
    HigherDerivationSpec, Iterativity,
};
use jacobian_hd::jacobian::{bracket_power, CharZeroDerivation};
use jacobian_hd::poly::{lift_canonical, lift_symmetric, IntPolynomial, Integers, ModPolynomial, Monomial, PrimeField, Valuation};

fn xy() -> Vec<String> {
    var_names("x,y")
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7])
}

fn int_poly(max_deg: u32, bound: i64) -> impl Strategy<Value = IntPolynomial> {
    let monos = Monomial::all_up_to_degree(2, max_deg);
    let n = monos.len();
    prop::collection::vec(-bound..=bound, n).prop_map(move |cs| {
        IntPolynomial::from_terms(Integers, 2, monos.iter().cloned().zip(cs.into_iter().map(BigInt::from)))
    })
}

fn mod_poly(p: u64, max_deg: u32) -> impl Strategy<Value = ModPolynomial> {
    int_poly(max_deg, 20).prop_map(move |g| g.reduce(PrimeField::new(p).unwrap()))
}

fn mod_triple() -> impl Strategy<Value = (ModPolynomial, ModPolynomial, ModPolynomial)> {
    prime().prop_flat_map(|p| (mod_poly(p, 3), mod_poly(p, 3), mod_poly(p, 3)))
}

/// A component of a random automorphism, so the canonical family is usually defined.
fn automorphism_component() -> impl Strategy<Value = (IntPolynomial, u64)> {
    (any::<u64>(), prop::sample::select(vec![2u64, 3, 5]), 0..2usize).prop_map(|(seed, p, k)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (random_automorphism(&mut rng, 2, p, 3).map.swap_remove(k), p)
    })
}

fn defined_spec(f: &IntPolynomial, p: u64, trunc: usize) -> Option<HigherDerivationSpec> {
    let field = PrimeField::new(p).unwrap();
    match canonical_exp_map(&[f.clone()], field, trunc).ok()? {
        ExpOutcome::Defined(_) => HigherDerivationSpec::canonical(&[f.clone()], field, trunc).ok(),
        ExpOutcome::Undefined(_) => None,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms_mod_p((a, b, c) in mod_triple()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn format_then_parse_round_trips(g in int_poly(4, 50)) {
        let text = format_polynomial(&g, &xy());
        prop_assert_eq!(parse_int(&text, &xy()).unwrap(), g);
    }

    #[test]
    fn mod_format_then_parse_round_trips(p in prime(), g in int_poly(4, 50)) {
        let field = PrimeField::new(p).unwrap();
        let g = g.reduce(field);
        let text = format_polynomial(&g, &xy());
        prop_assert_eq!(parse_mod(&text, &xy(), field).unwrap(), g);
    }

    #[test]
    fn lifts_reduce_back(p in prime(), g in int_poly(3, 30)) {
        let field = PrimeField::new(p).unwrap();
        let g = g.reduce(field);
        prop_assert_eq!(lift_canonical(&g).reduce(field), g.clone());
        prop_assert_eq!(lift_symmetric(&g).reduce(field), g);
    }

    #[test]
    fn valuation_laws(p in prime(), a in int_poly(2, 40), b in int_poly(2, 40)) {
        let (va, vb) = (a.min_p_valuation(p), b.min_p_valuation(p));
        prop_assert!((&a + &b).min_p_valuation(p) >= va.min(vb));
        let expected = match (va, vb) {
            (Valuation::Finite(x), Valuation::Finite(y)) => Valuation::Finite(x + y),
            _ => Valuation::Infinity,
        };
        prop_assert_eq!((&a * &b).min_p_valuation(p), expected);
    }

    #[test]
    fn bracket_power_composes(g in int_poly(2, 3), c0 in int_poly(2, 3), c1 in int_poly(2, 3), a in 1usize..5, b in 1usize..5) {
        let d = CharZeroDerivation::new(vec![c0, c1]).unwrap();
        let inner = bracket_power(&d, &g, a).unwrap();
        prop_assert_eq!(bracket_power(&d, &g, a + b).unwrap(), bracket_power(&d, &inner, b).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn canonical_families_are_multiplicative((f, p) in automorphism_component(), g in int_poly(2, 5), h in int_poly(2, 5)) {
        let Some(spec) = defined_spec(&f, p, 12) else { return Ok(()) };
        let field = spec.field();
        let (g, h) = (g.reduce(field), h.reduce(field));
        let lhs = spec.apply(&(&g * &h)).unwrap();
        let rhs = spec.apply(&g).unwrap().mul(&spec.apply(&h).unwrap()).unwrap();
        prop_assert_eq!(lhs.coeffs(), rhs.coeffs());
        let report = verify_axioms(&spec, &[(g, h)]).unwrap();
        prop_assert!(report.passed(), "{:?}", report);
    }

    #[test]
    fn canonical_families_fix_their_polynomial((f, p) in automorphism_component()) {
        let Some(spec) = defined_spec(&f, p, 24) else { return Ok(()) };
        prop_assert!(fixes_polynomial(&spec, &f.reduce(spec.field())).unwrap().passed());
    }

    #[test]
    fn iterativity_survives_truncation((f, p) in automorphism_component(), smaller in 1usize..16) {
        let Some(spec) = defined_spec(&f, p, 16) else { return Ok(()) };
        if let Iterativity::Pass { .. } = is_iterative_up_to(&spec).unwrap() {
            let narrowed = spec.truncated(smaller);
            prop_assert_eq!(is_iterative_up_to(&narrowed).unwrap(), Iterativity::Pass { trunc: smaller });
        }
    }

    #[test]
    fn kernel_is_closed_under_products((f, p) in automorphism_component()) {
        let Some(spec) = defined_spec(&f, p, 10) else { return Ok(()) };
        let kernel = kernel_up_to_degree(&spec, 3, 10).unwrap();
        for a in &kernel.basis {
            for b in &kernel.basis {
                prop_assert!(fixes_polynomial(&spec, &(a * b)).unwrap().passed());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn variable_verdict_is_stable_under_swapping((f, p) in automorphism_component()) {
        let field = PrimeField::new(p).unwrap();
        let budgets = Budgets::default();
        let swapped = f.permute_vars(&[1, 0]);
        let a = decide_variable(&f, field, &budgets).unwrap();
        let b = decide_variable(&swapped, field, &budgets).unwrap();
        prop_assert_eq!(a.answer, b.answer);
        prop_assert!(a.verify().unwrap() && b.verify().unwrap());
    }
}
