use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use jacobian_hd::automorphism::random_automorphism;
use jacobian_hd::decide::{decide_extendable, decide_univariate, Answer, Budgets, Evidence};
use jacobian_hd::poly::PrimeField;

#[test]
fn three_variable_pairs_from_automorphisms_extend() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let budgets = Budgets::default();
    let mut unknown = 0;
    for k in 0..30 {
        let p = [2, 3, 5][k % 3];
        let sigma = random_automorphism(&mut rng, 3, p, 2);
        let tuple = &sigma.map[..2];
        let verdict = decide_extendable(tuple, PrimeField::new(p).unwrap(), &budgets).unwrap();
        assert_ne!(verdict.answer, Answer::No, "case {k}: {tuple:?}");
        assert!(verdict.verify().unwrap());
        match &verdict.evidence {
            Evidence::Certificate(cert) => assert!(cert.verify()),
            _ => unknown += 1,
        }
    }
    assert!(unknown <= 3, "{unknown} of 30 undecided");
}

#[test]
fn univariate_of_a_variable_is_recognised() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let budgets = Budgets::default();
    for k in 0..10 {
        let p = [3, 5][k % 2];
        let sigma = random_automorphism(&mut rng, 2, p, 2);
        let g = &sigma.map[0];
        let f = &(g * g) + g;
        let verdict = decide_univariate(&f, PrimeField::new(p).unwrap(), &budgets).unwrap();
        assert_ne!(verdict.answer, Answer::No, "case {k}");
        assert!(verdict.verify().unwrap());
    }
}
