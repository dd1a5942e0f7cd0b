//! Random polynomial automorphisms over `Z` with known inverses.
//!
//! Automorphisms are composed from elementary steps: triangular maps
//! `x_i -> x_i + a(x_j)`, swaps, sign changes and translations. Each step has
//! an integer inverse, so the composite does too, and reduces to an
//! automorphism over every `F_p`.

use num_bigint::BigInt;
use rand::Rng;

use crate::error::Result;
use crate::poly::{IntPolynomial, Integers, Monomial};

/// `sigma(x_i) = map[i]` together with `sigma^{-1}(x_i) = inverse[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    pub map: Vec<IntPolynomial>,
    pub inverse: Vec<IntPolynomial>,
}

fn vars(n: usize) -> Vec<IntPolynomial> {
    (0..n).map(|i| IntPolynomial::var(Integers, n, i)).collect()
}

impl Automorphism {
    pub fn identity(n: usize) -> Self {
        Automorphism { map: vars(n), inverse: vars(n) }
    }

    pub fn arity(&self) -> usize {
        self.map.len()
    }

    /// `self o other`, i.e. `x_i -> other_i(self_1, ..., self_n)`.
    pub fn then(&self, other: &Automorphism) -> Result<Automorphism> {
        let map = other.map.iter().map(|g| g.substitute(&self.map)).collect::<Result<_>>()?;
        let inverse = self.inverse.iter().map(|g| g.substitute(&other.inverse)).collect::<Result<_>>()?;
        Ok(Automorphism { map, inverse })
    }

    pub fn max_degree(&self) -> u64 {
        self.map.iter().chain(&self.inverse).filter_map(|g| g.total_degree()).max().unwrap_or(0)
    }

    /// Both compositions are the identity over `Z`.
    pub fn is_consistent(&self) -> bool {
        let n = self.arity();
        let id = vars(n);
        let a: Result<Vec<_>> = self.inverse.iter().map(|g| g.substitute(&self.map)).collect();
        let b: Result<Vec<_>> = self.map.iter().map(|g| g.substitute(&self.inverse)).collect();
        matches!((a, b), (Ok(a), Ok(b)) if a == id && b == id)
    }

    /// `x_i -> x_i + a(x_j)`.
    pub fn triangular(n: usize, i: usize, a: &IntPolynomial) -> Automorphism {
        let mut map = vars(n);
        let mut inverse = vars(n);
        map[i] = &map[i] + a;
        inverse[i] = &inverse[i] - a;
        Automorphism { map, inverse }
    }

    pub fn swap(n: usize, i: usize, j: usize) -> Automorphism {
        let mut map = vars(n);
        map.swap(i, j);
        Automorphism { inverse: map.clone(), map }
    }

    pub fn negate(n: usize, i: usize) -> Automorphism {
        let mut map = vars(n);
        map[i] = -&map[i];
        Automorphism { inverse: map.clone(), map }
    }

    pub fn translate(n: usize, shift: &[i64]) -> Automorphism {
        let mut map = vars(n);
        let mut inverse = vars(n);
        for (i, &c) in shift.iter().enumerate() {
            map[i] = &map[i] + &IntPolynomial::constant(Integers, n, BigInt::from(c));
            inverse[i] = &inverse[i] - &IntPolynomial::constant(Integers, n, BigInt::from(c));
        }
        Automorphism { map, inverse }
    }
}

fn random_univariate(rng: &mut impl Rng, n: usize, j: usize, max_degree: u32, bound: i64) -> IntPolynomial {
    let deg = rng.gen_range(1..=max_degree);
    let mut exps = vec![0; n];
    let terms = (0..=deg).filter_map(|e| {
        let c = rng.gen_range(-bound..=bound);
        exps[j] = e;
        (c != 0).then(|| (Monomial::new(exps.clone()), BigInt::from(c)))
    });
    let terms: Vec<_> = terms.collect();
    IntPolynomial::from_terms(Integers, n, terms)
}

/// A composite of 2 to 5 elementary steps whose components, and those of its
/// inverse, have degree at most `max_degree`. Coefficients lie in `[-p, p]`.
pub fn random_automorphism(rng: &mut impl Rng, n: usize, p: u64, max_degree: u32) -> Automorphism {
    let bound = p as i64;
    let steps = rng.gen_range(2..=5);
    let mut sigma = Automorphism::identity(n);
    let mut taken = 0;
    let mut attempts = 0;
    while taken < steps && attempts < 100 {
        attempts += 1;
        let step = match rng.gen_range(0..10) {
            0..=5 if n > 1 => {
                let i = rng.gen_range(0..n);
                let j = (i + rng.gen_range(1..n)) % n;
                Automorphism::triangular(n, i, &random_univariate(rng, n, j, max_degree, bound))
            }
            6 if n > 1 => {
                let i = rng.gen_range(0..n);
                Automorphism::swap(n, i, (i + rng.gen_range(1..n)) % n)
            }
            7 => Automorphism::negate(n, rng.gen_range(0..n)),
            _ => {
                let shift: Vec<i64> = (0..n).map(|_| rng.gen_range(-bound..=bound)).collect();
                Automorphism::translate(n, &shift)
            }
        };
        let next = sigma.then(&step).expect("matching arities");
        if next.max_degree() <= max_degree as u64 {
            sigma = next;
            taken += 1;
        }
    }
    sigma
}
