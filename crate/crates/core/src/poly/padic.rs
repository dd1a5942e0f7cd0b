use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Pow, Zero};

use super::{IntPolynomial, Integers, ModPolynomial, PrimeField};
use crate::error::{Error, Result};

/// A `p`-adic valuation; the zero polynomial has valuation `Infinity`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u64),
    Infinity,
}

impl Valuation {
    pub fn at_least(self, e: u64) -> bool {
        match self {
            Valuation::Finite(v) => v >= e,
            Valuation::Infinity => true,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "inf"),
        }
    }
}

/// Valuation of a nonzero integer.
pub(crate) fn int_valuation(n: &BigInt, p: u64) -> u64 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut v = 0;
    let mut n = n.clone();
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// Lifts each residue `r` to the integer `r` in `{0, ..., p-1}`.
pub fn lift_canonical(g: &ModPolynomial) -> IntPolynomial {
    g.map_coeffs(Integers, |&c| BigInt::from(c))
}

/// Lifts each residue to the integer of least absolute value, ties going
/// to the positive side.
pub fn lift_symmetric(g: &ModPolynomial) -> IntPolynomial {
    let p = g.modulus();
    g.map_coeffs(Integers, |&c| if 2 * c > p { BigInt::from(c) - BigInt::from(p) } else { BigInt::from(c) })
}

impl IntPolynomial {
    /// Least nonnegative residues mod `p`; terms vanishing mod `p` disappear.
    pub fn reduce_mod_p(&self, p: u64) -> Result<ModPolynomial> {
        let field = PrimeField::new(p)?;
        Ok(self.reduce(field))
    }

    pub fn reduce(&self, field: PrimeField) -> ModPolynomial {
        self.map_coeffs(field, |c| {
            use super::CoeffRing;
            field.from_bigint(c)
        })
    }

    /// Minimum `p`-adic valuation over the stored coefficients.
    pub fn min_p_valuation(&self, p: u64) -> Valuation {
        self.terms()
            .map(|(_, c)| int_valuation(c, p))
            .min()
            .map_or(Valuation::Infinity, Valuation::Finite)
    }

    /// Exact division by `p^e`. Fails on the first term whose coefficient is
    /// not divisible, naming that term.
    pub fn divide_exact_by_p_power(&self, p: u64, e: u64) -> Result<IntPolynomial> {
        if e == 0 {
            return Ok(self.clone());
        }
        let divisor: BigInt = Pow::pow(BigInt::from(p), e);
        let mut terms = Vec::with_capacity(self.num_terms());
        for (m, c) in self.terms() {
            let (q, r) = c.div_rem(&divisor);
            if !r.is_zero() {
                return Err(Error::InsufficientValuation {
                    monomial: m.clone(),
                    coefficient: c.clone(),
                    p,
                    valuation: int_valuation(c, p),
                    required: e,
                });
            }
            terms.push((m.clone(), q));
        }
        Ok(IntPolynomial::from_terms(Integers, self.arity(), terms))
    }
}
