//! Sparse multivariate polynomials over `Z` and over `F_p`.
//!
//! Terms live in a `BTreeMap` keyed by [`Monomial`], so iteration follows the
//! graded-lex order and printing is deterministic. Stored coefficients are
//! never zero; the zero polynomial has no terms.

mod monomial;
mod padic;
mod ring;

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;

pub use monomial::Monomial;
pub use padic::{lift_canonical, lift_symmetric, Valuation};
pub use ring::{is_prime, CoeffRing, Integers, PrimeField, MAX_MODULUS};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial<R: CoeffRing> {
    ring: R,
    arity: usize,
    terms: BTreeMap<Monomial, R::Elem>,
}

pub type IntPolynomial = Polynomial<Integers>;
pub type ModPolynomial = Polynomial<PrimeField>;

impl<R: CoeffRing> Polynomial<R> {
    pub fn zero(ring: R, arity: usize) -> Self {
        Polynomial { ring, arity, terms: BTreeMap::new() }
    }

    pub fn one(ring: R, arity: usize) -> Self {
        let c = ring.one();
        Self::monomial(ring, Monomial::one(arity), c)
    }

    pub fn constant(ring: R, arity: usize, c: R::Elem) -> Self {
        Self::monomial(ring, Monomial::one(arity), c)
    }

    pub fn var(ring: R, arity: usize, index: usize) -> Self {
        let c = ring.one();
        Self::monomial(ring, Monomial::var(arity, index), c)
    }

    pub fn monomial(ring: R, m: Monomial, c: R::Elem) -> Self {
        let arity = m.arity();
        let mut terms = BTreeMap::new();
        if !ring.is_zero(&c) {
            terms.insert(m, c);
        }
        Polynomial { ring, arity, terms }
    }

    /// Builds a polynomial from possibly repeated terms, combining like terms.
    pub fn from_terms(ring: R, arity: usize, terms: impl IntoIterator<Item = (Monomial, R::Elem)>) -> Self {
        let mut p = Self::zero(ring, arity);
        for (m, c) in terms {
            assert_eq!(m.arity(), arity, "monomial arity");
            p.add_term(m, &c);
        }
        p
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending graded-lex order (leading term first).
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &R::Elem)> {
        self.terms.iter().rev()
    }

    /// Terms in ascending graded-lex order, the printing order.
    pub fn terms_ascending(&self) -> impl Iterator<Item = (&Monomial, &R::Elem)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> R::Elem {
        self.terms.get(m).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn constant_term(&self) -> R::Elem {
        self.coefficient(&Monomial::one(self.arity))
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &R::Elem)> {
        self.terms.iter().next_back()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().next_back().map(Monomial::total_degree)
    }

    pub fn degree_in(&self, index: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(index)).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: &R::Elem) {
        if self.ring.is_zero(c) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = self.ring.add(existing, c);
                if self.ring.is_zero(&sum) {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch { left: self.arity, right: other.arity });
        }
        self.ring.check_compatible(&other.ring)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = Self::zero(self.ring.clone(), self.arity);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), &self.ring.mul(ca, cb));
            }
        }
        Ok(out)
    }

    fn neg_ref(&self) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), self.ring.neg(c))).collect();
        Polynomial { ring: self.ring.clone(), arity: self.arity, terms }
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        Self::from_terms(
            self.ring.clone(),
            self.arity,
            self.terms.iter().map(|(m, a)| (m.clone(), self.ring.mul(a, c))),
        )
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        let terms = self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect();
        Polynomial { ring: self.ring.clone(), arity: self.arity, terms }
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut acc = Self::one(self.ring.clone(), self.arity);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative with respect to `x_index` (zero-based).
    ///
    /// Over the integers an exponent `e` multiplies the coefficient by `e`
    /// exactly, so `d/dx x^p = p x^(p-1)` stays nonzero.
    pub fn partial_derivative(&self, index: usize) -> Result<Self> {
        if index >= self.arity {
            return Err(Error::IndexOutOfRange { index, arity: self.arity });
        }
        Ok(Self::from_terms(
            self.ring.clone(),
            self.arity,
            self.terms.iter().filter_map(|(m, c)| {
                let e = m.exp(index);
                let lowered = m.lower(index)?;
                Some((lowered, self.ring.mul(c, &self.ring.from_u64(u64::from(e)))))
            }),
        ))
    }

    /// Ring-homomorphic evaluation `x_i -> images[i]`.
    pub fn substitute(&self, images: &[Self]) -> Result<Self> {
        if images.len() != self.arity {
            return Err(Error::ArityMismatch { left: self.arity, right: images.len() });
        }
        let target_arity = match images.first() {
            Some(img) => img.arity,
            None => return Ok(self.clone()),
        };
        for img in images {
            if img.arity != target_arity {
                return Err(Error::ArityMismatch { left: target_arity, right: img.arity });
            }
            self.ring.check_compatible(&img.ring)?;
        }
        let mut powers: Vec<Vec<Self>> = images
            .iter()
            .map(|img| vec![Self::one(self.ring.clone(), target_arity), img.clone()])
            .collect();
        let mut out = Self::zero(self.ring.clone(), target_arity);
        for (m, c) in &self.terms {
            let mut term = Self::constant(self.ring.clone(), target_arity, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[i];
                while cache.len() <= e as usize {
                    let next = &cache[cache.len() - 1] * &cache[1];
                    cache.push(next);
                }
                term = &term * &cache[e as usize];
            }
            for (tm, tc) in term.terms {
                out.add_term(tm, &tc);
            }
        }
        Ok(out)
    }

    /// Renames variables: `x_i` becomes `x_{perm[i]}`.
    pub fn permute_vars(&self, perm: &[usize]) -> Self {
        Self::from_terms(
            self.ring.clone(),
            self.arity,
            self.terms.iter().map(|(m, c)| (m.permute(perm), c.clone())),
        )
    }

    pub fn map_coeffs<S: CoeffRing>(&self, ring: S, f: impl Fn(&R::Elem) -> S::Elem) -> Polynomial<S> {
        Polynomial::from_terms(ring, self.arity, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }
}

impl IntPolynomial {
    pub fn from_i64_terms(arity: usize, terms: &[(i64, &[u32])]) -> Self {
        Self::from_terms(
            Integers,
            arity,
            terms.iter().map(|(c, e)| (Monomial::new(e.to_vec()), BigInt::from(*c))),
        )
    }
}

impl ModPolynomial {
    pub fn field(&self) -> PrimeField {
        self.ring
    }

    pub fn modulus(&self) -> u64 {
        self.ring.modulus()
    }

    /// Scales so the leading coefficient is 1. Zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading_term() {
            Some((_, c)) => {
                let inv = self.ring.inv(*c).expect("nonzero residue");
                self.scale(&inv)
            }
            None => self.clone(),
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<R: CoeffRing> $trait<&Polynomial<R>> for &Polynomial<R> {
            type Output = Polynomial<R>;
            fn $method(self, rhs: &Polynomial<R>) -> Polynomial<R> {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{}: {e}", stringify!($method)))
            }
        }
        impl<R: CoeffRing> $trait<Polynomial<R>> for Polynomial<R> {
            type Output = Polynomial<R>;
            fn $method(self, rhs: Polynomial<R>) -> Polynomial<R> {
                (&self).$method(&rhs)
            }
        }
        impl<R: CoeffRing> $trait<&Polynomial<R>> for Polynomial<R> {
            type Output = Polynomial<R>;
            fn $method(self, rhs: &Polynomial<R>) -> Polynomial<R> {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl<R: CoeffRing> Neg for &Polynomial<R> {
    type Output = Polynomial<R>;
    fn neg(self) -> Polynomial<R> {
        self.neg_ref()
    }
}

impl<R: CoeffRing> Neg for Polynomial<R> {
    type Output = Polynomial<R>;
    fn neg(self) -> Polynomial<R> {
        self.neg_ref()
    }
}
