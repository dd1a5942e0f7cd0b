//! Jacobian derivations and their characteristic-zero iterates.
//!
//! `delta_tilde(F)` sends `g` to the integer determinant of the Jacobian
//! matrix of `(f_1, ..., f_{n-1}, g)`, with the tuple in the first rows and
//! `g` in the last. The bracket `[d]^l` iterates `d` over `Z` on the lifted
//! objects; nothing is reduced mod `p` between steps, so the `p`-divisibility
//! of the results carries information.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::poly::{CoeffRing, IntPolynomial, Integers, ModPolynomial, Polynomial, PrimeField};

/// A derivation `sum_i a_i d/dx_i` with integer polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharZeroDerivation {
    coeffs: Vec<IntPolynomial>,
}

/// A derivation over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModDerivation {
    coeffs: Vec<ModPolynomial>,
}

fn check_coeff_arities<R: CoeffRing>(coeffs: &[Polynomial<R>]) -> Result<()> {
    for c in coeffs {
        if c.arity() != coeffs.len() {
            return Err(Error::ArityMismatch { left: coeffs.len(), right: c.arity() });
        }
    }
    Ok(())
}

fn apply_generic<R: CoeffRing>(coeffs: &[Polynomial<R>], g: &Polynomial<R>) -> Result<Polynomial<R>> {
    if g.arity() != coeffs.len() {
        return Err(Error::ArityMismatch { left: coeffs.len(), right: g.arity() });
    }
    let mut acc = Polynomial::zero(g.ring().clone(), g.arity());
    for (i, a) in coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let dg = g.partial_derivative(i)?;
        if dg.is_zero() {
            continue;
        }
        acc = acc.try_add(&a.try_mul(&dg)?)?;
    }
    Ok(acc)
}

impl CharZeroDerivation {
    pub fn new(coeffs: Vec<IntPolynomial>) -> Result<Self> {
        check_coeff_arities(&coeffs)?;
        Ok(CharZeroDerivation { coeffs })
    }

    /// `d/dx_index`.
    pub fn partial(arity: usize, index: usize) -> Self {
        let coeffs = (0..arity)
            .map(|i| if i == index { IntPolynomial::one(Integers, arity) } else { IntPolynomial::zero(Integers, arity) })
            .collect();
        CharZeroDerivation { coeffs }
    }

    pub fn arity(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[IntPolynomial] {
        &self.coeffs
    }

    /// `[d](g)`, computed exactly over the integers.
    pub fn apply(&self, g: &IntPolynomial) -> Result<IntPolynomial> {
        apply_generic(&self.coeffs, g)
    }

    /// `[d]^ell(g)`; `ell = 0` returns `g`.
    pub fn power(&self, g: &IntPolynomial, ell: usize) -> Result<IntPolynomial> {
        let mut cur = g.clone();
        for _ in 0..ell {
            if cur.is_zero() {
                break;
            }
            cur = self.apply(&cur)?;
        }
        Ok(cur)
    }

    pub fn reduce(&self, field: PrimeField) -> ModDerivation {
        ModDerivation { coeffs: self.coeffs.iter().map(|c| c.reduce(field)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Polynomial::is_zero)
    }
}

impl ModDerivation {
    pub fn new(coeffs: Vec<ModPolynomial>) -> Result<Self> {
        check_coeff_arities(&coeffs)?;
        Ok(ModDerivation { coeffs })
    }

    pub fn coeffs(&self) -> &[ModPolynomial] {
        &self.coeffs
    }

    pub fn apply(&self, g: &ModPolynomial) -> Result<ModPolynomial> {
        apply_generic(&self.coeffs, g)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Polynomial::is_zero)
    }

    pub fn lift_canonical(&self) -> CharZeroDerivation {
        CharZeroDerivation { coeffs: self.coeffs.iter().map(crate::poly::lift_canonical).collect() }
    }
}

/// `[d](g)`.
pub fn bracket_apply(d: &CharZeroDerivation, g: &IntPolynomial) -> Result<IntPolynomial> {
    d.apply(g)
}

/// `[d]^ell(g)`, iterating over the integers without intermediate reduction.
pub fn bracket_power(d: &CharZeroDerivation, g: &IntPolynomial, ell: usize) -> Result<IntPolynomial> {
    if ell == 0 {
        return Err(Error::Precondition("bracket power index must be at least 1".into()));
    }
    d.power(g, ell)
}

/// Determinant by cofactor expansion along the first row. Matrices here are
/// at most a handful of rows, so no elimination is needed.
pub fn determinant<R: CoeffRing>(rows: &[Vec<Polynomial<R>>], ring: &R, arity: usize) -> Polynomial<R> {
    let n = rows.len();
    if n == 0 {
        return Polynomial::one(ring.clone(), arity);
    }
    if n == 1 {
        return rows[0][0].clone();
    }
    let mut acc = Polynomial::zero(ring.clone(), arity);
    for (j, entry) in rows[0].iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        let minor: Vec<Vec<Polynomial<R>>> = rows[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, c)| c.clone()).collect())
            .collect();
        let term = entry * &determinant(&minor, ring, arity);
        acc = if j % 2 == 0 { acc + term } else { acc - term };
    }
    acc
}

fn jacobian_cofactors<R: CoeffRing>(tuple: &[Polynomial<R>]) -> Result<Vec<Polynomial<R>>> {
    let first = tuple.first().ok_or(Error::TupleLength { expected: 1, got: 0 })?;
    let n = first.arity();
    if tuple.len() + 1 != n {
        return Err(Error::TupleLength { expected: n.saturating_sub(1), got: tuple.len() });
    }
    let ring = first.ring().clone();
    let mut jac = Vec::with_capacity(n - 1);
    for f in tuple {
        if f.arity() != n {
            return Err(Error::ArityMismatch { left: n, right: f.arity() });
        }
        jac.push((0..n).map(|j| f.partial_derivative(j)).collect::<Result<Vec<_>>>()?);
    }
    // Expansion of det(J; g) along the last row: a_j = (-1)^{n+j} det(J without column j),
    // with 1-based j, which is (-1)^{n-1+j} for 0-based j.
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<Polynomial<R>>> = jac
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, c)| c.clone()).collect())
                .collect();
            let det = determinant(&minor, &ring, n);
            Ok(if (n - 1 + j) % 2 == 0 { det } else { -det })
        })
        .collect()
}

/// The Jacobian derivation of an `(n-1)`-tuple of integer representatives,
/// computed as if in characteristic zero.
pub fn delta_tilde(tuple: &[IntPolynomial]) -> Result<CharZeroDerivation> {
    CharZeroDerivation::new(jacobian_cofactors(tuple)?)
}

/// [`delta_tilde`] on the canonical lifts of a tuple over `F_p`.
pub fn delta_tilde_lifted(tuple: &[ModPolynomial]) -> Result<CharZeroDerivation> {
    let lifted: Vec<IntPolynomial> = tuple.iter().map(crate::poly::lift_canonical).collect();
    delta_tilde(&lifted)
}

/// The plain Jacobian derivation computed mod `p`.
pub fn delta_modp(tuple: &[ModPolynomial]) -> Result<ModDerivation> {
    ModDerivation::new(jacobian_cofactors(tuple)?)
}

/// `e(ell) = v_p(ell!)` by Legendre's formula.
pub fn legendre_e(ell: u64, p: u64) -> u64 {
    let mut e = 0;
    let mut q = ell;
    while q > 0 {
        q /= p;
        e += q;
    }
    e
}

/// `m_ell^{-1} mod p` where `ell! = p^{e(ell)} m_ell`, accumulated one factor
/// at a time with the `p`-parts stripped.
pub fn m_inverse_mod_p(ell: u64, field: PrimeField) -> u64 {
    let p = field.modulus();
    let mut m = 1 % p;
    for mut i in 1..=ell {
        while i % p == 0 {
            i /= p;
        }
        m = m * (i % p) % p;
    }
    field.inv(m).expect("m_ell is prime to p")
}

/// `ell! = p^e * m` with `m` prime to `p`, stored as `e` and `m^{-1} mod p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FactorialSplit {
    pub ell: u64,
    pub e: u64,
    pub m_inv: u64,
}

impl FactorialSplit {
    pub fn new(ell: u64, field: PrimeField) -> Self {
        FactorialSplit { ell, e: legendre_e(ell, field.modulus()), m_inv: m_inverse_mod_p(ell, field) }
    }
}

/// Successive splits for `ell = 1, 2, ...`, each in O(log ell) from the previous.
pub struct FactorialSplits {
    field: PrimeField,
    ell: u64,
    e: u64,
    m: u64,
}

impl FactorialSplits {
    pub fn new(field: PrimeField) -> Self {
        FactorialSplits { field, ell: 0, e: 0, m: 1 % field.modulus() }
    }
}

impl Iterator for FactorialSplits {
    type Item = FactorialSplit;

    fn next(&mut self) -> Option<FactorialSplit> {
        let p = self.field.modulus();
        self.ell += 1;
        let mut i = self.ell;
        while i % p == 0 {
            i /= p;
            self.e += 1;
        }
        self.m = self.m * (i % p) % p;
        Some(FactorialSplit { ell: self.ell, e: self.e, m_inv: self.field.inv(self.m).expect("unit") })
    }
}

/// `m_ell` itself, for display only.
pub fn m_value(ell: u64, p: u64) -> BigInt {
    let mut m = BigInt::from(1);
    for mut i in 1..=ell {
        while i % p == 0 {
            i /= p;
        }
        m *= i;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_int, parse_mod, var_names};

    fn xy() -> Vec<String> {
        var_names("x,y")
    }

    fn int(s: &str) -> IntPolynomial {
        parse_int(s, &xy()).unwrap()
    }

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn delta_tilde_examples() {
        let d = delta_tilde(&[int("x - y^3")]).unwrap();
        assert_eq!(d.coeffs(), &[int("3*y^2"), int("1")]);
        let d = delta_tilde(&[int("x")]).unwrap();
        assert_eq!(d.coeffs(), &[int("0"), int("1")]);
        let d = delta_tilde(&[int("x*y")]).unwrap();
        assert_eq!(d.coeffs(), &[int("-x"), int("y")]);
        assert!(matches!(delta_tilde(&[int("x"), int("y")]), Err(Error::TupleLength { expected: 1, got: 2 })));
    }

    #[test]
    fn delta_modp_examples() {
        let v = xy();
        let d = delta_modp(&[parse_mod("x - y^3", &v, f(3)).unwrap()]).unwrap();
        assert_eq!(d.coeffs(), &[parse_mod("0", &v, f(3)).unwrap(), parse_mod("1", &v, f(3)).unwrap()]);
        let d = delta_modp(&[parse_mod("x", &v, f(7)).unwrap()]).unwrap();
        assert_eq!(d.coeffs()[1], parse_mod("1", &v, f(7)).unwrap());
        assert!(delta_modp(&[parse_mod("x^5", &v, f(5)).unwrap()]).unwrap().is_zero());
    }

    #[test]
    fn three_variable_cofactors() {
        let v = var_names("x,y,z");
        let t = [parse_int("x", &v).unwrap(), parse_int("y", &v).unwrap()];
        let d = delta_tilde(&t).unwrap();
        // det [[1,0,0],[0,1,0],[g_x,g_y,g_z]] = g_z
        assert_eq!(d.coeffs()[2], parse_int("1", &v).unwrap());
        assert!(d.coeffs()[0].is_zero() && d.coeffs()[1].is_zero());
    }

    #[test]
    fn bracket_examples() {
        let d1 = delta_tilde(&[int("x - y^3")]).unwrap();
        assert_eq!(bracket_apply(&d1, &int("x")).unwrap(), int("3*y^2"));
        assert_eq!(bracket_apply(&d1, &int("3*y^2")).unwrap(), int("6*y"));
        assert!(bracket_apply(&d1, &int("1")).unwrap().is_zero());
        assert_eq!(bracket_power(&d1, &int("x"), 3).unwrap(), int("6"));
        assert!(bracket_power(&d1, &int("x"), 4).unwrap().is_zero());
        let d2 = delta_tilde(&[int("x*y")]).unwrap();
        assert_eq!(bracket_power(&d2, &int("x"), 2).unwrap(), int("x"));
        assert!(bracket_power(&d2, &int("x"), 0).is_err());
    }

    #[test]
    fn factorial_examples() {
        assert_eq!(legendre_e(3, 3), 1);
        assert_eq!(legendre_e(2, 3), 0);
        assert_eq!(legendre_e(9, 3), 4);
        assert_eq!(m_inverse_mod_p(3, f(3)), 2);
        assert_eq!(m_inverse_mod_p(1, f(7)), 1);
        assert_eq!(m_inverse_mod_p(4, f(3)), 2);
        let splits: Vec<_> = FactorialSplits::new(f(3)).take(30).collect();
        for s in splits {
            assert_eq!(s, FactorialSplit::new(s.ell, f(3)));
        }
        assert_eq!(m_value(3, 3), BigInt::from(2));
    }
}
