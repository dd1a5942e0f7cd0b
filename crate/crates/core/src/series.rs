//! Power series in an auxiliary variable `t`, truncated at a fixed order,
//! with polynomial coefficients over `F_p`.
//!
//! A series carries an `exact` flag meaning every coefficient beyond the
//! truncation order is known to vanish, i.e. the series is a polynomial in
//! `t`. The flag is only ever set by construction (a degree argument), never
//! by looking at a window of zero coefficients.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::poly::{CoeffRing, ModPolynomial, PrimeField};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    trunc: usize,
    coeffs: Vec<ModPolynomial>,
    exact: bool,
}

impl TruncatedSeries {
    /// The series `g + 0*t + ...`, exact.
    pub fn constant(g: ModPolynomial, trunc: usize) -> Self {
        let mut coeffs = vec![ModPolynomial::zero(g.field(), g.arity()); trunc + 1];
        coeffs[0] = g;
        TruncatedSeries { trunc, coeffs, exact: true }
    }

    pub fn zero(field: PrimeField, arity: usize, trunc: usize) -> Self {
        Self::constant(ModPolynomial::zero(field, arity), trunc)
    }

    /// Builds a series from the listed coefficients of `t^0, t^1, ...`.
    ///
    /// Shorter lists are padded with zeros. Longer lists are accepted only if
    /// the surplus coefficients are zero.
    pub fn new(mut coeffs: Vec<ModPolynomial>, trunc: usize, exact: bool) -> Result<Self> {
        let first = coeffs.first().ok_or(Error::Precondition("series needs a constant term".into()))?.clone();
        for c in &coeffs {
            if c.arity() != first.arity() {
                return Err(Error::ArityMismatch { left: first.arity(), right: c.arity() });
            }
            first.ring().check_compatible(c.ring())?;
        }
        if coeffs.len() > trunc + 1 {
            if coeffs[trunc + 1..].iter().any(|c| !c.is_zero()) {
                return Err(Error::TruncationMismatch { left: trunc, right: coeffs.len() - 1 });
            }
            coeffs.truncate(trunc + 1);
        }
        coeffs.resize(trunc + 1, ModPolynomial::zero(first.field(), first.arity()));
        Ok(TruncatedSeries { trunc, coeffs, exact })
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn field(&self) -> PrimeField {
        self.coeffs[0].field()
    }

    pub fn arity(&self) -> usize {
        self.coeffs[0].arity()
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn coeffs(&self) -> &[ModPolynomial] {
        &self.coeffs
    }

    pub fn coeff(&self, ell: usize) -> &ModPolynomial {
        &self.coeffs[ell]
    }

    pub fn constant_term(&self) -> &ModPolynomial {
        &self.coeffs[0]
    }

    /// Highest index with a nonzero coefficient inside the window.
    pub fn t_degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// True when no `t`-power above zero appears in the window.
    pub fn is_constant_in_window(&self) -> bool {
        self.coeffs[1..].iter().all(ModPolynomial::is_zero)
    }

    /// Same coefficients seen at a smaller truncation order.
    pub fn truncate(&self, trunc: usize) -> Self {
        if trunc >= self.trunc {
            return self.clone();
        }
        let exact = self.exact && self.t_degree().unwrap_or(0) <= trunc;
        TruncatedSeries { trunc, coeffs: self.coeffs[..=trunc].to_vec(), exact }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.trunc != other.trunc {
            return Err(Error::TruncationMismatch { left: self.trunc, right: other.trunc });
        }
        if self.arity() != other.arity() {
            return Err(Error::ArityMismatch { left: self.arity(), right: other.arity() });
        }
        self.field().check_compatible(&other.field())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(TruncatedSeries { trunc: self.trunc, coeffs, exact: self.exact && other.exact })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(TruncatedSeries { trunc: self.trunc, coeffs, exact: self.exact && other.exact })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let zero = ModPolynomial::zero(self.field(), self.arity());
        let mut coeffs = vec![zero; self.trunc + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=self.trunc - i].iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        let exact = self.exact
            && other.exact
            && self.t_degree().unwrap_or(0) + other.t_degree().unwrap_or(0) <= self.trunc;
        Ok(TruncatedSeries { trunc: self.trunc, coeffs, exact })
    }

    pub fn scale(&self, c: &ModPolynomial) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(|a| a.try_mul(c)).collect::<Result<_>>()?;
        Ok(TruncatedSeries { trunc: self.trunc, coeffs, exact: self.exact })
    }

    /// Applies a polynomial map to every coefficient. Exactness is kept.
    pub fn map_coeffs(&self, f: impl Fn(&ModPolynomial) -> Result<ModPolynomial>) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(f).collect::<Result<Vec<_>>>()?;
        Self::new(coeffs, self.trunc, self.exact)
    }

    /// Formal substitution `t -> u` where `u` has zero constant term.
    pub fn substitute_t(&self, u: &TruncatedSeries) -> Result<Self> {
        self.check_same(u)?;
        if !u.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        // Horner from the top coefficient down.
        let mut acc = TruncatedSeries::zero(self.field(), self.arity(), self.trunc);
        acc.exact = true;
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(u)?.add(&TruncatedSeries::constant(c.clone(), self.trunc))?;
        }
        let bound = self.t_degree().unwrap_or(0) * u.t_degree().unwrap_or(0);
        acc.exact = self.exact && u.exact && bound <= self.trunc;
        Ok(acc)
    }

    /// Full evaluation at a polynomial value of `t`. Only exact series have a
    /// well-defined value.
    pub fn evaluate_t(&self, u: &ModPolynomial) -> Result<ModPolynomial> {
        if !self.exact {
            return Err(Error::InexactEvaluation { trunc: self.trunc });
        }
        let mut acc = ModPolynomial::zero(self.field(), self.arity());
        for c in self.coeffs.iter().rev() {
            acc = acc.try_mul(u)?.try_add(c)?;
        }
        Ok(acc)
    }
}

/// Either a series with zero constant term or a polynomial value for `t`.
#[derive(Clone, Debug)]
pub enum TValue {
    Series(TruncatedSeries),
    Polynomial(ModPolynomial),
}

/// `S(t)` with `t` replaced by `u`. A polynomial `u` yields the exact
/// constant series holding the value.
pub fn series_substitute_t(s: &TruncatedSeries, u: &TValue) -> Result<TruncatedSeries> {
    match u {
        TValue::Series(u) => s.substitute_t(u),
        TValue::Polynomial(u) => Ok(TruncatedSeries::constant(s.evaluate_t(u)?, s.trunc)),
    }
}

/// Evaluates `g` at the given generator images, truncated at their common
/// order. The result is exact when every image it uses is exact and the
/// `t`-degree bound fits the window.
pub fn series_eval_polynomial(g: &ModPolynomial, images: &[TruncatedSeries]) -> Result<TruncatedSeries> {
    if images.len() != g.arity() {
        return Err(Error::ArityMismatch { left: g.arity(), right: images.len() });
    }
    let Some(first) = images.first() else {
        return Err(Error::Precondition("no generator images".into()));
    };
    for img in images {
        first.check_same(img)?;
        g.field().check_compatible(&img.field())?;
    }
    let trunc = first.trunc;
    let arity = first.arity();
    let mut powers: Vec<Vec<TruncatedSeries>> = images
        .iter()
        .map(|img| vec![TruncatedSeries::constant(ModPolynomial::one(g.field(), arity), trunc), img.clone()])
        .collect();
    let mut acc = TruncatedSeries::zero(g.field(), arity, trunc);
    for (m, c) in g.terms() {
        let mut term = TruncatedSeries::constant(ModPolynomial::constant(g.field(), arity, *c), trunc);
        for (i, &e) in m.exps().iter().enumerate() {
            if e == 0 {
                continue;
            }
            let cache = &mut powers[i];
            while cache.len() <= e as usize {
                let next = cache[cache.len() - 1].mul(&cache[1])?;
                cache.push(next);
            }
            term = term.mul(&cache[e as usize])?;
        }
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// `C(n, k) mod p` by Lucas' theorem.
pub fn binomial_mod(mut n: u64, mut k: u64, field: PrimeField) -> u64 {
    let p = field.modulus();
    let mut acc = 1 % p;
    while n > 0 || k > 0 {
        let (a, b) = (n % p, k % p);
        if b > a {
            return 0;
        }
        // C(a, b) for a, b < p: no factor of p appears.
        let mut num = 1;
        let mut den = 1;
        for i in 0..b {
            num = num * ((a - i) % p) % p;
            den = den * ((i + 1) % p) % p;
        }
        acc = acc * num % p * field.inv(den).expect("unit") % p;
        n /= p;
        k /= p;
    }
    acc
}

/// A series in two auxiliary variables `s, t`, kept up to total degree `trunc`.
/// Only nonzero coefficients are stored, keyed by `(i, j)` for `s^i t^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiTruncatedSeries {
    trunc: usize,
    coeffs: BTreeMap<(usize, usize), ModPolynomial>,
}

impl BiTruncatedSeries {
    pub fn new(trunc: usize) -> Self {
        BiTruncatedSeries { trunc, coeffs: BTreeMap::new() }
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn add_at(&mut self, i: usize, j: usize, c: &ModPolynomial) {
        if i + j > self.trunc || c.is_zero() {
            return;
        }
        let sum = match self.coeffs.get(&(i, j)) {
            Some(existing) => existing + c,
            None => c.clone(),
        };
        if sum.is_zero() {
            self.coeffs.remove(&(i, j));
        } else {
            self.coeffs.insert((i, j), sum);
        }
    }

    pub fn coeff(&self, i: usize, j: usize) -> Option<&ModPolynomial> {
        self.coeffs.get(&(i, j))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &ModPolynomial)> {
        self.coeffs.iter()
    }

    /// Swaps the roles of `s` and `t`.
    pub fn transpose(&self) -> Self {
        BiTruncatedSeries {
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(|(&(i, j), c)| ((j, i), c.clone())).collect(),
        }
    }

    /// First index `(i, j)` in graded order where the two series differ.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, usize)> {
        let mut keys: Vec<(usize, usize)> = self.coeffs.keys().chain(other.coeffs.keys()).copied().collect();
        keys.sort_by_key(|&(i, j)| (i + j, j));
        keys.dedup();
        keys.into_iter().find(|k| self.coeffs.get(k) != other.coeffs.get(k))
    }
}

/// For each generator, the double series `sum_{i,j} D^outer_i(D^inner_j(x_k)) s^i t^j`,
/// i.e. `Phi_s(Phi_t(x_k))` when outer and inner are the same family.
pub fn bi_compose(outer: &[TruncatedSeries], inner: &[TruncatedSeries]) -> Result<Vec<BiTruncatedSeries>> {
    let trunc = outer.first().map_or(0, TruncatedSeries::trunc);
    let mut out = Vec::with_capacity(inner.len());
    for img in inner {
        if img.trunc != trunc {
            return Err(Error::TruncationMismatch { left: trunc, right: img.trunc });
        }
        let mut bi = BiTruncatedSeries::new(trunc);
        for (j, c) in img.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let outer_image = series_eval_polynomial(c, outer)?;
            for i in 0..=trunc - j {
                bi.add_at(i, j, outer_image.coeff(i));
            }
        }
        out.push(bi);
    }
    Ok(out)
}

/// For each generator, `Phi_{s+t}(x_k) = sum_l D_l(x_k) (s+t)^l` expanded binomially.
pub fn binomial_shift(images: &[TruncatedSeries]) -> Vec<BiTruncatedSeries> {
    images
        .iter()
        .map(|img| {
            let field = img.field();
            let mut bi = BiTruncatedSeries::new(img.trunc);
            for (ell, c) in img.coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for i in 0..=ell {
                    let b = binomial_mod(ell as u64, i as u64, field);
                    if b != 0 {
                        bi.add_at(i, ell - i, &c.scale(&b));
                    }
                }
            }
            bi
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_mod, var_names};

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn series(texts: &[&str], p: u64, trunc: usize, exact: bool) -> TruncatedSeries {
        let v = var_names("x,y");
        let coeffs = texts.iter().map(|t| parse_mod(t, &v, f(p)).unwrap()).collect();
        TruncatedSeries::new(coeffs, trunc, exact).unwrap()
    }

    #[test]
    fn eval_fixes_x_minus_y_cubed() {
        let v = var_names("x,y");
        let g = parse_mod("x - y^3", &v, f(3)).unwrap();
        let imgs = vec![series(&["x", "0", "0", "1"], 3, 6, true), series(&["y", "1"], 3, 6, true)];
        let out = series_eval_polynomial(&g, &imgs).unwrap();
        assert_eq!(out, TruncatedSeries::constant(g, 6));
    }

    #[test]
    fn eval_fixes_xy_for_geometric_image() {
        let v = var_names("x,y");
        let g = parse_mod("x*y", &v, f(2)).unwrap();
        let imgs = vec![series(&["x"; 9], 2, 8, false), series(&["y", "y"], 2, 8, true)];
        let out = series_eval_polynomial(&g, &imgs).unwrap();
        assert!(out.is_constant_in_window());
        assert_eq!(out.constant_term(), &g);
        assert!(!out.is_exact());
    }

    #[test]
    fn eval_with_identity_images() {
        let v = var_names("x,y");
        let g = parse_mod("x", &v, f(5)).unwrap();
        let imgs = vec![series(&["x"], 5, 4, true), series(&["y"], 5, 4, true)];
        assert_eq!(series_eval_polynomial(&g, &imgs).unwrap(), TruncatedSeries::constant(g, 4));
    }

    #[test]
    fn mismatched_truncations_are_errors() {
        let v = var_names("x,y");
        let g = parse_mod("x", &v, f(3)).unwrap();
        let imgs = vec![series(&["x"], 3, 4, true), series(&["y"], 3, 5, true)];
        assert!(matches!(series_eval_polynomial(&g, &imgs), Err(Error::TruncationMismatch { .. })));
    }

    #[test]
    fn evaluate_t_examples() {
        let v = var_names("x,y");
        let s = series(&["x", "0", "0", "1"], 3, 6, true);
        let minus_y = parse_mod("-y", &v, f(3)).unwrap();
        assert_eq!(s.evaluate_t(&minus_y).unwrap(), parse_mod("x - y^3", &v, f(3)).unwrap());
        let s = series(&["y", "1"], 3, 6, true);
        assert!(s.evaluate_t(&minus_y).unwrap().is_zero());
        let s = series(&["x"; 7], 3, 6, false);
        assert!(matches!(s.evaluate_t(&minus_y), Err(Error::InexactEvaluation { trunc: 6 })));
        let via_enum = series_substitute_t(&series(&["y", "1"], 3, 6, true), &TValue::Polynomial(minus_y)).unwrap();
        assert!(via_enum.constant_term().is_zero());
    }

    #[test]
    fn substitute_t_by_series() {
        // (x + t) with t -> t + t^2 gives x + t + t^2.
        let s = series(&["x", "1"], 5, 4, true);
        let u = series(&["0", "1", "1"], 5, 4, true);
        assert_eq!(s.substitute_t(&u).unwrap(), series(&["x", "1", "1"], 5, 4, true));
        let bad = series(&["1", "1"], 5, 4, true);
        assert!(matches!(s.substitute_t(&bad), Err(Error::NonzeroConstantTerm)));
    }

    #[test]
    fn lucas_binomials() {
        assert_eq!(binomial_mod(3, 1, f(3)), 0);
        assert_eq!(binomial_mod(3, 2, f(3)), 0);
        assert_eq!(binomial_mod(3, 1, f(2)), 1);
        assert_eq!(binomial_mod(2, 1, f(2)), 0);
        assert_eq!(binomial_mod(10, 4, f(7)), 210 % 7);
    }

    #[test]
    fn composition_matches_shift_for_translations() {
        // phi(y) = y + t, phi(x) = x + t^3 over F_3.
        let imgs = vec![series(&["x", "0", "0", "1"], 3, 6, true), series(&["y", "1"], 3, 6, true)];
        let composed = bi_compose(&imgs, &imgs).unwrap();
        let shifted = binomial_shift(&imgs);
        assert_eq!(composed, shifted);
        for bi in &composed {
            assert_eq!(bi, &bi.transpose());
        }
        // x + s^3 + t^3 with no cross terms.
        assert_eq!(composed[0].entries().count(), 3);
    }
}
