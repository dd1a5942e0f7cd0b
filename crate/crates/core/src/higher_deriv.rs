//! Higher derivations given by their generator images `phi(x_k) in B[[t]]`.
//!
//! A family `D = {D_l}` is stored through the homomorphism
//! `phi(g) = sum_l D_l(g) t^l`, truncated at order `T`. Three sources exist:
//! the canonical family `l!^{-1} [delta_tilde(F)]^l` of a tuple `F`, the same
//! construction for an arbitrary integer derivation, and explicit images read
//! from a document. Explicit families may also pin the images of individual
//! monomials, in which case `D_l` is the linear extension of that table and
//! need not be multiplicative.
//!
//! Every check here is bounded by `T` (and by a degree bound for kernels).
//! Failures at a finite order are definite; passes are "up to `T`".

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use serde::Deserialize;

use crate::decide::{algebraic_independence, fresh_symbols, Independence, DEFAULT_RELATION_DEGREE};
use crate::error::{Error, Result};
use crate::expr::{format_polynomial, parse_mod};
use crate::jacobian::{delta_tilde, CharZeroDerivation, FactorialSplits};
use crate::linalg::FpMatrix;
use crate::poly::{IntPolynomial, Integers, ModPolynomial, Monomial, PrimeField, Valuation};
use crate::series::{bi_compose, binomial_shift, series_eval_polynomial, TruncatedSeries};

pub const DEFAULT_TRUNC: usize = 64;
pub const DEFAULT_MONOMIAL_CAP: usize = 5000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpecKind {
    /// `D_l = l!^{-1} [delta_tilde(F)]^l` for the integer representatives `tuple`.
    Canonical { tuple: Vec<IntPolynomial>, derivation: CharZeroDerivation },
    /// `D_l = l!^{-1} [d]^l` for an arbitrary integer derivation.
    Exp { derivation: CharZeroDerivation },
    /// Supplied images, plus optional per-monomial overrides.
    Explicit { overrides: BTreeMap<Monomial, TruncatedSeries> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HigherDerivationSpec {
    field: PrimeField,
    trunc: usize,
    images: Vec<TruncatedSeries>,
    kind: SpecKind,
}

/// The first index at which `l!^{-1}[d]^l` is not defined at a generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefinednessFailure {
    pub ell: usize,
    pub generator: usize,
    pub monomial: Monomial,
    pub coefficient: BigInt,
    pub p: u64,
    /// `e(l)`: the coefficient should have been divisible by `p^required`.
    pub required: u64,
}

impl DefinednessFailure {
    /// Recomputes `[d]^l(x_generator)` and confirms the recorded coefficient
    /// really has valuation below `e(l)`.
    pub fn recheck(&self, d: &CharZeroDerivation) -> bool {
        let n = d.arity();
        if self.generator >= n {
            return false;
        }
        let x = IntPolynomial::var(Integers, n, self.generator);
        let Ok(value) = d.power(&x, self.ell) else {
            return false;
        };
        let stored = value.coefficient(&self.monomial);
        stored == self.coefficient
            && !IntPolynomial::monomial(Integers, self.monomial.clone(), stored).min_p_valuation(self.p).at_least(self.required)
            && crate::jacobian::legendre_e(self.ell as u64, self.p) == self.required
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExpOutcome {
    Defined(Vec<TruncatedSeries>),
    Undefined(DefinednessFailure),
}

/// `Exp(td)` on the generators, through order `trunc`.
///
/// For each generator the integer iterates `[d]^l(x_k)` are computed one at a
/// time; each must be divisible by `p^{e(l)}`, and the `t^l` coefficient is
/// `m_l^{-1} ([d]^l(x_k) / p^{e(l)}) mod p`. An image is exact when the
/// integer iteration reaches zero inside the window.
pub fn exp_map(d: &CharZeroDerivation, field: PrimeField, trunc: usize) -> Result<ExpOutcome> {
    let n = d.arity();
    let p = field.modulus();
    let mut images = Vec::with_capacity(n);
    for k in 0..n {
        let mut cur = IntPolynomial::var(Integers, n, k);
        let mut coeffs = vec![cur.reduce(field)];
        let mut exact = false;
        for split in FactorialSplits::new(field).take(trunc) {
            cur = d.apply(&cur)?;
            if cur.is_zero() {
                exact = true;
                break;
            }
            if !cur.min_p_valuation(p).at_least(split.e) {
                let (monomial, coefficient) = cur
                    .terms()
                    .find(|(m, c)| {
                        !IntPolynomial::monomial(Integers, (*m).clone(), (*c).clone())
                            .min_p_valuation(p)
                            .at_least(split.e)
                    })
                    .map(|(m, c)| (m.clone(), c.clone()))
                    .expect("some coefficient has low valuation");
                return Ok(ExpOutcome::Undefined(DefinednessFailure {
                    ell: split.ell as usize,
                    generator: k,
                    monomial,
                    coefficient,
                    p,
                    required: split.e,
                }));
            }
            let quotient = cur.divide_exact_by_p_power(p, split.e)?;
            coeffs.push(quotient.reduce(field).scale(&split.m_inv));
        }
        if !exact {
            exact = d.apply(&cur)?.is_zero();
        }
        images.push(TruncatedSeries::new(coeffs, trunc, exact)?);
    }
    Ok(ExpOutcome::Defined(images))
}

/// `Exp(t delta_tilde(F))` on the generators.
pub fn canonical_exp_map(tuple: &[IntPolynomial], field: PrimeField, trunc: usize) -> Result<ExpOutcome> {
    exp_map(&delta_tilde(tuple)?, field, trunc)
}

impl HigherDerivationSpec {
    /// The canonical family of `tuple`; `Error::Undefined` when some
    /// `l!^{-1}[delta_tilde(F)]^l` with `l <= trunc` is not defined.
    pub fn canonical(tuple: &[IntPolynomial], field: PrimeField, trunc: usize) -> Result<Self> {
        let derivation = delta_tilde(tuple)?;
        match exp_map(&derivation, field, trunc)? {
            ExpOutcome::Defined(images) => Ok(HigherDerivationSpec {
                field,
                trunc,
                images,
                kind: SpecKind::Canonical { tuple: tuple.to_vec(), derivation },
            }),
            ExpOutcome::Undefined(f) => Err(Error::Undefined(Box::new(f))),
        }
    }

    pub fn exp_of(derivation: CharZeroDerivation, field: PrimeField, trunc: usize) -> Result<Self> {
        match exp_map(&derivation, field, trunc)? {
            ExpOutcome::Defined(images) => {
                Ok(HigherDerivationSpec { field, trunc, images, kind: SpecKind::Exp { derivation } })
            }
            ExpOutcome::Undefined(f) => Err(Error::Undefined(Box::new(f))),
        }
    }

    pub fn explicit(images: Vec<TruncatedSeries>) -> Result<Self> {
        Self::explicit_with_overrides(images, BTreeMap::new())
    }

    pub fn explicit_with_overrides(
        images: Vec<TruncatedSeries>,
        overrides: BTreeMap<Monomial, TruncatedSeries>,
    ) -> Result<Self> {
        let first = images.first().ok_or(Error::Precondition("no generator images".into()))?;
        let (field, trunc, arity) = (first.field(), first.trunc(), first.arity());
        if images.len() != arity {
            return Err(Error::ArityMismatch { left: arity, right: images.len() });
        }
        for s in images.iter().chain(overrides.values()) {
            if s.trunc() != trunc {
                return Err(Error::TruncationMismatch { left: trunc, right: s.trunc() });
            }
            if s.arity() != arity {
                return Err(Error::ArityMismatch { left: arity, right: s.arity() });
            }
            if s.field() != field {
                return Err(Error::ModulusMismatch { left: field.modulus(), right: s.field().modulus() });
            }
        }
        if let Some(m) = overrides.keys().find(|m| m.arity() != arity) {
            return Err(Error::ArityMismatch { left: arity, right: m.arity() });
        }
        Ok(HigherDerivationSpec { field, trunc, images, kind: SpecKind::Explicit { overrides } })
    }

    /// The trivial family `phi(x_k) = x_k`.
    pub fn identity(field: PrimeField, arity: usize, trunc: usize) -> Self {
        let images =
            (0..arity).map(|k| TruncatedSeries::constant(ModPolynomial::var(field, arity, k), trunc)).collect();
        HigherDerivationSpec { field, trunc, images, kind: SpecKind::Explicit { overrides: BTreeMap::new() } }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn arity(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[TruncatedSeries] {
        &self.images
    }

    pub fn kind(&self) -> &SpecKind {
        &self.kind
    }

    fn overrides(&self) -> Option<&BTreeMap<Monomial, TruncatedSeries>> {
        match &self.kind {
            SpecKind::Explicit { overrides } if !overrides.is_empty() => Some(overrides),
            _ => None,
        }
    }

    /// `phi_D(g)` through order `T`.
    pub fn apply(&self, g: &ModPolynomial) -> Result<TruncatedSeries> {
        let Some(overrides) = self.overrides() else {
            return series_eval_polynomial(g, &self.images);
        };
        let mut acc = TruncatedSeries::zero(self.field, self.arity(), self.trunc);
        for (m, c) in g.terms() {
            let image = match overrides.get(m) {
                Some(s) => s.clone(),
                None => {
                    let mono = ModPolynomial::monomial(self.field, m.clone(), 1);
                    series_eval_polynomial(&mono, &self.images)?
                }
            };
            acc = acc.add(&image.scale(&ModPolynomial::constant(self.field, self.arity(), *c))?)?;
        }
        Ok(acc)
    }

    /// Images of every monomial of degree at most `dmax`, ascending.
    fn monomial_images(&self, dmax: u32, cap: usize) -> Result<Vec<(Monomial, TruncatedSeries)>> {
        let monomials = Monomial::all_up_to_degree(self.arity(), dmax);
        if monomials.len() > cap {
            return Err(Error::DimensionCap { needed: monomials.len(), cap });
        }
        if self.overrides().is_some() {
            return monomials
                .into_iter()
                .map(|m| {
                    let s = self.apply(&ModPolynomial::monomial(self.field, m.clone(), 1))?;
                    Ok((m, s))
                })
                .collect();
        }
        let mut cache: HashMap<Monomial, TruncatedSeries> = HashMap::new();
        let mut out = Vec::with_capacity(monomials.len());
        for m in monomials {
            let s = match (0..m.arity()).find(|&i| m.exp(i) > 0) {
                None => TruncatedSeries::constant(ModPolynomial::one(self.field, self.arity()), self.trunc),
                Some(i) => {
                    let lower = m.lower(i).expect("positive exponent");
                    cache[&lower].mul(&self.images[i])?
                }
            };
            cache.insert(m.clone(), s.clone());
            out.push((m, s));
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// Axiom checks

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeibnizFailure {
    pub pair: usize,
    pub order: usize,
    pub monomial: Monomial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    /// Polynomials whose `t^0` coefficient is not themselves (`D_0 != id`).
    pub identity_failures: Vec<ModPolynomial>,
    pub leibniz: Option<LeibnizFailure>,
    pub trunc: usize,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.identity_failures.is_empty() && self.leibniz.is_none()
    }
}

/// Checks `D_0 = id` on generators and pinned monomials, and
/// `D_l(fg) = sum_{i+j=l} D_i(f) D_j(g)` on each sample pair through order `T`.
pub fn verify_axioms(spec: &HigherDerivationSpec, samples: &[(ModPolynomial, ModPolynomial)]) -> Result<AxiomReport> {
    let n = spec.arity();
    let mut identity_failures = Vec::new();
    for (k, img) in spec.images.iter().enumerate() {
        let x = ModPolynomial::var(spec.field, n, k);
        if img.constant_term() != &x {
            identity_failures.push(x);
        }
    }
    if let Some(overrides) = spec.overrides() {
        for (m, s) in overrides {
            let mono = ModPolynomial::monomial(spec.field, m.clone(), 1);
            if s.constant_term() != &mono {
                identity_failures.push(mono);
            }
        }
    }
    let mut leibniz = None;
    for (idx, (f, g)) in samples.iter().enumerate() {
        let lhs = spec.apply(&f.try_mul(g)?)?;
        let rhs = spec.apply(f)?.mul(&spec.apply(g)?)?;
        if let Some(order) = (0..=spec.trunc).find(|&l| lhs.coeff(l) != rhs.coeff(l)) {
            let diff = lhs.coeff(order) - rhs.coeff(order);
            let monomial = diff.leading_term().map(|(m, _)| m.clone()).expect("nonzero difference");
            leibniz = Some(LeibnizFailure { pair: idx, order, monomial });
            break;
        }
    }
    Ok(AxiomReport { identity_failures, leibniz, trunc: spec.trunc })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalFiniteness {
    /// Every generator image is a polynomial in `t` of degree at most `degree`.
    ExactPolynomial { degree: usize },
    /// Observed `t`-degree `degree`, zero coefficients in `(degree, trunc]`.
    ZeroTailWindow { degree: usize, trunc: usize },
    /// Some image has a nonzero `t^trunc` coefficient.
    NotWithinWindow { trunc: usize },
}

pub fn is_locally_finite_up_to(spec: &HigherDerivationSpec) -> LocalFiniteness {
    let degree = spec.images.iter().filter_map(TruncatedSeries::t_degree).max().unwrap_or(0);
    if spec.images.iter().all(TruncatedSeries::is_exact) {
        LocalFiniteness::ExactPolynomial { degree }
    } else if spec.images.iter().any(|s| !s.coeff(spec.trunc).is_zero()) {
        LocalFiniteness::NotWithinWindow { trunc: spec.trunc }
    } else {
        LocalFiniteness::ZeroTailWindow { degree, trunc: spec.trunc }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Iterativity {
    Pass { trunc: usize },
    /// `D_i(D_j(x_generator)) != C(i+j, j) D_{i+j}(x_generator)`.
    CounterexampleAt { i: usize, j: usize, generator: usize },
}

/// Compares `Phi_s(Phi_t(x_k))` with `Phi_{s+t}(x_k)` for every generator up to
/// total degree `T`. Both sides are ring maps, so agreement on generators is
/// agreement everywhere up to that order.
pub fn is_iterative_up_to(spec: &HigherDerivationSpec) -> Result<Iterativity> {
    let composed = bi_compose(&spec.images, &spec.images)?;
    let shifted = binomial_shift(&spec.images);
    for (k, (a, b)) in composed.iter().zip(&shifted).enumerate() {
        if let Some((i, j)) = a.first_difference(b) {
            return Ok(Iterativity::CounterexampleAt { i, j, generator: k });
        }
    }
    Ok(Iterativity::Pass { trunc: spec.trunc })
}

impl Iterativity {
    /// Re-expands both sides at the reported coefficient.
    pub fn recheck(&self, spec: &HigherDerivationSpec) -> Result<bool> {
        match *self {
            Iterativity::Pass { .. } => Ok(true),
            Iterativity::CounterexampleAt { i, j, generator } => {
                let inner = spec.images[generator].coeff(j);
                let lhs = spec.apply(inner)?.coeff(i).clone();
                let b = crate::series::binomial_mod((i + j) as u64, j as u64, spec.field);
                let rhs = spec.images[generator].coeff(i + j).scale(&b);
                Ok(lhs != rhs)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Fixes {
    PassUpTo(usize),
    /// `phi(f) - f` is nonzero first at `t^order`; `residual` is the whole difference.
    FailsAtOrder { order: usize, residual: TruncatedSeries },
}

impl Fixes {
    pub fn passed(&self) -> bool {
        matches!(self, Fixes::PassUpTo(_))
    }
}

pub fn fixes_polynomial(spec: &HigherDerivationSpec, f: &ModPolynomial) -> Result<Fixes> {
    let image = spec.apply(f)?;
    let residual = image.sub(&TruncatedSeries::constant(f.clone(), spec.trunc))?;
    match residual.coeffs().iter().position(|c| !c.is_zero()) {
        None => Ok(Fixes::PassUpTo(spec.trunc)),
        Some(order) => Ok(Fixes::FailsAtOrder { order, residual }),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Check {
    Pass,
    Fail(String),
    Inconclusive(String),
}

impl Check {
    pub fn is_pass(&self) -> bool {
        matches!(self, Check::Pass)
    }
    pub fn is_fail(&self) -> bool {
        matches!(self, Check::Fail(_))
    }
}

/// The four conditions for being of Jacobian type determined by a tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobianTypeReport {
    /// `R[F]` is a polynomial ring in `n-1` variables.
    pub independent: Check,
    /// Each `f_i` is fixed by `phi`.
    pub fixes_tuple: Check,
    /// `D_1 = delta_tilde(F)` reduced mod `p`.
    pub first_term: Check,
    /// `D_l = l!^{-1} [D_1]^l` for `2 <= l <= p-1`.
    pub low_terms: Check,
    pub trunc: usize,
}

impl JacobianTypeReport {
    pub fn passed(&self) -> bool {
        self.independent.is_pass() && self.fixes_tuple.is_pass() && self.first_term.is_pass() && self.low_terms.is_pass()
    }

    pub fn checks(&self) -> [(&'static str, &Check); 4] {
        [
            ("independent", &self.independent),
            ("fixes_tuple", &self.fixes_tuple),
            ("first_term", &self.first_term),
            ("low_terms", &self.low_terms),
        ]
    }
}

pub fn is_jacobian_type(spec: &HigherDerivationSpec, tuple: &[IntPolynomial]) -> Result<JacobianTypeReport> {
    let field = spec.field;
    let n = spec.arity();
    let reduced: Vec<ModPolynomial> = tuple.iter().map(|f| f.reduce(field)).collect();
    let d = delta_tilde(tuple)?;
    if d.arity() != n {
        return Err(Error::ArityMismatch { left: n, right: d.arity() });
    }

    let independent = match algebraic_independence(&reduced, DEFAULT_RELATION_DEGREE)? {
        Independence::Independent { .. } => Check::Pass,
        Independence::Dependent { relation } => {
            Check::Fail(format!("relation {}", format_polynomial(&relation, &fresh_symbols(reduced.len(), false))))
        }
        Independence::Inconclusive { max_degree } => {
            Check::Inconclusive(format!("no relation of degree <= {max_degree}, Jacobian rank deficient"))
        }
    };

    let mut fixes_tuple = Check::Pass;
    for (i, f) in reduced.iter().enumerate() {
        if let Fixes::FailsAtOrder { order, .. } = fixes_polynomial(spec, f)? {
            fixes_tuple = Check::Fail(format!("component {} moves at order {order}", i + 1));
            break;
        }
    }

    let mut first_term = Check::Pass;
    if spec.trunc >= 1 {
        for k in 0..n {
            let expected = d.coeffs()[k].reduce(field);
            if spec.images[k].coeff(1) != &expected {
                first_term = Check::Fail(format!("D_1(x{}) differs", k + 1));
                break;
            }
        }
    } else {
        first_term = Check::Inconclusive("truncation 0".into());
    }

    let mut low_terms = Check::Pass;
    let top = (field.modulus() as usize - 1).min(spec.trunc);
    'outer: for k in 0..n {
        let x = IntPolynomial::var(Integers, n, k);
        let mut cur = x;
        let mut fact = 1u64;
        for ell in 1..=top {
            cur = d.apply(&cur)?;
            fact = fact * ell as u64 % field.modulus();
            if ell < 2 {
                continue;
            }
            let inv = field.inv(fact).expect("l < p");
            let expected = cur.reduce(field).scale(&inv);
            if spec.images[k].coeff(ell) != &expected {
                low_terms = Check::Fail(format!("D_{ell}(x{}) differs", k + 1));
                break 'outer;
            }
        }
    }

    Ok(JacobianTypeReport { independent, fixes_tuple, first_term, low_terms, trunc: spec.trunc })
}

// ---------------------------------------------------------------------------
// Kernel

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelBasis {
    pub dmax: u32,
    pub trunc: usize,
    /// Reduced echelon basis, monic, sorted by ascending leading monomial.
    pub basis: Vec<ModPolynomial>,
}

/// The linear system `g -> (coefficients of phi(g) - g)` on the monomials of
/// degree at most `dmax`. Columns follow `monomials`; row `r` holds the
/// coefficient of `rows[r].1 * t^{rows[r].0}`.
pub(crate) struct KernelSystem {
    pub monomials: Vec<Monomial>,
    pub rows: Vec<(usize, Monomial)>,
    pub matrix: FpMatrix,
}

pub(crate) fn kernel_system(spec: &HigherDerivationSpec, dmax: u32, trunc: usize, cap: usize) -> Result<KernelSystem> {
    if trunc > spec.trunc {
        return Err(Error::Precondition(format!(
            "verification order {trunc} exceeds the family's truncation {}",
            spec.trunc
        )));
    }
    let images = spec.monomial_images(dmax, cap)?;
    let mut row_index: BTreeMap<(usize, Monomial), usize> = BTreeMap::new();
    let mut entries: Vec<(usize, usize, u64)> = Vec::new();
    for (col, (m, s)) in images.iter().enumerate() {
        let mono = ModPolynomial::monomial(spec.field, m.clone(), 1);
        for ell in 0..=trunc {
            let c = if ell == 0 { s.coeff(0) - &mono } else { s.coeff(ell).clone() };
            for (tm, tc) in c.terms() {
                let next = row_index.len();
                let row = *row_index.entry((ell, tm.clone())).or_insert(next);
                entries.push((row, col, *tc));
            }
        }
    }
    let mut matrix = FpMatrix::zeros(spec.field, row_index.len(), images.len());
    for (r, c, v) in entries {
        matrix.set(r, c, v);
    }
    let mut rows = vec![(0, Monomial::one(spec.arity())); row_index.len()];
    for (key, r) in row_index {
        rows[r] = key;
    }
    Ok(KernelSystem { monomials: images.into_iter().map(|(m, _)| m).collect(), rows, matrix })
}

/// Reduced basis of the span of `polys`: leading monomials distinct, each
/// monic, no basis element containing another's leading monomial.
pub fn reduced_span_basis(polys: &[ModPolynomial], field: PrimeField, arity: usize) -> Vec<ModPolynomial> {
    let mut monomials: Vec<Monomial> = polys.iter().flat_map(|g| g.terms().map(|(m, _)| m.clone())).collect();
    monomials.sort();
    monomials.dedup();
    monomials.reverse();
    let rows: Vec<Vec<u64>> = polys.iter().map(|g| monomials.iter().map(|m| g.coefficient(m)).collect()).collect();
    if rows.is_empty() {
        return Vec::new();
    }
    let mut mat = FpMatrix::from_rows(field, &rows);
    let pivots = mat.rref();
    let mut basis: Vec<ModPolynomial> = (0..pivots.len())
        .map(|r| {
            ModPolynomial::from_terms(
                field,
                arity,
                mat.row(r).iter().zip(&monomials).map(|(&c, m)| (m.clone(), c)),
            )
        })
        .collect();
    basis.sort_by(|a, b| a.leading_term().map(|t| t.0).cmp(&b.leading_term().map(|t| t.0)));
    basis
}

/// Elements of degree at most `dmax` killed by `D_1, ..., D_trunc`.
pub fn kernel_up_to_degree(spec: &HigherDerivationSpec, dmax: u32, trunc: usize) -> Result<KernelBasis> {
    kernel_up_to_degree_capped(spec, dmax, trunc, DEFAULT_MONOMIAL_CAP)
}

pub fn kernel_up_to_degree_capped(
    spec: &HigherDerivationSpec,
    dmax: u32,
    trunc: usize,
    cap: usize,
) -> Result<KernelBasis> {
    let system = kernel_system(spec, dmax, trunc, cap)?;
    let n = spec.arity();
    let null: Vec<ModPolynomial> = system
        .matrix
        .nullspace()
        .into_iter()
        .map(|v| ModPolynomial::from_terms(spec.field, n, system.monomials.iter().cloned().zip(v)))
        .collect();
    let basis = reduced_span_basis(&null, spec.field, n);
    let windowed = spec.truncated(trunc);
    for b in &basis {
        if !fixes_polynomial(&windowed, b)?.passed() {
            return Err(Error::Precondition("kernel element failed re-verification".into()));
        }
    }
    Ok(KernelBasis { dmax, trunc, basis })
}

impl HigherDerivationSpec {
    /// The same family viewed through a smaller window.
    pub fn truncated(&self, trunc: usize) -> Self {
        if trunc >= self.trunc {
            return self.clone();
        }
        let kind = match &self.kind {
            SpecKind::Explicit { overrides } => SpecKind::Explicit {
                overrides: overrides.iter().map(|(m, s)| (m.clone(), s.truncate(trunc))).collect(),
            },
            other => other.clone(),
        };
        HigherDerivationSpec {
            field: self.field,
            trunc,
            images: self.images.iter().map(|s| s.truncate(trunc)).collect(),
            kind,
        }
    }
}

// ---------------------------------------------------------------------------
// JSON documents

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecDocument {
    p: u64,
    vars: Vec<String>,
    trunc: usize,
    images: BTreeMap<String, Vec<String>>,
    /// Generators whose listed images are complete polynomials in `t`.
    #[serde(default)]
    exact: Vec<String>,
    /// Pinned images of single monomials, keyed by the monomial's text.
    #[serde(default)]
    monomial_images: BTreeMap<String, Vec<String>>,
}

/// An explicit family together with its variable names.
#[derive(Clone, Debug)]
pub struct LoadedSpec {
    pub spec: HigherDerivationSpec,
    pub vars: Vec<String>,
}

fn parse_coeff_list(texts: &[String], vars: &[String], field: PrimeField, trunc: usize, exact: bool) -> Result<TruncatedSeries> {
    if texts.is_empty() {
        return Err(Error::SpecDocument("empty image list".into()));
    }
    let coeffs = texts.iter().map(|t| parse_mod(t, vars, field)).collect::<Result<Vec<_>, _>>()?;
    TruncatedSeries::new(coeffs, trunc, exact)
}

/// Loads `{ "p", "vars", "trunc", "images": { var: [poly per t-power] } }`.
pub fn load_spec_json(text: &str) -> Result<LoadedSpec> {
    let doc: SpecDocument = serde_json::from_str(text).map_err(|e| Error::SpecDocument(e.to_string()))?;
    let field = PrimeField::new(doc.p)?;
    for name in doc.images.keys().chain(&doc.exact) {
        if !doc.vars.contains(name) {
            return Err(Error::SpecDocument(format!("unknown variable `{name}`")));
        }
    }
    let mut images = Vec::with_capacity(doc.vars.len());
    for v in &doc.vars {
        let list = doc.images.get(v).ok_or_else(|| Error::SpecDocument(format!("missing image for `{v}`")))?;
        images.push(parse_coeff_list(list, &doc.vars, field, doc.trunc, doc.exact.contains(v))?);
    }
    let mut overrides = BTreeMap::new();
    for (key, list) in &doc.monomial_images {
        let mono = parse_mod(key, &doc.vars, field)?;
        let (m, c) = match (mono.num_terms(), mono.leading_term()) {
            (1, Some((m, &c))) => (m.clone(), c),
            _ => return Err(Error::SpecDocument(format!("`{key}` is not a monomial"))),
        };
        if c != 1 {
            return Err(Error::SpecDocument(format!("`{key}` is not a monic monomial")));
        }
        overrides.insert(m, parse_coeff_list(list, &doc.vars, field, doc.trunc, false)?);
    }
    let spec = HigherDerivationSpec::explicit_with_overrides(images, overrides)?;
    Ok(LoadedSpec { spec, vars: doc.vars })
}

/// Minimum valuation helper for reports.
pub fn valuation_of(c: &BigInt, p: u64) -> Valuation {
    IntPolynomial::constant(Integers, 0, c.clone()).min_p_valuation(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_int, var_names};

    fn xy() -> Vec<String> {
        var_names("x,y")
    }
    fn int(s: &str) -> IntPolynomial {
        parse_int(s, &xy()).unwrap()
    }
    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }
    fn md(s: &str, p: u64) -> ModPolynomial {
        parse_mod(s, &xy(), f(p)).unwrap()
    }
    fn series(texts: &[&str], p: u64, trunc: usize, exact: bool) -> TruncatedSeries {
        TruncatedSeries::new(texts.iter().map(|t| md(t, p)).collect(), trunc, exact).unwrap()
    }

    #[test]
    fn exp_of_x_minus_y_cubed() {
        let spec = HigherDerivationSpec::canonical(&[int("x - y^3")], f(3), 6).unwrap();
        assert_eq!(spec.images()[0], series(&["x", "0", "0", "1"], 3, 6, true));
        assert_eq!(spec.images()[1], series(&["y", "1"], 3, 6, true));
    }

    #[test]
    fn exp_of_xy_is_undefined_at_three() {
        match canonical_exp_map(&[int("x*y")], f(3), 6).unwrap() {
            ExpOutcome::Undefined(fail) => {
                assert_eq!((fail.ell, fail.generator, fail.required), (3, 0, 1));
                assert_eq!(fail.monomial, Monomial::new(vec![1, 0]));
                assert_eq!(fail.coefficient, BigInt::from(-1));
                assert!(fail.recheck(&delta_tilde(&[int("x*y")]).unwrap()));
            }
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn exp_of_y_plus_x_squared_over_f2() {
        let spec = HigherDerivationSpec::canonical(&[int("y + x^2")], f(2), 4).unwrap();
        assert_eq!(spec.images()[0], series(&["x", "1"], 2, 4, true));
        assert_eq!(spec.images()[1], series(&["y", "0", "1"], 2, 4, true));
    }

    fn example_geometric() -> HigherDerivationSpec {
        HigherDerivationSpec::explicit(vec![series(&["x"; 9], 2, 8, false), series(&["y", "y"], 2, 8, true)]).unwrap()
    }

    #[test]
    fn axioms_for_geometric_images() {
        let spec = example_geometric();
        let samples = vec![(md("x", 2), md("y", 2)), (md("x + y", 2), md("x*y + 1", 2))];
        assert!(verify_axioms(&spec, &samples).unwrap().passed());
        let translation =
            HigherDerivationSpec::explicit(vec![series(&["x", "1"], 5, 4, true), series(&["y"], 5, 4, true)]).unwrap();
        assert!(verify_axioms(&translation, &samples_for(5)).unwrap().passed());
    }

    fn samples_for(p: u64) -> Vec<(ModPolynomial, ModPolynomial)> {
        vec![(md("x", p), md("x", p)), (md("x + y^2", p), md("x*y", p))]
    }

    #[test]
    fn tampered_square_breaks_leibniz_at_order_two() {
        let imgs = vec![series(&["x", "1"], 5, 4, true), series(&["y"], 5, 4, true)];
        let mut overrides = BTreeMap::new();
        overrides.insert(Monomial::new(vec![2, 0]), series(&["x^2", "2*x", "0"], 5, 4, false));
        let spec = HigherDerivationSpec::explicit_with_overrides(imgs, overrides).unwrap();
        let report = verify_axioms(&spec, &[(md("x", 5), md("x", 5))]).unwrap();
        let fail = report.leibniz.unwrap();
        assert_eq!((fail.pair, fail.order), (0, 2));
        assert_eq!(fail.monomial, Monomial::one(2));
    }

    #[test]
    fn identity_violation_is_reported() {
        let spec =
            HigherDerivationSpec::explicit(vec![series(&["x + 1"], 3, 2, true), series(&["y"], 3, 2, true)]).unwrap();
        let report = verify_axioms(&spec, &[]).unwrap();
        assert_eq!(report.identity_failures, vec![md("x", 3)]);
    }

    #[test]
    fn local_finiteness_classes() {
        let canonical = HigherDerivationSpec::canonical(&[int("x - y^3")], f(3), 6).unwrap();
        assert_eq!(is_locally_finite_up_to(&canonical), LocalFiniteness::ExactPolynomial { degree: 3 });
        assert_eq!(is_locally_finite_up_to(&example_geometric()), LocalFiniteness::NotWithinWindow { trunc: 8 });
        let id = HigherDerivationSpec::identity(f(3), 2, 5);
        assert_eq!(is_locally_finite_up_to(&id), LocalFiniteness::ExactPolynomial { degree: 0 });
        let windowed =
            HigherDerivationSpec::explicit(vec![series(&["x", "1"], 3, 5, false), series(&["y"], 3, 5, false)])
                .unwrap();
        assert_eq!(is_locally_finite_up_to(&windowed), LocalFiniteness::ZeroTailWindow { degree: 1, trunc: 5 });
    }

    #[test]
    fn iterativity_examples() {
        let canonical = HigherDerivationSpec::canonical(&[int("x - y^3")], f(3), 6).unwrap();
        assert_eq!(is_iterative_up_to(&canonical).unwrap(), Iterativity::Pass { trunc: 6 });

        let ok = HigherDerivationSpec::explicit(vec![series(&["x", "1", "1"], 2, 2, true), series(&["y"], 2, 2, true)])
            .unwrap();
        assert_eq!(is_iterative_up_to(&ok).unwrap(), Iterativity::Pass { trunc: 2 });

        let bad =
            HigherDerivationSpec::explicit(vec![series(&["x", "1", "0", "1"], 2, 3, true), series(&["y"], 2, 3, true)])
                .unwrap();
        let verdict = is_iterative_up_to(&bad).unwrap();
        match verdict {
            Iterativity::CounterexampleAt { i, j, generator } => {
                assert_eq!(generator, 0);
                assert_eq!(i + j, 3);
                assert!(verdict.recheck(&bad).unwrap());
            }
            other => panic!("expected counterexample, got {other:?}"),
        }
    }

    #[test]
    fn fixes_examples() {
        let canonical = HigherDerivationSpec::canonical(&[int("x - y^3")], f(3), 6).unwrap();
        assert_eq!(fixes_polynomial(&canonical, &md("x - y^3", 3)).unwrap(), Fixes::PassUpTo(6));
        assert!(fixes_polynomial(&example_geometric(), &md("x*y", 2)).unwrap().passed());
        let plain = HigherDerivationSpec::exp_of(CharZeroDerivation::partial(2, 1), f(3), 6).unwrap();
        match fixes_polynomial(&plain, &md("x - y^3", 3)).unwrap() {
            Fixes::FailsAtOrder { order, residual } => {
                assert_eq!(order, 3);
                assert_eq!(residual.coeff(3), &md("-1", 3));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn jacobian_type_reports() {
        let geo = example_geometric();
        assert!(is_jacobian_type(&geo, &[int("x*y")]).unwrap().passed());
        let plain = HigherDerivationSpec::exp_of(CharZeroDerivation::partial(2, 1), f(3), 6).unwrap();
        let report = is_jacobian_type(&plain, &[int("x - y^3")]).unwrap();
        assert!(report.fixes_tuple.is_fail());
        assert!(report.first_term.is_pass());
        let canonical = HigherDerivationSpec::canonical(&[int("x - y^3")], f(3), 6).unwrap();
        assert!(is_jacobian_type(&canonical, &[int("x - y^3")]).unwrap().passed());
    }

    #[test]
    fn kernel_examples() {
        let canonical = HigherDerivationSpec::canonical(&[int("x - y^3")], f(3), 64).unwrap();
        let k = kernel_up_to_degree(&canonical, 6, 10).unwrap();
        let g = md("x - y^3", 3);
        let expected = reduced_span_basis(&[md("1", 3), g.clone(), g.pow(2)], f(3), 2);
        assert_eq!(k.basis, expected);

        let id = HigherDerivationSpec::identity(f(3), 2, 4);
        assert_eq!(kernel_up_to_degree(&id, 2, 4).unwrap().basis.len(), 6);

        let plain = HigherDerivationSpec::exp_of(CharZeroDerivation::partial(2, 1), f(3), 5).unwrap();
        let k = kernel_up_to_degree(&plain, 3, 5).unwrap();
        let expected: Vec<_> = ["1", "x", "x^2", "x^3"].iter().map(|s| md(s, 3)).collect();
        assert_eq!(k.basis, expected);

        assert!(matches!(kernel_up_to_degree_capped(&id, 10, 4, 20), Err(Error::DimensionCap { .. })));
    }

    #[test]
    fn loads_json_documents() {
        let doc = r#"{ "p": 2, "vars": ["x", "y"], "trunc": 8,
            "images": { "x": ["x","x","x","x","x","x","x","x","x"], "y": ["y", "y"] },
            "exact": ["y"] }"#;
        let loaded = load_spec_json(doc).unwrap();
        assert_eq!(loaded.spec, example_geometric());
        assert!(load_spec_json(r#"{ "p": 4, "vars": ["x"], "trunc": 1, "images": {"x": ["x"]} }"#).is_err());
        assert!(load_spec_json(r#"{ "p": 3, "vars": ["x"], "trunc": 1, "images": {"z": ["x"]} }"#).is_err());
        let err = load_spec_json(r#"{ "p": 3, "vars": ["x"], "trunc": 1, "images": {"x": ["x +"]} }"#).unwrap_err();
        assert!(matches!(err, Error::Parse(_)));
    }
}
