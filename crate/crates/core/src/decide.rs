//! Decision procedures with checkable evidence.
//!
//! Every YES carries a [`Certificate`]: a slice `s` and, for each generator
//! `x_k`, a polynomial `E_k` in fresh symbols with `E_k(f_1, ..., s) = x_k`.
//! Every NO carries a finite [`Witness`]. UNKNOWN names the first exhausted
//! budget. [`Verdict::verify`] re-checks either kind of evidence from scratch.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::expr::format_polynomial;
use crate::higher_deriv::{
    exp_map, is_iterative_up_to, is_jacobian_type, is_locally_finite_up_to, kernel_system, kernel_up_to_degree_capped,
    DefinednessFailure, ExpOutcome, HigherDerivationSpec, Iterativity, LocalFiniteness, DEFAULT_MONOMIAL_CAP,
    DEFAULT_TRUNC,
};
use crate::jacobian::{delta_tilde, determinant, CharZeroDerivation};
use crate::linalg::FpMatrix;
use crate::poly::{lift_canonical, lift_symmetric, IntPolynomial, ModPolynomial, Monomial, PrimeField};
use crate::series::series_eval_polynomial;

pub const DEFAULT_RELATION_DEGREE: u32 = 6;
pub const DEFAULT_CANDIDATES: usize = 64;

/// Names for the tuple components followed by the slice: `F, S` for a single
/// polynomial, `F1, ..., Fm, S` otherwise.
pub fn fresh_symbols(m: usize, with_slice: bool) -> Vec<String> {
    let mut names: Vec<String> =
        if m == 1 { vec!["F".to_string()] } else { (1..=m).map(|i| format!("F{i}")).collect() };
    if with_slice {
        names.push("S".to_string());
    }
    names
}

/// Graded-lex comparison of polynomials by their descending term lists.
pub fn glex_cmp(a: &ModPolynomial, b: &ModPolynomial) -> Ordering {
    let mut ta = a.terms();
    let mut tb = b.terms();
    loop {
        match (ta.next(), tb.next()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some((ma, ca)), Some((mb, cb))) => {
                let ord = ma.cmp(mb).then(ca.cmp(cb));
                if ord != Ordering::Equal {
                    return ord;
                }
            }
        }
    }
}

fn embed(g: &ModPolynomial, arity: usize) -> Result<ModPolynomial> {
    let vars: Vec<ModPolynomial> = (0..g.arity()).map(|i| ModPolynomial::var(g.field(), arity, i)).collect();
    if vars.is_empty() {
        return Ok(ModPolynomial::constant(g.field(), arity, g.constant_term()));
    }
    g.substitute(&vars)
}

fn degree(g: &ModPolynomial) -> u32 {
    g.total_degree().unwrap_or(0) as u32
}

// ---------------------------------------------------------------------------
// Slices

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceCandidate {
    pub s: ModPolynomial,
    /// Highest nonzero `t`-power of `phi(s)` inside the window.
    pub tdeg: usize,
    pub leading: ModPolynomial,
    pub is_slice: bool,
    /// `phi(s)` is known to be a polynomial in `t`.
    pub exact: bool,
}

/// Candidates with non-fixed images, ordered by `t`-degree and then by the
/// candidate itself.
pub fn rank_candidates(spec: &HigherDerivationSpec, candidates: &[ModPolynomial]) -> Result<Vec<SliceCandidate>> {
    let mut out: Vec<SliceCandidate> = Vec::new();
    let mut seen = HashSet::new();
    for s in candidates {
        if s.is_constant() || !seen.insert(s.clone()) {
            continue;
        }
        let image = spec.apply(s)?;
        let Some(tdeg) = image.t_degree().filter(|&d| d >= 1) else {
            continue;
        };
        let leading = image.coeff(tdeg).clone();
        let is_slice = leading.is_constant() && !leading.is_zero();
        out.push(SliceCandidate { s: s.clone(), tdeg, leading, is_slice, exact: image.is_exact() });
    }
    out.sort_by(|a, b| a.tdeg.cmp(&b.tdeg).then_with(|| glex_cmp(&a.s, &b.s)));
    Ok(out)
}

/// The candidate of least `t`-degree, ties going to the graded-lex least.
pub fn find_local_slice(spec: &HigherDerivationSpec, candidates: &[ModPolynomial]) -> Result<Option<SliceCandidate>> {
    Ok(rank_candidates(spec, candidates)?.into_iter().next())
}

/// Generators, monomials of degree 2 and 3, then seeded random sparse
/// polynomials, `count` in total.
pub fn default_candidates(field: PrimeField, arity: usize, count: usize, seed: u64) -> Vec<ModPolynomial> {
    let monomials: Vec<Monomial> =
        Monomial::all_up_to_degree(arity, 3).into_iter().filter(|m| !m.is_one()).collect();
    let mut out: Vec<ModPolynomial> =
        monomials.iter().map(|m| ModPolynomial::monomial(field, m.clone(), 1)).take(count).collect();
    let mut seen: HashSet<ModPolynomial> = out.iter().cloned().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = field.modulus();
    let mut attempts = 0;
    while out.len() < count && attempts < 50 * count {
        attempts += 1;
        let terms = rng.gen_range(1..=3);
        let g = ModPolynomial::from_terms(
            field,
            arity,
            (0..terms).map(|_| (monomials[rng.gen_range(0..monomials.len())].clone(), rng.gen_range(1..p))),
        );
        if !g.is_constant() && seen.insert(g.clone()) {
            out.push(g);
        }
    }
    out
}

/// Solves `D_1(s) = 1` and `D_l(s) = 0` for `2 <= l <= trunc` over the
/// polynomials of degree at most `dmax`.
pub fn linear_slice(spec: &HigherDerivationSpec, dmax: u32, trunc: usize, cap: usize) -> Result<Option<ModPolynomial>> {
    let system = kernel_system(spec, dmax, trunc.min(spec.trunc()), cap)?;
    let target = (1, Monomial::one(spec.arity()));
    let Some(row) = system.rows.iter().position(|r| *r == target) else {
        return Ok(None);
    };
    let mut b = vec![0; system.rows.len()];
    b[row] = 1;
    Ok(system.matrix.solve(&b).map(|v| {
        ModPolynomial::from_terms(spec.field(), spec.arity(), system.monomials.iter().cloned().zip(v))
    }))
}

// ---------------------------------------------------------------------------
// Membership, retraction, independence

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// One expression per target, in as many symbols as there are generators.
    Expressions(Vec<ModPolynomial>),
    NotInSpan { target: usize },
}

/// Products `prod gens_i^{a_i}` with `sum a_i * deg(gens_i) <= dmax`, keyed by
/// exponent vector, ascending.
fn bounded_products(gens: &[ModPolynomial], dmax: u32, cap: usize) -> Result<Vec<(Monomial, ModPolynomial)>> {
    let m = gens.len();
    let weights: Vec<u64> = gens.iter().map(|g| degree(g).max(1) as u64).collect();
    let exps: Vec<Monomial> = Monomial::all_up_to_degree(m, dmax)
        .into_iter()
        .filter(|a| a.exps().iter().zip(&weights).map(|(&e, w)| e as u64 * w).sum::<u64>() <= dmax as u64)
        .collect();
    if exps.len() > cap {
        return Err(Error::DimensionCap { needed: exps.len(), cap });
    }
    let field = gens[0].field();
    let arity = gens[0].arity();
    let mut cache: HashMap<Monomial, ModPolynomial> = HashMap::new();
    let mut out = Vec::with_capacity(exps.len());
    for a in exps {
        let g = match (0..m).find(|&i| a.exp(i) > 0) {
            None => ModPolynomial::one(field, arity),
            Some(i) => cache[&a.lower(i).expect("positive exponent")].try_mul(&gens[i])?,
        };
        cache.insert(a.clone(), g.clone());
        out.push((a, g));
    }
    Ok(out)
}

/// Expresses each target as a polynomial in `gens` using the products of
/// ambient degree at most `dmax`. Every expression is re-checked by
/// substitution before it is returned.
pub fn subalgebra_membership(
    targets: &[ModPolynomial],
    gens: &[ModPolynomial],
    dmax: u32,
    cap: usize,
) -> Result<Membership> {
    let first = gens.first().ok_or(Error::Precondition("no generators".into()))?;
    let (field, arity) = (first.field(), first.arity());
    for g in gens.iter().chain(targets) {
        if g.arity() != arity {
            return Err(Error::ArityMismatch { left: arity, right: g.arity() });
        }
        if g.field() != field {
            return Err(Error::ModulusMismatch { left: field.modulus(), right: g.field().modulus() });
        }
    }
    let products = bounded_products(gens, dmax, cap)?;
    let mut row_index: BTreeMap<Monomial, usize> = BTreeMap::new();
    for g in products.iter().map(|(_, g)| g).chain(targets) {
        for (m, _) in g.terms() {
            let next = row_index.len();
            row_index.entry(m.clone()).or_insert(next);
        }
    }
    if row_index.len() > cap * 4 {
        return Err(Error::DimensionCap { needed: row_index.len(), cap: cap * 4 });
    }
    let mut matrix = FpMatrix::zeros(field, row_index.len(), products.len());
    for (col, (_, g)) in products.iter().enumerate() {
        for (m, c) in g.terms() {
            matrix.set(row_index[m], col, *c);
        }
    }
    let mut expressions = Vec::with_capacity(targets.len());
    for (idx, target) in targets.iter().enumerate() {
        let mut b = vec![0; row_index.len()];
        for (m, c) in target.terms() {
            b[row_index[m]] = *c;
        }
        let Some(v) = matrix.solve(&b) else {
            return Ok(Membership::NotInSpan { target: idx });
        };
        let expr = ModPolynomial::from_terms(field, gens.len(), products.iter().map(|(a, _)| a.clone()).zip(v));
        if &expr.substitute(gens)? != target {
            return Err(Error::Precondition("membership expression failed substitution".into()));
        }
        expressions.push(expr);
    }
    Ok(Membership::Expressions(expressions))
}

fn slice_unit(spec: &HigherDerivationSpec, s: &SliceCandidate) -> Result<u64> {
    if s.tdeg != 1 || !s.is_slice {
        return Err(Error::Precondition("retraction needs phi(s) = s + c*t with c a nonzero constant".into()));
    }
    if !s.exact || spec.images().iter().any(|img| !img.is_exact()) {
        return Err(Error::InexactEvaluation { trunc: spec.trunc() });
    }
    Ok(s.leading.constant_term())
}

/// `pi(g) = phi(g)` evaluated at `t = -s/c`.
fn retract(spec: &HigherDerivationSpec, s: &ModPolynomial, c: u64, g: &ModPolynomial) -> Result<ModPolynomial> {
    let field = spec.field();
    let minus_inv = field.modulus() - field.inv(c).expect("unit");
    spec.apply(g)?.evaluate_t(&s.scale(&minus_inv))
}

/// Kernel elements `pi(x_k)` obtained from a slice with `phi(s) = s + c*t`.
/// Each is re-verified to be fixed by `phi` up to `T`.
pub fn dixmier_retract(spec: &HigherDerivationSpec, s: &SliceCandidate) -> Result<Vec<ModPolynomial>> {
    let c = slice_unit(spec, s)?;
    let n = spec.arity();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let x = ModPolynomial::var(spec.field(), n, k);
        let r = retract(spec, &s.s, c, &x)?;
        if !crate::higher_deriv::fixes_polynomial(spec, &r)?.passed() {
            return Err(Error::Precondition(format!("retraction of generator {} is not fixed", k + 1)));
        }
        out.push(r);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Independence {
    /// A nonzero maximal minor of the Jacobian matrix.
    Independent { columns: Vec<usize>, minor: ModPolynomial },
    /// A nonzero polynomial relation, in the symbols of [`fresh_symbols`].
    Dependent { relation: ModPolynomial },
    /// Rank deficient and no relation of degree at most `max_degree`.
    Inconclusive { max_degree: u32 },
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    for rest in combinations(n - 1, k - 1) {
        let mut v = rest;
        v.push(n - 1);
        out.push(v);
    }
    out.extend(combinations(n - 1, k));
    out.sort();
    out
}

pub fn algebraic_independence(tuple: &[ModPolynomial], max_degree: u32) -> Result<Independence> {
    let first = tuple.first().ok_or(Error::TupleLength { expected: 1, got: 0 })?;
    let (field, n, m) = (first.field(), first.arity(), tuple.len());
    let jac: Vec<Vec<ModPolynomial>> =
        tuple.iter().map(|f| (0..n).map(|j| f.partial_derivative(j)).collect()).collect::<Result<_>>()?;
    for columns in combinations(n, m) {
        let rows: Vec<Vec<ModPolynomial>> =
            jac.iter().map(|row| columns.iter().map(|&j| row[j].clone()).collect()).collect();
        let minor = determinant(&rows, &field, n);
        if !minor.is_zero() {
            return Ok(Independence::Independent { columns, minor });
        }
    }
    let exps = Monomial::all_up_to_degree(m, max_degree);
    if exps.len() > DEFAULT_MONOMIAL_CAP {
        return Err(Error::DimensionCap { needed: exps.len(), cap: DEFAULT_MONOMIAL_CAP });
    }
    let products: Vec<ModPolynomial> = exps
        .iter()
        .map(|a| {
            a.exps().iter().zip(tuple).fold(ModPolynomial::one(field, n), |acc, (&e, f)| &acc * &f.pow(e))
        })
        .collect();
    let mut row_index: BTreeMap<Monomial, usize> = BTreeMap::new();
    for g in &products {
        for (mono, _) in g.terms() {
            let next = row_index.len();
            row_index.entry(mono.clone()).or_insert(next);
        }
    }
    let mut matrix = FpMatrix::zeros(field, row_index.len(), products.len());
    for (col, g) in products.iter().enumerate() {
        for (mono, c) in g.terms() {
            matrix.set(row_index[mono], col, *c);
        }
    }
    match matrix.nullspace().into_iter().next() {
        Some(v) => {
            let relation = ModPolynomial::from_terms(field, m, exps.into_iter().zip(v)).monic();
            Ok(Independence::Dependent { relation })
        }
        None => Ok(Independence::Inconclusive { max_degree }),
    }
}

// ---------------------------------------------------------------------------
// Conjugation

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Conjugation {
    Pass { trunc: usize },
    Mismatch { generator: usize, order: usize },
}

fn is_identity_composition(outer: &[IntPolynomial], inner: &[IntPolynomial]) -> Result<bool> {
    for (k, g) in inner.iter().enumerate() {
        if g.substitute(outer)? != IntPolynomial::var(crate::poly::Integers, outer[0].arity(), k) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Compares `Exp(t * sigma^{-1} d sigma)` with `sigma^{-1} o Exp(td) o sigma`
/// on the generators through order `trunc`, for `d = delta_tilde(F)`.
/// `sigma` and `sigma_inv` must be mutually inverse over the integers.
pub fn conjugation_check(
    tuple: &[IntPolynomial],
    sigma: &[IntPolynomial],
    sigma_inv: &[IntPolynomial],
    field: PrimeField,
    trunc: usize,
) -> Result<Conjugation> {
    let d = delta_tilde(tuple)?;
    let n = d.arity();
    for map in [sigma, sigma_inv] {
        if map.len() != n {
            return Err(Error::TupleLength { expected: n, got: map.len() });
        }
        if let Some(g) = map.iter().find(|g| g.arity() != n) {
            return Err(Error::ArityMismatch { left: n, right: g.arity() });
        }
    }
    if !is_identity_composition(sigma, sigma_inv)? || !is_identity_composition(sigma_inv, sigma)? {
        return Err(Error::NotAutomorphism("the supplied maps are not mutually inverse".into()));
    }
    let conjugated = CharZeroDerivation::new(
        sigma.iter().map(|s| d.apply(s)?.substitute(sigma_inv)).collect::<Result<Vec<_>>>()?,
    )?;
    let lhs = match exp_map(&conjugated, field, trunc)? {
        ExpOutcome::Defined(images) => images,
        ExpOutcome::Undefined(f) => return Err(Error::Undefined(Box::new(f))),
    };
    let base = match exp_map(&d, field, trunc)? {
        ExpOutcome::Defined(images) => images,
        ExpOutcome::Undefined(f) => return Err(Error::Undefined(Box::new(f))),
    };
    let inv_mod: Vec<ModPolynomial> = sigma_inv.iter().map(|g| g.reduce(field)).collect();
    for k in 0..n {
        let rhs = series_eval_polynomial(&sigma[k].reduce(field), &base)?.map_coeffs(|c| c.substitute(&inv_mod))?;
        if let Some(order) = (0..=trunc).find(|&l| lhs[k].coeff(l) != rhs.coeff(l)) {
            return Ok(Conjugation::Mismatch { generator: k, order });
        }
    }
    Ok(Conjugation::Pass { trunc })
}

// ---------------------------------------------------------------------------
// Verdicts

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budgets {
    pub trunc: usize,
    /// Defaults to `max(2 * degree of the inputs, 8)`.
    pub dmax: Option<u32>,
    pub candidates: usize,
    pub seed: u64,
    pub relation_degree: u32,
    pub monomial_cap: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            trunc: DEFAULT_TRUNC,
            dmax: None,
            candidates: DEFAULT_CANDIDATES,
            seed: 0,
            relation_degree: DEFAULT_RELATION_DEGREE,
            monomial_cap: DEFAULT_MONOMIAL_CAP,
        }
    }
}

/// The budgets a verdict was reached with, `dmax` resolved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolvedBudgets {
    pub trunc: usize,
    pub dmax: u32,
    pub candidates: usize,
    pub seed: u64,
}

impl Budgets {
    pub fn resolve(&self, inputs: &[IntPolynomial]) -> ResolvedBudgets {
        let deg = inputs.iter().filter_map(|f| f.total_degree()).max().unwrap_or(0) as u32;
        ResolvedBudgets {
            trunc: self.trunc,
            dmax: self.dmax.unwrap_or((2 * deg).max(8)),
            candidates: self.candidates,
            seed: self.seed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

impl Answer {
    pub fn as_str(self) -> &'static str {
        match self {
            Answer::Yes => "yes",
            Answer::No => "no",
            Answer::Unknown => "unknown",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// Generators expressed directly over `F` and `s`.
    Direct,
    /// Through `x_k = sum_l pi(D_l(x_k)) (s/c)^l` with each `pi(D_l(x_k))` in `k[F]`.
    Retraction,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub tuple: Vec<ModPolynomial>,
    pub slice: ModPolynomial,
    /// `E_k` in the symbols `fresh_symbols(tuple.len(), true)`.
    pub expressions: Vec<ModPolynomial>,
    pub route: Route,
}

impl Certificate {
    /// `E_k(f_1, ..., f_{n-1}, s) = x_k` for every generator.
    pub fn verify(&self) -> bool {
        let Some(first) = self.tuple.first() else {
            return false;
        };
        let (field, n) = (first.field(), first.arity());
        let mut values = self.tuple.clone();
        values.push(self.slice.clone());
        self.expressions.len() == n
            && self.expressions.iter().enumerate().all(|(k, e)| {
                e.arity() == values.len()
                    && matches!(e.substitute(&values), Ok(v) if v == ModPolynomial::var(field, n, k))
            })
    }

    pub fn lines(&self, vars: &[String]) -> Vec<String> {
        let symbols = fresh_symbols(self.tuple.len(), true);
        self.expressions
            .iter()
            .enumerate()
            .map(|(k, e)| format!("{} = {}", var_name(vars, k), format_polynomial(e, &symbols)))
            .collect()
    }

    fn to_json(&self, vars: &[String]) -> Value {
        let symbols = fresh_symbols(self.tuple.len(), true);
        let expressions: serde_json::Map<String, Value> = self
            .expressions
            .iter()
            .enumerate()
            .map(|(k, e)| (var_name(vars, k), Value::String(format_polynomial(e, &symbols))))
            .collect();
        json!({
            "tuple": self.tuple.iter().map(|f| format_polynomial(f, vars)).collect::<Vec<_>>(),
            "slice": format_polynomial(&self.slice, vars),
            "symbols": symbols,
            "expressions": expressions,
            "route": match self.route { Route::Direct => "direct", Route::Retraction => "retraction" },
        })
    }
}

fn var_name(vars: &[String], k: usize) -> String {
    vars.get(k).cloned().unwrap_or_else(|| format!("x{}", k + 1))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// `delta_tilde(F)` vanishes mod `p`, so no completion has unit Jacobian.
    ZeroDerivation,
    Definedness(DefinednessFailure),
    Iterativity { i: usize, j: usize, generator: usize, trunc: usize },
    Dependence { relation: ModPolynomial },
}

impl Witness {
    pub fn describe(&self, vars: &[String], m: usize) -> String {
        match self {
            Witness::ZeroDerivation => "the Jacobian derivation vanishes mod p".to_string(),
            Witness::Definedness(f) => format!(
                "l!^-1 [d]^l is not defined at {} for l = {}: coefficient {} of {} has {}-adic valuation below {}",
                var_name(vars, f.generator),
                f.ell,
                f.coefficient,
                format_polynomial(
                    &IntPolynomial::monomial(crate::poly::Integers, f.monomial.clone(), 1.into()),
                    vars
                ),
                f.p,
                f.required
            ),
            Witness::Iterativity { i, j, generator, .. } => format!(
                "D_{i} D_{j} != C({}, {j}) D_{} at {}",
                i + j,
                i + j,
                var_name(vars, *generator)
            ),
            Witness::Dependence { relation } => {
                format!("algebraic relation {} = 0", format_polynomial(relation, &fresh_symbols(m, false)))
            }
        }
    }

    fn to_json(&self, vars: &[String], m: usize) -> Value {
        match self {
            Witness::ZeroDerivation => json!({ "kind": "zero_derivation" }),
            Witness::Definedness(f) => json!({
                "kind": "definedness",
                "ell": f.ell,
                "generator": var_name(vars, f.generator),
                "monomial": format_polynomial(
                    &IntPolynomial::monomial(crate::poly::Integers, f.monomial.clone(), 1.into()),
                    vars
                ),
                "coefficient": f.coefficient.to_string(),
                "p": f.p,
                "required_valuation": f.required,
            }),
            Witness::Iterativity { i, j, generator, trunc } => json!({
                "kind": "iterativity",
                "i": i,
                "j": j,
                "generator": var_name(vars, *generator),
                "trunc": trunc,
            }),
            Witness::Dependence { relation } => json!({
                "kind": "dependence",
                "relation": format_polynomial(relation, &fresh_symbols(m, false)),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostics {
    /// The first budget that ran out.
    pub exhausted: String,
    pub tail: Option<LocalFiniteness>,
    pub best_candidate: Option<SliceCandidate>,
    pub kernel_dimension: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    Certificate(Certificate),
    /// `f = expression(g)` with `g` a certified variable.
    Univariate { variable: IntPolynomial, certificate: Certificate, expression: ModPolynomial },
    Witness(Witness),
    Diagnostics(Diagnostics),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub answer: Answer,
    pub evidence: Evidence,
    pub budgets: ResolvedBudgets,
    pub field: PrimeField,
    /// The integer representatives the verdict is about.
    pub tuple: Vec<IntPolynomial>,
    /// For single polynomials: whether the computed kernel lies in `k[f]`.
    pub kernel_in_powers: Option<bool>,
}

impl Verdict {
    /// Re-checks the evidence from scratch.
    pub fn verify(&self) -> Result<bool> {
        Ok(match &self.evidence {
            Evidence::Certificate(c) => {
                c.verify() && c.tuple == self.tuple.iter().map(|f| f.reduce(self.field)).collect::<Vec<_>>()
            }
            Evidence::Univariate { variable, certificate, expression } => {
                let g = variable.reduce(self.field);
                certificate.verify()
                    && certificate.tuple == [g.clone()]
                    && expression.substitute(&[g])? == self.tuple[0].reduce(self.field)
            }
            Evidence::Witness(Witness::ZeroDerivation) => delta_tilde(&self.tuple)?.reduce(self.field).is_zero(),
            Evidence::Witness(Witness::Definedness(f)) => f.recheck(&delta_tilde(&self.tuple)?),
            Evidence::Witness(Witness::Iterativity { i, j, generator, trunc }) => {
                let spec = HigherDerivationSpec::canonical(&self.tuple, self.field, *trunc)?;
                Iterativity::CounterexampleAt { i: *i, j: *j, generator: *generator }.recheck(&spec)?
            }
            Evidence::Witness(Witness::Dependence { relation }) => {
                let reduced: Vec<ModPolynomial> = self.tuple.iter().map(|f| f.reduce(self.field)).collect();
                !relation.is_zero() && relation.substitute(&reduced)?.is_zero()
            }
            Evidence::Diagnostics(_) => self.answer == Answer::Unknown,
        })
    }

    pub fn render_text(&self, vars: &[String]) -> String {
        let mut out = format!("answer: {}\n", self.answer.as_str());
        match &self.evidence {
            Evidence::Certificate(c) => {
                out += &format!("slice: {}\n", format_polynomial(&c.slice, vars));
                for line in c.lines(vars) {
                    out += &line;
                    out.push('\n');
                }
            }
            Evidence::Univariate { variable, certificate, expression } => {
                out += &format!("variable: {}\n", format_polynomial(variable, vars));
                out += &format!("f = {}\n", format_polynomial(expression, &["G".to_string()]));
                out += &format!("slice: {}\n", format_polynomial(&certificate.slice, vars));
                for line in certificate.lines(vars) {
                    out += &line;
                    out.push('\n');
                }
            }
            Evidence::Witness(w) => {
                out += &format!("witness: {}\n", w.describe(vars, self.tuple.len()));
            }
            Evidence::Diagnostics(d) => {
                out += &format!("exhausted: {}\n", d.exhausted);
                if let Some(c) = &d.best_candidate {
                    out += &format!(
                        "best local slice candidate: {} (t-degree {}, leading {})\n",
                        format_polynomial(&c.s, vars),
                        c.tdeg,
                        format_polynomial(&c.leading, vars)
                    );
                }
            }
        }
        if let Some(k) = self.kernel_in_powers {
            out += &format!("kernel within powers of f: {k}\n");
        }
        out
    }

    pub fn to_json(&self, vars: &[String]) -> Value {
        let m = self.tuple.len();
        let (certificate, witness, diagnostics) = match &self.evidence {
            Evidence::Certificate(c) => (c.to_json(vars), Value::Null, Value::Null),
            Evidence::Univariate { variable, certificate, expression } => {
                let mut c = certificate.to_json(vars);
                c["variable"] = Value::String(format_polynomial(variable, vars));
                c["expression"] = Value::String(format_polynomial(expression, &["G".to_string()]));
                (c, Value::Null, Value::Null)
            }
            Evidence::Witness(w) => (Value::Null, w.to_json(vars, m), Value::Null),
            Evidence::Diagnostics(d) => (
                Value::Null,
                Value::Null,
                json!({
                    "exhausted": d.exhausted,
                    "tail": d.tail.as_ref().map(|t| format!("{t:?}")),
                    "best_candidate": d.best_candidate.as_ref().map(|c| json!({
                        "s": format_polynomial(&c.s, vars),
                        "tdeg": c.tdeg,
                        "leading": format_polynomial(&c.leading, vars),
                        "is_slice": c.is_slice,
                    })),
                    "kernel_dimension": d.kernel_dimension,
                }),
            ),
        };
        json!({
            "answer": self.answer.as_str(),
            "certificate": certificate,
            "witness": witness,
            "diagnostics": diagnostics,
            "kernel_in_powers": self.kernel_in_powers,
            "budgets": {
                "p": self.field.modulus(),
                "trunc": self.budgets.trunc,
                "dmax": self.budgets.dmax,
                "candidates": self.budgets.candidates,
                "seed": self.budgets.seed,
            },
        })
    }
}

// ---------------------------------------------------------------------------
// Pipelines

fn check_tuple(tuple: &[IntPolynomial], field: PrimeField) -> Result<usize> {
    let first = tuple.first().ok_or(Error::TupleLength { expected: 1, got: 0 })?;
    let n = first.arity();
    if tuple.len() + 1 != n {
        return Err(Error::TupleLength { expected: n.saturating_sub(1), got: tuple.len() });
    }
    for f in tuple {
        if f.arity() != n {
            return Err(Error::ArityMismatch { left: n, right: f.arity() });
        }
        if f.reduce(field).is_constant() {
            return Err(Error::Precondition("tuple components must be nonconstant mod p".into()));
        }
    }
    Ok(n)
}

fn direct_certificate(
    reduced: &[ModPolynomial],
    slice: &ModPolynomial,
    dmax: u32,
    cap: usize,
) -> Result<Option<Certificate>> {
    let (field, n) = (slice.field(), slice.arity());
    let targets: Vec<ModPolynomial> = (0..n).map(|k| ModPolynomial::var(field, n, k)).collect();
    let mut gens = reduced.to_vec();
    gens.push(slice.clone());
    match subalgebra_membership(&targets, &gens, dmax, cap) {
        Ok(Membership::Expressions(expressions)) => Ok(Some(Certificate {
            tuple: reduced.to_vec(),
            slice: slice.clone(),
            expressions,
            route: Route::Direct,
        })),
        Ok(Membership::NotInSpan { .. }) | Err(Error::DimensionCap { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn retraction_certificate(
    spec: &HigherDerivationSpec,
    reduced: &[ModPolynomial],
    candidate: &SliceCandidate,
    dmax: u32,
    cap: usize,
) -> Result<Option<Certificate>> {
    let c = match slice_unit(spec, candidate) {
        Ok(c) => c,
        Err(Error::Precondition(_) | Error::InexactEvaluation { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let field = spec.field();
    let m = reduced.len();
    let c_inv = field.inv(c).expect("unit");
    let slice_symbol = ModPolynomial::var(field, m + 1, m);
    let mut expressions = Vec::with_capacity(spec.arity());
    for image in spec.images() {
        let mut expr = ModPolynomial::zero(field, m + 1);
        for (ell, coeff) in image.coeffs().iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            let kernel_part = match retract(spec, &candidate.s, c, coeff) {
                Ok(r) => r,
                Err(Error::InexactEvaluation { .. }) => return Ok(None),
                Err(e) => return Err(e),
            };
            let budget = dmax.max(degree(&kernel_part));
            let p_ell = match subalgebra_membership(&[kernel_part], reduced, budget, cap) {
                Ok(Membership::Expressions(mut e)) => e.remove(0),
                Ok(Membership::NotInSpan { .. }) | Err(Error::DimensionCap { .. }) => return Ok(None),
                Err(e) => return Err(e),
            };
            let power = slice_symbol.pow(ell as u32).scale(&field.pow(c_inv, ell as u64));
            expr = &expr + &(&embed(&p_ell, m + 1)? * &power);
        }
        expressions.push(expr);
    }
    let cert = Certificate { tuple: reduced.to_vec(), slice: candidate.s.clone(), expressions, route: Route::Retraction };
    Ok(cert.verify().then_some(cert))
}

struct PipelineOutcome {
    verdict: Verdict,
    spec: Option<HigherDerivationSpec>,
}

fn extendable_pipeline(tuple: &[IntPolynomial], field: PrimeField, budgets: &Budgets) -> Result<PipelineOutcome> {
    let n = check_tuple(tuple, field)?;
    let resolved = budgets.resolve(tuple);
    let reduced: Vec<ModPolynomial> = tuple.iter().map(|f| f.reduce(field)).collect();
    let verdict = |answer, evidence| Verdict {
        answer,
        evidence,
        budgets: resolved.clone(),
        field,
        tuple: tuple.to_vec(),
        kernel_in_powers: None,
    };
    let no = |w| PipelineOutcome { verdict: verdict(Answer::No, Evidence::Witness(w)), spec: None };

    if delta_tilde(tuple)?.reduce(field).is_zero() {
        return Ok(no(Witness::ZeroDerivation));
    }
    let spec = match HigherDerivationSpec::canonical(tuple, field, resolved.trunc) {
        Ok(spec) => spec,
        Err(Error::Undefined(f)) => return Ok(no(Witness::Definedness(*f))),
        Err(e) => return Err(e),
    };
    if let Iterativity::CounterexampleAt { i, j, generator } = is_iterative_up_to(&spec)? {
        let mut out = no(Witness::Iterativity { i, j, generator, trunc: resolved.trunc });
        out.spec = Some(spec);
        return Ok(out);
    }
    if let Independence::Dependent { relation } = algebraic_independence(&reduced, budgets.relation_degree)? {
        let mut out = no(Witness::Dependence { relation });
        out.spec = Some(spec);
        return Ok(out);
    }

    let mut candidates = default_candidates(field, n, resolved.candidates, resolved.seed);
    match linear_slice(&spec, resolved.dmax, resolved.trunc, budgets.monomial_cap) {
        Ok(Some(s)) => candidates.push(s),
        Ok(None) | Err(Error::DimensionCap { .. }) => {}
        Err(e) => return Err(e),
    }
    let ranked = rank_candidates(&spec, &candidates)?;
    let mut any_slice = false;
    for candidate in ranked.iter().filter(|c| c.is_slice) {
        any_slice = true;
        let cert = match direct_certificate(&reduced, &candidate.s, resolved.dmax, budgets.monomial_cap)? {
            Some(cert) => Some(cert),
            None => retraction_certificate(&spec, &reduced, candidate, resolved.dmax, budgets.monomial_cap)?,
        };
        if let Some(cert) = cert.filter(Certificate::verify) {
            return Ok(PipelineOutcome { verdict: verdict(Answer::Yes, Evidence::Certificate(cert)), spec: Some(spec) });
        }
    }
    let exhausted = if any_slice {
        format!("dmax ({})", resolved.dmax)
    } else {
        format!("slice candidates ({})", candidates.len())
    };
    let diagnostics = Diagnostics {
        exhausted,
        tail: Some(is_locally_finite_up_to(&spec)),
        best_candidate: ranked.into_iter().next(),
        kernel_dimension: None,
    };
    Ok(PipelineOutcome { verdict: verdict(Answer::Unknown, Evidence::Diagnostics(diagnostics)), spec: Some(spec) })
}

fn ensure_verified(verdict: Verdict) -> Result<Verdict> {
    if verdict.verify()? {
        Ok(verdict)
    } else {
        Err(Error::Precondition("produced evidence failed re-verification".into()))
    }
}

/// Whether `tuple` extends to a coordinate system, decided through the
/// canonical family of its Jacobian derivation.
pub fn decide_extendable(tuple: &[IntPolynomial], field: PrimeField, budgets: &Budgets) -> Result<Verdict> {
    ensure_verified(extendable_pipeline(tuple, field, budgets)?.verdict)
}

fn require_plane(f: &IntPolynomial) -> Result<()> {
    if f.arity() != 2 {
        return Err(Error::Precondition("a plane polynomial in two variables is required".into()));
    }
    Ok(())
}

/// Whether `f` is a variable of `k[x, y]`.
pub fn decide_variable(f: &IntPolynomial, field: PrimeField, budgets: &Budgets) -> Result<Verdict> {
    require_plane(f)?;
    let PipelineOutcome { mut verdict, spec } = extendable_pipeline(std::slice::from_ref(f), field, budgets)?;
    if let Some(spec) = spec.filter(|_| verdict.answer != Answer::No) {
        verdict.kernel_in_powers = kernel_in_powers(&spec, &f.reduce(field), &verdict.budgets, budgets.monomial_cap)?;
    }
    ensure_verified(verdict)
}

fn kernel_in_powers(
    spec: &HigherDerivationSpec,
    f: &ModPolynomial,
    budgets: &ResolvedBudgets,
    cap: usize,
) -> Result<Option<bool>> {
    let kernel = match kernel_up_to_degree_capped(spec, budgets.dmax, budgets.trunc, cap) {
        Ok(k) => k,
        Err(Error::DimensionCap { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    for b in &kernel.basis {
        match subalgebra_membership(std::slice::from_ref(b), std::slice::from_ref(f), budgets.dmax.max(degree(b)), cap)
        {
            Ok(Membership::Expressions(_)) => {}
            Ok(Membership::NotInSpan { .. }) => return Ok(Some(false)),
            Err(Error::DimensionCap { .. }) => return Ok(None),
            Err(e) => return Err(e),
        }
    }
    Ok(Some(true))
}

/// Whether `f` lies in `k[g]` for some variable `g` of `k[x, y]`.
pub fn decide_univariate(f: &IntPolynomial, field: PrimeField, budgets: &Budgets) -> Result<Verdict> {
    require_plane(f)?;
    let reduced = f.reduce(field);
    if (0..2).all(|i| reduced.partial_derivative(i).map(|d| d.is_zero()).unwrap_or(true)) {
        return Err(Error::Precondition("f lies in k[x^p, y^p]: both partial derivatives vanish mod p".into()));
    }
    let resolved = budgets.resolve(std::slice::from_ref(f));
    let verdict = |answer, evidence| Verdict {
        answer,
        evidence,
        budgets: resolved.clone(),
        field,
        tuple: vec![f.clone()],
        kernel_in_powers: None,
    };
    let unknown = |exhausted: String, tail, kernel_dimension| {
        verdict(Answer::Unknown, Evidence::Diagnostics(Diagnostics { exhausted, tail, best_candidate: None, kernel_dimension }))
    };

    let spec = match HigherDerivationSpec::canonical(std::slice::from_ref(f), field, resolved.trunc) {
        Ok(spec) => spec,
        Err(Error::Undefined(fail)) => {
            return ensure_verified(verdict(Answer::No, Evidence::Witness(Witness::Definedness(*fail))))
        }
        Err(e) => return Err(e),
    };
    if let Iterativity::CounterexampleAt { i, j, generator } = is_iterative_up_to(&spec)? {
        let w = Witness::Iterativity { i, j, generator, trunc: resolved.trunc };
        return ensure_verified(verdict(Answer::No, Evidence::Witness(w)));
    }
    let tail = is_locally_finite_up_to(&spec);
    let report = is_jacobian_type(&spec, std::slice::from_ref(f))?;
    if matches!(tail, LocalFiniteness::NotWithinWindow { .. }) || report.checks().iter().any(|(_, c)| c.is_fail()) {
        return Ok(unknown(format!("trunc ({})", resolved.trunc), Some(tail), None));
    }
    let kernel = match kernel_up_to_degree_capped(&spec, resolved.dmax, resolved.trunc, budgets.monomial_cap) {
        Ok(k) => k,
        Err(Error::DimensionCap { needed, cap }) => {
            return Ok(unknown(format!("monomial cap ({needed} > {cap})"), Some(tail), None))
        }
        Err(e) => return Err(e),
    };
    let dim = Some(kernel.basis.len());
    let Some(g) = kernel.basis.iter().find(|b| !b.is_constant()) else {
        return Ok(unknown(format!("dmax ({})", resolved.dmax), Some(tail), dim));
    };
    let mut lifts = vec![lift_symmetric(g)];
    if lift_canonical(g) != lifts[0] {
        lifts.push(lift_canonical(g));
    }
    for lift in lifts {
        let inner = extendable_pipeline(std::slice::from_ref(&lift), field, budgets)?.verdict;
        let Evidence::Certificate(certificate) = inner.evidence else {
            continue;
        };
        let gm = lift.reduce(field);
        let budget = degree(&reduced).max(resolved.dmax);
        if let Membership::Expressions(mut e) =
            subalgebra_membership(std::slice::from_ref(&reduced), &[gm], budget, budgets.monomial_cap)?
        {
            let expression = e.remove(0);
            return ensure_verified(verdict(
                Answer::Yes,
                Evidence::Univariate { variable: lift, certificate, expression },
            ));
        }
    }
    Ok(unknown("kernel variable search".to_string(), Some(tail), dim))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_int, parse_mod, var_names};
    use crate::higher_deriv::fixes_polynomial;

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
    fn sym(s: &str, p: u64) -> ModPolynomial {
        parse_mod(s, &var_names("F,S"), f(p)).unwrap()
    }

    #[test]
    fn local_slices() {
        let spec = HigherDerivationSpec::canonical(&[int("x - y^3")], f(3), 8).unwrap();
        let s = find_local_slice(&spec, &[md("x", 3), md("y", 3)]).unwrap().unwrap();
        assert_eq!((s.s, s.tdeg, s.leading, s.is_slice), (md("y", 3), 1, md("1", 3), true));

        let spec = HigherDerivationSpec::canonical(&[int("y + x^2")], f(2), 8).unwrap();
        let s = find_local_slice(&spec, &[md("x", 2), md("y", 2)]).unwrap().unwrap();
        assert_eq!((s.s, s.tdeg, s.leading), (md("x", 2), 1, md("1", 2)));

        let id = HigherDerivationSpec::identity(f(3), 2, 4);
        assert_eq!(find_local_slice(&id, &[md("x", 3), md("y", 3)]).unwrap(), None);
    }

    #[test]
    fn membership_examples() {
        let targets = [md("x", 3), md("y", 3)];
        let got = subalgebra_membership(&targets, &[md("x - y^3", 3), md("y", 3)], 3, 1000).unwrap();
        assert_eq!(got, Membership::Expressions(vec![sym("F + S^3", 3), sym("S", 3)]));

        let got = subalgebra_membership(&[md("y", 2)], &[md("y + x^2", 2), md("x", 2)], 2, 1000).unwrap();
        assert_eq!(got, Membership::Expressions(vec![sym("F + S^2", 2)]));

        let got = subalgebra_membership(&[md("x", 3)], &[md("x*y", 3), md("y", 3)], 6, 1000).unwrap();
        assert_eq!(got, Membership::NotInSpan { target: 0 });
    }

    #[test]
    fn retraction_examples() {
        let spec = HigherDerivationSpec::canonical(&[int("x - y^3")], f(3), 8).unwrap();
        let s = find_local_slice(&spec, &[md("y", 3)]).unwrap().unwrap();
        assert_eq!(dixmier_retract(&spec, &s).unwrap(), vec![md("x - y^3", 3), md("0", 3)]);

        let spec = HigherDerivationSpec::canonical(&[int("y + x^2")], f(2), 8).unwrap();
        let s = find_local_slice(&spec, &[md("x", 2)]).unwrap().unwrap();
        assert_eq!(dixmier_retract(&spec, &s).unwrap(), vec![md("0", 2), md("y + x^2", 2)]);

        let translation = HigherDerivationSpec::exp_of(CharZeroDerivation::partial(1, 0), f(5), 4).unwrap();
        let x = ModPolynomial::var(f(5), 1, 0);
        let s = find_local_slice(&translation, &[x]).unwrap().unwrap();
        let r = dixmier_retract(&translation, &s).unwrap();
        assert!(r[0].is_zero());
        assert!(fixes_polynomial(&translation, &r[0]).unwrap().passed());

        let not_slice = SliceCandidate { tdeg: 3, ..s };
        assert!(matches!(dixmier_retract(&translation, &not_slice), Err(Error::Precondition(_))));
    }

    #[test]
    fn independence_examples() {
        match algebraic_independence(&[md("x - y^3", 3)], 4).unwrap() {
            Independence::Independent { columns, minor } => {
                assert_eq!(columns, vec![0]);
                assert_eq!(minor, md("1", 3));
            }
            other => panic!("{other:?}"),
        }
        match algebraic_independence(&[md("2", 3)], 4).unwrap() {
            Independence::Dependent { relation } => {
                assert_eq!(relation.total_degree(), Some(1));
                assert!(relation.substitute(&[md("2", 3)]).unwrap().is_zero());
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            algebraic_independence(&[md("x^3", 3)], 4).unwrap(),
            Independence::Inconclusive { max_degree: 4 }
        );
    }

    #[test]
    fn conjugation_examples() {
        let id = [int("x"), int("y")];
        let sigma = [int("x"), int("y + x")];
        let sigma_inv = [int("x"), int("y - x")];
        assert_eq!(conjugation_check(&[int("x - y^3")], &sigma, &sigma_inv, f(3), 6).unwrap(), Conjugation::Pass { trunc: 6 });
        assert_eq!(conjugation_check(&[int("x - y^3")], &id, &id, f(3), 6).unwrap(), Conjugation::Pass { trunc: 6 });
        let sigma = [int("x + y"), int("y")];
        let sigma_inv = [int("x - y"), int("y")];
        assert_eq!(conjugation_check(&[int("y + x^2")], &sigma, &sigma_inv, f(2), 4).unwrap(), Conjugation::Pass { trunc: 4 });
        assert!(matches!(
            conjugation_check(&[int("x")], &sigma, &sigma, f(2), 4),
            Err(Error::NotAutomorphism(_))
        ));
    }

    #[test]
    fn extendable_verdicts() {
        let b = Budgets::default();
        let v = decide_extendable(&[int("x - y^3")], f(3), &b).unwrap();
        assert_eq!(v.answer, Answer::Yes);
        let Evidence::Certificate(c) = &v.evidence else { panic!() };
        assert_eq!(c.slice, md("y", 3));
        assert_eq!(c.lines(&xy()), vec!["x = F + S^3", "y = S"]);

        let v = decide_extendable(&[int("x*y")], f(3), &b).unwrap();
        assert_eq!(v.answer, Answer::No);
        let Evidence::Witness(Witness::Definedness(w)) = &v.evidence else { panic!() };
        assert_eq!(w.ell, 3);

        let v = decide_extendable(&[int("x^2")], f(3), &b).unwrap();
        assert_eq!(v.answer, Answer::Unknown);
        assert!(v.verify().unwrap());
    }

    #[test]
    fn variable_verdicts() {
        let b = Budgets::default();
        let v = decide_variable(&int("x - y^3"), f(3), &b).unwrap();
        assert_eq!(v.answer, Answer::Yes);
        assert_eq!(v.kernel_in_powers, Some(true));
        assert_eq!(decide_variable(&int("x*y"), f(3), &b).unwrap().answer, Answer::No);
        let v = decide_variable(&int("y + x^2"), f(2), &b).unwrap();
        let Evidence::Certificate(c) = &v.evidence else { panic!() };
        assert_eq!(c.expressions[1], sym("F + S^2", 2));
    }

    #[test]
    fn univariate_verdicts() {
        let b = Budgets::default();
        let v = decide_univariate(&int("(x - y^3)^2 + (x - y^3)"), f(3), &b).unwrap();
        assert_eq!(v.answer, Answer::Yes);
        let Evidence::Univariate { variable, expression, .. } = &v.evidence else { panic!() };
        assert_eq!(variable.reduce(f(3)).monic(), md("x - y^3", 3).monic());
        assert_eq!(expression.substitute(&[variable.reduce(f(3))]).unwrap(), md("(x - y^3)^2 + (x - y^3)", 3));

        let v = decide_univariate(&int("x*y"), f(3), &b).unwrap();
        assert_eq!(v.answer, Answer::No);
        assert!(matches!(decide_univariate(&int("x^3"), f(3), &b), Err(Error::Precondition(_))));
    }

    #[test]
    fn candidates_are_seeded() {
        let a = default_candidates(f(3), 2, 64, 7);
        assert_eq!(a.len(), 64);
        assert_eq!(a, default_candidates(f(3), 2, 64, 7));
        assert_eq!(&a[..2], &[md("y", 3), md("x", 3)]);
    }
}
