//! Command-line front end.
//!
//! [`run_command`] takes the full argument vector and returns the exit code
//! together with everything that would be written to stdout and stderr, so
//! the binary is a thin wrapper and tests can call it directly.
//!
//! Exit codes: 0 yes/pass, 1 no/fail, 2 unknown, 3 usage or input errors.

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::decide::{
    conjugation_check, decide_extendable, decide_univariate, decide_variable, Answer, Budgets, Conjugation, Verdict,
};
use crate::error::{Error, Result};
use crate::expr::{format_polynomial, format_series, parse_int, var_names};
use crate::higher_deriv::{
    canonical_exp_map, is_iterative_up_to, is_jacobian_type, is_locally_finite_up_to, kernel_up_to_degree,
    load_spec_json, verify_axioms, Check, DefinednessFailure, ExpOutcome, HigherDerivationSpec, Iterativity,
    LocalFiniteness, DEFAULT_TRUNC,
};
use crate::jacobian::{delta_tilde, legendre_e, m_value};
use crate::poly::{IntPolynomial, Integers, ModPolynomial, Monomial, PrimeField};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "jacobian-hd", version, about = "Higher derivations of Jacobian type over F_p")]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

/// Settings shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Prime characteristic.
    #[arg(long, global = true)]
    pub p: Option<u64>,
    /// Comma separated variable names.
    #[arg(long, global = true, default_value = "x,y")]
    pub vars: String,
    /// Truncation order T of all t-series.
    #[arg(long, global = true, default_value_t = DEFAULT_TRUNC)]
    pub trunc: usize,
    /// Degree budget for kernels, slices and membership.
    #[arg(long, global = true)]
    pub dmax: Option<u32>,
    /// Number of slice candidates.
    #[arg(long, global = true, default_value_t = crate::decide::DEFAULT_CANDIDATES)]
    pub candidates: usize,
    /// Seed for the random slice candidates.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generator images of Exp(t delta_tilde(F)), or where it is undefined.
    Exp { polys: Vec<String> },
    /// Integer brackets [d]^l(x_k) with the factorial split of l!.
    Table { polys: Vec<String> },
    /// Whether the tuple extends to a coordinate system.
    CheckExtendable { polys: Vec<String> },
    /// Whether f is a variable of k[x, y].
    CheckVariable { poly: String },
    /// Whether f lies in k[g] for a variable g.
    CheckUnivariate { poly: String },
    /// Kernel of the canonical family up to degree --dmax.
    Kernel { polys: Vec<String> },
    /// Checks a higher derivation given as a JSON document.
    VerifyHd { file: String, polys: Vec<String> },
    /// Compares Exp(t sigma^-1 d sigma) with sigma^-1 Exp(td) sigma.
    Conjugate {
        polys: Vec<String>,
        /// Components of sigma, in variable order.
        #[arg(long = "sigma", required = true)]
        sigma: Vec<String>,
        /// Components of the inverse of sigma.
        #[arg(long = "sigma-inv", required = true)]
        sigma_inv: Vec<String>,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CommandOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    code: i32,
    text: String,
    json: Value,
}

impl RunConfig {
    fn field(&self) -> Result<PrimeField> {
        let p = self.p.ok_or_else(|| Error::Precondition("--p is required".into()))?;
        PrimeField::new(p)
    }

    fn names(&self) -> Vec<String> {
        var_names(&self.vars)
    }

    fn budgets(&self) -> Budgets {
        Budgets { trunc: self.trunc, dmax: self.dmax, candidates: self.candidates, seed: self.seed, ..Budgets::default() }
    }

    fn parse(&self, texts: &[String]) -> Result<Vec<IntPolynomial>> {
        let names = self.names();
        texts.iter().map(|t| Ok(parse_int(t, &names)?)).collect()
    }
}

/// Runs one invocation. `argv[0]` is the program name.
pub fn run_command<I, T>(argv: I) -> CommandOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                CommandOutput { code: EXIT_USAGE, stdout: String::new(), stderr: rendered }
            } else {
                CommandOutput { code: EXIT_PASS, stdout: rendered, stderr: String::new() }
            };
        }
    };
    match dispatch(&cli) {
        Ok(report) => {
            let stdout = if cli.config.json {
                serde_json::to_string_pretty(&report.json).expect("serializable") + "\n"
            } else {
                report.text
            };
            CommandOutput { code: report.code, stdout, stderr: String::new() }
        }
        Err(e) => CommandOutput { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn dispatch(cli: &Cli) -> Result<Report> {
    let cfg = &cli.config;
    if cfg.trunc == 0 {
        return Err(Error::Precondition("--trunc must be at least 1".into()));
    }
    match &cli.command {
        Command::Exp { polys } => exp_report(cfg, &cfg.parse(polys)?),
        Command::Table { polys } => table_report(cfg, &cfg.parse(polys)?),
        Command::CheckExtendable { polys } => {
            let tuple = cfg.parse(polys)?;
            verdict_report(cfg, decide_extendable(&tuple, cfg.field()?, &cfg.budgets())?)
        }
        Command::CheckVariable { poly } => {
            let f = cfg.parse(std::slice::from_ref(poly))?.remove(0);
            verdict_report(cfg, decide_variable(&f, cfg.field()?, &cfg.budgets())?)
        }
        Command::CheckUnivariate { poly } => {
            let f = cfg.parse(std::slice::from_ref(poly))?.remove(0);
            verdict_report(cfg, decide_univariate(&f, cfg.field()?, &cfg.budgets())?)
        }
        Command::Kernel { polys } => kernel_report(cfg, &cfg.parse(polys)?),
        Command::VerifyHd { file, polys } => verify_report(file, polys),
        Command::Conjugate { polys, sigma, sigma_inv } => {
            conjugate_report(cfg, &cfg.parse(polys)?, &cfg.parse(sigma)?, &cfg.parse(sigma_inv)?)
        }
    }
}

fn answer_code(a: Answer) -> i32 {
    match a {
        Answer::Yes => EXIT_PASS,
        Answer::No => EXIT_FAIL,
        Answer::Unknown => EXIT_UNKNOWN,
    }
}

fn verdict_report(cfg: &RunConfig, verdict: Verdict) -> Result<Report> {
    let names = cfg.names();
    let mut json = verdict.to_json(&names);
    json["input"] = json!(verdict.tuple.iter().map(|f| format_polynomial(f, &names)).collect::<Vec<_>>());
    Ok(Report { code: answer_code(verdict.answer), text: verdict.render_text(&names), json })
}

fn failure_text(f: &DefinednessFailure, names: &[String]) -> String {
    let mono = IntPolynomial::monomial(Integers, f.monomial.clone(), 1.into());
    format!(
        "undefined: l = {} at {}: coefficient {} of {} is not divisible by {}^{}\n",
        f.ell,
        names.get(f.generator).map_or("?", String::as_str),
        f.coefficient,
        format_polynomial(&mono, names),
        f.p,
        f.required
    )
}

fn failure_json(f: &DefinednessFailure, names: &[String]) -> Value {
    let mono = IntPolynomial::monomial(Integers, f.monomial.clone(), 1.into());
    json!({
        "ell": f.ell,
        "generator": names.get(f.generator),
        "monomial": format_polynomial(&mono, names),
        "coefficient": f.coefficient.to_string(),
        "p": f.p,
        "required_valuation": f.required,
    })
}

fn exp_report(cfg: &RunConfig, tuple: &[IntPolynomial]) -> Result<Report> {
    let field = cfg.field()?;
    let names = cfg.names();
    match canonical_exp_map(tuple, field, cfg.trunc)? {
        ExpOutcome::Defined(images) => {
            let mut text = String::new();
            let mut map = serde_json::Map::new();
            for (k, img) in images.iter().enumerate() {
                text += &format!("phi({}) = {}\n", names[k], format_series(img, &names));
                map.insert(
                    names[k].clone(),
                    json!({
                        "coefficients": img.coeffs().iter().map(|c| format_polynomial(c, &names)).collect::<Vec<_>>(),
                        "exact": img.is_exact(),
                    }),
                );
            }
            let json = json!({ "defined": true, "p": field.modulus(), "trunc": cfg.trunc, "images": map });
            Ok(Report { code: EXIT_PASS, text, json })
        }
        ExpOutcome::Undefined(f) => Ok(Report {
            code: EXIT_FAIL,
            text: failure_text(&f, &names),
            json: json!({ "defined": false, "p": field.modulus(), "trunc": cfg.trunc, "failure": failure_json(&f, &names) }),
        }),
    }
}

fn table_report(cfg: &RunConfig, tuple: &[IntPolynomial]) -> Result<Report> {
    let field = cfg.field()?;
    let p = field.modulus();
    let names = cfg.names();
    let d = delta_tilde(tuple)?;
    let n = d.arity();
    let mut text = String::new();
    let mut generators = Vec::new();
    let mut code = EXIT_PASS;
    for k in 0..n {
        let mut rows: Vec<[String; 4]> = Vec::new();
        let mut json_rows = Vec::new();
        let mut cur = IntPolynomial::var(Integers, n, k);
        let mut splits = crate::jacobian::FactorialSplits::new(field);
        let mut tail_from = None;
        for ell in 1..=cfg.trunc {
            let split = splits.next().expect("unbounded");
            cur = d.apply(&cur)?;
            if cur.is_zero() {
                tail_from = Some(ell);
                break;
            }
            let e = legendre_e(ell as u64, p);
            let factorial = format!("{p}^{e}*{}", m_value(ell as u64, p));
            let value = match cur.divide_exact_by_p_power(p, e) {
                Ok(q) => Some(q.reduce(field).scale(&split.m_inv)),
                Err(_) => None,
            };
            let value_text = value.as_ref().map_or("undefined".to_string(), |v| format_polynomial(v, &names));
            rows.push([ell.to_string(), factorial, format_polynomial(&cur, &names), value_text.clone()]);
            json_rows.push(json!({
                "ell": ell,
                "p_power": e,
                "m": m_value(ell as u64, p).to_string(),
                "bracket": format_polynomial(&cur, &names),
                "value": value.as_ref().map(|v| format_polynomial(v, &names)),
            }));
            if value.is_none() {
                code = EXIT_FAIL;
                break;
            }
        }
        if let Some(ell) = tail_from {
            rows.push([format!(">={ell}"), "-".into(), "0".into(), "0".into()]);
        }
        text += &format!("generator {}\n", names[k]);
        text += &render_table(&["l", "l! = p^e*m", &format!("[d]^l({})", names[k]), "value"], &rows);
        generators.push(json!({ "generator": names[k], "rows": json_rows, "zero_from": tail_from }));
    }
    Ok(Report { code, text, json: json!({ "p": p, "generators": generators }) })
}

fn render_table(header: &[&str; 4], rows: &[[String; 4]]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    for row in rows {
        out += &line(row.iter().map(String::as_str).collect());
    }
    out
}

fn kernel_report(cfg: &RunConfig, tuple: &[IntPolynomial]) -> Result<Report> {
    let field = cfg.field()?;
    let names = cfg.names();
    let spec = match HigherDerivationSpec::canonical(tuple, field, cfg.trunc) {
        Ok(spec) => spec,
        Err(Error::Undefined(f)) => {
            return Ok(Report {
                code: EXIT_FAIL,
                text: failure_text(&f, &names),
                json: json!({ "defined": false, "failure": failure_json(&f, &names) }),
            })
        }
        Err(e) => return Err(e),
    };
    let dmax = cfg.budgets().resolve(tuple).dmax;
    let kernel = kernel_up_to_degree(&spec, dmax, cfg.trunc)?;
    let basis: Vec<String> = kernel.basis.iter().map(|b| format_polynomial(b, &names)).collect();
    let mut text = format!("kernel up to degree {dmax}, verified through t^{}: dimension {}\n", cfg.trunc, basis.len());
    for b in &basis {
        text += &format!("  {b}\n");
    }
    let json = json!({ "dmax": dmax, "trunc": cfg.trunc, "dimension": basis.len(), "basis": basis });
    Ok(Report { code: EXIT_PASS, text, json })
}

fn check_text(c: &Check) -> (String, Value) {
    match c {
        Check::Pass => ("pass".into(), json!({ "status": "pass" })),
        Check::Fail(w) => (format!("fail ({w})"), json!({ "status": "fail", "detail": w })),
        Check::Inconclusive(w) => (format!("inconclusive ({w})"), json!({ "status": "inconclusive", "detail": w })),
    }
}

fn finiteness_text(l: &LocalFiniteness) -> String {
    match l {
        LocalFiniteness::ExactPolynomial { degree } => format!("polynomial in t of degree {degree}"),
        LocalFiniteness::ZeroTailWindow { degree, trunc } => {
            format!("t-degree {degree}, zero through t^{trunc}, not proven beyond")
        }
        LocalFiniteness::NotWithinWindow { trunc } => format!("nonzero at t^{trunc}, not finite within the window"),
    }
}

/// Products of generator pairs and of each pinned monomial split at a
/// variable, so any inconsistent pin meets the Leibniz check.
fn axiom_samples(spec: &HigherDerivationSpec) -> Vec<(ModPolynomial, ModPolynomial)> {
    let (field, n) = (spec.field(), spec.arity());
    let var = |i| ModPolynomial::var(field, n, i);
    let mut samples = Vec::new();
    for i in 0..n {
        for j in i..n {
            samples.push((var(i), var(j)));
        }
    }
    if let crate::higher_deriv::SpecKind::Explicit { overrides } = spec.kind() {
        for m in overrides.keys() {
            for i in 0..n {
                if let Some(rest) = m.lower(i) {
                    samples.push((var(i), ModPolynomial::monomial(field, rest, 1)));
                }
            }
        }
    }
    let sum = (0..n).fold(ModPolynomial::one(field, n), |acc, i| &acc + &var(i));
    let square = ModPolynomial::monomial(field, Monomial::new(vec![2; n]), 1);
    samples.push((sum, square));
    samples
}

fn verify_report(file: &str, polys: &[String]) -> Result<Report> {
    let text =
        std::fs::read_to_string(file).map_err(|e| Error::SpecDocument(format!("cannot read `{file}`: {e}")))?;
    let loaded = load_spec_json(&text)?;
    let (spec, names) = (&loaded.spec, &loaded.vars);
    let axioms = verify_axioms(spec, &axiom_samples(spec))?;
    let finiteness = is_locally_finite_up_to(spec);
    let iterativity = is_iterative_up_to(spec)?;

    let mut out = String::new();
    let mut passed = axioms.passed();
    let axioms_text = if axioms.passed() {
        format!("pass through t^{}", axioms.trunc)
    } else if let Some(l) = &axioms.leibniz {
        let mono = ModPolynomial::monomial(spec.field(), l.monomial.clone(), 1);
        format!(
            "fail (Leibniz rule breaks at t^{} on sample {}, monomial {})",
            l.order,
            l.pair + 1,
            format_polynomial(&mono, names)
        )
    } else {
        let moved: Vec<String> = axioms.identity_failures.iter().map(|g| format_polynomial(g, names)).collect();
        format!("fail (D_0 moves {})", moved.join(", "))
    };
    out += &format!("axioms: {axioms_text}\n");
    out += &format!("locally finite: {}\n", finiteness_text(&finiteness));
    let iter_text = match iterativity {
        Iterativity::Pass { trunc } => format!("pass through total order {trunc}"),
        Iterativity::CounterexampleAt { i, j, generator } => {
            format!("fail (D_{i} D_{j} != C({}, {j}) D_{} at {})", i + j, i + j, names[generator])
        }
    };
    out += &format!("iterative: {iter_text}\n");

    let mut json = json!({
        "axioms": { "pass": axioms.passed(), "detail": axioms_text },
        "locally_finite": finiteness_text(&finiteness),
        "iterative": iter_text,
    });
    if !polys.is_empty() {
        let tuple: Vec<IntPolynomial> =
            polys.iter().map(|t| Ok(parse_int(t, names)?)).collect::<Result<_>>()?;
        let report = is_jacobian_type(spec, &tuple)?;
        let mut checks = serde_json::Map::new();
        for (name, check) in report.checks() {
            let (t, j) = check_text(check);
            out += &format!("jacobian type {name}: {t}\n");
            checks.insert(name.to_string(), j);
        }
        passed &= report.passed();
        json["jacobian_type"] = Value::Object(checks);
    }
    json["pass"] = json!(passed);
    out += &format!("result: {}\n", if passed { "pass" } else { "fail" });
    Ok(Report { code: if passed { EXIT_PASS } else { EXIT_FAIL }, text: out, json })
}

fn conjugate_report(
    cfg: &RunConfig,
    tuple: &[IntPolynomial],
    sigma: &[IntPolynomial],
    sigma_inv: &[IntPolynomial],
) -> Result<Report> {
    let field = cfg.field()?;
    let names = cfg.names();
    let outcome = conjugation_check(tuple, sigma, sigma_inv, field, cfg.trunc)?;
    let (code, text, json) = match outcome {
        Conjugation::Pass { trunc } => {
            (EXIT_PASS, format!("pass through t^{trunc}\n"), json!({ "pass": true, "trunc": trunc }))
        }
        Conjugation::Mismatch { generator, order } => (
            EXIT_FAIL,
            format!("mismatch at {} in t^{order}\n", names[generator]),
            json!({ "pass": false, "generator": names[generator], "order": order }),
        ),
    };
    Ok(Report { code, text, json })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> CommandOutput {
        run_command(std::iter::once("jacobian-hd").chain(args.iter().copied()))
    }

    #[test]
    fn table_for_x_minus_y_cubed() {
        let out = run(&["table", "--p", "3", "--vars", "x,y", "x - y^3"]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let expected = "\
generator x
l    l! = p^e*m  [d]^l(x)  value
1    3^0*1       3*y^2     0
2    3^0*2       6*y       0
3    3^1*2       6         1
>=4  -           0         0
";
        assert!(out.stdout.starts_with(expected), "{}", out.stdout);
    }

    #[test]
    fn check_variable_certificate() {
        let out = run(&["check-variable", "--p", "3", "--vars", "x,y", "x - y^3"]);
        assert_eq!(out.code, 0);
        assert!(out.stdout.contains("x = F + S^3\ny = S\n"), "{}", out.stdout);
    }

    #[test]
    fn check_univariate_no() {
        let out = run(&["check-univariate", "--p", "3", "--vars", "x,y", "x*y"]);
        assert_eq!(out.code, 1);
        assert!(out.stdout.contains("l = 3"), "{}", out.stdout);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run(&["exp", "x - y^3"]).code, 3);
        assert_eq!(run(&["exp", "--p", "4", "x"]).code, 3);
        let out = run(&["exp", "--p", "3", "x - z"]);
        assert_eq!(out.code, 3);
        assert!(out.stderr.contains("unknown variable"));
        assert_eq!(run(&["frobnicate"]).code, 3);
    }

    #[test]
    fn exp_output() {
        let out = run(&["exp", "--p", "3", "--trunc", "8", "x - y^3"]);
        assert_eq!(out.stdout, "phi(x) = x + t^3\nphi(y) = y + t\n");
        let out = run(&["exp", "--p", "3", "x*y"]);
        assert_eq!(out.code, 1);
    }
}
