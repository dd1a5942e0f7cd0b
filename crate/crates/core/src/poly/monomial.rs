use std::cmp::Ordering;
use std::fmt;

/// Exponent vector of a monomial `x_1^e_1 * ... * x_n^e_n`.
///
/// Ordered graded-lexicographically with `x_1 > x_2 > ... > x_n`: total
/// degree first, ties broken by the first differing exponent.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(arity: usize) -> Self {
        Monomial(vec![0; arity])
    }

    pub fn var(arity: usize, index: usize) -> Self {
        let mut exps = vec![0; arity];
        exps[index] = 1;
        Monomial(exps)
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn exp(&self, index: usize) -> u32 {
        self.0[index]
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| u64::from(e)).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.arity(), other.arity());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Lowers the exponent of `x_index` by one. `None` if it is already zero.
    pub fn lower(&self, index: usize) -> Option<Monomial> {
        let e = *self.0.get(index)?;
        if e == 0 {
            return None;
        }
        let mut exps = self.0.clone();
        exps[index] = e - 1;
        Some(Monomial(exps))
    }

    /// Same exponents with the variables permuted: variable `i` becomes `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Monomial {
        let mut exps = vec![0; self.0.len()];
        for (i, &e) in self.0.iter().enumerate() {
            exps[perm[i]] = e;
        }
        Monomial(exps)
    }

    /// All monomials of total degree at most `max_degree`, in ascending graded-lex order.
    pub fn all_up_to_degree(arity: usize, max_degree: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        for deg in 0..=max_degree {
            let mut level = Vec::new();
            let mut buf = vec![0; arity];
            compositions(deg, 0, &mut buf, &mut level);
            level.sort();
            out.extend(level);
        }
        out
    }
}

fn compositions(remaining: u32, index: usize, buf: &mut Vec<u32>, out: &mut Vec<Monomial>) {
    if buf.is_empty() {
        if remaining == 0 {
            out.push(Monomial(Vec::new()));
        }
        return;
    }
    if index == buf.len() - 1 {
        buf[index] = remaining;
        out.push(Monomial(buf.clone()));
        return;
    }
    for e in 0..=remaining {
        buf[index] = e;
        compositions(remaining - e, index + 1, buf, out);
    }
    buf[index] = 0;
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "x{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}
