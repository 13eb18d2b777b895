//! Monomials in graded-lex order and homogeneous multivariate polynomials.

use crate::field::{FieldSpec, Scalar};
use std::collections::HashMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("cannot parse polynomial near `{0}`")]
    Parse(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("zero polynomial not allowed here")]
    Zero,
}

/// All monomials of a fixed degree in `nvars` variables, listed in graded-lex
/// order (x0 > x1 > ...), with a reverse index. The order is fixed once so
/// pivot complements are reproducible across runs.
#[derive(Debug)]
pub struct MonomialBasis {
    pub nvars: usize,
    pub degree: usize,
    pub list: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
}

impl MonomialBasis {
    pub fn new(nvars: usize, degree: usize) -> Arc<MonomialBasis> {
        let mut list = Vec::new();
        let mut cur = vec![0u8; nvars];
        gen_monomials(&mut cur, 0, degree as u8, &mut list);
        let index = list
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        Arc::new(MonomialBasis {
            nvars,
            degree,
            list,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    pub fn index_of(&self, mono: &[u8]) -> Option<usize> {
        self.index.get(mono).copied()
    }
}

fn gen_monomials(cur: &mut Vec<u8>, var: usize, remaining: u8, out: &mut Vec<Vec<u8>>) {
    if var + 1 == cur.len() {
        cur[var] = remaining;
        out.push(cur.clone());
        cur[var] = 0;
        return;
    }
    for e in (0..=remaining).rev() {
        cur[var] = e;
        gen_monomials(cur, var + 1, remaining - e, out);
    }
    cur[var] = 0;
}

/// A polynomial as a normalized term list: exponent vectors in descending
/// lex order, nonzero coefficients only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    pub nvars: usize,
    pub terms: Vec<(Vec<u8>, Scalar)>,
    pub field: FieldSpec,
}

impl Poly {
    pub fn new(nvars: usize, terms: Vec<(Vec<u8>, Scalar)>, field: FieldSpec) -> Poly {
        let mut map: HashMap<Vec<u8>, Scalar> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.len(), nvars, "exponent vector length");
            match map.get_mut(&m) {
                Some(cur) => *cur = field.add(cur, &c),
                None => {
                    map.insert(m, c);
                }
            }
        }
        let mut terms: Vec<(Vec<u8>, Scalar)> = map
            .into_iter()
            .filter(|(_, c)| !field.is_zero(c))
            .collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        Poly {
            nvars,
            terms,
            field,
        }
    }

    pub fn zero(nvars: usize, field: FieldSpec) -> Poly {
        Poly {
            nvars,
            terms: Vec::new(),
            field,
        }
    }

    pub fn variable(nvars: usize, i: usize, field: FieldSpec) -> Poly {
        let mut m = vec![0u8; nvars];
        m[i] = 1;
        Poly::new(nvars, vec![(m, field.one())], field)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree of the (first) term; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms
            .first()
            .map(|(m, _)| m.iter().map(|&e| e as usize).sum())
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.degree() {
            None => true,
            Some(d) => self
                .terms
                .iter()
                .all(|(m, _)| m.iter().map(|&e| e as usize).sum::<usize>() == d),
        }
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        let mut terms = self.terms.clone();
        terms.extend(rhs.terms.iter().cloned());
        Poly::new(self.nvars, terms, self.field)
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        let mut terms = self.terms.clone();
        terms.extend(
            rhs.terms
                .iter()
                .map(|(m, c)| (m.clone(), self.field.neg(c))),
        );
        Poly::new(self.nvars, terms, self.field)
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        Poly::new(
            self.nvars,
            self.terms
                .iter()
                .map(|(m, v)| (m.clone(), self.field.mul(v, c)))
                .collect(),
            self.field,
        )
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m: Vec<u8> = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                terms.push((m, self.field.mul(ca, cb)));
            }
        }
        Poly::new(self.nvars, terms, self.field)
    }

    pub fn mul_monomial(&self, mono: &[u8]) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    (
                        m.iter().zip(mono).map(|(a, b)| a + b).collect(),
                        c.clone(),
                    )
                })
                .collect(),
            field: self.field,
        }
    }

    /// Substitutes `replacement` for variable `var` (which must be linear in
    /// the sense that the replacement is any polynomial) and drops that
    /// variable, renumbering the remaining ones. Used for hyperplane sections.
    pub fn eliminate_variable(&self, var: usize, replacement: &Poly) -> Poly {
        let nv = self.nvars - 1;
        let mut acc = Poly::zero(nv, self.field);
        for (m, c) in &self.terms {
            let mut base: Vec<u8> = Vec::with_capacity(nv);
            for (i, e) in m.iter().enumerate() {
                if i != var {
                    base.push(*e);
                }
            }
            let mut term = Poly::new(nv, vec![(base, c.clone())], self.field);
            for _ in 0..m[var] {
                term = term.mul(replacement);
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// Renders the polynomial using the given variable names; inverse of
    /// `parse`.
    pub fn render(&self, vars: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let cs = self.field.scalar_to_string(c);
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, cs),
            };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if mag != "1" || m.iter().all(|&e| e == 0) {
                factors.push(mag);
            }
            for (v, &e) in vars.iter().zip(m.iter()) {
                match e {
                    0 => {}
                    1 => factors.push(v.clone()),
                    _ => factors.push(format!("{v}^{e}")),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }

    /// Parses expressions like `x0*x2 - x1^2` or `3*x0^2 + 1/2*x1*x2`.
    /// Terms are separated by top-level `+`/`-`; factors by `*`.
    pub fn parse(input: &str, vars: &[String], field: FieldSpec) -> Result<Poly, PolyError> {
        let nvars = vars.len();
        let var_index: HashMap<&str, usize> = vars
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        let mut terms: Vec<(Vec<u8>, Scalar)> = Vec::new();
        let mut rest = input.trim();
        let mut sign_neg = false;
        if let Some(r) = rest.strip_prefix('-') {
            sign_neg = true;
            rest = r.trim_start();
        } else if let Some(r) = rest.strip_prefix('+') {
            rest = r.trim_start();
        }
        if rest.is_empty() {
            return Err(PolyError::Parse(input.to_string()));
        }
        while !rest.is_empty() {
            let end = rest
                .char_indices()
                .find(|&(_, ch)| ch == '+' || ch == '-')
                .map(|(i, _)| i)
                .unwrap_or(rest.len());
            let (chunk, tail) = rest.split_at(end);
            let chunk = chunk.trim();
            if chunk.is_empty() {
                return Err(PolyError::Parse(rest.to_string()));
            }
            let mut coeff = field.one();
            let mut mono = vec![0u8; nvars];
            for factor in chunk.split('*') {
                let factor = factor.trim();
                if factor.is_empty() {
                    return Err(PolyError::Parse(chunk.to_string()));
                }
                let (base, exp) = match factor.split_once('^') {
                    Some((b, e)) => {
                        let e: u8 = e
                            .trim()
                            .parse()
                            .map_err(|_| PolyError::Parse(factor.to_string()))?;
                        (b.trim(), e)
                    }
                    None => (factor, 1),
                };
                if let Some(&vi) = var_index.get(base) {
                    mono[vi] += exp;
                } else if base
                    .chars()
                    .next()
                    .is_some_and(|c| c.is_ascii_digit() || c == '.')
                {
                    if exp != 1 {
                        return Err(PolyError::Parse(factor.to_string()));
                    }
                    let c = field
                        .scalar_from_str(base)
                        .map_err(|_| PolyError::Parse(base.to_string()))?;
                    coeff = field.mul(&coeff, &c);
                } else {
                    return Err(PolyError::UnknownVariable(base.to_string()));
                }
            }
            if sign_neg {
                coeff = field.neg(&coeff);
            }
            terms.push((mono, coeff));
            match tail.chars().next() {
                None => break,
                Some(op) => {
                    sign_neg = op == '-';
                    rest = tail[1..].trim_start();
                    if rest.is_empty() {
                        return Err(PolyError::Parse(input.to_string()));
                    }
                }
            }
        }
        Ok(Poly::new(nvars, terms, field))
    }
}

/// Default variable names x0..x{n-1}.
pub fn default_variables(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}
