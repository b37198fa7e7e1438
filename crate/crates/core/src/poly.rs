//! Sparse homogeneous polynomials with exact coefficients.
//!
//! Monomials are ordered graded-lexicographically with `x0 > x1 > ...`, and
//! every ordered output of the crate (term iteration, formatting, monomial
//! bases, complement bases) is taken greatest-first in this order.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::{self, ExactMatrix};
use crate::scalar::{Field, FieldError, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("syntax error at byte {position}: expected {expected}")]
    Syntax { position: usize, expected: String },
    #[error("inhomogeneous input: terms of degree {deg_a} and {deg_b}")]
    Inhomogeneous { deg_a: u32, deg_b: u32 },
    #[error("unknown variable {name}")]
    UnknownVariable { name: String },
    #[error("variable index {index} out of range for {nvars} variables")]
    VariableIndex { index: usize, nvars: usize },
    #[error("substitution matrix is singular")]
    SingularSubstitution,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Exponent vector of a monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(i: usize, nvars: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `<w, m>` for an integer weight vector.
    pub fn weight(&self, w: &[i64]) -> i64 {
        self.0.iter().zip(w).map(|(&e, &wi)| e as i64 * wi).sum()
    }

    pub fn is_square_free(&self) -> bool {
        self.0.iter().all(|&e| e <= 1)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
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
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "x{i}")?;
            if e >= 2 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// All monomials of total degree `degree` in `nvars` variables, greatest first.
pub fn monomial_basis(nvars: usize, degree: u32) -> Vec<Monomial> {
    fn rec(prefix: &mut Vec<u32>, left: u32, remaining_vars: usize, out: &mut Vec<Monomial>) {
        if remaining_vars == 1 {
            prefix.push(left);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            rec(prefix, left - e, remaining_vars - 1, out);
            prefix.pop();
        }
    }
    assert!(nvars > 0, "need at least one variable");
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(nvars), degree, nvars, &mut out);
    out
}

/// Lookup table from monomial to its position in [`monomial_basis`].
pub fn basis_index(basis: &[Monomial]) -> HashMap<Monomial, usize> {
    basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect()
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// A homogeneous polynomial. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    degree: u32,
    field: Field,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Polynomial {
    pub fn zero(nvars: usize, degree: u32, field: Field) -> Self {
        assert!(nvars > 0, "need at least one variable");
        Polynomial {
            nvars,
            degree,
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        nvars: usize,
        degree: u32,
        field: Field,
        terms: impl IntoIterator<Item = (Monomial, Scalar)>,
    ) -> Result<Self, PolyError> {
        let mut p = Polynomial::zero(nvars, degree, field);
        for (m, c) in terms {
            if m.nvars() != nvars {
                return Err(PolyError::Shape(format!(
                    "monomial with {} variables in a {nvars}-variable polynomial",
                    m.nvars()
                )));
            }
            if m.degree() != degree {
                return Err(PolyError::Inhomogeneous {
                    deg_a: degree,
                    deg_b: m.degree(),
                });
            }
            field.ensure_same(c.field())?;
            p.add_term(m, c);
        }
        Ok(p)
    }

    /// Integer-coefficient polynomial from `(exponents, coefficient)` pairs.
    pub fn from_int_terms(nvars: usize, field: Field, terms: &[(Vec<u32>, i64)]) -> Result<Self, PolyError> {
        let degree = terms.first().map(|(e, _)| e.iter().sum()).unwrap_or(0);
        Self::from_terms(
            nvars,
            degree,
            field,
            terms
                .iter()
                .map(|(e, c)| (Monomial::new(e.clone()), Scalar::from_i64(*c, field))),
        )
    }

    pub fn variable(i: usize, nvars: usize, field: Field) -> Self {
        let mut p = Polynomial::zero(nvars, 1, field);
        p.add_term(Monomial::var(i, nvars), Scalar::one(field));
        p
    }

    pub fn constant(c: Scalar, nvars: usize) -> Self {
        let mut p = Polynomial::zero(nvars, 0, c.field());
        p.add_term(Monomial::one(nvars), c);
        p
    }

    /// `sum_{i in vars} x_i^d`.
    pub fn fermat(nvars: usize, vars: impl IntoIterator<Item = usize>, degree: u32, field: Field) -> Self {
        let mut p = Polynomial::zero(nvars, degree, field);
        for i in vars {
            let mut e = vec![0; nvars];
            e[i] = degree;
            p.add_term(Monomial::new(e), Scalar::one(field));
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms, greatest monomial first.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> + ExactSizeIterator {
        self.terms.iter().rev()
    }

    pub fn support(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| Scalar::zero(self.field))
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    fn check_compatible(&self, other: &Polynomial) -> Result<(), PolyError> {
        self.field.ensure_same(other.field)?;
        if self.nvars != other.nvars {
            return Err(PolyError::Shape(format!(
                "{} vs {} variables",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_compatible(other)?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if self.degree != other.degree {
            return Err(PolyError::Inhomogeneous {
                deg_a: self.degree,
                deg_b: other.degree,
            });
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        self.map_coeffs(|c| -c)
    }

    pub fn scale(&self, s: &Scalar) -> Polynomial {
        if s.is_zero() {
            return Polynomial::zero(self.nvars, self.degree, self.field);
        }
        self.map_coeffs(|c| c * s)
    }

    fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            degree: self.degree,
            field: self.field,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), f(c))).collect(),
        }
    }

    /// Sparse term-by-term product with hash consolidation.
    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_compatible(other)?;
        let mut acc: HashMap<Monomial, Scalar> = HashMap::with_capacity(self.num_terms() * other.num_terms());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match acc.get_mut(&m) {
                    Some(e) => *e = &*e + &c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Ok(Polynomial {
            nvars: self.nvars,
            degree: self.degree + other.degree,
            field: self.field,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        })
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            degree: self.degree + m.degree(),
            field: self.field,
            terms: self.terms.iter().map(|(t, c)| (t.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::constant(Scalar::one(self.field), self.nvars);
        for _ in 0..e {
            acc = acc.mul(self).expect("same context");
        }
        acc
    }

    pub fn partial_derivative(&self, i: usize) -> Result<Polynomial, PolyError> {
        if i >= self.nvars {
            return Err(PolyError::VariableIndex {
                index: i,
                nvars: self.nvars,
            });
        }
        let mut out = Polynomial::zero(self.nvars, self.degree.saturating_sub(1), self.field);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[i] -= 1;
            out.add_term(Monomial(exps), c * &Scalar::from_i64(e as i64, self.field));
        }
        Ok(out)
    }

    pub fn gradient(&self) -> Vec<Polynomial> {
        (0..self.nvars)
            .map(|i| self.partial_derivative(i).expect("index in range"))
            .collect()
    }

    pub fn evaluate(&self, point: &[Scalar]) -> Result<Scalar, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::Shape(format!(
                "point of length {} for {} variables",
                point.len(),
                self.nvars
            )));
        }
        for c in point {
            self.field.ensure_same(c.field())?;
        }
        let mut acc = Scalar::zero(self.field);
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    v = &v * &x.pow(e);
                }
            }
            acc = &acc + &v;
        }
        Ok(acc)
    }

    /// `f(x M)`: variable `x_i` is replaced by `sum_j M[j][i] x_j`, i.e. the
    /// image of `x_i` is read from column `i`. With this convention
    /// `substitute(f, M N) = substitute(substitute(f, N), M)`.
    pub fn substitute_linear(&self, m: &ExactMatrix) -> Result<Polynomial, PolyError> {
        if m.rows() != self.nvars || m.cols() != self.nvars {
            return Err(PolyError::Shape(format!(
                "{}x{} matrix for {} variables",
                m.rows(),
                m.cols(),
                self.nvars
            )));
        }
        self.field.ensure_same(m.field())?;
        if linalg::rank(m) != self.nvars {
            return Err(PolyError::SingularSubstitution);
        }
        Ok(self.substitute_linear_unchecked(m))
    }

    pub(crate) fn substitute_linear_unchecked(&self, m: &ExactMatrix) -> Polynomial {
        let n = self.nvars;
        let images: Vec<Polynomial> = (0..n)
            .map(|i| {
                let mut p = Polynomial::zero(n, 1, self.field);
                for j in 0..n {
                    p.add_term(Monomial::var(j, n), m.get(j, i).clone());
                }
                p
            })
            .collect();
        let mut powers: HashMap<(usize, u32), Polynomial> = HashMap::new();
        let mut out = Polynomial::zero(n, self.degree, self.field);
        for (mono, c) in &self.terms {
            let mut term = Polynomial::constant(c.clone(), n);
            for (i, &e) in mono.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = powers
                    .entry((i, e))
                    .or_insert_with(|| images[i].pow(e))
                    .clone();
                term = term.mul(&pw).expect("same context");
            }
            for (tm, tc) in term.terms {
                out.add_term(tm, tc);
            }
        }
        out
    }

    /// Coefficient-wise reduction of a rational polynomial modulo `p`.
    pub fn reduce_mod_p(&self, p: u32) -> Result<Polynomial, PolyError> {
        let field = Field::prime(p as u64)?;
        self.field.ensure_same(Field::Rational)?;
        let mut out = Polynomial::zero(self.nvars, self.degree, field);
        for (m, c) in &self.terms {
            let q = c.as_rational().expect("rational field");
            out.add_term(m.clone(), Scalar::from_rational(q, field)?);
        }
        Ok(out)
    }

    /// Terms not involving `x_var`.
    pub fn restrict_zero(&self, var: usize) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            degree: self.degree,
            field: self.field,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.0[var] == 0)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// The coefficient `g` of `x_var^k` when `f` is written as a polynomial in
    /// `x_var` over the remaining variables (degree `deg f - k`).
    pub fn coefficient_of_power(&self, var: usize, k: u32) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            degree: self.degree.saturating_sub(k),
            field: self.field,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.0[var] == k)
                .map(|(m, c)| {
                    let mut e = m.0.clone();
                    e[var] = 0;
                    (Monomial(e), c.clone())
                })
                .collect(),
        }
    }

    /// Keeps only the terms whose monomial satisfies `keep`.
    pub fn filter_terms(&self, keep: impl Fn(&Monomial) -> bool) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            degree: self.degree,
            field: self.field,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Re-embeds into a context with a different number of variables by
    /// mapping variable `i` to `map[i]`.
    pub fn remap_variables(&self, nvars: usize, map: &[usize]) -> Result<Polynomial, PolyError> {
        if map.len() != self.nvars {
            return Err(PolyError::Shape("variable map length".into()));
        }
        let mut out = Polynomial::zero(nvars, self.degree, self.field);
        for (m, c) in &self.terms {
            let mut e = vec![0; nvars];
            for (i, &x) in m.0.iter().enumerate() {
                if x > 0 {
                    let j = map[i];
                    if j >= nvars {
                        return Err(PolyError::VariableIndex { index: j, nvars });
                    }
                    e[j] += x;
                }
            }
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Coefficients against `basis` (missing monomials are zero).
    pub fn coordinates(&self, index: &HashMap<Monomial, usize>, len: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(self.field); len];
        for (m, c) in &self.terms {
            let i = index[m];
            v[i] = c.clone();
        }
        v
    }

    /// Scales a rational polynomial to a primitive integer polynomial.
    pub fn primitive_integer(&self) -> Polynomial {
        if self.field != Field::Rational || self.is_zero() {
            return self.clone();
        }
        use num_integer::Integer;
        let mut lcm = BigInt::one();
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            lcm = lcm.lcm(c.as_rational().unwrap().denom());
        }
        for c in self.terms.values() {
            let n = (c.as_rational().unwrap() * BigRational::from_integer(lcm.clone())).to_integer();
            g = g.gcd(&n);
        }
        let factor = BigRational::new(lcm, g);
        self.scale(&Scalar::Rational(factor))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            let magnitude = if negative { -c } else { c.clone() };
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let constant = m.degree() == 0;
            if constant {
                write!(f, "{magnitude}")?;
            } else if magnitude.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{magnitude}*{m}")?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    nvars: usize,
    field: Field,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn error(&self, expected: &str) -> PolyError {
        PolyError::Syntax {
            position: self.pos,
            expected: expected.to_string(),
        }
    }

    fn uint(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        std::str::from_utf8(&self.bytes[start..self.pos]).ok()?.parse().ok()
    }

    fn small_uint(&mut self, what: &str) -> Result<u32, PolyError> {
        let at = self.pos;
        let n = self.uint().ok_or_else(|| self.error(what))?;
        u32::try_from(n).map_err(|_| PolyError::Syntax {
            position: at,
            expected: format!("{what} below 2^32"),
        })
    }

    fn factor(&mut self, exps: &mut [u32]) -> Result<(), PolyError> {
        if self.peek() != Some(b'x') {
            return Err(self.error("variable 'x<index>'"));
        }
        self.pos += 1;
        // variable index digits must follow 'x' directly
        if !self.bytes.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
            return Err(self.error("variable index"));
        }
        let idx = self.small_uint("variable index")? as usize;
        let mut e = 1;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            e = self.small_uint("exponent")?;
        }
        if idx >= self.nvars {
            return Err(PolyError::UnknownVariable {
                name: format!("x{idx}"),
            });
        }
        exps[idx] += e;
        Ok(())
    }

    fn term(&mut self, negative: bool) -> Result<(Monomial, Scalar), PolyError> {
        let mut exps = vec![0u32; self.nvars];
        let mut coeff = BigRational::one();
        match self.peek() {
            Some(b) if b.is_ascii_digit() => {
                let num = self.uint().ok_or_else(|| self.error("integer"))?;
                let mut den = BigInt::one();
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    den = self.uint().ok_or_else(|| self.error("denominator"))?;
                    if den.is_zero() {
                        return Err(self.error("nonzero denominator"));
                    }
                }
                coeff = BigRational::new(num, den);
            }
            Some(b'x') => self.factor(&mut exps)?,
            _ => return Err(self.error("term")),
        }
        while self.peek() == Some(b'*') {
            self.pos += 1;
            self.factor(&mut exps)?;
        }
        if negative {
            coeff = -coeff;
        }
        Ok((Monomial(exps), Scalar::from_rational(&coeff, self.field)?))
    }
}

/// Parses the ASCII polynomial grammar
/// `poly := term (('+'|'-') term)*`, `term := coeff ('*' factor)* | factor ('*' factor)*`,
/// `factor := 'x' uint ('^' uint)?`, `coeff := int | int '/' uint`.
pub fn parse_poly(text: &str, nvars: usize, field: Field) -> Result<Polynomial, PolyError> {
    if nvars == 0 {
        return Err(PolyError::Shape("need at least one variable".into()));
    }
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
        nvars,
        field,
    };
    let mut terms = Vec::new();
    let mut negative = false;
    if let Some(s @ (b'+' | b'-')) = p.peek() {
        p.pos += 1;
        negative = s == b'-';
    }
    loop {
        terms.push(p.term(negative)?);
        match p.peek() {
            None => break,
            Some(s @ (b'+' | b'-')) => {
                p.pos += 1;
                negative = s == b'-';
            }
            Some(_) => return Err(p.error("'+', '-', '*' or end of input")),
        }
    }
    let degree = terms[0].0.degree();
    for (m, _) in &terms {
        if m.degree() != degree {
            return Err(PolyError::Inhomogeneous {
                deg_a: degree,
                deg_b: m.degree(),
            });
        }
    }
    let mut poly = Polynomial::zero(nvars, degree, field);
    for (m, c) in terms {
        poly.add_term(m, c);
    }
    Ok(poly)
}

/// Number of variables needed to hold every `x<i>` mentioned in `text`.
pub fn infer_nvars(text: &str) -> usize {
    let bytes = text.as_bytes();
    let mut max = None;
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'x' {
            let start = i + 1;
            let mut j = start;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            if j > start {
                if let Ok(n) = text[start..j].parse::<usize>() {
                    max = Some(max.map_or(n, |m: usize| m.max(n)));
                }
            }
            i = j;
        } else {
            i += 1;
        }
    }
    max.map_or(1, |m| m + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn q(text: &str, n: usize) -> Polynomial {
        parse_poly(text, n, Field::Rational).unwrap()
    }

    #[test]
    fn parse_two_cubes() {
        let f = q("x1^3 + x2^3", 7);
        assert_eq!(f.num_terms(), 2);
        assert_eq!(f.degree(), 3);
        assert_eq!(f.to_string(), "x1^3 + x2^3");
    }

    #[test]
    fn parse_hyperplane_x0() {
        let h = q("x0", 7);
        assert_eq!(h.degree(), 1);
        assert_eq!(h, Polynomial::variable(0, 7, Field::Rational));
    }

    #[test]
    fn inhomogeneous_reports_both_degrees() {
        assert_eq!(
            parse_poly("x1^2 + x1", 7, Field::Rational),
            Err(PolyError::Inhomogeneous { deg_a: 2, deg_b: 1 })
        );
    }

    #[test]
    fn syntax_and_unknown_variable_errors() {
        assert!(matches!(
            parse_poly("x1^3 +", 7, Field::Rational),
            Err(PolyError::Syntax { position: 6, .. })
        ));
        assert!(matches!(
            parse_poly("x1 ** x2", 7, Field::Rational),
            Err(PolyError::Syntax { .. })
        ));
        assert!(matches!(parse_poly("", 7, Field::Rational), Err(PolyError::Syntax { position: 0, .. })));
        assert_eq!(
            parse_poly("x7^3", 7, Field::Rational),
            Err(PolyError::UnknownVariable { name: "x7".into() })
        );
    }

    #[test]
    fn coefficients_and_signs() {
        let f = q("-x1^2 + 3/6*x0*x2 - 2*x2^2 + x1*x1", 3);
        assert_eq!(f.to_string(), "1/2*x0*x2 - 2*x2^2");
        assert!(matches!(
            parse_poly("-1/2*x0^3 - 5", 3, Field::Rational),
            Err(PolyError::Inhomogeneous { deg_a: 3, deg_b: 0 })
        ));
        assert_eq!(q("-7", 2).to_string(), "-7");
        assert_eq!(q("0*x1 + 0*x0", 2).to_string(), "0");
    }

    #[test]
    fn derivative_examples() {
        let f = q("x1^3", 7);
        assert_eq!(f.partial_derivative(1).unwrap(), q("3*x1^2", 7));
        let cone = q("x1^3+x2^3+x3^3+x4^3+x5^3", 7);
        assert!(cone.partial_derivative(6).unwrap().is_zero());
        assert_eq!(q("x1*x2*x3", 7).partial_derivative(1).unwrap(), q("x2*x3", 7));
        assert!(matches!(f.partial_derivative(7), Err(PolyError::VariableIndex { .. })));
        assert_eq!(q("5", 2).partial_derivative(0).unwrap().degree(), 0);
    }

    #[test]
    fn substitution_examples() {
        let f = q("x1^2", 2);
        let id = ExactMatrix::identity(2, Field::Rational);
        assert_eq!(f.substitute_linear(&id).unwrap(), f);
        // x1 -> x1 + x0: column 1 holds the image of x1
        let mut m = ExactMatrix::identity(2, Field::Rational);
        m.set(0, 1, Scalar::from_i64(1, Field::Rational));
        assert_eq!(f.substitute_linear(&m).unwrap(), q("x1^2 + 2*x0*x1 + x0^2", 2));
        let singular = ExactMatrix::zeros(2, 2, Field::Rational);
        assert_eq!(f.substitute_linear(&singular), Err(PolyError::SingularSubstitution));
    }

    #[test]
    fn fermat_shift_coefficient() {
        // x1 -> x1 - x0/3 in x1^3 + ... + x6^3: coefficient of x0*x1^2 is 3 * (-1/3) = -1
        let f = Polynomial::fermat(7, 1..7, 3, Field::Rational);
        let mut m = ExactMatrix::identity(7, Field::Rational);
        m.set(0, 1, Scalar::Rational(rat(-1, 3)));
        let g = f.substitute_linear(&m).unwrap();
        let mono = Monomial::new(vec![1, 2, 0, 0, 0, 0, 0]);
        assert_eq!(g.coeff(&mono), Scalar::Rational(rat(-1, 1)));
    }

    #[test]
    fn reduce_mod_p_examples() {
        assert!(q("3*x1^2", 3).reduce_mod_p(3).unwrap().is_zero());
        let r = q("1/2*x1^3", 3).reduce_mod_p(7).unwrap();
        assert_eq!(r.to_string(), "4*x1^3");
        assert!(matches!(
            q("1/3*x1^3", 3).reduce_mod_p(3),
            Err(PolyError::Field(FieldError::BadPrime { p: 3, .. }))
        ));
    }

    #[test]
    fn monomial_basis_sizes() {
        assert_eq!(monomial_basis(6, 2).len(), 21);
        assert_eq!(monomial_basis(7, 3).len(), 84);
        let c = monomial_basis(7, 0);
        assert_eq!(c, vec![Monomial::one(7)]);
        let b = monomial_basis(3, 2);
        let shown: Vec<String> = b.iter().map(|m| m.to_string()).collect();
        assert_eq!(shown, ["x0^2", "x0*x1", "x0*x2", "x1^2", "x1*x2", "x2^2"]);
        for w in b.windows(2) {
            assert!(w[0] > w[1]);
        }
        assert_eq!(binomial(13, 7), 1716);
    }

    #[test]
    fn prime_field_parse_and_format() {
        let f = parse_poly("-x0^2 + 1/2*x1^2", 2, Field::Prime(7)).unwrap();
        assert_eq!(f.to_string(), "6*x0^2 + 4*x1^2");
        assert!(parse_poly("1/7*x0", 2, Field::Prime(7)).is_err());
    }

    #[test]
    fn infer_variable_count() {
        assert_eq!(infer_nvars("x0^3 + x6*x1^2"), 7);
        assert_eq!(infer_nvars("3"), 1);
    }
}
