//! Sparse multivariate polynomials over the rationals, a small expression
//! parser, and Sylvester resultants.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::uni::UniPoly;
use crate::error::{Error, Result};
use crate::rational::{parse_rational, Rational};

/// Exponent tuples (one entry per variable) mapped to nonzero coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MultiPoly {
    pub fn zero(vars: &[&str]) -> Self {
        MultiPoly { vars: vars.iter().map(|v| v.to_string()).collect(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &[&str], c: Rational) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(vec![0; vars.len()], c);
        p
    }

    pub fn var(vars: &[&str], name: &str) -> Result<Self> {
        let i = vars
            .iter()
            .position(|v| *v == name)
            .ok_or_else(|| Error::Polynomial(format!("unknown variable {name}")))?;
        let mut p = Self::zero(vars);
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        p.add_term(e, Rational::one());
        Ok(p)
    }

    /// Embeds a univariate polynomial as a polynomial in `name`.
    pub fn from_uni(vars: &[&str], name: &str, u: &UniPoly) -> Result<Self> {
        let i = Self::zero(vars).index_of(name)?;
        let mut p = Self::zero(vars);
        for (d, c) in u.coeffs().iter().enumerate() {
            let mut e = vec![0; vars.len()];
            e[i] = d as u32;
            p.add_term(e, c.clone());
        }
        Ok(p)
    }

    /// Parses an expression with `+ - * ^`, parentheses, rational literals
    /// (`3/5`, `0.272`) and the given variable names.
    pub fn parse(vars: &[&str], text: &str) -> Result<Self> {
        let tokens = tokenize(text)?;
        let mut parser = Parser { vars, tokens, pos: 0 };
        let p = parser.expr()?;
        if parser.pos != parser.tokens.len() {
            return Err(Error::Polynomial(format!("trailing input in {text:?}")));
        }
        Ok(p)
    }

    pub fn vars(&self) -> Vec<&str> {
        self.vars.iter().map(String::as_str).collect()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::Polynomial(format!("unknown variable {name}")))
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&vec![0; self.vars.len()])
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    fn same_vars(&self, o: &MultiPoly) {
        assert_eq!(self.vars, o.vars, "polynomials over different variable lists");
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn involves(&self, i: usize) -> bool {
        self.terms.keys().any(|e| e[i] > 0)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut p = Self { vars: self.vars.clone(), terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            p.add_term(e.clone(), c * s);
        }
        p
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(&self.vars(), Rational::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(point)
                    .fold(c.clone(), |acc, (&d, x)| acc * num_traits::pow(x.clone(), d as usize))
            })
            .sum()
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| e.iter().zip(point).fold(crate::rational::to_f64(c), |acc, (&d, x)| acc * x.powi(d as i32)))
            .sum()
    }

    pub fn partial(&self, i: usize) -> Self {
        let mut p = Self { vars: self.vars.clone(), terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut d = e.clone();
                d[i] -= 1;
                p.add_term(d, c * Rational::from_integer(e[i].into()));
            }
        }
        p
    }

    /// Replaces variable `i` by `q` (over the same variable list).
    pub fn substitute(&self, i: usize, q: &MultiPoly) -> Self {
        self.same_vars(q);
        let max = self.degree_in(i) as usize;
        let mut powers = vec![Self::constant(&self.vars(), Rational::one())];
        for k in 1..=max {
            powers.push(&powers[k - 1] * q);
        }
        let mut out = Self { vars: self.vars.clone(), terms: BTreeMap::new() };
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            rest[i] = 0;
            let mut mono = Self { vars: self.vars.clone(), terms: BTreeMap::new() };
            mono.add_term(rest, c.clone());
            out = &out + &(&mono * &powers[e[i] as usize]);
        }
        out
    }

    /// Fixes variable `i` at a rational value.
    pub fn fix(&self, i: usize, value: &Rational) -> Self {
        self.substitute(i, &Self::constant(&self.vars(), value.clone()))
    }

    /// The polynomial as univariate in variable `i`; fails if other variables occur.
    pub fn to_uni(&self, i: usize) -> Result<UniPoly> {
        let mut coeffs = vec![Rational::zero(); self.degree_in(i) as usize + 1];
        for (e, c) in &self.terms {
            if e.iter().enumerate().any(|(j, &d)| j != i && d > 0) {
                return Err(Error::Polynomial(format!("polynomial is not univariate in {}", self.vars[i])));
            }
            coeffs[e[i] as usize] += c;
        }
        Ok(UniPoly::new(coeffs))
    }

    /// Coefficients in variable `i`, each a univariate polynomial in variable `j`.
    fn coefficients_in(&self, i: usize, j: usize) -> Result<Vec<UniPoly>> {
        let deg = self.degree_in(i) as usize;
        let mut rows: Vec<Vec<Rational>> = vec![Vec::new(); deg + 1];
        for (e, c) in &self.terms {
            if e.iter().enumerate().any(|(v, &d)| v != i && v != j && d > 0) {
                return Err(Error::Polynomial("resultant supports at most two variables".into()));
            }
            let row = &mut rows[e[i] as usize];
            let dj = e[j] as usize;
            if row.len() <= dj {
                row.resize(dj + 1, Rational::zero());
            }
            row[dj] += c;
        }
        Ok(rows.into_iter().map(UniPoly::new).collect())
    }

    /// Rescaled to coprime integer coefficients with positive leading term
    /// (largest exponent tuple in the canonical order).
    pub fn normalised(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        use num_bigint::BigInt;
        use num_integer::Integer;
        let mut den = BigInt::one();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(&(c * Rational::from_integer(den.clone())).to_integer());
        }
        let lead_negative = self.terms.values().next_back().is_some_and(|c| c.is_negative());
        let mut s = Rational::new(den, g);
        if lead_negative {
            s = -s;
        }
        self.scale(&s)
    }
}

/// Res_var(p1, p2): determinant of the Sylvester matrix, normalised.
/// Both inputs may involve at most one variable besides `var`.
pub fn resultant(p1: &MultiPoly, p2: &MultiPoly, var: &str) -> Result<MultiPoly> {
    p1.same_vars(p2);
    let i = p1.index_of(var)?;
    if !p1.involves(i) || !p2.involves(i) {
        return Err(Error::Polynomial(format!("resultant in {var}: an input does not involve {var}")));
    }
    let others: Vec<usize> =
        (0..p1.vars.len()).filter(|&j| j != i && (p1.involves(j) || p2.involves(j))).collect();
    if others.len() > 1 {
        return Err(Error::Polynomial("resultant supports at most two variables".into()));
    }
    let j = others.first().copied().unwrap_or(if i == 0 { 1.min(p1.vars.len() - 1) } else { 0 });
    let a = p1.coefficients_in(i, j)?;
    let b = p2.coefficients_in(i, j)?;
    let (m, n) = (a.len() - 1, b.len() - 1);
    let size = m + n;
    let mut mat = vec![vec![UniPoly::zero(); size]; size];
    for r in 0..n {
        for (d, c) in a.iter().enumerate() {
            mat[r][r + m - d] = c.clone();
        }
    }
    for r in 0..m {
        for (d, c) in b.iter().enumerate() {
            mat[n + r][r + n - d] = c.clone();
        }
    }
    let det = bareiss_det(mat)?;
    let out = if others.is_empty() {
        MultiPoly::constant(&p1.vars(), det.coeff(0))
    } else {
        MultiPoly::from_uni(&p1.vars(), &p1.vars[j], &det)?
    };
    Ok(out.normalised())
}

/// Fraction-free determinant over Q[x].
fn bareiss_det(mut m: Vec<Vec<UniPoly>>) -> Result<UniPoly> {
    let n = m.len();
    let mut sign = false;
    let mut prev = UniPoly::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = !sign;
                }
                None => return Ok(UniPoly::zero()),
            }
        }
        for r in k + 1..n {
            for c in k + 1..n {
                let num = &(&m[r][c] * &m[k][k]) - &(&m[r][k] * &m[k][c]);
                m[r][c] = num.div_exact(&prev)?;
            }
            m[r][k] = UniPoly::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    Ok(if sign { -det } else { det })
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .zip(&self.vars)
                .filter(|(d, _)| **d > 0)
                .map(|(&d, v)| if d == 1 { v.clone() } else { format!("{v}^{d}") })
                .collect();
            let mag = c.abs();
            let body = match (mono.is_empty(), mag.is_one()) {
                (true, _) => mag.to_string(),
                (false, true) => mono.join("*"),
                (false, false) => format!("{mag}*{}", mono.join("*")),
            };
            match (first, c.is_negative()) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => write!(f, "{body}")?,
                (false, true) => write!(f, " - {body}")?,
                (false, false) => write!(f, " + {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, o: &MultiPoly) -> MultiPoly {
        self.same_vars(o);
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, o: &MultiPoly) -> MultiPoly {
        self + &(-o)
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, o: &MultiPoly) -> MultiPoly {
        self.same_vars(o);
        let mut p = MultiPoly { vars: self.vars.clone(), terms: BTreeMap::new() };
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1 * c2);
            }
        }
        p
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(String),
    Ident(String),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            out.push(Token::Num(chars[start..i].iter().collect()));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else {
            return Err(Error::Polynomial(format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    vars: &'a [&'a str],
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Token::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = if self.eat('-') { -&self.term()? } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.power()?;
            } else if self.eat('/') {
                let d = self.power()?;
                let c = d.to_constant()?;
                acc = acc.scale(&(Rational::one() / c));
            } else if matches!(self.peek(), Some(Token::Ident(_)) | Some(Token::Op('('))) {
                acc = &acc * &self.power()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.tokens.get(self.pos).cloned() {
                Some(Token::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.parse().map_err(|_| Error::Polynomial(format!("bad exponent {n}")))?;
                    return Ok(base.pow(e));
                }
                _ => return Err(Error::Polynomial("exponent must be a non-negative integer".into())),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        match self.tokens.get(self.pos).cloned() {
            Some(Token::Num(n)) => {
                self.pos += 1;
                Ok(MultiPoly::constant(self.vars, parse_rational(&n)?))
            }
            Some(Token::Ident(v)) => {
                self.pos += 1;
                MultiPoly::var(self.vars, &v)
            }
            Some(Token::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Polynomial("missing ')'".into()));
                }
                Ok(e)
            }
            Some(Token::Op('-')) => {
                self.pos += 1;
                Ok(-&self.power()?)
            }
            other => Err(Error::Polynomial(format!("unexpected token {other:?}"))),
        }
    }
}

impl MultiPoly {
    fn to_constant(&self) -> Result<Rational> {
        if self.terms.keys().any(|e| e.iter().any(|&d| d > 0)) {
            return Err(Error::Polynomial("division by a non-constant".into()));
        }
        let c = self.constant_term();
        if c.is_zero() {
            return Err(Error::Polynomial("division by zero".into()));
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    const YZ: &[&str] = &["y", "z"];

    #[test]
    fn parse_and_evaluate() {
        let p = MultiPoly::parse(YZ, "2y^3(1 - y) - 108/625 + 0.5*z^2").unwrap();
        assert_eq!(p.eval(&[rat(3, 5), int(0)]), rat(2 * 27, 125) * rat(2, 5) - rat(108, 625));
        assert_eq!(p.eval(&[int(0), int(2)]), rat(2, 1) - rat(108, 625));
        assert_eq!(p.partial(1), MultiPoly::parse(YZ, "z").unwrap());
        assert!(MultiPoly::parse(YZ, "y / z").is_err());
        assert!(MultiPoly::parse(YZ, "w").is_err());
    }

    #[test]
    fn resultants() {
        let p1 = MultiPoly::parse(YZ, "y - z").unwrap();
        let p2 = MultiPoly::parse(YZ, "y^2 - 2").unwrap();
        let r = resultant(&p1, &p2, "y").unwrap();
        assert_eq!(r, MultiPoly::parse(YZ, "z^2 - 2").unwrap());
        let f = MultiPoly::parse(YZ, "(y - 2)(y + z)").unwrap();
        let g = MultiPoly::parse(YZ, "(y - 2)(y - 3z + 1)").unwrap();
        assert!(resultant(&f, &g, "y").unwrap().is_zero());
        assert!(resultant(&p2, &MultiPoly::parse(YZ, "z").unwrap(), "y").is_err());
    }

    #[test]
    fn substitution() {
        let p = MultiPoly::parse(YZ, "y^2 + z").unwrap();
        let q = p.substitute(0, &MultiPoly::parse(YZ, "z + 1").unwrap());
        assert_eq!(q, MultiPoly::parse(YZ, "z^2 + 3z + 1").unwrap());
        assert_eq!(q.to_uni(1).unwrap(), UniPoly::from_ints(&[1, 3, 1]));
    }
}
