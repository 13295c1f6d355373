//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Variables are indexed from 0 in the API and rendered 1-based
//! (`x1`, `x2`, ...), matching coordinates `x_1..x_n` on the coalgebra.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::rat::{format_rat, parse_rat, Rat};
use super::ExactMathError;

/// Exponent vector of a monomial. Ordered graded-lexicographically with
/// `x1 > x2 > ... > xn`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` if `other` divides `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
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

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, Rat::one())
    }

    /// The coordinate function `x_{i+1}`.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(
            i < nvars,
            "variable index {i} out of range for {nvars} variables"
        );
        let mut p = Poly::zero(nvars);
        p.add_term(Monomial::var(nvars, i), Rat::one());
        p
    }

    pub fn monomial(coefficient: Rat, exponents: Vec<u32>) -> Self {
        let mut p = Poly::zero(exponents.len());
        p.add_term(Monomial(exponents), coefficient);
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Rat)>) -> Self {
        let mut p = Poly::zero(nvars);
        for (m, c) in terms {
            assert_eq!(
                m.0.len(),
                nvars,
                "monomial length does not match variable count"
            );
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, exponents: &[u32]) -> Rat {
        self.terms
            .get(&Monomial(exponents.to_vec()))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    pub fn depends_on(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.0[i] > 0)
    }

    /// Indices of the variables that occur.
    pub fn support(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&i| self.depends_on(i)).collect()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(Monomial::degree);
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    /// Constant term if the polynomial has degree ≤ 0.
    pub fn as_constant(&self) -> Option<Rat> {
        match self.degree() {
            None => Some(Rat::zero()),
            Some(0) => Some(self.terms.values().next().cloned().unwrap()),
            _ => None,
        }
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn check_compatible(&self, other: &Poly) -> Result<(), ExactMathError> {
        if self.nvars != other.nvars {
            return Err(ExactMathError::VariableCountMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly, ExactMathError> {
        self.check_compatible(other)?;
        Ok(self + other)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly, ExactMathError> {
        self.check_compatible(other)?;
        Ok(self * other)
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative ∂/∂x_{i+1}.
    pub fn partial(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[i] -= 1;
            out.add_term(m2, c * Rat::from_integer(e.into()));
        }
        out
    }

    /// Antiderivative in x_{i+1} with zero integration constant.
    pub fn antiderivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            m2.0[i] += 1;
            out.add_term(m2.clone(), c / Rat::from_integer(m2.0[i].into()));
        }
        out
    }

    pub fn evaluate(&self, point: &[Rat]) -> Result<Rat, ExactMathError> {
        if point.len() != self.nvars {
            return Err(ExactMathError::VariableCountMismatch {
                left: self.nvars,
                right: point.len(),
            });
        }
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Substitutes x_{i+1} = value, keeping the variable count.
    pub fn substitute(&self, i: usize, value: &Rat) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            let mut m2 = m.clone();
            m2.0[i] = 0;
            out.add_term(m2, c * num_traits::pow(value.clone(), e as usize));
        }
        out
    }

    /// Replaces x_{i+1} by the polynomial `q`.
    pub fn compose_var(&self, i: usize, q: &Poly) -> Poly {
        assert_eq!(self.nvars, q.nvars);
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            let mut m2 = m.clone();
            m2.0[i] = 0;
            let rest = Poly::monomial(c.clone(), m2.0);
            out = &out + &(&rest * &q.pow(e));
        }
        out
    }

    /// Embeds into a ring with `nvars >= self.nvars()` variables; the new
    /// variables are appended.
    pub fn extend_vars(&self, nvars: usize) -> Poly {
        assert!(nvars >= self.nvars);
        Poly {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = m.0.clone();
                    e.resize(nvars, 0);
                    (Monomial(e), c.clone())
                })
                .collect(),
        }
    }

    /// Drops trailing variables. Fails if any dropped variable occurs.
    pub fn truncate_vars(&self, nvars: usize) -> Result<Poly, ExactMathError> {
        if (nvars..self.nvars).any(|i| self.depends_on(i)) {
            return Err(ExactMathError::VariableCountMismatch {
                left: self.nvars,
                right: nvars,
            });
        }
        Ok(Poly {
            nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Monomial(m.0[..nvars].to_vec()), c.clone()))
                .collect(),
        })
    }

    /// Exact division. Returns `None` if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        assert_eq!(self.nvars, divisor.nvars);
        let (lm, lc) = divisor.leading_term()?;
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.nvars);
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.checked_div(lm)?;
            let qc = c / lc;
            let t = Poly::monomial(qc, qm.0);
            rem = &rem - &(&t * divisor);
            quot = &quot + &t;
        }
        Some(quot)
    }

    /// Divides by the gcd of the numerators and multiplies by the lcm of the
    /// denominators so the coefficients are coprime integers, with a positive
    /// leading coefficient.
    pub fn primitive(&self) -> Poly {
        use num_integer::Integer;
        let Some((_, lc)) = self.leading_term() else {
            return self.clone();
        };
        let mut num_gcd = num_bigint::BigInt::zero();
        let mut den_lcm = num_bigint::BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut factor = Rat::new(den_lcm, num_gcd);
        if lc.is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    /// Float evaluator for repeated numerical use.
    pub fn compile(&self) -> CompiledPoly {
        CompiledPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let powers =
                        m.0.iter()
                            .enumerate()
                            .filter(|(_, &e)| e > 0)
                            .map(|(i, &e)| (i, e as i32))
                            .collect();
                    (super::rat::to_f64(c), powers)
                })
                .collect(),
        }
    }

    pub fn evaluate_f64(&self, point: &[f64]) -> f64 {
        self.compile().eval(point)
    }

    /// Parses text such as `x2*x4 - 1/4*x3^2` over `nvars` variables.
    pub fn parse(s: &str, nvars: usize) -> Result<Poly, ExactMathError> {
        PolyParser::new(s, nvars).parse()
    }
}

impl Zero for Poly {
    fn zero() -> Self {
        Poly::zero(0)
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = Poly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (i, &e) in m.0.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        write!(f, "x{}", i + 1)?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

/// Canonical rendering: descending graded-lex, coefficients as `p/q`,
/// unit coefficients omitted, e.g. `x2*x4 - 1/4*x3^2`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            match (idx, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            let constant = m.degree() == 0;
            if constant {
                f.write_str(&format_rat(&a))?;
            } else {
                if !a.is_one() {
                    write!(f, "{}*", format_rat(&a))?;
                }
                write_monomial(f, m)?;
            }
        }
        Ok(())
    }
}

/// Float evaluator: list of `(coefficient, [(variable, exponent)])`.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    terms: Vec<(f64, Vec<(usize, i32)>)>,
}

impl CompiledPoly {
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, powers)| powers.iter().fold(*c, |acc, &(i, e)| acc * x[i].powi(e)))
            .sum()
    }
}

struct PolyParser<'a> {
    src: &'a str,
    chars: Vec<char>,
    pos: usize,
    nvars: usize,
}

impl<'a> PolyParser<'a> {
    fn new(src: &'a str, nvars: usize) -> Self {
        PolyParser {
            src,
            chars: src.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
            nvars,
        }
    }

    fn err(&self, what: &str) -> ExactMathError {
        ExactMathError::Parse(format!("{what} at position {} in `{}`", self.pos, self.src))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn parse(mut self) -> Result<Poly, ExactMathError> {
        let mut acc = Poly::zero(self.nvars);
        let mut sign = Rat::one();
        match self.peek() {
            Some('-') => {
                sign = -sign;
                self.pos += 1;
            }
            Some('+') => self.pos += 1,
            None => return Err(self.err("empty polynomial")),
            _ => {}
        }
        loop {
            let t = self.term()?;
            acc = &acc + &t.scale(&sign);
            match self.peek() {
                None => break,
                Some('+') => sign = Rat::one(),
                Some('-') => sign = -Rat::one(),
                Some(_) => return Err(self.err("expected `+` or `-`")),
            }
            self.pos += 1;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly, ExactMathError> {
        let mut acc = Poly::one(self.nvars);
        loop {
            let f = self.factor()?;
            acc = &acc * &f;
            if self.peek() == Some('*') {
                self.pos += 1;
            } else {
                return Ok(acc);
            }
        }
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == '.') {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn factor(&mut self) -> Result<Poly, ExactMathError> {
        match self.peek() {
            Some('x') => {
                self.pos += 1;
                let idx: usize = self
                    .digits()
                    .parse()
                    .map_err(|_| self.err("expected variable index"))?;
                if idx == 0 || idx > self.nvars {
                    return Err(self.err(&format!("variable x{idx} outside 1..={}", self.nvars)));
                }
                let mut exp = 1u32;
                if self.peek() == Some('^') {
                    self.pos += 1;
                    exp = self
                        .digits()
                        .parse()
                        .map_err(|_| self.err("expected exponent"))?;
                }
                Ok(Poly::var(self.nvars, idx - 1).pow(exp))
            }
            Some(c) if c.is_ascii_digit() => {
                let mut text = self.digits();
                if self.peek() == Some('/') {
                    self.pos += 1;
                    text.push('/');
                    text.push_str(&self.digits());
                }
                let c = parse_rat(&text)?;
                Ok(Poly::constant(self.nvars, c))
            }
            _ => Err(self.err("expected a number or a variable")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat::{int, rat};

    fn x(n: usize, i: usize) -> Poly {
        Poly::var(n, i - 1)
    }

    fn f4() -> Poly {
        &(&x(4, 2) * &x(4, 4)) - &x(4, 3).pow(2).scale(&rat(1, 4))
    }

    #[test]
    fn partial_of_f4() {
        assert_eq!(f4().partial(2), x(4, 3).scale(&rat(-1, 2)));
    }

    #[test]
    fn product_with_zero_is_zero() {
        assert!((&f4() * &Poly::zero(4)).is_zero());
    }

    #[test]
    fn evaluate_by_substitution() {
        let p = &(&x(5, 2) * &x(5, 4)) - &x(5, 3).pow(2).scale(&rat(1, 4));
        let v = p
            .evaluate(&[int(0), int(2), int(2), int(3), int(7)])
            .unwrap();
        // 2*3 - (1/4)*4
        assert_eq!(v, int(5));
    }

    #[test]
    fn variable_count_mismatch() {
        assert!(x(3, 1).checked_add(&x(4, 1)).is_err());
        assert!(x(3, 1).checked_mul(&x(4, 1)).is_err());
        assert!(x(3, 1).evaluate(&[int(1)]).is_err());
    }

    #[test]
    fn display_is_graded_lex() {
        assert_eq!(f4().to_string(), "x2*x4 - 1/4*x3^2");
        let p = &(&x(3, 3) + &Poly::constant(3, rat(-2, 3))) + &x(3, 1).pow(2);
        assert_eq!(p.to_string(), "x1^2 + x3 - 2/3");
        assert_eq!(Poly::zero(2).to_string(), "0");
    }

    #[test]
    fn parse_round_trip() {
        let p = Poly::parse("x2*x4 - 1/4*x3^2", 4).unwrap();
        assert_eq!(p, f4());
        let q = Poly::parse("-x1 + 3*x2^2*x1 - 7/2", 2).unwrap();
        assert_eq!(Poly::parse(&q.to_string(), 2).unwrap(), q);
        assert!(Poly::parse("x5", 4).is_err());
        assert!(Poly::parse("", 4).is_err());
        assert!(Poly::parse("x1 +* x2", 4).is_err());
    }

    #[test]
    fn exact_division() {
        let a = &x(3, 1) + &x(3, 2);
        let b = &x(3, 1) - &x(3, 3);
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert!(x(3, 1).div_exact(&x(3, 2)).is_none());
    }

    #[test]
    fn primitive_normalization() {
        let p = Poly::parse("x2*x4 - 1/2*x3^2", 4).unwrap();
        assert_eq!(p.primitive(), Poly::parse("2*x2*x4 - x3^2", 4).unwrap());
        let q = Poly::parse("-3*x1 + 6*x2", 2).unwrap();
        assert_eq!(q.primitive(), Poly::parse("x1 - 2*x2", 2).unwrap());
    }

    #[test]
    fn substitution_and_compose() {
        let p = Poly::parse("x1*x2^2 + x2", 2).unwrap();
        assert_eq!(
            p.substitute(1, &int(2)),
            Poly::parse("4*x1 + 2", 2).unwrap()
        );
        let q = p.compose_var(1, &Poly::parse("x1 + 1", 2).unwrap());
        assert_eq!(q, Poly::parse("x1^3 + 2*x1^2 + 2*x1 + 1", 2).unwrap());
    }

    #[test]
    fn compiled_matches_exact() {
        let p = Poly::parse("x1^3 - 1/3*x2*x3 + 2", 3).unwrap();
        let pt = [0.5, -1.25, 3.0];
        let exact = p.evaluate(&[rat(1, 2), rat(-5, 4), int(3)]).unwrap();
        assert!((p.evaluate_f64(&pt) - crate::exactmath::rat::to_f64(&exact)).abs() < 1e-12);
    }
}
