//! Constant-coefficient exterior forms on the dual basis ω_1..ω_n.
//!
//! A p-form is stored as a map from strictly increasing index tuples
//! (0-based) to coefficients. Rendering is 1-based, `3*w1^w4 + w2^w3`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::rat::{format_rat, parse_rat, Rat};
use super::ExactMathError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtForm {
    nvars: usize,
    degree: usize,
    terms: BTreeMap<Vec<usize>, Rat>,
}

/// Sorts `idx` in place and returns the permutation sign, or `None` when an
/// index repeats.
fn sort_with_sign(idx: &mut [usize]) -> Option<bool> {
    let mut negative = false;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(negative)
    }
}

impl ExtForm {
    pub fn zero(nvars: usize, degree: usize) -> Self {
        ExtForm {
            nvars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// The constant 0-form `c`.
    pub fn scalar(nvars: usize, c: Rat) -> Self {
        let mut f = ExtForm::zero(nvars, 0);
        f.add_term(Vec::new(), c);
        f
    }

    /// ω_{i+1}.
    pub fn basis_one_form(nvars: usize, i: usize) -> Self {
        ExtForm::monomial(nvars, &[i], Rat::one())
    }

    /// `c · ω_{i_1} ∧ ... ∧ ω_{i_p}` for arbitrary index order.
    pub fn monomial(nvars: usize, indices: &[usize], c: Rat) -> Self {
        assert!(
            indices.iter().all(|&i| i < nvars),
            "form index out of range"
        );
        let mut f = ExtForm::zero(nvars, indices.len());
        let mut idx = indices.to_vec();
        if let Some(neg) = sort_with_sign(&mut idx) {
            f.add_term(idx, if neg { -c } else { c });
        }
        f
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Rat)> {
        self.terms.iter()
    }

    /// Coefficient of the sorted index tuple.
    pub fn coefficient(&self, indices: &[usize]) -> Rat {
        let mut idx = indices.to_vec();
        match sort_with_sign(&mut idx) {
            None => Rat::zero(),
            Some(neg) => {
                let c = self.terms.get(&idx).cloned().unwrap_or_else(Rat::zero);
                if neg {
                    -c
                } else {
                    c
                }
            }
        }
    }

    /// For a 2-form, α(e_{i+1}, e_{j+1}).
    pub fn pair(&self, i: usize, j: usize) -> Rat {
        assert_eq!(self.degree, 2);
        self.coefficient(&[i, j])
    }

    fn add_term(&mut self, idx: Vec<usize>, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(idx).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    fn check_same_space(&self, other: &ExtForm) -> Result<(), ExactMathError> {
        if self.nvars != other.nvars {
            return Err(ExactMathError::VariableCountMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &ExtForm) -> Result<ExtForm, ExactMathError> {
        self.check_same_space(other)?;
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(ExactMathError::DegreeMismatch(self.degree, other.degree));
        }
        let mut out = if self.is_zero() {
            ExtForm::zero(self.nvars, other.degree)
        } else {
            self.clone()
        };
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rat) -> ExtForm {
        let mut out = ExtForm::zero(self.nvars, self.degree);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    pub fn neg(&self) -> ExtForm {
        self.scale(&-Rat::one())
    }

    pub fn wedge(&self, other: &ExtForm) -> Result<ExtForm, ExactMathError> {
        self.check_same_space(other)?;
        let mut out = ExtForm::zero(self.nvars, self.degree + other.degree);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let mut idx: Vec<usize> = a.iter().chain(b).copied().collect();
                if let Some(neg) = sort_with_sign(&mut idx) {
                    let c = ca * cb;
                    out.add_term(idx, if neg { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// k-fold wedge power; the 0-th power is the scalar 1.
    pub fn wedge_power(&self, k: usize) -> ExtForm {
        let mut acc = ExtForm::scalar(self.nvars, Rat::one());
        for _ in 0..k {
            acc = acc.wedge(self).expect("same space");
        }
        acc
    }

    /// Coefficient of ω_1 ∧ ... ∧ ω_n if this is a top-degree form.
    pub fn top_coefficient(&self) -> Option<Rat> {
        (self.degree == self.nvars).then(|| {
            let idx: Vec<usize> = (0..self.nvars).collect();
            self.terms.get(&idx).cloned().unwrap_or_else(Rat::zero)
        })
    }

    /// Parses text such as `3*w1^w4 + w2^w3` (or with `∧`) over `nvars`.
    pub fn parse(s: &str, nvars: usize) -> Result<ExtForm, ExactMathError> {
        let cleaned: String = s
            .replace('∧', "^")
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect();
        if cleaned.is_empty() {
            return Err(ExactMathError::Parse("empty form".into()));
        }
        let mut pieces: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut negative = false;
        for (i, ch) in cleaned.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 {
                pieces.push((negative, std::mem::take(&mut cur)));
                negative = ch == '-';
            } else if (ch == '+' || ch == '-') && i == 0 {
                negative = ch == '-';
            } else {
                cur.push(ch);
            }
        }
        pieces.push((negative, cur));

        let mut out: Option<ExtForm> = None;
        for (neg, text) in pieces {
            let (coef, rest) = match text.split_once('*') {
                Some((c, r)) => (parse_rat(c)?, r.to_string()),
                None if text.starts_with('w') => (Rat::one(), text.clone()),
                None => (parse_rat(&text)?, String::new()),
            };
            let mut idx = Vec::new();
            if !rest.is_empty() {
                for f in rest.split('^') {
                    let n: usize = f
                        .strip_prefix('w')
                        .and_then(|d| d.parse().ok())
                        .ok_or_else(|| {
                            ExactMathError::Parse(format!("bad factor `{f}` in `{s}`"))
                        })?;
                    if n == 0 || n > nvars {
                        return Err(ExactMathError::Parse(format!("w{n} outside 1..={nvars}")));
                    }
                    idx.push(n - 1);
                }
            }
            let term = ExtForm::monomial(nvars, &idx, if neg { -coef } else { coef });
            let term = if term.is_zero() {
                ExtForm::zero(nvars, idx.len())
            } else {
                term
            };
            out = Some(match out {
                None => term,
                Some(acc) => acc.add(&term)?,
            });
        }
        Ok(out.unwrap())
    }
}

impl fmt::Display for ExtForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (idx, c)) in self.terms.iter().enumerate() {
            match (n, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            if idx.is_empty() {
                f.write_str(&format_rat(&a))?;
                continue;
            }
            if !a.is_one() {
                write!(f, "{}*", format_rat(&a))?;
            }
            let names: Vec<String> = idx.iter().map(|i| format!("w{}", i + 1)).collect();
            f.write_str(&names.join("^"))?;
        }
        Ok(())
    }
}

/// All strictly increasing index tuples of length `p` from `0..n`, in
/// lexicographic order.
pub fn combinations(n: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < p - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, p, &mut Vec::new(), &mut out);
    out
}
