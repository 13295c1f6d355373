//! Finite-dimensional Lie algebras given by exact structure constants.
//!
//! Basis indices are 0-based in the API: `e_{i+1}` is index `i`. The JSON
//! file format and all rendered text use 1-based indices.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactmath::rat::{self, Rat};
use crate::exactmath::{ExtForm, RatMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("[e_{i}, e_{i}] must vanish", i = .0 + 1)]
    NonzeroSelfBracket(usize),
    #[error("Jacobi identity fails on (e_{}, e_{}, e_{})", .0.i + 1, .0.j + 1, .0.k + 1)]
    Jacobi(JacobiViolation),
    #[error("2-form is not closed: d(alpha) = {0}")]
    NotClosed(String),
    #[error("cocycle lives on {form} generators, algebra has {algebra}")]
    DimensionMismatch { form: usize, algebra: usize },
    #[error("expected a 2-form, got degree {0}")]
    NotTwoForm(usize),
    #[error("invalid algebra file: {0}")]
    Format(String),
}

/// Basis triple on which the Jacobi sum is nonzero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JacobiViolation {
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// [e_1, e_k] = e_{k+1}, k = 2..n-1.
    Q,
    /// [e_i, e_j] = (j - i) e_{i+j} when i + j ≤ n.
    V,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Q => f.write_str("qn"),
            Family::V => f.write_str("vn"),
        }
    }
}

impl std::str::FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "q" | "qn" => Ok(Family::Q),
            "v" | "vn" => Ok(Family::V),
            other => Err(format!("unknown family `{other}` (expected qn or vn)")),
        }
    }
}

type Terms = Vec<(usize, Rat)>;

#[derive(Clone, Debug)]
pub struct LieAlgebra {
    dim: usize,
    /// `[e_i, e_j]` for `i < j`, nonzero terms sorted by output index.
    brackets: BTreeMap<(usize, usize), Terms>,
    labels: Option<Vec<String>>,
    family: Option<Family>,
}

/// Structural equality; labels and family tags are ignored.
impl PartialEq for LieAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.brackets == other.brackets
    }
}

impl Eq for LieAlgebra {}

fn merge_terms(terms: impl IntoIterator<Item = (usize, Rat)>) -> Terms {
    let mut acc: BTreeMap<usize, Rat> = BTreeMap::new();
    for (k, c) in terms {
        *acc.entry(k).or_insert_with(Rat::zero) += c;
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

impl LieAlgebra {
    /// Builds an algebra from brackets `[e_i, e_j] = Σ c_k e_k` and checks the
    /// Jacobi identity. Pairs may be given in either order; `(j, i)` is
    /// stored as the negation of `(i, j)`.
    pub fn new(
        dim: usize,
        brackets: impl IntoIterator<Item = (usize, usize, Terms)>,
    ) -> Result<Self, LieError> {
        let g = Self::new_unchecked(dim, brackets)?;
        g.jacobi_check().map_err(LieError::Jacobi)?;
        Ok(g)
    }

    /// Like [`LieAlgebra::new`] without the Jacobi check.
    pub fn new_unchecked(
        dim: usize,
        brackets: impl IntoIterator<Item = (usize, usize, Terms)>,
    ) -> Result<Self, LieError> {
        let mut raw: BTreeMap<(usize, usize), Terms> = BTreeMap::new();
        for (i, j, terms) in brackets {
            for idx in [i, j].into_iter().chain(terms.iter().map(|t| t.0)) {
                if idx >= dim {
                    return Err(LieError::IndexOutOfRange { index: idx, dim });
                }
            }
            if i == j {
                if merge_terms(terms).is_empty() {
                    continue;
                }
                return Err(LieError::NonzeroSelfBracket(i));
            }
            let (key, terms) = if i < j {
                ((i, j), terms)
            } else {
                ((j, i), terms.into_iter().map(|(k, c)| (k, -c)).collect())
            };
            raw.entry(key).or_default().extend(terms);
        }
        let brackets = raw
            .into_iter()
            .map(|(key, t)| (key, merge_terms(t)))
            .filter(|(_, t)| !t.is_empty())
            .collect();
        Ok(LieAlgebra {
            dim,
            brackets,
            labels: None,
            family: None,
        })
    }

    pub fn abelian(dim: usize) -> Self {
        LieAlgebra {
            dim,
            brackets: BTreeMap::new(),
            labels: None,
            family: None,
        }
    }

    /// Three-dimensional Heisenberg algebra, [e_1, e_2] = e_3.
    pub fn heisenberg() -> Self {
        Self::new(3, [(0, 1, vec![(2, Rat::one())])]).expect("Heisenberg algebra is valid")
    }

    pub fn family(family: Family, n: usize) -> Self {
        match family {
            Family::Q => Self::q_family(n),
            Family::V => Self::v_family(n),
        }
    }

    /// Q_n: [e_1, e_k] = e_{k+1} for k = 2..n-1, all other brackets zero.
    pub fn q_family(n: usize) -> Self {
        let brackets = (1..n.saturating_sub(1)).map(|k| (0, k, vec![(k + 1, Rat::one())]));
        let mut g = Self::new_unchecked(n, brackets).expect("indices in range");
        g.family = Some(Family::Q);
        g
    }

    /// V_n: [e_i, e_j] = (j - i) e_{i+j} when i + j ≤ n (1-based).
    pub fn v_family(n: usize) -> Self {
        let mut brackets = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                if i + j <= n {
                    brackets.push((i - 1, j - 1, vec![(i + j - 1, rat::int((j - i) as i64))]));
                }
            }
        }
        let mut g = Self::new_unchecked(n, brackets).expect("indices in range");
        g.family = Some(Family::V);
        g
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Family tag set by the family constructors.
    pub fn family_tag(&self) -> Option<Family> {
        self.family
    }

    pub fn with_family_tag(mut self, family: Option<Family>) -> Self {
        self.family = family;
        self
    }

    /// The family whose structure constants this algebra has, if any. V is
    /// tried first; the two families coincide for n ≤ 3.
    pub fn recognize_family(&self) -> Option<Family> {
        if let Some(f) = self.family {
            return Some(f);
        }
        [Family::V, Family::Q]
            .into_iter()
            .find(|&f| *self == LieAlgebra::family(f, self.dim))
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.dim);
        self.labels = Some(labels);
        self
    }

    /// Nonzero brackets `(i, j, terms)` with `i < j`.
    pub fn brackets(&self) -> impl Iterator<Item = (usize, usize, &[(usize, Rat)])> {
        self.brackets
            .iter()
            .map(|(&(i, j), t)| (i, j, t.as_slice()))
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> Terms {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => Vec::new(),
            Less => self.brackets.get(&(i, j)).cloned().unwrap_or_default(),
            Greater => self
                .brackets
                .get(&(j, i))
                .map(|t| t.iter().map(|(k, c)| (*k, -c.clone())).collect())
                .unwrap_or_default(),
        }
    }

    /// c^k_{ij}.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Rat {
        self.bracket_basis(i, j)
            .into_iter()
            .find(|(kk, _)| *kk == k)
            .map(|(_, c)| c)
            .unwrap_or_else(Rat::zero)
    }

    /// Bracket of two coordinate vectors.
    pub fn bracket(&self, u: &[Rat], v: &[Rat]) -> Vec<Rat> {
        assert_eq!(u.len(), self.dim);
        assert_eq!(v.len(), self.dim);
        let mut out = vec![Rat::zero(); self.dim];
        let nz = |w: &[Rat]| -> Vec<usize> { (0..w.len()).filter(|&i| !w[i].is_zero()).collect() };
        let (nu, nv) = (nz(u), nz(v));
        for &i in &nu {
            for &j in &nv {
                if i == j {
                    continue;
                }
                let (a, b, sign) = if i < j { (i, j, false) } else { (j, i, true) };
                if let Some(terms) = self.brackets.get(&(a, b)) {
                    let w = &u[i] * &v[j];
                    for (k, c) in terms {
                        if sign {
                            out[*k] -= &w * c;
                        } else {
                            out[*k] += &w * c;
                        }
                    }
                }
            }
        }
        out
    }

    fn bracket_sparse(&self, i: usize, v: &BTreeMap<usize, Rat>) -> BTreeMap<usize, Rat> {
        let mut out: BTreeMap<usize, Rat> = BTreeMap::new();
        for (&j, cj) in v {
            for (k, c) in self.bracket_basis(i, j) {
                *out.entry(k).or_insert_with(Rat::zero) += cj * c;
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Exhaustive check of [e_i,[e_j,e_k]] + [e_j,[e_k,e_i]] + [e_k,[e_i,e_j]] = 0
    /// over basis triples i < j < k.
    pub fn jacobi_check(&self) -> Result<(), JacobiViolation> {
        let as_map = |t: Terms| -> BTreeMap<usize, Rat> { t.into_iter().collect() };
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let ij = as_map(self.bracket_basis(i, j));
                for k in j + 1..self.dim {
                    let jk = as_map(self.bracket_basis(j, k));
                    let ki = as_map(self.bracket_basis(k, i));
                    let mut sum = self.bracket_sparse(i, &jk);
                    for (idx, c) in self
                        .bracket_sparse(j, &ki)
                        .into_iter()
                        .chain(self.bracket_sparse(k, &ij))
                    {
                        *sum.entry(idx).or_insert_with(Rat::zero) += c;
                    }
                    if sum.values().any(|c| !c.is_zero()) {
                        return Err(JacobiViolation { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    /// [A, B] for subspaces A, B.
    pub fn bracket_subspaces(&self, a: &Subspace, b: &Subspace, symmetric: bool) -> Subspace {
        let mut builder = SubspaceBuilder::new(self.dim);
        for (ia, u) in a.basis().iter().enumerate() {
            let start = if symmetric { ia + 1 } else { 0 };
            for v in &b.basis()[start..] {
                builder.insert(self.bracket(u, v));
                if builder.dim() == self.dim {
                    return builder.finish();
                }
            }
        }
        builder.finish()
    }

    /// 𝔤 = 𝔤_1 ⊃ 𝔤_2 = [𝔤, 𝔤] ⊃ 𝔤_k = [𝔤, 𝔤_{k-1}] ... up to and including the
    /// first repeated (stable) term.
    pub fn lower_central_series(&self) -> Vec<Subspace> {
        let full = Subspace::full(self.dim);
        let mut series = vec![full.clone()];
        loop {
            let last = series.last().unwrap();
            let next = self.bracket_subspaces(&full, last, false);
            let stable = next.dim() == last.dim();
            series.push(next);
            if stable || series.last().unwrap().dim() == 0 {
                if stable && series.len() > 1 {
                    series.pop();
                }
                return series;
            }
        }
    }

    /// D^0 = 𝔤, D^k = [D^{k-1}, D^{k-1}], up to and including the stable term.
    pub fn derived_series(&self) -> Vec<Subspace> {
        let mut series = vec![Subspace::full(self.dim)];
        loop {
            let last = series.last().unwrap();
            let next = self.bracket_subspaces(last, last, true);
            let stable = next.dim() == last.dim();
            if stable {
                return series;
            }
            let done = next.dim() == 0;
            series.push(next);
            if done {
                return series;
            }
        }
    }

    /// Nilpotency class m (𝔤_{m+1} = 0, 𝔤_m ≠ 0); `None` if not nilpotent.
    pub fn nilpotency_class(&self) -> Option<usize> {
        let lcs = self.lower_central_series();
        (lcs.last().unwrap().dim() == 0).then(|| lcs.len() - 1)
    }

    pub fn is_nilpotent(&self) -> bool {
        self.nilpotency_class().is_some()
    }

    /// Solvable step k (D^k = 0, D^{k-1} ≠ 0); `None` if not solvable.
    pub fn solvable_step(&self) -> Option<usize> {
        let ds = self.derived_series();
        (ds.last().unwrap().dim() == 0).then(|| ds.len() - 1)
    }

    pub fn center(&self) -> Subspace {
        // x is central iff Σ_i x_i c^k_{ij} = 0 for every j, k.
        let mut rows = Vec::new();
        for j in 0..self.dim {
            let mut per_k: BTreeMap<usize, Vec<Rat>> = BTreeMap::new();
            for i in 0..self.dim {
                for (k, c) in self.bracket_basis(i, j) {
                    per_k
                        .entry(k)
                        .or_insert_with(|| vec![Rat::zero(); self.dim])[i] = c;
                }
            }
            rows.extend(per_k.into_values());
        }
        if rows.is_empty() {
            return Subspace::full(self.dim);
        }
        let m = RatMatrix::from_rows(rows).expect("rectangular");
        Subspace::from_vectors(self.dim, m.nullspace())
    }

    /// dim 𝔤_k = n - k for k = 2..n (maximal nilpotency class).
    pub fn is_filiform(&self) -> bool {
        let lcs = self.lower_central_series();
        let n = self.dim;
        (2..=n).all(|k| lcs.get(k - 1).map_or(0, Subspace::dim) == n - k)
            && lcs.last().unwrap().dim() == 0
    }

    /// [e_i, e_j] ∈ span(e_{i+j}) with deg e_i = i.
    pub fn is_n_graded(&self) -> bool {
        self.brackets
            .iter()
            .all(|(&(i, j), t)| t.iter().all(|(k, _)| *k == i + j + 1))
    }

    pub fn has_integer_structure_constants(&self) -> bool {
        self.brackets
            .values()
            .flatten()
            .all(|(_, c)| c.is_integer())
    }

    /// ĝ = 𝔤 ⊕ ℝ e_{n+1} with [u, v]^ = [u, v] + α(u, v) e_{n+1}. Fails unless
    /// dα = 0.
    pub fn central_extension(&self, alpha: &Cocycle2) -> Result<LieAlgebra, LieError> {
        alpha.check_closed(self)?;
        let n = self.dim;
        let mut brackets: Vec<(usize, usize, Terms)> = self
            .brackets
            .iter()
            .map(|(&(i, j), t)| (i, j, t.clone()))
            .collect();
        for (idx, c) in alpha.form().terms() {
            brackets.push((idx[0], idx[1], vec![(n, c.clone())]));
        }
        let mut g = LieAlgebra::new_unchecked(n + 1, brackets)?;
        // Extensions of family members by their own tower cocycle stay in the
        // family; anything else is untagged.
        g.family = self.family.filter(|&f| g == LieAlgebra::family(f, n + 1));
        Ok(g)
    }

    /// The quotient by the last basis vector when it is central.
    pub fn drop_last(&self) -> Option<LieAlgebra> {
        let n = self.dim;
        if n == 0 || !self.center().contains(&unit(n, n - 1)) {
            return None;
        }
        let brackets = self.brackets.iter().filter_map(|(&(i, j), t)| {
            if j == n - 1 {
                return None;
            }
            Some((
                i,
                j,
                t.iter().filter(|(k, _)| *k != n - 1).cloned().collect(),
            ))
        });
        let mut g = LieAlgebra::new_unchecked(n - 1, brackets).ok()?;
        g.family = self.family;
        Some(g)
    }

    pub fn to_file(&self) -> AlgebraFile {
        AlgebraFile {
            dim: self.dim,
            brackets: self
                .brackets
                .iter()
                .map(|(&(i, j), t)| BracketEntry {
                    i: i + 1,
                    j: j + 1,
                    terms: t
                        .iter()
                        .map(|(k, c)| TermEntry {
                            k: k + 1,
                            c: c.clone(),
                        })
                        .collect(),
                })
                .collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn from_file(file: &AlgebraFile) -> Result<LieAlgebra, LieError> {
        let check = |idx: usize| {
            if idx == 0 || idx > file.dim {
                Err(LieError::Format(format!(
                    "index {idx} outside 1..={}",
                    file.dim
                )))
            } else {
                Ok(idx - 1)
            }
        };
        let mut brackets = Vec::new();
        for b in &file.brackets {
            let terms = b
                .terms
                .iter()
                .map(|t| Ok((check(t.k)?, t.c.clone())))
                .collect::<Result<Terms, LieError>>()?;
            brackets.push((check(b.i)?, check(b.j)?, terms));
        }
        let mut g = LieAlgebra::new(file.dim, brackets)?;
        if let Some(labels) = &file.labels {
            if labels.len() != file.dim {
                return Err(LieError::Format("label count differs from dim".into()));
            }
            g.labels = Some(labels.clone());
        }
        g.family = g.recognize_family();
        Ok(g)
    }

    /// Canonical JSON serialization (compact, brackets sorted by (i, j)).
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<LieAlgebra, LieError> {
        let file: AlgebraFile =
            serde_json::from_str(text).map_err(|e| LieError::Format(e.to_string()))?;
        LieAlgebra::from_file(&file)
    }
}

/// On-disk algebra: `{"dim": n, "brackets": [{"i":1,"j":2,"terms":[{"k":3,"c":"1"}]}]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct AlgebraFile {
    pub dim: usize,
    pub brackets: Vec<BracketEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub terms: Vec<TermEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TermEntry {
    pub k: usize,
    #[serde(with = "rat::serde_rat")]
    pub c: Rat,
}

pub(crate) fn unit(n: usize, i: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); n];
    v[i] = Rat::one();
    v
}

/// Linear subspace of ℚ^n with its basis in reduced row-echelon form, so
/// equal subspaces compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Rat>>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: (0..ambient).map(|i| unit(ambient, i)).collect(),
        }
    }

    /// span(e_{i+1} : i in indices).
    pub fn coordinate(ambient: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        Self::from_vectors(
            ambient,
            indices.into_iter().map(|i| unit(ambient, i)).collect(),
        )
    }

    pub fn from_vectors(ambient: usize, vectors: Vec<Vec<Rat>>) -> Self {
        let mut b = SubspaceBuilder::new(ambient);
        for v in vectors {
            b.insert(v);
        }
        b.finish()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rat>] {
        &self.basis
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        let mut vs = self.basis.clone();
        vs.push(v.to_vec());
        Subspace::from_vectors(self.ambient, vs).dim() == self.dim()
    }

    /// Indices i such that the subspace is exactly span(e_{i+1}), if it is a
    /// coordinate subspace.
    pub fn coordinate_indices(&self) -> Option<Vec<usize>> {
        self.basis
            .iter()
            .map(|row| {
                let nz: Vec<usize> = (0..row.len()).filter(|&i| !row[i].is_zero()).collect();
                (nz.len() == 1).then(|| nz[0])
            })
            .collect()
    }
}

/// Incremental echelon construction.
struct SubspaceBuilder {
    ambient: usize,
    /// pivot column → row with 1 at the pivot.
    rows: BTreeMap<usize, Vec<Rat>>,
}

impl SubspaceBuilder {
    fn new(ambient: usize) -> Self {
        SubspaceBuilder {
            ambient,
            rows: BTreeMap::new(),
        }
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }

    fn insert(&mut self, mut v: Vec<Rat>) {
        assert_eq!(v.len(), self.ambient);
        for (&p, row) in &self.rows {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &f * r;
                }
            }
        }
        if let Some(p) = v.iter().position(|x| !x.is_zero()) {
            let inv = Rat::one() / &v[p];
            for x in v.iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
            self.rows.insert(p, v);
        }
    }

    fn finish(self) -> Subspace {
        let pivots: Vec<usize> = self.rows.keys().copied().collect();
        let mut rows: Vec<Vec<Rat>> = self.rows.into_values().collect();
        for a in (0..rows.len()).rev() {
            let p = pivots[a];
            let (head, tail) = rows.split_at_mut(a);
            let pivot_row = &tail[0];
            for row in head.iter_mut() {
                if row[p].is_zero() {
                    continue;
                }
                let f = row[p].clone();
                for (x, r) in row.iter_mut().zip(pivot_row) {
                    if !r.is_zero() {
                        *x -= &f * r;
                    }
                }
            }
        }
        Subspace {
            ambient: self.ambient,
            basis: rows,
        }
    }
}

/// A closed 2-form α on 𝔤, the datum of a one-dimensional central extension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle2 {
    form: ExtForm,
}

impl Cocycle2 {
    pub fn new(form: ExtForm) -> Result<Self, LieError> {
        if form.degree() != 2 && !form.is_zero() {
            return Err(LieError::NotTwoForm(form.degree()));
        }
        Ok(Cocycle2 { form })
    }

    pub fn zero(n: usize) -> Self {
        Cocycle2 {
            form: ExtForm::zero(n, 2),
        }
    }

    /// α from values α(e_{i+1}, e_{j+1}) = c.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize, Rat)]) -> Self {
        let mut f = ExtForm::zero(n, 2);
        for (i, j, c) in pairs {
            f = f
                .add(&ExtForm::monomial(n, &[*i, *j], c.clone()))
                .expect("same space");
        }
        Cocycle2 { form: f }
    }

    /// The cocycle α(e_i, e_j) = (j - i)[i + j = n + 1] extending V_n to V_{n+1}.
    pub fn v_tower(n: usize) -> Self {
        let pairs: Vec<(usize, usize, Rat)> = (1..=n)
            .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
            .filter(|(i, j)| i + j == n + 1)
            .map(|(i, j)| (i - 1, j - 1, rat::int((j - i) as i64)))
            .collect();
        Cocycle2::from_pairs(n, &pairs)
    }

    /// The cocycle α(e_1, e_n) = 1 extending Q_n to Q_{n+1} (n ≥ 2).
    pub fn q_tower(n: usize) -> Self {
        assert!(n >= 2);
        Cocycle2::from_pairs(n, &[(0, n - 1, Rat::one())])
    }

    pub fn form(&self) -> &ExtForm {
        &self.form
    }

    pub fn value(&self, i: usize, j: usize) -> Rat {
        if self.form.is_zero() {
            return Rat::zero();
        }
        self.form.pair(i, j)
    }

    pub fn check_closed(&self, g: &LieAlgebra) -> Result<(), LieError> {
        if self.form.nvars() != g.dim() {
            return Err(LieError::DimensionMismatch {
                form: self.form.nvars(),
                algebra: g.dim(),
            });
        }
        if self.form.is_zero() {
            return Ok(());
        }
        let d = crate::forms::ce_differential(g, &self.form);
        if d.is_zero() {
            Ok(())
        } else {
            Err(LieError::NotClosed(d.to_string()))
        }
    }

    pub fn is_closed(&self, g: &LieAlgebra) -> bool {
        self.check_closed(g).is_ok()
    }
}

/// Isomorphism-invariant summary. Different profiles certify
/// non-isomorphism; equal profiles are inconclusive.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Profile {
    pub dim: usize,
    pub lower_central_dims: Vec<usize>,
    pub derived_dims: Vec<usize>,
    pub center_dim: usize,
    pub is_filiform: bool,
    pub is_n_graded: bool,
    pub generic_poisson_rank: usize,
    pub b1: usize,
    pub b2: usize,
    pub rational_structure_constants: bool,
}

impl Profile {
    /// Names of the fields that differ.
    pub fn differences(&self, other: &Profile) -> Vec<&'static str> {
        let mut d = Vec::new();
        macro_rules! cmp {
            ($($f:ident),*) => {$(if self.$f != other.$f { d.push(stringify!($f)); })*};
        }
        cmp!(
            dim,
            lower_central_dims,
            derived_dims,
            center_dim,
            is_filiform,
            is_n_graded,
            generic_poisson_rank,
            b1,
            b2,
            rational_structure_constants
        );
        d
    }
}

/// Isomorphism invariants, except `is_n_graded`, which is read off the given
/// basis: a difference there alone does not prove non-isomorphism.
pub fn invariant_profile(g: &LieAlgebra) -> Profile {
    let cfg = crate::coadjoint::SamplingConfig::default();
    let betti = crate::forms::cohomology_dims(g, 2.min(g.dim()));
    Profile {
        dim: g.dim(),
        lower_central_dims: g.lower_central_series().iter().map(Subspace::dim).collect(),
        derived_dims: g.derived_series().iter().map(Subspace::dim).collect(),
        center_dim: g.center().dim(),
        is_filiform: g.is_filiform(),
        is_n_graded: g.is_n_graded(),
        generic_poisson_rank: crate::coadjoint::generic_rank(g, &cfg).rank,
        b1: betti.get(1).copied().unwrap_or(0),
        b2: betti.get(2).copied().unwrap_or(0),
        // Structure constants are stored as exact rationals.
        rational_structure_constants: true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat::int;

    #[test]
    fn v5_brackets() {
        let g = LieAlgebra::v_family(5);
        assert_eq!(g.bracket_basis(0, 3), vec![(4, int(3))]);
        assert_eq!(g.bracket_basis(1, 2), vec![(4, int(1))]);
        assert!(g.bracket_basis(1, 3).is_empty());
        assert_eq!(g.bracket_basis(3, 0), vec![(4, int(-3))]);
        assert!(g.jacobi_check().is_ok());
    }

    #[test]
    fn heisenberg_from_both_families() {
        let h = LieAlgebra::heisenberg();
        assert_eq!(LieAlgebra::q_family(3), h);
        assert_eq!(LieAlgebra::v_family(3), h);
        assert_eq!(h.brackets().count(), 1);
    }

    #[test]
    fn small_families_agree() {
        for n in 1..=3 {
            assert_eq!(LieAlgebra::q_family(n), LieAlgebra::v_family(n));
        }
        // Q_4 ≅ V_4, but not with identical structure constants.
        assert_ne!(LieAlgebra::q_family(4), LieAlgebra::v_family(4));
        assert_eq!(LieAlgebra::v_family(1).brackets().count(), 0);
    }

    #[test]
    fn jacobi_on_v8_and_abelian() {
        assert!(LieAlgebra::v_family(8).jacobi_check().is_ok());
        assert!(LieAlgebra::abelian(5).jacobi_check().is_ok());
    }

    #[test]
    fn perturbed_v6_violates_jacobi() {
        let g = LieAlgebra::v_family(6);
        let brackets = g.brackets().map(|(i, j, t)| {
            let t = if (i, j) == (1, 2) {
                vec![(4, int(2))]
            } else {
                t.to_vec()
            };
            (i, j, t)
        });
        let bad = LieAlgebra::new_unchecked(6, brackets.collect::<Vec<_>>()).unwrap();
        assert!(bad.jacobi_check().is_err());
        assert!(matches!(
            LieAlgebra::new(
                6,
                bad.brackets()
                    .map(|(i, j, t)| (i, j, t.to_vec()))
                    .collect::<Vec<_>>()
            ),
            Err(LieError::Jacobi(_))
        ));
    }

    #[test]
    fn constructor_errors() {
        assert!(matches!(
            LieAlgebra::new(2, [(0, 2, vec![])]),
            Err(LieError::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            LieAlgebra::new(2, [(1, 1, vec![(0, int(1))])]),
            Err(LieError::NonzeroSelfBracket(1))
        ));
        // Reversed pair is stored negated.
        let g = LieAlgebra::new(3, [(1, 0, vec![(2, int(1))])]).unwrap();
        assert_eq!(g.bracket_basis(0, 1), vec![(2, int(-1))]);
    }

    #[test]
    fn heisenberg_as_extension_of_plane() {
        let alpha = Cocycle2::from_pairs(2, &[(0, 1, int(1))]);
        let h = LieAlgebra::abelian(2).central_extension(&alpha).unwrap();
        assert_eq!(h, LieAlgebra::heisenberg());
    }

    #[test]
    fn tower_extensions_reproduce_families() {
        for n in 2..9 {
            let v = LieAlgebra::v_family(n)
                .central_extension(&Cocycle2::v_tower(n))
                .unwrap();
            assert_eq!(v, LieAlgebra::v_family(n + 1));
            assert_eq!(v.family_tag(), Some(Family::V));
            let q = LieAlgebra::q_family(n)
                .central_extension(&Cocycle2::q_tower(n))
                .unwrap();
            assert_eq!(q, LieAlgebra::q_family(n + 1));
        }
    }

    #[test]
    fn zero_cocycle_gives_direct_sum() {
        let g = LieAlgebra::heisenberg();
        let ext = g.central_extension(&Cocycle2::zero(3)).unwrap();
        assert_eq!(ext.dim(), 4);
        assert_eq!(ext.brackets().count(), 1);
        assert_eq!(ext.center().dim(), 2);
    }

    #[test]
    fn non_closed_cocycle_rejected() {
        // d(w2^w4) = -w2^dw4 = -2 w2^w1^w3 on V_4.
        let g = LieAlgebra::v_family(4);
        let alpha = Cocycle2::from_pairs(4, &[(1, 3, int(1))]);
        assert!(matches!(
            g.central_extension(&alpha),
            Err(LieError::NotClosed(_))
        ));
    }

    #[test]
    fn derived_series_of_v7() {
        let g = LieAlgebra::v_family(7);
        let ds = g.derived_series();
        assert_eq!(ds.len(), 4);
        assert_eq!(ds[1], Subspace::coordinate(7, 2..7));
        assert_eq!(ds[2], Subspace::coordinate(7, [6]));
        assert_eq!(ds[3].dim(), 0);
        assert_eq!(g.solvable_step(), Some(3));
        assert_eq!(LieAlgebra::v_family(6).solvable_step(), Some(2));
    }

    #[test]
    fn abelian_series() {
        let g = LieAlgebra::abelian(4);
        let lcs = g.lower_central_series();
        assert_eq!(
            lcs.iter().map(Subspace::dim).collect::<Vec<_>>(),
            vec![4, 0]
        );
        assert_eq!(g.nilpotency_class(), Some(1));
        assert!(!g.is_filiform());
    }

    #[test]
    fn v8_is_filiform() {
        let g = LieAlgebra::v_family(8);
        let dims: Vec<usize> = g.lower_central_series().iter().map(Subspace::dim).collect();
        assert_eq!(dims, vec![8, 6, 5, 4, 3, 2, 1, 0]);
        assert!(g.is_filiform());
        assert!(g.is_n_graded());
        assert!(LieAlgebra::q_family(8).is_filiform());
        assert_eq!(LieAlgebra::q_family(8).nilpotency_class(), Some(7));
    }

    #[test]
    fn json_round_trip_and_rejection() {
        let g = LieAlgebra::v_family(5);
        let text = g.to_json();
        assert!(text.starts_with(r#"{"dim":5,"brackets":[{"i":1,"j":2,"terms":[{"k":3,"c":"1"}]}"#));
        let back = LieAlgebra::from_json(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.family_tag(), Some(Family::V));
        let bad = r#"{"dim":3,"brackets":[{"i":1,"j":2,"terms":[{"k":3,"c":"1"}]},{"i":1,"j":3,"terms":[{"k":1,"c":"1"}]}]}"#;
        assert!(matches!(
            LieAlgebra::from_json(bad),
            Err(LieError::Jacobi(_)) | Err(LieError::Format(_))
        ));
        assert!(
            LieAlgebra::from_json(r#"{"dim":2,"brackets":[{"i":1,"j":3,"terms":[]}]}"#).is_err()
        );
    }

    #[test]
    fn drop_last_inverts_extension() {
        let g = LieAlgebra::v_family(6);
        assert_eq!(g.drop_last().unwrap(), LieAlgebra::v_family(5));
    }
}
