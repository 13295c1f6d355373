//! Lie–Poisson structure on 𝔤*, generic coadjoint rank, Casimir polynomials
//! and coadjoint orbit classification.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactmath::matrix::term_rank;
use crate::exactmath::rat::{self, Rat};
use crate::exactmath::{
    integrate_exact_form_with_parameters, ExactMathError, Poly, PolyMatrix, RatMatrix,
};
use crate::liealg::{Family, LieAlgebra};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoadjointError {
    #[error(transparent)]
    Exact(#[from] ExactMathError),
    #[error("generator {generator} is not a Casimir: {{x_{}, F}} != 0", .witness + 1)]
    NotCasimir { generator: String, witness: usize },
    #[error(
        "found {found} independent Casimir generators up to degree {max_degree}, expected {nu}"
    )]
    IncompleteBasis {
        found: usize,
        nu: usize,
        max_degree: u32,
        partial: Vec<String>,
    },
    #[error("orbit classification is implemented for the V_n family only")]
    NotVFamily,
    #[error("point has {got} coordinates, algebra has dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("q must be at least 1")]
    InvalidQ,
}

/// The matrix A with A_{ik} = {x_i, x_k} = Σ_m c^m_{ik} x_m.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoissonMatrix {
    matrix: PolyMatrix,
}

pub fn poisson_matrix(g: &LieAlgebra) -> PoissonMatrix {
    let n = g.dim();
    let mut m = PolyMatrix::zeros(n, n, n);
    for (i, j, terms) in g.brackets() {
        let entry = terms.iter().fold(Poly::zero(n), |acc, (k, c)| {
            &acc + &Poly::var(n, *k).scale(c)
        });
        m.set(j, i, -&entry);
        m.set(i, j, entry);
    }
    PoissonMatrix { matrix: m }
}

impl PoissonMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn entry(&self, i: usize, k: usize) -> &Poly {
        self.matrix.get(i, k)
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.matrix
    }

    pub fn evaluate(&self, point: &[Rat]) -> Result<RatMatrix, ExactMathError> {
        self.matrix.evaluate(point)
    }

    /// {f, h} = Σ_{i,j} ∂f/∂x_i ∂h/∂x_j A_{ij}.
    pub fn bracket(&self, f: &Poly, h: &Poly) -> Poly {
        let n = self.dim();
        assert_eq!(f.nvars(), n);
        assert_eq!(h.nvars(), n);
        let df: Vec<Poly> = (0..n).map(|i| f.partial(i)).collect();
        let dh: Vec<Poly> = (0..n).map(|j| h.partial(j)).collect();
        let mut acc = Poly::zero(n);
        for (i, fi) in df.iter().enumerate().filter(|(_, p)| !p.is_zero()) {
            for (j, hj) in dh.iter().enumerate().filter(|(_, p)| !p.is_zero()) {
                let a = self.entry(i, j);
                if !a.is_zero() {
                    acc = &acc + &(&(fi * hj) * a);
                }
            }
        }
        acc
    }

    /// {x_i, F} = Σ_k A_{ik} ∂F/∂x_k.
    pub fn bracket_with_coordinate(&self, i: usize, f: &Poly) -> Poly {
        let n = self.dim();
        (0..n).fold(Poly::zero(n), |acc, k| {
            let a = self.entry(i, k);
            if a.is_zero() {
                return acc;
            }
            let d = f.partial(k);
            if d.is_zero() {
                acc
            } else {
                &acc + &(a * &d)
            }
        })
    }

    /// A_{ik} = -A_{ki}, zero diagonal, entries linear with no constant term.
    pub fn is_skew_linear(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            (0..n).all(|k| {
                let a = self.entry(i, k);
                a == &-self.entry(k, i)
                    && (a.is_zero() || (a.is_homogeneous() && a.degree() == Some(1)))
            })
        })
    }
}

pub fn lie_poisson_bracket(g: &LieAlgebra, f: &Poly, h: &Poly) -> Poly {
    poisson_matrix(g).bracket(f, h)
}

/// Deterministic pseudo-random rational sample points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplingConfig {
    pub points: usize,
    pub seed: u64,
    /// Numerators drawn uniformly from [-bound, bound].
    pub numerator_bound: i64,
    /// Denominators drawn uniformly from [1, max].
    pub denominator_max: i64,
}

pub const DEFAULT_SEED: u64 = 0xC0FFEE;

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig {
            points: 8,
            seed: DEFAULT_SEED,
            numerator_bound: 20,
            denominator_max: 10,
        }
    }
}

impl SamplingConfig {
    pub fn with_seed(seed: u64) -> Self {
        SamplingConfig {
            seed,
            ..Default::default()
        }
    }

    pub fn sample_points(&self, n: usize) -> Vec<Vec<Rat>> {
        self.sample_points_count(n, self.points)
    }

    pub fn sample_points_count(&self, n: usize, count: usize) -> Vec<Vec<Rat>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        (0..count)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        let num = rng.gen_range(-self.numerator_bound..=self.numerator_bound);
                        let den = rng.gen_range(1..=self.denominator_max);
                        rat::rat(num, den)
                    })
                    .collect()
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericRank {
    pub rank: usize,
    /// n - rank: the number of independent Casimir functions.
    pub nu: usize,
}

/// Maximum of rank A(p) over the sample points.
pub fn generic_rank(g: &LieAlgebra, cfg: &SamplingConfig) -> GenericRank {
    let a = poisson_matrix(g);
    let n = g.dim();
    let rank = cfg
        .sample_points(n)
        .iter()
        .map(|p| a.evaluate(p).expect("point has n coordinates").rank())
        .max()
        .unwrap_or(0);
    GenericRank { rank, nu: n - rank }
}

/// Symbolic confirmation of a sampled generic rank.
///
/// The lower bound is a nonvanishing minor of the symbolic Poisson matrix;
/// the upper bound is the term rank of its zero pattern rounded down to an
/// even number (A is skew). Equal bounds certify the rank exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankCertificate {
    pub sampled: GenericRank,
    pub minor_rows: Vec<usize>,
    pub minor_cols: Vec<usize>,
    pub minor_determinant: Poly,
    pub upper_bound: usize,
}

impl RankCertificate {
    pub fn lower_bound(&self) -> usize {
        if self.minor_determinant.is_zero() {
            0
        } else {
            self.minor_rows.len()
        }
    }

    pub fn certified(&self) -> bool {
        self.lower_bound() == self.upper_bound && self.upper_bound == self.sampled.rank
    }
}

pub fn generic_rank_symbolic(g: &LieAlgebra, cfg: &SamplingConfig) -> RankCertificate {
    let a = poisson_matrix(g);
    let n = g.dim();
    let mut best: Option<(usize, Vec<usize>, Vec<usize>)> = None;
    for p in cfg.sample_points(n) {
        let e = a.evaluate(&p).expect("point has n coordinates").eliminate();
        if best.as_ref().is_none_or(|b| e.rank > b.0) {
            best = Some((e.rank, e.pivot_rows, e.pivot_cols));
        }
    }
    let (rank, mut rows, mut cols) = best.unwrap_or((0, Vec::new(), Vec::new()));
    rows.sort_unstable();
    cols.sort_unstable();
    let minor_determinant = a
        .matrix()
        .submatrix(&rows, &cols)
        .determinant()
        .expect("square minor");
    let tr = term_rank(&a.matrix().nonzero_pattern());
    RankCertificate {
        sampled: GenericRank { rank, nu: n - rank },
        minor_rows: rows,
        minor_cols: cols,
        minor_determinant,
        upper_bound: tr - tr % 2,
    }
}

/// Exhaustive exact check of {x_i, F} = 0; the error carries the first i
/// that fails.
pub fn is_casimir(g: &LieAlgebra, f: &Poly) -> Result<(), usize> {
    let a = poisson_matrix(g);
    is_casimir_with(&a, f)
}

fn is_casimir_with(a: &PoissonMatrix, f: &Poly) -> Result<(), usize> {
    match (0..a.dim()).find(|&i| !a.bracket_with_coordinate(i, f).is_zero()) {
        Some(i) => Err(i),
        None => Ok(()),
    }
}

fn x(n: usize, one_based: usize) -> Poly {
    Poly::var(n, one_based - 1)
}

/// ∂F/∂x_{q+1}, ..., ∂F/∂x_{2q+1} for the second Casimir of V_{2q+2}, from
/// ∂F/∂x_{q+1} = x_{2q+2}^q and, for m = 0..q-1,
/// ∂F/∂x_{q+m+2} = -1/((2m+2) x_{2q+2}) Σ_{l=1}^{m+1} (l+m) x_{2q+l-m} ∂F/∂x_{q+l}.
pub fn casimir_partials_v_even(q: usize) -> Result<Vec<Poly>, CoadjointError> {
    if q == 0 {
        return Err(CoadjointError::InvalidQ);
    }
    let n = 2 * q + 2;
    let top = x(n, n);
    let mut s = vec![top.pow(q as u32)];
    for m in 0..q {
        let mut sum = Poly::zero(n);
        for l in 1..=m + 1 {
            let term = &x(n, 2 * q + l - m) * &s[l - 1];
            sum = &sum + &term.scale(&rat::int((l + m) as i64));
        }
        let quotient = sum
            .div_exact(&top)
            .expect("recursion keeps a factor of x_n in every partial sum");
        s.push(quotient.scale(&rat::rat(-1, (2 * m + 2) as i64)));
    }
    Ok(s)
}

/// The second generator F_{2q+2} of the Casimir ring of V_{2q+2}, normalized
/// so that ∂F/∂x_{q+1} = x_{2q+2}^q and no monomial is a pure power of
/// x_{2q+2}.
pub fn casimir_solver_v_even(q: usize) -> Result<Poly, CoadjointError> {
    let s = casimir_partials_v_even(q)?;
    let n = 2 * q + 2;
    let vars: Vec<usize> = (q..=2 * q).collect();
    let f = integrate_exact_form_with_parameters(&s, &vars)?;
    if let Err(w) = is_casimir(&LieAlgebra::v_family(n), &f) {
        return Err(CoadjointError::NotCasimir {
            generator: f.to_string(),
            witness: w,
        });
    }
    Ok(f)
}

/// B̃: rows 1..q and columns q+1..2q+1 of the Poisson matrix of V_{2q+2},
/// with the row (1, 0, ..., 0) appended at the bottom.
pub fn btilde_matrix(q: usize) -> PolyMatrix {
    assert!(q >= 1);
    let n = 2 * q + 2;
    let a = poisson_matrix(&LieAlgebra::v_family(n));
    let rows: Vec<usize> = (0..q).collect();
    let cols: Vec<usize> = (q..=2 * q).collect();
    let mut appended = vec![Rat::zero(); q + 1];
    appended[0] = Rat::one();
    a.matrix().submatrix(&rows, &cols).with_row(&appended)
}

pub fn det_btilde(q: usize) -> Poly {
    btilde_matrix(q).determinant().expect("square")
}

/// Coefficient of x_{2q+1}^{q+1} in F_{2q+2}:
/// (-1)^q ∏_{m=0}^{q-1}(2m+1) / (2^q (q+1)!).
pub fn leading_coefficient_closed_form(q: usize) -> Rat {
    let odd: i64 = (0..q as i64).map(|m| 2 * m + 1).product();
    let sign = if q.is_multiple_of(2) { 1 } else { -1 };
    let den = num_bigint::BigInt::from(2).pow(q as u32) * rat::factorial(q as u32 + 1);
    Rat::new((sign * odd).into(), den)
}

/// Splits F = c·x_{2q+1}^{q+1} + x_{2q+2}·G by exact division. `None` if the
/// remainder is not divisible by x_{2q+2}.
pub fn split_leading(f: &Poly, q: usize) -> Option<(Rat, Poly)> {
    let n = 2 * q + 2;
    assert_eq!(f.nvars(), n);
    let mut exps = vec![0u32; n];
    exps[2 * q] = q as u32 + 1;
    let c = f.coefficient(&exps);
    let rest = f - &Poly::monomial(c.clone(), exps);
    let g = rest.div_exact(&x(n, n))?;
    Some((c, g))
}

/// Casimir generators of Q_n (n ≥ 3): x_n and, for k = 2..n-2,
/// x_n^{n-1-k} · Σ_j s^j/j! x_{k+j} with s = -x_{n-1}/x_n, made primitive.
/// These are the coordinates x_k transported to x_{n-1} = 0 along the
/// linear flow x_k' = x_{k+1}, cleared of denominators.
pub fn q_family_casimirs(n: usize) -> Vec<Poly> {
    assert!(n >= 3);
    let mut gens = vec![x(n, n)];
    let minus_sub = -&x(n, n - 1);
    for k in 2..=n - 2 {
        let mut p = Poly::zero(n);
        for j in 0..=n - k {
            let inv_fact = Rat::new(One::one(), rat::factorial(j as u32));
            let mut term = minus_sub.pow(j as u32).scale(&inv_fact);
            if k + j < n {
                term = &(&term * &x(n, k + j)) * &x(n, n).pow((n - 1 - k - j) as u32);
            }
            p = &p + &term;
        }
        gens.push(p.primitive());
    }
    gens
}

/// Jacobian rank of `gens` maximized over `count` sample points.
pub fn jacobian_rank(gens: &[Poly], cfg: &SamplingConfig, count: usize) -> usize {
    let Some(first) = gens.first() else {
        return 0;
    };
    let n = first.nvars();
    let grads: Vec<Vec<Poly>> = gens
        .iter()
        .map(|f| (0..n).map(|i| f.partial(i)).collect())
        .collect();
    cfg.sample_points_count(n, count)
        .iter()
        .map(|p| {
            let rows = grads
                .iter()
                .map(|g| g.iter().map(|d| d.evaluate(p).expect("n coords")).collect())
                .collect();
            RatMatrix::from_rows(rows).expect("rectangular").rank()
        })
        .max()
        .unwrap_or(0)
}

/// Independence test: full Jacobian rank at one of 4 sample points.
pub fn functionally_independent(gens: &[Poly], cfg: &SamplingConfig) -> bool {
    jacobian_rank(gens, cfg, 4) == gens.len()
}

/// All Casimir polynomials that are homogeneous of degree `d`, as a basis of
/// that vector space.
pub fn homogeneous_casimirs(g: &LieAlgebra, d: u32) -> Vec<Poly> {
    let n = g.dim();
    let a = poisson_matrix(g);
    let monomials = homogeneous_monomials(n, d);
    // Image of each monomial under F ↦ ({x_1,F}, ..., {x_n,F}), flattened.
    let mut rows_index: std::collections::BTreeMap<(usize, Vec<u32>), usize> = Default::default();
    let mut entries: Vec<(usize, usize, Rat)> = Vec::new();
    for (col, m) in monomials.iter().enumerate() {
        let f = Poly::monomial(Rat::one(), m.clone());
        for i in 0..n {
            for (mono, c) in a.bracket_with_coordinate(i, &f).terms() {
                let key = (i, mono.exponents().to_vec());
                let next = rows_index.len();
                let row = *rows_index.entry(key).or_insert(next);
                entries.push((row, col, c.clone()));
            }
        }
    }
    let kernel = if rows_index.is_empty() {
        (0..monomials.len())
            .map(|c| {
                let mut v = vec![Rat::zero(); monomials.len()];
                v[c] = Rat::one();
                v
            })
            .collect()
    } else {
        let mut m = RatMatrix::zeros(rows_index.len(), monomials.len());
        for (r, c, v) in entries {
            m[(r, c)] += v;
        }
        m.nullspace()
    };
    kernel
        .into_iter()
        .map(|v| {
            let terms = monomials
                .iter()
                .zip(v)
                .map(|(m, c)| (crate::exactmath::Monomial::new(m.clone()), c));
            Poly::from_terms(n, terms).primitive()
        })
        .collect()
}

fn homogeneous_monomials(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            cur[i] = 0;
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    rec(0, d, &mut vec![0; n], &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CasimirMethod {
    /// V_{2q+1}: the coordinate x_n.
    VOdd,
    /// V_{2q+2}: x_n and the recursive solver's F_{2q+2}.
    VEvenSolver,
    /// Q_n: closed-form transported coordinates.
    QClosedForm,
    /// Homogeneous polynomial ansatz, escalating degree up to the cap.
    Ansatz,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CasimirSet {
    pub generators: Vec<Poly>,
    pub nu: usize,
    pub generic_rank: usize,
    pub method: CasimirMethod,
    /// Largest generator degree.
    pub max_degree: u32,
}

/// Degree cap for the polynomial ansatz used outside the Q_n / V_n families.
pub const DEFAULT_ANSATZ_DEGREE: u32 = 4;

pub fn casimir_basis(g: &LieAlgebra, cfg: &SamplingConfig) -> Result<CasimirSet, CoadjointError> {
    casimir_basis_with_degree(g, cfg, DEFAULT_ANSATZ_DEGREE)
}

pub fn casimir_basis_with_degree(
    g: &LieAlgebra,
    cfg: &SamplingConfig,
    max_ansatz_degree: u32,
) -> Result<CasimirSet, CoadjointError> {
    let n = g.dim();
    let gr = generic_rank(g, cfg);
    let (generators, method) = match g.recognize_family() {
        Some(Family::V) if n >= 3 && n % 2 == 1 => (vec![x(n, n)], CasimirMethod::VOdd),
        Some(Family::V) if n >= 4 => {
            let q = (n - 2) / 2;
            (
                vec![x(n, n), casimir_solver_v_even(q)?],
                CasimirMethod::VEvenSolver,
            )
        }
        Some(Family::Q) if n >= 3 => (q_family_casimirs(n), CasimirMethod::QClosedForm),
        _ => (
            ansatz_basis(g, cfg, gr.nu, max_ansatz_degree)?,
            CasimirMethod::Ansatz,
        ),
    };
    let a = poisson_matrix(g);
    for f in &generators {
        if let Err(w) = is_casimir_with(&a, f) {
            return Err(CoadjointError::NotCasimir {
                generator: f.to_string(),
                witness: w,
            });
        }
    }
    if generators.len() != gr.nu || !functionally_independent(&generators, cfg) {
        return Err(CoadjointError::IncompleteBasis {
            found: jacobian_rank(&generators, cfg, 4),
            nu: gr.nu,
            max_degree: max_ansatz_degree,
            partial: generators.iter().map(Poly::to_string).collect(),
        });
    }
    let max_degree = generators
        .iter()
        .filter_map(Poly::degree)
        .max()
        .unwrap_or(0);
    Ok(CasimirSet {
        generators,
        nu: gr.nu,
        generic_rank: gr.rank,
        method,
        max_degree,
    })
}

fn ansatz_basis(
    g: &LieAlgebra,
    cfg: &SamplingConfig,
    nu: usize,
    max_degree: u32,
) -> Result<Vec<Poly>, CoadjointError> {
    let mut chosen: Vec<Poly> = Vec::new();
    'degrees: for d in 1..=max_degree {
        for cand in homogeneous_casimirs(g, d) {
            if chosen.len() == nu {
                break 'degrees;
            }
            let mut trial = chosen.clone();
            trial.push(cand.clone());
            if jacobian_rank(&trial, cfg, 4) == trial.len() {
                chosen.push(cand);
            }
        }
        if chosen.len() == nu {
            break;
        }
    }
    if chosen.len() < nu {
        return Err(CoadjointError::IncompleteBasis {
            found: chosen.len(),
            nu,
            max_degree,
            partial: chosen.iter().map(Poly::to_string).collect(),
        });
    }
    Ok(chosen)
}

/// One defining equation `poly = value` of an orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitEquation {
    pub poly: Poly,
    pub value: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitDescriptor {
    pub base_point: Vec<Rat>,
    pub dimension: usize,
    /// Equations in the ambient coordinates x_1..x_n. Together they cut out
    /// the orbit; their count plus the dimension is n.
    pub equations: Vec<OrbitEquation>,
    /// Number of trailing zero coordinates stripped before reaching a
    /// generic stratum.
    pub depth: usize,
    /// Dimension of the algebra V_{n-depth} whose generic stratum holds the
    /// orbit.
    pub stratum_dim: usize,
}

/// Coadjoint orbit through `p` in V_n*: level sets of x_n and F_n on
/// even-dimensional generic strata, hyperplanes x_n = const on odd ones, and
/// the orbits of V_{n-1}* when x_n = 0.
pub fn classify_orbit(g: &LieAlgebra, p: &[Rat]) -> Result<OrbitDescriptor, CoadjointError> {
    if *g != LieAlgebra::v_family(g.dim()) {
        return Err(CoadjointError::NotVFamily);
    }
    let n = g.dim();
    if p.len() != n {
        return Err(CoadjointError::DimensionMismatch {
            expected: n,
            got: p.len(),
        });
    }
    let mut equations = Vec::new();
    let mut k = n;
    while k > 2 && p[k - 1].is_zero() {
        equations.push(OrbitEquation {
            poly: x(n, k),
            value: Rat::zero(),
        });
        k -= 1;
    }
    let depth = n - k;
    let dimension = if k <= 2 {
        for i in (1..=k).rev() {
            equations.push(OrbitEquation {
                poly: x(n, i),
                value: p[i - 1].clone(),
            });
        }
        0
    } else if k % 2 == 1 {
        equations.push(OrbitEquation {
            poly: x(n, k),
            value: p[k - 1].clone(),
        });
        k - 1
    } else {
        let q = (k - 2) / 2;
        let f = casimir_solver_v_even(q)?;
        let value = f.evaluate(&p[..k])?;
        equations.push(OrbitEquation {
            poly: x(n, k),
            value: p[k - 1].clone(),
        });
        equations.push(OrbitEquation {
            poly: f.extend_vars(n),
            value,
        });
        k - 2
    };
    Ok(OrbitDescriptor {
        base_point: p.to_vec(),
        dimension,
        equations,
        depth,
        stratum_dim: k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat::{int, rat};

    fn p(s: &str, n: usize) -> Poly {
        Poly::parse(s, n).unwrap()
    }

    #[test]
    fn poisson_matrix_v4() {
        let a = poisson_matrix(&LieAlgebra::v_family(4));
        assert_eq!(a.entry(0, 1), &p("x3", 4));
        assert_eq!(a.entry(0, 2), &p("2*x4", 4));
        for (i, k) in [(0, 3), (1, 2), (1, 3), (2, 3)] {
            assert!(a.entry(i, k).is_zero());
        }
        assert!(a.is_skew_linear());
    }

    #[test]
    fn poisson_matrix_abelian_and_q5() {
        let a = poisson_matrix(&LieAlgebra::abelian(3));
        assert!((0..3).all(|i| (0..3).all(|k| a.entry(i, k).is_zero())));
        let q = poisson_matrix(&LieAlgebra::q_family(5));
        for k in 1..4 {
            assert_eq!(q.entry(0, k), &Poly::var(5, k + 1));
        }
        for j in 1..5 {
            for k in 1..5 {
                assert!(q.entry(j, k).is_zero());
            }
        }
    }

    #[test]
    fn brackets() {
        let g4 = LieAlgebra::v_family(4);
        let f4 = p("x2*x4 - 1/4*x3^2", 4);
        assert!(lie_poisson_bracket(&g4, &p("x1", 4), &f4).is_zero());
        assert!(lie_poisson_bracket(&g4, &f4, &f4).is_zero());
        let g5 = LieAlgebra::v_family(5);
        assert_eq!(
            lie_poisson_bracket(&g5, &p("x2", 5), &p("x3", 5)),
            p("x5", 5)
        );
    }

    #[test]
    fn generic_ranks() {
        let cfg = SamplingConfig::default();
        assert_eq!(
            generic_rank(&LieAlgebra::v_family(7), &cfg),
            GenericRank { rank: 6, nu: 1 }
        );
        assert_eq!(
            generic_rank(&LieAlgebra::v_family(8), &cfg),
            GenericRank { rank: 6, nu: 2 }
        );
        assert_eq!(
            generic_rank(&LieAlgebra::q_family(6), &cfg),
            GenericRank { rank: 2, nu: 4 }
        );
    }

    #[test]
    fn rank_at_point_v5() {
        let a = poisson_matrix(&LieAlgebra::v_family(5));
        let ones = vec![int(1); 5];
        assert_eq!(a.evaluate(&ones).unwrap().rank(), 4);
    }

    #[test]
    fn symbolic_certificate() {
        let cfg = SamplingConfig::default();
        for n in [5, 6, 9] {
            let c = generic_rank_symbolic(&LieAlgebra::v_family(n), &cfg);
            assert!(c.certified(), "V_{n}: {c:?}");
        }
        let c = generic_rank_symbolic(&LieAlgebra::q_family(7), &cfg);
        assert!(c.certified());
        assert_eq!(c.sampled.rank, 2);
    }

    #[test]
    fn casimir_checks() {
        for n in 1..8 {
            assert!(is_casimir(&LieAlgebra::v_family(n), &Poly::var(n, n - 1)).is_ok());
        }
        let f6 = p("x3*x6^2 - 1/2*x4*x5*x6 + 1/8*x5^3", 6);
        assert!(is_casimir(&LieAlgebra::v_family(6), &f6).is_ok());
        assert_eq!(is_casimir(&LieAlgebra::v_family(4), &p("x1", 4)), Err(1));
    }

    #[test]
    fn solver_small_cases() {
        assert_eq!(casimir_solver_v_even(1).unwrap(), p("x2*x4 - 1/4*x3^2", 4));
        assert_eq!(
            casimir_solver_v_even(2).unwrap(),
            p("x3*x6^2 - 1/2*x4*x5*x6 + 1/8*x5^3", 6)
        );
        assert_eq!(casimir_solver_v_even(0), Err(CoadjointError::InvalidQ));
    }

    #[test]
    fn f8_partials_match_recursion_values() {
        let s = casimir_partials_v_even(3).unwrap();
        assert_eq!(s[0], p("x8^3", 8));
        assert_eq!(s[1], p("-1/2*x7*x8^2", 8));
        assert_eq!(s[2], p("-1/2*x6*x8^2 + 3/8*x7^2*x8", 8));
        assert_eq!(s[3], p("-1/2*x5*x8^2 + 3/4*x6*x7*x8 - 15/48*x7^3", 8));
    }

    #[test]
    fn btilde_determinants() {
        assert_eq!(det_btilde(1).primitive(), p("x4", 4));
        for q in 1..=3 {
            let d = det_btilde(q);
            let mag = &Poly::var(2 * q + 2, 2 * q + 1)
                .pow(q as u32)
                .scale(&Rat::from_integer(
                    num_bigint::BigInt::from(2).pow(q as u32) * rat::factorial(q as u32),
                ));
            assert!(d == *mag || d == -mag, "q={q}: {d}");
        }
    }

    #[test]
    fn closed_form_leading_coefficients() {
        assert_eq!(leading_coefficient_closed_form(1), rat(-1, 4));
        assert_eq!(leading_coefficient_closed_form(2), rat(1, 8));
        assert_eq!(leading_coefficient_closed_form(3), rat(-15, 192));
    }

    #[test]
    fn split_f6() {
        let f6 = casimir_solver_v_even(2).unwrap();
        let (c, g) = split_leading(&f6, 2).unwrap();
        assert_eq!(c, rat(1, 8));
        assert_eq!(g, p("x3*x6 - 1/2*x4*x5", 6));
    }

    #[test]
    fn q_family_generators() {
        let q4 = q_family_casimirs(4);
        assert_eq!(q4, vec![p("x4", 4), p("2*x2*x4 - x3^2", 4)]);
        for n in 3..9 {
            let g = LieAlgebra::q_family(n);
            let gens = q_family_casimirs(n);
            assert_eq!(gens.len(), n - 2);
            for f in &gens {
                assert!(is_casimir(&g, f).is_ok(), "Q_{n}: {f}");
            }
        }
    }

    #[test]
    fn casimir_bases() {
        let cfg = SamplingConfig::default();
        let v7 = casimir_basis(&LieAlgebra::v_family(7), &cfg).unwrap();
        assert_eq!(v7.generators, vec![p("x7", 7)]);
        let v8 = casimir_basis(&LieAlgebra::v_family(8), &cfg).unwrap();
        assert_eq!(v8.generators.len(), 2);
        assert_eq!(v8.generators[1], casimir_solver_v_even(3).unwrap());
        let q4 = casimir_basis(&LieAlgebra::q_family(4), &cfg).unwrap();
        assert_eq!(q4.generators, vec![p("x4", 4), p("2*x2*x4 - x3^2", 4)]);
        let q6 = casimir_basis(&LieAlgebra::q_family(6), &cfg).unwrap();
        assert_eq!(q6.nu, 4);
    }

    #[test]
    fn ansatz_matches_closed_forms() {
        let cfg = SamplingConfig::default();
        let gens = ansatz_basis(&LieAlgebra::q_family(4), &cfg, 2, 2).unwrap();
        assert_eq!(gens, vec![p("x4", 4), p("2*x2*x4 - x3^2", 4)]);
        // Degree-2 cap is too small for Q_5; the cubic needs degree 3.
        let q5 = LieAlgebra::q_family(5);
        assert!(matches!(
            ansatz_basis(&q5, &cfg, 3, 2),
            Err(CoadjointError::IncompleteBasis { found: 2, .. })
        ));
        assert_eq!(ansatz_basis(&q5, &cfg, 3, 3).unwrap().len(), 3);
    }

    #[test]
    fn abelian_casimirs_are_coordinates() {
        let cfg = SamplingConfig::default();
        let set = casimir_basis(&LieAlgebra::abelian(3), &cfg).unwrap();
        assert_eq!(set.nu, 3);
        assert_eq!(set.method, CasimirMethod::Ansatz);
        assert_eq!(set.max_degree, 1);
    }

    #[test]
    fn orbits() {
        let v5 = LieAlgebra::v_family(5);
        let o = classify_orbit(&v5, &[int(1), int(2), int(3), int(4), int(5)]).unwrap();
        assert_eq!(o.dimension, 4);
        assert_eq!(o.equations.len(), 1);
        assert_eq!(o.equations[0].value, int(5));

        let v4 = LieAlgebra::v_family(4);
        let o = classify_orbit(&v4, &[int(1), int(1), int(1), int(2)]).unwrap();
        assert_eq!(o.dimension, 2);
        assert_eq!(o.equations[1].value, rat(7, 4));

        let o = classify_orbit(&v4, &[int(1), int(1), int(0), int(0)]).unwrap();
        assert_eq!(o.depth, 2);
        assert_eq!(o.dimension, 0);
        assert_eq!(o.equations.len(), 4);

        assert_eq!(
            classify_orbit(&LieAlgebra::q_family(6), &vec![int(1); 6]),
            Err(CoadjointError::NotVFamily)
        );
    }
}
