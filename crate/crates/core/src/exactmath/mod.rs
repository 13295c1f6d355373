//! Exact arithmetic substrate: rationals, sparse polynomials, dense
//! matrices, and exterior forms.

pub mod extform;
pub mod matrix;
pub mod poly;
pub mod rat;

use thiserror::Error;

pub use extform::ExtForm;
pub use matrix::{PolyMatrix, RatMatrix};
pub use poly::{Monomial, Poly};
pub use rat::Rat;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactMathError {
    #[error("variable count mismatch: {left} vs {right}")]
    VariableCountMismatch { left: usize, right: usize },
    #[error("form degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("matrix shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix is {0}x{1}, expected square")]
    NotSquare(usize, usize),
    #[error("rows have different lengths")]
    NotRectangular,
    /// Mixed partials disagree: ∂s_k/∂x_i ≠ ∂s_i/∂x_k (1-based in the message).
    #[error("not a gradient: d s_{k}/d x_{i} != d s_{i}/d x_{k}", i = .i + 1, k = .k + 1)]
    Compatibility { i: usize, k: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

/// Recovers F from its gradient. `components[j]` is ∂F/∂x_{vars[j]+1}; every
/// variable not listed must have zero partial, so the components may not
/// depend on it.
///
/// The result has zero constant term.
pub fn integrate_exact_form(components: &[Poly], vars: &[usize]) -> Result<Poly, ExactMathError> {
    integrate_gradient(components, vars, false)
}

/// Like [`integrate_exact_form`], but variables outside `vars` are treated
/// as parameters: F is determined up to a function of the parameters, which
/// is fixed to zero (no monomial of F is free of the integrated variables).
pub fn integrate_exact_form_with_parameters(
    components: &[Poly],
    vars: &[usize],
) -> Result<Poly, ExactMathError> {
    integrate_gradient(components, vars, true)
}

fn integrate_gradient(
    components: &[Poly],
    vars: &[usize],
    parameters: bool,
) -> Result<Poly, ExactMathError> {
    assert_eq!(components.len(), vars.len(), "one component per variable");
    let Some(first) = components.first() else {
        return Err(ExactMathError::Parse("no components to integrate".into()));
    };
    let n = first.nvars();
    for c in components {
        first.check_compatible(c)?;
    }

    for (a, (sa, &ia)) in components.iter().zip(vars).enumerate() {
        for (sb, &ib) in components.iter().zip(vars).skip(a + 1) {
            if sa.partial(ib) != sb.partial(ia) {
                return Err(ExactMathError::Compatibility { i: ia, k: ib });
            }
        }
        if !parameters {
            if let Some(j) = (0..n).find(|j| !vars.contains(j) && sa.depends_on(*j)) {
                return Err(ExactMathError::Compatibility { i: j, k: ia });
            }
        }
    }

    // Radial homotopy in the integrated variables: a term c·m of s_i whose
    // degree in those variables is d contributes c·x_i·m/(d+1).
    let mut f = Poly::zero(n);
    for (s, &i) in components.iter().zip(vars) {
        let mut part = Vec::new();
        for (m, c) in s.terms() {
            let d: u32 = vars.iter().map(|&v| m.exponent(v)).sum();
            let mut e = m.exponents().to_vec();
            e[i] += 1;
            part.push((Monomial::new(e), c / Rat::from_integer((d + 1).into())));
        }
        f = &f + &Poly::from_terms(n, part);
    }

    debug_assert!(components
        .iter()
        .zip(vars)
        .all(|(s, &i)| (&f.partial(i) - s).is_zero()));
    Ok(f)
}
