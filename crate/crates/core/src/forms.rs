//! Chevalley–Eilenberg complex of left-invariant forms.
//!
//! Sign convention: on 1-forms dφ(e_i, e_j) = φ([e_i, e_j]), so for V_n
//! dω_k = (k-2) ω_1∧ω_{k-1} + (k-4) ω_2∧ω_{k-2} + ..., extended to higher
//! degrees as an antiderivation. This is the negative of the Cartan formula
//! for left-invariant forms; closedness, exactness and cohomology are
//! unaffected.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exactmath::extform::combinations;
use crate::exactmath::rat::{self, Rat};
use crate::exactmath::{ExtForm, RatMatrix};
use crate::liealg::LieAlgebra;

/// dω_k for every basis 1-form.
pub fn one_form_differentials(g: &LieAlgebra) -> Vec<ExtForm> {
    let n = g.dim();
    let mut d: Vec<ExtForm> = (0..n).map(|_| ExtForm::zero(n, 2)).collect();
    for (i, j, terms) in g.brackets() {
        for (k, c) in terms {
            d[*k] = d[*k]
                .add(&ExtForm::monomial(n, &[i, j], c.clone()))
                .expect("same space");
        }
    }
    d
}

/// Differential of an arbitrary form.
pub fn ce_differential(g: &LieAlgebra, phi: &ExtForm) -> ExtForm {
    let d1 = one_form_differentials(g);
    differential_with(&d1, phi)
}

fn differential_with(d1: &[ExtForm], phi: &ExtForm) -> ExtForm {
    let n = phi.nvars();
    let mut out = ExtForm::zero(n, phi.degree() + 1);
    for (idx, c) in phi.terms() {
        for r in 0..idx.len() {
            let left = ExtForm::monomial(n, &idx[..r], Rat::one());
            let right = ExtForm::monomial(n, &idx[r + 1..], Rat::one());
            let term = left
                .wedge(&d1[idx[r]])
                .and_then(|t| t.wedge(&right))
                .expect("same space");
            let sign = if r % 2 == 0 { c.clone() } else { -c.clone() };
            out = out.add(&term.scale(&sign)).expect("same degree");
        }
    }
    out
}

/// Matrix of d: Λ^p → Λ^{p+1} in the lexicographic monomial bases.
pub fn differential_matrix(g: &LieAlgebra, p: usize) -> RatMatrix {
    let n = g.dim();
    let d1 = one_form_differentials(g);
    let src = combinations(n, p);
    let dst = combinations(n, p + 1);
    let mut m = RatMatrix::zeros(dst.len(), src.len());
    if p + 1 > n {
        return m;
    }
    let pos = |idx: &Vec<usize>| dst.binary_search(idx).expect("sorted tuple");
    for (col, idx) in src.iter().enumerate() {
        let image = differential_with(&d1, &ExtForm::monomial(n, idx, Rat::one()));
        for (t, c) in image.terms() {
            m[(pos(t), col)] = c.clone();
        }
    }
    m
}

/// Betti numbers b_0..b_{p_max} of the Lie algebra cohomology.
pub fn cohomology_dims(g: &LieAlgebra, p_max: usize) -> Vec<usize> {
    let n = g.dim();
    let p_max = p_max.min(n);
    // ranks[p] = rank of d_p : Λ^p → Λ^{p+1}
    let ranks: Vec<usize> = (0..=p_max)
        .map(|p| differential_matrix(g, p).rank())
        .collect();
    (0..=p_max)
        .map(|p| {
            let dim = combinations(n, p).len();
            let incoming = if p == 0 { 0 } else { ranks[p - 1] };
            dim - ranks[p] - incoming
        })
        .collect()
}

/// Checks d∘d = 0 on every basis form of every degree.
pub fn check_d_squared(g: &LieAlgebra) -> bool {
    let n = g.dim();
    let d1 = one_form_differentials(g);
    (0..=n).all(|p| {
        combinations(n, p).iter().all(|idx| {
            let f = ExtForm::monomial(n, idx, Rat::one());
            differential_with(&d1, &differential_with(&d1, &f)).is_zero()
        })
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymplecticCertificate {
    pub closed: bool,
    pub nondegenerate: bool,
    /// Coefficient of ω_1∧...∧ω_n in Ω^{n/2} (zero when n is odd).
    #[serde(with = "rat::serde_rat")]
    pub top_coefficient: Rat,
}

impl SymplecticCertificate {
    pub fn is_symplectic(&self) -> bool {
        self.closed && self.nondegenerate
    }
}

pub fn check_symplectic(g: &LieAlgebra, omega: &ExtForm) -> SymplecticCertificate {
    let n = g.dim();
    assert_eq!(omega.nvars(), n, "form lives on a different algebra");
    let closed = omega.degree() == 2 && ce_differential(g, omega).is_zero();
    let top = if n.is_multiple_of(2) && omega.degree() == 2 {
        omega
            .wedge_power(n / 2)
            .top_coefficient()
            .unwrap_or_else(Rat::zero)
    } else {
        Rat::zero()
    };
    SymplecticCertificate {
        closed,
        nondegenerate: !top.is_zero(),
        top_coefficient: top,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContactCertificate {
    pub contact: bool,
    /// Coefficient of ω_1∧...∧ω_n in ω∧(dω)^m.
    #[serde(with = "rat::serde_rat")]
    pub top_coefficient: Rat,
}

/// ω ∧ (dω)^m ≠ 0 on a (2m+1)-dimensional algebra.
pub fn check_contact(g: &LieAlgebra, omega: &ExtForm) -> ContactCertificate {
    let n = g.dim();
    assert_eq!(omega.nvars(), n, "form lives on a different algebra");
    let top = if n % 2 == 1 && omega.degree() == 1 {
        let d = ce_differential(g, omega);
        omega
            .wedge(&d.wedge_power(n / 2))
            .expect("same space")
            .top_coefficient()
            .unwrap_or_else(Rat::zero)
    } else {
        Rat::zero()
    };
    ContactCertificate {
        contact: !top.is_zero(),
        top_coefficient: top,
    }
}

/// Ω_{2m} = (2m-1) ω_1∧ω_{2m} + (2m-3) ω_2∧ω_{2m-1} + ... + ω_m∧ω_{m+1} on V_{2m}.
pub fn v_symplectic_form(m: usize) -> ExtForm {
    let n = 2 * m;
    (1..=m).fold(ExtForm::zero(n, 2), |acc, i| {
        let coef = rat::int((2 * m + 1 - 2 * i) as i64);
        acc.add(&ExtForm::monomial(n, &[i - 1, n - i], coef))
            .expect("same space")
    })
}

/// Curvature of the circle bundle M(n+1) → M(n) as a 2-form on V_n:
/// (n-1) ω_1∧ω_n + (n-3) ω_2∧ω_{n-1} + ..., positive coefficients only.
pub fn bundle_curvature(n: usize) -> ExtForm {
    let mut f = ExtForm::zero(n, 2);
    let mut r = 1;
    while n + 1 > 2 * r {
        let coef = rat::int((n + 1 - 2 * r) as i64);
        f = f
            .add(&ExtForm::monomial(n, &[r - 1, n - r], coef))
            .expect("same space");
        r += 1;
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat::int;
    use crate::liealg::Cocycle2;

    fn w(s: &str, n: usize) -> ExtForm {
        ExtForm::parse(s, n).unwrap()
    }

    #[test]
    fn dw5_on_v5() {
        let g = LieAlgebra::v_family(5);
        let d = ce_differential(&g, &ExtForm::basis_one_form(5, 4));
        assert_eq!(d, w("3*w1^w4 + w2^w3", 5));
        assert!(ce_differential(&g, &ExtForm::basis_one_form(5, 0)).is_zero());
        assert!(ce_differential(&g, &ExtForm::basis_one_form(5, 1)).is_zero());
    }

    #[test]
    fn d_squared_vanishes() {
        assert!(check_d_squared(&LieAlgebra::v_family(7)));
        assert!(check_d_squared(&LieAlgebra::q_family(6)));
    }

    #[test]
    fn betti_small_cases() {
        assert_eq!(
            cohomology_dims(&LieAlgebra::abelian(3), 3),
            vec![1, 3, 3, 1]
        );
        let h = cohomology_dims(&LieAlgebra::heisenberg(), 3);
        assert_eq!(h, vec![1, 2, 2, 1]);
    }

    #[test]
    fn symplectic_on_v4() {
        let g = LieAlgebra::v_family(4);
        let c = check_symplectic(&g, &w("3*w1^w4 + w2^w3", 4));
        assert!(c.closed && c.nondegenerate);
        let c2 = check_symplectic(&g, &w("w1^w2", 4));
        assert!(c2.closed);
        assert!(!c2.nondegenerate);
        assert_eq!(v_symplectic_form(2), w("3*w1^w4 + w2^w3", 4));
    }

    #[test]
    fn zeroed_coefficient_breaks_closedness_on_v6() {
        let g = LieAlgebra::v_family(6);
        let omega = v_symplectic_form(3);
        assert!(check_symplectic(&g, &omega).is_symplectic());
        // Drop the w1^w6 term.
        let broken = omega.add(&w("-5*w1^w6", 6)).unwrap();
        let c = check_symplectic(&g, &broken);
        assert!(!c.closed);
    }

    #[test]
    fn contact_forms() {
        let h = LieAlgebra::v_family(3);
        let c = check_contact(&h, &ExtForm::basis_one_form(3, 2));
        assert!(c.contact);
        assert_eq!(c.top_coefficient, int(1));
        let g5 = LieAlgebra::v_family(5);
        assert!(check_contact(&g5, &ExtForm::basis_one_form(5, 4)).contact);
        assert!(!check_contact(&g5, &ExtForm::basis_one_form(5, 3)).contact);
    }

    #[test]
    fn curvature_matches_tower_cocycle() {
        assert_eq!(bundle_curvature(3), w("2*w1^w3", 3));
        assert_eq!(bundle_curvature(4), w("3*w1^w4 + w2^w3", 4));
        for n in 2..=10 {
            let g = LieAlgebra::v_family(n);
            let omega = bundle_curvature(n);
            assert_eq!(&omega, Cocycle2::v_tower(n).form());
            assert!(ce_differential(&g, &omega).is_zero());
        }
    }
}
