use nilflow::coadjoint::{classify_orbit, lie_poisson_bracket, poisson_matrix};
use nilflow::exactmath::rat::{int, rat};
use nilflow::exactmath::{integrate_exact_form, ExtForm, Monomial, Poly, Rat, RatMatrix};
use nilflow::forms::ce_differential;
use nilflow::group::NilpotentGroup;
use nilflow::liealg::LieAlgebra;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn small_rat() -> impl Strategy<Value = Rat> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| rat(n, d))
}

fn nonzero_rat() -> impl Strategy<Value = Rat> {
    small_rat().prop_filter("nonzero", |r| !r.is_zero())
}

fn poly(n: usize, max_exp: u32, max_terms: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(
        (small_rat(), prop::collection::vec(0..=max_exp, n)),
        0..=max_terms,
    )
    .prop_map(move |terms| {
        Poly::from_terms(n, terms.into_iter().map(|(c, e)| (Monomial::new(e), c)))
    })
}

fn point(n: usize) -> impl Strategy<Value = Vec<Rat>> {
    prop::collection::vec(small_rat(), n)
}

fn matrix(r: usize, c: usize) -> impl Strategy<Value = RatMatrix> {
    prop::collection::vec(prop::collection::vec(small_rat(), c), r)
        .prop_map(|rows| RatMatrix::from_rows(rows).unwrap())
}

fn two_form(n: usize) -> impl Strategy<Value = ExtForm> {
    prop::collection::vec((0..n, 0..n, small_rat()), 0..6).prop_map(move |ts| {
        ts.into_iter()
            .filter(|(i, j, _)| i != j)
            .fold(ExtForm::zero(n, 2), |acc, (i, j, c)| {
                acc.add(&ExtForm::monomial(n, &[i, j], c)).unwrap()
            })
    })
}

fn one_form(n: usize) -> impl Strategy<Value = ExtForm> {
    prop::collection::vec(small_rat(), n).prop_map(move |cs| {
        cs.into_iter()
            .enumerate()
            .fold(ExtForm::zero(n, 1), |acc, (i, c)| {
                acc.add(&ExtForm::monomial(n, &[i], c)).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_field_laws(a in small_rat(), b in small_rat(), c in small_rat(), d in nonzero_rat()) {
        prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
        prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
        prop_assert_eq!(&d / &d, Rat::one());
        prop_assert_eq!(&a - &a, Rat::zero());
    }

    #[test]
    fn leibniz_rule(f in poly(3, 3, 5), g in poly(3, 3, 5), i in 0usize..3) {
        let lhs = (&f * &g).partial(i);
        let rhs = &(&f.partial(i) * &g) + &(&f * &g.partial(i));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn ring_laws_and_evaluation(f in poly(3, 2, 4), g in poly(3, 2, 4), h in poly(3, 2, 4), p in point(3)) {
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        let fg = (&f * &g).evaluate(&p).unwrap();
        prop_assert_eq!(fg, f.evaluate(&p).unwrap() * g.evaluate(&p).unwrap());
    }

    #[test]
    fn display_parse_round_trip(f in poly(4, 3, 6)) {
        prop_assert_eq!(Poly::parse(&f.to_string(), 4).unwrap(), f);
    }

    #[test]
    fn integrate_then_differentiate(f in poly(3, 3, 6)) {
        let f = &f - &Poly::constant(3, f.coefficient(&[0, 0, 0]));
        let grads: Vec<Poly> = (0..3).map(|i| f.partial(i)).collect();
        prop_assert_eq!(integrate_exact_form(&grads, &[0, 1, 2]).unwrap(), f);
    }

    #[test]
    fn rank_transpose_invariant(m in matrix(4, 5)) {
        let r = m.rank();
        prop_assert_eq!(r, m.transpose().rank());
        prop_assert!(r <= 4);
        prop_assert_eq!(m.nullspace().len(), 5 - r);
        for v in m.nullspace() {
            prop_assert!(m.mul_vec(&v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn determinant_multiplicative(a in matrix(3, 3), b in matrix(3, 3)) {
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(ab.determinant().unwrap(), a.determinant().unwrap() * b.determinant().unwrap());
    }

    #[test]
    fn wedge_graded_commutative(a in one_form(5), b in two_form(5), c in one_form(5)) {
        prop_assert_eq!(a.wedge(&b).unwrap(), b.wedge(&a).unwrap());
        prop_assert_eq!(a.wedge(&c).unwrap(), c.wedge(&a).unwrap().neg());
    }

    #[test]
    fn differential_is_antiderivation(a in one_form(6), b in two_form(6)) {
        let g = LieAlgebra::v_family(6);
        let lhs = ce_differential(&g, &a.wedge(&b).unwrap());
        let rhs = ce_differential(&g, &a)
            .wedge(&b)
            .unwrap()
            .add(&a.wedge(&ce_differential(&g, &b)).unwrap().neg())
            .unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert!(ce_differential(&g, &ce_differential(&g, &b)).is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lie_poisson_jacobi(f in poly(5, 2, 3), g in poly(5, 2, 3), h in poly(5, 2, 3)) {
        let alg = LieAlgebra::v_family(5);
        let a = poisson_matrix(&alg);
        let jac = &(&a.bracket(&f, &a.bracket(&g, &h)) + &a.bracket(&g, &a.bracket(&h, &f)))
            + &a.bracket(&h, &a.bracket(&f, &g));
        prop_assert!(jac.is_zero());
        prop_assert_eq!(a.bracket(&f, &g), -&a.bracket(&g, &f));
    }

    #[test]
    fn casimirs_commute_with_quadratic_hamiltonians(h in poly(6, 2, 6)) {
        let alg = LieAlgebra::v_family(6);
        let f6 = Poly::parse("x3*x6^2 - 1/2*x4*x5*x6 + 1/8*x5^3", 6).unwrap();
        prop_assert!(lie_poisson_bracket(&alg, &f6, &h).is_zero());
        prop_assert!(lie_poisson_bracket(&alg, &Poly::var(6, 5), &h).is_zero());
    }

    #[test]
    fn orbit_dimension_is_pointwise_rank(p in point(7), zeros in 0usize..4) {
        let g = LieAlgebra::v_family(7);
        let mut p = p;
        for c in p.iter_mut().rev().take(zeros) {
            *c = int(0);
        }
        let o = classify_orbit(&g, &p).unwrap();
        let rank = poisson_matrix(&g).evaluate(&p).unwrap().rank();
        prop_assert_eq!(o.dimension, rank);
        prop_assert_eq!(o.dimension + o.equations.len(), 7);
        for eq in &o.equations {
            prop_assert_eq!(eq.poly.evaluate(&p).unwrap(), eq.value.clone());
        }
    }

    #[test]
    fn bch_associative_with_inverses(u in point(5), v in point(5), w in point(5)) {
        let grp = NilpotentGroup::new(&LieAlgebra::q_family(5)).unwrap();
        let uv_w = grp.mul(&grp.mul(&u, &v).unwrap(), &w).unwrap();
        let u_vw = grp.mul(&u, &grp.mul(&v, &w).unwrap()).unwrap();
        prop_assert_eq!(uv_w, u_vw);
        prop_assert_eq!(grp.mul(&u, &grp.inverse(&u)).unwrap(), grp.identity());
    }
}
