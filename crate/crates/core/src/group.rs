//! Group law on ℝⁿ ≅ 𝔤 for nilpotent 𝔤 via the Campbell–Hausdorff series in
//! Dynkin's form, truncated at the nilpotency class.

use std::sync::OnceLock;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactmath::rat::{self, Rat};
use crate::liealg::LieAlgebra;

/// Largest nilpotency class supported by the coefficient tables.
pub const MAX_CLASS: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("algebra is not nilpotent")]
    NotNilpotent,
    #[error("nilpotency class {0} exceeds the supported maximum {MAX_CLASS}")]
    ClassTooHigh(usize),
    #[error("element has {got} coordinates, algebra has dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Coefficients of the right-nested brackets [w_1,[w_2,[...,w_L]]] in
/// log(e^X e^Y), indexed by word length L and the word's bit pattern
/// (bit L-1-i set when letter i is Y).
struct DynkinTable {
    by_length: Vec<Vec<Rat>>,
}

fn dynkin_table() -> &'static DynkinTable {
    static TABLE: OnceLock<DynkinTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut by_length = vec![Vec::new()];
        for len in 1..=MAX_CLASS {
            by_length.push(
                (0..1u32 << len)
                    .map(|w| dynkin_coefficient(len, w))
                    .collect(),
            );
        }
        DynkinTable { by_length }
    })
}

fn inv_factorial(k: usize) -> Rat {
    Rat::new(One::one(), rat::factorial(k as u32))
}

/// Dynkin: log(e^X e^Y) = Σ_k (-1)^{k-1}/k Σ [X^{r_1}Y^{s_1}...X^{r_k}Y^{s_k}]
///   / ((Σ r_i + s_i) Π r_i! s_i!), over r_i + s_i > 0.
/// A word contributes once for each way to cut it into k blocks of the form
/// X^r Y^s; g[k] accumulates the factorial weights of those cuttings.
fn dynkin_coefficient(len: usize, word: u32) -> Rat {
    let is_y = |i: usize| word >> (len - 1 - i) & 1 == 1;
    // ways[pos][k]: weighted cuttings of the prefix of length pos into k blocks.
    let mut ways = vec![vec![Rat::zero(); len + 1]; len + 1];
    ways[0][0] = Rat::one();
    for start in 0..len {
        if ways[start].iter().all(Zero::is_zero) {
            continue;
        }
        let (mut r, mut s) = (0, 0);
        for end in start + 1..=len {
            if is_y(end - 1) {
                s += 1;
            } else if s == 0 {
                r += 1;
            } else {
                break; // a Y followed by an X ends every block here
            }
            let w = inv_factorial(r) * inv_factorial(s);
            for k in 0..len {
                if !ways[start][k].is_zero() {
                    let add = &ways[start][k] * &w;
                    ways[end][k + 1] += add;
                }
            }
        }
    }
    let mut c = Rat::zero();
    for (k, w) in ways[len].iter().enumerate().skip(1) {
        let sign = if k % 2 == 1 { Rat::one() } else { -Rat::one() };
        c += sign * w / Rat::from_integer((k as i64).into());
    }
    c / Rat::from_integer((len as i64).into())
}

/// The group ℝⁿ with the BCH product of a nilpotent algebra.
#[derive(Clone, Debug)]
pub struct NilpotentGroup {
    algebra: LieAlgebra,
    class: usize,
}

impl NilpotentGroup {
    pub fn new(g: &LieAlgebra) -> Result<Self, GroupError> {
        let class = g.nilpotency_class().ok_or(GroupError::NotNilpotent)?;
        if class > MAX_CLASS {
            return Err(GroupError::ClassTooHigh(class));
        }
        Ok(NilpotentGroup {
            algebra: g.clone(),
            class,
        })
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn class(&self) -> usize {
        self.class
    }

    pub fn identity(&self) -> Vec<Rat> {
        vec![Rat::zero(); self.algebra.dim()]
    }

    pub fn inverse(&self, u: &[Rat]) -> Vec<Rat> {
        u.iter().map(|c| -c).collect()
    }

    pub fn mul(&self, u: &[Rat], v: &[Rat]) -> Result<Vec<Rat>, GroupError> {
        self.mul_truncated(u, v, self.class.max(1))
    }

    /// Product keeping brackets of length ≤ `order`. Any `order` at or above
    /// the class gives the same result.
    pub fn mul_truncated(
        &self,
        u: &[Rat],
        v: &[Rat],
        order: usize,
    ) -> Result<Vec<Rat>, GroupError> {
        let n = self.algebra.dim();
        for x in [u, v] {
            if x.len() != n {
                return Err(GroupError::DimensionMismatch {
                    expected: n,
                    got: x.len(),
                });
            }
        }
        let order = order.min(MAX_CLASS);
        let table = dynkin_table();
        let mut acc: Vec<Rat> = vec![Rat::zero(); n];
        // Depth-first over suffixes: a node holds the bracket of a suffix; a
        // child prepends one more letter.
        let mut stack: Vec<(usize, u32, Vec<Rat>)> = Vec::new();
        for (bit, x) in [(0u32, u), (1u32, v)] {
            if x.iter().any(|c| !c.is_zero()) {
                stack.push((1, bit, x.to_vec()));
            }
        }
        while let Some((len, word, val)) = stack.pop() {
            let c = &table.by_length[len][word as usize];
            if !c.is_zero() {
                for (a, b) in acc.iter_mut().zip(&val) {
                    *a += c * b;
                }
            }
            if len == order {
                continue;
            }
            for (bit, x) in [(0u32, u), (1u32, v)] {
                let next = self.algebra.bracket(x, &val);
                if next.iter().any(|c| !c.is_zero()) {
                    stack.push((len + 1, word | bit << len, next));
                }
            }
        }
        Ok(acc)
    }
}

pub fn bch_product(g: &LieAlgebra, u: &[Rat], v: &[Rat]) -> Result<Vec<Rat>, GroupError> {
    NilpotentGroup::new(g)?.mul(u, v)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub samples: usize,
    pub seed: u64,
    pub associativity_failures: usize,
    pub identity_failures: usize,
    pub inverse_failures: usize,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.associativity_failures == 0
            && self.identity_failures == 0
            && self.inverse_failures == 0
    }
}

pub fn random_element(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rat> {
    (0..n)
        .map(|_| rat::rat(rng.gen_range(-5..=5), rng.gen_range(1..=4)))
        .collect()
}

/// Exact check of (uv)w = u(vw), u·0 = 0·u = u and (−u)·u = u·(−u) = 0 on
/// seeded random rational triples.
pub fn group_axioms_check(
    g: &LieAlgebra,
    samples: usize,
    seed: u64,
) -> Result<AxiomReport, GroupError> {
    let grp = NilpotentGroup::new(g)?;
    let n = g.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let zero = grp.identity();
    let mut report = AxiomReport {
        samples,
        seed,
        associativity_failures: 0,
        identity_failures: 0,
        inverse_failures: 0,
    };
    for _ in 0..samples {
        let u = random_element(&mut rng, n);
        let v = random_element(&mut rng, n);
        let w = random_element(&mut rng, n);
        let left = grp.mul(&grp.mul(&u, &v)?, &w)?;
        let right = grp.mul(&u, &grp.mul(&v, &w)?)?;
        if left != right {
            report.associativity_failures += 1;
        }
        if grp.mul(&u, &zero)? != u || grp.mul(&zero, &u)? != u {
            report.identity_failures += 1;
        }
        let inv = grp.inverse(&u);
        if grp.mul(&inv, &u)? != zero || grp.mul(&u, &inv)? != zero {
            report.inverse_failures += 1;
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeReport {
    pub box_radius: i64,
    pub integer_structure_constants: bool,
    pub pairs_checked: usize,
    pub non_integer_products: usize,
    pub closed: bool,
    /// First pair whose product leaves ℤⁿ, with the product.
    #[serde(with = "witness_serde")]
    pub witness: Option<(Vec<Rat>, Vec<Rat>, Vec<Rat>)>,
    /// Largest denominator seen among product coordinates.
    pub max_denominator: String,
}

mod witness_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    type W = Option<(Vec<Rat>, Vec<Rat>, Vec<Rat>)>;

    pub fn serialize<S: Serializer>(w: &W, s: S) -> Result<S::Ok, S::Error> {
        let fmt = |v: &[Rat]| v.iter().map(rat::format_rat).collect::<Vec<_>>();
        w.as_ref()
            .map(|(a, b, c)| [fmt(a), fmt(b), fmt(c)])
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<W, D::Error> {
        let raw: Option<[Vec<String>; 3]> = Option::deserialize(d)?;
        let parse = |v: &[String]| -> Result<Vec<Rat>, D::Error> {
            v.iter()
                .map(|s| rat::parse_rat(s).map_err(serde::de::Error::custom))
                .collect()
        };
        raw.map(|[a, b, c]| Ok((parse(&a)?, parse(&b)?, parse(&c)?)))
            .transpose()
    }
}

/// Tests whether integer points with coordinates in [−r, r] multiply to
/// integer points. Fact-finding only: first-kind coordinates are not
/// expected to make ℤⁿ a subgroup.
pub fn lattice_closure_report(
    g: &LieAlgebra,
    box_radius: i64,
) -> Result<LatticeReport, GroupError> {
    let grp = NilpotentGroup::new(g)?;
    let n = g.dim();
    let points = integer_box(n, box_radius);
    let mut report = LatticeReport {
        box_radius,
        integer_structure_constants: g.has_integer_structure_constants(),
        pairs_checked: 0,
        non_integer_products: 0,
        closed: true,
        witness: None,
        max_denominator: "1".into(),
    };
    let mut max_den = num_bigint::BigInt::one();
    for u in &points {
        for v in &points {
            let w = grp.mul(u, v)?;
            report.pairs_checked += 1;
            if w.iter().any(|c| !c.is_integer()) {
                report.non_integer_products += 1;
                report.closed = false;
                if report.witness.is_none() {
                    report.witness = Some((u.clone(), v.clone(), w.clone()));
                }
                for c in &w {
                    if c.denom() > &max_den {
                        max_den = c.denom().clone();
                    }
                }
            }
        }
    }
    report.max_denominator = max_den.to_string();
    Ok(report)
}

fn integer_box(n: usize, r: i64) -> Vec<Vec<Rat>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (-r..=r).map(move |c| {
                    let mut q = p.clone();
                    q.push(rat::int(c));
                    q
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat::{int, rat};

    fn word(s: &str) -> (usize, u32) {
        let w = s.chars().enumerate().fold(0u32, |acc, (i, ch)| {
            if ch == 'Y' {
                acc | 1 << (s.len() - 1 - i)
            } else {
                acc
            }
        });
        (s.len(), w)
    }

    fn coeff(s: &str) -> Rat {
        let (l, w) = word(s);
        dynkin_table().by_length[l][w as usize].clone()
    }

    #[test]
    fn low_order_coefficients() {
        assert_eq!(coeff("X"), int(1));
        assert_eq!(coeff("Y"), int(1));
        // ½[X,Y] = ¼[X,Y] − ¼[Y,X]
        assert_eq!(coeff("XY"), rat(1, 4));
        assert_eq!(coeff("YX"), rat(-1, 4));
        // XYX cuts into X^r Y^s blocks only as XY|X and X|Y|X:
        // (1/3)(−1/2 + 1/3) = −1/18.
        assert_eq!(coeff("XYX"), rat(-1, 18));
        assert_eq!(coeff("XXX"), int(0));
    }

    #[test]
    fn heisenberg_product() {
        let h = LieAlgebra::heisenberg();
        let w = bch_product(&h, &[int(1), int(0), int(0)], &[int(0), int(1), int(0)]).unwrap();
        assert_eq!(w, vec![int(1), int(1), rat(1, 2)]);
    }

    #[test]
    fn v4_third_order_term() {
        let g = LieAlgebra::v_family(4);
        let e1 = [int(1), int(0), int(0), int(0)];
        let e2 = [int(0), int(1), int(0), int(0)];
        let w = bch_product(&g, &e1, &e2).unwrap();
        assert_eq!(w, vec![int(1), int(1), rat(1, 2), rat(1, 6)]);
    }

    #[test]
    fn abelian_is_addition() {
        let g = LieAlgebra::abelian(3);
        let w = bch_product(&g, &[int(1), rat(1, 2), int(3)], &[int(2), int(1), int(-1)]).unwrap();
        assert_eq!(w, vec![int(3), rat(3, 2), int(2)]);
    }

    #[test]
    fn truncation_beyond_class_is_stable() {
        let g = LieAlgebra::v_family(6);
        let grp = NilpotentGroup::new(&g).unwrap();
        assert_eq!(grp.class(), 5);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let u = random_element(&mut rng, 6);
            let v = random_element(&mut rng, 6);
            let a = grp.mul_truncated(&u, &v, 5).unwrap();
            assert_eq!(a, grp.mul_truncated(&u, &v, 6).unwrap());
            assert_eq!(a, grp.mul_truncated(&u, &v, 12).unwrap());
        }
    }

    #[test]
    fn axioms_on_v6() {
        let r = group_axioms_check(&LieAlgebra::v_family(6), 20, 1).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn errors() {
        // sl2-like: [e1,e2]=e3, [e3,e1]=2e1, [e3,e2]=-2e2 is not nilpotent.
        let g = LieAlgebra::new(
            3,
            vec![
                (0, 1, vec![(2, int(1))]),
                (2, 0, vec![(0, int(2))]),
                (2, 1, vec![(1, int(-2))]),
            ],
        )
        .unwrap();
        assert_eq!(
            NilpotentGroup::new(&g).unwrap_err(),
            GroupError::NotNilpotent
        );
        assert_eq!(
            NilpotentGroup::new(&LieAlgebra::v_family(14)).unwrap_err(),
            GroupError::ClassTooHigh(13)
        );
        assert!(NilpotentGroup::new(&LieAlgebra::v_family(13)).is_ok());
    }

    #[test]
    fn lattice_facts() {
        let r = lattice_closure_report(&LieAlgebra::abelian(2), 2).unwrap();
        assert!(r.closed);
        assert_eq!(r.pairs_checked, 625);
        let h = lattice_closure_report(&LieAlgebra::heisenberg(), 1).unwrap();
        assert!(!h.closed);
        assert!(h.integer_structure_constants);
        assert_eq!(h.max_denominator, "2");
    }
}
