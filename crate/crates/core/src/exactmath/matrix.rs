//! Dense exact matrices over `Rat` and over `Poly`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::poly::Poly;
use super::rat::Rat;
use super::ExactMathError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

/// Result of fraction-free elimination.
#[derive(Clone, Debug)]
pub struct Elimination {
    pub rank: usize,
    /// Original row indices of the pivots, in pivot order.
    pub pivot_rows: Vec<usize>,
    pub pivot_cols: Vec<usize>,
    /// Determinant, when the matrix is square.
    pub determinant: Option<Rat>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self, ExactMathError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(ExactMathError::NotRectangular);
        }
        Ok(RatMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut t = RatMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix, ExactMathError> {
        if self.cols != other.rows {
            return Err(ExactMathError::ShapeMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut out = RatMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_skew(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..=i).all(|j| self[(i, j)] == -self[(j, i)].clone()))
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> RatMatrix {
        let mut m = RatMatrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m[(a, b)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Fraction-free (Bareiss) elimination on an integer copy of the matrix.
    /// Each row is scaled by the lcm of its denominators first.
    pub fn eliminate(&self) -> Elimination {
        let mut scale = Rat::one();
        let mut a: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                scale *= Rat::from_integer(l.clone());
                row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
            })
            .collect();
        let mut order: Vec<usize> = (0..self.rows).collect();
        let mut prev = BigInt::one();
        let mut r = 0;
        let mut pivot_cols = Vec::new();
        let mut negate = false;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            if p != r {
                a.swap(p, r);
                order.swap(p, r);
                negate = !negate;
            }
            let (top, bottom) = a.split_at_mut(r + 1);
            let pivot_row = &top[r];
            for row in bottom.iter_mut() {
                let factor = row[c].clone();
                for j in c + 1..self.cols {
                    let v = &pivot_row[c] * &row[j] - &factor * &pivot_row[j];
                    row[j] = v / &prev;
                }
                row[c] = BigInt::zero();
            }
            prev = a[r][c].clone();
            pivot_cols.push(c);
            r += 1;
        }
        let determinant = (self.rows == self.cols).then(|| {
            if r < self.rows {
                Rat::zero()
            } else if self.rows == 0 {
                Rat::one()
            } else {
                let d = Rat::from_integer(a[self.rows - 1][self.cols - 1].clone()) / &scale;
                if negate {
                    -d
                } else {
                    d
                }
            }
        });
        Elimination {
            rank: r,
            pivot_rows: order[..r].to_vec(),
            pivot_cols,
            determinant,
        }
    }

    pub fn rank(&self) -> usize {
        self.eliminate().rank
    }

    pub fn determinant(&self) -> Result<Rat, ExactMathError> {
        self.eliminate()
            .determinant
            .ok_or(ExactMathError::NotSquare(self.rows, self.cols))
    }

    /// Reduced row-echelon form and pivot columns.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(p, r);
            let inv = Rat::one() / &m[(r, c)];
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if m[(r, j)].is_zero() {
                        continue;
                    }
                    let v = &m[(i, j)] - &f * &m[(r, j)];
                    m[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Basis of the right kernel, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rat::zero(); self.cols];
                v[f] = Rat::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r[(row, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Solves `self · x = b` for square nonsingular `self`.
    pub fn solve(&self, b: &[Rat]) -> Result<Option<Vec<Rat>>, ExactMathError> {
        if self.rows != self.cols {
            return Err(ExactMathError::NotSquare(self.rows, self.cols));
        }
        assert_eq!(b.len(), self.rows);
        let mut aug = RatMatrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < self.cols || pivots.contains(&self.cols) {
            return Ok(None);
        }
        Ok(Some(
            (0..self.cols).map(|i| r[(i, self.cols)].clone()).collect(),
        ))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

/// Matrix with polynomial entries over a common variable count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    nvars: usize,
    data: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize, nvars: usize) -> Self {
        PolyMatrix {
            rows,
            cols,
            nvars,
            data: vec![Poly::zero(nvars); rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        assert_eq!(p.nvars(), self.nvars);
        self.data[i * self.cols + j] = p;
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.data[i * self.cols + j]
    }

    pub fn evaluate(&self, point: &[Rat]) -> Result<RatMatrix, ExactMathError> {
        let mut m = RatMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self.get(i, j).evaluate(point)?;
            }
        }
        Ok(m)
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut t = PolyMatrix::zeros(self.cols, self.rows, self.nvars);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(rows.len(), cols.len(), self.nvars);
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }

    /// Appends a row of constants.
    pub fn with_row(&self, row: &[Rat]) -> PolyMatrix {
        assert_eq!(row.len(), self.cols);
        let mut m = PolyMatrix::zeros(self.rows + 1, self.cols, self.nvars);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
        }
        for (j, c) in row.iter().enumerate() {
            m.set(self.rows, j, Poly::constant(self.nvars, c.clone()));
        }
        m
    }

    /// `M v` for a vector of polynomials.
    pub fn mul_vec(&self, v: &[Poly]) -> Vec<Poly> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(Poly::zero(self.nvars), |acc, j| {
                    let a = self.get(i, j);
                    if a.is_zero() || v[j].is_zero() {
                        acc
                    } else {
                        &acc + &(a * &v[j])
                    }
                })
            })
            .collect()
    }

    /// Number of entries that are not the zero polynomial, per row.
    pub fn nonzero_pattern(&self) -> Vec<Vec<bool>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| !self.get(i, j).is_zero()).collect())
            .collect()
    }

    /// Symbolic determinant by cofactor expansion along the sparsest
    /// remaining row or column, memoized on the remaining index sets.
    /// Intended for sparse matrices of size ≤ 64.
    pub fn determinant(&self) -> Result<Poly, ExactMathError> {
        if self.rows != self.cols {
            return Err(ExactMathError::NotSquare(self.rows, self.cols));
        }
        assert!(self.rows <= 64, "symbolic determinant limited to 64x64");
        let full: u64 = if self.rows == 64 {
            u64::MAX
        } else {
            (1u64 << self.rows) - 1
        };
        let mut memo = HashMap::new();
        Ok(self.det_rec(full, full, &mut memo))
    }

    fn det_rec(&self, rows: u64, cols: u64, memo: &mut HashMap<(u64, u64), Poly>) -> Poly {
        if rows == 0 {
            return Poly::one(self.nvars);
        }
        if let Some(p) = memo.get(&(rows, cols)) {
            return p.clone();
        }
        let bits = |mask: u64| (0..64).filter(move |&b| mask >> b & 1 == 1);
        let row_nnz = |i: usize| bits(cols).filter(|&j| !self.get(i, j).is_zero()).count();
        let col_nnz = |j: usize| bits(rows).filter(|&i| !self.get(i, j).is_zero()).count();
        let best_row = bits(rows).map(|i| (row_nnz(i), i)).min().unwrap();
        let best_col = bits(cols).map(|j| (col_nnz(j), j)).min().unwrap();

        let mut acc = Poly::zero(self.nvars);
        if best_row.0 == 0 || best_col.0 == 0 {
            memo.insert((rows, cols), acc.clone());
            return acc;
        }
        // Sign of entry (i, j) within the submatrix is (-1)^(pos_i + pos_j).
        let pos = |mask: u64, k: usize| (mask & ((1u64 << k) - 1)).count_ones() as usize;
        if best_row.0 <= best_col.0 {
            let i = best_row.1;
            for j in bits(cols) {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                let minor = self.det_rec(rows & !(1 << i), cols & !(1 << j), memo);
                let term = a * &minor;
                acc = if (pos(rows, i) + pos(cols, j)) % 2 == 0 {
                    &acc + &term
                } else {
                    &acc - &term
                };
            }
        } else {
            let j = best_col.1;
            for i in bits(rows) {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                let minor = self.det_rec(rows & !(1 << i), cols & !(1 << j), memo);
                let term = a * &minor;
                acc = if (pos(rows, i) + pos(cols, j)) % 2 == 0 {
                    &acc + &term
                } else {
                    &acc - &term
                };
            }
        }
        memo.insert((rows, cols), acc.clone());
        acc
    }
}

/// Maximum matching size of a boolean pattern (the term rank). Upper bound
/// for the rank of any matrix with that zero pattern.
pub fn term_rank(pattern: &[Vec<bool>]) -> usize {
    let cols = pattern.first().map_or(0, Vec::len);
    let mut match_col: Vec<Option<usize>> = vec![None; cols];

    fn augment(
        i: usize,
        pattern: &[Vec<bool>],
        seen: &mut [bool],
        match_col: &mut [Option<usize>],
    ) -> bool {
        for j in 0..match_col.len() {
            if pattern[i][j] && !seen[j] {
                seen[j] = true;
                if match_col[j].is_none_or(|k| augment(k, pattern, seen, match_col)) {
                    match_col[j] = Some(i);
                    return true;
                }
            }
        }
        false
    }

    (0..pattern.len())
        .filter(|&i| {
            let mut seen = vec![false; cols];
            augment(i, pattern, &mut seen, &mut match_col)
        })
        .count()
}
