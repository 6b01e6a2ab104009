//! Exact dense linear algebra over ℚ.
//!
//! Elimination is fraction-free: every row is first scaled to integers, then
//! reduced with Bareiss' one-step division scheme, so intermediate entries stay
//! bounded by minors of the input instead of growing as rational towers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    /// Builds a matrix from row vectors; all rows must have `cols` entries.
    pub fn from_rows(cols: usize, rows: &[Vec<Rational>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged row");
            data.extend(row.iter().cloned());
        }
        Matrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(Rational::zero(), |acc, k| {
                acc + &self[(i, k)] * &other[(k, j)]
            })
        })
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in product");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn scale(&self, c: &Rational) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    fn echelon(&self) -> IntEchelon {
        IntEchelon::new(self)
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Basis of `{x : A x = 0}`, in reduced row echelon form over the column order.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let ech = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !ech.pivots.contains(c)).collect();
        let basis: Vec<Vec<Rational>> = free
            .iter()
            .map(|&f| {
                let mut x = vec![Rational::zero(); self.cols];
                x[f] = Rational::one();
                ech.back_substitute(&mut x);
                x
            })
            .collect();
        reduced_row_basis(self.cols, &basis)
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let ech = self.echelon();
        let mut rows: Vec<Vec<Rational>> = ech
            .rows
            .iter()
            .take(ech.pivots.len())
            .map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect())
            .collect();
        for (i, &p) in ech.pivots.iter().enumerate() {
            let lead = rows[i][p].clone();
            for x in rows[i].iter_mut() {
                *x /= &lead;
            }
            for k in 0..i {
                if rows[k][p].is_zero() {
                    continue;
                }
                let f = rows[k][p].clone();
                let (upper, lower) = rows.split_at_mut(i);
                for (a, b) in upper[k].iter_mut().zip(&lower[0]) {
                    *a -= &f * b;
                }
            }
        }
        let mut full = rows;
        full.resize(self.rows, vec![Rational::zero(); self.cols]);
        (Matrix::from_rows(self.cols, &full), ech.pivots)
    }

    /// Determinant of a square matrix (fraction-free elimination).
    pub fn determinant(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        if self.rows == 0 {
            return Rational::one();
        }
        let ech = self.echelon();
        if ech.pivots.len() < self.rows {
            return Rational::zero();
        }
        let last = &ech.rows[self.rows - 1][self.cols - 1];
        let mut det = Rational::from_integer(last.clone()) / &ech.row_scale_product;
        if ech.swaps % 2 == 1 {
            det = -det;
        }
        det
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Some(Matrix::zeros(0, 0));
        }
        let aug = Matrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                Rational::one()
            } else {
                Rational::zero()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(Matrix::from_fn(n, n, |i, j| r[(i, j + n)].clone()))
    }

    /// Solves `A x = b`. Returns `None` when the system is inconsistent; otherwise a
    /// particular solution together with a basis of the homogeneous solutions.
    pub fn solve(&self, b: &[Rational]) -> Option<(Vec<Rational>, Vec<Vec<Rational>>)> {
        assert_eq!(b.len(), self.rows);
        let aug = Matrix::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                b[i].clone()
            }
        });
        let ech = aug.echelon();
        if ech.pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.cols + 1];
        x[self.cols] = -Rational::one();
        ech.back_substitute(&mut x);
        x.truncate(self.cols);
        Some((x, self.nullspace()))
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

/// Integer row echelon form produced by Bareiss elimination.
struct IntEchelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    swaps: usize,
    /// Product of the per-row factors used to clear denominators.
    row_scale_product: Rational,
}

impl IntEchelon {
    fn new(m: &Matrix) -> Self {
        let mut row_scale_product = Rational::one();
        let mut rows: Vec<Vec<BigInt>> = (0..m.rows)
            .map(|i| {
                let row = m.row(i);
                let l = row
                    .iter()
                    .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                row_scale_product *= Rational::from_integer(l.clone());
                row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
            })
            .collect();

        let mut pivots = Vec::new();
        let mut swaps = 0;
        let mut prev = BigInt::one();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            // Smallest nonzero magnitude in the column keeps products short.
            let Some(p) = (r..m.rows)
                .filter(|&i| !rows[i][c].is_zero())
                .min_by(|&a, &b| rows[a][c].abs().cmp(&rows[b][c].abs()))
            else {
                continue;
            };
            if p != r {
                rows.swap(p, r);
                swaps += 1;
            }
            let (top, bottom) = rows.split_at_mut(r + 1);
            let pivot_row = &top[r];
            let pv = &pivot_row[c];
            for row in bottom.iter_mut() {
                let f = row[c].clone();
                for j in c + 1..m.cols {
                    let num = pv * &row[j] - &f * &pivot_row[j];
                    let (q, rem) = num.div_rem(&prev);
                    debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                    row[j] = q;
                }
                row[c] = BigInt::zero();
            }
            prev = rows[r][c].clone();
            pivots.push(c);
            r += 1;
        }
        IntEchelon {
            rows,
            pivots,
            swaps,
            row_scale_product,
        }
    }

    /// Fills the pivot coordinates of `x` so that every echelon row annihilates it,
    /// given the free coordinates already set.
    fn back_substitute(&self, x: &mut [Rational]) {
        for (i, &p) in self.pivots.iter().enumerate().rev() {
            let row = &self.rows[i];
            let mut acc = Rational::zero();
            for j in p + 1..row.len() {
                if !row[j].is_zero() && !x[j].is_zero() {
                    acc += Rational::from_integer(row[j].clone()) * &x[j];
                }
            }
            x[p] = -acc / Rational::from_integer(row[p].clone());
        }
    }
}

/// Row-reduces a list of vectors to a canonical basis of their span (RREF, zero rows dropped).
pub fn reduced_row_basis(cols: usize, vectors: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let (r, pivots) = Matrix::from_rows(cols, vectors).rref();
    (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
}

pub fn rank_of(cols: usize, vectors: &[Vec<Rational>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_rows(cols, vectors).rank()
}

/// True when `v` lies in the span of `basis`.
pub fn in_span(cols: usize, basis: &[Vec<Rational>], v: &[Rational]) -> bool {
    let mut all = basis.to_vec();
    all.push(v.to_vec());
    rank_of(cols, &all) == rank_of(cols, basis)
}

/// Returns `c` with `u = c·v`, or `None` when the vectors are not proportional.
/// A zero `u` is proportional to anything with `c = 0`.
pub fn proportionality(u: &[Rational], v: &[Rational]) -> Option<Rational> {
    assert_eq!(u.len(), v.len());
    let lead = v.iter().position(|x| !x.is_zero());
    let Some(lead) = lead else {
        return u.iter().all(Zero::is_zero).then(Rational::zero);
    };
    let c = &u[lead] / &v[lead];
    u.iter()
        .zip(v)
        .all(|(a, b)| *a == &c * b)
        .then_some(c)
}
