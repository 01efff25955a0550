//! Dense matrices over an exact field with Gaussian elimination.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::field::Scalar;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>, // row-major
}

impl<F: Scalar> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(r, c)])?;
            }
        }
        write!(f, "]")
    }
}

impl<F> std::ops::Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (r, c): (usize, usize)) -> &F {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl<F> std::ops::IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut F {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

/// Reduced row echelon form together with its pivot columns.
pub struct Echelon<F> {
    pub matrix: Matrix<F>,
    pub pivots: Vec<usize>,
}

impl<F: Scalar> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<F>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, data }
    }

    pub fn from_i64(rows: usize, cols: usize, data: &[i64]) -> Self {
        Self::from_rows(rows, cols, data.iter().map(|&v| F::from_i64(v)).collect())
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<F>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, v) in col.iter().enumerate() {
                m[(r, c)] = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn column(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<F>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn scale(&self, s: &F) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.clone() * s.clone()).collect(),
        }
    }

    pub fn apply(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = F::zero();
                for (c, x) in v.iter().enumerate() {
                    let a = &self[(r, c)];
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc + a.clone() * x.clone();
                    }
                }
                acc
            })
            .collect()
    }

    /// Rows `[r0, r0+nr)` and columns `[c0, c0+nc)`.
    pub fn submatrix(&self, r0: usize, nr: usize, c0: usize, nc: usize) -> Self {
        let mut m = Self::zeros(nr, nc);
        for r in 0..nr {
            for c in 0..nc {
                m[(r, c)] = self[(r0 + r, c0 + c)].clone();
            }
        }
        m
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix<F>) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self[(r0 + r, c0 + c)] = block[(r, c)].clone();
            }
        }
    }

    pub fn hstack(&self, other: &Matrix<F>) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        m.set_block(0, 0, self);
        m.set_block(0, self.cols, other);
        m
    }

    pub fn vstack(&self, other: &Matrix<F>) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut m = Self::zeros(self.rows + other.rows, self.cols);
        m.set_block(0, 0, self);
        m.set_block(self.rows, 0, other);
        m
    }

    pub fn block_diag(&self, other: &Matrix<F>) -> Self {
        let mut m = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        m.set_block(0, 0, self);
        m.set_block(self.rows, self.cols, other);
        m
    }

    pub fn echelon(&self) -> Echelon<F> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            if p != row {
                for c in 0..m.cols {
                    m.data.swap(p * m.cols + c, row * m.cols + c);
                }
            }
            let inv = m[(row, col)].inv();
            for c in col..m.cols {
                let v = m[(row, c)].clone() * inv.clone();
                m[(row, c)] = v;
            }
            for r in 0..m.rows {
                if r == row || m[(r, col)].is_zero() {
                    continue;
                }
                let factor = m[(r, col)].clone();
                for c in col..m.cols {
                    if m[(row, c)].is_zero() {
                        continue;
                    }
                    let v = m[(r, c)].clone() - factor.clone() * m[(row, c)].clone();
                    m[(r, c)] = v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        Echelon { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Basis of `{x : self * x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<F>> {
        let Echelon { matrix: e, pivots } = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![F::zero(); self.cols];
                x[f] = F::one();
                for (i, &p) in pivots.iter().enumerate() {
                    x[p] = -e[(i, f)].clone();
                }
                x
            })
            .collect()
    }

    /// Some `x` with `self * x = b`, if one exists.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows);
        let aug = self.hstack(&Matrix::from_columns(self.rows, &[b.to_vec()]));
        let Echelon { matrix: e, pivots } = aug.echelon();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![F::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = e[(i, self.cols)].clone();
        }
        Some(x)
    }

    /// Solve `self * X = B` column by column.
    pub fn solve_matrix(&self, b: &Matrix<F>) -> Option<Matrix<F>> {
        let cols: Option<Vec<Vec<F>>> = b.columns().iter().map(|c| self.solve(c)).collect();
        Some(Matrix::from_columns(self.cols, &cols?))
    }

    /// A basis of the column space, chosen among the columns themselves.
    pub fn column_basis(&self) -> Vec<Vec<F>> {
        let pivots = self.echelon().pivots;
        pivots.iter().map(|&c| self.column(c)).collect()
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(n));
        let Echelon { matrix: e, pivots } = aug.echelon();
        if pivots.len() < n || (n > 0 && pivots[n - 1] != n - 1) {
            return None;
        }
        Some(e.submatrix(0, n, n, n))
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn trace(&self) -> F {
        let mut t = F::zero();
        for i in 0..self.rows.min(self.cols) {
            t = t + self[(i, i)].clone();
        }
        t
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Matrix::identity(self.rows);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

/// Some basis of the subspace spanned by `vectors` (each of length `dim`),
/// in reduced echelon form.
pub fn span_basis<F: Scalar>(dim: usize, vectors: &[Vec<F>]) -> Vec<Vec<F>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = Matrix::from_columns(dim, vectors).transpose();
    let Echelon { matrix: e, pivots } = m.echelon();
    (0..pivots.len())
        .map(|r| (0..dim).map(|c| e[(r, c)].clone()).collect())
        .collect()
}

/// True iff every vector of `sub` lies in the span of `space`.
pub fn span_contains<F: Scalar>(dim: usize, space: &[Vec<F>], sub: &[Vec<F>]) -> bool {
    let base = span_basis(dim, space).len();
    let mut all = space.to_vec();
    all.extend_from_slice(sub);
    span_basis(dim, &all).len() == base
}

impl<'a, F: Scalar> Mul for &'a Matrix<F> {
    type Output = Matrix<F>;
    fn mul(self, rhs: &'a Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, rhs.rows, "matrix shape mismatch");
        let mut m: Matrix<F> = Matrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = &rhs[(k, c)];
                    if b.is_zero() {
                        continue;
                    }
                    let v = m[(r, c)].clone() + a.clone() * b.clone();
                    m[(r, c)] = v;
                }
            }
        }
        m
    }
}

impl<'a, F: Scalar> Add for &'a Matrix<F> {
    type Output = Matrix<F>;
    fn add(self, rhs: &'a Matrix<F>) -> Matrix<F> {
        assert_eq!(self.shape(), rhs.shape());
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }
}

impl<'a, F: Scalar> Sub for &'a Matrix<F> {
    type Output = Matrix<F>;
    fn sub(self, rhs: &'a Matrix<F>) -> Matrix<F> {
        assert_eq!(self.shape(), rhs.shape());
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }
}

impl<'a, F: Scalar> Neg for &'a Matrix<F> {
    type Output = Matrix<F>;
    fn neg(self) -> Matrix<F> {
        self.scale(&-F::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Rational, F101};
    use proptest::prelude::*;

    type Q = Rational;

    #[test]
    fn rank_and_nullspace() {
        let m = Matrix::<Q>::from_i64(2, 3, &[1, 2, 3, 2, 4, 6]);
        assert_eq!(m.rank(), 1);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(m.apply(&v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn inverse_and_solve() {
        let m = Matrix::<Q>::from_i64(2, 2, &[2, 1, 1, 1]);
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, Matrix::identity(2));
        let x = m.solve(&[Q::from_i64(3), Q::from_i64(2)]).unwrap();
        assert_eq!(x, vec![Q::from_i64(1), Q::from_i64(1)]);
        let sing = Matrix::<Q>::from_i64(2, 2, &[1, 1, 1, 1]);
        assert!(sing.inverse().is_none());
        assert!(sing.solve(&[Q::from_i64(1), Q::from_i64(0)]).is_none());
    }

    #[test]
    fn rank_depends_on_characteristic() {
        // det = 101
        assert_eq!(Matrix::<Q>::from_i64(2, 2, &[10, 1, -1, 10]).rank(), 2);
        let n = Matrix::<F101>::from_i64(2, 2, &[10, 1, -1, 10]);
        assert_eq!(n.rank(), 1);
    }

    proptest! {
        #[test]
        fn rank_nullity(entries in proptest::collection::vec(-3i64..4, 12)) {
            let m = Matrix::<Q>::from_i64(3, 4, &entries);
            prop_assert_eq!(m.rank() + m.nullspace().len(), 4);
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }
    }
}
