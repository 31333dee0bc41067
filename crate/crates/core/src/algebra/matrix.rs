//! Dense row-major matrices over any [`Ring`].

use std::fmt;
use std::sync::Arc;

use super::poly::{MultiPoly, VarContext};
use super::ring::Ring;
use super::scalar::Scalar;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

/// A matrix of polynomials sharing one variable context.
pub type MatrixFamily = Matrix<MultiPoly>;

impl<T: Clone> Matrix<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.data[i * self.cols + j]
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map<U: Clone>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<U: Clone, E>(&self, f: impl FnMut(&T) -> std::result::Result<U, E>) -> std::result::Result<Matrix<U>, E> {
        Ok(Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect::<std::result::Result<_, _>>()? })
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    /// Row-major flattening (`vec`).
    pub fn vectorize(&self) -> Vec<T> {
        self.data.clone()
    }

    pub fn unvectorize(n: usize, m: usize, v: Vec<T>) -> Self {
        Matrix::from_vec(n, m, v)
    }
}

impl<T: Ring> Matrix<T> {
    /// Zero matrix shaped like `proto`'s ring (needs one element for context).
    pub fn zeros_like(proto: &T, rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| proto.zero_like())
    }

    pub fn identity_like(proto: &T, n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { proto.one_like() } else { proto.zero_like() })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Ring::is_zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape");
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a.add_ref(b)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape");
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a.sub_ref(b)).collect() }
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|a| a.mul_ref(c))
    }

    /// Panics if the inner dimension is zero or shapes disagree.
    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "inner dimension");
        assert!(self.cols > 0, "empty inner dimension");
        Matrix::from_fn(self.rows, o.cols, |i, j| {
            let mut acc = self.get(i, 0).mul_ref(o.get(0, j));
            for k in 1..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                acc = acc.add_ref(&a.mul_ref(o.get(k, j)));
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "vector length");
        (0..self.rows)
            .map(|i| {
                let mut terms = self.row(i).iter().zip(v).map(|(a, x)| a.mul_ref(x));
                let first = terms.next().expect("at least one column");
                terms.fold(first, |acc, t| acc.add_ref(&t))
            })
            .collect()
    }

    /// `A ⊗ B` (Kronecker product).
    pub fn kron(&self, o: &Self) -> Self {
        Matrix::from_fn(self.rows * o.rows, self.cols * o.cols, |i, j| {
            self.get(i / o.rows, j / o.cols).mul_ref(o.get(i % o.rows, j % o.cols))
        })
    }

    pub fn commutes_with(&self, o: &Self) -> bool {
        self.mul(o) == o.mul(self)
    }
}

impl Matrix<Scalar> {
    pub fn scalar_identity(n: usize) -> Self {
        Matrix::identity_like(&Scalar::zero(), n)
    }

    pub fn scalar_zeros(rows: usize, cols: usize) -> Self {
        Matrix::zeros_like(&Scalar::zero(), rows, cols)
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect()).collect())
    }

    /// Squared Frobenius norm, exact.
    pub fn frobenius_sqr(&self) -> super::scalar::Rational {
        self.data.iter().map(Scalar::norm_sqr).sum()
    }

    /// Embeds as a constant polynomial matrix.
    pub fn to_family(&self, ctx: &Arc<VarContext>) -> MatrixFamily {
        self.map(|c| MultiPoly::constant(ctx, c.clone()))
    }
}

impl Matrix<MultiPoly> {
    pub fn poly_zeros(ctx: &Arc<VarContext>, rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| MultiPoly::zero(ctx))
    }

    pub fn poly_identity(ctx: &Arc<VarContext>, n: usize) -> Self {
        Matrix::identity_like(&MultiPoly::zero(ctx), n)
    }

    /// Context of the entries; `None` for an empty matrix.
    pub fn context(&self) -> Option<&Arc<VarContext>> {
        self.data.first().map(MultiPoly::ctx)
    }

    pub fn shares_context(&self) -> bool {
        match self.data.first() {
            None => true,
            Some(p) => self.data.iter().all(|q| q.ctx() == p.ctx()),
        }
    }

    /// Pointwise evaluation (base-variable point, conjugates filled in).
    pub fn evaluate(&self, point: &[Scalar]) -> Result<Matrix<Scalar>> {
        let Some(ctx) = self.context() else {
            return Ok(Matrix::scalar_zeros(self.rows, self.cols));
        };
        let full = ctx.full_point(point)?;
        Ok(self.map(|p| p.evaluate_full(&full)))
    }

    pub fn uses_conjugates(&self) -> bool {
        self.data.iter().any(MultiPoly::uses_conjugates)
    }
}

pub fn check_square_pair<T>(a: &Matrix<T>, b: &Matrix<T>) -> Result<usize> {
    if a.rows != a.cols || b.rows != b.cols || a.rows != b.rows {
        return Err(Error::Shape(format!(
            "expected two square matrices of equal size, got {}x{} and {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    Ok(a.rows)
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
            f.write_str("]")?;
            if i + 1 < self.rows {
                f.write_str("\n")?;
            }
        }
        Ok(())
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|i| &self.data[i * self.cols..(i + 1) * self.cols])).finish()
    }
}
