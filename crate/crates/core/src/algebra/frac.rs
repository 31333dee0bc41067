//! Matrices of rational functions over one polynomial denominator.

use std::fmt;
use std::sync::Arc;

use super::linalg;
use super::local::PointedRational;
use super::matrix::{Matrix, MatrixFamily};
use super::poly::{MultiPoly, VarContext};
use super::scalar::Scalar;
use super::upoly::UPoly;
use crate::error::{Error, Result};

/// `numer / denom` with `denom ≠ 0`. No gcd normalization is attempted,
/// so equality is tested by cross-multiplication ([`FracMatrix::equals`]).
#[derive(Clone, PartialEq)]
pub struct FracMatrix {
    numer: MatrixFamily,
    denom: MultiPoly,
}

impl FracMatrix {
    pub fn new(numer: MatrixFamily, denom: MultiPoly) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::Precondition("zero denominator".into()));
        }
        if !numer.shares_context() || numer.context().is_some_and(|c| c != denom.ctx()) {
            return Err(Error::Context);
        }
        Ok(FracMatrix { numer, denom })
    }

    pub fn from_poly(m: &MatrixFamily) -> Self {
        let ctx = m.context().expect("nonempty matrix");
        FracMatrix { numer: m.clone(), denom: MultiPoly::one(ctx) }
    }

    pub fn identity(ctx: &Arc<VarContext>, n: usize) -> Self {
        FracMatrix { numer: MatrixFamily::poly_identity(ctx, n), denom: MultiPoly::one(ctx) }
    }

    /// Common-denominator form of a matrix of germs in one variable.
    pub fn from_pointed(ctx: &Arc<VarContext>, m: &Matrix<PointedRational>) -> Self {
        let mut lcm = UPoly::one();
        for e in m.data() {
            let d = e.denominator();
            let g = lcm.gcd(d);
            lcm = (&lcm * d).divrem(&g).0;
        }
        let numer = m.map(|e| {
            let scale = lcm.divrem(e.denominator()).0;
            MultiPoly::from_upoly(ctx, 0, &(e.numerator() * &scale))
        });
        FracMatrix { numer, denom: MultiPoly::from_upoly(ctx, 0, &lcm) }
    }

    pub fn numer(&self) -> &MatrixFamily {
        &self.numer
    }

    pub fn denom(&self) -> &MultiPoly {
        &self.denom
    }

    pub fn rows(&self) -> usize {
        self.numer.rows()
    }

    pub fn cols(&self) -> usize {
        self.numer.cols()
    }

    pub fn context(&self) -> &Arc<VarContext> {
        self.denom.ctx()
    }

    /// Entry `(i, j)` as a germ at `base`, for one-variable contexts.
    pub fn to_pointed(&self, base: &Scalar) -> Option<Matrix<PointedRational>> {
        let d = self.denom.to_upoly()?;
        self.numer
            .try_map(|p| {
                let n = p.to_upoly().ok_or(())?;
                PointedRational::new(n, d.clone(), base.clone()).map_err(|_| ())
            })
            .ok()
    }

    pub fn mul(&self, o: &FracMatrix) -> FracMatrix {
        FracMatrix { numer: self.numer.mul(&o.numer), denom: &self.denom * &o.denom }
    }

    pub fn mul_poly(&self, m: &MatrixFamily) -> FracMatrix {
        FracMatrix { numer: self.numer.mul(m), denom: self.denom.clone() }
    }

    pub fn poly_mul(m: &MatrixFamily, f: &FracMatrix) -> FracMatrix {
        FracMatrix { numer: m.mul(&f.numer), denom: f.denom.clone() }
    }

    /// `d·adj(N)/det(N)`; `None` when `det N` is the zero polynomial.
    pub fn inverse(&self) -> Option<FracMatrix> {
        if !self.numer.is_square() {
            return None;
        }
        let det = linalg::det(&self.numer);
        if det.is_zero() {
            return None;
        }
        let adj = linalg::adjugate(&self.numer);
        Some(FracMatrix { numer: adj.scale(&self.denom), denom: det })
    }

    /// Symbolic equality by cross-multiplication.
    pub fn equals(&self, o: &FracMatrix) -> bool {
        (self.rows(), self.cols()) == (o.rows(), o.cols())
            && self.context() == o.context()
            && self.numer.scale(&o.denom) == o.numer.scale(&self.denom)
    }

    pub fn is_identity(&self) -> bool {
        self.numer.is_square()
            && self.numer == MatrixFamily::poly_identity(self.context(), self.rows()).scale(&self.denom)
    }

    /// `A·N = N·B`, which is `A·H = H·B` after clearing the denominator.
    pub fn intertwines(&self, a: &MatrixFamily, b: &MatrixFamily) -> bool {
        a.mul(&self.numer) == self.numer.mul(b)
    }

    pub fn commutes_with(&self, a: &MatrixFamily) -> bool {
        self.intertwines(a, a)
    }

    /// Numerator of the determinant (the determinant is this over `denomⁿ`).
    pub fn det_numer(&self) -> MultiPoly {
        linalg::det(&self.numer)
    }

    /// Value at a point, or `None` where the denominator vanishes.
    pub fn evaluate(&self, point: &[Scalar]) -> Result<Option<Matrix<Scalar>>> {
        let d = self.denom.evaluate(point)?;
        if d.is_zero() {
            return Ok(None);
        }
        let inv = d.inv().expect("nonzero");
        Ok(Some(self.numer.evaluate(point)?.map(|x| x * &inv)))
    }

    /// Value with every variable (conjugates included) assigned independently.
    pub fn evaluate_full(&self, values: &[Scalar]) -> Option<Matrix<Scalar>> {
        let d = self.denom.evaluate_full(values);
        let inv = d.inv()?;
        Some(self.numer.map(|p| &p.evaluate_full(values) * &inv))
    }
}

impl fmt::Display for FracMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom.is_constant() && self.denom.constant_term().is_one() {
            write!(f, "{}", self.numer)
        } else {
            write!(f, "({})^-1 *\n{}", self.denom, self.numer)
        }
    }
}

impl fmt::Debug for FracMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_inverse() {
        let ctx = VarContext::new(&["v1", "v2"]);
        let v1 = MultiPoly::var(&ctx, 0);
        let v2 = MultiPoly::var(&ctx, 1);
        let h = &v1 + &v2.scale(&Scalar::i());
        let hs = &v1 - &v2.scale(&Scalar::i());
        let o = MultiPoly::zero(&ctx);
        let f = FracMatrix::from_poly(&Matrix::from_rows(vec![vec![h, o.clone()], vec![o, hs]]));
        let inv = f.inverse().unwrap();
        assert!(f.mul(&inv).is_identity());
        let at = inv.evaluate(&[Scalar::one(), Scalar::zero()]).unwrap().unwrap();
        assert_eq!(at, Matrix::scalar_identity(2));
        assert!(inv.evaluate(&[Scalar::zero(), Scalar::zero()]).unwrap().is_none());
    }

    #[test]
    fn pointed_roundtrip() {
        let ctx = VarContext::new(&["z"]);
        let b = Scalar::zero();
        let e = PointedRational::new(UPoly::x(), UPoly::from_i64(&[1, 1]), b.clone()).unwrap();
        let m = Matrix::from_rows(vec![vec![e.clone(), PointedRational::one(b.clone())]]);
        let f = FracMatrix::from_pointed(&ctx, &m);
        assert_eq!(f.to_pointed(&b).unwrap(), m);
    }
}
