//! Exact arithmetic substrate: Gaussian rationals, polynomials, germs at a
//! point, truncated series, matrices, and elimination.

pub mod frac;
pub mod linalg;
pub mod local;
pub mod matrix;
pub mod poly;
pub mod ring;
pub mod scalar;
pub mod series;
pub mod sturm;
pub mod upoly;

pub use frac::FracMatrix;
pub use local::PointedRational;
pub use matrix::{Matrix, MatrixFamily};
pub use poly::{Exponents, MultiPoly, VarContext};
pub use ring::{Domain, Ring};
pub use scalar::{Rational, Scalar};
pub use series::TruncatedSeries;
pub use sturm::certify_nonvanishing_on_segment;
pub use upoly::UPoly;

use crate::error::Result;

/// Exact value of `p` at a point given for the base variables.
pub fn evaluate(p: &MultiPoly, point: &[Scalar]) -> Result<Scalar> {
    p.evaluate(point)
}

/// Order of vanishing at the germ's base point (`None` = infinite).
pub fn vanishing_order(f: &PointedRational) -> Option<u32> {
    f.vanishing_order()
}

pub fn exact_kernel(m: &Matrix<Scalar>) -> Vec<Vec<Scalar>> {
    linalg::kernel(m)
}

/// Converts a family over a single variable to dense univariate entries.
pub fn to_univariate(m: &MatrixFamily) -> Option<Matrix<UPoly>> {
    if m.rows() * m.cols() == 0 {
        return Some(Matrix::from_vec(m.rows(), m.cols(), Vec::new()));
    }
    m.try_map(|p| p.to_upoly().ok_or(())).ok()
}

/// Rank over the field of rational functions.
pub fn generic_rank(m: &MatrixFamily) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    match to_univariate(m) {
        Some(u) => linalg::univariate_rank(&u),
        None => linalg::rank_over_fractions(m),
    }
}
