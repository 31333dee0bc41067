//! Certified paths inside the invertible commutant of a constant matrix.
//!
//! For invertible `Θ` commuting with `Φ` the path runs
//! `Θ → Θ + αI → αI → I` in three segments, each a matrix polynomial in
//! `t ∈ [0, 1]` whose entries are polynomials in `Θ` and `I`. The first
//! segment is `Θ + λ(t)I` with `λ(t) = αt + iδt(1 − t)`; the detour height
//! `δ` is chosen so that a Sturm certificate shows `det` has no zero on
//! `[0, 1]`.

use num_traits::{One, Zero};

use crate::algebra::linalg;
use crate::algebra::scalar::{ceil_sqrt, Rational};
use crate::algebra::sturm::certify_nonvanishing_on_segment;
use crate::algebra::{Matrix, Scalar, UPoly};
use crate::error::{Error, Result};

pub const MAX_HALVINGS: u32 = 32;

/// `λ(t) = αt + iδt(1 − t)`.
pub fn detour(alpha: &Rational, delta: &Rational) -> UPoly {
    let id = Scalar::new(Rational::zero(), delta.clone());
    UPoly::from_coeffs(vec![Scalar::zero(), &Scalar::real(alpha.clone()) + &id, -id])
}

/// `m + λ(t)·I` as a polynomial matrix in `t`.
pub fn shifted(m: &Matrix<Scalar>, lambda: &UPoly) -> Matrix<UPoly> {
    Matrix::from_fn(m.rows(), m.cols(), |i, j| {
        let c = UPoly::constant(m.get(i, j).clone());
        if i == j {
            &c + lambda
        } else {
            c
        }
    })
}

/// `1 + ⌈‖m‖_F⌉`, an upper bound for `1 + ‖m‖` in operator norm.
pub fn norm_bound(m: &Matrix<Scalar>) -> Rational {
    Rational::one() + Rational::from_integer(ceil_sqrt(&m.frobenius_sqr()))
}

/// First `δ ∈ {α/2, α/4, …}` (at most [`MAX_HALVINGS`] tries) for which
/// `det(m + λ(t)I)` is certified nonvanishing on `[0, 1]` for every `m`.
pub fn find_detour(ms: &[Matrix<Scalar>], alpha: &Rational) -> Result<Rational> {
    let mut delta = alpha.clone();
    for _ in 0..MAX_HALVINGS {
        delta /= Rational::from_integer(2.into());
        let lambda = detour(alpha, &delta);
        if crate::par::all(ms, |m| certify_nonvanishing_on_segment(&linalg::det(&shifted(m, &lambda)))) {
            return Ok(delta);
        }
    }
    Err(Error::NoAdmissibleDetour(MAX_HALVINGS))
}

/// Consecutive matrix-polynomial segments, each parametrized by `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewisePath {
    segments: Vec<Matrix<UPoly>>,
    alpha: Rational,
    delta: Rational,
}

fn eval_at(m: &Matrix<UPoly>, t: &Scalar) -> Matrix<Scalar> {
    m.map(|p| p.eval(t))
}

impl PiecewisePath {
    pub fn segments(&self) -> &[Matrix<UPoly>] {
        &self.segments
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn delta(&self) -> &Rational {
        &self.delta
    }

    /// Value at global parameter `s ∈ [0, #segments]`.
    pub fn evaluate(&self, s: &Rational) -> Option<Matrix<Scalar>> {
        if *s < Rational::zero() || *s > Rational::from_integer(self.segments.len().into()) {
            return None;
        }
        let k = (s.floor().to_integer().try_into().unwrap_or(0usize)).min(self.segments.len() - 1);
        let t = s - Rational::from_integer(k.into());
        Some(eval_at(&self.segments[k], &Scalar::real(t)))
    }

    pub fn start(&self) -> Matrix<Scalar> {
        eval_at(&self.segments[0], &Scalar::zero())
    }

    pub fn end(&self) -> Matrix<Scalar> {
        eval_at(self.segments.last().expect("nonempty path"), &Scalar::one())
    }

    /// Segment `k` ends where segment `k + 1` starts, exactly.
    pub fn is_continuous(&self) -> bool {
        self.segments.windows(2).all(|w| eval_at(&w[0], &Scalar::one()) == eval_at(&w[1], &Scalar::zero()))
    }

    pub fn determinants(&self) -> Vec<UPoly> {
        self.segments.iter().map(linalg::det).collect()
    }

    /// Every segment determinant passes the Sturm certificate on `[0, 1]`.
    pub fn is_certified(&self) -> bool {
        self.determinants().iter().all(certify_nonvanishing_on_segment)
    }

    /// `γ(t)·Φ = Φ·γ(t)` as a polynomial identity in `t`.
    pub fn commutes_with(&self, phi: &Matrix<Scalar>) -> bool {
        let p = phi.map(|c| UPoly::constant(c.clone()));
        self.segments.iter().all(|s| s.rows() == p.rows() && s.commutes_with(&p))
    }
}

/// Path from `Θ` to `I` inside `GCom Φ`.
pub fn gcom_path(theta: &Matrix<Scalar>, phi: &Matrix<Scalar>) -> Result<PiecewisePath> {
    if !theta.is_square() || theta.rows() == 0 || (phi.rows(), phi.cols()) != (theta.rows(), theta.cols()) {
        return Err(Error::Shape("theta and phi must be square of the same size".into()));
    }
    if !theta.commutes_with(phi) {
        return Err(Error::Precondition("theta does not commute with phi".into()));
    }
    if linalg::det(theta).is_zero() {
        return Err(Error::Precondition("theta is singular".into()));
    }
    let n = theta.rows();
    let alpha = norm_bound(theta);
    let delta = find_detour(std::slice::from_ref(theta), &alpha)?;
    let a = Scalar::real(alpha.clone());
    let first = shifted(theta, &detour(&alpha, &delta));
    // (1 − t)Θ + αI
    let second = Matrix::from_fn(n, n, |i, j| {
        let c = theta.get(i, j);
        let p = UPoly::from_coeffs(vec![c.clone(), -c]);
        if i == j {
            &p + &UPoly::constant(a.clone())
        } else {
            p
        }
    });
    // (α − (α − 1)t)·I
    let ramp = UPoly::from_coeffs(vec![a.clone(), -(&a - &Scalar::one())]);
    let third = Matrix::from_fn(n, n, |i, j| if i == j { ramp.clone() } else { UPoly::zero() });
    let path = PiecewisePath { segments: vec![first, second, third], alpha, delta };
    if !path.is_certified() {
        return Err(Error::SampleCheck("segment determinant not certified".into()));
    }
    Ok(path)
}
