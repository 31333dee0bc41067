//! The two-cap example on the real unit sphere: the transition
//! `diag(h, h*)` with `h = x1 + i·x2` on the equatorial band, the
//! continuous extension `C₊` over the upper cap, and the winding-number
//! obstruction to splitting `h` itself.
//!
//! `C₊ = [[χh, 1 − χ], [χ − 1, χh*]]` with `χ = χ(x3)` piecewise linear,
//! `1` for `x3 ≤ ε` and `0` for `x3 ≥ 2ε`, so
//! `det C₊ = χ²·hh* + (1 − χ)²`.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use super::cutoff::Cutoff;
use super::winding::{winding_number, SampledLoop};
use crate::algebra::scalar::{rat, Rational};
use crate::algebra::{Matrix, MultiPoly, Scalar, VarContext};
use crate::error::{Error, Result};

pub const BAND_GRID: usize = 64;
pub const CAP_GRID: usize = 16;
pub const EQUATOR_SAMPLES: usize = 256;

pub fn default_epsilon() -> Rational {
    rat(1, 10)
}

/// Context `(x1, x2, x3)` of real coordinates.
pub fn sphere_context() -> Arc<VarContext> {
    VarContext::new(&["x1", "x2", "x3"])
}

pub fn h_poly(ctx: &Arc<VarContext>) -> MultiPoly {
    &MultiPoly::var(ctx, 0) + &MultiPoly::var(ctx, 1).scale(&Scalar::i())
}

pub fn h_star_poly(ctx: &Arc<VarContext>) -> MultiPoly {
    &MultiPoly::var(ctx, 0) - &MultiPoly::var(ctx, 1).scale(&Scalar::i())
}

/// A rational point of the unit sphere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpherePoint(pub [Rational; 3]);

impl SpherePoint {
    /// Inverse stereographic projection from the north pole.
    pub fn from_plane(u: Rational, v: Rational) -> Self {
        let r2 = &u * &u + &v * &v;
        let d = &r2 + Rational::one();
        let two = Rational::from_integer(2.into());
        SpherePoint([&two * &u / &d, &two * &v / &d, (r2 - Rational::one()) / d])
    }

    pub fn north_pole() -> Self {
        SpherePoint([Rational::zero(), Rational::zero(), Rational::one()])
    }

    pub fn x3(&self) -> &Rational {
        &self.0[2]
    }

    pub fn coords(&self) -> Vec<Scalar> {
        self.0.iter().map(|c| Scalar::real(c.clone())).collect()
    }

    pub fn h(&self) -> Scalar {
        Scalar::new(self.0[0].clone(), self.0[1].clone())
    }

    pub fn h_star(&self) -> Scalar {
        self.h().conj()
    }

    pub fn on_sphere(&self) -> bool {
        self.0.iter().map(|c| c * c).sum::<Rational>().is_one()
    }
}

fn dyadic(x: f64) -> Rational {
    const SCALE: f64 = (1u64 << 12) as f64;
    Rational::new(BigInt::from((x * SCALE).round() as i64), BigInt::from(1i64 << 12))
}

/// Rational sphere point with `x3` close to `x3` and longitude close to `theta`.
fn point_near(x3: f64, theta: f64) -> SpherePoint {
    let r = ((1.0 + x3) / (1.0 - x3)).sqrt();
    SpherePoint::from_plane(dyadic(r * theta.cos()), dyadic(r * theta.sin()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SphereReport {
    /// `max |hh* − 1|` over band samples.
    pub max_band_deviation: Rational,
    /// `min Re det C₊` over samples with `x3 < 2ε`.
    pub min_re_det: Rational,
    /// Samples with `x3 < 2ε` where `Re det C₊ < 1/2`.
    pub below_half: Vec<usize>,
    /// `det C₊ = 1` at every cap sample.
    pub cap_det_one: bool,
}

impl SphereReport {
    pub fn band_bound_holds(&self) -> bool {
        self.max_band_deviation < rat(1, 2)
    }

    pub fn half_bound_holds(&self) -> bool {
        self.below_half.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct SphereExample {
    epsilon: Rational,
    ell: u32,
    chi: Cutoff,
    band: Vec<SpherePoint>,
    cap: Vec<SpherePoint>,
    report: SphereReport,
}

impl SphereExample {
    pub fn epsilon(&self) -> &Rational {
        &self.epsilon
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn chi(&self) -> &Cutoff {
        &self.chi
    }

    /// Points with `−2ε < x3 < 2ε`.
    pub fn band(&self) -> &[SpherePoint] {
        &self.band
    }

    /// Points with `x3 ≥ 2ε`.
    pub fn cap(&self) -> &[SpherePoint] {
        &self.cap
    }

    pub fn report(&self) -> &SphereReport {
        &self.report
    }

    pub fn c_plus(&self, p: &SpherePoint) -> Matrix<Scalar> {
        c_plus(&self.chi, p)
    }
}

pub fn c_plus(chi: &Cutoff, p: &SpherePoint) -> Matrix<Scalar> {
    let c = Scalar::real(chi.value(p.x3()));
    let one = Scalar::one();
    Matrix::from_rows(vec![vec![&c * &p.h(), &one - &c], vec![&c - &one, &c * &p.h_star()]])
}

fn det2(m: &Matrix<Scalar>) -> Scalar {
    &(m.get(0, 0) * m.get(1, 1)) - &(m.get(0, 1) * m.get(1, 0))
}

/// Builds the sample grids and checks them. Errors if `|hh* − 1| ≥ 1/2` on
/// the band, `det C₊ ≠ 1` on the cap, or `Re det C₊ ≤ 1/3` below `x3 = 2ε`
/// (the bound `χ²c + (1 − χ)² ≥ c/(1 + c) > 1/3` for `c = Re hh* > 1/2`).
/// Whether `Re det C₊ ≥ 1/2` holds is recorded in the report.
pub fn sphere_example(epsilon: &Rational, ell: u32) -> Result<SphereExample> {
    if !epsilon.is_positive() || *epsilon > rat(1, 10) {
        return Err(Error::Precondition("epsilon must satisfy 0 < epsilon <= 1/10".into()));
    }
    let two_eps = epsilon * Rational::from_integer(2.into());
    let chi = Cutoff::new(epsilon.clone(), two_eps.clone())?;
    let e = num_traits::ToPrimitive::to_f64(epsilon).expect("finite");

    let mut band = Vec::with_capacity(BAND_GRID * BAND_GRID);
    for k in 0..BAND_GRID {
        let x3 = -2.0 * e + 4.0 * e * (k as f64 + 0.5) / BAND_GRID as f64;
        for j in 0..BAND_GRID {
            band.push(point_near(x3, TAU * j as f64 / BAND_GRID as f64));
        }
    }
    let mut cap = vec![SpherePoint::north_pole()];
    for k in 0..CAP_GRID {
        let x3 = 2.0 * e + (1.0 - 2.0 * e) * (k as f64 + 0.5) / CAP_GRID as f64;
        for j in 0..CAP_GRID {
            cap.push(point_near(x3, TAU * j as f64 / CAP_GRID as f64));
        }
    }
    if let Some(p) = band.iter().chain(&cap).find(|p| !p.on_sphere()) {
        return Err(Error::SampleCheck(format!("grid point {:?} is off the sphere", p.0)));
    }
    if band.iter().any(|p| p.x3().abs() >= two_eps) || cap.iter().any(|p| *p.x3() < two_eps) {
        return Err(Error::SampleCheck("grid point outside its region".into()));
    }

    let half = rat(1, 2);
    // hh* = x1² + x2² is real on real points
    let deviations: Vec<Rational> = crate::par::map(&band, |p| (&p.h() * &p.h_star() - Scalar::one()).re().abs());
    if let Some(i) = deviations.iter().position(|d| *d >= half) {
        return Err(Error::SampleCheck(format!("|hh* - 1| >= 1/2 at {:?}", band[i].0)));
    }
    let max_band_deviation = deviations.into_iter().max().expect("nonempty band");

    let dets = crate::par::map(&band, |p| det2(&c_plus(&chi, p)).re().clone());
    if let Some(i) = dets.iter().position(|d| *d <= rat(1, 3)) {
        return Err(Error::SampleCheck(format!("Re det C+ = {} <= 1/3 at {:?}", dets[i], band[i].0)));
    }
    let below_half: Vec<usize> = (0..band.len()).filter(|&i| dets[i] < half).collect();
    let min_re_det = dets.iter().min().cloned();
    let cap_det_one = cap.iter().all(|p| det2(&c_plus(&chi, p)).is_one());
    if !cap_det_one {
        return Err(Error::SampleCheck("det C+ != 1 on the cap".into()));
    }
    let report = SphereReport { max_band_deviation, min_re_det: min_re_det.expect("nonempty band"), below_half, cap_det_one };
    Ok(SphereExample { epsilon: epsilon.clone(), ell, chi, band, cap, report })
}

/// Winding number of `t ↦ g(cos t, sin t, 0)` over [`EQUATOR_SAMPLES`]
/// samples. A nonzero value rules out a continuous splitting
/// `g = f₊/f₋` with `f±` nonvanishing on the two caps.
pub fn splitting_obstruction(_ex: &SphereExample, g: &MultiPoly) -> Result<i64> {
    let ctx = g.ctx();
    if ctx.nvars() != 3 || ctx.has_conjugates() {
        return Err(Error::Arity { expected: 3, got: ctx.nvars() });
    }
    let lp = SampledLoop::from_fn(EQUATOR_SAMPLES, |t| {
        g.evaluate_complex(&[Complex64::new(t.cos(), 0.0), Complex64::new(t.sin(), 0.0), Complex64::new(0.0, 0.0)])
    })?;
    winding_number(&lp)
}
