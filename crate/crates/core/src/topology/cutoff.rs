//! Multiplicative cutoff: turns a commutant-valued map `f` near a base
//! point into `f̃` with `f̃ = f` on an inner region and `f̃ = I` outside an
//! outer one, still commuting with `A` and invertible.
//!
//! `f` is deformed to `f/α + I` through `g(t)`, `t ∈ [−1, 1]`:
//! `g = f + λ(t + 1)I` on `[−1, 0]` and `g = (1 − t + t/α)(f + αI)` on
//! `[0, 1]`. With breakpoints `−1 = t_1 < … < t_{m−1} = 1` the factors
//! `g_j = g(t_j)·g(t_{j+1})⁻¹` and `g_m = g(1)` multiply to `f`, and each
//! satisfies `‖g_j − I‖ < 1` at every sample; the breakpoints are chosen
//! greedily on a dyadic grid. Then
//! `f̃ = Π (I + χ·(g_j − I))` with a piecewise-linear `χ`.

use num_traits::{One, Signed, Zero};

use super::path::{detour, find_detour, norm_bound};
use crate::algebra::linalg;
use crate::algebra::scalar::Rational;
use crate::algebra::{FracMatrix, Matrix, MatrixFamily, Scalar};
use crate::cocycle::SamplePoint;
use crate::error::{Error, Result};

pub const MAX_FACTORS: usize = 256;
/// Smallest breakpoint step tried is `2^-MAX_STEP_HALVINGS`.
pub const MAX_STEP_HALVINGS: u32 = 40;

/// `χ(s) = 1` for `s ≤ inner`, `0` for `s ≥ outer`, linear between.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cutoff {
    inner: Rational,
    outer: Rational,
}

impl Cutoff {
    pub fn new(inner: Rational, outer: Rational) -> Result<Self> {
        if inner >= outer {
            return Err(Error::Precondition("cutoff needs inner < outer".into()));
        }
        Ok(Cutoff { inner, outer })
    }

    pub fn inner(&self) -> &Rational {
        &self.inner
    }

    pub fn outer(&self) -> &Rational {
        &self.outer
    }

    pub fn value(&self, s: &Rational) -> Rational {
        if *s <= self.inner {
            Rational::one()
        } else if *s >= self.outer {
            Rational::zero()
        } else {
            (&self.outer - s) / (&self.outer - &self.inner)
        }
    }
}

/// Squared distance `Σ |ζ_k − ξ_k|²`.
pub fn distance_sqr(a: &[Scalar], b: &[Scalar]) -> Rational {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum()
}

/// Where a sample sits relative to the cutoff.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    /// `χ = 1`.
    Inner,
    /// `0 < χ < 1`.
    Transition,
    /// `χ = 0`.
    Outside,
}

#[derive(Clone, Debug)]
pub struct GluedMap {
    f: FracMatrix,
    base: Vec<Scalar>,
    cutoff: Cutoff,
    alpha: Rational,
    delta: Rational,
    breakpoints: Vec<Rational>,
    checked: Vec<(SamplePoint, Region)>,
}

impl GluedMap {
    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn delta(&self) -> &Rational {
        &self.delta
    }

    /// `t_1 = −1 < … < t_{m−1} = 1`; empty when `f` itself is the only
    /// factor (`‖f − I‖ < 1` at every sample inside the outer region).
    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn factor_count(&self) -> usize {
        self.breakpoints.len().max(1)
    }

    /// Samples the contract was verified at, with their region.
    pub fn checked_samples(&self) -> &[(SamplePoint, Region)] {
        &self.checked
    }

    pub fn region(&self, point: &[Scalar]) -> Region {
        let chi = self.cutoff.value(&distance_sqr(point, &self.base));
        if chi.is_one() {
            Region::Inner
        } else if chi.is_zero() {
            Region::Outside
        } else {
            Region::Transition
        }
    }

    /// The factors `g_1, …, g_m` at a point.
    pub fn factors(&self, point: &[Scalar]) -> Result<Vec<Matrix<Scalar>>> {
        let fz = value(&self.f, point)?;
        if self.breakpoints.is_empty() {
            return Ok(vec![fz]);
        }
        factors_at(&fz, &self.alpha, &self.delta, &self.breakpoints)
    }

    /// `f̃` at a point.
    pub fn evaluate(&self, point: &[Scalar]) -> Result<Matrix<Scalar>> {
        let n = self.f.rows();
        let chi = Scalar::real(self.cutoff.value(&distance_sqr(point, &self.base)));
        if chi.is_zero() {
            return Ok(Matrix::scalar_identity(n));
        }
        let id = Matrix::scalar_identity(n);
        Ok(self
            .factors(point)?
            .iter()
            .map(|g| id.add(&g.sub(&id).scale(&chi)))
            .fold(id.clone(), |acc, x| acc.mul(&x)))
    }
}

fn value(f: &FracMatrix, point: &[Scalar]) -> Result<Matrix<Scalar>> {
    f.evaluate(point)?.ok_or_else(|| Error::SampleCheck("f has a pole at a sample".into()))
}

/// `g(t)` at one point.
fn g_at(fz: &Matrix<Scalar>, alpha: &Rational, delta: &Rational, t: &Rational) -> Matrix<Scalar> {
    let n = fz.rows();
    let id = Matrix::scalar_identity(n);
    if !t.is_positive() {
        let lam = detour(alpha, delta).eval(&Scalar::real(t + Rational::one()));
        fz.add(&id.scale(&lam))
    } else {
        let c = Rational::one() - t + t / alpha;
        fz.add(&id.scale(&Scalar::real(alpha.clone()))).scale(&Scalar::real(c))
    }
}

fn factors_at(fz: &Matrix<Scalar>, alpha: &Rational, delta: &Rational, bps: &[Rational]) -> Result<Vec<Matrix<Scalar>>> {
    let gs: Vec<Matrix<Scalar>> = bps.iter().map(|t| g_at(fz, alpha, delta, t)).collect();
    let mut out = Vec::with_capacity(gs.len());
    for w in gs.windows(2) {
        let inv = linalg::inverse(&w[1]).ok_or_else(|| Error::SampleCheck("deformation is singular at a breakpoint".into()))?;
        out.push(w[0].mul(&inv));
    }
    out.push(gs.last().expect("at least two breakpoints").clone());
    Ok(out)
}

/// From each breakpoint `t`, the next one is `min(t + s, 1)` for the
/// largest dyadic step `s`, at most four times the previous step, whose factor `g(t)·g(t')⁻¹` is within
/// distance 1 of `I` at every sample value.
fn greedy_breakpoints(values: &[Matrix<Scalar>], alpha: &Rational, delta: &Rational) -> Result<Vec<Rational>> {
    let one = Rational::one();
    let id = Matrix::scalar_identity(values[0].rows());
    let mut t = -one.clone();
    let mut bps = vec![t.clone()];
    let two = Rational::from_integer(2.into());
    let mut last = two.clone();
    while t < one {
        if bps.len() > MAX_FACTORS {
            return Err(Error::Subdivision(MAX_FACTORS));
        }
        let current: Vec<Matrix<Scalar>> = values.iter().map(|fz| g_at(fz, alpha, delta, &t)).collect();
        let mut step = (&last * &two * &two).min(two.clone());
        let mut next = None;
        for _ in 0..=MAX_STEP_HALVINGS {
            let cand = (&t + &step).min(one.clone());
            let fits = crate::par::map(&current.iter().zip(values).collect::<Vec<_>>(), |(g, fz)| {
                linalg::inverse(&g_at(fz, alpha, delta, &cand)).map(|inv| g.mul(&inv).sub(&id).frobenius_sqr() < one)
            });
            if fits.iter().any(Option::is_none) {
                return Err(Error::SampleCheck("deformation is singular at a breakpoint".into()));
            }
            if fits.iter().all(|f| *f == Some(true)) {
                last = step.clone();
                next = Some(cand);
                break;
            }
            step /= &two;
        }
        t = next.ok_or(Error::Subdivision(MAX_FACTORS))?;
        bps.push(t.clone());
    }
    Ok(bps)
}

/// Builds `f̃` and verifies its contract at every sample: `f̃ = f` where
/// `χ = 1`, `f̃ = I` where `χ = 0`, `A·f̃ = f̃·A` and `det f̃ ≠ 0`
/// everywhere. `χ` is applied to the squared distance from `base`.
pub fn multiplicative_cutoff(
    f: &FracMatrix,
    a: &MatrixFamily,
    base: &[Scalar],
    cutoff: &Cutoff,
    samples: &[SamplePoint],
) -> Result<GluedMap> {
    let n = f.rows();
    if !f.numer().is_square() || (a.rows(), a.cols()) != (n, n) {
        return Err(Error::Shape("f and A must be square of the same size".into()));
    }
    let arity = f.context().arity();
    if let Some(p) = std::iter::once(base).chain(samples.iter().map(Vec::as_slice)).find(|p| p.len() != arity) {
        return Err(Error::Arity { expected: arity, got: p.len() });
    }
    let f_base = value(f, base)?;
    if linalg::det(&f_base).is_zero() {
        return Err(Error::Precondition("f is not invertible at the base point".into()));
    }
    let inside: Vec<&SamplePoint> = samples.iter().filter(|p| distance_sqr(p, base) < *cutoff.outer()).collect();
    let mut values = vec![f_base];
    for p in &inside {
        let fz = value(f, p)?;
        if !a.evaluate(p)?.commutes_with(&fz) {
            return Err(Error::Precondition("f does not commute with A at a sample".into()));
        }
        values.push(fz);
    }
    let alpha = values.iter().map(norm_bound).max().expect("nonempty");
    let id = Matrix::scalar_identity(n);
    let close = |g: &Matrix<Scalar>| g.sub(&id).frobenius_sqr() < Rational::one();
    if values.iter().all(close) {
        // f is already within distance 1 of I: the single factor g_1 = f
        let glued = GluedMap {
            f: f.clone(),
            base: base.to_vec(),
            cutoff: cutoff.clone(),
            alpha,
            delta: Rational::zero(),
            breakpoints: Vec::new(),
            checked: Vec::new(),
        };
        return verify(glued, f, a, samples);
    }
    let delta = find_detour(&values, &alpha)?;

    let breakpoints = greedy_breakpoints(&values, &alpha, &delta)?;

    let glued = GluedMap { f: f.clone(), base: base.to_vec(), cutoff: cutoff.clone(), alpha, delta, breakpoints, checked: Vec::new() };
    verify(glued, f, a, samples)
}

fn verify(mut glued: GluedMap, f: &FracMatrix, a: &MatrixFamily, samples: &[SamplePoint]) -> Result<GluedMap> {
    let n = f.rows();
    let checks = crate::par::map(samples, |p| -> Result<(SamplePoint, Region)> {
        let region = glued.region(p);
        let v = glued.evaluate(p)?;
        match region {
            Region::Inner if v != value(f, p)? => return Err(Error::SampleCheck("glued map differs from f where chi = 1".into())),
            Region::Outside if v != Matrix::scalar_identity(n) => {
                return Err(Error::SampleCheck("glued map is not I where chi = 0".into()))
            }
            _ => {}
        }
        if !a.evaluate(p)?.commutes_with(&v) {
            return Err(Error::SampleCheck("glued map does not commute with A".into()));
        }
        if linalg::det(&v).is_zero() {
            return Err(Error::SampleCheck("glued map is singular at a sample".into()));
        }
        Ok((p.clone(), region))
    });
    glued.checked = checks.into_iter().collect::<Result<_>>()?;
    Ok(glued)
}
