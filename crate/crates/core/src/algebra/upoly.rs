//! Dense univariate polynomials over the Gaussian rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::ring::{forward_owned_ops, ring_via_ops, Domain};
use super::scalar::Scalar;

/// Coefficients in ascending degree order; empty for the zero polynomial,
/// otherwise the last coefficient is nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UPoly {
    coeffs: Vec<Scalar>,
}

impl UPoly {
    fn trim(mut self) -> Self {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        self
    }

    pub fn zero() -> Self {
        UPoly::default()
    }

    pub fn one() -> Self {
        UPoly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        UPoly { coeffs: vec![c] }.trim()
    }

    /// The indeterminate.
    pub fn x() -> Self {
        UPoly { coeffs: vec![Scalar::zero(), Scalar::one()] }
    }

    /// `a + b·x`.
    pub fn linear(a: Scalar, b: Scalar) -> Self {
        UPoly { coeffs: vec![a, b] }.trim()
    }

    pub fn monomial(c: Scalar, deg: usize) -> Self {
        if c.is_zero() {
            return UPoly::zero();
        }
        let mut coeffs = vec![Scalar::zero(); deg + 1];
        coeffs[deg] = c;
        UPoly { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<Scalar>) -> Self {
        UPoly { coeffs }.trim()
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        UPoly::from_coeffs(coeffs.iter().map(|&c| Scalar::from_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lead(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_real)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return UPoly::zero();
        }
        UPoly { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Coefficientwise complex conjugate; for real `t` this is `conj(p(t))`.
    pub fn conj(&self) -> Self {
        UPoly { coeffs: self.coeffs.iter().map(Scalar::conj).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = UPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        UPoly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &Scalar::from_int(i as i64))
                .collect(),
        )
    }

    /// The polynomial of degree `< n` through `n` points with distinct
    /// abscissae (Newton's divided differences).
    pub fn interpolate(xs: &[Scalar], ys: &[Scalar]) -> UPoly {
        assert_eq!(xs.len(), ys.len(), "interpolation data length mismatch");
        let n = xs.len();
        let mut dd = ys.to_vec();
        for k in 1..n {
            for i in (k..n).rev() {
                let den = (&xs[i] - &xs[i - k]).inv().expect("distinct abscissae");
                dd[i] = &(&dd[i] - &dd[i - 1]) * &den;
            }
        }
        let mut p = UPoly::zero();
        for i in (0..n).rev() {
            p = &(&p * &UPoly::linear(-&xs[i], Scalar::one())) + &UPoly::constant(dd[i].clone());
        }
        p
    }

    /// Euclidean division; panics if `d` is zero.
    pub fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        let dd = d.degree().expect("polynomial division by zero");
        let lead_inv = d.coeffs[dd].inv().expect("nonzero lead");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UPoly::zero(), self.clone());
        }
        let mut quot = vec![Scalar::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    let t = &c * dc;
                    rem[k + j] -= &t;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (UPoly::from_coeffs(quot), UPoly::from_coeffs(rem))
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            None => UPoly::zero(),
            Some(l) => self.scale(&l.inv().expect("nonzero lead")),
        }
    }

    /// Monic gcd (zero iff both inputs are zero).
    pub fn gcd(&self, o: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn squarefree_part(&self) -> UPoly {
        if self.is_constant() {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.divrem(&g).0.monic()
    }

    /// Multiplicity of `xi` as a root; `None` for the zero polynomial.
    pub fn order_at(&self, xi: &Scalar) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        let shifted = self.taylor_shift(xi);
        Some(shifted.coeffs.iter().take_while(|c| c.is_zero()).count() as u32)
    }

    /// `p(x + xi)`.
    pub fn taylor_shift(&self, xi: &Scalar) -> UPoly {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = &c[j + 1] * xi;
                c[j] += &t;
            }
        }
        UPoly::from_coeffs(c)
    }

    /// `p(q(x))`.
    pub fn compose(&self, q: &UPoly) -> UPoly {
        let mut acc = UPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * q) + &UPoly::constant(c.clone());
        }
        acc
    }

    pub fn fmt_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            parts.push(match (i, c.is_one()) {
                (0, _) => format!("{c}"),
                (_, true) => mono,
                _ => format!("{c}*{mono}"),
            });
        }
        parts.join(" + ")
    }

    fn zero_like(&self) -> Self {
        UPoly::zero()
    }

    fn one_like(&self) -> Self {
        UPoly::one()
    }
}

impl<'a> Add<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn add(self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::from_coeffs((0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn sub(self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UPoly::from_coeffs((0..n).map(|i| &self.coeff(i) - &o.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a UPoly> for &'a UPoly {
    type Output = UPoly;
    fn mul(self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut c = vec![Scalar::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += &(a * b);
            }
        }
        UPoly::from_coeffs(c)
    }
}

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

forward_owned_ops!(UPoly);
ring_via_ops!(UPoly);

impl Domain for UPoly {
    fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_var("t"))
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
