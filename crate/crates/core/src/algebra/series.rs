use std::collections::BTreeMap;

use super::poly::{Exponents, MultiPoly};
use super::scalar::Scalar;

/// Power series truncated at total degree `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    nvars: usize,
    degree: u32,
    coeffs: BTreeMap<Exponents, Scalar>,
}

/// Exponent vectors of total degree `≤ degree`, graded then lexicographic.
pub fn monomials_upto(nvars: usize, degree: u32) -> Vec<Exponents> {
    let mut out = Vec::new();
    for d in 0..=degree {
        let mut cur = vec![0u32; nvars];
        push_degree(&mut out, &mut cur, 0, d);
    }
    out
}

fn push_degree(out: &mut Vec<Exponents>, cur: &mut Exponents, k: usize, left: u32) {
    if k + 1 == cur.len() {
        cur[k] = left;
        out.push(cur.clone());
        return;
    }
    if cur.is_empty() {
        if left == 0 {
            out.push(Vec::new());
        }
        return;
    }
    for x in (0..=left).rev() {
        cur[k] = x;
        push_degree(out, cur, k + 1, left - x);
    }
    cur[k] = 0;
}

impl TruncatedSeries {
    pub fn zero(nvars: usize, degree: u32) -> Self {
        TruncatedSeries { nvars, degree, coeffs: BTreeMap::new() }
    }

    /// Truncates a polynomial (conjugate variables are treated as ordinary ones).
    pub fn from_poly(p: &MultiPoly, degree: u32) -> Self {
        let mut s = TruncatedSeries::zero(p.ctx().nvars(), degree);
        for (e, c) in p.terms() {
            if e.iter().sum::<u32>() <= degree {
                s.coeffs.insert(e.clone(), c.clone());
            }
        }
        s
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeffs(&self) -> &BTreeMap<Exponents, Scalar> {
        &self.coeffs
    }

    pub fn coeff(&self, e: &[u32]) -> Scalar {
        self.coeffs.get(e).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&vec![0; self.nvars])
    }

    /// Sets a coefficient; panics if the exponent exceeds the truncation.
    pub fn set(&mut self, e: Exponents, c: Scalar) {
        assert_eq!(e.len(), self.nvars, "exponent arity");
        assert!(e.iter().sum::<u32>() <= self.degree, "exponent beyond truncation");
        if c.is_zero() {
            self.coeffs.remove(&e);
        } else {
            self.coeffs.insert(e, c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, o: &TruncatedSeries) -> TruncatedSeries {
        let degree = self.degree.min(o.degree);
        let mut out = TruncatedSeries::zero(self.nvars, degree);
        for (e, c) in self.coeffs.iter().chain(&o.coeffs) {
            if e.iter().sum::<u32>() <= degree {
                let v = &out.coeff(e) + c;
                out.set(e.clone(), v);
            }
        }
        out
    }

    /// Product, truncated at the smaller of the two degrees.
    pub fn mul(&self, o: &TruncatedSeries) -> TruncatedSeries {
        let degree = self.degree.min(o.degree);
        let mut acc: BTreeMap<Exponents, Scalar> = BTreeMap::new();
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &o.coeffs {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                if e.iter().sum::<u32>() <= degree {
                    *acc.entry(e).or_default() += &(ca * cb);
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        TruncatedSeries { nvars: self.nvars, degree, coeffs: acc }
    }

    pub fn mul_poly(&self, p: &MultiPoly) -> TruncatedSeries {
        self.mul(&TruncatedSeries::from_poly(p, self.degree))
    }
}
