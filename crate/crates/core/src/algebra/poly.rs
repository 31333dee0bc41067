//! Sparse multivariate polynomials with optional formal conjugate variables.
//!
//! A real-analytic expression such as `z·z̄ + w·w̄` is stored as an ordinary
//! polynomial in the doubled variable list `(z, w, zb, wb)` where the context
//! records that `zb` is the conjugate of `z`. Identities between such
//! expressions are then coefficientwise identities, and evaluation binds
//! each conjugate variable to the exact conjugate of its partner.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;

use super::ring::{forward_owned_ops, ring_via_ops, Domain};
use super::scalar::Scalar;
use super::upoly::UPoly;
use crate::error::{Error, ParseError, Result};

pub type Exponents = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarContext {
    names: Vec<String>,
    /// `conj_of[k] = Some(p)` when variable `k` is the formal conjugate of `p`.
    conj_of: Vec<Option<usize>>,
}

impl VarContext {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Arc<Self> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        let conj_of = vec![None; names.len()];
        Arc::new(VarContext { names, conj_of })
    }

    /// `pairs` lists `(conjugate, base)` names, e.g. `("zb", "z")`.
    pub fn with_conjugates<S: AsRef<str>>(names: &[S], pairs: &[(S, S)]) -> Result<Arc<Self>, ParseError> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(ParseError::field("variables", format!("duplicate variable {n:?}")));
            }
        }
        let mut conj_of = vec![None; names.len()];
        let idx = |s: &str| {
            names
                .iter()
                .position(|n| n == s)
                .ok_or_else(|| ParseError::field("conjugates", format!("unknown variable {s:?}")))
        };
        for (c, b) in pairs {
            let (ci, bi) = (idx(c.as_ref())?, idx(b.as_ref())?);
            if ci == bi || conj_of[ci].is_some() {
                return Err(ParseError::field("conjugates", format!("invalid pair {:?}", c.as_ref())));
            }
            conj_of[ci] = Some(bi);
        }
        for (ci, p) in conj_of.iter().enumerate() {
            if let Some(p) = p {
                if conj_of[*p].is_some() {
                    return Err(ParseError::field("conjugates", format!("{:?} is itself a conjugate", names[*p])));
                }
                if conj_of.iter().enumerate().any(|(k, q)| k != ci && *q == Some(*p)) {
                    return Err(ParseError::field("conjugates", format!("{:?} has two conjugates", names[*p])));
                }
            }
        }
        Ok(Arc::new(VarContext { names, conj_of }))
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn conjugate_of(&self, var: usize) -> Option<usize> {
        self.conj_of[var]
    }

    pub fn has_conjugates(&self) -> bool {
        self.conj_of.iter().any(Option::is_some)
    }

    /// Indices of the non-conjugate variables, in declaration order.
    pub fn base_vars(&self) -> Vec<usize> {
        (0..self.nvars()).filter(|&k| self.conj_of[k].is_none()).collect()
    }

    /// Number of values a caller supplies to [`MultiPoly::evaluate`].
    pub fn arity(&self) -> usize {
        self.base_vars().len()
    }

    pub fn conjugate_pairs(&self) -> Vec<(String, String)> {
        self.conj_of
            .iter()
            .enumerate()
            .filter_map(|(c, b)| b.map(|b| (self.names[c].clone(), self.names[b].clone())))
            .collect()
    }

    /// Expands base-variable values to a full assignment.
    pub fn full_point(&self, point: &[Scalar]) -> Result<Vec<Scalar>> {
        let base = self.base_vars();
        if point.len() != base.len() {
            return Err(Error::Arity { expected: base.len(), got: point.len() });
        }
        let mut full = vec![Scalar::zero(); self.nvars()];
        for (b, v) in base.iter().zip(point) {
            full[*b] = v.clone();
        }
        for k in 0..self.nvars() {
            if let Some(p) = self.conj_of[k] {
                full[k] = full[p].conj();
            }
        }
        Ok(full)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    ctx: Arc<VarContext>,
    terms: BTreeMap<Exponents, Scalar>,
}

impl MultiPoly {
    pub fn zero(ctx: &Arc<VarContext>) -> Self {
        MultiPoly { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ctx: &Arc<VarContext>) -> Self {
        MultiPoly::constant(ctx, Scalar::one())
    }

    pub fn constant(ctx: &Arc<VarContext>, c: Scalar) -> Self {
        MultiPoly::monomial(ctx, vec![0; ctx.nvars()], c)
    }

    pub fn monomial(ctx: &Arc<VarContext>, exps: Exponents, c: Scalar) -> Self {
        assert_eq!(exps.len(), ctx.nvars(), "exponent arity");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        MultiPoly { ctx: ctx.clone(), terms }
    }

    /// The variable with index `k`.
    pub fn var(ctx: &Arc<VarContext>, k: usize) -> Self {
        let mut e = vec![0; ctx.nvars()];
        e[k] = 1;
        MultiPoly::monomial(ctx, e, Scalar::one())
    }

    /// The variable called `name`; panics if absent.
    pub fn named(ctx: &Arc<VarContext>, name: &str) -> Self {
        let k = ctx.index_of(name).unwrap_or_else(|| panic!("no variable {name:?}"));
        MultiPoly::var(ctx, k)
    }

    /// Sums duplicate exponents and drops zero coefficients.
    pub fn from_terms(ctx: &Arc<VarContext>, terms: impl IntoIterator<Item = (Exponents, Scalar)>) -> Result<Self> {
        let mut map: BTreeMap<Exponents, Scalar> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != ctx.nvars() {
                return Err(Error::Arity { expected: ctx.nvars(), got: e.len() });
            }
            *map.entry(e).or_default() += &c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(MultiPoly { ctx: ctx.clone(), terms: map })
    }

    pub fn from_upoly(ctx: &Arc<VarContext>, var: usize, p: &UPoly) -> Self {
        let mut terms = BTreeMap::new();
        for (i, c) in p.coeffs().iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0; ctx.nvars()];
                e[var] = i as u32;
                terms.insert(e, c.clone());
            }
        }
        MultiPoly { ctx: ctx.clone(), terms }
    }

    pub fn ctx(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn terms(&self) -> &BTreeMap<Exponents, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn constant_term(&self) -> Scalar {
        self.terms.get(&vec![0; self.ctx.nvars()]).cloned().unwrap_or_default()
    }

    pub fn coeff(&self, exps: &[u32]) -> Scalar {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// True if some term carries a positive power of a conjugate variable.
    pub fn uses_conjugates(&self) -> bool {
        self.terms
            .keys()
            .any(|e| e.iter().enumerate().any(|(k, &x)| x > 0 && self.ctx.conj_of[k].is_some()))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return MultiPoly::zero(&self.ctx);
        }
        MultiPoly { ctx: self.ctx.clone(), terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = MultiPoly::one(&self.ctx);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluation at a point giving values for the base variables only;
    /// conjugate variables are bound to the conjugates of their partners.
    pub fn evaluate(&self, point: &[Scalar]) -> Result<Scalar> {
        let full = self.ctx.full_point(point)?;
        Ok(self.evaluate_full(&full))
    }

    /// Evaluation with every variable (conjugates included) assigned
    /// independently. Panics on arity mismatch.
    pub fn evaluate_full(&self, values: &[Scalar]) -> Scalar {
        assert_eq!(values.len(), self.ctx.nvars(), "evaluation arity");
        let mut acc = Scalar::zero();
        let mut cache: Vec<Vec<Scalar>> = vec![vec![Scalar::one()]; values.len()];
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (k, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let pw = &mut cache[k];
                while pw.len() <= x as usize {
                    let next = pw.last().unwrap() * &values[k];
                    pw.push(next);
                }
                t = &t * &pw[x as usize];
            }
            acc += &t;
        }
        acc
    }

    /// Floating-point evaluation with every variable assigned independently.
    pub fn evaluate_complex(&self, values: &[Complex64]) -> Complex64 {
        assert_eq!(values.len(), self.ctx.nvars(), "evaluation arity");
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(values)
                    .fold(c.to_complex(), |acc, (&x, v)| acc * v.powu(x))
            })
            .sum()
    }

    /// Replaces variable `k` by a constant.
    pub fn partial_eval(&self, k: usize, value: &Scalar) -> Self {
        let mut out = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let x = std::mem::replace(&mut e2[k], 0);
            let t = c * &value.pow(x);
            *out.entry(e2).or_insert_with(Scalar::zero) += &t;
        }
        out.retain(|_, c: &mut Scalar| !c.is_zero());
        MultiPoly { ctx: self.ctx.clone(), terms: out }
    }

    /// Substitutes a univariate polynomial for every variable.
    pub fn substitute(&self, subs: &[UPoly]) -> UPoly {
        assert_eq!(subs.len(), self.ctx.nvars(), "substitution arity");
        let mut acc = UPoly::zero();
        for (e, c) in &self.terms {
            let mut t = UPoly::constant(c.clone());
            for (k, &x) in e.iter().enumerate() {
                if x > 0 {
                    t = &t * &subs[k].pow(x);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Converts a polynomial in a one-variable context.
    pub fn to_upoly(&self) -> Option<UPoly> {
        if self.ctx.nvars() != 1 {
            return None;
        }
        let deg = self.total_degree().unwrap_or(0) as usize;
        let mut c = vec![Scalar::zero(); deg + 1];
        for (e, a) in &self.terms {
            c[e[0] as usize] = a.clone();
        }
        Some(UPoly::from_coeffs(c))
    }

    /// Exact quotient by `d` (lexicographic leading-term reduction), or
    /// `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        let (de, dc) = d.terms.last_key_value()?;
        let dc_inv = dc.inv()?;
        let mut rem = self.clone();
        let mut quot = BTreeMap::new();
        while let Some((re, rc)) = rem.terms.last_key_value() {
            if re.iter().zip(de).any(|(a, b)| a < b) {
                return None;
            }
            let qe: Exponents = re.iter().zip(de).map(|(a, b)| a - b).collect();
            let qc = rc * &dc_inv;
            let t = MultiPoly::monomial(&self.ctx, qe.clone(), qc.clone());
            rem = &rem - &(&t * d);
            quot.insert(qe, qc);
        }
        Some(MultiPoly { ctx: self.ctx.clone(), terms: quot })
    }

    fn zero_like(&self) -> Self {
        MultiPoly::zero(&self.ctx)
    }

    fn one_like(&self) -> Self {
        MultiPoly::one(&self.ctx)
    }

    fn check_ctx(&self, o: &MultiPoly) {
        assert!(
            Arc::ptr_eq(&self.ctx, &o.ctx) || self.ctx == o.ctx,
            "polynomials from different variable contexts"
        );
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, o: &MultiPoly) -> MultiPoly {
        self.check_ctx(o);
        let mut terms = self.terms.clone();
        for (e, c) in &o.terms {
            let slot = terms.entry(e.clone()).or_default();
            *slot += c;
            if slot.is_zero() {
                terms.remove(e);
            }
        }
        MultiPoly { ctx: self.ctx.clone(), terms }
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, o: &MultiPoly) -> MultiPoly {
        self + &(-o)
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, o: &MultiPoly) -> MultiPoly {
        self.check_ctx(o);
        let mut terms: BTreeMap<Exponents, Scalar> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *terms.entry(e).or_default() += &(ca * cb);
            }
        }
        terms.retain(|_, c| !c.is_zero());
        MultiPoly { ctx: self.ctx.clone(), terms }
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly { ctx: self.ctx.clone(), terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }
}

forward_owned_ops!(MultiPoly);
ring_via_ops!(MultiPoly);

impl Domain for MultiPoly {
    fn div_exact(&self, d: &Self) -> Option<Self> {
        MultiPoly::div_exact(self, d)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(k, &x)| {
                    if x == 1 {
                        self.ctx.names[k].clone()
                    } else {
                        format!("{}^{}", self.ctx.names[k], x)
                    }
                })
                .collect();
            match (mono.is_empty(), c.is_one()) {
                (true, _) => write!(f, "{c}")?,
                (false, true) => write!(f, "{}", mono.join("*"))?,
                (false, false) => write!(f, "{}*{}", c, mono.join("*"))?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
