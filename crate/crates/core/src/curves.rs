//! Restriction to curve germs through the origin of `C²` and the
//! truncated-jet obstruction engine for the pair
//!
//! ```text
//! A = [[z^{2+ℓ} w^{2+ℓ}, z^{3+ℓ}], [w^{3+ℓ}, 0]]
//! B = [[0, z^{3+ℓ}], [w^{3+ℓ}, z^{2+ℓ} w^{2+ℓ}]]
//! ```
//!
//! which is continuously but not holomorphically similar at the origin.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use num_integer::Integer;

use crate::algebra::linalg;
use crate::algebra::scalar::parse_rational;
use crate::algebra::series::monomials_upto;
use crate::algebra::{Exponents, Matrix, MatrixFamily, MultiPoly, Scalar, TruncatedSeries, UPoly, VarContext};
use crate::error::{Error, ParseError, Result};
use crate::par;
use crate::sylvester::build_intertwiner;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurveSpec {
    FullGerm,
    /// `{z^p = w^q}`, parametrized by `z = t^q, w = t^p`.
    MonomialCusp { p: u32, q: u32 },
    /// `⋃_j {w = t_j z}`, one branch `z = t, w = t_j t` per slope.
    LineUnion { slopes: Vec<Scalar> },
}

impl CurveSpec {
    /// Requires `gcd(p, q) = 1` and `0 < q < p`.
    pub fn cusp(p: u32, q: u32) -> Result<Self> {
        if q == 0 || q >= p {
            return Err(Error::Hypothesis(format!("a monomial cusp needs 0 < q < p, got p={p}, q={q}")));
        }
        if p.gcd(&q) != 1 {
            return Err(Error::Hypothesis(format!("p={p} and q={q} must be relatively prime")));
        }
        Ok(CurveSpec::MonomialCusp { p, q })
    }

    /// Requires at least one slope, all pairwise distinct.
    pub fn lines(slopes: Vec<Scalar>) -> Result<Self> {
        if slopes.is_empty() {
            return Err(Error::Hypothesis("a union of lines needs at least one slope".into()));
        }
        for (i, s) in slopes.iter().enumerate() {
            if slopes[..i].contains(s) {
                return Err(Error::Hypothesis(format!("slope {s} is repeated")));
            }
        }
        Ok(CurveSpec::LineUnion { slopes })
    }

    /// `LineUnion{1, 2, …, k}`.
    pub fn integer_lines(k: usize) -> Self {
        CurveSpec::LineUnion { slopes: (1..=k as i64).map(Scalar::from_int).collect() }
    }

    /// Branch parametrizations `(z(t), w(t))`; empty for the full germ.
    pub fn branches(&self) -> Vec<(UPoly, UPoly)> {
        match self {
            CurveSpec::FullGerm => Vec::new(),
            CurveSpec::MonomialCusp { p, q } => vec![(
                UPoly::monomial(Scalar::one(), *q as usize),
                UPoly::monomial(Scalar::one(), *p as usize),
            )],
            CurveSpec::LineUnion { slopes } => {
                slopes.iter().map(|s| (UPoly::x(), UPoly::monomial(s.clone(), 1))).collect()
            }
        }
    }

    /// Default truncation: `(ℓ+2)(p+q)+2` for cusps, `2ℓ+8` otherwise.
    pub fn default_truncation(&self, ell: u32) -> u32 {
        match self {
            CurveSpec::MonomialCusp { p, q } => (ell + 2) * (p + q) + 2,
            _ => 2 * ell + 8,
        }
    }

    /// Least truncation covering every exponent the forcing argument compares.
    pub fn minimal_truncation(&self, ell: u32) -> u32 {
        match self {
            CurveSpec::MonomialCusp { p, q } => (ell + 2) * (p + q),
            _ => 2 * ell + 6,
        }
    }
}

impl fmt::Display for CurveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveSpec::FullGerm => f.write_str("full"),
            CurveSpec::MonomialCusp { p, q } => write!(f, "cusp:{p},{q}"),
            CurveSpec::LineUnion { slopes } => {
                f.write_str("lines:")?;
                for (i, s) in slopes.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{s}")?;
                }
                Ok(())
            }
        }
    }
}

/// `full`, `cusp:P,Q` or `lines:S1,S2,...` (rational slopes).
impl FromStr for CurveSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "full" {
            return Ok(CurveSpec::FullGerm);
        }
        let bad = |m: &str| Error::Parse(ParseError::field("curve", m.to_string()));
        let (kind, rest) = s.split_once(':').ok_or_else(|| bad("expected full, cusp:P,Q or lines:S1,..."))?;
        match kind {
            "cusp" => {
                let (p, q) = rest.split_once(',').ok_or_else(|| bad("cusp needs two integers P,Q"))?;
                let p: u32 = p.trim().parse().map_err(|_| bad("invalid P"))?;
                let q: u32 = q.trim().parse().map_err(|_| bad("invalid Q"))?;
                CurveSpec::cusp(p, q)
            }
            "lines" => {
                let slopes = rest
                    .split(',')
                    .map(|t| parse_rational(t).map(Scalar::real))
                    .collect::<Result<Vec<_>, _>>()?;
                CurveSpec::lines(slopes)
            }
            _ => Err(bad("unknown curve kind")),
        }
    }
}

/// Restriction of a polynomial in `z, w` to a curve.
#[derive(Clone, Debug, PartialEq)]
pub enum Restriction {
    /// The full germ: nothing is substituted.
    Full(MultiPoly),
    /// One univariate polynomial in the branch parameter per branch.
    Branches(Vec<UPoly>),
}

fn check_holomorphic_pair(p: &MultiPoly) -> Result<()> {
    if p.uses_conjugates() || p.ctx().has_conjugates() {
        return Err(Error::ConjugatesPresent);
    }
    if p.ctx().nvars() != 2 {
        return Err(Error::Arity { expected: 2, got: p.ctx().nvars() });
    }
    Ok(())
}

pub fn restrict_to_curve(p: &MultiPoly, curve: &CurveSpec) -> Result<Restriction> {
    check_holomorphic_pair(p)?;
    Ok(match curve {
        CurveSpec::FullGerm => Restriction::Full(p.clone()),
        _ => Restriction::Branches(curve.branches().into_iter().map(|(z, w)| p.substitute(&[z, w])).collect()),
    })
}

/// The holomorphic pair `(A, B)` in the variables `z, w`.
pub fn pair_matrices(ell: u32, ctx: &Arc<VarContext>) -> (MatrixFamily, MatrixFamily) {
    let z = MultiPoly::var(ctx, 0);
    let w = MultiPoly::var(ctx, 1);
    let o = MultiPoly::zero(ctx);
    let zw = &z.pow(2 + ell) * &w.pow(2 + ell);
    let (z3, w3) = (z.pow(3 + ell), w.pow(3 + ell));
    let a = Matrix::from_rows(vec![vec![zw.clone(), z3.clone()], vec![w3.clone(), o.clone()]]);
    let b = Matrix::from_rows(vec![vec![o, z3], vec![w3, zw]]);
    (a, b)
}

/// `A`, `B`, and the continuous similarity `S = [[1, c_w], [−c_z, 1]]` with
/// `c_z = z̄ w^{2+ℓ} / (z z̄ + w w̄)` and `c_w = w̄ z^{2+ℓ} / (z z̄ + w w̄)`.
/// Everything lives in the context `(z, w, zb, wb)`.
#[derive(Clone, Debug)]
pub struct LocalPair {
    pub ell: u32,
    pub a: MatrixFamily,
    pub b: MatrixFamily,
    /// `S·(z z̄ + w w̄)`.
    pub s_numer: MatrixFamily,
    /// `z z̄ + w w̄`.
    pub denom: MultiPoly,
    pub cz_numer: MultiPoly,
    pub cw_numer: MultiPoly,
}

pub fn local_pair_context() -> Arc<VarContext> {
    VarContext::with_conjugates(&["z", "w", "zb", "wb"], &[("zb", "z"), ("wb", "w")]).expect("valid context")
}

/// Builds the pair and checks the cleared-denominator identities; panics if
/// they fail (they are polynomial identities, so that would be a bug).
pub fn local_pair(ell: u32) -> LocalPair {
    let ctx = local_pair_context();
    let (z, w) = (MultiPoly::named(&ctx, "z"), MultiPoly::named(&ctx, "w"));
    let (zb, wb) = (MultiPoly::named(&ctx, "zb"), MultiPoly::named(&ctx, "wb"));
    let hctx = VarContext::new(&["z", "w"]);
    let (ha, hb) = pair_matrices(ell, &hctx);
    let lift = |m: &MatrixFamily| m.map(|p| MultiPoly::from_terms(&ctx, p.terms().iter().map(|(e, c)| (vec![e[0], e[1], 0, 0], c.clone()))).expect("arity"));
    let (a, b) = (lift(&ha), lift(&hb));
    let denom = &(&z * &zb) + &(&w * &wb);
    let cz_numer = &zb * &w.pow(2 + ell);
    let cw_numer = &wb * &z.pow(2 + ell);
    let s_numer = Matrix::from_rows(vec![vec![denom.clone(), cw_numer.clone()], vec![-&cz_numer, denom.clone()]]);
    let pair = LocalPair { ell, a, b, s_numer, denom, cz_numer, cw_numer };
    assert!(pair.weighted_identity_holds(), "weighted identity");
    assert!(pair.similarity_identity_holds(), "A S = S B");
    pair
}

impl LocalPair {
    /// `c_z z^{3+ℓ} + c_w w^{3+ℓ} = z^{2+ℓ} w^{2+ℓ}` after multiplying by
    /// `z z̄ + w w̄`.
    pub fn weighted_identity_holds(&self) -> bool {
        let ctx = self.denom.ctx();
        let (z, w) = (MultiPoly::named(ctx, "z"), MultiPoly::named(ctx, "w"));
        let lhs = &(&self.cz_numer * &z.pow(3 + self.ell)) + &(&self.cw_numer * &w.pow(3 + self.ell));
        let rhs = &(&z.pow(2 + self.ell) * &w.pow(2 + self.ell)) * &self.denom;
        lhs == rhs
    }

    /// `A·S = S·B` after clearing the denominator.
    pub fn similarity_identity_holds(&self) -> bool {
        self.a.mul(&self.s_numer) == self.s_numer.mul(&self.b)
    }

    /// `(c_z, c_w, det S)` at a point of `C² \ {0}`.
    pub fn eval_float(&self, z: Complex64, w: Complex64) -> (Complex64, Complex64, Complex64) {
        let vals = [z, w, z.conj(), w.conj()];
        let d = self.denom.evaluate_complex(&vals);
        let cz = self.cz_numer.evaluate_complex(&vals) / d;
        let cw = self.cw_numer.evaluate_complex(&vals) / d;
        (cz, cw, Complex64::new(1.0, 0.0) + cz * cw)
    }

    /// Checks `|c_z c_w| ≤ |z|^{1+ℓ}|w|^{1+ℓ}/4` and `|det S − 1| < 1` on the
    /// points of a `g⁴` grid (cell centers of `[-1,1]⁴`) inside the unit ball.
    pub fn ball_check(&self, g: usize) -> BallReport {
        let coord = |k: usize| -1.0 + (2 * k + 1) as f64 / g as f64;
        let ell = self.ell as i32;
        let results = par::map_range(g * g, |ab| {
            let (ia, ib) = (ab / g, ab % g);
            let mut local = BallReport::default();
            for ic in 0..g {
                for id in 0..g {
                    let z = Complex64::new(coord(ia), coord(ib));
                    let w = Complex64::new(coord(ic), coord(id));
                    if z.norm_sqr() + w.norm_sqr() >= 1.0 {
                        continue;
                    }
                    let (cz, cw, det) = self.eval_float(z, w);
                    let prod = (cz * cw).norm();
                    let bound = z.norm().powi(1 + ell) * w.norm().powi(1 + ell) / 4.0;
                    local.samples += 1;
                    local.max_det_deviation = local.max_det_deviation.max((det - 1.0).norm());
                    if prod > bound * (1.0 + 1e-12) + 1e-300 {
                        local.bound_violations += 1;
                    }
                }
            }
            local
        });
        results.into_iter().fold(BallReport::default(), |acc, r| BallReport {
            samples: acc.samples + r.samples,
            bound_violations: acc.bound_violations + r.bound_violations,
            max_det_deviation: acc.max_det_deviation.max(r.max_det_deviation),
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BallReport {
    pub samples: usize,
    pub bound_violations: usize,
    pub max_det_deviation: f64,
}

impl BallReport {
    pub fn passed(&self) -> bool {
        self.samples > 0 && self.bound_violations == 0 && self.max_det_deviation < 1.0
    }
}

/// Which identity the unknown holomorphic functions must satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum JetSystem {
    /// `α z^{ℓ+3} + β w^{ℓ+3} + γ z^{ℓ+2} w^{ℓ+2} = 0`.
    WeightedSum,
    /// `A·H = H·B` with `H = [[a, b], [c, d]]`.
    Intertwiner,
    /// `A·H = H·A`.
    Commutant,
}

impl JetSystem {
    pub fn unknown_names(&self) -> &'static [&'static str] {
        match self {
            JetSystem::WeightedSum => &["alpha", "beta", "gamma"],
            _ => &["a", "b", "c", "d"],
        }
    }

    /// Tested constant-term functionals as `(name, coefficients on the unknown functions)`.
    pub fn functionals(&self) -> Vec<(String, Vec<i64>)> {
        match self {
            JetSystem::WeightedSum => vec![
                ("alpha00".into(), vec![1, 0, 0]),
                ("beta00".into(), vec![0, 1, 0]),
                ("gamma00".into(), vec![0, 0, 1]),
            ],
            JetSystem::Intertwiner => vec![
                ("a00".into(), vec![1, 0, 0, 0]),
                ("b00".into(), vec![0, 1, 0, 0]),
                ("c00".into(), vec![0, 0, 1, 0]),
                ("d00".into(), vec![0, 0, 0, 1]),
            ],
            JetSystem::Commutant => vec![
                ("a00".into(), vec![1, 0, 0, 0]),
                ("b00".into(), vec![0, 1, 0, 0]),
                ("c00".into(), vec![0, 0, 1, 0]),
                ("d00".into(), vec![0, 0, 0, 1]),
                ("a00-d00".into(), vec![1, 0, 0, -1]),
            ],
        }
    }

    /// Rows are scalar identities `Σ_c P[r][c]·X_c = 0` in the unknown functions `X_c`.
    pub fn system_matrix(&self, ell: u32, ctx: &Arc<VarContext>) -> MatrixFamily {
        let z = MultiPoly::var(ctx, 0);
        let w = MultiPoly::var(ctx, 1);
        match self {
            JetSystem::WeightedSum => Matrix::from_rows(vec![vec![
                z.pow(ell + 3),
                w.pow(ell + 3),
                &z.pow(ell + 2) * &w.pow(ell + 2),
            ]]),
            JetSystem::Intertwiner => {
                let (a, b) = pair_matrices(ell, ctx);
                build_intertwiner(&a, &b).expect("2x2 pair").matrix().clone()
            }
            JetSystem::Commutant => {
                let (a, _) = pair_matrices(ell, ctx);
                build_intertwiner(&a, &a).expect("2x2 pair").matrix().clone()
            }
        }
    }
}

impl FromStr for JetSystem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "weighted-sum" | "weighted" => Ok(JetSystem::WeightedSum),
            "intertwiner" | "ah-hb" => Ok(JetSystem::Intertwiner),
            "commutant" | "ah-ha" => Ok(JetSystem::Commutant),
            _ => Err(Error::Parse(ParseError::field("system", format!("unknown system {s:?}")))),
        }
    }
}

impl fmt::Display for JetSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            JetSystem::WeightedSum => "weighted-sum",
            JetSystem::Intertwiner => "intertwiner",
            JetSystem::Commutant => "commutant",
        })
    }
}

/// The Taylor coefficient of `z^e[0] w^e[1]` in unknown function `function`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnknownCoeff {
    pub function: usize,
    pub exps: Exponents,
}

/// Where a linear constraint comes from: a branch (or the full germ), a
/// row of the system, and a monomial (`[k]` in `t`, or `[j, k]` in `z, w`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConstraintLabel {
    pub branch: Option<usize>,
    pub row: usize,
    pub exps: Exponents,
}

/// The linear system on Taylor coefficients imposed through degree `N`.
#[derive(Clone, Debug)]
pub struct JetLinearSystem {
    pub unknowns: Vec<UnknownCoeff>,
    pub constraints: Vec<(ConstraintLabel, Vec<(usize, Scalar)>)>,
}

impl JetLinearSystem {
    /// Unknowns that occur in at least one constraint.
    pub fn active(&self) -> Vec<usize> {
        let mut seen = vec![false; self.unknowns.len()];
        for (_, row) in &self.constraints {
            for (u, _) in row {
                seen[*u] = true;
            }
        }
        (0..self.unknowns.len()).filter(|&u| seen[u]).collect()
    }
}

pub fn jet_system(ell: u32, curve: &CurveSpec, truncation: u32, system: JetSystem) -> JetLinearSystem {
    let ctx = VarContext::new(&["z", "w"]);
    let p = system.system_matrix(ell, &ctx);
    let monos = monomials_upto(2, truncation);
    let nfun = p.cols();
    let unknowns: Vec<UnknownCoeff> =
        (0..nfun).flat_map(|c| monos.iter().map(move |e| UnknownCoeff { function: c, exps: e.clone() })).collect();
    let index = |c: usize, k: usize| c * monos.len() + k;
    let mut acc: BTreeMap<ConstraintLabel, BTreeMap<usize, Scalar>> = BTreeMap::new();
    let mut add = |label: ConstraintLabel, u: usize, v: Scalar| {
        let e = acc.entry(label).or_default().entry(u).or_default();
        *e += &v;
    };
    match curve {
        CurveSpec::FullGerm => {
            for r in 0..p.rows() {
                for c in 0..nfun {
                    for (pe, pc) in p.get(r, c).terms() {
                        for (k, e) in monos.iter().enumerate() {
                            let tot = [pe[0] + e[0], pe[1] + e[1]];
                            if tot[0] + tot[1] <= truncation {
                                add(ConstraintLabel { branch: None, row: r, exps: tot.to_vec() }, index(c, k), pc.clone());
                            }
                        }
                    }
                }
            }
        }
        _ => {
            for (bi, (zt, wt)) in curve.branches().iter().enumerate() {
                let restricted = p.map(|q| q.substitute(&[zt.clone(), wt.clone()]));
                let mono_r: Vec<UPoly> =
                    monos.iter().map(|e| &zt.pow(e[0]) * &wt.pow(e[1])).collect();
                for r in 0..p.rows() {
                    for c in 0..nfun {
                        let pr = restricted.get(r, c);
                        for (d, pc) in pr.coeffs().iter().enumerate() {
                            if pc.is_zero() || d as u32 > truncation {
                                continue;
                            }
                            for (k, m) in mono_r.iter().enumerate() {
                                for (dm, mc) in m.coeffs().iter().enumerate() {
                                    let tot = (d + dm) as u32;
                                    if mc.is_zero() || tot > truncation {
                                        continue;
                                    }
                                    add(ConstraintLabel { branch: Some(bi), row: r, exps: vec![tot] }, index(c, k), pc * mc);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let constraints = acc
        .into_iter()
        .map(|(l, row)| (l, row.into_iter().filter(|(_, v)| !v.is_zero()).collect::<Vec<_>>()))
        .filter(|(_, row)| !row.is_empty())
        .collect();
    JetLinearSystem { unknowns, constraints }
}

/// A kernel element given as truncated Taylor series of the unknown functions.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub series: Vec<TruncatedSeries>,
    /// Back-substitution into the identity on every branch through degree `N`.
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FunctionalVerdict {
    pub name: String,
    pub forced_zero: bool,
    /// Normalized so the functional equals 1; present iff not forced.
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ObstructionReport {
    pub curve: CurveSpec,
    pub ell: u32,
    pub truncation: u32,
    pub system: JetSystem,
    pub kernel_dim: usize,
    pub verdicts: Vec<FunctionalVerdict>,
    /// Basis of the values the constant terms `(X_1(0), …, X_k(0))` take
    /// over the kernel.
    pub constant_space: Vec<Vec<Scalar>>,
}

impl ObstructionReport {
    pub fn verdict(&self, name: &str) -> Option<&FunctionalVerdict> {
        self.verdicts.iter().find(|v| v.name == name)
    }

    pub fn all_forced(&self, names: &[&str]) -> bool {
        names.iter().all(|n| self.verdict(n).is_some_and(|v| v.forced_zero))
    }

    /// For the matrix systems: whether every admissible `H(0)` is singular,
    /// i.e. `det(Σ x_i B_i)` vanishes identically over the basis `B_i` of
    /// [`Self::constant_space`]. `None` for the scalar system.
    pub fn constant_forced_singular(&self) -> Option<bool> {
        if self.system == JetSystem::WeightedSum {
            return None;
        }
        let k = self.constant_space.len();
        if k == 0 {
            return Some(true);
        }
        let names: Vec<String> = (0..k).map(|i| format!("x{i}")).collect();
        let ctx = VarContext::new(&names);
        let entry = |e: usize| {
            self.constant_space
                .iter()
                .enumerate()
                .fold(MultiPoly::zero(&ctx), |acc, (i, b)| &acc + &MultiPoly::var(&ctx, i).scale(&b[e]))
        };
        let generic = Matrix::from_fn(2, 2, |i, j| entry(2 * i + j));
        Some(linalg::det(&generic).is_zero())
    }
}

/// Imposes the identity on the curve through degree `N`, computes the exact
/// kernel on the Taylor coefficients, and decides for each constant-term
/// functional whether it vanishes on the whole kernel.
pub fn obstruction_kernel(ell: u32, curve: &CurveSpec, truncation: u32, system: JetSystem) -> Result<ObstructionReport> {
    let needed = curve.minimal_truncation(ell);
    if truncation < needed {
        return Err(Error::TruncationTooSmall { needed, got: truncation });
    }
    let js = jet_system(ell, curve, truncation, system);
    let active = js.active();
    let col_of: HashMap<usize, usize> = active.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let mut k = Matrix::scalar_zeros(js.constraints.len(), active.len());
    for (r, (_, row)) in js.constraints.iter().enumerate() {
        for (u, v) in row {
            k.set(r, col_of[u], v.clone());
        }
    }
    let kernel = linalg::kernel(&k);
    let inactive: Vec<usize> = (0..js.unknowns.len()).filter(|u| !col_of.contains_key(u)).collect();
    let kernel_dim = kernel.len() + inactive.len();
    let zero_exps = vec![0u32, 0];
    let nfun = system.unknown_names().len();
    let const_unknown: Vec<usize> = (0..nfun)
        .map(|c| js.unknowns.iter().position(|u| u.function == c && u.exps == zero_exps).expect("constant term"))
        .collect();

    let mut projections: Vec<Vec<Scalar>> = kernel
        .iter()
        .map(|v| const_unknown.iter().map(|u| col_of.get(u).map_or_else(Scalar::zero, |&i| v[i].clone())).collect())
        .collect();
    for (f, u) in const_unknown.iter().enumerate() {
        if !col_of.contains_key(u) {
            let mut e = vec![Scalar::zero(); nfun];
            e[f] = Scalar::one();
            projections.push(e);
        }
    }
    let constant_space = if projections.is_empty() {
        Vec::new()
    } else {
        let rr = linalg::rref(&Matrix::from_rows(projections));
        (0..rr.pivots.len()).map(|i| rr.matrix.row(i).to_vec()).collect()
    };

    let verdicts = system
        .functionals()
        .into_iter()
        .map(|(name, coeffs)| {
            let phi: Vec<(usize, Scalar)> = coeffs
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(f, &c)| (const_unknown[f], Scalar::from_int(c)))
                .collect();
            let eval = |full: &dyn Fn(usize) -> Scalar| {
                phi.iter().fold(Scalar::zero(), |acc, (u, c)| &acc + &(c * &full(*u)))
            };
            let mut witness_vec: Option<Vec<Scalar>> = None;
            for v in &kernel {
                let val = eval(&|u| col_of.get(&u).map_or_else(Scalar::zero, |&i| v[i].clone()));
                if !val.is_zero() {
                    let inv = val.inv().expect("nonzero");
                    let mut full = vec![Scalar::zero(); js.unknowns.len()];
                    for (i, &u) in active.iter().enumerate() {
                        full[u] = &v[i] * &inv;
                    }
                    witness_vec = Some(full);
                    break;
                }
            }
            if witness_vec.is_none() {
                for &u in &inactive {
                    let val = eval(&|x| if x == u { Scalar::one() } else { Scalar::zero() });
                    if !val.is_zero() {
                        let mut full = vec![Scalar::zero(); js.unknowns.len()];
                        full[u] = val.inv().expect("nonzero");
                        witness_vec = Some(full);
                        break;
                    }
                }
            }
            let witness = witness_vec.map(|full| {
                let series = series_from_vector(&js, nfun, truncation, &full);
                let verified = verify_witness(ell, curve, truncation, system, &series);
                Witness { series, verified }
            });
            FunctionalVerdict { name, forced_zero: witness.is_none(), witness }
        })
        .collect();
    Ok(ObstructionReport { curve: curve.clone(), ell, truncation, system, kernel_dim, verdicts, constant_space })
}

fn series_from_vector(js: &JetLinearSystem, nfun: usize, truncation: u32, v: &[Scalar]) -> Vec<TruncatedSeries> {
    let mut out = vec![TruncatedSeries::zero(2, truncation); nfun];
    for (u, c) in js.unknowns.iter().zip(v) {
        if !c.is_zero() {
            out[u.function].set(u.exps.clone(), c.clone());
        }
    }
    out
}

/// Substitutes the series into `Σ_c P[r][c]·X_c` on every branch and checks
/// that all coefficients through degree `N` vanish. Independent of the
/// constraint assembly in [`jet_system`].
pub fn verify_witness(ell: u32, curve: &CurveSpec, truncation: u32, system: JetSystem, series: &[TruncatedSeries]) -> bool {
    let ctx = VarContext::new(&["z", "w"]);
    let p = system.system_matrix(ell, &ctx);
    let polys: Vec<MultiPoly> = series
        .iter()
        .map(|s| MultiPoly::from_terms(&ctx, s.coeffs().iter().map(|(e, c)| (e.clone(), c.clone()))).expect("arity"))
        .collect();
    if polys.len() != p.cols() {
        return false;
    }
    let combos: Vec<MultiPoly> = (0..p.rows())
        .map(|r| (0..p.cols()).fold(MultiPoly::zero(&ctx), |acc, c| &acc + &(p.get(r, c) * &polys[c])))
        .collect();
    match curve {
        CurveSpec::FullGerm => combos.iter().all(|q| q.terms().keys().all(|e| e.iter().sum::<u32>() > truncation)),
        _ => curve.branches().iter().all(|(zt, wt)| {
            combos.iter().all(|q| {
                let u = q.substitute(&[zt.clone(), wt.clone()]);
                u.coeffs().iter().take(truncation as usize + 1).all(Scalar::is_zero)
            })
        }),
    }
}

/// Runs independent obstruction solves in parallel.
pub fn obstruction_batch(jobs: &[(u32, CurveSpec, u32, JetSystem)]) -> Vec<Result<ObstructionReport>> {
    par::map(jobs, |(ell, curve, n, system)| obstruction_kernel(*ell, curve, *n, *system))
}

#[derive(Clone, Debug, PartialEq)]
pub enum SimilarityVerdict {
    /// Every admissible `H(0)` is singular (in particular when all entries
    /// are forced to vanish), so no invertible holomorphic `H` with
    /// `A·H = H·B` exists at the origin.
    Obstructed(ObstructionReport),
    /// Some invertible `H(0)` survives at this truncation.
    Inconclusive(ObstructionReport),
}

impl SimilarityVerdict {
    pub fn is_obstructed(&self) -> bool {
        matches!(self, SimilarityVerdict::Obstructed(_))
    }

    pub fn report(&self) -> &ObstructionReport {
        match self {
            SimilarityVerdict::Obstructed(r) | SimilarityVerdict::Inconclusive(r) => r,
        }
    }
}

/// Checks the hypotheses under which the non-similarity is claimed: a cusp
/// with `ℓ+2 < q < p` and `gcd(p, q) = 1`, at least `2ℓ+5` distinct lines,
/// or the full germ.
pub fn check_curve_hypotheses(ell: u32, curve: &CurveSpec) -> Result<()> {
    match curve {
        CurveSpec::FullGerm => Ok(()),
        CurveSpec::MonomialCusp { p, q } => {
            if *q <= ell + 2 {
                return Err(Error::Hypothesis(format!("the cusp exponent q must exceed l+2 = {}, got q={q}", ell + 2)));
            }
            if p <= q {
                return Err(Error::Hypothesis(format!("the cusp exponents must satisfy q < p, got p={p}, q={q}")));
            }
            if p.gcd(q) != 1 {
                return Err(Error::Hypothesis(format!("the cusp exponents p={p} and q={q} must be relatively prime")));
            }
            Ok(())
        }
        CurveSpec::LineUnion { slopes } => {
            let need = 2 * ell as usize + 5;
            if slopes.len() < need {
                return Err(Error::Hypothesis(format!(
                    "a union of lines needs at least 2l+5 = {need} distinct slopes, got {}",
                    slopes.len()
                )));
            }
            Ok(())
        }
    }
}

pub fn curve_similarity_obstruction(ell: u32, curve: &CurveSpec, truncation: u32) -> Result<SimilarityVerdict> {
    check_curve_hypotheses(ell, curve)?;
    let report = obstruction_kernel(ell, curve, truncation, JetSystem::Intertwiner)?;
    let singular = report.all_forced(&["a00", "b00", "c00", "d00"]) || report.constant_forced_singular() == Some(true);
    Ok(if singular {
        SimilarityVerdict::Obstructed(report)
    } else {
        SimilarityVerdict::Inconclusive(report)
    })
}
