//! Finite coverings, matrix cocycles on them, and assembly of a global
//! similarity from chartwise similarities plus a splitting.
//!
//! Open sets are modelled by finite lists of sample points in the
//! coordinates of one [`VarContext`]. Identities are checked either
//! symbolically (as rational-function identities) or exactly at the
//! relevant samples, see [`CheckMode`].

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::algebra::{FracMatrix, Matrix, MatrixFamily, Scalar, VarContext};
use crate::error::{Error, Result};
use crate::par;

pub type SamplePoint = Vec<Scalar>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CheckMode {
    /// Symbolic whenever all data share the covering's context, which is
    /// always the case for validated inputs.
    #[default]
    Auto,
    Symbolic,
    /// Exact evaluation at the overlap (or triple-overlap) samples only.
    Sampled,
}

impl CheckMode {
    fn symbolic(self) -> bool {
        !matches!(self, CheckMode::Sampled)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Chart {
    pub name: String,
    pub samples: Vec<SamplePoint>,
}

/// Charts with sample witnesses and symmetric pairwise overlap witnesses.
#[derive(Clone, Debug, PartialEq)]
pub struct Covering {
    ctx: Arc<VarContext>,
    charts: Vec<Chart>,
    overlaps: BTreeMap<(usize, usize), Vec<SamplePoint>>,
}

impl Covering {
    /// `overlaps` lists `(i, j, samples)` for `i ≠ j`; each unordered pair may
    /// be given once or in both orders with identical samples. Pairs not
    /// listed are disjoint.
    pub fn new(ctx: &Arc<VarContext>, charts: Vec<Chart>, overlaps: Vec<(usize, usize, Vec<SamplePoint>)>) -> Result<Self> {
        let arity = ctx.arity();
        for c in &charts {
            if let Some(p) = c.samples.iter().find(|p| p.len() != arity) {
                return Err(Error::Arity { expected: arity, got: p.len() });
            }
        }
        for (i, c) in charts.iter().enumerate() {
            if charts[..i].iter().any(|d| d.name == c.name) {
                return Err(Error::Cocycle(format!("duplicate chart name {}", c.name)));
            }
        }
        let mut map: BTreeMap<(usize, usize), Vec<SamplePoint>> = BTreeMap::new();
        for (i, j, samples) in overlaps {
            if i >= charts.len() || j >= charts.len() || i == j {
                return Err(Error::Cocycle(format!("invalid overlap index pair ({i},{j})")));
            }
            if let Some(p) = samples.iter().find(|p| p.len() != arity) {
                return Err(Error::Arity { expected: arity, got: p.len() });
            }
            for key in [(i, j), (j, i)] {
                if let Some(prev) = map.get(&key) {
                    if *prev != samples {
                        return Err(Error::Cocycle(format!(
                            "overlap ({},{}) listed twice with different samples",
                            charts[i].name, charts[j].name
                        )));
                    }
                }
                map.insert(key, samples.clone());
            }
        }
        map.retain(|_, s| !s.is_empty());
        Ok(Covering { ctx: ctx.clone(), charts, overlaps: map })
    }

    /// One chart carrying all the samples.
    pub fn single(ctx: &Arc<VarContext>, name: &str, samples: Vec<SamplePoint>) -> Result<Self> {
        Covering::new(ctx, vec![Chart { name: name.into(), samples }], Vec::new())
    }

    pub fn context(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn len(&self) -> usize {
        self.charts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.charts.is_empty()
    }

    pub fn charts(&self) -> &[Chart] {
        &self.charts
    }

    pub fn name(&self, i: usize) -> &str {
        &self.charts[i].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.charts.iter().position(|c| c.name == name)
    }

    /// Samples of `U_i ∩ U_j`; for `i == j` the chart samples.
    pub fn overlap(&self, i: usize, j: usize) -> &[SamplePoint] {
        if i == j {
            return &self.charts[i].samples;
        }
        self.overlaps.get(&(i, j)).map_or(&[], Vec::as_slice)
    }

    /// Ordered pairs `(i, j)`, `i ≠ j`, with a nonempty overlap witness.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.overlaps.keys().copied().collect()
    }

    /// Samples common to all three pairwise overlaps.
    pub fn triple_overlap(&self, i: usize, j: usize, k: usize) -> Vec<SamplePoint> {
        let (a, b, c) = (self.overlap(i, j), self.overlap(j, k), self.overlap(i, k));
        a.iter().filter(|p| b.contains(p) && c.contains(p)).cloned().collect()
    }

    /// Ordered triples with a nonempty common witness (indices may repeat).
    pub fn triples(&self) -> Vec<(usize, usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if !self.triple_overlap(i, j, k).is_empty() {
                        out.push((i, j, k));
                    }
                }
            }
        }
        out
    }

    fn pair_label(&self, i: usize, j: usize) -> String {
        format!("pair ({},{})", self.name(i), self.name(j))
    }

    /// Checks that `self` refines `coarse` through `tau`: each chart's
    /// samples lie in chart `tau[a]`, each overlap's in the image overlap.
    pub fn check_refines(&self, coarse: &Covering, tau: &[usize]) -> Result<()> {
        if self.ctx != coarse.ctx {
            return Err(Error::Context);
        }
        if tau.len() != self.len() || tau.iter().any(|&t| t >= coarse.len()) {
            return Err(Error::Cocycle("index map does not match the charts".into()));
        }
        for (a, chart) in self.charts.iter().enumerate() {
            let target = coarse.overlap(tau[a], tau[a]);
            if chart.samples.iter().any(|p| !target.contains(p)) {
                return Err(Error::Cocycle(format!("chart {} is not contained in chart {}", chart.name, coarse.name(tau[a]))));
            }
        }
        for (&(a, b), samples) in &self.overlaps {
            let target = coarse.overlap(tau[a], tau[b]);
            if samples.iter().any(|p| !target.contains(p)) {
                return Err(Error::Cocycle(format!(
                    "{} is not contained in {}",
                    self.pair_label(a, b),
                    coarse.pair_label(tau[a], tau[b])
                )));
            }
        }
        Ok(())
    }
}

fn check_entry(ctx: &Arc<VarContext>, m: &FracMatrix, n: usize) -> Result<()> {
    if m.context() != ctx {
        return Err(Error::Context);
    }
    if m.rows() != n || m.cols() != n {
        return Err(Error::Shape(format!("expected {n}x{n}, got {}x{}", m.rows(), m.cols())));
    }
    Ok(())
}

/// `lhs == rhs` symbolically, or at every sample (a pole counts as failure).
fn same(lhs: &FracMatrix, rhs: &FracMatrix, samples: &[SamplePoint], mode: CheckMode) -> bool {
    if mode.symbolic() {
        return lhs.equals(rhs);
    }
    samples.iter().all(|p| match (lhs.evaluate(p), rhs.evaluate(p)) {
        (Ok(Some(x)), Ok(Some(y))) => x == y,
        _ => false,
    })
}

fn intertwines(h: &FracMatrix, a: &MatrixFamily, b: &MatrixFamily, samples: &[SamplePoint], mode: CheckMode) -> bool {
    same(&FracMatrix::poly_mul(a, h), &h.mul_poly(b), samples, mode)
}

/// Transition data `f_ij` on the pairs with nonempty overlap. Missing
/// diagonal entries mean `f_ii = I`.
#[derive(Clone, Debug)]
pub struct MatrixCocycle {
    covering: Covering,
    size: usize,
    entries: BTreeMap<(usize, usize), FracMatrix>,
}

impl MatrixCocycle {
    /// Every ordered pair with a nonempty overlap needs an entry.
    pub fn new(covering: Covering, size: usize, entries: BTreeMap<(usize, usize), FracMatrix>) -> Result<Self> {
        for (&(i, j), m) in &entries {
            if i >= covering.len() || j >= covering.len() {
                return Err(Error::Cocycle(format!("entry ({i},{j}) outside the covering")));
            }
            if i != j && covering.overlap(i, j).is_empty() {
                return Err(Error::Cocycle(format!("entry for disjoint {}", covering.pair_label(i, j))));
            }
            check_entry(covering.context(), m, size)?;
        }
        if let Some((i, j)) = covering.pairs().into_iter().find(|k| !entries.contains_key(k)) {
            return Err(Error::Cocycle(format!("missing entry for {}", covering.pair_label(i, j))));
        }
        Ok(MatrixCocycle { covering, size, entries })
    }

    pub fn identity(covering: Covering, size: usize) -> Self {
        let id = FracMatrix::identity(covering.context(), size);
        let entries = covering.pairs().into_iter().map(|k| (k, id.clone())).collect();
        MatrixCocycle { covering, size, entries }
    }

    /// `f_ij = h_i·h_j⁻¹`. Fails if some `h_j` is singular as a rational matrix.
    pub fn coboundary(covering: Covering, h: &[FracMatrix]) -> Result<Self> {
        let size = h.first().map_or(0, FracMatrix::rows);
        if h.len() != covering.len() {
            return Err(Error::Arity { expected: covering.len(), got: h.len() });
        }
        let mut entries = BTreeMap::new();
        for (i, j) in covering.pairs() {
            let inv = h[j].inverse().ok_or_else(|| Error::Cocycle(format!("h for chart {} is singular", covering.name(j))))?;
            entries.insert((i, j), h[i].mul(&inv));
        }
        MatrixCocycle::new(covering, size, entries)
    }

    pub fn covering(&self) -> &Covering {
        &self.covering
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entry(&self, i: usize, j: usize) -> FracMatrix {
        match self.entries.get(&(i, j)) {
            Some(m) => m.clone(),
            None if i == j => FracMatrix::identity(self.covering.context(), self.size),
            None => panic!("no entry for disjoint charts ({i},{j})"),
        }
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), FracMatrix> {
        &self.entries
    }

    /// Pulls the data back along `tau` to a refining covering.
    pub fn refine(&self, fine: Covering, tau: &[usize]) -> Result<MatrixCocycle> {
        fine.check_refines(&self.covering, tau)?;
        let entries = fine.pairs().into_iter().map(|(a, b)| ((a, b), self.entry(tau[a], tau[b]))).collect();
        MatrixCocycle::new(fine, self.size, entries)
    }
}

/// Per-chart matrices `h_i` with `det h_i ≠ 0` at every chart sample.
#[derive(Clone, Debug)]
pub struct Splitting {
    h: Vec<FracMatrix>,
}

impl Splitting {
    pub fn new(covering: &Covering, h: Vec<FracMatrix>) -> Result<Self> {
        if h.len() != covering.len() {
            return Err(Error::Arity { expected: covering.len(), got: h.len() });
        }
        let size = h.first().map_or(0, FracMatrix::rows);
        for (i, m) in h.iter().enumerate() {
            check_entry(covering.context(), m, size)?;
            for p in covering.overlap(i, i) {
                let ok = m.evaluate(p)?.is_some_and(|v| !crate::algebra::linalg::det(&v).is_zero());
                if !ok {
                    return Err(Error::Cocycle(format!("h for chart {} is not invertible at a chart sample", covering.name(i))));
                }
            }
        }
        Ok(Splitting { h })
    }

    pub fn identity(covering: &Covering, size: usize) -> Self {
        Splitting { h: vec![FracMatrix::identity(covering.context(), size); covering.len()] }
    }

    pub fn get(&self, i: usize) -> &FracMatrix {
        &self.h[i]
    }

    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }

    pub fn refine(&self, fine: &Covering, coarse: &Covering, tau: &[usize]) -> Result<Splitting> {
        fine.check_refines(coarse, tau)?;
        Splitting::new(fine, tau.iter().map(|&t| self.h[t].clone()).collect())
    }
}

/// `f_ii = I`, `f_ij·f_ji = I` and `f_ij·f_jk = f_ik` on every witnessed
/// pair and triple.
pub fn verify_cocycle(c: &MatrixCocycle, mode: CheckMode) -> bool {
    let cov = &c.covering;
    let id = FracMatrix::identity(cov.context(), c.size);
    let diag_ok = (0..cov.len()).all(|i| same(&c.entry(i, i), &id, cov.overlap(i, i), mode));
    let pairs = cov.pairs();
    diag_ok
        && par::all(&pairs, |&(i, j)| same(&c.entry(i, j).mul(&c.entry(j, i)), &id, cov.overlap(i, j), mode))
        && par::all(&cov.triples(), |&(i, j, k)| {
            same(&c.entry(i, j).mul(&c.entry(j, k)), &c.entry(i, k), &cov.triple_overlap(i, j, k), mode)
        })
}

/// `A·f_ij = f_ij·A` on every pair.
pub fn verify_commutant_valued(c: &MatrixCocycle, a: &MatrixFamily, mode: CheckMode) -> Result<bool> {
    if a.rows() != c.size || a.cols() != c.size {
        return Err(Error::Shape(format!("A is {}x{}, cocycle entries are {}x{}", a.rows(), a.cols(), c.size, c.size)));
    }
    if a.context().is_some_and(|x| x != c.covering.context()) {
        return Err(Error::Context);
    }
    let cov = &c.covering;
    let mut keys: Vec<(usize, usize)> = cov.pairs();
    keys.extend(c.entries.keys().filter(|(i, j)| i == j));
    Ok(par::all(&keys, |&(i, j)| intertwines(&c.entry(i, j), a, a, cov.overlap(i, j), mode)))
}

/// `f_ij = h_i·g_ij·h_j⁻¹` on every pair, tested as `f_ij·h_j = h_i·g_ij`.
pub fn verify_equivalence(f: &MatrixCocycle, g: &MatrixCocycle, s: &Splitting, mode: CheckMode) -> Result<bool> {
    if f.covering != g.covering || s.len() != f.covering.len() {
        return Err(Error::Cocycle("covering mismatch".into()));
    }
    if f.size != g.size || s.h.first().is_some_and(|h| h.rows() != f.size) {
        return Err(Error::Shape("cocycle and splitting sizes differ".into()));
    }
    let cov = &f.covering;
    let mut keys: Vec<(usize, usize)> = cov.pairs();
    keys.extend((0..cov.len()).map(|i| (i, i)));
    Ok(par::all(&keys, |&(i, j)| {
        same(&f.entry(i, j).mul(&s.h[j]), &s.h[i].mul(&g.entry(i, j)), cov.overlap(i, j), mode)
    }))
}

/// One global similarity stored chart by chart as `H = h_i⁻¹·H_i`.
#[derive(Clone, Debug)]
pub struct GlobalSimilarity {
    covering: Covering,
    pieces: Vec<FracMatrix>,
}

impl GlobalSimilarity {
    pub fn covering(&self) -> &Covering {
        &self.covering
    }

    pub fn pieces(&self) -> &[FracMatrix] {
        &self.pieces
    }

    pub fn piece(&self, chart: usize) -> &FracMatrix {
        &self.pieces[chart]
    }

    pub fn at(&self, chart: usize, point: &[Scalar]) -> Result<Option<Matrix<Scalar>>> {
        self.pieces[chart].evaluate(point)
    }
}

impl fmt::Display for GlobalSimilarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, h) in self.pieces.iter().enumerate() {
            writeln!(f, "chart {}:\n{}", self.covering.name(i), h)?;
        }
        Ok(())
    }
}

/// Glues chartwise similarities `H_i` (with `A·H_i = H_i·B`) through a
/// splitting of the commutant-valued cocycle `H_i·H_j⁻¹ = h_i·h_j⁻¹`.
/// Every failed precondition names its chart or pair.
pub fn assemble_global_similarity(
    covering: &Covering,
    a: &MatrixFamily,
    b: &MatrixFamily,
    locals: &[FracMatrix],
    split: &Splitting,
    mode: CheckMode,
) -> Result<GlobalSimilarity> {
    let n = crate::algebra::matrix::check_square_pair(a, b)?;
    if locals.len() != covering.len() || split.len() != covering.len() {
        return Err(Error::Arity { expected: covering.len(), got: locals.len().min(split.len()) });
    }
    for m in locals.iter().chain(&split.h) {
        check_entry(covering.context(), m, n)?;
    }
    let charts: Vec<usize> = (0..covering.len()).collect();
    let chart_fail = par::find_first(&charts, |&i| {
        let samples = covering.overlap(i, i);
        if !intertwines(&locals[i], a, b, samples, mode) {
            return Some(format!("chart {}: A*H != H*B", covering.name(i)));
        }
        let invertible = if mode.symbolic() {
            !locals[i].det_numer().is_zero()
        } else {
            samples.iter().all(|p| {
                locals[i].evaluate(p).ok().flatten().is_some_and(|v| !crate::algebra::linalg::det(&v).is_zero())
            })
        };
        if !invertible {
            return Some(format!("chart {}: local similarity is singular", covering.name(i)));
        }
        if !intertwines(&split.h[i], a, a, samples, mode) {
            return Some(format!("chart {}: h does not commute with A", covering.name(i)));
        }
        None
    });
    if let Some(msg) = chart_fail {
        return Err(Error::Cocycle(msg));
    }
    let pairs = covering.pairs();
    let inverses: Vec<Option<FracMatrix>> = split.h.iter().map(FracMatrix::inverse).collect();
    if let Some(i) = inverses.iter().position(Option::is_none) {
        return Err(Error::Cocycle(format!("chart {}: h is singular", covering.name(i))));
    }
    let inverses: Vec<FracMatrix> = inverses.into_iter().flatten().collect();
    let pieces: Vec<FracMatrix> = charts.iter().map(|&i| inverses[i].mul(&locals[i])).collect();
    // H_i·H_j⁻¹ = h_i·h_j⁻¹ is the same as h_i⁻¹·H_i = h_j⁻¹·H_j
    let pair_fail = par::find_first(&pairs, |&(i, j)| {
        (!same(&pieces[i], &pieces[j], covering.overlap(i, j), mode))
            .then(|| format!("{}: H_i*H_j^-1 != h_i*h_j^-1", covering.pair_label(i, j)))
    });
    if let Some(msg) = pair_fail {
        return Err(Error::Cocycle(msg));
    }
    for (i, h) in pieces.iter().enumerate() {
        if !intertwines(h, a, b, covering.overlap(i, i), CheckMode::Symbolic) {
            return Err(Error::Cocycle(format!("chart {}: assembled H fails A*H = H*B", covering.name(i))));
        }
    }
    for (i, j) in pairs {
        for p in covering.overlap(i, j) {
            let (x, y) = (pieces[i].evaluate(p)?, pieces[j].evaluate(p)?);
            if x.is_none() || x != y {
                return Err(Error::Cocycle(format!("{}: assembled pieces disagree at a sample", covering.pair_label(i, j))));
            }
        }
    }
    Ok(GlobalSimilarity { covering: covering.clone(), pieces })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::MultiPoly;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::from_ratio(n, d)
    }

    fn constant(ctx: &Arc<VarContext>, rows: &[&[i64]]) -> FracMatrix {
        FracMatrix::from_poly(&Matrix::from_i64(rows).to_family(ctx))
    }

    fn two_charts(ctx: &Arc<VarContext>, shared: Vec<SamplePoint>) -> Covering {
        let charts = vec![
            Chart { name: "1".into(), samples: shared.clone() },
            Chart { name: "2".into(), samples: shared.clone() },
        ];
        Covering::new(ctx, charts, vec![(0, 1, shared)]).unwrap()
    }

    #[test]
    fn single_chart_identity() {
        let ctx = VarContext::new(&["z"]);
        let cov = Covering::single(&ctx, "1", vec![vec![Scalar::zero()]]).unwrap();
        let c = MatrixCocycle::identity(cov, 2);
        assert!(verify_cocycle(&c, CheckMode::Auto));
        assert!(verify_cocycle(&c, CheckMode::Sampled));
    }

    #[test]
    fn sphere_transition_is_a_cocycle() {
        let ctx = VarContext::new(&["x1", "x2", "x3"]);
        let x1 = MultiPoly::var(&ctx, 0);
        let x2 = MultiPoly::var(&ctx, 1);
        let h = &x1 + &x2.scale(&Scalar::i());
        let hs = &x1 - &x2.scale(&Scalar::i());
        let o = MultiPoly::zero(&ctx);
        let f12 = FracMatrix::from_poly(&Matrix::from_rows(vec![vec![h, o.clone()], vec![o, hs]]));
        let f21 = f12.inverse().unwrap();
        let band = vec![
            vec![Scalar::one(), Scalar::zero(), Scalar::zero()],
            vec![q(3, 5), q(4, 5), Scalar::zero()],
            vec![q(12, 13), Scalar::zero(), q(5, 13)],
        ];
        let cov = two_charts(&ctx, band);
        let entries = BTreeMap::from([((0, 1), f12), ((1, 0), f21)]);
        let c = MatrixCocycle::new(cov, 2, entries).unwrap();
        assert!(verify_cocycle(&c, CheckMode::Auto));
        assert!(verify_cocycle(&c, CheckMode::Sampled));
    }

    #[test]
    fn broken_triple_is_detected() {
        let ctx = VarContext::new(&["z"]);
        let s = vec![vec![Scalar::one()]];
        let charts = (1..=3).map(|k| Chart { name: k.to_string(), samples: s.clone() }).collect();
        let cov = Covering::new(&ctx, charts, vec![(0, 1, s.clone()), (1, 2, s.clone()), (0, 2, s)]).unwrap();
        let two = constant(&ctx, &[&[2]]);
        let half = FracMatrix::new(Matrix::from_i64(&[&[1]]).to_family(&ctx), MultiPoly::constant(&ctx, Scalar::from_int(2))).unwrap();
        let one = constant(&ctx, &[&[1]]);
        let mut entries = BTreeMap::from([
            ((0, 1), two.clone()),
            ((1, 0), half.clone()),
            ((1, 2), one.clone()),
            ((2, 1), one.clone()),
            ((0, 2), two.clone()),
            ((2, 0), half.clone()),
        ]);
        let good = MatrixCocycle::new(cov.clone(), 1, entries.clone()).unwrap();
        assert!(verify_cocycle(&good, CheckMode::Auto));
        entries.insert((0, 2), one.clone());
        entries.insert((2, 0), one);
        let bad = MatrixCocycle::new(cov, 1, entries).unwrap();
        assert!(!verify_cocycle(&bad, CheckMode::Auto));
        assert!(!verify_cocycle(&bad, CheckMode::Sampled));
    }

    #[test]
    fn missing_entry_is_rejected() {
        let ctx = VarContext::new(&["z"]);
        let cov = two_charts(&ctx, vec![vec![Scalar::one()]]);
        let entries = BTreeMap::from([((0, 1), constant(&ctx, &[&[1]]))]);
        let err = MatrixCocycle::new(cov, 1, entries).unwrap_err();
        assert!(err.to_string().contains("pair (2,1)"), "{err}");
    }

    #[test]
    fn commutant_checks() {
        let ctx = VarContext::new(&["z"]);
        let cov = two_charts(&ctx, vec![vec![Scalar::one()], vec![q(1, 3)]]);
        let a = Matrix::from_i64(&[&[1, 0], &[0, 2]]).to_family(&ctx);
        assert!(verify_commutant_valued(&MatrixCocycle::identity(cov.clone(), 2), &a, CheckMode::Auto).unwrap());
        let e12 = constant(&ctx, &[&[0, 1], &[0, 0]]);
        let c = MatrixCocycle::new(cov.clone(), 2, BTreeMap::from([((0, 1), e12.clone()), ((1, 0), e12)])).unwrap();
        assert!(!verify_commutant_valued(&c, &a, CheckMode::Auto).unwrap());

        // A = [[z,1],[0,0]], B = G⁻¹AG with G = [[1,z],[0,1]]; H_1 = G, H_2 = (I + A)·G
        let z = MultiPoly::var(&ctx, 0);
        let (one, zero) = (MultiPoly::one(&ctx), MultiPoly::zero(&ctx));
        let a = Matrix::from_rows(vec![vec![z.clone(), one.clone()], vec![zero.clone(), zero.clone()]]);
        let g = FracMatrix::from_poly(&Matrix::from_rows(vec![vec![one.clone(), z], vec![zero, one]]));
        let i_plus_a = MatrixFamily::poly_identity(&ctx, 2).add(&a);
        let h2 = FracMatrix::poly_mul(&i_plus_a, &g);
        let c = MatrixCocycle::coboundary(cov, &[g.clone(), h2]).unwrap();
        assert!(verify_cocycle(&c, CheckMode::Auto));
        assert!(verify_commutant_valued(&c, &a, CheckMode::Auto).unwrap());
        assert!(verify_commutant_valued(&c, &a, CheckMode::Sampled).unwrap());
    }

    #[test]
    fn equivalence_checks() {
        let ctx = VarContext::new(&["z"]);
        let cov = two_charts(&ctx, vec![vec![q(1, 2)], vec![q(2, 7)]]);
        let z = MultiPoly::var(&ctx, 0);
        let one = MultiPoly::one(&ctx);
        let h1 = FracMatrix::from_poly(&Matrix::from_rows(vec![vec![&one + &z, z.clone()], vec![z.clone(), &one + &z]]));
        let h2 = constant(&ctx, &[&[2, 1], &[1, 1]]);
        let f = MatrixCocycle::coboundary(cov.clone(), &[h1.clone(), h2.clone()]).unwrap();
        let id = MatrixCocycle::identity(cov.clone(), 2);
        let s = Splitting::new(&cov, vec![h1.clone(), h2.clone()]).unwrap();
        assert!(verify_equivalence(&f, &id, &s, CheckMode::Auto).unwrap());
        assert!(verify_equivalence(&f, &id, &s, CheckMode::Sampled).unwrap());
        assert!(verify_equivalence(&f, &f, &Splitting::identity(&cov, 2), CheckMode::Auto).unwrap());
        let perturbed = FracMatrix::from_poly(&h1.numer().add(&Matrix::from_i64(&[&[1, 0], &[0, 0]]).to_family(&ctx)));
        let s = Splitting::new(&cov, vec![perturbed, h2]).unwrap();
        assert!(!verify_equivalence(&f, &id, &s, CheckMode::Auto).unwrap());
        assert!(!verify_equivalence(&f, &id, &s, CheckMode::Sampled).unwrap());
    }

    #[test]
    fn equivalence_survives_refinement() {
        let ctx = VarContext::new(&["z"]);
        let pts: Vec<SamplePoint> = [(1, 2), (1, 3), (2, 5)].iter().map(|&(n, d)| vec![q(n, d)]).collect();
        let cov = two_charts(&ctx, pts.clone());
        let z = MultiPoly::var(&ctx, 0);
        let h1 = FracMatrix::from_poly(&Matrix::from_rows(vec![vec![&MultiPoly::one(&ctx) + &z]]));
        let h2 = constant(&ctx, &[&[3]]);
        let f = MatrixCocycle::coboundary(cov.clone(), &[h1.clone(), h2.clone()]).unwrap();
        let id = MatrixCocycle::identity(cov.clone(), 1);
        let s = Splitting::new(&cov, vec![h1, h2]).unwrap();
        let charts = vec![
            Chart { name: "a".into(), samples: pts[..2].to_vec() },
            Chart { name: "b".into(), samples: pts[1..].to_vec() },
            Chart { name: "c".into(), samples: pts[2..].to_vec() },
        ];
        let fine = Covering::new(&ctx, charts, vec![(0, 1, pts[1..2].to_vec()), (1, 2, pts[2..].to_vec())]).unwrap();
        let tau = [0, 1, 1];
        let (ff, gf) = (f.refine(fine.clone(), &tau).unwrap(), id.refine(fine.clone(), &tau).unwrap());
        let sf = s.refine(&fine, &cov, &tau).unwrap();
        assert!(verify_equivalence(&ff, &gf, &sf, CheckMode::Sampled).unwrap());
        assert!(verify_equivalence(&ff, &gf, &sf, CheckMode::Auto).unwrap());
        let outside = Covering::single(&ctx, "x", vec![vec![q(9, 1)]]).unwrap();
        assert!(f.refine(outside, &[0]).is_err());
    }

    #[test]
    fn assembly_examples() {
        let ctx = VarContext::new(&["z"]);
        let cov = two_charts(&ctx, vec![vec![Scalar::zero()], vec![Scalar::one()]]);
        let a = Matrix::from_i64(&[&[1, 0], &[0, 2]]).to_family(&ctx);
        let id = constant(&ctx, &[&[1, 0], &[0, 1]]);
        let flip = constant(&ctx, &[&[1, 0], &[0, -1]]);
        let locals = [id.clone(), flip.clone()];
        let s = Splitting::new(&cov, vec![id.clone(), flip]).unwrap();
        let g = assemble_global_similarity(&cov, &a, &a, &locals, &s, CheckMode::Auto).unwrap();
        assert!(g.piece(0).is_identity() && g.piece(1).is_identity());

        let bad = Splitting::identity(&cov, 2);
        let err = assemble_global_similarity(&cov, &a, &a, &locals, &bad, CheckMode::Auto).unwrap_err();
        assert!(err.to_string().contains("pair (1,2)"), "{err}");

        let single = Covering::single(&ctx, "1", vec![vec![Scalar::zero()]]).unwrap();
        let h = constant(&ctx, &[&[2, 0], &[0, 3]]);
        let s = Splitting::new(&single, vec![h.clone()]).unwrap();
        let g = assemble_global_similarity(&single, &a, &a, &[h], &s, CheckMode::Auto).unwrap();
        assert!(g.piece(0).is_identity());
    }

    #[test]
    fn assembly_rejects_non_commuting_splitting() {
        let ctx = VarContext::new(&["z"]);
        let cov = Covering::single(&ctx, "U", vec![vec![Scalar::zero()]]).unwrap();
        let a = Matrix::from_i64(&[&[1, 0], &[0, 2]]).to_family(&ctx);
        let id = constant(&ctx, &[&[1, 0], &[0, 1]]);
        let s = Splitting::new(&cov, vec![constant(&ctx, &[&[1, 1], &[0, 1]])]).unwrap();
        let err = assemble_global_similarity(&cov, &a, &a, &[id], &s, CheckMode::Auto).unwrap_err();
        assert!(err.to_string().contains("chart U"), "{err}");
    }
}
