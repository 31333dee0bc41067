//! The intertwiner operator `Φ ↦ AΦ − ΦB` and its representation matrix.
//!
//! Φ is vectorized row-major, so `M = A ⊗ I − I ⊗ Bᵀ` and
//! `M·vec(Φ) = vec(AΦ − ΦB)`. The kernel of `M_{A,B}` is the space of
//! intertwiners `{Φ : AΦ = ΦB}`. Intertwiners in the other direction
//! (`BΨ = ΨA`) come from [`build_intertwiner`] with the arguments swapped.

use std::sync::Arc;

use crate::algebra::linalg::{self, index_subsets};
use crate::algebra::matrix::check_square_pair;
use crate::algebra::{generic_rank, to_univariate, Matrix, MatrixFamily, MultiPoly, Scalar, UPoly, VarContext};
use crate::error::{Error, Result};
use crate::par;

pub const BASIS_CONVENTION: &str = "row-major vec(Phi); M = A (x) I - I (x) B^T";

#[derive(Clone, Debug, PartialEq)]
pub struct IntertwinerMatrix {
    a: MatrixFamily,
    b: MatrixFamily,
    matrix: MatrixFamily,
}

/// Where the kernel dimension exceeds its generic value.
#[derive(Clone, Debug, PartialEq)]
pub enum LocusDescription {
    /// Squarefree polynomial whose roots are the jump points (a constant
    /// means the locus is empty).
    Univariate(UPoly),
    /// The nonzero `r×r` minors; the locus is their common zero set.
    Minors(Vec<MultiPoly>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct JumpLocus {
    pub generic_rank: usize,
    pub generic_kernel_dim: usize,
    pub description: LocusDescription,
}

impl JumpLocus {
    pub fn is_empty(&self) -> bool {
        match &self.description {
            LocusDescription::Univariate(p) => p.is_constant(),
            LocusDescription::Minors(ms) => self.generic_rank == 0 || ms.iter().any(MultiPoly::is_constant),
        }
    }

    pub fn contains(&self, point: &[Scalar]) -> Result<bool> {
        match &self.description {
            LocusDescription::Univariate(p) => {
                if point.len() != 1 {
                    return Err(Error::Arity { expected: 1, got: point.len() });
                }
                Ok(p.eval(&point[0]).is_zero())
            }
            LocusDescription::Minors(ms) => {
                if self.generic_rank == 0 {
                    return Ok(false);
                }
                for m in ms {
                    if !m.evaluate(point)?.is_zero() {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }
}

impl IntertwinerMatrix {
    pub fn a(&self) -> &MatrixFamily {
        &self.a
    }

    pub fn b(&self) -> &MatrixFamily {
        &self.b
    }

    /// The `n²×n²` representation matrix.
    pub fn matrix(&self) -> &MatrixFamily {
        &self.matrix
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn context(&self) -> &Arc<VarContext> {
        self.a.context().expect("nonempty family")
    }

    /// `AΦ − ΦB` computed through `M`.
    pub fn apply(&self, phi: &MatrixFamily) -> MatrixFamily {
        let n = self.n();
        Matrix::unvectorize(n, n, self.matrix.mul_vec(&phi.vectorize()))
    }

    pub fn at(&self, point: &[Scalar]) -> Result<Matrix<Scalar>> {
        self.matrix.evaluate(point)
    }

    pub fn dimension_at(&self, point: &[Scalar]) -> Result<usize> {
        let m = self.at(point)?;
        Ok(m.cols() - linalg::rank(&m))
    }

    pub fn generic_rank(&self) -> usize {
        generic_rank(&self.matrix)
    }

    pub fn generic_kernel_dim(&self) -> usize {
        self.matrix.cols() - self.generic_rank()
    }

    pub fn jump_locus(&self) -> JumpLocus {
        let r = self.generic_rank();
        let description = match to_univariate(&self.matrix) {
            Some(u) => LocusDescription::Univariate(univariate_locus(&u)),
            None => LocusDescription::Minors(multivariate_minors(&self.matrix, r)),
        };
        JumpLocus { generic_rank: r, generic_kernel_dim: self.matrix.cols() - r, description }
    }

    /// True iff the rank at `point` equals the generic rank, i.e. the
    /// kernel dimension is locally constant there.
    pub fn wasow_criterion(&self, point: &[Scalar]) -> Result<bool> {
        let m = self.at(point)?;
        Ok(linalg::rank(&m) == self.generic_rank())
    }
}

/// Pairs of row/column index sets for all `k×k` minors, in batches.
fn minor_index_batches(rows: usize, cols: usize, k: usize) -> Vec<Vec<(Vec<usize>, Vec<usize>)>> {
    const BATCH: usize = 64;
    let rs = index_subsets(rows, k);
    let cs = index_subsets(cols, k);
    let all: Vec<(Vec<usize>, Vec<usize>)> =
        rs.iter().flat_map(|r| cs.iter().map(move |c| (r.clone(), c.clone()))).collect();
    all.chunks(BATCH).map(<[_]>::to_vec).collect()
}

/// Squarefree polynomial whose roots are the points where the rank drops
/// below `r`. The `r`-th determinantal divisor divides any nonzero `r×r`
/// minor `D`, so the drop points are among the roots of `D` and
/// [`linalg::rank_modulo`] sorts them out.
fn univariate_locus(m: &Matrix<UPoly>) -> UPoly {
    let (r, rows, cols) = linalg::nonsingular_block(m);
    if r == 0 {
        return UPoly::one();
    }
    let d = linalg::univariate_det(&m.submatrix(&rows, &cols)).squarefree_part();
    if d.is_constant() {
        return UPoly::one();
    }
    linalg::rank_modulo(m, &d)
        .into_iter()
        .filter(|(_, k)| *k < r)
        .fold(UPoly::one(), |acc, (p, _)| &acc * &p)
        .monic()
}

/// Nonzero `r×r` minors; a single nonzero constant minor replaces the list
/// since it already shows the locus is empty.
fn multivariate_minors(m: &MatrixFamily, r: usize) -> Vec<MultiPoly> {
    if r == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for batch in minor_index_batches(m.rows(), m.cols(), r) {
        let dets = par::map(&batch, |(rs, cs)| linalg::det(&m.submatrix(rs, cs)));
        for d in dets {
            if d.is_zero() {
                continue;
            }
            if d.is_constant() {
                return vec![d];
            }
            if !out.contains(&d) {
                out.push(d);
            }
        }
    }
    out
}

/// Builds `M_{A,B}` and checks `M·vec(E_ij) = vec(A·E_ij − E_ij·B)` for
/// every standard basis matrix.
pub fn build_intertwiner(a: &MatrixFamily, b: &MatrixFamily) -> Result<IntertwinerMatrix> {
    let n = check_square_pair(a, b)?;
    if n == 0 {
        return Err(Error::Shape("empty matrices".into()));
    }
    if !a.shares_context() || !b.shares_context() || a.context() != b.context() {
        return Err(Error::Context);
    }
    let ctx = a.context().expect("nonempty").clone();
    let id = MatrixFamily::poly_identity(&ctx, n);
    let matrix = a.kron(&id).sub(&id.kron(&b.transpose()));
    let out = IntertwinerMatrix { a: a.clone(), b: b.clone(), matrix };
    let basis: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let bad = par::find_first(&basis, |&(i, j)| {
        let mut e = MatrixFamily::poly_zeros(&ctx, n, n);
        e.set(i, j, MultiPoly::one(&ctx));
        let direct = a.mul(&e).sub(&e.mul(b));
        (out.apply(&e) != direct).then_some((i, j))
    });
    if let Some((i, j)) = bad {
        return Err(Error::Shape(format!("vectorization identity failed on basis matrix ({i},{j})")));
    }
    Ok(out)
}

pub fn intertwiner_dimension_at(m: &IntertwinerMatrix, point: &[Scalar]) -> Result<usize> {
    m.dimension_at(point)
}

pub fn jump_locus(m: &IntertwinerMatrix) -> JumpLocus {
    m.jump_locus()
}

pub fn wasow_criterion(m: &IntertwinerMatrix, point: &[Scalar]) -> Result<bool> {
    m.wasow_criterion(point)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::exact_kernel;

    #[test]
    fn univariate_locus_matches_gcd_of_minors() {
        let ctx = z_ctx();
        let z = MultiPoly::var(&ctx, 0);
        let c = |k: i64| MultiPoly::constant(&ctx, Scalar::from_int(k));
        let o = c(0);
        // eigenvalues z, z², 1; at z = 0 the first two form a Jordan block,
        // so the commutant only grows at z = ±1
        let a = Matrix::from_rows(vec![
            vec![z.clone(), c(1), o.clone()],
            vec![o.clone(), &z * &z, o.clone()],
            vec![o.clone(), o.clone(), c(1)],
        ]);
        let op = build_intertwiner(&a, &a).unwrap();
        let u = to_univariate(op.matrix()).unwrap();
        let r = op.generic_rank();
        let g = linalg::minors(&u, r).into_iter().fold(UPoly::zero(), |g, (_, _, d)| g.gcd(&d));
        assert_eq!(univariate_locus(&u), g.squarefree_part());
        assert_eq!(univariate_locus(&u), UPoly::from_i64(&[-1, 0, 1]));
    }

    fn z_ctx() -> Arc<VarContext> {
        VarContext::new(&["z"])
    }

    /// `[[z, 1], [0, 0]]`
    fn example_commutant(ctx: &Arc<VarContext>) -> MatrixFamily {
        let z = MultiPoly::var(ctx, 0);
        let (o, one) = (MultiPoly::zero(ctx), MultiPoly::one(ctx));
        Matrix::from_rows(vec![vec![z, one], vec![o.clone(), o]])
    }

    /// `[[0, z], [0, 0]]`
    fn nilpotent_family(ctx: &Arc<VarContext>) -> MatrixFamily {
        let z = MultiPoly::var(ctx, 0);
        let o = MultiPoly::zero(ctx);
        Matrix::from_rows(vec![vec![o.clone(), z], vec![o.clone(), o]])
    }

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn zero_pair_gives_zero_matrix() {
        let ctx = z_ctx();
        let zero = MatrixFamily::poly_zeros(&ctx, 2, 2);
        let m = build_intertwiner(&zero, &zero).unwrap();
        assert_eq!(m.matrix().rows(), 4);
        assert!(m.matrix().is_zero());
    }

    #[test]
    fn one_by_one_is_difference() {
        let ctx = VarContext::new(&["a", "b"]);
        let a = MultiPoly::var(&ctx, 0);
        let b = MultiPoly::var(&ctx, 1);
        let m = build_intertwiner(&Matrix::from_rows(vec![vec![a.clone()]]), &Matrix::from_rows(vec![vec![b.clone()]]))
            .unwrap();
        assert_eq!(m.matrix().get(0, 0), &(&a - &b));
    }

    #[test]
    fn commutant_example_has_constant_dimension_two() {
        let ctx = z_ctx();
        let a = example_commutant(&ctx);
        let m = build_intertwiner(&a, &a).unwrap();
        assert_eq!(m.generic_rank(), 2);
        for k in -3..=3 {
            assert_eq!(m.dimension_at(&[s(k)]).unwrap(), 2);
        }
        let locus = m.jump_locus();
        assert_eq!(locus.generic_kernel_dim, 2);
        assert!(locus.is_empty());
        assert!(m.wasow_criterion(&[Scalar::from_ratio(7, 3)]).unwrap());
    }

    #[test]
    fn commutant_kernel_at_zero_is_identity_and_e12() {
        let ctx = z_ctx();
        let a = example_commutant(&ctx);
        let m0 = build_intertwiner(&a, &a).unwrap().at(&[Scalar::zero()]).unwrap();
        let k = exact_kernel(&m0);
        assert_eq!(k.len(), 2);
        // vec = (a, b, c, d) with c = 0 and a = z b + d at z = 0
        for v in &k {
            assert!(v[2].is_zero());
            assert_eq!(v[0], v[3]);
        }
    }

    #[test]
    fn nilpotent_family_jumps_at_zero() {
        let ctx = z_ctx();
        let a = nilpotent_family(&ctx);
        let m = build_intertwiner(&a, &a).unwrap();
        assert_eq!(m.dimension_at(&[s(0)]).unwrap(), 4);
        assert_eq!(m.dimension_at(&[s(1)]).unwrap(), 2);
        let locus = m.jump_locus();
        assert_eq!(locus.generic_kernel_dim, 2);
        assert_eq!(locus.description, LocusDescription::Univariate(UPoly::x()));
        assert!(locus.contains(&[s(0)]).unwrap());
        assert!(!m.wasow_criterion(&[s(0)]).unwrap());
        assert!(m.wasow_criterion(&[s(1)]).unwrap());
    }

    #[test]
    fn constant_diagonal_family() {
        let ctx = z_ctx();
        let d = Matrix::from_i64(&[&[1, 0], &[0, 2]]).to_family(&ctx);
        let m = build_intertwiner(&d, &d).unwrap();
        let locus = m.jump_locus();
        assert_eq!(locus.generic_kernel_dim, 2);
        assert!(locus.is_empty());
    }

    #[test]
    fn generic_rank_examples() {
        let ctx = z_ctx();
        assert_eq!(generic_rank(&MatrixFamily::poly_zeros(&ctx, 3, 2)), 0);
        let z = MultiPoly::var(&ctx, 0);
        let o = MultiPoly::zero(&ctx);
        let d = Matrix::from_rows(vec![vec![z.clone(), o.clone()], vec![o, z.pow(2)]]);
        assert_eq!(generic_rank(&d), 2);
    }

    #[test]
    fn multivariate_locus_as_minors() {
        let ctx = VarContext::new(&["z", "w"]);
        let z = MultiPoly::var(&ctx, 0);
        let w = MultiPoly::var(&ctx, 1);
        let o = MultiPoly::zero(&ctx);
        let a = Matrix::from_rows(vec![vec![o.clone(), &z * &w], vec![o.clone(), o]]);
        let m = build_intertwiner(&a, &a).unwrap();
        let locus = m.jump_locus();
        assert!(!locus.is_empty());
        assert!(locus.contains(&[s(0), s(5)]).unwrap());
        assert!(locus.contains(&[s(2), s(0)]).unwrap());
        assert!(!locus.contains(&[s(1), s(1)]).unwrap());
    }

    #[test]
    fn rejects_mismatched_shapes() {
        let ctx = z_ctx();
        let a = MatrixFamily::poly_zeros(&ctx, 2, 2);
        let b = MatrixFamily::poly_zeros(&ctx, 3, 3);
        assert!(matches!(build_intertwiner(&a, &b), Err(Error::Shape(_))));
    }
}
