//! Local Smith normal form in one variable, kernel extension through a
//! prescribed value, and the two local similarity constructors.

use std::sync::Arc;

use crate::algebra::frac::FracMatrix;
use crate::algebra::linalg::{self, index_subsets};
use crate::algebra::{exact_kernel, to_univariate, Domain, Matrix, MatrixFamily, MultiPoly, PointedRational, Scalar, UPoly, VarContext};
use crate::error::{Error, Result};
use crate::par;
use crate::sylvester::build_intertwiner;

/// `M = E · [Δ 0; 0 0] · F` over the local ring at `base`, with
/// `Δ = diag((ζ−ξ)^κ₁, …, (ζ−ξ)^κ_r)` and `κ` nondecreasing.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalSmithForm {
    base: Scalar,
    e: Matrix<PointedRational>,
    f: Matrix<PointedRational>,
    f_inv: Matrix<PointedRational>,
    kappa: Vec<u32>,
}

impl LocalSmithForm {
    pub fn base(&self) -> &Scalar {
        &self.base
    }

    pub fn e(&self) -> &Matrix<PointedRational> {
        &self.e
    }

    pub fn f(&self) -> &Matrix<PointedRational> {
        &self.f
    }

    pub fn f_inv(&self) -> &Matrix<PointedRational> {
        &self.f_inv
    }

    pub fn exponents(&self) -> &[u32] {
        &self.kappa
    }

    pub fn rank(&self) -> usize {
        self.kappa.len()
    }

    /// The padded diagonal middle factor, `n×m`.
    pub fn delta(&self) -> Matrix<PointedRational> {
        let zero = PointedRational::zero(self.base.clone());
        Matrix::from_fn(self.e.rows(), self.f.rows(), |i, j| {
            if i == j && i < self.kappa.len() {
                PointedRational::local_power(self.base.clone(), self.kappa[i])
            } else {
                zero.clone()
            }
        })
    }

    /// `E·Δ·F`.
    pub fn reconstruct(&self) -> Matrix<PointedRational> {
        self.e.mul(&self.delta()).mul(&self.f)
    }
}

/// Entries of a one-variable family as dense polynomials.
pub fn univariate(m: &MatrixFamily) -> Result<Matrix<UPoly>> {
    if m.uses_conjugates() {
        return Err(Error::ConjugatesPresent);
    }
    to_univariate(m).ok_or_else(|| Error::Precondition("the family must depend on a single variable".into()))
}

fn germs(m: &Matrix<UPoly>, base: &Scalar) -> Matrix<PointedRational> {
    m.map(|p| PointedRational::from_poly(p.clone(), base.clone()))
}

fn germ_identity(base: &Scalar, n: usize) -> Matrix<PointedRational> {
    Matrix::identity_like(&PointedRational::zero(base.clone()), n)
}

/// Pivots on an entry of least vanishing order (ties: smallest `(row, col)`),
/// clears its row and column over the local ring, and recurses on the
/// complementary block.
pub fn local_smith_form(m: &Matrix<UPoly>, base: &Scalar) -> LocalSmithForm {
    let (n, cols) = (m.rows(), m.cols());
    let mut cur = germs(m, base);
    let mut e = germ_identity(base, n);
    let mut f = germ_identity(base, cols);
    let mut f_inv = germ_identity(base, cols);
    let mut kappa = Vec::new();
    for k in 0..n.min(cols) {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in k..n {
            for j in k..cols {
                if let Some(o) = cur.get(i, j).vanishing_order() {
                    if best.is_none_or(|(b, _, _)| o < b) {
                        best = Some((o, i, j));
                    }
                }
            }
        }
        let Some((order, pi, pj)) = best else { break };
        cur.swap_rows(k, pi);
        e.swap_cols(k, pi);
        cur.swap_cols(k, pj);
        f.swap_rows(k, pj);
        f_inv.swap_cols(k, pj);
        let pivot = cur.get(k, k).clone();
        for i in k + 1..n {
            if cur.get(i, k).is_zero() {
                continue;
            }
            let c = cur.get(i, k).checked_div(&pivot).expect("pivot has least order");
            for j in k..cols {
                let v = cur.get(i, j) - &(&c * cur.get(k, j));
                cur.set(i, j, v);
            }
            for r in 0..n {
                let v = e.get(r, k) + &(&c * e.get(r, i));
                e.set(r, k, v);
            }
        }
        for j in k + 1..cols {
            if cur.get(k, j).is_zero() {
                continue;
            }
            let c = cur.get(k, j).checked_div(&pivot).expect("pivot has least order");
            for i in k..n {
                let v = cur.get(i, j) - &(&c * cur.get(i, k));
                cur.set(i, j, v);
            }
            for s in 0..cols {
                let v = f.get(k, s) + &(&c * f.get(j, s));
                f.set(k, s, v);
                let w = f_inv.get(s, j) - &(&c * f_inv.get(s, k));
                f_inv.set(s, j, w);
            }
        }
        let unit = pivot.checked_div(&PointedRational::local_power(base.clone(), order)).expect("order divides");
        for r in 0..n {
            let v = e.get(r, k) * &unit;
            e.set(r, k, v);
        }
        cur.set(k, k, PointedRational::local_power(base.clone(), order));
        kappa.push(order);
    }
    LocalSmithForm { base: base.clone(), e, f, f_inv, kappa }
}

/// For `k = 1, 2, …`: least vanishing order at `base` among all `k×k`
/// minors, stopping at the first `k` whose minors all vanish identically.
pub fn determinantal_orders(m: &Matrix<UPoly>, base: &Scalar) -> Vec<u32> {
    let mut out = Vec::new();
    for k in 1..=m.rows().min(m.cols()) {
        let rs = index_subsets(m.rows(), k);
        let cs = index_subsets(m.cols(), k);
        let pairs: Vec<(&Vec<usize>, &Vec<usize>)> = rs.iter().flat_map(|r| cs.iter().map(move |c| (r, c))).collect();
        let orders = par::map(&pairs, |(r, c)| linalg::det(&m.submatrix(r, c)).order_at(base));
        match orders.into_iter().flatten().min() {
            Some(o) => out.push(o),
            None => break,
        }
    }
    out
}

/// A kernel section `h` regular at `base` with `M·h = 0` and `h(ξ) = v`, if
/// one exists. The answer is read off a kernel basis saturated at `base`
/// (see [`saturated_kernel_basis`]), so the section is polynomial.
pub fn kernel_extension_through(m: &Matrix<UPoly>, base: &Scalar, v: &[Scalar]) -> Result<Option<Vec<PointedRational>>> {
    check_vector(m, v)?;
    let basis = saturated_kernel_basis(m, base);
    let values = Matrix::from_fn(m.cols(), basis.len(), |i, j| basis[j][i].eval(base));
    let Some(coeffs) = solve_exact(&values, v) else {
        return Ok(None);
    };
    let h = (0..m.cols())
        .map(|i| {
            let p = basis.iter().zip(&coeffs).fold(UPoly::zero(), |acc, (col, c)| &acc + &col[i].scale(c));
            PointedRational::from_poly(p, base.clone())
        })
        .collect();
    Ok(Some(h))
}

/// The same question answered through the local Smith form: with
/// `f = F(ξ)·v` a section exists iff `f₁ = … = f_r = 0`, and then
/// `h = F⁻¹·(0, …, 0, f_{r+1}, …, f_m)`. Exact but slow on large matrices,
/// since the reduction works with rational functions.
pub fn kernel_extension_by_smith_form(m: &Matrix<UPoly>, base: &Scalar, v: &[Scalar]) -> Result<Option<Vec<PointedRational>>> {
    check_vector(m, v)?;
    let s = local_smith_form(m, base);
    Ok(extend_with(&s, v))
}

fn check_vector(m: &Matrix<UPoly>, v: &[Scalar]) -> Result<()> {
    if v.len() != m.cols() {
        return Err(Error::Shape(format!("vector of length {} for a matrix with {} columns", v.len(), m.cols())));
    }
    Ok(())
}

/// Polynomial kernel vectors whose values at `base` are linearly
/// independent; they span the holomorphic kernel near `base`.
///
/// Starts from the Cramer sections of a generically nonsingular `r×r`
/// block. While the values at `base` satisfy a relation `Σ c_j K_j(ξ) = 0`,
/// one column with `c_j ≠ 0` is replaced by `Σ c_j K_j / (ζ − ξ)`.
pub fn saturated_kernel_basis(m: &Matrix<UPoly>, base: &Scalar) -> Vec<Vec<UPoly>> {
    let (r, rows_sel, cols_sel) = linalg::nonsingular_block(m);
    let mut basis = if r == 0 {
        (0..m.cols())
            .map(|j| (0..m.cols()).map(|i| if i == j { UPoly::one() } else { UPoly::zero() }).collect())
            .collect()
    } else {
        let free: Vec<usize> = (0..m.cols()).filter(|c| !cols_sel.contains(c)).collect();
        univariate_cramer_sections(m, &rows_sel, &cols_sel, &free)
    };
    let lin = local_factor(base);
    loop {
        let values = Matrix::from_fn(m.cols(), basis.len(), |i, j| basis[j][i].eval(base));
        let Some(c) = exact_kernel(&values).into_iter().next() else {
            return basis;
        };
        let j = (0..basis.len()).rev().find(|&j| !c[j].is_zero()).expect("nonzero relation");
        let combined: Vec<UPoly> = (0..m.cols())
            .map(|i| {
                let p = basis.iter().zip(&c).fold(UPoly::zero(), |acc, (col, cj)| &acc + &col[i].scale(cj));
                let (q, rem) = p.divrem(&lin);
                debug_assert!(rem.is_zero());
                q
            })
            .collect();
        basis[j] = combined;
    }
}

/// The sections of [`cramer_sections`] for a univariate matrix, found by
/// evaluating the `r×r` determinants at enough points and interpolating.
fn univariate_cramer_sections(m: &Matrix<UPoly>, rows: &[usize], cols: &[usize], free: &[usize]) -> Vec<Vec<UPoly>> {
    let xs = linalg::sample_points(linalg::row_degree_bound(m, rows) + 1);
    // values[x][k][c]: component c of section k at sample x
    let values: Vec<Vec<Vec<Scalar>>> = par::map(&xs, |x| {
        let at = m.map(|p| p.eval(x));
        let sub = at.submatrix(rows, cols);
        let d = linalg::det(&sub);
        let adj = if d.is_zero() { Some(linalg::adjugate(&sub)) } else { None };
        free.iter()
            .map(|&j| {
                let rhs: Vec<Scalar> = rows.iter().map(|&r| -at.get(r, j)).collect();
                // det of `sub` with column c replaced by rhs is (adj·rhs)_c = d·x_c
                let solved = match &adj {
                    Some(adj) => adj.mul_vec(&rhs),
                    None => solve_exact(&sub, &rhs).expect("invertible block").iter().map(|x| x * &d).collect(),
                };
                let mut s = vec![Scalar::zero(); m.cols()];
                s[j] = d.clone();
                for (ci, &c) in cols.iter().enumerate() {
                    s[c] = solved[ci].clone();
                }
                s
            })
            .collect()
    });
    (0..free.len())
        .map(|k| {
            (0..m.cols())
                .map(|c| {
                    let ys: Vec<Scalar> = values.iter().map(|v| v[k][c].clone()).collect();
                    UPoly::interpolate(&xs, &ys)
                })
                .collect()
        })
        .collect()
}

fn local_factor(base: &Scalar) -> UPoly {
    UPoly::linear(-base, Scalar::one())
}

/// Some `x` with `a·x = b`, if the system is consistent.
fn solve_exact(a: &Matrix<Scalar>, b: &[Scalar]) -> Option<Vec<Scalar>> {
    let aug = Matrix::from_fn(a.rows(), a.cols() + 1, |i, j| if j < a.cols() { a.get(i, j).clone() } else { -&b[i] });
    let k = exact_kernel(&aug).into_iter().find(|k| !k[a.cols()].is_zero())?;
    let s = k[a.cols()].inv().expect("nonzero");
    Some(k[..a.cols()].iter().map(|x| x * &s).collect())
}

fn extend_with(s: &LocalSmithForm, v: &[Scalar]) -> Option<Vec<PointedRational>> {
    let f_at = s.f.map(PointedRational::value_at_base);
    let fv = f_at.mul_vec(v);
    if fv[..s.rank()].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let tail: Vec<PointedRational> = fv
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let c = if i < s.rank() { Scalar::zero() } else { x.clone() };
            PointedRational::constant(c, s.base.clone())
        })
        .collect();
    Some(s.f_inv.mul_vec(&tail))
}

/// A local intertwiner: `A·H = H·B` near `base` with `H(base) = Φ`.
#[derive(Clone, Debug, PartialEq)]
pub struct SimilarityGerm {
    pub h: FracMatrix,
    pub base: Vec<Scalar>,
}

impl SimilarityGerm {
    pub fn value_at_base(&self) -> Matrix<Scalar> {
        self.h.evaluate(&self.base).expect("arity checked").expect("regular at base")
    }

    /// Entries as germs, for one-variable families.
    pub fn entries(&self) -> Option<Matrix<PointedRational>> {
        match self.base.as_slice() {
            [b] => self.h.to_pointed(b),
            _ => None,
        }
    }

    pub fn intertwines(&self, a: &MatrixFamily, b: &MatrixFamily) -> bool {
        self.h.intertwines(a, b)
    }

    /// `det H(base) ≠ 0`.
    pub fn invertible_at_base(&self) -> bool {
        let v = self.value_at_base();
        v.rows() == 0 || !linalg::det(&v).is_zero()
    }
}

fn check_intertwining_value(a: &MatrixFamily, b: &MatrixFamily, base: &[Scalar], phi: &Matrix<Scalar>) -> Result<()> {
    let n = crate::algebra::matrix::check_square_pair(a, b)?;
    if phi.rows() != n || phi.cols() != n {
        return Err(Error::Shape(format!("value must be {n}x{n}, got {}x{}", phi.rows(), phi.cols())));
    }
    let (a0, b0) = (a.evaluate(base)?, b.evaluate(base)?);
    if phi.mul(&b0) != a0.mul(phi) {
        return Err(Error::Precondition("the prescribed value must satisfy Phi*B(xi) = A(xi)*Phi".into()));
    }
    Ok(())
}

/// Smith criterion: extends `Φ` to a holomorphic intertwiner in one
/// variable. `Ok(None)` certifies that no continuous intertwiner through
/// `Φ` exists either.
pub fn smith_similarity(a: &MatrixFamily, b: &MatrixFamily, base: &Scalar, phi: &Matrix<Scalar>) -> Result<Option<SimilarityGerm>> {
    check_intertwining_value(a, b, std::slice::from_ref(base), phi)?;
    let op = build_intertwiner(a, b)?;
    let m = univariate(op.matrix())?;
    let n = phi.rows();
    let Some(h) = kernel_extension_through(&m, base, &phi.vectorize())? else {
        return Ok(None);
    };
    let ctx = op.context().clone();
    let h = FracMatrix::from_pointed(&ctx, &Matrix::unvectorize(n, n, h));
    debug_assert!(h.intertwines(a, b));
    Ok(Some(SimilarityGerm { h, base: vec![base.clone()] }))
}

/// A frame of the kernel bundle of `M` near `base`: sections `s_j / D`
/// (one per free column `j` of `M(base)`) with polynomial numerators and
/// the common denominator `D = det M[R, C]`, `D(base) ≠ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelFrame {
    pub denom: MultiPoly,
    pub free_columns: Vec<usize>,
    pub sections: Vec<Vec<MultiPoly>>,
}

/// Needs the rank of `M(base)` to equal the generic rank.
pub fn kernel_frame(m: &MatrixFamily, base: &[Scalar]) -> Result<KernelFrame> {
    let ctx = m.context().ok_or_else(|| Error::Shape("empty matrix".into()))?.clone();
    let at = m.evaluate(base)?;
    let rr = linalg::rref(&at);
    let cols_sel = rr.pivots.clone();
    let rows_sel = linalg::rref(&at.transpose()).pivots;
    let rho = cols_sel.len();
    if crate::algebra::generic_rank(m) != rho {
        return Err(Error::CriterionNotSatisfied(
            "the intertwiner dimension is not locally constant at this point".into(),
        ));
    }
    let free: Vec<usize> = (0..m.cols()).filter(|c| !cols_sel.contains(c)).collect();
    let (denom, sections) = match to_univariate(m) {
        Some(u) => {
            let d = linalg::univariate_det(&u.submatrix(&rows_sel, &cols_sel));
            let secs = univariate_cramer_sections(&u, &rows_sel, &cols_sel, &free);
            let lift = |p: &UPoly| MultiPoly::from_upoly(&ctx, 0, p);
            (lift(&d), secs.iter().map(|s| s.iter().map(lift).collect()).collect())
        }
        None => cramer_sections(m, &rows_sel, &cols_sel, &free, &MultiPoly::one(&ctx)),
    };
    debug_assert!(!denom.evaluate(base).map(|d| d.is_zero()).unwrap_or(true));
    Ok(KernelFrame { denom, free_columns: free, sections })
}

/// Solves `M[R,C]·x = −M[R,j]` by Cramer's rule for each free column `j`,
/// returning `D = det M[R,C]` and the numerators `D·e_j + Σ_c D·x_c·e_c`.
fn cramer_sections<T: Domain>(m: &Matrix<T>, rows: &[usize], cols: &[usize], free: &[usize], one: &T) -> (T, Vec<Vec<T>>) {
    let sub = m.submatrix(rows, cols);
    let d = if cols.is_empty() { one.clone() } else { linalg::det(&sub) };
    let sections = par::map(free, |&j| {
        let mut s = vec![one.zero_like(); m.cols()];
        s[j] = d.clone();
        for (ci, &c) in cols.iter().enumerate() {
            let mut replaced = sub.clone();
            for (ri, &r) in rows.iter().enumerate() {
                replaced.set(ri, ci, m.get(r, j).neg_ref());
            }
            s[c] = linalg::det(&replaced);
        }
        s
    });
    (d, sections)
}

/// Wasow criterion: when the intertwiner dimension is locally constant at
/// `base`, a frame of the kernel bundle gives a holomorphic intertwiner
/// through any `Φ` with `Φ·B(ξ) = A(ξ)·Φ`.
pub fn wasow_similarity(a: &MatrixFamily, b: &MatrixFamily, base: &[Scalar], phi: &Matrix<Scalar>) -> Result<SimilarityGerm> {
    check_intertwining_value(a, b, base, phi)?;
    let op = build_intertwiner(a, b)?;
    let frame = kernel_frame(op.matrix(), base)?;
    let ctx: Arc<VarContext> = op.context().clone();
    let v = phi.vectorize();
    let mut numer = vec![MultiPoly::zero(&ctx); v.len()];
    for (k, &j) in frame.free_columns.iter().enumerate() {
        if v[j].is_zero() {
            continue;
        }
        for (slot, s) in numer.iter_mut().zip(&frame.sections[k]) {
            *slot = &*slot + &s.scale(&v[j]);
        }
    }
    let n = phi.rows();
    let h = FracMatrix::new(Matrix::unvectorize(n, n, numer), frame.denom)?;
    let germ = SimilarityGerm { h, base: base.to_vec() };
    debug_assert!(germ.intertwines(a, b));
    debug_assert_eq!(&germ.value_at_base(), phi);
    Ok(germ)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn up(c: &[i64]) -> UPoly {
        UPoly::from_i64(c)
    }

    fn zeta() -> UPoly {
        UPoly::x()
    }

    fn z0() -> Scalar {
        Scalar::zero()
    }

    fn check_reconstruction(m: &Matrix<UPoly>, base: &Scalar) -> LocalSmithForm {
        let s = local_smith_form(m, base);
        assert_eq!(s.reconstruct(), germs(m, base));
        assert!(s.exponents().windows(2).all(|w| w[0] <= w[1]));
        let id = germ_identity(base, m.cols());
        assert_eq!(s.f().mul(s.f_inv()), id);
        s
    }

    #[test]
    fn diagonal_form() {
        let m = Matrix::from_rows(vec![vec![zeta(), UPoly::zero()], vec![UPoly::zero(), up(&[0, 0, 1])]]);
        let s = check_reconstruction(&m, &z0());
        assert_eq!(s.exponents(), &[1, 2]);
        assert_eq!(s.e(), &germ_identity(&z0(), 2));
        assert_eq!(s.f(), &germ_identity(&z0(), 2));
        assert_eq!(determinantal_orders(&m, &z0()), vec![1, 3]);
    }

    #[test]
    fn unit_entry_and_square_determinant() {
        let m = Matrix::from_rows(vec![vec![zeta(), UPoly::one()], vec![UPoly::zero(), zeta()]]);
        let s = check_reconstruction(&m, &z0());
        assert_eq!(s.exponents(), &[0, 2]);
        assert_eq!(determinantal_orders(&m, &z0()), vec![0, 2]);
    }

    #[test]
    fn rank_one_matrix() {
        let m = Matrix::from_rows(vec![vec![UPoly::one(), zeta()], vec![zeta(), up(&[0, 0, 1])]]);
        let s = check_reconstruction(&m, &z0());
        assert_eq!(s.rank(), 1);
        assert_eq!(s.exponents(), &[0]);
        assert_eq!(determinantal_orders(&m, &z0()), vec![0]);
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let m = Matrix::zeros_like(&UPoly::zero(), 2, 2);
        let s = check_reconstruction(&m, &z0());
        assert_eq!(s.rank(), 0);
        assert!(determinantal_orders(&m, &z0()).is_empty());
    }

    #[test]
    fn kernel_extension_examples() {
        let m1 = Matrix::from_rows(vec![vec![zeta()]]);
        assert_eq!(kernel_extension_through(&m1, &z0(), &[Scalar::one()]).unwrap(), None);

        let m = Matrix::from_rows(vec![vec![zeta(), -&zeta()]]);
        let s = local_smith_form(&m, &z0());
        let f_expected = Matrix::from_rows(vec![
            vec![PointedRational::one(z0()), PointedRational::constant(Scalar::from_int(-1), z0())],
            vec![PointedRational::zero(z0()), PointedRational::one(z0())],
        ]);
        assert_eq!(s.f(), &f_expected);
        let h = kernel_extension_through(&m, &z0(), &[Scalar::one(), Scalar::one()]).unwrap().unwrap();
        assert_eq!(h, vec![PointedRational::one(z0()), PointedRational::one(z0())]);
        assert_eq!(kernel_extension_through(&m, &z0(), &[Scalar::one(), Scalar::from_int(2)]).unwrap(), None);
        assert!(kernel_extension_through(&m, &z0(), &[Scalar::one()]).is_err());
    }

    fn family(ctx: &Arc<VarContext>, rows: &[&[&[i64]]]) -> MatrixFamily {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|c| MultiPoly::from_upoly(ctx, 0, &up(c))).collect()).collect())
    }

    #[test]
    fn smith_similarity_examples() {
        let ctx = VarContext::new(&["z"]);
        let a = family(&ctx, &[&[&[], &[1]], &[&[], &[]]]);
        let b = family(&ctx, &[&[&[], &[0, 1]], &[&[], &[]]]);
        let phi = Matrix::from_i64(&[&[1, 0], &[0, 0]]);
        let h = smith_similarity(&a, &b, &z0(), &phi).unwrap().unwrap();
        assert!(h.intertwines(&a, &b));
        assert_eq!(h.value_at_base(), phi);

        let id = Matrix::scalar_identity(2);
        assert!(matches!(smith_similarity(&a, &b, &z0(), &id), Err(Error::Precondition(_))));

        let h = smith_similarity(&a, &a, &z0(), &id).unwrap().unwrap();
        assert_eq!(h.value_at_base(), id);
        assert!(h.invertible_at_base());
    }

    #[test]
    fn wasow_similarity_examples() {
        let ctx = VarContext::new(&["z"]);
        let a = family(&ctx, &[&[&[0, 1], &[1]], &[&[], &[]]]);
        let id = Matrix::scalar_identity(2);
        let h = wasow_similarity(&a, &a, &[z0()], &id).unwrap();
        assert!(h.intertwines(&a, &a));
        assert_eq!(h.value_at_base(), id);

        let a2 = family(&ctx, &[&[&[], &[1]], &[&[], &[]]]);
        let b2 = family(&ctx, &[&[&[], &[0, 1]], &[&[], &[]]]);
        let phi = Matrix::from_i64(&[&[1, 0], &[0, 0]]);
        let h = wasow_similarity(&a2, &b2, &[z0()], &phi).unwrap();
        assert!(h.intertwines(&a2, &b2));
        assert_eq!(h.value_at_base(), phi);

        let nil = family(&ctx, &[&[&[], &[0, 1]], &[&[], &[]]]);
        assert!(matches!(wasow_similarity(&nil, &nil, &[z0()], &id), Err(Error::CriterionNotSatisfied(_))));
    }

    #[test]
    fn wasow_in_two_variables() {
        let ctx = VarContext::new(&["z", "w"]);
        let z = MultiPoly::var(&ctx, 0);
        let w = MultiPoly::var(&ctx, 1);
        let one = MultiPoly::one(&ctx);
        let o = MultiPoly::zero(&ctx);
        let a = Matrix::from_rows(vec![vec![&z + &w, one], vec![o.clone(), o]]);
        let p = [Scalar::from_int(1), Scalar::from_int(-1)];
        let id = Matrix::scalar_identity(2);
        let h = wasow_similarity(&a, &a, &p, &id).unwrap();
        assert!(h.intertwines(&a, &a));
        assert_eq!(h.value_at_base(), id);
    }
}
