//! Exact elimination: Gauss–Jordan over ℚ(i) and fraction-free (Bareiss)
//! elimination over integral domains.

use itertools::Itertools;

use super::matrix::Matrix;
use super::ring::Domain;
use super::scalar::Scalar;
use super::upoly::UPoly;

/// Reduced row echelon form with the pivot column of each nonzero row.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: Matrix<Scalar>,
    pub pivots: Vec<usize>,
}

/// Gauss–Jordan elimination. Within each column the pivot is the nonzero
/// entry of smallest bit size; ties go to the lowest row.
pub fn rref(m: &Matrix<Scalar>) -> Rref {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).filter(|&i| !a.get(i, c).is_zero()).min_by_key(|&i| (a.get(i, c).bit_size(), i)) else {
            continue;
        };
        a.swap_rows(r, p);
        let inv = a.get(r, c).inv().expect("nonzero pivot");
        for j in c..cols {
            let v = a.get(r, j) * &inv;
            a.set(r, j, v);
        }
        for i in 0..rows {
            if i == r || a.get(i, c).is_zero() {
                continue;
            }
            let f = a.get(i, c).clone();
            for j in c..cols {
                if a.get(r, j).is_zero() {
                    continue;
                }
                let v = a.get(i, j) - &(&f * a.get(r, j));
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    Rref { matrix: a, pivots }
}

pub fn rank(m: &Matrix<Scalar>) -> usize {
    rref(m).pivots.len()
}

/// Basis of the right kernel `{v : M v = 0}`; one vector per free column,
/// with a 1 in that column.
pub fn kernel(m: &Matrix<Scalar>) -> Vec<Vec<Scalar>> {
    let Rref { matrix, pivots } = rref(m);
    let cols = m.cols();
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Scalar::zero(); cols];
            v[f] = Scalar::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -matrix.get(r, f);
            }
            v
        })
        .collect()
}

pub fn inverse(m: &Matrix<Scalar>) -> Option<Matrix<Scalar>> {
    if !m.is_square() {
        return None;
    }
    let n = m.rows();
    let aug = Matrix::from_fn(n, 2 * n, |i, j| {
        if j < n {
            m.get(i, j).clone()
        } else if j - n == i {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    });
    let Rref { matrix, pivots } = rref(&aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(Matrix::from_fn(n, n, |i, j| matrix.get(i, j + n).clone()))
}

/// Solves `M x = b` for one particular solution.
pub fn solve(m: &Matrix<Scalar>, b: &[Scalar]) -> Option<Vec<Scalar>> {
    let (rows, cols) = (m.rows(), m.cols());
    let aug = Matrix::from_fn(rows, cols + 1, |i, j| if j < cols { m.get(i, j).clone() } else { b[i].clone() });
    let Rref { matrix, pivots } = rref(&aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Scalar::zero(); cols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = matrix.get(r, cols).clone();
    }
    Some(x)
}

/// Determinant by fraction-free elimination. Panics on non-square input
/// or a failed exact division (which cannot happen over a domain).
pub fn det<T: Domain>(m: &Matrix<T>) -> T {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows();
    if n == 0 {
        panic!("determinant of an empty matrix");
    }
    let mut a = m.clone();
    let mut prev = a.get(0, 0).one_like();
    let mut negate = false;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a.get(i, k).is_zero()) else {
            return a.get(0, 0).zero_like();
        };
        if p != k {
            a.swap_rows(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a.get(i, j).mul_ref(a.get(k, k)).sub_ref(&a.get(i, k).mul_ref(a.get(k, j)));
                a.set(i, j, num.div_exact(&prev).expect("Bareiss division is exact"));
            }
        }
        prev = a.get(k, k).clone();
    }
    let d = a.get(n - 1, n - 1).clone();
    if negate {
        d.neg_ref()
    } else {
        d
    }
}

/// Rank over the fraction field of `T`, by fraction-free elimination.
pub fn rank_over_fractions<T: Domain>(m: &Matrix<T>) -> usize {
    let (rows, cols) = (m.rows(), m.cols());
    if rows == 0 || cols == 0 {
        return 0;
    }
    let mut a = m.clone();
    let mut prev = a.get(0, 0).one_like();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a.get(i, c).is_zero()) else {
            continue;
        };
        a.swap_rows(p, r);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let num = a.get(i, j).mul_ref(a.get(r, c)).sub_ref(&a.get(i, c).mul_ref(a.get(r, j)));
                a.set(i, j, num.div_exact(&prev).expect("Bareiss division is exact"));
            }
            let z = a.get(i, c).zero_like();
            a.set(i, c, z);
        }
        prev = a.get(r, c).clone();
        r += 1;
    }
    r
}

/// Sum over rows of the largest entry degree: bounds the degree of every
/// minor built from those rows.
pub fn row_degree_bound(m: &Matrix<UPoly>, rows: &[usize]) -> usize {
    rows.iter().map(|&i| m.row(i).iter().filter_map(UPoly::degree).max().unwrap_or(0)).sum()
}

/// Integer sample points `0, 1, …, n−1`.
pub fn sample_points(n: usize) -> Vec<Scalar> {
    (0..n as i64).map(Scalar::from_int).collect()
}

/// Rank over `ℚ(i)(t)`. A nonzero `r×r` minor has degree at most `D`, so
/// it is nonzero at one of any `D + 1` points; the largest rank seen over
/// that many points is the generic rank.
pub fn univariate_rank(m: &Matrix<UPoly>) -> usize {
    let full = m.rows().min(m.cols());
    if full == 0 {
        return 0;
    }
    let mut rows_by_degree: Vec<usize> = (0..m.rows()).collect();
    rows_by_degree.sort_by_key(|&i| std::cmp::Reverse(row_degree_bound(m, &[i])));
    let bound = row_degree_bound(m, &rows_by_degree[..full]);
    let mut best = 0;
    for x in sample_points(bound + 1) {
        best = best.max(rank(&m.map(|p| p.eval(&x))));
        if best == full {
            break;
        }
    }
    best
}

/// Generic rank `r` with row and column index sets of an `r×r` block whose
/// determinant is not identically zero.
pub fn nonsingular_block(m: &Matrix<UPoly>) -> (usize, Vec<usize>, Vec<usize>) {
    let r = univariate_rank(m);
    if r == 0 {
        return (0, Vec::new(), Vec::new());
    }
    let at = (0i64..)
        .map(|k| m.map(|p| p.eval(&Scalar::from_int(k))))
        .find(|at| rank(at) == r)
        .expect("the rank drops at finitely many points");
    (r, rref(&at.transpose()).pivots, rref(&at).pivots)
}

/// Splits a squarefree `f` into coprime factors and reports the rank of
/// `m` modulo each, i.e. the rank of `m(x)` at every root `x` of that
/// factor. A pivot sharing a proper factor with the modulus splits it.
pub fn rank_modulo(m: &Matrix<UPoly>, f: &UPoly) -> Vec<(UPoly, usize)> {
    struct State {
        f: UPoly,
        a: Matrix<UPoly>,
        r: usize,
        c: usize,
    }
    let reduce = |a: &Matrix<UPoly>, f: &UPoly| a.map(|p| p.divrem(f).1);
    let mut out = Vec::new();
    let mut work = vec![State { f: f.monic(), a: reduce(m, f), r: 0, c: 0 }];
    'states: while let Some(mut st) = work.pop() {
        if st.f.is_constant() {
            continue;
        }
        let (rows, cols) = (st.a.rows(), st.a.cols());
        while st.r < rows && st.c < cols {
            let Some(p) = (st.r..rows).find(|&i| !st.a.get(i, st.c).is_zero()) else {
                st.c += 1;
                continue;
            };
            let g = st.a.get(p, st.c).gcd(&st.f);
            if !g.is_constant() {
                let other = st.f.divrem(&g).0.monic();
                for part in [g, other] {
                    work.push(State { a: reduce(&st.a, &part), f: part, r: st.r, c: st.c });
                }
                continue 'states;
            }
            st.a.swap_rows(p, st.r);
            let pivot = st.a.get(st.r, st.c).clone();
            for i in st.r + 1..rows {
                let e = st.a.get(i, st.c).clone();
                if e.is_zero() {
                    continue;
                }
                for j in st.c..cols {
                    let v = &(&pivot * st.a.get(i, j)) - &(&e * st.a.get(st.r, j));
                    st.a.set(i, j, v.divrem(&st.f).1);
                }
            }
            st.r += 1;
            st.c += 1;
        }
        out.push((st.f, st.r));
    }
    out
}

/// Determinant by evaluation at `D + 1` points and interpolation.
pub fn univariate_det(m: &Matrix<UPoly>) -> UPoly {
    assert!(m.is_square(), "determinant of a non-square matrix");
    if m.rows() == 0 {
        return UPoly::one();
    }
    let all: Vec<usize> = (0..m.rows()).collect();
    let xs = sample_points(row_degree_bound(m, &all) + 1);
    let ys = crate::par::map(&xs, |x| det(&m.map(|p| p.eval(x))));
    UPoly::interpolate(&xs, &ys)
}

/// Adjugate (transpose of the cofactor matrix), so `M · adj(M) = det(M)·I`.
pub fn adjugate<T: Domain>(m: &Matrix<T>) -> Matrix<T> {
    assert!(m.is_square(), "adjugate of a non-square matrix");
    let n = m.rows();
    if n == 1 {
        return Matrix::identity_like(m.get(0, 0), 1);
    }
    Matrix::from_fn(n, n, |i, j| {
        let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
        let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
        let d = det(&m.submatrix(&rows, &cols));
        if (i + j) % 2 == 1 {
            d.neg_ref()
        } else {
            d
        }
    })
}

/// All `k`-element index subsets of `0..n`, in lexicographic order.
pub fn index_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0..n).combinations(k).collect()
}

/// Every `k×k` minor as `(row set, column set, value)`.
pub fn minors<T: Domain>(m: &Matrix<T>, k: usize) -> Vec<(Vec<usize>, Vec<usize>, T)> {
    let rs = index_subsets(m.rows(), k);
    let cs = index_subsets(m.cols(), k);
    let pairs: Vec<(Vec<usize>, Vec<usize>)> =
        rs.iter().flat_map(|r| cs.iter().map(move |c| (r.clone(), c.clone()))).collect();
    crate::par::map(&pairs, |(r, c)| (r.clone(), c.clone(), det(&m.submatrix(r, c))))
}
