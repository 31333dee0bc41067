//! Random instance generators shared by the property and acceptance tests.
#![allow(dead_code)]

use std::sync::Arc;

use holosim::algebra::{FracMatrix, Matrix, MatrixFamily, MultiPoly, Scalar, UPoly, VarContext};
use holosim::cocycle::{Chart, Covering, SamplePoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rational(r: &mut ChaCha8Rng) -> Scalar {
    Scalar::from_ratio(r.gen_range(-4..=4), r.gen_range(1..=3))
}

/// Mostly real, sometimes Gaussian.
pub fn small_scalar(r: &mut ChaCha8Rng) -> Scalar {
    let re = small_rational(r);
    if r.gen_bool(0.25) {
        &re + &(&small_rational(r) * &Scalar::i())
    } else {
        re
    }
}

pub fn small_int(r: &mut ChaCha8Rng) -> Scalar {
    Scalar::from_int(r.gen_range(-3..=3))
}

pub fn random_upoly(r: &mut ChaCha8Rng, deg: usize) -> UPoly {
    UPoly::from_coeffs((0..=deg).map(|_| small_int(r)).collect())
}

/// `(t − ξ)^k`.
pub fn local_factor(base: &Scalar, k: u32) -> UPoly {
    UPoly::linear(-base, Scalar::one()).pow(k)
}

/// Entry with a random vanishing order at `base` and total degree ≤ `deg`.
pub fn entry_with_order(r: &mut ChaCha8Rng, base: &Scalar, deg: usize) -> UPoly {
    if r.gen_bool(0.2) {
        return UPoly::zero();
    }
    let k = r.gen_range(0..=deg.min(3));
    let rest = random_upoly(r, deg - k);
    &local_factor(base, k as u32) * &rest
}

/// Univariate matrix, occasionally made rank deficient by copying a
/// multiple of one row into another.
pub fn random_univariate_matrix(r: &mut ChaCha8Rng, rows: usize, cols: usize, deg: usize, base: &Scalar) -> Matrix<UPoly> {
    let mut m = Matrix::from_fn(rows, cols, |_, _| entry_with_order(r, base, deg));
    if rows > 1 && r.gen_bool(0.3) {
        let (i, j) = (r.gen_range(0..rows), r.gen_range(0..rows));
        if i != j {
            let c = local_factor(base, r.gen_range(0..=1));
            for k in 0..cols {
                let v = m.get(i, k) * &c;
                m.set(j, k, v);
            }
        }
    }
    m
}

pub fn random_scalar_matrix(r: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix<Scalar> {
    Matrix::from_fn(rows, cols, |_, _| small_int(r))
}

/// Matrix of rank at most `k`, as a product of `rows×k` and `k×cols`.
pub fn low_rank_matrix(r: &mut ChaCha8Rng, rows: usize, cols: usize, k: usize) -> Matrix<Scalar> {
    if k == 0 {
        return Matrix::scalar_zeros(rows, cols);
    }
    random_scalar_matrix(r, rows, k).mul(&random_scalar_matrix(r, k, cols))
}

pub fn random_multipoly(r: &mut ChaCha8Rng, ctx: &Arc<VarContext>, deg: u32, terms: usize) -> MultiPoly {
    let n = ctx.nvars();
    (0..terms).fold(MultiPoly::zero(ctx), |acc, _| {
        let mut exps = vec![0u32; n];
        let mut budget = r.gen_range(0..=deg);
        while budget > 0 {
            exps[r.gen_range(0..n)] += 1;
            budget -= 1;
        }
        &acc + &MultiPoly::monomial(ctx, exps, small_int(r))
    })
}

pub fn random_family(r: &mut ChaCha8Rng, ctx: &Arc<VarContext>, n: usize, deg: u32) -> MatrixFamily {
    Matrix::from_fn(n, n, |_, _| random_multipoly(r, ctx, deg, 2))
}

/// Product of elementary unipotent matrices with polynomial off-diagonal
/// entries; determinant 1, so the inverse is polynomial too.
pub fn unimodular(r: &mut ChaCha8Rng, ctx: &Arc<VarContext>, n: usize, deg: u32) -> MatrixFamily {
    let mut g = MatrixFamily::poly_identity(ctx, n);
    if n < 2 {
        return g.scale(&MultiPoly::constant(ctx, Scalar::from_int(r.gen_range(1..=3))));
    }
    for _ in 0..3 {
        let (i, j) = (r.gen_range(0..n), r.gen_range(0..n));
        if i == j {
            continue;
        }
        let mut e = MatrixFamily::poly_identity(ctx, n);
        e.set(i, j, random_multipoly(r, ctx, deg, 2));
        g = g.mul(&e);
    }
    g
}

/// `G = G0 + (t − ξ)·G1` with `G0` invertible (upper triangular with nonzero diagonal).
pub fn invertible_at(r: &mut ChaCha8Rng, ctx: &Arc<VarContext>, n: usize, base: &Scalar) -> MatrixFamily {
    let t = &MultiPoly::var(ctx, 0) - &MultiPoly::constant(ctx, base.clone());
    Matrix::from_fn(n, n, |i, j| {
        let c0 = if i == j {
            Scalar::from_int(if r.gen_bool(0.5) { 1 } else { -2 })
        } else if i < j {
            small_int(r)
        } else {
            Scalar::zero()
        };
        &MultiPoly::constant(ctx, c0) + &t.scale(&small_int(r))
    })
}

/// A covering with local similarities `H_i = c_i·G` of `A` and `B = G⁻¹AG`
/// (`G` unimodular), where `c_i = λ_i I + μ_i A` lies in the commutant;
/// `h_i = c_i` splits the cocycle `H_i·H_j⁻¹`.
pub struct CocycleInstance {
    pub covering: Covering,
    pub a: MatrixFamily,
    pub b: MatrixFamily,
    pub g: MatrixFamily,
    pub locals: Vec<FracMatrix>,
    pub splitting: Vec<FracMatrix>,
}

pub fn cocycle_instance(r: &mut ChaCha8Rng, charts: usize, vars: usize) -> CocycleInstance {
    let names = ["z", "w"];
    let ctx = VarContext::new(&names[..vars]);
    let n = r.gen_range(2..=3);
    let a = random_family(r, &ctx, n, 1);
    let g = unimodular(r, &ctx, n, 1);
    let g_inv = holosim::algebra::linalg::adjugate(&g);
    let b = g_inv.mul(&a).mul(&g);
    let point = |r: &mut ChaCha8Rng| (0..vars).map(|_| small_rational(r)).collect::<Vec<_>>();
    let chart_list: Vec<Chart> = (0..charts)
        .map(|i| Chart { name: format!("U{}", i + 1), samples: (0..3).map(|_| point(r)).collect() })
        .collect();
    let mut overlaps = Vec::new();
    for i in 0..charts {
        for j in i + 1..charts {
            overlaps.push((i, j, (0..2).map(|_| point(r)).collect()));
        }
    }
    let covering = Covering::new(&ctx, chart_list, overlaps).expect("valid covering");
    let id = MatrixFamily::poly_identity(&ctx, n);
    let splitting: Vec<FracMatrix> = (0..charts)
        .map(|_| loop {
            let lam = MultiPoly::constant(&ctx, Scalar::from_int(r.gen_range(1..=4)));
            let mu = MultiPoly::constant(&ctx, small_int(r));
            let c = FracMatrix::from_poly(&id.scale(&lam).add(&a.scale(&mu)));
            let ok = all_samples(&covering).iter().all(|p| {
                c.evaluate(p).unwrap().is_some_and(|v| !holosim::algebra::linalg::det(&v).is_zero())
            });
            if ok {
                break c;
            }
        })
        .collect();
    let locals = splitting.iter().map(|c| c.mul_poly(&g)).collect();
    CocycleInstance { covering, a, b, g, locals, splitting }
}

/// Chart and overlap samples of a covering.
pub fn all_samples(c: &Covering) -> Vec<SamplePoint> {
    let mut out: Vec<SamplePoint> = (0..c.len()).flat_map(|i| c.overlap(i, i).to_vec()).collect();
    for (i, j) in c.pairs() {
        out.extend(c.overlap(i, j).iter().cloned());
    }
    out
}

/// `(Θ, Φ)` with `Θ = c₀I + c₁Φ + c₂Φ²` invertible, so `Θ ∈ GCom Φ`.
pub fn commuting_pair(r: &mut ChaCha8Rng, n: usize) -> (Matrix<Scalar>, Matrix<Scalar>) {
    loop {
        let phi = if r.gen_bool(0.3) {
            // repeated eigenvalues give a larger commutant
            Matrix::from_fn(n, n, |i, j| if i == j { Scalar::from_int((i % 2) as i64) } else if j == i + 1 { small_int(r) } else { Scalar::zero() })
        } else {
            random_scalar_matrix(r, n, n)
        };
        let (c0, c1, c2) = (small_scalar(r), small_scalar(r), small_int(r));
        let id = Matrix::scalar_identity(n);
        let theta = id.scale(&c0).add(&phi.scale(&c1)).add(&phi.mul(&phi).scale(&c2));
        if !holosim::algebra::linalg::det(&theta).is_zero() {
            return (theta, phi);
        }
    }
}

/// `2π`-periodic `Σ_k c_k e^{ikθ}` whose coefficient at `dominant` exceeds
/// the sum of the others in modulus, so its winding number is `dominant`.
pub fn trig_fn(r: &mut ChaCha8Rng, dominant: i32) -> impl Fn(f64) -> num_complex::Complex64 + Clone {
    use num_complex::Complex64;
    let others: Vec<(i32, Complex64)> = (-3..=3)
        .filter(|&k| k != dominant)
        .map(|k| (k, Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)) * 0.1))
        .collect();
    let total: f64 = others.iter().map(|(_, c)| c.norm()).sum();
    let lead = Complex64::from_polar(total + r.gen_range(0.2..1.0), r.gen_range(0.0..std::f64::consts::TAU));
    move |t| {
        let mut v = lead * Complex64::from_polar(1.0, dominant as f64 * t);
        for (k, c) in &others {
            v += c * Complex64::from_polar(1.0, *k as f64 * t);
        }
        v
    }
}
