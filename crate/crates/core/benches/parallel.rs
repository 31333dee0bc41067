use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use holosim::algebra::scalar::rat;
use holosim::algebra::{linalg, Matrix, UPoly};
use holosim::topology::sphere_example;

/// Dense `n×n` matrix with entries of degree `deg` and small, varied
/// integer coefficients.
fn dense_upoly_matrix(n: usize, deg: usize) -> Matrix<UPoly> {
    Matrix::from_fn(n, n, |i, j| {
        let coeffs: Vec<i64> = (0..=deg).map(|k| ((i * 7 + j * 3 + k * 5) % 11) as i64 - 5).collect();
        UPoly::from_i64(&coeffs)
    })
}

fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    vec![
        ("1-thread", rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap()),
        ("default", rayon::ThreadPoolBuilder::new().build().unwrap()),
    ]
}

fn bench_determinant(c: &mut Criterion) {
    let m = dense_upoly_matrix(6, 5);
    let mut group = c.benchmark_group("univariate_det_6x6_deg5");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| pool.install(|| linalg::univariate_det(&m))));
    }
    group.finish();
}

fn bench_sphere(c: &mut Criterion) {
    let eps = rat(1, 10);
    let mut group = c.benchmark_group("sphere_example");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| pool.install(|| sphere_example(&eps, 0).unwrap())));
    }
    group.finish();
}

criterion_group!(benches, bench_determinant, bench_sphere);
criterion_main!(benches);
