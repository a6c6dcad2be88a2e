use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use lmono::lfunction::LFunction;
use lmono::logderiv::{f_deriv_series, ZeroSource};
use lmono::monotonicity::fingerprint;
use lmono::special::hurwitz_zeta;
use lmono::zeros::{count_check, scan_zeros};
use lmono::RealPrimitiveCharacter;
use num_complex::Complex64;

fn hurwitz(c: &mut Criterion) {
    let mut g = c.benchmark_group("hurwitz_zeta");
    for t in [0.0, 10.0, 100.0, 1000.0] {
        // the evaluator's own target: 1e-12, loosened quadratically past t = 50
        let eps = 1e-12 * (t / 50.0_f64).powi(2).max(1.0) * 2.0;
        g.bench_with_input(BenchmarkId::from_parameter(t), &t, |b, &t| {
            b.iter(|| hurwitz_zeta(black_box(Complex64::new(0.5, t)), 0.25, eps).unwrap())
        });
    }
    g.finish();
}

fn z_function(c: &mut Criterion) {
    let lf = LFunction::new(RealPrimitiveCharacter::new(-4).unwrap()).unwrap();
    c.bench_function("z_function d=-4 t=50", |b| b.iter(|| lf.z_function(black_box(50.0)).unwrap()));
    c.bench_function("scan_zeros d=-4 T=50", |b| b.iter(|| scan_zeros(&lf, 50.0, 0.02).unwrap()));
}

fn derivatives(c: &mut Criterion) {
    let chi = RealPrimitiveCharacter::new(-4).unwrap();
    c.bench_function("series k=3 s=3", |b| b.iter(|| f_deriv_series(&chi, black_box(3.0), 3, 1e-10).unwrap()));

    let lf = LFunction::new(chi).unwrap();
    let mut zl = scan_zeros(&lf, 100.0, 0.02).unwrap();
    assert!(count_check(&lf, &mut zl).unwrap().pass);
    let source = ZeroSource::from_list(&lf, &zl).unwrap();
    let mut g = c.benchmark_group("fingerprint");
    g.sample_size(10);
    for k_max in [1_000u32, 10_000] {
        g.bench_with_input(BenchmarkId::from_parameter(k_max), &k_max, |b, &k_max| {
            b.iter(|| fingerprint(&source, 200.0, 2, k_max, 0.0).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, hurwitz, z_function, derivatives);
criterion_main!(benches);
