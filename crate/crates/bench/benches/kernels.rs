use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;

use lipswiss_core::conditions::{series_c, SeriesOptions};
use lipswiss_core::{
    content_upper, contour_integral, AdmissibleFunction, BuildMode, ConditionSpec, Contour, CoverOptions, Disk,
    Integrand, PoleTerm, SwissCheeseDomain, Target, TestFunction,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cover(crit: &mut Criterion) {
    let mut g = crit.benchmark_group("content_upper");
    let disks = vec![
        Disk::new(c(-0.4, 0.3), 0.2).unwrap(),
        Disk::new(c(0.35, -0.1), 0.05).unwrap(),
        Disk::new(c(0.1, 0.5), 0.01).unwrap(),
    ];
    for level in [8u32, 12] {
        let opts = CoverOptions { max_level: level, ..Default::default() };
        let target = Target::Disks(disks.clone());
        g.bench_with_input(BenchmarkId::new("three_disks", level), &level, |b, _| {
            b.iter(|| content_upper(black_box(&target), 0.5, &opts).value)
        });
    }
    g.finish();
}

fn series(crit: &mut Criterion) {
    let mut g = crit.benchmark_group("series_c");
    let phi = AdmissibleFunction::power(0.5).unwrap();
    let spec = ConditionSpec::new(1, phi.clone(), 0.5).unwrap();
    for n in [100u32, 10_000] {
        let domain = SwissCheeseDomain::build(0.5, phi.clone(), n, BuildMode::Dense).unwrap();
        g.bench_with_input(BenchmarkId::new("dense", n), &n, |b, &n| {
            b.iter(|| series_c(black_box(&domain), &spec, n, &SeriesOptions::default()).partial_sum())
        });
    }
    g.finish();
}

fn quadrature(crit: &mut Criterion) {
    let mut g = crit.benchmark_group("contour_integral");
    let circle = Contour::Circle { center: c(0.0, 0.0), radius: 0.5 };
    let smooth = TestFunction::real_polynomial(&[1.0, -0.5, 0.25, 2.0]);
    g.bench_function("polynomial", |b| b.iter(|| contour_integral(black_box(&smooth), &circle, Integrand::OverZ2)));
    // a pole close to the contour forces many node doublings
    let near = TestFunction::default().with_pole(PoleTerm { pole: c(0.45, 0.0), order: 2, coeff: c(1.0, 0.0) });
    g.bench_function("near_pole", |b| b.iter(|| contour_integral(black_box(&near), &circle, Integrand::Plain)));
    g.finish();
}

criterion_group!(benches, cover, series, quadrature);
criterion_main!(benches);
