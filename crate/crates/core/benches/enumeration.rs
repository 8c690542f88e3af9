use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use weilkit::algebra::{BaseField, EtaleAlgebra};
use weilkit::points::{enumerate_points, tensor_point_ring, PointRing, TestAlgebra};
use weilkit::poly::{parse_modulus, parse_poly, PolyRing};
use weilkit::scheme::AffineScheme;
use weilkit::Strategy;

fn scheme(p: u64, modulus: &str, vars: &[&str], gens: &[&str]) -> Arc<AffineScheme> {
    let k = BaseField::prime(p).unwrap();
    let l = Arc::new(EtaleAlgebra::new(k, parse_modulus(k, modulus).unwrap()).unwrap());
    let ring = PolyRing::new(l, vars.iter().map(|v| v.to_string()).collect());
    let gens = gens.iter().map(|g| parse_poly(&ring, g).unwrap()).collect();
    Arc::new(AffineScheme::new(ring, gens).unwrap())
}

fn cases() -> Vec<(&'static str, Arc<AffineScheme>, PointRing)> {
    let circle = scheme(5, "t^2 + 2", &["x", "y"], &["x^2 + y^2 - 1"]);
    let cubic = scheme(5, "t^2 + 2", &["x", "y"], &["y^2 - x^3 - x"]);
    let twisted = scheme(2, "t^2 + t + 1", &["x", "y", "z"], &["y - x^2", "z - x^3"]);
    let over = |x: &AffineScheme, q: u64| {
        let a = TestAlgebra::field(q).unwrap().build(x.coef()).unwrap();
        tensor_point_ring(&a, x.coef()).unwrap()
    };
    vec![
        ("circle/F25(x)F25", over(&circle, 25), circle),
        ("cubic/F25(x)F25", over(&cubic, 25), cubic),
        ("twisted-cubic/F16(x)F4", over(&twisted, 16), twisted),
    ]
    .into_iter()
    .map(|(name, pr, x)| (name, x, pr))
    .collect()
}

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_points");
    group.sample_size(20);
    for (name, x, pr) in cases() {
        for (label, strategy) in [("sequential", Strategy::Sequential), ("parallel", Strategy::Parallel)] {
            group.bench_with_input(BenchmarkId::new(label, name), &strategy, |b, &s| {
                b.iter(|| enumerate_points(black_box(&x), &pr, u64::MAX, s).unwrap().len())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, enumeration);
criterion_main!(benches);
