use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use specgeom::annulus::{annulus_spectrum, capacity_deficit};
use specgeom::cylinder::perturbed_ground_eigenvalue;
use specgeom::flow::{verify_hadamard, verify_topping};
use specgeom::special::{bessel_j, bessel_y, cross_product_roots};
use specgeom::{AnnulusGeometry, BesselOrder, ConformalPerturbation, CylinderGrid};

fn bessel(c: &mut Criterion) {
    let mut g = c.benchmark_group("bessel");
    for &x in &[0.5, 7.3, 35.0, 420.0] {
        let n = BesselOrder::new(3).unwrap();
        g.bench_with_input(BenchmarkId::new("j3", x), &x, |b, &x| b.iter(|| bessel_j(n, black_box(x))));
        g.bench_with_input(BenchmarkId::new("y3", x), &x, |b, &x| b.iter(|| bessel_y(n, black_box(x))));
    }
    g.finish();
}

fn roots(c: &mut Criterion) {
    let mut g = c.benchmark_group("cross_product_roots");
    for &b in &[5.0, 100.0, 1000.0] {
        g.bench_with_input(BenchmarkId::new("n0_first3", b), &b, |bench, &b| {
            bench.iter(|| cross_product_roots(BesselOrder::new(0).unwrap(), 1.0, black_box(b), 3))
        });
    }
    g.bench_function("spectrum_1_5", |b| {
        let geom = AnnulusGeometry::new(1.0, 5.0).unwrap();
        b.iter(|| annulus_spectrum(black_box(&geom), 5, 2))
    });
    g.finish();
}

fn cylinder(c: &mut Criterion) {
    let mut g = c.benchmark_group("cylinder");
    g.sample_size(10);
    for &(nx, nt) in &[(18, 24), (36, 48), (72, 96)] {
        let grid = CylinderGrid::new(1.0, nx, nt).unwrap();
        let pert = ConformalPerturbation::default_profile(1e-3, 1.0).unwrap();
        g.bench_with_input(BenchmarkId::new("ground", format!("{nx}x{nt}")), &grid, |b, grid| {
            b.iter(|| perturbed_ground_eigenvalue(grid, &pert, 1e-10))
        });
    }
    g.finish();
}

fn identities(c: &mut Criterion) {
    let mut g = c.benchmark_group("identities");
    g.bench_function("topping", |b| b.iter(|| verify_topping(1.0, 5.0, black_box(0.1), 1e-5)));
    g.bench_function("hadamard", |b| b.iter(|| verify_hadamard(1.0, 5.0, black_box(0.1), 1e-5)));
    g.bench_function("deficit", |b| {
        let geom = AnnulusGeometry::new(1.0, 5.0).unwrap();
        b.iter(|| capacity_deficit(black_box(&geom)))
    });
    g.finish();
}

criterion_group!(benches, bessel, roots, cylinder, identities);
criterion_main!(benches);
