mod common;

use std::f64::consts::PI;

use common::{bisect, oracle_j, oracle_y, series_j0_y0};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use specgeom::special::{bessel_j, bessel_j_prime, bessel_y, bessel_y_prime, BesselOrder};

fn ord(n: u32) -> BesselOrder {
    BesselOrder::new(n).unwrap()
}

#[test]
fn oracle_self_check() {
    // The two independent oracles agree where both apply.
    for &x in &[0.1, 1.0, 3.3, 8.0] {
        let (j0, y0) = series_j0_y0(x);
        assert!((j0 - oracle_j(0, x)).abs() < 1e-14, "J0({x})");
        assert!((y0 - oracle_y(0, x)).abs() < 1e-13, "Y0({x})");
    }
}

#[test]
fn j0_first_zero() {
    let z = bisect(|x| series_j0_y0(x).0, 2.0, 3.0);
    assert!((z - 2.404_825_557_695_773).abs() < 1e-14);
    assert!(bessel_j(ord(0), z).unwrap().abs() < 1e-12);
}

#[test]
fn j1_at_one() {
    let mut sum = 0.0;
    let mut term = 0.5;
    for m in 0..30 {
        sum += term;
        let mf = m as f64;
        term *= -0.25 / ((mf + 1.0) * (mf + 2.0));
    }
    assert!((sum - 0.440_050_585_744_933_5).abs() < 1e-16);
    assert!((bessel_j(ord(1), 1.0).unwrap() - sum).abs() < 1e-15);
}

#[test]
fn y0_first_zero_and_value() {
    let z = bisect(|x| series_j0_y0(x).1, 0.5, 1.5);
    assert!((z - 0.893_576_966_279_167_5).abs() < 1e-13);
    assert!(bessel_y(ord(0), z).unwrap().abs() < 1e-10);
    let y1 = oracle_y(0, 1.0);
    assert!((y1 - 0.088_256_964_215_676_96).abs() < 1e-13);
    assert!((bessel_y(ord(0), 1.0).unwrap() - y1).abs() < 1e-10);
}

#[test]
fn wronskian_at_three() {
    let w = bessel_j(ord(1), 3.0).unwrap() * bessel_y(ord(0), 3.0).unwrap()
        - bessel_j(ord(0), 3.0).unwrap() * bessel_y(ord(1), 3.0).unwrap();
    assert!((w - 2.0 / (3.0 * PI)).abs() < 1e-12);
    assert!((w - 0.212_206_590_8).abs() < 1e-10);
}

#[test]
fn derivative_examples() {
    assert!((bessel_j_prime(ord(0), 1.0).unwrap() + 0.440_050_585_7).abs() < 1e-10);
    let j1_zero = bisect(|x| oracle_j(1, x), 3.5, 4.0);
    assert!((j1_zero - 3.831_705_970_207_512_3).abs() < 1e-12);
    assert!(bessel_j_prime(ord(0), j1_zero).unwrap().abs() < 1e-10);
    let d = 1e-6;
    for n in 0..4 {
        let fd = (bessel_j(ord(n), 2.0 + d).unwrap() - bessel_j(ord(n), 2.0 - d).unwrap()) / (2.0 * d);
        assert!((fd - bessel_j_prime(ord(n), 2.0).unwrap()).abs() < 1e-8);
        let fd = (bessel_y(ord(n), 2.0 + d).unwrap() - bessel_y(ord(n), 2.0 - d).unwrap()) / (2.0 * d);
        assert!((fd - bessel_y_prime(ord(n), 2.0).unwrap()).abs() < 1e-8);
    }
}

#[test]
fn derivatives_against_oracle() {
    for &x in &[0.4, 1.7, 9.0, 31.0, 120.0] {
        for n in 0..6u32 {
            let jp = if n == 0 { -oracle_j(1, x) } else { 0.5 * (oracle_j(n - 1, x) - oracle_j(n + 1, x)) };
            let yp = if n == 0 { -oracle_y(1, x) } else { 0.5 * (oracle_y(n - 1, x) - oracle_y(n + 1, x)) };
            assert!((bessel_j_prime(ord(n), x).unwrap() - jp).abs() < 1e-10, "J'_{n}({x})");
            assert!((bessel_y_prime(ord(n), x).unwrap() - yp).abs() < 1e-10 * yp.abs().max(1.0), "Y'_{n}({x})");
        }
    }
}

#[test]
fn random_points_against_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_611);
    for _ in 0..100 {
        let n: u32 = rng.random_range(0..=12);
        // Log-uniform in [1e-2, 500].
        let x = 10f64.powf(rng.random_range(-2.0..500f64.log10()));
        let j = bessel_j(ord(n), x).unwrap();
        assert!((j - oracle_j(n, x)).abs() <= 1e-12, "J_{n}({x})");
        let want = oracle_y(n, x);
        let y = bessel_y(ord(n), x).unwrap();
        // Absolute bound, relative once |Y| exceeds one.
        assert!((y - want).abs() <= 1e-10 * want.abs().max(1.0), "Y_{n}({x}): {y} vs {want}");
    }
}

#[test]
fn wronskian_lattice() {
    for &x in &[0.5, 1.0, 2.0, 5.0, 10.0, 50.0] {
        for n in 0..=5 {
            let w = bessel_j(ord(n + 1), x).unwrap() * bessel_y(ord(n), x).unwrap()
                - bessel_j(ord(n), x).unwrap() * bessel_y(ord(n + 1), x).unwrap();
            assert!((w - 2.0 / (PI * x)).abs() <= 1e-10, "n={n} x={x}");
        }
    }
}

#[test]
fn three_term_recurrence() {
    for &x in &[0.5, 1.0, 2.0, 5.0, 10.0, 50.0, 300.0] {
        for n in 1..=8u32 {
            let s = 2.0 * n as f64 / x;
            let j = bessel_j(ord(n - 1), x).unwrap() + bessel_j(ord(n + 1), x).unwrap()
                - s * bessel_j(ord(n), x).unwrap();
            assert!(j.abs() <= 1e-10, "J n={n} x={x}");
            let yn = bessel_y(ord(n), x).unwrap();
            let y = bessel_y(ord(n - 1), x).unwrap() + bessel_y(ord(n + 1), x).unwrap() - s * yn;
            assert!(y.abs() <= 1e-10 * (s * yn).abs().max(1.0), "Y n={n} x={x}");
        }
    }
}
