//! Independent reference implementations used only by the tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use specgeom::linalg::{DiagonalWeightMatrix, SymmetricSparseMatrix};

const GL10_X: [f64; 5] = [
    0.148_874_338_981_631_2,
    0.433_395_394_129_247_2,
    0.679_409_568_299_024_4,
    0.865_063_366_688_984_5,
    0.973_906_528_517_171_7,
];
const GL10_W: [f64; 5] = [
    0.295_524_224_714_752_9,
    0.269_266_719_309_996_3,
    0.219_086_362_515_982,
    0.149_451_349_150_580_6,
    0.066_671_344_308_688_1,
];

/// Composite ten-point Gauss–Legendre.
pub fn gl10(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let w = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * w;
        let half = 0.5 * w;
        let mut s = 0.0;
        for (x, wt) in GL10_X.iter().zip(GL10_W.iter()) {
            s += wt * (f(mid - half * x) + f(mid + half * x));
        }
        total += s * half;
    }
    total
}

/// `J_n(x) = (1/π) ∫₀^π cos(nτ − x sin τ) dτ`; the integrand extends to a
/// smooth periodic function, so the trapezoid rule converges geometrically.
pub fn oracle_j(n: u32, x: f64) -> f64 {
    let m = 512 + 4 * x.ceil() as usize + 8 * n as usize;
    let h = PI / m as f64;
    let f = |t: f64| (n as f64 * t - x * t.sin()).cos();
    let mut s = 0.5 * (f(0.0) + f(PI));
    for i in 1..m {
        s += f(i as f64 * h);
    }
    s * h / PI
}

/// `Y_n(x) = (1/π) ∫₀^π sin(x sin τ − nτ) dτ
///          − (1/π) ∫₀^∞ (e^{nt} + (−1)^n e^{−nt}) e^{−x sinh t} dt`.
pub fn oracle_y(n: u32, x: f64) -> f64 {
    let nf = n as f64;
    let first = gl10(|t| (x * t.sin() - nf * t).sin(), 0.0, PI, 40 + 2 * x.ceil() as usize);
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let g = |t: f64| ((nf * t - x * t.sinh()).exp()) + sign * ((-nf * t - x * t.sinh()).exp());
    // Beyond t_max the exponent is below −45 relative to its peak.
    let peak_t = if n == 0 { 0.0 } else { (nf / x).acosh().max(0.0) };
    let peak = nf * peak_t - x * peak_t.sinh();
    let mut t_max = peak_t + 1.0;
    while nf * t_max - x * t_max.sinh() > peak - 45.0 {
        t_max += 0.5;
    }
    let second = if peak_t > 0.0 {
        gl10(g, 0.0, peak_t, 200) + gl10(g, peak_t, t_max, 400)
    } else {
        gl10(g, 0.0, t_max, 600)
    };
    (first - second) / PI
}

/// Ascending series for `J_0`, `Y_0` (small and moderate arguments).
pub fn series_j0_y0(x: f64) -> (f64, f64) {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut j0 = 1.0;
    let mut harmonic = 0.0;
    let mut ysum = 0.0;
    for k in 1..200 {
        let kf = k as f64;
        term *= -q / (kf * kf);
        harmonic += 1.0 / kf;
        j0 += term;
        ysum -= term * harmonic;
        if term.abs() < 1e-18 * j0.abs().max(1e-300) && k > 5 {
            break;
        }
    }
    let euler = 0.577_215_664_901_532_9;
    let y0 = 2.0 / PI * (((0.5 * x).ln() + euler) * j0 + ysum);
    (j0, y0)
}

/// `F_0(k) = J_0(ka) Y_0(kb) − J_0(kb) Y_0(ka)` from the series.
pub fn series_cross0(k: f64, a: f64, b: f64) -> f64 {
    let (ja, ya) = series_j0_y0(k * a);
    let (jb, yb) = series_j0_y0(k * b);
    ja * yb - jb * ya
}

/// Plain bisection to a bracket of a few ulps.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    assert!(flo * f(hi) < 0.0, "no sign change on [{lo}, {hi}]");
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// First root of `f` on `(lo, hi)` by dense sampling then bisection.
pub fn first_sign_change_root(f: impl Fn(f64) -> f64, lo: f64, hi: f64, samples: usize) -> f64 {
    let step = (hi - lo) / samples as f64;
    let mut x = lo;
    let mut fx = f(x);
    for _ in 0..samples {
        let next = x + step;
        let fn_ = f(next);
        if fx * fn_ < 0.0 {
            return bisect(&f, x, next);
        }
        x = next;
        fx = fn_;
    }
    panic!("no sign change on [{lo}, {hi}]");
}

/// First radial Dirichlet wavenumber of the annulus `(a, b)` from the
/// series cross product. Valid while `k·b` stays moderate (≲ 20).
pub fn oracle_first_radial_wavenumber(a: f64, b: f64) -> f64 {
    let spacing = PI / (b - a);
    first_sign_change_root(|k| series_cross0(k, a, b), 1e-3 / a, 1.5 * spacing + 3.0 / b, 4000)
}

pub fn to_dense(m: &SymmetricSparseMatrix) -> DMatrix<f64> {
    let n = m.dim();
    let mut d = DMatrix::zeros(n, n);
    for (i, j, v) in m.iter() {
        d[(i, j)] = v;
    }
    d
}

/// Sorted eigenvalues of `A u = λ B u` with diagonal `B`, via the dense
/// Cholesky factor of `B` and a dense symmetric eigensolver.
pub fn dense_generalized_eigenvalues(a: &SymmetricSparseMatrix, b: &DiagonalWeightMatrix) -> Vec<f64> {
    let a = to_dense(a);
    let n = a.nrows();
    let bd = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(b.diagonal()));
    let l = bd.cholesky().expect("weight is SPD").l();
    let linv = l.try_inverse().expect("invertible");
    let c = &linv * a * linv.transpose();
    let c = (&c + c.transpose()) * 0.5;
    let mut values: Vec<f64> = c.symmetric_eigen().eigenvalues.iter().copied().collect();
    values.sort_by(|x, y| x.partial_cmp(y).unwrap());
    assert_eq!(values.len(), n);
    values
}

pub fn dense_eigenvalues(m: &SymmetricSparseMatrix) -> Vec<f64> {
    let mut values: Vec<f64> = to_dense(m).symmetric_eigen().eigenvalues.iter().copied().collect();
    values.sort_by(|x, y| x.partial_cmp(y).unwrap());
    values
}

/// Random SPD matrix `QᵀQ + n·I` with sparsity, deterministic in `seed`.
pub fn random_spd(n: usize, seed: u64) -> SymmetricSparseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut next = || rng.random_range(-1.0..1.0);
    let mut q = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if (i + 2 * j) % 3 != 0 || i == j {
                q[(i, j)] = next();
            }
        }
    }
    let m = q.transpose() * &q + DMatrix::identity(n, n) * (0.1 * n as f64);
    let mut t = Vec::new();
    for i in 0..n {
        for j in 0..n {
            // Symmetrize bitwise so the sparse constructor accepts it.
            let v = if i <= j { m[(i, j)] } else { m[(j, i)] };
            t.push((i, j, v));
        }
    }
    SymmetricSparseMatrix::from_triplets(n, t).unwrap()
}

pub fn random_weights(n: usize, seed: u64) -> DiagonalWeightMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
    let d = (0..n).map(|_| rng.random_range(0.2..3.0)).collect();
    DiagonalWeightMatrix::new(d).unwrap()
}
