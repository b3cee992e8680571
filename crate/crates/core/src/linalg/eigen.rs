//! Smallest eigenpairs by block inverse iteration with Rayleigh–Ritz.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::dense::{jacobi_eigen, DenseSymmetric};
use super::{
    dot, norm2, solve_spd_with, symmetric_reduce, CgOptions, DiagonalWeightMatrix, EnvelopeCholesky,
    LinalgError, SymmetricSparseMatrix,
};

/// Default residual tolerance, relative to `max(1, |λ|)`.
pub const DEFAULT_EIGEN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
    /// `‖M v − λ v‖₂ / ‖v‖₂` (or `‖A v − λ B v‖₂ / ‖v‖₂` for generalized pairs).
    pub residual_norm: f64,
}

/// Linear solver used for the inverse-iteration step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InnerSolver {
    /// Factor once with an envelope Cholesky, then back-substitute.
    #[default]
    Cholesky,
    /// Jacobi-preconditioned conjugate gradients per step.
    ConjugateGradient,
}

#[derive(Debug, Clone, Copy)]
pub struct EigenOptions {
    /// Seed of the pseudo-random start block.
    pub seed: u64,
    pub max_iter: usize,
    /// Extra block vectors beyond the requested count; they accelerate
    /// convergence of the wanted pairs.
    pub guard_vectors: usize,
    pub inner: InnerSolver,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            seed: 0x5eed_cafe,
            max_iter: 1000,
            guard_vectors: 8,
            inner: InnerSolver::Cholesky,
        }
    }
}

/// The `count` algebraically smallest eigenpairs of `m`, ascending.
pub fn smallest_eigenpairs(
    m: &SymmetricSparseMatrix,
    count: usize,
    tol: f64,
) -> Result<Vec<EigenPair>, LinalgError> {
    smallest_eigenpairs_with(m, count, tol, &EigenOptions::default())
}

/// Generalized pairs `A x = λ B x` with `xᵀ B x = 1`, via the symmetric
/// reduction `B^{-1/2} A B^{-1/2}` and `x = B^{-1/2} y`.
pub fn generalized_smallest_eigenpairs(
    a: &SymmetricSparseMatrix,
    b: &DiagonalWeightMatrix,
    count: usize,
    tol: f64,
    opts: &EigenOptions,
) -> Result<Vec<EigenPair>, LinalgError> {
    let reduced = symmetric_reduce(a, b)?;
    let pairs = smallest_eigenpairs_with(&reduced, count, tol, opts)?;
    Ok(pairs
        .into_iter()
        .map(|p| {
            let mut x: Vec<f64> = p.vector.iter().zip(b.diagonal()).map(|(y, w)| y / w.sqrt()).collect();
            apply_sign_convention(&mut x);
            let ax = a.mul_vec(&x);
            let bx = b.mul_vec(&x);
            let r: Vec<f64> = ax.iter().zip(&bx).map(|(u, v)| u - p.value * v).collect();
            EigenPair {
                value: p.value,
                residual_norm: norm2(&r) / norm2(&x),
                vector: x,
            }
        })
        .collect())
}

enum Inverse {
    Cholesky(EnvelopeCholesky),
    Cg(SymmetricSparseMatrix),
}

impl Inverse {
    fn apply(&self, rhs: &[f64], guess: Option<&[f64]>) -> Result<Vec<f64>, LinalgError> {
        match self {
            Inverse::Cholesky(c) => Ok(c.solve(rhs)),
            Inverse::Cg(s) => solve_spd_with(
                s,
                rhs,
                guess,
                &CgOptions {
                    rel_tol: 1e-13,
                    max_iter: None,
                },
            ),
        }
    }
}

/// Shift `σ` and operator `(M − σ I)^{-1}`. The unshifted matrix is tried
/// first; if it is not positive definite the Gershgorin bound supplies a
/// shift below the spectrum.
fn prepare(m: &SymmetricSparseMatrix, inner: InnerSolver) -> Result<(f64, Inverse), LinalgError> {
    let build = |shift: f64| -> Result<Inverse, LinalgError> {
        let s = m.shifted(shift);
        match inner {
            InnerSolver::Cholesky => EnvelopeCholesky::factor(&s).map(Inverse::Cholesky),
            InnerSolver::ConjugateGradient => {
                let probe = vec![1.0; s.dim()];
                // A single solve exposes indefiniteness as a breakdown.
                solve_spd_with(&s, &probe, None, &CgOptions::default())?;
                Ok(Inverse::Cg(s))
            }
        }
    };
    match build(0.0) {
        Ok(inv) => Ok((0.0, inv)),
        Err(LinalgError::NotPositiveDefinite { .. }) | Err(LinalgError::CgBreakdown { .. }) => {
            let g = m.gershgorin_lower_bound();
            let margin = (1e-3 * m.norm_inf()).max(1e-3 * g.abs()).max(1e-12);
            let shift = g.min(0.0) - margin;
            Ok((shift, build(shift)?))
        }
        Err(e) => Err(e),
    }
}

pub fn smallest_eigenpairs_with(
    m: &SymmetricSparseMatrix,
    count: usize,
    tol: f64,
    opts: &EigenOptions,
) -> Result<Vec<EigenPair>, LinalgError> {
    let n = m.dim();
    if count == 0 || count >= n {
        return Err(LinalgError::CountTooLarge { count, dim: n });
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(LinalgError::InvalidTolerance(tol));
    }
    let p = (count + opts.guard_vectors).min(n);
    let (shift, inverse) = prepare(m, opts.inner)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    let mut block: Vec<Vec<f64>> = (0..p).map(|_| random_vector(&mut rng, n)).collect();
    orthonormalize(&mut block, &mut rng);
    let mut ritz: Option<Vec<f64>> = None;
    let mut best = f64::INFINITY;

    for _iter in 0..opts.max_iter {
        let mut next = Vec::with_capacity(p);
        for (i, x) in block.iter().enumerate() {
            let guess: Option<Vec<f64>> = ritz
                .as_ref()
                .map(|t| x.iter().map(|v| v / (t[i] - shift).max(f64::MIN_POSITIVE)).collect());
            next.push(inverse.apply(x, guess.as_deref())?);
        }
        orthonormalize(&mut next, &mut rng);

        let images: Vec<Vec<f64>> = next.iter().map(|y| m.mul_vec(y)).collect();
        let mut projected = DenseSymmetric::zeros(p);
        for i in 0..p {
            for j in i..p {
                projected.set(i, j, 0.5 * (dot(&next[i], &images[j]) + dot(&next[j], &images[i])));
            }
        }
        let eig = jacobi_eigen(&projected);

        let combine = |basis: &[Vec<f64>], w: &[f64]| -> Vec<f64> {
            let mut out = vec![0.0; n];
            for (coef, v) in w.iter().zip(basis) {
                for (o, vi) in out.iter_mut().zip(v) {
                    *o += coef * vi;
                }
            }
            out
        };
        block = eig.vectors.iter().map(|w| combine(&next, w)).collect();
        let mapped: Vec<Vec<f64>> = eig.vectors.iter().map(|w| combine(&images, w)).collect();

        let mut worst: f64 = 0.0;
        for k in 0..count {
            let r: Vec<f64> = mapped[k].iter().zip(&block[k]).map(|(mv, v)| mv - eig.values[k] * v).collect();
            let rel = norm2(&r) / norm2(&block[k]) / eig.values[k].abs().max(1.0);
            worst = worst.max(rel);
        }
        best = best.min(worst);
        ritz = Some(eig.values.clone());
        if worst <= tol {
            return Ok((0..count)
                .map(|k| finish(m, eig.values[k], std::mem::take(&mut block[k])))
                .collect());
        }
    }
    Err(LinalgError::NoConvergence {
        iterations: opts.max_iter,
        best_residual: best,
    })
}

fn finish(m: &SymmetricSparseMatrix, value: f64, mut vector: Vec<f64>) -> EigenPair {
    let norm = norm2(&vector);
    vector.iter_mut().for_each(|v| *v /= norm);
    apply_sign_convention(&mut vector);
    let mv = m.mul_vec(&vector);
    let r: Vec<f64> = mv.iter().zip(&vector).map(|(a, b)| a - value * b).collect();
    EigenPair {
        value,
        residual_norm: norm2(&r) / norm2(&vector),
        vector,
    }
}

/// Flip so the first entry of largest magnitude is positive.
pub(crate) fn apply_sign_convention(v: &mut [f64]) {
    let mut idx = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[idx].abs() {
            idx = i;
        }
    }
    if v.get(idx).is_some_and(|x| *x < 0.0) {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random::<f64>() - 0.5).collect()
}

/// Modified Gram–Schmidt, applied twice. Vectors that collapse are
/// replaced by fresh random directions.
fn orthonormalize(vs: &mut [Vec<f64>], rng: &mut ChaCha8Rng) {
    let n = vs.first().map_or(0, Vec::len);
    for i in 0..vs.len() {
        for attempt in 0..10 {
            let before = norm2(&vs[i]);
            for _pass in 0..2 {
                for j in 0..i {
                    let (head, tail) = vs.split_at_mut(i);
                    let c = dot(&head[j], &tail[0]);
                    for (x, q) in tail[0].iter_mut().zip(&head[j]) {
                        *x -= c * q;
                    }
                }
            }
            let after = norm2(&vs[i]);
            if after > 1e-10 * before && after > 0.0 {
                vs[i].iter_mut().for_each(|x| *x /= after);
                break;
            }
            assert!(attempt < 9, "could not extend orthonormal block");
            vs[i] = random_vector(rng, n);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian_1d(n: usize, h: f64) -> SymmetricSparseMatrix {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0 / (h * h)));
            if i + 1 < n {
                t.push((i, i + 1, -1.0 / (h * h)));
                t.push((i + 1, i, -1.0 / (h * h)));
            }
        }
        SymmetricSparseMatrix::from_triplets(n, t).unwrap()
    }

    #[test]
    fn dirichlet_chain_ground_state() {
        let h = 0.01;
        let m = laplacian_1d(99, h);
        let pairs = smallest_eigenpairs(&m, 3, DEFAULT_EIGEN_TOL).unwrap();
        for (k, p) in pairs.iter().enumerate() {
            let mk = (k + 1) as f64;
            let exact = 4.0 / (h * h) * (mk * std::f64::consts::PI * h / 2.0).sin().powi(2);
            assert!((p.value - exact).abs() < 1e-9 * exact, "{} vs {exact}", p.value);
        }
        assert!((pairs[0].value - 9.868_792_685).abs() < 1e-6);
    }

    #[test]
    fn identity_single_pair() {
        let m = SymmetricSparseMatrix::scaled_identity(6, 1.0).unwrap();
        let pairs = smallest_eigenpairs(&m, 1, 1e-10).unwrap();
        assert!((pairs[0].value - 1.0).abs() < 1e-14);
        assert!((norm2(&pairs[0].vector) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn count_must_be_below_dimension() {
        let m = SymmetricSparseMatrix::scaled_identity(3, 1.0).unwrap();
        assert!(matches!(
            smallest_eigenpairs(&m, 3, 1e-10),
            Err(LinalgError::CountTooLarge { count: 3, dim: 3 })
        ));
        assert!(matches!(smallest_eigenpairs(&m, 1, 0.0), Err(LinalgError::InvalidTolerance(_))));
    }

    #[test]
    fn indefinite_matrix_uses_shift() {
        let m = SymmetricSparseMatrix::from_triplets(
            3,
            [(0, 0, -2.0), (1, 1, 1.0), (2, 2, 5.0), (0, 1, 0.5), (1, 0, 0.5)],
        )
        .unwrap();
        let pairs = smallest_eigenpairs(&m, 2, 1e-12).unwrap();
        let d = (1.5f64 * 1.5 + 0.25).sqrt();
        assert!((pairs[0].value - (-0.5 - d)).abs() < 1e-12);
        assert!((pairs[1].value - (-0.5 + d)).abs() < 1e-12);
    }

    #[test]
    fn cg_inner_solver_agrees() {
        let m = laplacian_1d(40, 1.0 / 41.0);
        let opts = EigenOptions {
            inner: InnerSolver::ConjugateGradient,
            ..EigenOptions::default()
        };
        let a = smallest_eigenpairs_with(&m, 2, 1e-10, &opts).unwrap();
        let b = smallest_eigenpairs(&m, 2, 1e-10).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x.value - y.value).abs() < 1e-9 * y.value);
        }
    }

    #[test]
    fn sign_convention() {
        let mut v = vec![0.1, -0.9, 0.9, 0.2];
        apply_sign_convention(&mut v);
        assert_eq!(v, vec![-0.1, 0.9, -0.9, -0.2]);
    }
}
