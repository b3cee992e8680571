use super::{dot, norm2, LinalgError, SymmetricSparseMatrix};

#[derive(Debug, Clone, Copy)]
pub struct CgOptions {
    /// Target for `‖M x − rhs‖ / ‖rhs‖`.
    pub rel_tol: f64,
    /// Iteration budget; `None` means `10·n + 100`.
    pub max_iter: Option<usize>,
}

impl Default for CgOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            max_iter: None,
        }
    }
}

/// Solves `M x = rhs` for symmetric positive definite `M` by
/// Jacobi-preconditioned conjugate gradients.
///
/// The returned solution satisfies `‖M x − rhs‖ / ‖rhs‖ ≤ 1e−10` (the
/// default inner target is tighter). Indefinite or singular input shows
/// up as nonpositive curvature and is reported with the iteration index.
pub fn solve_spd(m: &SymmetricSparseMatrix, rhs: &[f64]) -> Result<Vec<f64>, LinalgError> {
    solve_spd_with(m, rhs, None, &CgOptions::default())
}

pub fn solve_spd_with(
    m: &SymmetricSparseMatrix,
    rhs: &[f64],
    initial: Option<&[f64]>,
    opts: &CgOptions,
) -> Result<Vec<f64>, LinalgError> {
    let n = m.dim();
    if rhs.len() != n {
        return Err(LinalgError::DimensionMismatch {
            expected: n,
            found: rhs.len(),
        });
    }
    let diag = m.diagonal();
    if let Some(pivot) = diag.iter().position(|&d| !(d > 0.0)) {
        return Err(LinalgError::NotPositiveDefinite {
            pivot,
            value: diag[pivot],
        });
    }
    let rhs_norm = norm2(rhs);
    if rhs_norm == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let mut x = match initial {
        Some(x0) if x0.len() == n => x0.to_vec(),
        _ => vec![0.0; n],
    };
    let mut r: Vec<f64> = {
        let mx = m.mul_vec(&x);
        rhs.iter().zip(&mx).map(|(b, v)| b - v).collect()
    };
    let mut z: Vec<f64> = r.iter().zip(&diag).map(|(ri, d)| ri / d).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut mp = vec![0.0; n];
    let max_iter = opts.max_iter.unwrap_or(10 * n + 100);
    let mut best = norm2(&r) / rhs_norm;

    for iteration in 0..max_iter {
        let res = norm2(&r) / rhs_norm;
        best = best.min(res);
        if res <= opts.rel_tol {
            return Ok(x);
        }
        m.mul_vec_into(&p, &mut mp);
        let curvature = dot(&p, &mp);
        if !(curvature > 0.0) {
            return Err(LinalgError::CgBreakdown {
                iteration,
                curvature,
            });
        }
        let alpha = rz / curvature;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * mp[i];
        }
        // Refresh the recursive residual now and then to avoid drift.
        if iteration % 50 == 49 {
            let mx = m.mul_vec(&x);
            for i in 0..n {
                r[i] = rhs[i] - mx[i];
            }
        }
        for i in 0..n {
            z[i] = r[i] / diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    let res = {
        let mx = m.mul_vec(&x);
        let r: Vec<f64> = rhs.iter().zip(&mx).map(|(b, v)| b - v).collect();
        norm2(&r) / rhs_norm
    };
    if res <= opts.rel_tol {
        return Ok(x);
    }
    Err(LinalgError::NoConvergence {
        iterations: max_iter,
        best_residual: best.min(res),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaled_identity() {
        let m = SymmetricSparseMatrix::scaled_identity(2, 2.0).unwrap();
        assert_eq!(solve_spd(&m, &[1.0, 1.0]).unwrap(), vec![0.5, 0.5]);
    }

    #[test]
    fn identity_unit_vector() {
        let m = SymmetricSparseMatrix::scaled_identity(4, 1.0).unwrap();
        assert_eq!(solve_spd(&m, &[1.0, 0.0, 0.0, 0.0]).unwrap(), vec![1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn indefinite_breaks_down() {
        let m = SymmetricSparseMatrix::from_triplets(
            2,
            [(0, 0, 1.0), (0, 1, 3.0), (1, 0, 3.0), (1, 1, 1.0)],
        )
        .unwrap();
        let err = solve_spd(&m, &[1.0, -1.0]).unwrap_err();
        assert!(matches!(err, LinalgError::CgBreakdown { .. }), "{err:?}");
    }

    #[test]
    fn negative_diagonal_rejected() {
        let m = SymmetricSparseMatrix::from_triplets(2, [(0, 0, 1.0), (1, 1, -1.0)]).unwrap();
        assert!(matches!(
            solve_spd(&m, &[1.0, 1.0]),
            Err(LinalgError::NotPositiveDefinite { pivot: 1, .. })
        ));
    }
}
