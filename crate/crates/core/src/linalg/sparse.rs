//! Compressed-row storage for symmetric matrices and diagonal weights.

use super::LinalgError;

/// Symmetric sparse matrix in compressed-row form.
///
/// Both triangles are stored so that a matrix-vector product is a single
/// pass over the rows. Symmetry is checked exactly at assembly and the
/// matrix is immutable afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricSparseMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SymmetricSparseMatrix {
    /// Assembles from `(row, col, value)` triplets.
    ///
    /// Duplicate entries are summed. After summation the matrix must be
    /// exactly symmetric, otherwise [`LinalgError::Asymmetric`] is returned.
    /// Explicit zeros are dropped.
    pub fn from_triplets<I>(dim: usize, triplets: I) -> Result<Self, LinalgError>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        if dim == 0 {
            return Err(LinalgError::EmptyMatrix);
        }
        let mut entries: Vec<(usize, usize, f64)> = Vec::new();
        for (i, j, v) in triplets {
            if i >= dim || j >= dim {
                return Err(LinalgError::IndexOutOfBounds { row: i, col: j, dim });
            }
            if !v.is_finite() {
                return Err(LinalgError::NonFinite { row: i, col: j });
            }
            entries.push((i, j, v));
        }
        entries.sort_by_key(|e| (e.0, e.1));

        let mut row_ptr = vec![0usize; dim + 1];
        let mut col_idx = Vec::with_capacity(entries.len());
        let mut values = Vec::with_capacity(entries.len());
        let mut iter = entries.into_iter().peekable();
        while let Some((i, j, mut v)) = iter.next() {
            while let Some(&(i2, j2, v2)) = iter.peek() {
                if i2 == i && j2 == j {
                    v += v2;
                    iter.next();
                } else {
                    break;
                }
            }
            if v != 0.0 {
                row_ptr[i + 1] += 1;
                col_idx.push(j);
                values.push(v);
            }
        }
        for i in 0..dim {
            row_ptr[i + 1] += row_ptr[i];
        }
        let m = Self {
            dim,
            row_ptr,
            col_idx,
            values,
        };
        for (i, j, v) in m.iter() {
            if m.get(j, i) != v {
                return Err(LinalgError::Asymmetric { row: i, col: j });
            }
        }
        Ok(m)
    }

    /// Identity scaled by `value`.
    pub fn scaled_identity(dim: usize, value: f64) -> Result<Self, LinalgError> {
        Self::from_triplets(dim, (0..dim).map(|i| (i, i, value)))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of stored entries (both triangles).
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Entry `(i, j)`, zero when not stored.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&j) {
            Ok(k) => vals[k],
            Err(_) => 0.0,
        }
    }

    /// Column indices and values of row `i`, columns ascending.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.col_idx[range.clone()], &self.values[range])
    }

    /// All stored entries in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.dim).flat_map(move |i| {
            let (cols, vals) = self.row(i);
            cols.iter().zip(vals).map(move |(&j, &v)| (i, j, v))
        })
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    /// `y = M x`.
    pub fn mul_vec_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.dim, "vector length must match matrix dimension");
        assert_eq!(y.len(), self.dim, "vector length must match matrix dimension");
        for (i, yi) in y.iter_mut().enumerate() {
            let (cols, vals) = self.row(i);
            *yi = cols.iter().zip(vals).map(|(&j, &v)| v * x[j]).sum();
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim];
        self.mul_vec_into(x, &mut y);
        y
    }

    /// Lower bound on the spectrum from Gershgorin discs.
    pub fn gershgorin_lower_bound(&self) -> f64 {
        (0..self.dim)
            .map(|i| {
                let (cols, vals) = self.row(i);
                let mut diag = 0.0;
                let mut off = 0.0;
                for (&j, &v) in cols.iter().zip(vals) {
                    if j == i {
                        diag = v;
                    } else {
                        off += v.abs();
                    }
                }
                diag - off
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Infinity norm (maximum absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        (0..self.dim)
            .map(|i| self.row(i).1.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Entrywise map over stored values, keeping the sparsity pattern.
    ///
    /// The closure must be symmetric in `(i, j)` for the result to stay
    /// symmetric; this is only used internally with such closures.
    pub(crate) fn map_entries(&self, f: impl Fn(usize, usize, f64) -> f64) -> Self {
        let mut values = self.values.clone();
        for i in 0..self.dim {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                values[k] = f(i, self.col_idx[k], self.values[k]);
            }
        }
        Self {
            dim: self.dim,
            row_ptr: self.row_ptr.clone(),
            col_idx: self.col_idx.clone(),
            values,
        }
    }

    /// `M - shift * I`, inserting diagonal entries where missing.
    pub fn shifted(&self, shift: f64) -> Self {
        if shift == 0.0 {
            return self.clone();
        }
        let triplets = self
            .iter()
            .chain((0..self.dim).map(|i| (i, i, -shift)))
            .collect::<Vec<_>>();
        // Symmetry is preserved by construction.
        Self::from_triplets(self.dim, triplets).expect("shift preserves symmetry")
    }
}

/// Diagonal matrix with strictly positive entries.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalWeightMatrix {
    diagonal: Vec<f64>,
}

impl DiagonalWeightMatrix {
    pub fn new(diagonal: Vec<f64>) -> Result<Self, LinalgError> {
        if diagonal.is_empty() {
            return Err(LinalgError::EmptyMatrix);
        }
        if let Some((index, &value)) = diagonal
            .iter()
            .enumerate()
            .find(|(_, v)| !(**v > 0.0 && v.is_finite()))
        {
            return Err(LinalgError::NonPositiveWeight { index, value });
        }
        Ok(Self { diagonal })
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn total(&self) -> f64 {
        self.diagonal.iter().sum()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        self.diagonal.iter().zip(x).map(|(b, v)| b * v).collect()
    }

    /// `xᵀ B x`.
    pub fn inner(&self, x: &[f64]) -> f64 {
        self.diagonal.iter().zip(x).map(|(b, v)| b * v * v).sum()
    }
}

/// `Ã = B^{-1/2} A B^{-1/2}`, i.e. `Ã[i,j] = A[i,j] / sqrt(b_i b_j)`.
///
/// The product `b_i * b_j` is commutative so the result is exactly
/// symmetric whenever `A` is.
pub fn symmetric_reduce(
    a: &SymmetricSparseMatrix,
    b: &DiagonalWeightMatrix,
) -> Result<SymmetricSparseMatrix, LinalgError> {
    if a.dim() != b.dim() {
        return Err(LinalgError::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let d = b.diagonal();
    Ok(a.map_entries(|i, j, v| v / (d[i] * d[j]).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicates_are_summed() {
        let m = SymmetricSparseMatrix::from_triplets(2, [(0, 0, 1.0), (0, 0, 2.0), (0, 1, 1.0), (1, 0, 1.0)])
            .unwrap();
        assert_eq!(m.get(0, 0), 3.0);
        assert_eq!(m.nnz(), 3);
    }

    #[test]
    fn asymmetric_input_rejected() {
        let err = SymmetricSparseMatrix::from_triplets(2, [(0, 1, 1.0), (1, 0, 2.0)]).unwrap_err();
        assert!(matches!(err, LinalgError::Asymmetric { .. }));
    }

    #[test]
    fn reduce_identity() {
        let a = SymmetricSparseMatrix::scaled_identity(3, 1.0).unwrap();
        let b = DiagonalWeightMatrix::new(vec![4.0; 3]).unwrap();
        let r = symmetric_reduce(&a, &b).unwrap();
        for i in 0..3 {
            assert_eq!(r.get(i, i), 0.25);
        }
        assert_eq!(r.nnz(), 3);
    }

    #[test]
    fn reduce_two_by_two() {
        let a = SymmetricSparseMatrix::from_triplets(
            2,
            [(0, 0, 2.0), (0, 1, -1.0), (1, 0, -1.0), (1, 1, 2.0)],
        )
        .unwrap();
        let b = DiagonalWeightMatrix::new(vec![1.0, 4.0]).unwrap();
        let r = symmetric_reduce(&a, &b).unwrap();
        assert_eq!(r.get(0, 0), 2.0);
        assert_eq!(r.get(0, 1), -0.5);
        assert_eq!(r.get(1, 0), -0.5);
        assert_eq!(r.get(1, 1), 0.5);
    }

    #[test]
    fn reduce_errors() {
        let a = SymmetricSparseMatrix::scaled_identity(3, 1.0).unwrap();
        let b = DiagonalWeightMatrix::new(vec![1.0; 2]).unwrap();
        assert!(matches!(
            symmetric_reduce(&a, &b),
            Err(LinalgError::DimensionMismatch { expected: 3, found: 2 })
        ));
        assert!(matches!(
            DiagonalWeightMatrix::new(vec![1.0, 0.0, 2.0]),
            Err(LinalgError::NonPositiveWeight { index: 1, .. })
        ));
        assert!(DiagonalWeightMatrix::new(vec![1.0, -3.0]).is_err());
    }

    #[test]
    fn gershgorin_bound_is_below_spectrum() {
        let m = SymmetricSparseMatrix::from_triplets(
            2,
            [(0, 0, 2.0), (0, 1, -1.0), (1, 0, -1.0), (1, 1, 2.0)],
        )
        .unwrap();
        assert_eq!(m.gershgorin_lower_bound(), 1.0);
        let s = m.shifted(0.5);
        assert_eq!(s.get(0, 0), 1.5);
        assert_eq!(s.get(0, 1), -1.0);
    }
}
