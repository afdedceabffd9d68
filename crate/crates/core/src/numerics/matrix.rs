use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::NumericsError;

/// Row-major square complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from `dim * dim` row-major entries.
    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Result<Self, NumericsError> {
        if entries.len() != dim * dim {
            return Err(NumericsError::DimensionMismatch {
                left: dim * dim,
                right: entries.len(),
            });
        }
        Ok(Self { dim, entries })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self, NumericsError> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(NumericsError::DimensionMismatch {
                    left: dim,
                    right: row.len(),
                });
            }
            entries.extend_from_slice(row);
        }
        Ok(Self { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn column(&self, col: usize) -> Vec<Complex64> {
        (0..self.dim).map(|r| self.get(r, col)).collect()
    }

    pub fn mat_mul(&self, other: &Self) -> Result<Self, NumericsError> {
        if self.dim != other.dim {
            return Err(NumericsError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let row = &other.entries[k * n..(k + 1) * n];
                let dst = &mut out.entries[i * n..(i + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mat_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>, NumericsError> {
        if v.len() != self.dim {
            return Err(NumericsError::DimensionMismatch {
                left: self.dim,
                right: v.len(),
            });
        }
        let n = self.dim;
        Ok((0..n)
            .map(|i| {
                self.entries[i * n..(i + 1) * n]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.entries[j * n + i] = self.entries[i * n + j].conj();
            }
        }
        out
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * k).collect(),
        }
    }

    /// Largest entry-wise modulus of `self - other`; infinite on dimension mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Max-entry deviation of `U^dagger U` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let gram = self.adjoint().mat_mul(self).expect("square");
        gram.max_abs_diff(&Self::identity(self.dim))
    }

    pub fn check_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (a, b) = (self.dim, other.dim);
        let n = a * b;
        let mut out = Self::zeros(n);
        for i in 0..a {
            for j in 0..a {
                let x = self.entries[i * a + j];
                for k in 0..b {
                    for l in 0..b {
                        out.entries[(i * b + k) * n + j * b + l] = x * other.entries[k * b + l];
                    }
                }
            }
        }
        out
    }
}

/// Modified Gram–Schmidt over the columns; columns whose residual norm falls below
/// `threshold` are dropped.
pub fn gram_schmidt(columns: &[Vec<Complex64>], threshold: f64) -> Vec<Vec<Complex64>> {
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for col in columns {
        let mut v = col.clone();
        for b in &basis {
            let overlap: Complex64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= overlap * bi;
            }
        }
        let norm = libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum::<f64>());
        if norm > threshold {
            for z in &mut v {
                *z /= norm;
            }
            basis.push(v);
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rotation_is_unitary_and_diag_is_not() {
        let r = DenseMatrix::from_rows(&[
            vec![c(0.6, 0.0), c(0.8, 0.0)],
            vec![c(-0.8, 0.0), c(0.6, 0.0)],
        ])
        .unwrap();
        assert!(r.check_unitary(1e-12));
        let d = DenseMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(2.0, 0.0)],
        ])
        .unwrap();
        assert!(!d.check_unitary(1e-10));
        assert!(DenseMatrix::identity(5).check_unitary(0.0));
    }

    #[test]
    fn mismatched_product_fails() {
        let err = DenseMatrix::identity(2)
            .mat_mul(&DenseMatrix::identity(3))
            .unwrap_err();
        assert_eq!(err, NumericsError::DimensionMismatch { left: 2, right: 3 });
    }

    #[test]
    fn gram_schmidt_drops_dependent_columns() {
        let cols = vec![
            vec![c(1.0, 0.0), c(1.0, 0.0)],
            vec![c(2.0, 0.0), c(2.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 1.0)],
        ];
        let basis = gram_schmidt(&cols, 1e-8);
        assert_eq!(basis.len(), 2);
    }
}
