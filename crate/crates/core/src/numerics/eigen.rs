//! Dense real-symmetric eigendecomposition.
//!
//! Delegates to LAPACK `dsyevr` (MRRR). Everything else in the crate sees only
//! [`SymmetricEigen`] and the two entry points below.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

// Link the system OpenBLAS that provides the LAPACK symbols.
extern crate openblas_src;

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<f64>,
}

impl SymmetricEigen {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }
}

/// All eigenpairs of a symmetric matrix. Only the upper triangle is read.
pub fn symmetric_eigen(matrix: &DMatrix<f64>) -> Result<SymmetricEigen> {
    dsyevr(matrix, None)
}

/// The lowest eigenvalue and its eigenvector.
pub fn lowest_eigenpair(matrix: &DMatrix<f64>) -> Result<(f64, Vec<f64>)> {
    let e = dsyevr(matrix, Some(1))?;
    Ok((e.eigenvalues[0], e.eigenvectors.column(0).iter().copied().collect()))
}

/// The `count` lowest eigenpairs.
pub fn lowest_eigenpairs(matrix: &DMatrix<f64>, count: usize) -> Result<SymmetricEigen> {
    dsyevr(matrix, Some(count.min(matrix.nrows())))
}

fn dsyevr(matrix: &DMatrix<f64>, lowest: Option<usize>) -> Result<SymmetricEigen> {
    let n = matrix.nrows();
    if n != matrix.ncols() {
        return Err(Error::InvalidParameter(format!(
            "eigensolver needs a square matrix, got {}x{}",
            n,
            matrix.ncols()
        )));
    }
    if n == 0 {
        return Ok(SymmetricEigen { eigenvalues: vec![], eigenvectors: DMatrix::zeros(0, 0) });
    }
    let ni = n as i32;
    let (range, il, iu, m_cap) = match lowest {
        Some(k) if k < n => (b'I', 1, k as i32, k),
        _ => (b'A', 0, 0, n),
    };
    // Column-major copy, which is also nalgebra's storage order.
    let mut a: Vec<f64> = matrix.as_slice().to_vec();
    let mut w = vec![0.0; n];
    let mut z = vec![0.0; n * m_cap.max(1)];
    let mut isuppz = vec![0i32; 2 * m_cap.max(1)];
    let mut found = 0i32;
    let mut info = 0i32;
    let mut work_query = [0.0f64];
    let mut iwork_query = [0i32];
    unsafe {
        lapack::dsyevr(
            b'V', range, b'U', ni, &mut a, ni, 0.0, 0.0, il, iu, 0.0, &mut found, &mut w, &mut z,
            ni, &mut isuppz, &mut work_query, -1, &mut iwork_query, -1, &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Eigensolver(info));
    }
    let lwork = work_query[0] as usize;
    let liwork = iwork_query[0] as usize;
    let mut work = vec![0.0; lwork.max(1)];
    let mut iwork = vec![0i32; liwork.max(1)];
    unsafe {
        lapack::dsyevr(
            b'V', range, b'U', ni, &mut a, ni, 0.0, 0.0, il, iu, 0.0, &mut found, &mut w, &mut z,
            ni, &mut isuppz, &mut work, lwork as i32, &mut iwork, liwork as i32, &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Eigensolver(info));
    }
    let m = found as usize;
    w.truncate(m);
    z.truncate(n * m);
    Ok(SymmetricEigen { eigenvalues: w, eigenvectors: DMatrix::from_vec(n, m, z) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_x() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let e = symmetric_eigen(&m).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn diagonal_matrix_has_unit_eigenvectors() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![3.0, -1.0, 2.0]));
        let e = symmetric_eigen(&m).unwrap();
        assert_eq!(e.eigenvalues, vec![-1.0, 2.0, 3.0]);
        for (col, row) in [(0, 1), (1, 2), (2, 0)] {
            assert!((e.eigenvectors[(row, col)].abs() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn lowest_pair_matches_full_spectrum() {
        let m = DMatrix::from_fn(6, 6, |i, j| 1.0 / (1.0 + i as f64 + j as f64) + if i == j { i as f64 } else { 0.0 });
        let full = symmetric_eigen(&m).unwrap();
        let (e0, v0) = lowest_eigenpair(&m).unwrap();
        assert!((full.eigenvalues[0] - e0).abs() < 1e-12);
        let dot: f64 = full.eigenvectors.column(0).iter().zip(&v0).map(|(a, b)| a * b).sum();
        assert!((dot.abs() - 1.0).abs() < 1e-12);
    }
}
