//! Dense complex matrices and Hermitian eigendecomposition.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Relative tolerance on `‖H − H†‖` accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-14;

/// A square complex matrix checked to equal its conjugate transpose.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(CMatrix);

impl HermitianMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        let residual = hermitian_residual(&matrix);
        if residual > HERMITIAN_TOL {
            return Err(Error::NotHermitian { residual });
        }
        Ok(Self(matrix))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_inner(self) -> CMatrix {
        self.0
    }
}

/// `‖H − H†‖_F / max(1, ‖H‖_F)`.
pub fn hermitian_residual(m: &CMatrix) -> f64 {
    let diff = m - m.adjoint();
    diff.norm() / m.norm().max(1.0)
}

#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Unitary; column `k` belongs to `eigenvalues[k]`.
    pub eigenvectors: CMatrix,
}

impl HermitianEigen {
    /// `U f(E) U†`.
    pub fn apply_function<F: Fn(f64) -> Complex64>(&self, f: F) -> CMatrix {
        let u = &self.eigenvectors;
        let mut scaled = u.clone();
        for (k, &e) in self.eigenvalues.iter().enumerate() {
            let fe = f(e);
            scaled.column_mut(k).iter_mut().for_each(|z| *z *= fe);
        }
        scaled * u.adjoint()
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.apply_function(|e| Complex64::new(e, 0.0))
    }
}

/// Eigendecomposition `H = U diag(E) U†` with eigenvalues sorted ascending.
pub fn hermitian_eig(h: &HermitianMatrix) -> Result<HermitianEigen> {
    let n = h.dim();
    if n == 0 {
        return Ok(HermitianEigen {
            eigenvalues: Vec::new(),
            eigenvectors: CMatrix::zeros(0, 0),
        });
    }
    let eig = SymmetricEigen::try_new(h.as_matrix().clone(), 1e-15, 0).ok_or_else(|| {
        Error::Eigendecomposition("symmetric QR iteration did not converge".into())
    })?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rng::RngStream;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pauli_z() {
        let z = CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]);
        let eig = hermitian_eig(&HermitianMatrix::new(z).unwrap()).unwrap();
        assert_eq!(eig.eigenvalues, vec![-1.0, 1.0]);
    }

    #[test]
    fn pauli_x_eigenvectors() {
        let x = CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
        let eig = hermitian_eig(&HermitianMatrix::new(x).unwrap()).unwrap();
        assert!((eig.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-15);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        // (|g> - |e>)/√2 and (|g> + |e>)/√2 up to phase
        let minus = CVector::from_vec(vec![c(s, 0.), c(-s, 0.)]);
        let plus = CVector::from_vec(vec![c(s, 0.), c(s, 0.)]);
        assert!((eig.eigenvectors.column(0).dotc(&minus).norm() - 1.0).abs() < 1e-14);
        assert!((eig.eigenvectors.column(1).dotc(&plus).norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)]);
        assert!(matches!(
            HermitianMatrix::new(m),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn random_400_reconstructs() {
        let n = 400;
        let mut rng = RngStream::new(11, 0);
        let a = CMatrix::from_fn(n, n, |_, _| rng.complex_gaussian());
        let h = HermitianMatrix::new((&a + a.adjoint()) * c(0.5, 0.0)).unwrap();
        let eig = hermitian_eig(&h).unwrap();
        assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        let rel = (eig.reconstruct() - h.as_matrix()).norm() / h.as_matrix().norm();
        assert!(rel < 1e-10, "reconstruction residual {rel:e}");
        let unitary =
            (eig.eigenvectors.adjoint() * &eig.eigenvectors - CMatrix::identity(n, n)).norm();
        assert!(unitary < 1e-10);
    }
}
