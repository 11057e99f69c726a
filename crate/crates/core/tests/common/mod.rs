#![allow(dead_code)]

use lindblad_pdp::numerics::{CMatrix, CVector, RngStream};
use lindblad_pdp::pdp::{ComponentState, GeneralizedLindbladModel};
use num_complex::Complex64;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn uniform_grid(t_max: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| t_max * k as f64 / (n - 1) as f64).collect()
}

pub fn random_matrix(rng: &mut RngStream, dim: usize, scale: f64) -> CMatrix {
    CMatrix::from_fn(dim, dim, |_, _| rng.complex_gaussian() * scale)
}

pub fn random_hermitian(rng: &mut RngStream, dim: usize, scale: f64) -> CMatrix {
    let a = random_matrix(rng, dim, scale);
    (&a + a.adjoint()) * c(0.5, 0.0)
}

/// Two components on a qubit, three channels, one of them feeding both
/// components; the drift does not commute with the Hamiltonians.
pub fn random_model(rng: &mut RngStream) -> GeneralizedLindbladModel {
    GeneralizedLindbladModel::builder(2, 2)
        .hamiltonian(0, random_hermitian(rng, 2, 1.0))
        .hamiltonian(1, random_hermitian(rng, 2, 1.0))
        .jump(0, 0, 0, random_matrix(rng, 2, 0.5))
        .jump(1, 0, 0, random_matrix(rng, 2, 0.5))
        .jump(0, 1, 0, random_matrix(rng, 2, 0.5))
        .jump(0, 1, 1, random_matrix(rng, 2, 0.5))
        .jump(1, 1, 1, random_matrix(rng, 2, 0.5))
        .build()
        .unwrap()
}

pub fn random_state(rng: &mut RngStream, n: usize, dim: usize) -> ComponentState {
    let comps = (0..n)
        .map(|_| CVector::from_fn(dim, |_, _| rng.complex_gaussian()))
        .collect();
    ComponentState::new(comps, 0.0)
        .unwrap()
        .normalized()
        .unwrap()
}

pub fn ks_statistic(mut samples: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(k, &x)| {
            let f = cdf(x);
            (f - k as f64 / n).abs().max(((k + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Smallest eigenvalue of the Hermitian part of `m`.
pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    let herm = (m + m.adjoint()) * c(0.5, 0.0);
    nalgebra::SymmetricEigen::new(herm).eigenvalues.min()
}
