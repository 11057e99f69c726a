//! Exact Schrödinger evolution of the two-band model in its single-excitation
//! sector.
//!
//! The coupling only connects `|e, n₁⟩` (system excited, lower band) with
//! `|g, n₂⟩` (system ground, upper band), so starting from `|e⟩ ⊗ |χ⟩` with
//! `|χ⟩` in the lower band the dynamics stays in this `N₁ + N₂` dimensional
//! subspace. Sector basis order: the `N₁` states `|e, n₁⟩`, then the `N₂`
//! states `|g, n₂⟩`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{
    hermitian_eig, CMatrix, CVector, HermitianEigen, HermitianMatrix, RngStream,
};
use crate::two_band::TwoBandParams;

/// Stream index of the coupling constants for realization 0.
pub const COUPLING_STREAM: u64 = u64::MAX;
/// Stream index of the environment amplitudes for realization 0.
pub const ENVIRONMENT_STREAM: u64 = u64::MAX - 1;

/// `(coupling, environment)` stream indices of realization `r`.
pub fn realization_streams(r: u64) -> (u64, u64) {
    (COUPLING_STREAM - 2 * r, ENVIRONMENT_STREAM - 2 * r)
}

#[derive(Debug, Clone)]
pub struct SectorHamiltonian {
    matrix: HermitianMatrix,
    n1: usize,
    n2: usize,
}

impl SectorHamiltonian {
    pub fn matrix(&self) -> &CMatrix {
        self.matrix.as_matrix()
    }

    pub fn dim(&self) -> usize {
        self.n1 + self.n2
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }
}

/// Diagonal `ΔE/2 + δε n/N` on both blocks and `λ c(n₁, n₂)` between
/// `|e, n₁⟩` and `|g, n₂⟩`, with circular complex Gaussian `c` drawn in
/// row-major `(n₁, n₂)` order.
pub fn build_sector_hamiltonian(
    params: &TwoBandParams,
    rng: &mut RngStream,
) -> Result<SectorHamiltonian> {
    params.validate()?;
    let (n1, n2) = (params.n1, params.n2);
    let dim = n1 + n2;
    let mut h = CMatrix::zeros(dim, dim);
    for k in 1..=n1 {
        h[(k - 1, k - 1)] = Complex64::new(
            0.5 * params.delta_e + params.delta_eps * k as f64 / n1 as f64,
            0.0,
        );
    }
    for k in 1..=n2 {
        let idx = n1 + k - 1;
        h[(idx, idx)] = Complex64::new(
            0.5 * params.delta_e + params.delta_eps * k as f64 / n2 as f64,
            0.0,
        );
    }
    for a in 0..n1 {
        for b in 0..n2 {
            let v = rng.complex_gaussian() * params.lambda;
            h[(a, n1 + b)] = v;
            h[(n1 + b, a)] = v.conj();
        }
    }
    Ok(SectorHamiltonian {
        matrix: HermitianMatrix::new(h)?,
        n1,
        n2,
    })
}

/// Lower-band amplitudes `d₁ … d_{N₁}` of the initial environment state.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialEnvironmentState {
    amplitudes: Vec<f64>,
}

impl InitialEnvironmentState {
    pub fn new(amplitudes: Vec<f64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|d| d * d).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidArgument(
                "environment amplitudes must have positive finite norm".into(),
            ));
        }
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|d| d / norm).collect(),
        })
    }

    /// Real standard Gaussian amplitudes, normalized.
    pub fn sample(n1: usize, rng: &mut RngStream) -> Result<Self> {
        Self::new((0..n1).map(|_| rng.real_gaussian()).collect())
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    /// `|e⟩ ⊗ |χ⟩` in sector coordinates.
    pub fn sector_state(&self, n2: usize) -> CVector {
        let n1 = self.amplitudes.len();
        CVector::from_fn(n1 + n2, |k, _| {
            if k < n1 {
                Complex64::new(self.amplitudes[k], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }
}

/// Spectral propagator `e^{−iHt} = U e^{−iEt} U†`.
#[derive(Debug, Clone)]
pub struct ExactPropagator {
    eig: HermitianEigen,
}

impl ExactPropagator {
    pub fn new(h: &SectorHamiltonian) -> Result<Self> {
        Ok(Self {
            eig: hermitian_eig(&h.matrix)?,
        })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eig.eigenvalues
    }

    /// Amplitudes at each time of `grid` starting from `psi0` at `t = 0`.
    pub fn evolve(&self, psi0: &CVector, grid: &[f64]) -> Result<Vec<CVector>> {
        let u = &self.eig.eigenvectors;
        if psi0.len() != u.nrows() {
            return Err(Error::DimensionMismatch {
                expected: u.nrows(),
                found: psi0.len(),
            });
        }
        let coeffs = u.ad_mul(psi0);
        Ok(grid
            .iter()
            .map(|&t| {
                if t == 0.0 {
                    return psi0.clone();
                }
                let phased = CVector::from_iterator(
                    coeffs.len(),
                    coeffs
                        .iter()
                        .zip(&self.eig.eigenvalues)
                        .map(|(c, &e)| c * Complex64::from_polar(1.0, -e * t)),
                );
                u * phased
            })
            .collect())
    }
}

/// `ψ(t) = e^{−iHt} ψ₀` on `grid`.
pub fn evolve_exact(h: &SectorHamiltonian, psi0: &CVector, grid: &[f64]) -> Result<Vec<CVector>> {
    if grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidArgument(
            "time grid must be increasing".into(),
        ));
    }
    ExactPropagator::new(h)?.evolve(psi0, grid)
}

/// Upper-level population `Σ_{n₁} |⟨e, n₁|ψ⟩|²`.
pub fn rho11_exact(amplitudes: &CVector, params: &TwoBandParams) -> f64 {
    amplitudes
        .iter()
        .take(params.n1)
        .map(|a| a.norm_sqr())
        .sum()
}

/// Upper-level population on `grid`, averaged over `realizations`
/// independent draws of couplings and initial environment (one draw is the
/// default protocol).
pub fn exact_rho11_curve(
    params: &TwoBandParams,
    grid: &[f64],
    realizations: usize,
) -> Result<Vec<f64>> {
    if realizations == 0 {
        return Err(Error::InvalidArgument(
            "need at least one realization".into(),
        ));
    }
    let mut acc = vec![0.0; grid.len()];
    for r in 0..realizations as u64 {
        let (coupling, environment) = realization_streams(r);
        let h = build_sector_hamiltonian(params, &mut RngStream::new(params.seed, coupling))?;
        let chi = InitialEnvironmentState::sample(
            params.n1,
            &mut RngStream::new(params.seed, environment),
        )?;
        let states = evolve_exact(&h, &chi.sector_state(params.n2), grid)?;
        for (a, psi) in acc.iter_mut().zip(&states) {
            *a += rho11_exact(psi, params);
        }
    }
    Ok(acc.into_iter().map(|a| a / realizations as f64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, lambda: f64) -> TwoBandParams {
        TwoBandParams {
            n1: n,
            n2: n,
            ..TwoBandParams::reference(lambda, 17)
        }
    }

    fn setup(p: &TwoBandParams) -> (SectorHamiltonian, CVector) {
        let h = build_sector_hamiltonian(p, &mut RngStream::new(p.seed, COUPLING_STREAM)).unwrap();
        let chi =
            InitialEnvironmentState::sample(p.n1, &mut RngStream::new(p.seed, ENVIRONMENT_STREAM))
                .unwrap();
        (h, chi.sector_state(p.n2))
    }

    #[test]
    fn uncoupled_is_diagonal() {
        let (h, _) = setup(&params(20, 0.0));
        let m = h.matrix();
        for r in 0..m.nrows() {
            for c in 0..m.ncols() {
                if r != c {
                    assert_eq!(m[(r, c)].norm(), 0.0);
                }
            }
        }
        assert!((m[(19, 19)].re - (0.5 + 0.31)).abs() < 1e-15);
        assert!((m[(20, 20)].re - (0.5 + 0.31 / 20.0)).abs() < 1e-15);
    }

    #[test]
    fn block_structure_and_hermiticity() {
        let p = params(200, 0.01);
        let (h, _) = setup(&p);
        let m = h.matrix();
        assert!((m - m.adjoint()).norm() <= 1e-15);
        for a in 0..200 {
            for b in 0..200 {
                if a != b {
                    assert_eq!(m[(a, b)].norm(), 0.0);
                    assert_eq!(m[(200 + a, 200 + b)].norm(), 0.0);
                }
            }
        }
    }

    #[test]
    fn single_levels_give_rabi_oscillation() {
        let p = params(1, 0.05);
        let (h, psi0) = setup(&p);
        let m = h.matrix();
        assert_eq!(m[(0, 0)], m[(1, 1)]);
        assert!((m[(0, 0)].re - 0.81).abs() < 1e-15);
        let coupling = m[(0, 1)].norm();
        let grid: Vec<f64> = (0..50).map(|k| 3.0 * k as f64).collect();
        let states = evolve_exact(&h, &psi0, &grid).unwrap();
        for (t, psi) in grid.iter().zip(&states) {
            let expected = (coupling * t).cos().powi(2);
            assert!((rho11_exact(psi, &p) - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn initial_time_is_exact() {
        let p = params(30, 0.01);
        let (h, psi0) = setup(&p);
        let states = evolve_exact(&h, &psi0, &[0.0, 1.0]).unwrap();
        assert_eq!(states[0], psi0);
        assert_eq!(rho11_exact(&psi0, &p), {
            let v: f64 = psi0.iter().map(|a| a.norm_sqr()).sum();
            v
        });
        assert!((rho11_exact(&psi0, &p) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn uncoupled_populations_are_constant() {
        let p = params(40, 0.0);
        let curve = exact_rho11_curve(&p, &[0.0, 10.0, 1000.0], 1).unwrap();
        for v in curve {
            assert!((v - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn norm_and_energy_are_conserved() {
        let p = params(100, 0.01);
        let (h, psi0) = setup(&p);
        let m = h.matrix();
        let energy = |psi: &CVector| psi.dotc(&(m * psi)).re;
        let e0 = energy(&psi0);
        let grid: Vec<f64> = (0..40).map(|k| 5.0 * k as f64).collect();
        for psi in evolve_exact(&h, &psi0, &grid).unwrap() {
            assert!((psi.norm_squared() - 1.0).abs() < 1e-12);
            assert!((energy(&psi) - e0).abs() < 1e-10 * e0.abs());
        }
    }

    #[test]
    fn environment_state_is_normalized_real() {
        let chi = InitialEnvironmentState::sample(200, &mut RngStream::new(1, ENVIRONMENT_STREAM))
            .unwrap();
        let norm: f64 = chi.amplitudes().iter().map(|d| d * d).sum();
        assert!((norm - 1.0).abs() < 1e-14);
        assert!(InitialEnvironmentState::new(vec![0.0; 3]).is_err());
    }

    #[test]
    fn realizations_average() {
        let p = params(10, 0.02);
        let grid = [0.0, 50.0];
        let one = exact_rho11_curve(&p, &grid, 1).unwrap();
        let two = exact_rho11_curve(&p, &grid, 2).unwrap();
        assert!((one[0] - 1.0).abs() < 1e-14);
        assert_ne!(one[1], two[1]);
        assert!(exact_rho11_curve(&p, &grid, 0).is_err());
    }
}
