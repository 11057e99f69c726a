//! Trajectory ensembles and a deterministic master-equation integrator.
//!
//! Ensemble averages are reduced by pairwise summation over fixed-size
//! trajectory chunks in trajectory order, so the result is bitwise
//! independent of how many worker threads ran the trajectories.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{CMatrix, RngStream};
use crate::pdp::{ComponentState, GeneralizedLindbladModel, HazardClock, Trajectory};

/// Basis index of the observed (upper) level.
pub const UPPER_LEVEL: usize = 0;
const CHUNK: usize = 64;
const MASTER_TOL: f64 = 1e-8;
const MAX_HALVINGS: u32 = 16;

/// Monte Carlo estimate of the component density matrices on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleEstimate {
    pub grid: Vec<f64>,
    /// `ρ̂_i(t)`, indexed `[time][component]`.
    pub component_rho: Vec<Vec<CMatrix>>,
    /// Standard errors of each element of `ρ̂_i(t)`: the real part holds the
    /// error of the real part, the imaginary part that of the imaginary part.
    pub component_rho_stderr: Vec<Vec<CMatrix>>,
    /// `⟨e|ρ̂_S(t)|e⟩`.
    pub mean: Vec<f64>,
    /// Standard error of `mean`.
    pub stderr: Vec<f64>,
    pub trajectories: usize,
    pub seed: u64,
}

impl EnsembleEstimate {
    /// `ρ̂_S = Σ_i ρ̂_i` at grid index `k`.
    pub fn system_rho(&self, k: usize) -> CMatrix {
        let mut it = self.component_rho[k].iter();
        let first = it.next().cloned().expect("at least one component");
        it.fold(first, |acc, m| acc + m)
    }
}

struct Layout {
    n: usize,
    dim: usize,
}

impl Layout {
    /// Per time: for each component element `(re, im, re², im²)`, then
    /// `(x, x²)` for the observable.
    fn per_time(&self) -> usize {
        4 * self.n * self.dim * self.dim + 2
    }

    fn record(&self, traj: &Trajectory) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.per_time() * traj.states.len());
        for state in &traj.states {
            let mut upper = 0.0;
            for i in 0..self.n {
                let p = state.projector(i);
                for z in p.iter() {
                    out.extend_from_slice(&[z.re, z.im, z.re * z.re, z.im * z.im]);
                }
                upper += p[(UPPER_LEVEL, UPPER_LEVEL)].re;
            }
            out.extend_from_slice(&[upper, upper * upper]);
        }
        out
    }
}

fn add_into(acc: &mut [f64], other: &[f64]) {
    for (a, b) in acc.iter_mut().zip(other) {
        *a += b;
    }
}

/// Pairwise (tree) sum of equally sized vectors, in order.
fn pairwise_sum(items: &[Vec<f64>]) -> Vec<f64> {
    match items.len() {
        0 => Vec::new(),
        1 => items[0].clone(),
        len => {
            let (left, right) = items.split_at(len / 2);
            let mut acc = pairwise_sum(left);
            add_into(&mut acc, &pairwise_sum(right));
            acc
        }
    }
}

fn run_chunk(
    model: &GeneralizedLindbladModel,
    initial: &ComponentState,
    grid: &[f64],
    seed: u64,
    layout: &Layout,
    range: std::ops::Range<usize>,
) -> Result<Vec<f64>> {
    let records = range
        .map(|k| {
            let mut rng = RngStream::new(seed, k as u64);
            model
                .run_trajectory(initial, grid, &mut rng)
                .map(|t| layout.record(&t))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(pairwise_sum(&records))
}

/// Averages `|ψ_i⟩⟨ψ_i|` over `n_traj` trajectories; trajectory `k` draws
/// from stream `(seed, k)`.
pub fn run_ensemble(
    model: &GeneralizedLindbladModel,
    initial: &ComponentState,
    grid: &[f64],
    n_traj: usize,
    seed: u64,
) -> Result<EnsembleEstimate> {
    if n_traj == 0 {
        return Err(Error::InvalidArgument(
            "need at least one trajectory".into(),
        ));
    }
    let layout = Layout {
        n: model.n_components(),
        dim: model.dim(),
    };
    let chunks: Vec<_> = (0..n_traj.div_ceil(CHUNK))
        .map(|c| c * CHUNK..((c + 1) * CHUNK).min(n_traj))
        .collect();

    #[cfg(feature = "parallel")]
    let sums = {
        use rayon::prelude::*;
        chunks
            .into_par_iter()
            .map(|r| run_chunk(model, initial, grid, seed, &layout, r))
            .collect::<Result<Vec<_>>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let sums = chunks
        .into_iter()
        .map(|r| run_chunk(model, initial, grid, seed, &layout, r))
        .collect::<Result<Vec<_>>>()?;

    let total = pairwise_sum(&sums);
    let nf = n_traj as f64;
    let stderr_of = |sum: f64, sum_sq: f64| {
        let m = sum / nf;
        ((sum_sq / nf - m * m).max(0.0) / nf).sqrt()
    };

    let per = layout.per_time();
    let (n, dim) = (layout.n, layout.dim);
    let mut component_rho = Vec::with_capacity(grid.len());
    let mut component_rho_stderr = Vec::with_capacity(grid.len());
    let mut mean = Vec::with_capacity(grid.len());
    let mut stderr = Vec::with_capacity(grid.len());
    for block in total.chunks(per) {
        let mut rhos = Vec::with_capacity(n);
        let mut errs = Vec::with_capacity(n);
        for i in 0..n {
            let base = i * dim * dim * 4;
            // nalgebra iterates column-major; rebuild in the same order
            let entry = |k: usize| &block[base + 4 * k..base + 4 * k + 4];
            rhos.push(CMatrix::from_iterator(
                dim,
                dim,
                (0..dim * dim).map(|k| Complex64::new(entry(k)[0] / nf, entry(k)[1] / nf)),
            ));
            errs.push(CMatrix::from_iterator(
                dim,
                dim,
                (0..dim * dim).map(|k| {
                    let e = entry(k);
                    Complex64::new(stderr_of(e[0], e[2]), stderr_of(e[1], e[3]))
                }),
            ));
        }
        let obs = &block[per - 2..];
        mean.push(obs[0] / nf);
        stderr.push(stderr_of(obs[0], obs[1]));
        component_rho.push(rhos);
        component_rho_stderr.push(errs);
    }
    Ok(EnsembleEstimate {
        grid: grid.to_vec(),
        component_rho,
        component_rho_stderr,
        mean,
        stderr,
        trajectories: n_traj,
        seed,
    })
}

/// Right-hand side of the generalized Lindblad equation at time `t`.
pub fn master_rhs(
    rhos: &[CMatrix],
    model: &GeneralizedLindbladModel,
    t: f64,
) -> Result<Vec<CMatrix>> {
    if model.clock() != HazardClock::Absolute {
        return Err(Error::InvalidArgument(
            "a master equation needs a hazard modulation on the absolute clock".into(),
        ));
    }
    let n = model.n_components();
    if rhos.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: rhos.len(),
        });
    }
    let dim = model.dim();
    if let Some(bad) = rhos.iter().find(|r| r.nrows() != dim || r.ncols() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: bad.nrows(),
        });
    }
    let g = Complex64::new(model.modulation().rate(t), 0.0);
    let minus_i = Complex64::new(0.0, -1.0);
    let half = Complex64::new(0.5, 0.0);
    let mut out: Vec<CMatrix> = (0..n)
        .map(|i| {
            let h = model.hamiltonian(i);
            let a = model.decay_operator(i);
            let rho = &rhos[i];
            (h * rho - rho * h) * minus_i - (a * rho + rho * a) * (half * g)
        })
        .collect();
    for label in model.channel_labels() {
        let rho_j = &rhos[label.source];
        for (i, slot) in out.iter_mut().enumerate() {
            if let Some(r) = model.jump_operator(i, label) {
                *slot += r * rho_j * r.adjoint() * g;
            }
        }
    }
    Ok(out)
}

fn rk4_solve(
    rho0: &[CMatrix],
    model: &GeneralizedLindbladModel,
    grid: &[f64],
    substeps: usize,
) -> Result<Vec<Vec<CMatrix>>> {
    let axpy = |x: &[CMatrix], k: &[CMatrix], h: f64| -> Vec<CMatrix> {
        x.iter()
            .zip(k)
            .map(|(a, b)| a + b * Complex64::new(h, 0.0))
            .collect()
    };
    let mut out = Vec::with_capacity(grid.len());
    let mut rho = rho0.to_vec();
    out.push(rho.clone());
    for w in grid.windows(2) {
        let h = (w[1] - w[0]) / substeps as f64;
        for s in 0..substeps {
            let t = w[0] + s as f64 * h;
            let k1 = master_rhs(&rho, model, t)?;
            let k2 = master_rhs(&axpy(&rho, &k1, 0.5 * h), model, t + 0.5 * h)?;
            let k3 = master_rhs(&axpy(&rho, &k2, 0.5 * h), model, t + 0.5 * h)?;
            let k4 = master_rhs(&axpy(&rho, &k3, h), model, t + h)?;
            for (i, r) in rho.iter_mut().enumerate() {
                *r += (&k1[i] + (&k2[i] + &k3[i]) * Complex64::new(2.0, 0.0) + &k4[i])
                    * Complex64::new(h / 6.0, 0.0);
            }
        }
        out.push(rho.clone());
    }
    Ok(out)
}

/// Integrates the master equation from `rho0` at `grid[0]` with RK4,
/// halving the step until no grid value moves by more than `1e-8`.
/// Returns `ρ_i` indexed `[time][component]`.
pub fn integrate_master(
    rho0: &[CMatrix],
    model: &GeneralizedLindbladModel,
    grid: &[f64],
) -> Result<Vec<Vec<CMatrix>>> {
    if grid.is_empty() {
        return Ok(Vec::new());
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument(
            "time grid must be strictly increasing".into(),
        ));
    }
    let mut substeps = 4;
    let mut previous = rk4_solve(rho0, model, grid, substeps)?;
    for _ in 0..MAX_HALVINGS {
        substeps *= 2;
        let refined = rk4_solve(rho0, model, grid, substeps)?;
        let change = previous
            .iter()
            .flatten()
            .zip(refined.iter().flatten())
            .map(|(a, b)| (a - b).camax())
            .fold(0.0, f64::max);
        if change < MASTER_TOL {
            return Ok(refined);
        }
        previous = refined;
    }
    Err(Error::StepUnderflow {
        halvings: MAX_HALVINGS,
    })
}
