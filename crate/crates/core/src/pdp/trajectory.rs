use num_complex::Complex64;

use super::model::{Drift, GeneralizedLindbladModel};
use super::state::ComponentState;
use super::ChannelLabel;
use crate::error::{Error, Result};
use crate::numerics::{find_root_increasing, CVector, HermitianEigen, RngStream};

/// Tolerance for solving `survival(τ) = u`.
const ROOT_TOL: f64 = 1e-13;
/// Bracket expansion gives up beyond this waiting time.
const MAX_WAIT: f64 = 1e15;
/// Allowed relative norm growth in one RK4 substep.
const NORM_GROWTH_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpEvent {
    pub time: f64,
    pub channel: ChannelLabel,
}

/// Normalized states at each requested time plus the jump record.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub states: Vec<ComponentState>,
    pub jumps: Vec<JumpEvent>,
}

/// Result of drifting a normalized state until either its survival
/// probability reaches a threshold or a time horizon is hit.
#[derive(Debug, Clone)]
pub enum DriftOutcome {
    /// The survival reached the threshold after `tau`; `state` is the
    /// unnormalized drifted state at that instant.
    Jump { tau: f64, state: ComponentState },
    /// No jump before the (finite) horizon; `state` is unnormalized.
    Horizon(ComponentState),
    /// No jump ever, for an unbounded horizon.
    Never,
}

fn apply_spectral<F: Fn(f64) -> Complex64>(eig: &HermitianEigen, f: F, phi: &CVector) -> CVector {
    let u = &eig.eigenvectors;
    let mut coeffs = u.ad_mul(phi);
    for (c, &e) in coeffs.iter_mut().zip(&eig.eigenvalues) {
        *c *= f(e);
    }
    u * coeffs
}

impl GeneralizedLindbladModel {
    /// Advances every component by `dt` under the effective non-Hermitian
    /// generator, without renormalizing. The squared norm of the result,
    /// divided by that of the input, is the probability of no jump in `dt`.
    pub fn effective_drift_step(&self, state: &ComponentState, dt: f64) -> Result<ComponentState> {
        self.check_state(state)?;
        if !(dt >= 0.0) || !dt.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "drift step {dt} must be finite and nonnegative"
            )));
        }
        if dt == 0.0 {
            return Ok(state.clone());
        }
        let stepped = !self.has_closed_form_drift();
        let substeps = if stepped {
            (dt / self.rk4_substep).ceil().max(1.0) as usize
        } else {
            1
        };
        let h = dt / substeps as f64;
        let mut current = state.clone();
        for _ in 0..substeps {
            current = self.propagate(&current, h)?;
        }
        Ok(current)
    }

    /// One propagation piece: exact for closed-form components, a single RK4
    /// step for the others.
    fn propagate(&self, state: &ComponentState, tau: f64) -> Result<ComponentState> {
        let t0 = state.time();
        let last = state.last_jump();
        let c0 = self.clock_reading(t0, last);
        let modulation = self.modulation();
        let mut delta_g = None;
        let mut out = Vec::with_capacity(state.n_components());
        for (i, (drift, phi)) in self.drifts.iter().zip(state.components()).enumerate() {
            let next = match drift {
                Drift::Closed { hamiltonian, decay } => {
                    if phi.iter().all(|z| z.re == 0.0 && z.im == 0.0) {
                        phi.clone()
                    } else {
                        let dg = *delta_g.get_or_insert_with(|| {
                            modulation.cumulative(c0 + tau) - modulation.cumulative(c0)
                        });
                        let damped = apply_spectral(
                            decay,
                            |a| Complex64::new((-0.5 * dg * a).exp(), 0.0),
                            phi,
                        );
                        match hamiltonian {
                            Some(h) => {
                                apply_spectral(h, |e| Complex64::from_polar(1.0, -e * tau), &damped)
                            }
                            None => damped,
                        }
                    }
                }
                Drift::Stepped => {
                    let before = phi.norm_squared();
                    let next = self.rk4_step(i, c0, tau, phi);
                    let after = next.norm_squared();
                    if !after.is_finite()
                        || after > before * (1.0 + NORM_GROWTH_TOL) + f64::MIN_POSITIVE
                    {
                        return Err(Error::StepRejected {
                            time: t0,
                            reason: format!("component {i} norm² grew from {before:e} to {after:e}; reduce the RK4 substep"),
                        });
                    }
                    next
                }
            };
            out.push(next);
        }
        Ok(ComponentState::from_parts(out, t0 + tau, last))
    }

    fn rk4_step(&self, i: usize, clock: f64, h: f64, phi: &CVector) -> CVector {
        let half = Complex64::new(0.5 * h, 0.0);
        let full = Complex64::new(h, 0.0);
        let k1 = self.drift_rhs(i, clock, phi);
        let k2 = self.drift_rhs(i, clock + 0.5 * h, &(phi + &k1 * half));
        let k3 = self.drift_rhs(i, clock + 0.5 * h, &(phi + &k2 * half));
        let k4 = self.drift_rhs(i, clock + h, &(phi + &k3 * full));
        phi + (k1 + (k2 + k3) * Complex64::new(2.0, 0.0) + k4) * Complex64::new(h / 6.0, 0.0)
    }

    /// Drifts a normalized `state` until its survival probability drops to
    /// `u` or `horizon` elapses.
    pub fn drift_until(
        &self,
        state: &ComponentState,
        u: f64,
        horizon: f64,
    ) -> Result<DriftOutcome> {
        self.check_state(state)?;
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "survival threshold {u} outside (0, 1)"
            )));
        }
        if !(horizon >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "horizon {horizon} must be nonnegative"
            )));
        }
        let survival = |tau: f64| self.propagate(state, tau).map(|s| s.total_norm_sqr());

        if self.has_closed_form_drift() {
            let hi = if horizon.is_finite() {
                let end = self.propagate(state, horizon)?;
                if end.total_norm_sqr() > u {
                    return Ok(DriftOutcome::Horizon(end));
                }
                horizon
            } else {
                let rate: f64 = self
                    .channels
                    .iter()
                    .map(|c| self.intrinsic_rate(c, state))
                    .sum();
                let mut hi = if rate > 0.0 { 1.0 / rate } else { 1.0 };
                while survival(hi)? > u {
                    if hi > MAX_WAIT {
                        return Ok(DriftOutcome::Never);
                    }
                    hi *= 2.0;
                }
                hi
            };
            let mut failure = None;
            let tau = find_root_increasing(
                |t| match survival(t) {
                    Ok(s) => u - s,
                    Err(e) => {
                        failure.get_or_insert(e);
                        f64::NAN
                    }
                },
                0.0,
                hi,
                ROOT_TOL,
            )?;
            if let Some(e) = failure {
                return Err(e);
            }
            let at_jump = self.propagate(state, tau)?;
            return Ok(DriftOutcome::Jump {
                tau,
                state: at_jump,
            });
        }

        if !horizon.is_finite() {
            return Err(Error::InvalidArgument(
                "an unbounded horizon needs a closed-form drift".into(),
            ));
        }
        if horizon == 0.0 {
            return Ok(DriftOutcome::Horizon(state.clone()));
        }
        let substeps = (horizon / self.rk4_substep).ceil().max(1.0) as usize;
        let h = horizon / substeps as f64;
        let mut current = state.clone();
        let mut elapsed = 0.0;
        for _ in 0..substeps {
            let next = self.propagate(&current, h)?;
            if next.total_norm_sqr() <= u {
                let from = current.clone();
                let s = find_root_increasing(
                    |t| {
                        self.propagate(&from, t)
                            .map(|x| u - x.total_norm_sqr())
                            .unwrap_or(f64::NAN)
                    },
                    0.0,
                    h,
                    ROOT_TOL,
                )?;
                let at_jump = self.propagate(&from, s)?;
                return Ok(DriftOutcome::Jump {
                    tau: elapsed + s,
                    state: at_jump,
                });
            }
            elapsed += h;
            current = next;
        }
        Ok(DriftOutcome::Horizon(current))
    }

    /// Waiting time `τ` until the next jump, solving `survival(τ) = u` where
    /// the survival is the squared norm of the drifted (normalized) state.
    /// Returns `f64::INFINITY` when no jump occurs within `horizon`.
    pub fn sample_jump_time(&self, state: &ComponentState, u: f64, horizon: f64) -> Result<f64> {
        let state = state.normalized()?;
        if self.channels.is_empty() {
            return Ok(f64::INFINITY);
        }
        match self.drift_until(&state, u, horizon)? {
            DriftOutcome::Jump { tau, .. } => Ok(tau),
            DriftOutcome::Horizon(_) | DriftOutcome::Never => Ok(f64::INFINITY),
        }
    }

    /// Picks channel `(j, ν)` with probability `M^j_ν / Σ M`, scanning the
    /// channels in lexicographic order.
    pub fn select_channel(&self, state: &ComponentState, u: f64) -> Result<ChannelLabel> {
        self.check_state(state)?;
        let rates: Vec<f64> = self
            .channels
            .iter()
            .map(|c| self.intrinsic_rate(c, state))
            .collect();
        let total: f64 = rates.iter().sum();
        if !(total > 0.0) {
            return Err(Error::ZeroRateJump);
        }
        let target = u * total;
        let mut acc = 0.0;
        let mut last_positive = None;
        for (c, &r) in self.channels.iter().zip(&rates) {
            if r > 0.0 {
                last_positive = Some(c.label);
                acc += r;
                if acc > target {
                    return Ok(c.label);
                }
            }
        }
        last_positive.ok_or(Error::ZeroRateJump)
    }

    /// Fires channel `(j, ν)`: every component `i` becomes
    /// `R^{ij}_ν ψ_j / √M^j_ν`, evaluated on the pre-jump `ψ_j`.
    pub fn apply_jump(
        &self,
        state: &ComponentState,
        label: ChannelLabel,
    ) -> Result<ComponentState> {
        self.check_state(state)?;
        let channel = self.channel(label)?;
        let rate = self.intrinsic_rate(channel, state);
        if !(rate > 0.0) {
            return Err(Error::ZeroRateJump);
        }
        let scale = Complex64::new(1.0 / rate.sqrt(), 0.0);
        let source = state.component(label.source);
        let components = channel
            .targets
            .iter()
            .map(|op| match op {
                Some(r) => (r * source) * scale,
                None => CVector::zeros(self.dim()),
            })
            .collect();
        Ok(ComponentState::from_parts(
            components,
            state.time(),
            state.time(),
        ))
    }

    /// Runs one trajectory and records the normalized state at each time in
    /// `grid` (strictly increasing, starting at or after `initial.time()`).
    pub fn run_trajectory(
        &self,
        initial: &ComponentState,
        grid: &[f64],
        rng: &mut RngStream,
    ) -> Result<Trajectory> {
        let index = rng.index();
        self.run_trajectory_inner(initial, grid, rng)
            .map_err(|e| Error::Trajectory {
                index,
                source: Box::new(e),
            })
    }

    fn run_trajectory_inner(
        &self,
        initial: &ComponentState,
        grid: &[f64],
        rng: &mut RngStream,
    ) -> Result<Trajectory> {
        self.check_state(initial)?;
        if grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidArgument(
                "time grid must be strictly increasing".into(),
            ));
        }
        if grid.first().is_some_and(|&t| t < initial.time()) {
            return Err(Error::InvalidArgument(
                "time grid starts before the initial state".into(),
            ));
        }
        let norm = initial.total_norm_sqr();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "initial total norm² is {norm}, expected 1"
            )));
        }

        let mut state = initial.normalized()?;
        let mut states = Vec::with_capacity(grid.len());
        let mut jumps = Vec::new();
        // survival threshold relative to the current (normalized) state
        let mut threshold = rng.uniform();
        for &target in grid {
            loop {
                let horizon = target - state.time();
                if horizon <= 0.0 {
                    break;
                }
                match self.drift_until(&state, threshold, horizon)? {
                    DriftOutcome::Jump {
                        tau,
                        state: at_jump,
                    } => {
                        let mut pre = at_jump.normalized()?;
                        if state.time() + tau >= target {
                            // rounding put the jump on the grid point itself
                            pre = ComponentState::from_parts(
                                pre.components().to_vec(),
                                target,
                                pre.last_jump(),
                            );
                        }
                        let channel = self.select_channel(&pre, rng.uniform())?;
                        state = self.apply_jump(&pre, channel)?;
                        jumps.push(JumpEvent {
                            time: state.time(),
                            channel,
                        });
                        threshold = rng.uniform();
                    }
                    DriftOutcome::Horizon(end) => {
                        let survived = end.total_norm_sqr();
                        threshold /= survived;
                        state = end.normalized()?;
                        state = ComponentState::from_parts(
                            state.components().to_vec(),
                            target,
                            state.last_jump(),
                        );
                        break;
                    }
                    DriftOutcome::Never => unreachable!("finite horizon"),
                }
            }
            states.push(state.clone());
        }
        Ok(Trajectory { states, jumps })
    }
}
