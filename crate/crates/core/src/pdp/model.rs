use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::state::ComponentState;
use crate::error::{Error, Result};
use crate::numerics::{hermitian_eig, CMatrix, CVector, HermitianEigen, HermitianMatrix};

/// Scalar factor `g ≥ 0` multiplying every dissipative term.
pub trait HazardModulation: Send + Sync + fmt::Debug {
    /// `g` at clock reading `clock`.
    fn rate(&self, clock: f64) -> f64;
    /// `∫₀^clock g`.
    fn cumulative(&self, clock: f64) -> f64;
}

/// `g ≡ 1`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Unmodulated;

impl HazardModulation for Unmodulated {
    fn rate(&self, _clock: f64) -> f64 {
        1.0
    }

    fn cumulative(&self, clock: f64) -> f64 {
        clock
    }
}

/// What the modulation's clock measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HazardClock {
    /// Global simulation time.
    #[default]
    Absolute,
    /// Time elapsed since the last jump (or since the trajectory start).
    SinceLastJump,
}

/// Jump channel `(j, ν)`: source component `j`, operator index `ν`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ChannelLabel {
    pub source: usize,
    pub index: usize,
}

impl ChannelLabel {
    pub fn new(source: usize, index: usize) -> Self {
        Self { source, index }
    }
}

impl fmt::Display for ChannelLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.source, self.index)
    }
}

#[derive(Debug, Clone)]
pub(super) struct Channel {
    pub(super) label: ChannelLabel,
    /// `R^{ij}_ν` indexed by target `i`; `None` is the zero operator.
    pub(super) targets: Vec<Option<CMatrix>>,
    /// `Σ_i R^{ij}_ν† R^{ij}_ν`.
    pub(super) decay: CMatrix,
}

/// How one component's drift is propagated.
#[derive(Debug, Clone)]
pub(super) enum Drift {
    /// `H^i` and `A_i` commute, so the propagator factorizes into two
    /// Hermitian exponentials and is exact for any modulation.
    Closed {
        hamiltonian: Option<HermitianEigen>,
        decay: HermitianEigen,
    },
    /// Fixed-substep RK4.
    Stepped,
}

/// Generator of the generalized Lindblad equation together with the data
/// the trajectory engine needs: per-component decay operators and the
/// drift propagation plan.
#[derive(Debug, Clone)]
pub struct GeneralizedLindbladModel {
    dim: usize,
    hamiltonians: Vec<CMatrix>,
    pub(super) channels: Vec<Channel>,
    decay_ops: Vec<CMatrix>,
    pub(super) drifts: Vec<Drift>,
    modulation: Arc<dyn HazardModulation>,
    clock: HazardClock,
    pub(super) rk4_substep: f64,
}

#[derive(Debug, Clone)]
pub struct ModelBuilder {
    dim: usize,
    n: usize,
    hamiltonians: Vec<CMatrix>,
    jumps: BTreeMap<ChannelLabel, Vec<Option<CMatrix>>>,
    modulation: Arc<dyn HazardModulation>,
    clock: HazardClock,
    rk4_substep: f64,
    invalid: Option<String>,
}

impl ModelBuilder {
    /// `n` components of Hilbert-space dimension `dim`, all `H^i = 0`, no
    /// channels, `g ≡ 1`.
    pub fn new(n: usize, dim: usize) -> Self {
        Self {
            dim,
            n,
            hamiltonians: vec![CMatrix::zeros(dim, dim); n],
            jumps: BTreeMap::new(),
            modulation: Arc::new(Unmodulated),
            clock: HazardClock::Absolute,
            rk4_substep: 1e-2,
            invalid: None,
        }
    }

    pub fn hamiltonian(mut self, component: usize, h: CMatrix) -> Self {
        if component < self.n {
            self.hamiltonians[component] = h;
        } else {
            self.invalid = Some(format!(
                "Hamiltonian given for component {component} of {}",
                self.n
            ));
        }
        self
    }

    /// Adds `R^{target, source}_index`.
    pub fn jump(mut self, target: usize, source: usize, index: usize, op: CMatrix) -> Self {
        let n = self.n;
        if target >= n {
            self.invalid = Some(format!("jump target {target} outside 0..{n}"));
            return self;
        }
        let slot = self
            .jumps
            .entry(ChannelLabel::new(source, index))
            .or_insert_with(|| vec![None; n]);
        slot[target] = Some(op);
        self
    }

    pub fn modulation(mut self, modulation: Arc<dyn HazardModulation>, clock: HazardClock) -> Self {
        self.modulation = modulation;
        self.clock = clock;
        self
    }

    /// Substep for components whose drift has no closed form.
    pub fn rk4_substep(mut self, h: f64) -> Self {
        self.rk4_substep = h;
        self
    }

    pub fn build(self) -> Result<GeneralizedLindbladModel> {
        let (n, dim) = (self.n, self.dim);
        if n == 0 || dim == 0 {
            return Err(Error::InvalidModel(
                "need at least one component of positive dimension".into(),
            ));
        }
        if let Some(reason) = self.invalid {
            return Err(Error::InvalidModel(reason));
        }
        if !(self.rk4_substep > 0.0 && self.rk4_substep.is_finite()) {
            return Err(Error::InvalidModel("RK4 substep must be positive".into()));
        }
        let mut hamiltonian_eigs = Vec::with_capacity(n);
        for h in &self.hamiltonians {
            check_shape(h, dim)?;
            let herm = HermitianMatrix::new(h.clone())?;
            hamiltonian_eigs.push(if h.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
                None
            } else {
                Some(hermitian_eig(&herm)?)
            });
        }

        let mut channels = Vec::with_capacity(self.jumps.len());
        let mut decay_ops = vec![CMatrix::zeros(dim, dim); n];
        for (label, targets) in self.jumps {
            if label.source >= n {
                return Err(Error::InvalidModel(format!(
                    "channel {label} refers to a component outside 0..{n}"
                )));
            }
            let mut decay = CMatrix::zeros(dim, dim);
            for op in targets.iter().flatten() {
                check_shape(op, dim)?;
                decay += op.adjoint() * op;
            }
            decay_ops[label.source] += &decay;
            channels.push(Channel {
                label,
                targets,
                decay,
            });
        }
        // R†R sums are Hermitian up to rounding; symmetrize before diagonalizing.
        for a in decay_ops.iter_mut() {
            *a = (&*a + a.adjoint()) * Complex64::new(0.5, 0.0);
        }

        let mut drifts = Vec::with_capacity(n);
        for (h, (eig, a)) in self
            .hamiltonians
            .iter()
            .zip(hamiltonian_eigs.into_iter().zip(&decay_ops))
        {
            let commutator = (h * a - a * h).norm();
            let scale = h.norm() * a.norm();
            if commutator <= 1e-12 * scale.max(f64::MIN_POSITIVE) || eig.is_none() {
                drifts.push(Drift::Closed {
                    hamiltonian: eig,
                    decay: hermitian_eig(&HermitianMatrix::new(a.clone())?)?,
                });
            } else {
                drifts.push(Drift::Stepped);
            }
        }

        Ok(GeneralizedLindbladModel {
            dim,
            hamiltonians: self.hamiltonians,
            channels,
            decay_ops,
            drifts,
            modulation: self.modulation,
            clock: self.clock,
            rk4_substep: self.rk4_substep,
        })
    }
}

fn check_shape(m: &CMatrix, dim: usize) -> Result<()> {
    if m.nrows() != dim || m.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: if m.nrows() != dim {
                m.nrows()
            } else {
                m.ncols()
            },
        });
    }
    Ok(())
}

impl GeneralizedLindbladModel {
    pub fn builder(n: usize, dim: usize) -> ModelBuilder {
        ModelBuilder::new(n, dim)
    }

    pub fn n_components(&self) -> usize {
        self.hamiltonians.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hamiltonian(&self, i: usize) -> &CMatrix {
        &self.hamiltonians[i]
    }

    /// `A_i = Σ_{jν} R^{ji}_ν† R^{ji}_ν`.
    pub fn decay_operator(&self, i: usize) -> &CMatrix {
        &self.decay_ops[i]
    }

    /// Channel labels in lexicographic `(source, index)` order.
    pub fn channel_labels(&self) -> impl Iterator<Item = ChannelLabel> + '_ {
        self.channels.iter().map(|c| c.label)
    }

    /// `R^{target, label.source}_{label.index}`, if nonzero.
    pub fn jump_operator(&self, target: usize, label: ChannelLabel) -> Option<&CMatrix> {
        self.channel(label).ok()?.targets.get(target)?.as_ref()
    }

    pub fn modulation(&self) -> &dyn HazardModulation {
        self.modulation.as_ref()
    }

    pub fn clock(&self) -> HazardClock {
        self.clock
    }

    /// True when every component drifts in closed form.
    pub fn has_closed_form_drift(&self) -> bool {
        self.drifts
            .iter()
            .all(|d| matches!(d, Drift::Closed { .. }))
    }

    pub(super) fn channel(&self, label: ChannelLabel) -> Result<&Channel> {
        self.channels
            .binary_search_by(|c| c.label.cmp(&label))
            .map(|k| &self.channels[k])
            .map_err(|_| Error::UnknownChannel {
                source_component: label.source,
                label: label.index,
            })
    }

    /// Reading of the hazard clock at `time` for a trajectory whose last jump
    /// was at `last_jump`.
    pub fn clock_reading(&self, time: f64, last_jump: f64) -> f64 {
        match self.clock {
            HazardClock::Absolute => time,
            HazardClock::SinceLastJump => time - last_jump,
        }
    }

    pub(super) fn check_state(&self, state: &ComponentState) -> Result<()> {
        if state.n_components() != self.n_components() {
            return Err(Error::DimensionMismatch {
                expected: self.n_components(),
                found: state.n_components(),
            });
        }
        if state.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: state.dim(),
            });
        }
        Ok(())
    }

    /// `Σ_i ‖R^{ij}_ν ψ_j‖²` without the hazard modulation.
    pub(super) fn intrinsic_rate(&self, channel: &Channel, state: &ComponentState) -> f64 {
        let psi = state.component(channel.label.source);
        quadratic_form(&channel.decay, psi)
    }

    /// Rate `M^j_ν` of a channel at the given state, including `g`.
    pub fn channel_rate(&self, state: &ComponentState, label: ChannelLabel) -> Result<f64> {
        self.check_state(state)?;
        let channel = self.channel(label)?;
        let g = self
            .modulation
            .rate(self.clock_reading(state.time(), state.last_jump()));
        Ok(g * self.intrinsic_rate(channel, state))
    }

    /// Right-hand side of the effective drift for component `i`.
    pub(super) fn drift_rhs(&self, i: usize, clock: f64, phi: &CVector) -> CVector {
        let g = self.modulation.rate(clock);
        let h = &self.hamiltonians[i] * phi;
        let a = &self.decay_ops[i] * phi;
        h * Complex64::new(0.0, -1.0) - a * Complex64::new(0.5 * g, 0.0)
    }
}

/// `⟨ψ|A|ψ⟩` for Hermitian positive `A`, clamped at zero.
pub(super) fn quadratic_form(a: &CMatrix, psi: &CVector) -> f64 {
    psi.dotc(&(a * psi)).re.max(0.0)
}
