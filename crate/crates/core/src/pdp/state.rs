use crate::error::{Error, Result};
use crate::numerics::{CMatrix, CVector};

/// The component wave functions of one trajectory at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentState {
    components: Vec<CVector>,
    time: f64,
    last_jump: f64,
}

impl ComponentState {
    /// Starts a trajectory at `time`; the hazard clock of jump-anchored
    /// models counts from here until the first jump.
    pub fn new(components: Vec<CVector>, time: f64) -> Result<Self> {
        let dim = components.first().map(|c| c.len()).unwrap_or(0);
        if components.is_empty() || dim == 0 {
            return Err(Error::InvalidArgument(
                "state needs at least one non-empty component".into(),
            ));
        }
        if let Some(bad) = components.iter().find(|c| c.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.len(),
            });
        }
        Ok(Self {
            components,
            time,
            last_jump: time,
        })
    }

    pub(crate) fn from_parts(components: Vec<CVector>, time: f64, last_jump: f64) -> Self {
        Self {
            components,
            time,
            last_jump,
        }
    }

    pub fn components(&self) -> &[CVector] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &CVector {
        &self.components[i]
    }

    pub fn n_components(&self) -> usize {
        self.components.len()
    }

    pub fn dim(&self) -> usize {
        self.components[0].len()
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn last_jump(&self) -> f64 {
        self.last_jump
    }

    pub fn component_norm_sqr(&self, i: usize) -> f64 {
        self.components[i].norm_squared()
    }

    pub fn total_norm_sqr(&self) -> f64 {
        self.components.iter().map(|c| c.norm_squared()).sum()
    }

    /// Scales all components by a common factor so the total norm is one.
    /// Ratios between component norms are kept.
    pub fn normalized(&self) -> Result<Self> {
        let total = self.total_norm_sqr();
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "cannot normalize state with total norm² {total}"
            )));
        }
        let scale = 1.0 / total.sqrt();
        Ok(Self {
            components: self.components.iter().map(|c| c.scale(scale)).collect(),
            time: self.time,
            last_jump: self.last_jump,
        })
    }

    /// `|ψ_i⟩⟨ψ_i|`.
    pub fn projector(&self, i: usize) -> CMatrix {
        let c = &self.components[i];
        c * c.adjoint()
    }
}
