//! Piecewise deterministic process unravelling a generalized Lindblad
//! equation
//!
//! ```text
//! dρ_i/dt = −i[H^i, ρ_i] + g(t) Σ_{jν} ( R^{ij}_ν ρ_j R^{ij}_ν† − ½{R^{ji}_ν† R^{ji}_ν, ρ_i} ).
//! ```
//!
//! A jump channel is labelled `(j, ν)`: its source component is `j` and it
//! carries one operator `R^{ij}_ν` per target component `i`. Firing the
//! channel replaces every component at once, `ψ_i ← R^{ij}_ν ψ_j / √M^j_ν`
//! with `M^j_ν = Σ_i ‖R^{ij}_ν ψ_j‖²`.
//!
//! Between jumps each component follows `dφ_i/dt = −iH^i φ_i − ½ g(t) A_i φ_i`
//! with `A_i = Σ_{jν} R^{ji}_ν† R^{ji}_ν`. This effective evolution does not
//! preserve the norm; the total squared norm is the probability that no
//! jump has happened yet, which is what the waiting-time sampler inverts.
//! Normalizing the drifted state gives the deterministic pieces of the
//! process.

mod model;
mod state;
mod trajectory;

pub use model::{
    ChannelLabel, GeneralizedLindbladModel, HazardClock, HazardModulation, ModelBuilder,
    Unmodulated,
};
pub use state::ComponentState;
pub use trajectory::{DriftOutcome, JumpEvent, Trajectory};
