//! Two-level system coupled to two finite energy bands.
//!
//! Lower band: `N₁` levels evenly spread over width `δε`; upper band: `N₂`
//! levels, shifted by `ΔE`. Couplings are random with overall strength `λ`.
//! This module holds the relaxation rates, the squared-sinc environment
//! correlation `h(t)`, its integrals, the constant-rate (TCL2) and
//! time-dependent-rate (TCL2(t)) population formulas, and the jump models
//! for both coupling regimes.
//!
//! Basis convention for the system: index 0 is the excited state `|e⟩`,
//! index 1 the ground state `|g⟩`. Component 0 carries the excited-state
//! branch (`ψ₁`), component 1 the ground-state branch (`ψ₂`).

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{cin, find_root_increasing, gauss_legendre, sine_integral, CMatrix, CVector};
use crate::pdp::{ComponentState, GeneralizedLindbladModel, HazardClock, HazardModulation};

/// Physical configuration of the two-band model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoBandParams {
    /// Level distance of the two-state system.
    pub delta_e: f64,
    /// Width of each band.
    pub delta_eps: f64,
    pub n1: usize,
    pub n2: usize,
    /// Overall coupling strength.
    pub lambda: f64,
    pub seed: u64,
}

impl TwoBandParams {
    pub fn new(
        delta_e: f64,
        delta_eps: f64,
        n1: usize,
        n2: usize,
        lambda: f64,
        seed: u64,
    ) -> Result<Self> {
        let p = Self {
            delta_e,
            delta_eps,
            n1,
            n2,
            lambda,
            seed,
        };
        p.validate()?;
        Ok(p)
    }

    /// `ΔE = 1`, `δε = 0.31`, `N₁ = N₂ = 200` with the given coupling.
    pub fn reference(lambda: f64, seed: u64) -> Self {
        Self {
            delta_e: 1.0,
            delta_eps: 0.31,
            n1: 200,
            n2: 200,
            lambda,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta_eps > 0.0 && self.delta_eps.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "band width {} must be positive",
                self.delta_eps
            )));
        }
        if !self.delta_e.is_finite() {
            return Err(Error::InvalidArgument(
                "level distance must be finite".into(),
            ));
        }
        if self.n1 == 0 || self.n2 == 0 {
            return Err(Error::InvalidArgument(
                "band level counts must be at least 1".into(),
            ));
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "coupling {} must be nonnegative",
                self.lambda
            )));
        }
        Ok(())
    }
}

/// Relaxation rates `γ₁` (ground → excited) and `γ₂` (excited → ground).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePair {
    pub gamma1: f64,
    pub gamma2: f64,
}

impl RatePair {
    pub fn total(&self) -> f64 {
        self.gamma1 + self.gamma2
    }
}

/// Waiting-time law used in the strong-coupling regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SamplerConvention {
    /// Survival `exp(−2 r τ J(τ))` measured from the last jump.
    #[serde(rename = "printed", alias = "printed_f")]
    PrintedF,
    /// Survival `exp(−2 r ∫ J)` over global time, the cumulative hazard of
    /// the time-dependent master equation.
    #[default]
    #[serde(rename = "hazard_consistent", alias = "hazard")]
    HazardConsistent,
}

impl SamplerConvention {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::PrintedF => "printed",
            Self::HazardConsistent => "hazard_consistent",
        }
    }
}

/// `γ_{1,2} = 2πλ²N_{1,2}/δε`.
pub fn rates(params: &TwoBandParams) -> RatePair {
    let base = 2.0 * PI * params.lambda * params.lambda / params.delta_eps;
    RatePair {
        gamma1: base * params.n1 as f64,
        gamma2: base * params.n2 as f64,
    }
}

/// `h(t) = (δε/2π) sin²(δε t/2)/(δε t/2)²`.
pub fn correlation_h(t: f64, delta_eps: f64) -> f64 {
    let x = 0.5 * delta_eps * t;
    let sinc = if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    };
    delta_eps / (2.0 * PI) * sinc * sinc
}

/// `J(t) = ∫₀ᵗ h = (1/π)[Si(δε t) + (cos(δε t) − 1)/(δε t)]`.
pub fn integral_h(t: f64, delta_eps: f64) -> f64 {
    let x = delta_eps * t;
    if x == 0.0 {
        return 0.0;
    }
    let half = 0.5 * x;
    // (cos x − 1)/x without cancellation
    let cos_term = -2.0 * half.sin() * half.sin() / x;
    (sine_integral(x) + cos_term) / PI
}

/// `K(t) = ∫₀ᵗ J = (1/π)[t Si(δε t) + (cos(δε t) − 1)/δε − Cin(δε t)/δε]`.
pub fn integral_j(t: f64, delta_eps: f64) -> f64 {
    let x = delta_eps * t;
    if x == 0.0 {
        return 0.0;
    }
    if x < 1e-3 {
        // K = δε t²/(4π) (1 − x²/36 + …)
        return delta_eps * t * t / (4.0 * PI) * (1.0 - x * x / 36.0);
    }
    let half = 0.5 * x;
    let cos_term = -2.0 * half.sin() * half.sin();
    (t * sine_integral(x) + (cos_term - cin(x)) / delta_eps) / PI
}

/// `Γ(t) = 2(γ₁+γ₂) ∫₀ᵗ dt₁ ∫₀^{t₁} dt₂ h(t₁ − t₂)`, integrating the closed
/// form of `J` by adaptive quadrature.
pub fn gamma_capital(t: f64, params: &TwoBandParams) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "time {t} must be nonnegative"
        )));
    }
    let de = params.delta_eps;
    let inner = gauss_legendre(|s| integral_h(s, de), 0.0, t, 1e-13 * t.max(1.0))?;
    Ok(2.0 * rates(params).total() * inner)
}

/// Upper-level population under constant rates, starting with population
/// `rho0` in the excited branch and an empty ground branch:
/// `ρ₁₁(t) = ρ₁₁(0)[γ₁/(γ₁+γ₂) + γ₂/(γ₁+γ₂) e^{−(γ₁+γ₂)t}]`.
pub fn tcl2_rho11(t: f64, params: &TwoBandParams, rho0: f64) -> f64 {
    let r = rates(params);
    relax(rho0, r, r.total() * t)
}

/// As [`tcl2_rho11`] with the exponent replaced by `Γ(t)`.
pub fn tcl2t_rho11(t: f64, params: &TwoBandParams, rho0: f64) -> Result<f64> {
    let r = rates(params);
    Ok(relax(rho0, r, gamma_capital(t, params)?))
}

fn relax(rho0: f64, r: RatePair, exponent: f64) -> f64 {
    let total = r.total();
    if total == 0.0 {
        return rho0;
    }
    rho0 * (r.gamma1 / total + r.gamma2 / total * (-exponent).exp())
}

/// `g(t) = J(t)` on the global clock.
#[derive(Debug, Clone, Copy)]
pub struct MemoryKernel {
    pub delta_eps: f64,
}

impl HazardModulation for MemoryKernel {
    fn rate(&self, clock: f64) -> f64 {
        integral_h(clock.max(0.0), self.delta_eps)
    }

    fn cumulative(&self, clock: f64) -> f64 {
        integral_j(clock.max(0.0), self.delta_eps)
    }
}

/// Cumulative hazard `τ J(τ)` on the since-last-jump clock.
#[derive(Debug, Clone, Copy)]
pub struct PrintedKernel {
    pub delta_eps: f64,
}

impl HazardModulation for PrintedKernel {
    fn rate(&self, clock: f64) -> f64 {
        let tau = clock.max(0.0);
        integral_h(tau, self.delta_eps) + tau * correlation_h(tau, self.delta_eps)
    }

    fn cumulative(&self, clock: f64) -> f64 {
        let tau = clock.max(0.0);
        tau * integral_h(tau, self.delta_eps)
    }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `σ₊ = |e⟩⟨g|`.
pub fn sigma_plus() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(0.0), c(0.0)])
}

/// `σ₋ = |g⟩⟨e|`.
pub fn sigma_minus() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0.0), c(0.0), c(1.0), c(0.0)])
}

pub fn excited() -> CVector {
    CVector::from_vec(vec![c(1.0), c(0.0)])
}

pub fn ground() -> CVector {
    CVector::from_vec(vec![c(0.0), c(1.0)])
}

/// `ψ₁ = |e⟩`, `ψ₂ = 0` at `t = 0`.
pub fn initial_state() -> ComponentState {
    ComponentState::new(vec![excited(), CVector::zeros(2)], 0.0).expect("two-level initial state")
}

/// Constant-rate model: `R¹² = √γ₁ σ₊`, `R²¹ = √γ₂ σ₋`, `H¹ = H² = 0`.
pub fn build_weak_model(params: &TwoBandParams) -> Result<GeneralizedLindbladModel> {
    params.validate()?;
    let r = rates(params);
    GeneralizedLindbladModel::builder(2, 2)
        .jump(0, 1, 0, sigma_plus() * c(r.gamma1.sqrt()))
        .jump(1, 0, 0, sigma_minus() * c(r.gamma2.sqrt()))
        .build()
}

/// Time-dependent-rate model: `R¹² = √(2γ₁) σ₊`, `R²¹ = √(2γ₂) σ₋`, with the
/// dissipator modulated according to `convention`.
pub fn build_strong_model(
    params: &TwoBandParams,
    convention: SamplerConvention,
) -> Result<GeneralizedLindbladModel> {
    params.validate()?;
    let r = rates(params);
    let de = params.delta_eps;
    let builder = GeneralizedLindbladModel::builder(2, 2)
        .jump(0, 1, 0, sigma_plus() * c((2.0 * r.gamma1).sqrt()))
        .jump(1, 0, 0, sigma_minus() * c((2.0 * r.gamma2).sqrt()));
    let builder = match convention {
        SamplerConvention::HazardConsistent => builder.modulation(
            Arc::new(MemoryKernel { delta_eps: de }),
            HazardClock::Absolute,
        ),
        SamplerConvention::PrintedF => builder.modulation(
            Arc::new(PrintedKernel { delta_eps: de }),
            HazardClock::SinceLastJump,
        ),
    };
    builder.build()
}

/// Solves `cumulative(τ) = target` for a continuous nondecreasing
/// `cumulative` with `cumulative(0) = 0`. Returns `f64::INFINITY` when the
/// target is not reached before `1e15`.
pub fn invert_cumulative_hazard<F: Fn(f64) -> f64>(cumulative: F, target: f64) -> Result<f64> {
    if !(target >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "hazard target {target} must be nonnegative"
        )));
    }
    if target == 0.0 {
        return Ok(0.0);
    }
    if target.is_infinite() {
        return Ok(f64::INFINITY);
    }
    let mut hi = 1.0;
    while cumulative(hi) < target {
        hi *= 2.0;
        if hi > 1e15 {
            return Ok(f64::INFINITY);
        }
    }
    find_root_increasing(
        |t| cumulative(t) - target,
        0.0,
        hi,
        1e-13 * target.max(1e-300),
    )
}

/// Strong-coupling waiting time for a uniform draw `u`: the `τ` with
/// `F(τ) = u`, where `c₁ = ‖σ₋ψ₁‖²`, `c₂ = ‖σ₊ψ₂‖²` and exactly one of them
/// is positive. `t0` is the current global time (ignored by
/// [`SamplerConvention::PrintedF`], whose clock starts at the last jump).
pub fn sample_waiting_time_strong(
    u: f64,
    t0: f64,
    c1: f64,
    c2: f64,
    params: &TwoBandParams,
    convention: SamplerConvention,
) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "uniform draw {u} outside (0, 1)"
        )));
    }
    if !(c1 >= 0.0 && c2 >= 0.0) || (c1 > 0.0) == (c2 > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "exactly one of c1 = {c1}, c2 = {c2} must be positive"
        )));
    }
    let r = rates(params);
    let rate = r.gamma1 * c2 + r.gamma2 * c1;
    if rate == 0.0 {
        return Ok(f64::INFINITY);
    }
    let target = -(1.0 - u).ln() / (2.0 * rate);
    let de = params.delta_eps;
    match convention {
        SamplerConvention::PrintedF => {
            invert_cumulative_hazard(|tau| tau * integral_h(tau, de), target)
        }
        SamplerConvention::HazardConsistent => {
            let base = integral_j(t0, de);
            invert_cumulative_hazard(|tau| integral_j(t0 + tau, de) - base, target)
        }
    }
}
