//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each exported function computes one family of curves for the two-band
//! model with `ΔE = 1` and `N₁ = N₂ = n`. The `*_impl` functions hold the
//! logic and run natively as well.

use lindblad_pdp::ensemble::run_ensemble;
use lindblad_pdp::exact::exact_rho11_curve;
use lindblad_pdp::two_band::{
    build_strong_model, build_weak_model, initial_state, rates, tcl2_rho11, tcl2t_rho11,
    SamplerConvention, TwoBandParams,
};
use lindblad_pdp::{Error, Result};
use wasm_bindgen::prelude::*;

pub const MAX_POINTS: usize = 2000;
pub const MAX_TRAJECTORIES: usize = 20_000;
/// Largest band size the exact solver accepts in the browser.
pub const MAX_LEVELS: usize = 300;

/// A time grid with up to two curves on it.
#[wasm_bindgen]
#[derive(Debug, Clone, PartialEq)]
pub struct Curves {
    t: Vec<f64>,
    primary: Vec<f64>,
    secondary: Vec<f64>,
}

#[wasm_bindgen]
impl Curves {
    #[wasm_bindgen(getter)]
    pub fn t(&self) -> Vec<f64> {
        self.t.clone()
    }

    /// Main curve: `TCL2`, Monte Carlo mean or exact population.
    #[wasm_bindgen(getter)]
    pub fn primary(&self) -> Vec<f64> {
        self.primary.clone()
    }

    /// `TCL2(t)` for the closed forms, the standard error for Monte Carlo,
    /// empty for the exact curve.
    #[wasm_bindgen(getter)]
    pub fn secondary(&self) -> Vec<f64> {
        self.secondary.clone()
    }
}

/// Shared inputs of every demo operation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Setup {
    pub lambda: f64,
    pub levels: usize,
    pub delta_eps: f64,
    pub strong: bool,
    /// Non-positive selects the regime's default horizon.
    pub t_max: f64,
    pub points: usize,
    pub seed: u64,
}

impl Setup {
    fn params(&self) -> Result<TwoBandParams> {
        TwoBandParams::new(
            1.0,
            self.delta_eps,
            self.levels,
            self.levels,
            self.lambda,
            self.seed,
        )
    }

    /// The grid, defaulting to `60/δε` (strong) or `6/(γ₁+γ₂)` (weak).
    pub fn grid(&self) -> Result<Vec<f64>> {
        let params = self.params()?;
        if !(2..=MAX_POINTS).contains(&self.points) {
            return Err(Error::InvalidArgument(format!(
                "points must lie in 2..={MAX_POINTS}"
            )));
        }
        let t_max = if self.t_max > 0.0 {
            self.t_max
        } else if self.strong {
            60.0 / params.delta_eps
        } else {
            6.0 / rates(&params).total()
        };
        if !t_max.is_finite() {
            return Err(Error::InvalidArgument(
                "set a finite horizon for zero coupling".into(),
            ));
        }
        let last = (self.points - 1) as f64;
        Ok((0..self.points).map(|k| t_max * k as f64 / last).collect())
    }
}

pub fn closed_form_impl(setup: &Setup) -> Result<Curves> {
    let params = setup.params()?;
    let t = setup.grid()?;
    let primary = t.iter().map(|&s| tcl2_rho11(s, &params, 1.0)).collect();
    let secondary = t
        .iter()
        .map(|&s| tcl2t_rho11(s, &params, 1.0))
        .collect::<Result<_>>()?;
    Ok(Curves {
        t,
        primary,
        secondary,
    })
}

pub fn monte_carlo_impl(setup: &Setup, trajectories: usize, printed: bool) -> Result<Curves> {
    if !(1..=MAX_TRAJECTORIES).contains(&trajectories) {
        return Err(Error::InvalidArgument(format!(
            "trajectories must lie in 1..={MAX_TRAJECTORIES}"
        )));
    }
    let params = setup.params()?;
    let t = setup.grid()?;
    let model = if setup.strong {
        let convention = if printed {
            SamplerConvention::PrintedF
        } else {
            SamplerConvention::HazardConsistent
        };
        build_strong_model(&params, convention)?
    } else {
        build_weak_model(&params)?
    };
    let est = run_ensemble(&model, &initial_state(), &t, trajectories, setup.seed)?;
    Ok(Curves {
        t,
        primary: est.mean,
        secondary: est.stderr,
    })
}

pub fn exact_impl(setup: &Setup) -> Result<Curves> {
    if setup.levels > MAX_LEVELS {
        return Err(Error::InvalidArgument(format!(
            "at most {MAX_LEVELS} levels per band"
        )));
    }
    let params = setup.params()?;
    let t = setup.grid()?;
    let primary = exact_rho11_curve(&params, &t, 1)?;
    Ok(Curves {
        t,
        primary,
        secondary: Vec::new(),
    })
}

fn js(e: Error) -> JsError {
    JsError::new(&e.to_string())
}

#[allow(clippy::too_many_arguments)]
fn setup(
    lambda: f64,
    levels: usize,
    delta_eps: f64,
    strong: bool,
    t_max: f64,
    points: usize,
    seed: u64,
) -> Setup {
    Setup {
        lambda,
        levels,
        delta_eps,
        strong,
        t_max,
        points,
        seed,
    }
}

/// `TCL2` and `TCL2(t)` populations of the upper level.
#[wasm_bindgen(js_name = closedForm)]
pub fn closed_form(
    lambda: f64,
    levels: usize,
    delta_eps: f64,
    strong: bool,
    t_max: f64,
    points: usize,
) -> Result<Curves, JsError> {
    closed_form_impl(&setup(lambda, levels, delta_eps, strong, t_max, points, 0)).map_err(js)
}

/// Monte Carlo mean and standard error of the upper-level population.
#[allow(clippy::too_many_arguments)]
#[wasm_bindgen(js_name = monteCarlo)]
pub fn monte_carlo(
    lambda: f64,
    levels: usize,
    delta_eps: f64,
    strong: bool,
    printed: bool,
    t_max: f64,
    points: usize,
    trajectories: usize,
    seed: u64,
) -> Result<Curves, JsError> {
    monte_carlo_impl(
        &setup(lambda, levels, delta_eps, strong, t_max, points, seed),
        trajectories,
        printed,
    )
    .map_err(js)
}

/// Upper-level population from the exact Schrödinger evolution.
#[wasm_bindgen(js_name = exactEvolution)]
pub fn exact_evolution(
    lambda: f64,
    levels: usize,
    delta_eps: f64,
    strong: bool,
    t_max: f64,
    points: usize,
    seed: u64,
) -> Result<Curves, JsError> {
    exact_impl(&setup(
        lambda, levels, delta_eps, strong, t_max, points, seed,
    ))
    .map_err(js)
}
