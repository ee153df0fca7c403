//! Predator–prey system
//!
//! ```text
//! dN_L/dt = b_L·N_L·N_G − d_L·N_L
//! dN_G/dt = b_G·N_G − d_G·N_G·N_L
//! ```
//!
//! integrated with fixed-step classic RK4. Along exact trajectories the
//! first integral `V = b_L·N_G − d_L·ln N_G + d_G·N_L − b_G·ln N_L` is
//! constant; its drift measures integrator error.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("parameter `{name}` must be finite and positive, got {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("populations must be finite and non-negative, got N_L={n_l}, N_G={n_g}")]
    InvalidState { n_l: f64, n_g: f64 },
    #[error("step size must be finite and positive, got {0}")]
    InvalidStep(f64),
    #[error("{steps} steps exceeds the limit of {limit}")]
    TooManySteps { steps: usize, limit: usize },
    #[error("state became non-finite after sample {last_valid}")]
    NonFiniteState { last_valid: usize },
}

/// Upper bound on steps per simulation.
pub const MAX_STEPS: usize = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LvParams {
    /// Lion birth coupling, per gazelle per unit time.
    pub b_l: f64,
    /// Lion death rate.
    pub d_l: f64,
    /// Gazelle birth rate.
    pub b_g: f64,
    /// Gazelle death coupling, per lion per unit time.
    pub d_g: f64,
}

impl LvParams {
    pub fn new(b_l: f64, d_l: f64, b_g: f64, d_g: f64) -> Result<Self, DynamicsError> {
        for (name, value) in [("b_L", b_l), ("d_L", d_l), ("b_G", b_g), ("d_G", d_g)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(DynamicsError::InvalidParameter { name, value });
            }
        }
        Ok(LvParams { b_l, d_l, b_g, d_g })
    }
}

impl Default for LvParams {
    /// Multi-cycle oscillation around the fixed point (N_L, N_G) = (50, 100).
    fn default() -> Self {
        LvParams {
            b_l: 0.01,
            d_l: 1.0,
            b_g: 1.0,
            d_g: 0.02,
        }
    }
}

pub const DEFAULT_N_L0: f64 = 10.0;
pub const DEFAULT_N_G0: f64 = 200.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LvState {
    pub t: f64,
    #[serde(rename = "N_L")]
    pub n_l: f64,
    #[serde(rename = "N_G")]
    pub n_g: f64,
}

impl LvState {
    pub fn new(t: f64, n_l: f64, n_g: f64) -> Result<Self, DynamicsError> {
        if !(n_l.is_finite() && n_g.is_finite() && n_l >= 0.0 && n_g >= 0.0) || !t.is_finite() {
            return Err(DynamicsError::InvalidState { n_l, n_g });
        }
        Ok(LvState { t, n_l, n_g })
    }
}

/// `(dN_L/dt, dN_G/dt)`.
pub fn derivatives(state: &LvState, p: &LvParams) -> (f64, f64) {
    rhs(state.n_l, state.n_g, p)
}

fn rhs(n_l: f64, n_g: f64, p: &LvParams) -> (f64, f64) {
    (
        p.b_l * n_l * n_g - p.d_l * n_l,
        p.b_g * n_g - p.d_g * n_g * n_l,
    )
}

/// Interior fixed point `N_G* = d_L/b_L`, `N_L* = b_G/d_G`, at `t = 0`.
pub fn equilibrium(p: &LvParams) -> LvState {
    LvState {
        t: 0.0,
        n_l: p.b_g / p.d_g,
        n_g: p.d_l / p.b_l,
    }
}

/// The first integral, defined only while both populations are positive.
pub fn first_integral(state: &LvState, p: &LvParams) -> Option<f64> {
    (state.n_l > 0.0 && state.n_g > 0.0).then(|| {
        p.b_l * state.n_g - p.d_l * state.n_g.ln() + p.d_g * state.n_l - p.b_g * state.n_l.ln()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    #[serde(flatten)]
    pub state: LvState,
    #[serde(rename = "V")]
    pub v: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub params: LvParams,
    pub step: f64,
    pub samples: Vec<Sample>,
}

fn rk4_step(n_l: f64, n_g: f64, h: f64, p: &LvParams) -> (f64, f64) {
    let (k1l, k1g) = rhs(n_l, n_g, p);
    let (k2l, k2g) = rhs(n_l + 0.5 * h * k1l, n_g + 0.5 * h * k1g, p);
    let (k3l, k3g) = rhs(n_l + 0.5 * h * k2l, n_g + 0.5 * h * k2g, p);
    let (k4l, k4g) = rhs(n_l + h * k3l, n_g + h * k3g, p);
    (
        n_l + h / 6.0 * (k1l + 2.0 * k2l + 2.0 * k3l + k4l),
        n_g + h / 6.0 * (k1g + 2.0 * k2g + 2.0 * k3g + k4g),
    )
}

/// Integrates `steps` RK4 steps of size `h`, returning `steps + 1` samples
/// including the initial state. Sample times are `t0 + i·h`.
pub fn simulate(
    params: &LvParams,
    initial: &LvState,
    h: f64,
    steps: usize,
) -> Result<Trajectory, DynamicsError> {
    if !(h.is_finite() && h > 0.0) {
        return Err(DynamicsError::InvalidStep(h));
    }
    if steps > MAX_STEPS {
        return Err(DynamicsError::TooManySteps {
            steps,
            limit: MAX_STEPS,
        });
    }
    let start = LvState::new(initial.t, initial.n_l, initial.n_g)?;
    let mut samples = Vec::with_capacity(steps + 1);
    samples.push(Sample {
        state: start,
        v: first_integral(&start, params),
    });
    let (mut n_l, mut n_g) = (start.n_l, start.n_g);
    for i in 1..=steps {
        (n_l, n_g) = rk4_step(n_l, n_g, h, params);
        if !(n_l.is_finite() && n_g.is_finite()) {
            return Err(DynamicsError::NonFiniteState { last_valid: i - 1 });
        }
        let state = LvState {
            t: start.t + i as f64 * h,
            n_l,
            n_g,
        };
        samples.push(Sample {
            state,
            v: first_integral(&state, params),
        });
    }
    Ok(Trajectory {
        params: *params,
        step: h,
        samples,
    })
}

impl Trajectory {
    /// `max |V_i − V_0| / |V_0|` over samples where V is defined.
    pub fn max_relative_drift(&self) -> Option<f64> {
        let v0 = self.samples.first()?.v?;
        self.samples
            .iter()
            .filter_map(|s| s.v)
            .map(|v| ((v - v0) / v0).abs())
            .reduce(f64::max)
    }

    /// Indices of strict interior local maxima of one population.
    pub fn peaks(&self, species: Species) -> Vec<usize> {
        let x: Vec<f64> = self.samples.iter().map(|s| species.of(&s.state)).collect();
        (1..x.len().saturating_sub(1))
            .filter(|&i| x[i] > x[i - 1] && x[i] >= x[i + 1])
            .collect()
    }

    /// Pairs each prey peak with the first predator peak after it, stopping
    /// at the last prey peak that has a following predator peak. A cycle is
    /// consistent when no second prey peak intervenes.
    pub fn phase_cycles(&self) -> Vec<PhaseCycle> {
        let prey = self.peaks(Species::Prey);
        let predator = self.peaks(Species::Predator);
        let mut out = Vec::new();
        for (k, &g) in prey.iter().enumerate() {
            let Some(&l) = predator.iter().find(|&&l| l > g) else {
                break;
            };
            let next_prey = prey.get(k + 1).copied();
            out.push(PhaseCycle {
                prey_peak: g,
                predator_peak: l,
                lag_ok: next_prey.is_none_or(|n| l < n),
            });
        }
        out
    }

    /// True when every predator peak is preceded by a prey peak in the same
    /// cycle, i.e. peaks alternate prey, predator, prey, ...
    pub fn prey_leads_predator(&self) -> bool {
        let prey = self.peaks(Species::Prey);
        let predator = self.peaks(Species::Predator);
        let first_prey = match prey.first() {
            Some(&g) => g,
            None => return false,
        };
        let cycles = self.phase_cycles();
        !cycles.is_empty()
            && cycles.iter().all(|c| c.lag_ok)
            && predator.iter().filter(|&&l| l > first_prey).count() == cycles.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PhaseCycle {
    pub prey_peak: usize,
    pub predator_peak: usize,
    pub lag_ok: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Species {
    Predator,
    Prey,
}

impl Species {
    fn of(self, s: &LvState) -> f64 {
        match self {
            Species::Predator => s.n_l,
            Species::Prey => s.n_g,
        }
    }
}
