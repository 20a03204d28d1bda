//! First-order difference-equation dynamics.
//!
//! A small family of interval maps (logistic, Ricker) behind the
//! [`DifferenceMap`] trait, plus the analyses built on orbit iteration:
//! Lyapunov exponents with optional local (windowed) estimates, the
//! predictability horizon, bifurcation scans over a control parameter,
//! and invariant-density histograms.

mod density;
mod family;
mod lyapunov;
mod scan;

pub use density::{
    arcsine_bin_masses, arcsine_transform, density_histogram, l1_distance, uniform_bin_masses,
    Histogram,
};
pub use family::{family, family_names, DifferenceMap, MapFamily, MapParams, MapSpec};
pub use lyapunov::{lyapunov, lyapunov_horizon, LyapunovEstimate};
pub use scan::{bifurcation_scan, ScanPoint};

use serde::Serialize;
use thiserror::Error;

/// Iterates discarded before any statistic when the caller does not say
/// otherwise; long enough to forget the approach to the attractor.
pub const DEFAULT_TRANSIENT: usize = 1000;

/// Default initial state for scans: avoids fixed points of the logistic
/// family and the superstable point 0.5.
pub const DEFAULT_X0: f64 = 0.3;

/// Slope magnitudes below this are clamped before taking logs, keeping
/// superstable orbits finite while preserving the sign of the estimate.
pub const SLOPE_FLOOR: f64 = 1e-300;

#[derive(Debug, Error)]
pub enum MapError {
    #[error("{map}: {detail}")]
    InvalidParameter { map: &'static str, detail: String },
    #[error("initial state {x0} outside the domain of the {map} map")]
    InvalidInitialState { map: &'static str, x0: f64 },
    #[error("non-finite state at iterate {index}")]
    NonFinite { index: usize },
    #[error("state {x} left the domain of the {map} map at iterate {index}")]
    DomainEscape {
        map: &'static str,
        x: f64,
        index: usize,
    },
    #[error("orbit length must be at least 1")]
    EmptyOrbitRequest,
    #[error("window {window} invalid for {n} iterates")]
    InvalidWindow { window: usize, n: usize },
    #[error("not chaotic: lambda = {lambda} is not positive, horizon undefined")]
    NotChaotic { lambda: f64 },
    #[error("epsilon {epsilon} outside (0, 1)")]
    InvalidEpsilon { epsilon: f64 },
    #[error("invalid scan range [{lo}, {hi}]")]
    InvalidRange { lo: f64, hi: f64 },
    #[error("orbit of {len} samples cannot fill {bins} bins")]
    OrbitTooShort { len: usize, bins: usize },
    #[error("histogram needs an interval with lo < hi, got [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("unknown map kind '{0}'")]
    UnknownKind(String),
}

/// A recorded trajectory: `samples[0]` is the first iterate after the
/// discarded transient.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Orbit {
    pub samples: Vec<f64>,
    pub x0: f64,
    pub transient: usize,
}

/// Iterate a map `n` steps past a discarded transient.
///
/// Deterministic: equal inputs give bit-identical orbits. Every iterate
/// is checked to stay finite and inside the map's invariant domain.
pub fn iterate(spec: &MapSpec, x0: f64, n: usize, transient: usize) -> Result<Orbit, MapError> {
    if n == 0 {
        return Err(MapError::EmptyOrbitRequest);
    }
    let map = spec.build()?;
    let mut state = map.init(x0)?;
    for i in 0..transient {
        state = map.step(state);
        map.check(state, i)?;
    }
    let mut samples = Vec::with_capacity(n);
    for i in 0..n {
        state = map.step(state);
        map.check(state, transient + i)?;
        samples.push(map.observe(state));
    }
    Ok(Orbit {
        samples,
        x0,
        transient,
    })
}
