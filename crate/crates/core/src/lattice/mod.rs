//! Host-parasitoid coupled-map lattice.
//!
//! Each patch runs discrete-generation host-parasitoid dynamics with
//! random parasitoid search (escape probability `exp(-attack * P)`): the
//! single-patch map spirals outward and goes extinct, but fixed dispersal
//! fractions to the eight neighbouring patches let spirals, spatial
//! chaos, or static heterogeneous patterns persist depending on the
//! movement rates.
//!
//! Simulation state is kept in the scaled coordinates `h = attack*c*H`,
//! `p = attack*P`, in which the per-patch map reads `h' = r0 h e^(-p)`,
//! `p' = h (1 - e^(-p))` with no remaining parameters besides `r0`.
//! Runs with different `(attack, c)` therefore share one canonical
//! trajectory bit for bit and differ only in the output scaling, which
//! is what makes the scaling-conjugacy contract testable at 1e-9 over
//! long runs.

mod disperse;
mod dynamics;
mod regime;
mod render;
mod simulate;

pub use disperse::{disperse, Boundary, MOORE_OFFSETS};
pub use dynamics::{local_update, nb_equilibrium};
pub use regime::{
    classify_regime, RegimeLabel, RegimeMetrics, RegimeReport, RegimeThresholds, MIN_POST_TRANSIENT,
};
pub use render::render_frame;
pub use simulate::{simulate, LatticeState, RecordMode, RunRecord};

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("invalid patch parameters: {0}")]
    InvalidParams(String),
    #[error("invalid lattice configuration: {0}")]
    InvalidConfig(String),
    #[error("no positive equilibrium: r0 = {r0} must exceed 1")]
    NoEquilibrium { r0: f64 },
    #[error("non-finite or overflowing state at generation {generation}")]
    NonFiniteState { generation: usize },
    #[error("run supplies {post_transient} post-transient generations, need {needed}")]
    RunTooShort {
        post_transient: usize,
        needed: usize,
    },
}

/// Per-patch dynamics parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PatchParams {
    /// Host intrinsic reproductive rate.
    pub r0: f64,
    /// Parasitoid searching efficiency.
    pub attack: f64,
    /// Parasitoids emerging per parasitized host.
    pub c: f64,
}

impl PatchParams {
    pub fn new(r0: f64, attack: f64, c: f64) -> Result<Self, LatticeError> {
        let params = Self { r0, attack, c };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<(), LatticeError> {
        for (name, v) in [("r0", self.r0), ("attack", self.attack), ("c", self.c)] {
            if !v.is_finite() || v <= 0.0 {
                return Err(LatticeError::InvalidParams(format!(
                    "{name} = {v} must be positive"
                )));
            }
        }
        Ok(())
    }

    /// Scale factor between external host densities and canonical ones.
    pub(crate) fn host_scale(&self) -> f64 {
        self.attack * self.c
    }

    /// Scale factor between external parasitoid densities and canonical ones.
    pub(crate) fn parasitoid_scale(&self) -> f64 {
        self.attack
    }
}

/// Initial condition for the lattice.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum LatticeInit {
    /// `(h0, p0)` in one central patch, zeros elsewhere.
    CentralSeed { h0: f64, p0: f64 },
    /// Equilibrium densities times seeded uniform factors in `[lo, hi)`.
    UniformRandom { lo: f64, hi: f64, seed: u64 },
    /// Explicit external-unit grids, row-major.
    Explicit { h: Vec<f64>, p: Vec<f64> },
}

#[derive(Clone, Debug, Serialize)]
pub struct LatticeConfig {
    /// Side length in patches. `1` is the non-spatial single-patch
    /// baseline; otherwise at least 3 so the Moore neighbourhood is
    /// meaningful.
    pub n: usize,
    pub mu_h: f64,
    pub mu_p: f64,
    pub boundary: Boundary,
    pub init: LatticeInit,
    pub steps: usize,
    /// Extinction threshold on the global mean host density (external
    /// units); `None` selects `1e-10 * H*`.
    pub extinction_eps: Option<f64>,
}

impl LatticeConfig {
    pub fn validate(&self) -> Result<(), LatticeError> {
        if self.n == 0 || self.n == 2 {
            return Err(LatticeError::InvalidConfig(format!(
                "n = {} (use 1 for the single-patch baseline or >= 3 for a lattice)",
                self.n
            )));
        }
        for (name, mu) in [("mu_h", self.mu_h), ("mu_p", self.mu_p)] {
            if !(0.0..=1.0).contains(&mu) {
                return Err(LatticeError::InvalidConfig(format!(
                    "{name} = {mu} outside [0, 1]"
                )));
            }
        }
        if self.steps == 0 {
            return Err(LatticeError::InvalidConfig("steps must be >= 1".into()));
        }
        if let LatticeInit::Explicit { h, p } = &self.init {
            let cells = self.n * self.n;
            if h.len() != cells || p.len() != cells {
                return Err(LatticeError::InvalidConfig(format!(
                    "explicit init grids must hold {cells} cells"
                )));
            }
            if h.iter().chain(p).any(|v| !v.is_finite() || *v < 0.0) {
                return Err(LatticeError::InvalidConfig(
                    "explicit init grids must be finite and nonnegative".into(),
                ));
            }
        }
        Ok(())
    }
}

/// A square grid of nonnegative densities, row-major.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Grid {
    n: usize,
    data: Vec<f64>,
}

impl Grid {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                data.push(f(r, c));
            }
        }
        Self { n, data }
    }

    pub fn from_data(n: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), n * n);
        Self { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.n + c] = v;
    }

    pub fn mean(&self) -> f64 {
        self.total() / self.data.len() as f64
    }

    pub fn total(&self) -> f64 {
        self.data.iter().sum()
    }

    /// Population variance across patches.
    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.data
            .iter()
            .map(|v| (v - mean) * (v - mean))
            .sum::<f64>()
            / self.data.len() as f64
    }

    pub fn max_abs_diff(&self, other: &Grid) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn scaled(&self, factor: f64) -> Grid {
        Grid {
            n: self.n,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_validation() {
        assert!(PatchParams::new(2.0, 1.0, 1.0).is_ok());
        assert!(PatchParams::new(0.0, 1.0, 1.0).is_err());
        assert!(PatchParams::new(2.0, -1.0, 1.0).is_err());
        assert!(PatchParams::new(2.0, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn config_validation() {
        let base = LatticeConfig {
            n: 30,
            mu_h: 1.0,
            mu_p: 0.89,
            boundary: Boundary::Cyclic,
            init: LatticeInit::UniformRandom {
                lo: 0.9,
                hi: 1.1,
                seed: 42,
            },
            steps: 100,
            extinction_eps: None,
        };
        assert!(base.validate().is_ok());
        assert!(LatticeConfig {
            n: 1,
            ..base.clone()
        }
        .validate()
        .is_ok());
        assert!(LatticeConfig {
            n: 2,
            ..base.clone()
        }
        .validate()
        .is_err());
        assert!(LatticeConfig {
            mu_h: 1.2,
            ..base.clone()
        }
        .validate()
        .is_err());
        assert!(LatticeConfig {
            init: LatticeInit::Explicit {
                h: vec![1.0; 4],
                p: vec![0.5; 4]
            },
            ..base
        }
        .validate()
        .is_err());
    }

    #[test]
    fn grid_statistics() {
        let g = Grid::from_fn(2, |r, c| (r * 2 + c) as f64);
        assert_eq!(g.mean(), 1.5);
        assert_eq!(g.total(), 6.0);
        assert_eq!(g.variance(), 1.25);
        let shifted = g.scaled(2.0);
        assert_eq!(shifted.max_abs_diff(&g), 3.0);
    }
}
