//! Nonlinear forecasting from a library of past patterns.
//!
//! A scalar series is delay-embedded into E-dimensional points; a
//! predictee's E+1 nearest library neighbours are tracked p steps ahead
//! and their exponentially weighted mean is the forecast. Comparing
//! predicted against observed values over many predictees gives the
//! correlation curve rho(T_p), whose decay pattern separates
//! low-dimensional chaos (accuracy falls with horizon) from uncorrelated
//! noise (accuracy flat and low) and periodicity plus noise (accuracy
//! flat and high). A global linear autoregression serves as the baseline
//! the nonlinear forecast must beat.

mod ar;
mod classify;
mod embed;
mod method;
mod rho;
mod search;
mod simplex;
mod synthetic;

pub use ar::{ar_rho_curve, fit_ar, ArModel};
pub use classify::{classify, Classification, ClassifyThresholds, Verdict};
pub use embed::{embed, Library};
pub use method::{method, method_names, ArBaselineMethod, ForecastMethod, SimplexMethod};
pub use rho::{pearson, rho_curve, RhoCurve, RhoPoint, MIN_PREDICTIONS};
pub use search::{grid_search, SearchResult};
pub use simplex::{simplex_predict, simplex_predict_detailed, Neighbor, SimplexPrediction};
pub use synthetic::{
    aggregate_series, logistic_ensemble, logistic_series, sine_series, uniform_noise_series,
    ComponentSpec,
};

use serde::Serialize;
use thiserror::Error;

use crate::maps::MapError;

#[derive(Debug, Error)]
pub enum ForecastError {
    #[error("invalid series '{label}': {reason}")]
    InvalidSeries { label: String, reason: String },
    #[error("series of length {len} too short for E={e}, tau={tau} (needs > {needed})")]
    SeriesTooShort {
        len: usize,
        e: usize,
        tau: usize,
        needed: usize,
    },
    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),
    #[error("only {eligible} eligible library points, need {needed}")]
    InsufficientNeighbors { eligible: usize, needed: usize },
    #[error("only {n} predictions at T_p={tp}, need at least {min}")]
    TooFewPredictions { tp: usize, n: usize, min: usize },
    #[error("series of length {len} too short to fit order-{order} autoregression")]
    OrderTooLarge { order: usize, len: usize },
    #[error("normal equations singular even after ridge fallback")]
    SingularSystem,
    #[error("rho curve spans T_p <= {p_max}, classification needs at least {min}")]
    CurveTooShort { p_max: usize, min: usize },
    #[error("no admissible (E, tau) pair in the search range")]
    NoAdmissiblePair,
    #[error("ensemble has no components")]
    EmptyEnsemble,
    #[error("unknown forecasting method '{0}'")]
    UnknownMethod(String),
    #[error(transparent)]
    Map(#[from] MapError),
}

/// A uniformly sampled scalar series with finite values.
#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    values: Vec<f64>,
    label: String,
}

impl Series {
    pub fn new(label: impl Into<String>, values: Vec<f64>) -> Result<Self, ForecastError> {
        let label = label.into();
        if values.len() < 2 {
            return Err(ForecastError::InvalidSeries {
                label,
                reason: format!("length {} < 2", values.len()),
            });
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(ForecastError::InvalidSeries {
                label,
                reason: format!("non-finite value {bad}"),
            });
        }
        Ok(Self { values, label })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false // length >= 2 by construction
    }
}

/// How the library and the out-of-sample predictees are drawn from one
/// series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Protocol {
    /// First half builds the library, second half is predicted.
    HalfSplitForward,
    /// Second half builds the library, first half is predicted.
    HalfSplitBackward,
    /// The whole series is the library; a +/- `exclusion` window around
    /// each predictee is removed from it.
    FullWithExclusion,
}

impl Protocol {
    pub fn name(&self) -> &'static str {
        match self {
            Protocol::HalfSplitForward => "half-split-forward",
            Protocol::HalfSplitBackward => "half-split-backward",
            Protocol::FullWithExclusion => "full-with-exclusion",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "half-split-forward" => Some(Protocol::HalfSplitForward),
            "half-split-backward" => Some(Protocol::HalfSplitBackward),
            "full-with-exclusion" => Some(Protocol::FullWithExclusion),
            _ => None,
        }
    }
}

/// Embedding parameters plus the out-of-sample protocol.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EmbeddingConfig {
    /// Embedding dimension.
    pub e: usize,
    /// Lag between delay coordinates, in steps.
    pub tau: usize,
    /// Half-width of the library window removed around each predictee
    /// (only meaningful under [`Protocol::FullWithExclusion`]).
    pub exclusion: usize,
    pub protocol: Protocol,
}

impl EmbeddingConfig {
    pub fn new(e: usize, tau: usize, exclusion: usize, protocol: Protocol) -> Self {
        Self {
            e,
            tau,
            exclusion,
            protocol,
        }
    }

    pub fn validate(&self) -> Result<(), ForecastError> {
        if self.e < 1 {
            return Err(ForecastError::InvalidEmbedding("E must be >= 1".into()));
        }
        if self.tau < 1 {
            return Err(ForecastError::InvalidEmbedding("tau must be >= 1".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_validation() {
        assert!(Series::new("ok", vec![1.0, 2.0]).is_ok());
        assert!(matches!(
            Series::new("short", vec![1.0]),
            Err(ForecastError::InvalidSeries { .. })
        ));
        assert!(matches!(
            Series::new("nan", vec![1.0, f64::NAN]),
            Err(ForecastError::InvalidSeries { .. })
        ));
    }

    #[test]
    fn protocol_names_round_trip() {
        for p in [
            Protocol::HalfSplitForward,
            Protocol::HalfSplitBackward,
            Protocol::FullWithExclusion,
        ] {
            assert_eq!(Protocol::parse(p.name()), Some(p));
        }
        assert_eq!(Protocol::parse("bogus"), None);
    }
}
