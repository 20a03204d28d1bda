//! Regime classification: extinct, static-heterogeneous, or
//! persistent-oscillatory, with the metrics behind the call.

use serde::Serialize;

use super::simulate::RunRecord;
use super::LatticeError;

/// Post-transient generations required before a non-extinct run can be
/// classified.
pub const MIN_POST_TRANSIENT: usize = 500;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct RegimeThresholds {
    /// Max per-patch one-generation host change for a run to count as
    /// static: crystal patterns are fixed points of the full spatial
    /// map, so the residual should sit at rounding noise.
    pub stasis_tolerance: f64,
    /// Leading fraction of the run discarded as transient.
    pub transient_fraction: f64,
}

impl Default for RegimeThresholds {
    fn default() -> Self {
        Self {
            stasis_tolerance: 1e-8,
            transient_fraction: 0.5,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegimeLabel {
    Extinct,
    StaticHeterogeneous,
    PersistentOscillatory,
}

impl RegimeLabel {
    pub fn name(&self) -> &'static str {
        match self {
            RegimeLabel::Extinct => "extinct",
            RegimeLabel::StaticHeterogeneous => "static-heterogeneous",
            RegimeLabel::PersistentOscillatory => "persistent-oscillatory",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RegimeMetrics {
    /// Variance of the global host mean over the post-transient window.
    pub temporal_variance: f64,
    /// Variance across patches of the final host grid.
    pub spatial_variance: f64,
    /// Max per-patch |H_{t+1} - H_t| over the post-transient window.
    pub stasis_residual: f64,
    /// Autocorrelation-peak estimate of the oscillation period, if any.
    pub dominant_period: Option<usize>,
    pub mean_h: f64,
    pub mean_p: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RegimeReport {
    pub label: RegimeLabel,
    pub metrics: RegimeMetrics,
}

/// Classify a finished run.
///
/// Extinction short-circuits (divergent single-patch runs end early);
/// otherwise the run must supply [`MIN_POST_TRANSIENT`] generations past
/// the transient. Spiral waves versus full spatial chaos are not
/// distinguished as labels; the metrics carry that information.
pub fn classify_regime(
    record: &RunRecord,
    thresholds: &RegimeThresholds,
) -> Result<RegimeReport, LatticeError> {
    let extinct = record.extinct_at.is_some()
        || record
            .mean_h
            .last()
            .is_some_and(|m| *m < record.extinction_eps);

    let generations = record.mean_h.len();
    let transient = (generations as f64 * thresholds.transient_fraction) as usize;
    let window = &record.mean_h[transient.min(generations - 1)..];

    if !extinct && window.len() < MIN_POST_TRANSIENT {
        return Err(LatticeError::RunTooShort {
            post_transient: window.len(),
            needed: MIN_POST_TRANSIENT,
        });
    }

    let mean_h = mean(window);
    let mean_p = mean(&record.mean_p[transient.min(record.mean_p.len() - 1)..]);
    let temporal_variance = variance(window);
    let spatial_variance = record.final_state.h.variance();
    let stasis_residual = record.host_delta[transient.min(record.host_delta.len())..]
        .iter()
        .fold(0.0f64, |m, v| m.max(*v));
    // A frozen pattern's mean series varies only by rounding noise; a
    // period estimated from that would be meaningless.
    let oscillating = temporal_variance.sqrt() > 1e-12 * mean_h.abs();
    let dominant_period = oscillating.then(|| dominant_period(window)).flatten();

    let label = if extinct {
        RegimeLabel::Extinct
    } else if stasis_residual < thresholds.stasis_tolerance && spatial_variance > 0.0 {
        RegimeLabel::StaticHeterogeneous
    } else {
        RegimeLabel::PersistentOscillatory
    };

    Ok(RegimeReport {
        label,
        metrics: RegimeMetrics {
            temporal_variance,
            spatial_variance,
            stasis_residual,
            dominant_period,
            mean_h,
            mean_p,
        },
    })
}

fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.iter().sum::<f64>() / values.len() as f64
}

fn variance(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let m = mean(values);
    values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / values.len() as f64
}

/// Lag of the strongest positive autocorrelation peak, if one stands out.
fn dominant_period(window: &[f64]) -> Option<usize> {
    if window.len() < 8 {
        return None;
    }
    let m = mean(window);
    let demeaned: Vec<f64> = window.iter().map(|v| v - m).collect();
    let denom: f64 = demeaned.iter().map(|v| v * v).sum();
    if denom == 0.0 {
        return None;
    }
    let max_lag = window.len() / 2;
    let mut best: Option<(usize, f64)> = None;
    for lag in 2..=max_lag {
        let acf: f64 = demeaned[lag..]
            .iter()
            .zip(&demeaned[..window.len() - lag])
            .map(|(a, b)| a * b)
            .sum::<f64>()
            / denom;
        if acf > 0.2 && best.is_none_or(|(_, b)| acf > b) {
            best = Some((lag, acf));
        }
    }
    best.map(|(lag, _)| lag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::simulate::{simulate, LatticeState, RecordMode};
    use crate::lattice::{Boundary, Grid, LatticeConfig, LatticeInit, PatchParams};

    fn synthetic_record(
        mean_h: Vec<f64>,
        host_delta: Vec<f64>,
        final_h: Grid,
        extinct_at: Option<usize>,
    ) -> RunRecord {
        let n = final_h.n();
        RunRecord {
            mean_p: vec![0.5; mean_h.len()],
            mean_h,
            parasitoid_delta: host_delta.clone(),
            host_delta,
            final_state: LatticeState {
                t: 0,
                h: final_h,
                p: Grid::zeros(n),
            },
            extinct_at,
            snapshots: Vec::new(),
            equilibrium: Some((2.0 * std::f64::consts::LN_2, std::f64::consts::LN_2)),
            extinction_eps: 1e-10,
        }
    }

    #[test]
    fn extinct_runs_short_circuit() {
        let record = synthetic_record(
            vec![1.0, 0.5, 1e-12],
            vec![0.5, 0.5],
            Grid::zeros(3),
            Some(2),
        );
        let report = classify_regime(&record, &RegimeThresholds::default()).unwrap();
        assert_eq!(report.label, RegimeLabel::Extinct);
    }

    #[test]
    fn static_heterogeneous_pattern() {
        let heterogeneous = Grid::from_fn(4, |r, c| 1.0 + 0.1 * ((r * 4 + c) as f64));
        let record = synthetic_record(vec![1.5; 2000], vec![1e-12; 1999], heterogeneous, None);
        let report = classify_regime(&record, &RegimeThresholds::default()).unwrap();
        assert_eq!(report.label, RegimeLabel::StaticHeterogeneous);
        assert!(report.metrics.spatial_variance > 0.0);
        assert!(report.metrics.stasis_residual < 1e-8);
    }

    #[test]
    fn oscillatory_series_with_period() {
        let mean_h: Vec<f64> = (0..2000)
            .map(|t| 1.5 + (t as f64 * std::f64::consts::TAU / 10.0).sin())
            .collect();
        let record = synthetic_record(
            mean_h,
            vec![0.3; 1999],
            Grid::from_fn(4, |r, _| r as f64),
            None,
        );
        let report = classify_regime(&record, &RegimeThresholds::default()).unwrap();
        assert_eq!(report.label, RegimeLabel::PersistentOscillatory);
        assert_eq!(report.metrics.dominant_period, Some(10));
        assert!(report.metrics.temporal_variance > 0.1);
    }

    #[test]
    fn short_runs_rejected() {
        let record = synthetic_record(
            vec![1.5; 100],
            vec![0.3; 99],
            Grid::from_fn(4, |r, _| r as f64),
            None,
        );
        assert!(matches!(
            classify_regime(&record, &RegimeThresholds::default()),
            Err(LatticeError::RunTooShort { .. })
        ));
    }

    #[test]
    fn real_extinct_run_classifies_extinct() {
        let params = PatchParams {
            r0: 2.0,
            attack: 1.0,
            c: 1.0,
        };
        let cfg = LatticeConfig {
            n: 1,
            mu_h: 0.0,
            mu_p: 0.0,
            boundary: Boundary::Cyclic,
            init: LatticeInit::Explicit {
                h: vec![1.4],
                p: vec![0.7],
            },
            steps: 100_000,
            extinction_eps: None,
        };
        let record = simulate(&cfg, &params, RecordMode::Summary).unwrap();
        let report = classify_regime(&record, &RegimeThresholds::default()).unwrap();
        assert_eq!(report.label, RegimeLabel::Extinct);
    }
}
