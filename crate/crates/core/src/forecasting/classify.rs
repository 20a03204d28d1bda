//! Verdict on a rho curve: does the skill decay like chaos, sit flat and
//! low like noise, or stay flat and high like periodicity plus noise?

use serde::Serialize;

use super::rho::RhoCurve;
use super::ForecastError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    ChaosLike,
    NoiseLike,
    PeriodicPlusNoise,
    Inconclusive,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::ChaosLike => "chaos-like",
            Verdict::NoiseLike => "noise-like",
            Verdict::PeriodicPlusNoise => "periodic-plus-noise",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Decision thresholds. These are conventions of this artifact, not
/// measured constants; adjust them per application.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ClassifyThresholds {
    /// Minimum rho(1) for the series to count as predictable at all.
    pub strong_rho: f64,
    /// Minimum drop rho(1) - rho(p_max) to call the decay chaotic.
    pub chaos_drop: f64,
    /// Curves entirely below this magnitude are noise.
    pub noise_ceiling: f64,
    /// Maximum rho range for a curve to count as flat.
    pub flat_range: f64,
}

impl Default for ClassifyThresholds {
    fn default() -> Self {
        Self {
            strong_rho: 0.5,
            chaos_drop: 0.3,
            noise_ceiling: 0.2,
            flat_range: 0.1,
        }
    }
}

/// Fewest horizons a curve must span to be classified.
pub const MIN_CURVE_SPAN: usize = 5;

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub rho_first: Option<f64>,
    pub rho_last: Option<f64>,
    pub max_abs_rho: f64,
    pub rho_range: f64,
    /// rho(1) of this curve minus rho(1) of the baseline, when given.
    pub nonlinear_advantage: Option<f64>,
}

/// Classify a rho curve, optionally against a linear baseline curve
/// (which only feeds the reported advantage, not the verdict).
pub fn classify(
    curve: &RhoCurve,
    baseline: Option<&RhoCurve>,
    thresholds: &ClassifyThresholds,
) -> Result<Classification, ForecastError> {
    let p_max = curve.p_max();
    if p_max < MIN_CURVE_SPAN {
        return Err(ForecastError::CurveTooShort {
            p_max,
            min: MIN_CURVE_SPAN,
        });
    }
    let defined: Vec<f64> = curve.defined().collect();
    let rho_first = curve.rho_at(1);
    let rho_last = curve.rho_at(p_max);
    let max_abs_rho = defined.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    let rho_range = if defined.is_empty() {
        0.0
    } else {
        let max = defined.iter().cloned().fold(f64::MIN, f64::max);
        let min = defined.iter().cloned().fold(f64::MAX, f64::min);
        max - min
    };

    let verdict = if defined.is_empty() {
        Verdict::Inconclusive
    } else if max_abs_rho < thresholds.noise_ceiling {
        Verdict::NoiseLike
    } else if matches!((rho_first, rho_last), (Some(first), Some(last))
        if first >= thresholds.strong_rho && first - last >= thresholds.chaos_drop)
    {
        Verdict::ChaosLike
    } else if rho_first.is_some_and(|first| first >= thresholds.strong_rho)
        && rho_range < thresholds.flat_range
    {
        Verdict::PeriodicPlusNoise
    } else {
        Verdict::Inconclusive
    };

    let nonlinear_advantage = match (rho_first, baseline.and_then(|b| b.rho_at(1))) {
        (Some(a), Some(b)) => Some(a - b),
        _ => None,
    };

    Ok(Classification {
        verdict,
        rho_first,
        rho_last,
        max_abs_rho,
        rho_range,
        nonlinear_advantage,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forecasting::rho::{rho_curve, RhoPoint};
    use crate::forecasting::synthetic::{logistic_series, sine_series, uniform_noise_series};
    use crate::forecasting::{EmbeddingConfig, Protocol};

    fn curve_of(rhos: &[f64]) -> RhoCurve {
        RhoCurve::from_points(
            rhos.iter()
                .enumerate()
                .map(|(i, &rho)| RhoPoint {
                    tp: i + 1,
                    rho: Some(rho),
                    n: 100,
                })
                .collect(),
        )
    }

    #[test]
    fn triptych_of_verdicts() {
        let config = EmbeddingConfig::new(3, 1, 0, Protocol::HalfSplitForward);
        let thresholds = ClassifyThresholds::default();

        let chaos = rho_curve(&logistic_series(4.0, 0.3, 1000, 100).unwrap(), &config, 10).unwrap();
        assert_eq!(
            classify(&chaos, None, &thresholds).unwrap().verdict,
            Verdict::ChaosLike
        );

        let noise = rho_curve(&uniform_noise_series(1000, 42).unwrap(), &config, 10).unwrap();
        assert_eq!(
            classify(&noise, None, &thresholds).unwrap().verdict,
            Verdict::NoiseLike
        );

        let periodic = rho_curve(&sine_series(1000, 20.0).unwrap(), &config, 10).unwrap();
        assert_eq!(
            classify(&periodic, None, &thresholds).unwrap().verdict,
            Verdict::PeriodicPlusNoise
        );
    }

    #[test]
    fn middling_curve_is_inconclusive() {
        let curve = curve_of(&[0.45, 0.40, 0.30, 0.25, 0.28, 0.30]);
        let c = classify(&curve, None, &ClassifyThresholds::default()).unwrap();
        assert_eq!(c.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn short_curves_rejected() {
        let curve = curve_of(&[0.9, 0.8]);
        assert!(matches!(
            classify(&curve, None, &ClassifyThresholds::default()),
            Err(ForecastError::CurveTooShort { .. })
        ));
    }

    #[test]
    fn baseline_feeds_the_advantage_only() {
        let curve = curve_of(&[0.95, 0.8, 0.6, 0.5, 0.4]);
        let baseline = curve_of(&[0.55, 0.5, 0.45, 0.42, 0.40]);
        let with = classify(&curve, Some(&baseline), &ClassifyThresholds::default()).unwrap();
        let without = classify(&curve, None, &ClassifyThresholds::default()).unwrap();
        assert_eq!(with.verdict, without.verdict);
        assert!((with.nonlinear_advantage.unwrap() - 0.4).abs() < 1e-12);
        assert!(without.nonlinear_advantage.is_none());
    }
}
