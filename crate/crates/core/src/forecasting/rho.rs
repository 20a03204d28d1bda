//! Correlation-vs-horizon curves: predicted against observed over all
//! out-of-sample predictees a protocol admits.

use rayon::prelude::*;

use super::embed::{embed, Library};
use super::simplex::simplex_predict;
use super::{EmbeddingConfig, ForecastError, Protocol, Series};

/// Fewest predictions per horizon for a rho value to be reported.
pub const MIN_PREDICTIONS: usize = 10;

#[derive(Clone, Copy, Debug)]
pub struct RhoPoint {
    pub tp: usize,
    /// Pearson correlation; `None` when the predictee set was degenerate
    /// (zero variance) at this horizon.
    pub rho: Option<f64>,
    pub n: usize,
}

#[derive(Clone, Debug)]
pub struct RhoCurve {
    pub points: Vec<RhoPoint>,
    /// Least-squares slope of `ln rho` against `T_p` over the initial run
    /// of positive correlations; `None` when fewer than two qualify.
    pub decay_rate: Option<f64>,
}

impl RhoCurve {
    pub fn from_points(points: Vec<RhoPoint>) -> Self {
        let decay_rate = decay_rate(&points);
        Self { points, decay_rate }
    }

    pub fn rho_at(&self, tp: usize) -> Option<f64> {
        self.points.iter().find(|p| p.tp == tp).and_then(|p| p.rho)
    }

    pub fn p_max(&self) -> usize {
        self.points.last().map(|p| p.tp).unwrap_or(0)
    }

    pub fn defined(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().filter_map(|p| p.rho)
    }
}

fn decay_rate(points: &[RhoPoint]) -> Option<f64> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for p in points {
        match p.rho {
            Some(r) if r > 0.0 => {
                xs.push(p.tp as f64);
                ys.push(r.ln());
            }
            _ => break,
        }
    }
    if xs.len() < 2 {
        return None;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Some(sxy / sxx)
}

/// Pearson correlation coefficient; `None` when either side has zero
/// variance or fewer than two samples.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    assert_eq!(x.len(), y.len());
    let n = x.len();
    if n < 2 {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for i in 0..n {
        let dx = x[i] - mx;
        let dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    // Rounding can push a perfect correlation an ulp past 1.
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// A one-shot scalar predictor with the simplex signature.
pub(crate) type PointPredictor =
    dyn Fn(&Library, &[f64], Option<usize>, usize, usize) -> Result<f64, ForecastError>;

/// Library segment and predictee admission for one protocol.
pub(crate) struct Split<'a> {
    pub library: Library,
    values: &'a [f64],
    first_q: usize,
    last_q_bound: usize, // exclusive, before subtracting the horizon
    pass_query_time: bool,
}

impl<'a> Split<'a> {
    pub fn new(values: &'a [f64], config: &EmbeddingConfig) -> Result<Self, ForecastError> {
        config.validate()?;
        let len = values.len();
        let mid = len / 2;
        let span = (config.e - 1) * config.tau;
        let (library, first_q, last_q_bound, pass_query_time) = match config.protocol {
            Protocol::HalfSplitForward => (
                embed(&values[..mid], config.e, config.tau)?,
                mid + span,
                len,
                false,
            ),
            Protocol::HalfSplitBackward => (
                embed(&values[mid..], config.e, config.tau)?,
                span,
                mid,
                false,
            ),
            Protocol::FullWithExclusion => (embed(values, config.e, config.tau)?, span, len, true),
        };
        Ok(Self {
            library,
            values,
            first_q,
            last_q_bound,
            pass_query_time,
        })
    }

    /// Predictee time indices with an observable `p`-step target.
    pub fn predictees(&self, p: usize) -> Vec<usize> {
        let hi = self.last_q_bound.saturating_sub(p);
        (self.first_q..hi).collect()
    }

    /// Predicted and observed value for predictee `q` at horizon `p`.
    pub fn predict(
        &self,
        q: usize,
        p: usize,
        exclusion: usize,
        predictor: &PointPredictor,
    ) -> Result<(f64, f64), ForecastError> {
        let e = self.library.e();
        let tau = self.library.tau();
        let query = Library::query_at(self.values, q, e, tau)
            .expect("predictee admission guarantees the query exists");
        let query_time = self.pass_query_time.then_some(q);
        let predicted = predictor(&self.library, &query, query_time, p, exclusion)?;
        Ok((predicted, self.values[q + p]))
    }
}

/// Simplex-projection correlation curve for horizons `1..=p_max`.
///
/// Predictees are evaluated independently (and in parallel); the curve is
/// a pure function of the series and configuration.
pub fn rho_curve(
    series: &Series,
    config: &EmbeddingConfig,
    p_max: usize,
) -> Result<RhoCurve, ForecastError> {
    let split = Split::new(series.values(), config)?;
    let mut points = Vec::with_capacity(p_max);
    for tp in 1..=p_max {
        let qs = split.predictees(tp);
        if qs.len() < MIN_PREDICTIONS {
            return Err(ForecastError::TooFewPredictions {
                tp,
                n: qs.len(),
                min: MIN_PREDICTIONS,
            });
        }
        let pairs: Vec<(f64, f64)> = qs
            .par_iter()
            .map(|&q| split.predict(q, tp, config.exclusion, &simplex_predict))
            .collect::<Result<_, _>>()?;
        let (predicted, observed): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        points.push(RhoPoint {
            tp,
            rho: pearson(&predicted, &observed),
            n: predicted.len(),
        });
    }
    Ok(RhoCurve::from_points(points))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forecasting::synthetic::{logistic_series, sine_series, uniform_noise_series};

    fn half_split(e: usize, tau: usize) -> EmbeddingConfig {
        EmbeddingConfig::new(e, tau, 0, Protocol::HalfSplitForward)
    }

    #[test]
    fn pearson_textbook_case() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        let y = [2.0, 4.0, 5.0, 4.0, 5.0];
        let rho = pearson(&x, &y).unwrap();
        assert!((rho - 6.0 / 60.0_f64.sqrt()).abs() < 1e-12);
        assert!(pearson(&x, &[1.0; 5]).is_none());
    }

    #[test]
    fn chaotic_series_loses_skill_with_horizon() {
        let series = logistic_series(4.0, 0.3, 1000, 100).unwrap();
        let curve = rho_curve(&series, &half_split(3, 1), 10).unwrap();
        let rho1 = curve.rho_at(1).unwrap();
        let rho10 = curve.rho_at(10).unwrap();
        assert!(rho1 >= 0.85, "rho(1) = {rho1}");
        assert!(rho10 <= rho1 - 0.3, "rho(10) = {rho10} vs rho(1) = {rho1}");
        assert!(curve.decay_rate.unwrap() < 0.0);
        for p in &curve.points {
            assert!(p.n >= MIN_PREDICTIONS);
        }
    }

    #[test]
    fn noise_has_no_skill_anywhere() {
        let series = uniform_noise_series(1000, 42).unwrap();
        let curve = rho_curve(&series, &half_split(3, 1), 10).unwrap();
        for p in &curve.points {
            let rho = p.rho.unwrap();
            assert!(rho.abs() < 0.15, "T_p={}: rho {rho}", p.tp);
        }
    }

    #[test]
    fn sine_keeps_skill_at_every_horizon() {
        let series = sine_series(1000, 20.0).unwrap();
        let curve = rho_curve(&series, &half_split(3, 1), 10).unwrap();
        for p in &curve.points {
            assert!(p.rho.unwrap() > 0.95, "T_p={}: {:?}", p.tp, p.rho);
        }
    }

    #[test]
    fn degenerate_predictees_are_flagged_not_fatal() {
        let series = Series::new("constant", vec![0.5; 200]).unwrap();
        let curve = rho_curve(&series, &half_split(2, 1), 5).unwrap();
        for p in &curve.points {
            assert!(p.rho.is_none());
            assert!(p.n >= MIN_PREDICTIONS);
        }
        assert!(curve.decay_rate.is_none());
    }

    #[test]
    fn too_short_series_rejected() {
        let series = Series::new("tiny", (0..30).map(|i| i as f64 * 0.01).collect()).unwrap();
        assert!(matches!(
            rho_curve(&series, &half_split(3, 1), 10),
            Err(ForecastError::TooFewPredictions { .. })
        ));
    }

    #[test]
    fn protocols_agree_on_a_predictable_signal() {
        let series = sine_series(600, 20.0).unwrap();
        for protocol in [
            Protocol::HalfSplitForward,
            Protocol::HalfSplitBackward,
            Protocol::FullWithExclusion,
        ] {
            let config = EmbeddingConfig::new(3, 1, 5, protocol);
            let curve = rho_curve(&series, &config, 5).unwrap();
            for p in &curve.points {
                assert!(p.rho.unwrap() > 0.95, "{}: {:?}", protocol.name(), p.rho);
            }
        }
    }

    #[test]
    fn decay_rate_recovers_a_known_slope() {
        let points: Vec<RhoPoint> = (1..=8)
            .map(|tp| RhoPoint {
                tp,
                rho: Some((-0.5 * tp as f64).exp()),
                n: 100,
            })
            .collect();
        let curve = RhoCurve::from_points(points);
        assert!((curve.decay_rate.unwrap() + 0.5).abs() < 1e-12);
    }

    #[test]
    fn rho_curve_is_deterministic() {
        let series = logistic_series(4.0, 0.3, 600, 100).unwrap();
        let config = EmbeddingConfig::new(3, 1, 4, Protocol::FullWithExclusion);
        let a = rho_curve(&series, &config, 6).unwrap();
        let b = rho_curve(&series, &config, 6).unwrap();
        for (x, y) in a.points.iter().zip(&b.points) {
            assert_eq!(x.rho.map(f64::to_bits), y.rho.map(f64::to_bits));
            assert_eq!(x.n, y.n);
        }
    }
}
