//! Global linear autoregressive baseline.
//!
//! A least-squares AR(order) model with intercept, fitted on the
//! protocol's library segment and iterated forward for multi-step
//! forecasts. Singular normal equations fall back to a ridge solve with
//! `1e-8 * trace` added to the diagonal.

use rayon::prelude::*;

use super::rho::{pearson, RhoCurve, RhoPoint, MIN_PREDICTIONS};
use super::{ForecastError, Protocol, Series};

#[derive(Clone, Debug)]
pub struct ArModel {
    pub order: usize,
    /// `coeffs[j]` multiplies the value `j + 1` steps back.
    pub coeffs: Vec<f64>,
    pub intercept: f64,
    /// Whether the ridge fallback was needed.
    pub ridged: bool,
}

/// Fit an order-`order` autoregression to `values` by least squares.
pub fn fit_ar(values: &[f64], order: usize) -> Result<ArModel, ForecastError> {
    if order == 0 {
        return Err(ForecastError::InvalidEmbedding("order must be >= 1".into()));
    }
    if values.len() < 10 * order || values.len() < order + 2 {
        return Err(ForecastError::OrderTooLarge {
            order,
            len: values.len(),
        });
    }
    let dim = order + 1; // intercept plus lags
    let mut xtx = vec![vec![0.0; dim]; dim];
    let mut xty = vec![0.0; dim];
    for t in (order - 1)..(values.len() - 1) {
        let mut row = Vec::with_capacity(dim);
        row.push(1.0);
        for j in 0..order {
            row.push(values[t - j]);
        }
        let y = values[t + 1];
        for i in 0..dim {
            for j in 0..dim {
                xtx[i][j] += row[i] * row[j];
            }
            xty[i] += row[i] * y;
        }
    }

    let (beta, ridged) = match solve(xtx.clone(), xty.clone()) {
        Some(beta) => (beta, false),
        None => {
            let trace: f64 = (0..dim).map(|i| xtx[i][i]).sum();
            let ridge = 1e-8 * trace;
            let mut damped = xtx;
            for (i, row) in damped.iter_mut().enumerate() {
                row[i] += ridge;
            }
            let beta = solve(damped, xty).ok_or(ForecastError::SingularSystem)?;
            (beta, true)
        }
    };

    Ok(ArModel {
        order,
        intercept: beta[0],
        coeffs: beta[1..].to_vec(),
        ridged,
    })
}

/// Gaussian elimination with partial pivoting; `None` on a singular
/// system.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    let scale = a
        .iter()
        .flat_map(|row| row.iter())
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(1.0);
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        if a[pivot_row][col].abs() <= 1e-12 * scale {
            return None;
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        let pivot = a[col].clone();
        for row in col + 1..n {
            let factor = a[row][col] / pivot[col];
            for (k, pv) in pivot.iter().enumerate().skip(col) {
                a[row][k] -= factor * pv;
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for col in (0..n).rev() {
        let mut acc = b[col];
        for k in col + 1..n {
            acc -= a[col][k] * x[k];
        }
        x[col] = acc / a[col][col];
    }
    Some(x)
}

impl ArModel {
    /// Forecast `p` steps past the end of `history` (most recent value
    /// last), feeding predictions back in for multi-step horizons.
    pub fn forecast(&self, history: &[f64], p: usize) -> f64 {
        assert!(history.len() >= self.order, "history shorter than order");
        let mut window: Vec<f64> = history[history.len() - self.order..].to_vec();
        let mut next = 0.0;
        for _ in 0..p {
            next = self.intercept;
            for j in 0..self.order {
                next += self.coeffs[j] * window[window.len() - 1 - j];
            }
            window.remove(0);
            window.push(next);
        }
        next
    }
}

/// Correlation curve of the AR baseline under the same protocol and rho
/// machinery as the simplex forecaster.
///
/// The model is fitted once on the protocol's library segment; an
/// exclusion window has no analogue for a global fit, so under
/// `FullWithExclusion` it is simply ignored.
pub fn ar_rho_curve(
    series: &Series,
    order: usize,
    protocol: Protocol,
    p_max: usize,
) -> Result<RhoCurve, ForecastError> {
    let values = series.values();
    let len = values.len();
    let mid = len / 2;
    let (fit_segment, first_q, last_q_bound): (&[f64], usize, usize) = match protocol {
        Protocol::HalfSplitForward => (&values[..mid], mid + order - 1, len),
        Protocol::HalfSplitBackward => (&values[mid..], order - 1, mid),
        Protocol::FullWithExclusion => (values, order - 1, len),
    };
    let model = fit_ar(fit_segment, order)?;

    let mut points = Vec::with_capacity(p_max);
    for tp in 1..=p_max {
        let hi = last_q_bound.saturating_sub(tp);
        let qs: Vec<usize> = (first_q..hi).collect();
        if qs.len() < MIN_PREDICTIONS {
            return Err(ForecastError::TooFewPredictions {
                tp,
                n: qs.len(),
                min: MIN_PREDICTIONS,
            });
        }
        let pairs: Vec<(f64, f64)> = qs
            .par_iter()
            .map(|&q| {
                let history = &values[q + 1 - order..=q];
                (model.forecast(history, tp), values[q + tp])
            })
            .collect();
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
    use crate::forecasting::rho::rho_curve;
    use crate::forecasting::synthetic::{logistic_series, sine_series};
    use crate::forecasting::EmbeddingConfig;
    use crate::runio::RngStream;

    /// AR(1) with uniform innovations, burned in.
    fn ar1_series(phi: f64, noise_amp: f64, len: usize, seed: u64) -> Series {
        let stream = RngStream::new(seed, 77);
        let mut x = 0.0;
        let mut values = Vec::with_capacity(len);
        for i in 0..(len + 200) {
            x = phi * x + noise_amp * (stream.at(i as u64) - 0.5);
            if i >= 200 {
                values.push(x);
            }
        }
        Series::new("ar1", values).unwrap()
    }

    #[test]
    fn recovers_ar1_coefficient() {
        let series = ar1_series(0.9, 0.5, 4000, 5);
        let model = fit_ar(series.values(), 1).unwrap();
        assert!((model.coeffs[0] - 0.9).abs() < 0.05, "{:?}", model.coeffs);
        assert!(!model.ridged);
    }

    #[test]
    fn ar1_baseline_matches_simplex_on_linear_data() {
        let series = ar1_series(0.9, 0.5, 1000, 5);
        let ar = ar_rho_curve(&series, 1, Protocol::HalfSplitForward, 5).unwrap();
        let config = EmbeddingConfig::new(3, 1, 0, Protocol::HalfSplitForward);
        let simplex = rho_curve(&series, &config, 5).unwrap();
        let a = ar.rho_at(1).unwrap();
        let s = simplex.rho_at(1).unwrap();
        // Linear dynamics: the linear baseline is as good as it gets.
        assert!((a - s).abs() <= 0.05, "ar {a} vs simplex {s}");
        assert!((a - 0.9).abs() < 0.1, "ar(1) skill {a}");
    }

    #[test]
    fn sine_satisfies_a_two_term_recurrence() {
        let series = sine_series(1000, 20.0).unwrap();
        for order in [2usize, 3] {
            let curve = ar_rho_curve(&series, order, Protocol::HalfSplitForward, 10).unwrap();
            for p in &curve.points {
                assert!(p.rho.unwrap() > 0.95, "order {order} T_p {}", p.tp);
            }
        }
    }

    #[test]
    fn chaotic_series_beats_the_linear_baseline() {
        let series = logistic_series(4.0, 0.3, 1000, 100).unwrap();
        let ar = ar_rho_curve(&series, 3, Protocol::HalfSplitForward, 5).unwrap();
        let config = EmbeddingConfig::new(3, 1, 0, Protocol::HalfSplitForward);
        let simplex = rho_curve(&series, &config, 5).unwrap();
        let advantage = simplex.rho_at(1).unwrap() - ar.rho_at(1).unwrap();
        assert!(advantage >= 0.2, "nonlinear advantage {advantage}");
    }

    #[test]
    fn constant_series_takes_the_ridge_path() {
        let values = vec![0.25; 200];
        let model = fit_ar(&values, 2).unwrap();
        assert!(model.ridged);
        // Prediction still reproduces the constant closely.
        let next = model.forecast(&[0.25, 0.25], 1);
        assert!((next - 0.25).abs() < 1e-6, "{next}");
    }

    #[test]
    fn preconditions_enforced() {
        assert!(matches!(
            fit_ar(&[1.0, 2.0, 3.0], 0),
            Err(ForecastError::InvalidEmbedding(_))
        ));
        assert!(matches!(
            fit_ar(&[1.0; 25], 3),
            Err(ForecastError::OrderTooLarge { .. })
        ));
    }
}
