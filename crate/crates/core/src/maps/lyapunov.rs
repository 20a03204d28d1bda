//! Lyapunov exponent estimation and the predictability horizon.

use super::{MapError, MapSpec, SLOPE_FLOOR};

/// Mean log-slope of a map along its orbit, with an optional series of
/// sliding-window local estimates.
#[derive(Clone, Debug)]
pub struct LyapunovEstimate {
    /// Mean of `ln |dF/dx|` over the orbit, in nats per step.
    pub lambda: f64,
    pub n_iterates: usize,
    /// How many log terms hit the slope floor (superstable points).
    pub clamped: usize,
    /// Sliding-window means of the per-iterate log slopes, if requested.
    pub window_series: Option<Vec<f64>>,
}

/// Estimate the Lyapunov exponent of `spec` from `n` iterates following a
/// discarded transient.
///
/// Slope magnitudes below [`SLOPE_FLOOR`] are clamped before the log so
/// superstable orbits stay finite; the count of clamped terms is
/// reported. With `window = Some(w)` the per-iterate log slopes are also
/// averaged over every length-`w` sliding window, giving the local
/// exponent series.
pub fn lyapunov(
    spec: &MapSpec,
    x0: f64,
    n: usize,
    transient: usize,
    window: Option<usize>,
) -> Result<LyapunovEstimate, MapError> {
    if n == 0 {
        return Err(MapError::EmptyOrbitRequest);
    }
    if let Some(w) = window {
        if w == 0 || w > n {
            return Err(MapError::InvalidWindow { window: w, n });
        }
    }
    let map = spec.build()?;
    let mut state = map.init(x0)?;
    for i in 0..transient {
        state = map.step(state);
        map.check(state, i)?;
    }

    let mut sum = 0.0;
    let mut clamped = 0usize;
    let mut logs = window.map(|_| Vec::with_capacity(n));
    for i in 0..n {
        let slope = map.slope_abs(state);
        let term = if slope < SLOPE_FLOOR {
            clamped += 1;
            SLOPE_FLOOR.ln()
        } else {
            slope.ln()
        };
        sum += term;
        if let Some(ref mut logs) = logs {
            logs.push(term);
        }
        state = map.step(state);
        map.check(state, transient + i)?;
    }

    let window_series = match (window, logs) {
        (Some(w), Some(logs)) => Some(sliding_means(&logs, w)),
        _ => None,
    };

    Ok(LyapunovEstimate {
        lambda: sum / n as f64,
        n_iterates: n,
        clamped,
        window_series,
    })
}

fn sliding_means(values: &[f64], window: usize) -> Vec<f64> {
    let mut prefix = Vec::with_capacity(values.len() + 1);
    prefix.push(0.0);
    let mut acc = 0.0;
    for v in values {
        acc += v;
        prefix.push(acc);
    }
    (0..=values.len() - window)
        .map(|i| (prefix[i + window] - prefix[i]) / window as f64)
        .collect()
}

/// Steps until an initial uncertainty `epsilon` inflates to order one:
/// `ln(1/epsilon) / lambda`.
pub fn lyapunov_horizon(lambda: f64, epsilon: f64) -> Result<f64, MapError> {
    if lambda.is_nan() || lambda <= 0.0 {
        return Err(MapError::NotChaotic { lambda });
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(MapError::InvalidEpsilon { epsilon });
    }
    Ok((1.0 / epsilon).ln() / lambda)
}
