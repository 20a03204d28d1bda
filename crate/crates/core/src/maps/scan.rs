//! Bifurcation scans: attractor samples and a coarse Lyapunov estimate
//! per control-parameter value.

use rayon::prelude::*;

use super::{MapError, MapSpec, SLOPE_FLOOR};

/// Attractor snapshot at one parameter value.
#[derive(Clone, Debug)]
pub struct ScanPoint {
    pub param: f64,
    /// `keep` consecutive post-transient iterates.
    pub samples: Vec<f64>,
    /// Mean log slope over the kept window; coarse by construction.
    pub lambda: f64,
    pub clamped: usize,
}

/// Sweep the control parameter of `spec` over `n_params` evenly spaced
/// values in `[lo, hi]`, settling `settle` iterates from `x0` and then
/// recording `keep` samples per value.
///
/// Parameter values are processed in parallel; results come back ordered
/// by parameter and do not depend on the schedule.
pub fn bifurcation_scan(
    spec: &MapSpec,
    lo: f64,
    hi: f64,
    n_params: usize,
    settle: usize,
    keep: usize,
    x0: f64,
) -> Result<Vec<ScanPoint>, MapError> {
    if !lo.is_finite() || !hi.is_finite() || lo > hi {
        return Err(MapError::InvalidRange { lo, hi });
    }
    if n_params == 0 || keep == 0 {
        return Err(MapError::EmptyOrbitRequest);
    }
    spec.with_control_parameter(lo).validate()?;
    spec.with_control_parameter(hi).validate()?;

    let params: Vec<f64> = if n_params == 1 {
        vec![lo]
    } else {
        let step = (hi - lo) / (n_params - 1) as f64;
        (0..n_params).map(|i| lo + step * i as f64).collect()
    };

    params
        .into_par_iter()
        .map(|param| {
            let map = spec.with_control_parameter(param).build()?;
            let mut state = map.init(x0)?;
            for i in 0..settle {
                state = map.step(state);
                map.check(state, i)?;
            }
            let mut samples = Vec::with_capacity(keep);
            let mut sum = 0.0;
            let mut clamped = 0usize;
            for i in 0..keep {
                state = map.step(state);
                map.check(state, settle + i)?;
                samples.push(map.observe(state));
                let slope = map.slope_abs(state);
                sum += if slope < SLOPE_FLOOR {
                    clamped += 1;
                    SLOPE_FLOOR.ln()
                } else {
                    slope.ln()
                };
            }
            Ok(ScanPoint {
                param,
                samples,
                lambda: sum / keep as f64,
                clamped,
            })
        })
        .collect()
}
