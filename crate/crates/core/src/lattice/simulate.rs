//! Generation loop: per-patch dynamics, then host dispersal, then
//! parasitoid dispersal, with summary series and optional snapshots.

use rayon::prelude::*;
use serde::Serialize;

use crate::runio::{streams, RngStream};

use super::disperse::disperse;
use super::dynamics::local_update;
use super::{Grid, LatticeConfig, LatticeError, LatticeInit, PatchParams};

/// Densities above this abort the run as effectively divergent.
const OVERFLOW_LIMIT: f64 = 1e300;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RecordMode {
    Summary,
    /// Keep a state snapshot at every multiple of the given stride.
    FramesEvery(usize),
}

/// Lattice state in external units at generation `t`.
#[derive(Clone, Debug, Serialize)]
pub struct LatticeState {
    pub t: usize,
    pub h: Grid,
    pub p: Grid,
}

#[derive(Clone, Debug)]
pub struct RunRecord {
    /// Global mean host density per generation, starting at t = 0.
    pub mean_h: Vec<f64>,
    pub mean_p: Vec<f64>,
    /// Max per-patch |H_{t+1} - H_t| for the transition recorded at index t.
    pub host_delta: Vec<f64>,
    pub parasitoid_delta: Vec<f64>,
    pub final_state: LatticeState,
    /// Generation at which the global host mean fell below the threshold.
    pub extinct_at: Option<usize>,
    pub snapshots: Vec<LatticeState>,
    /// External-unit equilibrium `(H*, P*)` when `r0 > 1`.
    pub equilibrium: Option<(f64, f64)>,
    /// Resolved extinction threshold, external units.
    pub extinction_eps: f64,
}

/// Run the coupled-map lattice.
///
/// Each generation applies the within-patch map everywhere, then
/// disperses hosts with `mu_h` and parasitoids with `mu_p`. The run is a
/// pure function of its configuration; random initialization draws from
/// the counter-based stream keyed by cell index, so thread scheduling
/// cannot leak in. Densities driven past `1e300` or to non-finite values
/// abort with the offending generation.
pub fn simulate(
    config: &LatticeConfig,
    params: &PatchParams,
    record: RecordMode,
) -> Result<RunRecord, LatticeError> {
    config.validate()?;
    params.validate()?;
    let host_scale = params.host_scale();
    let parasitoid_scale = params.parasitoid_scale();

    // Canonical equilibrium of h' = r0 h e^{-p}, p' = h (1 - e^{-p}).
    let canonical_equilibrium = if params.r0 > 1.0 {
        let ln_r0 = params.r0.ln();
        Some((params.r0 * ln_r0 / (params.r0 - 1.0), ln_r0))
    } else {
        None
    };
    let canonical_params = PatchParams {
        r0: params.r0,
        attack: 1.0,
        c: 1.0,
    };

    let (mut h, mut p) = init_grids(
        config,
        params.r0,
        host_scale,
        parasitoid_scale,
        canonical_equilibrium,
    )?;

    let eps_canonical = match config.extinction_eps {
        Some(eps) => eps * host_scale,
        None => {
            1e-10
                * canonical_equilibrium
                    .map(|(h_star, _)| h_star)
                    .unwrap_or(h.mean())
        }
    };

    let to_external = |t: usize, h: &Grid, p: &Grid| LatticeState {
        t,
        h: h.scaled(1.0 / host_scale),
        p: p.scaled(1.0 / parasitoid_scale),
    };

    let mut mean_h = vec![h.mean() / host_scale];
    let mut mean_p = vec![p.mean() / parasitoid_scale];
    let mut host_delta = Vec::with_capacity(config.steps);
    let mut parasitoid_delta = Vec::with_capacity(config.steps);
    let mut snapshots = Vec::new();
    let stride = match record {
        RecordMode::Summary => None,
        RecordMode::FramesEvery(k) => {
            if k == 0 {
                return Err(LatticeError::InvalidConfig(
                    "frame stride must be >= 1".into(),
                ));
            }
            snapshots.push(to_external(0, &h, &p));
            Some(k)
        }
    };

    let mut extinct_at = None;
    for t in 1..=config.steps {
        let (next_h, next_p) = step_patches(&h, &p, &canonical_params);
        let next_h = disperse(&next_h, config.mu_h, config.boundary);
        let next_p = disperse(&next_p, config.mu_p, config.boundary);

        let worst = next_h
            .data()
            .iter()
            .chain(next_p.data())
            .fold(0.0f64, |m, v| m.max(v.abs()));
        if !worst.is_finite() || worst > OVERFLOW_LIMIT {
            return Err(LatticeError::NonFiniteState { generation: t });
        }

        host_delta.push(next_h.max_abs_diff(&h) / host_scale);
        parasitoid_delta.push(next_p.max_abs_diff(&p) / parasitoid_scale);
        h = next_h;
        p = next_p;
        mean_h.push(h.mean() / host_scale);
        mean_p.push(p.mean() / parasitoid_scale);

        if let Some(k) = stride {
            if t % k == 0 {
                snapshots.push(to_external(t, &h, &p));
            }
        }

        if h.mean() < eps_canonical {
            extinct_at = Some(t);
            break;
        }
    }

    let final_t = mean_h.len() - 1;
    Ok(RunRecord {
        mean_h,
        mean_p,
        host_delta,
        parasitoid_delta,
        final_state: to_external(final_t, &h, &p),
        extinct_at,
        snapshots,
        equilibrium: canonical_equilibrium
            .map(|(h_star, p_star)| (h_star / host_scale, p_star / parasitoid_scale)),
        extinction_eps: eps_canonical / host_scale,
    })
}

/// Apply the within-patch map to every cell; rows in parallel, output a
/// pure function of the input grids.
fn step_patches(h: &Grid, p: &Grid, canonical: &PatchParams) -> (Grid, Grid) {
    let n = h.n();
    let pairs: Vec<(f64, f64)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|r| (0..n).map(move |c| local_update(h.get(r, c), p.get(r, c), canonical)))
        .collect();
    let mut new_h = Vec::with_capacity(n * n);
    let mut new_p = Vec::with_capacity(n * n);
    for (hv, pv) in pairs {
        new_h.push(hv);
        new_p.push(pv);
    }
    (Grid::from_data(n, new_h), Grid::from_data(n, new_p))
}

fn init_grids(
    config: &LatticeConfig,
    r0: f64,
    host_scale: f64,
    parasitoid_scale: f64,
    canonical_equilibrium: Option<(f64, f64)>,
) -> Result<(Grid, Grid), LatticeError> {
    let n = config.n;
    match &config.init {
        LatticeInit::CentralSeed { h0, p0 } => {
            if !h0.is_finite() || *h0 < 0.0 || !p0.is_finite() || *p0 < 0.0 {
                return Err(LatticeError::InvalidConfig(
                    "central seed densities must be finite and nonnegative".into(),
                ));
            }
            let mut h = Grid::zeros(n);
            let mut p = Grid::zeros(n);
            h.set(n / 2, n / 2, h0 * host_scale);
            p.set(n / 2, n / 2, p0 * parasitoid_scale);
            Ok((h, p))
        }
        LatticeInit::UniformRandom { lo, hi, seed } => {
            if !(lo.is_finite() && hi.is_finite()) || *lo < 0.0 || lo > hi {
                return Err(LatticeError::InvalidConfig(format!(
                    "uniform-random factors [{lo}, {hi}] invalid"
                )));
            }
            let (h_star, p_star) =
                canonical_equilibrium.ok_or(LatticeError::NoEquilibrium { r0 })?;
            let host_stream = RngStream::new(*seed, streams::LATTICE_HOST_INIT);
            let parasitoid_stream = RngStream::new(*seed, streams::LATTICE_PARASITOID_INIT);
            let h = Grid::from_fn(n, |r, c| {
                h_star * host_stream.range_at(*lo, *hi, (r * n + c) as u64)
            });
            let p = Grid::from_fn(n, |r, c| {
                p_star * parasitoid_stream.range_at(*lo, *hi, (r * n + c) as u64)
            });
            Ok((h, p))
        }
        LatticeInit::Explicit { h, p } => Ok((
            Grid::from_data(n, h.iter().map(|v| v * host_scale).collect()),
            Grid::from_data(n, p.iter().map(|v| v * parasitoid_scale).collect()),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::dynamics::nb_equilibrium;
    use crate::lattice::Boundary;

    fn config(n: usize, mu_h: f64, mu_p: f64, steps: usize, init: LatticeInit) -> LatticeConfig {
        LatticeConfig {
            n,
            mu_h,
            mu_p,
            boundary: Boundary::Cyclic,
            init,
            steps,
            extinction_eps: None,
        }
    }

    #[test]
    fn single_patch_diverges_to_extinction() {
        let params = PatchParams {
            r0: 2.0,
            attack: 1.0,
            c: 1.0,
        };
        let (h_star, p_star) = nb_equilibrium(&params).unwrap();
        let cfg = config(
            1,
            0.0,
            0.0,
            100_000,
            LatticeInit::Explicit {
                h: vec![h_star * 1.01],
                p: vec![p_star * 1.01],
            },
        );
        let record = simulate(&cfg, &params, RecordMode::Summary).unwrap();
        assert!(record.extinct_at.is_some(), "run should go extinct");
        assert!(*record.mean_h.last().unwrap() < record.extinction_eps);
    }

    #[test]
    fn single_patch_oscillation_amplitude_grows() {
        let params = PatchParams {
            r0: 2.0,
            attack: 1.0,
            c: 1.0,
        };
        let (h_star, p_star) = nb_equilibrium(&params).unwrap();
        let cfg = config(
            1,
            0.0,
            0.0,
            100_000,
            LatticeInit::Explicit {
                h: vec![h_star * 1.01],
                p: vec![p_star * 1.01],
            },
        );
        let record = simulate(&cfg, &params, RecordMode::Summary).unwrap();
        // Successive host peaks grow all the way to extinction.
        let peaks: Vec<f64> = record
            .mean_h
            .windows(3)
            .filter(|w| w[1] > w[0] && w[1] > w[2])
            .map(|w| w[1])
            .collect();
        assert!(
            peaks.len() >= 3,
            "expected several cycles, got {}",
            peaks.len()
        );
        for pair in peaks.windows(2) {
            assert!(pair[1] > pair[0], "peaks must grow: {pair:?}");
        }
    }

    #[test]
    fn translation_equivariance_on_the_torus() {
        let params = PatchParams {
            r0: 2.0,
            attack: 1.0,
            c: 1.0,
        };
        let n = 8;
        let stream = RngStream::new(9, 60);
        let base_h: Vec<f64> = (0..n * n).map(|i| 1.0 + stream.at(i as u64)).collect();
        let base_p: Vec<f64> = (0..n * n)
            .map(|i| 0.5 + stream.at(1000 + i as u64))
            .collect();
        let (dr, dc) = (3usize, 5usize);
        let shift = |v: &[f64]| -> Vec<f64> {
            let mut out = vec![0.0; n * n];
            for r in 0..n {
                for c in 0..n {
                    out[((r + dr) % n) * n + (c + dc) % n] = v[r * n + c];
                }
            }
            out
        };

        let run = |h: Vec<f64>, p: Vec<f64>| {
            simulate(
                &config(n, 0.4, 0.7, 30, LatticeInit::Explicit { h, p }),
                &params,
                RecordMode::Summary,
            )
            .unwrap()
        };
        let a = run(base_h.clone(), base_p.clone());
        let b = run(shift(&base_h), shift(&base_p));
        let shifted_a = shift(a.final_state.h.data());
        assert_eq!(shifted_a, b.final_state.h.data());
        let shifted_a_p = shift(a.final_state.p.data());
        assert_eq!(shifted_a_p, b.final_state.p.data());
    }

    #[test]
    fn scaling_conjugacy_over_a_long_run() {
        let n = 10;
        let steps = 200;
        let make = |attack: f64, c: f64| {
            let cfg = LatticeConfig {
                n,
                mu_h: 0.2,
                mu_p: 0.89,
                boundary: Boundary::Cyclic,
                init: LatticeInit::UniformRandom {
                    lo: 0.9,
                    hi: 1.1,
                    seed: 42,
                },
                steps,
                extinction_eps: None,
            };
            simulate(
                &cfg,
                &PatchParams { r0: 2.0, attack, c },
                RecordMode::FramesEvery(1),
            )
            .unwrap()
        };
        let canonical = make(1.0, 1.0);
        let scaled = make(2.0, 3.0);
        assert_eq!(canonical.snapshots.len(), scaled.snapshots.len());
        for (a, b) in canonical.snapshots.iter().zip(&scaled.snapshots) {
            for (ha, hb) in a.h.data().iter().zip(b.h.data()) {
                let rescaled = hb * 6.0;
                assert!(
                    (ha - rescaled).abs() <= 1e-9 * ha.abs().max(1.0),
                    "t={}: {ha} vs {rescaled}",
                    a.t
                );
            }
            for (pa, pb) in a.p.data().iter().zip(b.p.data()) {
                let rescaled = pb * 2.0;
                assert!(
                    (pa - rescaled).abs() <= 1e-9 * pa.abs().max(1.0),
                    "t={}: {pa} vs {rescaled}",
                    a.t
                );
            }
        }
    }

    #[test]
    fn runs_are_deterministic() {
        let params = PatchParams {
            r0: 2.0,
            attack: 1.0,
            c: 1.0,
        };
        let cfg = config(
            12,
            1.0,
            0.89,
            150,
            LatticeInit::UniformRandom {
                lo: 0.9,
                hi: 1.1,
                seed: 7,
            },
        );
        let a = simulate(&cfg, &params, RecordMode::Summary).unwrap();
        let b = simulate(&cfg, &params, RecordMode::Summary).unwrap();
        assert_eq!(a.mean_h, b.mean_h);
        assert_eq!(a.final_state.h.data(), b.final_state.h.data());
    }

    #[test]
    fn densities_stay_nonnegative() {
        let params = PatchParams {
            r0: 2.0,
            attack: 1.0,
            c: 1.0,
        };
        for boundary in [
            Boundary::Cyclic,
            Boundary::Absorbing,
            Boundary::Redistribute,
        ] {
            let cfg = LatticeConfig {
                n: 9,
                mu_h: 0.35,
                mu_p: 0.9,
                boundary,
                init: LatticeInit::UniformRandom {
                    lo: 0.5,
                    hi: 1.5,
                    seed: 3,
                },
                steps: 120,
                extinction_eps: None,
            };
            let record = simulate(&cfg, &params, RecordMode::FramesEvery(10)).unwrap();
            for snap in &record.snapshots {
                assert!(snap.h.data().iter().all(|v| *v >= 0.0));
                assert!(snap.p.data().iter().all(|v| *v >= 0.0));
            }
        }
    }

    #[test]
    fn unbounded_growth_aborts_with_the_generation() {
        // No parasitoids at all: hosts double every generation until the
        // overflow guard trips.
        let params = PatchParams {
            r0: 2.0,
            attack: 1.0,
            c: 1.0,
        };
        let cfg = config(
            1,
            0.0,
            0.0,
            1100,
            LatticeInit::Explicit {
                h: vec![1.0],
                p: vec![0.0],
            },
        );
        match simulate(&cfg, &params, RecordMode::Summary) {
            Err(LatticeError::NonFiniteState { generation }) => {
                assert!((900..=1100).contains(&generation), "{generation}");
            }
            other => panic!("expected overflow abort, got {other:?}"),
        }
    }

    #[test]
    fn random_init_without_equilibrium_is_an_error() {
        let params = PatchParams {
            r0: 0.9,
            attack: 1.0,
            c: 1.0,
        };
        let cfg = config(
            5,
            0.5,
            0.5,
            10,
            LatticeInit::UniformRandom {
                lo: 0.9,
                hi: 1.1,
                seed: 1,
            },
        );
        assert!(matches!(
            simulate(&cfg, &params, RecordMode::Summary),
            Err(LatticeError::NoEquilibrium { .. })
        ));
    }
}
