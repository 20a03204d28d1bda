//! Phenomenological embedding search: pick the (E, tau) with the best
//! correlation at the evaluation horizon.

use rayon::prelude::*;

use super::rho::rho_curve;
use super::{EmbeddingConfig, ForecastError, Protocol, Series};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchResult {
    pub e: usize,
    pub tau: usize,
    pub rho: f64,
}

/// Evaluate every pair in `e_range x tau_range` and return the one
/// maximizing rho at horizon `p_eval`; ties break toward smaller E, then
/// smaller tau. Pairs the series cannot support are skipped.
pub fn grid_search(
    series: &Series,
    e_range: (usize, usize),
    tau_range: (usize, usize),
    protocol: Protocol,
    exclusion: usize,
    p_eval: usize,
) -> Result<SearchResult, ForecastError> {
    let (e_lo, e_hi) = e_range;
    let (tau_lo, tau_hi) = tau_range;
    if e_lo < 1 || tau_lo < 1 || e_lo > e_hi || tau_lo > tau_hi {
        return Err(ForecastError::InvalidEmbedding(format!(
            "bad search ranges E {e_lo}..={e_hi}, tau {tau_lo}..={tau_hi}"
        )));
    }
    let pairs: Vec<(usize, usize)> = (e_lo..=e_hi)
        .flat_map(|e| (tau_lo..=tau_hi).map(move |tau| (e, tau)))
        .collect();

    let scored: Vec<Option<SearchResult>> = pairs
        .par_iter()
        .map(|&(e, tau)| {
            let config = EmbeddingConfig::new(e, tau, exclusion, protocol);
            match rho_curve(series, &config, p_eval) {
                Ok(curve) => curve
                    .rho_at(p_eval)
                    .filter(|r| r.is_finite())
                    .map(|rho| SearchResult { e, tau, rho }),
                Err(_) => None,
            }
        })
        .collect();

    let mut best: Option<SearchResult> = None;
    for candidate in scored.into_iter().flatten() {
        // Strict improvement only, so the (smaller E, smaller tau) pair
        // encountered first keeps ties.
        if best.is_none_or(|b| candidate.rho > b.rho) {
            best = Some(candidate);
        }
    }
    best.ok_or(ForecastError::NoAdmissiblePair)
}
