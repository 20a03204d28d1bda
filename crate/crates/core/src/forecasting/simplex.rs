//! Simplex projection: forecast by tracking where a predictee's nearest
//! library neighbours move.

use super::{embed::Library, ForecastError};

#[derive(Clone, Debug)]
pub struct Neighbor {
    pub time: usize,
    pub distance: f64,
    pub weight: f64,
    pub target: f64,
}

#[derive(Clone, Debug)]
pub struct SimplexPrediction {
    pub value: f64,
    pub neighbors: Vec<Neighbor>,
}

/// Predict the scalar `p` steps ahead of `query` from its `E+1` nearest
/// library neighbours.
///
/// Eligible points must admit a `p`-step continuation inside the
/// library's segment; when `query_time` is given, points within
/// `exclusion` steps of it are also removed. Neighbours get weights
/// `exp(-d_i / d_1)` with `d_1` the nearest distance; if the nearest
/// distance is zero, the zero-distance neighbours share equal weight and
/// the rest get none. Ties at the cut are broken toward smaller time
/// indices, so the result never depends on library point order.
pub fn simplex_predict_detailed(
    library: &Library,
    query: &[f64],
    query_time: Option<usize>,
    p: usize,
    exclusion: usize,
) -> Result<SimplexPrediction, ForecastError> {
    let e = library.e();
    assert_eq!(query.len(), e, "query dimension mismatch");
    let k = e + 1;

    // (squared distance, time, target) for every eligible point.
    let mut candidates: Vec<(f64, usize, f64)> = Vec::with_capacity(library.len());
    for i in 0..library.len() {
        let t = library.time(i);
        if let Some(q) = query_time {
            if t.abs_diff(q) <= exclusion {
                continue;
            }
        }
        let Some(target) = library.target(i, p) else {
            continue;
        };
        let d2: f64 = library
            .point(i)
            .iter()
            .zip(query)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        candidates.push((d2, t, target));
    }
    if candidates.len() < k {
        return Err(ForecastError::InsufficientNeighbors {
            eligible: candidates.len(),
            needed: k,
        });
    }
    candidates.sort_unstable_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
    candidates.truncate(k);

    let d1 = candidates[0].0.sqrt();
    let mut neighbors = Vec::with_capacity(k);
    if d1 == 0.0 {
        for &(d2, time, target) in &candidates {
            let weight = if d2 == 0.0 { 1.0 } else { 0.0 };
            neighbors.push(Neighbor {
                time,
                distance: d2.sqrt(),
                weight,
                target,
            });
        }
    } else {
        for &(d2, time, target) in &candidates {
            let distance = d2.sqrt();
            neighbors.push(Neighbor {
                time,
                distance,
                weight: (-distance / d1).exp(),
                target,
            });
        }
    }
    let weight_sum: f64 = neighbors.iter().map(|n| n.weight).sum();
    let value = neighbors.iter().map(|n| n.weight * n.target).sum::<f64>() / weight_sum;
    Ok(SimplexPrediction { value, neighbors })
}

/// [`simplex_predict_detailed`] without the neighbour breakdown.
pub fn simplex_predict(
    library: &Library,
    query: &[f64],
    query_time: Option<usize>,
    p: usize,
    exclusion: usize,
) -> Result<f64, ForecastError> {
    simplex_predict_detailed(library, query, query_time, p, exclusion).map(|p| p.value)
}
