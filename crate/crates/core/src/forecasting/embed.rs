//! Delay embedding: one library point per admissible time index.

use super::ForecastError;

/// Delay-embedded points over a series segment, each tagged with the
/// time index of its most recent coordinate. The segment's values are
/// retained so a point's p-step-ahead continuation can be looked up.
#[derive(Clone, Debug)]
pub struct Library {
    e: usize,
    tau: usize,
    values: Vec<f64>,
    times: Vec<usize>,
    /// Row-major `e`-dimensional coordinates, `coords[i*e..(i+1)*e]` for
    /// point `i`, ordered most recent first:
    /// `[x_t, x_{t-tau}, ..., x_{t-(e-1)tau}]`.
    coords: Vec<f64>,
}

/// Embed `values` with dimension `e` and lag `tau`. Every time index
/// from `(e-1)*tau` to the end yields one point, so the library holds
/// `len - (e-1)*tau` points.
pub fn embed(values: &[f64], e: usize, tau: usize) -> Result<Library, ForecastError> {
    if e < 1 || tau < 1 {
        return Err(ForecastError::InvalidEmbedding(format!(
            "E = {e}, tau = {tau} must both be >= 1"
        )));
    }
    let span = (e - 1) * tau;
    if values.len() <= span + 1 {
        return Err(ForecastError::SeriesTooShort {
            len: values.len(),
            e,
            tau,
            needed: span + 1,
        });
    }
    let n_points = values.len() - span;
    let mut times = Vec::with_capacity(n_points);
    let mut coords = Vec::with_capacity(n_points * e);
    for t in span..values.len() {
        times.push(t);
        for j in 0..e {
            coords.push(values[t - j * tau]);
        }
    }
    Ok(Library {
        e,
        tau,
        values: values.to_vec(),
        times,
        coords,
    })
}

impl Library {
    pub fn e(&self) -> usize {
        self.e
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Length of the underlying segment the points were embedded from.
    pub fn segment_len(&self) -> usize {
        self.values.len()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.e..(i + 1) * self.e]
    }

    pub fn time(&self, i: usize) -> usize {
        self.times[i]
    }

    /// The segment value `p` steps after point `i`, if it exists.
    pub fn target(&self, i: usize, p: usize) -> Option<f64> {
        self.values.get(self.times[i] + p).copied()
    }

    /// Build the delay vector anchored at segment time `t`, if admissible.
    pub fn query_at(values: &[f64], t: usize, e: usize, tau: usize) -> Option<Vec<f64>> {
        if t >= values.len() || t < (e - 1) * tau {
            return None;
        }
        Some((0..e).map(|j| values[t - j * tau]).collect())
    }

    #[cfg(test)]
    pub(crate) fn permuted(&self, perm: &[usize]) -> Library {
        let mut times = Vec::with_capacity(self.len());
        let mut coords = Vec::with_capacity(self.coords.len());
        for &i in perm {
            times.push(self.times[i]);
            coords.extend_from_slice(self.point(i));
        }
        Library {
            e: self.e,
            tau: self.tau,
            values: self.values.clone(),
            times,
            coords,
        }
    }
}
