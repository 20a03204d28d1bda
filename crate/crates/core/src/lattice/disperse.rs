//! Deterministic dispersal to the eight neighbouring patches.

use rayon::prelude::*;
use serde::Serialize;

use super::Grid;

/// Moore neighbourhood offsets in fixed scan order; dispersal gathers
/// contributions in this order so results are independent of how the
/// output cells are scheduled.
pub const MOORE_OFFSETS: [(isize, isize); 8] = [
    (-1, -1),
    (-1, 0),
    (-1, 1),
    (0, -1),
    (0, 1),
    (1, -1),
    (1, 0),
    (1, 1),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    /// Torus: off-grid neighbours wrap around.
    Cyclic,
    /// Off-grid shares are lost.
    Absorbing,
    /// The dispersing fraction splits evenly over existing neighbours only.
    Redistribute,
}

impl Boundary {
    pub fn name(&self) -> &'static str {
        match self {
            Boundary::Cyclic => "cyclic",
            Boundary::Absorbing => "absorbing",
            Boundary::Redistribute => "redistribute",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "cyclic" => Some(Boundary::Cyclic),
            "absorbing" => Some(Boundary::Absorbing),
            "redistribute" => Some(Boundary::Redistribute),
            _ => None,
        }
    }
}

/// Count of in-grid Moore neighbours of `(r, c)`.
fn degree(n: usize, r: usize, c: usize) -> usize {
    MOORE_OFFSETS
        .iter()
        .filter(|(dr, dc)| {
            let nr = r as isize + dr;
            let nc = c as isize + dc;
            nr >= 0 && nr < n as isize && nc >= 0 && nc < n as isize
        })
        .count()
}

/// Move the fraction `mu` of every patch to its eight neighbours, evenly.
///
/// Each patch keeps `1 - mu` of its density. Under `Cyclic` the shares
/// wrap; under `Absorbing` off-grid shares vanish; under `Redistribute`
/// a patch with `d` in-grid neighbours sends `mu / d` to each. The
/// output cell is a fixed-order sum over [`MOORE_OFFSETS`], so the grid
/// is a pure function of the input regardless of parallel schedule.
pub fn disperse(grid: &Grid, mu: f64, boundary: Boundary) -> Grid {
    debug_assert!((0.0..=1.0).contains(&mu));
    let n = grid.n();
    if n == 1 {
        // A single patch has no distinct neighbours; everything stays.
        return grid.clone();
    }
    let keep = 1.0 - mu;
    let data: Vec<f64> = (0..n)
        .into_par_iter()
        .flat_map_iter(|r| {
            let grid = &grid;
            (0..n).map(move |c| {
                let mut acc = keep * grid.get(r, c);
                for (dr, dc) in MOORE_OFFSETS {
                    let nr = r as isize + dr;
                    let nc = c as isize + dc;
                    match boundary {
                        Boundary::Cyclic => {
                            let nr = nr.rem_euclid(n as isize) as usize;
                            let nc = nc.rem_euclid(n as isize) as usize;
                            acc += mu / 8.0 * grid.get(nr, nc);
                        }
                        Boundary::Absorbing => {
                            if nr >= 0 && nr < n as isize && nc >= 0 && nc < n as isize {
                                acc += mu / 8.0 * grid.get(nr as usize, nc as usize);
                            }
                        }
                        Boundary::Redistribute => {
                            if nr >= 0 && nr < n as isize && nc >= 0 && nc < n as isize {
                                let (nr, nc) = (nr as usize, nc as usize);
                                let d = degree(n, nr, nc) as f64;
                                acc += mu / d * grid.get(nr, nc);
                            }
                        }
                    }
                }
                acc
            })
        })
        .collect();
    Grid::from_data(n, data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::runio::RngStream;

    fn random_grid(n: usize, seed: u64) -> Grid {
        let stream = RngStream::new(seed, 50);
        let mut i = 0;
        Grid::from_fn(n, |_, _| {
            i += 1;
            stream.at(i) * 3.0
        })
    }

    #[test]
    fn zero_mu_is_identity() {
        let g = random_grid(7, 1);
        for boundary in [
            Boundary::Cyclic,
            Boundary::Absorbing,
            Boundary::Redistribute,
        ] {
            assert_eq!(disperse(&g, 0.0, boundary), g);
        }
    }

    #[test]
    fn unit_mass_splits_evenly() {
        let mut g = Grid::zeros(5);
        g.set(2, 2, 1.0);
        let out = disperse(&g, 1.0, Boundary::Cyclic);
        assert_eq!(out.get(2, 2), 0.0);
        for (dr, dc) in MOORE_OFFSETS {
            let r = (2 + dr) as usize;
            let c = (2 + dc) as usize;
            assert_eq!(out.get(r, c), 0.125);
        }
    }

    #[test]
    fn cyclic_and_redistribute_conserve_mass() {
        let g = random_grid(9, 3);
        let total = g.total();
        for boundary in [Boundary::Cyclic, Boundary::Redistribute] {
            for mu in [0.05, 0.3, 0.89, 1.0] {
                let out = disperse(&g, mu, boundary);
                let drift = (out.total() - total).abs() / total;
                assert!(drift < 1e-12, "{boundary:?} mu={mu}: drift {drift}");
            }
        }
    }

    #[test]
    fn absorbing_never_gains_mass() {
        let g = random_grid(9, 4);
        let total = g.total();
        for mu in [0.1, 0.6, 1.0] {
            let out = disperse(&g, mu, Boundary::Absorbing);
            assert!(out.total() <= total * (1.0 + 1e-12));
            assert!(out.total() < total, "edge losses expected at mu={mu}");
        }
    }

    #[test]
    fn redistribute_keeps_corners_whole() {
        // A corner patch has 3 neighbours; everything it sends must land.
        let mut g = Grid::zeros(4);
        g.set(0, 0, 1.0);
        let out = disperse(&g, 1.0, Boundary::Redistribute);
        assert_eq!(out.get(0, 0), 0.0);
        let received: f64 = [(0usize, 1usize), (1, 0), (1, 1)]
            .iter()
            .map(|&(r, c)| out.get(r, c))
            .sum();
        assert!((received - 1.0).abs() < 1e-15);
        for (r, c) in [(0, 1), (1, 0), (1, 1)] {
            assert!((out.get(r, c) - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn single_patch_is_untouched() {
        let g = Grid::from_data(1, vec![2.5]);
        for boundary in [
            Boundary::Cyclic,
            Boundary::Absorbing,
            Boundary::Redistribute,
        ] {
            assert_eq!(disperse(&g, 0.7, boundary), g);
        }
    }
}
