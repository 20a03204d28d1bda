//! The strategy lattice and per-site scoring.

use rayon::prelude::*;
use serde::Serialize;

use crate::runio::{game_color, streams, Frame, RngStream};

use super::{GameBoundary, Neighborhood, Payoffs};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Strategy {
    C,
    D,
}

impl Strategy {
    pub fn is_cooperator(&self) -> bool {
        matches!(self, Strategy::C)
    }
}

/// An `n x n` grid of strategies plus the previous generation's grid,
/// which the four-color rendering needs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Board {
    n: usize,
    strategies: Vec<Strategy>,
    prev: Vec<Strategy>,
    generation: usize,
}

impl Board {
    pub fn from_strategies(n: usize, strategies: Vec<Strategy>) -> Self {
        assert_eq!(strategies.len(), n * n);
        Self {
            n,
            prev: strategies.clone(),
            strategies,
            generation: 0,
        }
    }

    pub fn uniform(n: usize, s: Strategy) -> Self {
        Self::from_strategies(n, vec![s; n * n])
    }

    /// Seeded random board: each site cooperates with probability
    /// `fraction_c`, independently, keyed by cell index.
    pub fn random(n: usize, fraction_c: f64, seed: u64) -> Self {
        let stream = RngStream::new(seed, streams::GAME_INIT);
        let strategies = (0..n * n)
            .map(|i| {
                if stream.at(i as u64) < fraction_c {
                    Strategy::C
                } else {
                    Strategy::D
                }
            })
            .collect();
        Self::from_strategies(n, strategies)
    }

    /// All cooperators except one defector in the central site.
    pub fn single_defector_center(n: usize) -> Self {
        let mut strategies = vec![Strategy::C; n * n];
        strategies[(n / 2) * n + n / 2] = Strategy::D;
        Self::from_strategies(n, strategies)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generation(&self) -> usize {
        self.generation
    }

    pub fn get(&self, row: usize, col: usize) -> Strategy {
        self.strategies[row * self.n + col]
    }

    pub fn prev_at(&self, row: usize, col: usize) -> Strategy {
        self.prev[row * self.n + col]
    }

    pub fn strategies(&self) -> &[Strategy] {
        &self.strategies
    }

    pub fn count_cooperators(&self) -> usize {
        self.strategies.iter().filter(|s| s.is_cooperator()).count()
    }

    /// Exact cooperator fraction `#C / n^2`.
    pub fn fraction_cooperators(&self) -> f64 {
        self.count_cooperators() as f64 / (self.n * self.n) as f64
    }

    pub(crate) fn set_strategy(&mut self, row: usize, col: usize, s: Strategy) {
        self.strategies[row * self.n + col] = s;
    }

    /// Successor board: `strategies` advances, the old grid becomes `prev`.
    pub(crate) fn advanced(&self, strategies: Vec<Strategy>) -> Board {
        assert_eq!(strategies.len(), self.strategies.len());
        Board {
            n: self.n,
            prev: self.strategies.clone(),
            strategies,
            generation: self.generation + 1,
        }
    }

    /// Four-color frame: blue C after C, red D after D, green C after D,
    /// yellow D after C.
    pub fn frame(&self) -> Frame {
        let mut bytes = Vec::with_capacity(self.n * self.n * 3);
        for (now, before) in self.strategies.iter().zip(&self.prev) {
            bytes.extend_from_slice(&game_color(now.is_cooperator(), before.is_cooperator()));
        }
        Frame::rgb(self.n, self.n, bytes).expect("board dimensions always match")
    }

    /// Counts per palette color, in order (blue, red, green, yellow).
    pub fn palette_counts(&self) -> [usize; 4] {
        let mut counts = [0usize; 4];
        for (now, before) in self.strategies.iter().zip(&self.prev) {
            let idx = match (now.is_cooperator(), before.is_cooperator()) {
                (true, true) => 0,
                (false, false) => 1,
                (true, false) => 2,
                (false, true) => 3,
            };
            counts[idx] += 1;
        }
        counts
    }

    /// Cooperator fraction inside the centered square of half-width
    /// `half` (Chebyshev radius). A structure grown from a central seed
    /// for `t` generations spans half-width `t`, so this measures the
    /// frequency within the growing `(2t+1)^2` window rather than the
    /// whole arena.
    pub fn windowed_fraction(&self, half: usize) -> f64 {
        let center = self.n / 2;
        assert!(half <= center, "window exceeds the board");
        let (lo, hi) = (center - half, center + half);
        let mut cooperators = 0usize;
        for r in lo..=hi {
            for c in lo..=hi {
                if self.get(r, c).is_cooperator() {
                    cooperators += 1;
                }
            }
        }
        let side = 2 * half + 1;
        cooperators as f64 / (side * side) as f64
    }

    /// Invariance under the full symmetry group of the square (rotations
    /// and reflections), checked via its two generators.
    pub fn has_square_symmetry(&self) -> bool {
        let n = self.n;
        for r in 0..n {
            for c in 0..n {
                let s = self.get(r, c);
                if s != self.get(c, n - 1 - r) || s != self.get(r, n - 1 - c) {
                    return false;
                }
            }
        }
        true
    }
}

/// Wrap or drop an offset neighbour depending on the boundary rule.
#[inline]
pub(crate) fn resolve(
    n: usize,
    row: usize,
    col: usize,
    dr: isize,
    dc: isize,
    boundary: GameBoundary,
) -> Option<(usize, usize)> {
    let (r, c) = (row as isize + dr, col as isize + dc);
    match boundary {
        GameBoundary::Periodic => Some((
            r.rem_euclid(n as isize) as usize,
            c.rem_euclid(n as isize) as usize,
        )),
        GameBoundary::Fixed => {
            if r >= 0 && r < n as isize && c >= 0 && c < n as isize {
                Some((r as usize, c as usize))
            } else {
                None
            }
        }
    }
}

/// Sum of this site's payoffs against its neighbour set (plus itself
/// under `moore8+self`). A fixed boundary simply truncates the set.
///
/// Computed from encounter counts rather than by accumulating payoffs
/// in scan order, so the score is exactly invariant under any
/// permutation of the neighbours; otherwise rounding could give two
/// mirror-image sites different bits and break tie handling on
/// symmetric boards.
pub fn score(
    board: &Board,
    row: usize,
    col: usize,
    payoffs: &Payoffs,
    neighborhood: Neighborhood,
    boundary: GameBoundary,
) -> f64 {
    let me = board.get(row, col);
    let mut cooperators = 0u32;
    let mut defectors = 0u32;
    let mut tally = |s: Strategy| match s {
        Strategy::C => cooperators += 1,
        Strategy::D => defectors += 1,
    };
    if neighborhood.includes_self() {
        tally(me);
    }
    for &(dr, dc) in neighborhood.offsets() {
        if let Some((r, c)) = resolve(board.n(), row, col, dr, dc, boundary) {
            tally(board.get(r, c));
        }
    }
    let (vs_c, vs_d) = match me {
        Strategy::C => (payoffs.reward, payoffs.sucker),
        Strategy::D => (payoffs.temptation, payoffs.punishment),
    };
    cooperators as f64 * vs_c + defectors as f64 * vs_d
}

/// Every site's score, row-major; rows in parallel.
pub fn score_grid(
    board: &Board,
    payoffs: &Payoffs,
    neighborhood: Neighborhood,
    boundary: GameBoundary,
) -> Vec<f64> {
    let n = board.n();
    (0..n)
        .into_par_iter()
        .flat_map_iter(|row| {
            (0..n).map(move |col| score(board, row, col, payoffs, neighborhood, boundary))
        })
        .collect()
}
