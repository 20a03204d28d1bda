//! Cluster-growth experiments: embed a block of one strategy in a sea of
//! the other and watch whether it grows, shrinks, or holds.

use serde::Serialize;

use super::board::{Board, Strategy};
use super::update::{step, StepContext, SyncDeterministic};
use super::{GameBoundary, GameError, Neighborhood, Payoffs};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ClusterSpec {
    /// A k x k block of defectors in a sea of cooperators.
    DBlock { k: usize },
    /// A k x k block of cooperators in a sea of defectors.
    CBlock { k: usize },
}

impl ClusterSpec {
    pub fn k(&self) -> usize {
        match *self {
            ClusterSpec::DBlock { k } | ClusterSpec::CBlock { k } => k,
        }
    }

    fn minority(&self) -> Strategy {
        match self {
            ClusterSpec::DBlock { .. } => Strategy::D,
            ClusterSpec::CBlock { .. } => Strategy::C,
        }
    }

    fn majority(&self) -> Strategy {
        match self.minority() {
            Strategy::D => Strategy::C,
            Strategy::C => Strategy::D,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClusterVerdict {
    Grows,
    Shrinks,
    Static,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClusterOutcome {
    pub verdict: ClusterVerdict,
    /// Minority population per generation, starting at t = 0.
    pub counts: Vec<usize>,
    pub initial: usize,
    pub final_count: usize,
}

/// Lattice side big enough that a frontier advancing one cell per step
/// cannot touch the boundary within `generations`.
pub fn sufficient_side(k: usize, generations: usize) -> usize {
    let side = 2 * k + 4 * generations;
    side + 1 - side % 2 // odd, so the block centers cleanly
}

/// Run a centered k x k minority block under synchronous deterministic
/// updating and report how its population moved.
///
/// `n = None` picks [`sufficient_side`]. The run aborts if any minority
/// cell reaches the boundary ring, since edge effects would contaminate
/// the growth claim. Thresholds: grows above 1.5x the initial count,
/// shrinks below 0.5x, static otherwise.
pub fn cluster_experiment(
    b: f64,
    cluster: ClusterSpec,
    generations: usize,
    n: Option<usize>,
    eps: f64,
    neighborhood: Neighborhood,
) -> Result<ClusterOutcome, GameError> {
    let k = cluster.k();
    if k == 0 {
        return Err(GameError::InvalidConfig("cluster size must be >= 1".into()));
    }
    let n = n.unwrap_or_else(|| sufficient_side(k, generations));
    if n < k + 2 {
        return Err(GameError::ClusterTooBig {
            k,
            n,
            needed: k + 2,
        });
    }
    let payoffs = Payoffs::with_punishment(b, eps)?;

    let mut strategies = vec![cluster.majority(); n * n];
    let offset = (n - k) / 2;
    for r in offset..offset + k {
        for c in offset..offset + k {
            strategies[r * n + c] = cluster.minority();
        }
    }
    let mut board = Board::from_strategies(n, strategies);

    let ctx = StepContext {
        payoffs: &payoffs,
        neighborhood,
        boundary: GameBoundary::Fixed,
        seed: 0,
    };
    let minority = cluster.minority();
    let count = |board: &Board| {
        board
            .strategies()
            .iter()
            .filter(|s| **s == minority)
            .count()
    };
    let touches_boundary = |board: &Board| {
        (0..n).any(|i| {
            board.get(0, i) == minority
                || board.get(n - 1, i) == minority
                || board.get(i, 0) == minority
                || board.get(i, n - 1) == minority
        })
    };

    let initial = count(&board);
    let mut counts = vec![initial];
    for t in 1..=generations {
        board = step(&board, &SyncDeterministic, &ctx).0;
        if touches_boundary(&board) {
            return Err(GameError::ClusterReachedBoundary { generation: t });
        }
        counts.push(count(&board));
    }

    let final_count = *counts.last().unwrap();
    let verdict = if final_count as f64 > 1.5 * initial as f64 {
        ClusterVerdict::Grows
    } else if (final_count as f64) < 0.5 * initial as f64 {
        ClusterVerdict::Shrinks
    } else {
        ClusterVerdict::Static
    };

    Ok(ClusterOutcome {
        verdict,
        counts,
        initial,
        final_count,
    })
}
