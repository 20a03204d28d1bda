//! Update rules: how a site's next owner is chosen. Each rule sits
//! behind [`UpdateRule`] and is registered by name, so runs select the
//! dynamics at runtime.

use rayon::prelude::*;
use serde::Serialize;

use crate::runio::{streams, RngStream};

use super::board::{resolve, score_grid, Board, Strategy};
use super::{GameBoundary, GameError, Neighborhood, Payoffs};

/// Everything a rule needs besides the board itself.
pub struct StepContext<'a> {
    pub payoffs: &'a Payoffs,
    pub neighborhood: Neighborhood,
    pub boundary: GameBoundary,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct StepOutcome {
    pub strategies: Vec<Strategy>,
    /// Sites whose whole competition set scored zero under a
    /// probabilistic rule (incumbent retained).
    pub degenerate_sites: usize,
}

pub trait UpdateRule: Send + Sync {
    fn name(&self) -> &'static str;
    fn next_strategies(&self, board: &Board, ctx: &StepContext<'_>) -> StepOutcome;
}

/// Serializable description of an update rule choice.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum UpdateSpec {
    SyncDeterministic,
    SyncProbabilistic { m: f64 },
    AsyncRandomOrder,
}

impl UpdateSpec {
    pub fn build(&self) -> Box<dyn UpdateRule> {
        match *self {
            UpdateSpec::SyncDeterministic => Box::new(SyncDeterministic),
            UpdateSpec::SyncProbabilistic { m } => Box::new(SyncProbabilistic { stiffness: m }),
            UpdateSpec::AsyncRandomOrder => Box::new(AsyncRandomOrder),
        }
    }
}

/// Instantiate a registered rule by name. `m` feeds the probabilistic
/// rule's stiffness.
pub fn update_rule(name: &str, m: f64) -> Result<Box<dyn UpdateRule>, GameError> {
    match name {
        "sync-deterministic" => Ok(UpdateSpec::SyncDeterministic.build()),
        "sync-probabilistic" => Ok(UpdateSpec::SyncProbabilistic { m }.build()),
        "async-random-order" => Ok(UpdateSpec::AsyncRandomOrder.build()),
        other => Err(GameError::UnknownUpdateRule(other.to_string())),
    }
}

pub fn update_rule_names() -> [&'static str; 3] {
    [
        "sync-deterministic",
        "sync-probabilistic",
        "async-random-order",
    ]
}

/// Advance one generation under `rule`; `prev` becomes the old grid.
pub fn step(board: &Board, rule: &dyn UpdateRule, ctx: &StepContext<'_>) -> (Board, usize) {
    let outcome = rule.next_strategies(board, ctx);
    (board.advanced(outcome.strategies), outcome.degenerate_sites)
}

/// The competition set of a site: itself plus its neighbourhood.
#[inline]
fn competitors(
    n: usize,
    row: usize,
    col: usize,
    neighborhood: Neighborhood,
    boundary: GameBoundary,
) -> impl Iterator<Item = (usize, usize)> {
    std::iter::once((row, col)).chain(
        neighborhood
            .offsets()
            .iter()
            .filter_map(move |&(dr, dc)| resolve(n, row, col, dr, dc, boundary)),
    )
}

/// Deterministic winner of a site given every competitor's score:
/// the incumbent keeps the site on a tied maximum, otherwise the tied
/// competitor with the smallest (row, column) wins.
fn deterministic_winner(
    site: (usize, usize),
    get: &dyn Fn(usize, usize) -> Strategy,
    scores: &dyn Fn(usize, usize) -> f64,
    n: usize,
    neighborhood: Neighborhood,
    boundary: GameBoundary,
) -> Strategy {
    let (row, col) = site;
    let own = scores(row, col);
    let mut best = own;
    for (r, c) in competitors(n, row, col, neighborhood, boundary) {
        let s = scores(r, c);
        if s > best {
            best = s;
        }
    }
    if own == best {
        return get(row, col);
    }
    let winner = competitors(n, row, col, neighborhood, boundary)
        .filter(|&(r, c)| scores(r, c) == best)
        .min()
        .expect("a maximal competitor exists");
    get(winner.0, winner.1)
}

/// All sites move at once; every score is computed on the current board.
pub struct SyncDeterministic;

impl UpdateRule for SyncDeterministic {
    fn name(&self) -> &'static str {
        "sync-deterministic"
    }

    fn next_strategies(&self, board: &Board, ctx: &StepContext<'_>) -> StepOutcome {
        let n = board.n();
        let grid = score_grid(board, ctx.payoffs, ctx.neighborhood, ctx.boundary);
        let strategies: Vec<Strategy> = (0..n)
            .into_par_iter()
            .flat_map_iter(|row| {
                let grid = &grid;
                (0..n).map(move |col| {
                    deterministic_winner(
                        (row, col),
                        &|r, c| board.get(r, c),
                        &|r, c| grid[r * n + c],
                        n,
                        ctx.neighborhood,
                        ctx.boundary,
                    )
                })
            })
            .collect();
        StepOutcome {
            strategies,
            degenerate_sites: 0,
        }
    }
}

/// All sites move at once, but a site goes to competitor `i` with
/// probability `s_i^m / sum_j s_j^m`. Large `m` approaches the
/// deterministic rule, `m = 1` is proportional winning. Per-site draws
/// come from the counter-based stream keyed by (generation, row, col),
/// so the result is schedule-independent.
pub struct SyncProbabilistic {
    pub stiffness: f64,
}

impl UpdateRule for SyncProbabilistic {
    fn name(&self) -> &'static str {
        "sync-probabilistic"
    }

    fn next_strategies(&self, board: &Board, ctx: &StepContext<'_>) -> StepOutcome {
        let n = board.n();
        let m = self.stiffness;
        let grid = score_grid(board, ctx.payoffs, ctx.neighborhood, ctx.boundary);
        let stream = RngStream::new(ctx.seed, streams::GAME_WINNER);
        let generation = board.generation() as u64;

        let picks: Vec<(Strategy, bool)> = (0..n)
            .into_par_iter()
            .flat_map_iter(|row| {
                let grid = &grid;
                let stream = &stream;
                (0..n).map(move |col| {
                    let cells: Vec<(usize, usize)> =
                        competitors(n, row, col, ctx.neighborhood, ctx.boundary).collect();
                    let max = cells
                        .iter()
                        .map(|&(r, c)| grid[r * n + c])
                        .fold(0.0f64, f64::max);
                    if max <= 0.0 {
                        // Nobody scored: degenerate, incumbent retained.
                        return (board.get(row, col), true);
                    }
                    let weights: Vec<f64> = cells
                        .iter()
                        .map(|&(r, c)| (grid[r * n + c] / max).powf(m))
                        .collect();
                    let total: f64 = weights.iter().sum();
                    let target = stream.at_cell(generation, row as u64, col as u64) * total;
                    let mut acc = 0.0;
                    for (cell, w) in cells.iter().zip(&weights) {
                        acc += w;
                        if acc > target {
                            return (board.get(cell.0, cell.1), false);
                        }
                    }
                    let last = cells.last().unwrap();
                    (board.get(last.0, last.1), false)
                })
            })
            .collect();

        let degenerate_sites = picks.iter().filter(|(_, d)| *d).count();
        StepOutcome {
            strategies: picks.into_iter().map(|(s, _)| s).collect(),
            degenerate_sites,
        }
    }
}

/// Sites update one at a time in a seeded random order, each seeing the
/// scores of the board as it currently stands. Logically sequential.
pub struct AsyncRandomOrder;

impl UpdateRule for AsyncRandomOrder {
    fn name(&self) -> &'static str {
        "async-random-order"
    }

    fn next_strategies(&self, board: &Board, ctx: &StepContext<'_>) -> StepOutcome {
        let n = board.n();
        let generation = board.generation() as u64;
        let stream = RngStream::new(ctx.seed, streams::GAME_SWEEP_ORDER);

        // Seeded Fisher-Yates permutation of the sites.
        let mut order: Vec<usize> = (0..n * n).collect();
        for i in (1..order.len()).rev() {
            let j = (stream.u64_at_step(generation, i as u64) % (i as u64 + 1)) as usize;
            order.swap(i, j);
        }

        let mut working = board.clone();
        for idx in order {
            let (row, col) = (idx / n, idx % n);
            let winner = deterministic_winner(
                (row, col),
                &|r, c| working.get(r, c),
                &|r, c| {
                    super::board::score(&working, r, c, ctx.payoffs, ctx.neighborhood, ctx.boundary)
                },
                n,
                ctx.neighborhood,
                ctx.boundary,
            );
            working.set_strategy(row, col, winner);
        }
        StepOutcome {
            strategies: working.strategies().to_vec(),
            degenerate_sites: 0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx<'a>(payoffs: &'a Payoffs, seed: u64) -> StepContext<'a> {
        StepContext {
            payoffs,
            neighborhood: Neighborhood::Moore8Self,
            boundary: GameBoundary::Fixed,
            seed,
        }
    }

    #[test]
    fn uniform_boards_are_fixed_points_of_every_rule() {
        let payoffs = Payoffs::standard(1.9).unwrap();
        let context = ctx(&payoffs, 4);
        for s in [Strategy::C, Strategy::D] {
            let board = Board::uniform(7, s);
            for name in update_rule_names() {
                let rule = update_rule(name, 8.0).unwrap();
                let (next, _) = step(&board, rule.as_ref(), &context);
                assert_eq!(next.strategies(), board.strategies(), "{name}");
                assert_eq!(next.generation(), 1);
            }
        }
    }

    #[test]
    fn all_defectors_probabilistic_is_degenerate_everywhere() {
        // With P = 0 every score is zero: incumbents retained, flagged.
        let payoffs = Payoffs::standard(1.9).unwrap();
        let context = ctx(&payoffs, 4);
        let board = Board::uniform(5, Strategy::D);
        let rule = SyncProbabilistic { stiffness: 8.0 };
        let outcome = rule.next_strategies(&board, &context);
        assert_eq!(outcome.degenerate_sites, 25);
        assert!(outcome.strategies.iter().all(|s| *s == Strategy::D));
    }

    #[test]
    fn single_defector_becomes_a_three_by_three_block() {
        let payoffs = Payoffs::standard(1.9).unwrap();
        let context = ctx(&payoffs, 4);
        let board = Board::single_defector_center(9);
        let (next, _) = step(&board, &SyncDeterministic, &context);
        for r in 0..9usize {
            for c in 0..9usize {
                let inside = r.abs_diff(4) <= 1 && c.abs_diff(4) <= 1;
                let expect = if inside { Strategy::D } else { Strategy::C };
                assert_eq!(next.get(r, c), expect, "({r},{c})");
                assert_eq!(next.prev_at(r, c), board.get(r, c));
            }
        }
    }

    #[test]
    fn tiny_board_hand_check() {
        // 3x3, lone central defector: D scores 8b, every C's best
        // competitor is the D, so the whole board defects.
        let payoffs = Payoffs::standard(1.3).unwrap();
        let context = ctx(&payoffs, 4);
        let board = Board::single_defector_center(3);
        let (next, _) = step(&board, &SyncDeterministic, &context);
        assert!(next.strategies().iter().all(|s| *s == Strategy::D));
    }

    #[test]
    fn sync_step_is_reproducible_and_pure() {
        let payoffs = Payoffs::standard(1.9).unwrap();
        let context = ctx(&payoffs, 4);
        let board = Board::random(21, 0.6, 3);
        let (a, _) = step(&board, &SyncDeterministic, &context);
        let (b, _) = step(&board, &SyncDeterministic, &context);
        assert_eq!(a, b);
    }

    #[test]
    fn probabilistic_and_async_are_seed_reproducible() {
        let payoffs = Payoffs::standard(1.9).unwrap();
        let board = Board::random(15, 0.5, 9);
        for name in ["sync-probabilistic", "async-random-order"] {
            let rule = update_rule(name, 8.0).unwrap();
            let (a, _) = step(&board, rule.as_ref(), &ctx(&payoffs, 11));
            let (b, _) = step(&board, rule.as_ref(), &ctx(&payoffs, 11));
            assert_eq!(a, b, "{name}");
            let (c, _) = step(&board, rule.as_ref(), &ctx(&payoffs, 12));
            assert_ne!(a, c, "{name} should respond to the seed");
        }
    }

    #[test]
    fn symmetry_is_preserved_by_the_deterministic_rule() {
        let payoffs = Payoffs::standard(1.9).unwrap();
        let context = ctx(&payoffs, 4);
        let mut board = Board::single_defector_center(13);
        for _ in 0..12 {
            assert!(board.has_square_symmetry());
            board = step(&board, &SyncDeterministic, &context).0;
        }
        assert!(board.has_square_symmetry());
    }

    #[test]
    fn unknown_rule_is_an_error() {
        assert!(matches!(
            update_rule("majority-vote", 1.0),
            Err(GameError::UnknownUpdateRule(_))
        ));
    }
}
