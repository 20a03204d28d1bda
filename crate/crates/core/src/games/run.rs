//! Whole-run driver: iterate an update rule, record the cooperator
//! fraction per generation, keep snapshots on request.

use super::board::Board;
use super::update::{step, StepContext};
use super::{GameConfig, GameError, GameInit};

/// Cooperator fraction per generation, `fc[t]` for `t = 0..=generations`.
pub type FcSeries = Vec<f64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RecordMode {
    Summary,
    /// Keep a board snapshot at every multiple of the given stride.
    FramesEvery(usize),
}

#[derive(Clone, Debug)]
pub struct GameRun {
    pub fc: FcSeries,
    pub final_board: Board,
    pub snapshots: Vec<Board>,
    /// Degenerate probabilistic draws encountered across the run.
    pub degenerate_sites: usize,
}

/// Run the configured game. Deterministic given the seed: random
/// initialization and per-site winner draws all come from counter-based
/// streams.
pub fn run(config: &GameConfig, record: RecordMode) -> Result<GameRun, GameError> {
    config.validate()?;
    let payoffs = config.payoffs()?;
    let rule = config.update.build();
    let ctx = StepContext {
        payoffs: &payoffs,
        neighborhood: config.neighborhood,
        boundary: config.boundary,
        seed: config.seed,
    };

    let mut board = match &config.init {
        GameInit::Random { fraction_c } => Board::random(config.n, *fraction_c, config.seed),
        GameInit::SingleDefectorCenter => Board::single_defector_center(config.n),
        GameInit::Explicit { strategies } => Board::from_strategies(config.n, strategies.clone()),
    };

    let stride = match record {
        RecordMode::Summary => None,
        RecordMode::FramesEvery(k) => {
            if k == 0 {
                return Err(GameError::InvalidConfig("frame stride must be >= 1".into()));
            }
            Some(k)
        }
    };

    let mut fc = Vec::with_capacity(config.generations + 1);
    fc.push(board.fraction_cooperators());
    let mut snapshots = Vec::new();
    if stride.is_some() {
        snapshots.push(board.clone());
    }
    let mut degenerate_sites = 0;

    for t in 1..=config.generations {
        let (next, degenerate) = step(&board, rule.as_ref(), &ctx);
        board = next;
        degenerate_sites += degenerate;
        fc.push(board.fraction_cooperators());
        if let Some(k) = stride {
            if t % k == 0 {
                snapshots.push(board.clone());
            }
        }
    }

    Ok(GameRun {
        fc,
        final_board: board,
        snapshots,
        degenerate_sites,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::{GameBoundary, Neighborhood, Strategy, UpdateSpec};

    fn kaleidoscope_config(n: usize, generations: usize) -> GameConfig {
        GameConfig {
            n,
            b: 1.9,
            eps: 0.0,
            neighborhood: Neighborhood::Moore8Self,
            boundary: GameBoundary::Fixed,
            update: UpdateSpec::SyncDeterministic,
            generations,
            init: GameInit::SingleDefectorCenter,
            seed: 42,
        }
    }

    #[test]
    fn fc_series_covers_every_generation() {
        let run_record = run(&kaleidoscope_config(25, 10), RecordMode::Summary).unwrap();
        assert_eq!(run_record.fc.len(), 11);
        assert_eq!(run_record.fc[0], 624.0 / 625.0);
        assert_eq!(run_record.final_board.generation(), 10);
        // One step in: exactly a 3x3 defector block.
        assert_eq!(run_record.fc[1], (625.0 - 9.0) / 625.0);
    }

    #[test]
    fn snapshots_follow_the_stride() {
        let run_record = run(&kaleidoscope_config(15, 9), RecordMode::FramesEvery(3)).unwrap();
        let gens: Vec<usize> = run_record
            .snapshots
            .iter()
            .map(|b| b.generation())
            .collect();
        assert_eq!(gens, vec![0, 3, 6, 9]);
    }

    #[test]
    fn symmetric_start_stays_symmetric() {
        let run_record = run(&kaleidoscope_config(33, 20), RecordMode::FramesEvery(1)).unwrap();
        for board in &run_record.snapshots {
            assert!(
                board.has_square_symmetry(),
                "symmetry lost at generation {}",
                board.generation()
            );
        }
    }

    #[test]
    fn runs_are_seed_deterministic() {
        let mut config = kaleidoscope_config(19, 15);
        config.init = GameInit::Random { fraction_c: 0.6 };
        config.update = UpdateSpec::SyncProbabilistic { m: 8.0 };
        let a = run(&config, RecordMode::Summary).unwrap();
        let b = run(&config, RecordMode::Summary).unwrap();
        assert_eq!(a.fc, b.fc);
        assert_eq!(a.final_board, b.final_board);
    }

    #[test]
    fn explicit_grids_round_trip() {
        let strategies = vec![
            Strategy::C,
            Strategy::D,
            Strategy::C,
            Strategy::D,
            Strategy::C,
            Strategy::D,
            Strategy::C,
            Strategy::D,
            Strategy::C,
        ];
        let mut config = kaleidoscope_config(3, 1);
        config.init = GameInit::Explicit {
            strategies: strategies.clone(),
        };
        let run_record = run(&config, RecordMode::FramesEvery(1)).unwrap();
        assert_eq!(run_record.snapshots[0].strategies(), strategies.as_slice());
    }
}
