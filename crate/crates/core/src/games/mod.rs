//! Spatial Prisoner's Dilemma on a square lattice.
//!
//! Memoryless players, pure cooperators or pure defectors, each play
//! their neighbours (and optionally themselves) every generation; a site
//! then passes to the player with the highest score among the previous
//! owner and its neighbours. With payoffs `R = 1`, `T = b > 1`,
//! `S = P = 0`, the single parameter `b` decides whether cooperator or
//! defector clusters grow, and in the window `1.8 < b < 2` both do,
//! sustaining shifting polymorphic patterns whose cooperator fraction
//! hovers near `12 ln 2 - 8`.

mod board;
mod cluster;
mod run;
mod theory;
mod update;

pub use board::{score, score_grid, Board, Strategy};
pub use cluster::{cluster_experiment, ClusterOutcome, ClusterSpec, ClusterVerdict};
pub use run::{run, FcSeries, GameRun, RecordMode};
pub use theory::fc_theory;
pub use update::{
    step, update_rule, update_rule_names, AsyncRandomOrder, StepContext, StepOutcome,
    SyncDeterministic, SyncProbabilistic, UpdateRule, UpdateSpec,
};

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GameError {
    #[error("invalid payoffs: {0}")]
    InvalidPayoffs(String),
    #[error("invalid game configuration: {0}")]
    InvalidConfig(String),
    #[error("unknown update rule '{0}'")]
    UnknownUpdateRule(String),
    #[error("a {k}x{k} cluster needs a lattice wider than {needed}, got {n}")]
    ClusterTooBig { k: usize, n: usize, needed: usize },
    #[error(
        "cluster reached the boundary at generation {generation}; edge effects invalidate the run"
    )]
    ClusterReachedBoundary { generation: usize },
}

/// Row-player payoffs. The canonical setup is `R = 1`, `T = b`,
/// `S = P = 0`; a small positive punishment keeps the inequalities
/// strict without changing anything qualitative.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Payoffs {
    pub reward: f64,
    pub temptation: f64,
    pub sucker: f64,
    pub punishment: f64,
}

impl Payoffs {
    /// `R = 1, T = b, S = P = 0`; requires `b > 1`.
    pub fn standard(b: f64) -> Result<Self, GameError> {
        Self::with_punishment(b, 0.0)
    }

    /// `R = 1, T = b, S = 0, P = eps` with `0 <= eps < 1`.
    pub fn with_punishment(b: f64, eps: f64) -> Result<Self, GameError> {
        let payoffs = Self {
            reward: 1.0,
            temptation: b,
            sucker: 0.0,
            punishment: eps,
        };
        payoffs.validate()?;
        Ok(payoffs)
    }

    /// `T > R > P >= S` with `R = 1`.
    pub fn validate(&self) -> Result<(), GameError> {
        let ok = self.temptation.is_finite()
            && self.punishment.is_finite()
            && self.temptation > self.reward
            && self.reward > self.punishment
            && self.punishment >= self.sucker
            && self.reward == 1.0;
        if !ok {
            return Err(GameError::InvalidPayoffs(format!(
                "need T > R > P >= S with R = 1, got T={}, R={}, P={}, S={}",
                self.temptation, self.reward, self.punishment, self.sucker
            )));
        }
        Ok(())
    }

    /// Row player's payoff for one encounter.
    pub fn payoff(&self, me: Strategy, other: Strategy) -> f64 {
        match (me, other) {
            (Strategy::C, Strategy::C) => self.reward,
            (Strategy::C, Strategy::D) => self.sucker,
            (Strategy::D, Strategy::C) => self.temptation,
            (Strategy::D, Strategy::D) => self.punishment,
        }
    }
}

/// Who a site plays against each generation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Neighborhood {
    /// Eight neighbours plus one's own site.
    Moore8Self,
    /// Eight neighbours only.
    Moore8,
    /// Four orthogonal neighbours.
    VonNeumann4,
}

const MOORE: [(isize, isize); 8] = [
    (-1, -1),
    (-1, 0),
    (-1, 1),
    (0, -1),
    (0, 1),
    (1, -1),
    (1, 0),
    (1, 1),
];
const VON_NEUMANN: [(isize, isize); 4] = [(-1, 0), (0, -1), (0, 1), (1, 0)];

impl Neighborhood {
    pub fn offsets(&self) -> &'static [(isize, isize)] {
        match self {
            Neighborhood::Moore8Self | Neighborhood::Moore8 => &MOORE,
            Neighborhood::VonNeumann4 => &VON_NEUMANN,
        }
    }

    /// Whether a site also plays against itself when scoring.
    pub fn includes_self(&self) -> bool {
        matches!(self, Neighborhood::Moore8Self)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Neighborhood::Moore8Self => "moore8+self",
            Neighborhood::Moore8 => "moore8",
            Neighborhood::VonNeumann4 => "von-neumann4",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "moore8+self" => Some(Neighborhood::Moore8Self),
            "moore8" => Some(Neighborhood::Moore8),
            "von-neumann4" => Some(Neighborhood::VonNeumann4),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GameBoundary {
    /// Edge players simply have fewer neighbours.
    Fixed,
    /// The lattice is a torus.
    Periodic,
}

impl GameBoundary {
    pub fn name(&self) -> &'static str {
        match self {
            GameBoundary::Fixed => "fixed",
            GameBoundary::Periodic => "periodic",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "fixed" => Some(GameBoundary::Fixed),
            "periodic" => Some(GameBoundary::Periodic),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum GameInit {
    Random { fraction_c: f64 },
    SingleDefectorCenter,
    Explicit { strategies: Vec<Strategy> },
}

#[derive(Clone, Debug, Serialize)]
pub struct GameConfig {
    pub n: usize,
    /// Defector's advantage: the temptation payoff.
    pub b: f64,
    /// Punishment payoff; 0 reproduces the canonical setup.
    pub eps: f64,
    pub neighborhood: Neighborhood,
    pub boundary: GameBoundary,
    pub update: UpdateSpec,
    pub generations: usize,
    pub init: GameInit,
    pub seed: u64,
}

impl GameConfig {
    pub fn payoffs(&self) -> Result<Payoffs, GameError> {
        Payoffs::with_punishment(self.b, self.eps)
    }

    pub fn validate(&self) -> Result<(), GameError> {
        if self.n < 3 {
            return Err(GameError::InvalidConfig(format!("n = {} < 3", self.n)));
        }
        self.payoffs()?;
        if let UpdateSpec::SyncProbabilistic { m } = self.update {
            if m <= 0.0 || !m.is_finite() {
                return Err(GameError::InvalidConfig(format!(
                    "probabilistic stiffness m = {m} must be positive"
                )));
            }
        }
        match &self.init {
            GameInit::Random { fraction_c } => {
                if !(0.0..=1.0).contains(fraction_c) {
                    return Err(GameError::InvalidConfig(format!(
                        "fraction_c = {fraction_c} outside [0, 1]"
                    )));
                }
            }
            GameInit::Explicit { strategies } => {
                if strategies.len() != self.n * self.n {
                    return Err(GameError::InvalidConfig(format!(
                        "explicit init holds {} strategies, expected {}",
                        strategies.len(),
                        self.n * self.n
                    )));
                }
            }
            GameInit::SingleDefectorCenter => {}
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn payoff_invariants() {
        assert!(Payoffs::standard(1.9).is_ok());
        assert!(Payoffs::standard(1.0).is_err());
        assert!(Payoffs::with_punishment(1.9, 0.3).is_ok());
        assert!(Payoffs::with_punishment(1.9, 1.0).is_err());
        assert!(Payoffs::with_punishment(1.9, -0.1).is_err());
    }

    #[test]
    fn payoff_table() {
        let p = Payoffs::standard(1.9).unwrap();
        assert_eq!(p.payoff(Strategy::C, Strategy::C), 1.0);
        assert_eq!(p.payoff(Strategy::C, Strategy::D), 0.0);
        assert_eq!(p.payoff(Strategy::D, Strategy::C), 1.9);
        assert_eq!(p.payoff(Strategy::D, Strategy::D), 0.0);
    }

    #[test]
    fn neighborhood_sizes() {
        assert_eq!(Neighborhood::Moore8Self.offsets().len(), 8);
        assert!(Neighborhood::Moore8Self.includes_self());
        assert_eq!(Neighborhood::Moore8.offsets().len(), 8);
        assert!(!Neighborhood::Moore8.includes_self());
        assert_eq!(Neighborhood::VonNeumann4.offsets().len(), 4);
    }
}
