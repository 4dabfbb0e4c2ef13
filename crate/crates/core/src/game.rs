//! Give-2/take-1 prisoner's dilemma: payoffs, scores and the round lifecycle.

use std::fmt;
use std::str::FromStr;

use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expression::HsfControls;
use crate::lexicon::EmotionLabel;

/// A round action: hand the opponent two coins, or take one for yourself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Move {
    #[serde(rename = "give2")]
    Give2,
    #[serde(rename = "take1")]
    Take1,
}

impl Move {
    pub const ALL: [Move; 2] = [Move::Give2, Move::Take1];

    pub fn as_str(self) -> &'static str {
        match self {
            Move::Give2 => "give2",
            Move::Take1 => "take1",
        }
    }

    pub fn is_cooperation(self) -> bool {
        self == Move::Give2
    }

    pub fn opposite(self) -> Move {
        match self {
            Move::Give2 => Move::Take1,
            Move::Take1 => Move::Give2,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown move: {0:?} (expected give2 or take1)")]
pub struct UnknownMove(pub String);

impl FromStr for Move {
    type Err = UnknownMove;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "give2" => Ok(Move::Give2),
            "take1" => Ok(Move::Take1),
            _ => Err(UnknownMove(s.to_string())),
        }
    }
}

/// Coins each side earns in one round: what you took plus what you were given.
pub fn payoff(a: Move, b: Move) -> (u32, u32) {
    let take = |m: Move| u32::from(m == Move::Take1);
    let gift = |m: Move| if m == Move::Give2 { 2 } else { 0 };
    (take(a) + gift(b), take(b) + gift(a))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameConfig {
    pub rounds_played: u32,
    /// Round cap shown to the player; the engine always stops at `rounds_played`.
    pub rounds_announced: u32,
    pub bonus_per_point: Decimal,
    pub rng_seed: u64,
}

impl Default for GameConfig {
    fn default() -> Self {
        Self {
            rounds_played: 25,
            rounds_announced: 30,
            bonus_per_point: Decimal::new(5, 2),
            rng_seed: 0,
        }
    }
}

impl GameConfig {
    pub fn validate(&self) -> Result<(), GameError> {
        if self.rounds_played == 0 {
            return Err(GameError::InvalidConfig("rounds_played must be positive".into()));
        }
        if self.rounds_announced < self.rounds_played {
            return Err(GameError::InvalidConfig(format!(
                "rounds_announced ({}) is below rounds_played ({})",
                self.rounds_announced, self.rounds_played
            )));
        }
        if self.bonus_per_point.is_sign_negative() {
            return Err(GameError::InvalidConfig("bonus_per_point is negative".into()));
        }
        Ok(())
    }
}

/// Complete outcome of one revealed round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round_index: u32,
    pub player_move: Move,
    pub player_emotion: EmotionLabel,
    pub agent_move: Move,
    pub agent_emotion: Option<EmotionLabel>,
    pub agent_utterance: Option<String>,
    pub agent_face: Option<HsfControls>,
    pub player_payoff: u32,
    pub agent_payoff: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("round index mismatch: state expects {expected}, record has {found}")]
    IndexMismatch { expected: u32, found: u32 },
    #[error("payoff mismatch in round {round}: expected {expected:?}, record has {found:?}")]
    PayoffMismatch {
        round: u32,
        expected: (u32, u32),
        found: (u32, u32),
    },
    #[error("invalid game config: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GameState {
    pub round_index: u32,
    pub player_score: u32,
    pub agent_score: u32,
    pub history: Vec<RoundRecord>,
}

impl GameState {
    pub fn new() -> Self {
        Self::default()
    }

    /// Append a round. The state is left untouched when the record is rejected.
    pub fn apply_round(&mut self, record: RoundRecord) -> Result<(), GameError> {
        if record.round_index != self.round_index {
            return Err(GameError::IndexMismatch {
                expected: self.round_index,
                found: record.round_index,
            });
        }
        let expected = payoff(record.player_move, record.agent_move);
        let found = (record.player_payoff, record.agent_payoff);
        if expected != found {
            return Err(GameError::PayoffMismatch {
                round: record.round_index,
                expected,
                found,
            });
        }
        self.player_score += record.player_payoff;
        self.agent_score += record.agent_payoff;
        self.round_index += 1;
        self.history.push(record);
        Ok(())
    }

    /// Rebuild a state from a sequence of records.
    pub fn replay<I: IntoIterator<Item = RoundRecord>>(records: I) -> Result<GameState, GameError> {
        let mut state = GameState::new();
        for record in records {
            state.apply_round(record)?;
        }
        Ok(state)
    }

    pub fn player_moves(&self) -> impl Iterator<Item = Move> + '_ {
        self.history.iter().map(|r| r.player_move)
    }

    pub fn last_round(&self) -> Option<&RoundRecord> {
        self.history.last()
    }

    pub fn player_cooperation_count(&self) -> u32 {
        self.history.iter().filter(|r| r.player_move.is_cooperation()).count() as u32
    }

    pub fn is_finished(&self, cfg: &GameConfig) -> bool {
        is_finished(self, cfg)
    }
}

pub fn is_finished(state: &GameState, cfg: &GameConfig) -> bool {
    state.round_index >= cfg.rounds_played
}

/// Player's earnings: score times the per-point rate, exact, shown with at
/// least two decimal places.
pub fn bonus(state: &GameState, cfg: &GameConfig) -> Decimal {
    let mut amount = Decimal::from(state.player_score) * cfg.bonus_per_point;
    amount.rescale(cfg.bonus_per_point.scale().max(2));
    amount
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::str::FromStr;

    fn record(round_index: u32, player: Move, agent: Move) -> RoundRecord {
        let (player_payoff, agent_payoff) = payoff(player, agent);
        RoundRecord {
            round_index,
            player_move: player,
            player_emotion: EmotionLabel::Joy,
            agent_move: agent,
            agent_emotion: None,
            agent_utterance: None,
            agent_face: None,
            player_payoff,
            agent_payoff,
        }
    }

    #[test]
    fn payoff_matrix() {
        assert_eq!(payoff(Move::Give2, Move::Give2), (2, 2));
        assert_eq!(payoff(Move::Take1, Move::Take1), (1, 1));
        assert_eq!(payoff(Move::Give2, Move::Take1), (0, 3));
        assert_eq!(payoff(Move::Take1, Move::Give2), (3, 0));
    }

    #[test]
    fn dilemma_ordering() {
        let (t, _) = payoff(Move::Take1, Move::Give2);
        let (r, _) = payoff(Move::Give2, Move::Give2);
        let (p, _) = payoff(Move::Take1, Move::Take1);
        let (s, _) = payoff(Move::Give2, Move::Take1);
        assert_eq!((t, r, p, s), (3, 2, 1, 0));
        assert!(t > r && r > p && p > s);
        assert!(2 * r > t + s);
    }

    #[test]
    fn apply_mutual_give() {
        let mut state = GameState::new();
        state.apply_round(record(0, Move::Give2, Move::Give2)).unwrap();
        assert_eq!((state.player_score, state.agent_score), (2, 2));
        assert_eq!(state.round_index, 1);
    }

    #[test]
    fn finishing_round() {
        let cfg = GameConfig::default();
        let mut state = GameState::new();
        assert!(!state.is_finished(&cfg));
        for i in 0..24 {
            state.apply_round(record(i, Move::Give2, Move::Give2)).unwrap();
        }
        assert!(!state.is_finished(&cfg));
        state.apply_round(record(24, Move::Give2, Move::Give2)).unwrap();
        assert!(state.is_finished(&cfg));
        assert_eq!(state.round_index, 25);
    }

    #[test]
    fn wrong_payoff_rejected_without_mutation() {
        let mut state = GameState::new();
        let mut bad = record(0, Move::Give2, Move::Take1);
        bad.player_payoff = 2;
        let before = state.clone();
        assert!(matches!(
            state.apply_round(bad),
            Err(GameError::PayoffMismatch { .. })
        ));
        assert_eq!(state, before);
        assert!(matches!(
            state.apply_round(record(3, Move::Give2, Move::Give2)),
            Err(GameError::IndexMismatch { expected: 0, found: 3 })
        ));
    }

    #[test]
    fn bonus_is_exact() {
        let cfg = GameConfig::default();
        let mut state = GameState::new();
        assert_eq!(bonus(&state, &cfg).to_string(), "0.00");
        state.player_score = 1;
        assert_eq!(bonus(&state, &cfg), Decimal::from_str("0.05").unwrap());
        state.player_score = 50;
        assert_eq!(bonus(&state, &cfg).to_string(), "2.50");
    }

    #[test]
    fn config_validation() {
        assert!(GameConfig::default().validate().is_ok());
        let cfg = GameConfig {
            rounds_announced: 10,
            ..GameConfig::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = GameConfig {
            bonus_per_point: Decimal::new(-1, 2),
            ..GameConfig::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn move_wire_spelling() {
        assert_eq!(serde_json::to_string(&Move::Give2).unwrap(), "\"give2\"");
        assert_eq!("take1".parse::<Move>().unwrap(), Move::Take1);
        assert!("give".parse::<Move>().is_err());
    }
}
