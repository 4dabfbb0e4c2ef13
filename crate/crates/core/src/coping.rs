//! Coping: choosing the agent's next move from the player's recent behaviour.
//!
//! The rule table is keyed on the player's last two moves and the emotion the
//! player showed with the last one. Its move column never depends on the
//! emotion, so the resulting move stream coincides with tit-for-two-tats; the
//! emotion only selects which named strategy is reported.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::appraisal::{classify_context, EmotionClass};
use crate::game::{Move, RoundRecord};
use crate::lexicon::{EmotionLabel, Lexicon};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CopingStrategy {
    /// Live with a bad outcome.
    Acceptance,
    /// Positive reinterpretation.
    Growth,
    /// Positive reinterpretation while discounting the shown emotion.
    GrowthDenial,
    /// Hold back negative feelings, keep trying.
    Restraint,
    /// Deny reality, continue to believe.
    Denial,
    /// Look for understanding and sympathy.
    SeekSupport,
}

impl fmt::Display for CopingStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            CopingStrategy::Acceptance => "acceptance",
            CopingStrategy::Growth => "growth",
            CopingStrategy::GrowthDenial => "growth+denial",
            CopingStrategy::Restraint => "restraint",
            CopingStrategy::Denial => "denial",
            CopingStrategy::SeekSupport => "seek-support",
        };
        f.write_str(name)
    }
}

/// The player's two most recent moves, with the emotion shown alongside the last.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CopingContext {
    pub player_move_t2: Option<Move>,
    pub last: Option<(Move, EmotionLabel)>,
}

impl CopingContext {
    pub fn new(player_move_t2: Option<Move>, last: Option<(Move, EmotionLabel)>) -> Self {
        Self {
            player_move_t2,
            last,
        }
    }

    pub fn from_history(history: &[RoundRecord]) -> Self {
        let n = history.len();
        Self {
            player_move_t2: n.checked_sub(2).map(|i| history[i].player_move),
            last: history.last().map(|r| (r.player_move, r.player_emotion)),
        }
    }

    /// Context after `moves`/`emotions`, which must have equal length.
    pub fn from_sequences(moves: &[Move], emotions: &[EmotionLabel]) -> Self {
        debug_assert_eq!(moves.len(), emotions.len());
        let n = moves.len();
        Self {
            player_move_t2: n.checked_sub(2).map(|i| moves[i]),
            last: n.checked_sub(1).map(|i| (moves[i], emotions[i])),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CopingRule {
    pub t2: Move,
    pub t1: Move,
    pub class: EmotionClass,
    pub strategy: CopingStrategy,
    pub next_move: Move,
}

pub const COPING_TABLE: [CopingRule; 6] = [
    CopingRule {
        t2: Move::Take1,
        t1: Move::Take1,
        class: EmotionClass::Any,
        strategy: CopingStrategy::Acceptance,
        next_move: Move::Take1,
    },
    CopingRule {
        t2: Move::Take1,
        t1: Move::Give2,
        class: EmotionClass::Positive,
        strategy: CopingStrategy::Growth,
        next_move: Move::Give2,
    },
    CopingRule {
        t2: Move::Take1,
        t1: Move::Give2,
        class: EmotionClass::Negative,
        strategy: CopingStrategy::GrowthDenial,
        next_move: Move::Give2,
    },
    CopingRule {
        t2: Move::Give2,
        t1: Move::Take1,
        class: EmotionClass::Regret,
        strategy: CopingStrategy::Restraint,
        next_move: Move::Give2,
    },
    CopingRule {
        t2: Move::Give2,
        t1: Move::Take1,
        class: EmotionClass::NoRegret,
        strategy: CopingStrategy::Denial,
        next_move: Move::Give2,
    },
    CopingRule {
        t2: Move::Give2,
        t1: Move::Give2,
        class: EmotionClass::Any,
        strategy: CopingStrategy::SeekSupport,
        next_move: Move::Give2,
    },
];

/// Next agent move and the strategy that produced it.
///
/// With no history the agent's initial hope leads to seeking support and a
/// cooperative opening. A missing move two rounds back reads as a give.
pub fn cope(ctx: &CopingContext, lex: &Lexicon) -> (Move, CopingStrategy) {
    let Some((t1, emotion)) = ctx.last else {
        return (Move::Give2, CopingStrategy::SeekSupport);
    };
    let t2 = ctx.player_move_t2.unwrap_or(Move::Give2);
    let class = classify_context(t1, emotion, lex);
    let rule = COPING_TABLE
        .iter()
        .find(|r| r.t2 == t2 && r.t1 == t1 && r.class.admits(class))
        .expect("coping table covers every move/class combination");
    (rule.next_move, rule.strategy)
}

/// Tit-for-two-tats: defect only after two consecutive defections.
pub fn tf2t(player_history: &[Move]) -> Move {
    match player_history {
        [.., Move::Take1, Move::Take1] => Move::Take1,
        _ => Move::Give2,
    }
}
