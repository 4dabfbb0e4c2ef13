//! The three opponents: appraisal-driven, emotionless, and random-emotion.
//!
//! All three pick their move from history that excludes the round being
//! played, so the player's pending choice never leaks into the agent's move.
//! The displayed emotion, by contrast, reacts to the round just revealed.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::appraisal::{appraise, initial_appraisal, select_display, AppraisalContext};
use crate::coping::{cope, tf2t, CopingContext, CopingStrategy};
use crate::expression::{face_controls_for, HsfControls};
use crate::game::{GameState, Move};
use crate::lexicon::{EmotionLabel, Lexicon, LexiconError};
use crate::rng::{RngState, SeededRng};
use crate::utterance::{EmbeddingTable, PhraseBank, StopwordSet, UtteranceError, UtteranceSelector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AgentCondition {
    Occ,
    Emotionless,
    Random,
}

impl AgentCondition {
    pub const ALL: [AgentCondition; 3] = [AgentCondition::Occ, AgentCondition::Emotionless, AgentCondition::Random];

    pub fn as_str(self) -> &'static str {
        match self {
            AgentCondition::Occ => "occ",
            AgentCondition::Emotionless => "emotionless",
            AgentCondition::Random => "random",
        }
    }
}

impl fmt::Display for AgentCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown condition {0:?} (expected occ, emotionless or random)")]
pub struct UnknownCondition(pub String);

impl FromStr for AgentCondition {
    type Err = UnknownCondition;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AgentCondition::ALL
            .into_iter()
            .find(|c| c.as_str() == s.to_ascii_lowercase())
            .ok_or_else(|| UnknownCondition(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentOutput {
    #[serde(rename = "move")]
    pub agent_move: Move,
    pub emotion: Option<EmotionLabel>,
    pub utterance: Option<String>,
    pub face: Option<HsfControls>,
    /// Coping strategy behind the move, when the agent reasons about one.
    pub strategy: Option<CopingStrategy>,
}

#[derive(Debug, Error)]
pub enum DataError {
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    Utterance(#[from] UtteranceError),
}

/// Read-only data every agent needs.
#[derive(Debug, Clone)]
pub struct AgentDeps {
    pub lexicon: Lexicon,
    pub utterances: UtteranceSelector,
}

impl AgentDeps {
    pub fn bundled() -> Self {
        Self {
            lexicon: Lexicon::bundled(),
            utterances: UtteranceSelector::bundled(),
        }
    }

    /// Load `lexicon.csv`, `phrases.json`, `embeddings.txt` and `stopwords.txt` from `dir`.
    pub fn from_dir(dir: impl AsRef<Path>) -> Result<Self, DataError> {
        let dir = dir.as_ref();
        Ok(Self {
            lexicon: Lexicon::from_path(dir.join("lexicon.csv"))?,
            utterances: UtteranceSelector::new(
                PhraseBank::from_path(dir.join("phrases.json"))?,
                EmbeddingTable::from_path(dir.join("embeddings.txt"))?,
                StopwordSet::from_path(dir.join("stopwords.txt"))?,
            ),
        })
    }

    pub fn shared(self) -> Arc<Self> {
        Arc::new(self)
    }
}

/// One opponent instance: its condition plus the random cursor it owns.
#[derive(Debug, Clone)]
pub struct Agent {
    condition: AgentCondition,
    rng: SeededRng,
}

impl Agent {
    pub fn new(condition: AgentCondition, seed: u64) -> Self {
        Self {
            condition,
            rng: SeededRng::new(seed),
        }
    }

    pub fn resume(condition: AgentCondition, state: RngState) -> Self {
        Self {
            condition,
            rng: SeededRng::from_state(state),
        }
    }

    pub fn condition(&self) -> AgentCondition {
        self.condition
    }

    pub fn rng_state(&self) -> RngState {
        self.rng.state()
    }

    /// Move for the next round, from completed rounds only.
    pub fn decide_move(&self, state: &GameState, lex: &Lexicon) -> (Move, Option<CopingStrategy>) {
        match self.condition {
            AgentCondition::Occ => {
                let (mv, strategy) = cope(&CopingContext::from_history(&state.history), lex);
                (mv, Some(strategy))
            }
            AgentCondition::Emotionless | AgentCondition::Random => {
                let moves: Vec<Move> = state.player_moves().collect();
                (tf2t(&moves), None)
            }
        }
    }

    /// Play the round in progress: `pending` is the player's committed move and emotion.
    pub fn step(&mut self, state: &GameState, pending: (Move, EmotionLabel), deps: &AgentDeps) -> AgentOutput {
        let lex = &deps.lexicon;
        let (agent_move, strategy) = self.decide_move(state, lex);
        let (player_move, player_emotion) = pending;

        let emotion = match self.condition {
            AgentCondition::Emotionless => None,
            AgentCondition::Occ => {
                let set = if state.history.is_empty() {
                    initial_appraisal()
                } else {
                    appraise(
                        &AppraisalContext {
                            prev_player_move: state.last_round().map(|r| r.player_move),
                            agent_move,
                            player_move,
                            player_emotion,
                        },
                        lex,
                    )
                };
                Some(select_display(&set, &mut self.rng).expect("appraisal sets are never empty"))
            }
            AgentCondition::Random => {
                Some(EmotionLabel::ALL[self.rng.random_range(0..EmotionLabel::COUNT)])
            }
        };

        if let Some(strategy) = strategy {
            tracing::debug!(round = state.round_index, %strategy, %agent_move, "coping");
        }

        AgentOutput {
            agent_move,
            emotion,
            utterance: emotion.map(|e| deps.utterances.select(e, agent_move, player_move, lex).to_string()),
            face: emotion.map(|e| face_controls_for(e, lex)),
            strategy,
        }
    }
}
