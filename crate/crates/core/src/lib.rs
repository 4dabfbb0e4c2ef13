//! Aria: an appraisal-driven affective opponent for the give-2/take-1
//! iterated prisoner's dilemma.
//!
//! The agent appraises each revealed round into a set of emotions, shows one
//! of them as a face and a short utterance, and picks its next move through a
//! coping policy. Sessions run behind a small JSON protocol and are logged so
//! they can be recovered or replayed through the simulator.

pub mod agent;
pub mod appraisal;
pub mod coping;
pub mod expression;
pub mod game;
pub mod lexicon;
pub mod protocol;
pub mod rng;
pub mod server;
pub mod session;
pub mod sim;
pub mod utterance;

pub use agent::{Agent, AgentCondition, AgentDeps, AgentOutput};
pub use appraisal::{appraise, AppraisalContext, AppraisalSet, AppraisedEmotion, Category, EmotionClass};
pub use coping::{cope, tf2t, CopingContext, CopingStrategy};
pub use expression::{epa_to_hsf, intensity_at, DisplayEnvelope, HsfControls};
pub use game::{payoff, GameConfig, GameState, Move, RoundRecord};
pub use lexicon::{EmotionLabel, EpaVector, Lexicon, Valence};
pub use rng::{RngState, SeededRng};
pub use session::{Phase, Session, SessionError, SessionManager};
pub use utterance::UtteranceSelector;
