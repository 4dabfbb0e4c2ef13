//! Live human-vs-agent sessions.
//!
//! A round is committed in two steps, move then emotion, and only after both
//! are in does the agent play and the round get revealed. Each revealed round
//! is appended to a JSONL log together with the agent's random cursor, so a
//! session can be rebuilt from its log and continue exactly where it stopped.

use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};

use rand::seq::SliceRandom;
use rust_decimal::Decimal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::agent::{Agent, AgentCondition, AgentDeps};
use crate::expression::{HsfControls, DISPLAY_HOLD_SECONDS};
use crate::game::{bonus, payoff, GameConfig, GameError, GameState, Move, RoundRecord};
use crate::lexicon::EmotionLabel;
use crate::rng::{RngState, SeededRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    AwaitAction,
    AwaitEmotion,
    Revealed,
    Finished,
}

impl Phase {
    /// What the session is waiting for in this phase.
    pub fn expectation(self) -> &'static str {
        match self {
            Phase::AwaitAction => "expected action",
            Phase::AwaitEmotion => "expected emotion",
            Phase::Revealed => "expected advance",
            Phase::Finished => "session finished",
        }
    }
}

#[derive(Debug, Error)]
pub enum SessionError {
    #[error("{}", phase.expectation())]
    WrongPhase { phase: Phase },
    #[error("unknown session {0}")]
    NotFound(String),
    #[error("invalid request: {0}")]
    Validation(String),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("session log i/o failed: {0}")]
    Io(#[from] std::io::Error),
    #[error("corrupt session log {path}: {reason}")]
    CorruptLog { path: String, reason: String },
}

impl SessionError {
    /// Stable machine-readable code for the wire protocol.
    pub fn code(&self) -> &'static str {
        match self {
            SessionError::WrongPhase { .. } => "protocol",
            SessionError::NotFound(_) => "not_found",
            SessionError::Validation(_) => "validation",
            SessionError::Game(_) => "integrity",
            SessionError::Io(_) | SessionError::CorruptLog { .. } => "internal",
        }
    }
}

/// What the client learns when a round is revealed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RevealPayload {
    pub round_index: u32,
    pub player_move: Move,
    pub player_emotion: EmotionLabel,
    pub player_payoff: u32,
    pub agent_payoff: u32,
    pub player_score: u32,
    pub agent_score: u32,
    pub agent_move: Move,
    pub agent_emotion: Option<EmotionLabel>,
    pub agent_utterance: Option<String>,
    pub agent_face: Option<HsfControls>,
    pub display_hold_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ack {
    pub session_id: String,
    pub phase: Phase,
    pub round_index: u32,
    pub rounds_announced: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub rounds_completed: u32,
    pub player_score: u32,
    pub agent_score: u32,
    pub cooperation_count: u32,
    pub bonus: Decimal,
}

/// First line of every session log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionHeader {
    pub session_id: String,
    pub condition: AgentCondition,
    pub config: GameConfig,
    pub created_at: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LogLine {
    Header(SessionHeader),
    Round {
        record: RoundRecord,
        /// Agent cursor after this round was played.
        rng_state: RngState,
    },
}

/// One game in progress; pure state machine, no I/O.
#[derive(Debug, Clone)]
pub struct Session {
    header: SessionHeader,
    state: GameState,
    phase: Phase,
    agent: Agent,
    pending_move: Option<Move>,
}

impl Session {
    pub fn new(id: impl Into<String>, condition: AgentCondition, config: GameConfig) -> Result<Session, SessionError> {
        config.validate()?;
        let agent = Agent::new(condition, config.rng_seed);
        Ok(Session {
            header: SessionHeader {
                session_id: id.into(),
                condition,
                config,
                created_at: chrono::Utc::now().to_rfc3339(),
            },
            state: GameState::new(),
            phase: Phase::AwaitAction,
            agent,
            pending_move: None,
        })
    }

    /// Rebuild from log lines (header first). A session whose last reveal was
    /// never advanced resumes in `AwaitAction`.
    pub fn recover(lines: &[LogLine]) -> Result<Session, SessionError> {
        let corrupt = |reason: &str| SessionError::CorruptLog {
            path: String::new(),
            reason: reason.to_string(),
        };
        let Some((LogLine::Header(header), rounds)) = lines.split_first().map(|(h, r)| (h.clone(), r)) else {
            return Err(corrupt("first line is not a header"));
        };
        let mut state = GameState::new();
        let mut agent = Agent::new(header.condition, header.config.rng_seed);
        for line in rounds {
            let LogLine::Round { record, rng_state } = line else {
                return Err(corrupt("header repeated"));
            };
            state.apply_round(record.clone())?;
            agent = Agent::resume(header.condition, *rng_state);
        }
        let phase = if state.is_finished(&header.config) {
            Phase::Finished
        } else {
            Phase::AwaitAction
        };
        Ok(Session {
            header,
            state,
            phase,
            agent,
            pending_move: None,
        })
    }

    pub fn id(&self) -> &str {
        &self.header.session_id
    }

    pub fn header(&self) -> &SessionHeader {
        &self.header
    }

    pub fn condition(&self) -> AgentCondition {
        self.header.condition
    }

    pub fn config(&self) -> &GameConfig {
        &self.header.config
    }

    pub fn state(&self) -> &GameState {
        &self.state
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn rng_state(&self) -> RngState {
        self.agent.rng_state()
    }

    pub fn ack(&self) -> Ack {
        Ack {
            session_id: self.header.session_id.clone(),
            phase: self.phase,
            round_index: self.state.round_index,
            rounds_announced: self.header.config.rounds_announced,
        }
    }

    fn expect_phase(&self, phase: Phase) -> Result<(), SessionError> {
        if self.phase != phase {
            return Err(SessionError::WrongPhase { phase: self.phase });
        }
        Ok(())
    }

    pub fn submit_action(&mut self, mv: Move) -> Result<Ack, SessionError> {
        self.expect_phase(Phase::AwaitAction)?;
        self.pending_move = Some(mv);
        self.phase = Phase::AwaitEmotion;
        Ok(self.ack())
    }

    /// Commit the player's emotion, let the agent play, and reveal the round.
    pub fn submit_emotion(&mut self, emotion: EmotionLabel, deps: &AgentDeps) -> Result<(RevealPayload, LogLine), SessionError> {
        self.expect_phase(Phase::AwaitEmotion)?;
        let player_move = self.pending_move.expect("move buffered in AwaitEmotion");

        let mut agent = self.agent.clone();
        let out = agent.step(&self.state, (player_move, emotion), deps);
        let (player_payoff, agent_payoff) = payoff(player_move, out.agent_move);
        let record = RoundRecord {
            round_index: self.state.round_index,
            player_move,
            player_emotion: emotion,
            agent_move: out.agent_move,
            agent_emotion: out.emotion,
            agent_utterance: out.utterance,
            agent_face: out.face,
            player_payoff,
            agent_payoff,
        };
        self.state.apply_round(record.clone())?;
        self.agent = agent;
        self.pending_move = None;
        self.phase = Phase::Revealed;

        let payload = RevealPayload {
            round_index: record.round_index,
            player_move,
            player_emotion: emotion,
            player_payoff,
            agent_payoff,
            player_score: self.state.player_score,
            agent_score: self.state.agent_score,
            agent_move: record.agent_move,
            agent_emotion: record.agent_emotion,
            agent_utterance: record.agent_utterance.clone(),
            agent_face: record.agent_face,
            display_hold_seconds: DISPLAY_HOLD_SECONDS,
        };
        let line = LogLine::Round {
            record,
            rng_state: self.agent.rng_state(),
        };
        Ok((payload, line))
    }

    pub fn advance(&mut self) -> Result<Phase, SessionError> {
        self.expect_phase(Phase::Revealed)?;
        self.phase = if self.state.is_finished(&self.header.config) {
            Phase::Finished
        } else {
            Phase::AwaitAction
        };
        Ok(self.phase)
    }

    pub fn summary(&self) -> Summary {
        Summary {
            rounds_completed: self.state.round_index,
            player_score: self.state.player_score,
            agent_score: self.state.agent_score,
            cooperation_count: self.state.player_cooperation_count(),
            bonus: bonus(&self.state, &self.header.config),
        }
    }
}

/// Parse a JSONL session log.
pub fn read_log(path: impl AsRef<Path>) -> Result<Vec<LogLine>, SessionError> {
    let path = path.as_ref();
    let reader = BufReader::new(File::open(path)?);
    let mut lines = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed = serde_json::from_str(&line).map_err(|e| SessionError::CorruptLog {
            path: path.display().to_string(),
            reason: format!("line {}: {e}", i + 1),
        })?;
        lines.push(parsed);
    }
    Ok(lines)
}

fn append_line(path: &Path, line: &LogLine) -> Result<(), SessionError> {
    let mut file = OpenOptions::new().create(true).append(true).open(path)?;
    let mut text = serde_json::to_string(line).expect("log lines serialize");
    text.push('\n');
    file.write_all(text.as_bytes())?;
    file.flush()?;
    Ok(())
}

/// Block-randomized condition assignment: every run of three sessions gets
/// each condition once, in seeded random order.
#[derive(Debug)]
pub struct BalancedAssigner {
    rng: SeededRng,
    block: Vec<AgentCondition>,
}

impl BalancedAssigner {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: SeededRng::new(seed),
            block: Vec::new(),
        }
    }

    pub fn next_condition(&mut self) -> AgentCondition {
        if self.block.is_empty() {
            self.block = AgentCondition::ALL.to_vec();
            self.block.shuffle(&mut self.rng);
        }
        self.block.pop().expect("block refilled")
    }
}

/// All live sessions, with optional JSONL persistence.
pub struct SessionManager {
    deps: Arc<AgentDeps>,
    defaults: GameConfig,
    log_dir: Option<PathBuf>,
    sessions: RwLock<HashMap<String, Arc<Mutex<Session>>>>,
    assigner: Mutex<BalancedAssigner>,
}

impl SessionManager {
    pub fn new(deps: Arc<AgentDeps>, defaults: GameConfig, log_dir: Option<PathBuf>) -> Result<Self, SessionError> {
        defaults.validate()?;
        if let Some(dir) = &log_dir {
            fs::create_dir_all(dir)?;
        }
        Ok(Self {
            deps,
            assigner: Mutex::new(BalancedAssigner::new(defaults.rng_seed)),
            defaults,
            log_dir,
            sessions: RwLock::new(HashMap::new()),
        })
    }

    pub fn deps(&self) -> &AgentDeps {
        &self.deps
    }

    pub fn defaults(&self) -> &GameConfig {
        &self.defaults
    }

    /// Log file for a session: `<log_dir>/<session_id>.jsonl`.
    pub fn log_path(&self, session_id: &str) -> Option<PathBuf> {
        self.log_dir.as_ref().map(|d| d.join(format!("{session_id}.jsonl")))
    }

    /// Load every `*.jsonl` log in the log directory; returns how many were restored.
    pub fn recover_all(&self) -> Result<usize, SessionError> {
        let Some(dir) = &self.log_dir else {
            return Ok(0);
        };
        let mut restored = 0;
        for entry in fs::read_dir(dir)? {
            let path = entry?.path();
            if path.extension().and_then(|e| e.to_str()) != Some("jsonl") {
                continue;
            }
            let session = Session::recover(&read_log(&path)?).map_err(|e| match e {
                SessionError::CorruptLog { reason, .. } => SessionError::CorruptLog {
                    path: path.display().to_string(),
                    reason,
                },
                other => other,
            })?;
            self.sessions
                .write()
                .expect("session map lock")
                .insert(session.id().to_string(), Arc::new(Mutex::new(session)));
            restored += 1;
        }
        Ok(restored)
    }

    /// Start a session. `condition` of `None` uses balanced random assignment.
    pub fn create_session(&self, condition: Option<AgentCondition>, seed: Option<u64>) -> Result<Ack, SessionError> {
        let condition =
            condition.unwrap_or_else(|| self.assigner.lock().expect("assigner lock").next_condition());
        let config = GameConfig {
            rng_seed: seed.unwrap_or_else(rand::random),
            ..self.defaults.clone()
        };
        let id = uuid::Uuid::new_v4().simple().to_string();
        let session = Session::new(id.clone(), condition, config)?;
        if let Some(path) = self.log_path(&id) {
            append_line(&path, &LogLine::Header(session.header().clone()))?;
        }
        let ack = session.ack();
        self.sessions
            .write()
            .expect("session map lock")
            .insert(id, Arc::new(Mutex::new(session)));
        Ok(ack)
    }

    fn get(&self, session_id: &str) -> Result<Arc<Mutex<Session>>, SessionError> {
        self.sessions
            .read()
            .expect("session map lock")
            .get(session_id)
            .cloned()
            .ok_or_else(|| SessionError::NotFound(session_id.to_string()))
    }

    fn with_session<T>(&self, session_id: &str, f: impl FnOnce(&mut Session) -> Result<T, SessionError>) -> Result<T, SessionError> {
        let handle = self.get(session_id)?;
        let mut session = handle.lock().expect("session lock");
        f(&mut session)
    }

    pub fn submit_action(&self, session_id: &str, mv: Move) -> Result<Ack, SessionError> {
        self.with_session(session_id, |s| s.submit_action(mv))
    }

    pub fn submit_emotion(&self, session_id: &str, emotion: &str) -> Result<RevealPayload, SessionError> {
        let emotion: EmotionLabel = emotion
            .parse()
            .map_err(|e: crate::lexicon::UnknownLabel| SessionError::Validation(e.to_string()))?;
        let log_path = self.log_path(session_id);
        self.with_session(session_id, |s| {
            let mut next = s.clone();
            let (payload, line) = next.submit_emotion(emotion, &self.deps)?;
            if let Some(path) = &log_path {
                append_line(path, &line)?;
            }
            *s = next;
            Ok(payload)
        })
    }

    pub fn advance(&self, session_id: &str) -> Result<Ack, SessionError> {
        self.with_session(session_id, |s| {
            s.advance()?;
            Ok(s.ack())
        })
    }

    pub fn summary(&self, session_id: &str) -> Result<Summary, SessionError> {
        self.with_session(session_id, |s| Ok(s.summary()))
    }

    /// Snapshot of one session.
    pub fn snapshot(&self, session_id: &str) -> Result<Session, SessionError> {
        self.with_session(session_id, |s| Ok(s.clone()))
    }

    pub fn session_count(&self) -> usize {
        self.sessions.read().expect("session map lock").len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn manager() -> SessionManager {
        SessionManager::new(AgentDeps::bundled().shared(), GameConfig::default(), None).unwrap()
    }

    #[test]
    fn fresh_session() {
        let m = manager();
        let ack = m.create_session(Some(AgentCondition::Occ), Some(1)).unwrap();
        assert_eq!(ack.phase, Phase::AwaitAction);
        assert_eq!(ack.round_index, 0);
        assert_eq!(ack.rounds_announced, 30);
    }

    #[test]
    fn phase_guards() {
        let m = manager();
        let id = m.create_session(Some(AgentCondition::Occ), Some(1)).unwrap().session_id;
        assert!(matches!(
            m.submit_emotion(&id, "joy"),
            Err(SessionError::WrongPhase { phase: Phase::AwaitAction })
        ));
        assert!(m.advance(&id).is_err());
        m.submit_action(&id, Move::Give2).unwrap();
        let err = m.submit_action(&id, Move::Give2).unwrap_err();
        assert_eq!(err.to_string(), "expected emotion");
        assert!(matches!(m.submit_emotion(&id, "love"), Err(SessionError::Validation(_))));
        let reveal = m.submit_emotion(&id, "joy").unwrap();
        assert_eq!(reveal.agent_move, Move::Give2);
        assert_eq!((reveal.player_payoff, reveal.agent_payoff), (2, 2));
        assert_eq!(reveal.display_hold_seconds, 10.5);
        assert_eq!(m.advance(&id).unwrap().phase, Phase::AwaitAction);
    }

    #[test]
    fn unknown_session() {
        let m = manager();
        assert!(matches!(m.submit_action("nope", Move::Give2), Err(SessionError::NotFound(_))));
        assert!(matches!(m.summary("nope"), Err(SessionError::NotFound(_))));
    }

    #[test]
    fn finishes_after_configured_rounds() {
        let m = manager();
        let id = m.create_session(Some(AgentCondition::Emotionless), Some(2)).unwrap().session_id;
        for round in 0..25 {
            m.submit_action(&id, Move::Take1).unwrap();
            m.submit_emotion(&id, "anger").unwrap();
            let phase = m.advance(&id).unwrap().phase;
            assert_eq!(phase == Phase::Finished, round == 24);
        }
        assert!(m.advance(&id).is_err());
        assert!(m.submit_action(&id, Move::Give2).is_err());
        let s = m.summary(&id).unwrap();
        assert_eq!((s.cooperation_count, s.player_score, s.agent_score), (0, 29, 23));
    }

    #[test]
    fn balanced_assignment() {
        let mut a = BalancedAssigner::new(9);
        for _ in 0..4 {
            let mut block: Vec<_> = (0..3).map(|_| a.next_condition()).collect();
            block.sort_by_key(|c| c.as_str());
            assert_eq!(block, [AgentCondition::Emotionless, AgentCondition::Occ, AgentCondition::Random]);
        }
    }
}
