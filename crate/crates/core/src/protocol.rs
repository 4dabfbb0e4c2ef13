//! JSON wire protocol spoken between the game client and the session service.
//!
//! Every message is an envelope `{type, session_id, payload, seq}`. Clients
//! send `create_session`, `submit_action`, `submit_emotion`, `advance` and
//! `get_summary`; the service answers with `ack`, `reveal`, `summary` or
//! `error`, echoing the request's `seq`.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::agent::AgentCondition;
use crate::game::Move;
use crate::session::{SessionError, SessionManager};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub session_id: Option<String>,
    #[serde(default)]
    pub payload: Value,
    #[serde(default)]
    pub seq: u64,
}

impl Envelope {
    pub fn new(kind: &str, session_id: Option<String>, payload: Value, seq: u64) -> Self {
        Self {
            kind: kind.to_string(),
            session_id,
            payload,
            seq,
        }
    }

    pub fn error(session_id: Option<String>, seq: u64, code: &str, message: impl Into<String>) -> Self {
        Self::new(
            "error",
            session_id,
            json!({ "code": code, "message": message.into() }),
            seq,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
struct CreatePayload {
    #[serde(default)]
    condition: Option<AgentCondition>,
    #[serde(default)]
    seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
struct ActionPayload {
    #[serde(rename = "move")]
    player_move: Move,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
struct EmotionPayload {
    emotion: String,
}

/// Client requests, decoded from an envelope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClientMessage {
    CreateSession {
        condition: Option<AgentCondition>,
        seed: Option<u64>,
    },
    SubmitAction(Move),
    SubmitEmotion(String),
    Advance,
    GetSummary,
}

impl ClientMessage {
    pub fn decode(env: &Envelope) -> Result<ClientMessage, String> {
        let payload = if env.payload.is_null() {
            json!({})
        } else {
            env.payload.clone()
        };
        let bad = |e: serde_json::Error| format!("bad {} payload: {e}", env.kind);
        Ok(match env.kind.as_str() {
            "create_session" => {
                let p: CreatePayload = serde_json::from_value(payload).map_err(bad)?;
                ClientMessage::CreateSession {
                    condition: p.condition,
                    seed: p.seed,
                }
            }
            "submit_action" => {
                let p: ActionPayload = serde_json::from_value(payload).map_err(bad)?;
                ClientMessage::SubmitAction(p.player_move)
            }
            "submit_emotion" => {
                let p: EmotionPayload = serde_json::from_value(payload).map_err(bad)?;
                ClientMessage::SubmitEmotion(p.emotion)
            }
            "advance" => ClientMessage::Advance,
            "get_summary" => ClientMessage::GetSummary,
            other => return Err(format!("unknown message type {other:?}")),
        })
    }
}

/// Process one client envelope and produce the reply envelope.
pub fn handle(manager: &SessionManager, env: Envelope) -> Envelope {
    let seq = env.seq;
    let message = match ClientMessage::decode(&env) {
        Ok(m) => m,
        Err(msg) => return Envelope::error(env.session_id, seq, "validation", msg),
    };

    let session_id = || {
        env.session_id
            .clone()
            .ok_or_else(|| SessionError::Validation("session_id is required".into()))
    };
    let to_value = |v: Result<Value, serde_json::Error>| v.expect("reply payloads serialize");

    let result: Result<(&str, String, Value), SessionError> = (|| match message {
        ClientMessage::CreateSession { condition, seed } => {
            let ack = manager.create_session(condition, seed)?;
            Ok(("ack", ack.session_id.clone(), to_value(serde_json::to_value(&ack))))
        }
        ClientMessage::SubmitAction(mv) => {
            let id = session_id()?;
            let ack = manager.submit_action(&id, mv)?;
            Ok(("ack", id, to_value(serde_json::to_value(&ack))))
        }
        ClientMessage::SubmitEmotion(emotion) => {
            let id = session_id()?;
            let reveal = manager.submit_emotion(&id, &emotion)?;
            Ok(("reveal", id, to_value(serde_json::to_value(&reveal))))
        }
        ClientMessage::Advance => {
            let id = session_id()?;
            let ack = manager.advance(&id)?;
            Ok(("ack", id, to_value(serde_json::to_value(&ack))))
        }
        ClientMessage::GetSummary => {
            let id = session_id()?;
            let summary = manager.summary(&id)?;
            Ok(("summary", id, to_value(serde_json::to_value(&summary))))
        }
    })();

    match result {
        Ok((kind, id, payload)) => Envelope::new(kind, Some(id), payload, seq),
        Err(e) => {
            if matches!(e, SessionError::Io(_) | SessionError::CorruptLog { .. }) {
                tracing::error!(error = %e, "session storage failure");
            }
            Envelope::error(env.session_id, seq, e.code(), e.to_string())
        }
    }
}

/// Text-level entry point: parse, handle, serialize.
pub fn handle_text(manager: &SessionManager, text: &str) -> String {
    let reply = match serde_json::from_str::<Envelope>(text) {
        Ok(env) => handle(manager, env),
        Err(e) => Envelope::error(None, 0, "validation", format!("malformed envelope: {e}")),
    };
    serde_json::to_string(&reply).expect("envelopes serialize")
}
