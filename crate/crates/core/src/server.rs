//! HTTP/WebSocket transport for the session service.
//!
//! `GET /ws` upgrades to a WebSocket where every text frame carries one
//! envelope and is answered with exactly one envelope. `POST /api/message`
//! accepts the same envelope as a plain request/response. `GET /api/lexicon`
//! lists the emotion labels with their emoji for the client's picker.

use std::net::SocketAddr;
use std::sync::Arc;

use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::State;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Serialize;

use crate::protocol::{self, Envelope};
use crate::session::SessionManager;

#[derive(Serialize)]
struct PickerEntry {
    label: &'static str,
    emoji: String,
}

pub fn router(manager: Arc<SessionManager>) -> Router {
    Router::new()
        .route("/health", get(|| async { "ok" }))
        .route("/api/message", post(message))
        .route("/api/lexicon", get(lexicon))
        .route("/ws", get(websocket))
        .with_state(manager)
}

async fn message(State(manager): State<Arc<SessionManager>>, Json(env): Json<Envelope>) -> Json<Envelope> {
    let reply = tokio::task::spawn_blocking(move || protocol::handle(&manager, env))
        .await
        .expect("handler task panicked");
    Json(reply)
}

async fn lexicon(State(manager): State<Arc<SessionManager>>) -> Json<Vec<PickerEntry>> {
    let entries = manager
        .deps()
        .lexicon
        .entries()
        .iter()
        .map(|e| PickerEntry {
            label: e.label.as_str(),
            emoji: e.emoji.clone(),
        })
        .collect();
    Json(entries)
}

async fn websocket(State(manager): State<Arc<SessionManager>>, ws: WebSocketUpgrade) -> Response {
    ws.on_upgrade(move |socket| serve_socket(socket, manager)).into_response()
}

async fn serve_socket(mut socket: WebSocket, manager: Arc<SessionManager>) {
    while let Some(Ok(msg)) = socket.recv().await {
        let text = match msg {
            Message::Text(t) => t.to_string(),
            Message::Binary(b) => match String::from_utf8(b.to_vec()) {
                Ok(t) => t,
                Err(_) => {
                    let err = Envelope::error(None, 0, "validation", "binary frames must be UTF-8 JSON");
                    let reply = serde_json::to_string(&err).expect("envelopes serialize");
                    if socket.send(Message::Text(reply.into())).await.is_err() {
                        break;
                    }
                    continue;
                }
            },
            Message::Close(_) => break,
            Message::Ping(_) | Message::Pong(_) => continue,
        };
        let m = manager.clone();
        let reply = tokio::task::spawn_blocking(move || protocol::handle_text(&m, &text))
            .await
            .expect("handler task panicked");
        if socket.send(Message::Text(reply.into())).await.is_err() {
            break;
        }
    }
}

pub async fn serve(addr: SocketAddr, manager: Arc<SessionManager>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!(%addr, "session service listening");
    axum::serve(listener, router(manager))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
