use std::fs;
use std::sync::Arc;
use std::thread;

use aria_core::agent::{AgentCondition, AgentDeps};
use aria_core::game::{GameConfig, Move};
use aria_core::lexicon::EmotionLabel;
use aria_core::session::{read_log, LogLine, Phase, Session, SessionError, SessionManager};
use aria_core::sim::replay_log;

fn manager(dir: &std::path::Path) -> SessionManager {
    SessionManager::new(AgentDeps::bundled().shared(), GameConfig::default(), Some(dir.to_path_buf())).unwrap()
}

fn script(round: usize) -> (Move, &'static str) {
    const LABELS: [&str; 5] = ["joy", "anger", "remorse", "fear", "gratitude"];
    let mv = if round % 3 == 1 || round % 5 == 4 { Move::Take1 } else { Move::Give2 };
    (mv, LABELS[round % LABELS.len()])
}

fn play(m: &SessionManager, id: &str, rounds: std::ops::Range<usize>) -> Vec<String> {
    rounds
        .map(|r| {
            let (mv, emotion) = script(r);
            m.submit_action(id, mv).unwrap();
            let reveal = m.submit_emotion(id, emotion).unwrap();
            m.advance(id).unwrap();
            serde_json::to_string(&reveal).unwrap()
        })
        .collect()
}

#[test]
fn last_log_line_matches_applied_round() {
    let dir = tempfile::tempdir().unwrap();
    let m = manager(dir.path());
    let id = m.create_session(Some(AgentCondition::Occ), Some(3)).unwrap().session_id;
    for r in 0..6 {
        play(&m, &id, r..r + 1);
        let lines = read_log(m.log_path(&id).unwrap()).unwrap();
        assert_eq!(lines.len(), r + 2);
        let LogLine::Round { record, rng_state } = lines.last().unwrap() else {
            panic!("expected round line");
        };
        let snap = m.snapshot(&id).unwrap();
        assert_eq!(record, snap.state().history.last().unwrap());
        assert_eq!(*rng_state, snap.rng_state());
    }
    let text = fs::read_to_string(m.log_path(&id).unwrap()).unwrap();
    assert!(text.lines().next().unwrap().starts_with("{\"kind\":\"header\""));
}

#[test]
fn recovery_continues_identically() {
    for condition in AgentCondition::ALL {
        let dir = tempfile::tempdir().unwrap();
        let m = manager(dir.path());
        let id = m.create_session(Some(condition), Some(99)).unwrap().session_id;
        play(&m, &id, 0..10);
        let before = m.snapshot(&id).unwrap();
        // Control: the uninterrupted session keeps playing.
        let expected = play(&m, &id, 10..25);
        drop(m);

        // Truncate the log back to the crash point and recover.
        let path = dir.path().join(format!("{id}.jsonl"));
        let kept: Vec<String> = fs::read_to_string(&path).unwrap().lines().take(11).map(String::from).collect();
        fs::write(&path, kept.join("\n") + "\n").unwrap();

        let m = manager(dir.path());
        assert_eq!(m.recover_all().unwrap(), 1);
        let recovered = m.snapshot(&id).unwrap();
        assert_eq!(recovered.state(), before.state());
        assert_eq!(recovered.rng_state(), before.rng_state());
        assert_eq!(recovered.phase(), Phase::AwaitAction);
        assert_eq!(play(&m, &id, 10..25), expected, "{condition}");
        assert_eq!(m.snapshot(&id).unwrap().phase(), Phase::Finished);
    }
}

#[test]
fn finished_log_recovers_finished() {
    let dir = tempfile::tempdir().unwrap();
    let m = manager(dir.path());
    let id = m.create_session(Some(AgentCondition::Random), Some(1)).unwrap().session_id;
    play(&m, &id, 0..25);
    let m2 = manager(dir.path());
    m2.recover_all().unwrap();
    assert_eq!(m2.snapshot(&id).unwrap().phase(), Phase::Finished);
    assert_eq!(m2.summary(&id).unwrap(), m.summary(&id).unwrap());
    let err = m2.submit_action(&id, Move::Give2).unwrap_err();
    assert_eq!((err.code(), err.to_string().as_str()), ("protocol", "session finished"));
}

#[test]
fn corrupt_logs_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.jsonl"), "{\"kind\":\"header\"\n").unwrap();
    let err = manager(dir.path()).recover_all().unwrap_err();
    assert!(matches!(&err, SessionError::CorruptLog { path, .. } if path.ends_with("bad.jsonl")));
    assert_eq!(err.code(), "internal");

    let round_first = r#"{"kind":"round","record":{"round_index":0,"player_move":"give2","player_emotion":"joy","agent_move":"give2","agent_emotion":null,"agent_utterance":null,"agent_face":null,"player_payoff":2,"agent_payoff":2},"rng_state":{"seed":0,"cursor":0}}"#;
    let line: LogLine = serde_json::from_str(round_first).unwrap();
    assert!(matches!(Session::recover(&[line]), Err(SessionError::CorruptLog { .. })));
}

#[test]
fn tampered_payoff_is_an_integrity_error() {
    let dir = tempfile::tempdir().unwrap();
    let m = manager(dir.path());
    let id = m.create_session(Some(AgentCondition::Emotionless), Some(2)).unwrap().session_id;
    play(&m, &id, 0..3);
    let path = m.log_path(&id).unwrap();
    let text = fs::read_to_string(&path).unwrap().replacen("\"player_payoff\":2", "\"player_payoff\":9", 1);
    fs::write(&path, text).unwrap();
    let err = manager(dir.path()).recover_all().unwrap_err();
    assert_eq!(err.code(), "integrity");
}

#[test]
fn service_logs_replay_through_simulator() {
    let deps = AgentDeps::bundled();
    for condition in AgentCondition::ALL {
        let dir = tempfile::tempdir().unwrap();
        let m = manager(dir.path());
        let id = m.create_session(Some(condition), Some(2024)).unwrap().session_id;
        play(&m, &id, 0..17);
        let lines = read_log(m.log_path(&id).unwrap()).unwrap();
        let report = replay_log(&lines, &deps).unwrap();
        assert_eq!(report.rounds, 17);
        assert!(report.passed(), "{condition}: {:?}", report.mismatches);

        // A forged agent emotion is caught.
        let mut forged = lines.clone();
        if let LogLine::Round { record, .. } = &mut forged[5] {
            record.agent_move = record.agent_move.opposite();
        }
        assert!(!replay_log(&forged, &deps).unwrap().passed());
    }
}

#[test]
fn sessions_run_concurrently() {
    let dir = tempfile::tempdir().unwrap();
    let m = Arc::new(manager(dir.path()));
    let handles: Vec<_> = (0..8)
        .map(|i| {
            let m = m.clone();
            thread::spawn(move || {
                let id = m.create_session(None, Some(i)).unwrap().session_id;
                play(&m, &id, 0..25);
                let summary = m.summary(&id).unwrap();
                (id, summary)
            })
        })
        .collect();
    let results: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
    assert_eq!(m.session_count(), 8);
    for (id, summary) in results {
        assert_eq!(summary.rounds_completed, 25);
        assert_eq!(read_log(m.log_path(&id).unwrap()).unwrap().len(), 26);
    }
}

#[test]
fn unknown_emotion_is_rejected_without_side_effects() {
    let dir = tempfile::tempdir().unwrap();
    let m = manager(dir.path());
    let id = m.create_session(Some(AgentCondition::Occ), Some(5)).unwrap().session_id;
    m.submit_action(&id, Move::Give2).unwrap();
    let err = m.submit_emotion(&id, "ennui").unwrap_err();
    assert_eq!(err.code(), "validation");
    assert_eq!(m.snapshot(&id).unwrap().phase(), Phase::AwaitEmotion);
    assert_eq!(read_log(m.log_path(&id).unwrap()).unwrap().len(), 1);
    assert!(m.submit_emotion(&id, EmotionLabel::Joy.as_str()).is_ok());
}
