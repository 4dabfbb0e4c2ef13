//! C ABI over `aria-core`.
//!
//! Every fallible call returns an [`AriaStatus`]; on failure a message is kept
//! per thread and can be fetched with [`aria_last_error`]. Engines and games
//! are opaque handles owned by the caller and released with their `_free`
//! functions. Strings handed out by this library are released with
//! [`aria_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use aria_core::agent::{AgentCondition, AgentDeps};
use aria_core::coping::{cope, tf2t, CopingContext, CopingStrategy};
use aria_core::expression::{epa_to_hsf, face_controls_for, HsfControls};
use aria_core::game::{payoff, GameConfig, GameError, Move};
use aria_core::lexicon::{EmotionLabel, EpaVector};
use aria_core::session::{Phase, Session, SessionError};

pub const ARIA_MOVE_GIVE2: u32 = 0;
pub const ARIA_MOVE_TAKE1: u32 = 1;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AriaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// Call not allowed in the game's current phase.
    WrongPhase = 3,
    Integrity = 4,
    Io = 5,
    Internal = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AriaPhase {
    AwaitAction = 0,
    AwaitEmotion = 1,
    Revealed = 2,
    Finished = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AriaStrategy {
    Acceptance = 0,
    Growth = 1,
    GrowthDenial = 2,
    Restraint = 3,
    Denial = 4,
    SeekSupport = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct AriaHsf {
    pub happy_sad: f64,
    pub surprise_anger: f64,
    pub fear_disgust: f64,
}

/// Loaded lexicon, phrase bank and embeddings.
pub struct AriaEngine {
    deps: Arc<AgentDeps>,
}

/// One game against the agent.
pub struct AriaGame {
    deps: Arc<AgentDeps>,
    session: Session,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(AriaStatus, String);

type FfiResult<T = ()> = Result<T, Failure>;

fn fail<T>(status: AriaStatus, msg: impl Into<String>) -> FfiResult<T> {
    Err(Failure(status, msg.into()))
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard<F: FnOnce() -> FfiResult>(f: F) -> AriaStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AriaStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside aria".into());
            AriaStatus::Panic
        }
    }
}

fn out_ref<'a, T>(p: *mut T, name: &str) -> FfiResult<&'a mut T> {
    // SAFETY: callers pass pointers the C side promised are valid or null.
    unsafe { p.as_mut() }.map_or_else(|| fail(AriaStatus::NullPointer, format!("{name} is null")), Ok)
}

fn in_ref<'a, T>(p: *const T, name: &str) -> FfiResult<&'a T> {
    // SAFETY: as above.
    unsafe { p.as_ref() }.map_or_else(|| fail(AriaStatus::NullPointer, format!("{name} is null")), Ok)
}

fn in_str<'a>(p: *const c_char, name: &str) -> FfiResult<&'a str> {
    if p.is_null() {
        return fail(AriaStatus::NullPointer, format!("{name} is null"));
    }
    // SAFETY: non-null and NUL-terminated per the API contract.
    unsafe { CStr::from_ptr(p) }
        .to_str()
        .or_else(|_| fail(AriaStatus::InvalidArgument, format!("{name} is not UTF-8")))
}

fn decode_move(code: u32) -> FfiResult<Move> {
    match code {
        ARIA_MOVE_GIVE2 => Ok(Move::Give2),
        ARIA_MOVE_TAKE1 => Ok(Move::Take1),
        other => fail(AriaStatus::InvalidArgument, format!("unknown move code {other}")),
    }
}

fn encode_move(mv: Move) -> u32 {
    match mv {
        Move::Give2 => ARIA_MOVE_GIVE2,
        Move::Take1 => ARIA_MOVE_TAKE1,
    }
}

fn decode_label(p: *const c_char) -> FfiResult<EmotionLabel> {
    let s = in_str(p, "label")?;
    s.parse().or_else(|e| fail(AriaStatus::InvalidArgument, format!("{e}")))
}

fn encode_phase(p: Phase) -> AriaPhase {
    match p {
        Phase::AwaitAction => AriaPhase::AwaitAction,
        Phase::AwaitEmotion => AriaPhase::AwaitEmotion,
        Phase::Revealed => AriaPhase::Revealed,
        Phase::Finished => AriaPhase::Finished,
    }
}

fn encode_strategy(s: CopingStrategy) -> AriaStrategy {
    match s {
        CopingStrategy::Acceptance => AriaStrategy::Acceptance,
        CopingStrategy::Growth => AriaStrategy::Growth,
        CopingStrategy::GrowthDenial => AriaStrategy::GrowthDenial,
        CopingStrategy::Restraint => AriaStrategy::Restraint,
        CopingStrategy::Denial => AriaStrategy::Denial,
        CopingStrategy::SeekSupport => AriaStrategy::SeekSupport,
    }
}

fn hsf(c: HsfControls) -> AriaHsf {
    AriaHsf {
        happy_sad: c.happy_sad,
        surprise_anger: c.surprise_anger,
        fear_disgust: c.fear_disgust,
    }
}

fn session_failure(e: SessionError) -> Failure {
    let status = match &e {
        SessionError::WrongPhase { .. } => AriaStatus::WrongPhase,
        SessionError::Validation(_) | SessionError::NotFound(_) => AriaStatus::InvalidArgument,
        SessionError::Game(GameError::InvalidConfig(_)) => AriaStatus::InvalidArgument,
        SessionError::Game(_) => AriaStatus::Integrity,
        SessionError::Io(_) => AriaStatus::Io,
        SessionError::CorruptLog { .. } => AriaStatus::Internal,
    };
    Failure(status, e.to_string())
}

fn give_string(s: String, out: *mut *mut c_char) -> FfiResult {
    let out = out_ref(out, "out")?;
    let c = CString::new(s).or_else(|_| fail(AriaStatus::Internal, "string contains NUL"))?;
    *out = c.into_raw();
    Ok(())
}

/// Message for the last failed call on this thread, or NULL. The pointer is
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn aria_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn aria_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[no_mangle]
pub extern "C" fn aria_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Static name of a strategy, e.g. `growth+denial`.
#[no_mangle]
pub extern "C" fn aria_strategy_name(strategy: AriaStrategy) -> *const c_char {
    let s: &'static str = match strategy {
        AriaStrategy::Acceptance => "acceptance\0",
        AriaStrategy::Growth => "growth\0",
        AriaStrategy::GrowthDenial => "growth+denial\0",
        AriaStrategy::Restraint => "restraint\0",
        AriaStrategy::Denial => "denial\0",
        AriaStrategy::SeekSupport => "seek-support\0",
    };
    s.as_ptr().cast()
}

/// Payoffs for player move `a` against opponent move `b`.
///
/// # Safety
/// Output pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn aria_payoff(a: u32, b: u32, out_a: *mut u32, out_b: *mut u32) -> AriaStatus {
    guard(|| {
        let (pa, pb) = payoff(decode_move(a)?, decode_move(b)?);
        *out_ref(out_a, "out_a")? = pa;
        *out_ref(out_b, "out_b")? = pb;
        Ok(())
    })
}

/// Tit-for-two-tats reply to a player history of `len` move codes.
///
/// # Safety
/// `moves` must point to `len` readable values (may be NULL when `len` is 0).
#[no_mangle]
pub unsafe extern "C" fn aria_tf2t(moves: *const u32, len: usize, out_move: *mut u32) -> AriaStatus {
    guard(|| {
        let codes: &[u32] = if len == 0 {
            &[]
        } else if moves.is_null() {
            return fail(AriaStatus::NullPointer, "moves is null");
        } else {
            std::slice::from_raw_parts(moves, len)
        };
        let history = codes.iter().map(|&c| decode_move(c)).collect::<FfiResult<Vec<_>>>()?;
        *out_ref(out_move, "out_move")? = encode_move(tf2t(&history));
        Ok(())
    })
}

/// Face controls for a raw EPA point.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn aria_epa_to_hsf(e: f64, p: f64, a: f64, out: *mut AriaHsf) -> AriaStatus {
    guard(|| {
        let epa = EpaVector::new(e, p, a);
        if !epa.is_finite() {
            return fail(AriaStatus::InvalidArgument, "EPA components must be finite");
        }
        *out_ref(out, "out")? = hsf(epa_to_hsf(&epa));
        Ok(())
    })
}

/// Engine with the bundled data files.
#[no_mangle]
pub extern "C" fn aria_engine_new() -> *mut AriaEngine {
    Box::into_raw(Box::new(AriaEngine {
        deps: AgentDeps::bundled().shared(),
    }))
}

/// Engine loaded from a data directory.
///
/// # Safety
/// `dir` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn aria_engine_from_dir(dir: *const c_char, out: *mut *mut AriaEngine) -> AriaStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let dir = in_str(dir, "dir")?;
        let deps = AgentDeps::from_dir(dir).or_else(|e| fail(AriaStatus::Io, format!("{dir}: {e}")))?;
        *out = Box::into_raw(Box::new(AriaEngine { deps: deps.shared() }));
        Ok(())
    })
}

/// # Safety
/// `engine` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn aria_engine_free(engine: *mut AriaEngine) {
    if !engine.is_null() {
        drop(Box::from_raw(engine));
    }
}

/// Face controls for an emotion label under the engine's lexicon.
///
/// # Safety
/// Pointers must be valid; `label` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn aria_engine_face(engine: *const AriaEngine, label: *const c_char, out: *mut AriaHsf) -> AriaStatus {
    guard(|| {
        let engine = in_ref(engine, "engine")?;
        let label = decode_label(label)?;
        *out_ref(out, "out")? = hsf(face_controls_for(label, &engine.deps.lexicon));
        Ok(())
    })
}

/// Coping decision. `t2_move` is ignored unless `has_t2`; `last_move` and
/// `last_label` are ignored when `last_label` is NULL (no history).
///
/// # Safety
/// Pointers must be valid; `last_label` NUL-terminated when non-NULL.
#[no_mangle]
pub unsafe extern "C" fn aria_engine_cope(
    engine: *const AriaEngine,
    has_t2: bool,
    t2_move: u32,
    last_move: u32,
    last_label: *const c_char,
    out_move: *mut u32,
    out_strategy: *mut AriaStrategy,
) -> AriaStatus {
    guard(|| {
        let engine = in_ref(engine, "engine")?;
        let t2 = if has_t2 { Some(decode_move(t2_move)?) } else { None };
        let last = if last_label.is_null() {
            None
        } else {
            Some((decode_move(last_move)?, decode_label(last_label)?))
        };
        let (mv, strategy) = cope(&CopingContext::new(t2, last), &engine.deps.lexicon);
        *out_ref(out_move, "out_move")? = encode_move(mv);
        *out_ref(out_strategy, "out_strategy")? = encode_strategy(strategy);
        Ok(())
    })
}

/// Start a game. `condition` is `occ`, `emotionless` or `random`. The game
/// keeps its own reference to the engine's data, so the engine may be freed
/// first.
///
/// # Safety
/// Pointers must be valid; `condition` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn aria_game_new(
    engine: *const AriaEngine,
    condition: *const c_char,
    seed: u64,
    rounds_played: u32,
    rounds_announced: u32,
    out: *mut *mut AriaGame,
) -> AriaStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let engine = in_ref(engine, "engine")?;
        let condition: AgentCondition = in_str(condition, "condition")?
            .parse()
            .or_else(|e| fail(AriaStatus::InvalidArgument, format!("{e}")))?;
        let config = GameConfig {
            rounds_played,
            rounds_announced,
            rng_seed: seed,
            ..GameConfig::default()
        };
        let session = Session::new(format!("ffi-{seed}"), condition, config).map_err(session_failure)?;
        *out = Box::into_raw(Box::new(AriaGame {
            deps: engine.deps.clone(),
            session,
        }));
        Ok(())
    })
}

/// # Safety
/// `game` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn aria_game_free(game: *mut AriaGame) {
    if !game.is_null() {
        drop(Box::from_raw(game));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn aria_game_phase(game: *const AriaGame, out: *mut AriaPhase) -> AriaStatus {
    guard(|| {
        *out_ref(out, "out")? = encode_phase(in_ref(game, "game")?.session.phase());
        Ok(())
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn aria_game_scores(game: *const AriaGame, out_player: *mut u32, out_agent: *mut u32) -> AriaStatus {
    guard(|| {
        let state = in_ref(game, "game")?.session.state();
        *out_ref(out_player, "out_player")? = state.player_score;
        *out_ref(out_agent, "out_agent")? = state.agent_score;
        Ok(())
    })
}

/// # Safety
/// `game` must be valid.
#[no_mangle]
pub unsafe extern "C" fn aria_game_submit_action(game: *mut AriaGame, player_move: u32) -> AriaStatus {
    guard(|| {
        let game = out_ref(game, "game")?;
        let mv = decode_move(player_move)?;
        game.session.submit_action(mv).map_err(session_failure)?;
        Ok(())
    })
}

/// Commit the player's emotion; the agent plays and the reveal is written to
/// `out_json` as a JSON object (free with `aria_string_free`).
///
/// # Safety
/// Pointers must be valid; `label` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn aria_game_submit_emotion(
    game: *mut AriaGame,
    label: *const c_char,
    out_json: *mut *mut c_char,
) -> AriaStatus {
    guard(|| {
        let game = out_ref(game, "game")?;
        let label = decode_label(label)?;
        if out_json.is_null() {
            return fail(AriaStatus::NullPointer, "out_json is null");
        }
        let (reveal, _) = game.session.submit_emotion(label, &game.deps).map_err(session_failure)?;
        let json = serde_json::to_string(&reveal).or_else(|e| fail(AriaStatus::Internal, e.to_string()))?;
        give_string(json, out_json)
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn aria_game_advance(game: *mut AriaGame, out_phase: *mut AriaPhase) -> AriaStatus {
    guard(|| {
        let game = out_ref(game, "game")?;
        let phase = game.session.advance().map_err(session_failure)?;
        if !out_phase.is_null() {
            *out_phase = encode_phase(phase);
        }
        Ok(())
    })
}

/// Scores, cooperation count and bonus as a JSON object.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn aria_game_summary_json(game: *const AriaGame, out_json: *mut *mut c_char) -> AriaStatus {
    guard(|| {
        let summary = in_ref(game, "game")?.session.summary();
        let json = serde_json::to_string(&summary).or_else(|e| fail(AriaStatus::Internal, e.to_string()))?;
        give_string(json, out_json)
    })
}
