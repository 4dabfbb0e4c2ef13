use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use aria_ffi::*;

fn last_error() -> String {
    let p = aria_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn new_game(condition: &str, seed: u64) -> *mut AriaGame {
    let engine = aria_engine_new();
    let cond = CString::new(condition).unwrap();
    let mut game = ptr::null_mut();
    let status = unsafe { aria_game_new(engine, cond.as_ptr(), seed, 25, 30, &mut game) };
    assert_eq!(status, AriaStatus::Ok);
    unsafe { aria_engine_free(engine) };
    game
}

#[test]
fn payoff_codes() {
    let (mut a, mut b) = (0, 0);
    assert_eq!(unsafe { aria_payoff(ARIA_MOVE_TAKE1, ARIA_MOVE_GIVE2, &mut a, &mut b) }, AriaStatus::Ok);
    assert_eq!((a, b), (3, 0));
    assert_eq!(unsafe { aria_payoff(9, ARIA_MOVE_GIVE2, &mut a, &mut b) }, AriaStatus::InvalidArgument);
    assert!(last_error().contains("unknown move code 9"));
    assert_eq!(unsafe { aria_payoff(0, 0, ptr::null_mut(), &mut b) }, AriaStatus::NullPointer);
}

#[test]
fn tf2t_over_c_array() {
    let mut out = 99;
    assert_eq!(unsafe { aria_tf2t(ptr::null(), 0, &mut out) }, AriaStatus::Ok);
    assert_eq!(out, ARIA_MOVE_GIVE2);
    let hist = [ARIA_MOVE_GIVE2, ARIA_MOVE_TAKE1, ARIA_MOVE_TAKE1];
    assert_eq!(unsafe { aria_tf2t(hist.as_ptr(), hist.len(), &mut out) }, AriaStatus::Ok);
    assert_eq!(out, ARIA_MOVE_TAKE1);
    assert_eq!(unsafe { aria_tf2t(ptr::null(), 2, &mut out) }, AriaStatus::NullPointer);
}

#[test]
fn face_controls() {
    let mut hsf = AriaHsf::default();
    assert_eq!(unsafe { aria_epa_to_hsf(3.45, 2.91, 0.24, &mut hsf) }, AriaStatus::Ok);
    assert!((hsf.happy_sad - 1.0).abs() < 1e-12);
    assert_eq!(unsafe { aria_epa_to_hsf(f64::NAN, 0.0, 0.0, &mut hsf) }, AriaStatus::InvalidArgument);

    let engine = aria_engine_new();
    let label = CString::new("fears-confirmed").unwrap();
    assert_eq!(unsafe { aria_engine_face(engine, label.as_ptr(), &mut hsf) }, AriaStatus::Ok);
    assert!((hsf.happy_sad - -0.5430426682505605).abs() < 1e-9);
    let bad = CString::new("ennui").unwrap();
    assert_eq!(unsafe { aria_engine_face(engine, bad.as_ptr(), &mut hsf) }, AriaStatus::InvalidArgument);
    assert!(last_error().contains("ennui"));
    unsafe { aria_engine_free(engine) };
}

#[test]
fn coping_through_ffi() {
    let engine = aria_engine_new();
    let (mut mv, mut strategy) = (0, AriaStrategy::Acceptance);
    unsafe {
        assert_eq!(aria_engine_cope(engine, false, 0, 0, ptr::null(), &mut mv, &mut strategy), AriaStatus::Ok);
        assert_eq!((mv, strategy), (ARIA_MOVE_GIVE2, AriaStrategy::SeekSupport));
        let remorse = CString::new("remorse").unwrap();
        assert_eq!(
            aria_engine_cope(engine, true, ARIA_MOVE_GIVE2, ARIA_MOVE_TAKE1, remorse.as_ptr(), &mut mv, &mut strategy),
            AriaStatus::Ok
        );
        assert_eq!((mv, strategy), (ARIA_MOVE_GIVE2, AriaStrategy::Restraint));
        assert_eq!(CStr::from_ptr(aria_strategy_name(strategy)).to_str().unwrap(), "restraint");
        aria_engine_free(engine);
    }
}

#[test]
fn game_phase_guards_and_summary() {
    let game = new_game("emotionless", 1);
    let joy = CString::new("joy").unwrap();
    let mut json = ptr::null_mut();
    unsafe {
        assert_eq!(aria_game_submit_emotion(game, joy.as_ptr(), &mut json), AriaStatus::WrongPhase);
        assert_eq!(last_error(), "expected action");
        assert_eq!(aria_game_advance(game, ptr::null_mut()), AriaStatus::WrongPhase);

        let mut phase = AriaPhase::AwaitAction;
        let mut rounds = 0;
        while phase != AriaPhase::Finished {
            assert_eq!(aria_game_submit_action(game, ARIA_MOVE_TAKE1), AriaStatus::Ok);
            assert_eq!(aria_game_submit_emotion(game, joy.as_ptr(), &mut json), AriaStatus::Ok);
            let reveal: serde_json::Value = serde_json::from_str(CStr::from_ptr(json).to_str().unwrap()).unwrap();
            assert!(reveal["agent_emotion"].is_null());
            aria_string_free(json);
            assert_eq!(aria_game_advance(game, &mut phase), AriaStatus::Ok);
            rounds += 1;
        }
        assert_eq!(rounds, 25);
        let (mut p, mut a) = (0, 0);
        assert_eq!(aria_game_scores(game, &mut p, &mut a), AriaStatus::Ok);
        assert_eq!((p, a), (29, 23));
        assert_eq!(aria_game_submit_action(game, ARIA_MOVE_GIVE2), AriaStatus::WrongPhase);
        assert_eq!(last_error(), "session finished");

        assert_eq!(aria_game_summary_json(game, &mut json), AriaStatus::Ok);
        let summary: serde_json::Value = serde_json::from_str(CStr::from_ptr(json).to_str().unwrap()).unwrap();
        assert_eq!(summary["bonus"], "1.45");
        aria_string_free(json);
        aria_game_free(game);
    }
}

#[test]
fn bad_game_arguments() {
    let engine = aria_engine_new();
    let mut game = ptr::null_mut();
    let cond = CString::new("stoic").unwrap();
    let occ = CString::new("occ").unwrap();
    unsafe {
        assert_eq!(aria_game_new(engine, cond.as_ptr(), 0, 25, 30, &mut game), AriaStatus::InvalidArgument);
        assert_eq!(aria_game_new(engine, occ.as_ptr(), 0, 31, 30, &mut game), AriaStatus::InvalidArgument);
        assert_eq!(aria_game_new(ptr::null(), occ.as_ptr(), 0, 25, 30, &mut game), AriaStatus::NullPointer);
        assert!(game.is_null());
        let missing = CString::new("/nonexistent/aria-data").unwrap();
        let mut other = ptr::null_mut();
        assert_eq!(aria_engine_from_dir(missing.as_ptr(), &mut other), AriaStatus::Io);
        aria_engine_free(engine);
        aria_game_free(ptr::null_mut());
        aria_string_free(ptr::null_mut());
    }
}

#[test]
fn engine_from_bundled_data_dir() {
    let dir = CString::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../core/data")).unwrap();
    let mut engine = ptr::null_mut();
    assert_eq!(unsafe { aria_engine_from_dir(dir.as_ptr(), &mut engine) }, AriaStatus::Ok);
    unsafe { aria_engine_free(engine) };
}

fn find_cc() -> Option<&'static str> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok())
}

#[test]
fn header_compiles_and_links_from_c() {
    let Some(cc) = find_cc() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libaria_ffi.a");
    assert!(lib.exists(), "{} missing", lib.display());
    let exe = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("aria_smoke");

    let status = Command::new(cc)
        .args(["-std=c99", "-Wall", "-Wextra", "-Werror", "-I"])
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());

    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("\"player_score\":50"));
}
