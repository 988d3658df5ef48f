use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use achievement_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn standard(label: &str, n_goals: usize) -> *mut AgGame {
    let mut game = ptr::null_mut();
    let status = unsafe { ag_standard_game(c(label).as_ptr(), n_goals, ptr::null(), &mut game) };
    assert_eq!(status, AgStatus::Ok);
    game
}

fn last_error() -> Option<String> {
    let p = ag_last_error_message();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
}

fn exact(game: *const AgGame, which: AgScore) -> Result<String, AgStatus> {
    let mut out: *mut c_char = ptr::null_mut();
    let status = unsafe { ag_game_score_exact(game, which, ptr::null(), &mut out) };
    if status != AgStatus::Ok {
        return Err(status);
    }
    let text = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_string();
    unsafe { ag_string_free(out) };
    Ok(text)
}

#[test]
fn standard_game_scores_match_the_library() {
    let game = standard("AAAA", 2);
    assert_eq!(exact(game, AgScore::Mga).unwrap(), "19/40");
    assert_eq!(exact(game, AgScore::Dd).unwrap(), "3/7");
    let mut scores = AgScores {
        defined: false,
        mga: 0.0,
        all: 0.0,
        dd: 0.0,
        vl: 0.0,
    };
    assert_eq!(
        unsafe { ag_game_scores(game, ptr::null(), &mut scores) },
        AgStatus::Ok
    );
    assert!(scores.defined);
    assert_eq!(scores.all, 0.0);
    assert!((scores.mga - 0.475).abs() < 1e-12);
    let (mut n, mut m) = (0usize, 0usize);
    assert_eq!(unsafe { ag_game_shape(game, &mut n, &mut m) }, AgStatus::Ok);
    assert_eq!((n, m), (4, 2));
    unsafe { ag_game_free(game) };
}

#[test]
fn json_round_trip_through_handles() {
    let game = standard("AOB", 2);
    let mut json: *mut c_char = ptr::null_mut();
    assert_eq!(unsafe { ag_game_to_json(game, &mut json) }, AgStatus::Ok);
    let mut copy = ptr::null_mut();
    assert_eq!(unsafe { ag_game_from_json(json, &mut copy) }, AgStatus::Ok);
    assert_eq!(exact(copy, AgScore::Vl), exact(game, AgScore::Vl));
    let (mut a, mut b) = (0u64, 0u64);
    assert_eq!(
        unsafe { ag_game_equilibrium_count(game, &mut a) },
        AgStatus::Ok
    );
    assert_eq!(
        unsafe { ag_game_equilibrium_count(copy, &mut b) },
        AgStatus::Ok
    );
    assert_eq!(a, b);
    unsafe {
        ag_string_free(json);
        ag_game_free(game);
        ag_game_free(copy);
    }
}

#[test]
fn theorem_check_on_diverse_pair() {
    let game = standard("AB", 2);
    let (mut applicable, mut holds) = (false, false);
    let status = unsafe { ag_game_verify_theorem(game, &mut applicable, &mut holds) };
    assert_eq!(status, AgStatus::Ok);
    assert!(applicable && holds);
    unsafe { ag_game_free(game) };
}

#[test]
fn errors_carry_status_and_message() {
    let mut game = ptr::null_mut();
    let bad = c(
        r#"{"agents": 2, "goals": 1, "costs": ["0", "1/0"], "thresholds": ["1"], "motivations": [["1"], ["1"]]}"#,
    );
    assert_eq!(
        unsafe { ag_game_from_json(bad.as_ptr(), &mut game) },
        AgStatus::Parse
    );
    assert!(game.is_null());
    assert!(last_error().unwrap().contains("1/0"));

    assert_eq!(
        unsafe { ag_standard_game(c("AXB").as_ptr(), 2, ptr::null(), &mut game) },
        AgStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { ag_game_from_json(ptr::null(), &mut game) },
        AgStatus::NullPointer
    );
    assert_eq!(
        unsafe { ag_game_equilibrium_count(ptr::null(), ptr::null_mut()) },
        AgStatus::NullPointer
    );

    let ok = standard("OO", 2);
    assert!(
        last_error().is_none(),
        "a successful call clears the message"
    );
    unsafe { ag_game_free(ok) };
}

#[test]
fn null_handles_are_ignored_by_free() {
    unsafe {
        ag_game_free(ptr::null_mut());
        ag_string_free(ptr::null_mut());
    }
}

/// Compiles `smoke.c` against the generated header and the static library.
#[test]
fn c_program_links_and_runs() {
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let profile_dir = std::env::current_exe()
        .unwrap()
        .parent()
        .and_then(|deps| deps.parent())
        .unwrap()
        .to_path_buf();
    let lib = profile_dir.join("libachievement_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let compile = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(crate_dir.join("tests/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .expect("cc runs");
    assert!(
        compile.status.success(),
        "{}",
        String::from_utf8_lossy(&compile.stderr)
    );
    let run = Command::new(&exe).output().unwrap();
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("ok 0.1.0"));
}
