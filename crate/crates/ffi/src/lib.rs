//! C ABI over the `achievement` library.
//!
//! Games live behind the opaque [`AgGame`] handle. Every fallible function
//! returns an [`AgStatus`]; on failure, [`ag_last_error_message`] describes
//! the most recent error on the calling thread. Strings returned through
//! out-parameters are owned by the caller and must be released with
//! [`ag_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use achievement::equilibrium::{equilibria, verify_importance_of_being_different};
use achievement::scoring::score;
use achievement::{standard_game, Error, Game, GroupSpec, Rational};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AgStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Malformed JSON, rational literal or group label.
    Parse = 3,
    /// The game or an argument violates a model constraint.
    InvalidArgument = 4,
    /// The computation would exceed a work cap.
    CapExceeded = 5,
    /// The requested score is undefined because a goal has no equilibrium.
    NoEquilibrium = 6,
    /// A result does not fit the output type.
    Overflow = 7,
    /// An internal panic was caught at the boundary.
    Panic = 8,
}

/// Selects one score for `ag_game_score_exact`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AgScore {
    Mga = 0,
    All = 1,
    Dd = 2,
    Vl = 3,
}

/// Scores as doubles. When `defined` is false the base game has a goal
/// without equilibria and all four values are NaN.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AgScores {
    pub defined: bool,
    pub mga: f64,
    pub all: f64,
    pub dd: f64,
    pub vl: f64,
}

/// Opaque game handle.
pub struct AgGame {
    game: Game,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(AgStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Rational(_) | Error::Document(_) => AgStatus::Parse,
            Error::CapExceeded { .. } => AgStatus::CapExceeded,
            Error::MissingScore { .. } => AgStatus::NoEquilibrium,
            _ => AgStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn set_last_error(message: String) {
    let message = CString::new(message.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(message));
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> AgStatus {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => AgStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("internal panic: {message}"));
            AgStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(AgStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(AgStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn read_delta(p: *const c_char) -> Result<Rational, Failure> {
    if p.is_null() {
        return Ok(Rational::frac(1, 4));
    }
    let text = read_str(p, "delta")?;
    text.parse().map_err(|e| Failure::from(Error::from(e)))
}

unsafe fn game_ref<'a>(game: *const AgGame) -> Result<&'a Game, Failure> {
    game.as_ref().map(|g| &g.game).ok_or_else(|| null("game"))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn into_c_string(text: String) -> *mut c_char {
    CString::new(text).expect("no interior nul").into_raw()
}

/// Message for the last failed call on this thread, or null after a
/// successful call. Valid until the next call into this library on the
/// same thread.
#[no_mangle]
pub extern "C" fn ag_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn ag_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses a game document (the JSON accepted by `achievement analyze`).
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ag_game_from_json(json: *const c_char, out: *mut *mut AgGame) -> AgStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let game = Game::from_json_str(read_str(json, "json")?)?;
        out.write(Box::into_raw(Box::new(AgGame { game })));
        Ok(())
    })
}

/// Builds the standard game for a group label such as `"AOB"` or
/// `"20-11-02"`. A null `delta` means 1/4.
///
/// # Safety
/// `label` must be a nul-terminated string, `delta` null or nul-terminated,
/// and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ag_standard_game(
    label: *const c_char,
    n_goals: usize,
    delta: *const c_char,
    out: *mut *mut AgGame,
) -> AgStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let group = GroupSpec::parse(read_str(label, "label")?, n_goals, read_delta(delta)?)?;
        let game = standard_game(group.n_agents(), n_goals, &group)?;
        out.write(Box::into_raw(Box::new(AgGame { game })));
        Ok(())
    })
}

/// Releases a game. Null is ignored.
///
/// # Safety
/// `game` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ag_game_free(game: *mut AgGame) {
    if !game.is_null() {
        drop(Box::from_raw(game));
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ag_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Number of agents and goals.
///
/// # Safety
/// `game` must be a live handle; the out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ag_game_shape(
    game: *const AgGame,
    n_agents: *mut usize,
    n_goals: *mut usize,
) -> AgStatus {
    guard(|| {
        let game = game_ref(game)?;
        write_out(n_agents, game.n_agents(), "n_agents")?;
        write_out(n_goals, game.n_goals(), "n_goals")
    })
}

/// The game as a pretty-printed JSON document.
///
/// # Safety
/// `game` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ag_game_to_json(game: *const AgGame, out: *mut *mut c_char) -> AgStatus {
    guard(|| {
        let json = game_ref(game)?.to_json_pretty();
        write_out(out, into_c_string(json), "out")
    })
}

/// Number of pure Nash equilibria.
///
/// # Safety
/// `game` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ag_game_equilibrium_count(game: *const AgGame, out: *mut u64) -> AgStatus {
    guard(|| {
        let count = equilibria(game_ref(game)?)?.total_count();
        let count = u64::try_from(count)
            .map_err(|_| Failure(AgStatus::Overflow, format!("{count} equilibria exceed u64")))?;
        write_out(out, count, "out")
    })
}

/// All four scores as doubles. A null `delta` means 1/4.
///
/// # Safety
/// `game` must be a live handle, `delta` null or nul-terminated, and `out`
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ag_game_scores(
    game: *const AgGame,
    delta: *const c_char,
    out: *mut AgScores,
) -> AgStatus {
    guard(|| {
        let report = score(game_ref(game)?, &read_delta(delta)?)?;
        let f = |v: &Option<Rational>| v.as_ref().map_or(f64::NAN, Rational::to_f64);
        let scores = AgScores {
            defined: report.mga.is_some(),
            mga: f(&report.mga),
            all: f(&report.all_score),
            dd: f(&report.dd),
            vl: f(&report.vl),
        };
        write_out(out, scores, "out")
    })
}

/// One score as an exact `"p/q"` string. A null `delta` means 1/4.
///
/// # Safety
/// `game` must be a live handle, `delta` null or nul-terminated, and `out`
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ag_game_score_exact(
    game: *const AgGame,
    which: AgScore,
    delta: *const c_char,
    out: *mut *mut c_char,
) -> AgStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let report = score(game_ref(game)?, &read_delta(delta)?)?;
        let (value, name) = match which {
            AgScore::Mga => (report.mga, "MGA"),
            AgScore::All => (report.all_score, "ALL"),
            AgScore::Dd => (report.dd, "DD"),
            AgScore::Vl => (report.vl, "VL"),
        };
        let value = value.ok_or_else(|| {
            Failure(
                AgStatus::NoEquilibrium,
                format!("{name} undefined: a goal has no pure equilibrium"),
            )
        })?;
        out.write(into_c_string(value.to_exact_string()));
        Ok(())
    })
}

/// Checks the unique diagonal equilibrium property. `applicable` reports
/// whether the game meets the hypotheses; `holds` is true when the property
/// holds or the game is not applicable.
///
/// # Safety
/// `game` must be a live handle; the out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ag_game_verify_theorem(
    game: *const AgGame,
    applicable: *mut bool,
    holds: *mut bool,
) -> AgStatus {
    guard(|| {
        let report = verify_importance_of_being_different(game_ref(game)?)?;
        write_out(applicable, report.applicable, "applicable")?;
        write_out(holds, report.holds(), "holds")
    })
}
