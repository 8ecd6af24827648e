//! C ABI over `gmk-core`.
//!
//! Objects are opaque handles created by `*_new` and released by `*_free`.
//! Every fallible call returns a [`GmkStatus`]; on failure a message is
//! available from [`gmk_last_error_message`] on the same thread. Strings
//! returned through out-parameters are owned by the caller and released with
//! [`gmk_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gmk_core::bieri::DoubledGroup;
use gmk_core::cli::{execute, Command, Family, TableFormat};
use gmk_core::family::{make_phi, presentation, Endomorphism};
use gmk_core::permrep::{build_action, verify_action, CoordinateAction};
use gmk_core::words::{Alphabet, Word};
use gmk_core::GmkError;

/// Largest iteration count accepted by the iterate calls.
pub const GMK_MAX_ITERATES: u32 = 64;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GmkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameters = 2,
    Parse = 3,
    CheckFailed = 4,
    Internal = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nuls removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(GmkStatus, String);

impl From<GmkError> for Failure {
    fn from(e: GmkError) -> Self {
        let status = match e {
            GmkError::Parse(_) | GmkError::InvalidName(_) => GmkStatus::Parse,
            GmkError::RelatorFails(_) => GmkStatus::CheckFailed,
            GmkError::NotUnipotent | GmkError::Shape(_) => GmkStatus::Internal,
            _ => GmkStatus::InvalidParameters,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(GmkStatus::NullPointer, format!("{what} is null"))
}

fn guarded(f: impl FnOnce() -> Result<(), Failure>) -> GmkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            GmkStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            GmkStatus::Internal
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(GmkStatus::Parse, format!("{what} is not UTF-8")))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s).expect("generated text has no nul").into_raw()
}

fn check_iterates(n: u32) -> Result<(), Failure> {
    if n > GMK_MAX_ITERATES {
        return Err(Failure(
            GmkStatus::InvalidParameters,
            format!("n = {n} exceeds the limit {GMK_MAX_ITERATES}"),
        ));
    }
    Ok(())
}

fn small(x: u32, what: &str) -> Result<usize, Failure> {
    if x > 64 {
        return Err(Failure(GmkStatus::InvalidParameters, format!("{what} = {x} is too large")));
    }
    Ok(x as usize)
}

/// Message for the last failed call on this thread, or null after a success.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn gmk_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a pointer obtained from this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gmk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The monodromy automorphism of `G_{m,k}` (or its inverse) on `A1..Am B1..Bk`.
pub struct GmkPhi {
    map: Endomorphism,
    alphabet: Alphabet,
}

/// Create the monodromy (`inverse == false`) or its inverse.
///
/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn gmk_phi_new(m: u32, k: u32, inverse: bool, out: *mut *mut GmkPhi) -> GmkStatus {
    guarded(|| {
        let (m, k) = (small(m, "m")?, small(k, "k")?);
        let phi = make_phi(m, k)?;
        let map = if inverse { phi.inverse().expect("monodromy has an inverse") } else { phi };
        let handle = Box::new(GmkPhi { map, alphabet: Alphabet::free_basis(m, k) });
        write(out, Box::into_raw(handle), "out")
    })
}

/// Release a handle from [`gmk_phi_new`]. Null is ignored.
///
/// # Safety
/// `phi` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gmk_phi_free(phi: *mut GmkPhi) {
    if !phi.is_null() {
        drop(Box::from_raw(phi));
    }
}

/// Number of free generators, `m + k`. Returns 0 for null.
///
/// # Safety
/// `phi` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gmk_phi_rank(phi: *const GmkPhi) -> usize {
    phi.as_ref().map_or(0, |p| p.map.rank())
}

/// Length of the reduced word `phi^n(x)` for the generator with 0-based index `generator`.
///
/// # Safety
/// `phi` must be a live handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn gmk_phi_iterate_length(
    phi: *const GmkPhi,
    generator: usize,
    n: u32,
    out: *mut u64,
) -> GmkStatus {
    guarded(|| {
        let p = phi.as_ref().ok_or_else(|| null("phi"))?;
        check_iterates(n)?;
        if generator >= p.map.rank() {
            return Err(GmkError::SymbolOutOfRange { index: generator, rank: p.map.rank() }.into());
        }
        let x = Word::generator(p.map.rank(), generator);
        let img = p.map.iterate(&x, n as usize)?;
        write(out, img.len() as u64, "out")
    })
}

/// `phi^n(w)` for a word in textual syntax such as `"A1 B2^-1"`, as a new string.
///
/// # Safety
/// `phi` must be a live handle, `word` a nul-terminated string and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn gmk_phi_iterate_word(
    phi: *const GmkPhi,
    word: *const c_char,
    n: u32,
    out: *mut *mut c_char,
) -> GmkStatus {
    guarded(|| {
        let p = phi.as_ref().ok_or_else(|| null("phi"))?;
        check_iterates(n)?;
        let w = p.alphabet.parse(text(word, "word")?)?;
        let img = p.map.iterate(&w, n as usize)?;
        write(out, owned_string(p.alphabet.format(&img)), "out")
    })
}

/// The growth table of the monodromy as the JSON document printed by `gmk growth`.
///
/// # Safety
/// `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn gmk_growth_json(m: u32, k: u32, n_max: u32, inverse: bool, out: *mut *mut c_char) -> GmkStatus {
    guarded(|| {
        if m == 0 || m > 6 || k == 0 || k > 6 || n_max > 40 {
            return Err(Failure(
                GmkStatus::InvalidParameters,
                format!("need 1 <= k <= m <= 6 and n_max <= 40, got m={m}, k={k}, n_max={n_max}"),
            ));
        }
        let command = Command::Growth {
            family: Family { m: m as u8, k: k as u8 },
            n_max: n_max as u16,
            inverse,
            format: TableFormat::Json,
        };
        let artifact = execute(&command)?;
        write(out, owned_string(artifact.text), "out")
    })
}

/// The coordinate action of `G_{m,m}` on bit strings of length `2m+1`.
pub struct GmkAction {
    action: CoordinateAction,
    alphabet: Alphabet,
}

/// Build the action for `1 <= m <= 6`.
///
/// # Safety
/// `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn gmk_action_new(m: u32, out: *mut *mut GmkAction) -> GmkStatus {
    guarded(|| {
        if m == 0 || m > 6 {
            return Err(Failure(GmkStatus::InvalidParameters, format!("need 1 <= m <= 6, got {m}")));
        }
        let m = m as usize;
        let action = build_action(m)?;
        let handle = Box::new(GmkAction { action, alphabet: Alphabet::indexed("a", 2 * m + 1) });
        write(out, Box::into_raw(handle), "out")
    })
}

/// Release a handle from [`gmk_action_new`]. Null is ignored.
///
/// # Safety
/// `action` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gmk_action_free(action: *mut GmkAction) {
    if !action.is_null() {
        drop(Box::from_raw(action));
    }
}

/// Number of points, `2^(2m+1)`. Returns 0 for null.
///
/// # Safety
/// `action` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn gmk_action_point_count(action: *const GmkAction) -> usize {
    action.as_ref().map_or(0, |a| a.action.point_count())
}

/// Image of `point` (coordinate i is bit i-1) under a word in `a1 .. a(2m+1)`,
/// applied left to right.
///
/// # Safety
/// `action` must be a live handle, `word` a nul-terminated string and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn gmk_action_apply(
    action: *const GmkAction,
    point: u32,
    word: *const c_char,
    out: *mut u32,
) -> GmkStatus {
    guarded(|| {
        let a = action.as_ref().ok_or_else(|| null("action"))?;
        if point as usize >= a.action.point_count() {
            return Err(Failure(GmkStatus::InvalidParameters, format!("point {point} out of range")));
        }
        let w = a.alphabet.parse(text(word, "word")?)?;
        write(out, a.action.act_word(point, &w)?, "out")
    })
}

/// Check every property of the action; `*ok` is false if any fails.
///
/// # Safety
/// `action` must be a live handle and `ok` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn gmk_action_verify(action: *const GmkAction, ok: *mut bool) -> GmkStatus {
    guarded(|| {
        let a = action.as_ref().ok_or_else(|| null("action"))?;
        let report = verify_action(&a.action, &presentation(a.action.m(), a.action.m())?)?;
        write(ok, report.all_ok(), "ok")
    })
}

/// Whether a word over `A1..Am B1..Bk s t` is trivial in the double of `G_{m,k}`.
///
/// # Safety
/// `word` must be a nul-terminated string and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn gmk_bieri_is_trivial(m: u32, k: u32, word: *const c_char, out: *mut bool) -> GmkStatus {
    guarded(|| {
        let group = DoubledGroup::new(small(m, "m")?, small(k, "k")?)?;
        let w = group.alphabet().parse(text(word, "word")?)?;
        write(out, group.is_trivial(&w)?, "out")
    })
}
