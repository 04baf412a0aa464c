//! C interface to the dessin enumeration engine.
//!
//! Every function returns a [`DessinStatus`]; results come back through out
//! pointers. Exact values cross the boundary as decimal or `num/den` strings
//! owned by the library and released with [`dessin_string_free`].

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use dessin_core::cli::render_csv;
use dessin_core::kp::kp_report_standard;
use dessin_core::specialize::{closed_genus0, closed_genus1, genus_table};
use dessin_core::{CountTable, EngineState, Error, Partition};

/// Result code of every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DessinStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Malformed input: zero degree, bad profile string, non-UTF-8 text.
    InvalidArgument = 2,
    /// Degree beyond the engine's computed range.
    OutOfRange = 3,
    /// An internal consistency check failed.
    CheckFailed = 4,
    /// The library panicked; the handle should be discarded.
    Panic = 5,
}

/// Opaque engine holding `F_1..F_dmax` and its genus table.
pub struct DessinEngine {
    state: EngineState,
    table: CountTable,
}

impl From<Error> for DessinStatus {
    fn from(e: Error) -> Self {
        match e {
            Error::OutOfTruncation { .. } => DessinStatus::OutOfRange,
            Error::Parse(_) | Error::InvalidArgument(_) | Error::NonPhysical { .. } => {
                DessinStatus::InvalidArgument
            }
            _ => DessinStatus::CheckFailed,
        }
    }
}

fn guard<F>(body: F) -> DessinStatus
where
    F: FnOnce() -> Result<(), DessinStatus>,
{
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => DessinStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => DessinStatus::Panic,
    }
}

unsafe fn engine_ref<'a>(engine: *const DessinEngine) -> Result<&'a DessinEngine, DessinStatus> {
    engine.as_ref().ok_or(DessinStatus::NullPointer)
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), DessinStatus> {
    if out.is_null() {
        return Err(DessinStatus::NullPointer);
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), DessinStatus> {
    let c = CString::new(s).map_err(|_| DessinStatus::CheckFailed)?;
    if out.is_null() {
        return Err(DessinStatus::NullPointer);
    }
    out.write(c.into_raw());
    Ok(())
}

fn check_degree(engine: &DessinEngine, d: u32) -> Result<(), DessinStatus> {
    match d {
        0 => Err(DessinStatus::InvalidArgument),
        d if d > engine.state.dmax() => Err(DessinStatus::OutOfRange),
        _ => Ok(()),
    }
}

/// Computes `F_1..F_dmax` and stores a new engine in `*out`.
///
/// # Safety
/// `out` must be valid for writes. The engine must be released with
/// [`dessin_engine_free`].
#[no_mangle]
pub unsafe extern "C" fn dessin_engine_new(dmax: u32, out: *mut *mut DessinEngine) -> DessinStatus {
    guard(|| {
        if out.is_null() {
            return Err(DessinStatus::NullPointer);
        }
        if dmax == 0 {
            return Err(DessinStatus::InvalidArgument);
        }
        let state = EngineState::compute(dmax);
        let table = genus_table(&state)?;
        put(out, Box::into_raw(Box::new(DessinEngine { state, table })))
    })
}

/// Releases an engine. Null is ignored.
///
/// # Safety
/// `engine` must come from [`dessin_engine_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn dessin_engine_free(engine: *mut DessinEngine) {
    if !engine.is_null() {
        drop(Box::from_raw(engine));
    }
}

/// # Safety
/// `engine` must be a live engine and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dessin_engine_dmax(
    engine: *const DessinEngine,
    out: *mut u32,
) -> DessinStatus {
    guard(|| put(out, engine_ref(engine)?.state.dmax()))
}

/// Weighted count `N_{k,l}(m)` as `num/den` (or an integer), with the
/// ramification profile written as `part^multiplicity` pairs, e.g. `1^2,3^1`.
///
/// # Safety
/// `engine` must be a live engine, `profile` a NUL-terminated string and
/// `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dessin_engine_coefficient(
    engine: *const DessinEngine,
    k: u32,
    l: u32,
    profile: *const c_char,
    out: *mut *mut c_char,
) -> DessinStatus {
    guard(|| {
        let engine = engine_ref(engine)?;
        if profile.is_null() {
            return Err(DessinStatus::NullPointer);
        }
        let text = CStr::from_ptr(profile)
            .to_str()
            .map_err(|_| DessinStatus::InvalidArgument)?;
        let m = Partition::parse_exponents(text)?;
        check_degree(engine, m.weight())?;
        let n = engine.state.coefficient(k, l, &m)?;
        put_string(out, n.to_string())
    })
}

/// Marked count `d * G_{d,g}` as a decimal string; `"0"` for genera
/// beyond the largest one possible in degree `d`.
///
/// # Safety
/// `engine` must be a live engine and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dessin_engine_marked(
    engine: *const DessinEngine,
    d: u32,
    g: u32,
    out: *mut *mut c_char,
) -> DessinStatus {
    guard(|| {
        let engine = engine_ref(engine)?;
        check_degree(engine, d)?;
        put_string(out, engine.table.marked(d, g).to_string())
    })
}

/// Weighted count `G_{d,g}` as `num/den` (or an integer).
///
/// # Safety
/// `engine` must be a live engine and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dessin_engine_weighted(
    engine: *const DessinEngine,
    d: u32,
    g: u32,
    out: *mut *mut c_char,
) -> DessinStatus {
    guard(|| {
        let engine = engine_ref(engine)?;
        check_degree(engine, d)?;
        put_string(out, engine.table.weighted(d, g).to_string())
    })
}

/// Genus table as CSV, `d,g,G_marked` or `d,g,G_num,G_den` rows for
/// `g <= gmax`.
///
/// # Safety
/// `engine` must be a live engine and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dessin_engine_table_csv(
    engine: *const DessinEngine,
    gmax: u32,
    marked: bool,
    out: *mut *mut c_char,
) -> DessinStatus {
    guard(|| {
        let engine = engine_ref(engine)?;
        let dmax = engine.state.dmax();
        put_string(out, render_csv(&engine.table, dmax, gmax, marked))
    })
}

/// Sets `*passed` to whether the four KP equations hold for every
/// s-degree `1..=nmax`.
///
/// # Safety
/// `engine` must be a live engine and `passed` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dessin_engine_kp_check(
    engine: *const DessinEngine,
    nmax: u32,
    passed: *mut bool,
) -> DessinStatus {
    guard(|| {
        let engine = engine_ref(engine)?;
        let report = kp_report_standard(&engine.state, nmax)?;
        put(passed, report.passed())
    })
}

/// Rooted planar hypermaps on `d` darts, from the closed formula.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dessin_closed_genus0(d: u32, out: *mut *mut c_char) -> DessinStatus {
    guard(|| {
        if d == 0 {
            return Err(DessinStatus::InvalidArgument);
        }
        put_string(out, closed_genus0(d).to_string())
    })
}

/// Rooted genus-1 hypermaps on `d` darts, from the closed formula.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn dessin_closed_genus1(d: u32, out: *mut *mut c_char) -> DessinStatus {
    guard(|| {
        if d == 0 {
            return Err(DessinStatus::InvalidArgument);
        }
        put_string(out, closed_genus1(d).to_string())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn dessin_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Static description of a status code; never null, never freed.
#[no_mangle]
pub extern "C" fn dessin_status_message(status: DessinStatus) -> *const c_char {
    let msg: &'static CStr = match status {
        DessinStatus::Ok => c"ok",
        DessinStatus::NullPointer => c"null pointer argument",
        DessinStatus::InvalidArgument => c"invalid argument",
        DessinStatus::OutOfRange => c"degree beyond the engine's range",
        DessinStatus::CheckFailed => c"internal consistency check failed",
        DessinStatus::Panic => c"internal panic",
    };
    msg.as_ptr()
}
