//! C ABI over the `realign` library.
//!
//! States live behind an opaque `RealignState` handle. Every fallible call
//! returns a `RealignStatus`; on failure the message is kept per thread and
//! can be copied out with `realign_last_error_message`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use realign::bipartite::{self, BipartiteState, Subsystem, ValidateOptions};
use realign::criteria::{self, LogBase, Settings};
use realign::linalg::{ComplexMatrix, C64};
use realign::states::StateSpec;
use realign::Error;

/// Opaque handle to a validated bipartite density matrix.
pub struct RealignState {
    inner: BipartiteState,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RealignStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Shape = 3,
    NotHermitian = 4,
    NotPositive = 5,
    Trace = 6,
    NoConvergence = 7,
    Numerical = 8,
    Parse = 9,
    BufferTooSmall = 10,
    Panic = 11,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RealignSubsystem {
    A = 0,
    B = 1,
}

/// Passed as `uint32_t`; other values are rejected with `InvalidArgument`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RealignLogBase {
    Two = 0,
    E = 1,
}

/// Outcome of one criterion. `scalar` is N for realignment and the smallest
/// partial-transpose eigenvalue for PPT; `log_n` is NaN when not applicable.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealignReport {
    pub detected_entangled: bool,
    pub scalar: f64,
    pub log_n: f64,
}

/// `concurrence` and `e_f` are only meaningful when `has_two_qubit_measures`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealignMeasures {
    pub n: f64,
    pub log_n: f64,
    pub n_minus_one: f64,
    pub f: f64,
    pub has_two_qubit_measures: bool,
    pub concurrence: f64,
    pub e_f: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn status_of(e: &Error) -> RealignStatus {
    match e {
        Error::Shape(_) | Error::IndexOutOfRange { .. } => RealignStatus::Shape,
        Error::NonFinite { .. } | Error::InvalidParameter { .. } | Error::Precondition(_) => {
            RealignStatus::InvalidArgument
        }
        Error::NotHermitian { .. } => RealignStatus::NotHermitian,
        Error::NotPositive { .. } => RealignStatus::NotPositive,
        Error::Trace { .. } => RealignStatus::Trace,
        Error::NoConvergence { .. } => RealignStatus::NoConvergence,
        Error::Numerical(_) | Error::Io(_) => RealignStatus::Numerical,
        Error::Parse(_) => RealignStatus::Parse,
    }
}

struct Fail(RealignStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(RealignStatus::NullPointer, format!("`{what}` is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> RealignStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            RealignStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal panic: {msg}"));
            RealignStatus::Panic
        }
    }
}

unsafe fn state_ref<'a>(st: *const RealignState) -> Result<&'a BipartiteState, Fail> {
    st.as_ref().map(|s| &s.inner).ok_or_else(|| null("state"))
}

unsafe fn write_out<T>(out: *mut T, value: T, name: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(name));
    }
    out.write(value);
    Ok(())
}

fn invalid(msg: String) -> Fail {
    Fail(RealignStatus::InvalidArgument, msg)
}

fn settings(tol: f64, base: u32) -> Result<Settings, Fail> {
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(invalid(format!(
            "tolerance must be finite and non-negative, got {tol}"
        )));
    }
    Ok(Settings {
        tol,
        log_base: match base {
            b if b == RealignLogBase::Two as u32 => LogBase::Two,
            b if b == RealignLogBase::E as u32 => LogBase::E,
            other => return Err(invalid(format!("unknown log base {other}"))),
        },
    })
}

fn boxed(inner: BipartiteState) -> *mut RealignState {
    Box::into_raw(Box::new(RealignState { inner }))
}

/// Builds a state from `(m n) x (m n)` row-major real and imaginary parts.
/// `im` may be null for a real matrix. On success `*out` owns a new handle.
///
/// # Safety
/// `re` (and `im` when non-null) must point to `(m n)^2` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn realign_state_new(
    m: usize,
    n: usize,
    re: *const f64,
    im: *const f64,
    normalize_trace: bool,
    out: *mut *mut RealignState,
) -> RealignStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if re.is_null() {
            return Err(null("re"));
        }
        let d = m
            .checked_mul(n)
            .filter(|&d| d > 0 && d <= 4096)
            .ok_or_else(|| {
                Fail(
                    RealignStatus::Shape,
                    format!("unsupported dimensions {m} x {n}"),
                )
            })?;
        let len = d * d;
        let re = std::slice::from_raw_parts(re, len);
        let data: Vec<C64> = if im.is_null() {
            re.iter().map(|&x| C64::new(x, 0.0)).collect()
        } else {
            let im = std::slice::from_raw_parts(im, len);
            re.iter().zip(im).map(|(&x, &y)| C64::new(x, y)).collect()
        };
        let z = ComplexMatrix::from_row_major(d, d, data)?;
        let s = bipartite::validate_with(z, m, n, ValidateOptions { normalize_trace })?;
        out.write(boxed(s));
        Ok(())
    })
}

/// Builds a catalog state from its textual spec, e.g. `"horodecki3x3 a=0.236"`.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn realign_state_from_spec(
    spec: *const c_char,
    out: *mut *mut RealignState,
) -> RealignStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if spec.is_null() {
            return Err(null("spec"));
        }
        let text = CStr::from_ptr(spec)
            .to_str()
            .map_err(|_| Fail(RealignStatus::Parse, "spec is not valid UTF-8".into()))?;
        let s = text.parse::<StateSpec>()?.build()?;
        out.write(boxed(s));
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `st` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn realign_state_free(st: *mut RealignState) {
    if !st.is_null() {
        drop(Box::from_raw(st));
    }
}

/// # Safety
/// `st` must be a live handle; `m` and `n` must be writable.
#[no_mangle]
pub unsafe extern "C" fn realign_state_dims(
    st: *const RealignState,
    m: *mut usize,
    n: *mut usize,
) -> RealignStatus {
    guard(|| {
        let s = state_ref(st)?;
        write_out(m, s.dim_a(), "m")?;
        write_out(n, s.dim_b(), "n")
    })
}

/// Trace norm `N` of the realigned matrix.
///
/// # Safety
/// `st` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn realign_trace_norm(
    st: *const RealignState,
    out: *mut f64,
) -> RealignStatus {
    guard(|| {
        let v = criteria::realignment_norm(state_ref(st)?)?;
        write_out(out, v, "out")
    })
}

/// # Safety
/// `st` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn realign_realignment_test(
    st: *const RealignState,
    tol: f64,
    base: u32,
    out: *mut RealignReport,
) -> RealignStatus {
    guard(|| {
        let r = criteria::realignment_test_with(state_ref(st)?, &settings(tol, base)?)?;
        write_out(
            out,
            RealignReport {
                detected_entangled: r.detected_entangled,
                scalar: r.scalar,
                log_n: r.log_n.unwrap_or(f64::NAN),
            },
            "out",
        )
    })
}

/// Smallest eigenvalue of the partial transpose on `subsystem` (a `RealignSubsystem` value).
///
/// # Safety
/// `st` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn realign_ppt_min_eigenvalue(
    st: *const RealignState,
    subsystem: u32,
    out: *mut f64,
) -> RealignStatus {
    guard(|| {
        let sub = match subsystem {
            s if s == RealignSubsystem::A as u32 => Subsystem::A,
            s if s == RealignSubsystem::B as u32 => Subsystem::B,
            other => return Err(invalid(format!("unknown subsystem {other}"))),
        };
        let v = criteria::min_partial_transpose_eigenvalue(state_ref(st)?, sub)?;
        write_out(out, v, "out")
    })
}

/// # Safety
/// `st` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn realign_measures(
    st: *const RealignState,
    tol: f64,
    base: u32,
    out: *mut RealignMeasures,
) -> RealignStatus {
    guard(|| {
        let m = criteria::measures_with(state_ref(st)?, &settings(tol, base)?)?;
        write_out(
            out,
            RealignMeasures {
                n: m.n,
                log_n: m.log_n,
                n_minus_one: m.n_minus_one,
                f: m.f,
                has_two_qubit_measures: m.concurrence.is_some(),
                concurrence: m.concurrence.unwrap_or(f64::NAN),
                e_f: m.e_f.unwrap_or(f64::NAN),
            },
            "out",
        )
    })
}

/// Concurrence of a two-qubit state; `InvalidArgument` for other dimensions.
///
/// # Safety
/// `st` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn realign_concurrence(
    st: *const RealignState,
    out: *mut f64,
) -> RealignStatus {
    guard(|| {
        let v = criteria::concurrence(state_ref(st)?)?;
        write_out(out, v, "out")
    })
}

/// Copies the `m^2 x n^2` realigned matrix, row-major, into `re` and `im`
/// (each of capacity `len`). Returns `BufferTooSmall` if `len < m^2 n^2`.
///
/// # Safety
/// `re` and `im` must each point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn realign_realigned_matrix(
    st: *const RealignState,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> RealignStatus {
    guard(|| {
        let s = state_ref(st)?;
        let (m, n) = s.dims();
        let need = m * m * n * n;
        if len < need {
            return Err(Fail(
                RealignStatus::BufferTooSmall,
                format!("buffer holds {len} entries, realigned matrix has {need}"),
            ));
        }
        if re.is_null() {
            return Err(null("re"));
        }
        if im.is_null() {
            return Err(null("im"));
        }
        let r = bipartite::realign(s);
        for (k, z) in r.as_slice().iter().enumerate() {
            re.add(k).write(z.re);
            im.add(k).write(z.im);
        }
        Ok(())
    })
}

/// Copies the calling thread's last error message (empty after a success)
/// into `buf`, truncated and NUL-terminated. Returns the full message length
/// plus one, so a caller can size `buf` with a first call on a null buffer.
///
/// # Safety
/// `buf` must be null or point to `cap` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn realign_last_error_message(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && cap > 0 {
            let k = bytes.len().min(cap - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, k);
            buf.add(k).write(0);
        }
        bytes.len() + 1
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn realign_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
