//! C ABI over the diagram library.
//!
//! Diagrams are opaque handles. Every call returns an integer status; strings handed
//! out by the library are released with `fs_string_free`, handles with `fs_diagram_free`.
//! The message of the most recent failure on the calling thread is available from
//! `fs_last_error`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fillscope::cli::build_family;
use fillscope::constructions::DEFAULT_AREA_BUDGET;
use fillscope::diagram::format::{from_text, to_text, Certificate};
use fillscope::{build_presentation, Diagram, Error, Family};

pub const FS_OK: i32 = 0;
pub const FS_ERR_NULL: i32 = 1;
pub const FS_ERR_UTF8: i32 = 2;
pub const FS_ERR_PARAM: i32 = 3;
pub const FS_ERR_PARSE: i32 = 4;
pub const FS_ERR_INVALID: i32 = 5;
pub const FS_ERR_BUDGET: i32 = 6;
pub const FS_ERR_OTHER: i32 = 7;
pub const FS_ERR_PANIC: i32 = 8;

/// Opaque diagram handle.
pub struct FsDiagram {
    diagram: Diagram,
    cert: Option<Certificate>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn code_of(e: &Error) -> i32 {
    match e {
        Error::Param(_) | Error::WrongFamily(_) | Error::AlphabetMismatch(_) => FS_ERR_PARAM,
        Error::Parse(_) => FS_ERR_PARSE,
        Error::InvalidDiagram(_) => FS_ERR_INVALID,
        Error::Resource(_) | Error::AreaBudget { .. } | Error::ExceedsCap { .. } => FS_ERR_BUDGET,
        _ => FS_ERR_OTHER,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (i32, String)>) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FS_OK,
        Ok(Err((code, msg))) => {
            set_error(&msg);
            code
        }
        Err(_) => {
            set_error("internal panic");
            FS_ERR_PANIC
        }
    }
}

fn lib_err(e: Error) -> (i32, String) {
    (code_of(&e), e.to_string())
}

unsafe fn borrow_str<'a>(p: *const c_char) -> Result<&'a str, (i32, String)> {
    if p.is_null() {
        return Err((FS_ERR_NULL, "null string argument".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (FS_ERR_UTF8, "argument is not UTF-8".into()))
}

unsafe fn give_string(out: *mut *mut c_char, s: String) -> Result<(), (i32, String)> {
    if out.is_null() {
        return Err((FS_ERR_NULL, "null output pointer".into()));
    }
    let c = CString::new(s).map_err(|_| (FS_ERR_OTHER, "string contains NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn borrow_diagram<'a>(d: *const FsDiagram) -> Result<&'a FsDiagram, (i32, String)> {
    d.as_ref().ok_or((FS_ERR_NULL, "null diagram handle".to_string()))
}

fn opt(v: i64) -> Option<usize> {
    (v >= 0).then_some(v as usize)
}

/// Builds a diagram family (`dn`, `sigma`, `bpower`, `bpower_hat`, `delta`, `qmwn`).
/// Negative parameters mean "not given"; a zero budget selects the default.
///
/// # Safety
/// `family` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fs_construct(
    family: *const c_char,
    k: i64,
    m: i64,
    n: i64,
    budget_faces: u64,
    out: *mut *mut FsDiagram,
) -> i32 {
    guard(|| {
        if out.is_null() {
            return Err((FS_ERR_NULL, "null output pointer".into()));
        }
        let fam = borrow_str(family)?;
        let budget = if budget_faces == 0 { DEFAULT_AREA_BUDGET } else { budget_faces };
        let b = build_family(fam, opt(k), opt(m), opt(n), false, budget).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(FsDiagram { diagram: b.diagram, cert: Some(b.cert) }));
        Ok(())
    })
}

/// Parses a diagram in the interchange text format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fs_diagram_parse(text: *const c_char, out: *mut *mut FsDiagram) -> i32 {
    guard(|| {
        if out.is_null() {
            return Err((FS_ERR_NULL, "null output pointer".into()));
        }
        let t = borrow_str(text)?;
        let (diagram, cert) = from_text(t).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(FsDiagram { diagram, cert }));
        Ok(())
    })
}

/// Serializes a diagram (with its certificate, if any).
///
/// # Safety
/// `d` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fs_diagram_to_text(d: *const FsDiagram, out: *mut *mut c_char) -> i32 {
    guard(|| {
        let h = borrow_diagram(d)?;
        give_string(out, to_text(&h.diagram, h.cert.as_ref()))
    })
}

/// Returns `FS_OK` for a valid diagram and `FS_ERR_INVALID` otherwise.
///
/// # Safety
/// `d` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn fs_diagram_validate(d: *const FsDiagram) -> i32 {
    guard(|| {
        let h = borrow_diagram(d)?;
        let r = h.diagram.validate();
        if r.passed() {
            Ok(())
        } else {
            Err((FS_ERR_INVALID, r.to_string()))
        }
    })
}

/// Writes area, vertex count and intrinsic diameter; any output pointer may be null.
///
/// # Safety
/// `d` must be a live handle; non-null outputs must be valid.
#[no_mangle]
pub unsafe extern "C" fn fs_diagram_stats(
    d: *const FsDiagram,
    area: *mut u64,
    vertices: *mut u64,
    idiam: *mut u64,
) -> i32 {
    guard(|| {
        let h = borrow_diagram(d)?;
        if !area.is_null() {
            *area = h.diagram.area() as u64;
        }
        if !vertices.is_null() {
            *vertices = h.diagram.vertex_count() as u64;
        }
        if !idiam.is_null() {
            *idiam = h.diagram.idiam() as u64;
        }
        Ok(())
    })
}

/// The boundary word read from the base.
///
/// # Safety
/// `d` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fs_diagram_boundary(d: *const FsDiagram, out: *mut *mut c_char) -> i32 {
    guard(|| {
        let h = borrow_diagram(d)?;
        give_string(out, h.diagram.boundary_word().to_string())
    })
}

/// The presentation text of a named family; negative parameters mean "not given".
///
/// # Safety
/// `family` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn fs_presentation_text(family: *const c_char, k: i64, m: i64, out: *mut *mut c_char) -> i32 {
    guard(|| {
        let tag = borrow_str(family)?;
        let fam = Family::from_parts(tag, opt(k), opt(m)).map_err(lib_err)?;
        let p = build_presentation(&fam).map_err(lib_err)?;
        give_string(out, p.to_text())
    })
}

/// Copy of the last error message on this thread, or null if there is none.
#[no_mangle]
pub extern "C" fn fs_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |c| c.clone().into_raw()))
}

/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `d` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fs_diagram_free(d: *mut FsDiagram) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}
