//! C ABI for irrmoon.
//!
//! Objects cross the boundary as opaque handles that the caller releases with
//! the matching `irm_*_free`. Every fallible call returns an [`IrmStatus`]; on a
//! nonzero status `irm_last_error` gives the message for the calling thread.
//! Strings returned through out-parameters are owned by the caller and must be
//! released with `irm_string_free`.

use irrmoon::exact::{parse_cyc, CycNum, ExactError};
use irrmoon::modgroup::{genus, parse_generators, reduce_generators, GroupError, Psl2pGroup};
use irrmoon::moonshine::{self, Expectations, MoonshineError, Report, VerifyOptions};
use irrmoon::qseries::{parse_expr, QSeries, SeriesError};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IrmStatus {
    Ok = 0,
    NullArg = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Math = 4,
    Io = 5,
    Panic = 6,
}

/// A cyclotomic number.
pub struct IrmCyc(CycNum);
/// A truncated q-series with cyclotomic coefficients.
pub struct IrmSeries(QSeries);
/// A subgroup of PSL(2,p).
pub struct IrmGroup(Psl2pGroup);
/// Verification reports.
pub struct IrmReport(Vec<Report>);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Fail(IrmStatus, String);

impl From<ExactError> for Fail {
    fn from(e: ExactError) -> Self {
        let s = if matches!(e, ExactError::Parse { .. }) {
            IrmStatus::Parse
        } else {
            IrmStatus::Math
        };
        Fail(s, e.to_string())
    }
}

impl From<SeriesError> for Fail {
    fn from(e: SeriesError) -> Self {
        let s = match &e {
            SeriesError::Parse { .. } => IrmStatus::Parse,
            SeriesError::Exact(ExactError::Parse { .. }) => IrmStatus::Parse,
            _ => IrmStatus::Math,
        };
        Fail(s, e.to_string())
    }
}

impl From<GroupError> for Fail {
    fn from(e: GroupError) -> Self {
        let s = match e {
            GroupError::Parse { .. } | GroupError::UnknownName(_) => IrmStatus::Parse,
            _ => IrmStatus::Math,
        };
        Fail(s, e.to_string())
    }
}

impl From<MoonshineError> for Fail {
    fn from(e: MoonshineError) -> Self {
        let s = match &e {
            MoonshineError::Io(_) => IrmStatus::Io,
            MoonshineError::Table { .. }
            | MoonshineError::Expectations { .. }
            | MoonshineError::UnknownCase(_) => IrmStatus::Parse,
            _ => IrmStatus::Math,
        };
        Fail(s, e.to_string())
    }
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> IrmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => IrmStatus::Ok,
        Ok(Err(Fail(s, msg))) => {
            set_error(&msg);
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&format!("internal panic: {msg}"));
            IrmStatus::Panic
        }
    }
}

fn null() -> Fail {
    Fail(IrmStatus::NullArg, "null argument".into())
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(IrmStatus::InvalidUtf8, "argument is not valid UTF-8".into()))
}

unsafe fn obj<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(null)
}

unsafe fn put<T>(out: *mut *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null());
    }
    *out = Box::into_raw(Box::new(v));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null());
    }
    *out = CString::new(s)
        .map_err(|_| Fail(IrmStatus::Math, "string contains NUL".into()))?
        .into_raw();
    Ok(())
}

unsafe fn put_val<T>(out: *mut T, v: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null());
    }
    *out = v;
    Ok(())
}

/// Message for the last failed call on this thread, or NULL. Free with `irm_string_free`.
#[no_mangle]
pub extern "C" fn irm_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| {
        e.borrow()
            .as_ref()
            .map_or(std::ptr::null_mut(), |c| c.clone().into_raw())
    })
}

/// # Safety
/// `s` must come from this library (or be NULL).
#[no_mangle]
pub unsafe extern "C" fn irm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn irm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

// ---- cyclotomic numbers

/// Parse a literal such as `3/2 - 5/2*sqrt5` or `z{7}^{3}`.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn irm_cyc_parse(text_: *const c_char, out: *mut *mut IrmCyc) -> IrmStatus {
    guard(|| put(out, IrmCyc(parse_cyc(text(text_)?)?)))
}

/// # Safety
/// Handles must be live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn irm_cyc_add(
    a: *const IrmCyc,
    b: *const IrmCyc,
    out: *mut *mut IrmCyc,
) -> IrmStatus {
    guard(|| put(out, IrmCyc(&obj(a)?.0 + &obj(b)?.0)))
}

/// # Safety
/// Handles must be live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn irm_cyc_sub(
    a: *const IrmCyc,
    b: *const IrmCyc,
    out: *mut *mut IrmCyc,
) -> IrmStatus {
    guard(|| put(out, IrmCyc(&obj(a)?.0 - &obj(b)?.0)))
}

/// # Safety
/// Handles must be live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn irm_cyc_mul(
    a: *const IrmCyc,
    b: *const IrmCyc,
    out: *mut *mut IrmCyc,
) -> IrmStatus {
    guard(|| put(out, IrmCyc(&obj(a)?.0 * &obj(b)?.0)))
}

/// a / b; MATH on division by zero.
///
/// # Safety
/// Handles must be live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn irm_cyc_div(
    a: *const IrmCyc,
    b: *const IrmCyc,
    out: *mut *mut IrmCyc,
) -> IrmStatus {
    guard(|| put(out, IrmCyc((&obj(a)?.0 / &obj(b)?.0)?)))
}

/// ζ ↦ ζ^k; MATH when k shares a factor with the conductor.
///
/// # Safety
/// Handle must be live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn irm_cyc_galois(
    a: *const IrmCyc,
    k: i64,
    out: *mut *mut IrmCyc,
) -> IrmStatus {
    guard(|| put(out, IrmCyc(obj(a)?.0.galois(k)?)))
}

/// # Safety
/// Handles must be live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn irm_cyc_equal(
    a: *const IrmCyc,
    b: *const IrmCyc,
    out: *mut bool,
) -> IrmStatus {
    guard(|| put_val(out, obj(a)?.0 == obj(b)?.0))
}

/// Human-readable form (`raw` = false) or the z{N}^{e} literal form (`raw` = true).
///
/// # Safety
/// Handle must be live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn irm_cyc_to_string(
    a: *const IrmCyc,
    raw: bool,
    out: *mut *mut c_char,
) -> IrmStatus {
    guard(|| {
        let c = &obj(a)?.0;
        put_string(out, if raw { c.raw() } else { c.pretty() })
    })
}

/// # Safety
/// Handle must be live; `re` and `im` valid.
#[no_mangle]
pub unsafe extern "C" fn irm_cyc_to_complex(
    a: *const IrmCyc,
    re: *mut f64,
    im: *mut f64,
) -> IrmStatus {
    guard(|| {
        let z = obj(a)?.0.to_complex();
        put_val(re, z.re)?;
        put_val(im, z.im)
    })
}

/// # Safety
/// `a` must come from this library (or be NULL) and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn irm_cyc_free(a: *mut IrmCyc) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

// ---- q-series

/// Exact expansion of an eta-quotient expression up to O(q^trunc).
///
/// # Safety
/// `expr` must be a NUL-terminated string; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn irm_series_expand(
    expr: *const c_char,
    trunc: i64,
    out: *mut *mut IrmSeries,
) -> IrmStatus {
    guard(|| put(out, IrmSeries(parse_expr(text(expr)?)?.series(trunc)?)))
}

/// Coefficient of q^(num/den).
///
/// # Safety
/// Handle must be live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn irm_series_coeff(
    s: *const IrmSeries,
    num: i64,
    den: i64,
    out: *mut *mut IrmCyc,
) -> IrmStatus {
    guard(|| {
        if den == 0 {
            return Err(Fail(IrmStatus::Math, "zero denominator".into()));
        }
        put(
            out,
            IrmCyc(obj(s)?.0.coeff(num_rational::Rational64::new(num, den))),
        )
    })
}

/// # Safety
/// Handle must be live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn irm_series_galois(
    s: *const IrmSeries,
    k: i64,
    out: *mut *mut IrmSeries,
) -> IrmStatus {
    guard(|| put(out, IrmSeries(obj(s)?.0.galois(k)?)))
}

/// Pretty form, or the `EXP n/d COEFF c` line form when `lines` is true.
///
/// # Safety
/// Handle must be live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn irm_series_render(
    s: *const IrmSeries,
    lines: bool,
    out: *mut *mut c_char,
) -> IrmStatus {
    guard(|| {
        let s = &obj(s)?.0;
        put_string(
            out,
            if lines {
                s.render_lines()
            } else {
                s.render_pretty()
            },
        )
    })
}

/// # Safety
/// `s` must come from this library (or be NULL) and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn irm_series_free(s: *mut IrmSeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

// ---- groups

/// Image in PSL(2,p) of a comma-separated generator list (names or [[a,b],[c,d]]).
///
/// # Safety
/// `gens` must be a NUL-terminated string; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn irm_group_generate(
    p: u64,
    gens: *const c_char,
    out: *mut *mut IrmGroup,
) -> IrmStatus {
    guard(|| {
        let elts = parse_generators(text(gens)?, Some(p))?;
        let red = reduce_generators(&elts, p)?;
        put(out, IrmGroup(Psl2pGroup::generate(p, &red)?))
    })
}

/// # Safety
/// Handle must be live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn irm_group_order(g: *const IrmGroup, out: *mut u64) -> IrmStatus {
    guard(|| put_val(out, obj(g)?.0.order() as u64))
}

/// Short name such as D3, A4, S4, A5, L2(7).
///
/// # Safety
/// Handle must be live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn irm_group_identify(
    g: *const IrmGroup,
    out: *mut *mut c_char,
) -> IrmStatus {
    guard(|| put_string(out, obj(g)?.0.identify().short()))
}

/// # Safety
/// Handle must be live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn irm_group_genus(g: *const IrmGroup, out: *mut i64) -> IrmStatus {
    guard(|| put_val(out, genus(&obj(g)?.0)?.genus))
}

/// # Safety
/// `g` must come from this library (or be NULL) and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn irm_group_free(g: *mut IrmGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

// ---- verification

fn data_dir(p: *const c_char) -> Result<PathBuf, Fail> {
    if p.is_null() {
        Ok(moonshine::default_data_dir())
    } else {
        Ok(PathBuf::from(unsafe { text(p)? }))
    }
}

/// Verify one case (`case_id` non-NULL) or everything (`case_id` NULL).
/// `data_dir` NULL means the default data directory.
///
/// # Safety
/// Non-NULL strings must be NUL-terminated; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn irm_verify(
    case_id: *const c_char,
    data_dir_: *const c_char,
    num_tol: f64,
    out: *mut *mut IrmReport,
) -> IrmStatus {
    guard(|| {
        let dir = data_dir(data_dir_)?;
        let tables = moonshine::load_tables(&dir.join("tables"));
        let exp = Expectations::load(&dir.join("expectations.txt"))?;
        let opts = VerifyOptions {
            num_tol: if num_tol > 0.0 {
                num_tol
            } else {
                moonshine::verify::DEFAULT_NUM_TOL
            },
        };
        let reports = if case_id.is_null() {
            moonshine::verify_all(&exp, &tables, &opts)?
        } else {
            vec![moonshine::verify_case(
                text(case_id)?,
                &exp,
                &tables,
                &opts,
            )?]
        };
        put(out, IrmReport(reports))
    })
}

/// True when no check failed.
///
/// # Safety
/// Handle must be live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn irm_report_passed(r: *const IrmReport, out: *mut bool) -> IrmStatus {
    guard(|| put_val(out, obj(r)?.0.iter().all(Report::passed)))
}

/// The `CASE …` / `CHECK …` lines.
///
/// # Safety
/// Handle must be live; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn irm_report_render(
    r: *const IrmReport,
    out: *mut *mut c_char,
) -> IrmStatus {
    guard(|| put_string(out, obj(r)?.0.iter().map(Report::render).collect()))
}

/// # Safety
/// `r` must come from this library (or be NULL) and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn irm_report_free(r: *mut IrmReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}
