//! C ABI over the persistence-module library.
//!
//! Conventions:
//! * Handles (`PmodModule`, `PmodBarcode`, `PmodPresentation`,
//!   `PmodCertificate`) are opaque; free them with the matching `_free`.
//! * Every fallible call returns a [`PmodStatus`]; on anything but
//!   `PMOD_STATUS_OK`, `pmod_last_error_message` describes the failure
//!   (pointer valid until the next failing call on the same thread).
//! * Rationals cross the boundary as strings (`"1/2"`, `"-3"`, `"inf"`),
//!   keeping the interface exact.
//! * Strings returned as `*mut c_char` are owned by the caller; release
//!   them with `pmod_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::ptr;

use pmod_core::barcode::{decompose, from_barcode, Barcode};
use pmod_core::bridge::{compose_fg, compose_gf, discretize, realify};
use pmod_core::error::Error;
use pmod_core::format::{
    parse_barcode, parse_certificate, parse_module, parse_presentation, serialize_barcode,
    serialize_certificate, serialize_module, serialize_presentation,
};
use pmod_core::graded::{graded_to_nat, nat_to_graded, GradedPresentation};
use pmod_core::interleave::{
    bottleneck_distance, brute_force_interleaving_exists, canonical_fg_interleaving,
    canonical_gf_interleaving, canonical_pixel_interleaving, canonical_shift_interleaving,
    promote_weak_to_strong, verify_strong, verify_weak, CertificateKind, InterleavingCertificate,
};
use pmod_core::module::TameModule;
use pmod_core::rational::Rational;

/// Status code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PmodStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    ParamError = 4,
    DimensionError = 5,
    OrderError = 6,
    StabilityError = 7,
    ValidationError = 8,
    ResourceError = 9,
    UsageError = 10,
    PreconditionError = 11,
    IoError = 12,
}

/// Canonical certificate construction selector.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PmodCanonicalKind {
    Shift = 0,
    Pixel = 1,
    Gf = 2,
    Fg = 3,
}

pub struct PmodModule(TameModule);
pub struct PmodBarcode(Barcode);
pub struct PmodPresentation(GradedPresentation);
pub struct PmodCertificate(InterleavingCertificate);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &Error) -> PmodStatus {
    match err {
        Error::Param(_) => PmodStatus::ParamError,
        Error::Dimension(_) => PmodStatus::DimensionError,
        Error::Order(_) => PmodStatus::OrderError,
        Error::Stability(_) => PmodStatus::StabilityError,
        Error::Parse { .. } => PmodStatus::ParseError,
        Error::Validation(_) => PmodStatus::ValidationError,
        Error::Resource(_) => PmodStatus::ResourceError,
        Error::Usage(_) => PmodStatus::UsageError,
        Error::Precondition(_) => PmodStatus::PreconditionError,
        Error::Io(_) => PmodStatus::IoError,
    }
}

fn fail(err: Error) -> PmodStatus {
    set_error(&err.to_string());
    status_of(&err)
}

fn null_fail(what: &str) -> PmodStatus {
    set_error(&format!("null pointer: {what}"));
    PmodStatus::NullPointer
}

// SAFETY of all the small readers below: the caller promises the pointer
// is either null (checked) or a valid NUL-terminated string / live handle
// created by this library.

unsafe fn read_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, PmodStatus> {
    if ptr.is_null() {
        return Err(null_fail(what));
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error(&format!("{what} is not valid UTF-8"));
        PmodStatus::InvalidUtf8
    })
}

unsafe fn read_rational(ptr: *const c_char, what: &str) -> Result<Rational, PmodStatus> {
    let text = read_str(ptr, what)?;
    text.parse::<Rational>().map_err(fail)
}

unsafe fn deref<'a, T>(ptr: *const T, what: &str) -> Result<&'a T, PmodStatus> {
    if ptr.is_null() {
        Err(null_fail(what))
    } else {
        Ok(&*ptr)
    }
}

fn give_string(text: String) -> *mut c_char {
    CString::new(text.replace('\0', " "))
        .map(CString::into_raw)
        .unwrap_or(ptr::null_mut())
}

unsafe fn give<T>(out: *mut *mut T, value: T, what: &str) -> PmodStatus {
    if out.is_null() {
        return null_fail(what);
    }
    *out = Box::into_raw(Box::new(value));
    PmodStatus::Ok
}

macro_rules! ffi_try {
    ($expr:expr) => {
        match $expr {
            Ok(value) => value,
            Err(status) => return status,
        }
    };
}

macro_rules! core_try {
    ($expr:expr) => {
        match $expr {
            Ok(value) => value,
            Err(err) => return fail(err),
        }
    };
}

/// Message for the most recent failure on this thread; valid until the next
/// failing call on the same thread.
#[no_mangle]
pub extern "C" fn pmod_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must have been returned by a `pmod_*` function and not freed yet.
#[no_mangle]
pub unsafe extern "C" fn pmod_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Releases a module handle.
///
/// # Safety
/// The handle must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pmod_module_free(handle: *mut PmodModule) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Releases a barcode handle.
///
/// # Safety
/// The handle must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pmod_barcode_free(handle: *mut PmodBarcode) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Releases a presentation handle.
///
/// # Safety
/// The handle must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pmod_presentation_free(handle: *mut PmodPresentation) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Releases a certificate handle.
///
/// # Safety
/// The handle must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn pmod_certificate_free(handle: *mut PmodCertificate) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

// ----------------------------------------------------------------- modules

/// Parses the `pmod v1` text format.
///
/// # Safety
/// `text` is a NUL-terminated string; `out` points to writable memory.
#[no_mangle]
pub unsafe extern "C" fn pmod_module_parse(
    text: *const c_char,
    out: *mut *mut PmodModule,
) -> PmodStatus {
    let text = ffi_try!(read_str(text, "module text"));
    let module = core_try!(parse_module(text));
    give(out, PmodModule(module), "module out-pointer")
}

/// Serializes a module back to its canonical text.
///
/// # Safety
/// `module` is a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn pmod_module_to_text(module: *const PmodModule) -> *mut c_char {
    match deref(module, "module") {
        Ok(m) => give_string(serialize_module(&m.0)),
        Err(_) => ptr::null_mut(),
    }
}

/// Dimension of the evaluation at an exact rational point.
///
/// # Safety
/// Pointer arguments as in [`pmod_module_parse`]; `out_dim` is writable.
#[no_mangle]
pub unsafe extern "C" fn pmod_module_eval(
    module: *const PmodModule,
    point: *const c_char,
    out_dim: *mut usize,
) -> PmodStatus {
    let module = ffi_try!(deref(module, "module"));
    let point = ffi_try!(read_rational(point, "evaluation point"));
    if out_dim.is_null() {
        return null_fail("dimension out-pointer");
    }
    *out_dim = core_try!(module.0.eval(&point));
    PmodStatus::Ok
}

unsafe fn module_unary(
    module: *const PmodModule,
    value: *const c_char,
    out: *mut *mut PmodModule,
    op: impl FnOnce(&TameModule, &Rational) -> pmod_core::error::Result<TameModule>,
) -> PmodStatus {
    let module = ffi_try!(deref(module, "module"));
    let value = ffi_try!(read_rational(value, "rational argument"));
    let result = core_try!(op(&module.0, &value));
    give(out, PmodModule(result), "module out-pointer")
}

/// Shift: evaluation at q becomes evaluation at p+q.
///
/// # Safety
/// Pointer arguments follow the crate-level conventions.
#[no_mangle]
pub unsafe extern "C" fn pmod_module_translate(
    module: *const PmodModule,
    shift: *const c_char,
    out: *mut *mut PmodModule,
) -> PmodStatus {
    module_unary(module, shift, out, |m, r| m.translate(r))
}

/// Sample a real module at (n+1)·ε into a natural module.
///
/// # Safety
/// Pointer arguments follow the crate-level conventions.
#[no_mangle]
pub unsafe extern "C" fn pmod_module_discretize(
    module: *const PmodModule,
    epsilon: *const c_char,
    out: *mut *mut PmodModule,
) -> PmodStatus {
    module_unary(module, epsilon, out, discretize)
}

/// Spread a natural module out as x ↦ N(⌊x/ε⌋+1).
///
/// # Safety
/// Pointer arguments follow the crate-level conventions.
#[no_mangle]
pub unsafe extern "C" fn pmod_module_realify(
    module: *const PmodModule,
    epsilon: *const c_char,
    out: *mut *mut PmodModule,
) -> PmodStatus {
    module_unary(module, epsilon, out, realify)
}

/// Discretize then realify.
///
/// # Safety
/// Pointer arguments follow the crate-level conventions.
#[no_mangle]
pub unsafe extern "C" fn pmod_module_compose_gf(
    module: *const PmodModule,
    epsilon: *const c_char,
    out: *mut *mut PmodModule,
) -> PmodStatus {
    module_unary(module, epsilon, out, compose_gf)
}

/// Realify then discretize.
///
/// # Safety
/// Pointer arguments follow the crate-level conventions.
#[no_mangle]
pub unsafe extern "C" fn pmod_module_compose_fg(
    module: *const PmodModule,
    epsilon: *const c_char,
    out: *mut *mut PmodModule,
) -> PmodStatus {
    module_unary(module, epsilon, out, compose_fg)
}

/// Pixelization: constant on the lattice cells `[x0+kε, x0+(k+1)ε)`.
///
/// # Safety
/// Pointer arguments follow the crate-level conventions.
#[no_mangle]
pub unsafe extern "C" fn pmod_module_pixelize(
    module: *const PmodModule,
    x0: *const c_char,
    epsilon: *const c_char,
    out: *mut *mut PmodModule,
) -> PmodStatus {
    let module = ffi_try!(deref(module, "module"));
    let x0 = ffi_try!(read_rational(x0, "basepoint"));
    let epsilon = ffi_try!(read_rational(epsilon, "epsilon"));
    let result = core_try!(module.0.pixelize(&x0, &epsilon));
    give(out, PmodModule(result), "module out-pointer")
}

/// True iff every structure map strictly below `x0` is an isomorphism.
///
/// # Safety
/// Pointer arguments follow the crate-level conventions.
#[no_mangle]
pub unsafe extern "C" fn pmod_module_is_lower_stable(
    module: *const PmodModule,
    x0: *const c_char,
    out_stable: *mut bool,
) -> PmodStatus {
    let module = ffi_try!(deref(module, "module"));
    let x0 = ffi_try!(read_rational(x0, "basepoint"));
    if out_stable.is_null() {
        return null_fail("stability out-pointer");
    }
    *out_stable = core_try!(module.0.is_lower_stable(&x0));
    PmodStatus::Ok
}

// ---------------------------------------------------------------- barcodes

/// Parses the `barcode v1` text format.
///
/// # Safety
/// Pointer arguments follow the crate-level conventions.
#[no_mangle]
pub unsafe extern "C" fn pmod_barcode_parse(
    text: *const c_char,
    out: *mut *mut PmodBarcode,
) -> PmodStatus {
    let text = ffi_try!(read_str(text, "barcode text"));
    let barcode = core_try!(parse_barcode(text));
    give(out, PmodBarcode(barcode), "barcode out-pointer")
}

/// Serializes a barcode.
///
/// # Safety
/// `barcode` is a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn pmod_barcode_to_text(barcode: *const PmodBarcode) -> *mut c_char {
    match deref(barcode, "barcode") {
        Ok(b) => give_string(serialize_barcode(&b.0)),
        Err(_) => ptr::null_mut(),
    }
}

/// Interval decomposition of a module.
///
/// # Safety
/// Pointer arguments follow the crate-level conventions.
#[no_mangle]
pub unsafe extern "C" fn pmod_module_decompose(
    module: *const PmodModule,
    out: *mut *mut PmodBarcode,
) -> PmodStatus {
    let module = ffi_try!(deref(module, "module"));
    let barcode = core_try!(decompose(&module.0));
    give(out, PmodBarcode(barcode), "barcode out-pointer")
}

/// Direct sum of interval modules over 𝔽_field.
///
/// # Safety
/// Pointer arguments follow the crate-level conventions.
#[no_mangle]
pub unsafe extern "C" fn pmod_barcode_to_module(
    barcode: *const PmodBarcode,
    field: u64,
    out: *mut *mut PmodModule,
) -> PmodStatus {
    let barcode = ffi_try!(deref(barcode, "barcode"));
    let module = core_try!(from_barcode(&barcode.0, field));
    give(out, PmodModule(module), "module out-pointer")
}

/// Exact bottleneck distance, written as a rational string or `"inf"`.
///
/// # Safety
/// Pointer arguments follow the crate-level conventions.
#[no_mangle]
pub unsafe extern "C" fn pmod_bottleneck_distance(
    left: *const PmodBarcode,
    right: *const PmodBarcode,
    out_distance: *mut *mut c_char,
) -> PmodStatus {
    let left = ffi_try!(deref(left, "left barcode"));
    let right = ffi_try!(deref(right, "right barcode"));
    if out_distance.is_null() {
        return null_fail("distance out-pointer");
    }
    let d = core_try!(bottleneck_distance(&left.0, &right.0));
    *out_distance = give_string(d.to_string());
    PmodStatus::Ok
}

// ----------------------------------------------------- graded presentations

/// Parses the `grmod v1` text format.
///
/// # Safety
/// Pointer arguments follow the crate-level conventions.
#[no_mangle]
pub unsafe extern "C" fn pmod_presentation_parse(
    text: *const c_char,
    out: *mut *mut PmodPresentation,
) -> PmodStatus {
    let text = ffi_try!(read_str(text, "presentation text"));
    let pres = core_try!(parse_presentation(text));
    give(out, PmodPresentation(pres), "presentation out-pointer")
}

/// Serializes a presentation.
///
/// # Safety
/// `presentation` is a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn pmod_presentation_to_text(
    presentation: *const PmodPresentation,
) -> *mut c_char {
    match deref(presentation, "presentation") {
        Ok(p) => give_string(serialize_presentation(&p.0)),
        Err(_) => ptr::null_mut(),
    }
}

/// Minimal graded presentation of a natural module.
///
/// # Safety
/// Pointer arguments follow the crate-level conventions.
#[no_mangle]
pub unsafe extern "C" fn pmod_module_to_graded(
    module: *const PmodModule,
    out: *mut *mut PmodPresentation,
) -> PmodStatus {
    let module = ffi_try!(deref(module, "module"));
    let pres = core_try!(nat_to_graded(&module.0));
    give(out, PmodPresentation(pres), "presentation out-pointer")
}

/// Natural module presented by generators and relations; a negative
/// horizon means "largest degree + 1".
///
/// # Safety
/// Pointer arguments follow the crate-level conventions.
#[no_mangle]
pub unsafe extern "C" fn pmod_presentation_to_module(
    presentation: *const PmodPresentation,
    horizon: i64,
    out: *mut *mut PmodModule,
) -> PmodStatus {
    let presentation = ffi_try!(deref(presentation, "presentation"));
    let horizon = if horizon < 0 {
        presentation.0.max_degree() + 1
    } else {
        horizon as usize
    };
    let module = core_try!(graded_to_nat(&presentation.0, horizon));
    give(out, PmodModule(module), "module out-pointer")
}

// ------------------------------------------------------------ certificates

/// Parses the `cert v1` text format. Module references by path resolve
/// against the current directory; inline modules need no filesystem.
///
/// # Safety
/// Pointer arguments follow the crate-level conventions.
#[no_mangle]
pub unsafe extern "C" fn pmod_certificate_parse(
    text: *const c_char,
    out: *mut *mut PmodCertificate,
) -> PmodStatus {
    let text = ffi_try!(read_str(text, "certificate text"));
    let cert = core_try!(parse_certificate(text, Some(Path::new("."))));
    give(out, PmodCertificate(cert), "certificate out-pointer")
}

/// Serializes a certificate with both modules inline.
///
/// # Safety
/// `certificate` is a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn pmod_certificate_to_text(
    certificate: *const PmodCertificate,
) -> *mut c_char {
    match deref(certificate, "certificate") {
        Ok(c) => give_string(serialize_certificate(&c.0)),
        Err(_) => ptr::null_mut(),
    }
}

/// Builds one of the canonical certificates for `module`; `x0` may be null
/// except for the pixel construction (defaults to 0).
///
/// # Safety
/// Pointer arguments follow the crate-level conventions.
#[no_mangle]
pub unsafe extern "C" fn pmod_certificate_canonical(
    module: *const PmodModule,
    kind: PmodCanonicalKind,
    epsilon: *const c_char,
    x0: *const c_char,
    out: *mut *mut PmodCertificate,
) -> PmodStatus {
    let module = ffi_try!(deref(module, "module"));
    let epsilon = ffi_try!(read_rational(epsilon, "epsilon"));
    let x0 = if x0.is_null() {
        Rational::zero()
    } else {
        ffi_try!(read_rational(x0, "basepoint"))
    };
    let cert = core_try!(match kind {
        PmodCanonicalKind::Shift => canonical_shift_interleaving(&module.0, &epsilon),
        PmodCanonicalKind::Pixel => canonical_pixel_interleaving(&module.0, &x0, &epsilon),
        PmodCanonicalKind::Gf => canonical_gf_interleaving(&module.0, &epsilon),
        PmodCanonicalKind::Fg => canonical_fg_interleaving(&module.0, &epsilon),
    });
    give(out, PmodCertificate(cert), "certificate out-pointer")
}

/// Runs the strong or weak verifier according to the certificate's kind.
/// On rejection `out_accepted` is false and, when `out_witness` is
/// non-null, it receives a one-line description of the witness.
///
/// # Safety
/// Pointer arguments follow the crate-level conventions.
#[no_mangle]
pub unsafe extern "C" fn pmod_certificate_verify(
    certificate: *const PmodCertificate,
    out_accepted: *mut bool,
    out_witness: *mut *mut c_char,
) -> PmodStatus {
    let certificate = ffi_try!(deref(certificate, "certificate"));
    if out_accepted.is_null() {
        return null_fail("verdict out-pointer");
    }
    let verdict = core_try!(match certificate.0.kind() {
        CertificateKind::Strong => verify_strong(&certificate.0),
        CertificateKind::Weak(_) => verify_weak(&certificate.0),
    });
    *out_accepted = verdict.accepted();
    if !out_witness.is_null() {
        *out_witness = match verdict.witness() {
            Some(w) => give_string(format!(
                "{} fails at {}: {:?} != {:?}",
                w.check.as_str(),
                w.point,
                w.left,
                w.right
            )),
            None => ptr::null_mut(),
        };
    }
    PmodStatus::Ok
}

/// Promotes a verified weak certificate to a strong one at twice the shift.
///
/// # Safety
/// Pointer arguments follow the crate-level conventions.
#[no_mangle]
pub unsafe extern "C" fn pmod_certificate_promote(
    certificate: *const PmodCertificate,
    out: *mut *mut PmodCertificate,
) -> PmodStatus {
    let certificate = ffi_try!(deref(certificate, "certificate"));
    let promoted = core_try!(promote_weak_to_strong(&certificate.0));
    give(out, PmodCertificate(promoted), "certificate out-pointer")
}

/// Exhaustive search for a strong ε-interleaving over 𝔽₂ within `budget`.
///
/// # Safety
/// Pointer arguments follow the crate-level conventions.
#[no_mangle]
pub unsafe extern "C" fn pmod_brute_force_exists(
    left: *const PmodModule,
    right: *const PmodModule,
    epsilon: *const c_char,
    budget: u64,
    out_exists: *mut bool,
) -> PmodStatus {
    let left = ffi_try!(deref(left, "left module"));
    let right = ffi_try!(deref(right, "right module"));
    let epsilon = ffi_try!(read_rational(epsilon, "epsilon"));
    if out_exists.is_null() {
        return null_fail("existence out-pointer");
    }
    *out_exists = core_try!(brute_force_interleaving_exists(
        &left.0, &right.0, &epsilon, budget
    ));
    PmodStatus::Ok
}
