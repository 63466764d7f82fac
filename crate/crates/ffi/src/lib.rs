//! C ABI over `radon-core`.
//!
//! Every handle is opaque and owned by the caller once returned; release it with
//! the matching `*_free`. Fallible calls return a [`RadonStatus`] and write their
//! result through an out-pointer; on failure `radon_last_error` describes what
//! went wrong on the calling thread. Strings returned by the library are freed
//! with [`radon_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use radon_core::analysis::{moment_report, rigidity_check, sinogram_slabs, RigidityReport, Tolerances, DEFAULT_BINS};
use radon_core::config::{build_sinogram, BodySpec, FunctionSpec};
use radon_core::geometry::{ConvexBody, Direction, Vector};
use radon_core::oracles::{radon_gamma, GammaFamilySpec};
use radon_core::transforms::{direction_grid, Quadrature, Sinogram, SinogramOptions, TransformKind};
use radon_core::Error;

/// Result of a fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RadonStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidInput = 4,
    InsufficientSamples = 5,
    Numeric = 6,
    Io = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RadonTransform {
    Radon = 0,
    Xray = 1,
}

/// Sampling grid for [`radon_sinogram_generate`]. Zero node counts select the defaults.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct RadonGrid {
    pub directions: usize,
    pub offsets: usize,
    pub nodes: usize,
    pub angular_nodes: usize,
    pub seed: u64,
    /// When false the direction grid is the deterministic unshifted one.
    pub use_seed: bool,
    pub transform: RadonTransform,
}

#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct RadonTolerances {
    pub k_spread: f64,
    pub linearity: f64,
    pub center: f64,
    pub width: f64,
    pub collapse: f64,
    pub collapse_floor: f64,
}

impl From<RadonTolerances> for Tolerances {
    fn from(t: RadonTolerances) -> Self {
        Tolerances {
            k_spread: t.k_spread,
            linearity: t.linearity,
            center: t.center,
            width: t.width,
            collapse: t.collapse,
            collapse_floor: t.collapse_floor,
        }
    }
}

/// A convex body together with the spec it was built from.
pub struct RadonBody {
    spec: BodySpec,
    body: ConvexBody,
}

pub struct RadonFunction {
    spec: FunctionSpec,
}

pub struct RadonSinogram {
    sino: Sinogram,
}

pub struct RadonReport {
    report: RigidityReport,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(RadonStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = if e.is_numeric() {
            RadonStatus::Numeric
        } else {
            match e {
                Error::Parse(_) | Error::Json(_) => RadonStatus::Parse,
                Error::Io(_) => RadonStatus::Io,
                Error::InsufficientSamples { .. } => RadonStatus::InsufficientSamples,
                _ => RadonStatus::InvalidInput,
            }
        };
        Failure(status, e.to_string())
    }
}

fn fail(status: RadonStatus, msg: impl Into<String>) -> Failure {
    Failure(status, msg.into())
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nuls removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Runs `f`, recording any failure or panic as the thread's last error.
fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> RadonStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RadonStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            RadonStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(fail(RadonStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(RadonStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| fail(RadonStatus::NullArgument, format!("{what} is null")))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(fail(RadonStatus::NullArgument, format!("{what} is null")));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_boxed<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(fail(RadonStatus::NullArgument, "out is null"));
    }
    out.write(Box::into_raw(Box::new(value)));
    Ok(())
}

fn c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s).map(CString::into_raw).map_err(|_| fail(RadonStatus::InvalidInput, "string contains a nul byte"))
}

unsafe fn put_json<T: serde::Serialize>(out: *mut *mut c_char, value: &T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(fail(RadonStatus::NullArgument, "out is null"));
    }
    let mut s = serde_json::to_string_pretty(value).map_err(Error::from)?;
    s.push('\n');
    out.write(c_string(s)?);
    Ok(())
}

unsafe fn direction_arg(omega: *const f64, dim: usize) -> Result<Direction, Failure> {
    if omega.is_null() {
        return Err(fail(RadonStatus::NullArgument, "omega is null"));
    }
    Ok(Direction::normalize(Vector::new(std::slice::from_raw_parts(omega, dim))?)?)
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn radon_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the most recent failure on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn radon_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn radon_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `json` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn radon_body_from_json(json: *const c_char, out: *mut *mut RadonBody) -> RadonStatus {
    guard(|| {
        let spec = BodySpec::parse(str_arg(json, "json")?)?;
        let body = spec.build()?;
        put_boxed(out, RadonBody { spec, body })
    })
}

/// # Safety
/// `body` must be null or a handle from [`radon_body_from_json`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn radon_body_free(body: *mut RadonBody) {
    if !body.is_null() {
        drop(Box::from_raw(body));
    }
}

/// Ambient dimension, or 0 for a null handle.
///
/// # Safety
/// `body` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn radon_body_dimension(body: *const RadonBody) -> usize {
    body.as_ref().map_or(0, |b| b.body.dimension())
}

/// Support function h(ω); `omega` holds `dim` components and is normalized.
///
/// # Safety
/// `omega` must point to `dim` doubles and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn radon_body_support(
    body: *const RadonBody,
    omega: *const f64,
    dim: usize,
    out: *mut f64,
) -> RadonStatus {
    guard(|| {
        let b = handle(body, "body")?;
        put(out, b.body.support(&direction_arg(omega, dim)?)?, "out")
    })
}

/// Width h(ω) + h(−ω).
///
/// # Safety
/// As for [`radon_body_support`].
#[no_mangle]
pub unsafe extern "C" fn radon_body_width(
    body: *const RadonBody,
    omega: *const f64,
    dim: usize,
    out: *mut f64,
) -> RadonStatus {
    guard(|| {
        let b = handle(body, "body")?;
        put(out, b.body.width(&direction_arg(omega, dim)?)?, "out")
    })
}

/// Parses a function spec: JSON or one of `constant-xray`, `indicator`,
/// `synthetic-g`, `gamma:<value>`.
///
/// # Safety
/// `spec` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn radon_function_parse(spec: *const c_char, out: *mut *mut RadonFunction) -> RadonStatus {
    guard(|| {
        let spec = FunctionSpec::parse(str_arg(spec, "spec")?)?;
        put_boxed(out, RadonFunction { spec })
    })
}

/// # Safety
/// `f` must be null or a handle from [`radon_function_parse`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn radon_function_free(f: *mut RadonFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

#[no_mangle]
pub extern "C" fn radon_grid_default() -> RadonGrid {
    RadonGrid {
        directions: 64,
        offsets: 128,
        nodes: Quadrature::DEFAULT_NODES,
        angular_nodes: Quadrature::DEFAULT_ANGULAR,
        seed: 0,
        use_seed: false,
        transform: RadonTransform::Radon,
    }
}

/// Samples the transform of `function` on `body`. A null `grid` uses [`radon_grid_default`].
///
/// # Safety
/// Handles must be live; `grid` null or readable; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn radon_sinogram_generate(
    body: *const RadonBody,
    function: *const RadonFunction,
    grid: *const RadonGrid,
    out: *mut *mut RadonSinogram,
) -> RadonStatus {
    guard(|| {
        let b = handle(body, "body")?;
        let f = handle(function, "function")?;
        let g = grid.as_ref().copied().unwrap_or_else(|| radon_grid_default());
        let nodes = if g.nodes == 0 { Quadrature::DEFAULT_NODES } else { g.nodes };
        let angular = if g.angular_nodes == 0 { Quadrature::DEFAULT_ANGULAR } else { g.angular_nodes };
        let transform = match g.transform {
            RadonTransform::Radon => TransformKind::Radon,
            RadonTransform::Xray => TransformKind::Xray,
        };
        let directions = direction_grid(b.body.dimension(), g.directions, g.use_seed.then_some(g.seed))?;
        let opts = SinogramOptions { offsets: g.offsets, quadrature: Quadrature::new(nodes, angular)?, transform };
        let sino = build_sinogram(&b.spec, &f.spec, &directions, &opts)?;
        put_boxed(out, RadonSinogram { sino })
    })
}

/// Reads a CSV sinogram and its JSON sidecar, if present.
///
/// # Safety
/// `path` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn radon_sinogram_load(path: *const c_char, out: *mut *mut RadonSinogram) -> RadonStatus {
    guard(|| {
        let sino = radon_core::io::load(&PathBuf::from(str_arg(path, "path")?))?;
        put_boxed(out, RadonSinogram { sino })
    })
}

/// Writes the CSV and its sidecar next to it.
///
/// # Safety
/// `sino` must be live and `path` a nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn radon_sinogram_save(sino: *const RadonSinogram, path: *const c_char) -> RadonStatus {
    guard(|| {
        let s = handle(sino, "sinogram")?;
        Ok(radon_core::io::save(&s.sino, &PathBuf::from(str_arg(path, "path")?))?)
    })
}

/// # Safety
/// `sino` must be null or a live handle, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn radon_sinogram_free(sino: *mut RadonSinogram) {
    if !sino.is_null() {
        drop(Box::from_raw(sino));
    }
}

/// # Safety
/// `sino` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn radon_sinogram_dimension(sino: *const RadonSinogram) -> usize {
    sino.as_ref().map_or(0, |s| s.sino.dimension)
}

/// # Safety
/// `sino` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn radon_sinogram_direction_count(sino: *const RadonSinogram) -> usize {
    sino.as_ref().map_or(0, |s| s.sino.directions.len())
}

/// Total number of (direction, offset) samples.
///
/// # Safety
/// `sino` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn radon_sinogram_sample_count(sino: *const RadonSinogram) -> usize {
    sino.as_ref().map_or(0, |s| s.sino.len())
}

/// Copies the samples in file order. `omegas` receives `dimension` doubles per
/// sample; any of the three buffers may be null. `capacity` counts samples.
///
/// # Safety
/// Non-null buffers must hold `capacity` samples.
#[no_mangle]
pub unsafe extern "C" fn radon_sinogram_samples(
    sino: *const RadonSinogram,
    omegas: *mut f64,
    offsets: *mut f64,
    values: *mut f64,
    capacity: usize,
) -> RadonStatus {
    guard(|| {
        let s = &handle(sino, "sinogram")?.sino;
        if capacity < s.len() {
            return Err(fail(RadonStatus::BufferTooSmall, format!("{} samples, capacity {capacity}", s.len())));
        }
        let dim = s.dimension;
        for (k, (i, p, v)) in s.samples().enumerate() {
            if !omegas.is_null() {
                ptr::copy_nonoverlapping(s.directions[i].as_slice().as_ptr(), omegas.add(k * dim), dim);
            }
            if !offsets.is_null() {
                offsets.add(k).write(p);
            }
            if !values.is_null() {
                values.add(k).write(v);
            }
        }
        Ok(())
    })
}

/// Moment report as JSON; free the string with [`radon_string_free`].
///
/// # Safety
/// `sino` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn radon_moments_json(sino: *const RadonSinogram, out: *mut *mut c_char) -> RadonStatus {
    guard(|| {
        let s = &handle(sino, "sinogram")?.sino;
        let report = moment_report(s, &sinogram_slabs(s)?)?;
        put_json(out, &report)
    })
}

#[no_mangle]
pub extern "C" fn radon_tolerances_default() -> RadonTolerances {
    let t = Tolerances::default();
    RadonTolerances {
        k_spread: t.k_spread,
        linearity: t.linearity,
        center: t.center,
        width: t.width,
        collapse: t.collapse,
        collapse_floor: t.collapse_floor,
    }
}

/// Runs the rigidity analysis. Null `tol` means the defaults; `bins` 0 means 64.
///
/// # Safety
/// `sino` must be live, `tol` null or readable, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn radon_rigidity(
    sino: *const RadonSinogram,
    tol: *const RadonTolerances,
    bins: usize,
    out: *mut *mut RadonReport,
) -> RadonStatus {
    guard(|| {
        let s = &handle(sino, "sinogram")?.sino;
        let tol: Tolerances = tol.as_ref().copied().unwrap_or_else(|| radon_tolerances_default()).into();
        let bins = if bins == 0 { DEFAULT_BINS } else { bins };
        let report = rigidity_check(s, &sinogram_slabs(s)?, &tol, bins)?;
        put_boxed(out, RadonReport { report })
    })
}

/// # Safety
/// `report` must be null or a live handle, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn radon_report_free(report: *mut RadonReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// False for a null handle.
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn radon_report_is_ball(report: *const RadonReport) -> bool {
    report.as_ref().is_some_and(|r| r.report.is_ball())
}

/// Estimated center (`dim` doubles) and radius.
///
/// # Safety
/// `center` must hold `dim` doubles; `radius` must be writable.
#[no_mangle]
pub unsafe extern "C" fn radon_report_estimates(
    report: *const RadonReport,
    center: *mut f64,
    dim: usize,
    radius: *mut f64,
) -> RadonStatus {
    guard(|| {
        let e = &handle(report, "report")?.report.estimates;
        let c = e.center.as_slice();
        if dim < c.len() {
            return Err(fail(RadonStatus::BufferTooSmall, format!("center has {} components", c.len())));
        }
        if center.is_null() {
            return Err(fail(RadonStatus::NullArgument, "center is null"));
        }
        ptr::copy_nonoverlapping(c.as_ptr(), center, c.len());
        put(radius, e.radius, "radius")
    })
}

/// Name of the first failing check, or null for a ball. Free with [`radon_string_free`].
///
/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn radon_report_obstruction(report: *const RadonReport) -> *mut c_char {
    match report.as_ref().and_then(|r| r.report.obstruction.clone()) {
        Some(o) => c_string(o).unwrap_or(ptr::null_mut()),
        None => ptr::null_mut(),
    }
}

/// Full report as JSON, identical to the CLI output.
///
/// # Safety
/// `report` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn radon_report_json(report: *const RadonReport, out: *mut *mut c_char) -> RadonStatus {
    guard(|| {
        let r = handle(report, "report")?;
        put_json(out, &r.report)
    })
}

/// Closed-form Radon transform of the γ-family on the ball of `radius` in
/// dimension `dim`, at distance `d` from the center.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn radon_gamma_closed_form(
    dim: usize,
    gamma: f64,
    radius: f64,
    d: f64,
    out: *mut f64,
) -> RadonStatus {
    guard(|| put(out, radon_gamma(&GammaFamilySpec { radius, gamma, dim }, d)?, "out"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn errors_map_to_status_codes() {
        assert_eq!(Failure::from(Error::Numeric("x".into())).0, RadonStatus::Numeric);
        assert_eq!(Failure::from(Error::Parse("x".into())).0, RadonStatus::Parse);
        assert_eq!(
            Failure::from(Error::InsufficientSamples { needed: 16, found: 3 }).0,
            RadonStatus::InsufficientSamples
        );
        assert_eq!(Failure::from(Error::RankDeficient).0, RadonStatus::InvalidInput);
        let wrapped = Error::Sample { direction: 1, offset: 0.5, source: Box::new(Error::Numeric("nan".into())) };
        assert_eq!(Failure::from(wrapped).0, RadonStatus::Numeric);
    }

    #[test]
    fn panics_become_status_codes() {
        assert_eq!(guard(|| panic!("boom")), RadonStatus::Panic);
        let msg = unsafe { CStr::from_ptr(radon_last_error()) }.to_str().unwrap();
        assert!(msg.contains("boom"));
    }
}
