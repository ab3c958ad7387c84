//! C ABI for the spectral laboratory: opaque handles, status codes, and a
//! JSON entry point for the experiment drivers.
//!
//! Every constructor hands back an owned pointer that must be released with
//! the matching `*_free`; strings returned by `*_json` functions belong to
//! the caller until `gch2_string_free`. All functions are panic-safe: a
//! caught panic maps to `GCH2_STATUS_INTERNAL`.

use gch2::ansatz::{exponent_report, residual, ApproxConfig};
use gch2::experiments::{
    fit_slope, nonuniform_dependence, residual_decay_scan, ExperimentError, ExperimentPlan,
};
use gch2::model::SystemParams;
use gch2::spectral::{pair_norm, pointwise_product, PeriodicGrid, SobolevIndex, SpectralField};
use libc::{c_char, c_double, c_int, size_t};
use std::ffi::CString;
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Status code returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gch2Status {
    /// Success.
    Ok = 0,
    /// A pointer was null or a scalar argument out of range.
    InvalidArgument = 1,
    /// Two fields live on different grids.
    GridMismatch = 2,
    /// A requested frequency does not fit the grid.
    FrequencyTooHigh = 3,
    /// The time integration left the validity regime.
    BlowUp = 4,
    /// An internal invariant failed (caught panic).
    Internal = 5,
}

/// Opaque periodic grid handle.
pub struct Gch2Grid(PeriodicGrid);

/// Opaque field handle.
pub struct Gch2Field(SpectralField);

fn guarded(body: impl FnOnce() -> Gch2Status) -> Gch2Status {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => Gch2Status::Internal,
    }
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Gch2Status {
    if out.is_null() {
        return Gch2Status::InvalidArgument;
    }
    unsafe { out.write(value) };
    Gch2Status::Ok
}

macro_rules! deref {
    ($ptr:expr) => {
        match unsafe { $ptr.as_ref() } {
            Some(r) => r,
            None => return Gch2Status::InvalidArgument,
        }
    };
}

/// Static version string of the library (UTF-8, never freed).
#[no_mangle]
pub extern "C" fn gch2_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

// ---------------------------------------------------------------------------
// Grids
// ---------------------------------------------------------------------------

/// Create a periodic grid with `n` collocation points (even, >= 8).
///
/// # Safety
/// `out` must point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn gch2_grid_new(n: size_t, out: *mut *mut Gch2Grid) -> Gch2Status {
    guarded(|| match PeriodicGrid::new(n) {
        Ok(grid) => unsafe { write_out(out, Box::into_raw(Box::new(Gch2Grid(grid)))) },
        Err(_) => Gch2Status::InvalidArgument,
    })
}

/// Number of collocation points, or 0 for a null handle.
///
/// # Safety
/// `grid` must be null or a live handle from [`gch2_grid_new`].
#[no_mangle]
pub unsafe extern "C" fn gch2_grid_len(grid: *const Gch2Grid) -> size_t {
    unsafe { grid.as_ref() }.map_or(0, |g| g.0.len())
}

/// Release a grid handle. Null is a no-op.
///
/// # Safety
/// `grid` must have come from [`gch2_grid_new`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn gch2_grid_free(grid: *mut Gch2Grid) {
    if !grid.is_null() {
        drop(unsafe { Box::from_raw(grid) });
    }
}

// ---------------------------------------------------------------------------
// Fields
// ---------------------------------------------------------------------------

/// Build a field from `len == N` collocation values.
///
/// # Safety
/// `values` must point to `len` readable doubles; `out` to one pointer.
#[no_mangle]
pub unsafe extern "C" fn gch2_field_from_values(
    grid: *const Gch2Grid,
    values: *const c_double,
    len: size_t,
    out: *mut *mut Gch2Field,
) -> Gch2Status {
    guarded(|| {
        let grid = deref!(grid);
        if values.is_null() {
            return Gch2Status::InvalidArgument;
        }
        let slice = unsafe { std::slice::from_raw_parts(values, len) };
        match SpectralField::from_values(&grid.0, slice) {
            Ok(f) => unsafe { write_out(out, Box::into_raw(Box::new(Gch2Field(f)))) },
            Err(_) => Gch2Status::GridMismatch,
        }
    })
}

/// The constant field `f(x) = c`.
///
/// # Safety
/// `out` must point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn gch2_field_constant(
    grid: *const Gch2Grid,
    c: c_double,
    out: *mut *mut Gch2Field,
) -> Gch2Status {
    guarded(|| {
        let grid = deref!(grid);
        let f = SpectralField::constant(&grid.0, c);
        unsafe { write_out(out, Box::into_raw(Box::new(Gch2Field(f)))) }
    })
}

/// `cos(freq * x - phase)`.
///
/// # Safety
/// `out` must point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn gch2_field_harmonic(
    grid: *const Gch2Grid,
    freq: i64,
    phase: c_double,
    out: *mut *mut Gch2Field,
) -> Gch2Status {
    guarded(|| {
        let grid = deref!(grid);
        match SpectralField::harmonic(&grid.0, freq, phase) {
            Ok(f) => unsafe { write_out(out, Box::into_raw(Box::new(Gch2Field(f)))) },
            Err(_) => Gch2Status::FrequencyTooHigh,
        }
    })
}

/// Copy the collocation values into a caller buffer of `len == N` doubles.
///
/// # Safety
/// `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn gch2_field_values(
    field: *const Gch2Field,
    out: *mut c_double,
    len: size_t,
) -> Gch2Status {
    guarded(|| {
        let field = deref!(field);
        if out.is_null() || len != field.0.grid().len() {
            return Gch2Status::InvalidArgument;
        }
        let values = field.0.values();
        unsafe { std::ptr::copy_nonoverlapping(values.as_ptr(), out, len) };
        Gch2Status::Ok
    })
}

/// Release a field handle. Null is a no-op.
///
/// # Safety
/// `field` must have come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn gch2_field_free(field: *mut Gch2Field) {
    if !field.is_null() {
        drop(unsafe { Box::from_raw(field) });
    }
}

/// Spectral derivative of the given order.
///
/// # Safety
/// `out` must point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn gch2_field_derivative(
    field: *const Gch2Field,
    order: u32,
    out: *mut *mut Gch2Field,
) -> Gch2Status {
    guarded(|| {
        let field = deref!(field);
        let d = field.0.derivative(order);
        unsafe { write_out(out, Box::into_raw(Box::new(Gch2Field(d)))) }
    })
}

/// Helmholtz inverse `(1 - d_xx)^{-1}`.
///
/// # Safety
/// `out` must point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn gch2_field_helmholtz_inverse(
    field: *const Gch2Field,
    out: *mut *mut Gch2Field,
) -> Gch2Status {
    guarded(|| {
        let field = deref!(field);
        let h = field.0.helmholtz_inverse();
        unsafe { write_out(out, Box::into_raw(Box::new(Gch2Field(h)))) }
    })
}

/// Bessel-potential power `(1 - d_xx)^{s/2}`.
///
/// # Safety
/// `out` must point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn gch2_field_lambda_power(
    field: *const Gch2Field,
    s: c_double,
    out: *mut *mut Gch2Field,
) -> Gch2Status {
    guarded(|| {
        let field = deref!(field);
        let f = field.0.lambda_power(SobolevIndex(s));
        unsafe { write_out(out, Box::into_raw(Box::new(Gch2Field(f)))) }
    })
}

/// Dealiased collocation product of two fields on one grid.
///
/// # Safety
/// `out` must point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn gch2_field_product(
    f: *const Gch2Field,
    g: *const Gch2Field,
    out: *mut *mut Gch2Field,
) -> Gch2Status {
    guarded(|| {
        let f = deref!(f);
        let g = deref!(g);
        match pointwise_product(&f.0, &g.0) {
            Ok(p) => unsafe { write_out(out, Box::into_raw(Box::new(Gch2Field(p)))) },
            Err(_) => Gch2Status::GridMismatch,
        }
    })
}

/// `||f||_{H^s}`.
///
/// # Safety
/// `out` must point to one writable double.
#[no_mangle]
pub unsafe extern "C" fn gch2_sobolev_norm(
    field: *const Gch2Field,
    s: c_double,
    out: *mut c_double,
) -> Gch2Status {
    guarded(|| {
        let field = deref!(field);
        unsafe { write_out(out, field.0.sobolev_norm(SobolevIndex(s))) }
    })
}

/// `||u||_{H^s} + ||v||_{H^s}`.
///
/// # Safety
/// `out` must point to one writable double.
#[no_mangle]
pub unsafe extern "C" fn gch2_pair_norm(
    u: *const Gch2Field,
    v: *const Gch2Field,
    s: c_double,
    out: *mut c_double,
) -> Gch2Status {
    guarded(|| {
        let u = deref!(u);
        let v = deref!(v);
        match pair_norm(&u.0, &v.0, SobolevIndex(s)) {
            Ok(n) => unsafe { write_out(out, n) },
            Err(_) => Gch2Status::GridMismatch,
        }
    })
}

// ---------------------------------------------------------------------------
// Exponents, residuals, experiments
// ---------------------------------------------------------------------------

/// Predicted exponents `r, j, beta, alpha` for one `(p, q, a, b, s, sigma)`.
///
/// # Safety
/// The four output pointers must each point to one writable double.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn gch2_predicted_exponents(
    p: u32,
    q: u32,
    a: c_double,
    b: c_double,
    s: c_double,
    sigma: c_double,
    out_r: *mut c_double,
    out_j: *mut c_double,
    out_beta: *mut c_double,
    out_alpha: *mut c_double,
) -> Gch2Status {
    guarded(|| {
        let Ok(params) = SystemParams::new(p, q, a, b) else {
            return Gch2Status::InvalidArgument;
        };
        if !(sigma < s) {
            return Gch2Status::InvalidArgument;
        }
        if out_r.is_null() || out_j.is_null() || out_beta.is_null() || out_alpha.is_null() {
            return Gch2Status::InvalidArgument;
        }
        let report = exponent_report(s, sigma, &params);
        unsafe {
            out_r.write(report.r);
            out_j.write(report.j);
            out_beta.write(report.beta);
            out_alpha.write(report.alpha);
        }
        Gch2Status::Ok
    })
}

/// `H^sigma` norms of the residual pair `(E, F)` of the family member
/// `(omega, n, s)` at time `t`, evaluated on the standard rule grid for `n`.
///
/// # Safety
/// `out_e` and `out_f` must each point to one writable double.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn gch2_residual_norms(
    p: u32,
    q: u32,
    a: c_double,
    b: c_double,
    omega: c_int,
    n: u32,
    s: c_double,
    sigma: c_double,
    t: c_double,
    out_e: *mut c_double,
    out_f: *mut c_double,
) -> Gch2Status {
    guarded(|| {
        let Ok(params) = SystemParams::new(p, q, a, b) else {
            return Gch2Status::InvalidArgument;
        };
        let Ok(cfg) = ApproxConfig::new(omega, n, s) else {
            return Gch2Status::InvalidArgument;
        };
        let degree = p.max(q).max(2) as usize;
        let Ok(grid) = PeriodicGrid::new((16 * degree * n as usize).next_power_of_two()) else {
            return Gch2Status::InvalidArgument;
        };
        match residual(&cfg, &params, t, &grid) {
            Ok(res) => {
                if out_e.is_null() || out_f.is_null() {
                    return Gch2Status::InvalidArgument;
                }
                unsafe {
                    out_e.write(res.u.sobolev_norm(SobolevIndex(sigma)));
                    out_f.write(res.v.sobolev_norm(SobolevIndex(sigma)));
                }
                Gch2Status::Ok
            }
            Err(_) => Gch2Status::FrequencyTooHigh,
        }
    })
}

/// Least-squares slope of `log(values)` against `log(ns)`.
///
/// # Safety
/// `ns` and `values` must point to `len` readable doubles; `out` to one
/// writable double.
#[no_mangle]
pub unsafe extern "C" fn gch2_fit_slope(
    ns: *const c_double,
    values: *const c_double,
    len: size_t,
    out: *mut c_double,
) -> Gch2Status {
    guarded(|| {
        if ns.is_null() || values.is_null() || len < 2 {
            return Gch2Status::InvalidArgument;
        }
        let ns = unsafe { std::slice::from_raw_parts(ns, len) };
        let values = unsafe { std::slice::from_raw_parts(values, len) };
        if ns.iter().chain(values).any(|&x| !(x > 0.0)) {
            return Gch2Status::InvalidArgument;
        }
        let points: Vec<(f64, f64)> = ns.iter().copied().zip(values.iter().copied()).collect();
        unsafe { write_out(out, fit_slope(&points)) }
    })
}

#[allow(clippy::too_many_arguments)]
fn plan_from_raw(
    p: u32,
    q: u32,
    a: f64,
    b: f64,
    s: f64,
    sigma: f64,
    n_list: &[u32],
    t_end: f64,
    cfl: f64,
) -> Result<ExperimentPlan, Gch2Status> {
    let params = SystemParams::new(p, q, a, b).map_err(|_| Gch2Status::InvalidArgument)?;
    ExperimentPlan::new(params, s, sigma, n_list.to_vec(), t_end, cfl)
        .map_err(|_| Gch2Status::InvalidArgument)
}

fn status_of(err: &ExperimentError) -> Gch2Status {
    match err {
        ExperimentError::BlowUp { .. } => Gch2Status::BlowUp,
        ExperimentError::Spectral(_) => Gch2Status::FrequencyTooHigh,
        _ => Gch2Status::InvalidArgument,
    }
}

unsafe fn emit_json(out: *mut *mut c_char, report: &impl serde::Serialize) -> Gch2Status {
    let Ok(text) = serde_json::to_string_pretty(report) else {
        return Gch2Status::Internal;
    };
    let Ok(cstring) = CString::new(text) else {
        return Gch2Status::Internal;
    };
    unsafe { write_out(out, cstring.into_raw()) }
}

/// Run a residual-decay scan and return the JSON report.
///
/// # Safety
/// `n_list` must point to `n_len` readable u32; `out_json` to one pointer.
/// The returned string must be released with [`gch2_string_free`].
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn gch2_residual_scan_json(
    p: u32,
    q: u32,
    a: c_double,
    b: c_double,
    s: c_double,
    sigma: c_double,
    n_list: *const u32,
    n_len: size_t,
    out_json: *mut *mut c_char,
) -> Gch2Status {
    guarded(|| {
        if n_list.is_null() || n_len == 0 {
            return Gch2Status::InvalidArgument;
        }
        let ns = unsafe { std::slice::from_raw_parts(n_list, n_len) };
        let plan = match plan_from_raw(p, q, a, b, s, sigma, ns, 0.95, 0.5) {
            Ok(plan) => plan,
            Err(status) => return status,
        };
        match residual_decay_scan(&plan) {
            Ok(report) => unsafe { emit_json(out_json, &report) },
            Err(e) => status_of(&e),
        }
    })
}

/// Run the nonuniform-dependence experiment and return the JSON report.
/// The branch (`omega = +-1` or `omega in {1, 0}`) is selected from the
/// parity of `(p, q)`.
///
/// # Safety
/// `n_list` must point to `n_len` readable u32; `out_json` to one pointer.
/// The returned string must be released with [`gch2_string_free`].
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn gch2_nud_json(
    p: u32,
    q: u32,
    a: c_double,
    b: c_double,
    s: c_double,
    sigma: c_double,
    n_list: *const u32,
    n_len: size_t,
    t_end: c_double,
    cfl: c_double,
    out_json: *mut *mut c_char,
) -> Gch2Status {
    guarded(|| {
        if n_list.is_null() || n_len == 0 {
            return Gch2Status::InvalidArgument;
        }
        let ns = unsafe { std::slice::from_raw_parts(n_list, n_len) };
        let plan = match plan_from_raw(p, q, a, b, s, sigma, ns, t_end, cfl) {
            Ok(plan) => plan,
            Err(status) => return status,
        };
        match nonuniform_dependence(&plan) {
            Ok(report) => unsafe { emit_json(out_json, &report) },
            Err(e) => status_of(&e),
        }
    })
}

/// Release a string returned by a `*_json` function. Null is a no-op.
///
/// # Safety
/// `s` must have come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn gch2_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;
    use std::ptr;

    unsafe fn make_grid(n: usize) -> *mut Gch2Grid {
        let mut grid = ptr::null_mut();
        assert_eq!(unsafe { gch2_grid_new(n, &mut grid) }, Gch2Status::Ok);
        grid
    }

    #[test]
    fn version_is_a_c_string() {
        let v = gch2_version();
        let text = unsafe { std::ffi::CStr::from_ptr(v) }.to_str().unwrap();
        assert_eq!(text, env!("CARGO_PKG_VERSION"));
    }

    #[test]
    fn grid_lifecycle_and_validation() {
        unsafe {
            let mut grid = ptr::null_mut();
            assert_eq!(gch2_grid_new(7, &mut grid), Gch2Status::InvalidArgument);
            assert_eq!(gch2_grid_new(64, &mut grid), Gch2Status::Ok);
            assert_eq!(gch2_grid_len(grid), 64);
            assert_eq!(gch2_grid_len(ptr::null()), 0);
            gch2_grid_free(grid);
            gch2_grid_free(ptr::null_mut());
        }
    }

    #[test]
    fn null_arguments_are_rejected() {
        unsafe {
            assert_eq!(
                gch2_grid_new(64, ptr::null_mut()),
                Gch2Status::InvalidArgument
            );
            let mut out = ptr::null_mut();
            assert_eq!(
                gch2_field_from_values(ptr::null(), ptr::null(), 0, &mut out),
                Gch2Status::InvalidArgument
            );
            let mut norm = 0.0;
            assert_eq!(
                gch2_sobolev_norm(ptr::null(), 1.0, &mut norm),
                Gch2Status::InvalidArgument
            );
        }
    }

    #[test]
    fn harmonic_norm_round_trip() {
        unsafe {
            let grid = make_grid(128);
            let mut field = ptr::null_mut();
            assert_eq!(
                gch2_field_harmonic(grid, 4, 0.0, &mut field),
                Gch2Status::Ok
            );

            let mut norm = 0.0;
            assert_eq!(gch2_sobolev_norm(field, 2.0, &mut norm), Gch2Status::Ok);
            assert!((norm - 17.0 * PI.sqrt()).abs() < 1e-12);

            let mut values = vec![0.0; 128];
            assert_eq!(
                gch2_field_values(field, values.as_mut_ptr(), values.len()),
                Gch2Status::Ok
            );
            assert!((values[0] - 1.0).abs() < 1e-12);

            // Wrong buffer size is rejected.
            assert_eq!(
                gch2_field_values(field, values.as_mut_ptr(), 64),
                Gch2Status::InvalidArgument
            );

            gch2_field_free(field);
            gch2_grid_free(grid);
        }
    }

    #[test]
    fn operators_compose_through_the_abi() {
        unsafe {
            let grid = make_grid(64);
            let mut f = ptr::null_mut();
            assert_eq!(gch2_field_harmonic(grid, 3, 0.0, &mut f), Gch2Status::Ok);

            // (1 - dxx)^{-1} then (1 - dxx)^{2/2} returns the input.
            let mut h = ptr::null_mut();
            assert_eq!(gch2_field_helmholtz_inverse(f, &mut h), Gch2Status::Ok);
            let mut back = ptr::null_mut();
            assert_eq!(gch2_field_lambda_power(h, 2.0, &mut back), Gch2Status::Ok);

            let mut values = vec![0.0; 64];
            gch2_field_values(back, values.as_mut_ptr(), 64);
            for (j, v) in values.iter().enumerate() {
                let x = 2.0 * PI * j as f64 / 64.0;
                assert!((v - (3.0 * x).cos()).abs() < 1e-12);
            }

            let mut d = ptr::null_mut();
            assert_eq!(gch2_field_derivative(f, 1, &mut d), Gch2Status::Ok);
            let mut norm = 0.0;
            gch2_sobolev_norm(d, 0.0, &mut norm);
            assert!((norm - 3.0 * PI.sqrt()).abs() < 1e-12);

            for handle in [f, h, back, d] {
                gch2_field_free(handle);
            }
            gch2_grid_free(grid);
        }
    }

    #[test]
    fn product_checks_grids() {
        unsafe {
            let g1 = make_grid(64);
            let g2 = make_grid(32);
            let mut f1 = ptr::null_mut();
            let mut f2 = ptr::null_mut();
            gch2_field_constant(g1, 1.0, &mut f1);
            gch2_field_constant(g2, 1.0, &mut f2);
            let mut out = ptr::null_mut();
            assert_eq!(
                gch2_field_product(f1, f2, &mut out),
                Gch2Status::GridMismatch
            );
            gch2_field_free(f1);
            gch2_field_free(f2);
            gch2_grid_free(g1);
            gch2_grid_free(g2);
        }
    }

    #[test]
    fn exponents_match_library_values() {
        unsafe {
            let (mut r, mut j, mut beta, mut alpha) = (0.0, 0.0, 0.0, 0.0);
            assert_eq!(
                gch2_predicted_exponents(
                    1, 1, 2.0, 2.0, 3.0, 0.5, &mut r, &mut j, &mut beta, &mut alpha
                ),
                Gch2Status::Ok
            );
            assert_eq!(r, -3.0);
            assert_eq!(j, -3.0);
            assert_eq!(beta, -3.0);
            assert!((alpha + 2.0 / 9.0).abs() < 1e-14);

            assert_eq!(
                gch2_predicted_exponents(
                    0, 1, 2.0, 2.0, 3.0, 0.5, &mut r, &mut j, &mut beta, &mut alpha
                ),
                Gch2Status::InvalidArgument
            );
        }
    }

    #[test]
    fn slope_fit_through_the_abi() {
        unsafe {
            let ns = [64.0f64, 128.0, 256.0];
            let values: Vec<f64> = ns.iter().map(|n| n.powf(-2.0)).collect();
            let mut slope = 0.0;
            assert_eq!(
                gch2_fit_slope(ns.as_ptr(), values.as_ptr(), 3, &mut slope),
                Gch2Status::Ok
            );
            assert!((slope + 2.0).abs() < 1e-12);

            assert_eq!(
                gch2_fit_slope(ns.as_ptr(), values.as_ptr(), 1, &mut slope),
                Gch2Status::InvalidArgument
            );
        }
    }

    #[test]
    fn residual_norms_and_scan_json() {
        unsafe {
            let (mut e, mut f) = (0.0, 0.0);
            assert_eq!(
                gch2_residual_norms(1, 1, 2.0, 2.0, 1, 16, 3.0, 1.75, 0.0, &mut e, &mut f),
                Gch2Status::Ok
            );
            assert!(e > 0.0 && e < 1e-2);
            assert_eq!(e, f); // symmetric configuration

            let ns = [16u32, 32];
            let mut json = ptr::null_mut();
            assert_eq!(
                gch2_residual_scan_json(1, 1, 2.0, 2.0, 3.0, 1.75, ns.as_ptr(), 2, &mut json),
                Gch2Status::Ok
            );
            let text = std::ffi::CStr::from_ptr(json).to_str().unwrap().to_owned();
            gch2_string_free(json);
            let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
            assert_eq!(parsed["plan"]["n_list"][0], 16);
            assert!(parsed["fitted_r"].is_number());
        }
    }

    #[test]
    fn invalid_plan_through_json_entry() {
        unsafe {
            let ns = [16u32];
            let mut json = ptr::null_mut();
            // s below the 5/2 floor.
            assert_eq!(
                gch2_residual_scan_json(1, 1, 2.0, 2.0, 2.0, 0.5, ns.as_ptr(), 1, &mut json),
                Gch2Status::InvalidArgument
            );
        }
    }
}
