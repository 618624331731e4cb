//! C ABI for the bakerlab engine: opaque handles, status codes, and plain
//! structs so other languages can drive the invariance scan, the propagator
//! matrix, and the classical escape check. Rationals cross the boundary as
//! numerator/denominator pairs; nothing here allocates strings the caller
//! must free except [`bk_version`], which returns a static.
//!
//! The generated header lives at `include/bakerlab.h`.

use bakerlab::classical::escape_check;
use bakerlab::rational::Rat;
use bakerlab::scan::{scan_point, scan_theta, theorem_verdict, theta_grid, ScanRecord};
use bakerlab::theta::Theta;
use bakerlab::{matrix_f, matrix_vs_comb_check};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BkStatus {
    Ok = 0,
    InvalidArgument = 1,
    NullPointer = 2,
    BufferTooSmall = 3,
    InternalError = 4,
}

/// One complex matrix entry.
#[repr(C)]
#[derive(Clone, Copy)]
pub struct BkComplex {
    pub re: f64,
    pub im: f64,
}

/// One (N, θ, m) scan probe. θ components are reduced fractions.
#[repr(C)]
#[derive(Clone, Copy)]
pub struct BkScanRecord {
    pub n: u32,
    pub m: u32,
    pub theta1_num: i64,
    pub theta1_den: i64,
    pub theta2_num: i64,
    pub theta2_den: i64,
    pub rx: f64,
    pub ry: f64,
    pub invariant: bool,
}

/// Opaque scan result handle; free with [`bk_scan_free`].
pub struct BkScan {
    records: Vec<ScanRecord>,
    pass: bool,
}

fn guard<F: FnOnce() -> BkStatus>(f: F) -> BkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => BkStatus::InternalError,
    }
}

fn make_rat(num: i64, den: i64) -> Option<Rat> {
    if den == 0 {
        None
    } else {
        Some(Rat::new(num, den))
    }
}

/// Version string of the underlying crate (static storage).
#[no_mangle]
pub extern "C" fn bk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Fill `out` (row-major, length `len >= n*n`) with the N×N propagator
/// matrix on the periodic fiber. N must be even.
///
/// # Safety
/// `out` must point to at least `len` writable `BkComplex` entries.
#[no_mangle]
pub unsafe extern "C" fn bk_matrix_f(n: u32, out: *mut BkComplex, len: usize) -> BkStatus {
    if out.is_null() {
        return BkStatus::NullPointer;
    }
    guard(|| {
        let m = match matrix_f(n) {
            Ok(m) => m,
            Err(_) => return BkStatus::InvalidArgument,
        };
        let dim = n as usize;
        if len < dim * dim {
            return BkStatus::BufferTooSmall;
        }
        let slice = unsafe { std::slice::from_raw_parts_mut(out, dim * dim) };
        for (dst, src) in slice.iter_mut().zip(m.entries()) {
            *dst = BkComplex { re: src.re, im: src.im };
        }
        BkStatus::Ok
    })
}

/// Max-norm deviation of `M†M` from the identity for the N×N matrix.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bk_matrix_unitarity_deviation(n: u32, out: *mut f64) -> BkStatus {
    if out.is_null() {
        return BkStatus::NullPointer;
    }
    guard(|| match matrix_f(n) {
        Ok(m) => {
            unsafe { *out = m.unitarity_deviation() };
            BkStatus::Ok
        }
        Err(_) => BkStatus::InvalidArgument,
    })
}

/// Cross-validate the matrix form against the comb pipeline: writes the max
/// entry deviation after the global-phase fit and the fitted phase.
///
/// # Safety
/// `out_dev` and `out_phase` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn bk_matrix_vs_comb(n: u32, out_dev: *mut f64, out_phase: *mut f64) -> BkStatus {
    if out_dev.is_null() || out_phase.is_null() {
        return BkStatus::NullPointer;
    }
    guard(|| match matrix_vs_comb_check(n) {
        Ok(report) => {
            unsafe {
                *out_dev = report.max_dev;
                *out_phase = report.fitted_phase;
            }
            BkStatus::Ok
        }
        Err(_) => BkStatus::InvalidArgument,
    })
}

/// Run the invariance scan over N ∈ [n_min, n_max] and the θ grid of
/// denominator ≤ `theta_denom`. On success `*out` owns the result.
///
/// # Safety
/// `out` must be a valid pointer; the handle must be released with
/// [`bk_scan_free`].
#[no_mangle]
pub unsafe extern "C" fn bk_scan_new(
    n_min: u32,
    n_max: u32,
    theta_denom: i64,
    tol: f64,
    out: *mut *mut BkScan,
) -> BkStatus {
    if out.is_null() {
        return BkStatus::NullPointer;
    }
    guard(|| {
        if n_min < 1 || n_max < n_min || theta_denom < 1 || !(tol > 0.0 && tol < 1.0) {
            return BkStatus::InvalidArgument;
        }
        let ns: Vec<u32> = (n_min..=n_max).collect();
        let grid = theta_grid(theta_denom);
        match scan_theta(&ns, &grid, tol) {
            Ok(records) => {
                let pass = theorem_verdict(&records).pass;
                let handle = Box::new(BkScan { records, pass });
                unsafe { *out = Box::into_raw(handle) };
                BkStatus::Ok
            }
            Err(_) => BkStatus::InternalError,
        }
    })
}

/// Release a scan handle. A null pointer is a no-op.
///
/// # Safety
/// `scan` must be a pointer returned by [`bk_scan_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bk_scan_free(scan: *mut BkScan) {
    if !scan.is_null() {
        drop(unsafe { Box::from_raw(scan) });
    }
}

/// Number of records in a scan.
///
/// # Safety
/// `scan` must be a live handle from [`bk_scan_new`].
#[no_mangle]
pub unsafe extern "C" fn bk_scan_len(scan: *const BkScan) -> usize {
    if scan.is_null() {
        return 0;
    }
    unsafe { &*scan }.records.len()
}

/// Copy record `index` into `*out`.
///
/// # Safety
/// `scan` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bk_scan_record(
    scan: *const BkScan,
    index: usize,
    out: *mut BkScanRecord,
) -> BkStatus {
    if scan.is_null() || out.is_null() {
        return BkStatus::NullPointer;
    }
    let scan = unsafe { &*scan };
    let Some(r) = scan.records.get(index) else {
        return BkStatus::InvalidArgument;
    };
    let theta = r.theta;
    unsafe {
        *out = BkScanRecord {
            n: r.n,
            m: r.m as u32,
            theta1_num: *theta.theta1().numer(),
            theta1_den: *theta.theta1().denom(),
            theta2_num: *theta.theta2().numer(),
            theta2_den: *theta.theta2().denom(),
            rx: r.rx,
            ry: r.ry,
            invariant: r.invariant,
        };
    }
    BkStatus::Ok
}

/// Whether the scanned invariant set is exactly {(N,(0,0)) : N even}.
///
/// # Safety
/// `scan` must be a live handle and `out_pass` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bk_scan_verdict(scan: *const BkScan, out_pass: *mut bool) -> BkStatus {
    if scan.is_null() || out_pass.is_null() {
        return BkStatus::NullPointer;
    }
    unsafe { *out_pass = (*scan).pass };
    BkStatus::Ok
}

/// Residuals of a single (N, θ) point: max over the basis index m.
///
/// # Safety
/// The three output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn bk_scan_point(
    n: u32,
    theta1_num: i64,
    theta1_den: i64,
    theta2_num: i64,
    theta2_den: i64,
    tol: f64,
    out_max_rx: *mut f64,
    out_max_ry: *mut f64,
    out_invariant: *mut bool,
) -> BkStatus {
    if out_max_rx.is_null() || out_max_ry.is_null() || out_invariant.is_null() {
        return BkStatus::NullPointer;
    }
    guard(|| {
        let (Some(t1), Some(t2)) = (make_rat(theta1_num, theta1_den), make_rat(theta2_num, theta2_den))
        else {
            return BkStatus::InvalidArgument;
        };
        if n < 1 || !(tol > 0.0 && tol < 1.0) {
            return BkStatus::InvalidArgument;
        }
        match scan_point(n, Theta::new(t1, t2), tol) {
            Ok(records) => {
                let max_rx = records.iter().map(|r| r.rx).fold(0.0, f64::max);
                let max_ry = records.iter().map(|r| r.ry).fold(0.0, f64::max);
                unsafe {
                    *out_max_rx = max_rx;
                    *out_max_ry = max_ry;
                    *out_invariant = records.iter().all(|r| r.invariant);
                }
                BkStatus::Ok
            }
            Err(_) => BkStatus::InternalError,
        }
    })
}

/// Escape fraction of the n = 0 momentum-center family over k ∈ [k_min, k_max].
///
/// # Safety
/// `out_fraction` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bk_escape_fraction(
    n: u32,
    theta2_num: i64,
    theta2_den: i64,
    k_min: i64,
    k_max: i64,
    out_fraction: *mut f64,
) -> BkStatus {
    if out_fraction.is_null() {
        return BkStatus::NullPointer;
    }
    guard(|| {
        let Some(t2) = make_rat(theta2_num, theta2_den) else {
            return BkStatus::InvalidArgument;
        };
        if n < 1 || k_min > k_max {
            return BkStatus::InvalidArgument;
        }
        let report = escape_check(n, bakerlab::rational::mod_one(t2), k_min, k_max);
        unsafe { *out_fraction = report.n0_fraction };
        BkStatus::Ok
    })
}

/// One step of the exact covering map. Writes x'_num, x'_den, p'_num, p'_den
/// into `out` (length ≥ 4).
///
/// # Safety
/// `out` must point to at least 4 writable i64 values.
#[no_mangle]
pub unsafe extern "C" fn bk_cover_map(
    x_num: i64,
    x_den: i64,
    p_num: i64,
    p_den: i64,
    out: *mut i64,
) -> BkStatus {
    if out.is_null() {
        return BkStatus::NullPointer;
    }
    guard(|| {
        let (Some(x), Some(p)) = (make_rat(x_num, x_den), make_rat(p_num, p_den)) else {
            return BkStatus::InvalidArgument;
        };
        let image = bakerlab::classical::cover_map(bakerlab::classical::PhasePoint::new(x, p));
        let slice = unsafe { std::slice::from_raw_parts_mut(out, 4) };
        slice[0] = *image.x.numer();
        slice[1] = *image.x.denom();
        slice[2] = *image.p.numer();
        slice[3] = *image.p.denom();
        BkStatus::Ok
    })
}
