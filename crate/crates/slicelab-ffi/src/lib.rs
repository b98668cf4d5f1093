//! C ABI over the slicelab library.
//!
//! The surface is a handle-and-status design: models are opaque [`SlModel`]
//! pointers built by per-family constructors and released with
//! [`sl_model_free`]; every fallible call returns an [`SlStatus`] and writes
//! its result through an out pointer. Couplings enter as exact
//! numerator/denominator pairs, never as floats, so the symbolic layer stays
//! exact. Strings returned by the JSON emitters belong to the caller and are
//! released with [`sl_string_free`]. After any non-OK status,
//! [`sl_last_error_message`] returns a per-thread explanation, valid until
//! the next failing call on the same thread.
//!
//! Every entry point catches panics and reports them as
//! `SL_STATUS_PANIC`; no unwinding crosses the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::fmt::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};

use slicelab::comb::DeltaComb;
use slicelab::fieldint::{monte_carlo, quadrature_z, FieldIntegralEstimate};
use slicelab::model::{ModelSpec, Spin};
use slicelab::rational::Rational;
use slicelab::{sho, spin_dimer, spin_single};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SlStatus {
    /// The call succeeded and its out parameters are valid.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument,
    /// An argument failed validation (zero denominator, spin below 1/2,
    /// unsupported order, an operation the model does not define, …).
    InvalidArgument,
    /// The evaluation itself was rejected (non-positive beta, quadrature
    /// dimension past the cap, zero samples, indefinite coupling, …).
    EvalFailed,
    /// An internal panic was caught at the boundary.
    Panic,
}

/// Opaque model handle: family, couplings, and slice count.
pub struct SlModel {
    spec: ModelSpec,
}

/// One field-integral estimate.
#[repr(C)]
pub struct SlEstimate {
    /// Estimated value.
    pub value: f64,
    /// One standard error; exactly 0 for deterministic quadrature.
    pub std_error: f64,
    /// Mean sign of the integrand's real part; NaN when the estimator has
    /// no sampling measure (quadrature).
    pub avg_sign: f64,
    /// Integrand evaluations behind the estimate.
    pub n_samples: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn fail(status: SlStatus, message: impl std::fmt::Display) -> SlStatus {
    let text = message.to_string();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(text).unwrap_or_default();
    });
    status
}

fn guarded(op: impl FnOnce() -> SlStatus) -> SlStatus {
    match catch_unwind(AssertUnwindSafe(op)) {
        Ok(status) => status,
        Err(_) => fail(SlStatus::Panic, "internal panic reached the C boundary"),
    }
}

/// Explanation of the most recent failure on this thread, as a NUL-terminated
/// string owned by the library. Valid until the next failing call on the same
/// thread; empty before any failure.
#[no_mangle]
pub extern "C" fn sl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Crate version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

fn rational(num: i64, den: i64) -> Result<Rational, SlStatus> {
    if den == 0 {
        return Err(fail(SlStatus::InvalidArgument, "zero denominator"));
    }
    Ok(Rational::new(num, den))
}

fn write_model(out: *mut *mut SlModel, spec: ModelSpec) -> SlStatus {
    if out.is_null() {
        return fail(SlStatus::NullArgument, "out pointer is null");
    }
    if let Err(e) = spec.validate() {
        return fail(SlStatus::InvalidArgument, e);
    }
    unsafe { *out = Box::into_raw(Box::new(SlModel { spec })) };
    SlStatus::Ok
}

/// Build an oscillator approximant with `l` slices (odd). On success writes
/// a handle the caller must release with [`sl_model_free`].
#[no_mangle]
pub extern "C" fn sl_model_sho(l: u32, out: *mut *mut SlModel) -> SlStatus {
    guarded(|| write_model(out, ModelSpec::Sho { l }))
}

/// Build a single self-interacting spin: magnitude `two_s`/2, coupling
/// `j_num`/`j_den`, `l` slices.
#[no_mangle]
pub extern "C" fn sl_model_spin(
    two_s: u32,
    j_num: i64,
    j_den: i64,
    l: u32,
    out: *mut *mut SlModel,
) -> SlStatus {
    guarded(|| {
        let s = match Spin::new(two_s) {
            Ok(s) => s,
            Err(e) => return fail(SlStatus::InvalidArgument, e),
        };
        let j = match rational(j_num, j_den) {
            Ok(j) => j,
            Err(status) => return status,
        };
        write_model(out, ModelSpec::SingleSpin { s, j, l })
    })
}

/// Build a spin-1/2 dimer: exchange `j_num`/`j_den` (nonzero), self-coupling
/// `jprime_num`/`jprime_den`, `l` slices.
#[no_mangle]
pub extern "C" fn sl_model_dimer(
    j_num: i64,
    j_den: i64,
    jprime_num: i64,
    jprime_den: i64,
    l: u32,
    out: *mut *mut SlModel,
) -> SlStatus {
    guarded(|| {
        let j = match rational(j_num, j_den) {
            Ok(j) => j,
            Err(status) => return status,
        };
        let jprime = match rational(jprime_num, jprime_den) {
            Ok(jp) => jp,
            Err(status) => return status,
        };
        write_model(out, ModelSpec::Dimer { j, jprime, l })
    })
}

/// Release a model handle. Null is ignored.
///
/// # Safety
/// `model` must have come from one of the `sl_model_*` constructors and must
/// not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sl_model_free(model: *mut SlModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

unsafe fn scalar(
    model: *const SlModel,
    out: *mut f64,
    eval: impl FnOnce(&ModelSpec) -> Result<f64, SlStatus>,
) -> SlStatus {
    if model.is_null() || out.is_null() {
        return fail(SlStatus::NullArgument, "model or out pointer is null");
    }
    match eval(&(*model).spec) {
        Ok(value) => {
            *out = value;
            SlStatus::Ok
        }
        Err(status) => status,
    }
}

fn lib_err(e: slicelab::Error) -> SlStatus {
    fail(SlStatus::EvalFailed, e)
}

/// Partition-function approximant Z_L(beta).
///
/// # Safety
/// `model` must be a live handle; `out` must point to a writable f64.
#[no_mangle]
pub unsafe extern "C" fn sl_z(model: *const SlModel, beta: f64, out: *mut f64) -> SlStatus {
    guarded(|| {
        scalar(model, out, |spec| match spec {
            ModelSpec::Sho { l } => sho::z(*l, beta).map_err(lib_err),
            ModelSpec::SingleSpin { s, j, l } => {
                spin_single::zl(*s, j, *l, beta).map_err(lib_err)
            }
            ModelSpec::Dimer { j, jprime, l } => {
                spin_dimer::zl(j, jprime, *l, beta).map_err(lib_err)
            }
        })
    })
}

/// Log-derivative energy U_L(beta) = −∂_beta ln Z_L.
///
/// # Safety
/// As for [`sl_z`].
#[no_mangle]
pub unsafe extern "C" fn sl_u(model: *const SlModel, beta: f64, out: *mut f64) -> SlStatus {
    guarded(|| {
        scalar(model, out, |spec| match spec {
            ModelSpec::Sho { l } => sho::u(*l, beta).map_err(lib_err),
            ModelSpec::SingleSpin { s, j, l } => {
                spin_single::ul(*s, j, *l, beta).map_err(lib_err)
            }
            ModelSpec::Dimer { j, jprime, l } => {
                spin_dimer::ul(j, jprime, *l, beta).map_err(lib_err)
            }
        })
    })
}

/// Hamiltonian-average energy Ũ_L(beta). Defined for the spin models only;
/// the oscillator returns `SL_STATUS_INVALID_ARGUMENT`.
///
/// # Safety
/// As for [`sl_z`].
#[no_mangle]
pub unsafe extern "C" fn sl_utilde(
    model: *const SlModel,
    beta: f64,
    out: *mut f64,
) -> SlStatus {
    guarded(|| {
        scalar(model, out, |spec| match spec {
            ModelSpec::Sho { .. } => Err(fail(
                SlStatus::InvalidArgument,
                "the oscillator defines no Hamiltonian-average estimator",
            )),
            ModelSpec::SingleSpin { s, j, .. } => {
                if !(beta > 0.0) || !beta.is_finite() {
                    return Err(lib_err(slicelab::Error::NonPositiveBeta(beta)));
                }
                Ok(spin_single::utilde(*s, j).to_f64())
            }
            ModelSpec::Dimer { j, jprime, l } => {
                spin_dimer::utilde(j, jprime, *l, beta).map_err(lib_err)
            }
        })
    })
}

/// Heat capacity C_L(beta).
///
/// # Safety
/// As for [`sl_z`].
#[no_mangle]
pub unsafe extern "C" fn sl_heat_capacity(
    model: *const SlModel,
    beta: f64,
    out: *mut f64,
) -> SlStatus {
    guarded(|| {
        scalar(model, out, |spec| match spec {
            ModelSpec::Sho { l } => sho::heat_capacity(*l, beta).map_err(lib_err),
            ModelSpec::SingleSpin { s, j, l } => {
                spin_single::heat_capacity(*s, j, *l, beta).map_err(lib_err)
            }
            ModelSpec::Dimer { j, jprime, l } => {
                spin_dimer::heat_capacity(j, jprime, *l, beta).map_err(lib_err)
            }
        })
    })
}

/// Smooth density-of-states value g_L(e) for the oscillator. The spin
/// models' densities are delta combs (see [`sl_dos_json`]) and return
/// `SL_STATUS_INVALID_ARGUMENT` here.
///
/// # Safety
/// As for [`sl_z`].
#[no_mangle]
pub unsafe extern "C" fn sl_dos_at(model: *const SlModel, e: f64, out: *mut f64) -> SlStatus {
    guarded(|| {
        scalar(model, out, |spec| match spec {
            ModelSpec::Sho { l } => sho::dos(*l, e).map_err(lib_err),
            _ => Err(fail(
                SlStatus::InvalidArgument,
                "spin densities of states are delta combs; use sl_dos_json",
            )),
        })
    })
}

fn comb_json(comb: &DeltaComb) -> String {
    let mut out = String::from("{\"terms\": [");
    for (i, term) in comb.terms().iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write!(
            out,
            r#"{{"center": "{}", "order": {}, "coeff": "{}"}}"#,
            term.center, term.order, term.coeff,
        )
        .unwrap();
    }
    out.push_str("]}");
    out
}

fn write_string(out: *mut *mut c_char, text: String) -> SlStatus {
    match CString::new(text) {
        Ok(s) => {
            unsafe { *out = s.into_raw() };
            SlStatus::Ok
        }
        Err(_) => fail(SlStatus::Panic, "produced a string with an interior NUL"),
    }
}

/// Exact density of states of a spin model as JSON:
/// `{"terms": [{"center": "p/q", "order": k, "coeff": "p/q"}, …]}`, one
/// entry per delta line. The string is owned by the caller; release it with
/// [`sl_string_free`]. The oscillator's density is smooth (see
/// [`sl_dos_at`]) and returns `SL_STATUS_INVALID_ARGUMENT`.
///
/// # Safety
/// `model` must be a live handle; `out` must point to a writable `char *`.
#[no_mangle]
pub unsafe extern "C" fn sl_dos_json(
    model: *const SlModel,
    out: *mut *mut c_char,
) -> SlStatus {
    guarded(|| {
        if model.is_null() || out.is_null() {
            return fail(SlStatus::NullArgument, "model or out pointer is null");
        }
        let comb = match &(*model).spec {
            ModelSpec::Sho { .. } => {
                return fail(
                    SlStatus::InvalidArgument,
                    "the oscillator density is smooth; use sl_dos_at",
                )
            }
            ModelSpec::SingleSpin { s, j, l } => spin_single::dos(*s, j, *l),
            ModelSpec::Dimer { j, jprime, l } => match spin_dimer::dos(j, jprime, *l) {
                Ok(comb) => comb,
                Err(e) => return lib_err(e),
            },
        };
        write_string(out, comb_json(&comb))
    })
}

/// Exact Taylor coefficients of Z_L about beta = 0 as JSON:
/// `{"coefficients": ["p/q", …]}`, degrees 0 through `order` (at most 8).
/// Spin models only; the string is released with [`sl_string_free`].
///
/// # Safety
/// As for [`sl_dos_json`].
#[no_mangle]
pub unsafe extern "C" fn sl_series_json(
    model: *const SlModel,
    order: u32,
    out: *mut *mut c_char,
) -> SlStatus {
    guarded(|| {
        if model.is_null() || out.is_null() {
            return fail(SlStatus::NullArgument, "model or out pointer is null");
        }
        if order > 8 {
            return fail(SlStatus::InvalidArgument, "series order is capped at 8");
        }
        let coeffs = match &(*model).spec {
            ModelSpec::Sho { .. } => {
                return fail(
                    SlStatus::InvalidArgument,
                    "the oscillator approximant has no beta = 0 series",
                )
            }
            ModelSpec::SingleSpin { s, j, l } => {
                spin_single::zl_exppoly(*s, j, *l).taylor(order as usize)
            }
            ModelSpec::Dimer { j, jprime, l } => {
                match spin_dimer::series(j, jprime, *l, order as usize) {
                    Ok(coeffs) => coeffs,
                    Err(e) => return lib_err(e),
                }
            }
        };
        let mut text = String::from("{\"coefficients\": [");
        for (i, c) in coeffs.iter().enumerate() {
            if i > 0 {
                text.push_str(", ");
            }
            write!(text, "\"{c}\"").unwrap();
        }
        text.push_str("]}");
        write_string(out, text)
    })
}

fn write_estimate(out: *mut SlEstimate, est: &FieldIntegralEstimate) {
    unsafe {
        *out = SlEstimate {
            value: est.value,
            std_error: est.std_error,
            avg_sign: est.avg_sign.unwrap_or(f64::NAN),
            n_samples: est.n_samples,
        };
    }
}

/// Evaluate Z_L by tensor-product Gauss–Hermite quadrature with
/// `nodes_per_dim` nodes per field dimension (24 is a good default). Spin
/// models with positive-definite coupling and at most 6 field dimensions
/// only.
///
/// # Safety
/// `model` must be a live handle; `out` must point to a writable
/// [`SlEstimate`].
#[no_mangle]
pub unsafe extern "C" fn sl_quadrature_z(
    model: *const SlModel,
    beta: f64,
    nodes_per_dim: u32,
    out: *mut SlEstimate,
) -> SlStatus {
    guarded(|| {
        if model.is_null() || out.is_null() {
            return fail(SlStatus::NullArgument, "model or out pointer is null");
        }
        match quadrature_z(&(*model).spec, beta, nodes_per_dim as usize) {
            Ok(est) => {
                write_estimate(out, &est);
                SlStatus::Ok
            }
            Err(e) => lib_err(e),
        }
    })
}

/// Sample Z_L and U_L by seeded Monte Carlo over the auxiliary fields, with
/// the integration contour picked from the coupling signature. Identical
/// `(model, beta, n_samples, seed)` reproduce identical estimates bit for
/// bit. Either out pointer may be null to skip that estimate.
///
/// # Safety
/// `model` must be a live handle; non-null out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn sl_monte_carlo(
    model: *const SlModel,
    beta: f64,
    n_samples: u64,
    seed: u64,
    out_z: *mut SlEstimate,
    out_u: *mut SlEstimate,
) -> SlStatus {
    guarded(|| {
        if model.is_null() {
            return fail(SlStatus::NullArgument, "model pointer is null");
        }
        match monte_carlo(&(*model).spec, beta, n_samples, seed) {
            Ok(run) => {
                if !out_z.is_null() {
                    write_estimate(out_z, &run.z);
                }
                if !out_u.is_null() {
                    write_estimate(out_u, &run.u);
                }
                SlStatus::Ok
            }
            Err(e) => lib_err(e),
        }
    })
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must have come from an `sl_*_json` call and must not be used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn sl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
