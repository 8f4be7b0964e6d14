//! C interface to `qspeed`.
//!
//! States and trajectories are opaque heap handles owned by the caller and
//! released with the matching `*_free` function. Every fallible call returns a
//! [`QspeedStatus`]; on failure the message is kept per thread and can be read
//! with [`qspeed_last_error`]. Matrices cross the boundary as two row-major
//! `double` arrays (real and imaginary parts) of length `dim * dim`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qspeed::bounds::{tau_alpha, tau_qsl, QslReport};
use qspeed::dynamics::{
    AmplitudeDampingTrajectory, DecayModel, DephasingTrajectory, DepolarizingTrajectory, ProbabilitySchedule,
    Trajectory, UnitaryTrajectory,
};
use qspeed::geometry::{distance_alpha, permuted_distance, AlphaValue};
use qspeed::linalg::{Complex64, ComplexMatrix, DensityMatrix, HermitianOperator};
use qspeed::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QspeedStatus {
    Ok = 0,
    /// Invalid input: dimension, trace, positivity, parameter range.
    InvalidInput = 1,
    /// A numerical consistency check failed.
    CheckFailed = 2,
    /// An iterative routine did not converge.
    NotConverged = 3,
    NullPointer = 4,
    /// A Rust panic was caught at the boundary.
    Internal = 5,
}

impl From<&Error> for QspeedStatus {
    fn from(e: &Error) -> Self {
        match e.exit_code() {
            2 => QspeedStatus::CheckFailed,
            3 => QspeedStatus::NotConverged,
            _ => QspeedStatus::InvalidInput,
        }
    }
}

/// Opaque density matrix.
pub struct QspeedState {
    inner: DensityMatrix,
}

/// Opaque trajectory `ρ_t`, `t ∈ [0, τ]`.
pub struct QspeedTrajectory {
    inner: Box<dyn Trajectory>,
}

/// Speed-limit evaluation result.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct QspeedReport {
    pub bound: f64,
    pub actual_tau: f64,
    pub ratio: f64,
    pub distance: f64,
    pub mean_speed: f64,
    pub grid_points: usize,
    pub converged: bool,
    pub refinements: usize,
}

impl From<&QslReport> for QspeedReport {
    fn from(r: &QslReport) -> Self {
        Self {
            bound: r.bound,
            actual_tau: r.actual_tau,
            ratio: r.ratio,
            distance: r.distance,
            mean_speed: r.mean_speed,
            grid_points: r.grid_points,
            converged: r.converged,
            refinements: r.refinements,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

enum Failure {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type FfiResult = Result<(), Failure>;

fn guard(f: impl FnOnce() -> FfiResult) -> QspeedStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QspeedStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_last_error(format!("null pointer: {what}"));
            QspeedStatus::NullPointer
        }
        Ok(Err(Failure::Lib(e))) => {
            set_last_error(e.to_string());
            QspeedStatus::from(&e)
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("internal error: {msg}"));
            QspeedStatus::Internal
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or(Failure::Null(what))
}

unsafe fn slice<'a>(p: *const f64, len: usize, what: &'static str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

/// Reads a `dim × dim` matrix; `im` may be null for a real matrix.
unsafe fn read_matrix(dim: usize, re: *const f64, im: *const f64) -> Result<ComplexMatrix, Failure> {
    let len = dim.checked_mul(dim).ok_or(Failure::Lib(Error::Dimension(dim)))?;
    let re = slice(re, len, "re")?;
    let entries: Vec<Complex64> = if im.is_null() {
        re.iter().map(|&x| Complex64::new(x, 0.0)).collect()
    } else {
        let im = slice(im, len, "im")?;
        re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)).collect()
    };
    Ok(ComplexMatrix::new(dim, entries)?)
}

fn boxed_trajectory(t: impl Trajectory + 'static) -> *mut QspeedTrajectory {
    Box::into_raw(Box::new(QspeedTrajectory { inner: Box::new(t) }))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qspeed_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or null if none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qspeed_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub extern "C" fn qspeed_clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

/// Builds a density matrix from row-major real and imaginary parts.
/// `im` may be null.
///
/// # Safety
/// `re` (and `im` when non-null) must point to `dim * dim` doubles; `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn qspeed_state_new(
    dim: usize,
    re: *const f64,
    im: *const f64,
    out_state: *mut *mut QspeedState,
) -> QspeedStatus {
    guard(|| {
        let slot = out(out_state, "out_state")?;
        let inner = DensityMatrix::new(read_matrix(dim, re, im)?)?;
        *slot = Box::into_raw(Box::new(QspeedState { inner }));
        Ok(())
    })
}

/// Diagonal state with the given populations.
///
/// # Safety
/// `probs` must point to `dim` doubles; `out_state` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qspeed_state_diagonal(
    dim: usize,
    probs: *const f64,
    out_state: *mut *mut QspeedState,
) -> QspeedStatus {
    guard(|| {
        let slot = out(out_state, "out_state")?;
        let inner = DensityMatrix::from_diagonal(slice(probs, dim, "probs")?)?;
        *slot = Box::into_raw(Box::new(QspeedState { inner }));
        Ok(())
    })
}

/// # Safety
/// `state` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qspeed_state_free(state: *mut QspeedState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Dimension of `state`, or 0 for null.
///
/// # Safety
/// `state` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qspeed_state_dim(state: *const QspeedState) -> usize {
    state.as_ref().map_or(0, |s| s.inner.dim())
}

/// # Safety
/// `state` must be a live handle; `out_purity` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qspeed_state_purity(state: *const QspeedState, out_purity: *mut f64) -> QspeedStatus {
    guard(|| {
        let s = deref(state, "state")?;
        *out(out_purity, "out_purity")? = s.inner.purity();
        Ok(())
    })
}

/// Copies the entries of `state` into row-major `re` and `im` buffers of
/// `dim * dim` doubles each.
///
/// # Safety
/// `state` must be a live handle; `re` and `im` must be writable for
/// `dim * dim` doubles.
#[no_mangle]
pub unsafe extern "C" fn qspeed_state_entries(state: *const QspeedState, re: *mut f64, im: *mut f64) -> QspeedStatus {
    guard(|| {
        let s = deref(state, "state")?;
        if re.is_null() {
            return Err(Failure::Null("re"));
        }
        if im.is_null() {
            return Err(Failure::Null("im"));
        }
        let entries = s.inner.entries();
        let re = std::slice::from_raw_parts_mut(re, entries.len());
        let im = std::slice::from_raw_parts_mut(im, entries.len());
        for (k, z) in entries.iter().enumerate() {
            re[k] = z.re;
            im[k] = z.im;
        }
        Ok(())
    })
}

/// Angular distance `D_α(ρ, σ)`.
///
/// # Safety
/// `rho` and `sigma` must be live handles; `out_distance` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qspeed_distance_alpha(
    rho: *const QspeedState,
    sigma: *const QspeedState,
    alpha: f64,
    out_distance: *mut f64,
) -> QspeedStatus {
    guard(|| {
        let (a, b) = (deref(rho, "rho")?, deref(sigma, "sigma")?);
        let slot = out(out_distance, "out_distance")?;
        let alpha = AlphaValue::new(alpha, a.inner.dim())?;
        *slot = distance_alpha(&a.inner, &b.inner, alpha)?;
        Ok(())
    })
}

/// Permutation-maximized framed distance in solver eigenframes with default
/// pair parameters. `out_permutation`, if non-null, receives `dim` indices.
///
/// # Safety
/// `rho` and `sigma` must be live handles; `out_distance` must be writable;
/// `out_permutation` must be null or writable for `dim` entries.
#[no_mangle]
pub unsafe extern "C" fn qspeed_permuted_distance(
    rho: *const QspeedState,
    sigma: *const QspeedState,
    out_distance: *mut f64,
    out_permutation: *mut usize,
) -> QspeedStatus {
    guard(|| {
        let (a, b) = (deref(rho, "rho")?, deref(sigma, "sigma")?);
        let slot = out(out_distance, "out_distance")?;
        let pd = permuted_distance(&a.inner, &b.inner, (None, None), None)?;
        *slot = pd.distance;
        if !out_permutation.is_null() {
            std::slice::from_raw_parts_mut(out_permutation, pd.permutation.len()).copy_from_slice(&pd.permutation);
        }
        Ok(())
    })
}

/// Closed evolution under a time-independent Hamiltonian `H` (row-major,
/// `im` may be null) from `rho0` over `[0, tau]`.
///
/// # Safety
/// `h_re` (and `h_im` when non-null) must hold `dim * dim` doubles where
/// `dim` is the dimension of `rho0`; `out_traj` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qspeed_trajectory_unitary(
    rho0: *const QspeedState,
    h_re: *const f64,
    h_im: *const f64,
    tau: f64,
    out_traj: *mut *mut QspeedTrajectory,
) -> QspeedStatus {
    guard(|| {
        let rho0 = deref(rho0, "rho0")?;
        let slot = out(out_traj, "out_traj")?;
        let h = HermitianOperator::new(read_matrix(rho0.inner.dim(), h_re, h_im)?)?;
        *slot = boxed_trajectory(UnitaryTrajectory::new(h, rho0.inner.clone(), tau)?);
        Ok(())
    })
}

/// Depolarizing channel with `p_t = 1 - e^{-rate t}`.
///
/// # Safety
/// `rho0` must be a live handle; `out_traj` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qspeed_trajectory_depolarizing(
    rho0: *const QspeedState,
    rate: f64,
    tau: f64,
    out_traj: *mut *mut QspeedTrajectory,
) -> QspeedStatus {
    guard(|| {
        let rho0 = deref(rho0, "rho0")?;
        let slot = out(out_traj, "out_traj")?;
        let t = DepolarizingTrajectory::new(rho0.inner.clone(), ProbabilitySchedule::Exponential { rate }, tau)?;
        *slot = boxed_trajectory(t);
        Ok(())
    })
}

/// Amplitude damping of the diagonal state `lambdas` with constant rate.
///
/// # Safety
/// `lambdas` must hold `dim` doubles; `out_traj` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qspeed_trajectory_amplitude_damping(
    dim: usize,
    lambdas: *const f64,
    gamma: f64,
    tau: f64,
    out_traj: *mut *mut QspeedTrajectory,
) -> QspeedStatus {
    guard(|| {
        let slot = out(out_traj, "out_traj")?;
        let lambdas = slice(lambdas, dim, "lambdas")?;
        let t = AmplitudeDampingTrajectory::new(lambdas, DecayModel::constant(gamma)?, tau)?;
        *slot = boxed_trajectory(t);
        Ok(())
    })
}

/// Amplitude damping driven by a zero-temperature Ohmic-like bath.
///
/// # Safety
/// `lambdas` must hold `dim` doubles; `out_traj` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qspeed_trajectory_amplitude_damping_ohmic(
    dim: usize,
    lambdas: *const f64,
    omega_c: f64,
    k: f64,
    tau: f64,
    out_traj: *mut *mut QspeedTrajectory,
) -> QspeedStatus {
    guard(|| {
        let slot = out(out_traj, "out_traj")?;
        let lambdas = slice(lambdas, dim, "lambdas")?;
        let t = AmplitudeDampingTrajectory::new(lambdas, DecayModel::ohmic_zero_t(omega_c, k)?, tau)?;
        *slot = boxed_trajectory(t);
        Ok(())
    })
}

/// Pure dephasing of `rho0` in the computational basis at rate `gamma`.
///
/// # Safety
/// `rho0` must be a live handle; `out_traj` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qspeed_trajectory_dephasing(
    rho0: *const QspeedState,
    gamma: f64,
    tau: f64,
    out_traj: *mut *mut QspeedTrajectory,
) -> QspeedStatus {
    guard(|| {
        let rho0 = deref(rho0, "rho0")?;
        let slot = out(out_traj, "out_traj")?;
        *slot = boxed_trajectory(DephasingTrajectory::from_state(rho0.inner.clone(), gamma, tau)?);
        Ok(())
    })
}

/// # Safety
/// `traj` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qspeed_trajectory_free(traj: *mut QspeedTrajectory) {
    if !traj.is_null() {
        drop(Box::from_raw(traj));
    }
}

/// Horizon `τ`, or NaN for null.
///
/// # Safety
/// `traj` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qspeed_trajectory_horizon(traj: *const QspeedTrajectory) -> f64 {
    traj.as_ref().map_or(f64::NAN, |t| t.inner.horizon())
}

/// State `ρ_t` as a new handle.
///
/// # Safety
/// `traj` must be a live handle; `out_state` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qspeed_trajectory_state(
    traj: *const QspeedTrajectory,
    t: f64,
    out_state: *mut *mut QspeedState,
) -> QspeedStatus {
    guard(|| {
        let traj = deref(traj, "traj")?;
        let slot = out(out_state, "out_state")?;
        let inner = traj.inner.state(t)?;
        *slot = Box::into_raw(Box::new(QspeedState { inner }));
        Ok(())
    })
}

/// Single-parameter bound `τ_α` evaluated on `grid` points.
///
/// # Safety
/// `traj` must be a live handle; `out_report` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qspeed_tau_alpha(
    traj: *const QspeedTrajectory,
    alpha: f64,
    grid: usize,
    out_report: *mut QspeedReport,
) -> QspeedStatus {
    guard(|| {
        let traj = deref(traj, "traj")?;
        let slot = out(out_report, "out_report")?;
        let alpha = AlphaValue::new(alpha, traj.inner.dim())?;
        *slot = QspeedReport::from(&tau_alpha(traj.inner.as_ref(), alpha, grid)?);
        Ok(())
    })
}

/// Framed bound `τ_QSL` with default pair parameters.
///
/// # Safety
/// `traj` must be a live handle; `out_report` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qspeed_tau_qsl(
    traj: *const QspeedTrajectory,
    grid: usize,
    out_report: *mut QspeedReport,
) -> QspeedStatus {
    guard(|| {
        let traj = deref(traj, "traj")?;
        let slot = out(out_report, "out_report")?;
        *slot = QspeedReport::from(&tau_qsl(traj.inner.as_ref(), grid, None)?);
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CStr;

    #[test]
    fn status_codes_follow_exit_codes() {
        assert_eq!(QspeedStatus::from(&Error::Dimension(1)), QspeedStatus::InvalidInput);
        assert_eq!(
            QspeedStatus::from(&Error::CheckFailed("x".into())),
            QspeedStatus::CheckFailed
        );
        assert_eq!(
            QspeedStatus::from(&Error::EigenConvergence { sweeps: 1, off: 1.0 }),
            QspeedStatus::NotConverged
        );
    }

    #[test]
    fn panics_are_contained() {
        let s = guard(|| panic!("boom"));
        assert_eq!(s, QspeedStatus::Internal);
        let msg = unsafe { CStr::from_ptr(qspeed_last_error()) }
            .to_str()
            .unwrap()
            .to_owned();
        assert!(msg.contains("boom"));
    }

    #[test]
    fn version_is_terminated() {
        let v = unsafe { CStr::from_ptr(qspeed_version()) };
        assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }
}
