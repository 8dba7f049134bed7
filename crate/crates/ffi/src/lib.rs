//! C interface to the phase-field front library.
//!
//! Every function returns a [`PfStatus`]; on failure the message is kept
//! per thread and read back with [`pf_last_error`]. Handles are opaque and
//! released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use phasefront::asymptotics::{phi_of_v, solve_v0};
use phasefront::forcing::Forcing;
use phasefront::front_law::solve_velocity_1d;
use phasefront::phasefield_1d::{extract_front, init_well_prepared, max_stable_dt, LineRun, LineState, LineStepper};
use phasefront::profiles::ProfileTable;
use phasefront::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    NoSolution = 4,
    NoConvergence = 5,
    Diverged = 6,
    Io = 7,
    Panic = 8,
}

impl From<&Error> for PfStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Config(_) | Error::Validation(_) | Error::Parse(_) | Error::Resolution(_) => {
                PfStatus::InvalidArgument
            }
            Error::Domain(_) | Error::Components { .. } | Error::FrontLost | Error::SelfIntersection { .. } => {
                PfStatus::Domain
            }
            Error::RootNotFound { .. } | Error::MultipleRoots { .. } | Error::Solvability { .. } => {
                PfStatus::NoSolution
            }
            Error::NoConvergence { .. } | Error::Singular { .. } => PfStatus::NoConvergence,
            Error::Divergence { .. } => PfStatus::Diverged,
            Error::Io(_) | Error::Csv(_) => PfStatus::Io,
            Error::Expansion { source, .. } | Error::Integration { source, .. } => PfStatus::from(source.as_ref()),
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

/// Runs `f`, turning errors and panics into a status. After
/// `PF_STATUS_PANIC` the handles passed to the call must only be freed.
fn guard(f: impl FnOnce() -> Result<(), (PfStatus, String)>) -> PfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PfStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside the library".into());
            PfStatus::Panic
        }
    }
}

fn lib<T>(r: phasefront::Result<T>) -> Result<T, (PfStatus, String)> {
    r.map_err(|e| (PfStatus::from(&e), e.to_string()))
}

fn null(name: &str) -> (PfStatus, String) {
    (PfStatus::NullPointer, format!("{name} is null"))
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Tabulated standing wave with its derived constants and `Phi`.
pub struct PfProfile {
    table: ProfileTable,
}

/// Builds the standing-wave table on `[-half_width, half_width]`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn pf_profile_build(half_width: f64, spacing: f64, out: *mut *mut PfProfile) -> PfStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let table = lib(ProfileTable::build(half_width, spacing))?;
        *out = Box::into_raw(Box::new(PfProfile { table }));
        Ok(())
    })
}

/// # Safety
/// `profile` must be null or a handle from [`pf_profile_build`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pf_profile_free(profile: *mut PfProfile) {
    if !profile.is_null() {
        drop(Box::from_raw(profile));
    }
}

unsafe fn profile_ref<'a>(p: *const PfProfile) -> Result<&'a ProfileTable, (PfStatus, String)> {
    p.as_ref().map(|p| &p.table).ok_or_else(|| null("profile"))
}

unsafe fn write<T>(out: *mut T, name: &str, value: T) -> Result<(), (PfStatus, String)> {
    if out.is_null() {
        return Err(null(name));
    }
    *out = value;
    Ok(())
}

/// Surface tension `c0 = ∫ theta0'^2`.
///
/// # Safety
/// `profile` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pf_profile_c0(profile: *const PfProfile, out: *mut f64) -> PfStatus {
    guard(|| write(out, "out", profile_ref(profile)?.c0()))
}

/// `Phi(V)`.
///
/// # Safety
/// `profile` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pf_phi(profile: *const PfProfile, velocity: f64, out: *mut f64) -> PfStatus {
    guard(|| write(out, "out", lib(phi_of_v(velocity, profile_ref(profile)?))?))
}

/// Leading-order inner velocity `V0` for forcing `F` and coupling `beta`.
///
/// # Safety
/// `profile` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pf_solve_v0(profile: *const PfProfile, forcing: f64, beta: f64, out: *mut f64) -> PfStatus {
    guard(|| write(out, "out", lib(solve_v0(forcing, beta, profile_ref(profile)?))?))
}

/// Front velocity `x0'` of the 1D law and the number of roots found.
///
/// # Safety
/// `profile` must be a live handle; `velocity` and `roots` writable.
#[no_mangle]
pub unsafe extern "C" fn pf_front_velocity_1d(
    profile: *const PfProfile,
    forcing: f64,
    beta: f64,
    velocity: *mut f64,
    roots: *mut usize,
) -> PfStatus {
    guard(|| {
        let (v, n) = lib(solve_velocity_1d(forcing, beta, profile_ref(profile)?, None))?;
        write(velocity, "velocity", v)?;
        write(roots, "roots", n)
    })
}

/// Settings of a 1D simulation with forcing `A sin(omega t) + B`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PfLineParams {
    pub eps: f64,
    pub beta: f64,
    pub x_front: f64,
    pub order: u32,
    pub amplitude: f64,
    pub omega: f64,
    pub offset: f64,
    /// Planned run length, used to size the domain.
    pub t_final: f64,
    /// Grid spacing as a fraction of `eps`.
    pub spacing_ratio: f64,
    /// Time step as a fraction of the stability budget.
    pub dt_ratio: f64,
    /// Bound on the front speed, used to size the domain.
    pub speed_bound: f64,
}

/// A running 1D phase-field simulation.
pub struct PfLine1d {
    state: LineState,
    stepper: LineStepper,
    forcing: Forcing,
    steps: usize,
}

/// Creates a simulation from well-prepared data.
///
/// # Safety
/// `profile` must be a live handle, `params` readable and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pf_line_new(
    profile: *const PfProfile,
    params: *const PfLineParams,
    out: *mut *mut PfLine1d,
) -> PfStatus {
    guard(|| {
        let table = profile_ref(profile)?;
        let p = params.as_ref().ok_or_else(|| null("params"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        if !(p.dt_ratio > 0.0 && p.dt_ratio <= 1.0) {
            return Err((PfStatus::InvalidArgument, format!("dt_ratio must lie in (0, 1], got {}", p.dt_ratio)));
        }
        let forcing = Forcing::sinusoid(p.amplitude, p.omega, p.offset);
        lib(forcing.validate())?;
        let run = LineRun {
            eps: p.eps,
            beta: p.beta,
            order: p.order as usize,
            x_front: p.x_front,
            forcing: forcing.clone(),
            t_final: p.t_final,
            spacing_ratio: p.spacing_ratio,
            dt_ratio: p.dt_ratio,
            samples: 1,
            speed_bound: p.speed_bound,
        };
        let grid = lib(run.grid())?;
        let state = lib(init_well_prepared(p.eps, p.beta, p.x_front, run.order, &forcing, 0.0, grid, table))?;
        let dt = max_stable_dt(p.eps, grid.spacing) * p.dt_ratio;
        let stepper = lib(LineStepper::new(&grid, p.eps, p.beta, dt))?;
        *out = Box::into_raw(Box::new(PfLine1d {
            state,
            stepper,
            forcing,
            steps: 0,
        }));
        Ok(())
    })
}

/// # Safety
/// `sim` must be null or a handle from [`pf_line_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pf_line_free(sim: *mut PfLine1d) {
    if !sim.is_null() {
        drop(Box::from_raw(sim));
    }
}

/// Advances the simulation by `count` steps.
///
/// # Safety
/// `sim` must be a live handle not used concurrently.
#[no_mangle]
pub unsafe extern "C" fn pf_line_step(sim: *mut PfLine1d, count: usize) -> PfStatus {
    guard(|| {
        let sim = sim.as_mut().ok_or_else(|| null("sim"))?;
        let dt = sim.stepper.dt();
        for _ in 0..count {
            let t = sim.steps as f64 * dt;
            sim.steps += 1;
            lib(sim.stepper.step(&mut sim.state, sim.forcing.eval(t), sim.steps))?;
            sim.state.t = sim.steps as f64 * dt;
        }
        Ok(())
    })
}

/// Current time and time step.
///
/// # Safety
/// `sim` must be a live handle; `t` and `dt` writable.
#[no_mangle]
pub unsafe extern "C" fn pf_line_time(sim: *const PfLine1d, t: *mut f64, dt: *mut f64) -> PfStatus {
    guard(|| {
        let sim = sim.as_ref().ok_or_else(|| null("sim"))?;
        write(t, "t", sim.state.t)?;
        write(dt, "dt", sim.stepper.dt())
    })
}

/// Position of the `rho = 1/2` crossing.
///
/// # Safety
/// `sim` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pf_line_front(sim: *const PfLine1d, out: *mut f64) -> PfStatus {
    guard(|| {
        let sim = sim.as_ref().ok_or_else(|| null("sim"))?;
        write(out, "out", lib(extract_front(&sim.state))?)
    })
}

/// Number of grid nodes.
///
/// # Safety
/// `sim` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pf_line_len(sim: *const PfLine1d, out: *mut usize) -> PfStatus {
    guard(|| {
        let sim = sim.as_ref().ok_or_else(|| null("sim"))?;
        write(out, "out", sim.state.rho.len())
    })
}

/// Copies node positions, `rho` and `P` into caller buffers of length
/// `len`, which must equal [`pf_line_len`]. Any of the buffers may be null.
///
/// # Safety
/// `sim` must be a live handle and each non-null buffer must hold `len`
/// writable doubles.
#[no_mangle]
pub unsafe extern "C" fn pf_line_copy_fields(
    sim: *const PfLine1d,
    x: *mut f64,
    rho: *mut f64,
    p: *mut f64,
    len: usize,
) -> PfStatus {
    guard(|| {
        let sim = sim.as_ref().ok_or_else(|| null("sim"))?;
        let s = &sim.state;
        if len != s.rho.len() {
            return Err((
                PfStatus::InvalidArgument,
                format!("buffer length {len} does not match {} nodes", s.rho.len()),
            ));
        }
        if !x.is_null() {
            for (j, xj) in s.grid.nodes().enumerate() {
                *x.add(j) = xj;
            }
        }
        if !rho.is_null() {
            ptr::copy_nonoverlapping(s.rho.as_ptr(), rho, len);
        }
        if !p.is_null() {
            ptr::copy_nonoverlapping(s.p.as_ptr(), p, len);
        }
        Ok(())
    })
}
