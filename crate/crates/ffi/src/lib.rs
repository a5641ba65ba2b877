//! C ABI for the osgrp solvers.
//!
//! Every fallible function returns an [`OsgrpStatus`]; the message of the
//! last failure on the calling thread is available from
//! [`osgrp_last_error`]. Solvers are opaque handles released with
//! [`osgrp_solver_free`].

use osgrp::burgers::BurgersSolver;
use osgrp::cases::{builtin, CaseConfig, Problem};
use osgrp::fvm1d::{BcMode, SchemeConfig, Solver1D};
use osgrp::fvm2d::Solver2D;
use osgrp::riemann::{solve_one_sided, solve_riemann, BoundaryDatum, Side};
use osgrp::run::{burgers_solver, euler1d_solver};
use osgrp::{Eos, Error, Prim};
use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OsgrpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidState = 3,
    Vacuum = 4,
    NoConvergence = 5,
    IllPosedBoundary = 6,
    UnknownCase = 7,
    SolverFailure = 8,
    Parse = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OsgrpBcMode {
    OneSidedGrp = 0,
    ReflectiveGhost = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OsgrpField {
    Density = 0,
    /// Velocity, or the solution itself for a scalar problem.
    VelocityX = 1,
    VelocityY = 2,
    Pressure = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OsgrpSide {
    /// The fluid lies to the right of the boundary.
    Left = 0,
    Right = 1,
}

/// Primitive gas state.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OsgrpPrim {
    pub rho: f64,
    pub v: f64,
    pub p: f64,
}

/// Star region of a Riemann problem.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct OsgrpStar {
    pub p: f64,
    pub v: f64,
    pub rho_left: f64,
    pub rho_right: f64,
}

enum Inner {
    Scalar(BurgersSolver),
    Line(Solver1D),
    Plane(Solver2D),
}

/// Opaque solver handle.
pub struct OsgrpSolver {
    inner: Inner,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> OsgrpStatus {
    match e {
        Error::InvalidState(_) | Error::InvalidEos(_) | Error::Geometry { .. } => OsgrpStatus::InvalidState,
        Error::VacuumFormation(_) => OsgrpStatus::Vacuum,
        Error::NoConvergence { .. } | Error::NoRoot(_) => OsgrpStatus::NoConvergence,
        Error::IllPosedBoundary(_) => OsgrpStatus::IllPosedBoundary,
        Error::UnknownCase(_) => OsgrpStatus::UnknownCase,
        Error::Solver { .. } => OsgrpStatus::SolverFailure,
        Error::Parse(_) => OsgrpStatus::Parse,
        Error::Usage(_) | Error::GridMismatch(_) | Error::Io(_) => OsgrpStatus::InvalidArgument,
    }
}

/// Run `f`, turning errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), (OsgrpStatus, String)>) -> OsgrpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OsgrpStatus::Ok,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("panic inside osgrp".into());
            OsgrpStatus::Panic
        }
    }
}

fn lift<T>(r: osgrp::Result<T>) -> Result<T, (OsgrpStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (OsgrpStatus, String) {
    (OsgrpStatus::NullPointer, format!("`{what}` is null"))
}

fn bad(msg: impl Into<String>) -> (OsgrpStatus, String) {
    (OsgrpStatus::InvalidArgument, msg.into())
}

unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, (OsgrpStatus, String)> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| bad(format!("`{what}` is not UTF-8")))
}

impl From<OsgrpPrim> for Prim {
    fn from(s: OsgrpPrim) -> Self {
        Prim::new(s.rho, s.v, s.p)
    }
}

impl From<Prim> for OsgrpPrim {
    fn from(s: Prim) -> Self {
        OsgrpPrim { rho: s.rho, v: s.v, p: s.p }
    }
}

/// Copy the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length in bytes.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn osgrp_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = e.len().min(len - 1);
            std::ptr::copy_nonoverlapping(e.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        e.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn osgrp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Exact Riemann problem for an ideal gas.
///
/// # Safety
/// `left`, `right` and `out` must be null or valid pointers.
#[no_mangle]
pub unsafe extern "C" fn osgrp_solve_riemann(gamma: f64, left: *const OsgrpPrim, right: *const OsgrpPrim, out: *mut OsgrpStar) -> OsgrpStatus {
    guard(|| {
        let (l, r) = (left.as_ref().ok_or_else(|| null("left"))?, right.as_ref().ok_or_else(|| null("right"))?);
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let eos = lift(Eos::new(gamma))?;
        let s = lift(solve_riemann(&(*l).into(), &(*r).into(), &eos))?;
        *out = OsgrpStar { p: s.pstar, v: s.vstar, rho_left: s.rho_star_left, rho_right: s.rho_star_right };
        Ok(())
    })
}

/// Boundary state of a solid wall next to `interior`.
///
/// # Safety
/// `interior` and `out` must be null or valid pointers.
#[no_mangle]
pub unsafe extern "C" fn osgrp_solve_wall(gamma: f64, interior: *const OsgrpPrim, side: OsgrpSide, out: *mut OsgrpPrim) -> OsgrpStatus {
    guard(|| {
        let u = interior.as_ref().ok_or_else(|| null("interior"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let eos = lift(Eos::new(gamma))?;
        let side = if side == OsgrpSide::Left { Side::Left } else { Side::Right };
        let s = lift(solve_one_sided(&(*u).into(), &BoundaryDatum::Velocity { v: 0.0, rho: None }, side, &eos))?;
        *out = s.ustar.into();
        Ok(())
    })
}

fn build(case: CaseConfig, cells: usize, mode: OsgrpBcMode) -> osgrp::Result<OsgrpSolver> {
    let case = if cells > 0 { case.with_cells(cells) } else { case };
    case.validate()?;
    let bc = if mode == OsgrpBcMode::OneSidedGrp { BcMode::OneSidedGrp } else { BcMode::ReflectiveGhost };
    let inner = match &case.problem {
        Problem::Burgers(b) => Inner::Scalar(burgers_solver(b, case.cfl, bc)?),
        Problem::Euler1d(e) => Inner::Line(euler1d_solver(e, case.cfl, bc)?),
        Problem::Euler2d(e) => {
            let mut scheme = SchemeConfig::new(case.cfl)?;
            scheme.bc_mode = bc;
            Inner::Plane(e.setup.build(e.nx, e.ny, scheme)?)
        }
    };
    Ok(OsgrpSolver { inner })
}

unsafe fn create(case: osgrp::Result<CaseConfig>, cells: usize, mode: OsgrpBcMode, out: *mut *mut OsgrpSolver) -> Result<(), (OsgrpStatus, String)> {
    let out = out.as_mut().ok_or_else(|| null("out"))?;
    *out = std::ptr::null_mut();
    let s = lift(case.and_then(|c| build(c, cells, mode)))?;
    *out = Box::into_raw(Box::new(s));
    Ok(())
}

/// Solver for a built-in case. `cells` overrides the resolution when
/// nonzero (rows for 2D cases).
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn osgrp_solver_from_case(name: *const c_char, cells: usize, mode: OsgrpBcMode, out: *mut *mut OsgrpSolver) -> OsgrpStatus {
    guard(|| create(builtin(text(name, "name")?), cells, mode, out))
}

/// Solver for a case given in case-file form.
///
/// # Safety
/// `toml` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn osgrp_solver_from_toml(toml: *const c_char, cells: usize, mode: OsgrpBcMode, out: *mut *mut OsgrpSolver) -> OsgrpStatus {
    guard(|| create(CaseConfig::from_toml(text(toml, "toml")?), cells, mode, out))
}

/// # Safety
/// `solver` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn osgrp_solver_free(solver: *mut OsgrpSolver) {
    if !solver.is_null() {
        drop(Box::from_raw(solver));
    }
}

/// Advance to `t_end`, ending on it exactly.
///
/// # Safety
/// `solver` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn osgrp_solver_advance(solver: *mut OsgrpSolver, t_end: f64) -> OsgrpStatus {
    guard(|| {
        let s = solver.as_mut().ok_or_else(|| null("solver"))?;
        if !t_end.is_finite() {
            return Err(bad("t_end must be finite"));
        }
        lift(match &mut s.inner {
            Inner::Scalar(b) => b.advance(t_end),
            Inner::Line(l) => l.advance(t_end).map(|_| ()),
            Inner::Plane(p) => p.advance(t_end),
        })
    })
}

/// Current time, or NaN for a null handle.
///
/// # Safety
/// `solver` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn osgrp_solver_time(solver: *const OsgrpSolver) -> f64 {
    match solver.as_ref().map(|s| &s.inner) {
        Some(Inner::Scalar(b)) => b.time(),
        Some(Inner::Line(l)) => l.time(),
        Some(Inner::Plane(p)) => p.time(),
        None => f64::NAN,
    }
}

/// Grid size; `ny` is 1 for one-dimensional problems.
///
/// # Safety
/// `solver`, `nx` and `ny` must be null or valid pointers.
#[no_mangle]
pub unsafe extern "C" fn osgrp_solver_shape(solver: *const OsgrpSolver, nx: *mut usize, ny: *mut usize) -> OsgrpStatus {
    guard(|| {
        let s = solver.as_ref().ok_or_else(|| null("solver"))?;
        let (a, b) = match &s.inner {
            Inner::Scalar(b) => (b.grid.cells, 1),
            Inner::Line(l) => (l.grid.cells, 1),
            Inner::Plane(p) => (p.grid.nx, p.grid.ny),
        };
        *nx.as_mut().ok_or_else(|| null("nx"))? = a;
        *ny.as_mut().ok_or_else(|| null("ny"))? = b;
        Ok(())
    })
}

/// Copy one field of the cell-centre state, row by row, into `out`, which
/// must hold `nx * ny` values. Solid cells of 2D obstacles read as the
/// solid placeholder state.
///
/// # Safety
/// `solver` must be null or a live handle; `out` must be null or point to
/// `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn osgrp_solver_copy_field(solver: *const OsgrpSolver, field: OsgrpField, out: *mut f64, len: usize) -> OsgrpStatus {
    guard(|| {
        let s = solver.as_ref().ok_or_else(|| null("solver"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let values: Vec<f64> = match (&s.inner, field) {
            (Inner::Scalar(b), OsgrpField::VelocityX) => b.values().to_vec(),
            (Inner::Scalar(_), _) => return Err(bad("a scalar problem has only the VelocityX field")),
            (Inner::Line(l), f) => {
                let pick = |c: &Prim| match f {
                    OsgrpField::Density => c.rho,
                    OsgrpField::VelocityX => c.v,
                    OsgrpField::VelocityY => 0.0,
                    OsgrpField::Pressure => c.p,
                };
                l.prim().iter().map(pick).collect()
            }
            (Inner::Plane(p), f) => p
                .prim()
                .iter()
                .map(|c| match f {
                    OsgrpField::Density => c.rho,
                    OsgrpField::VelocityX => c.vx,
                    OsgrpField::VelocityY => c.vy,
                    OsgrpField::Pressure => c.p,
                })
                .collect(),
        };
        if len != values.len() {
            return Err(bad(format!("buffer holds {len} values, the grid has {}", values.len())));
        }
        std::slice::from_raw_parts_mut(out, len).copy_from_slice(&values);
        Ok(())
    })
}
