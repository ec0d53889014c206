//! C ABI for tropelim.
//!
//! Problems and solutions are opaque handles created and freed by this
//! library. Every fallible call returns a [`TropelimStatus`]; on failure the
//! message is available from [`tropelim_last_error`] on the same thread.
//! Strings returned by accessors are owned by the handle they came from and
//! stay valid until it is freed.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tropelim::eliminate::{format_value, solution_document};
use tropelim::semifield::Carrier;
use tropelim::{
    parse_problem, solve, AnyProblem, Error, Pick, Problem, PruneLevel, SolverOptions, Status,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TropelimStatus {
    Ok = 0,
    /// Malformed input or invalid argument.
    Invalid = 1,
    /// The infimum is the zero element; a solution handle is still produced.
    NotAttained = 2,
    Capacity = 3,
    NullArgument = 4,
    Internal = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TropelimPrune {
    None = 0,
    Basic = 1,
    Dominance = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TropelimPick {
    Lower = 0,
    Midpoint = 1,
    Upper = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TropelimOptions {
    pub prune: TropelimPrune,
    pub pick: TropelimPick,
    /// Cap on nonzero rows per elimination stage.
    pub max_monomials: usize,
    /// Solve exact problems in floating point.
    pub float_mode: bool,
}

/// A validated problem instance.
pub struct TropelimProblem {
    inner: AnyProblem,
}

/// A solved instance with its values rendered as strings.
pub struct TropelimSolution {
    attained: bool,
    mu: CString,
    point: Vec<CString>,
    json: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(e: &Error) -> TropelimStatus {
    set_last_error(&e.to_string());
    match e {
        Error::Capacity { .. } => TropelimStatus::Capacity,
        Error::NotAttained(_) => TropelimStatus::NotAttained,
        Error::Internal(_) => TropelimStatus::Internal,
        _ => TropelimStatus::Invalid,
    }
}

fn guard(f: impl FnOnce() -> TropelimStatus) -> TropelimStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_last_error("panic inside tropelim");
            TropelimStatus::Panic
        }
    }
}

fn null_argument(name: &str) -> TropelimStatus {
    set_last_error(&format!("{name} is null"));
    TropelimStatus::NullArgument
}

fn c_string(s: String) -> CString {
    CString::new(s).expect("documents contain no nul bytes")
}

/// Message of the last failed call on this thread; empty if none.
#[no_mangle]
pub extern "C" fn tropelim_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn tropelim_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[no_mangle]
pub extern "C" fn tropelim_options_default() -> TropelimOptions {
    let d = SolverOptions::default();
    TropelimOptions {
        prune: TropelimPrune::Dominance,
        pick: TropelimPick::Lower,
        max_monomials: d.max_monomials,
        float_mode: false,
    }
}

/// Parses a problem document (UTF-8 JSON, nul-terminated).
///
/// # Safety
/// `json` must be a valid nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tropelim_problem_from_json(
    json: *const c_char,
    out: *mut *mut TropelimProblem,
) -> TropelimStatus {
    guard(|| {
        if json.is_null() {
            return null_argument("json");
        }
        if out.is_null() {
            return null_argument("out");
        }
        *out = ptr::null_mut();
        let bytes = CStr::from_ptr(json).to_bytes();
        match parse_problem(bytes) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(TropelimProblem { inner }));
                TropelimStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Number of variables; 0 for a null handle.
///
/// # Safety
/// `problem` must be null or a handle from [`tropelim_problem_from_json`].
#[no_mangle]
pub unsafe extern "C" fn tropelim_problem_arity(problem: *const TropelimProblem) -> usize {
    match problem.as_ref() {
        None => 0,
        Some(p) => match &p.inner {
            AnyProblem::Exact(p) => p.arity(),
            AnyProblem::Float(p) => p.arity(),
        },
    }
}

/// # Safety
/// `problem` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tropelim_problem_free(problem: *mut TropelimProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

fn solver_options(o: &TropelimOptions) -> SolverOptions {
    SolverOptions {
        prune: match o.prune {
            TropelimPrune::None => PruneLevel::None,
            TropelimPrune::Basic => PruneLevel::Basic,
            TropelimPrune::Dominance => PruneLevel::Dominance,
        },
        pick: match o.pick {
            TropelimPick::Lower => Pick::Lower,
            TropelimPick::Midpoint => Pick::Midpoint,
            TropelimPick::Upper => Pick::Upper,
        },
        max_monomials: o.max_monomials,
        retain_trace: false,
    }
}

fn run<C: Carrier>(p: &Problem<C>, options: &SolverOptions) -> Result<TropelimSolution, Error> {
    let sf = p.semifield();
    let sol = solve(p, options)?.solution;
    let doc = solution_document(&sf, &sol);
    Ok(TropelimSolution {
        attained: sol.status == Status::Attained,
        mu: c_string(format_value(&sf, &sol.mu)),
        point: sol
            .point
            .iter()
            .map(|v| c_string(format_value(&sf, v)))
            .collect(),
        json: c_string(serde_json::to_string(&doc).expect("documents serialize")),
    })
}

/// Minimizes `problem`. `options` may be null for defaults.
///
/// Returns `Ok` or `NotAttained` with `*out` set; on any other status
/// `*out` is null.
///
/// # Safety
/// `problem` must be a live handle, `options` null or valid, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn tropelim_solve(
    problem: *const TropelimProblem,
    options: *const TropelimOptions,
    out: *mut *mut TropelimSolution,
) -> TropelimStatus {
    guard(|| {
        if out.is_null() {
            return null_argument("out");
        }
        *out = ptr::null_mut();
        let Some(problem) = problem.as_ref() else {
            return null_argument("problem");
        };
        let opts = options
            .as_ref()
            .copied()
            .unwrap_or_else(|| tropelim_options_default());
        let so = solver_options(&opts);
        let result = match &problem.inner {
            AnyProblem::Exact(p) if opts.float_mode => run(&p.to_float(), &so),
            AnyProblem::Exact(p) => run(p, &so),
            AnyProblem::Float(p) => run(p, &so),
        };
        match result {
            Ok(sol) => {
                let status = if sol.attained {
                    TropelimStatus::Ok
                } else {
                    set_last_error("infimum not attained");
                    TropelimStatus::NotAttained
                };
                *out = Box::into_raw(Box::new(sol));
                status
            }
            Err(e) => fail(&e),
        }
    })
}

/// The minimum μ as text; null for a null handle.
///
/// # Safety
/// `solution` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tropelim_solution_mu(solution: *const TropelimSolution) -> *const c_char {
    solution.as_ref().map_or(ptr::null(), |s| s.mu.as_ptr())
}

/// Number of coordinates in the minimizer; 0 when not attained.
///
/// # Safety
/// `solution` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tropelim_solution_point_len(solution: *const TropelimSolution) -> usize {
    solution.as_ref().map_or(0, |s| s.point.len())
}

/// Coordinate `index` of the minimizer as text; null if out of range.
///
/// # Safety
/// `solution` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tropelim_solution_point(
    solution: *const TropelimSolution,
    index: usize,
) -> *const c_char {
    solution
        .as_ref()
        .and_then(|s| s.point.get(index))
        .map_or(ptr::null(), |c| c.as_ptr())
}

/// The full solution document as compact JSON.
///
/// # Safety
/// `solution` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tropelim_solution_json(
    solution: *const TropelimSolution,
) -> *const c_char {
    solution.as_ref().map_or(ptr::null(), |s| s.json.as_ptr())
}

/// # Safety
/// `solution` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tropelim_solution_free(solution: *mut TropelimSolution) {
    if !solution.is_null() {
        drop(Box::from_raw(solution));
    }
}
