//! Exact minimization of tropical Puiseux polynomials over boxes by
//! variable elimination, with a Chebyshev approximation front-end.
//!
//! ```
//! use tropelim::{parse_problem, solve, AnyProblem, SolverOptions};
//!
//! let doc = br#"{
//!   "semifield": "max-plus",
//!   "monomials": [
//!     {"coeff": "0", "exponents": ["-1"]},
//!     {"coeff": "-2", "exponents": ["1"]}
//!   ],
//!   "box": {"lower": ["-10"], "upper": ["10"]}
//! }"#;
//! let AnyProblem::Exact(p) = parse_problem(doc).unwrap() else { unreachable!() };
//! let solved = solve(&p, &SolverOptions::default()).unwrap();
//! assert_eq!(p.semifield().format(&solved.solution.mu), "-1");
//! ```

pub mod cheb;
pub mod cli;
pub mod eliminate;
pub mod error;
mod linalg;
pub mod oracle;
pub mod polynomial;
pub mod prune;
pub mod rational;
pub mod semifield;
pub mod univariate;

pub use eliminate::{
    backward_eliminate, eliminate_step, forward_substitute, solve, EliminationTrace, Pick,
    Solution, Solved, SolverOptions, Status,
};
pub use error::{Error, Result};
pub use linalg::solve_exact;
pub use polynomial::{
    parse_problem, serialize_problem, AnyProblem, BoxConstraint, Monomial, Polynomial, Problem,
};
pub use prune::PruneLevel;
pub use rational::Rational;
pub use semifield::{ExactSemifield, FloatSemifield, Mode, Semifield, SemifieldId, Value};
pub use univariate::{breakpoint_oracle, solve_univariate, Interval, UnivariateResult};
