//! Numerical laboratory for the weighted porous-medium equation with reaction
//!
//! ```text
//! rho(x) u_t = (u^m)_xx + rho(x) u^p   in (-R, R) x (0, tau),   m, p > 1,
//! ```
//!
//! where the weight `rho` is singular at both endpoints, comparable to
//! `(R-|x|)^-q`. The decay exponent splits the dynamics into three regimes
//! (fast `q > 2`, critical `q = 2`, slow `q < 2`) with different explicit
//! super- and subsolution barriers; this crate builds those barriers, solves
//! the parameter inequality systems that make them admissible, verifies the
//! differential inequalities numerically, and integrates the regularized
//! problem to reproduce the global-existence/blow-up dichotomy at desk scale.
//!
//! Modules:
//! - [`density`]: admissible weights and regime classification
//! - [`barrier`]: the explicit barrier families and their closed-form derivatives
//! - [`feasibility`]: constructive solutions of the parameter systems
//! - [`residual`]: analytic/finite-difference residuals and sign verification
//! - [`solver`]: implicit finite-difference solver with blow-up detection
//! - [`experiments`]: case orchestration, theorem recipes and phase sweeps

pub mod barrier;
pub mod config;
pub mod density;
pub mod experiments;
pub mod feasibility;
pub mod residual;
pub mod solver;
