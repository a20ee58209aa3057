//! Simultaneous computation of all roots of a monic polynomial.
//!
//! The roots `x = (x_1, ..., x_n)` of `p(t) = t^n + a_{n-1} t^{n-1} + ... + a_0`
//! are the zero of the Vieta system `F(x) = V(x) - a`, where `V` maps a root
//! vector to the coefficients of `prod (t - x_j)`. Newton's method on `F` is
//! the Weierstrass-Kerner (Durand-Kerner) iteration; Chebyshev's third-order
//! method on `F` is Tanabe's iteration. Both collapse to O(n^2) closed forms
//! because the Jacobian of `V` has an explicit inverse.
//!
//! Modules:
//! - [`poly`]: monic polynomials, Horner evaluation, expansion from roots and
//!   the deflated products used by the closed forms.
//! - [`vieta`]: `V`, `F`, the Jacobian columns, its explicit inverse, the
//!   second-derivative blocks and the bilinear form.
//! - [`solvers`]: the two closed-form steps, the iteration loop and a
//!   convergence-order estimator.
//! - [`oracle`]: dense, structure-free reference steps and finite-difference
//!   checks used to validate the closed forms.
//! - [`cli`]: the command-line front end.

pub mod cli;
pub mod error;
pub mod oracle;
pub mod poly;
pub mod solvers;
pub mod vieta;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
pub use poly::{MonicPolynomial, RootVector};
pub use solvers::{
    chebyshev_step, default_initial_guess, estimate_convergence_order, solve, wdk_step,
    Accumulation, IterationTrace, Method, SolverConfig, SolverResult, Status,
};
pub use vieta::{CoefficientVector, DerivativeTensor};
