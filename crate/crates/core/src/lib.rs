//! Holomorphic and polyanalytic Hermite bases on the complex plane.
//!
//! The crate evaluates the orthonormal families spanning the weighted space
//! `L^2(C, omega_s dlambda)`, its holomorphic subspace and the polyanalytic
//! levels above it, their reproducing kernels, and the Segal-Bargmann-type
//! transforms that map configuration-space bases onto them. Every function
//! has the closed shape `P(z, zbar) * exp(Q(z, zbar))` with `Q` quadratic;
//! integrals against such functions are computed with Gauss-Hermite rules
//! whose Gaussian envelope is read off `Q` analytically.
//!
//! Modules:
//! - [`hermite`]: classical Hermite polynomials, 1-D bases, Mehler kernel
//! - [`bipoly`]: polynomials in `(z, zbar)` and the operator calculus on them
//! - [`spaces`]: parameters, weights, bases and reproducing kernels
//! - [`quadrature`]: Gauss-Hermite rules and the ambient inner products
//! - [`transforms`]: the integral transforms, applied by quadrature
//! - [`verify`]: the verification suites, reports and grid export

pub mod bipoly;
pub mod error;
pub mod hermite;
pub mod quadrature;
pub mod spaces;
pub mod transforms;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
