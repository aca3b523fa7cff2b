//! Galerkin reconstruction of signals with finite rate of innovation in
//! reproducing kernel subspaces of `L²(ℝ)`.
//!
//! Signals live in spans of shifted generators `φ₀(· − i − θ_i)`. They are
//! sampled on nonuniform, jittered or crossing-time (C-TEM) sets and
//! recovered through the pre-reconstruction operator, the Galerkin equations
//! (square or least squares), the oblique projection, or the iterative
//! approximation-projection algorithm. [`diagnostics`] estimates the
//! stability and admissibility constants that govern these methods.
//!
//! ```
//! use galerkin_rks::kernels::{Generator, QuadratureSpec};
//! use galerkin_rks::model::{make_test_signal, CoefficientLaw, ShiftMode, ShiftedFamily};
//! use galerkin_rks::reconstruct::{assemble_system, solve_galerkin};
//! use galerkin_rks::sampling::{capture, make_jittered};
//!
//! let trial = ShiftedFamily::build(Generator::spline(), ShiftMode::UniformRandom(0.2), 5, 1).unwrap();
//! let test = ShiftedFamily::unshifted(Generator::indicator(), 5);
//! let h = make_test_signal(&trial, CoefficientLaw::RandomDecay, 5, 1).unwrap();
//! let samples = capture(&h, &make_jittered(5, 0.1, 1).unwrap());
//! let sys = assemble_system(&trial, &test, &samples, 5, 5).unwrap();
//! let c = solve_galerkin(&sys).unwrap();
//! assert!(c.iter().zip(h.coefficients()).all(|(a, b)| (a - b).abs() < 1e-10));
//! # let _ = QuadratureSpec::default();
//! ```

pub mod diagnostics;
pub mod error;
pub mod experiment;
pub mod kernels;
pub mod linalg;
pub mod model;
pub mod reconstruct;
pub mod rng;
pub mod sampling;

pub use error::{Error, Result};
