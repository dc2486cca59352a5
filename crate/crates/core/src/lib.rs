//! Spectral engine for one-dimensional Schrödinger models built from two
//! quadratic polynomials.
//!
//! A model is fixed by a pair of quadratics: `P(z) = A₂z² + A₁z + A₀` drives
//! the ground-state factor `φ₀ = e^{-W₀}` through `W₀' z' = P(z)`, while
//! `Q(z) = αz² + βz + γ` fixes the change of variables through `z'² = Q(z)`.
//! Only three canonical forms of `Q` exist (constant, linear, quadratic), and
//! they generate the classic solvable families: Scarf II, Morse, generalized
//! Pöschl-Teller, shifted oscillator, radial/sextic oscillator and Scarf I.
//! Complexifying the `P` coefficients while keeping the potential real yields
//! quasinormal ladders (complex energies) instead of bound states.
//!
//! The crate provides:
//!
//! - [`model`] — polynomial data, solvability classification, validation
//! - [`coords`] — the three canonical sinusoidal coordinates and x ↔ z maps
//! - [`prepotential`] — closed-form `W₀`, ground-state factor, endpoint analysis
//! - [`bethe`] — the gauged (N+1)×(N+1) eigenproblem and Bethe-root extraction
//! - [`spectrum`] — potential assembly, complex energies, eigenfunctions
//! - [`verify`] — grid residuals, convergence order, finite-difference oracle,
//!   parity equivalence and root-sum identities
//! - [`catalog`] — named presets for every built-in family variant
//!
//! Energies follow the convention `V_N(x) = V(x) − E_N` with `H_N φ_N = 0`,
//! and the time factor is `e^{−iEt}`, so `Im E < 0` labels decaying modes and
//! `Im E > 0` growing ones.
//!
//! Grid sweeps run in parallel when the `parallel` feature (default) is
//! enabled; disable default features for a sequential build with identical
//! results.

pub mod bethe;
pub mod catalog;
pub mod coords;
pub mod linalg;
pub mod model;
pub mod par;
pub mod prepotential;
pub mod rng;
pub mod spectrum;
pub mod verify;

mod error;

pub use error::Error;
pub use num_complex::Complex64;

pub type Result<T> = std::result::Result<T, Error>;
