//! Complex band spectra of the PT-symmetric optical potential
//! 4cos²x + 4iV·sin2x and the isospectral complex Mathieu operator 2a·cos2x.
//!
//! The crate computes, for a given optical strength V (or Mathieu coupling a):
//!
//! - periodic and antiperiodic eigenvalues split into their PN/PD/AD/AN
//!   symmetry classes, from truncated Fourier matrices ([`operator`]);
//! - the Hill discriminant F(λ), Bloch eigenvalues as roots of F(λ) = 2cos t,
//!   and real-spectrum membership, from certified monodromy integration
//!   ([`discriminant`]) — an oracle independent of the matrix route;
//! - the iterated characteristic series for the lowest PN eigenvalues, its
//!   degree-8 polynomial approximation and the certified remainder bounds
//!   ([`series`], [`polyapprox`]);
//! - degeneration points and critical strengths V_k, in particular the second
//!   critical point V₂ ≈ 0.888437 at which the real parts of the first two
//!   bands disappear ([`critical`]);
//! - Bloch bands μ_n(t) with their real segments, conjugate nonreal arcs,
//!   real spectral components I_n and interior spectral singularities Λ_n
//!   ([`bands`]).
//!
//! The `ptband` binary exposes the same functionality with JSON/CSV output;
//! the `examples/` directory shows one runnable program per capability.

pub mod bands;
pub mod cli;
pub mod critical;
pub mod discriminant;
pub mod error;
mod ode;
pub mod operator;
pub mod polyapprox;
pub mod potential;
pub mod series;

pub use error::{Result, SpectralError};
pub use potential::{coupling_from_strength, strength_from_coupling, Potential};
