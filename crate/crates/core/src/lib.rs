//! Cardinal interpolation on the integer lattice with the general multiquadric
//! `φ(x) = (‖x‖² + c²)^α`.
//!
//! The crate builds the fundamental (cardinal) function `L` whose Fourier
//! transform is the normalized symbol
//!
//! ```text
//! L̂(ξ) = φ̂(ξ) / Σ_j φ̂(ξ + 2πj)
//! ```
//!
//! and uses it to interpolate lattice data, `I y(x) = Σ_j y_j L(x − j)`.
//!
//! Modules, bottom up:
//!
//! - [`specfun`]: log-Gamma with sign, exponentially scaled `K_ν` of real
//!   order, adaptive Gauss–Kronrod quadrature and the Laplace-type integral
//!   used as an independent route to `φ̂`.
//! - [`symbol`]: overflow-safe `φ̂`, its periodization and `L̂`.
//! - [`fundamental`]: DFT synthesis of `L` on real-space grids, direct
//!   quadrature evaluation, and the translate coefficients.
//! - [`interpolate`]: the interpolation operator, the Whittaker (sinc)
//!   operator, the Λ function and operator-norm estimates.
//! - [`analysis`]: decay-slope fits and convergence studies with
//!   self-contained [`analysis::StudyReport`]s.
//! - [`cli`]: run configuration, orchestration and the on-disk formats used by
//!   the `mqcardinal` binary.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod fundamental;
pub mod interpolate;
pub mod specfun;
pub mod symbol;

pub use error::{Error, Result};
pub use fundamental::{GridFunction, GridSpec};
pub use specfun::{LogSigned, QuadSpec};
pub use symbol::{MultiquadricParams, PeriodizationSpec};
