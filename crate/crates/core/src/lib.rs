//! Spectral simulation and analysis laboratory for the dimensionless
//! compressible Navier-Stokes-Fourier system near a constant equilibrium.
//!
//! The crate is organised bottom-up:
//!
//! * [`spectral`]: periodic-grid transforms, Fourier multipliers, the Leray
//!   projector and the homogeneous Littlewood-Paley blocks.
//! * [`besov`]: Besov, hybrid low/high and time-weighted (Chemin-Lerner)
//!   norms, together with numerical checks of the classical inequalities.
//! * [`linear`]: the 3x3 mode generator of the linearised system, its exact
//!   semigroup, the Lyapunov-functional decay certificate and block envelopes.
//! * [`nsf`]: physical-to-dimensionless parameters, coefficient functions,
//!   nonlinear right-hand sides, effective velocity and Helmholtz identities.
//! * [`solver`]: integrating-factor Runge-Kutta time stepping.
//! * [`decay`]: initial data, decay experiments, decay functionals and fits.
//! * [`propcheck`]: the invariant suites exposed by the command line.

// NaN must fail the guards, so `!(x > 0.0)` is intended.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod besov;
pub mod decay;
pub mod error;
pub mod linear;
pub mod nsf;
pub mod propcheck;
pub mod quadrature;
pub mod solver;
pub mod spectral;
pub mod util;

pub use besov::{BesovParams, BlockNormRecord, FreqRange, SplitConfig, TimeWeight};
pub use decay::{DecayFit, DecayParams, InitialDataSpec};
pub use error::{Error, Result};
pub use linear::{DimensionlessParams, LyapunovData, ModeMatrix};
pub use nsf::{CoefficientTable, PhysicalParams, PressureLaw, State};
pub use solver::{Scheme, SolverConfig};
pub use spectral::{GridSpec, PhysicalField, SpectralField};

/// Version string embedded in every JSON report.
pub const VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));
