//! Dimensionless compressible Navier-Stokes-Fourier system: parameters,
//! coefficient functions, nonlinear right-hand sides and the effective
//! velocity.

mod params;
mod state;
mod terms;
mod velocity;

pub use params::{
    check_stability, nondimensionalize, CoefficientTable, PhysicalParams, PressureLaw,
    StabilityReport,
};
pub use state::{ModeValues, State};
pub use terms::{
    coefficient_functions, dealias, dealias_state, lame_symbol, nonlinear_rhs, nonlinear_terms,
    CoefficientFields, VACUUM_GUARD,
};
pub use velocity::{effective_velocity, helmholtz_reconstruct};
