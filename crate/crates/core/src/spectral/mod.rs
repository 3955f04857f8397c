//! Periodic-grid Fourier infrastructure.
//!
//! The whole space is approximated by the box `[0, L)^d` sampled on `n^d`
//! points. Transforms use the continuum calibration
//! `f̂(ξ) = h^d Σ_x f(x) e^{-iξ·x}` with `h = L/n`, so that discrete norms
//! approximate their whole-space counterparts directly.

mod fft;
mod field;
mod grid;
mod littlewood_paley;
mod multiplier;

pub use fft::{fft_in_place, Direction};
pub use field::{forward_transform, inverse_transform, PhysicalField, SpectralField};
pub use grid::{GridSpec, Wavevector};
pub use littlewood_paley::{
    block_range, dyadic_block, dyadic_block_into, low_high_split, CutoffProfile, PROFILE,
};
pub use multiplier::{
    apply_matrix_multiplier, apply_multiplier, divergence, fractional_laplacian, gradient,
    heat_factor, inverse_laplacian, laplacian, leray_project, MatrixSymbol,
};
