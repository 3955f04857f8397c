//! Frequency-wise linear theory: the 3×3 generator acting on
//! (density, longitudinal velocity, temperature), its semigroup, the
//! Lyapunov-functional decay certificate and block envelopes.

mod envelope;
mod expm;
mod lyapunov;
mod propagator;

pub use envelope::{block_decay_envelope, EnvelopeReport};
pub use expm::{expm3, op_norm};
pub use lyapunov::{
    certificate_violations, constructive_rate, lyapunov_constants, lyapunov_form, LyapunovData,
    RateReport,
};
pub use propagator::{apply_semigroup, ModeExpCache};

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `(β, γ, μ̃)`: heat diffusivity, coupling and shear fraction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionlessParams {
    pub beta: f64,
    pub gamma: f64,
    pub mu_tilde: f64,
}

impl DimensionlessParams {
    pub fn new(beta: f64, gamma: f64, mu_tilde: f64) -> Result<Self> {
        let p = DimensionlessParams {
            beta,
            gamma,
            mu_tilde,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::param(
                "beta",
                format!("{} is not positive", self.beta),
            ));
        }
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return Err(Error::param("gamma", format!("{} is negative", self.gamma)));
        }
        if !(self.mu_tilde > 0.0 && self.mu_tilde <= 1.0) {
            return Err(Error::param(
                "mu_tilde",
                format!("{} is outside (0, 1]", self.mu_tilde),
            ));
        }
        Ok(())
    }

    /// `β̃ = min(1, β)`.
    pub fn beta_tilde(&self) -> f64 {
        self.beta.min(1.0)
    }
}

/// `L(ϱ)` in the state order `(A, Ω, Θ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeMatrix {
    pub rho: f64,
    pub entries: Matrix3<f64>,
}

impl Serialize for ModeMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let rows: Vec<[f64; 3]> = (0..3)
            .map(|r| {
                [
                    self.entries[(r, 0)],
                    self.entries[(r, 1)],
                    self.entries[(r, 2)],
                ]
            })
            .collect();
        let mut st = s.serialize_struct("ModeMatrix", 2)?;
        st.serialize_field("rho", &self.rho)?;
        st.serialize_field("entries", &rows)?;
        st.end()
    }
}

/// Generator without validation; callers guarantee `rho ≥ 0`.
pub(crate) fn generator(rho: f64, p: &DimensionlessParams) -> Matrix3<f64> {
    let r2 = rho * rho;
    Matrix3::new(
        0.0,
        -rho,
        0.0,
        rho,
        -r2,
        p.gamma * rho,
        0.0,
        -p.gamma * rho,
        -p.beta * r2,
    )
}

pub fn symbol_matrix(rho: f64, params: &DimensionlessParams) -> Result<ModeMatrix> {
    if !(rho >= 0.0 && rho.is_finite()) {
        return Err(Error::param(
            "rho",
            format!("{rho} is not a nonnegative number"),
        ));
    }
    Ok(ModeMatrix {
        rho,
        entries: generator(rho, params),
    })
}

/// `(exp(tL(ϱ)), e^{−μ̃ϱ²t})`.
pub fn mode_semigroup(
    rho: f64,
    t: f64,
    params: &DimensionlessParams,
) -> Result<(Matrix3<f64>, f64)> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::param("t", format!("{t} is not a nonnegative time")));
    }
    let m = symbol_matrix(rho, params)?;
    Ok((
        expm3(&(m.entries * t)),
        (-params.mu_tilde * rho * rho * t).exp(),
    ))
}

/// Largest real part among the eigenvalues of `L(ϱ)`.
pub fn spectral_abscissa(rho: f64, params: &DimensionlessParams) -> Result<f64> {
    let m = symbol_matrix(rho, params)?;
    Ok(m.entries
        .complex_eigenvalues()
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Complex eigenvalues of `L(ϱ)` as `(re, im)` pairs, sorted by real part.
pub fn eigenvalues(rho: f64, params: &DimensionlessParams) -> Result<Vec<(f64, f64)>> {
    let m = symbol_matrix(rho, params)?;
    let mut ev: Vec<(f64, f64)> = m
        .entries
        .complex_eigenvalues()
        .iter()
        .map(|z| (z.re, z.im))
        .collect();
    ev.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    Ok(ev)
}
