//! Decay experiments: initial data with prescribed low-frequency
//! regularity, grid and grid-free linear runs, nonlinear runs, the
//! time-weighted functionals and power-law fits.

mod experiment;
mod fit;
mod functionals;
mod initial;
mod plot;
mod radial;

pub use experiment::{
    low_norm_id, run_experiment, saturation_time, DecaySection, ExperimentConfig, ExperimentReport,
    FitRecord, GridSection, InitialSection, Mode, OutputSection, PhysicsSection, RunOutput,
    RunSection,
};
pub use fit::{fit_decay, DecayFit};
pub use functionals::{compute_dp, compute_xp, low_series, FunctionalComponent, FunctionalTable};
pub use initial::{
    initial_data_report, make_initial_data, InitialDataReport, InitialDataSpec, InitialKind,
};
pub use plot::{write_loglog_svg, PlotSeries};
pub use radial::{radial_block_record, RadialData};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponents of the decay functional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayParams {
    pub d: usize,
    pub s1: f64,
    pub p: f64,
    pub eps: f64,
    pub j0: i32,
    /// Regularity indices over which the low-frequency sup is taken.
    pub s_grid: Vec<f64>,
}

impl DecayParams {
    /// Uses the default `s_grid`.
    pub fn new(d: usize, s1: f64, p: f64, eps: f64, j0: i32) -> Result<Self> {
        let dp = DecayParams {
            d,
            s1,
            p,
            eps,
            j0,
            s_grid: default_s_grid(d, s1, eps),
        };
        dp.validate()?;
        Ok(dp)
    }

    /// `s0 = 2d/p − d/2`.
    pub fn s0(&self) -> f64 {
        2.0 * self.d as f64 / self.p - 0.5 * self.d as f64
    }

    /// `α = s1 + d/2 + 1/2 − ε`.
    pub fn alpha(&self) -> f64 {
        self.s1 + 0.5 * self.d as f64 + 0.5 - self.eps
    }

    pub fn s_min(&self) -> f64 {
        self.eps - self.s1
    }

    pub fn s_max(&self) -> f64 {
        0.5 * self.d as f64 + 1.0
    }

    /// Low-frequency decay exponent `(s1 + s)/2` of `Ḃ^s_{2,1}`.
    pub fn low_rate(&self, s: f64) -> f64 {
        0.5 * (self.s1 + s)
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.d as f64;
        if !(2..=3).contains(&self.d) {
            return Err(Error::param("d", format!("{} is not 2 or 3", self.d)));
        }
        if !(self.p >= 2.0 && (self.p < d || self.p == 2.0)) {
            return Err(Error::param("p", format!("{} is outside [2, d)", self.p)));
        }
        if self.d > 2 && self.p > 2.0 * d / (d - 2.0) {
            return Err(Error::param("p", format!("{} exceeds 2d/(d-2)", self.p)));
        }
        let lo = (2.0 - 0.5 * d).max(0.0);
        if !(self.s1 >= lo - 1e-12 && self.s1 <= self.s0() + 1e-12) {
            return Err(Error::param(
                "s1",
                format!("{} is outside [{lo}, {}]", self.s1, self.s0()),
            ));
        }
        if !(self.eps >= 0.0 && self.eps < 0.5) {
            return Err(Error::param(
                "eps",
                format!("{} is not small and nonnegative", self.eps),
            ));
        }
        if self.s_grid.is_empty() {
            return Err(Error::param("s_grid", "is empty"));
        }
        for &s in &self.s_grid {
            if !(s >= self.s_min() - 1e-12 && s <= self.s_max() + 1e-12) {
                return Err(Error::param(
                    "s_grid",
                    format!("{s} is outside [{}, {}]", self.s_min(), self.s_max()),
                ));
            }
        }
        Ok(())
    }
}

/// `{ε − s1, 0, 1, d/2, d/2 + 1}` restricted to `[ε − s1, d/2 + 1]`.
pub fn default_s_grid(d: usize, s1: f64, eps: f64) -> Vec<f64> {
    let lo = eps - s1;
    let hi = 0.5 * d as f64 + 1.0;
    let mut s: Vec<f64> = [lo, 0.0, 1.0, 0.5 * d as f64, hi]
        .into_iter()
        .filter(|&s| s >= lo && s <= hi)
        .collect();
    s.sort_by(|a, b| a.total_cmp(b));
    s.dedup();
    s
}
