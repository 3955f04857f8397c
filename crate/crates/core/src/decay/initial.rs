use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::DecayParams;
use crate::besov::{block_lp_norms, weighted_lr, FreqRange};
use crate::error::{Error, Result};
use crate::nsf::State;
use crate::spectral::{block_range, gradient, GridSpec, SpectralField, PROFILE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialKind {
    /// `ε e^{−|ξ|²w²/2}` in every component: nonzero transform at the origin.
    GaussianBump,
    /// `|Û| = ε |ξ|^{s1 − d/2} ψ(|ξ|)` with random phases.
    PowerProfile,
}

fn default_width() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialDataSpec {
    pub kind: InitialKind,
    pub amplitude: f64,
    #[serde(default = "default_width")]
    pub width: f64,
    #[serde(default)]
    pub seed: u64,
}

impl InitialDataSpec {
    pub fn gaussian(amplitude: f64, width: f64) -> Self {
        InitialDataSpec {
            kind: InitialKind::GaussianBump,
            amplitude,
            width,
            seed: 0,
        }
    }

    pub fn power_profile(amplitude: f64, seed: u64) -> Self {
        InitialDataSpec {
            kind: InitialKind::PowerProfile,
            amplitude,
            width: default_width(),
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.amplitude >= 0.0 && self.amplitude.is_finite()) {
            return Err(Error::param(
                "amplitude",
                format!("{} is negative", self.amplitude),
            ));
        }
        if !(self.width > 0.0 && self.width.is_finite()) {
            return Err(Error::param(
                "width",
                format!("{} is not positive", self.width),
            ));
        }
        Ok(())
    }

    /// Radial amplitude `|Û(ξ)|` of the density component.
    pub fn profile(&self, rho: f64, dp: &DecayParams) -> f64 {
        match self.kind {
            InitialKind::GaussianBump => {
                self.amplitude * (-0.5 * rho * rho * self.width * self.width).exp()
            }
            InitialKind::PowerProfile => {
                if rho == 0.0 {
                    return 0.0;
                }
                self.amplitude * rho.powf(dp.s1 - 0.5 * dp.d as f64) * PROFILE.psi(rho)
            }
        }
    }
}

/// Mean-free initial state on `grid`; velocity components carry `1/√d` of
/// the scalar amplitude each.
pub fn make_initial_data(
    spec: &InitialDataSpec,
    grid: GridSpec,
    dp: &DecayParams,
) -> Result<State> {
    spec.validate()?;
    dp.validate()?;
    if dp.d != grid.d {
        return Err(Error::param(
            "d",
            format!("decay parameters use d = {}, grid has d = {}", dp.d, grid.d),
        ));
    }
    let d = grid.d;
    let len = grid.len();
    let unit = 1.0 / (d as f64).sqrt();
    let mut state = State::zeros(grid);
    let scales: Vec<f64> = std::iter::once(1.0)
        .chain(std::iter::repeat_n(unit, d))
        .chain(std::iter::once(1.0))
        .collect();
    let mut stacked = state.stacked();
    match spec.kind {
        InitialKind::GaussianBump => {
            for (c, &sc) in scales.iter().enumerate() {
                let comp = &mut stacked.coeffs[c * len..(c + 1) * len];
                for (idx, z) in comp.iter_mut().enumerate() {
                    *z = Complex64::new(sc * spec.profile(grid.wavenumber(idx), dp), 0.0);
                }
            }
        }
        InitialKind::PowerProfile => {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            for (c, &sc) in scales.iter().enumerate() {
                let comp = &mut stacked.coeffs[c * len..(c + 1) * len];
                for idx in 0..len {
                    let partner = grid.partner(idx);
                    if partner < idx {
                        continue;
                    }
                    let amp = sc * spec.profile(grid.wavenumber(idx), dp);
                    if partner == idx {
                        comp[idx] = Complex64::new(amp, 0.0);
                        continue;
                    }
                    let phase: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                    comp[idx] = Complex64::from_polar(amp, phase);
                    comp[partner] = comp[idx].conj();
                }
            }
        }
    }
    state = State::from_stacked(0.0, &stacked)?;
    for f in [&mut state.a, &mut state.upsilon, &mut state.theta] {
        f.strip_nyquist();
        f.zero_mean();
    }
    Ok(state)
}

/// Size of the data in the norms entering the smallness hypotheses.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InitialDataReport {
    /// `sup_{j ≤ j0} 2^{−j s1} ‖Δ̇_j (a, υ, θ)‖_{L²}`.
    pub low_negative_norm: f64,
    /// Block at which the sup is attained.
    pub low_argmax_j: i32,
    /// `‖(∇a, υ)‖^h` in `Ḃ^{d/p−1}_{p,1}`.
    pub grad_a_u_high: f64,
    /// `‖θ‖^h` in `Ḃ^{d/p−2}_{p,1}`.
    pub theta_high: f64,
}

pub fn initial_data_report(state: &State, dp: &DecayParams) -> Result<InitialDataReport> {
    let grid = state.grid();
    let (j_lo, j_hi) = block_range(&grid);
    let per_block = |f: &SpectralField, p: f64| block_lp_norms(f, p, j_lo, j_hi);
    let low: Vec<f64> = {
        let parts = [
            per_block(&state.a, 2.0),
            per_block(&state.upsilon, 2.0),
            per_block(&state.theta, 2.0),
        ];
        (0..parts[0].len())
            .map(|i| parts.iter().map(|v| v[i]).sum())
            .collect()
    };
    let mut best = (0.0, j_lo);
    for (i, v) in low.iter().enumerate() {
        let j = j_lo + i as i32;
        if j > dp.j0 {
            break;
        }
        let w = 2f64.powf(-(j as f64) * dp.s1) * v;
        if w > best.0 {
            best = (w, j);
        }
    }
    let d = grid.d as f64;
    let p = dp.p;
    let high = FreqRange::High(dp.j0);
    let grad_a = gradient(&state.a)?;
    let grad_a_u_high = weighted_lr(&per_block(&grad_a, p), j_lo, d / p - 1.0, 1.0, high)
        + weighted_lr(&per_block(&state.upsilon, p), j_lo, d / p - 1.0, 1.0, high);
    let theta_high = weighted_lr(&per_block(&state.theta, p), j_lo, d / p - 2.0, 1.0, high);
    Ok(InitialDataReport {
        low_negative_norm: best.0,
        low_argmax_j: best.1,
        grad_a_u_high,
        theta_high,
    })
}
