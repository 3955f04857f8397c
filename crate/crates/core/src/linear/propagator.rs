use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use rayon::prelude::*;

use super::{expm3, generator, DimensionlessParams};
use crate::error::Result;
use crate::nsf::State;
use crate::spectral::GridSpec;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `exp(tL(ϱ))` and `e^{−μ̃ϱ²t}` for every integer `|k|²` on a grid.
#[derive(Debug, Clone)]
pub struct ModeExpCache {
    pub grid: GridSpec,
    pub t: f64,
    mats: Vec<Matrix3<f64>>,
    transverse: Vec<f64>,
}

impl ModeExpCache {
    pub fn new(grid: GridSpec, params: &DimensionlessParams, t: f64) -> Self {
        let half = grid.n / 2;
        let max_m2 = grid.d * half * half;
        let dxi = grid.dxi();
        let (mats, transverse): (Vec<_>, Vec<_>) = (0..=max_m2)
            .into_par_iter()
            .map(|m2| {
                let rho = (m2 as f64).sqrt() * dxi;
                (
                    expm3(&(generator(rho, params) * t)),
                    (-params.mu_tilde * rho * rho * t).exp(),
                )
            })
            .unzip();
        ModeExpCache {
            grid,
            t,
            mats,
            transverse,
        }
    }

    /// Advances `state` by the cached time; the time stamp moves with it.
    pub fn propagate(&self, state: &State) -> State {
        let grid = self.grid;
        debug_assert_eq!(state.grid(), grid);
        let d = grid.d;
        let mut out = state.map_modes(|idx, v| {
            let k = grid.derivative_mode(idx);
            let m2 = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as usize;
            if m2 == 0 {
                return;
            }
            let norm = (m2 as f64).sqrt();
            let dir = [k[0] as f64 / norm, k[1] as f64 / norm, k[2] as f64 / norm];
            let mut dot = Complex64::new(0.0, 0.0);
            for i in 0..d {
                dot += dir[i] * v[1 + i];
            }
            let omega = I * dot;
            let m = &self.mats[m2];
            let re = m * Vector3::new(v[0].re, omega.re, v[4].re);
            let im = m * Vector3::new(v[0].im, omega.im, v[4].im);
            let f = self.transverse[m2];
            let omega_new = Complex64::new(re[1], im[1]);
            for i in 0..d {
                let transverse = v[1 + i] - dir[i] * dot;
                v[1 + i] = -I * dir[i] * omega_new + f * transverse;
            }
            v[0] = Complex64::new(re[0], im[0]);
            v[4] = Complex64::new(re[2], im[2]);
        });
        out.t = state.t + self.t;
        out
    }
}

/// Exact linear evolution `E(t)U0`.
pub fn apply_semigroup(u0: &State, t: f64, params: &DimensionlessParams) -> Result<State> {
    params.validate()?;
    if !(t >= 0.0 && t.is_finite()) {
        return Err(crate::error::Error::param(
            "t",
            format!("{t} is not a nonnegative time"),
        ));
    }
    Ok(ModeExpCache::new(u0.grid(), params, t).propagate(u0))
}
