use num_complex::Complex64;
use rayon::prelude::*;

use super::State;
use crate::error::{Error, Result};
use crate::spectral::SpectralField;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `w = ∇(−Δ)^{-1}(a − div υ)`, i.e. `ŵ = (iξ/|ξ|²)(â − iξ·υ̂)`.
pub fn effective_velocity(state: &State) -> SpectralField {
    let grid = state.grid();
    let d = grid.d;
    let len = grid.len();
    let mut w = SpectralField::zeros(grid, d);
    let modes: Vec<[Complex64; 3]> = (0..len)
        .into_par_iter()
        .map(|idx| {
            let xi = grid.derivative_wavevector(idx);
            let k2: f64 = xi[..d].iter().map(|x| x * x).sum();
            let mut out = [Complex64::new(0.0, 0.0); 3];
            if k2 == 0.0 {
                return out;
            }
            let mut dot = Complex64::new(0.0, 0.0);
            for i in 0..d {
                dot += xi[i] * state.upsilon.coeffs[i * len + idx];
            }
            let scalar = state.a.coeffs[idx] - I * dot;
            for i in 0..d {
                out[i] = I * xi[i] / k2 * scalar;
            }
            out
        })
        .collect();
    w.coeffs
        .par_chunks_mut(len)
        .enumerate()
        .for_each(|(i, comp)| {
            comp.iter_mut().zip(&modes).for_each(|(z, m)| *z = m[i]);
        });
    w
}

/// `υ = w − ∇(−Δ)^{-1}a + 𝒫υ`.
pub fn helmholtz_reconstruct(
    w: &SpectralField,
    a: &SpectralField,
    pu: &SpectralField,
) -> Result<SpectralField> {
    w.ensure_same_grid(a)?;
    w.ensure_same_grid(pu)?;
    let grid = w.grid;
    let d = grid.d;
    if w.comps != d || pu.comps != d || a.comps != 1 {
        return Err(Error::Components {
            expected: d,
            found: if w.comps != d { w.comps } else { pu.comps },
        });
    }
    let len = grid.len();
    let mut out = pu.clone();
    out.coeffs
        .par_chunks_mut(len)
        .enumerate()
        .for_each(|(i, comp)| {
            for (idx, z) in comp.iter_mut().enumerate() {
                let xi = grid.derivative_wavevector(idx);
                let k2: f64 = xi[..d].iter().map(|x| x * x).sum();
                let grad_inv = if k2 == 0.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    I * xi[i] / k2 * a.coeffs[idx]
                };
                *z += w.coeffs[i * len + idx] - grad_inv;
            }
        });
    Ok(out)
}
