//! Grid-free linear evolution of radial data: block energies are radial
//! integrals of mode energies, so there is no box and no frequency floor.

use std::f64::consts::PI;

use once_cell::sync::Lazy;
use rayon::prelude::*;

use super::{DecayParams, InitialDataSpec, InitialKind};
use crate::besov::BlockNormRecord;
use crate::error::{Error, Result};
use crate::linear::{mode_semigroup, DimensionlessParams};
use crate::quadrature::gauss_legendre;
use crate::spectral::PROFILE;

const PANELS: usize = 8;
static NODES: Lazy<(Vec<f64>, Vec<f64>)> = Lazy::new(|| gauss_legendre(32));

/// Radial data description for [`radial_block_record`].
#[derive(Debug, Clone, PartialEq)]
pub struct RadialData {
    pub spec: InitialDataSpec,
    pub decay: DecayParams,
}

impl RadialData {
    /// Direction-averaged energies of `(a, υ, θ)` at `(ϱ, t)`.
    fn energies(&self, rho: f64, t: f64, params: &DimensionlessParams) -> Result<[f64; 3]> {
        let g = self.spec.profile(rho, &self.decay);
        if g == 0.0 {
            return Ok([0.0; 3]);
        }
        let d = self.decay.d as f64;
        let (m, transverse) = mode_semigroup(rho, t, params)?;
        let row = |r: usize| match self.spec.kind {
            // same real profile in a and θ: those columns add coherently;
            // the longitudinal share ω·e of the velocity direction has mean
            // square 1/d and averages out of the cross terms
            InitialKind::GaussianBump => (m[(r, 0)] + m[(r, 2)]).powi(2) + m[(r, 1)].powi(2) / d,
            // independent phases: energies add
            InitialKind::PowerProfile => {
                m[(r, 0)].powi(2) + m[(r, 1)].powi(2) / d + m[(r, 2)].powi(2)
            }
        };
        let g2 = g * g;
        Ok([
            g2 * row(0),
            g2 * (row(1) + (d - 1.0) / d * transverse * transverse),
            g2 * row(2),
        ])
    }
}

fn sphere_area(d: usize) -> f64 {
    match d {
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        _ => unreachable!("validated dimension"),
    }
}

/// Block `L²` norms of `E(t)U0` for radial data on the whole space, for
/// every `j` in `j_lo..=j_hi` and every time, stored under `a`, `u`, `theta`.
pub fn radial_block_record(
    data: &RadialData,
    params: &DimensionlessParams,
    times: &[f64],
    j_lo: i32,
    j_hi: i32,
) -> Result<BlockNormRecord> {
    data.spec.validate()?;
    data.decay.validate()?;
    if j_lo > j_hi {
        return Err(Error::param(
            "j",
            format!("empty block range {j_lo}..={j_hi}"),
        ));
    }
    let d = data.decay.d;
    let (x, w) = &*NODES;
    let pref = sphere_area(d) / (2.0 * PI).powi(d as i32);
    // (block, node radius, node weight including the radial measure)
    let mut nodes = Vec::new();
    for j in j_lo..=j_hi {
        let a = PROFILE.inner * 2f64.powi(j);
        let b = 2.0 * PROFILE.outer * 2f64.powi(j);
        let h = (b - a) / PANELS as f64;
        for k in 0..PANELS {
            let mid = a + (k as f64 + 0.5) * h;
            for (xi, wi) in x.iter().zip(w) {
                let rho = mid + 0.5 * h * xi;
                let phi = PROFILE.block_weight(j, rho);
                nodes.push((
                    j,
                    rho,
                    0.5 * h * wi * pref * rho.powi(d as i32 - 1) * phi * phi,
                ));
            }
        }
    }
    let nb = (j_hi - j_lo + 1) as usize;
    let per_time: Vec<Vec<[f64; 3]>> = times
        .par_iter()
        .map(|&t| {
            let mut acc = vec![[0.0; 3]; nb];
            for &(j, rho, weight) in &nodes {
                let e = data.energies(rho, t, params)?;
                let slot = &mut acc[(j - j_lo) as usize];
                for c in 0..3 {
                    slot[c] += weight * e[c];
                }
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let mut rec = BlockNormRecord::new(j_lo, j_hi);
    for (&t, acc) in times.iter().zip(&per_time) {
        rec.begin_time(t)?;
        for (c, name) in ["a", "u", "theta"].iter().enumerate() {
            rec.insert(name, 2.0, acc.iter().map(|e| e[c].sqrt()).collect())?;
        }
    }
    Ok(rec)
}
