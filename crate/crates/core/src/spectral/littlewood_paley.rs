use num_complex::Complex64;
use rayon::prelude::*;

use super::field::SpectralField;
use super::grid::GridSpec;

/// Radial cutoff `χ(ξ) = ψ(|ξ|)`: identically one on `[0, inner]`, zero on
/// `[outer, ∞)`, and a `C^∞` smooth step in between.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffProfile {
    pub inner: f64,
    pub outer: f64,
}

pub const PROFILE: CutoffProfile = CutoffProfile {
    inner: 0.75,
    outer: 4.0 / 3.0,
};

fn bump_tail(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (-1.0 / x).exp()
    }
}

/// `S(x) = E(x) / (E(x) + E(1 - x))` with `E(x) = exp(-1/x)`.
fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let a = bump_tail(x);
    let b = bump_tail(1.0 - x);
    a / (a + b)
}

impl CutoffProfile {
    /// `ψ(r)`.
    pub fn psi(&self, r: f64) -> f64 {
        if r <= self.inner {
            1.0
        } else if r >= self.outer {
            0.0
        } else {
            smooth_step((self.outer - r) / (self.outer - self.inner))
        }
    }

    /// Annulus profile `φ(r) = ψ(r/2) − ψ(r)`, supported in `[inner, 2·outer]`.
    pub fn phi(&self, r: f64) -> f64 {
        self.psi(0.5 * r) - self.psi(r)
    }

    /// `φ(2^{-j} r)`.
    pub fn block_weight(&self, j: i32, r: f64) -> f64 {
        self.phi(r * 2f64.powi(-j))
    }

    /// `χ(2^{-j} r)`.
    pub fn low_weight(&self, j: i32, r: f64) -> f64 {
        self.psi(r * 2f64.powi(-j))
    }
}

/// Inclusive range of blocks whose annulus meets a nonzero grid mode.
pub fn block_range(grid: &GridSpec) -> (i32, i32) {
    let xi_min = grid.min_wavenumber();
    let xi_max = grid.max_wavenumber();
    let lo = (xi_min / (2.0 * PROFILE.outer)).log2().floor() as i32 + 1;
    let hi = (xi_max / PROFILE.inner).log2().ceil() as i32 - 1;
    (lo, hi)
}

/// Writes `Δ̇_j u` into `out`, which must share the grid and component count.
pub fn dyadic_block_into(u: &SpectralField, j: i32, out: &mut SpectralField) {
    let grid = u.grid;
    let len = grid.len();
    debug_assert_eq!(out.coeffs.len(), u.coeffs.len());
    out.grid = grid;
    out.comps = u.comps;
    let scale = 2f64.powi(-j);
    out.coeffs
        .par_chunks_mut(len)
        .zip(u.coeffs.par_chunks(len))
        .for_each(|(dst, src)| {
            dst.par_iter_mut()
                .zip(src.par_iter())
                .enumerate()
                .for_each(|(idx, (o, &c))| {
                    let w = if idx == 0 {
                        0.0
                    } else {
                        PROFILE.phi(grid.wavenumber(idx) * scale)
                    };
                    *o = if w == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        c * w
                    };
                });
        });
}

/// `Δ̇_j u`: multiplication by `φ(2^{-j}ξ)`. Blocks outside the representable
/// range come back as the zero field.
pub fn dyadic_block(u: &SpectralField, j: i32) -> SpectralField {
    let mut out = SpectralField::zeros(u.grid, u.comps);
    dyadic_block_into(u, j, &mut out);
    out
}

/// `(Ṡ_{j0} u, u − Ṡ_{j0} u)`. The zero mode stays in the low part.
pub fn low_high_split(u: &SpectralField, j0: i32) -> (SpectralField, SpectralField) {
    let grid = u.grid;
    let len = grid.len();
    let scale = 2f64.powi(-j0);
    let weights: Vec<f64> = (0..len)
        .into_par_iter()
        .map(|idx| PROFILE.psi(grid.wavenumber(idx) * scale))
        .collect();
    let mut low = u.clone();
    let mut high = u.clone();
    for c in 0..u.comps {
        let lo = low.component_mut(c);
        lo.par_iter_mut()
            .zip(weights.par_iter())
            .for_each(|(z, &w)| *z *= w);
        let lo = low.component(c).to_vec();
        high.component_mut(c)
            .par_iter_mut()
            .zip(lo.par_iter())
            .for_each(|(z, l)| *z -= l);
    }
    (low, high)
}
