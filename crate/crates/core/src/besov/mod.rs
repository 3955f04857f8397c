//! Homogeneous Besov norms, low/high hybrid restrictions and time-weighted
//! norms built from per-block Lebesgue norms.

mod checks;
mod record;

pub use checks::{
    check_bernstein, check_embedding, check_interpolation, embedding_constant,
    lebesgue_embedding_ratio, BernsteinReport, EmbeddingReport, InterpolationReport,
};
pub use record::{sup_norm, tilde_sup_norm, time_l1_norm, BlockNormRecord};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{block_range, inverse_transform, PhysicalField, SpectralField, PROFILE};
use crate::util::{bracket, det_max_range, det_sum_range};

/// Regularity `s`, Lebesgue exponent `p` and summation exponent `r` of
/// `Ḃ^s_{p,r}`. Infinite exponents are `f64::INFINITY`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesovParams {
    pub s: f64,
    pub p: f64,
    pub r: f64,
}

impl BesovParams {
    pub fn new(s: f64, p: f64, r: f64) -> Result<Self> {
        let bp = BesovParams { s, p, r };
        bp.validate()?;
        Ok(bp)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.s.is_finite() {
            return Err(Error::param("s", "must be finite"));
        }
        if self.p.is_nan() || self.p < 1.0 {
            return Err(Error::param("p", format!("{} is below 1", self.p)));
        }
        if self.r.is_nan() || self.r < 1.0 {
            return Err(Error::param("r", format!("{} is below 1", self.r)));
        }
        Ok(())
    }
}

/// Low/high threshold. High-frequency sums start at `j0 - 1` so that the
/// block `j0` belongs to both parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitConfig {
    pub j0: i32,
}

impl SplitConfig {
    pub fn low(&self) -> FreqRange {
        FreqRange::Low(self.j0)
    }

    pub fn high(&self) -> FreqRange {
        FreqRange::High(self.j0)
    }
}

/// Which blocks a restricted norm sums over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FreqRange {
    Full,
    /// `j ≤ j0`
    Low(i32),
    /// `j ≥ j0 − 1`
    High(i32),
}

impl FreqRange {
    pub fn contains(&self, j: i32) -> bool {
        match *self {
            FreqRange::Full => true,
            FreqRange::Low(j0) => j <= j0,
            FreqRange::High(j0) => j >= j0 - 1,
        }
    }
}

/// Time weights used inside tilde and sup norms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TimeWeight {
    One,
    /// `⟨t⟩^α`
    Bracket(f64),
    /// `t^α`
    Power(f64),
}

impl TimeWeight {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            TimeWeight::One => 1.0,
            TimeWeight::Bracket(alpha) => bracket(t).powf(alpha),
            TimeWeight::Power(alpha) => {
                if alpha == 0.0 {
                    1.0
                } else {
                    t.powf(alpha)
                }
            }
        }
    }
}

/// `(h^d Σ_x |f(x)|^p)^{1/p}`, grid maximum for `p = ∞`. Vector fields use
/// the pointwise Euclidean magnitude.
pub fn lp_norm(f: &PhysicalField, p: f64) -> f64 {
    let len = f.grid.len();
    if p.is_infinite() {
        return det_max_range(len, |i| f.magnitude(i)).max(0.0);
    }
    let hd = f.grid.spacing().powi(f.grid.d as i32);
    let sum = if p == 2.0 {
        det_sum_range(len, |i| f.magnitude(i).powi(2))
    } else {
        det_sum_range(len, |i| f.magnitude(i).powf(p))
    };
    (hd * sum).powf(1.0 / p)
}

/// Per-block weights `φ(2^{-j}|ξ|)` for every grid mode (zero mode excluded).
fn block_weights(u: &SpectralField, j: i32) -> Vec<f64> {
    let grid = u.grid;
    let scale = 2f64.powi(-j);
    (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            if idx == 0 {
                0.0
            } else {
                PROFILE.phi(grid.wavenumber(idx) * scale)
            }
        })
        .collect()
}

/// `‖Δ̇_j u‖_{L^p}`; `p = 2` goes through Parseval without a transform.
pub fn block_lp_norm(u: &SpectralField, j: i32, p: f64) -> f64 {
    let w = block_weights(u, j);
    let len = u.grid.len();
    if p == 2.0 {
        let sum = det_sum_range(u.coeffs.len(), |i| {
            let wi = w[i % len];
            if wi == 0.0 {
                0.0
            } else {
                (u.coeffs[i] * wi).norm_sqr()
            }
        });
        return (sum / u.grid.volume()).sqrt();
    }
    if w.iter().all(|&x| x == 0.0) {
        return 0.0;
    }
    let mut blk = u.clone();
    blk.coeffs
        .par_chunks_mut(len)
        .for_each(|comp| comp.iter_mut().zip(&w).for_each(|(z, &wi)| *z *= wi));
    lp_norm(&inverse_transform(&blk), p)
}

/// Block norms for every `j` in `j_lo..=j_hi`.
pub fn block_lp_norms(u: &SpectralField, p: f64, j_lo: i32, j_hi: i32) -> Vec<f64> {
    (j_lo..=j_hi).map(|j| block_lp_norm(u, j, p)).collect()
}

/// Applies `(Σ_j (2^{js} v_j)^r)^{1/r}` to block values starting at `j_lo`.
pub fn weighted_lr(values: &[f64], j_lo: i32, s: f64, r: f64, range: FreqRange) -> f64 {
    let terms = values
        .iter()
        .enumerate()
        .map(|(i, &v)| (j_lo + i as i32, v))
        .filter(|(j, _)| range.contains(*j))
        .map(|(j, v)| 2f64.powf(j as f64 * s) * v);
    if r.is_infinite() {
        terms.fold(0.0, f64::max)
    } else if r == 1.0 {
        terms.sum()
    } else {
        terms.map(|x| x.powf(r)).sum::<f64>().powf(1.0 / r)
    }
}

/// `‖u‖_{Ḃ^s_{p,r}}` over the grid-representable blocks. The mean is ignored.
pub fn besov_norm(u: &SpectralField, bp: &BesovParams) -> f64 {
    restricted_besov_norm(u, bp, FreqRange::Full)
}

/// Besov norm summed only over the blocks selected by `range`.
pub fn restricted_besov_norm(u: &SpectralField, bp: &BesovParams, range: FreqRange) -> f64 {
    let (lo, hi) = block_range(&u.grid);
    let js: Vec<i32> = (lo..=hi).filter(|&j| range.contains(j)).collect();
    if js.is_empty() {
        return 0.0;
    }
    let values: Vec<f64> = js.iter().map(|&j| block_lp_norm(u, j, bp.p)).collect();
    weighted_lr(&values, js[0], bp.s, bp.r, FreqRange::Full)
}

/// Zero field on the same grid with the same components.
pub fn zeros_like(u: &SpectralField) -> SpectralField {
    SpectralField {
        grid: u.grid,
        comps: u.comps,
        coeffs: vec![Complex64::new(0.0, 0.0); u.coeffs.len()],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{dyadic_block, forward_transform, GridSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_spectral(grid: GridSpec, seed: u64) -> SpectralField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..grid.len())
            .map(|_| rng.random_range(-1.0..1.0))
            .collect();
        let mut u =
            forward_transform(&PhysicalField::from_values(grid, 1, values).unwrap()).unwrap();
        u.zero_mean();
        u
    }

    #[test]
    fn lp_norm_closed_forms() {
        let grid = GridSpec::new(2, 16, 3.0).unwrap();
        assert_eq!(lp_norm(&PhysicalField::zeros(grid, 1), 3.0), 0.0);
        let c = PhysicalField::from_fn(grid, 1, |_, o| o[0] = -2.0);
        for p in [1.0, 2.0, 3.5] {
            assert!((lp_norm(&c, p) - 2.0 * 9f64.powf(1.0 / p)).abs() < 1e-12);
        }
        assert_eq!(lp_norm(&c, f64::INFINITY), 2.0);
        let xi = grid.dxi();
        let s = PhysicalField::from_fn(grid, 1, |x, o| o[0] = (xi * x[0]).sin());
        assert!((lp_norm(&s, 2.0) - (9.0f64 / 2.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn single_mode_lives_in_block_zero() {
        // |ξ| = 1.5 needs 2π k / L = 1.5 on the grid
        let l = 2.0 * std::f64::consts::PI / 1.5 * 2.0;
        let grid = GridSpec::new(2, 16, l).unwrap();
        let xi = 2.0 * grid.dxi();
        assert!((xi - 1.5).abs() < 1e-14);
        let f = PhysicalField::from_fn(grid, 1, |x, o| o[0] = (xi * x[1]).cos());
        let u = forward_transform(&f).unwrap();
        for p in [2.0, 4.0, f64::INFINITY] {
            let expect = lp_norm(&f, p);
            for (s, r) in [(0.0, 1.0), (1.7, 2.0), (-0.4, f64::INFINITY)] {
                let v = besov_norm(&u, &BesovParams::new(s, p, r).unwrap());
                assert!((v - expect).abs() < 1e-12 * expect, "p={p} s={s}");
            }
        }
    }

    #[test]
    fn parseval_path_matches_transform_path() {
        let grid = GridSpec::new(3, 16, 9.0).unwrap();
        let u = random_spectral(grid, 3);
        for j in -1..=2 {
            let fast = block_lp_norm(&u, j, 2.0);
            let slow = lp_norm(&inverse_transform(&dyadic_block(&u, j)), 2.0);
            assert!((fast - slow).abs() < 1e-12 * slow.max(1e-300));
        }
    }

    #[test]
    fn restrictions_and_summation_order() {
        let grid = GridSpec::new(2, 32, 20.0).unwrap();
        let u = random_spectral(grid, 9);
        let full = besov_norm(&u, &BesovParams::new(0.5, 3.0, 1.0).unwrap());
        let bp = BesovParams::new(0.5, 3.0, 1.0).unwrap();
        let low = restricted_besov_norm(&u, &bp, FreqRange::Low(1));
        let high = restricted_besov_norm(&u, &bp, FreqRange::High(1));
        assert!(low + high >= full);
        assert!(full >= low.max(high));
        let r2 = besov_norm(&u, &BesovParams::new(0.5, 3.0, 2.0).unwrap());
        let rinf = besov_norm(&u, &BesovParams::new(0.5, 3.0, f64::INFINITY).unwrap());
        assert!(full >= r2 && r2 >= rinf);
        let doubled = besov_norm(&u.scale(2.0), &bp);
        assert!((doubled - 2.0 * full).abs() < 1e-12 * full);
    }
}
