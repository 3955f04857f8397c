//! Numerical checks of the Bernstein, interpolation and embedding
//! inequalities on concrete fields.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::PI;

use super::{block_lp_norms, lp_norm, weighted_lr, BesovParams, FreqRange};
use crate::error::{Error, Result};
use crate::quadrature::gl32;
use crate::spectral::{
    block_range, dyadic_block, forward_transform, gradient, inverse_transform, laplacian, GridSpec,
    PhysicalField, SpectralField, PROFILE,
};
use crate::util::det_sum_range;

#[derive(Debug, Clone, Serialize)]
pub struct BernsteinReport {
    pub j: i32,
    pub p: f64,
    pub trials_used: usize,
    /// Range of `∫|∇f|²|f|^{p−2} / (2^{2j} ∫|f|^p)` over the trials.
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// `p · min_ratio`, the constant in `(p−1)∫|∇f|²|f|^{p−2} ≥ c 2^{2j} ((p−1)/p) ∫|f|^p`.
    pub min_constant: f64,
    /// Worst relative defect of `−∫Δf |f|^{p−2} f = (p−1)∫|∇f|²|f|^{p−2}`.
    pub identity_defect: f64,
}

/// Random real fields supported in the block-`j` annulus.
fn annulus_field(grid: GridSpec, j: i32, rng: &mut ChaCha8Rng) -> SpectralField {
    let values = (0..grid.len())
        .map(|_| rng.random_range(-1.0..1.0))
        .collect();
    let u = forward_transform(&PhysicalField::from_values(grid, 1, values).expect("sized"))
        .expect("finite");
    let mut b = dyadic_block(&u, j);
    b.strip_nyquist();
    b
}

/// Observed constants of the nonlinear Bernstein inequality on `trials`
/// random annulus fields.
pub fn check_bernstein(
    grid: GridSpec,
    j: i32,
    p: f64,
    trials: usize,
    seed: u64,
) -> Result<BernsteinReport> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::param("p", "must lie in (1, ∞)"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = grid.len();
    let mut report = BernsteinReport {
        j,
        p,
        trials_used: 0,
        min_ratio: f64::INFINITY,
        max_ratio: 0.0,
        min_constant: f64::INFINITY,
        identity_defect: 0.0,
    };
    for _ in 0..trials {
        let u = annulus_field(grid, j, &mut rng);
        if u.max_abs() == 0.0 {
            continue;
        }
        let f = inverse_transform(&u);
        let g = inverse_transform(&gradient(&u)?);
        let lap = inverse_transform(&laplacian(&u));
        let pow = |x: f64| if x == 0.0 { 0.0 } else { x.abs().powf(p - 2.0) };
        let grad_term = det_sum_range(len, |i| g.magnitude(i).powi(2) * pow(f.values[i]));
        let mass = det_sum_range(len, |i| f.values[i].abs().powf(p));
        let lap_term = -det_sum_range(len, |i| lap.values[i] * pow(f.values[i]) * f.values[i]);
        if mass == 0.0 || grad_term == 0.0 {
            continue;
        }
        let ratio = grad_term / (4f64.powi(j) * mass);
        report.trials_used += 1;
        report.min_ratio = report.min_ratio.min(ratio);
        report.max_ratio = report.max_ratio.max(ratio);
        let rhs = (p - 1.0) * grad_term;
        report.identity_defect = report
            .identity_defect
            .max((lap_term - rhs).abs() / rhs.abs());
    }
    report.min_constant = p * report.min_ratio;
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct InterpolationReport {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// `‖u‖_{Ḃ^{θσ2+(1−θ)σ1}_{p,∞}} ≤ ‖u‖^{1−θ}_{Ḃ^{σ1}_{p,∞}} ‖u‖^θ_{Ḃ^{σ2}_{p,∞}}`.
pub fn check_interpolation(
    u: &SpectralField,
    sigma1: f64,
    sigma2: f64,
    theta: f64,
    p: f64,
) -> Result<InterpolationReport> {
    if sigma1 == sigma2 {
        return Err(Error::param("sigma2", "must differ from sigma1"));
    }
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::param("theta", "must lie in (0, 1)"));
    }
    let (lo, hi) = block_range(&u.grid);
    let v = block_lp_norms(u, p, lo, hi);
    let norm = |s: f64| weighted_lr(&v, lo, s, f64::INFINITY, FreqRange::Full);
    let lhs = norm(theta * sigma2 + (1.0 - theta) * sigma1);
    let rhs = norm(sigma1).powf(1.0 - theta) * norm(sigma2).powf(theta);
    Ok(InterpolationReport {
        lhs,
        rhs,
        holds: lhs <= rhs * (1.0 + 1e-12),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct EmbeddingReport {
    pub q: f64,
    pub r: f64,
    pub sigma: f64,
    /// `‖u‖_{Ḃ^{−σ}_{r,∞}}`
    pub lhs: f64,
    /// `‖u‖_{L^q}`
    pub rhs: f64,
    pub c_emb: f64,
    pub ratio: f64,
    pub holds: bool,
}

/// `‖u‖_{Ḃ^{−σ}_{r,∞}} ≤ C_emb ‖u‖_{L^q}` with `1/q − 1/r = σ/d` and
/// `C_emb = ‖F^{-1}φ‖_{L^s}`, `1 + 1/r = 1/s + 1/q` (Young).
pub fn check_embedding(u: &SpectralField, sigma: f64, q: f64) -> Result<EmbeddingReport> {
    let d = u.grid.d as f64;
    if sigma <= 0.0 {
        return Err(Error::param("sigma", "must be positive"));
    }
    if !(1.0..2.0).contains(&q) {
        return Err(Error::param("q", "must lie in [1, 2)"));
    }
    let inv_r = 1.0 / q - sigma / d;
    if inv_r < 0.0 {
        return Err(Error::param("sigma", "1/q − σ/d must be nonnegative"));
    }
    let r = if inv_r == 0.0 {
        f64::INFINITY
    } else {
        1.0 / inv_r
    };
    let (lo, hi) = block_range(&u.grid);
    let v = block_lp_norms(u, r, lo, hi);
    let lhs = weighted_lr(&v, lo, -sigma, f64::INFINITY, FreqRange::Full);
    let rhs = lp_norm(&inverse_transform(u), q);
    let c_emb = embedding_constant(u.grid.d, q, r)?;
    let ratio = if rhs > 0.0 { lhs / rhs } else { 0.0 };
    Ok(EmbeddingReport {
        q,
        r,
        sigma,
        lhs,
        rhs,
        c_emb,
        ratio,
        holds: lhs <= c_emb * rhs * (1.0 + 1e-9),
    })
}

/// Radial profile of `F^{-1}φ` at distance `x`.
fn block_kernel(d: usize, x: f64) -> f64 {
    let (a, b) = (PROFILE.inner, 2.0 * PROFILE.outer);
    let panels = 16;
    let h = (b - a) / panels as f64;
    let integrate = |f: &dyn Fn(f64) -> f64| -> f64 {
        (0..panels)
            .map(|i| gl32(&f, a + i as f64 * h, a + (i + 1) as f64 * h))
            .sum()
    };
    match d {
        3 => {
            if x < 1e-8 {
                integrate(&|k| PROFILE.phi(k) * k * k) / (2.0 * PI * PI)
            } else {
                integrate(&|k| PROFILE.phi(k) * k * (k * x).sin()) / (2.0 * PI * PI * x)
            }
        }
        _ => integrate(&|k| PROFILE.phi(k) * libm::j0(k * x) * k) / (2.0 * PI),
    }
}

/// `‖F^{-1}φ‖_{L^s(ℝ^d)}` for the Young exponent `1/s = 1 + 1/r − 1/q`.
pub fn embedding_constant(d: usize, q: f64, r: f64) -> Result<f64> {
    let inv_s = 1.0 + 1.0 / r - 1.0 / q;
    if !(0.0..=1.0).contains(&inv_s) {
        return Err(Error::param("r", "Young exponent outside [1, ∞]"));
    }
    let sphere = if d == 3 { 4.0 * PI } else { 2.0 * PI };
    if inv_s == 0.0 {
        return Ok(block_kernel(d, 0.0).abs());
    }
    if (inv_s - 0.5).abs() < 1e-15 {
        // Plancherel
        let (a, b) = (PROFILE.inner, 2.0 * PROFILE.outer);
        let f = |k: f64| PROFILE.phi(k).powi(2) * k.powi(d as i32 - 1);
        let energy: f64 = (0..16)
            .map(|i| {
                gl32(
                    &f,
                    a + i as f64 * (b - a) / 16.0,
                    a + (i + 1) as f64 * (b - a) / 16.0,
                )
            })
            .sum();
        return Ok((sphere * energy / (2.0 * PI).powi(d as i32)).sqrt());
    }
    let s = 1.0 / inv_s;
    let radius = 120.0;
    let panels = 480;
    let h = radius / panels as f64;
    let f = |x: f64| block_kernel(d, x).abs().powf(s) * x.powi(d as i32 - 1);
    let total: f64 = (0..panels)
        .map(|i| gl32(&f, i as f64 * h, (i + 1) as f64 * h))
        .sum();
    Ok((sphere * total).powf(1.0 / s))
}

/// `‖u‖_{Ḃ^{s−d(1/2−1/p)}_{p,1}} / ‖u‖_{Ḃ^s_{2,1}}`, bounded independently
/// of `u` by the Bernstein embedding for `p ≥ 2`.
pub fn lebesgue_embedding_ratio(u: &SpectralField, s: f64, p: f64) -> Result<f64> {
    let d = u.grid.d as f64;
    let top = super::besov_norm(u, &BesovParams::new(s - d * (0.5 - 1.0 / p), p, 1.0)?);
    let bottom = super::besov_norm(u, &BesovParams::new(s, 2.0, 1.0)?);
    Ok(if bottom > 0.0 { top / bottom } else { 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernstein_p2_within_annulus_bounds() {
        let grid = GridSpec::new(2, 32, 2.0 * PI).unwrap();
        let rep = check_bernstein(grid, 2, 2.0, 6, 1).unwrap();
        assert_eq!(rep.trials_used, 6);
        assert!(rep.min_ratio >= 0.75f64.powi(2) && rep.max_ratio <= (8.0f64 / 3.0).powi(2));
        assert!(rep.identity_defect < 1e-10);
    }

    #[test]
    fn bernstein_p4_identity() {
        // block 0 with L = 2π keeps |k| ≤ 2, so |f|²f∇f stays alias free at n = 32
        let grid = GridSpec::new(2, 32, 2.0 * PI).unwrap();
        let rep = check_bernstein(grid, 0, 4.0, 4, 2).unwrap();
        assert!(rep.identity_defect < 1e-6, "{rep:?}");
        assert!(rep.min_constant > 0.0);
    }

    #[test]
    fn plancherel_constant_matches_quadrature() {
        // s = 2 via Plancherel versus direct radial L² of the kernel
        let exact = embedding_constant(3, 1.0, 2.0).unwrap();
        let h = 120.0 / 480.0;
        let f = |x: f64| block_kernel(3, x).powi(2) * x * x;
        let direct: f64 = (0..480)
            .map(|i| gl32(&f, i as f64 * h, (i + 1) as f64 * h))
            .sum();
        assert!(((4.0 * PI * direct).sqrt() / exact - 1.0).abs() < 1e-6);
    }
}
