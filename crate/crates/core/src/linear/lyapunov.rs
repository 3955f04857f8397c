use nalgebra::{Matrix3, SymmetricEigen};
use serde::Serialize;

use super::{expm3, generator, op_norm, spectral_abscissa, DimensionlessParams};
use crate::error::{Error, Result};

/// Constants of the Lyapunov functional
/// `|(A,Ω,Θ)|² + K(|ϱA|² − 2ϱ Re(AΩ̄))` and the decay rate it certifies.
#[derive(Debug, Clone, Serialize)]
pub struct LyapunovData {
    pub beta: f64,
    pub gamma: f64,
    pub beta_tilde: f64,
    #[serde(rename = "K")]
    pub k: f64,
    /// Weight actually used in the functional (`K`, or `K/2` when `γ = 0`).
    pub functional_weight: f64,
    #[serde(rename = "C0")]
    pub c0_equiv: f64,
    pub c0: f64,
    pub rho0: f64,
    pub minimizing_rho: f64,
    /// Closed-form rate from the Young-inequality chain.
    pub c0_young: f64,
    /// Rate obtained with the diagonal dissipation `β̃ϱ²diag(2/(1+γ²), γ²/(1+γ²), 2)`.
    pub c0_diagonal_form: f64,
    /// `inf −abscissa(ϱ)/ϱ²` over the same frequency range.
    pub sharp_rate: f64,
}

/// Result of [`constructive_rate`].
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RateReport {
    pub c0: f64,
    pub minimizing_rho: f64,
    pub c0_young: f64,
    pub c0_diagonal_form: f64,
    pub sharp_rate: f64,
}

/// `G(ϱ)` such that the functional equals `vᴴ G v`.
pub fn lyapunov_form(rho: f64, weight: f64) -> Matrix3<f64> {
    Matrix3::new(
        1.0 + weight * rho * rho,
        -weight * rho,
        0.0,
        -weight * rho,
        1.0,
        0.0,
        0.0,
        0.0,
        1.0,
    )
}

fn k_of(params: &DimensionlessParams) -> f64 {
    params.beta_tilde() / (1.0 + params.gamma * params.gamma)
}

fn weight_of(params: &DimensionlessParams) -> f64 {
    let k = k_of(params);
    if params.gamma == 0.0 {
        0.5 * k
    } else {
        k
    }
}

fn sym_eigs(m: &Matrix3<f64>) -> (f64, f64) {
    let e = SymmetricEigen::new(*m).eigenvalues;
    (e.min(), e.max())
}

/// Extreme eigenvalues of `G^{-1/2} D G^{-1/2}` through a Cholesky factor.
fn relative_eigs(g: &Matrix3<f64>, d: &Matrix3<f64>) -> (f64, f64) {
    let l = g
        .cholesky()
        .expect("Lyapunov form is positive definite")
        .l();
    let li = l.try_inverse().expect("triangular factor is invertible");
    let m = li * d * li.transpose();
    sym_eigs(&(0.5 * (m + m.transpose())))
}

/// `C0 = max_{0≤ϱ≤ϱ0} max(λ_max, 1/λ_min)` of `G(ϱ)` against
/// `|(A, ϱA, Ω, Θ)|²`.
fn equivalence_constant(weight: f64, rho0: f64) -> f64 {
    let n = 257;
    (0..n)
        .map(|i| {
            let rho = rho0 * i as f64 / (n - 1) as f64;
            let s = 1.0 / (1.0 + rho * rho).sqrt();
            let scale = Matrix3::from_diagonal(&nalgebra::Vector3::new(s, 1.0, 1.0));
            let m = scale * lyapunov_form(rho, weight) * scale;
            let (lo, hi) = sym_eigs(&m);
            hi.max(1.0 / lo)
        })
        .fold(1.0, f64::max)
}

/// `(β̃, K, weight, C0)` for the given parameters.
pub fn lyapunov_constants(params: &DimensionlessParams, rho0: f64) -> Result<(f64, f64, f64, f64)> {
    params.validate()?;
    check_rho0(rho0)?;
    let w = weight_of(params);
    Ok((
        params.beta_tilde(),
        k_of(params),
        w,
        equivalence_constant(w, rho0),
    ))
}

fn check_rho0(rho0: f64) -> Result<()> {
    if !(rho0 > 0.0 && rho0.is_finite()) {
        return Err(Error::param("rho0", format!("{rho0} is not positive")));
    }
    Ok(())
}

/// `λ_min(G^{-1/2} D G^{-1/2}) / ϱ²` with `D = −(GL + LᵀG)` the exact
/// dissipation of the functional along the flow.
fn exact_rate_at(params: &DimensionlessParams, weight: f64, rho: f64) -> f64 {
    if rho == 0.0 {
        // small-ϱ limit of D/ϱ², with G(0) = I
        let (g, b) = (params.gamma, params.beta);
        let d0 = Matrix3::new(
            2.0 * weight,
            0.0,
            weight * g,
            0.0,
            2.0 - 2.0 * weight,
            0.0,
            weight * g,
            0.0,
            2.0 * b,
        );
        return sym_eigs(&d0).0;
    }
    let g = lyapunov_form(rho, weight);
    let l = generator(rho, params);
    let d = -(g * l + l.transpose() * g);
    relative_eigs(&g, &d).0 / (rho * rho)
}

fn diagonal_form_rate_at(params: &DimensionlessParams, weight: f64, rho: f64) -> f64 {
    let bt = params.beta_tilde();
    let g2 = params.gamma * params.gamma;
    let d = Matrix3::from_diagonal(&nalgebra::Vector3::new(
        bt * 2.0 / (1.0 + g2),
        bt * g2 / (1.0 + g2),
        2.0 * bt,
    ));
    relative_eigs(&lyapunov_form(rho, weight), &d).0
}

/// 64-point geometric frequency grid on `[10^{-3} ϱ0, ϱ0]`.
pub fn rate_grid(rho0: f64) -> Vec<f64> {
    (0..64)
        .map(|i| rho0 * 10f64.powf(-3.0 + 3.0 * i as f64 / 63.0))
        .collect()
}

/// Golden-section refinement of a scalar minimum inside `[a, b]`.
fn refine_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..80 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    if f1 < f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Best rate `c0` supported by the functional on `0 ≤ ϱ ≤ ϱ0`, plus the
/// comparison rates.
pub fn constructive_rate(params: &DimensionlessParams, rho0: f64) -> Result<RateReport> {
    params.validate()?;
    check_rho0(rho0)?;
    let w = weight_of(params);
    let grid = rate_grid(rho0);
    let f = |rho: f64| exact_rate_at(params, w, rho);
    let mut best = (0.0, f(0.0));
    let mut best_i = None;
    for (i, &rho) in grid.iter().enumerate() {
        let v = f(rho);
        if v < best.1 {
            best = (rho, v);
            best_i = Some(i);
        }
    }
    if let Some(i) = best_i {
        let lo = if i == 0 { 0.0 } else { grid[i - 1] };
        let hi = grid[(i + 1).min(grid.len() - 1)];
        let refined = refine_min(f, lo.max(1e-12), hi);
        if refined.1 < best.1 {
            best = refined;
        }
    }
    if !(best.1 > 0.0) {
        return Err(Error::param(
            "beta",
            format!("Lyapunov functional certifies no decay (rate {})", best.1),
        ));
    }

    let bt = params.beta_tilde();
    let g2 = params.gamma * params.gamma;
    let coeff_min = (1.0 / (1.0 + g2))
        .min(2.0 * g2 / (1.0 + g2))
        .min((2.0 + g2) / (1.0 + g2));
    let kr2 = w * rho0 * rho0;
    let lam_max = (2.0 + kr2 + (kr2 * kr2 + 4.0 * w * w * rho0 * rho0).sqrt()) / 2.0;
    let c0_young = bt * coeff_min / lam_max;

    let c0_diagonal_form = std::iter::once(0.0)
        .chain(grid.iter().copied())
        .map(|rho| diagonal_form_rate_at(params, w, rho))
        .fold(f64::INFINITY, f64::min);

    let sharp_rate = grid
        .iter()
        .map(|&rho| -spectral_abscissa(rho, params).expect("valid rho") / (rho * rho))
        .fold(f64::INFINITY, f64::min);

    Ok(RateReport {
        c0: best.1,
        minimizing_rho: best.0,
        c0_young,
        c0_diagonal_form,
        sharp_rate,
    })
}

impl LyapunovData {
    pub fn compute(params: &DimensionlessParams, rho0: f64) -> Result<Self> {
        let (beta_tilde, k, w, c0_equiv) = lyapunov_constants(params, rho0)?;
        let rate = constructive_rate(params, rho0)?;
        Ok(LyapunovData {
            beta: params.beta,
            gamma: params.gamma,
            beta_tilde,
            k,
            functional_weight: w,
            c0_equiv,
            c0: rate.c0,
            rho0,
            minimizing_rho: rate.minimizing_rho,
            c0_young: rate.c0_young,
            c0_diagonal_form: rate.c0_diagonal_form,
            sharp_rate: rate.sharp_rate,
        })
    }

    /// `√cond(G(ϱ))`.
    pub fn certificate_prefactor(&self, rho: f64) -> f64 {
        let (lo, hi) = sym_eigs(&lyapunov_form(rho, self.functional_weight));
        (hi / lo).sqrt()
    }

    /// `√cond(G(ϱ)) e^{−(c0/2)ϱ²t}`.
    pub fn certified_bound(&self, rho: f64, t: f64) -> f64 {
        self.certificate_prefactor(rho) * (-0.5 * self.c0 * rho * rho * t).exp()
    }
}

/// Number of `(ϱ, t)` pairs where `‖exp(tL(ϱ))‖₂` exceeds the certified
/// bound by more than `tol`, and the largest excess seen. Times are
/// `t_k = (50/ϱ²)·k/(n_t − 1)`.
pub fn certificate_violations(
    params: &DimensionlessParams,
    data: &LyapunovData,
    rhos: &[f64],
    n_t: usize,
    tol: f64,
) -> (usize, f64) {
    let mut count = 0;
    let mut worst = f64::NEG_INFINITY;
    for &rho in rhos {
        let l = generator(rho, params);
        for k in 0..n_t {
            let t = 50.0 / (rho * rho) * k as f64 / (n_t.max(2) - 1) as f64;
            let excess = op_norm(&expm3(&(l * t))) - data.certified_bound(rho, t);
            worst = worst.max(excess);
            if excess > tol {
                count += 1;
            }
        }
    }
    (count, worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_examples() {
        let p = DimensionlessParams::new(1.0, 1.0, 0.5).unwrap();
        let (bt, k, w, c0) = lyapunov_constants(&p, 1.0).unwrap();
        assert_eq!((bt, k, w), (1.0, 0.5, 0.5));
        assert!(c0 >= 1.0);
        let p = DimensionlessParams::new(0.4, 0.0, 0.5).unwrap();
        let (bt, k, w, _) = lyapunov_constants(&p, 1.0).unwrap();
        assert_eq!((bt, k, w), (0.4, 0.4, 0.2));
    }

    #[test]
    fn form_is_positive_definite() {
        for k in [0.1, 0.5, 1.0] {
            for rho in [0.1, 1.0, 10.0] {
                let g = lyapunov_form(rho, k);
                let det2 = g[(0, 0)] * g[(1, 1)] - g[(0, 1)] * g[(1, 0)];
                assert!((det2 - (1.0 + k * (1.0 - k) * rho * rho)).abs() < 1e-12 * det2);
                assert!(sym_eigs(&g).0 > 0.0);
            }
        }
    }

    #[test]
    fn diagonal_form_local_rate_one_half() {
        let p = DimensionlessParams::new(1.0, 1.0, 0.5).unwrap();
        assert!((diagonal_form_rate_at(&p, 0.5, 0.0) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn rates_match_reference_scan() {
        // independent dense scan of the exact dissipation quotient
        for (b, g, expect) in [(1.0, 1.0, 0.482), (0.5, 2.0, 0.14), (2.0, 1.0, 0.523)] {
            let p = DimensionlessParams::new(b, g, 0.5).unwrap();
            let rep = constructive_rate(&p, 1.0).unwrap();
            assert!((rep.c0 - expect).abs() < 0.01, "{b} {g}: {}", rep.c0);
            assert!(rep.c0 <= 2.0 * rep.sharp_rate);
            assert!(rep.c0_young <= rep.c0);
        }
    }

    #[test]
    fn gamma_zero_is_total() {
        let p = DimensionlessParams::new(1.0, 0.0, 0.5).unwrap();
        let data = LyapunovData::compute(&p, 1.0).unwrap();
        assert!(data.c0 > 0.0);
        let (count, _) = certificate_violations(&p, &data, &rate_grid(1.0), 20, 1e-9);
        assert_eq!(count, 0);
    }
}
