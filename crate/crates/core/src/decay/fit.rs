use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::util::bracket;

/// Least-squares power law `value ≈ e^{intercept} ⟨t⟩^{exponent}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub exponent: f64,
    pub intercept: f64,
    pub r2: f64,
    pub window: [f64; 2],
    pub samples: usize,
}

pub const MIN_SAMPLES: usize = 6;

/// Fits `log value` against `log⟨t⟩` over the samples with `t` in `window`.
pub fn fit_decay(series: &[(f64, f64)], window: [f64; 2]) -> Result<DecayFit> {
    if !(window[0] < window[1]) {
        return Err(Error::param("window", format!("{window:?} is empty")));
    }
    let pts: Vec<(f64, f64)> = series
        .iter()
        .filter(|(t, _)| *t >= window[0] && *t <= window[1])
        .copied()
        .collect();
    if pts.len() < MIN_SAMPLES {
        return Err(Error::NotEnoughSamples {
            needed: MIN_SAMPLES,
            have: pts.len(),
        });
    }
    if let Some((t, v)) = pts.iter().find(|(_, v)| !(*v > 0.0 && v.is_finite())) {
        return Err(Error::param(
            "series",
            format!("value {v} at t = {t} is not positive"),
        ));
    }
    let xs: Vec<f64> = pts.iter().map(|(t, _)| bracket(*t).ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|(_, v)| v.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::param("series", "all sample times coincide"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    // a flat series leaves only rounding in syy
    let flat = syy <= 1e-24 * n * (1.0 + my * my);
    let r2 = if flat { 1.0 } else { 1.0 - sse / syy };
    Ok(DecayFit {
        exponent: slope,
        intercept,
        r2,
        window,
        samples: pts.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn times() -> Vec<f64> {
        (0..40).map(|k| 0.5 * 1.2f64.powi(k)).collect()
    }

    #[test]
    fn exact_power_law() {
        let s: Vec<_> = times()
            .into_iter()
            .map(|t| (t, 3.0 * bracket(t).powf(-0.75)))
            .collect();
        let f = fit_decay(&s, [1.0, 1000.0]).unwrap();
        assert!((f.exponent + 0.75).abs() < 1e-12);
        assert!((f.intercept - 3f64.ln()).abs() < 1e-12);
        assert!((f.r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_series_has_zero_slope() {
        let s: Vec<_> = times().into_iter().map(|t| (t, 2.0)).collect();
        let f = fit_decay(&s, [1.0, 100.0]).unwrap();
        assert!(f.exponent.abs() < 1e-12);
        assert_eq!(f.r2, 1.0);
    }

    #[test]
    fn heat_kernel_approaches_three_quarters() {
        // ‖e^{tΔ}u0‖_{L²} for a unit Gaussian in 3-d is ∝ (1 + 2t)^{-3/4}
        let s: Vec<_> = times()
            .into_iter()
            .map(|t| (t, (1.0 + 2.0 * t).powf(-0.75)))
            .collect();
        let f = fit_decay(&s, [100.0, 5000.0]).unwrap();
        assert!((f.exponent + 0.75).abs() < 0.01, "{}", f.exponent);
    }

    #[test]
    fn rejects_short_or_nonpositive_series() {
        let s: Vec<_> = times().into_iter().map(|t| (t, 1.0 / t)).collect();
        assert!(matches!(
            fit_decay(&s, [1.0, 2.0]),
            Err(Error::NotEnoughSamples { .. })
        ));
        let mut bad = s.clone();
        bad[20].1 = 0.0;
        assert!(fit_decay(&bad, [0.1, 1e6]).is_err());
    }
}
