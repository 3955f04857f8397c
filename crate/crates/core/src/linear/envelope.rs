use rayon::prelude::*;
use serde::Serialize;

use super::{expm3, generator, op_norm, DimensionlessParams, LyapunovData};
use crate::error::{Error, Result};
use crate::spectral::PROFILE;

/// Operator-norm envelope of the semigroup over one dyadic annulus.
#[derive(Debug, Clone, Serialize)]
pub struct EnvelopeReport {
    pub j: i32,
    pub times: Vec<f64>,
    /// `sup_{ϱ in annulus} ‖exp(tL(ϱ))‖₂` at each time.
    pub envelope: Vec<f64>,
    /// Fitted exponential rate of the envelope on the late half-window.
    pub rate: f64,
    /// `rate / 2^{2j}`.
    pub c: f64,
    /// `c0 / 2`, the reference rate certified by the Lyapunov functional.
    pub c_reference: f64,
    /// `c / c_reference`.
    pub ratio: f64,
    pub within_factor_4: bool,
    pub monotone: bool,
    /// Lower bound `(c0/2)(3·2^j/4)²` that the rate must exceed.
    pub rate_lower_bound: f64,
    /// Pointwise check against the certified bound, only for annuli inside
    /// `[0, ϱ0]`.
    pub certified: Option<bool>,
}

/// Envelope of block `j ≤ j0` over `n_t` times on `[0, 20·4^{−j}]`.
pub fn block_decay_envelope(
    j: i32,
    j0: i32,
    params: &DimensionlessParams,
    data: &LyapunovData,
    n_t: usize,
) -> Result<EnvelopeReport> {
    if j > j0 {
        return Err(Error::param(
            "j",
            format!("block {j} lies above the threshold {j0}"),
        ));
    }
    if n_t < 8 {
        return Err(Error::NotEnoughSamples {
            needed: 8,
            have: n_t,
        });
    }
    let scale = 2f64.powi(j);
    let inner = PROFILE.inner * scale;
    let outer = 2.0 * PROFILE.outer * scale;
    let rhos: Vec<f64> = (0..64)
        .map(|i| inner * (outer / inner).powf(i as f64 / 63.0))
        .collect();
    let horizon = 20.0 / (scale * scale);
    let times: Vec<f64> = (0..n_t)
        .map(|i| horizon * i as f64 / (n_t - 1) as f64)
        .collect();
    let envelope: Vec<f64> = times
        .par_iter()
        .map(|&t| {
            rhos.iter()
                .map(|&rho| op_norm(&expm3(&(generator(rho, params) * t))))
                .fold(0.0, f64::max)
        })
        .collect();

    // least-squares slope of ln(envelope) on t ∈ [horizon/4, horizon]
    let pts: Vec<(f64, f64)> = times
        .iter()
        .zip(&envelope)
        .filter(|(t, _)| **t >= 0.25 * horizon)
        .map(|(&t, &e)| (t, e.ln()))
        .collect();
    let n = pts.len() as f64;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mt) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mt).powi(2)).sum();
    let rate = -sxy / sxx;
    let c = rate / (scale * scale);
    let c_reference = 0.5 * data.c0;
    let ratio = c / c_reference;
    let monotone = envelope.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12));
    let certified = (outer <= data.rho0).then(|| {
        let pref = rhos
            .iter()
            .map(|&r| data.certificate_prefactor(r))
            .fold(0.0, f64::max);
        times
            .iter()
            .zip(&envelope)
            .all(|(&t, &e)| e <= pref * (-c_reference * inner * inner * t).exp() + 1e-9)
    });
    Ok(EnvelopeReport {
        j,
        times,
        envelope,
        rate,
        c,
        c_reference,
        ratio,
        within_factor_4: (0.25..=4.0).contains(&ratio),
        monotone,
        rate_lower_bound: c_reference * inner * inner,
        certified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn envelope_starts_at_one_and_decays() {
        let p = DimensionlessParams::new(1.0, 1.0, 0.5).unwrap();
        let data = LyapunovData::compute(&p, 1.0).unwrap();
        let rep = block_decay_envelope(-2, 0, &p, &data, 41).unwrap();
        assert!((rep.envelope[0] - 1.0).abs() < 1e-14);
        assert!(rep.monotone);
        assert_eq!(rep.certified, Some(true));
        assert!(rep.rate >= rep.rate_lower_bound);
        assert!(block_decay_envelope(1, 0, &p, &data, 41).is_err());
    }
}
