use serde::Serialize;

use super::DecayParams;
use crate::besov::{
    sup_norm, tilde_sup_norm, time_l1_norm, weighted_lr, BlockNormRecord, FreqRange, TimeWeight,
};
use crate::error::Result;

const LOW: [&str; 3] = ["a", "u", "theta"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FunctionalComponent {
    pub id: String,
    pub value: f64,
    /// For the low-frequency sup: the `s` at which it is attained.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_at_max: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FunctionalTable {
    pub name: String,
    pub t_end: f64,
    pub components: Vec<FunctionalComponent>,
    pub total: f64,
}

impl FunctionalTable {
    fn new(name: &str, rec: &BlockNormRecord, components: Vec<FunctionalComponent>) -> Self {
        let total = components.iter().map(|c| c.value).sum();
        FunctionalTable {
            name: name.into(),
            t_end: rec.times.last().copied().unwrap_or(0.0),
            components,
            total,
        }
    }

    pub fn get(&self, id: &str) -> Option<f64> {
        self.components.iter().find(|c| c.id == id).map(|c| c.value)
    }

    /// Largest relative change of any component against `other`.
    pub fn max_relative_change(&self, other: &FunctionalTable) -> f64 {
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| {
                let scale = a.value.abs().max(b.value.abs());
                if scale == 0.0 {
                    0.0
                } else {
                    (a.value - b.value).abs() / scale
                }
            })
            .fold(0.0, f64::max)
    }
}

fn component(id: &str, value: f64) -> FunctionalComponent {
    FunctionalComponent {
        id: id.into(),
        value,
        s_at_max: None,
    }
}

/// Time series `Σ_z Σ_{j ∈ range} 2^{js} ‖Δ̇_j z(t)‖_{L²}` over the record.
pub fn low_series(
    rec: &BlockNormRecord,
    components: &[&str],
    s: f64,
    range: FreqRange,
) -> Result<Vec<(f64, f64)>> {
    let needs: Vec<(&str, f64)> = components.iter().map(|c| (*c, 2.0)).collect();
    rec.require(&needs)?;
    let tables: Vec<&Vec<Vec<f64>>> = components
        .iter()
        .map(|c| rec.get(c, 2.0))
        .collect::<Result<_>>()?;
    Ok(rec
        .times
        .iter()
        .enumerate()
        .map(|(m, &t)| {
            let v = tables
                .iter()
                .map(|tab| weighted_lr(&tab[m], rec.j_lo, s, 1.0, range))
                .sum();
            (t, v)
        })
        .collect())
}

/// Components of the time-weighted decay functional.
pub fn compute_dp(rec: &BlockNormRecord, dp: &DecayParams) -> Result<FunctionalTable> {
    let p = dp.p;
    rec.require(&[
        ("a", 2.0),
        ("u", 2.0),
        ("theta", 2.0),
        ("a", p),
        ("u", p),
        ("theta", p),
        ("grad_u", p),
    ])?;
    let d = dp.d as f64;
    let low = FreqRange::Low(dp.j0);
    let high = FreqRange::High(dp.j0);
    let alpha = dp.alpha();

    let mut best = (f64::NEG_INFINITY, dp.s_grid[0]);
    for &s in &dp.s_grid {
        let v = sup_norm(rec, &LOW, s, 2.0, TimeWeight::Bracket(dp.low_rate(s)), low)?;
        if v > best.0 {
            best = (v, s);
        }
    }
    let bracket = TimeWeight::Bracket(alpha);
    let components = vec![
        FunctionalComponent {
            id: "low_weighted_sup".into(),
            value: best.0,
            s_at_max: Some(best.1),
        },
        component(
            "a_high",
            tilde_sup_norm(rec, &["a"], d / p, p, bracket, high)?,
        ),
        component(
            "u_high",
            tilde_sup_norm(rec, &["u"], d / p - 1.0, p, bracket, high)?,
        ),
        component(
            "theta_high",
            tilde_sup_norm(rec, &["theta"], d / p - 2.0, p, bracket, high)?,
        ),
        component(
            "grad_u_theta_high",
            tilde_sup_norm(
                rec,
                &["grad_u", "theta"],
                d / p,
                p,
                TimeWeight::Power(alpha),
                high,
            )?,
        ),
    ];
    Ok(FunctionalTable::new("D_p", rec, components))
}

/// Components of the global-existence functional.
pub fn compute_xp(rec: &BlockNormRecord, dp: &DecayParams) -> Result<FunctionalTable> {
    let p = dp.p;
    rec.require(&[
        ("a", 2.0),
        ("u", 2.0),
        ("theta", 2.0),
        ("a", p),
        ("u", p),
        ("theta", p),
    ])?;
    let d = dp.d as f64;
    let low = FreqRange::Low(dp.j0);
    let high = FreqRange::High(dp.j0);
    let one = TimeWeight::One;
    let components = vec![
        component(
            "low_sup",
            tilde_sup_norm(rec, &LOW, 0.5 * d - 1.0, 2.0, one, low)?,
        ),
        component("low_l1", time_l1_norm(rec, &LOW, 0.5 * d + 1.0, 2.0, low)?),
        component(
            "a_high_sup",
            tilde_sup_norm(rec, &["a"], d / p, p, one, high)?,
        ),
        component("a_high_l1", time_l1_norm(rec, &["a"], d / p, p, high)?),
        component(
            "u_high_sup",
            tilde_sup_norm(rec, &["u"], d / p - 1.0, p, one, high)?,
        ),
        component(
            "u_high_l1",
            time_l1_norm(rec, &["u"], d / p + 1.0, p, high)?,
        ),
        component(
            "theta_high_sup",
            tilde_sup_norm(rec, &["theta"], d / p - 2.0, p, one, high)?,
        ),
        component(
            "theta_high_l1",
            time_l1_norm(rec, &["theta"], d / p, p, high)?,
        ),
    ];
    Ok(FunctionalTable::new("X_p", rec, components))
}
