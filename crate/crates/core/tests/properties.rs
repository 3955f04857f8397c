use nalgebra::Vector3;
use nsf_core::decay::fit_decay;
use nsf_core::linear::mode_semigroup;
use nsf_core::spectral::{forward_transform, inverse_transform, leray_project, PROFILE};
use nsf_core::{DimensionlessParams, GridSpec, PhysicalField};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = DimensionlessParams> {
    (0.05f64..5.0, 0.0f64..3.0, 0.05f64..=1.0)
        .prop_map(|(b, g, m)| DimensionlessParams::new(b, g, m).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dyadic_blocks_sum_to_one(lr in -20.0f64..20.0) {
        let r = lr.exp2();
        let sum: f64 = (-40..=40).map(|j| PROFILE.block_weight(j, r)).sum();
        prop_assert!((sum - 1.0).abs() < 1e-12, "sum {sum} at r = {r}");
    }

    #[test]
    fn low_cutoff_plus_high_blocks_is_one(lr in -8.0f64..8.0, j0 in -5i32..5) {
        // ψ(2^{-j0} r) sums the blocks below j0
        let r = lr.exp2();
        let high: f64 = (j0..=40).map(|j| PROFILE.block_weight(j, r)).sum();
        prop_assert!((PROFILE.low_weight(j0, r) + high - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fit_recovers_bracket_power_law(e in -3.0f64..0.0, c in 1e-3f64..1e3) {
        let series: Vec<(f64, f64)> = (0..30)
            .map(|k| {
                let t = 0.3 * 1.3f64.powi(k);
                (t, c * (1.0 + t * t).powf(e / 2.0))
            })
            .collect();
        let f = fit_decay(&series, [1.0, 1e3]).unwrap();
        prop_assert!((f.exponent - e).abs() < 1e-9);
        prop_assert!((f.intercept - c.ln()).abs() < 1e-8);
    }

    #[test]
    fn mode_semigroup_is_contractive(p in params(), rho in 0.0f64..8.0, t in 0.0f64..20.0,
                                     v in prop::array::uniform3(-1.0f64..1.0)) {
        let v = Vector3::from(v);
        let (m, transverse) = mode_semigroup(rho, t, &p).unwrap();
        prop_assert!((m * v).norm() <= v.norm() * (1.0 + 1e-12));
        prop_assert!((0.0..=1.0).contains(&transverse));
    }

    #[test]
    fn mode_semigroup_composes(p in params(), rho in 0.0f64..4.0, s in 0.0f64..3.0, t in 0.0f64..3.0) {
        let (a, _) = mode_semigroup(rho, s, &p).unwrap();
        let (b, _) = mode_semigroup(rho, t, &p).unwrap();
        let (c, _) = mode_semigroup(rho, s + t, &p).unwrap();
        prop_assert!((a * b - c).abs().max() < 1e-10);
    }

    #[test]
    fn transform_round_trip(values in prop::collection::vec(-10.0f64..10.0, 2 * 64)) {
        let grid = GridSpec::new(2, 8, 5.0).unwrap();
        let f = PhysicalField::from_values(grid, 2, values).unwrap();
        let g = inverse_transform(&forward_transform(&f).unwrap());
        let err = f.values.iter().zip(&g.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(err < 1e-12, "round trip error {err}");
    }

    #[test]
    fn leray_projection_is_idempotent(values in prop::collection::vec(-1.0f64..1.0, 2 * 64)) {
        let grid = GridSpec::new(2, 8, 3.0).unwrap();
        let u = forward_transform(&PhysicalField::from_values(grid, 2, values).unwrap()).unwrap();
        let p = leray_project(&u).unwrap();
        let pp = leray_project(&p).unwrap();
        prop_assert!(p.max_diff(&pp) < 1e-13);
        prop_assert!(p.l2_norm_sq() <= u.l2_norm_sq() * (1.0 + 1e-12));
    }
}
