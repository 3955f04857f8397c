use nsf_core::linear::apply_semigroup;
use nsf_core::linear::DimensionlessParams;
use nsf_core::nsf::{nondimensionalize, CoefficientTable, PhysicalParams, PressureLaw, State};
use nsf_core::solver::{
    integrate, read_checkpoint, write_checkpoint, RecordSpec, Scheme, SolverConfig, Stepper,
};
use nsf_core::spectral::{forward_transform, GridSpec, PhysicalField};

fn setup() -> (DimensionlessParams, CoefficientTable) {
    let phys = PhysicalParams {
        lambda: 0.5,
        mu: 1.0,
        kappa: 1.5,
        cv: 1.0,
        rho_bar: 1.0,
        t_bar: 1.0,
    };
    nondimensionalize(&phys, &PressureLaw::Perfect { r: 1.0 }).unwrap()
}

fn bump(grid: GridSpec, eps: f64) -> State {
    let l = grid.box_len;
    let g = |x: [f64; 3], shift: f64| {
        let r2: f64 = (0..grid.d).map(|i| (x[i] - 0.5 * l - shift).powi(2)).sum();
        eps * (-r2 / 2.0).exp()
    };
    let a = PhysicalField::from_fn(grid, 1, |x, o| o[0] = g(x, 0.0));
    let v = PhysicalField::from_fn(grid, grid.d, |x, o| {
        for (i, oi) in o.iter_mut().enumerate() {
            *oi = g(x, 0.3 * i as f64) * if i == 0 { 1.0 } else { -0.5 };
        }
    });
    let th = PhysicalField::from_fn(grid, 1, |x, o| o[0] = 0.5 * g(x, -0.2));
    let mut s = State::new(
        0.0,
        forward_transform(&a).unwrap(),
        forward_transform(&v).unwrap(),
        forward_transform(&th).unwrap(),
    )
    .unwrap();
    s.a.zero_mean();
    s.upsilon.zero_mean();
    s.theta.zero_mean();
    s
}

#[test]
fn linear_run_matches_the_exact_semigroup() {
    let (dp, table) = setup();
    let grid = GridSpec::new(2, 32, 16.0).unwrap();
    let u0 = bump(grid, 0.1);
    let mut cfg = SolverConfig::new(0.07, 3.0, Scheme::IfRk4);
    cfg.nonlinear = false;
    let out = integrate(
        &u0,
        &cfg,
        &dp,
        &table,
        &RecordSpec::for_grid(&grid, 2.0),
        false,
    )
    .unwrap();
    let exact = apply_semigroup(&u0, 3.0, &dp).unwrap();
    let err = out.final_state.max_diff(&exact) / exact.max_abs();
    assert!(err < 1e-12, "relative error {err}");
    assert_eq!(out.final_state.t, 3.0);
}

#[test]
fn zero_state_stays_zero() {
    let (dp, table) = setup();
    let grid = GridSpec::new(3, 8, 8.0).unwrap();
    let mut st = Stepper::new(&dp, &table, Scheme::IfRk4, true);
    let next = st.step(&State::zeros(grid), 0.1).unwrap();
    assert_eq!(next.max_abs(), 0.0);
    assert!((next.t - 0.1).abs() < 1e-15);
}

fn run_to(
    u0: &State,
    dt: f64,
    scheme: Scheme,
    dp: &DimensionlessParams,
    table: &CoefficientTable,
) -> State {
    let mut st = Stepper::new(dp, table, scheme, true);
    let steps = (0.4 / dt).round() as usize;
    let mut u = u0.clone();
    nsf_core::nsf::dealias_state(&mut u);
    for _ in 0..steps {
        u = st.step(&u, dt).unwrap();
    }
    u
}

fn observed_order(scheme: Scheme, dts: [f64; 3]) -> f64 {
    let (dp, table) = setup();
    let grid = GridSpec::new(2, 32, 16.0).unwrap();
    let u0 = bump(grid, 0.4);
    let u1 = run_to(&u0, dts[0], scheme, &dp, &table);
    let u2 = run_to(&u0, dts[1], scheme, &dp, &table);
    let u3 = run_to(&u0, dts[2], scheme, &dp, &table);
    let e12 = u1.max_diff(&u2);
    let e23 = u2.max_diff(&u3);
    (e12 / e23).log2()
}

#[test]
fn rk2_converges_at_second_order() {
    let order = observed_order(Scheme::IfRk2, [0.1, 0.05, 0.025]);
    assert!((order - 2.0).abs() < 0.3, "observed order {order}");
}

#[test]
fn rk4_converges_at_fourth_order() {
    let order = observed_order(Scheme::IfRk4, [0.2, 0.1, 0.05]);
    assert!((order - 4.0).abs() < 0.5, "observed order {order}");
}

#[test]
fn records_land_on_the_geometric_times() {
    let (dp, table) = setup();
    let grid = GridSpec::new(2, 16, 16.0).unwrap();
    let u0 = bump(grid, 0.05);
    let mut cfg = SolverConfig::new(0.1, 2.0, Scheme::IfRk2);
    cfg.extra_times = vec![1.5];
    let out = integrate(
        &u0,
        &cfg,
        &dp,
        &table,
        &RecordSpec::for_grid(&grid, 2.5),
        false,
    )
    .unwrap();
    let geometric = nsf_core::util::geometric_times(0.1, 1.25, 2.0);
    let bound = 1.0 + (2.0f64 / 0.1).ln() / 1.25f64.ln();
    assert!(geometric.len() as f64 <= bound);
    assert_eq!(out.record.times.len(), 1 + geometric.len() + 1);
    assert_eq!(out.record.times[0], 0.0);
    assert!(out.record.times.contains(&1.5));
    for (t, g) in out.record.times[1..]
        .iter()
        .filter(|&&t| t != 1.5)
        .zip(&geometric)
    {
        assert_eq!(t, g);
    }
    assert!(out.record.has("grad_u", 2.5) && out.record.has("w", 2.0));
    assert_eq!(out.aux.len(), out.record.times.len());
}

#[test]
fn zero_horizon_returns_the_initial_state() {
    let (dp, table) = setup();
    let grid = GridSpec::new(2, 16, 16.0).unwrap();
    let u0 = bump(grid, 0.05);
    let cfg = SolverConfig::new(0.1, 0.0, Scheme::IfRk2);
    let out = integrate(
        &u0,
        &cfg,
        &dp,
        &table,
        &RecordSpec::for_grid(&grid, 2.0),
        false,
    )
    .unwrap();
    assert_eq!(out.steps, 0);
    assert_eq!(out.record.times, vec![0.0]);
    let mut expected = u0.clone();
    nsf_core::nsf::dealias_state(&mut expected);
    assert_eq!(out.final_state, expected);
}

#[test]
fn checkpoint_round_trip_is_bitwise() {
    let grid = GridSpec::new(3, 8, 10.0).unwrap();
    let mut u = bump(grid, 0.3);
    u.t = 1.25;
    let dir = tempfile::tempdir().unwrap();
    let stem = dir.path().join("ckpt/state");
    write_checkpoint(&u, &stem, serde_json::json!({"note": "x"})).unwrap();
    let (back, meta) = read_checkpoint(&stem).unwrap();
    assert_eq!(back, u);
    assert_eq!(meta.components, vec!["a", "u1", "u2", "u3", "theta"]);
    let raw = std::fs::read(stem.with_extension("bin")).unwrap();
    assert_eq!(raw.len(), 5 * 512 * 16);
    let re = f64::from_le_bytes(raw[16..24].try_into().unwrap());
    assert_eq!(re, u.a.coeffs[1].re);
}
