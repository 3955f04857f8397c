use std::f64::consts::PI;

use nsf_core::nsf::{
    effective_velocity, helmholtz_reconstruct, nondimensionalize, nonlinear_terms, PhysicalParams,
    PressureLaw, State,
};
use nsf_core::spectral::{
    divergence, forward_transform, leray_project, GridSpec, PhysicalField, SpectralField,
};

fn phys() -> PhysicalParams {
    PhysicalParams {
        lambda: 0.3,
        mu: 1.0,
        kappa: 1.5,
        cv: 1.2,
        rho_bar: 1.0,
        t_bar: 1.0,
    }
}

fn smooth_state(grid: GridSpec, eps: f64) -> State {
    let w = 2.0 * PI / grid.box_len;
    let field = |comps: usize, phase: f64| {
        let f = PhysicalField::from_fn(grid, comps, |x, o| {
            for (c, oc) in o.iter_mut().enumerate() {
                let s = phase + c as f64;
                *oc = eps
                    * ((w * x[0] + s).sin() * (2.0 * w * x[1]).cos()
                        + 0.5 * (w * (x[0] + x[1]) - s).cos());
            }
        });
        let mut h = forward_transform(&f).unwrap();
        h.zero_mean();
        h
    };
    State::new(0.0, field(1, 0.1), field(grid.d, 0.7), field(1, 1.9)).unwrap()
}

#[test]
fn zero_state_gives_zero_terms() {
    let (dp, table) = nondimensionalize(&phys(), &PressureLaw::Perfect { r: 1.0 }).unwrap();
    let grid = GridSpec::new(3, 8, 6.0).unwrap();
    let (f, g, k) = nonlinear_terms(&State::zeros(grid), &table, &dp).unwrap();
    assert_eq!(f.max_abs() + g.max_abs() + k.max_abs(), 0.0);
}

#[test]
fn mass_flux_has_zero_mean() {
    let (dp, table) = nondimensionalize(&phys(), &PressureLaw::Perfect { r: 1.0 }).unwrap();
    let grid = GridSpec::new(2, 32, 10.0).unwrap();
    let (f, _, _) = nonlinear_terms(&smooth_state(grid, 0.2), &table, &dp).unwrap();
    assert!(f.coeffs[0].norm() < 1e-14 * f.max_abs().max(1.0));
}

#[test]
fn terms_are_quadratic_for_small_data() {
    let law = PressureLaw::VanDerWaals {
        alpha: 0.1,
        beta: 1.0,
        delta: 3.0,
    };
    let (dp, table) = nondimensionalize(&phys(), &law).unwrap();
    let grid = GridSpec::new(2, 32, 10.0).unwrap();
    let eps = 1e-4;
    let norm = |s: &State| {
        let (f, g, k) = nonlinear_terms(s, &table, &dp).unwrap();
        (f.l2_norm_sq() + g.l2_norm_sq() + k.l2_norm_sq()).sqrt()
    };
    let ratio = norm(&smooth_state(grid, 2.0 * eps)) / norm(&smooth_state(grid, eps));
    assert!((ratio - 4.0).abs() < 0.01, "ratio {ratio}");
}

#[test]
fn pure_shear_heats_by_dissipation_only() {
    let (dp, table) = nondimensionalize(&phys(), &PressureLaw::Perfect { r: 1.0 }).unwrap();
    let grid = GridSpec::new(2, 32, 2.0 * PI).unwrap();
    let amp = 0.3;
    let v = PhysicalField::from_fn(grid, 2, |x, o| {
        o[0] = 0.0;
        o[1] = amp * x[0].sin();
    });
    let state = State::new(
        0.0,
        SpectralField::zeros(grid, 1),
        forward_transform(&v).unwrap(),
        SpectralField::zeros(grid, 1),
    )
    .unwrap();
    let (f, g, k) = nonlinear_terms(&state, &table, &dp).unwrap();
    assert!(f.max_abs() < 1e-12);
    assert!(g.max_abs() < 1e-12);
    // |D(υ)|² = amp² cos²(x)/2, whose mean is amp²/4
    let mean = k.coeffs[0].re / grid.volume();
    assert!(
        (mean - table.q_mu * amp * amp / 4.0).abs() < 1e-12,
        "mean {mean}"
    );
    assert!(table.q_mu > 0.0 && table.q_lambda >= 0.0);
}

#[test]
fn perfect_gas_coefficients() {
    let (_, table) = nondimensionalize(&phys(), &PressureLaw::Perfect { r: 0.7 }).unwrap();
    for a in [-0.5, -0.1, 0.0, 0.3, 2.0] {
        assert!((table.k1(a) + table.i(a)).abs() < 1e-14);
        assert_eq!(table.kt1(a), table.k2(a));
        assert!(table.k2(a).abs() < 1e-14);
    }
}

#[test]
fn nonlinear_k3_matches_its_derivative() {
    let law = PressureLaw::Polynomial {
        pi0: vec![0.0, 1.0, 0.2],
        pi1: vec![0.0, 1.0, 0.5, 0.1],
    };
    let (_, table) = nondimensionalize(&phys(), &law).unwrap();
    let a = 0.4;
    let h = 1e-4;
    let fd = (table.k3(a + h) - table.k3(a - h)) / (2.0 * h);
    assert!((fd - table.k3_prime(a)).abs() < 1e-7);
    assert_eq!(table.k3(0.0), 0.0);
}

#[test]
fn dimensionless_groups_ignore_viscosity_scale() {
    let law = PressureLaw::Perfect { r: 1.0 };
    let (a, _) = nondimensionalize(&phys(), &law).unwrap();
    let mut scaled = phys();
    scaled.lambda *= 3.0;
    scaled.mu *= 3.0;
    scaled.kappa *= 3.0;
    let (b, _) = nondimensionalize(&scaled, &law).unwrap();
    assert!((a.beta - b.beta).abs() < 1e-14);
    assert!((a.gamma - b.gamma).abs() < 1e-14);
    assert!((a.mu_tilde - b.mu_tilde).abs() < 1e-14);
}

fn helmholtz_ready(grid: GridSpec) -> State {
    let mut s = smooth_state(grid, 1.0);
    for f in [&mut s.a, &mut s.upsilon, &mut s.theta] {
        f.strip_nyquist();
        f.zero_mean();
    }
    s
}

#[test]
fn effective_velocity_is_a_gradient_with_known_divergence() {
    let grid = GridSpec::new(3, 16, 7.0).unwrap();
    let s = helmholtz_ready(grid);
    let w = effective_velocity(&s);
    let div_w = divergence(&w).unwrap();
    let expected = divergence(&s.upsilon).unwrap().sub(&s.a).unwrap();
    assert!(div_w.max_diff(&expected) < 1e-12 * expected.max_abs());
    assert!(leray_project(&w).unwrap().max_abs() < 1e-12 * w.max_abs());
}

#[test]
fn helmholtz_reconstruction_round_trip() {
    for d in [2, 3] {
        let grid = GridSpec::new(d, 16, 9.0).unwrap();
        let s = helmholtz_ready(grid);
        let w = effective_velocity(&s);
        let pu = leray_project(&s.upsilon).unwrap();
        let back = helmholtz_reconstruct(&w, &s.a, &pu).unwrap();
        assert!(back.max_diff(&s.upsilon) < 1e-12 * s.upsilon.max_abs());
    }
}
