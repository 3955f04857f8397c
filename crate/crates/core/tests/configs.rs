use nsf_core::decay::{ExperimentConfig, Mode};
use nsf_core::nsf::{check_stability, nondimensionalize};

fn check(src: &str) -> ExperimentConfig {
    let cfg = ExperimentConfig::from_toml_str(src).unwrap();
    cfg.grid_spec().unwrap();
    cfg.decay_params().unwrap();
    cfg.initial_data.validate().unwrap();
    let phys = cfg.physics.physical();
    check_stability(&phys, &cfg.physics.pressure).unwrap();
    nondimensionalize(&phys, &cfg.physics.pressure).unwrap();
    cfg
}

#[test]
fn shipped_configs_are_valid() {
    let radial = check(include_str!("../../../configs/linear_radial.toml"));
    assert_eq!(radial.solver.mode, Mode::Radial);
    let desk = check(include_str!("../../../configs/nonlinear_desk.toml"));
    assert_eq!(desk.solver.mode, Mode::Nonlinear);
    let vdw = check(include_str!("../../../configs/vdw_small.toml"));
    assert_eq!(vdw.solver.mode, Mode::Both);
}

#[test]
fn unknown_keys_are_rejected() {
    let src =
        include_str!("../../../configs/linear_radial.toml").replace("[grid]", "[grid]\nnx = 3");
    assert!(ExperimentConfig::from_toml_str(&src).is_err());
}
