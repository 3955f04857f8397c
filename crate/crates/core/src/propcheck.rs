//! Invariant suites: each check draws seeded random data, measures a
//! defect and compares it with a fixed tolerance.

use std::fmt;
use std::str::FromStr;

use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::besov::{check_bernstein, check_interpolation};
use crate::error::{Error, Result};
use crate::linear::{apply_semigroup, mode_semigroup, DimensionlessParams};
use crate::nsf::{
    effective_velocity, helmholtz_reconstruct, nondimensionalize, PhysicalParams, PressureLaw,
    State,
};
use crate::solver::{Scheme, Stepper};
use crate::spectral::{
    block_range, divergence, dyadic_block, forward_transform, gradient, inverse_transform,
    leray_project, GridSpec, PhysicalField, SpectralField, PROFILE,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Spectral,
    Besov,
    Linear,
    Nsf,
    Solver,
    All,
}

impl Suite {
    pub const EACH: [Suite; 5] = [
        Suite::Spectral,
        Suite::Besov,
        Suite::Linear,
        Suite::Nsf,
        Suite::Solver,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Spectral => "spectral",
            Suite::Besov => "besov",
            Suite::Linear => "linear",
            Suite::Nsf => "nsf",
            Suite::Solver => "solver",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .iter()
            .chain(std::iter::once(&Suite::All))
            .find(|x| x.name() == s)
            .copied()
            .ok_or_else(|| Error::Config(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub suite: Suite,
    pub name: String,
    pub passed: bool,
    /// Measured defect (or ratio, for range checks).
    pub value: f64,
    pub tolerance: String,
}

impl CheckResult {
    fn below(suite: Suite, name: &str, value: f64, tol: f64) -> Self {
        CheckResult {
            suite,
            name: name.into(),
            passed: value.is_finite() && value < tol,
            value,
            tolerance: format!("< {tol:e}"),
        }
    }

    fn within(suite: Suite, name: &str, lo_hi: (f64, f64), range: (f64, f64)) -> Self {
        let (lo, hi) = lo_hi;
        CheckResult {
            suite,
            name: name.into(),
            passed: lo >= range.0 && hi <= range.1,
            value: if lo < range.0 { lo } else { hi },
            tolerance: format!("in [{}, {}]", range.0, range.1),
        }
    }

    fn failed(suite: Suite, name: &str, err: &Error) -> Self {
        CheckResult {
            suite,
            name: name.into(),
            passed: false,
            value: f64::NAN,
            tolerance: format!("error: {err}"),
        }
    }
}

/// Runs one suite (or all of them).
pub fn run_suite(suite: Suite, seed: u64) -> Vec<CheckResult> {
    match suite {
        Suite::All => Suite::EACH
            .iter()
            .flat_map(|s| run_suite(*s, seed))
            .collect(),
        s => {
            let out = match s {
                Suite::Spectral => spectral(seed),
                Suite::Besov => besov(seed),
                Suite::Linear => linear(seed),
                Suite::Nsf => nsf(seed),
                Suite::Solver => solver(seed),
                Suite::All => unreachable!(),
            };
            out.unwrap_or_else(|e| vec![CheckResult::failed(s, "suite setup", &e)])
        }
    }
}

fn random_field(grid: GridSpec, comps: usize, rng: &mut ChaCha8Rng) -> Result<SpectralField> {
    let values = (0..comps * grid.len())
        .map(|_| rng.random_range(-1.0..1.0))
        .collect();
    forward_transform(&PhysicalField::from_values(grid, comps, values)?)
}

fn rel(defect: f64, scale: f64) -> f64 {
    if scale == 0.0 {
        defect
    } else {
        defect / scale
    }
}

fn spectral(seed: u64) -> Result<Vec<CheckResult>> {
    let s = Suite::Spectral;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();

    let mut pu = 0.0f64;
    for _ in 0..1000 {
        let r: f64 = 10f64.powf(rng.random_range(-6.0..6.0));
        let sum: f64 = (-40..=40).map(|j| PROFILE.block_weight(j, r)).sum();
        pu = pu.max((sum - 1.0).abs());
    }
    out.push(CheckResult::below(
        s,
        "partition of unity (radial)",
        pu,
        1e-12,
    ));

    let grid = GridSpec::new(3, 16, 2.0 * std::f64::consts::PI)?;
    let u = random_field(grid, 1, &mut rng)?;
    let (lo, hi) = block_range(&grid);
    let mut sum = SpectralField::zeros(grid, 1);
    for j in lo..=hi {
        sum = sum.add(&dyadic_block(&u, j))?;
    }
    let mut mean_free = u.clone();
    mean_free.zero_mean();
    out.push(CheckResult::below(
        s,
        "partition of unity (grid blocks)",
        rel(sum.max_diff(&mean_free), u.max_abs()),
        1e-12,
    ));

    for d in [2, 3] {
        let grid = GridSpec::new(d, 16, 5.0)?;
        let f = PhysicalField::from_values(
            grid,
            2,
            (0..2 * grid.len())
                .map(|_| rng.random_range(-1.0..1.0))
                .collect(),
        )?;
        let back = inverse_transform(&forward_transform(&f)?);
        let defect = back
            .values
            .iter()
            .zip(&f.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        out.push(CheckResult::below(
            s,
            &format!("transform round trip d={d}"),
            defect,
            1e-12,
        ));

        let v = random_field(grid, d, &mut rng)?;
        let pv = leray_project(&v)?;
        let scale = v.max_abs();
        out.push(CheckResult::below(
            s,
            &format!("Leray idempotent d={d}"),
            rel(leray_project(&pv)?.max_diff(&pv), scale),
            1e-12,
        ));
        out.push(CheckResult::below(
            s,
            &format!("Leray divergence-free d={d}"),
            rel(divergence(&pv)?.max_abs(), scale * grid.nyquist()),
            1e-12,
        ));
        let phi = random_field(grid, 1, &mut rng)?;
        let g = gradient(&phi)?;
        out.push(CheckResult::below(
            s,
            &format!("Leray kills gradients d={d}"),
            rel(leray_project(&g)?.max_abs(), g.max_abs()),
            1e-12,
        ));
    }
    Ok(out)
}

fn besov(seed: u64) -> Result<Vec<CheckResult>> {
    let s = Suite::Besov;
    let mut out = Vec::new();
    let grid = GridSpec::new(2, 64, 64.0)?;
    let rep = check_bernstein(grid, 0, 2.0, 20, seed)?;
    out.push(CheckResult::within(
        s,
        "Bernstein ratio p=2",
        (rep.min_ratio, rep.max_ratio),
        (0.75f64.powi(2), (8.0f64 / 3.0).powi(2)),
    ));
    // block −1 keeps the quartic products below the grid's alias limit,
    // so the discrete sums integrate them exactly
    let rep = check_bernstein(grid, -1, 4.0, 10, seed + 1)?;
    out.push(CheckResult::below(
        s,
        "Bernstein identity p=4",
        rep.identity_defect,
        1e-6,
    ));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let u = random_field(grid, 1, &mut rng)?;
        let s1 = rng.random_range(-2.0..1.0);
        let s2 = s1 + rng.random_range(0.1..3.0);
        let theta = rng.random_range(0.05..0.95);
        let r = check_interpolation(&u, s1, s2, theta, [2.0, 3.0, 4.0][rng.random_range(0..3)])?;
        worst = worst.max(r.lhs / r.rhs);
    }
    out.push(CheckResult {
        suite: s,
        name: "interpolation log-convexity".into(),
        passed: worst <= 1.0 + 1e-12,
        value: worst,
        tolerance: "<= 1".into(),
    });
    Ok(out)
}

fn random_params(rng: &mut ChaCha8Rng) -> Result<DimensionlessParams> {
    DimensionlessParams::new(
        rng.random_range(0.1..3.0),
        rng.random_range(0.0..3.0),
        rng.random_range(0.1..1.0),
    )
}

fn linear(seed: u64) -> Result<Vec<CheckResult>> {
    let s = Suite::Linear;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();

    let mut growth: f64 = 0.0;
    for _ in 0..100 {
        let p = random_params(&mut rng)?;
        let rho = rng.random_range(0.0..5.0);
        let v = Vector3::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        let mut prev = v.norm();
        let mut t = 0.0;
        for _ in 0..20 {
            t += rng.random_range(0.0..2.0);
            let (m, _) = mode_semigroup(rho, t, &p)?;
            let e = (m * v).norm();
            growth = growth.max((e - prev) / v.norm());
            prev = e;
        }
    }
    out.push(CheckResult::below(
        s,
        "mode energy non-increasing",
        growth,
        1e-13,
    ));

    let mut comp: f64 = 0.0;
    for _ in 0..100 {
        let p = random_params(&mut rng)?;
        let rho = rng.random_range(0.0..5.0);
        let (a, b) = (rng.random_range(0.0..3.0), rng.random_range(0.0..3.0));
        let (ma, _) = mode_semigroup(rho, a, &p)?;
        let (mb, _) = mode_semigroup(rho, b, &p)?;
        let (mab, _) = mode_semigroup(rho, a + b, &p)?;
        comp = comp.max((ma * mb - mab).abs().max());
    }
    out.push(CheckResult::below(
        s,
        "mode semigroup composition",
        comp,
        1e-10,
    ));

    let grid = GridSpec::new(3, 16, 12.0)?;
    let p = random_params(&mut rng)?;
    let u = random_state(grid, &mut rng)?;
    let two = apply_semigroup(&apply_semigroup(&u, 0.7, &p)?, 1.1, &p)?;
    let one = apply_semigroup(&u, 1.8, &p)?;
    out.push(CheckResult::below(
        s,
        "grid semigroup composition",
        rel(two.max_diff(&one), u.max_abs()),
        1e-10,
    ));
    Ok(out)
}

fn random_state(grid: GridSpec, rng: &mut ChaCha8Rng) -> Result<State> {
    let mut st = State::new(
        0.0,
        random_field(grid, 1, rng)?,
        random_field(grid, grid.d, rng)?,
        random_field(grid, 1, rng)?,
    )?;
    for f in [&mut st.a, &mut st.upsilon, &mut st.theta] {
        f.strip_nyquist();
        f.zero_mean();
    }
    Ok(st)
}

fn nsf(seed: u64) -> Result<Vec<CheckResult>> {
    let s = Suite::Nsf;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for d in [2, 3] {
        let grid = GridSpec::new(d, 16, 9.0)?;
        let st = random_state(grid, &mut rng)?;
        let w = effective_velocity(&st);
        let pu = leray_project(&st.upsilon)?;
        let back = helmholtz_reconstruct(&w, &st.a, &pu)?;
        out.push(CheckResult::below(
            s,
            &format!("Helmholtz reconstruction d={d}"),
            rel(back.max_diff(&st.upsilon), st.upsilon.max_abs()),
            1e-12,
        ));
        out.push(CheckResult::below(
            s,
            &format!("effective velocity is a gradient d={d}"),
            rel(leray_project(&w)?.max_abs(), w.max_abs()),
            1e-12,
        ));
        let expected = divergence(&st.upsilon)?.sub(&st.a)?;
        out.push(CheckResult::below(
            s,
            &format!("div w = div u - a, d={d}"),
            rel(divergence(&w)?.max_diff(&expected), expected.max_abs()),
            1e-12,
        ));
    }

    let phys = PhysicalParams {
        lambda: rng.random_range(0.0..1.0),
        mu: rng.random_range(0.5..2.0),
        kappa: rng.random_range(0.5..2.0),
        cv: 1.3,
        rho_bar: rng.random_range(0.5..2.0),
        t_bar: rng.random_range(0.5..2.0),
    };
    let (dp, table) = nondimensionalize(&phys, &PressureLaw::Perfect { r: 1.3 })?;
    out.push(CheckResult::below(
        s,
        "perfect gas with R = Cv: gamma = 1",
        (dp.gamma - 1.0).abs(),
        1e-15,
    ));
    let mut k1_defect: f64 = 0.0;
    for _ in 0..100 {
        let a = rng.random_range(-0.9..3.0);
        k1_defect = k1_defect.max((table.k1(a) + table.i(a)).abs());
    }
    out.push(CheckResult::below(
        s,
        "perfect gas K1 = -I",
        k1_defect,
        1e-12,
    ));
    let laws = [
        PressureLaw::Perfect { r: 1.3 },
        PressureLaw::VanDerWaals {
            alpha: 0.05,
            beta: 1.0,
            delta: 5.0,
        },
        PressureLaw::Polynomial {
            pi0: vec![0.0, 1.0, 0.3],
            pi1: vec![0.0, 1.0, 0.2],
        },
    ];
    let mut at_zero: f64 = 0.0;
    for law in laws {
        let (_, t) = nondimensionalize(&phys, &law)?;
        for v in [t.i(0.0), t.k1(0.0), t.k2(0.0), t.k3(0.0), t.kt1(0.0)] {
            at_zero = at_zero.max(v.abs());
        }
    }
    out.push(CheckResult {
        suite: s,
        name: "coefficient functions vanish at a = 0".into(),
        passed: at_zero == 0.0,
        value: at_zero,
        tolerance: "== 0".into(),
    });
    Ok(out)
}

fn solver(seed: u64) -> Result<Vec<CheckResult>> {
    let s = Suite::Solver;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phys = PhysicalParams {
        lambda: 0.2,
        mu: 1.0,
        kappa: 1.4,
        cv: 1.0,
        rho_bar: 1.0,
        t_bar: 1.0,
    };
    let (dp, table) = nondimensionalize(&phys, &PressureLaw::Perfect { r: 1.0 })?;
    let grid = GridSpec::new(3, 16, 10.0)?;
    let u0 = random_state(grid, &mut rng)?;
    let exact = apply_semigroup(&u0, 1.0, &dp)?;
    let mut out = Vec::new();
    for scheme in [Scheme::IfRk2, Scheme::IfRk4] {
        let mut st = Stepper::new(&dp, &table, scheme, false);
        let mut u = u0.clone();
        for _ in 0..8 {
            u = st.step(&u, 0.125)?;
        }
        out.push(CheckResult::below(
            s,
            &format!("{scheme:?} exact on the linear part"),
            rel(u.max_diff(&exact), u0.max_abs()),
            1e-12,
        ));
    }
    Ok(out)
}

/// `(passed, total)`.
pub fn tally(results: &[CheckResult]) -> (usize, usize) {
    (results.iter().filter(|r| r.passed).count(), results.len())
}
