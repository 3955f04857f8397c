use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nalgebra::Matrix3;
use nsf_core::decay::{make_initial_data, InitialDataSpec};
use nsf_core::linear::{apply_semigroup, expm3, symbol_matrix};
use nsf_core::nsf::{nondimensionalize, nonlinear_rhs};
use nsf_core::spectral::{fft_in_place, Direction};
use nsf_core::{DecayParams, GridSpec, PhysicalParams, PressureLaw};
use num_complex::Complex64;
use std::hint::black_box;

fn unit_gas() -> PhysicalParams {
    PhysicalParams {
        lambda: 0.0,
        mu: 1.0,
        kappa: 2.0,
        cv: 1.0,
        rho_bar: 1.0,
        t_bar: 1.0,
    }
}

fn fft(c: &mut Criterion) {
    let mut g = c.benchmark_group("fft");
    for &(d, n) in &[(2usize, 128usize), (3, 32), (3, 64)] {
        let len = n.pow(d as u32);
        let mut data: Vec<Complex64> = (0..len)
            .map(|i| Complex64::new((i as f64).sin(), 0.0))
            .collect();
        g.bench_with_input(
            BenchmarkId::from_parameter(format!("d{d}_n{n}")),
            &(),
            |b, _| {
                b.iter(|| {
                    fft_in_place(&mut data, n, d, Direction::Forward);
                    fft_in_place(&mut data, n, d, Direction::Inverse);
                })
            },
        );
    }
    g.finish();
}

fn nonlinear(c: &mut Criterion) {
    let (dp, table) = nondimensionalize(&unit_gas(), &PressureLaw::Perfect { r: 1.0 }).unwrap();
    let mut g = c.benchmark_group("nonlinear_rhs");
    g.sample_size(10);
    for &n in &[32usize, 64] {
        let grid = GridSpec::new(3, n, n as f64).unwrap();
        let decay = DecayParams::new(3, 1.5, 2.0, 0.01, 0).unwrap();
        let state = make_initial_data(&InitialDataSpec::gaussian(1e-2, 1.0), grid, &decay).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &state, |b, s| {
            b.iter(|| nonlinear_rhs(black_box(s), &table, &dp).unwrap())
        });
    }
    g.finish();
}

fn semigroup(c: &mut Criterion) {
    let (dp, _) = nondimensionalize(&unit_gas(), &PressureLaw::Perfect { r: 1.0 }).unwrap();
    let grid = GridSpec::new(3, 32, 32.0).unwrap();
    let decay = DecayParams::new(3, 1.5, 2.0, 0.01, 0).unwrap();
    let state = make_initial_data(&InitialDataSpec::gaussian(1.0, 1.0), grid, &decay).unwrap();
    c.bench_function("apply_semigroup/d3_n32", |b| {
        b.iter(|| apply_semigroup(black_box(&state), 1.0, &dp).unwrap())
    });
}

fn matrix_exp(c: &mut Criterion) {
    let (dp, _) = nondimensionalize(&unit_gas(), &PressureLaw::Perfect { r: 1.0 }).unwrap();
    let m: Matrix3<f64> = symbol_matrix(2.5, &dp).unwrap().entries * 0.7;
    c.bench_function("expm3", |b| b.iter(|| expm3(black_box(&m))));
}

criterion_group!(benches, fft, nonlinear, semigroup, matrix_exp);
criterion_main!(benches);
