use num_complex::Complex64;
use rayon::prelude::*;

use super::{CoefficientTable, State};
use crate::error::{Error, Result};
use crate::linear::DimensionlessParams;
use crate::spectral::{
    apply_matrix_multiplier, divergence, forward_transform, gradient, inverse_transform, laplacian,
    MatrixSymbol, PhysicalField, SpectralField,
};

/// Smallest admissible `1 + a` during nonlinear evaluation.
pub const VACUUM_GUARD: f64 = 0.1;

/// Zeroes modes with some `|k_i| > n/3` (the 2/3 rule).
pub fn dealias(u: &mut SpectralField) {
    let grid = u.grid;
    let cut = (grid.n / 3) as i64;
    let len = grid.len();
    u.coeffs.par_chunks_mut(len).for_each(|comp| {
        for (idx, z) in comp.iter_mut().enumerate() {
            if grid.mode(idx)[..grid.d].iter().any(|k| k.abs() > cut) {
                *z = Complex64::new(0.0, 0.0);
            }
        }
    });
}

pub fn dealias_state(s: &mut State) {
    dealias(&mut s.a);
    dealias(&mut s.upsilon);
    dealias(&mut s.theta);
}

/// Pointwise coefficient functions of a density perturbation.
#[derive(Debug, Clone)]
pub struct CoefficientFields {
    pub i: PhysicalField,
    pub k1: PhysicalField,
    pub k2: PhysicalField,
    pub k3: PhysicalField,
    pub kt1: PhysicalField,
    pub kt2: PhysicalField,
}

fn min_one_plus(a: &PhysicalField) -> f64 {
    1.0 + a
        .values
        .par_iter()
        .cloned()
        .reduce(|| f64::INFINITY, f64::min)
}

/// Evaluates `I, K1, K2, K3, K̃1, K̃2` at every grid point.
pub fn coefficient_functions(
    a: &PhysicalField,
    table: &CoefficientTable,
) -> Result<CoefficientFields> {
    let m = min_one_plus(a);
    if !(m > 0.0) {
        return Err(Error::Vacuum {
            min_one_plus_a: m,
            threshold: 0.0,
        });
    }
    let map = |f: &(dyn Fn(f64) -> f64 + Sync)| PhysicalField {
        grid: a.grid,
        comps: 1,
        values: a.values.par_iter().map(|&x| f(x)).collect(),
    };
    Ok(CoefficientFields {
        i: map(&|x| table.i(x)),
        k1: map(&|x| table.k1(x)),
        k2: map(&|x| table.k2(x)),
        k3: map(&|x| table.k3(x)),
        kt1: map(&|x| table.kt1(x)),
        kt2: map(&|x| table.kt2(x)),
    })
}

/// Symbol of `Ã = μ̃Δ + (1 − μ̃)∇div`.
pub fn lame_symbol(mu_tilde: f64) -> impl Fn(&[f64; 3]) -> MatrixSymbol + Sync {
    move |xi| {
        let k2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        let mut m = [[Complex64::new(0.0, 0.0); 3]; 3];
        for r in 0..3 {
            for c in 0..3 {
                let diag = if r == c { mu_tilde * k2 } else { 0.0 };
                m[r][c] = Complex64::new(-diag - (1.0 - mu_tilde) * xi[r] * xi[c], 0.0);
            }
        }
        m
    }
}

/// Right-hand sides `(f, g, k)` of the perturbation system, evaluated
/// pseudo-spectrally with 2/3-rule dealiasing of inputs and outputs.
pub fn nonlinear_terms(
    state: &State,
    table: &CoefficientTable,
    dp: &DimensionlessParams,
) -> Result<(SpectralField, SpectralField, SpectralField)> {
    let grid = state.grid();
    let d = grid.d;
    let len = grid.len();
    let mut s = state.clone();
    dealias_state(&mut s);

    let a = inverse_transform(&s.a);
    let m = min_one_plus(&a);
    if !(m >= VACUUM_GUARD) {
        return Err(Error::Vacuum {
            min_one_plus_a: m,
            threshold: VACUUM_GUARD,
        });
    }
    let v = inverse_transform(&s.upsilon);
    let th = inverse_transform(&s.theta);
    let grad_a = inverse_transform(&gradient(&s.a)?);
    let grad_th = inverse_transform(&gradient(&s.theta)?);
    let lap_th = inverse_transform(&laplacian(&s.theta));
    let grad_v: Vec<PhysicalField> = (0..d)
        .map(|i| gradient(&s.upsilon.extract(i)).map(|g| inverse_transform(&g)))
        .collect::<Result<_>>()?;
    let zero = [[Complex64::new(0.0, 0.0); 3]; 3];
    let lame_v = inverse_transform(&apply_matrix_multiplier(
        &s.upsilon,
        lame_symbol(dp.mu_tilde),
        zero,
    )?);

    let beta = dp.beta;
    // per point: a υ (d), g (d), k
    let pointwise: Vec<[f64; 7]> = (0..len)
        .into_par_iter()
        .map(|x| {
            let av = a.values[x];
            let tv = th.values[x];
            let ia = table.i(av);
            let k1 = table.k1(av);
            let k2 = table.k2(av);
            let k3p = table.k3_prime(av);
            let kt1 = table.kt1(av);
            let kt2 = table.kt2(av);
            let vel = |i: usize| v.values[i * len + x];
            let dv = |i: usize, j: usize| grad_v[i].values[j * len + x];
            let ga = |i: usize| grad_a.values[i * len + x];
            let gt = |i: usize| grad_th.values[i * len + x];

            let mut out = [0.0; 7];
            let mut div = 0.0;
            let mut sym2 = 0.0;
            for i in 0..d {
                div += dv(i, i);
                for j in 0..d {
                    let dij = 0.5 * (dv(i, j) + dv(j, i));
                    sym2 += dij * dij;
                }
            }
            let q = table.q_mu * sym2 + table.q_lambda * div * div;
            let mut adv_th = 0.0;
            for i in 0..d {
                out[i] = av * vel(i);
                let mut adv = 0.0;
                for j in 0..d {
                    adv += vel(j) * dv(i, j);
                }
                out[3 + i] = -adv
                    - ia * lame_v.values[i * len + x]
                    - k1 * ga(i)
                    - k2 * gt(i)
                    - tv * k3p * ga(i);
                adv_th += vel(i) * gt(i);
            }
            out[6] =
                -adv_th - beta * ia * lap_th.values[x] + q / (1.0 + av) - (kt1 + kt2 * tv) * div;
            out
        })
        .collect();

    let mut flux = PhysicalField::zeros(grid, d);
    let mut g = PhysicalField::zeros(grid, d);
    let mut k = PhysicalField::zeros(grid, 1);
    for i in 0..d {
        flux.component_mut(i)
            .par_iter_mut()
            .zip(pointwise.par_iter())
            .for_each(|(z, p)| *z = p[i]);
        g.component_mut(i)
            .par_iter_mut()
            .zip(pointwise.par_iter())
            .for_each(|(z, p)| *z = p[3 + i]);
    }
    k.values
        .par_iter_mut()
        .zip(pointwise.par_iter())
        .for_each(|(z, p)| *z = p[6]);

    let mut f_hat = divergence(&forward_transform(&flux)?)?.scale(-1.0);
    let mut g_hat = forward_transform(&g)?;
    let mut k_hat = forward_transform(&k)?;
    dealias(&mut f_hat);
    dealias(&mut g_hat);
    dealias(&mut k_hat);
    Ok((f_hat, g_hat, k_hat))
}

/// [`nonlinear_terms`] packed as a state-shaped value.
pub fn nonlinear_rhs(
    state: &State,
    table: &CoefficientTable,
    dp: &DimensionlessParams,
) -> Result<State> {
    let (f, g, k) = nonlinear_terms(state, table, dp)?;
    Ok(State {
        t: state.t,
        a: f,
        upsilon: g,
        theta: k,
    })
}
