use num_complex::Complex64;
use rayon::prelude::*;

use super::field::SpectralField;
use super::grid::Wavevector;
use crate::error::{Error, Result};

/// 3×3 complex symbol; only the leading `comps × comps` block is used.
pub type MatrixSymbol = [[Complex64; 3]; 3];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

fn symbol_table<F>(u: &SpectralField, m: &F, at_zero: Complex64) -> Result<Vec<Complex64>>
where
    F: Fn(&Wavevector) -> Complex64 + Sync,
{
    let grid = u.grid;
    let table: Vec<Complex64> = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            if idx == 0 {
                at_zero
            } else {
                m(&grid.wavevector(idx))
            }
        })
        .collect();
    if let Some(idx) = table
        .iter()
        .position(|z| !(z.re.is_finite() && z.im.is_finite()))
    {
        return Err(Error::SingularSymbol {
            mode: grid.mode(idx)[..grid.d].to_vec(),
        });
    }
    Ok(table)
}

/// Multiplies every component mode-wise by the scalar symbol `m(ξ)`; the
/// zero mode gets `at_zero`.
pub fn apply_multiplier<F>(u: &SpectralField, m: F, at_zero: Complex64) -> Result<SpectralField>
where
    F: Fn(&Wavevector) -> Complex64 + Sync,
{
    let table = symbol_table(u, &m, at_zero)?;
    let len = u.grid.len();
    let mut out = u.clone();
    out.coeffs.par_chunks_mut(len).for_each(|comp| {
        comp.iter_mut().zip(&table).for_each(|(z, s)| *z *= s);
    });
    Ok(out)
}

/// Applies a matrix symbol to a vector field; the zero mode gets `at_zero`.
pub fn apply_matrix_multiplier<F>(
    u: &SpectralField,
    m: F,
    at_zero: MatrixSymbol,
) -> Result<SpectralField>
where
    F: Fn(&Wavevector) -> MatrixSymbol + Sync,
{
    let grid = u.grid;
    let len = grid.len();
    let nc = u.comps;
    if nc > 3 {
        return Err(Error::Components {
            expected: 3,
            found: nc,
        });
    }
    let per_mode: Vec<([Complex64; 3], bool)> = (0..len)
        .into_par_iter()
        .map(|idx| {
            let mat = if idx == 0 {
                at_zero
            } else {
                m(&grid.wavevector(idx))
            };
            let mut out = [ZERO; 3];
            let mut finite = true;
            for r in 0..nc {
                for c in 0..nc {
                    let e = mat[r][c];
                    finite &= e.re.is_finite() && e.im.is_finite();
                    out[r] += e * u.coeffs[c * len + idx];
                }
            }
            (out, finite)
        })
        .collect();
    if let Some(idx) = per_mode.iter().position(|(_, ok)| !ok) {
        return Err(Error::SingularSymbol {
            mode: grid.mode(idx)[..grid.d].to_vec(),
        });
    }
    let mut res = SpectralField::zeros(grid, nc);
    for (idx, (v, _)) in per_mode.iter().enumerate() {
        for (c, z) in v.iter().enumerate().take(nc) {
            res.coeffs[c * len + idx] = *z;
        }
    }
    Ok(res)
}

fn norm(xi: &Wavevector) -> f64 {
    (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt()
}

/// `Λ^s u = F^{-1}(|ξ|^s û)`. The mean passes through for `s = 0` and is
/// dropped otherwise.
pub fn fractional_laplacian(u: &SpectralField, s: f64) -> Result<SpectralField> {
    let zero = if s == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        ZERO
    };
    apply_multiplier(u, |xi| Complex64::new(norm(xi).powf(s), 0.0), zero)
}

pub fn laplacian(u: &SpectralField) -> SpectralField {
    apply_multiplier(u, |xi| Complex64::new(-norm(xi).powi(2), 0.0), ZERO)
        .expect("polynomial symbol is finite")
}

/// `(−Δ)^{-1} u`, mean set to zero.
pub fn inverse_laplacian(u: &SpectralField) -> SpectralField {
    apply_multiplier(u, |xi| Complex64::new(norm(xi).powi(-2), 0.0), ZERO)
        .expect("nonzero modes have |ξ| > 0")
}

/// `e^{tνΔ} u`.
pub fn heat_factor(u: &SpectralField, t: f64, nu: f64) -> SpectralField {
    apply_multiplier(
        u,
        |xi| Complex64::new((-nu * t * norm(xi).powi(2)).exp(), 0.0),
        Complex64::new(1.0, 0.0),
    )
    .expect("heat symbol is finite")
}

fn expect_comps(u: &SpectralField, expected: usize) -> Result<()> {
    if u.comps != expected {
        return Err(Error::Components {
            expected,
            found: u.comps,
        });
    }
    Ok(())
}

/// `∇u` of a scalar field.
pub fn gradient(u: &SpectralField) -> Result<SpectralField> {
    expect_comps(u, 1)?;
    let grid = u.grid;
    let len = grid.len();
    let mut out = SpectralField::zeros(grid, grid.d);
    for i in 0..grid.d {
        out.component_mut(i)
            .par_iter_mut()
            .enumerate()
            .for_each(|(idx, z)| *z = I * grid.derivative_wavevector(idx)[i] * u.coeffs[idx]);
    }
    debug_assert_eq!(out.coeffs.len(), grid.d * len);
    Ok(out)
}

/// `div u` of a vector field.
pub fn divergence(u: &SpectralField) -> Result<SpectralField> {
    let grid = u.grid;
    expect_comps(u, grid.d)?;
    let len = grid.len();
    let mut out = SpectralField::zeros(grid, 1);
    out.coeffs.par_iter_mut().enumerate().for_each(|(idx, z)| {
        let xi = grid.derivative_wavevector(idx);
        let mut acc = ZERO;
        for i in 0..grid.d {
            acc += xi[i] * u.coeffs[i * len + idx];
        }
        *z = I * acc;
    });
    Ok(out)
}

/// Leray projection `(I − ξξᵀ/|ξ|²) û`; the zero mode passes through. The
/// same derivative wavevector as [`gradient`] and [`divergence`] is used, so
/// `𝒫∇ = 0` and `div 𝒫 = 0` hold exactly on every grid mode.
pub fn leray_project(u: &SpectralField) -> Result<SpectralField> {
    let grid = u.grid;
    expect_comps(u, grid.d)?;
    let len = grid.len();
    let d = grid.d;
    let mut out = u.clone();
    let projected: Vec<[Complex64; 3]> = (0..len)
        .into_par_iter()
        .map(|idx| {
            let mut v = [ZERO; 3];
            for i in 0..d {
                v[i] = u.coeffs[i * len + idx];
            }
            if idx == 0 {
                return v;
            }
            let xi = grid.derivative_wavevector(idx);
            let k2: f64 = xi[..d].iter().map(|x| x * x).sum();
            if k2 == 0.0 {
                return v;
            }
            let dot: Complex64 = (0..d).map(|i| xi[i] * v[i]).sum();
            for i in 0..d {
                v[i] -= xi[i] * dot / k2;
            }
            v
        })
        .collect();
    for (idx, v) in projected.iter().enumerate() {
        for i in 0..d {
            out.coeffs[i * len + idx] = v[i];
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::field::{forward_transform, inverse_transform};
    use crate::spectral::{GridSpec, PhysicalField};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_spectral(grid: GridSpec, comps: usize, seed: u64) -> SpectralField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..grid.len() * comps)
            .map(|_| rng.random_range(-1.0..1.0))
            .collect();
        forward_transform(&PhysicalField::from_values(grid, comps, values).unwrap()).unwrap()
    }

    #[test]
    fn identity_and_eigenfunction() {
        let grid = GridSpec::new(2, 16, 3.0).unwrap();
        let u = random_spectral(grid, 1, 1);
        assert_eq!(fractional_laplacian(&u, 0.0).unwrap(), u);

        let xi = 2.0 * grid.dxi();
        let f = PhysicalField::from_fn(grid, 1, |x, o| o[0] = (xi * x[0]).cos());
        let out =
            inverse_transform(&fractional_laplacian(&forward_transform(&f).unwrap(), 2.0).unwrap());
        for (a, b) in out.values.iter().zip(&f.values) {
            assert!((a - xi * xi * b).abs() < 1e-12 * xi * xi);
        }
    }

    #[test]
    fn fractional_round_trip() {
        let grid = GridSpec::new(3, 16, 5.0).unwrap();
        let mut u = random_spectral(grid, 1, 2);
        u.zero_mean();
        for s in [0.5, 1.3, 2.0] {
            let back = fractional_laplacian(&fractional_laplacian(&u, s).unwrap(), -s).unwrap();
            assert!(back.max_diff(&u) < 1e-10 * u.max_abs());
        }
    }

    #[test]
    fn singular_symbol_is_rejected() {
        let grid = GridSpec::new(2, 8, 1.0).unwrap();
        let u = random_spectral(grid, 1, 3);
        let err = apply_multiplier(&u, |xi| Complex64::new(1.0 / xi[0], 0.0), ZERO);
        assert!(matches!(err, Err(Error::SingularSymbol { .. })));
    }

    #[test]
    fn leray_identities() {
        let grid = GridSpec::new(3, 16, 4.0).unwrap();
        let u = random_spectral(grid, 3, 4);
        let p = leray_project(&u).unwrap();
        let scale = u.max_abs();
        assert!(leray_project(&p).unwrap().max_diff(&p) < 1e-12 * scale);
        assert!(divergence(&p).unwrap().max_abs() < 1e-12 * scale * grid.max_wavenumber());
        let phi = random_spectral(grid, 1, 5);
        let g = gradient(&phi).unwrap();
        let pg = leray_project(&g).unwrap();
        let mut expect = SpectralField::zeros(grid, 3);
        expect.coeffs[0] = g.coeffs[0];
        assert!(pg.max_diff(&expect) < 1e-12 * g.max_abs());
        assert!(leray_project(&phi).is_err());
    }

    #[test]
    fn matrix_symbol_matches_componentwise() {
        let grid = GridSpec::new(2, 8, 2.0).unwrap();
        let u = random_spectral(grid, 2, 6);
        let mut m = [[ZERO; 3]; 3];
        m[0][1] = Complex64::new(2.0, 0.0);
        m[1][0] = Complex64::new(0.0, -1.0);
        let out = apply_matrix_multiplier(&u, |_| m, m).unwrap();
        let len = grid.len();
        for idx in 0..len {
            assert_eq!(out.coeffs[idx], 2.0 * u.coeffs[len + idx]);
            assert_eq!(out.coeffs[len + idx], -I * u.coeffs[idx]);
        }
    }

    #[test]
    fn real_even_symbols_preserve_symmetry() {
        let grid = GridSpec::new(3, 8, 2.0).unwrap();
        let mut u = random_spectral(grid, 1, 7);
        assert!(gradient(&u).unwrap().hermitian_defect() < 1e-12);
        u.strip_nyquist();
        assert!(heat_factor(&u, 0.3, 1.0).hermitian_defect() < 1e-12);
        assert!(gradient(&u).unwrap().hermitian_defect() < 1e-12);
        assert!(inverse_laplacian(&u).hermitian_defect() < 1e-12);
    }
}
