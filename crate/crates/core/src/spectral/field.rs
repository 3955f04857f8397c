use num_complex::Complex64;
use rayon::prelude::*;

use super::fft::{fft_in_place, Direction};
use super::grid::GridSpec;
use crate::error::{Error, Result};
use crate::util::det_sum_range;

/// Real samples of a scalar (`comps = 1`) or vector field, component-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalField {
    pub grid: GridSpec,
    pub comps: usize,
    pub values: Vec<f64>,
}

/// Fourier coefficients of a scalar or vector field, component-major and
/// row-major in the mode index within each component.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    pub grid: GridSpec,
    pub comps: usize,
    pub coeffs: Vec<Complex64>,
}

impl PhysicalField {
    pub fn zeros(grid: GridSpec, comps: usize) -> Self {
        PhysicalField {
            grid,
            comps,
            values: vec![0.0; grid.len() * comps],
        }
    }

    pub fn from_values(grid: GridSpec, comps: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() * comps {
            return Err(Error::GridMismatch(format!(
                "value array has {} entries, expected {}",
                values.len(),
                grid.len() * comps
            )));
        }
        Ok(PhysicalField {
            grid,
            comps,
            values,
        })
    }

    /// Samples `f(x)` (returning `comps` values) at every grid point.
    pub fn from_fn<F>(grid: GridSpec, comps: usize, f: F) -> Self
    where
        F: Fn([f64; 3], &mut [f64]) + Sync,
    {
        let len = grid.len();
        let mut per_point = vec![0.0; len * comps];
        per_point
            .par_chunks_mut(comps)
            .enumerate()
            .for_each(|(idx, out)| f(grid.position(idx), out));
        let mut values = vec![0.0; len * comps];
        for idx in 0..len {
            for c in 0..comps {
                values[c * len + idx] = per_point[idx * comps + c];
            }
        }
        PhysicalField {
            grid,
            comps,
            values,
        }
    }

    pub fn component(&self, c: usize) -> &[f64] {
        let len = self.grid.len();
        &self.values[c * len..(c + 1) * len]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [f64] {
        let len = self.grid.len();
        &mut self.values[c * len..(c + 1) * len]
    }

    /// Euclidean magnitude over components at a grid point.
    #[inline]
    pub fn magnitude(&self, idx: usize) -> f64 {
        let len = self.grid.len();
        if self.comps == 1 {
            return self.values[idx].abs();
        }
        (0..self.comps)
            .map(|c| self.values[c * len + idx].powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        crate::util::det_max_range(self.grid.len(), |i| self.magnitude(i))
    }

    pub fn min_component(&self, c: usize) -> f64 {
        self.component(c)
            .par_iter()
            .cloned()
            .reduce(|| f64::INFINITY, f64::min)
    }

    /// `h^d Σ_x |f(x)|^2`.
    pub fn l2_norm_sq(&self) -> f64 {
        let hd = self.grid.spacing().powi(self.grid.d as i32);
        hd * det_sum_range(self.grid.len(), |i| self.magnitude(i).powi(2))
    }
}

impl SpectralField {
    pub fn zeros(grid: GridSpec, comps: usize) -> Self {
        SpectralField {
            grid,
            comps,
            coeffs: vec![Complex64::new(0.0, 0.0); grid.len() * comps],
        }
    }

    pub fn from_coeffs(grid: GridSpec, comps: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() * comps {
            return Err(Error::GridMismatch(format!(
                "coefficient array has {} entries, expected {}",
                coeffs.len(),
                grid.len() * comps
            )));
        }
        Ok(SpectralField {
            grid,
            comps,
            coeffs,
        })
    }

    /// Builds coefficients mode by mode from the flat mode index.
    pub fn from_mode_fn<F>(grid: GridSpec, comps: usize, f: F) -> Self
    where
        F: Fn(usize, &mut [Complex64]) + Sync,
    {
        let len = grid.len();
        let mut per_mode = vec![Complex64::new(0.0, 0.0); len * comps];
        per_mode
            .par_chunks_mut(comps)
            .enumerate()
            .for_each(|(idx, out)| f(idx, out));
        let mut coeffs = vec![Complex64::new(0.0, 0.0); len * comps];
        for idx in 0..len {
            for c in 0..comps {
                coeffs[c * len + idx] = per_mode[idx * comps + c];
            }
        }
        SpectralField {
            grid,
            comps,
            coeffs,
        }
    }

    pub fn component(&self, c: usize) -> &[Complex64] {
        let len = self.grid.len();
        &self.coeffs[c * len..(c + 1) * len]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [Complex64] {
        let len = self.grid.len();
        &mut self.coeffs[c * len..(c + 1) * len]
    }

    /// Scalar field holding component `c`.
    pub fn extract(&self, c: usize) -> SpectralField {
        SpectralField {
            grid: self.grid,
            comps: 1,
            coeffs: self.component(c).to_vec(),
        }
    }

    /// Stacks scalar or vector fields into one multi-component field.
    pub fn stack(parts: &[&SpectralField]) -> Result<SpectralField> {
        let grid = parts
            .first()
            .ok_or_else(|| Error::GridMismatch("nothing to stack".into()))?
            .grid;
        let mut coeffs = Vec::new();
        let mut comps = 0;
        for p in parts {
            if p.grid != grid {
                return Err(Error::GridMismatch(
                    "stacked fields live on different grids".into(),
                ));
            }
            coeffs.extend_from_slice(&p.coeffs);
            comps += p.comps;
        }
        Ok(SpectralField {
            grid,
            comps,
            coeffs,
        })
    }

    pub fn ensure_same_grid(&self, other: &SpectralField) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch(format!(
                "{:?} vs {:?}",
                self.grid, other.grid
            )));
        }
        Ok(())
    }

    pub fn scale(&self, s: f64) -> SpectralField {
        let mut out = self.clone();
        out.coeffs.par_iter_mut().for_each(|c| *c *= s);
        out
    }

    pub fn add(&self, other: &SpectralField) -> Result<SpectralField> {
        self.axpy(1.0, other)
    }

    pub fn sub(&self, other: &SpectralField) -> Result<SpectralField> {
        self.axpy(-1.0, other)
    }

    /// `self + alpha * other`.
    pub fn axpy(&self, alpha: f64, other: &SpectralField) -> Result<SpectralField> {
        self.ensure_same_grid(other)?;
        if self.comps != other.comps {
            return Err(Error::Components {
                expected: self.comps,
                found: other.comps,
            });
        }
        let mut out = self.clone();
        out.coeffs
            .par_iter_mut()
            .zip(other.coeffs.par_iter())
            .for_each(|(a, b)| *a += alpha * b);
        Ok(out)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Largest |coeff(k) - conj(coeff(-k))| over all modes and components.
    pub fn hermitian_defect(&self) -> f64 {
        let len = self.grid.len();
        let mut worst: f64 = 0.0;
        for c in 0..self.comps {
            let comp = self.component(c);
            for idx in 0..len {
                let p = self.grid.partner(idx);
                worst = worst.max((comp[idx] - comp[p].conj()).norm());
            }
        }
        worst
    }

    /// `L^{-d} Σ_k |f̂(k)|^2`, the squared `L^2` norm by Parseval.
    pub fn l2_norm_sq(&self) -> f64 {
        det_sum_range(self.coeffs.len(), |i| self.coeffs[i].norm_sqr()) / self.grid.volume()
    }

    /// Largest coefficient modulus, relative scale for tolerances.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest modulus of `self - other`.
    pub fn max_diff(&self, other: &SpectralField) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Zeroes the unpaired `-n/2` modes, where odd symbols cannot keep
    /// real data real.
    pub fn strip_nyquist(&mut self) {
        let len = self.grid.len();
        let grid = self.grid;
        self.coeffs.par_chunks_mut(len).for_each(|comp| {
            for (idx, z) in comp.iter_mut().enumerate() {
                if grid.is_nyquist(idx) {
                    *z = Complex64::new(0.0, 0.0);
                }
            }
        });
    }

    pub fn zero_mean(&mut self) {
        for c in 0..self.comps {
            self.component_mut(c)[0] = Complex64::new(0.0, 0.0);
        }
    }
}

/// Continuum-calibrated forward transform, `f̂(ξ) = h^d Σ_x f(x) e^{-iξ·x}`.
pub fn forward_transform(f: &PhysicalField) -> Result<SpectralField> {
    if let Some(index) = f.values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            what: "physical field",
            index,
        });
    }
    let grid = f.grid;
    let len = grid.len();
    let hd = grid.spacing().powi(grid.d as i32);
    let mut coeffs: Vec<Complex64> = f.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    for c in 0..f.comps {
        let slice = &mut coeffs[c * len..(c + 1) * len];
        fft_in_place(slice, grid.n, grid.d, Direction::Forward);
        slice.par_iter_mut().for_each(|z| *z *= hd);
    }
    Ok(SpectralField {
        grid,
        comps: f.comps,
        coeffs,
    })
}

/// Inverse of [`forward_transform`]; the imaginary part, which vanishes for
/// conjugate-symmetric input, is discarded.
pub fn inverse_transform(u: &SpectralField) -> PhysicalField {
    let grid = u.grid;
    let len = grid.len();
    let scale = 1.0 / grid.volume();
    let mut values = vec![0.0; len * u.comps];
    let mut buf = vec![Complex64::new(0.0, 0.0); len];
    for c in 0..u.comps {
        buf.copy_from_slice(u.component(c));
        fft_in_place(&mut buf, grid.n, grid.d, Direction::Inverse);
        values[c * len..(c + 1) * len]
            .par_iter_mut()
            .zip(buf.par_iter())
            .for_each(|(v, z)| *v = z.re * scale);
    }
    PhysicalField {
        grid,
        comps: u.comps,
        values,
    }
}
