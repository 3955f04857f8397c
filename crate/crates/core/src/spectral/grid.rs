use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Angular wavevector; unused trailing entries are zero when `d = 2`.
pub type Wavevector = [f64; 3];

/// Periodic box of side `box_len` sampled with `n` points per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub d: usize,
    pub n: usize,
    pub box_len: f64,
}

impl GridSpec {
    pub fn new(d: usize, n: usize, box_len: f64) -> Result<Self> {
        let grid = GridSpec { d, n, box_len };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.d == 2 || self.d == 3) {
            return Err(Error::InvalidGrid(format!(
                "d = {} (expected 2 or 3)",
                self.d
            )));
        }
        if self.n < 8 || !self.n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "n = {} (expected a power of two, at least 8)",
                self.n
            )));
        }
        if !(self.box_len.is_finite() && self.box_len > 0.0) {
            return Err(Error::InvalidGrid(format!("box_len = {}", self.box_len)));
        }
        Ok(())
    }

    /// Number of grid points `n^d`.
    pub fn len(&self) -> usize {
        self.n.pow(self.d as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.box_len / self.n as f64
    }

    pub fn volume(&self) -> f64 {
        self.box_len.powi(self.d as i32)
    }

    /// Fundamental angular frequency `2π/L`.
    pub fn dxi(&self) -> f64 {
        2.0 * PI / self.box_len
    }

    /// Signed integer mode for an axis position: `0..n/2-1` then `-n/2..-1`.
    #[inline]
    pub fn signed_mode(&self, i: usize) -> i64 {
        let n = self.n as i64;
        let i = i as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    /// Per-axis positions of a flat index (row-major, last axis fastest).
    #[inline]
    pub fn axis_positions(&self, mut idx: usize) -> [usize; 3] {
        let mut pos = [0usize; 3];
        for a in (0..self.d).rev() {
            pos[a] = idx % self.n;
            idx /= self.n;
        }
        pos
    }

    #[inline]
    pub fn flat_index(&self, pos: &[usize; 3]) -> usize {
        pos[..self.d].iter().fold(0, |acc, &p| acc * self.n + p)
    }

    /// Integer mode vector `k` of a flat index.
    #[inline]
    pub fn mode(&self, idx: usize) -> [i64; 3] {
        let pos = self.axis_positions(idx);
        let mut k = [0i64; 3];
        for a in 0..self.d {
            k[a] = self.signed_mode(pos[a]);
        }
        k
    }

    /// Squared integer mode length `|k|^2`.
    #[inline]
    pub fn mode_norm2(&self, idx: usize) -> i64 {
        self.mode(idx).iter().map(|k| k * k).sum()
    }

    /// Angular wavevector `ξ = 2πk/L`.
    #[inline]
    pub fn wavevector(&self, idx: usize) -> Wavevector {
        let k = self.mode(idx);
        let dxi = self.dxi();
        [k[0] as f64 * dxi, k[1] as f64 * dxi, k[2] as f64 * dxi]
    }

    #[inline]
    pub fn wavenumber(&self, idx: usize) -> f64 {
        (self.mode_norm2(idx) as f64).sqrt() * self.dxi()
    }

    /// Flat index of the mode `-k` (the conjugate partner for real data).
    #[inline]
    pub fn partner(&self, idx: usize) -> usize {
        let pos = self.axis_positions(idx);
        let mut out = [0usize; 3];
        for a in 0..self.d {
            out[a] = (self.n - pos[a]) % self.n;
        }
        self.flat_index(&out)
    }

    /// True when some axis sits on the unpaired mode `-n/2`.
    #[inline]
    pub fn is_nyquist(&self, idx: usize) -> bool {
        let half = (self.n / 2) as i64;
        self.mode(idx)[..self.d].iter().any(|&k| k == -half)
    }

    /// Integer mode with unpaired `-n/2` components set to zero. First
    /// derivatives and every direction-dependent symbol use this vector so
    /// that real data stays real.
    #[inline]
    pub fn derivative_mode(&self, idx: usize) -> [i64; 3] {
        let half = (self.n / 2) as i64;
        let mut k = self.mode(idx);
        for c in k.iter_mut() {
            if *c == -half {
                *c = 0;
            }
        }
        k
    }

    #[inline]
    pub fn derivative_wavevector(&self, idx: usize) -> Wavevector {
        let k = self.derivative_mode(idx);
        let dxi = self.dxi();
        [k[0] as f64 * dxi, k[1] as f64 * dxi, k[2] as f64 * dxi]
    }

    /// Smallest nonzero wavenumber `2π/L`.
    pub fn min_wavenumber(&self) -> f64 {
        self.dxi()
    }

    /// Largest wavenumber on the grid (corner mode `(-n/2, ..., -n/2)`).
    pub fn max_wavenumber(&self) -> f64 {
        (self.d as f64).sqrt() * (self.n / 2) as f64 * self.dxi()
    }

    /// Per-axis Nyquist wavenumber `π n / L`.
    pub fn nyquist(&self) -> f64 {
        (self.n / 2) as f64 * self.dxi()
    }

    /// Physical coordinate of a grid point.
    pub fn position(&self, idx: usize) -> [f64; 3] {
        let pos = self.axis_positions(idx);
        let h = self.spacing();
        [pos[0] as f64 * h, pos[1] as f64 * h, pos[2] as f64 * h]
    }
}
