use crate::error::{Error, Result};
use crate::spectral::{GridSpec, SpectralField};

/// Perturbation triple `(a, υ, θ)` in Fourier variables at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub t: f64,
    pub a: SpectralField,
    pub upsilon: SpectralField,
    pub theta: SpectralField,
}

impl State {
    pub fn new(
        t: f64,
        a: SpectralField,
        upsilon: SpectralField,
        theta: SpectralField,
    ) -> Result<Self> {
        let grid = a.grid;
        for f in [&upsilon, &theta] {
            if f.grid != grid {
                return Err(Error::GridMismatch(
                    "state components on different grids".into(),
                ));
            }
        }
        if a.comps != 1 || theta.comps != 1 {
            return Err(Error::Components {
                expected: 1,
                found: if a.comps != 1 { a.comps } else { theta.comps },
            });
        }
        if upsilon.comps != grid.d {
            return Err(Error::Components {
                expected: grid.d,
                found: upsilon.comps,
            });
        }
        Ok(State {
            t,
            a,
            upsilon,
            theta,
        })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        State {
            t: 0.0,
            a: SpectralField::zeros(grid, 1),
            upsilon: SpectralField::zeros(grid, grid.d),
            theta: SpectralField::zeros(grid, 1),
        }
    }

    pub fn grid(&self) -> GridSpec {
        self.a.grid
    }

    pub fn ensure_same_grid(&self, other: &State) -> Result<()> {
        if self.grid() != other.grid() {
            return Err(Error::GridMismatch(format!(
                "{:?} vs {:?}",
                self.grid(),
                other.grid()
            )));
        }
        Ok(())
    }

    pub fn scale(&self, s: f64) -> State {
        State {
            t: self.t,
            a: self.a.scale(s),
            upsilon: self.upsilon.scale(s),
            theta: self.theta.scale(s),
        }
    }

    /// `self + alpha * other`, keeping `self.t`.
    pub fn axpy(&self, alpha: f64, other: &State) -> Result<State> {
        Ok(State {
            t: self.t,
            a: self.a.axpy(alpha, &other.a)?,
            upsilon: self.upsilon.axpy(alpha, &other.upsilon)?,
            theta: self.theta.axpy(alpha, &other.theta)?,
        })
    }

    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.upsilon.is_finite() && self.theta.is_finite()
    }

    pub fn max_abs(&self) -> f64 {
        self.a
            .max_abs()
            .max(self.upsilon.max_abs())
            .max(self.theta.max_abs())
    }

    pub fn max_diff(&self, other: &State) -> f64 {
        self.a
            .max_diff(&other.a)
            .max(self.upsilon.max_diff(&other.upsilon))
            .max(self.theta.max_diff(&other.theta))
    }

    /// All components stacked as `[a, υ_1..υ_d, θ]`.
    pub fn stacked(&self) -> SpectralField {
        SpectralField::stack(&[&self.a, &self.upsilon, &self.theta]).expect("consistent state")
    }

    /// Inverse of [`State::stacked`].
    pub fn from_stacked(t: f64, u: &SpectralField) -> Result<State> {
        let d = u.grid.d;
        if u.comps != d + 2 {
            return Err(Error::Components {
                expected: d + 2,
                found: u.comps,
            });
        }
        let len = u.grid.len();
        let part = |lo: usize, hi: usize| SpectralField {
            grid: u.grid,
            comps: hi - lo,
            coeffs: u.coeffs[lo * len..hi * len].to_vec(),
        };
        Ok(State {
            t,
            a: part(0, 1),
            upsilon: part(1, d + 1),
            theta: part(d + 1, d + 2),
        })
    }

    /// Squared `L^2` norm of the whole triple.
    pub fn l2_norm_sq(&self) -> f64 {
        self.a.l2_norm_sq() + self.upsilon.l2_norm_sq() + self.theta.l2_norm_sq()
    }
}

/// Per-mode values `[a, υ_1, υ_2, υ_3, θ]`; `υ_3` is unused in 2-d.
pub type ModeValues = [num_complex::Complex64; 5];

impl State {
    /// Applies `f(flat_index, values)` to every Fourier mode in parallel and
    /// returns the transformed state (same time stamp).
    pub fn map_modes<F>(&self, f: F) -> State
    where
        F: Fn(usize, &mut ModeValues) + Sync,
    {
        use rayon::prelude::*;
        let grid = self.grid();
        let len = grid.len();
        let d = grid.d;
        let zero = num_complex::Complex64::new(0.0, 0.0);
        let vals: Vec<ModeValues> = (0..len)
            .into_par_iter()
            .map(|idx| {
                let mut v = [zero; 5];
                v[0] = self.a.coeffs[idx];
                for i in 0..d {
                    v[1 + i] = self.upsilon.coeffs[i * len + idx];
                }
                v[4] = self.theta.coeffs[idx];
                f(idx, &mut v);
                v
            })
            .collect();
        let mut out = self.clone();
        out.a
            .coeffs
            .par_iter_mut()
            .zip(vals.par_iter())
            .for_each(|(z, v)| *z = v[0]);
        out.theta
            .coeffs
            .par_iter_mut()
            .zip(vals.par_iter())
            .for_each(|(z, v)| *z = v[4]);
        out.upsilon
            .coeffs
            .par_chunks_mut(len)
            .enumerate()
            .for_each(|(i, comp)| {
                comp.iter_mut().zip(&vals).for_each(|(z, v)| *z = v[1 + i]);
            });
        out
    }
}
