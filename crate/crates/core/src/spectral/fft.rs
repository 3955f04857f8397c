//! N-dimensional complex FFT on flat row-major cubes.
//!
//! Each pass transforms the contiguous last axis and then rotates the axes
//! (an `n^{d-1} x n` transpose) so that after `d` passes every axis has been
//! transformed and the original layout is restored.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use once_cell::sync::Lazy;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Inverse,
}

type PlanKey = (usize, Direction);
type PlanCache = HashMap<PlanKey, Arc<dyn Fft<f64>>>;

static PLANS: Lazy<Mutex<PlanCache>> = Lazy::new(|| Mutex::new(HashMap::new()));

fn plan(n: usize, dir: Direction) -> Arc<dyn Fft<f64>> {
    let mut cache = PLANS.lock().expect("fft plan cache poisoned");
    cache
        .entry((n, dir))
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            match dir {
                Direction::Forward => planner.plan_fft_forward(n),
                Direction::Inverse => planner.plan_fft_inverse(n),
            }
        })
        .clone()
}

/// Lines handed to one rayon task per FFT pass.
const LINES_PER_TASK: usize = 64;

/// Unnormalised d-dimensional DFT of `data` (length `n^d`), in place.
pub fn fft_in_place(data: &mut [Complex64], n: usize, d: usize, dir: Direction) {
    assert_eq!(data.len(), n.pow(d as u32), "fft buffer length");
    let fft = plan(n, dir);
    let rows = data.len() / n;
    let mut tmp = vec![Complex64::new(0.0, 0.0); data.len()];
    for _ in 0..d {
        data.par_chunks_mut(n * LINES_PER_TASK).for_each(|chunk| {
            let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
            fft.process_with_scratch(chunk, &mut scratch);
        });
        // out[i * rows + m] = in[m * n + i]
        {
            let src: &[Complex64] = data;
            tmp.par_chunks_mut(rows).enumerate().for_each(|(i, out)| {
                for (m, o) in out.iter_mut().enumerate() {
                    *o = src[m * n + i];
                }
            });
        }
        data.copy_from_slice(&tmp);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn naive_dft(data: &[Complex64], n: usize, d: usize, sign: f64) -> Vec<Complex64> {
        let len = data.len();
        let coords = |mut idx: usize| {
            let mut c = vec![0usize; d];
            for a in (0..d).rev() {
                c[a] = idx % n;
                idx /= n;
            }
            c
        };
        (0..len)
            .map(|k| {
                let kc = coords(k);
                let mut acc = Complex64::new(0.0, 0.0);
                for (x, v) in data.iter().enumerate() {
                    let xc = coords(x);
                    let phase: f64 = kc.iter().zip(&xc).map(|(a, b)| (a * b) as f64).sum();
                    acc += v * Complex64::from_polar(1.0, sign * 2.0 * PI * phase / n as f64);
                }
                acc
            })
            .collect()
    }

    #[test]
    fn matches_naive_dft_2d_and_3d() {
        for d in [2usize, 3] {
            let n: usize = 8;
            let len = n.pow(d as u32);
            let data: Vec<Complex64> = (0..len)
                .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
                .collect();
            let mut fast = data.clone();
            fft_in_place(&mut fast, n, d, Direction::Forward);
            let slow = naive_dft(&data, n, d, -1.0);
            for (a, b) in fast.iter().zip(&slow) {
                assert!((a - b).norm() < 1e-10, "{a} vs {b}");
            }
            fft_in_place(&mut fast, n, d, Direction::Inverse);
            for (a, b) in fast.iter().zip(&data) {
                assert!((a / len as f64 - b).norm() < 1e-13);
            }
        }
    }
}
