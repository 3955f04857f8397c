//! Small numeric helpers shared across modules.

use rayon::prelude::*;

/// Chunk length for deterministic parallel reductions.
const REDUCE_CHUNK: usize = 4096;

/// Parallel sum whose result does not depend on the thread count: partial
/// sums are taken over fixed-size chunks and combined sequentially.
pub fn det_sum<T, F>(items: &[T], f: F) -> f64
where
    T: Sync,
    F: Fn(&T) -> f64 + Sync,
{
    let partials: Vec<f64> = items
        .par_chunks(REDUCE_CHUNK)
        .map(|chunk| chunk.iter().map(&f).sum::<f64>())
        .collect();
    partials.iter().sum()
}

/// Deterministic parallel sum over an index range.
pub fn det_sum_range<F>(len: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    let chunks = len.div_ceil(REDUCE_CHUNK);
    let partials: Vec<f64> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * REDUCE_CHUNK;
            let hi = (lo + REDUCE_CHUNK).min(len);
            (lo..hi).map(&f).sum::<f64>()
        })
        .collect();
    partials.iter().sum()
}

/// Deterministic parallel maximum over an index range (NaN-free inputs).
pub fn det_max_range<F>(len: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    (0..len)
        .into_par_iter()
        .map(f)
        .reduce(|| f64::NEG_INFINITY, f64::max)
}

/// Japanese bracket `<t> = sqrt(1 + t^2)`.
pub fn bracket(t: f64) -> f64 {
    (1.0 + t * t).sqrt()
}

/// Fixed 17-significant-digit formatting used by every text artifact.
pub fn fmt_f64(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{x:.16e}")
}

/// Formats a Lebesgue exponent as it appears in CSV files: `2`, `4.5`, `inf`.
pub fn fmt_exponent(p: f64) -> String {
    if p.is_infinite() {
        "inf".into()
    } else {
        format!("{p}")
    }
}

pub fn parse_exponent(s: &str) -> Option<f64> {
    match s.trim() {
        "inf" | "Inf" | "infinity" => Some(f64::INFINITY),
        other => other.parse().ok(),
    }
}

/// Geometric grid `t0 * q^m` truncated at `t_end` (inclusive up to rounding).
pub fn geometric_times(t0: f64, q: f64, t_end: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut m = 0i32;
    loop {
        let t = t0 * q.powi(m);
        if t > t_end * (1.0 + 1e-12) {
            break;
        }
        out.push(t);
        m += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_sum_matches_serial() {
        let v: Vec<f64> = (0..10_000).map(|i| (i as f64).sin()).collect();
        let serial: f64 = v.chunks(REDUCE_CHUNK).map(|c| c.iter().sum::<f64>()).sum();
        assert_eq!(det_sum(&v, |x| *x), serial);
        assert_eq!(det_sum_range(v.len(), |i| v[i]), serial);
    }

    #[test]
    fn geometric_grid_count() {
        let t = geometric_times(0.1, 1.25, 60.0);
        let bound = 1.0 + (60.0f64 / 0.1).ln() / 1.25f64.ln();
        assert!((t.len() as f64) <= bound);
        assert_eq!(t.len(), 29);
        assert!(t.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn exponent_roundtrip() {
        for p in [1.0, 2.0, 4.5, f64::INFINITY] {
            assert_eq!(parse_exponent(&fmt_exponent(p)), Some(p));
        }
    }
}
