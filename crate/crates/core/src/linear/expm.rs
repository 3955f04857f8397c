//! Matrix exponential for 3x3 real matrices by scaling and squaring with
//! the degree-13 Padé approximant.

use nalgebra::Matrix3;

const B: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

const THETA_13: f64 = 5.371920351148152;

fn one_norm(a: &Matrix3<f64>) -> f64 {
    (0..3)
        .map(|c| a.column(c).iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `exp(A)`.
pub fn expm3(a: &Matrix3<f64>) -> Matrix3<f64> {
    let norm = one_norm(a);
    if norm == 0.0 {
        return Matrix3::identity();
    }
    let s = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil() as i32
    } else {
        0
    };
    let a = a / 2f64.powi(s);
    let id = Matrix3::identity();
    let a2 = a * a;
    let a4 = a2 * a2;
    let a6 = a4 * a2;
    let u = a
        * (a6 * (a6 * B[13] + a4 * B[11] + a2 * B[9])
            + a6 * B[7]
            + a4 * B[5]
            + a2 * B[3]
            + id * B[1]);
    let v =
        a6 * (a6 * B[12] + a4 * B[10] + a2 * B[8]) + a6 * B[6] + a4 * B[4] + a2 * B[2] + id * B[0];
    let mut r = (v - u)
        .lu()
        .solve(&(v + u))
        .expect("Padé denominator is nonsingular for scaled arguments");
    for _ in 0..s {
        r = r * r;
    }
    r
}

/// Spectral (largest singular value) norm.
pub fn op_norm(m: &Matrix3<f64>) -> f64 {
    m.singular_values().max()
}

#[cfg(test)]
pub(crate) fn taylor_oracle(a: &Matrix3<f64>) -> Matrix3<f64> {
    // 60-term Taylor series after scaling to norm ≤ 1/2, then squaring
    let norm = one_norm(a);
    let s = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let a = a / 2f64.powi(s);
    let mut term = Matrix3::identity();
    let mut sum = Matrix3::identity();
    for k in 1..=60 {
        term = term * a / k as f64;
        sum += term;
    }
    for _ in 0..s {
        sum = sum * sum;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn agrees_with_taylor_oracle() {
        let cases = [
            Matrix3::new(0.0, -1.0, 0.0, 1.0, -1.0, 1.0, 0.0, -1.0, -1.0),
            Matrix3::new(0.3, 2.0, -1.0, 0.0, -4.0, 7.0, 1.5, 0.2, -9.0) * 3.0,
            Matrix3::new(1e-9, 0.0, 0.0, 0.0, 0.0, 2e-9, 0.0, 0.0, 0.0),
        ];
        for a in cases {
            let e = expm3(&a);
            let o = taylor_oracle(&a);
            assert!((e - o).norm() <= 1e-12 * o.norm().max(1.0), "{a}");
        }
    }

    #[test]
    fn diagonal_and_nilpotent() {
        let d = Matrix3::from_diagonal(&nalgebra::Vector3::new(-1.0, 0.5, -20.0));
        let e = expm3(&d);
        for (i, x) in [-1.0f64, 0.5, -20.0].iter().enumerate() {
            assert!((e[(i, i)] - x.exp()).abs() < 1e-14 * x.exp().max(1.0));
        }
        let n = Matrix3::new(0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0);
        let e = expm3(&n);
        let expect = Matrix3::new(1.0, 1.0, 0.5, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0);
        assert!((e - expect).norm() < 1e-15);
    }
}
