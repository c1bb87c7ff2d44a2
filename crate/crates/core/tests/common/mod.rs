//! Test-only oracles, independent of the library's solvers: plain row-major
//! `Vec<Vec<f64>>` matrices, an explicit `F`, and Gauss-Jordan inversion
//! with partial pivoting.
#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};

pub type Dense = Vec<Vec<f64>>;

pub fn identity(n: usize) -> Dense {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

/// `F_l` built row by row.
pub fn second_diff(l: usize) -> Dense {
    let mut f = vec![vec![0.0; l]; l - 2];
    for (i, row) in f.iter_mut().enumerate() {
        row[i] = 1.0;
        row[i + 1] = -2.0;
        row[i + 2] = 1.0;
    }
    f
}

pub fn transpose(a: &Dense) -> Dense {
    let (r, c) = (a.len(), a[0].len());
    (0..c).map(|j| (0..r).map(|i| a[i][j]).collect()).collect()
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    let mut out = vec![vec![0.0; m]; n];
    for i in 0..n {
        for p in 0..k {
            let aip = a[i][p];
            for j in 0..m {
                out[i][j] += aip * b[p][j];
            }
        }
    }
    out
}

pub fn matvec(a: &Dense, x: &[f64]) -> Vec<f64> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(r, v)| r * v).sum())
        .collect()
}

pub fn sub(a: &Dense, b: &Dense) -> Dense {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x - y).collect())
        .collect()
}

pub fn trace(a: &Dense) -> f64 {
    (0..a.len()).map(|i| a[i][i]).sum()
}

/// `I + λ FᵀF` from an explicit `F`.
pub fn brute_penalty(l: usize, lambda: f64) -> Dense {
    let f = second_diff(l);
    let ftf = matmul(&transpose(&f), &f);
    let mut s = identity(l);
    for i in 0..l {
        for j in 0..l {
            s[i][j] += lambda * ftf[i][j];
        }
    }
    s
}

/// Gauss-Jordan inverse with partial pivoting.
pub fn gauss_jordan_inverse(a: &Dense) -> Dense {
    let n = a.len();
    let mut m: Dense = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| m[x][col].abs().total_cmp(&m[y][col].abs()))
            .unwrap();
        m.swap(col, pivot);
        let p = m[col][col];
        assert!(p != 0.0, "singular matrix");
        for v in m[col].iter_mut() {
            *v /= p;
        }
        let pivot_row = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != col {
                let factor = row[col];
                if factor != 0.0 {
                    for (v, pv) in row.iter_mut().zip(&pivot_row) {
                        *v -= factor * pv;
                    }
                }
            }
        }
    }
    m.into_iter().map(|row| row[n..].to_vec()).collect()
}

/// `S_l⁻¹` by Gauss-Jordan on the brute-force penalty.
pub fn oracle_inverse(l: usize, lambda: f64) -> Dense {
    gauss_jordan_inverse(&brute_penalty(l, lambda))
}

/// HP trend `S⁻¹ y` via the Gauss-Jordan inverse.
pub fn oracle_trend(y: &[f64], lambda: f64) -> Vec<f64> {
    matvec(&oracle_inverse(y.len(), lambda), y)
}

pub fn matpow(a: &Dense, n: usize) -> Dense {
    let mut out = identity(a.len());
    for _ in 0..n {
        out = matmul(&out, a);
    }
    out
}

/// `I - S_t⁻¹` via the Gauss-Jordan inverse.
pub fn oracle_cycle_map(t: usize, lambda: f64) -> Dense {
    sub(&identity(t), &oracle_inverse(t, lambda))
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn max_abs(a: &[f64]) -> f64 {
    a.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

/// `max |a - b| / max |b|` (absolute when `b` is zero).
pub fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    let scale = max_abs(b);
    let diff = max_abs_diff(a, b);
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

pub fn dense_max_abs_diff(a: &Dense, b: &Dense) -> f64 {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| max_abs_diff(ra, rb))
        .fold(0.0, f64::max)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal_series(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| StandardNormal.sample(rng)).collect()
}

pub fn uniform_series(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    let u = Uniform::new(0.0, 1.0).unwrap();
    (0..len).map(|_| u.sample(rng)).collect()
}

pub fn nalgebra_to_dense(m: &nalgebra::DMatrix<f64>) -> Dense {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

/// Path of a fixture under `tests/data`.
pub fn fixture(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("data")
        .join(name)
}
