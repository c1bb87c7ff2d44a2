//! Rank-one growth of the inverse penalty matrix.
//!
//! Appending one observation turns `S_{t-1}` into
//! `diag(S_{t-1}, 1) + λ p_t p_tᵀ` with `p_t = [0, …, 0, 1, -2, 1]ᵀ`, so
//!
//! ```text
//! S_t⁻¹ = diag(S_{t-1}⁻¹, 1) - δ_t q_t q_tᵀ
//! q_t   = diag(S_{t-1}⁻¹, 1) p_t
//! δ_t   = λ / (1 + λ p_tᵀ q_t)
//! ```
//!
//! `p_t` has three non-zeros, so `q_t` only reads the last two columns of
//! `S_{t-1}⁻¹` plus the trailing one. [`InverseTail`] keeps exactly those two
//! columns, which is all the trend recursion needs, at `O(t)` per step.
//! [`woodbury_step`] materialises the full dense inverse at `O(t²)` per step.
//!
//! `δ_t` is written as `λ / (1 + λ pᵀq)` rather than `1 / (1/λ + pᵀq)`; the
//! two agree for `λ > 0` and the former gives `δ_t = 0` at `λ = 0`.

use nalgebra::DMatrix;

use crate::error::{check_len, check_smoothing, FilterError, Result};

/// Dense symmetric `S_t⁻¹` at horizon `t ≥ 3`.
#[derive(Debug, Clone, PartialEq)]
pub struct InverseState {
    values: DMatrix<f64>,
}

impl InverseState {
    pub fn horizon(&self) -> usize {
        self.values.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.values
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[(row, col)]
    }

    /// Trailing two columns, in the form consumed by the trend recursion.
    pub fn tail(&self) -> InverseTail {
        let t = self.horizon();
        InverseTail {
            smoothing: None,
            penultimate: self.values.column(t - 2).iter().copied().collect(),
            last: self.values.column(t - 1).iter().copied().collect(),
            gain: Vec::new(),
        }
    }
}

/// Output of one Woodbury step.
#[derive(Debug, Clone, PartialEq)]
pub struct WoodburyStep {
    pub inverse: InverseState,
    pub q: Vec<f64>,
    pub delta: f64,
}

/// Numerator of the closed-form `S_3⁻¹`; divide by `6λ + 1`.
fn s3_numerator(smoothing: f64) -> [[f64; 3]; 3] {
    let l = smoothing;
    [
        [5.0 * l + 1.0, 2.0 * l, -l],
        [2.0 * l, 2.0 * l + 1.0, 2.0 * l],
        [-l, 2.0 * l, 5.0 * l + 1.0],
    ]
}

/// `S_3⁻¹ = (6λ+1)⁻¹ [[5λ+1, 2λ, -λ], [2λ, 2λ+1, 2λ], [-λ, 2λ, 5λ+1]]`.
pub fn s3_inverse(smoothing: f64) -> Result<InverseState> {
    check_smoothing(smoothing)?;
    let num = s3_numerator(smoothing);
    let den = 6.0 * smoothing + 1.0;
    let values = DMatrix::from_fn(3, 3, |i, j| num[i][j] / den);
    Ok(InverseState { values })
}

/// Applies `S_3⁻¹` to three observations without rounding the matrix first,
/// so integer-valued affine input is reproduced exactly.
pub(crate) fn s3_apply(smoothing: f64, y: [f64; 3]) -> [f64; 3] {
    let num = s3_numerator(smoothing);
    let den = 6.0 * smoothing + 1.0;
    let mut out = [0.0; 3];
    for (o, row) in out.iter_mut().zip(num.iter()) {
        *o = (row[0] * y[0] + row[1] * y[1] + row[2] * y[2]) / den;
    }
    out
}

/// `q_t` from the last two columns of `S_{t-1}⁻¹`; returns `(q_t, p_tᵀq_t)`.
fn gain(penultimate: &[f64], last: &[f64]) -> (Vec<f64>, f64) {
    // p_t hits columns t-3, t-2 of the (t-1)-block and the trailing 1.
    let mut q: Vec<f64> = penultimate
        .iter()
        .zip(last)
        .map(|(a, b)| a - 2.0 * b)
        .collect();
    q.push(1.0);
    let t = q.len();
    let pq = q[t - 3] - 2.0 * q[t - 2] + q[t - 1];
    (q, pq)
}

fn delta(smoothing: f64, pq: f64) -> f64 {
    smoothing / (1.0 + smoothing * pq)
}

/// Grows `S_{t-1}⁻¹` to `S_t⁻¹`.
///
/// Only the upper triangle is computed and then mirrored, so the result is
/// exactly symmetric.
pub fn woodbury_step(prev: &InverseState, smoothing: f64) -> Result<WoodburyStep> {
    check_smoothing(smoothing)?;
    check_len(prev.horizon(), 3)?;
    let n = prev.horizon();
    let t = n + 1;
    let (q, pq) = gain(
        prev.values.column(n - 2).as_slice(),
        prev.values.column(n - 1).as_slice(),
    );
    let delta = delta(smoothing, pq);

    let mut values = DMatrix::zeros(t, t);
    values.view_mut((0, 0), (n, n)).copy_from(&prev.values);
    values[(n, n)] = 1.0;
    for j in 0..t {
        let wj = delta * q[j];
        for i in 0..=j {
            let v = values[(i, j)] - wj * q[i];
            values[(i, j)] = v;
            values[(j, i)] = v;
        }
    }
    Ok(WoodburyStep {
        inverse: InverseState { values },
        q,
        delta,
    })
}

/// Last two columns of `S_t⁻¹`: enough to run the trend recursion.
#[derive(Debug, Clone, PartialEq)]
pub struct InverseTail {
    smoothing: Option<f64>,
    penultimate: Vec<f64>,
    last: Vec<f64>,
    gain: Vec<f64>,
}

impl InverseTail {
    /// Trailing columns of the closed-form `S_3⁻¹`.
    pub fn seed(smoothing: f64) -> Result<Self> {
        let mut tail = s3_inverse(smoothing)?.tail();
        tail.smoothing = Some(smoothing);
        Ok(tail)
    }

    pub fn horizon(&self) -> usize {
        self.last.len()
    }

    /// Column `t-2` of `S_t⁻¹` (0-based).
    pub fn penultimate(&self) -> &[f64] {
        &self.penultimate
    }

    /// Column `t-1` of `S_t⁻¹` (0-based).
    pub fn last(&self) -> &[f64] {
        &self.last
    }

    /// `q_t` of the last advance (empty before the first).
    pub fn gain(&self) -> &[f64] {
        &self.gain
    }

    /// Advances to horizon `t + 1`, returning `(q_{t+1}, δ_{t+1})`.
    ///
    /// The new trailing columns are `[last; 0] - δ q q_{t-1}` and
    /// `e_t - δ q` (0-based), both `O(t)`. Buffers are reused across steps.
    pub fn advance(&mut self, smoothing: f64) -> Result<(&[f64], f64)> {
        check_smoothing(smoothing)?;
        if let Some(own) = self.smoothing {
            if own != smoothing {
                return Err(FilterError::InvalidSmoothing(smoothing));
            }
        }
        let t = self.last.len() + 1;
        let q = &mut self.gain;
        q.clear();
        q.extend(
            self.penultimate
                .iter()
                .zip(&self.last)
                .map(|(a, b)| a - 2.0 * b),
        );
        q.push(1.0);
        let delta = delta(smoothing, q[t - 3] - 2.0 * q[t - 2] + q[t - 1]);
        let pivot = delta * q[t - 2];

        std::mem::swap(&mut self.penultimate, &mut self.last);
        self.penultimate.push(0.0);
        for (p, qi) in self.penultimate.iter_mut().zip(q.iter()) {
            *p -= pivot * qi;
        }
        self.last.clear();
        self.last.extend(q.iter().map(|qi| -delta * qi));
        self.last[t - 1] += 1.0;
        Ok((&self.gain, delta))
    }
}
