use nalgebra::{DMatrix, DVector};

use super::eigen::SymmetricBands;
use crate::error::{check_len, check_smoothing, FilterError, Result};

/// Stencil of one row of the second-difference operator.
const STENCIL: [f64; 3] = [1.0, -2.0, 1.0];

/// The `(l-2) × l` second-difference operator `F_l`.
///
/// Row `i` carries `1, -2, 1` in columns `i, i+1, i+2`, so affine sequences
/// are mapped to zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SecondDiffOperator {
    len: usize,
}

impl SecondDiffOperator {
    pub fn new(len: usize) -> Result<Self> {
        check_len(len, 3)?;
        Ok(Self { len })
    }

    /// Number of columns `l`.
    pub fn len(&self) -> usize {
        self.len
    }

    /// Number of rows, `l - 2`.
    pub fn rows(&self) -> usize {
        self.len - 2
    }

    pub fn apply(&self, y: &[f64]) -> Result<Vec<f64>> {
        if y.len() != self.len {
            return Err(FilterError::DimensionMismatch {
                expected: self.len,
                got: y.len(),
            });
        }
        Ok(y.windows(3).map(|w| w[0] - 2.0 * w[1] + w[2]).collect())
    }

    /// Dense realisation of `F_l`.
    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut f = DMatrix::zeros(self.rows(), self.len);
        for i in 0..self.rows() {
            for (k, &c) in STENCIL.iter().enumerate() {
                f[(i, i + k)] = c;
            }
        }
        f
    }
}

/// Second differences `y[i] - 2 y[i+1] + y[i+2]`.
pub fn second_diff_apply(y: &[f64]) -> Result<Vec<f64>> {
    SecondDiffOperator::new(y.len())?.apply(y)
}

/// Dense `S_l = I_l + λ F_lᵀ F_l`.
#[derive(Debug, Clone, PartialEq)]
pub struct PenaltyMatrix {
    smoothing: f64,
    values: DMatrix<f64>,
}

impl PenaltyMatrix {
    pub fn len(&self) -> usize {
        self.values.nrows()
    }

    pub fn smoothing(&self) -> f64 {
        self.smoothing
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
}

/// Builds `S_l` by accumulating `λ pᵢ pᵢᵀ` for every stencil row.
///
/// Entries `(i, j)` and `(j, i)` receive the same products in the same order,
/// so the result is exactly symmetric.
pub fn penalty_matrix(len: usize, smoothing: f64) -> Result<PenaltyMatrix> {
    check_len(len, 3)?;
    check_smoothing(smoothing)?;
    let mut values = DMatrix::identity(len, len);
    for row in 0..len - 2 {
        for (a, &ca) in STENCIL.iter().enumerate() {
            for (b, &cb) in STENCIL.iter().enumerate() {
                values[(row + a, row + b)] += smoothing * (ca * cb);
            }
        }
    }
    Ok(PenaltyMatrix { smoothing, values })
}

/// The three distinct diagonals of `S_l` (or of `Fᵀ F` when `smoothing = 1`
/// and `identity = false`).
pub(crate) fn kernel_bands(len: usize, smoothing: f64, identity: bool) -> SymmetricBands {
    let mut diag = vec![if identity { 1.0 } else { 0.0 }; len];
    let mut off1 = vec![0.0; len.saturating_sub(1)];
    let mut off2 = vec![0.0; len.saturating_sub(2)];
    for row in 0..len.saturating_sub(2) {
        for (a, &ca) in STENCIL.iter().enumerate() {
            diag[row + a] += smoothing * (ca * ca);
        }
        off1[row] += smoothing * (STENCIL[0] * STENCIL[1]);
        off1[row + 1] += smoothing * (STENCIL[1] * STENCIL[2]);
        off2[row] += smoothing * (STENCIL[0] * STENCIL[2]);
    }
    SymmetricBands::new(diag, off1, off2)
}

/// Banded storage of `S_l`: main diagonal `1 + λ{1, 5, 6, …, 6, 5, 1}`,
/// first off-diagonal `λ{-2, -4, …, -4, -2}`, second off-diagonal `λ`.
pub fn penalty_bands(len: usize, smoothing: f64) -> Result<SymmetricBands> {
    check_len(len, 3)?;
    check_smoothing(smoothing)?;
    Ok(kernel_bands(len, smoothing, true))
}

/// Dense Cholesky factorisation of `S_l`, reusable across right-hand sides.
///
/// This is the general `O(l³)` route: it does not exploit the band structure.
pub struct DirectSolver {
    len: usize,
    factor: nalgebra::Cholesky<f64, nalgebra::Dyn>,
}

impl DirectSolver {
    pub fn new(s: &PenaltyMatrix) -> Result<Self> {
        let factor = s
            .values
            .clone()
            .cholesky()
            .ok_or(FilterError::NotPositiveDefinite)?;
        Ok(Self {
            len: s.len(),
            factor,
        })
    }

    pub fn solve(&self, y: &[f64]) -> Result<Vec<f64>> {
        if y.len() != self.len {
            return Err(FilterError::DimensionMismatch {
                expected: self.len,
                got: y.len(),
            });
        }
        let rhs = DVector::from_column_slice(y);
        Ok(self.factor.solve(&rhs).as_slice().to_vec())
    }
}

/// Solves `S g = y` with a dense Cholesky factorisation (no explicit inverse).
pub fn solve_direct(s: &PenaltyMatrix, y: &[f64]) -> Result<Vec<f64>> {
    if y.len() != s.len() {
        return Err(FilterError::DimensionMismatch {
            expected: s.len(),
            got: y.len(),
        });
    }
    DirectSolver::new(s)?.solve(y)
}

/// Solves `S_l g = y` in `O(l)` with a banded Cholesky factorisation.
///
/// Same answer as [`solve_direct`] up to rounding; this is the route to use
/// for long series outside of benchmarks.
pub fn solve_banded(smoothing: f64, y: &[f64]) -> Result<Vec<f64>> {
    let n = y.len();
    let bands = penalty_bands(n, smoothing)?;
    let (d, e, f) = (bands.diag(), bands.off1(), bands.off2());

    // L has bandwidth 2: l0 on the diagonal, l1 and l2 below it.
    let mut l0 = vec![0.0; n];
    let mut l1 = vec![0.0; n];
    let mut l2 = vec![0.0; n];
    for i in 0..n {
        if i >= 2 {
            l2[i] = f[i - 2] / l0[i - 2];
        }
        if i >= 1 {
            let cross = if i >= 2 { l2[i] * l1[i - 1] } else { 0.0 };
            l1[i] = (e[i - 1] - cross) / l0[i - 1];
        }
        let pivot = d[i] - l2[i] * l2[i] - l1[i] * l1[i];
        if pivot <= 0.0 {
            return Err(FilterError::NotPositiveDefinite);
        }
        l0[i] = pivot.sqrt();
    }

    let mut z = vec![0.0; n];
    for i in 0..n {
        let mut acc = y[i];
        if i >= 1 {
            acc -= l1[i] * z[i - 1];
        }
        if i >= 2 {
            acc -= l2[i] * z[i - 2];
        }
        z[i] = acc / l0[i];
    }
    let mut g = vec![0.0; n];
    for i in (0..n).rev() {
        let mut acc = z[i];
        if i + 1 < n {
            acc -= l1[i + 1] * g[i + 1];
        }
        if i + 2 < n {
            acc -= l2[i + 2] * g[i + 2];
        }
        g[i] = acc / l0[i];
    }
    Ok(g)
}
