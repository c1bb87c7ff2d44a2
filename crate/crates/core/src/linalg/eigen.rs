//! Eigenvalues of symmetric pentadiagonal matrices.
//!
//! Givens rotations chase the second off-diagonal out of the matrix
//! (Rutishauser band reduction), leaving a symmetric tridiagonal matrix whose
//! eigenvalues come from implicit QL with Wilkinson shifts. Both phases cost
//! `O(n²)`, against `O(n³)` for a dense eigensolver.

use crate::error::{FilterError, Result};

/// Symmetric matrix with bandwidth two, stored by diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricBands {
    diag: Vec<f64>,
    off1: Vec<f64>,
    off2: Vec<f64>,
}

impl SymmetricBands {
    /// `off1[i]` is entry `(i+1, i)`, `off2[i]` is entry `(i+2, i)`.
    ///
    /// # Panics
    /// If the diagonal lengths are inconsistent.
    pub fn new(diag: Vec<f64>, off1: Vec<f64>, off2: Vec<f64>) -> Self {
        let n = diag.len();
        assert_eq!(off1.len(), n.saturating_sub(1), "first off-diagonal length");
        assert_eq!(
            off2.len(),
            n.saturating_sub(2),
            "second off-diagonal length"
        );
        Self { diag, off1, off2 }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off1(&self) -> &[f64] {
        &self.off1
    }

    pub fn off2(&self) -> &[f64] {
        &self.off2
    }
}

/// Working storage for band reduction: row `i` keeps entries `(i, i..=i+3)`.
/// Three super-diagonals leave room for the bulge created by each rotation.
struct BandWork {
    n: usize,
    rows: Vec<[f64; 4]>,
}

impl BandWork {
    const WIDTH: usize = 3;

    fn from_bands(b: &SymmetricBands) -> Self {
        let n = b.len();
        let mut rows = vec![[0.0; 4]; n];
        for i in 0..n {
            rows[i][0] = b.diag[i];
            if i + 1 < n {
                rows[i][1] = b.off1[i];
            }
            if i + 2 < n {
                rows[i][2] = b.off2[i];
            }
        }
        Self { n, rows }
    }

    fn get(&self, i: usize, j: usize) -> f64 {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        let k = b - a;
        if k > Self::WIDTH {
            0.0
        } else {
            self.rows[a][k]
        }
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        let k = b - a;
        debug_assert!(
            k <= Self::WIDTH || v == 0.0,
            "fill outside band at ({a}, {b})"
        );
        if k <= Self::WIDTH {
            self.rows[a][k] = v;
        }
    }

    /// `A ← Gᵀ A G` for a rotation in the `(p, p+1)` plane.
    fn rotate(&mut self, p: usize, c: f64, s: f64) {
        let q = p + 1;
        let lo = p.saturating_sub(Self::WIDTH);
        let hi = (q + Self::WIDTH).min(self.n - 1);
        for k in lo..=hi {
            if k == p || k == q {
                continue;
            }
            let akp = self.get(k, p);
            let akq = self.get(k, q);
            self.set(k, p, c * akp - s * akq);
            self.set(k, q, s * akp + c * akq);
        }
        let app = self.get(p, p);
        let aqq = self.get(q, q);
        let apq = self.get(p, q);
        self.set(p, p, c * c * app - 2.0 * c * s * apq + s * s * aqq);
        self.set(q, q, s * s * app + 2.0 * c * s * apq + c * c * aqq);
        self.set(p, q, c * s * (app - aqq) + (c * c - s * s) * apq);
    }

    /// Zeroes entry `(r, q)` (`r < q - 1`) with a rotation in plane `(q-1, q)`.
    fn annihilate(&mut self, r: usize, q: usize) {
        let a = self.get(r, q - 1);
        let b = self.get(r, q);
        if b == 0.0 {
            return;
        }
        let h = a.hypot(b);
        self.rotate(q - 1, a / h, -b / h);
        self.set(r, q, 0.0);
    }

    fn reduce(mut self) -> (Vec<f64>, Vec<f64>) {
        let n = self.n;
        for j in 0..n.saturating_sub(2) {
            // Remove (j, j+2); each rotation in plane (q-1, q) pushes a bulge
            // to (q-1, q+2), which the next rotation removes.
            let (mut r, mut q) = (j, j + 2);
            while q < n {
                self.annihilate(r, q);
                r = q - 1;
                q += 2;
                if q >= n || self.get(r, q) == 0.0 {
                    break;
                }
            }
        }
        let diag = (0..n).map(|i| self.rows[i][0]).collect();
        let off = (0..n.saturating_sub(1)).map(|i| self.rows[i][1]).collect();
        (diag, off)
    }
}

/// Eigenvalues of a symmetric tridiagonal matrix, ascending.
///
/// `diag` has length `n`, `off` has length `n - 1` (`off[i]` couples `i` and
/// `i + 1`).
pub fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    assert_eq!(off.len(), n.saturating_sub(1), "off-diagonal length");
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);

    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let scale = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * scale {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > 60 {
                return Err(FilterError::NoConvergence);
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Eigenvalues of a symmetric pentadiagonal matrix, ascending.
pub fn pentadiagonal_eigenvalues(bands: &SymmetricBands) -> Result<Vec<f64>> {
    let (diag, off) = BandWork::from_bands(bands).reduce();
    tridiagonal_eigenvalues(&diag, &off)
}
