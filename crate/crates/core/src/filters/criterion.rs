//! The stopping index used to pick the number of SOHP stages:
//!
//! ```text
//! SI(n) = ‖c⁽ⁿ⁾‖₁ / ‖c⁽¹⁾‖₁ + 1/(l-2) Σ_{t=3..l} tr(I - Bₜⁿ) / tr(Bₜ)
//! ```
//!
//! with `Bₜ = I - Sₜ⁻¹`. The trace term depends only on `(l, λ)`. If `νᵢ` are
//! the eigenvalues of `Fₜᵀ Fₜ`, those of `Bₜ` are `μᵢ = λνᵢ / (1 + λνᵢ)`, so
//! `tr(I - Bₜⁿ) = Σᵢ (1 - μᵢⁿ)` is cheap for every `n` once the spectra are
//! cached. Working from `FᵀF` rather than `Sₜ` keeps the small `μᵢ` accurate
//! to relative precision.

use std::ops::RangeInclusive;

use super::l1_norm;
use crate::error::{check_len, check_smoothing, FilterError, Result};
use crate::linalg::penalty::kernel_bands;
use crate::linalg::pentadiagonal_eigenvalues;

/// Spectra of `Bₜ = I - Sₜ⁻¹` for every horizon `t` in `start..=len`.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceCache {
    len: usize,
    smoothing: f64,
    start: usize,
    eigenvalues: Vec<Vec<f64>>,
    base_traces: Vec<f64>,
}

impl TraceCache {
    /// Cache for horizons `3..=len`.
    pub fn build(len: usize, smoothing: f64) -> Result<Self> {
        Self::build_from(len, smoothing, 3)
    }

    /// Cache for horizons `start..=len`, `3 ≤ start ≤ len`.
    pub fn build_from(len: usize, smoothing: f64, start: usize) -> Result<Self> {
        check_smoothing(smoothing)?;
        check_len(start, 3)?;
        check_len(len, start)?;
        let mut eigenvalues = Vec::with_capacity(len - start + 1);
        let mut base_traces = Vec::with_capacity(len - start + 1);
        for t in start..=len {
            let kernel = pentadiagonal_eigenvalues(&kernel_bands(t, 1.0, false))?;
            let mu: Vec<f64> = kernel
                .into_iter()
                .map(|nu| {
                    let x = smoothing * nu.max(0.0);
                    x / (1.0 + x)
                })
                .collect();
            base_traces.push(mu.iter().sum());
            eigenvalues.push(mu);
        }
        Ok(Self {
            len,
            smoothing,
            start,
            eigenvalues,
            base_traces,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn smoothing(&self) -> f64 {
        self.smoothing
    }

    pub fn horizons(&self) -> RangeInclusive<usize> {
        self.start..=self.len
    }

    fn index(&self, t: usize) -> usize {
        assert!(
            self.horizons().contains(&t),
            "horizon {t} outside {:?}",
            self.horizons()
        );
        t - self.start
    }

    /// Eigenvalues of `Bₜ`, ascending.
    pub fn eigenvalues(&self, t: usize) -> &[f64] {
        &self.eigenvalues[self.index(t)]
    }

    /// `tr(I - Sₜ⁻¹)`.
    pub fn base_trace(&self, t: usize) -> f64 {
        self.base_traces[self.index(t)]
    }

    /// `tr(Mₜ⁽ⁿ⁾) = tr(I - (I - Sₜ⁻¹)ⁿ)`.
    pub fn boosted_trace(&self, t: usize, n: usize) -> f64 {
        let exp = i32::try_from(n).unwrap_or(i32::MAX);
        self.eigenvalues(t)
            .iter()
            .map(|mu| 1.0 - mu.powi(exp))
            .sum()
    }

    /// Second term of the stopping index: the horizon-averaged trace ratio.
    /// Zero when `λ = 0`, where every `tr(Bₜ)` vanishes.
    pub fn trace_term(&self, n: usize) -> f64 {
        if self.smoothing == 0.0 {
            return 0.0;
        }
        let total: f64 = self
            .horizons()
            .map(|t| self.boosted_trace(t, n) / self.base_trace(t))
            .sum();
        total / (self.len - self.start + 1) as f64
    }
}

/// Stopping index for `n` stages given the first and `n`-th cycle residuals.
pub fn si_value(n: usize, c_first: &[f64], c_nth: &[f64], cache: &TraceCache) -> Result<f64> {
    if n == 0 {
        return Err(FilterError::ZeroIterations);
    }
    for v in [c_first, c_nth] {
        if v.len() != cache.len() {
            return Err(FilterError::DimensionMismatch {
                expected: cache.len(),
                got: v.len(),
            });
        }
    }
    let base = l1_norm(c_first);
    if base == 0.0 {
        return Err(FilterError::DegenerateCycle);
    }
    Ok(l1_norm(c_nth) / base + cache.trace_term(n))
}
