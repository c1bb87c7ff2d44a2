//! The HP filter family.
//!
//! | filter | two-sided | iterated | entry point |
//! |--------|-----------|----------|-------------|
//! | HP     | yes       | no       | [`hp_direct`], [`IncrementalHpState`] |
//! | bHP    | yes       | yes      | [`bhp`] |
//! | OHP    | no        | no       | [`ohp`] |
//! | SOHP   | no        | yes      | [`sohp`] |
//!
//! All four are linear in the input series and pass affine series through
//! unchanged.

mod criterion;
mod hp;
mod onesided;

pub use criterion::{si_value, TraceCache};
pub use hp::{bhp, hp_direct, hp_incremental, IncrementalHpState};
pub use onesided::{ohp, sohp, sohp_with_cache, SohpResult};

use crate::error::{check_smoothing, FilterError, Result};

/// Conventional smoothing for monthly data.
pub const MONTHLY_SMOOTHING: f64 = 14400.0;

/// Settings shared by the iterated filters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterConfig {
    pub smoothing: f64,
    /// Upper bound on SOHP stages probed by the stopping index.
    pub max_iterations: usize,
    /// First horizon in the trace sum of the stopping index.
    pub si_horizon_start: usize,
}

impl Default for FilterConfig {
    fn default() -> Self {
        Self {
            smoothing: MONTHLY_SMOOTHING,
            max_iterations: 20,
            si_horizon_start: 3,
        }
    }
}

impl FilterConfig {
    pub fn new(smoothing: f64, max_iterations: usize) -> Result<Self> {
        let cfg = Self {
            smoothing,
            max_iterations,
            ..Self::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        check_smoothing(self.smoothing)?;
        if self.max_iterations == 0 {
            return Err(FilterError::ZeroIterations);
        }
        Ok(())
    }
}

/// Observations split into trend and cycle, with `cycle = observations - trend`.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    observations: Vec<f64>,
    trend: Vec<f64>,
    cycle: Vec<f64>,
}

impl Decomposition {
    /// Builds the decomposition from a trend; the cycle is `y - g`.
    ///
    /// # Panics
    /// If the two vectors differ in length.
    pub fn from_trend(observations: Vec<f64>, trend: Vec<f64>) -> Self {
        assert_eq!(observations.len(), trend.len(), "trend length");
        let cycle = observations
            .iter()
            .zip(&trend)
            .map(|(y, g)| y - g)
            .collect();
        Self {
            observations,
            trend,
            cycle,
        }
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn observations(&self) -> &[f64] {
        &self.observations
    }

    pub fn trend(&self) -> &[f64] {
        &self.trend
    }

    pub fn cycle(&self) -> &[f64] {
        &self.cycle
    }

    pub fn into_parts(self) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        (self.observations, self.trend, self.cycle)
    }
}

pub(crate) fn l1_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).sum()
}
