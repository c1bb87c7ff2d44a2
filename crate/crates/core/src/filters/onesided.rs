use super::criterion::{si_value, TraceCache};
use super::{l1_norm, FilterConfig, IncrementalHpState};
use crate::error::{check_len, check_smoothing, FilterError, Result};

/// First-stage cycles with `‖c⁽¹⁾‖₁ ≤ DEGENERATE_RTOL · ‖y‖₁` count as zero.
const DEGENERATE_RTOL: f64 = 1e-12;

/// One-sided HP trend: entry `t` is the last point of the HP trend fitted to
/// `y_1..y_t` alone.
///
/// The first two entries copy the observations (no second difference exists
/// yet, so the fit is exact). A single incremental pass gives all prefixes,
/// `O(l²)` in total.
pub fn ohp(y: &[f64], smoothing: f64) -> Result<Vec<f64>> {
    check_smoothing(smoothing)?;
    if y.len() < 3 {
        return Ok(y.to_vec());
    }
    let mut trend = Vec::with_capacity(y.len());
    trend.extend_from_slice(&y[..2]);
    let mut state = IncrementalHpState::init(y[0], y[1], y[2], smoothing)?;
    trend.push(state.latest_trend());
    for &v in &y[3..] {
        state.step(v)?;
        trend.push(state.latest_trend());
    }
    Ok(trend)
}

/// Result of the successive one-sided filter.
#[derive(Debug, Clone, PartialEq)]
pub struct SohpResult {
    pub observations: Vec<f64>,
    /// Per-stage trends `g⁽¹⁾..g⁽ⁿ⁾` for the chosen `n`.
    pub stage_trends: Vec<Vec<f64>>,
    /// Sum of the stage trends.
    pub cumulative_trend: Vec<f64>,
    /// `observations - cumulative_trend`.
    pub final_cycle: Vec<f64>,
    pub chosen_n: usize,
    /// `SI(1)..SI(max_iterations)`; empty when the input is degenerate.
    pub si_values: Vec<f64>,
    /// Set when the first-stage cycle vanished and no index was computed.
    pub degenerate: bool,
}

impl SohpResult {
    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    /// Stopping index at the chosen stage count.
    pub fn chosen_si(&self) -> Option<f64> {
        self.si_values.get(self.chosen_n - 1).copied()
    }
}

/// Successive one-sided HP filter with a freshly built trace cache.
pub fn sohp(y: &[f64], cfg: &FilterConfig) -> Result<SohpResult> {
    cfg.validate()?;
    check_len(y.len(), 3)?;
    check_len(y.len(), cfg.si_horizon_start)?;
    let cache = TraceCache::build_from(y.len(), cfg.smoothing, cfg.si_horizon_start)?;
    sohp_with_cache(y, cfg, &cache)
}

/// Successive one-sided HP filter reusing a trace cache built for
/// `(y.len(), cfg.smoothing)`.
///
/// Stage `i + 1` runs [`ohp`] on the cycle left by stage `i`. Every stage up
/// to `cfg.max_iterations` is computed and scored; the stage count with the
/// smallest index wins, ties going to the smaller count.
pub fn sohp_with_cache(y: &[f64], cfg: &FilterConfig, cache: &TraceCache) -> Result<SohpResult> {
    cfg.validate()?;
    check_len(y.len(), 3)?;
    if cache.len() != y.len() {
        return Err(FilterError::DimensionMismatch {
            expected: cache.len(),
            got: y.len(),
        });
    }
    if cache.smoothing() != cfg.smoothing {
        return Err(FilterError::InvalidSmoothing(cfg.smoothing));
    }

    let mut stages = Vec::with_capacity(cfg.max_iterations);
    let mut cycles: Vec<Vec<f64>> = Vec::with_capacity(cfg.max_iterations);
    let mut residual = y.to_vec();
    for _ in 0..cfg.max_iterations {
        let trend = ohp(&residual, cfg.smoothing)?;
        residual = residual.iter().zip(&trend).map(|(c, g)| c - g).collect();
        stages.push(trend);
        cycles.push(residual.clone());
    }

    let first = l1_norm(&cycles[0]);
    let degenerate = first <= DEGENERATE_RTOL * l1_norm(y);
    let (chosen_n, si_values) = if degenerate {
        (1, Vec::new())
    } else {
        let si = (1..=cfg.max_iterations)
            .map(|n| si_value(n, &cycles[0], &cycles[n - 1], cache))
            .collect::<Result<Vec<f64>>>()?;
        (argmin(&si) + 1, si)
    };

    stages.truncate(chosen_n);
    let mut cumulative = vec![0.0; y.len()];
    for stage in &stages {
        for (acc, g) in cumulative.iter_mut().zip(stage) {
            *acc += g;
        }
    }
    let final_cycle = y.iter().zip(&cumulative).map(|(a, b)| a - b).collect();
    Ok(SohpResult {
        observations: y.to_vec(),
        stage_trends: stages,
        cumulative_trend: cumulative,
        final_cycle,
        chosen_n,
        si_values,
        degenerate,
    })
}

/// Index of the first minimum.
fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v < values[best] {
            best = i;
        }
    }
    best
}
