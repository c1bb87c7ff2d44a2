use super::Decomposition;
use crate::error::{check_len, check_smoothing, FilterError, Result};
use crate::linalg::woodbury::s3_apply;
use crate::linalg::{penalty_matrix, DirectSolver, InverseTail};

/// Two-sided HP filter by a dense solve of `S_l g = y`.
pub fn hp_direct(y: &[f64], smoothing: f64) -> Result<Decomposition> {
    check_len(y.len(), 3)?;
    let s = penalty_matrix(y.len(), smoothing)?;
    let trend = DirectSolver::new(&s)?.solve(y)?;
    Ok(Decomposition::from_trend(y.to_vec(), trend))
}

/// Boosted HP: applies the HP cycle map `iterations` times.
///
/// The trend is accumulated as `Σ S⁻¹ c⁽ⁱ⁻¹⁾` with one factorisation reused
/// for every round; the cycle is `y` minus that sum, i.e. `(I - S⁻¹)ⁿ y`.
pub fn bhp(y: &[f64], smoothing: f64, iterations: usize) -> Result<Decomposition> {
    check_len(y.len(), 3)?;
    if iterations == 0 {
        return Err(FilterError::ZeroIterations);
    }
    let s = penalty_matrix(y.len(), smoothing)?;
    let solver = DirectSolver::new(&s)?;
    let mut trend = solver.solve(y)?;
    let mut residual: Vec<f64> = y.iter().zip(&trend).map(|(a, b)| a - b).collect();
    for _ in 1..iterations {
        let extra = solver.solve(&residual)?;
        for ((g, c), e) in trend.iter_mut().zip(residual.iter_mut()).zip(&extra) {
            *g += e;
            *c -= e;
        }
    }
    Ok(Decomposition::from_trend(y.to_vec(), trend))
}

/// Streaming HP filter: the trend of every prefix `y_1..y_t`, one
/// observation at a time.
///
/// Each step costs `O(t)`: the state carries the last two columns of
/// `S_t⁻¹` rather than the whole matrix. With `s = g_{t-2} - 2 g_{t-1} + y_t`
/// computed from the previous trend,
///
/// ```text
/// g_t = [g_{t-1}; y_t] - δ_t s q_t
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct IncrementalHpState {
    smoothing: f64,
    tail: InverseTail,
    observations: Vec<f64>,
    trend: Vec<f64>,
    cycle: Vec<f64>,
    last_delta: f64,
    last_innovation: f64,
}

impl IncrementalHpState {
    /// Seeds the recursion from the closed-form `S_3⁻¹`.
    pub fn init(y1: f64, y2: f64, y3: f64, smoothing: f64) -> Result<Self> {
        check_smoothing(smoothing)?;
        let observations = vec![y1, y2, y3];
        let trend = s3_apply(smoothing, [y1, y2, y3]).to_vec();
        let cycle = observations
            .iter()
            .zip(&trend)
            .map(|(y, g)| y - g)
            .collect();
        Ok(Self {
            smoothing,
            tail: InverseTail::seed(smoothing)?,
            observations,
            trend,
            cycle,
            last_delta: 0.0,
            last_innovation: 0.0,
        })
    }

    /// Runs the recursion over a whole series.
    pub fn from_series(y: &[f64], smoothing: f64) -> Result<Self> {
        check_len(y.len(), 3)?;
        let mut state = Self::init(y[0], y[1], y[2], smoothing)?;
        for &v in &y[3..] {
            state.step(v)?;
        }
        Ok(state)
    }

    /// Appends `y_t` and updates the trend of the extended prefix.
    pub fn step(&mut self, y_t: f64) -> Result<()> {
        let (q, delta) = self.tail.advance(self.smoothing)?;
        let t = q.len();
        let g_prev2 = self.trend[t - 3];
        let g_prev1 = self.trend[t - 2];
        let innovation = g_prev2 - 2.0 * g_prev1 + y_t;
        let scale = delta * innovation;

        self.observations.push(y_t);
        self.trend.push(y_t);
        for (g, qi) in self.trend.iter_mut().zip(q) {
            *g -= scale * qi;
        }
        self.cycle.clear();
        self.cycle.extend(
            self.observations
                .iter()
                .zip(&self.trend)
                .map(|(y, g)| y - g),
        );
        self.last_delta = delta;
        self.last_innovation = innovation;
        Ok(())
    }

    pub fn horizon(&self) -> usize {
        self.observations.len()
    }

    pub fn smoothing(&self) -> f64 {
        self.smoothing
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

    /// Trend at the newest observation.
    pub fn latest_trend(&self) -> f64 {
        *self.trend.last().expect("horizon is at least 3")
    }

    /// `δ_t` of the last step (zero before the first step).
    pub fn last_delta(&self) -> f64 {
        self.last_delta
    }

    /// `q_t` of the last step (empty before the first step).
    pub fn last_q(&self) -> &[f64] {
        self.tail.gain()
    }

    /// `g_{t-2} - 2 g_{t-1} + y_t` of the last step.
    pub fn last_innovation(&self) -> f64 {
        self.last_innovation
    }

    pub fn inverse_tail(&self) -> &InverseTail {
        &self.tail
    }

    pub fn to_decomposition(&self) -> Decomposition {
        Decomposition::from_trend(self.observations.clone(), self.trend.clone())
    }
}

/// Two-sided HP filter by the incremental recursion, `O(l²)` overall.
pub fn hp_incremental(y: &[f64], smoothing: f64) -> Result<Decomposition> {
    let state = IncrementalHpState::from_series(y, smoothing)?;
    Ok(Decomposition::from_trend(y.to_vec(), state.trend))
}
