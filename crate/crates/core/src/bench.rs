//! Timing harness comparing the dense direct HP solve with the incremental
//! recursion.
//!
//! The direct arm builds the dense `S_l` and factors it with a general dense
//! Cholesky, `O(l³)`; it deliberately ignores the band structure. The
//! incremental arm runs the full recursion from `t = 3` to `l`, `O(l²)`.
//! Each arm gets one untimed warm-up run per length, then the mean of
//! `repeats` timed runs is reported along with least-squares slopes of
//! log-time against log-length.

use std::hint::black_box;
use std::io::Write;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;
use thiserror::Error;

use crate::filters::{hp_direct, IncrementalHpState, MONTHLY_SMOOTHING};

pub const DEFAULT_LENGTHS: [usize; 4] = [250, 500, 1000, 2000];
pub const DEFAULT_REPEATS: usize = 10;
pub const DEFAULT_SEED: u64 = 0x4850_4649_4c54;

#[derive(Debug, Error, PartialEq)]
pub enum BenchError {
    #[error("no lengths given")]
    NoLengths,
    #[error("length {0} is below the minimum of 3")]
    TooShort(usize),
    #[error("lengths must be strictly increasing")]
    NotIncreasing,
    #[error("repeats must be at least 1")]
    NoRepeats,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub lengths: Vec<usize>,
    pub repeats: usize,
    pub seed: u64,
    pub smoothing: f64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            lengths: DEFAULT_LENGTHS.to_vec(),
            repeats: DEFAULT_REPEATS,
            seed: DEFAULT_SEED,
            smoothing: MONTHLY_SMOOTHING,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<(), BenchError> {
        if self.lengths.is_empty() {
            return Err(BenchError::NoLengths);
        }
        if let Some(&l) = self.lengths.iter().find(|&&l| l < 3) {
            return Err(BenchError::TooShort(l));
        }
        if self.lengths.windows(2).any(|w| w[1] <= w[0]) {
            return Err(BenchError::NotIncreasing);
        }
        if self.repeats == 0 {
            return Err(BenchError::NoRepeats);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub lengths: Vec<usize>,
    pub direct_seconds: Vec<f64>,
    pub incremental_seconds: Vec<f64>,
    pub repeats: usize,
    pub seed: u64,
    /// `None` with fewer than two lengths.
    pub direct_slope: Option<f64>,
    pub incremental_slope: Option<f64>,
}

impl BenchReport {
    pub fn write_json<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut w, self)?;
        writeln!(w)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), csv::Error> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record([
            "length",
            "repeats",
            "direct_seconds",
            "incremental_seconds",
            "direct_slope",
            "incremental_slope",
        ])?;
        let slope = |s: Option<f64>| s.map(|v| v.to_string()).unwrap_or_default();
        for i in 0..self.lengths.len() {
            out.write_record([
                self.lengths[i].to_string(),
                self.repeats.to_string(),
                self.direct_seconds[i].to_string(),
                self.incremental_seconds[i].to_string(),
                slope(self.direct_slope),
                slope(self.incremental_slope),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Gaussian random walk starting at zero.
pub fn random_walk(len: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut level = 0.0;
    (0..len)
        .map(|_| {
            let step: f64 = StandardNormal.sample(&mut rng);
            level += step;
            level
        })
        .collect()
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(x: &[usize], y: &[f64]) -> Option<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    let lx: Vec<f64> = x.iter().map(|&v| (v as f64).ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    Some(sxy / sxx)
}

fn mean_seconds(repeats: usize, mut f: impl FnMut()) -> f64 {
    f();
    let start = Instant::now();
    for _ in 0..repeats {
        f();
    }
    // Sub-resolution timings would break the log fit.
    (start.elapsed().as_secs_f64() / repeats as f64).max(1e-9)
}

pub fn run(cfg: &BenchConfig) -> Result<BenchReport, BenchError> {
    cfg.validate()?;
    let mut direct_seconds = Vec::with_capacity(cfg.lengths.len());
    let mut incremental_seconds = Vec::with_capacity(cfg.lengths.len());
    for (i, &len) in cfg.lengths.iter().enumerate() {
        let y = random_walk(len, cfg.seed.wrapping_add(i as u64));
        direct_seconds.push(mean_seconds(cfg.repeats, || {
            black_box(hp_direct(black_box(&y), cfg.smoothing).expect("valid input"));
        }));
        incremental_seconds.push(mean_seconds(cfg.repeats, || {
            black_box(
                IncrementalHpState::from_series(black_box(&y), cfg.smoothing).expect("valid input"),
            );
        }));
    }
    Ok(BenchReport {
        direct_slope: loglog_slope(&cfg.lengths, &direct_seconds),
        incremental_slope: loglog_slope(&cfg.lengths, &incremental_seconds),
        lengths: cfg.lengths.clone(),
        direct_seconds,
        incremental_seconds,
        repeats: cfg.repeats,
        seed: cfg.seed,
    })
}
