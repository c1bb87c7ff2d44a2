//! Hodrick-Prescott trend extraction.
//!
//! The two-sided HP filter, its incremental form, the boosted and one-sided
//! variants, and the successive one-sided filter whose stage count is picked
//! by a stopping index. See [`filters`] for the entry points.

pub mod bench;
pub mod cli;
pub mod error;
pub mod filters;
pub mod io;
pub mod linalg;

pub use error::{FilterError, Result};
pub use filters::{
    bhp, hp_direct, hp_incremental, ohp, si_value, sohp, sohp_with_cache, Decomposition,
    FilterConfig, IncrementalHpState, SohpResult, TraceCache,
};
