//! Monte Carlo experiment driver.
//!
//! Ties the channel generator, the optimizers, and the scheduler into a
//! reproducible pipeline: a root seed spawns independent substreams per
//! (realization, purpose, user), so the four schemes see identical channel
//! draws and comparisons are paired. Sweeps clone the configuration, apply
//! one axis value at a time, and aggregate per-scheme statistics.

mod config;
mod metrics;
mod probe;
mod runner;
mod selftest;

pub use config::{
    apply_config_str, apply_key_value, ExperimentConfig, Scheme, SweepAxis, CONFIG_KEYS,
};
pub use metrics::{linear_fit, monte_carlo_mean, stable_mean, stable_sd, Aggregate};
pub use probe::CachingLinkProbe;
pub use runner::{
    run_baseline, run_point, run_realization, substream, sweep, sweep_schemes, RealizationResult,
    RunContext, StreamPurpose, SweepCell,
};
pub use selftest::{run_selftests, SelftestReport};
