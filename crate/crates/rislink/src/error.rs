//! Error types shared across the library.
//!
//! Contract violations on pure math helpers (dimension mismatches, indices
//! out of range) panic via `assert!`; these enums cover conditions that
//! depend on user-supplied configuration or runtime data.

use thiserror::Error;

/// Invalid configuration value detected while building a component.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    /// Array sizes driving the binary-tree codebook must be powers of two.
    #[error("{name} must be a power of two >= 2, got {value}")]
    NotPowerOfTwo { name: &'static str, value: usize },

    /// A numeric parameter is outside its admissible range.
    #[error("{name} out of range: {reason}")]
    OutOfRange { name: &'static str, reason: String },

    /// A config file or `--set` key is not recognized.
    #[error("unknown configuration key `{0}`")]
    UnknownKey(String),

    /// A config value failed to parse as the key's type.
    #[error("invalid value for `{key}`: {reason}")]
    InvalidValue { key: String, reason: String },

    /// A sweep axis name is not recognized.
    #[error("unknown sweep axis `{0}`")]
    UnknownAxis(String),
}

impl ConfigError {
    pub fn out_of_range(name: &'static str, reason: impl Into<String>) -> Self {
        ConfigError::OutOfRange {
            name,
            reason: reason.into(),
        }
    }
}

/// Scheduling failure modes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScheduleError {
    /// No user passes the demodulation threshold, so no slot can be filled.
    #[error("no demodulable user: the schedule cannot be constructed")]
    EmptyDemodulableSet,

    /// Brute-force enumeration would exceed the instance-size guard.
    #[error("brute force would enumerate {count} assignments (limit {limit})")]
    InstanceTooLarge { count: u128, limit: u128 },
}
