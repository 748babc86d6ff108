//! Link-level simulator and optimization library for a millimeter-wave
//! downlink assisted by a reconfigurable intelligent surface (RIS).
//!
//! The base station cannot reach the users directly (the direct path is
//! blocked), so every link runs through a passive reflecting surface whose
//! per-element phase shifts are drawn from a finite set. The library covers
//! the whole chain needed to study such a system:
//!
//! * [`channel`]: geometric Saleh-Valenzuela channel model for the
//!   BS-to-RIS and RIS-to-user segments, plus SNR/rate evaluation.
//! * [`codebook`]: binary-tree hierarchical beam codebook for the uniform
//!   linear arrays at the BS and the users.
//! * [`beam_training`]: two-stage hierarchical beam search over those
//!   codebooks using only rate probes.
//! * [`ris_search`]: element-wise local search over the discrete
//!   reflection-phase set.
//! * [`bcd`]: block-coordinate descent alternating beam training and
//!   reflection search until the rate stabilizes.
//! * [`scheduler`]: TDMA scheduling under per-user age-of-information
//!   constraints, with a brute-force reference solver.
//! * [`harness`]: Monte Carlo experiment driver tying everything together,
//!   with deterministic seeding and CSV/SVG reporting.
//! * [`cli`]: command-line front end (`run`, `sweep`, `figure`, `selftest`).
//!
//! All randomness flows through explicitly seeded [`rand_chacha::ChaCha8Rng`]
//! substreams, so every experiment is reproducible bit for bit.

pub mod bcd;
pub mod beam_training;
pub mod channel;
pub mod cli;
pub mod codebook;
pub mod error;
pub mod harness;
pub mod report;
pub mod ris_search;
pub mod scheduler;

pub use error::{ConfigError, ScheduleError};
