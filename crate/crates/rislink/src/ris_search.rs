//! Discrete reflection-phase control and the element-wise local search.
//!
//! Every surface element applies a phase shift drawn from the uniform
//! `b`-bit grid `{0, 2*pi/2^b, ..., (2^b - 1) * 2*pi/2^b}`. The optimizer
//! is a single coordinate sweep: for each element in index order, probe all
//! `2^b` candidate phases with the rest of the surface frozen and commit
//! the first maximizer. One call therefore costs exactly `m * 2^b` probes,
//! and the committed rate can never decrease because the incumbent phase is
//! among the candidates.

use rand::Rng;
use std::f64::consts::PI;

use crate::beam_training::RateProbe;
use crate::error::ConfigError;
use ndarray::Array1;
use num_complex::Complex64;

/// Largest supported phase resolution; `2^16` candidates per element is
/// already far beyond any practical sweep.
pub const MAX_PHASE_BITS: u8 = 16;

/// The `b`-bit phase grid, `2^b` values uniformly spaced over `[0, 2*pi)`.
pub fn phase_set(bits: u8) -> Result<Vec<f64>, ConfigError> {
    validate_bits(bits)?;
    let count = 1usize << bits;
    let step = 2.0 * PI / count as f64;
    Ok((0..count).map(|p| p as f64 * step).collect())
}

fn validate_bits(bits: u8) -> Result<(), ConfigError> {
    if bits < 1 || bits > MAX_PHASE_BITS {
        return Err(ConfigError::out_of_range(
            "bits",
            format!("must be in 1..={MAX_PHASE_BITS}, got {bits}"),
        ));
    }
    Ok(())
}

/// Quantized phase configuration of the whole surface: one grid index per
/// element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReflectionConfig {
    indices: Vec<u16>,
    bits: u8,
}

impl ReflectionConfig {
    /// All-zero phases (grid index 0 everywhere).
    pub fn zeros(m: usize, bits: u8) -> Result<Self, ConfigError> {
        validate_bits(bits)?;
        if m < 1 {
            return Err(ConfigError::out_of_range("ris_elements", "must be >= 1"));
        }
        Ok(ReflectionConfig {
            indices: vec![0; m],
            bits,
        })
    }

    /// Validates and wraps explicit grid indices.
    pub fn from_indices(indices: Vec<u16>, bits: u8) -> Result<Self, ConfigError> {
        validate_bits(bits)?;
        if indices.is_empty() {
            return Err(ConfigError::out_of_range("ris_elements", "must be >= 1"));
        }
        let count = 1u32 << bits;
        if let Some(bad) = indices.iter().find(|&&i| u32::from(i) >= count) {
            return Err(ConfigError::out_of_range(
                "phase_index",
                format!("index {bad} outside 0..{count}"),
            ));
        }
        Ok(ReflectionConfig { indices, bits })
    }

    /// Draws every element's index uniformly from the grid.
    pub fn uniform_random<R: Rng>(m: usize, bits: u8, rng: &mut R) -> Result<Self, ConfigError> {
        validate_bits(bits)?;
        if m < 1 {
            return Err(ConfigError::out_of_range("ris_elements", "must be >= 1"));
        }
        let count = 1u16 << bits;
        Ok(ReflectionConfig {
            indices: (0..m).map(|_| rng.gen_range(0..count)).collect(),
            bits,
        })
    }

    /// Number of surface elements.
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Phase resolution in bits.
    pub fn bits(&self) -> u8 {
        self.bits
    }

    /// Grid index of one element.
    pub fn index(&self, element: usize) -> u16 {
        self.indices[element]
    }

    /// All grid indices.
    pub fn indices(&self) -> &[u16] {
        &self.indices
    }

    /// Replaces one element's grid index.
    ///
    /// # Panics
    ///
    /// Panics if the index is outside the grid.
    pub fn set_index(&mut self, element: usize, index: u16) {
        assert!(
            u32::from(index) < (1u32 << self.bits),
            "phase index {index} outside the {}-bit grid",
            self.bits
        );
        self.indices[element] = index;
    }

    /// Phase value of one element in radians.
    pub fn phase(&self, element: usize) -> f64 {
        f64::from(self.indices[element]) * 2.0 * PI / f64::from(1u32 << self.bits)
    }

    /// All phase values in radians.
    pub fn phases(&self) -> Vec<f64> {
        let step = 2.0 * PI / f64::from(1u32 << self.bits);
        self.indices.iter().map(|&i| f64::from(i) * step).collect()
    }
}

/// Result of one local-search sweep, with the committed rate after each
/// element for monotonicity checks.
#[derive(Debug, Clone)]
pub struct LocalSearchOutcome {
    /// Final configuration.
    pub config: ReflectionConfig,
    /// Rate committed after optimizing each element, in element order.
    pub committed_rates: Vec<f64>,
}

/// One coordinate sweep over the surface, committing the best phase per
/// element under the fixed beam pair `(w, f)`.
pub fn local_search<P: RateProbe + ?Sized>(
    probe: &mut P,
    w: &Array1<Complex64>,
    f: &Array1<Complex64>,
    init: &ReflectionConfig,
) -> ReflectionConfig {
    local_search_trace(probe, w, f, init).config
}

/// [`local_search`] plus the per-element committed-rate trace.
pub fn local_search_trace<P: RateProbe + ?Sized>(
    probe: &mut P,
    w: &Array1<Complex64>,
    f: &Array1<Complex64>,
    init: &ReflectionConfig,
) -> LocalSearchOutcome {
    let mut config = init.clone();
    let candidates = 1u16 << config.bits();
    let mut committed_rates = Vec::with_capacity(config.len());
    for element in 0..config.len() {
        let mut best_rate = f64::NEG_INFINITY;
        let mut best_index = 0u16;
        for index in 0..candidates {
            config.set_index(element, index);
            let rate = probe.rate(w, f, &config);
            // Strict improvement keeps the first maximizer in probe order.
            if rate > best_rate {
                best_rate = rate;
                best_index = index;
            }
        }
        config.set_index(element, best_index);
        committed_rates.push(best_rate);
    }
    LocalSearchOutcome {
        config,
        committed_rates,
    }
}
