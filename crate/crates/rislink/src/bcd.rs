//! Joint beam and reflection-phase optimization by block-coordinate
//! descent.
//!
//! One outer iteration holds the surface fixed and retrains the beam pair,
//! then holds the beams fixed and runs one local-search sweep over the
//! surface phases. Because retraining can regress (its probes see a
//! different surface than the one the incumbent was tuned for), the
//! incumbent pair is restored whenever it outrates the freshly trained
//! pair; the phase sweep can then only improve. The per-iteration rate is
//! therefore non-decreasing, and the loop stops once the relative gain
//! falls below `delta`.

use ndarray::Array1;
use num_complex::Complex64;
use rand::Rng;

use crate::beam_training::{hierarchical_search, RateProbe};
use crate::codebook::HierarchicalCodebook;
use crate::error::ConfigError;
use crate::ris_search::{local_search, ReflectionConfig};

/// Hard cap on outer iterations; hitting it is flagged on the solution.
pub const MAX_ITERATIONS: usize = 50;

/// Converged operating point of one link.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkSolution {
    /// Transmit beam (bottom-layer codeword).
    pub w: Array1<Complex64>,
    /// Receive combiner (bottom-layer codeword).
    pub f: Array1<Complex64>,
    /// Surface phase configuration.
    pub phi: ReflectionConfig,
    /// Achieved rate in bit/s/Hz.
    pub rate: f64,
    /// Achieved SNR as a linear ratio.
    pub snr: f64,
    /// Completed outer iterations.
    pub iterations: usize,
    /// Rate after the initial draw and after each outer iteration;
    /// `iterations + 1` entries, non-decreasing.
    pub rate_history: Vec<f64>,
    /// True if the loop stopped at [`MAX_ITERATIONS`] without converging.
    pub hit_iteration_cap: bool,
}

/// Runs block-coordinate descent for one link.
///
/// The starting point is drawn from `rng`: a uniform random phase
/// configuration, then uniform random bottom-layer transmit and receive
/// codewords, in that order. The initial rate is probed before the first
/// iteration so the history brackets the whole trajectory.
pub fn joint_optimize<P: RateProbe + ?Sized, R: Rng>(
    probe: &mut P,
    codebook_tx: &HierarchicalCodebook,
    codebook_rx: &HierarchicalCodebook,
    ris_elements: usize,
    bits: u8,
    delta: f64,
    rng: &mut R,
) -> Result<LinkSolution, ConfigError> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(ConfigError::out_of_range(
            "delta",
            format!("must be a finite positive number, got {delta}"),
        ));
    }

    let mut phi = ReflectionConfig::uniform_random(ris_elements, bits, rng)?;
    let w_leaf = rng.gen_range(1..=codebook_tx.n());
    let f_leaf = rng.gen_range(1..=codebook_rx.n());
    let mut w = codebook_tx
        .codeword(codebook_tx.last_layer(), w_leaf)
        .clone();
    let mut f = codebook_rx
        .codeword(codebook_rx.last_layer(), f_leaf)
        .clone();

    let mut rate_history = vec![probe.rate(&w, &f, &phi)];
    let mut hit_iteration_cap = false;

    loop {
        let rate_prev = *rate_history.last().unwrap();

        // Beam block: retrain under the current surface, but never accept
        // a regression past the incumbent pair.
        let trained = hierarchical_search(probe, codebook_tx, codebook_rx, &phi);
        let rate_trained = probe.rate(&trained.w, &trained.f, &phi);
        if rate_trained >= rate_prev {
            w = trained.w;
            f = trained.f;
        }

        // Surface block: one coordinate sweep under the kept beams.
        phi = local_search(probe, &w, &f, &phi);
        let rate_next = probe.rate(&w, &f, &phi);
        rate_history.push(rate_next);

        let converged = if rate_prev == 0.0 {
            rate_next == 0.0
        } else {
            ((rate_next - rate_prev) / rate_prev).abs() < delta
        };
        if converged {
            break;
        }
        if rate_history.len() - 1 >= MAX_ITERATIONS {
            hit_iteration_cap = true;
            break;
        }
    }

    let rate = *rate_history.last().unwrap();
    let iterations = rate_history.len() - 1;
    Ok(LinkSolution {
        w,
        f,
        phi,
        rate,
        snr: rate.exp2() - 1.0,
        iterations,
        rate_history,
        hit_iteration_cap,
    })
}
