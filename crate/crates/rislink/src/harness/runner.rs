//! Per-realization pipeline and parameter sweeps.

use super::config::{ExperimentConfig, Scheme, SweepAxis};
use super::metrics::{monte_carlo_mean, stable_mean, Aggregate};
use super::probe::CachingLinkProbe;
use crate::bcd::{joint_optimize, LinkSolution};
use crate::beam_training::{hierarchical_search, RateProbe};
use crate::channel::{draw_channel, ArrayConfig, LinkBudget, SystemGeometry};
use crate::codebook::{build_codebook, HierarchicalCodebook};
use crate::error::{ConfigError, ScheduleError};
use crate::ris_search::{local_search, ReflectionConfig};
use crate::scheduler::{
    design_schedule, phase_one_schedule, validate_schedule, FeasibilityReport, RateProfile,
    ScheduleMatrix,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// What a derived random substream is used for. Each purpose gets its own
/// independent stream so adding draws to one consumer never shifts another.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u32)]
pub enum StreamPurpose {
    /// Channel realization (user positions, path gains and angles).
    Channel = 0,
    /// Optimizer starting point (initial surface config and beam pair).
    Optimizer = 1,
    /// The held-fixed random surface of the random-surface baseline.
    RandomRis = 2,
    /// The held-fixed random beams of the random-beam baseline.
    RandomBf = 3,
}

/// Derives the independent random stream for one (realization, purpose,
/// entity) cell under a root seed. The same arguments always produce the
/// same stream, on every platform; distinct arguments produce streams with
/// unrelated 256-bit keys. Schemes that share a purpose (for example the
/// optimizer stream of the proposed and round-robin schemes) therefore see
/// identical draws, which makes cross-scheme comparisons paired.
pub fn substream(seed: u64, realization: u64, purpose: StreamPurpose, entity: u32) -> ChaCha8Rng {
    const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
    fn mix(mut z: u64) -> u64 {
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    let mut state = mix(seed ^ GOLDEN);
    for word in [
        realization,
        (u64::from(purpose as u32) << 32) | u64::from(entity),
    ] {
        state = mix(state.wrapping_add(GOLDEN).wrapping_add(word));
    }
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        state = mix(state.wrapping_add(GOLDEN));
        chunk.copy_from_slice(&state.to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// Everything about one realization of one scheme: the per-user operating
/// points, the schedule, and the derived metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct RealizationResult {
    /// Per-user link operating point, indexed by user.
    pub links: Vec<LinkSolution>,
    /// Per-user demodulation flag (`snr > threshold`, strict).
    pub demodulable: Vec<bool>,
    /// The designed schedule; `None` when no user can demodulate.
    pub schedule: Option<ScheduleMatrix>,
    /// Structural and age-limit checks of the schedule, when one exists.
    pub report: Option<FeasibilityReport>,
    /// Rate summed over every slot of the horizon (bit/s/Hz per slot,
    /// summed across slots).
    pub sum_rate: f64,
    /// `sum_rate / t_slots`.
    pub rate_per_slot: f64,
    /// Per-user average age over the horizon.
    pub per_ue_aoi: Vec<f64>,
    /// Mean of the per-user average ages.
    pub system_aoi: f64,
    /// Schedule exists, is structurally valid, and every demodulable
    /// user meets its age limit.
    pub feasible: bool,
    /// Optimizer outer-iteration count per user (zero for the baselines,
    /// which run no outer loop).
    pub bcd_iterations: Vec<usize>,
}

/// Validated, converted scenario shared by every realization of one
/// configuration: geometry and link budget in linear units plus the two
/// beam codebooks, built once.
pub struct RunContext {
    /// Node layout.
    pub geometry: SystemGeometry,
    /// Array dimensions.
    pub arrays: ArrayConfig,
    /// Link budget in linear units.
    pub budget: LinkBudget,
    /// Transmit-side hierarchical codebook.
    pub codebook_tx: HierarchicalCodebook,
    /// Receive-side hierarchical codebook.
    pub codebook_rx: HierarchicalCodebook,
    /// Per-user average-age limits.
    pub a_max: Vec<f64>,
}

impl RunContext {
    /// Validates the configuration and converts it once.
    pub fn new(config: &ExperimentConfig) -> Result<Self, ConfigError> {
        config.validate()?;
        Ok(RunContext {
            geometry: config.geometry()?,
            arrays: config.arrays()?,
            budget: config.budget()?,
            codebook_tx: build_codebook(config.n_tx)?,
            codebook_rx: build_codebook(config.n_rx)?,
            a_max: config.per_ue_a_max(),
        })
    }

    /// Runs one scheme on one realization index. The channel draw depends
    /// only on `(seed, realization)`, never on the scheme.
    pub fn run(
        &self,
        config: &ExperimentConfig,
        scheme: Scheme,
        realization: u64,
    ) -> RealizationResult {
        let mut channel_rng = substream(config.seed, realization, StreamPurpose::Channel, 0);
        let ch = draw_channel(
            &self.geometry,
            &self.arrays,
            &self.budget,
            config.p_paths,
            config.l_paths,
            config.k_ues,
            &mut channel_rng,
        );
        let m = self.arrays.ris_elements();

        let mut links = Vec::with_capacity(config.k_ues);
        for k in 0..config.k_ues {
            let mut probe = CachingLinkProbe::new(&ch.g, &ch.h_r[k], self.budget.power_gain());
            let entity = k as u32;
            let link = match scheme {
                Scheme::Proposed | Scheme::RoundRobin => {
                    let mut rng =
                        substream(config.seed, realization, StreamPurpose::Optimizer, entity);
                    joint_optimize(
                        &mut probe,
                        &self.codebook_tx,
                        &self.codebook_rx,
                        m,
                        config.bits,
                        config.delta,
                        &mut rng,
                    )
                    .expect("configuration was validated at context build")
                }
                Scheme::RandomRis => {
                    let mut rng =
                        substream(config.seed, realization, StreamPurpose::RandomRis, entity);
                    let phi = ReflectionConfig::uniform_random(m, config.bits, &mut rng)
                        .expect("configuration was validated at context build");
                    let trained =
                        hierarchical_search(&mut probe, &self.codebook_tx, &self.codebook_rx, &phi);
                    fixed_point(&mut probe, trained.w, trained.f, phi)
                }
                Scheme::RandomBf => {
                    let mut rng =
                        substream(config.seed, realization, StreamPurpose::RandomBf, entity);
                    let w_leaf = rng.gen_range(1..=self.codebook_tx.n());
                    let f_leaf = rng.gen_range(1..=self.codebook_rx.n());
                    let w = self
                        .codebook_tx
                        .codeword(self.codebook_tx.last_layer(), w_leaf)
                        .clone();
                    let f = self
                        .codebook_rx
                        .codeword(self.codebook_rx.last_layer(), f_leaf)
                        .clone();
                    let init = ReflectionConfig::uniform_random(m, config.bits, &mut rng)
                        .expect("configuration was validated at context build");
                    let phi = local_search(&mut probe, &w, &f, &init);
                    fixed_point(&mut probe, w, f, phi)
                }
            };
            links.push(link);
        }

        let demodulable = links_demodulable(&links, &self.budget);
        let profile = RateProfile::new(
            links.iter().map(|l| l.rate).collect(),
            demodulable.clone(),
        );
        let schedule = match scheme {
            Scheme::RoundRobin => phase_one_schedule(&profile, config.t_slots),
            _ => design_schedule(&profile, config.t_slots, &self.a_max),
        };
        let bcd_iterations: Vec<usize> = links.iter().map(|l| l.iterations).collect();

        match schedule {
            Ok(schedule) => {
                let report = validate_schedule(&schedule.to_dense(), &profile, &self.a_max);
                let sum_rate = schedule.sum_rate(&profile);
                let per_ue_aoi = report.average_aoi.clone();
                let system_aoi = stable_mean(&per_ue_aoi);
                let feasible = report.feasible_for_demodulable(&profile);
                RealizationResult {
                    links,
                    demodulable,
                    rate_per_slot: sum_rate / config.t_slots as f64,
                    schedule: Some(schedule),
                    report: Some(report),
                    sum_rate,
                    per_ue_aoi,
                    system_aoi,
                    feasible,
                    bcd_iterations,
                }
            }
            Err(ScheduleError::EmptyDemodulableSet) => {
                // Nobody can demodulate: no slots are usable, every age
                // grows for the whole horizon.
                let stale = (config.t_slots as f64 + 3.0) / 2.0;
                RealizationResult {
                    links,
                    demodulable,
                    schedule: None,
                    report: None,
                    sum_rate: 0.0,
                    rate_per_slot: 0.0,
                    per_ue_aoi: vec![stale; config.k_ues],
                    system_aoi: stale,
                    feasible: false,
                    bcd_iterations,
                }
            }
            Err(other) => unreachable!("heuristic scheduler cannot fail with {other}"),
        }
    }
}

/// Wraps a fixed `(w, f, phi)` triple as a [`LinkSolution`] by probing its
/// rate once; used by the baselines, which run no outer loop.
fn fixed_point(
    probe: &mut CachingLinkProbe<'_>,
    w: ndarray::Array1<num_complex::Complex64>,
    f: ndarray::Array1<num_complex::Complex64>,
    phi: ReflectionConfig,
) -> LinkSolution {
    let rate = probe.rate(&w, &f, &phi);
    LinkSolution {
        w,
        f,
        phi,
        rate,
        snr: rate.exp2() - 1.0,
        iterations: 0,
        rate_history: vec![rate],
        hit_iteration_cap: false,
    }
}

fn links_demodulable(links: &[LinkSolution], budget: &LinkBudget) -> Vec<bool> {
    links.iter().map(|l| l.snr > budget.snr_threshold).collect()
}

/// Runs the proposed scheme on one realization of a configuration.
pub fn run_realization(
    config: &ExperimentConfig,
    realization: u64,
) -> Result<RealizationResult, ConfigError> {
    Ok(RunContext::new(config)?.run(config, Scheme::Proposed, realization))
}

/// Runs any scheme on one realization of a configuration.
pub fn run_baseline(
    config: &ExperimentConfig,
    scheme: Scheme,
    realization: u64,
) -> Result<RealizationResult, ConfigError> {
    Ok(RunContext::new(config)?.run(config, scheme, realization))
}

/// One (axis value, scheme) cell of a sweep.
#[derive(Debug, Clone)]
pub struct SweepCell {
    /// The swept value applied to the configuration.
    pub axis_value: f64,
    /// The scheme this cell ran.
    pub scheme: Scheme,
    /// Statistics over the realizations.
    pub aggregate: Aggregate,
    /// The individual realizations, in index order.
    pub results: Vec<RealizationResult>,
}

/// Sweeps selected schemes over axis values. Realizations run in parallel;
/// results are collected in index order, so the output is identical no
/// matter how many workers execute it. Cells are ordered by value first,
/// then by the given scheme order.
pub fn sweep_schemes(
    config: &ExperimentConfig,
    axis: SweepAxis,
    values: &[f64],
    schemes: &[Scheme],
) -> Result<Vec<SweepCell>, ConfigError> {
    let mut cells = Vec::with_capacity(values.len() * schemes.len());
    for &value in values {
        let mut cfg = config.clone();
        axis.apply(&mut cfg, value)?;
        let context = RunContext::new(&cfg)?;
        for &scheme in schemes {
            let results: Vec<RealizationResult> = (0..cfg.realizations as u64)
                .into_par_iter()
                .map(|i| context.run(&cfg, scheme, i))
                .collect();
            let aggregate = monte_carlo_mean(&results);
            cells.push(SweepCell {
                axis_value: value,
                scheme,
                aggregate,
                results,
            });
        }
    }
    Ok(cells)
}

/// Sweeps all four schemes over axis values.
pub fn sweep(
    config: &ExperimentConfig,
    axis: SweepAxis,
    values: &[f64],
) -> Result<Vec<SweepCell>, ConfigError> {
    sweep_schemes(config, axis, values, &Scheme::ALL)
}

/// Runs selected schemes at one fixed configuration (no sweep). The cells
/// carry `axis_value` 0 since nothing varies.
pub fn run_point(
    config: &ExperimentConfig,
    schemes: &[Scheme],
) -> Result<Vec<SweepCell>, ConfigError> {
    let context = RunContext::new(config)?;
    let mut cells = Vec::with_capacity(schemes.len());
    for &scheme in schemes {
        let results: Vec<RealizationResult> = (0..config.realizations as u64)
            .into_par_iter()
            .map(|i| context.run(config, scheme, i))
            .collect();
        let aggregate = monte_carlo_mean(&results);
        cells.push(SweepCell {
            axis_value: 0.0,
            scheme,
            aggregate,
            results,
        });
    }
    Ok(cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    /// Small scenario that keeps optimizer runs to milliseconds.
    fn tiny_config() -> ExperimentConfig {
        let mut config = ExperimentConfig::default();
        config.n_tx = 4;
        config.n_rx = 2;
        config.ris_rows = 2;
        config.ris_cols = 2;
        config.k_ues = 2;
        config.t_slots = 8;
        config.bits = 2;
        config.p_paths = 2;
        config.l_paths = 2;
        config.realizations = 2;
        // Tiny arrays cannot reach the full-scale demodulation threshold;
        // relax it so schedules are non-trivial at this scale.
        config.snr_threshold_db = -60.0;
        config
    }

    #[test]
    fn substream_is_deterministic_and_purpose_separated() {
        let mut a = substream(7, 3, StreamPurpose::Channel, 1);
        let mut b = substream(7, 3, StreamPurpose::Channel, 1);
        assert_eq!(a.next_u64(), b.next_u64());
        assert_eq!(a.next_u64(), b.next_u64());

        let mut draws = std::collections::HashSet::new();
        for purpose in [
            StreamPurpose::Channel,
            StreamPurpose::Optimizer,
            StreamPurpose::RandomRis,
            StreamPurpose::RandomBf,
        ] {
            for realization in 0..3 {
                for entity in 0..3 {
                    let mut rng = substream(7, realization, purpose, entity);
                    assert!(
                        draws.insert(rng.next_u64()),
                        "stream collision at {purpose:?}/{realization}/{entity}"
                    );
                }
            }
        }
    }

    #[test]
    fn same_realization_is_bit_identical() {
        let config = tiny_config();
        let first = run_realization(&config, 0).unwrap();
        let second = run_realization(&config, 0).unwrap();
        assert_eq!(first, second);
        let other = run_realization(&config, 1).unwrap();
        assert_ne!(first.sum_rate.to_bits(), other.sum_rate.to_bits());
    }

    #[test]
    fn round_robin_shares_link_solutions_with_proposed() {
        let config = tiny_config();
        let proposed = run_realization(&config, 0).unwrap();
        let round_robin = run_baseline(&config, Scheme::RoundRobin, 0).unwrap();
        assert_eq!(proposed.links, round_robin.links);
        assert!(
            proposed.sum_rate >= round_robin.sum_rate,
            "slot grabbing must never lose rate: {} vs {}",
            proposed.sum_rate,
            round_robin.sum_rate
        );
    }

    #[test]
    fn baselines_differ_from_proposed_links() {
        let config = tiny_config();
        let proposed = run_realization(&config, 0).unwrap();
        let random_ris = run_baseline(&config, Scheme::RandomRis, 0).unwrap();
        let random_bf = run_baseline(&config, Scheme::RandomBf, 0).unwrap();
        // The baselines skip the outer loop entirely.
        assert!(random_ris.bcd_iterations.iter().all(|&i| i == 0));
        assert!(random_bf.bcd_iterations.iter().all(|&i| i == 0));
        assert!(proposed.bcd_iterations.iter().all(|&i| i >= 1));
    }

    // Property: a larger age allowance never lowers the proposed sum rate
    // on the same seed, because every schedule admissible under the small
    // limit stays admissible under the large one.
    #[test]
    fn proposed_sum_rate_non_decreasing_in_a_max() {
        for seed in 0..10u64 {
            let mut config = tiny_config();
            config.k_ues = 3;
            config.t_slots = 20;
            config.seed = seed;
            let mut last = f64::NEG_INFINITY;
            for a_max in [3.0, 5.0, 9.0] {
                config.a_max = a_max;
                let result = run_realization(&config, 0).unwrap();
                assert!(
                    result.sum_rate >= last - 1e-12,
                    "seed {seed}: sum rate fell from {last} to {} at limit {a_max}",
                    result.sum_rate
                );
                last = result.sum_rate;
            }
        }
    }

    #[test]
    fn empty_demodulable_set_is_flagged_infeasible() {
        let mut config = tiny_config();
        config.snr_threshold_db = 500.0;
        let result = run_realization(&config, 0).unwrap();
        assert!(result.demodulable.iter().all(|&d| !d));
        assert!(result.schedule.is_none());
        assert!(result.report.is_none());
        assert_eq!(result.sum_rate, 0.0);
        assert!(!result.feasible);
        let stale = (config.t_slots as f64 + 3.0) / 2.0;
        assert!(result.per_ue_aoi.iter().all(|&a| a == stale));
        assert_eq!(result.system_aoi, stale);
    }

    #[test]
    fn single_user_gets_every_slot() {
        let mut config = tiny_config();
        config.k_ues = 1;
        config.snr_threshold_db = -200.0;
        let result = run_realization(&config, 0).unwrap();
        let schedule = result.schedule.expect("one user is always demodulable");
        assert!(schedule.assignment().iter().all(|&k| k == 0));
        let expected = result.links[0].rate * config.t_slots as f64;
        assert!(
            (result.sum_rate - expected).abs() <= 1e-9 * expected.abs().max(1.0),
            "sum rate {} vs T * rate {}",
            result.sum_rate,
            expected
        );
    }

    #[test]
    fn sweep_produces_one_cell_per_value_and_scheme() {
        let config = tiny_config();
        let cells = sweep_schemes(
            &config,
            SweepAxis::TSlots,
            &[4.0, 8.0],
            &[Scheme::Proposed, Scheme::RoundRobin],
        )
        .unwrap();
        assert_eq!(cells.len(), 4);
        assert_eq!(cells[0].axis_value, 4.0);
        assert_eq!(cells[0].scheme, Scheme::Proposed);
        assert_eq!(cells[1].scheme, Scheme::RoundRobin);
        assert_eq!(cells[2].axis_value, 8.0);
        for cell in &cells {
            assert_eq!(cell.results.len(), config.realizations);
            assert_eq!(cell.aggregate.count, config.realizations);
        }
    }

    #[test]
    fn sweep_rejects_invalid_axis_value() {
        let config = tiny_config();
        let err = sweep(&config, SweepAxis::RisElements, &[37.0]).unwrap_err();
        assert!(matches!(err, ConfigError::OutOfRange { .. }));
    }

    // The channel substream is scheme-independent, so paired schemes see
    // the same geometry: identical demodulation outcomes under identical
    // links.
    #[test]
    fn channel_draw_is_shared_across_schemes() {
        let config = tiny_config();
        let proposed = run_realization(&config, 3).unwrap();
        let random_ris = run_baseline(&config, Scheme::RandomRis, 3).unwrap();
        // Different optimizers, same hidden channel: the solutions differ
        // but both were evaluated against the same draw. Spot-check via
        // the schedule horizon and user count, then via determinism of
        // re-running each.
        assert_eq!(proposed.links.len(), random_ris.links.len());
        assert_eq!(
            run_baseline(&config, Scheme::RandomRis, 3).unwrap(),
            random_ris
        );
    }
}
