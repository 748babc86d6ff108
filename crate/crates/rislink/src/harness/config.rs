//! Experiment configuration: defaults, key-value parsing, and sweep axes.

use crate::channel::{ArrayConfig, LinkBudget, SystemGeometry};
use crate::error::ConfigError;
use crate::ris_search::{phase_set, MAX_PHASE_BITS};
use std::fmt;

/// Link-design scheme run per user before scheduling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Joint beam training and surface phase optimization, then two-phase
    /// scheduling.
    Proposed,
    /// One uniformly random surface configuration held fixed; beams are
    /// still trained against it; two-phase scheduling.
    RandomRis,
    /// Uniformly random bottom-layer beams held fixed; the surface is
    /// optimized with one local-search sweep; two-phase scheduling.
    RandomBf,
    /// Same per-link optimization as `Proposed`, but scheduling stops
    /// after the round-robin phase.
    RoundRobin,
}

impl Scheme {
    /// Every scheme, in reporting order.
    pub const ALL: [Scheme; 4] = [
        Scheme::Proposed,
        Scheme::RandomRis,
        Scheme::RandomBf,
        Scheme::RoundRobin,
    ];

    /// Stable machine-readable name used in CSV columns and config files.
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Proposed => "proposed",
            Scheme::RandomRis => "random_ris",
            Scheme::RandomBf => "random_bf",
            Scheme::RoundRobin => "round_robin",
        }
    }

    /// Parses a scheme name as written by [`Scheme::name`].
    pub fn parse(text: &str) -> Result<Scheme, ConfigError> {
        match text {
            "proposed" => Ok(Scheme::Proposed),
            "random_ris" => Ok(Scheme::RandomRis),
            "random_bf" => Ok(Scheme::RandomBf),
            "round_robin" => Ok(Scheme::RoundRobin),
            other => Err(ConfigError::InvalidValue {
                key: "scheme".to_string(),
                reason: format!(
                    "unknown scheme {other:?}; expected proposed, random_ris, random_bf, \
                     or round_robin"
                ),
            }),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameter that a sweep varies, one value at a time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    /// Age limit shared by the ordinary users.
    AMax,
    /// How many of the lowest-indexed users get the stricter limit.
    HighRequirementCount,
    /// Number of users.
    KUes,
    /// Surface phase quantization bits.
    Bits,
    /// Total surface elements; values must be perfect squares and set a
    /// square surface.
    RisElements,
    /// Transmit (and receive) antenna count.
    NTx,
    /// Scheduling horizon in slots.
    TSlots,
}

impl SweepAxis {
    /// Every sweep axis, in documentation order.
    pub const ALL: [SweepAxis; 7] = [
        SweepAxis::AMax,
        SweepAxis::HighRequirementCount,
        SweepAxis::KUes,
        SweepAxis::Bits,
        SweepAxis::RisElements,
        SweepAxis::NTx,
        SweepAxis::TSlots,
    ];

    /// Stable axis name used on the command line and in config files.
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::AMax => "a_max",
            SweepAxis::HighRequirementCount => "high_requirement_count",
            SweepAxis::KUes => "k_ues",
            SweepAxis::Bits => "bits",
            SweepAxis::RisElements => "ris_elements",
            SweepAxis::NTx => "n_tx",
            SweepAxis::TSlots => "t_slots",
        }
    }

    /// Parses an axis name as written by [`SweepAxis::name`].
    pub fn parse(text: &str) -> Result<SweepAxis, ConfigError> {
        Self::ALL
            .into_iter()
            .find(|axis| axis.name() == text)
            .ok_or_else(|| ConfigError::UnknownAxis(text.to_string()))
    }

    /// Applies one swept value to a configuration clone.
    pub fn apply(self, config: &mut ExperimentConfig, value: f64) -> Result<(), ConfigError> {
        match self {
            SweepAxis::AMax => {
                if !(value > 0.0) || !value.is_finite() {
                    return Err(ConfigError::out_of_range("a_max", "must be positive"));
                }
                config.a_max = value;
            }
            SweepAxis::HighRequirementCount => {
                config.high_requirement_count = as_count(self.name(), value)?;
            }
            SweepAxis::KUes => {
                let k = as_count(self.name(), value)?;
                if k == 0 {
                    return Err(ConfigError::out_of_range("k_ues", "must be >= 1"));
                }
                config.k_ues = k;
            }
            SweepAxis::Bits => {
                let b = as_count(self.name(), value)?;
                if b == 0 || b > usize::from(MAX_PHASE_BITS) {
                    return Err(ConfigError::out_of_range(
                        "bits",
                        format!("must be in 1..={MAX_PHASE_BITS}"),
                    ));
                }
                config.bits = b as u8;
            }
            SweepAxis::RisElements => {
                let m = as_count(self.name(), value)?;
                let side = (m as f64).sqrt().round() as usize;
                if side == 0 || side * side != m {
                    return Err(ConfigError::out_of_range(
                        "ris_elements",
                        format!("{m} is not a positive perfect square"),
                    ));
                }
                config.ris_rows = side;
                config.ris_cols = side;
            }
            SweepAxis::NTx => {
                let n = as_count(self.name(), value)?;
                if n < 2 || !n.is_power_of_two() {
                    return Err(ConfigError::NotPowerOfTwo {
                        name: "n_tx",
                        value: n,
                    });
                }
                config.n_tx = n;
            }
            SweepAxis::TSlots => {
                let t = as_count(self.name(), value)?;
                if t == 0 {
                    return Err(ConfigError::out_of_range("t_slots", "must be >= 1"));
                }
                config.t_slots = t;
            }
        }
        Ok(())
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn as_count(name: &str, value: f64) -> Result<usize, ConfigError> {
    if !value.is_finite() || value < 0.0 || value.fract() != 0.0 || value > 1e12 {
        return Err(ConfigError::out_of_range(
            match name {
                "a_max" => "a_max",
                "high_requirement_count" => "high_requirement_count",
                "k_ues" => "k_ues",
                "bits" => "bits",
                "ris_elements" => "ris_elements",
                "n_tx" => "n_tx",
                "t_slots" => "t_slots",
                _ => "value",
            },
            format!("{value} is not a non-negative integer"),
        ));
    }
    Ok(value as usize)
}

/// Complete description of one experiment: scenario, link budget,
/// algorithm knobs, and Monte Carlo controls. Stored in display units
/// (dBm, dB, meters); converted to linear quantities once per run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Transmit antennas (power of two).
    pub n_tx: usize,
    /// Receive antennas per user (power of two).
    pub n_rx: usize,
    /// Surface rows.
    pub ris_rows: usize,
    /// Surface columns.
    pub ris_cols: usize,
    /// Element spacing over wavelength.
    pub element_spacing_ratio: f64,
    /// Carrier frequency in GHz. Recorded for documentation; its effect
    /// is already folded into the pathloss intercept `pathloss_a`.
    pub carrier_ghz: f64,
    /// Transmit power in dBm.
    pub tx_power_dbm: f64,
    /// Noise power in dBm.
    pub noise_power_dbm: f64,
    /// Demodulation SNR threshold in dB.
    pub snr_threshold_db: f64,
    /// Pathloss intercept in dB at 1 m.
    pub pathloss_a: f64,
    /// Pathloss exponent.
    pub pathloss_b: f64,
    /// Lognormal shadowing standard deviation in dB.
    pub shadow_sigma_db: f64,
    /// Extra attenuation of non-line-of-sight paths in dB.
    pub nlos_margin_db: f64,
    /// Base station x coordinate in meters.
    pub bs_x: f64,
    /// Base station y coordinate in meters.
    pub bs_y: f64,
    /// Base station height in meters.
    pub bs_height: f64,
    /// Surface x coordinate in meters.
    pub ris_x: f64,
    /// Surface y coordinate in meters.
    pub ris_y: f64,
    /// Surface height in meters.
    pub ris_height: f64,
    /// User disc center x coordinate in meters.
    pub ue_center_x: f64,
    /// User disc center y coordinate in meters.
    pub ue_center_y: f64,
    /// User height in meters.
    pub ue_height: f64,
    /// User disc radius in meters.
    pub ue_radius: f64,
    /// Number of users.
    pub k_ues: usize,
    /// Scheduling horizon in slots.
    pub t_slots: usize,
    /// Surface phase quantization bits.
    pub bits: u8,
    /// Paths in the base-station-to-surface channel.
    pub p_paths: usize,
    /// Paths in each surface-to-user channel.
    pub l_paths: usize,
    /// Average-age limit for ordinary users.
    pub a_max: f64,
    /// Average-age limit for high-requirement users.
    pub a_max_high: f64,
    /// How many of the lowest-indexed users use `a_max_high`.
    pub high_requirement_count: usize,
    /// Relative rate-improvement threshold that stops the optimizer.
    pub delta: f64,
    /// Root seed for all substreams.
    pub seed: u64,
    /// Monte Carlo realization count.
    pub realizations: usize,
    /// Scheme used when a single-scheme run is requested.
    pub scheme: Scheme,
    /// Optional sweep axis carried in the config file.
    pub sweep_axis: Option<SweepAxis>,
    /// Optional sweep values carried in the config file.
    pub sweep_values: Vec<f64>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n_tx: 64,
            n_rx: 64,
            ris_rows: 10,
            ris_cols: 10,
            element_spacing_ratio: 0.5,
            carrier_ghz: 28.0,
            tx_power_dbm: 45.0,
            noise_power_dbm: -90.0,
            snr_threshold_db: 2.0,
            pathloss_a: 61.4,
            pathloss_b: 2.0,
            shadow_sigma_db: 5.8,
            nlos_margin_db: 10.0,
            bs_x: 2.0,
            bs_y: 0.0,
            bs_height: 10.0,
            ris_x: 0.0,
            ris_y: 40.0,
            ris_height: 2.5,
            ue_center_x: 10.0,
            ue_center_y: 40.0,
            ue_height: 1.5,
            ue_radius: 5.0,
            k_ues: 6,
            t_slots: 100,
            bits: 3,
            p_paths: 4,
            l_paths: 4,
            a_max: 9.0,
            a_max_high: 4.0,
            high_requirement_count: 0,
            delta: 3e-3,
            seed: 1,
            realizations: 20,
            scheme: Scheme::Proposed,
            sweep_axis: None,
            sweep_values: Vec::new(),
        }
    }
}

impl ExperimentConfig {
    /// Node layout derived from the coordinate fields.
    pub fn geometry(&self) -> Result<SystemGeometry, ConfigError> {
        SystemGeometry::new(
            [self.bs_x, self.bs_y],
            self.bs_height,
            [self.ris_x, self.ris_y],
            self.ris_height,
            [self.ue_center_x, self.ue_center_y],
            self.ue_height,
            self.ue_radius,
        )
    }

    /// Antenna-array dimensions derived from the count fields.
    pub fn arrays(&self) -> Result<ArrayConfig, ConfigError> {
        ArrayConfig::new(self.n_tx, self.n_rx, self.ris_rows, self.ris_cols)?
            .with_element_spacing(self.element_spacing_ratio)
    }

    /// Link budget converted to linear units.
    pub fn budget(&self) -> Result<LinkBudget, ConfigError> {
        LinkBudget::from_db(
            self.tx_power_dbm,
            self.noise_power_dbm,
            self.snr_threshold_db,
            self.pathloss_a,
            self.pathloss_b,
            self.shadow_sigma_db,
            self.nlos_margin_db,
        )
    }

    /// Per-user average-age limits: the first `high_requirement_count`
    /// users get the stricter limit, the rest the ordinary one.
    pub fn per_ue_a_max(&self) -> Vec<f64> {
        (0..self.k_ues)
            .map(|k| {
                if k < self.high_requirement_count {
                    self.a_max_high
                } else {
                    self.a_max
                }
            })
            .collect()
    }

    /// Checks every field the run pipeline depends on; returns the first
    /// violation found.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.geometry()?;
        self.arrays()?;
        self.budget()?;
        phase_set(self.bits)?;
        if self.k_ues == 0 {
            return Err(ConfigError::out_of_range("k_ues", "must be >= 1"));
        }
        if self.t_slots == 0 {
            return Err(ConfigError::out_of_range("t_slots", "must be >= 1"));
        }
        if self.p_paths == 0 {
            return Err(ConfigError::out_of_range("p_paths", "must be >= 1"));
        }
        if self.l_paths == 0 {
            return Err(ConfigError::out_of_range("l_paths", "must be >= 1"));
        }
        if !(self.a_max > 0.0) || !self.a_max.is_finite() {
            return Err(ConfigError::out_of_range("a_max", "must be positive"));
        }
        if !(self.a_max_high > 0.0) || !self.a_max_high.is_finite() {
            return Err(ConfigError::out_of_range("a_max_high", "must be positive"));
        }
        if self.high_requirement_count > self.k_ues {
            return Err(ConfigError::out_of_range(
                "high_requirement_count",
                format!("must be <= k_ues ({})", self.k_ues),
            ));
        }
        if !(self.delta > 0.0) || !self.delta.is_finite() {
            return Err(ConfigError::out_of_range("delta", "must be positive"));
        }
        if self.realizations == 0 {
            return Err(ConfigError::out_of_range("realizations", "must be >= 1"));
        }
        Ok(())
    }
}

/// Every key accepted in config files and `--set` overrides.
pub const CONFIG_KEYS: &[&str] = &[
    "n_tx",
    "n_rx",
    "ris_rows",
    "ris_cols",
    "element_spacing_ratio",
    "carrier_ghz",
    "tx_power_dbm",
    "noise_power_dbm",
    "snr_threshold_db",
    "pathloss_a",
    "pathloss_b",
    "shadow_sigma_db",
    "nlos_margin_db",
    "bs_x",
    "bs_y",
    "bs_height",
    "ris_x",
    "ris_y",
    "ris_height",
    "ue_center_x",
    "ue_center_y",
    "ue_height",
    "ue_radius",
    "k_ues",
    "t_slots",
    "bits",
    "p_paths",
    "l_paths",
    "a_max",
    "a_max_high",
    "high_requirement_count",
    "delta",
    "seed",
    "realizations",
    "scheme",
    "sweep_axis",
    "sweep_values",
];

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    value.trim().parse().map_err(|e| ConfigError::InvalidValue {
        key: key.to_string(),
        reason: format!("{e}"),
    })
}

/// Sets one configuration field from its textual key and value. Used both
/// for config-file lines and `--set key=value` overrides.
pub fn apply_key_value(
    config: &mut ExperimentConfig,
    key: &str,
    value: &str,
) -> Result<(), ConfigError> {
    let key = key.trim();
    let value = value.trim();
    match key {
        "n_tx" => config.n_tx = parse_num(key, value)?,
        "n_rx" => config.n_rx = parse_num(key, value)?,
        "ris_rows" => config.ris_rows = parse_num(key, value)?,
        "ris_cols" => config.ris_cols = parse_num(key, value)?,
        "element_spacing_ratio" => config.element_spacing_ratio = parse_num(key, value)?,
        "carrier_ghz" => config.carrier_ghz = parse_num(key, value)?,
        "tx_power_dbm" => config.tx_power_dbm = parse_num(key, value)?,
        "noise_power_dbm" => config.noise_power_dbm = parse_num(key, value)?,
        "snr_threshold_db" => config.snr_threshold_db = parse_num(key, value)?,
        "pathloss_a" => config.pathloss_a = parse_num(key, value)?,
        "pathloss_b" => config.pathloss_b = parse_num(key, value)?,
        "shadow_sigma_db" => config.shadow_sigma_db = parse_num(key, value)?,
        "nlos_margin_db" => config.nlos_margin_db = parse_num(key, value)?,
        "bs_x" => config.bs_x = parse_num(key, value)?,
        "bs_y" => config.bs_y = parse_num(key, value)?,
        "bs_height" => config.bs_height = parse_num(key, value)?,
        "ris_x" => config.ris_x = parse_num(key, value)?,
        "ris_y" => config.ris_y = parse_num(key, value)?,
        "ris_height" => config.ris_height = parse_num(key, value)?,
        "ue_center_x" => config.ue_center_x = parse_num(key, value)?,
        "ue_center_y" => config.ue_center_y = parse_num(key, value)?,
        "ue_height" => config.ue_height = parse_num(key, value)?,
        "ue_radius" => config.ue_radius = parse_num(key, value)?,
        "k_ues" => config.k_ues = parse_num(key, value)?,
        "t_slots" => config.t_slots = parse_num(key, value)?,
        "bits" => config.bits = parse_num(key, value)?,
        "p_paths" => config.p_paths = parse_num(key, value)?,
        "l_paths" => config.l_paths = parse_num(key, value)?,
        "a_max" => config.a_max = parse_num(key, value)?,
        "a_max_high" => config.a_max_high = parse_num(key, value)?,
        "high_requirement_count" => config.high_requirement_count = parse_num(key, value)?,
        "delta" => config.delta = parse_num(key, value)?,
        "seed" => config.seed = parse_num(key, value)?,
        "realizations" => config.realizations = parse_num(key, value)?,
        "scheme" => config.scheme = Scheme::parse(value)?,
        "sweep_axis" => config.sweep_axis = Some(SweepAxis::parse(value)?),
        "sweep_values" => {
            let mut values = Vec::new();
            for part in value.split(',') {
                let part = part.trim();
                if part.is_empty() {
                    continue;
                }
                values.push(parse_num::<f64>(key, part)?);
            }
            if values.is_empty() {
                return Err(ConfigError::InvalidValue {
                    key: key.to_string(),
                    reason: "expected a comma-separated list of numbers".to_string(),
                });
            }
            config.sweep_values = values;
        }
        other => return Err(ConfigError::UnknownKey(other.to_string())),
    }
    Ok(())
}

/// Applies a whole config file: one `key = value` per line, `#` starts a
/// comment, blank lines are ignored. Later lines override earlier ones.
pub fn apply_config_str(config: &mut ExperimentConfig, text: &str) -> Result<(), ConfigError> {
    for raw_line in text.lines() {
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError::InvalidValue {
                key: line.to_string(),
                reason: "expected `key = value`".to_string(),
            });
        };
        apply_key_value(config, key, value)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_documented_scenario() {
        let config = ExperimentConfig::default();
        assert_eq!(config.n_tx, 64);
        assert_eq!(config.n_rx, 64);
        assert_eq!(config.ris_rows * config.ris_cols, 100);
        assert_eq!(config.tx_power_dbm, 45.0);
        assert_eq!(config.noise_power_dbm, -90.0);
        assert_eq!(config.snr_threshold_db, 2.0);
        assert_eq!(config.carrier_ghz, 28.0);
        assert_eq!(config.k_ues, 6);
        assert_eq!(config.t_slots, 100);
        assert_eq!(config.bits, 3);
        assert_eq!(config.p_paths, 4);
        assert_eq!(config.l_paths, 4);
        assert_eq!(config.a_max, 9.0);
        assert_eq!(config.delta, 3e-3);
        assert_eq!(config.ue_radius, 5.0);
        assert_eq!(
            (config.bs_x, config.bs_y, config.bs_height),
            (2.0, 0.0, 10.0)
        );
        assert_eq!(
            (config.ris_x, config.ris_y, config.ris_height),
            (0.0, 40.0, 2.5)
        );
        assert_eq!(
            (config.ue_center_x, config.ue_center_y, config.ue_height),
            (10.0, 40.0, 1.5)
        );
        config.validate().unwrap();
    }

    #[test]
    fn config_file_round_trip_with_comments() {
        let mut config = ExperimentConfig::default();
        apply_config_str(
            &mut config,
            "# scenario tweaks\n\
             k_ues = 4   # fewer users\n\
             \n\
             a_max=7.5\n\
             scheme = round_robin\n\
             sweep_axis = t_slots\n\
             sweep_values = 50, 100,150\n",
        )
        .unwrap();
        assert_eq!(config.k_ues, 4);
        assert_eq!(config.a_max, 7.5);
        assert_eq!(config.scheme, Scheme::RoundRobin);
        assert_eq!(config.sweep_axis, Some(SweepAxis::TSlots));
        assert_eq!(config.sweep_values, vec![50.0, 100.0, 150.0]);
    }

    #[test]
    fn unknown_key_is_rejected() {
        let mut config = ExperimentConfig::default();
        let err = apply_config_str(&mut config, "n_tx_antennas = 64").unwrap_err();
        assert!(matches!(err, ConfigError::UnknownKey(k) if k == "n_tx_antennas"));
    }

    #[test]
    fn malformed_line_is_rejected() {
        let mut config = ExperimentConfig::default();
        assert!(apply_config_str(&mut config, "just words").is_err());
        assert!(apply_config_str(&mut config, "k_ues = six").is_err());
    }

    #[test]
    fn every_listed_key_is_accepted() {
        for &key in CONFIG_KEYS {
            let mut config = ExperimentConfig::default();
            let value = match key {
                "scheme" => "random_bf",
                "sweep_axis" => "bits",
                "sweep_values" => "1,2,3",
                _ => "4",
            };
            apply_key_value(&mut config, key, value)
                .unwrap_or_else(|e| panic!("key {key} rejected: {e}"));
        }
    }

    #[test]
    fn scheme_names_round_trip() {
        for scheme in Scheme::ALL {
            assert_eq!(Scheme::parse(scheme.name()).unwrap(), scheme);
        }
        assert!(Scheme::parse("optimal").is_err());
    }

    #[test]
    fn axis_names_round_trip() {
        for axis in SweepAxis::ALL {
            assert_eq!(SweepAxis::parse(axis.name()).unwrap(), axis);
        }
        assert!(matches!(
            SweepAxis::parse("n_rx"),
            Err(ConfigError::UnknownAxis(_))
        ));
    }

    #[test]
    fn axis_apply_sets_the_right_field() {
        let mut config = ExperimentConfig::default();
        SweepAxis::AMax.apply(&mut config, 11.0).unwrap();
        assert_eq!(config.a_max, 11.0);
        SweepAxis::RisElements.apply(&mut config, 196.0).unwrap();
        assert_eq!((config.ris_rows, config.ris_cols), (14, 14));
        SweepAxis::NTx.apply(&mut config, 128.0).unwrap();
        assert_eq!(config.n_tx, 128);
        SweepAxis::Bits.apply(&mut config, 5.0).unwrap();
        assert_eq!(config.bits, 5);
        SweepAxis::TSlots.apply(&mut config, 250.0).unwrap();
        assert_eq!(config.t_slots, 250);
        SweepAxis::KUes.apply(&mut config, 12.0).unwrap();
        assert_eq!(config.k_ues, 12);
        SweepAxis::HighRequirementCount
            .apply(&mut config, 3.0)
            .unwrap();
        assert_eq!(config.high_requirement_count, 3);
    }

    #[test]
    fn axis_apply_rejects_bad_values() {
        let mut config = ExperimentConfig::default();
        assert!(SweepAxis::RisElements.apply(&mut config, 50.0).is_err());
        assert!(SweepAxis::NTx.apply(&mut config, 48.0).is_err());
        assert!(SweepAxis::Bits.apply(&mut config, 0.0).is_err());
        assert!(SweepAxis::KUes.apply(&mut config, 2.5).is_err());
        assert!(SweepAxis::AMax.apply(&mut config, -1.0).is_err());
        assert!(SweepAxis::TSlots.apply(&mut config, 0.0).is_err());
    }

    #[test]
    fn validate_catches_field_violations() {
        let mut config = ExperimentConfig::default();
        config.k_ues = 0;
        assert!(config.validate().is_err());

        let mut config = ExperimentConfig::default();
        config.high_requirement_count = 7;
        assert!(config.validate().is_err());

        let mut config = ExperimentConfig::default();
        config.delta = 0.0;
        assert!(config.validate().is_err());

        let mut config = ExperimentConfig::default();
        config.n_tx = 48;
        assert!(config.validate().is_err());

        let mut config = ExperimentConfig::default();
        config.realizations = 0;
        assert!(config.validate().is_err());
    }

    #[test]
    fn per_ue_limits_split_by_requirement_class() {
        let mut config = ExperimentConfig::default();
        config.k_ues = 4;
        config.high_requirement_count = 2;
        config.a_max = 9.0;
        config.a_max_high = 4.0;
        assert_eq!(config.per_ue_a_max(), vec![4.0, 4.0, 9.0, 9.0]);
    }
}
