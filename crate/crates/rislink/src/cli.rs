//! Command-line front end: argument parsing, figure presets, and file
//! output. All numerical work is delegated to [`crate::harness`].

use crate::error::ConfigError;
use crate::harness::{
    apply_config_str, apply_key_value, run_point, run_selftests, sweep, ExperimentConfig, Scheme,
    SweepAxis, SweepCell,
};
use crate::report::{
    write_line_plot_svg, write_per_ue_csv, write_realization_csv, write_sweep_csv, PerUeRow,
    PlotSeries, RealizationRow, SweepRow,
};
use clap::{Args, Parser, Subcommand};
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

/// Exit code for a completed invocation.
pub const EXIT_SUCCESS: i32 = 0;
/// Exit code for a failure at run time (I/O, failed selftest).
pub const EXIT_RUNTIME: i32 = 1;
/// Exit code for bad usage: unknown keys, malformed values, missing
/// files, invalid axis values. Matches the code clap uses for flag errors.
pub const EXIT_USAGE: i32 = 2;

/// Link-level simulator for a surface-assisted millimeter-wave downlink
/// with age-of-information-aware scheduling.
#[derive(Debug, Parser)]
#[command(name = "rislink", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every scheme at one fixed configuration.
    Run {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Sweep one parameter axis over a list of values, all schemes.
    Sweep {
        /// Axis to vary: a_max, high_requirement_count, k_ues, bits,
        /// ris_elements, n_tx, or t_slots. Falls back to the config
        /// file's `sweep_axis`.
        #[arg(long)]
        axis: Option<String>,
        /// Comma-separated axis values. Falls back to the config file's
        /// `sweep_values`.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        values: Vec<f64>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run a named preset sweep: fig5 through fig13.
    Figure {
        /// Preset name, e.g. fig13.
        name: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run the built-in oracle suites and print one line per suite.
    Selftest,
}

/// Flags shared by every experiment subcommand.
#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Configuration file (`key = value` lines, `#` comments).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Override one configuration key; repeatable. Example: --set k_ues=4
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    /// Root seed override (applied after the file and --set).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Directory for CSV and SVG outputs.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Worker thread count; defaults to the number of logical CPUs.
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Runtime(String),
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

/// Runs a parsed invocation and returns the process exit code, printing
/// any diagnostic to stderr.
pub fn execute(cli: Cli) -> i32 {
    match dispatch(cli) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            EXIT_RUNTIME
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Run { common } => {
            init_jobs(common.jobs)?;
            let config = load_config(&common)?;
            let cells = run_point(&config, &Scheme::ALL)?;
            for cell in &cells {
                println!(
                    "{}: per-slot rate {:.4} bit/s/Hz, system AoI {:.3}, feasible {:.0}/{}",
                    cell.scheme,
                    cell.aggregate.mean_rate_per_slot,
                    cell.aggregate.mean_system_aoi,
                    cell.aggregate.feasible_fraction * cell.results.len() as f64,
                    cell.results.len()
                );
            }
            write_outputs(&common.out, "run", "configuration", &cells)?;
            Ok(EXIT_SUCCESS)
        }
        Command::Sweep {
            axis,
            values,
            common,
        } => {
            init_jobs(common.jobs)?;
            let config = load_config(&common)?;
            let axis = match axis {
                Some(name) => SweepAxis::parse(&name)?,
                None => config.sweep_axis.ok_or_else(|| {
                    CliError::Usage(
                        "no sweep axis: pass --axis or set sweep_axis in the config".to_string(),
                    )
                })?,
            };
            let values = if values.is_empty() {
                if config.sweep_values.is_empty() {
                    return Err(CliError::Usage(
                        "no sweep values: pass --values or set sweep_values in the config"
                            .to_string(),
                    ));
                }
                config.sweep_values.clone()
            } else {
                values
            };
            let cells = sweep(&config, axis, &values)?;
            let prefix = format!("sweep_{}", axis.name());
            write_outputs(&common.out, &prefix, axis.name(), &cells)?;
            Ok(EXIT_SUCCESS)
        }
        Command::Figure { name, common } => {
            init_jobs(common.jobs)?;
            let config = load_config(&common)?;
            let (axis, values) = figure_preset(&name).ok_or_else(|| {
                CliError::Usage(format!(
                    "unknown figure {name:?}; expected one of fig5 fig6 fig7 fig8 fig9 \
                     fig10 fig11 fig12 fig13"
                ))
            })?;
            let cells = sweep(&config, axis, &values)?;
            write_outputs(&common.out, &name, axis.name(), &cells)?;
            Ok(EXIT_SUCCESS)
        }
        Command::Selftest => {
            let mut all_passed = true;
            let reports = run_selftests();
            for suite in &reports {
                let status = if suite.passed { "PASS" } else { "FAIL" };
                println!("{status} {}: {}", suite.name, suite.detail);
                all_passed &= suite.passed;
            }
            println!(
                "{}/{} suites passed",
                reports.iter().filter(|s| s.passed).count(),
                reports.len()
            );
            Ok(if all_passed { EXIT_SUCCESS } else { EXIT_RUNTIME })
        }
    }
}

/// The sweep behind each figure preset. Values are the published sweep
/// ranges; everything else comes from the configuration.
pub fn figure_preset(name: &str) -> Option<(SweepAxis, Vec<f64>)> {
    let preset = match name {
        // Sum rate and system AoI versus the age limit.
        "fig5" | "fig6" => (SweepAxis::AMax, vec![3.0, 5.0, 7.0, 9.0, 11.0]),
        // Per-user AoI traces at three representative age limits.
        "fig7" => (SweepAxis::AMax, vec![4.0, 9.0, 14.0]),
        // A growing prefix of users is moved to the stricter age limit.
        "fig8" => (
            SweepAxis::HighRequirementCount,
            vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0],
        ),
        "fig9" => (SweepAxis::KUes, vec![4.0, 6.0, 8.0, 10.0, 12.0, 14.0]),
        "fig10" => (SweepAxis::Bits, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]),
        "fig11" => (
            SweepAxis::RisElements,
            vec![36.0, 64.0, 100.0, 144.0, 196.0, 256.0],
        ),
        "fig12" => (
            SweepAxis::NTx,
            vec![16.0, 32.0, 64.0, 128.0, 256.0, 512.0],
        ),
        "fig13" => (
            SweepAxis::TSlots,
            vec![50.0, 100.0, 150.0, 200.0, 250.0, 300.0],
        ),
        _ => return None,
    };
    Some(preset)
}

fn init_jobs(jobs: Option<usize>) -> Result<(), CliError> {
    let Some(jobs) = jobs else { return Ok(()) };
    if jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".to_string()));
    }
    // The pool is process-global and can only be sized once; a second
    // sizing attempt (tests, repeated invocations) keeps the first pool.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build_global();
    Ok(())
}

fn load_config(common: &CommonArgs) -> Result<ExperimentConfig, CliError> {
    let mut config = ExperimentConfig::default();
    if let Some(path) = &common.config {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        apply_config_str(&mut config, &text)?;
    }
    for entry in &common.overrides {
        let Some((key, value)) = entry.split_once('=') else {
            return Err(CliError::Usage(format!(
                "malformed --set {entry:?}; expected KEY=VALUE"
            )));
        };
        apply_key_value(&mut config, key, value)?;
    }
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    config.validate()?;
    Ok(config)
}

/// Writes the summary CSV, the two detail CSVs, and the two SVG plots for
/// a finished set of cells, announcing each file on stdout.
fn write_outputs(
    out_dir: &Path,
    prefix: &str,
    axis_label: &str,
    cells: &[SweepCell],
) -> Result<(), CliError> {
    fs::create_dir_all(out_dir)?;

    let summary_rows: Vec<SweepRow> = cells
        .iter()
        .map(|cell| SweepRow {
            axis_value: cell.axis_value,
            scheme: cell.scheme.name().to_string(),
            mean_sum_rate: cell.aggregate.mean_sum_rate,
            sd_sum_rate: cell.aggregate.sd_sum_rate,
            mean_rate_per_slot: cell.aggregate.mean_rate_per_slot,
            mean_system_aoi: cell.aggregate.mean_system_aoi,
            sd_system_aoi: cell.aggregate.sd_system_aoi,
            feasible_fraction: cell.aggregate.feasible_fraction,
            mean_bcd_iters: cell.aggregate.mean_bcd_iters,
        })
        .collect();
    write_file(out_dir, &format!("{prefix}_summary.csv"), |w| {
        write_sweep_csv(w, &summary_rows)
    })?;

    let realization_rows: Vec<RealizationRow> = cells
        .iter()
        .flat_map(|cell| {
            cell.results.iter().enumerate().map(move |(i, r)| RealizationRow {
                axis_value: cell.axis_value,
                scheme: cell.scheme.name().to_string(),
                realization: i,
                sum_rate: r.sum_rate,
                system_aoi: r.system_aoi,
                feasible: r.feasible,
            })
        })
        .collect();
    write_file(out_dir, &format!("{prefix}_realizations.csv"), |w| {
        write_realization_csv(w, &realization_rows)
    })?;

    let per_ue_rows: Vec<PerUeRow> = cells
        .iter()
        .flat_map(|cell| {
            cell.results.iter().enumerate().flat_map(move |(i, r)| {
                r.per_ue_aoi.iter().enumerate().map(move |(ue, &aoi)| PerUeRow {
                    axis_value: cell.axis_value,
                    scheme: cell.scheme.name().to_string(),
                    realization: i,
                    ue,
                    average_aoi: aoi,
                })
            })
        })
        .collect();
    write_file(out_dir, &format!("{prefix}_per_ue_aoi.csv"), |w| {
        write_per_ue_csv(w, &per_ue_rows)
    })?;

    let rate_series = scheme_series(cells, |cell| cell.aggregate.mean_sum_rate);
    write_file(out_dir, &format!("{prefix}_sum_rate.svg"), |w| {
        write_line_plot_svg(
            w,
            &format!("{prefix}: mean sum rate"),
            axis_label,
            "sum rate over the horizon (bit/s/Hz)",
            &rate_series,
        )
    })?;

    let aoi_series = scheme_series(cells, |cell| cell.aggregate.mean_system_aoi);
    write_file(out_dir, &format!("{prefix}_system_aoi.svg"), |w| {
        write_line_plot_svg(
            w,
            &format!("{prefix}: mean system age"),
            axis_label,
            "system average AoI (slots)",
            &aoi_series,
        )
    })?;

    Ok(())
}

/// Groups cells into one plot series per scheme, preserving value order.
fn scheme_series(cells: &[SweepCell], metric: impl Fn(&SweepCell) -> f64) -> Vec<PlotSeries> {
    let mut series: Vec<PlotSeries> = Vec::new();
    for cell in cells {
        let name = cell.scheme.name();
        let point = (cell.axis_value, metric(cell));
        match series.iter_mut().find(|s| s.name == name) {
            Some(s) => s.points.push(point),
            None => series.push(PlotSeries {
                name: name.to_string(),
                points: vec![point],
            }),
        }
    }
    series
}

fn write_file(
    out_dir: &Path,
    name: &str,
    body: impl FnOnce(&mut std::io::BufWriter<fs::File>) -> std::io::Result<()>,
) -> Result<(), CliError> {
    let path = out_dir.join(name);
    let file = fs::File::create(&path)?;
    let mut writer = std::io::BufWriter::new(file);
    body(&mut writer)?;
    writer.flush()?;
    println!("wrote {}", path.display());
    Ok(())
}
