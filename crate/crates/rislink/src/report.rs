//! Deterministic text output: float formatting, CSV schemas, and simple
//! SVG line plots.
//!
//! Every number goes through [`format_sig`], so a rerun with the same seed
//! produces byte-identical files regardless of thread count or platform
//! locale.

use std::io::{self, Write};

/// Formats a float with six significant digits, trimming trailing zeros;
/// magnitudes outside `[1e-4, 1e6)` switch to exponent notation.
pub fn format_sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let neg = x < 0.0;
    let ax = x.abs();
    let mut exp = ax.log10().floor() as i32;
    // Mantissa rounded to six digits; rounding can carry into the next
    // decade (999999.7 -> 1000000), so renormalize once.
    let mut mant = (ax / 10f64.powi(exp - 5)).round();
    if mant >= 1e6 {
        mant /= 10.0;
        exp += 1;
    }
    let digits = format!("{mant:.0}");
    debug_assert_eq!(digits.len(), 6);
    let body = if (-4..=5).contains(&exp) {
        if exp >= 0 {
            let split = exp as usize + 1;
            let frac = digits[split..].trim_end_matches('0');
            if frac.is_empty() {
                digits[..split].to_string()
            } else {
                format!("{}.{}", &digits[..split], frac)
            }
        } else {
            let zeros = "0".repeat((-exp - 1) as usize);
            let frac = format!("{zeros}{digits}");
            format!("0.{}", frac.trim_end_matches('0'))
        }
    } else {
        let frac = digits[1..].trim_end_matches('0');
        let mantissa = if frac.is_empty() {
            digits[..1].to_string()
        } else {
            format!("{}.{}", &digits[..1], frac)
        };
        format!("{mantissa}e{exp}")
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// One aggregated row of a sweep: a single (axis value, scheme) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub axis_value: f64,
    pub scheme: String,
    pub mean_sum_rate: f64,
    pub sd_sum_rate: f64,
    pub mean_rate_per_slot: f64,
    pub mean_system_aoi: f64,
    pub sd_system_aoi: f64,
    pub feasible_fraction: f64,
    pub mean_bcd_iters: f64,
}

/// Header of the sweep summary CSV. Fixed schema; downstream tooling keys
/// on these names.
pub const SWEEP_CSV_HEADER: &str = "axis_value,scheme,mean_sum_rate,sd_sum_rate,mean_rate_per_slot,mean_system_aoi,sd_system_aoi,feasible_fraction,mean_bcd_iters";

/// Writes the sweep summary CSV.
pub fn write_sweep_csv<W: Write>(mut out: W, rows: &[SweepRow]) -> io::Result<()> {
    writeln!(out, "{SWEEP_CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            format_sig(r.axis_value),
            r.scheme,
            format_sig(r.mean_sum_rate),
            format_sig(r.sd_sum_rate),
            format_sig(r.mean_rate_per_slot),
            format_sig(r.mean_system_aoi),
            format_sig(r.sd_system_aoi),
            format_sig(r.feasible_fraction),
            format_sig(r.mean_bcd_iters),
        )?;
    }
    Ok(())
}

/// One per-realization row of the optional detail CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct RealizationRow {
    pub axis_value: f64,
    pub scheme: String,
    pub realization: usize,
    pub sum_rate: f64,
    pub system_aoi: f64,
    pub feasible: bool,
}

/// Writes the optional per-realization detail CSV.
pub fn write_realization_csv<W: Write>(mut out: W, rows: &[RealizationRow]) -> io::Result<()> {
    writeln!(
        out,
        "axis_value,scheme,realization,sum_rate,system_aoi,feasible"
    )?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            format_sig(r.axis_value),
            r.scheme,
            r.realization,
            format_sig(r.sum_rate),
            format_sig(r.system_aoi),
            u8::from(r.feasible),
        )?;
    }
    Ok(())
}

/// One per-user row of the optional AoI detail CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct PerUeRow {
    pub axis_value: f64,
    pub scheme: String,
    pub realization: usize,
    pub ue: usize,
    pub average_aoi: f64,
}

/// Writes the optional per-user average-AoI CSV.
pub fn write_per_ue_csv<W: Write>(mut out: W, rows: &[PerUeRow]) -> io::Result<()> {
    writeln!(out, "axis_value,scheme,realization,ue,average_aoi")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            format_sig(r.axis_value),
            r.scheme,
            r.realization,
            r.ue,
            format_sig(r.average_aoi),
        )?;
    }
    Ok(())
}

/// One named polyline of a plot.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotSeries {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 160.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 50.0;

fn axis_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in values {
        if v.is_finite() {
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if lo == hi {
        return (lo - 1.0, hi + 1.0);
    }
    (lo, hi)
}

/// Writes a standalone SVG line plot: one polyline per series, linear
/// axes with five ticks each, legend on the right.
pub fn write_line_plot_svg<W: Write>(
    mut out: W,
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[PlotSeries],
) -> io::Result<()> {
    let (x_lo, x_hi) = axis_range(series.iter().flat_map(|s| s.points.iter().map(|p| p.0)));
    let (y_lo, y_hi) = axis_range(series.iter().flat_map(|s| s.points.iter().map(|p| p.1)));
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = |x: f64| MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let sy = |y: f64| MARGIN_TOP + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h;

    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"13\">"
    )?;
    writeln!(
        out,
        "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>"
    )?;
    writeln!(
        out,
        "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">{}</text>",
        MARGIN_LEFT + plot_w / 2.0,
        xml_escape(title)
    )?;
    // Axes.
    writeln!(
        out,
        "<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>",
        MARGIN_LEFT,
        MARGIN_TOP + plot_h,
        MARGIN_LEFT + plot_w
    )?;
    writeln!(
        out,
        "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>",
        MARGIN_LEFT,
        MARGIN_TOP,
        MARGIN_TOP + plot_h
    )?;
    for i in 0..=4 {
        let fx = x_lo + (x_hi - x_lo) * i as f64 / 4.0;
        let fy = y_lo + (y_hi - y_lo) * i as f64 / 4.0;
        let px = sx(fx);
        let py = sy(fy);
        writeln!(
            out,
            "<line x1=\"{px}\" y1=\"{0}\" x2=\"{px}\" y2=\"{1}\" stroke=\"black\"/>",
            MARGIN_TOP + plot_h,
            MARGIN_TOP + plot_h + 5.0
        )?;
        writeln!(
            out,
            "<text x=\"{px}\" y=\"{}\" text-anchor=\"middle\">{}</text>",
            MARGIN_TOP + plot_h + 20.0,
            format_sig(fx)
        )?;
        writeln!(
            out,
            "<line x1=\"{0}\" y1=\"{py}\" x2=\"{1}\" y2=\"{py}\" stroke=\"black\"/>",
            MARGIN_LEFT - 5.0,
            MARGIN_LEFT
        )?;
        writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>",
            MARGIN_LEFT - 9.0,
            py + 4.0,
            format_sig(fy)
        )?;
    }
    writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 10.0,
        xml_escape(x_label)
    )?;
    writeln!(
        out,
        "<text x=\"18\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {0})\">{1}</text>",
        MARGIN_TOP + plot_h / 2.0,
        xml_escape(y_label)
    )?;
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        if !s.points.is_empty() {
            let pts: Vec<String> = s
                .points
                .iter()
                .map(|&(x, y)| format!("{},{}", format_sig(sx(x)), format_sig(sy(y))))
                .collect();
            writeln!(
                out,
                "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"2\"/>",
                pts.join(" ")
            )?;
            for &(x, y) in &s.points {
                writeln!(
                    out,
                    "<circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"{color}\"/>",
                    format_sig(sx(x)),
                    format_sig(sy(y))
                )?;
            }
        }
        let ly = MARGIN_TOP + 14.0 + 20.0 * i as f64;
        writeln!(
            out,
            "<line x1=\"{0}\" y1=\"{ly}\" x2=\"{1}\" y2=\"{ly}\" stroke=\"{color}\" stroke-width=\"2\"/>",
            MARGIN_LEFT + plot_w + 14.0,
            MARGIN_LEFT + plot_w + 38.0
        )?;
        writeln!(
            out,
            "<text x=\"{}\" y=\"{}\">{}</text>",
            MARGIN_LEFT + plot_w + 44.0,
            ly + 4.0,
            xml_escape(&s.name)
        )?;
    }
    writeln!(out, "</svg>")?;
    Ok(())
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(format_sig(0.0), "0");
        assert_eq!(format_sig(9.0), "9");
        assert_eq!(format_sig(100.0), "100");
        assert_eq!(format_sig(5.97), "5.97");
        assert_eq!(format_sig(-5.969999), "-5.97");
        assert_eq!(format_sig(1234.5678), "1234.57");
        assert_eq!(format_sig(0.00012345678), "0.000123457");
        assert_eq!(format_sig(123456.49), "123456");
        assert_eq!(format_sig(999999.7), "1e6");
        assert_eq!(format_sig(0.1), "0.1");
        assert_eq!(format_sig(1.0e-7), "1e-7");
        assert_eq!(format_sig(2.5e8), "2.5e8");
        assert_eq!(format_sig(f64::INFINITY), "inf");
    }

    #[test]
    fn format_is_stable_across_calls() {
        for &x in &[3.14159265, 1e-5, 97.5, -0.333333333] {
            assert_eq!(format_sig(x), format_sig(x));
        }
    }

    #[test]
    fn sweep_csv_schema_is_fixed() {
        let rows = vec![SweepRow {
            axis_value: 9.0,
            scheme: "proposed".into(),
            mean_sum_rate: 597.1234,
            sd_sum_rate: 12.3,
            mean_rate_per_slot: 5.971234,
            mean_system_aoi: 3.25,
            sd_system_aoi: 0.5,
            feasible_fraction: 1.0,
            mean_bcd_iters: 4.2,
        }];
        let mut buf = Vec::new();
        write_sweep_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "axis_value,scheme,mean_sum_rate,sd_sum_rate,mean_rate_per_slot,mean_system_aoi,sd_system_aoi,feasible_fraction,mean_bcd_iters"
        );
        assert_eq!(
            lines.next().unwrap(),
            "9,proposed,597.123,12.3,5.97123,3.25,0.5,1,4.2"
        );
    }

    #[test]
    fn svg_plot_is_well_formed() {
        let series = vec![
            PlotSeries {
                name: "proposed".into(),
                points: vec![(1.0, 2.0), (2.0, 3.0), (3.0, 2.5)],
            },
            PlotSeries {
                name: "round_robin".into(),
                points: vec![(1.0, 1.0), (2.0, 1.5), (3.0, 1.2)],
            },
        ];
        let mut buf = Vec::new();
        write_line_plot_svg(&mut buf, "demo", "x", "y", &series).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("<svg"));
        assert!(text.trim_end().ends_with("</svg>"));
        assert_eq!(text.matches("<polyline").count(), 2);
    }

    #[test]
    fn svg_plot_handles_degenerate_ranges() {
        let series = vec![PlotSeries {
            name: "flat".into(),
            points: vec![(1.0, 5.0), (2.0, 5.0)],
        }];
        let mut buf = Vec::new();
        write_line_plot_svg(&mut buf, "flat", "x", "y", &series).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(!text.contains("nan") && !text.contains("inf"));
    }
}
