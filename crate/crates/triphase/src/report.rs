//! Deterministic CSV, sidecar-log, and SVG plot emission.
//!
//! The CSV schema is fixed: [`CSV_HEADER`] followed by one line per
//! [`Row`], every float rendered by [`format_sig12`], lines terminated by a
//! single line feed. Identical rows always produce byte-identical files.
//! Rows whose bound cell was blanked by a sentinel carry their explanation
//! in a sidecar `<stem>.log` next to the CSV. Plots are self-contained SVG
//! and carry no acceptance weight.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io;
use std::path::Path;

use thiserror::Error;

use crate::scenario::{PresetAxis, PresetOrdinate, Row};

/// Exact column header of every emitted CSV.
pub const CSV_HEADER: &str = "scenario,engine,probe,N,r_a,r_b,r_c,eta,sigma,qcrb,\
                              mean_n0,var_n0,var_n1,cov01,g2_intra_0,g2_inter_01,discrepancy";

/// Render a float with 12 significant digits, shortest round-trip form.
///
/// The value is first rounded to 12 significant digits, then printed as the
/// shortest decimal string that parses back to that rounded value; tiny and
/// huge magnitudes switch to exponent notation so the form stays short.
#[must_use]
pub fn format_sig12(v: f64) -> String {
    if v == 0.0 {
        return "0".to_owned();
    }
    let rounded: f64 = format!("{v:.11e}").parse().expect("rounded float re-parses");
    let mag = rounded.abs();
    if mag < 1e-4 || mag >= 1e16 {
        format!("{rounded:e}")
    } else {
        format!("{rounded}")
    }
}

fn opt_cell(v: Option<f64>) -> String {
    v.map(format_sig12).unwrap_or_default()
}

/// Render rows to the CSV contract (header + one line per row, LF endings).
#[must_use]
pub fn render_csv(rows: &[Row]) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            row.scenario,
            row.engine.as_str(),
            row.probe.as_str(),
            row.n,
            format_sig12(row.gains[0]),
            format_sig12(row.gains[1]),
            format_sig12(row.gains[2]),
            format_sig12(row.eta),
            opt_cell(row.sigma),
            opt_cell(row.qcrb),
            format_sig12(row.mean_n0),
            format_sig12(row.var_n0),
            format_sig12(row.var_n1),
            format_sig12(row.cov01),
            opt_cell(row.g2_intra_0),
            opt_cell(row.g2_inter_01),
            opt_cell(row.discrepancy),
        );
    }
    out
}

/// Render the sidecar diagnostics, one line per affected row; empty string
/// when no row carries a diagnostic.
#[must_use]
pub fn render_sidecar(rows: &[Row]) -> String {
    let mut out = String::new();
    for row in rows {
        if let Some(diag) = &row.diagnostic {
            let _ = writeln!(
                out,
                "{} engine={} N={} r_a={}: {}",
                row.scenario,
                row.engine.as_str(),
                row.n,
                format_sig12(row.gains[0]),
                diag
            );
        }
    }
    out
}

/// Write the CSV to `dest` and, if any row carries a diagnostic, the
/// sidecar log to `dest` with its extension replaced by `log`.
pub fn emit_csv(rows: &[Row], dest: &Path) -> io::Result<()> {
    std::fs::write(dest, render_csv(rows))?;
    let sidecar = render_sidecar(rows);
    if !sidecar.is_empty() {
        std::fs::write(dest.with_extension("log"), sidecar)?;
    }
    Ok(())
}

/// Plot rendering failed before any I/O.
#[derive(Debug, Error, PartialEq)]
pub enum PlotError {
    #[error("nothing to plot")]
    Nothing,
}

const SVG_W: f64 = 640.0;
const SVG_H: f64 = 440.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 150.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 50.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

/// Short tick label (4 significant digits, shortest form).
fn tick_label(v: f64) -> String {
    if v == 0.0 {
        return "0".to_owned();
    }
    let rounded: f64 = format!("{v:.3e}").parse().expect("rounded float re-parses");
    let mag = rounded.abs();
    if mag < 1e-4 || mag >= 1e6 {
        format!("{rounded:e}")
    } else {
        format!("{rounded}")
    }
}

/// Render one preset family as a self-contained SVG: one polyline per
/// scenario tag, markers on every point, log ordinate when the values span
/// more than two decades. Rows with an empty ordinate cell are skipped;
/// if nothing remains, [`PlotError::Nothing`].
pub fn render_plot(
    rows: &[Row],
    axis: PresetAxis,
    ordinate: PresetOrdinate,
    title: &str,
) -> Result<String, PlotError> {
    let mut curves: BTreeMap<&str, Vec<(f64, f64)>> = BTreeMap::new();
    for row in rows {
        let y = match ordinate {
            PresetOrdinate::Qcrb => row.qcrb,
            PresetOrdinate::G2Intra0 => row.g2_intra_0,
            PresetOrdinate::G2Inter01 => row.g2_inter_01,
        };
        let Some(y) = y else { continue };
        let x = match axis {
            PresetAxis::N => f64::from(row.n),
            PresetAxis::GainA => row.gains[0],
        };
        curves.entry(row.scenario.as_str()).or_default().push((x, y));
    }
    if curves.values().all(Vec::is_empty) || curves.is_empty() {
        return Err(PlotError::Nothing);
    }

    let points = curves.values().flatten();
    let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in points {
        x_min = x_min.min(x);
        x_max = x_max.max(x);
        y_min = y_min.min(y);
        y_max = y_max.max(y);
    }
    if x_min == x_max {
        x_min -= 0.5;
        x_max += 0.5;
    }
    let log_y = y_min > 0.0 && y_max / y_min > 100.0;
    let (ty_min, ty_max) = if log_y {
        (y_min.log10(), y_max.log10())
    } else {
        (y_min, y_max)
    };
    let (ty_min, ty_max) = if ty_min == ty_max {
        (ty_min - 0.5, ty_max + 0.5)
    } else {
        let pad = 0.05 * (ty_max - ty_min);
        (ty_min - pad, ty_max + pad)
    };

    let plot_w = SVG_W - MARGIN_L - MARGIN_R;
    let plot_h = SVG_H - MARGIN_T - MARGIN_B;
    let sx = move |x: f64| MARGIN_L + (x - x_min) / (x_max - x_min) * plot_w;
    let sy = move |y: f64| {
        let t = if log_y { y.log10() } else { y };
        MARGIN_T + plot_h - (t - ty_min) / (ty_max - ty_min) * plot_h
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_W}" height="{SVG_H}" viewBox="0 0 {SVG_W} {SVG_H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="{SVG_W}" height="{SVG_H}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="15">{title}</text>"#,
        MARGIN_L + plot_w / 2.0
    );

    // Axes.
    let x0 = MARGIN_L;
    let y0 = MARGIN_T + plot_h;
    let _ = writeln!(
        svg,
        r#"<path d="M {x0:.1} {MARGIN_T:.1} L {x0:.1} {y0:.1} L {:.1} {y0:.1}" stroke="black" fill="none"/>"#,
        MARGIN_L + plot_w
    );

    // X ticks: 5 evenly spaced.
    for i in 0..=4 {
        let x = x_min + (x_max - x_min) * f64::from(i) / 4.0;
        let px = sx(x);
        let _ = writeln!(
            svg,
            r#"<line x1="{px:.1}" y1="{y0:.1}" x2="{px:.1}" y2="{:.1}" stroke="black"/>"#,
            y0 + 5.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{px:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            y0 + 20.0,
            tick_label(x)
        );
    }
    let x_label = match axis {
        PresetAxis::N => "N",
        PresetAxis::GainA => "r_a",
    };
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{x_label}</text>"#,
        MARGIN_L + plot_w / 2.0,
        y0 + 38.0
    );

    // Y ticks: decades under log scale, else 5 evenly spaced.
    if log_y {
        let lo = ty_min.ceil() as i32;
        let hi = ty_max.floor() as i32;
        for d in lo..=hi {
            let y = 10f64.powi(d);
            let py = sy(y);
            let _ = writeln!(
                svg,
                r#"<line x1="{:.1}" y1="{py:.1}" x2="{x0:.1}" y2="{py:.1}" stroke="black"/>"#,
                x0 - 5.0
            );
            let _ = writeln!(
                svg,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
                x0 - 8.0,
                py + 4.0,
                tick_label(y)
            );
        }
    } else {
        for i in 0..=4 {
            let ty = ty_min + (ty_max - ty_min) * f64::from(i) / 4.0;
            let py = MARGIN_T + plot_h - (ty - ty_min) / (ty_max - ty_min) * plot_h;
            let _ = writeln!(
                svg,
                r#"<line x1="{:.1}" y1="{py:.1}" x2="{x0:.1}" y2="{py:.1}" stroke="black"/>"#,
                x0 - 5.0
            );
            let _ = writeln!(
                svg,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#,
                x0 - 8.0,
                py + 4.0,
                tick_label(ty)
            );
        }
    }
    let y_label = ordinate.column();
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{:.1}" text-anchor="middle" transform="rotate(-90 18 {:.1})">{y_label}{}</text>"#,
        MARGIN_T + plot_h / 2.0,
        MARGIN_T + plot_h / 2.0,
        if log_y { " (log scale)" } else { "" }
    );

    // Curves and legend.
    for (ci, (tag, pts)) in curves.iter().enumerate() {
        let color = PALETTE[ci % PALETTE.len()];
        if pts.len() > 1 {
            let mut path = String::new();
            for (x, y) in pts {
                let _ = write!(path, "{:.2},{:.2} ", sx(*x), sy(*y));
            }
            let _ = writeln!(
                svg,
                r#"<polyline points="{}" stroke="{color}" stroke-width="1.8" fill="none"/>"#,
                path.trim_end()
            );
        }
        for (x, y) in pts {
            let _ = writeln!(
                svg,
                r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}"/>"#,
                sx(*x),
                sy(*y)
            );
        }
        let ly = MARGIN_T + 14.0 + 18.0 * ci as f64;
        let lx = MARGIN_L + plot_w + 10.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="{color}" stroke-width="2"/>"#,
            ly - 4.0,
            lx + 18.0,
            ly - 4.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{ly:.1}">{tag}</text>"#,
            lx + 24.0
        );
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Render and write the plot for one preset family.
pub fn emit_plot(
    rows: &[Row],
    axis: PresetAxis,
    ordinate: PresetOrdinate,
    title: &str,
    dest: &Path,
) -> Result<(), io::Error> {
    let svg = render_plot(rows, axis, ordinate, title)
        .map_err(|e| io::Error::new(io::ErrorKind::InvalidInput, e.to_string()))?;
    std::fs::write(dest, svg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{Engine, Probe};

    fn sample_row() -> Row {
        Row {
            scenario: "demo".to_owned(),
            engine: Engine::CfPoly,
            probe: Probe::WState,
            n: 3,
            gains: [0.5, 0.0, 0.0],
            eta: 1.0,
            sigma: None,
            qcrb: Some(2.0 / 3.0),
            mean_n0: 1.0,
            var_n0: 2.0 / 9.0,
            var_n1: 2.0 / 9.0,
            cov01: -1.0 / 9.0,
            g2_intra_0: Some(0.5),
            g2_inter_01: None,
            discrepancy: None,
            diagnostic: None,
        }
    }

    #[test]
    fn sig12_is_shortest_round_trip() {
        assert_eq!(format_sig12(3.0), "3");
        assert_eq!(format_sig12(0.0), "0");
        assert_eq!(format_sig12(-0.25), "-0.25");
        assert_eq!(format_sig12(2.0 / 3.0), "0.666666666667");
        assert_eq!(format_sig12(1e-15), "1e-15");
        assert_eq!(format_sig12(0.05), "0.05");
        assert_eq!(format_sig12(-1.0 / 9.0), "-0.111111111111");
        assert_eq!(format_sig12(1.5e-7), "1.5e-7");
        // Exactly 12 significant digits survive; the 13th is rounded away.
        assert_eq!(format_sig12(1.234567890123), "1.23456789012");
    }

    #[test]
    fn csv_matches_the_contract_exactly() {
        let mut row = sample_row();
        row.discrepancy = Some(3e-9);
        let csv = render_csv(&[row]);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "scenario,engine,probe,N,r_a,r_b,r_c,eta,sigma,qcrb,mean_n0,var_n0,var_n1,cov01,g2_intra_0,g2_inter_01,discrepancy"
        );
        assert_eq!(
            lines.next().unwrap(),
            "demo,cfpoly,w_state,3,0.5,0,0,1,,0.666666666667,1,0.222222222222,0.222222222222,-0.111111111111,0.5,,3e-9"
        );
        assert_eq!(lines.next(), None);
        assert!(csv.ends_with('\n'));
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn empty_rows_give_a_header_only_file() {
        let csv = render_csv(&[]);
        assert_eq!(csv, format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn sidecar_collects_only_diagnostic_rows() {
        let clean = sample_row();
        let mut flagged = sample_row();
        flagged.qcrb = None;
        flagged.diagnostic = Some("QFIM sentinel: rank one".to_owned());
        assert_eq!(render_sidecar(&[clean.clone()]), "");
        let log = render_sidecar(&[clean, flagged]);
        assert_eq!(log, "demo engine=cfpoly N=3 r_a=0.5: QFIM sentinel: rank one\n");
    }

    #[test]
    fn emit_csv_writes_sidecar_only_when_needed() {
        let dir = tempfile::tempdir().unwrap();
        let dest = dir.path().join("out.csv");

        emit_csv(&[sample_row()], &dest).unwrap();
        assert!(dest.exists());
        assert!(!dest.with_extension("log").exists());

        let mut flagged = sample_row();
        flagged.diagnostic = Some("note".to_owned());
        emit_csv(&[flagged], &dest).unwrap();
        assert!(dest.with_extension("log").exists());
    }

    #[test]
    fn plot_draws_one_polyline_per_curve() {
        let mut rows = Vec::new();
        for (tag, base) in [("curve_a", 1.0), ("curve_b", 2.0)] {
            for n in 1..=5u32 {
                let mut row = sample_row();
                row.scenario = tag.to_owned();
                row.n = n;
                row.qcrb = Some(base / f64::from(n));
                rows.push(row);
            }
        }
        let svg = render_plot(&rows, PresetAxis::N, PresetOrdinate::Qcrb, "demo").unwrap();
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("curve_a") && svg.contains("curve_b"));
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn single_row_plots_as_a_marker() {
        let svg =
            render_plot(&[sample_row()], PresetAxis::N, PresetOrdinate::Qcrb, "one").unwrap();
        assert_eq!(svg.matches("<polyline").count(), 0);
        assert!(svg.contains("<circle"));
    }

    #[test]
    fn empty_input_is_an_error() {
        assert_eq!(
            render_plot(&[], PresetAxis::N, PresetOrdinate::Qcrb, "x"),
            Err(PlotError::Nothing)
        );
        let mut row = sample_row();
        row.qcrb = None;
        assert_eq!(
            render_plot(&[row], PresetAxis::N, PresetOrdinate::Qcrb, "x"),
            Err(PlotError::Nothing)
        );
    }

    #[test]
    fn wide_dynamic_range_switches_to_log_scale() {
        let mut rows = Vec::new();
        for (i, q) in [5000.0, 50.0, 0.5].into_iter().enumerate() {
            let mut row = sample_row();
            row.n = i as u32 + 1;
            row.qcrb = Some(q);
            rows.push(row);
        }
        let svg = render_plot(&rows, PresetAxis::N, PresetOrdinate::Qcrb, "log").unwrap();
        assert!(svg.contains("log scale"));
        assert!(svg.contains(">1000<"), "decade tick labels expected");
    }
}
