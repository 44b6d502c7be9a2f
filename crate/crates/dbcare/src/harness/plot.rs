//! Line charts of sweep results as self-contained SVG.
//!
//! One chart per call: the x axis is the sweep's grid variable, the y axis
//! is mean risk, and each policy gets a line plus a band spanning two
//! standard errors on either side. Output is a pure function of the rows,
//! so repeated renders are byte identical.

use super::SweepRow;
use crate::{invalid, Result};
use std::fmt::Write as _;
use std::path::Path;

const WIDTH: f64 = 880.0;
const HEIGHT: f64 = 560.0;
const MARGIN_LEFT: f64 = 78.0;
const MARGIN_RIGHT: f64 = 190.0;
const MARGIN_TOP: f64 = 52.0;
const MARGIN_BOTTOM: f64 = 58.0;
const TICKS: usize = 5;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

/// Render `rows` as a line chart titled `title` and write it to `path`.
pub fn emit_plot(rows: &[SweepRow], title: &str, path: &Path) -> Result<()> {
    let svg = render_svg(rows, title)?;
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(path, svg)?;
    Ok(())
}

fn render_svg(rows: &[SweepRow], title: &str) -> Result<String> {
    if rows.is_empty() {
        return Err(invalid("cannot plot an empty sweep"));
    }
    let series = group_by_policy(rows);

    let xs: Vec<f64> = rows.iter().map(|r| r.grid_value).collect();
    let (xmin, xmax) = min_max(&xs)?;
    let log_x = xmin > 0.0 && xmax / xmin >= 50.0;

    let mut ymin = f64::INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    for row in rows {
        let lo = row.mean_risk - 2.0 * row.se_risk;
        let hi = row.mean_risk + 2.0 * row.se_risk;
        if lo.is_finite() {
            ymin = ymin.min(lo);
        }
        if hi.is_finite() {
            ymax = ymax.max(hi);
        }
    }
    if !ymin.is_finite() || !ymax.is_finite() {
        return Err(invalid("sweep rows contain no finite risk values"));
    }
    if ymin == ymax {
        let pad = ymin.abs().max(1.0) * 0.1;
        ymin -= pad;
        ymax += pad;
    } else {
        let pad = (ymax - ymin) * 0.05;
        ymin -= pad;
        ymax += pad;
    }

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let tx = |v: f64| if log_x { v.ln() } else { v };
    let (txmin, txmax) = (tx(xmin), tx(xmax));
    let x_of = move |v: f64| {
        if txmax == txmin {
            MARGIN_LEFT + plot_w / 2.0
        } else {
            MARGIN_LEFT + (tx(v) - txmin) / (txmax - txmin) * plot_w
        }
    };
    let y_of = move |v: f64| MARGIN_TOP + (ymax - v) / (ymax - ymin) * plot_h;

    let mut svg = String::with_capacity(16 * 1024);
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(
        svg,
        "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"#ffffff\"/>"
    );
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"30\" font-family=\"sans-serif\" font-size=\"15\" text-anchor=\"middle\">{}</text>",
        MARGIN_LEFT + plot_w / 2.0,
        escape(title)
    );

    // Gridlines and tick labels.
    for i in 0..TICKS {
        let f = i as f64 / (TICKS - 1) as f64;
        let yv = ymin + (ymax - ymin) * f;
        let y = y_of(yv);
        let _ = writeln!(
            svg,
            "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"#dddddd\" stroke-width=\"1\"/>",
            MARGIN_LEFT,
            MARGIN_LEFT + plot_w
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">{}</text>",
            MARGIN_LEFT - 8.0,
            y + 4.0,
            fmt_sig(yv)
        );

        let txv = txmin + (txmax - txmin) * f;
        let xv = if log_x { txv.exp() } else { txv };
        let x = x_of(xv);
        let _ = writeln!(
            svg,
            "<line x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"#dddddd\" stroke-width=\"1\"/>",
            MARGIN_TOP,
            MARGIN_TOP + plot_h
        );
        let _ = writeln!(
            svg,
            "<text x=\"{x:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">{}</text>",
            MARGIN_TOP + plot_h + 20.0,
            fmt_sig(xv)
        );
    }

    // Axes.
    let _ = writeln!(
        svg,
        "<rect x=\"{MARGIN_LEFT}\" y=\"{MARGIN_TOP}\" width=\"{plot_w:.2}\" height=\"{plot_h:.2}\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>"
    );

    // Bands first so every line stays visible on top of them.
    for (si, (_, points)) in series.iter().enumerate() {
        let color = PALETTE[si % PALETTE.len()];
        let mut poly = String::new();
        for row in points {
            let _ = write!(
                poly,
                "{:.2},{:.2} ",
                x_of(row.grid_value),
                y_of(row.mean_risk + 2.0 * row.se_risk)
            );
        }
        for row in points.iter().rev() {
            let _ = write!(
                poly,
                "{:.2},{:.2} ",
                x_of(row.grid_value),
                y_of(row.mean_risk - 2.0 * row.se_risk)
            );
        }
        let _ = writeln!(
            svg,
            "<polygon points=\"{}\" fill=\"{color}\" fill-opacity=\"0.15\" stroke=\"none\"/>",
            poly.trim_end()
        );
    }

    for (si, (label, points)) in series.iter().enumerate() {
        let color = PALETTE[si % PALETTE.len()];
        let mut line = String::new();
        for row in points {
            let _ = write!(
                line,
                "{:.2},{:.2} ",
                x_of(row.grid_value),
                y_of(row.mean_risk)
            );
        }
        let _ = writeln!(
            svg,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.8\"/>",
            line.trim_end()
        );

        let ly = MARGIN_TOP + 14.0 + 20.0 * si as f64;
        let lx = MARGIN_LEFT + plot_w + 16.0;
        let _ = writeln!(
            svg,
            "<line x1=\"{lx:.2}\" y1=\"{ly:.2}\" x2=\"{:.2}\" y2=\"{ly:.2}\" stroke=\"{color}\" stroke-width=\"1.8\"/>",
            lx + 22.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>",
            lx + 28.0,
            ly + 4.0,
            escape(label)
        );
    }

    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">{}</text>",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 14.0,
        if rows[0].setting.grid_is_cost() { "cost" } else { "gap" }
    );
    let _ = writeln!(
        svg,
        "<text x=\"20\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 20 {:.2})\">mean risk</text>",
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    );
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn group_by_policy(rows: &[SweepRow]) -> Vec<(String, Vec<&SweepRow>)> {
    let mut series: Vec<(String, Vec<&SweepRow>)> = Vec::new();
    for row in rows {
        match series.iter_mut().find(|(label, _)| *label == row.policy) {
            Some((_, points)) => points.push(row),
            None => series.push((row.policy.clone(), vec![row])),
        }
    }
    series
}

fn min_max(values: &[f64]) -> Result<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in values {
        if !v.is_finite() {
            return Err(invalid("grid values must be finite"));
        }
        lo = lo.min(v);
        hi = hi.max(v);
    }
    Ok((lo, hi))
}

/// Round to four significant digits and print via `Display`.
fn fmt_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let magnitude = v.abs().log10().floor() as i32;
    let scale = 10f64.powi(3 - magnitude);
    let rounded = (v * scale).round() / scale;
    if rounded.abs() >= 1e6 || rounded.abs() < 1e-4 {
        format!("{rounded:e}")
    } else {
        format!("{rounded}")
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
