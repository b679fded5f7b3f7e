//! Per-figure plot data files (x, mean, stderr per series) and a static SVG
//! rendering. The CSV row table stays canonical; these are derived
//! artifacts and are never parsed back.

use super::{mean_stderr, ResultRow};
use crate::{Error, Result};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

/// X axis of a figure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlotAxis {
    K,
    EpsilonBound,
}

/// Y value of a figure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlotValue {
    Exploitability,
    PortfolioSize,
}

/// One figure: rows are filtered, grouped into per-method series and
/// aggregated over seeds at each x.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct PlotSpec {
    pub name: String,
    pub x: PlotAxis,
    pub y: PlotValue,
    /// Keep only rows with this selection, when set.
    #[serde(default)]
    pub selection: Option<String>,
}

struct SeriesPoint {
    x: f64,
    mean: f64,
    stderr: f64,
}

fn collect_series(rows: &[ResultRow], spec: &PlotSpec) -> Result<Vec<(String, Vec<SeriesPoint>)>> {
    let filtered: Vec<&ResultRow> = rows
        .iter()
        .filter(|r| {
            spec.selection
                .as_ref()
                .map(|s| &r.selection == s)
                .unwrap_or(true)
        })
        .collect();
    if !filtered.is_empty()
        && spec.x == PlotAxis::EpsilonBound
        && filtered.iter().all(|r| r.epsilon_bound.is_none())
    {
        return Err(Error::Schema(
            "plot needs epsilon_bound values but no row carries one".into(),
        ));
    }

    // method -> x bits -> samples; BTreeMap keeps output order stable.
    let mut grouped: BTreeMap<String, BTreeMap<u64, Vec<f64>>> = BTreeMap::new();
    for row in filtered {
        let x = match spec.x {
            PlotAxis::K => row.k as f64,
            PlotAxis::EpsilonBound => match row.epsilon_bound {
                Some(e) => e,
                None => continue,
            },
        };
        let y = match spec.y {
            PlotValue::Exploitability => match row.exploitability {
                Some(v) => v,
                None => continue, // error row
            },
            PlotValue::PortfolioSize => row.k as f64,
        };
        grouped
            .entry(row.method.clone())
            .or_default()
            .entry(x.to_bits())
            .or_default()
            .push(y);
    }
    Ok(grouped
        .into_iter()
        .map(|(method, points)| {
            let series = points
                .into_iter()
                .map(|(bits, ys)| {
                    let (mean, stderr) = mean_stderr(&ys);
                    SeriesPoint {
                        x: f64::from_bits(bits),
                        mean,
                        stderr,
                    }
                })
                .collect();
            (method, series)
        })
        .collect())
}

/// Writes `<name>.csv` (x, series, mean, stderr) and `<name>.svg` into
/// `out_dir`. An empty row table produces empty artifacts and a warning on
/// stderr.
pub fn emit_plot_data(
    rows: &[ResultRow],
    spec: &PlotSpec,
    out_dir: impl AsRef<Path>,
) -> Result<()> {
    let out_dir = out_dir.as_ref();
    std::fs::create_dir_all(out_dir)?;
    let series = collect_series(rows, spec)?;

    let mut csv = String::from("x,series,mean,stderr\n");
    for (method, points) in &series {
        for p in points {
            let _ = writeln!(csv, "{},{method},{},{}", p.x, p.mean, p.stderr);
        }
    }
    std::fs::write(out_dir.join(format!("{}.csv", spec.name)), csv)?;

    if series.is_empty() {
        eprintln!("warning: plot '{}' has no data", spec.name);
        std::fs::write(out_dir.join(format!("{}.svg", spec.name)), empty_svg())?;
        return Ok(());
    }
    std::fs::write(
        out_dir.join(format!("{}.svg", spec.name)),
        render_svg(&series, spec),
    )?;
    Ok(())
}

fn empty_svg() -> String {
    "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"320\"/>\n".into()
}

const PALETTE: [&str; 7] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf",
];

fn render_svg(series: &[(String, Vec<SeriesPoint>)], spec: &PlotSpec) -> String {
    let (w, h) = (480.0, 320.0);
    let (left, right, top, bottom) = (56.0, 16.0, 24.0, 40.0);
    let plot_w = w - left - right;
    let plot_h = h - top - bottom;

    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_min = 0.0f64;
    let mut y_max = f64::NEG_INFINITY;
    for (_, points) in series {
        for p in points {
            x_min = x_min.min(p.x);
            x_max = x_max.max(p.x);
            y_min = y_min.min(p.mean - p.stderr);
            y_max = y_max.max(p.mean + p.stderr);
        }
    }
    if !x_min.is_finite() || x_max <= x_min {
        x_max = x_min + 1.0;
    }
    if y_max <= y_min {
        y_max = y_min + 1.0;
    }
    y_max *= 1.05;
    let sx = |x: f64| left + (x - x_min) / (x_max - x_min) * plot_w;
    let sy = |y: f64| top + (y_max - y) / (y_max - y_min) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" font-family=\"sans-serif\" font-size=\"11\">"
    );
    let _ = writeln!(
        svg,
        "<rect x=\"0\" y=\"0\" width=\"{w}\" height=\"{h}\" fill=\"white\"/>"
    );
    // Axes.
    let _ = writeln!(
        svg,
        "<line x1=\"{left}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>",
        h - bottom,
        w - right,
        h - bottom
    );
    let _ = writeln!(
        svg,
        "<line x1=\"{left}\" y1=\"{top}\" x2=\"{left}\" y2=\"{}\" stroke=\"black\"/>",
        h - bottom
    );
    for t in 0..=4 {
        let fx = x_min + (x_max - x_min) * f64::from(t) / 4.0;
        let fy = y_min + (y_max - y_min) * f64::from(t) / 4.0;
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{:.3}</text>",
            sx(fx),
            h - bottom + 16.0,
            fx
        );
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{:.3}</text>",
            left - 6.0,
            sy(fy) + 4.0,
            fy
        );
    }
    let x_label = match spec.x {
        PlotAxis::K => "portfolio size k",
        PlotAxis::EpsilonBound => "epsilon bound",
    };
    let y_label = match spec.y {
        PlotValue::Exploitability => "exploitability",
        PlotValue::PortfolioSize => "portfolio size",
    };
    let _ = writeln!(
        svg,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{x_label}</text>",
        left + plot_w / 2.0,
        h - 8.0
    );
    let _ = writeln!(
        svg,
        "<text x=\"14\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 14 {})\">{y_label}</text>",
        top + plot_h / 2.0,
        top + plot_h / 2.0
    );

    for (idx, (method, points)) in series.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        // Standard-error band.
        if points.len() > 1 {
            let mut band = String::new();
            for p in points {
                let _ = write!(band, "{},{} ", sx(p.x), sy(p.mean + p.stderr));
            }
            for p in points.iter().rev() {
                let _ = write!(band, "{},{} ", sx(p.x), sy(p.mean - p.stderr));
            }
            let _ = writeln!(
                svg,
                "<polygon points=\"{}\" fill=\"{color}\" opacity=\"0.15\"/>",
                band.trim_end()
            );
        }
        let path: Vec<String> = points
            .iter()
            .map(|p| format!("{},{}", sx(p.x), sy(p.mean)))
            .collect();
        let _ = writeln!(
            svg,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>",
            path.join(" ")
        );
        for p in points {
            let _ = writeln!(
                svg,
                "<circle cx=\"{}\" cy=\"{}\" r=\"2.2\" fill=\"{color}\"/>",
                sx(p.x),
                sy(p.mean)
            );
        }
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" fill=\"{color}\">{method}</text>",
            w - right - 150.0,
            top + 14.0 * (idx as f64 + 1.0)
        );
    }
    svg.push_str("</svg>\n");
    svg
}
