use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use pbop_core::calibration::C_OBS_BMO;
use serde::Serialize;

use crate::report::{read_table, Table};
use crate::UsageError;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 160.0;
const TOP: f64 = 32.0;
const BOTTOM: f64 = 48.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Style {
    Line,
    Dashed,
    Points,
}

#[derive(Debug, Clone)]
struct Series {
    name: String,
    style: Style,
    color: &'static str,
    points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone)]
struct Figure {
    title: String,
    x_label: String,
    y_label: String,
    series: Vec<Series>,
}

#[derive(Debug, Serialize)]
struct TidyRow<'a> {
    series: &'a str,
    x: f64,
    y: f64,
}

fn cb_figure(t: &Table) -> Result<Figure> {
    let m = t.numbers("m")?;
    let ratio = t.numbers("cb_ratio")?;
    let reference = t.numbers("sqrt(m)/2")?;
    Ok(Figure {
        title: "c.b. growth of the lacunary test polynomial".into(),
        x_label: "m".into(),
        y_label: "ratio".into(),
        series: vec![
            Series {
                name: "cb_ratio".into(),
                style: Style::Line,
                color: "#1f77b4",
                points: m.iter().copied().zip(ratio).collect(),
            },
            Series {
                name: "sqrt(m)/2".into(),
                style: Style::Dashed,
                color: "#d62728",
                points: m.into_iter().zip(reference).collect(),
            },
        ],
    })
}

fn bmo_figure(t: &Table) -> Result<Figure> {
    let deg = t.numbers("degree")?;
    let ratio = t.numbers("ratio")?;
    let mut by_degree: BTreeMap<u64, Vec<f64>> = BTreeMap::new();
    for (&d, &r) in deg.iter().zip(&ratio) {
        if !(d >= 1.0) {
            return Err(UsageError(format!("degree must be positive, got {d}")).into());
        }
        by_degree.entry(d as u64).or_default().push(r);
    }
    let medians: Vec<(f64, f64)> = by_degree
        .iter()
        .map(|(&d, rs)| {
            let mut rs = rs.clone();
            rs.sort_by(f64::total_cmp);
            ((d as f64).log2(), rs[rs.len() / 2])
        })
        .collect();
    let (lo, hi) = (medians[0].0, medians[medians.len() - 1].0);
    Ok(Figure {
        title: "key estimate ratio against degree".into(),
        x_label: "log2(degree)".into(),
        y_label: "ratio".into(),
        series: vec![
            Series {
                name: "ratio".into(),
                style: Style::Points,
                color: "#1f77b4",
                points: deg.iter().map(|d| d.log2()).zip(ratio).collect(),
            },
            Series {
                name: "median".into(),
                style: Style::Line,
                color: "#2ca02c",
                points: medians,
            },
            Series {
                name: "c_obs".into(),
                style: Style::Dashed,
                color: "#d62728",
                points: vec![(lo, C_OBS_BMO), (hi, C_OBS_BMO)],
            },
        ],
    })
}

fn figure_for(t: &Table) -> Result<Figure> {
    if t.rows.is_empty() {
        return Err(UsageError("report has no rows".into()).into());
    }
    if t.has("cb_ratio") && t.has("sqrt(m)/2") && t.has("m") {
        cb_figure(t)
    } else if t.has("degree") && t.has("ratio") && t.columns.len() == 2 {
        bmo_figure(t)
    } else {
        Err(UsageError("unsupported report: expected a cb-growth or bmo-constant report".into()).into())
    }
}

/// Nice tick spacing covering `[lo, hi]` with about five ticks.
fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let raw = (hi - lo) / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|s| s * mag)
        .find(|s| raw <= *s)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::MAX, f64::MIN), |(a, b), v| (a.min(v), b.max(v)));
    if hi - lo < 1e-9 {
        (lo - 0.5, hi + 0.5)
    } else {
        let pad = 0.05 * (hi - lo);
        (lo - pad, hi + pad)
    }
}

fn fmt_tick(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

fn svg(fig: &Figure) -> String {
    let pts = || fig.series.iter().flat_map(|s| s.points.iter().copied());
    let (x0, x1) = bounds(pts().map(|p| p.0));
    let (y0, y1) = bounds(pts().map(|p| p.1).chain(std::iter::once(0.0)));
    let (pw, ph) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| TOP + (1.0 - (y - y0) / (y1 - y0)) * ph;

    let mut out = String::new();
    let w = &mut out;
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(w, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(w, r#"<text x="{:.2}" y="20" text-anchor="middle" font-size="14">{}</text>"#, LEFT + pw / 2.0, fig.title);
    let _ = writeln!(
        w,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw:.2}" height="{ph:.2}" fill="none" stroke="black"/>"#
    );
    for t in ticks(x0, x1) {
        let x = sx(t);
        let _ = writeln!(w, r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#, TOP + ph, TOP + ph + 5.0);
        let _ = writeln!(w, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, TOP + ph + 18.0, fmt_tick(t));
    }
    for t in ticks(y0, y1) {
        let y = sy(t);
        let _ = writeln!(w, r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd"/>"##, LEFT + pw);
        let _ = writeln!(w, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#, LEFT - 6.0, y + 4.0, fmt_tick(t));
    }
    let _ = writeln!(w, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, LEFT + pw / 2.0, HEIGHT - 10.0, fig.x_label);
    let _ = writeln!(
        w,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        fig.y_label
    );
    for (i, s) in fig.series.iter().enumerate() {
        let coords: Vec<String> = s.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        if s.style != Style::Points {
            let dash = if s.style == Style::Dashed { r#" stroke-dasharray="6 4""# } else { "" };
            let _ = writeln!(
                w,
                r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="2"{dash}/>"#,
                coords.join(" "),
                s.color
            );
        }
        if s.style != Style::Dashed {
            for &(x, y) in &s.points {
                let _ = writeln!(w, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{}"/>"#, sx(x), sy(y), s.color);
            }
        }
        let ly = TOP + 16.0 + 20.0 * i as f64;
        let lx = LEFT + pw + 16.0;
        let _ = writeln!(
            w,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{}" stroke-width="2"/>"#,
            lx + 24.0,
            s.color
        );
        let _ = writeln!(w, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, lx + 30.0, ly + 4.0, s.name);
    }
    let _ = writeln!(w, "</svg>");
    out
}

fn tidy_csv(fig: &Figure) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for s in &fig.series {
        for &(x, y) in &s.points {
            w.serialize(TidyRow { series: &s.name, x, y })?;
        }
    }
    w.into_inner().map_err(|e| anyhow::anyhow!("{e}"))
}

/// Renders `report` to `<out>/<stem>.svg` and `<out>/<stem>_plot.csv`.
/// Nothing is written unless the report parses and has rows.
pub fn render(report: &Path, out: &Path) -> Result<Vec<PathBuf>> {
    let table = read_table(report)?;
    let fig = figure_for(&table)?;
    let svg_text = svg(&fig);
    let csv_bytes = tidy_csv(&fig)?;
    let stem = report
        .file_stem()
        .and_then(|s| s.to_str())
        .ok_or_else(|| UsageError(format!("bad report name {}", report.display())))?;
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let svg_path = out.join(format!("{stem}.svg"));
    let csv_path = out.join(format!("{stem}_plot.csv"));
    fs::write(&svg_path, svg_text).with_context(|| format!("writing {}", svg_path.display()))?;
    fs::write(&csv_path, csv_bytes).with_context(|| format!("writing {}", csv_path.display()))?;
    Ok(vec![svg_path, csv_path])
}
