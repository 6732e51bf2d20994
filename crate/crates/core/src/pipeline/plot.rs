//! Standalone SVG 1.1 charts for a sweep.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::monthly::MonthlyGroup;
use super::report::SweepReport;
use crate::error::{Error, Result};
use crate::fracmodel::{predict_frac, FracModel, SweepRow};
use crate::regress::SplitSeries;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const CURVE_SAMPLES: usize = 240;

pub const BOXPLOT_FILE: &str = "boxplot.svg";
pub const R2_LOG_FILE: &str = "r2_positive_log.svg";
pub const FIT_ALPHA0_FILE: &str = "fit_alpha0.svg";
pub const FIT_SELECTED_FILE: &str = "fit_selected.svg";

const TRAIN_COLOR: &str = "#1f77b4";
const TEST_COLOR: &str = "#d62728";
const CURVE_COLOR: &str = "#2ca02c";

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Coordinates are rounded to two decimals so output is stable and compact.
fn c(v: f64) -> String {
    format!("{v:.2}")
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

/// Roughly `target` round-valued ticks covering [lo, hi].
fn linear_ticks(lo: f64, hi: f64, target: usize) -> Vec<f64> {
    let span = (hi - lo).max(f64::MIN_POSITIVE);
    let raw = span / target as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 2.5, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

struct Chart {
    x: (f64, f64),
    y: (f64, f64),
    log_y: bool,
    body: String,
}

impl Chart {
    fn new(x: (f64, f64), y: (f64, f64), log_y: bool) -> Self {
        let pad = |(lo, hi): (f64, f64)| {
            if hi > lo {
                (lo, hi)
            } else {
                (lo - 0.5, hi + 0.5)
            }
        };
        let y = if log_y {
            let (lo, hi) = (y.0.log10(), y.1.log10());
            let (lo, hi) = pad((lo, hi));
            (lo, hi)
        } else {
            pad(y)
        };
        Chart {
            x: pad(x),
            y,
            log_y,
            body: String::new(),
        }
    }

    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        let y = if self.log_y { y.log10() } else { y };
        HEIGHT - BOTTOM - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - TOP - BOTTOM)
    }

    fn axes(&mut self, title: &str, xlabel: &str, ylabel: &str) {
        let (x0, x1) = (LEFT, WIDTH - RIGHT);
        let (y0, y1) = (HEIGHT - BOTTOM, TOP);
        let b = &mut self.body;
        let _ = writeln!(
            b,
            r##"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#000"/>"##,
            c(x0),
            c(y1),
            c(x1 - x0),
            c(y0 - y1)
        );
        let _ = writeln!(
            b,
            r#"<text x="{}" y="24" text-anchor="middle" font-size="16">{}</text>"#,
            c((x0 + x1) / 2.0),
            escape(title)
        );
        let _ = writeln!(
            b,
            r#"<text x="{}" y="{}" text-anchor="middle" font-size="13">{}</text>"#,
            c((x0 + x1) / 2.0),
            c(HEIGHT - 15.0),
            escape(xlabel)
        );
        let _ = writeln!(
            b,
            r#"<text x="18" y="{}" text-anchor="middle" font-size="13" transform="rotate(-90 18 {})">{}</text>"#,
            c((y0 + y1) / 2.0),
            c((y0 + y1) / 2.0),
            escape(ylabel)
        );
        for t in linear_ticks(self.x.0, self.x.1, 8) {
            let p = self.px(t);
            let _ = writeln!(
                self.body,
                r##"<line x1="{p}" y1="{y0}" x2="{p}" y2="{y5}" stroke="#000"/><text x="{p}" y="{yt}" text-anchor="middle" font-size="11">{l}</text>"##,
                p = c(p),
                y0 = c(y0),
                y5 = c(y0 + 5.0),
                yt = c(y0 + 18.0),
                l = tick_label(t)
            );
        }
        let y_ticks: Vec<(f64, String)> = if self.log_y {
            let (lo, hi) = self.y;
            let decades: Vec<f64> = ((lo.ceil() as i64)..=(hi.floor() as i64))
                .map(|k| k as f64)
                .collect();
            let exps = if decades.len() >= 2 {
                decades
            } else {
                linear_ticks(lo, hi, 5)
            };
            exps.into_iter()
                .map(|e| {
                    let v = 10f64.powf(e);
                    (v, format!("{v:.3e}"))
                })
                .collect()
        } else {
            linear_ticks(self.y.0, self.y.1, 6)
                .into_iter()
                .map(|t| (t, tick_label(t)))
                .collect()
        };
        for (t, label) in y_ticks {
            let p = self.py(t);
            let _ = writeln!(
                self.body,
                r##"<line x1="{x5}" y1="{p}" x2="{x0}" y2="{p}" stroke="#000"/><text x="{xt}" y="{pt}" text-anchor="end" font-size="11">{label}</text>"##,
                p = c(p),
                x0 = c(x0),
                x5 = c(x0 - 5.0),
                xt = c(x0 - 8.0),
                pt = c(p + 4.0),
            );
        }
    }

    fn open_clip(&mut self) {
        let _ = writeln!(
            self.body,
            r#"<defs><clipPath id="plot-area"><rect x="{}" y="{}" width="{}" height="{}"/></clipPath></defs>"#,
            c(LEFT),
            c(TOP),
            c(WIDTH - LEFT - RIGHT),
            c(HEIGHT - TOP - BOTTOM)
        );
        self.body.push_str("<g clip-path=\"url(#plot-area)\">\n");
    }

    fn close_clip(&mut self) {
        self.body.push_str("</g>\n");
    }

    fn polyline(&mut self, pts: &[(f64, f64)], color: &str, dash: bool) {
        let coords: Vec<String> = pts
            .iter()
            .map(|&(x, y)| format!("{},{}", c(self.px(x)), c(self.py(y))))
            .collect();
        let dash = if dash {
            r#" stroke-dasharray="6 4""#
        } else {
            ""
        };
        let _ = writeln!(
            self.body,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"{dash}/>"#,
            coords.join(" ")
        );
    }

    fn marker(&mut self, x: f64, y: f64, color: &str, filled: bool) {
        let fill = if filled { color } else { "#fff" };
        let _ = writeln!(
            self.body,
            r#"<circle cx="{}" cy="{}" r="4" fill="{fill}" stroke="{color}" stroke-width="1.5"/>"#,
            c(self.px(x)),
            c(self.py(y))
        );
    }

    fn legend(&mut self, entries: &[(&str, &str, bool)]) {
        let x = WIDTH - RIGHT + 12.0;
        for (i, (label, color, filled)) in entries.iter().enumerate() {
            let y = TOP + 10.0 + 20.0 * i as f64;
            let fill = if *filled { color } else { "#fff" };
            let _ = writeln!(
                self.body,
                r#"<circle cx="{}" cy="{}" r="4" fill="{fill}" stroke="{color}" stroke-width="1.5"/><text x="{}" y="{}" font-size="12">{}</text>"#,
                c(x),
                c(y),
                c(x + 10.0),
                c(y + 4.0),
                escape(label)
            );
        }
    }

    fn note(&mut self, text: &str) {
        let _ = writeln!(
            self.body,
            r##"<text x="{}" y="{}" text-anchor="middle" font-size="14" fill="#555">{}</text>"##,
            c((LEFT + WIDTH - RIGHT) / 2.0),
            c((TOP + HEIGHT - BOTTOM) / 2.0),
            escape(text)
        );
    }

    fn finish(self) -> String {
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
             <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\" font-family=\"sans-serif\">\n\
             <rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n{body}</svg>\n",
            w = WIDTH,
            h = HEIGHT,
            body = self.body
        )
    }
}

fn min_max(values: impl IntoIterator<Item = f64>) -> (f64, f64) {
    values
        .into_iter()
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        })
}

fn padded((lo, hi): (f64, f64), frac: f64) -> (f64, f64) {
    let pad = (hi - lo).abs().max(1e-9) * frac;
    (lo - pad, hi + pad)
}

/// Per-month box plots with 1.5·IQR whiskers and outlier markers.
pub fn boxplot_svg(title: &str, groups: &[MonthlyGroup]) -> String {
    let y = padded(
        min_max(groups.iter().flat_map(|g| g.prices.iter().copied())),
        0.05,
    );
    let mut ch = Chart::new((0.0, groups.len() as f64 + 1.0), y, false);
    ch.axes(title, "month index", "average price");
    let half = 0.3 * (ch.px(1.0) - ch.px(0.0));
    for g in groups {
        let cx = ch.px(g.month_index as f64);
        let (q1, q3, med) = (ch.py(g.q1), ch.py(g.q3), ch.py(g.median));
        let (lo, hi) = (ch.py(g.whisker_lo), ch.py(g.whisker_hi));
        let _ = writeln!(
            ch.body,
            r##"<g><title>{label}</title><line x1="{cx}" y1="{lo}" x2="{cx}" y2="{q1}" stroke="#000"/><line x1="{cx}" y1="{q3}" x2="{cx}" y2="{hi}" stroke="#000"/><line x1="{l}" y1="{lo}" x2="{r}" y2="{lo}" stroke="#000"/><line x1="{l}" y1="{hi}" x2="{r}" y2="{hi}" stroke="#000"/><rect x="{bl}" y="{q3}" width="{bw}" height="{bh}" fill="#aec7e8" stroke="#000"/><line x1="{bl}" y1="{med}" x2="{br}" y2="{med}" stroke="#ff7f0e" stroke-width="2"/></g>"##,
            label = g.label(),
            cx = c(cx),
            lo = c(lo),
            hi = c(hi),
            q1 = c(q1),
            q3 = c(q3),
            med = c(med),
            l = c(cx - half / 2.0),
            r = c(cx + half / 2.0),
            bl = c(cx - half),
            br = c(cx + half),
            bw = c(2.0 * half),
            bh = c((q1 - q3).max(0.0)),
        );
        for o in g.outliers() {
            let _ = writeln!(
                ch.body,
                r##"<circle cx="{}" cy="{}" r="3" fill="none" stroke="#000"/>"##,
                c(cx),
                c(ch.py(o))
            );
        }
    }
    ch.finish()
}

/// Rows whose interpolation and extrapolation R² are both positive.
pub fn positive_rows(rows: &[SweepRow]) -> Vec<SweepRow> {
    rows.iter()
        .filter(|r| r.r2_interp > 0.0 && r.r2_extrap > 0.0)
        .copied()
        .collect()
}

/// Log-scale R² over effective degree, restricted to [`positive_rows`].
pub fn r2_log_svg(title: &str, rows: &[SweepRow]) -> String {
    let pos = positive_rows(rows);
    if pos.is_empty() {
        let x = min_max(rows.iter().map(|r| r.effective_degree));
        let x = if x.0.is_finite() { x } else { (0.0, 1.0) };
        let mut ch = Chart::new(x, (0.01, 1.0), true);
        ch.axes(title, "degree", "R² (log scale)");
        ch.note("no degree with both R² values positive");
        return ch.finish();
    }
    let x = padded(min_max(pos.iter().map(|r| r.effective_degree)), 0.05);
    let y = min_max(pos.iter().flat_map(|r| [r.r2_interp, r.r2_extrap]));
    let mut ch = Chart::new(x, (y.0 / 1.5, (y.1 * 1.5).min(1.5)), true);
    ch.axes(title, "degree", "R² (log scale)");
    let mut sorted = pos;
    sorted.sort_by(|a, b| a.effective_degree.total_cmp(&b.effective_degree));
    for (pick, color, filled) in [(0usize, TRAIN_COLOR, true), (1usize, TEST_COLOR, false)] {
        let pts: Vec<(f64, f64)> = sorted
            .iter()
            .map(|r| {
                (
                    r.effective_degree,
                    if pick == 0 { r.r2_interp } else { r.r2_extrap },
                )
            })
            .collect();
        ch.polyline(&pts, color, pick == 1);
        for (x, y) in pts {
            ch.marker(x, y, color, filled);
        }
    }
    ch.legend(&[
        ("interpolation", TRAIN_COLOR, true),
        ("extrapolation", TEST_COLOR, false),
    ]);
    ch.finish()
}

/// Model curve sampled on [0, x_max].
pub fn model_curve(model: &FracModel, x_max: f64) -> Result<Vec<(f64, f64)>> {
    (0..=CURVE_SAMPLES)
        .map(|k| {
            let x = x_max * k as f64 / CURVE_SAMPLES as f64;
            Ok((x, predict_frac(model, x)?))
        })
        .collect()
}

/// Train/test scatter with a model curve starting at x = 0.
pub fn fit_svg(title: &str, split: &SplitSeries, model: &FracModel) -> Result<String> {
    let x_max = split.test.x().last().copied().unwrap_or(1.0) + 1.0;
    let curve = model_curve(model, x_max)?;
    // Scale to the data (and the intercept) so a diverging curve is clipped
    // rather than flattening the points.
    let y = padded(
        min_max(
            split
                .train
                .y()
                .iter()
                .chain(split.test.y())
                .copied()
                .chain([model.base().intercept()]),
        ),
        0.15,
    );
    let mut ch = Chart::new((0.0, x_max), y, false);
    ch.axes(title, "month index", "monthly price");
    ch.open_clip();
    ch.polyline(&curve, CURVE_COLOR, false);
    ch.close_clip();
    for (&x, &y) in split.train.x().iter().zip(split.train.y()) {
        ch.marker(x, y, TRAIN_COLOR, true);
    }
    for (&x, &y) in split.test.x().iter().zip(split.test.y()) {
        ch.marker(x, y, TEST_COLOR, false);
    }
    let boundary = ch.px((split.train.x().last().unwrap_or(&0.0) + split.test.x()[0]) / 2.0);
    let _ = writeln!(
        ch.body,
        r##"<line x1="{b}" y1="{t}" x2="{b}" y2="{bt}" stroke="#888" stroke-dasharray="3 3"/>"##,
        b = c(boundary),
        t = c(TOP),
        bt = c(HEIGHT - BOTTOM)
    );
    let curve_label = format!("model, α = {}", tick_label(model.alpha()));
    ch.legend(&[
        ("train", TRAIN_COLOR, true),
        ("test", TEST_COLOR, false),
        (&curve_label, CURVE_COLOR, true),
    ]);
    Ok(ch.finish())
}

/// Models drawn by [`emit_plots`].
#[derive(Debug, Clone)]
pub struct PlotModels {
    /// The integer-order (α = 0) model.
    pub integer: FracModel,
    /// The selected fractional model (α ≠ 0).
    pub fractional: FracModel,
}

/// Writes the four charts into `dir` and returns their paths.
pub fn emit_plots(
    report: &SweepReport,
    groups: &[MonthlyGroup],
    split: &SplitSeries,
    models: &PlotModels,
    dir: impl AsRef<Path>,
) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let name = format!("{} ({})", report.region, report.avocado_type);
    let charts = [
        (
            BOXPLOT_FILE,
            boxplot_svg(&format!("Monthly prices: {name}"), groups),
        ),
        (
            R2_LOG_FILE,
            r2_log_svg(
                &format!("Positive R², m = {}: {name}", report.degree),
                &report.rows,
            ),
        ),
        (
            FIT_ALPHA0_FILE,
            fit_svg(
                &format!("Integer-order fit, m = {}: {name}", report.degree),
                split,
                &models.integer,
            )?,
        ),
        (
            FIT_SELECTED_FILE,
            fit_svg(
                &format!("Fractional fit, m = {}: {name}", report.degree),
                split,
                &models.fractional,
            )?,
        ),
    ];
    let mut paths = Vec::with_capacity(charts.len());
    for (file, svg) in charts {
        let path = dir.join(file);
        fs::write(&path, svg).map_err(|e| Error::io(&path, e))?;
        paths.push(path);
    }
    Ok(paths)
}
