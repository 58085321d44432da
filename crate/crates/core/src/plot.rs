//! Deterministic SVG figure: feature map, saliency, and one participant's
//! raw features on a shared frame axis.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::io::SaliencyTable;
use crate::sequence::{BehaviorSequence, FEATURE_NAMES};

const WIDTH: f64 = 900.0;
const PANEL_HEIGHT: f64 = 200.0;
const MARGIN_LEFT: f64 = 90.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 30.0;
const PANEL_GAP: f64 = 40.0;
const COLORS: [&str; 5] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];

#[derive(Debug, Clone)]
pub struct PlotOptions {
    pub participant: usize,
    /// Feature indices to draw in the bottom panel.
    pub dims: Vec<usize>,
    /// Observed window length; saliency is drawn at each window's last frame.
    pub window_length: usize,
}

/// Look up feature names such as `qx` or `speaking`.
pub fn parse_dims(spec: &str) -> Result<Vec<usize>> {
    spec.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|name| {
            FEATURE_NAMES
                .iter()
                .position(|f| *f == name)
                .ok_or_else(|| Error::param(format!("unknown feature {name:?}; expected one of {FEATURE_NAMES:?}")))
        })
        .collect::<Result<Vec<_>>>()
        .and_then(|v| if v.is_empty() { Err(Error::param("no feature dims given")) } else { Ok(v) })
}

struct Panel {
    top: f64,
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Panel {
    fn px(&self, x: f64) -> f64 {
        MARGIN_LEFT + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        self.top + PANEL_HEIGHT - (y - self.y0) / (self.y1 - self.y0) * PANEL_HEIGHT
    }

    fn frame(&self, svg: &mut String, title: &str) {
        let right = WIDTH - MARGIN_RIGHT;
        let bottom = self.top + PANEL_HEIGHT;
        writeln!(
            svg,
            r##"<rect x="{MARGIN_LEFT:.2}" y="{:.2}" width="{:.2}" height="{PANEL_HEIGHT:.2}" fill="none" stroke="#444"/>"##,
            self.top,
            right - MARGIN_LEFT
        )
        .unwrap();
        writeln!(svg, r#"<text x="{MARGIN_LEFT:.2}" y="{:.2}" font-size="13">{title}</text>"#, self.top - 6.0).unwrap();
        for (v, y) in [(self.y1, self.top + 4.0), (self.y0, bottom)] {
            writeln!(
                svg,
                r#"<text x="{:.2}" y="{y:.2}" font-size="10" text-anchor="end">{}</text>"#,
                MARGIN_LEFT - 4.0,
                tick(v)
            )
            .unwrap();
        }
        for (v, anchor) in [(self.x0, "start"), (self.x1, "end")] {
            writeln!(
                svg,
                r#"<text x="{:.2}" y="{:.2}" font-size="10" text-anchor="{anchor}">{}</text>"#,
                self.px(v),
                bottom + 12.0,
                v
            )
            .unwrap();
        }
    }

    fn line(&self, svg: &mut String, xs: &[f64], ys: &[f64], color: &str) {
        let mut run = Vec::new();
        let flush = |run: &mut Vec<String>, svg: &mut String| {
            if !run.is_empty() {
                writeln!(
                    svg,
                    r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                    run.join(" ")
                )
                .unwrap();
                run.clear();
            }
        };
        for (&x, &y) in xs.iter().zip(ys) {
            if y.is_finite() {
                run.push(format!("{:.2},{:.2}", self.px(x), self.py(y)));
            } else {
                flush(&mut run, svg);
            }
        }
        flush(&mut run, svg);
    }
}

fn tick(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e4 || v.abs() < 1e-2) {
        format!("{v:.3e}")
    } else {
        format!("{v:.3}")
    }
}

fn y_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    let pad = if hi > lo { 0.05 * (hi - lo) } else { 0.5 * lo.abs().max(1.0) };
    (lo - pad, hi + pad)
}

/// Render the three-panel figure. Output depends only on the inputs.
pub fn render_svg(table: &SaliencyTable, sequence: &BehaviorSequence, opts: &PlotOptions) -> Result<String> {
    if table.window_starts.is_empty() {
        return Err(Error::Schema("saliency table has no rows".into()));
    }
    if opts.window_length == 0 {
        return Err(Error::param("window length must be >= 1"));
    }
    if opts.participant >= sequence.participants() {
        return Err(Error::param(format!(
            "participant {} out of range (dataset has {})",
            opts.participant,
            sequence.participants()
        )));
    }
    let lag = (opts.window_length - 1) as f64;
    let xs: Vec<f64> = table.window_starts.iter().map(|&s| s as f64 + lag).collect();
    let first = table.window_starts[0];
    let last = *table.window_starts.last().unwrap() + opts.window_length - 1;
    if last >= sequence.frame_count() {
        return Err(Error::param(format!(
            "windows reach frame {last} but the dataset has {} frames",
            sequence.frame_count()
        )));
    }
    let (x0, x1) = (first as f64, (last as f64).max(first as f64 + 1.0));
    let height = MARGIN_TOP + 3.0 * PANEL_HEIGHT + 2.0 * PANEL_GAP + 30.0;

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}" font-family="sans-serif">"#
    )
    .unwrap();
    writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();

    let top = |k: f64| MARGIN_TOP + k * (PANEL_HEIGHT + PANEL_GAP);

    let (y0, y1) = y_range(table.phi_mean.iter().copied());
    let p = Panel { top: top(0.0), x0, x1, y0, y1 };
    p.frame(&mut svg, "feature map (nats per dim)");
    p.line(&mut svg, &xs, &table.phi_mean, COLORS[0]);

    let (y0, y1) = y_range(table.saliency.iter().copied().chain([0.0]));
    let p = Panel { top: top(1.0), x0, x1, y0, y1 };
    p.frame(&mut svg, "saliency");
    p.line(&mut svg, &xs, &table.saliency, COLORS[1]);

    let frames: Vec<usize> = (first..=last).collect();
    let fx: Vec<f64> = frames.iter().map(|&t| t as f64).collect();
    let series: Vec<Vec<f64>> = opts
        .dims
        .iter()
        .map(|&d| frames.iter().map(|&t| sequence.features(t, opts.participant)[d]).collect())
        .collect();
    let (y0, y1) = y_range(series.iter().flatten().copied());
    let p = Panel { top: top(2.0), x0, x1, y0, y1 };
    for &t in &frames {
        if sequence.features(t, opts.participant)[4] == 1.0 {
            writeln!(
                svg,
                r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{PANEL_HEIGHT:.2}" fill="#eee"/>"##,
                p.px(t as f64 - 0.5).max(MARGIN_LEFT),
                p.top,
                p.px(1.0 + x0) - p.px(x0)
            )
            .unwrap();
        }
    }
    let names: Vec<&str> = opts.dims.iter().map(|&d| FEATURE_NAMES[d]).collect();
    p.frame(&mut svg, &format!("participant {} ({}; shaded = speaking)", opts.participant, names.join(", ")));
    for (k, ys) in series.iter().enumerate() {
        p.line(&mut svg, &fx, ys, COLORS[k % COLORS.len()]);
    }
    writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">frame</text>"#,
        (MARGIN_LEFT + WIDTH - MARGIN_RIGHT) / 2.0,
        height - 6.0
    )
    .unwrap();
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_by_name() {
        assert_eq!(parse_dims("qx,qy").unwrap(), vec![1, 2]);
        assert!(parse_dims("qx,roll").is_err());
        assert!(parse_dims("").is_err());
    }
}
