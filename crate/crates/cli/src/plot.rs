//! Deterministic SVG scatter plots of embeddings.

use std::fmt::Write as _;

use role_embed::solver::EmbeddingMatrix;
use role_embed::{top_eigenpairs, LabeledDataset, SquareMatrix};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PlotError {
    #[error("cannot plot a {0}-dimensional embedding; embed with d >= 2")]
    TooFewDimensions(usize),
    #[error("invalid plot spec: {0}")]
    Spec(String),
    #[error("{labels} labels for {points} points")]
    LabelCount { labels: usize, points: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    pub width: u32,
    pub height: u32,
    pub point_radius: f64,
    /// Fraction of the plot area left empty around the points.
    pub padding: f64,
    /// Colours by class id; extended automatically when too short.
    pub palette: Vec<String>,
}

impl Default for PlotSpec {
    fn default() -> Self {
        PlotSpec {
            width: 800,
            height: 600,
            point_radius: 4.0,
            padding: 0.05,
            palette: default_palette(10),
        }
    }
}

impl PlotSpec {
    pub fn validate(&self) -> Result<(), PlotError> {
        if self.width == 0 || self.height == 0 {
            return Err(PlotError::Spec("width and height must be positive".into()));
        }
        if !(self.point_radius > 0.0 && self.point_radius.is_finite()) {
            return Err(PlotError::Spec("point radius must be positive".into()));
        }
        if !(0.0..0.5).contains(&self.padding) {
            return Err(PlotError::Spec("padding must lie in [0, 0.5)".into()));
        }
        Ok(())
    }
}

/// Tableau-style colours, then golden-angle hues.
pub fn default_palette(count: usize) -> Vec<String> {
    const BASE: [&str; 10] = [
        "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
    ];
    (0..count)
        .map(|i| match BASE.get(i) {
            Some(c) => (*c).to_owned(),
            None => {
                let hue = (i as f64 * 137.507_764) % 360.0;
                let lightness = if i % 2 == 0 { 45 } else { 60 };
                format!("hsl({hue:.1},65%,{lightness}%)")
            }
        })
        .collect()
}

/// Two plotting coordinates per point: the embedding itself when `d = 2`,
/// otherwise the top two principal components.
pub fn project_2d(x: &EmbeddingMatrix<f64>) -> Result<Vec<[f64; 2]>, PlotError> {
    let (n, d) = (x.n(), x.d());
    if d < 2 {
        return Err(PlotError::TooFewDimensions(d));
    }
    if d == 2 {
        return Ok(x.rows().map(|r| [r[0], r[1]]).collect());
    }
    let mut mean = vec![0.0; d];
    for row in x.rows() {
        for (m, v) in mean.iter_mut().zip(row) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);
    let centered: Vec<Vec<f64>> = x
        .rows()
        .map(|r| r.iter().zip(&mean).map(|(v, m)| v - m).collect())
        .collect();
    let cov = SquareMatrix::from_fn(d, |a, b| centered.iter().map(|r| r[a] * r[b]).sum::<f64>() / n as f64);
    let axes = top_eigenpairs(&cov, 2);
    Ok(centered
        .iter()
        .map(|r| {
            let along = |k: usize| r.iter().zip(&axes[k].1).map(|(v, w)| v * w).sum::<f64>();
            [along(0), along(1)]
        })
        .collect())
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

const LEGEND_WIDTH: f64 = 180.0;
const LEGEND_ROW: f64 = 18.0;

/// Renders one circle per point, coloured by class, with a legend on the
/// right. Axes share one scale so distances are not distorted.
pub fn render_svg(
    points: &[[f64; 2]],
    names: &[String],
    labels: Option<&LabeledDataset>,
    spec: &PlotSpec,
) -> Result<String, PlotError> {
    spec.validate()?;
    if let Some(l) = labels {
        if l.len() != points.len() {
            return Err(PlotError::LabelCount {
                labels: l.len(),
                points: points.len(),
            });
        }
    }
    let class_count = labels.map_or(1, LabeledDataset::class_count);
    let mut palette = spec.palette.clone();
    if palette.len() < class_count {
        palette = default_palette(class_count)
            .into_iter()
            .enumerate()
            .map(|(i, c)| spec.palette.get(i).cloned().unwrap_or(c))
            .collect();
    }
    let class_of = |i: usize| labels.map_or(0, |l| l.labels()[i]);
    let class_name = |c: usize| labels.map_or("nodes", |l| l.class_names()[c].as_str());

    let (w, h) = (f64::from(spec.width), f64::from(spec.height));
    let plot_w = (w - LEGEND_WIDTH).max(w * 0.5);
    let (pad_x, pad_y) = (
        plot_w * spec.padding + spec.point_radius,
        h * spec.padding + spec.point_radius,
    );
    let (lo, hi) = points
        .iter()
        .fold(([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]), |(lo, hi), p| {
            ([lo[0].min(p[0]), lo[1].min(p[1])], [hi[0].max(p[0]), hi[1].max(p[1])])
        });
    let span = [(hi[0] - lo[0]).max(0.0), (hi[1] - lo[1]).max(0.0)];
    let avail = [(plot_w - 2.0 * pad_x).max(1.0), (h - 2.0 * pad_y).max(1.0)];
    let scale = [avail[0] / span[0], avail[1] / span[1]]
        .into_iter()
        .filter(|s| s.is_finite())
        .fold(f64::INFINITY, f64::min);
    let scale = if scale.is_finite() { scale } else { 1.0 };
    let mid = [(lo[0] + hi[0]) / 2.0, (lo[1] + hi[1]) / 2.0];
    let to_screen = |p: &[f64; 2]| {
        let sx = plot_w / 2.0 + (p[0] - mid[0]) * scale;
        // screen y grows downwards
        let sy = h / 2.0 - (p[1] - mid[1]) * scale;
        (sx, sy)
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        spec.width, spec.height, spec.width, spec.height
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(svg, r#"<g id="points" fill-opacity="0.8">"#);
    for (i, p) in points.iter().enumerate() {
        let (sx, sy) = to_screen(p);
        let c = class_of(i);
        let name = names.get(i).map_or_else(|| i.to_string(), |n| escape(n));
        let _ = writeln!(
            svg,
            r#"<circle cx="{sx:.3}" cy="{sy:.3}" r="{}" fill="{}"><title>{name} ({})</title></circle>"#,
            spec.point_radius,
            palette[c],
            escape(class_name(c))
        );
    }
    let _ = writeln!(svg, "</g>");
    let _ = writeln!(svg, r#"<g id="legend" font-family="sans-serif" font-size="12">"#);
    let x0 = plot_w + 10.0;
    for c in 0..class_count {
        let y = 20.0 + c as f64 * LEGEND_ROW;
        let _ = writeln!(
            svg,
            r#"<rect x="{x0:.1}" y="{:.1}" width="10" height="10" fill="{}"/><text x="{:.1}" y="{:.1}">{}</text>"#,
            y - 9.0,
            palette[c],
            x0 + 16.0,
            y,
            escape(class_name(c))
        );
    }
    let _ = writeln!(svg, "</g>");
    svg.push_str("</svg>\n");
    Ok(svg)
}
