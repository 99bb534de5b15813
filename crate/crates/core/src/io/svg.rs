//! Deterministic SVG 1.1 phase portraits of `F` on `S`.
//!
//! The picture uses mathematical orientation: `y` grows upward. All layer
//! data is supplied by the caller from the analysis and basin modules; the
//! renderer draws, it never recomputes dynamics.

use std::fmt::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{
    FixedPointRecord, HeteroclinicKind, HeteroclinicOrbit, InvariantSegment, StabilityClass,
};
use crate::basin::{BasinGrid, BasinLabel};
use crate::phase::{PhasePoint, TWO_PI};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Layer {
    BasinBackground,
    InvariantSegments,
    Heteroclinics,
    SampleOrbits,
    FixedPoints,
}

impl Layer {
    pub const ALL: [Layer; 5] = [
        Layer::BasinBackground,
        Layer::InvariantSegments,
        Layer::Heteroclinics,
        Layer::SampleOrbits,
        Layer::FixedPoints,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Layer::BasinBackground => "basin_background",
            Layer::InvariantSegments => "invariant_segments",
            Layer::Heteroclinics => "heteroclinics",
            Layer::SampleOrbits => "sample_orbits",
            Layer::FixedPoints => "fixed_points",
        }
    }
}

impl FromStr for Layer {
    type Err = PortraitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Layer::ALL
            .into_iter()
            .find(|l| l.name() == s.trim())
            .ok_or_else(|| PortraitError::UnknownLayer(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerStyle {
    pub color: String,
    pub width: f64,
}

impl LayerStyle {
    fn new(color: &str, width: f64) -> Self {
        LayerStyle {
            color: color.to_string(),
            width,
        }
    }
}

/// Colours and stroke widths; widths are in pixels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Styling {
    /// sa and rs connections.
    pub heteroclinic: LayerStyle,
    /// ra connections, which are straight segments.
    pub heteroclinic_ra: LayerStyle,
    pub segments: LayerStyle,
    pub orbits: LayerStyle,
    /// Marker outline; `width` is the marker radius.
    pub fixed_points: LayerStyle,
    pub basin_upper: String,
    pub basin_lower: String,
    pub basin_boundary: String,
    pub basin_unresolved: String,
    pub frame: LayerStyle,
}

impl Default for Styling {
    fn default() -> Self {
        Styling {
            heteroclinic: LayerStyle::new("#d62728", 1.6),
            heteroclinic_ra: LayerStyle::new("#1f4fd6", 1.6),
            segments: LayerStyle::new("#9a9a9a", 0.8),
            orbits: LayerStyle::new("#2b2b2b", 0.7),
            fixed_points: LayerStyle::new("#000000", 4.0),
            basin_upper: "#fde9c8".to_string(),
            basin_lower: "#d4e7f7".to_string(),
            basin_boundary: "#ffffff".to_string(),
            basin_unresolved: "#ff00ff".to_string(),
            frame: LayerStyle::new("#000000", 1.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PortraitSpec {
    /// Drawn in the fixed order of [`Layer::ALL`] regardless of list order.
    pub layers: Vec<Layer>,
    pub styling: Styling,
    /// Side of the square plot area in pixels.
    pub size: u32,
    pub margin: u32,
}

impl Default for PortraitSpec {
    fn default() -> Self {
        PortraitSpec {
            layers: Layer::ALL.to_vec(),
            styling: Styling::default(),
            size: 600,
            margin: 30,
        }
    }
}

/// Everything a portrait can show.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PortraitData {
    pub fixed_points: Vec<FixedPointRecord>,
    pub heteroclinics: Vec<HeteroclinicOrbit>,
    pub segments: Vec<InvariantSegment>,
    pub basin: Option<BasinGrid>,
    pub orbits: Vec<Vec<PhasePoint>>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PortraitError {
    #[error("a portrait needs at least one layer")]
    NoLayers,
    #[error("layer {} was requested but no data was supplied", .0.name())]
    MissingData(Layer),
    #[error("unknown layer {0:?}")]
    UnknownLayer(String),
    #[error("plot size must be positive")]
    Size,
}

struct Frame {
    scale: f64,
    margin: f64,
    size: f64,
}

impl Frame {
    fn px(&self, p: PhasePoint) -> (f64, f64) {
        (
            self.margin + p.x * self.scale,
            self.margin + self.size - p.y * self.scale,
        )
    }
}

fn has_data(layer: Layer, d: &PortraitData) -> bool {
    match layer {
        Layer::BasinBackground => d.basin.is_some(),
        Layer::InvariantSegments => !d.segments.is_empty(),
        Layer::Heteroclinics => !d.heteroclinics.is_empty(),
        Layer::SampleOrbits => !d.orbits.is_empty(),
        Layer::FixedPoints => !d.fixed_points.is_empty(),
    }
}

/// Render the requested layers into an SVG document.
///
/// The output is a pure function of its inputs: no timestamps, no generated
/// ids, and all numbers printed with fixed precision.
pub fn render_portrait(spec: &PortraitSpec, data: &PortraitData) -> Result<String, PortraitError> {
    if spec.layers.is_empty() {
        return Err(PortraitError::NoLayers);
    }
    if spec.size == 0 {
        return Err(PortraitError::Size);
    }
    if let Some(&l) = spec.layers.iter().find(|l| !has_data(**l, data)) {
        return Err(PortraitError::MissingData(l));
    }
    let f = Frame {
        scale: spec.size as f64 / TWO_PI,
        margin: spec.margin as f64,
        size: spec.size as f64,
    };
    let total = spec.size + 2 * spec.margin;
    let st = &spec.styling;
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{total}" height="{total}" viewBox="0 0 {total} {total}">"#
    );
    let _ = writeln!(
        s,
        r##"<rect x="0" y="0" width="{total}" height="{total}" fill="#ffffff"/>"##
    );

    for layer in Layer::ALL.into_iter().filter(|l| spec.layers.contains(l)) {
        let _ = writeln!(s, r#"<g id="{}">"#, layer.name());
        match layer {
            Layer::BasinBackground => basin_layer(&mut s, &f, data.basin.as_ref().unwrap(), st),
            Layer::InvariantSegments => {
                for seg in &data.segments {
                    let a = f.px(seg.point(seg.domain.0));
                    let b = f.px(seg.point(seg.domain.1));
                    line(&mut s, a, b, &st.segments, Some(&seg.name.to_string()));
                }
            }
            Layer::Heteroclinics => {
                for o in &data.heteroclinics {
                    let style = if o.kind == HeteroclinicKind::Ra {
                        &st.heteroclinic_ra
                    } else {
                        &st.heteroclinic
                    };
                    // the seed starts 1e-6 away; anchor the curve at the source
                    let pts = std::iter::once(o.source.location).chain(o.samples.iter().copied());
                    polyline(&mut s, &f, pts, style, Some(o.kind.label()));
                }
            }
            Layer::SampleOrbits => {
                for o in &data.orbits {
                    polyline(&mut s, &f, o.iter().copied(), &st.orbits, None);
                }
            }
            Layer::FixedPoints => {
                for fp in &data.fixed_points {
                    marker(&mut s, &f, fp, &st.fixed_points);
                }
            }
        }
        let _ = writeln!(s, "</g>");
    }
    let m = spec.margin;
    let _ = writeln!(
        s,
        r#"<rect x="{m}" y="{m}" width="{0}" height="{0}" fill="none" stroke="{1}" stroke-width="{2:.2}"/>"#,
        spec.size, st.frame.color, st.frame.width
    );
    axis_labels(&mut s, &f);
    let _ = writeln!(s, "</svg>");
    Ok(s)
}

fn line(s: &mut String, a: (f64, f64), b: (f64, f64), st: &LayerStyle, class: Option<&str>) {
    let class = class
        .map(|c| format!(r#" class="{c}""#))
        .unwrap_or_default();
    let _ = writeln!(
        s,
        r#"<line{class} x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{}" stroke-width="{:.2}"/>"#,
        a.0, a.1, b.0, b.1, st.color, st.width
    );
}

/// Points closer than a tenth of a pixel to the previous kept point are
/// dropped; the last point is always kept.
fn polyline(
    s: &mut String,
    f: &Frame,
    pts: impl Iterator<Item = PhasePoint>,
    st: &LayerStyle,
    class: Option<&str>,
) {
    let px: Vec<(f64, f64)> = pts.map(|p| f.px(p)).collect();
    if px.is_empty() {
        return;
    }
    let mut kept = vec![px[0]];
    for &q in &px[1..] {
        let last = kept[kept.len() - 1];
        if (q.0 - last.0).hypot(q.1 - last.1) >= 0.1 {
            kept.push(q);
        }
    }
    if kept[kept.len() - 1] != px[px.len() - 1] {
        kept.push(px[px.len() - 1]);
    }
    let class = class
        .map(|c| format!(r#" class="{c}""#))
        .unwrap_or_default();
    let _ = write!(
        s,
        r#"<polyline{class} fill="none" stroke="{}" stroke-width="{:.2}" points=""#,
        st.color, st.width
    );
    for (i, (x, y)) in kept.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{x:.2},{y:.2}");
    }
    let _ = writeln!(s, r#""/>"#);
}

fn marker(s: &mut String, f: &Frame, fp: &FixedPointRecord, st: &LayerStyle) {
    let (x, y) = f.px(fp.location);
    let r = st.width;
    match fp.class {
        StabilityClass::Attractor => {
            let _ = writeln!(
                s,
                r#"<circle class="attractor" cx="{x:.2}" cy="{y:.2}" r="{r:.2}" fill="{}"/>"#,
                st.color
            );
        }
        StabilityClass::Repeller => {
            let _ = writeln!(
                s,
                r##"<circle class="repeller" cx="{x:.2}" cy="{y:.2}" r="{r:.2}" fill="#ffffff" stroke="{}" stroke-width="1.20"/>"##,
                st.color
            );
        }
        StabilityClass::Saddle | StabilityClass::Unclassified => {
            let _ = writeln!(
                s,
                r##"<rect class="saddle" x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="#ffffff" stroke="{}" stroke-width="1.20"/>"##,
                x - r,
                y - r,
                2.0 * r,
                2.0 * r,
                st.color
            );
        }
    }
}

/// One rectangle per horizontal run of equal labels.
fn basin_layer(s: &mut String, f: &Frame, g: &BasinGrid, st: &Styling) {
    let n = g.resolution;
    let cell = f.size / n as f64;
    for row in 0..n {
        let mut col = 0;
        while col < n {
            let label = g.label(col, row);
            let start = col;
            while col < n && g.label(col, row) == label {
                col += 1;
            }
            let fill = match label {
                BasinLabel::Upper => &st.basin_upper,
                BasinLabel::Lower => &st.basin_lower,
                BasinLabel::Boundary => &st.basin_boundary,
                BasinLabel::Unresolved => &st.basin_unresolved,
            };
            // row 0 is the lowest y, so it sits at the bottom of the picture
            let _ = writeln!(
                s,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{fill}" shape-rendering="crispEdges"/>"#,
                f.margin + start as f64 * cell,
                f.margin + f.size - (row + 1) as f64 * cell,
                (col - start) as f64 * cell,
                cell
            );
        }
    }
}

fn axis_labels(s: &mut String, f: &Frame) {
    let ticks = [(0.0, "0"), (std::f64::consts::PI, "π"), (TWO_PI, "2π")];
    for (v, t) in ticks {
        let (x, y0) = f.px(PhasePoint::new(v, 0.0));
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{:.2}" font-family="serif" font-size="12" text-anchor="middle">{t}</text>"#,
            y0 + 16.0
        );
        let (x0, y) = f.px(PhasePoint::new(0.0, v));
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-family="serif" font-size="12" text-anchor="end">{t}</text>"#,
            x0 - 6.0,
            y + 4.0
        );
    }
}
