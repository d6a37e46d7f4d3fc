//! Artifact output: SVG drawings, CSV point lists, and JSON encoding.
//!
//! Key design points:
//!
//! * All output is deterministic. Coordinates are written with fixed
//!   precision and nothing iterates a hash map, so identical inputs give
//!   byte-identical files.
//! * JSON floats are written as `{:.16e}`, 17 significant digits, enough
//!   to round-trip any 64-bit float.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;
use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter, Serializer};

use crate::geometry::{Polygon, Vec2};
use crate::path::RotationPath;
use crate::shape::{BoundaryAttribution, SofaShape};

// ---- JSON ----

/// Pretty JSON with full-precision floats. Non-finite values become
/// `null` to keep the output parseable.
struct FullPrecisionPretty {
    inner: PrettyFormatter<'static>,
}

impl FullPrecisionPretty {
    fn new() -> Self {
        FullPrecisionPretty {
            inner: PrettyFormatter::new(),
        }
    }
}

impl Formatter for FullPrecisionPretty {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }

    fn begin_array<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.begin_array(writer)
    }

    fn end_array<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.end_array(writer)
    }

    fn begin_array_value<W>(&mut self, writer: &mut W, first: bool) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.begin_array_value(writer, first)
    }

    fn end_array_value<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.end_array_value(writer)
    }

    fn begin_object<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.begin_object(writer)
    }

    fn end_object<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.end_object(writer)
    }

    fn begin_object_key<W>(&mut self, writer: &mut W, first: bool) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.begin_object_key(writer, first)
    }

    fn begin_object_value<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.begin_object_value(writer)
    }

    fn end_object_value<W>(&mut self, writer: &mut W) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.inner.end_object_value(writer)
    }
}

/// Serialize any value to pretty JSON with full-precision floats.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = Serializer::with_formatter(&mut out, FullPrecisionPretty::new());
    value
        .serialize(&mut ser)
        .expect("in-memory JSON serialization cannot fail");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json writes UTF-8")
}

// ---- CSV ----

/// Polygon vertices as CSV, one `x,y` row per vertex, 12 significant
/// digits.
pub fn polygon_csv(polygon: &Polygon) -> String {
    let mut out = String::from("x,y\n");
    for v in polygon.vertices() {
        let _ = writeln!(out, "{:.11e},{:.11e}", v.x, v.y);
    }
    out
}

// ---- SVG ----

/// Options shared by the SVG renderers.
#[derive(Debug, Clone, Copy)]
pub struct SvgOptions {
    /// Width of the drawing in pixels; height follows the aspect ratio.
    pub width: f64,
    /// Margin around the content, in world units.
    pub margin: f64,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions {
            width: 800.0,
            margin: 0.25,
        }
    }
}

struct Canvas {
    svg: String,
    scale: f64,
    lo: Vec2,
    hi: Vec2,
}

impl Canvas {
    fn new(lo: Vec2, hi: Vec2, opts: &SvgOptions) -> Canvas {
        let lo = lo - Vec2::new(opts.margin, opts.margin);
        let hi = hi + Vec2::new(opts.margin, opts.margin);
        let scale = opts.width / (hi.x - lo.x);
        let height = (hi.y - lo.y) * scale;
        let mut svg = String::new();
        let _ = writeln!(
            svg,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
             width=\"{:.2}\" height=\"{:.2}\" viewBox=\"0 0 {:.2} {:.2}\">",
            opts.width, height, opts.width, height
        );
        Canvas { svg, scale, lo, hi }
    }

    fn map(&self, p: Vec2) -> (f64, f64) {
        ((p.x - self.lo.x) * self.scale, (self.hi.y - p.y) * self.scale)
    }

    fn path_data(&self, points: impl IntoIterator<Item = Vec2>, close: bool) -> String {
        let mut d = String::new();
        for (i, p) in points.into_iter().enumerate() {
            let (x, y) = self.map(p);
            let cmd = if i == 0 { 'M' } else { 'L' };
            let _ = write!(d, "{cmd}{x:.3} {y:.3} ");
        }
        if close {
            d.push('Z');
        }
        d
    }

    fn polyline(&mut self, points: impl IntoIterator<Item = Vec2>, stroke: &str, width: f64) {
        let d = self.path_data(points, false);
        let _ = writeln!(
            self.svg,
            "<path d=\"{d}\" fill=\"none\" stroke=\"{stroke}\" \
             stroke-width=\"{width:.2}\" stroke-linecap=\"round\" \
             stroke-linejoin=\"round\"/>"
        );
    }

    fn filled(&mut self, points: impl IntoIterator<Item = Vec2>, fill: &str, stroke: &str) {
        let d = self.path_data(points, true);
        let _ = writeln!(
            self.svg,
            "<path d=\"{d}\" fill=\"{fill}\" stroke=\"{stroke}\" stroke-width=\"1.5\"/>"
        );
    }

    fn dot(&mut self, p: Vec2, radius: f64, fill: &str) {
        let (x, y) = self.map(p);
        let _ = writeln!(
            self.svg,
            "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"{radius:.2}\" fill=\"{fill}\"/>"
        );
    }

    fn finish(mut self) -> String {
        self.svg.push_str("</svg>\n");
        self.svg
    }
}

const RUN_COLORS: [&str; 6] = [
    "#c0392b", "#2471a3", "#1e8449", "#b7950b", "#884ea0", "#ca6f1e",
];
const WALL_COLOR: &str = "#5d6d7e";

/// Render a sofa shape. With an attribution, each boundary run is
/// stroked in its own color and its junctions are tick-marked; without
/// one the outline is drawn in a single color.
pub fn shape_svg(
    shape: &SofaShape,
    attribution: Option<&BoundaryAttribution>,
    opts: &SvgOptions,
) -> String {
    let (lo, hi) = shape
        .polygon()
        .bounding_box()
        .unwrap_or((Vec2::ZERO, Vec2::new(1.0, 1.0)));
    let mut canvas = Canvas::new(lo, hi, opts);
    let verts = shape.polygon().vertices();

    match attribution {
        None => {
            canvas.filled(verts.iter().copied(), "#dbe7f5", "#1f3a5f");
        }
        Some(attribution) => {
            canvas.filled(verts.iter().copied(), "#dbe7f5", "none");
            let mut curved_seen = 0usize;
            for run in &attribution.runs {
                let color = if run.generator.is_curved() {
                    curved_seen += 1;
                    RUN_COLORS[(curved_seen - 1) % RUN_COLORS.len()]
                } else {
                    WALL_COLOR
                };
                // One vertex past the run closes the gap to the next run.
                // A zero-length run is a wall crossed by a single edge;
                // draw that edge, reaching one vertex back instead.
                let from = if run.len == 0 {
                    run.start + verts.len() - 1
                } else {
                    run.start
                };
                let span = run.len.max(1);
                let points = (0..=span).map(|k| verts[(from + k) % verts.len()]);
                canvas.polyline(points, color, 2.2);
            }
            for run in &attribution.runs {
                canvas.dot(verts[run.start % verts.len()], 2.6, "#17202a");
            }
        }
    }
    canvas.finish()
}

/// Render one animation frame: the strip, the hallway at angle `t`, the
/// corner path traced so far, and optionally the sofa it carves.
pub fn frame_svg(path: &RotationPath, shape: Option<&SofaShape>, t: f64, opts: &SvgOptions) -> String {
    let x = path.position(t);
    let mut lo = Vec2::new(-3.0, -2.5);
    let mut hi = Vec2::new(2.5, 2.0);
    if let Some((slo, shi)) = shape.and_then(|s| s.polygon().bounding_box()) {
        lo.x = lo.x.min(slo.x - 0.5);
        hi.x = hi.x.max(shi.x + 0.5);
    }
    let mut canvas = Canvas::new(lo, hi, opts);

    // The horizontal strip the sofa slides through.
    canvas.polyline([Vec2::new(lo.x, 0.0), Vec2::new(hi.x, 0.0)], "#b2babb", 1.0);
    canvas.polyline([Vec2::new(lo.x, 1.0), Vec2::new(hi.x, 1.0)], "#b2babb", 1.0);

    if let Some(shape) = shape {
        canvas.filled(
            shape.polygon().vertices().iter().copied(),
            "#dbe7f5",
            "#1f3a5f",
        );
    }

    // Hallway walls at angle t, arms truncated for display.
    let frame = crate::geometry::frame_at_unchecked(t);
    let arm = 3.0;
    let local = |a: f64, b: f64| x + frame.mu * a + frame.nu * b;
    canvas.polyline(
        [local(-arm, 1.0), local(1.0, 1.0), local(1.0, -arm)],
        "#922b21",
        2.0,
    );
    canvas.polyline(
        [local(-arm, 0.0), local(0.0, 0.0), local(0.0, -arm)],
        "#922b21",
        2.0,
    );

    // Corner path traced up to t.
    let steps = 64;
    let trail = (0..=steps).map(|k| path.position(t * (k as f64) / steps as f64));
    canvas.polyline(trail, "#1a5276", 1.6);
    canvas.dot(x, 3.0, "#1a5276");

    canvas.finish()
}

/// Render `count` uniformly spaced frames of the hallway sweep.
pub fn animation_frames(
    path: &RotationPath,
    shape: Option<&SofaShape>,
    count: usize,
    opts: &SvgOptions,
) -> Vec<String> {
    (0..count)
        .map(|k| {
            let t = if count > 1 {
                FRAC_PI_2 * (k as f64) / (count - 1) as f64
            } else {
                0.0
            };
            frame_svg(path, shape, t, opts)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path::hammersley_path;
    use crate::shape::{build_shape, BuildOptions};

    fn test_shape() -> SofaShape {
        let path = hammersley_path(0.5).unwrap();
        build_shape(
            &path,
            &BuildOptions {
                n_angles: 64,
                include_ends: true,
            },
        )
        .unwrap()
    }

    #[test]
    fn json_floats_carry_full_precision() {
        #[derive(Serialize)]
        struct Probe {
            value: f64,
        }
        let json = to_json_string(&Probe {
            value: 2.219531668871959,
        });
        assert!(json.contains("2.2195316688719591e0"), "json was {json}");
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed["value"].as_f64(), Some(2.219531668871959));
    }

    #[test]
    fn json_handles_non_finite_values() {
        #[derive(Serialize)]
        struct Probe {
            value: f64,
        }
        let json = to_json_string(&Probe {
            value: f64::INFINITY,
        });
        assert!(serde_json::from_str::<serde_json::Value>(&json).is_ok());
    }

    #[test]
    fn csv_has_header_and_one_row_per_vertex() {
        let shape = test_shape();
        let csv = polygon_csv(shape.polygon());
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "x,y");
        assert_eq!(lines.len(), shape.polygon().vertices().len() + 1);
        for line in &lines[1..] {
            let (x, y) = line.split_once(',').expect("two columns");
            x.parse::<f64>().unwrap();
            y.parse::<f64>().unwrap();
        }
    }

    #[test]
    fn svg_output_is_deterministic_and_well_formed() {
        let shape = test_shape();
        let opts = SvgOptions::default();
        let first = shape_svg(&shape, None, &opts);
        let second = shape_svg(&shape, None, &opts);
        assert_eq!(first, second);
        assert!(first.starts_with("<svg"));
        assert!(first.trim_end().ends_with("</svg>"));
        assert!(first.contains("version=\"1.1\""));
    }

    #[test]
    fn frames_are_generated_at_uniform_angles() {
        let path = hammersley_path(0.5).unwrap();
        let frames = animation_frames(&path, None, 5, &SvgOptions::default());
        assert_eq!(frames.len(), 5);
        assert_ne!(frames[0], frames[4], "first and last frames differ");
    }
}
