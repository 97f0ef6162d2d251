//! Static SVG pictures with a JSON sidecar describing what was drawn.

use std::f64::consts::PI;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::amoeba::{rasterize, AmoebaError, Window};
use crate::contour::Polyline;
use crate::poly::{real_up_to_constant, LaurentPolynomial};
use crate::real_locus::{default_window, trace_topology};
use crate::ronkin::ronkin_field;

const CANVAS: f64 = 600.0;
const AMOEBA_FILL: &str = "#9ecae1";
const OUTLINE_STROKE: &str = "#08519c";
const LOCUS_STROKES: [&str; 4] = ["#d62728", "#ff7f0e", "#2ca02c", "#9467bd"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RenderKind {
    Amoeba,
    RealLocus,
    Overlay,
    RonkinDensity,
}

impl std::str::FromStr for RenderKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "amoeba" => Ok(Self::Amoeba),
            "real-locus" => Ok(Self::RealLocus),
            "overlay" => Ok(Self::Overlay),
            "ronkin-density" => Ok(Self::RonkinDensity),
            _ => Err(format!("unknown render kind {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RenderOptions {
    /// Defaults to the real-locus window for real curves, else the tropical core plus 4.
    pub window: Option<Window>,
    pub resolution: usize,
    /// Grid of the Ronkin density picture.
    pub density_resolution: usize,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            window: None,
            resolution: 256,
            density_resolution: 48,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenderSidecar {
    pub what: RenderKind,
    pub polynomial: String,
    pub window: Window,
    pub resolution: usize,
    pub outline_polylines: usize,
    pub locus_polylines: usize,
    pub note: Option<String>,
    /// `π²·det Hess N` range over the density grid.
    pub density_range: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rendering {
    pub svg: String,
    pub sidecar: RenderSidecar,
}

struct Canvas {
    window: Window,
    body: String,
}

impl Canvas {
    fn new(window: Window) -> Self {
        Self {
            window,
            body: String::new(),
        }
    }

    fn map(&self, p: [f64; 2]) -> (f64, f64) {
        let w = self.window;
        (
            (p[0] - w.x1_min) / w.width() * CANVAS,
            CANVAS - (p[1] - w.x2_min) / w.height() * CANVAS,
        )
    }

    fn path_data(&self, lines: &[Polyline]) -> String {
        let mut d = String::new();
        for l in lines {
            for (i, &p) in l.points.iter().enumerate() {
                let (x, y) = self.map(p);
                let _ = write!(d, "{}{x:.2},{y:.2} ", if i == 0 { 'M' } else { 'L' });
            }
            if l.closed {
                d.push_str("Z ");
            }
        }
        d
    }

    fn fill(&mut self, lines: &[Polyline], fill: &str, stroke: &str) {
        let d = self.path_data(lines);
        let _ = writeln!(
            self.body,
            r#"<path d="{d}" fill="{fill}" fill-rule="evenodd" stroke="{stroke}" stroke-width="1"/>"#
        );
    }

    fn stroke(&mut self, lines: &[Polyline], stroke: &str, width: f64) {
        let d = self.path_data(lines);
        let _ = writeln!(
            self.body,
            r#"<path d="{d}" fill="none" stroke="{stroke}" stroke-width="{width}"/>"#
        );
    }

    fn note(&mut self, text: &str) {
        let _ = writeln!(
            self.body,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="16" text-anchor="middle">{}</text>"#,
            CANVAS / 2.0,
            CANVAS / 2.0,
            text.replace('&', "&amp;").replace('<', "&lt;")
        );
    }

    fn finish(self) -> String {
        let w = self.window;
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{CANVAS}" height="{CANVAS}" viewBox="0 0 {CANVAS} {CANVAS}">"#
        );
        let _ = writeln!(
            s,
            "<!-- log window [{}, {}] x [{}, {}] -->",
            w.x1_min, w.x1_max, w.x2_min, w.x2_max
        );
        let _ = writeln!(s, r#"<rect width="{CANVAS}" height="{CANVAS}" fill="white"/>"#);
        s.push_str(&self.body);
        s.push_str("</svg>\n");
        s
    }
}

fn pick_window(f: &LaurentPolynomial, options: &RenderOptions) -> Window {
    if let Some(w) = options.window {
        return w;
    }
    match real_up_to_constant(f) {
        Some(w) if !f.newton_polygon().is_degenerate() => default_window(&w.realify(f)),
        _ => Window::core(f, 4.0),
    }
}

pub fn render(f: &LaurentPolynomial, what: RenderKind, options: &RenderOptions) -> Result<Rendering, AmoebaError> {
    let window = pick_window(f, options);
    let mut canvas = Canvas::new(window);
    let mut sidecar = RenderSidecar {
        what,
        polynomial: f.to_string(),
        window,
        resolution: options.resolution,
        outline_polylines: 0,
        locus_polylines: 0,
        note: None,
        density_range: None,
    };
    if f.newton_polygon().is_degenerate() {
        let note = "Newton polygon has zero area: nothing to draw";
        canvas.note(note);
        sidecar.note = Some(note.to_string());
        return Ok(Rendering {
            svg: canvas.finish(),
            sidecar,
        });
    }
    if matches!(what, RenderKind::Amoeba | RenderKind::Overlay) {
        let raster = rasterize(f, window, (options.resolution, options.resolution))?;
        let outline = raster.boundary_polylines();
        sidecar.outline_polylines = outline.len();
        let (fill, stroke) = if what == RenderKind::Amoeba {
            (AMOEBA_FILL, OUTLINE_STROKE)
        } else {
            ("none", OUTLINE_STROKE)
        };
        canvas.fill(&outline, fill, stroke);
    }
    if matches!(what, RenderKind::RealLocus | RenderKind::Overlay) {
        match real_up_to_constant(f) {
            Some(w) => {
                let g = w.realify(f);
                // a trace over the component bound is not drawn
                if let Ok(t) = trace_topology(&g, window, 2 * options.resolution) {
                    for (c, color) in t.charts.iter().zip(LOCUS_STROKES) {
                        let lines: Vec<Polyline> = c.arcs.iter().chain(&c.ovals).cloned().collect();
                        sidecar.locus_polylines += lines.len();
                        let width = if what == RenderKind::Overlay { 1.0 } else { 2.0 };
                        canvas.stroke(&lines, color, width);
                    }
                }
            }
            None => {
                let note = "not real up to a constant: no real part";
                canvas.note(note);
                sidecar.note = Some(note.to_string());
            }
        }
    }
    if what == RenderKind::RonkinDensity {
        let n = options.density_resolution;
        let field = ronkin_field(f, window, (n, n));
        let (cw, ch) = (CANVAS / n as f64, CANVAS / n as f64);
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (k, s) in field.samples.iter().enumerate() {
            let d = (PI * PI * s.det()).max(0.0);
            lo = lo.min(d);
            hi = hi.max(d);
            // white at 0, dark at the maximal density 1/π²
            let shade = (255.0 * (1.0 - d.min(1.0))).round() as u8;
            let (i, j) = (k % n, k / n);
            let _ = writeln!(
                canvas.body,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="rgb({shade},{shade},255)"/>"#,
                i as f64 * cw,
                CANVAS - (j + 1) as f64 * ch,
                cw + 0.05,
                ch + 0.05
            );
        }
        sidecar.density_range = Some([lo, hi]);
    }
    Ok(Rendering {
        svg: canvas.finish(),
        sidecar,
    })
}
