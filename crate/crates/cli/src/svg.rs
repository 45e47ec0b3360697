//! SVG emission for pencil scenes.
//!
//! Geometry lives in the canonical frame (outer circle = unit circle); the
//! viewport maps it affinely onto a square canvas with `y` pointing up.
//! Every element carries a `class` naming its layer so that the output can
//! be checked by parsing rather than by byte comparison.

use std::path::PathBuf;

use pencil_core::{OrientedCircle, Point};
use xmlwriter::{Options, XmlWriter};

/// Items past this distance from the origin are drawn but do not grow the
/// viewport.
const VIEW_LIMIT: f64 = 6.0;
/// Fraction of the visible span added on every side.
const MARGIN: f64 = 0.08;

#[derive(Debug, Clone, Default)]
pub struct Scene {
    pub pencil_circles: Vec<OrientedCircle>,
    pub inner: Option<OrientedCircle>,
    pub polygon: Vec<Point>,
    pub diagonals: Vec<(Point, Point)>,
    pub limit_points: Vec<Point>,
    pub radical_axis_x: Option<f64>,
    pub conjugate_circles: Vec<OrientedCircle>,
    pub conjugate_chords: Vec<(Point, Point)>,
}

#[derive(Debug, Clone)]
pub struct RenderSpec {
    /// Canvas side in pixels; the canvas is always square.
    pub size: u32,
    pub stroke: f64,
    pub polygon_stroke: f64,
    pub show_pencil: bool,
    pub show_radical_axis: bool,
    pub show_limit_points: bool,
    pub show_polygon: bool,
    pub show_diagonals: bool,
    pub path: PathBuf,
}

impl RenderSpec {
    pub fn new(path: PathBuf) -> Self {
        Self {
            size: 800,
            stroke: 1.0,
            polygon_stroke: 1.5,
            show_pencil: true,
            show_radical_axis: true,
            show_limit_points: true,
            show_polygon: true,
            show_diagonals: true,
            path,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Viewport {
    pub min_x: f64,
    pub max_y: f64,
    pub span: f64,
    pub size: f64,
}

impl Viewport {
    fn fit(scene: &Scene, spec: &RenderSpec) -> Self {
        let (mut lo_x, mut hi_x, mut lo_y, mut hi_y) = (-1.0_f64, 1.0_f64, -1.0_f64, 1.0_f64);
        let mut include = |x: f64, y: f64| {
            if x.abs() <= VIEW_LIMIT && y.abs() <= VIEW_LIMIT {
                lo_x = lo_x.min(x);
                hi_x = hi_x.max(x);
                lo_y = lo_y.min(y);
                hi_y = hi_y.max(y);
            }
        };
        let circles = spec
            .show_pencil
            .then_some(scene.pencil_circles.iter())
            .into_iter()
            .flatten()
            .chain(scene.conjugate_circles.iter());
        for c in circles {
            include(c.center.x - c.radius, c.center.y - c.radius);
            include(c.center.x + c.radius, c.center.y + c.radius);
        }
        if spec.show_limit_points {
            for p in &scene.limit_points {
                include(p.x, p.y);
            }
        }
        if spec.show_radical_axis {
            if let Some(x) = scene.radical_axis_x {
                include(x, 0.0);
            }
        }
        let span = (hi_x - lo_x).max(hi_y - lo_y);
        let pad = MARGIN * span;
        let cx = 0.5 * (lo_x + hi_x);
        let cy = 0.5 * (lo_y + hi_y);
        let full = span + 2.0 * pad;
        Self {
            min_x: cx - 0.5 * full,
            max_y: cy + 0.5 * full,
            span: full,
            size: spec.size as f64,
        }
    }

    fn x(&self, x: f64) -> f64 {
        (x - self.min_x) / self.span * self.size
    }

    fn y(&self, y: f64) -> f64 {
        (self.max_y - y) / self.span * self.size
    }

    fn len(&self, r: f64) -> f64 {
        r / self.span * self.size
    }
}

fn num(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

struct Canvas<'a> {
    w: XmlWriter,
    view: &'a Viewport,
}

impl Canvas<'_> {
    fn circle(&mut self, class: &str, c: Point, r: f64, stroke: &str, width: f64, fill: &str) {
        self.w.start_element("circle");
        self.w.write_attribute("class", class);
        self.w.write_attribute("cx", &num(self.view.x(c.x)));
        self.w.write_attribute("cy", &num(self.view.y(c.y)));
        self.w.write_attribute("r", &num(self.view.len(r)));
        self.w.write_attribute("fill", fill);
        self.w.write_attribute("stroke", stroke);
        self.w.write_attribute("stroke-width", &num(width));
        self.w.end_element();
    }

    fn marker(&mut self, class: &str, p: Point, px: f64, fill: &str) {
        self.w.start_element("circle");
        self.w.write_attribute("class", class);
        self.w.write_attribute("cx", &num(self.view.x(p.x)));
        self.w.write_attribute("cy", &num(self.view.y(p.y)));
        self.w.write_attribute("r", &num(px));
        self.w.write_attribute("fill", fill);
        self.w.end_element();
    }

    fn line(&mut self, class: &str, a: Point, b: Point, stroke: &str, width: f64) {
        self.w.start_element("line");
        self.w.write_attribute("class", class);
        self.w.write_attribute("x1", &num(self.view.x(a.x)));
        self.w.write_attribute("y1", &num(self.view.y(a.y)));
        self.w.write_attribute("x2", &num(self.view.x(b.x)));
        self.w.write_attribute("y2", &num(self.view.y(b.y)));
        self.w.write_attribute("stroke", stroke);
        self.w.write_attribute("stroke-width", &num(width));
        self.w.end_element();
    }
}

/// Renders the scene as an SVG 1.1 document.
pub fn render_document(scene: &Scene, spec: &RenderSpec) -> String {
    let view = Viewport::fit(scene, spec);
    let size = spec.size.to_string();
    let mut w = XmlWriter::new(Options::default());
    w.write_declaration();
    w.start_element("svg");
    w.write_attribute("version", "1.1");
    w.write_attribute("xmlns", "http://www.w3.org/2000/svg");
    w.write_attribute("width", &size);
    w.write_attribute("height", &size);
    w.write_attribute("viewBox", &format!("0 0 {size} {size}"));
    let mut canvas = Canvas { w, view: &view };

    let s = spec.stroke;
    if spec.show_pencil {
        for c in &scene.pencil_circles {
            canvas.circle("pencil", c.center, c.radius, "#9aa7b8", s, "none");
        }
    }
    for c in &scene.conjugate_circles {
        canvas.circle("conjugate", c.center, c.radius, "#b05f9a", s, "none");
    }
    for &(a, b) in &scene.conjugate_chords {
        canvas.line("conjugate-chord", a, b, "#b05f9a", s);
    }
    if spec.show_radical_axis {
        if let Some(x) = scene.radical_axis_x {
            let half = 0.5 * view.span;
            let top = Point::new(x, view.max_y);
            let bottom = Point::new(x, view.max_y - 2.0 * half);
            canvas.line("radical-axis", top, bottom, "#6b8e23", s);
        }
    }
    canvas.circle(
        "outer",
        Point::new(0.0, 0.0),
        1.0,
        "#1f2d3d",
        1.5 * s,
        "none",
    );
    if let Some(c) = &scene.inner {
        canvas.circle("inner", c.center, c.radius, "#d2691e", 1.5 * s, "none");
    }
    if spec.show_diagonals {
        for &(a, b) in &scene.diagonals {
            canvas.line("diagonal", a, b, "#4682b4", s);
        }
    }
    if spec.show_polygon && !scene.polygon.is_empty() {
        let n = scene.polygon.len();
        for i in 0..n {
            let (a, b) = (scene.polygon[i], scene.polygon[(i + 1) % n]);
            canvas.line("side", a, b, "#b22222", spec.polygon_stroke);
        }
        for &p in &scene.polygon {
            canvas.marker("vertex", p, 3.0, "#b22222");
        }
    }
    if spec.show_limit_points {
        for &p in &scene.limit_points {
            canvas.marker("limit-point", p, 2.5, "#2e8b57");
        }
    }
    canvas.w.end_document()
}

/// Renders and writes the document to `spec.path`.
pub fn render_svg(scene: &Scene, spec: &RenderSpec) -> std::io::Result<()> {
    std::fs::write(&spec.path, render_document(scene, spec))
}
