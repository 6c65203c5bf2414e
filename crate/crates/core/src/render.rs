//! Static SVG rendering of Γ̃ from a dump.

use std::path::Path as FsPath;

use svg::node::element::path::Data;
use svg::node::element::{Circle, Group, Line, Path, Rectangle};
use svg::Document;

use crate::bridge::Provenance;
use crate::cubes::CubeClass;
use crate::dump::Dump;
use crate::error::Result;
use crate::geom::{Aabb, Point};
use crate::route::DilationSample;

pub const GAMMA_COLOR: &str = "#000000";
pub const FLAT_BAD_COLOR: &str = "#1f77b4";
pub const NON_FLAT_COLOR: &str = "#d62728";
/// Non-Flat bridges built for the exceptional pairs.
pub const EXCEPTION_COLOR: &str = "#ff7f0e";
pub const WORST_COLOR: &str = "#2ca02c";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Layers {
    pub gamma: bool,
    pub bridges: bool,
    pub worst: bool,
    pub cubes: bool,
}

impl Default for Layers {
    fn default() -> Self {
        Layers { gamma: true, bridges: true, worst: true, cubes: false }
    }
}

pub fn provenance_color(p: &Provenance) -> &'static str {
    match p {
        Provenance::FlatBad { .. } => FLAT_BAD_COLOR,
        Provenance::NonFlat { exception: true, .. } => EXCEPTION_COLOR,
        Provenance::NonFlat { .. } => NON_FLAT_COLOR,
    }
}

fn class_color(c: CubeClass) -> &'static str {
    match c {
        CubeClass::FlatBad => FLAT_BAD_COLOR,
        CubeClass::NonFlat => NON_FLAT_COLOR,
        _ => "#b0b0b0",
    }
}

/// Orthographic view onto the first two coordinates, y up.
fn xy(p: &Point) -> (f64, f64) {
    (p.get(0), -p.get(1))
}

fn polyline(points: &[Point]) -> Data {
    let mut d = Data::new().move_to(xy(&points[0]));
    for p in &points[1..] {
        d = d.line_to(xy(p));
    }
    d
}

/// Renders the dumped network; returns the document and any warnings.
pub fn render(dump: &Dump, worst: Option<&DilationSample>, layers: Layers) -> Result<(Document, Vec<String>)> {
    let curve = dump.curve()?;
    let mut warnings = Vec::new();
    if curve.dim() > 2 {
        warnings.push(format!("d = {}: projecting onto the first two coordinates", curve.dim()));
    }
    let mut bb = Aabb::empty();
    for p in curve.vertices() {
        bb.grow(p);
    }
    for b in &dump.bridges {
        for p in &b.path.vertices {
            bb.grow(p);
        }
    }
    let span = bb.extent(0).max(bb.extent(1)).max(1e-9);
    let pad = 0.05 * span;
    let stroke = span / 400.0;
    let (x0, y0) = (bb.lo[0] - pad, -bb.hi[1] - pad);
    let (w, h) = (bb.extent(0) + 2.0 * pad, bb.extent(1) + 2.0 * pad);
    let mut doc = Document::new()
        .set("viewBox", (x0, y0, w, h))
        .set("width", 800)
        .set("height", (800.0 * h / w).round().max(1.0))
        .add(Rectangle::new().set("x", x0).set("y", y0).set("width", w).set("height", h).set("fill", "white"));

    if layers.cubes {
        let tree = dump.tree()?;
        let mut g = Group::new().set("id", "cubes").set("fill", "none").set("stroke-width", stroke * 0.5);
        for n in tree.nodes() {
            let (cx, cy) = xy(&n.center);
            g = g.add(Circle::new().set("cx", cx).set("cy", cy).set("r", tree.scale(n.level)).set("stroke", class_color(n.class)));
        }
        doc = doc.add(g);
    }
    if layers.gamma {
        let mut d = Data::new();
        for [a, b] in curve.edges() {
            d = d.move_to(xy(&curve.vertices()[*a])).line_to(xy(&curve.vertices()[*b]));
        }
        let path = Path::new().set("d", d).set("fill", "none").set("stroke", GAMMA_COLOR).set("stroke-width", stroke);
        doc = doc.add(Group::new().set("id", "gamma").add(path));
    }
    if layers.bridges && !dump.bridges.is_empty() {
        let mut g = Group::new().set("id", "bridges").set("fill", "none").set("stroke-width", stroke);
        for b in &dump.bridges {
            g = g.add(Path::new().set("d", polyline(&b.path.vertices)).set("stroke", provenance_color(&b.provenance)));
        }
        doc = doc.add(g);
    }
    if let (true, Some(s)) = (layers.worst, worst) {
        let ((px, py), (qx, qy)) = (xy(&s.p), xy(&s.q));
        let g = Group::new()
            .set("id", "worst")
            .set("stroke", WORST_COLOR)
            .set("stroke-width", stroke * 2.0)
            .add(Line::new().set("x1", px).set("y1", py).set("x2", qx).set("y2", qy))
            .add(Circle::new().set("cx", px).set("cy", py).set("r", stroke * 4.0).set("fill", WORST_COLOR))
            .add(Circle::new().set("cx", qx).set("cy", qy).set("r", stroke * 4.0).set("fill", WORST_COLOR));
        doc = doc.add(g);
    }
    Ok((doc, warnings))
}

pub fn save(doc: &Document, path: &FsPath) -> Result<()> {
    Ok(svg::save(path, doc)?)
}
