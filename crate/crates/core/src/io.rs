//! Input files: JSON polylines and CSV point clouds.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Point, PolyCurve, MAX_DIM};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputKind {
    Polyline,
    Pointcloud,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputSpec {
    pub source: PathBuf,
    pub kind: InputKind,
}

impl InputSpec {
    /// Kind from the extension: `.csv` is a point cloud, `.json` a polyline.
    pub fn from_path(path: &Path) -> Result<InputSpec> {
        let kind = match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
            Some("csv") => InputKind::Pointcloud,
            Some("json") => InputKind::Polyline,
            _ => return Err(Error::Input(format!("{}: expected a .json polyline or .csv point cloud", path.display()))),
        };
        Ok(InputSpec { source: path.to_path_buf(), kind })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolylineFile {
    pub vertices: Vec<Vec<f64>>,
    /// Defaults to the path through the vertices in order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<[usize; 2]>>,
}

impl PolylineFile {
    pub fn from_curve(c: &PolyCurve) -> PolylineFile {
        PolylineFile {
            vertices: c.vertices().iter().map(|p| p.coords().to_vec()).collect(),
            edges: Some(c.edges().to_vec()),
        }
    }
}

fn to_points(rows: &[Vec<f64>]) -> Result<Vec<Point>> {
    let mut out = Vec::with_capacity(rows.len());
    for (i, r) in rows.iter().enumerate() {
        if r.len() < 2 || r.len() > MAX_DIM {
            return Err(Error::Input(format!("point {i} has {} coordinates (expected 2..={MAX_DIM})", r.len())));
        }
        if let Some(d) = out.first().map(Point::dim) {
            if r.len() != d {
                return Err(Error::Dimension { expected: d, found: r.len() });
            }
        }
        out.push(Point::try_new(r).map_err(|_| Error::Input(format!("point {i} is not finite")))?);
    }
    Ok(out)
}

pub fn parse_polyline(text: &str) -> Result<PolyCurve> {
    let f: PolylineFile = serde_json::from_str(text).map_err(|e| Error::Input(e.to_string()))?;
    let pts = to_points(&f.vertices)?;
    match f.edges {
        Some(edges) => PolyCurve::new(pts, edges),
        None => PolyCurve::polyline(pts),
    }
}

/// One point per row; `#` starts a comment and a non-numeric first row is a header.
pub fn parse_point_cloud(text: &str) -> Result<Vec<Point>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(r) => rows.push(r),
            Err(_) if i == 0 => continue,
            Err(e) => return Err(Error::Input(format!("row {}: {e}", i + 1))),
        }
    }
    to_points(&rows)
}

/// Euclidean minimum spanning tree by Prim's algorithm, O(n²).
pub fn euclidean_mst(points: &[Point]) -> Vec<[usize; 2]> {
    let n = points.len();
    if n < 2 {
        return Vec::new();
    }
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    let mut from = vec![0usize; n];
    let mut edges = Vec::with_capacity(n - 1);
    let mut cur = 0;
    in_tree[0] = true;
    for _ in 1..n {
        let mut next = usize::MAX;
        for v in 0..n {
            if in_tree[v] {
                continue;
            }
            let d = points[cur].dist(&points[v]);
            if d < best[v] {
                best[v] = d;
                from[v] = cur;
            }
            if next == usize::MAX || best[v] < best[next] {
                next = v;
            }
        }
        in_tree[next] = true;
        edges.push([from[next], next]);
        cur = next;
    }
    edges
}

/// Connects a point cloud by its minimum spanning tree; repeated points are merged.
pub fn connect_cloud(points: &[Point]) -> Result<PolyCurve> {
    let mut seen = std::collections::HashSet::new();
    let pts: Vec<Point> = points.iter().copied().filter(|p| seen.insert(p.key())).collect();
    if pts.len() < 2 {
        return Err(Error::EmptyCurve);
    }
    let edges = euclidean_mst(&pts);
    PolyCurve::new(pts, edges)
}

pub fn load_input(spec: &InputSpec) -> Result<PolyCurve> {
    let text = std::fs::read_to_string(&spec.source)?;
    if text.trim().is_empty() {
        return Err(Error::EmptyCurve);
    }
    match spec.kind {
        InputKind::Polyline => parse_polyline(&text),
        InputKind::Pointcloud => connect_cloud(&parse_point_cloud(&text)?),
    }
}
