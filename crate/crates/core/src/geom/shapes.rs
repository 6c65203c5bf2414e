use serde::{Deserialize, Serialize};

use super::point::{Point, MAX_DIM};
use crate::error::{Error, Result};

/// Closed Euclidean ball.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Point,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Point, radius: f64) -> Ball {
        debug_assert!(radius >= 0.0);
        Ball { center, radius }
    }

    /// |B|, the diameter.
    pub fn diameter(&self) -> f64 {
        2.0 * self.radius
    }

    /// The concentric ball with diameter `m * |B|`.
    pub fn dilate(&self, m: f64) -> Ball {
        Ball { center: self.center, radius: self.radius * m }
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.center.dist2(p) <= self.radius * self.radius
    }

    pub fn contains_open(&self, p: &Point) -> bool {
        self.center.dist(p) < self.radius
    }

    pub fn contains_ball(&self, other: &Ball) -> bool {
        self.center.dist(&other.center) + other.radius <= self.radius
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Segment {
        Segment { a, b }
    }

    pub fn length(&self) -> f64 {
        self.a.dist(&self.b)
    }

    pub fn at(&self, t: f64) -> Point {
        self.a.lerp(&self.b, t)
    }

    pub fn midpoint(&self) -> Point {
        self.a.midpoint(&self.b)
    }

    /// Parameter in [0,1] of the point closest to `p`.
    pub fn closest_t(&self, p: &Point) -> f64 {
        let ab = self.b - self.a;
        let l2 = ab.norm2();
        if l2 == 0.0 {
            return 0.0;
        }
        ((*p - self.a).dot(&ab) / l2).clamp(0.0, 1.0)
    }

    pub fn dist2(&self, p: &Point) -> f64 {
        self.at(self.closest_t(p)).dist2(p)
    }

    pub fn dist(&self, p: &Point) -> f64 {
        self.dist2(p).sqrt()
    }

    /// Closest pair of parameters `(s, t)` between `self` and `o`, and their distance.
    pub fn closest_params(&self, o: &Segment) -> (f64, f64, f64) {
        let d1 = self.b - self.a;
        let d2 = o.b - o.a;
        let r = self.a - o.a;
        let a = d1.norm2();
        let e = d2.norm2();
        let f = d2.dot(&r);
        let (s, t);
        if a <= f64::MIN_POSITIVE && e <= f64::MIN_POSITIVE {
            return (0.0, 0.0, self.a.dist(&o.a));
        }
        if a <= f64::MIN_POSITIVE {
            s = 0.0;
            t = (f / e).clamp(0.0, 1.0);
        } else {
            let c = d1.dot(&r);
            if e <= f64::MIN_POSITIVE {
                t = 0.0;
                s = (-c / a).clamp(0.0, 1.0);
            } else {
                let b = d1.dot(&d2);
                let denom = a * e - b * b;
                let mut s0 = if denom > 1e-14 * a * e { ((b * f - c * e) / denom).clamp(0.0, 1.0) } else { 0.0 };
                let mut t0 = (b * s0 + f) / e;
                if t0 < 0.0 {
                    t0 = 0.0;
                    s0 = (-c / a).clamp(0.0, 1.0);
                } else if t0 > 1.0 {
                    t0 = 1.0;
                    s0 = ((b - c) / a).clamp(0.0, 1.0);
                }
                s = s0;
                t = t0;
            }
        }
        (s, t, self.at(s).dist(&o.at(t)))
    }

    pub fn dist_to_segment(&self, o: &Segment) -> f64 {
        self.closest_params(o).2
    }

    pub fn bounds(&self) -> Aabb {
        let mut bb = Aabb::point(self.a);
        bb.grow(&self.b);
        bb
    }
}

/// Infinite line with unit direction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub anchor: Point,
    pub direction: Point,
}

impl Line {
    /// Normalizes `direction`; falls back to the first axis for a zero vector.
    pub fn new(anchor: Point, direction: Point) -> Line {
        let direction = direction.normalized().unwrap_or_else(|| Point::axis(anchor.dim(), 0));
        Line { anchor, direction }
    }

    pub fn through(a: Point, b: Point) -> Line {
        Line::new(a, b - a)
    }

    /// Signed coordinate of the orthogonal projection of `p` along the line.
    pub fn coordinate(&self, p: &Point) -> f64 {
        (*p - self.anchor).dot(&self.direction)
    }

    pub fn project(&self, p: &Point) -> Point {
        self.anchor + self.direction * self.coordinate(p)
    }

    pub fn dist(&self, p: &Point) -> f64 {
        let v = *p - self.anchor;
        let t = v.dot(&self.direction);
        (v.norm2() - t * t).max(0.0).sqrt()
    }
}

/// Axis-aligned bounding box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Aabb {
    pub lo: [f64; MAX_DIM],
    pub hi: [f64; MAX_DIM],
}

impl Aabb {
    pub fn empty() -> Aabb {
        Aabb { lo: [f64::INFINITY; MAX_DIM], hi: [f64::NEG_INFINITY; MAX_DIM] }
    }

    pub fn point(p: Point) -> Aabb {
        Aabb { lo: *p.lanes(), hi: *p.lanes() }
    }

    pub fn grow(&mut self, p: &Point) {
        for i in 0..MAX_DIM {
            self.lo[i] = self.lo[i].min(p.get(i));
            self.hi[i] = self.hi[i].max(p.get(i));
        }
    }

    pub fn merge(&mut self, o: &Aabb) {
        for i in 0..MAX_DIM {
            self.lo[i] = self.lo[i].min(o.lo[i]);
            self.hi[i] = self.hi[i].max(o.hi[i]);
        }
    }

    pub fn padded(&self, r: f64) -> Aabb {
        let mut b = *self;
        for i in 0..MAX_DIM {
            b.lo[i] -= r;
            b.hi[i] += r;
        }
        b
    }

    pub fn dist2(&self, p: &Point) -> f64 {
        let mut s = 0.0;
        for i in 0..MAX_DIM {
            let v = p.get(i);
            let d = if v < self.lo[i] {
                self.lo[i] - v
            } else if v > self.hi[i] {
                v - self.hi[i]
            } else {
                0.0
            };
            s += d * d;
        }
        s
    }

    pub fn contains(&self, p: &Point) -> bool {
        (0..MAX_DIM).all(|i| p.get(i) >= self.lo[i] && p.get(i) <= self.hi[i])
    }

    pub fn overlaps(&self, o: &Aabb) -> bool {
        (0..MAX_DIM).all(|i| self.lo[i] <= o.hi[i] && o.lo[i] <= self.hi[i])
    }

    pub fn centroid(&self, i: usize) -> f64 {
        0.5 * (self.lo[i] + self.hi[i])
    }

    pub fn extent(&self, i: usize) -> f64 {
        self.hi[i] - self.lo[i]
    }
}

/// Ordered list of vertices joined by straight edges.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyPath {
    pub vertices: Vec<Point>,
}

impl PolyPath {
    /// Consecutive duplicates are removed; a single remaining point is kept
    /// twice so the path stays well-formed with zero length.
    pub fn new(vertices: Vec<Point>) -> Result<PolyPath> {
        if vertices.is_empty() {
            return Err(Error::Input("path needs at least one vertex".into()));
        }
        let mut out: Vec<Point> = Vec::with_capacity(vertices.len());
        for v in vertices {
            if out.last().is_none_or(|l| *l != v) {
                out.push(v);
            }
        }
        if out.len() == 1 {
            out.push(out[0]);
        }
        Ok(PolyPath { vertices: out })
    }

    pub fn length(&self) -> f64 {
        self.vertices.windows(2).map(|w| w[0].dist(&w[1])).fold(0.0, |a, b| a + b)
    }

    pub fn first(&self) -> Point {
        self.vertices[0]
    }

    pub fn last(&self) -> Point {
        *self.vertices.last().unwrap()
    }

    pub fn segments(&self) -> impl Iterator<Item = Segment> + '_ {
        self.vertices.windows(2).map(|w| Segment::new(w[0], w[1]))
    }

    pub fn reversed(&self) -> PolyPath {
        let mut v = self.vertices.clone();
        v.reverse();
        PolyPath { vertices: v }
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    /// Appends `other`, dropping its first vertex when it repeats our last.
    pub fn extend(&mut self, other: &PolyPath) {
        for v in &other.vertices {
            if self.vertices.last() != Some(v) {
                self.vertices.push(*v);
            }
        }
    }
}

/// A connected polygonal complex: vertices plus straight edges.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyCurve {
    vertices: Vec<Point>,
    edges: Vec<[usize; 2]>,
    length: f64,
}

impl PolyCurve {
    pub fn new(vertices: Vec<Point>, edges: Vec<[usize; 2]>) -> Result<PolyCurve> {
        if vertices.is_empty() || edges.is_empty() {
            return Err(Error::EmptyCurve);
        }
        let d = vertices[0].dim();
        for v in &vertices {
            if v.dim() != d {
                return Err(Error::Dimension { expected: d, found: v.dim() });
            }
        }
        let n = vertices.len();
        let mut dsu = Dsu::new(n);
        let mut used = vec![false; n];
        for e in &edges {
            if e[0] >= n || e[1] >= n {
                return Err(Error::Input(format!("edge {:?} references a missing vertex", e)));
            }
            dsu.union(e[0], e[1]);
            used[e[0]] = true;
            used[e[1]] = true;
        }
        let comps = (0..n).filter(|&i| dsu.find(i) == i).count();
        if comps != 1 {
            return Err(Error::Disconnected(comps));
        }
        let length = edges.iter().map(|e| vertices[e[0]].dist(&vertices[e[1]])).sum::<f64>();
        if length <= 0.0 {
            return Err(Error::EmptyCurve);
        }
        Ok(PolyCurve { vertices, edges, length })
    }

    /// Open polyline through `points` in order.
    pub fn polyline(points: Vec<Point>) -> Result<PolyCurve> {
        let edges = (1..points.len()).map(|i| [i - 1, i]).collect();
        PolyCurve::new(points, edges)
    }

    /// Closed polygon through `points`.
    pub fn polygon(points: Vec<Point>) -> Result<PolyCurve> {
        let n = points.len();
        let edges = (0..n).map(|i| [i, (i + 1) % n]).collect();
        PolyCurve::new(points, edges)
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].dim()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    /// ℋ¹, the sum of edge lengths.
    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn segment(&self, e: usize) -> Segment {
        let [a, b] = self.edges[e];
        Segment::new(self.vertices[a], self.vertices[b])
    }

    pub fn segments(&self) -> impl Iterator<Item = Segment> + '_ {
        (0..self.edges.len()).map(|e| self.segment(e))
    }

    /// |Γ|, the largest vertex-to-vertex distance.
    pub fn diameter(&self) -> f64 {
        let v = &self.vertices;
        let mut best = 0.0f64;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                best = best.max(v[i].dist2(&v[j]));
            }
        }
        best.sqrt()
    }

    pub fn min_edge_length(&self) -> f64 {
        self.segments().map(|s| s.length()).filter(|l| *l > 0.0).fold(f64::INFINITY, f64::min)
    }

    pub fn bounds(&self) -> Aabb {
        let mut bb = Aabb::empty();
        for v in &self.vertices {
            bb.grow(v);
        }
        bb
    }

    /// Brute-force distance from `p` to the curve.
    pub fn dist(&self, p: &Point) -> f64 {
        self.segments().map(|s| s.dist2(p)).fold(f64::INFINITY, f64::min).sqrt()
    }

    /// The image under `p -> p * s + shift`.
    pub fn transformed(&self, s: f64, shift: Point) -> PolyCurve {
        let vertices: Vec<Point> = self.vertices.iter().map(|p| *p * s + shift).collect();
        let length = self.edges.iter().map(|e| vertices[e[0]].dist(&vertices[e[1]])).sum();
        PolyCurve { vertices, edges: self.edges.clone(), length }
    }
}

/// Union-find with path halving.
#[derive(Clone, Debug)]
pub struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub fn new(n: usize) -> Dsu {
        Dsu { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}
