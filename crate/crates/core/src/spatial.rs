//! Spatial indexes: a bounding-volume hierarchy for points and segments, and a
//! uniform hash grid for fixed-radius queries.

use std::collections::HashMap;

use crate::geom::{Aabb, Point, PolyCurve, Segment, MAX_DIM};

pub trait Primitive {
    fn bounds(&self) -> Aabb;
    fn dist2_to(&self, p: &Point) -> f64;
}

impl Primitive for Point {
    fn bounds(&self) -> Aabb {
        Aabb::point(*self)
    }
    fn dist2_to(&self, p: &Point) -> f64 {
        self.dist2(p)
    }
}

impl Primitive for Segment {
    fn bounds(&self) -> Aabb {
        Segment::bounds(self)
    }
    fn dist2_to(&self, p: &Point) -> f64 {
        self.dist2(p)
    }
}

#[derive(Clone, Debug)]
struct Node {
    bounds: Aabb,
    start: u32,
    count: u32,
    right: u32,
}

const LEAF: usize = 4;

#[derive(Clone, Debug)]
pub struct Bvh<T> {
    items: Vec<T>,
    order: Vec<u32>,
    nodes: Vec<Node>,
}

impl<T: Primitive> Bvh<T> {
    pub fn new(items: Vec<T>) -> Bvh<T> {
        let boxes: Vec<Aabb> = items.iter().map(|t| t.bounds()).collect();
        let mut order: Vec<u32> = (0..items.len() as u32).collect();
        let mut nodes = Vec::with_capacity(2 * items.len() / LEAF + 1);
        if !items.is_empty() {
            build(&boxes, &mut order, 0, items.len(), &mut nodes);
        }
        Bvh { items, order, nodes }
    }

    pub fn items(&self) -> &[T] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Index and distance of the nearest item.
    pub fn nearest(&self, p: &Point) -> Option<(usize, f64)> {
        self.nearest_filtered(p, |_| true)
    }

    pub fn nearest_filtered(&self, p: &Point, keep: impl Fn(usize) -> bool) -> Option<(usize, f64)> {
        if self.nodes.is_empty() {
            return None;
        }
        let mut best = (usize::MAX, f64::INFINITY);
        let mut stack: Vec<(u32, f64)> = vec![(0, self.nodes[0].bounds.dist2(p))];
        while let Some((ni, bd)) = stack.pop() {
            if bd >= best.1 {
                continue;
            }
            let node = &self.nodes[ni as usize];
            if node.count > 0 {
                for k in node.start..node.start + node.count {
                    let idx = self.order[k as usize] as usize;
                    if !keep(idx) {
                        continue;
                    }
                    let d2 = self.items[idx].dist2_to(p);
                    if d2 < best.1 || (d2 == best.1 && idx < best.0) {
                        best = (idx, d2);
                    }
                }
            } else {
                let l = ni + 1;
                let r = node.right;
                let dl = self.nodes[l as usize].bounds.dist2(p);
                let dr = self.nodes[r as usize].bounds.dist2(p);
                if dl < dr {
                    stack.push((r, dr));
                    stack.push((l, dl));
                } else {
                    stack.push((l, dl));
                    stack.push((r, dr));
                }
            }
        }
        if best.0 == usize::MAX {
            None
        } else {
            Some((best.0, best.1.sqrt()))
        }
    }

    /// Indices of items within distance `r` (closed) of `p`, ascending.
    pub fn within(&self, p: &Point, r: f64) -> Vec<usize> {
        let mut out = Vec::new();
        self.visit_within(p, r, |i| out.push(i));
        out.sort_unstable();
        out
    }

    pub fn visit_within(&self, p: &Point, r: f64, mut f: impl FnMut(usize)) {
        if self.nodes.is_empty() {
            return;
        }
        let r2 = r * r;
        let mut stack = vec![0u32];
        while let Some(ni) = stack.pop() {
            let node = &self.nodes[ni as usize];
            if node.bounds.dist2(p) > r2 {
                continue;
            }
            if node.count > 0 {
                for k in node.start..node.start + node.count {
                    let idx = self.order[k as usize] as usize;
                    if self.items[idx].dist2_to(p) <= r2 {
                        f(idx);
                    }
                }
            } else {
                stack.push(node.right);
                stack.push(ni + 1);
            }
        }
    }

    pub fn any_within(&self, p: &Point, r: f64) -> bool {
        if self.nodes.is_empty() {
            return false;
        }
        let r2 = r * r;
        let mut stack = vec![0u32];
        while let Some(ni) = stack.pop() {
            let node = &self.nodes[ni as usize];
            if node.bounds.dist2(p) > r2 {
                continue;
            }
            if node.count > 0 {
                for k in node.start..node.start + node.count {
                    if self.items[self.order[k as usize] as usize].dist2_to(p) <= r2 {
                        return true;
                    }
                }
            } else {
                stack.push(node.right);
                stack.push(ni + 1);
            }
        }
        false
    }

    /// Indices of items whose bounding box overlaps `bb`, ascending.
    pub fn overlapping(&self, bb: &Aabb) -> Vec<usize> {
        let mut out = Vec::new();
        if self.nodes.is_empty() {
            return out;
        }
        let mut stack = vec![0u32];
        while let Some(ni) = stack.pop() {
            let node = &self.nodes[ni as usize];
            if !node.bounds.overlaps(bb) {
                continue;
            }
            if node.count > 0 {
                for k in node.start..node.start + node.count {
                    let idx = self.order[k as usize] as usize;
                    if self.items[idx].bounds().overlaps(bb) {
                        out.push(idx);
                    }
                }
            } else {
                stack.push(node.right);
                stack.push(ni + 1);
            }
        }
        out.sort_unstable();
        out
    }
}

fn build(boxes: &[Aabb], order: &mut [u32], start: usize, end: usize, nodes: &mut Vec<Node>) -> usize {
    let mut bounds = Aabb::empty();
    for &i in &order[start..end] {
        bounds.merge(&boxes[i as usize]);
    }
    let me = nodes.len();
    nodes.push(Node { bounds, start: start as u32, count: 0, right: 0 });
    if end - start <= LEAF {
        nodes[me].count = (end - start) as u32;
        return me;
    }
    let mut axis = 0;
    for i in 1..MAX_DIM {
        if bounds.extent(i) > bounds.extent(axis) {
            axis = i;
        }
    }
    let mid = (start + end) / 2;
    order[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
        boxes[a as usize].centroid(axis).total_cmp(&boxes[b as usize].centroid(axis)).then(a.cmp(&b))
    });
    build(boxes, order, start, mid, nodes);
    let right = build(boxes, order, mid, end, nodes);
    nodes[me].right = right as u32;
    me
}

/// Nearest-point and distance queries against a polygonal curve.
#[derive(Clone, Debug)]
pub struct CurveIndex {
    curve: PolyCurve,
    bvh: Bvh<Segment>,
    scale: f64,
}

/// Result of a nearest-point query on a curve.
#[derive(Clone, Copy, Debug)]
pub struct CurveHit {
    pub dist: f64,
    pub edge: usize,
    pub t: f64,
    pub point: Point,
}

impl CurveIndex {
    pub fn new(curve: &PolyCurve) -> CurveIndex {
        let segs: Vec<Segment> = curve.segments().collect();
        let scale = curve.diameter().max(curve.length() * 1e-6);
        CurveIndex { curve: curve.clone(), bvh: Bvh::new(segs), scale }
    }

    pub fn curve(&self) -> &PolyCurve {
        &self.curve
    }

    /// Size used for relative tolerances.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn dist(&self, p: &Point) -> f64 {
        self.bvh.nearest(p).map(|(_, d)| d).unwrap_or(f64::INFINITY)
    }

    pub fn nearest(&self, p: &Point) -> CurveHit {
        let (edge, dist) = self.bvh.nearest(p).expect("non-empty curve");
        let seg = self.curve.segment(edge);
        let t = seg.closest_t(p);
        CurveHit { dist, edge, t, point: seg.at(t) }
    }

    /// True when some point of the curve lies within `r` of `p`.
    pub fn within(&self, p: &Point, r: f64) -> bool {
        self.bvh.any_within(p, r)
    }

    /// Edges meeting the closed ball `B(p, r)`.
    pub fn edges_within(&self, p: &Point, r: f64) -> Vec<usize> {
        self.bvh.within(p, r)
    }

    /// Distance from a segment to the curve.
    pub fn segment_dist(&self, s: &Segment) -> f64 {
        let upper = self.dist(&s.a).min(self.dist(&s.b));
        let mut best = upper;
        for e in self.bvh.overlapping(&s.bounds().padded(upper)) {
            best = best.min(self.curve.segment(e).dist_to_segment(s));
        }
        best
    }
}

/// Uniform hash grid over points for fixed-radius queries.
#[derive(Clone, Debug)]
pub struct PointGrid {
    cell: f64,
    map: HashMap<[i64; MAX_DIM], Vec<u32>>,
    points: Vec<Point>,
}

impl PointGrid {
    pub fn new(cell: f64) -> PointGrid {
        assert!(cell > 0.0);
        PointGrid { cell, map: HashMap::new(), points: Vec::new() }
    }

    pub fn from_points(cell: f64, pts: &[Point]) -> PointGrid {
        let mut g = PointGrid::new(cell);
        for p in pts {
            g.insert(*p);
        }
        g
    }

    fn key(&self, p: &Point) -> [i64; MAX_DIM] {
        let mut k = [0i64; MAX_DIM];
        for i in 0..p.dim() {
            k[i] = (p.get(i) / self.cell).floor() as i64;
        }
        k
    }

    /// Inserts and returns the index of the new point.
    pub fn insert(&mut self, p: Point) -> usize {
        let idx = self.points.len();
        let k = self.key(&p);
        self.map.entry(k).or_default().push(idx as u32);
        self.points.push(p);
        idx
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Calls `f(index, dist2)` for each stored point within `r` (closed).
    pub fn visit_within(&self, p: &Point, r: f64, mut f: impl FnMut(usize, f64)) {
        if self.points.is_empty() {
            return;
        }
        let d = p.dim();
        let mut lo = [0i64; MAX_DIM];
        let mut hi = [0i64; MAX_DIM];
        for i in 0..d {
            lo[i] = ((p.get(i) - r) / self.cell).floor() as i64;
            hi[i] = ((p.get(i) + r) / self.cell).floor() as i64;
        }
        let r2 = r * r;
        let mut cur = lo;
        loop {
            if let Some(list) = self.map.get(&cur) {
                for &i in list {
                    let d2 = self.points[i as usize].dist2(p);
                    if d2 <= r2 {
                        f(i as usize, d2);
                    }
                }
            }
            // odometer increment over the cell box
            let mut axis = 0;
            loop {
                if axis == d {
                    return;
                }
                if cur[axis] < hi[axis] {
                    cur[axis] += 1;
                    break;
                }
                cur[axis] = lo[axis];
                axis += 1;
            }
        }
    }

    pub fn within(&self, p: &Point, r: f64) -> Vec<usize> {
        let mut out = Vec::new();
        self.visit_within(p, r, |i, _| out.push(i));
        out.sort_unstable();
        out
    }

    pub fn any_within_open(&self, p: &Point, r: f64) -> bool {
        let mut hit = false;
        self.visit_within(p, r, |_, d2| {
            if d2 < r * r {
                hit = true;
            }
        });
        hit
    }

    /// Nearest point within `r`, ties broken by lexicographic order.
    pub fn nearest_within(&self, p: &Point, r: f64) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        self.visit_within(p, r, |i, d2| {
            best = match best {
                None => Some((i, d2)),
                Some((j, e2)) => {
                    if d2 < e2 || (d2 == e2 && self.points[i].lex_cmp(&self.points[j]).is_lt()) {
                        Some((i, d2))
                    } else {
                        Some((j, e2))
                    }
                }
            };
        });
        best.map(|(i, d2)| (i, d2.sqrt()))
    }
}
