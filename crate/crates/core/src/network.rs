//! The augmented network Γ̃ = Γ ∪ bridges as a metric graph.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Point, PolyPath, Segment, MAX_DIM};
use crate::spatial::{Bvh, CurveIndex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeOrigin {
    Original,
    Bridge,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub a: u32,
    pub b: u32,
    pub len: f64,
    pub origin: EdgeOrigin,
    /// Bridge id for bridge edges.
    pub bridge: Option<u32>,
    pub alive: bool,
}

/// A point on the network: an edge and a parameter along it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Location {
    pub edge: u32,
    pub t: f64,
}

#[derive(Clone, Debug)]
pub struct Network {
    vertices: Vec<Point>,
    on_gamma: Vec<bool>,
    edges: Vec<Edge>,
    adj: Vec<Vec<u32>>,
    vkey: HashMap<[u64; MAX_DIM], u32>,
    ekey: HashMap<(u32, u32), u32>,
    /// Per original edge: sorted (t, vertex) split points, including both ends.
    splits: Vec<Vec<(f64, u32)>>,
    curve: Arc<CurveIndex>,
    locator: Option<Bvh<Segment>>,
    locator_ids: Vec<u32>,
}

/// Serialized form of the graph: all vertices, alive edges and Γ split lists.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphDump {
    pub vertices: Vec<Point>,
    pub on_gamma: Vec<bool>,
    pub edges: Vec<DumpEdge>,
    pub splits: Vec<Vec<(f64, u32)>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DumpEdge {
    pub a: u32,
    pub b: u32,
    pub origin: EdgeOrigin,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bridge: Option<u32>,
}

impl Network {
    pub fn new(curve: Arc<CurveIndex>) -> Network {
        let mut net = Network {
            vertices: Vec::new(),
            on_gamma: Vec::new(),
            edges: Vec::new(),
            adj: Vec::new(),
            vkey: HashMap::new(),
            ekey: HashMap::new(),
            splits: Vec::new(),
            curve: curve.clone(),
            locator: None,
            locator_ids: Vec::new(),
        };
        let c = curve.curve();
        let ids: Vec<u32> = c.vertices().iter().map(|p| net.vertex(*p)).collect();
        for &i in &ids {
            net.on_gamma[i as usize] = true;
        }
        for [a, b] in c.edges() {
            let (va, vb) = (ids[*a], ids[*b]);
            net.splits.push(vec![(0.0, va), (1.0, vb)]);
            net.add_edge(va, vb, EdgeOrigin::Original, None);
        }
        net
    }

    pub fn dump(&self) -> GraphDump {
        GraphDump {
            vertices: self.vertices.clone(),
            on_gamma: self.on_gamma.clone(),
            edges: self.alive_edges().map(|(_, e)| DumpEdge { a: e.a, b: e.b, origin: e.origin, bridge: e.bridge }).collect(),
            splits: self.splits.clone(),
        }
    }

    /// Rebuilds a network over `curve` from a dump, keeping vertex ids.
    pub fn from_dump(curve: Arc<CurveIndex>, d: &GraphDump) -> Result<Network> {
        let n = d.vertices.len();
        if d.on_gamma.len() != n || d.splits.len() != curve.curve().edges().len() {
            return Err(Error::Input("network dump does not match its curve".into()));
        }
        let mut net = Network {
            vertices: Vec::new(),
            on_gamma: Vec::new(),
            edges: Vec::new(),
            adj: Vec::new(),
            vkey: HashMap::new(),
            ekey: HashMap::new(),
            splits: d.splits.clone(),
            curve,
            locator: None,
            locator_ids: Vec::new(),
        };
        for (i, p) in d.vertices.iter().enumerate() {
            if net.vertex(*p) as usize != i {
                return Err(Error::Input(format!("duplicate vertex {i} in network dump")));
            }
        }
        net.on_gamma.clone_from(&d.on_gamma);
        for e in &d.edges {
            if e.a as usize >= n || e.b as usize >= n {
                return Err(Error::Input(format!("edge ({}, {}) references a missing vertex", e.a, e.b)));
            }
            if net.add_edge(e.a, e.b, e.origin, e.bridge).is_none() {
                return Err(Error::Input(format!("duplicate or loop edge ({}, {})", e.a, e.b)));
            }
        }
        if d.splits.iter().flatten().any(|(_, v)| *v as usize >= n) {
            return Err(Error::Input("split list references a missing vertex".into()));
        }
        net.build_locator();
        Ok(net)
    }

    pub fn curve(&self) -> &Arc<CurveIndex> {
        &self.curve
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_on_gamma(&self, v: u32) -> bool {
        self.on_gamma[v as usize]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn alive_edges(&self) -> impl Iterator<Item = (u32, &Edge)> {
        self.edges.iter().enumerate().filter(|(_, e)| e.alive).map(|(i, e)| (i as u32, e))
    }

    pub fn segment(&self, e: u32) -> Segment {
        let ed = &self.edges[e as usize];
        Segment::new(self.vertices[ed.a as usize], self.vertices[ed.b as usize])
    }

    pub fn neighbors(&self, v: u32) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.adj[v as usize].iter().map(move |&e| {
            let ed = &self.edges[e as usize];
            (if ed.a == v { ed.b } else { ed.a }, ed.len)
        })
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    /// Vertex at `p`, created if absent.
    pub fn vertex(&mut self, p: Point) -> u32 {
        if let Some(&v) = self.vkey.get(&p.key()) {
            return v;
        }
        let v = self.vertices.len() as u32;
        self.vertices.push(p);
        self.on_gamma.push(false);
        self.adj.push(Vec::new());
        self.vkey.insert(p.key(), v);
        v
    }

    pub fn find_vertex(&self, p: &Point) -> Option<u32> {
        self.vkey.get(&p.key()).copied()
    }

    pub fn edge_between(&self, a: u32, b: u32) -> Option<u32> {
        self.ekey.get(&(a.min(b), a.max(b))).copied()
    }

    /// Adds an edge unless it is a loop or already present.
    pub fn add_edge(&mut self, a: u32, b: u32, origin: EdgeOrigin, bridge: Option<u32>) -> Option<u32> {
        if a == b || self.edge_between(a, b).is_some() {
            return None;
        }
        let id = self.edges.len() as u32;
        let len = self.vertices[a as usize].dist(&self.vertices[b as usize]);
        self.edges.push(Edge { a, b, len, origin, bridge, alive: true });
        self.adj[a as usize].push(id);
        self.adj[b as usize].push(id);
        self.ekey.insert((a.min(b), a.max(b)), id);
        self.locator = None;
        Some(id)
    }

    fn kill_edge(&mut self, id: u32) {
        let (a, b) = (self.edges[id as usize].a, self.edges[id as usize].b);
        self.edges[id as usize].alive = false;
        self.adj[a as usize].retain(|&e| e != id);
        self.adj[b as usize].retain(|&e| e != id);
        self.ekey.remove(&(a.min(b), a.max(b)));
        self.locator = None;
    }

    /// Splits edge `id` at the interior point `p`, returning the new vertex.
    pub fn split_edge(&mut self, id: u32, p: Point) -> u32 {
        let ed = self.edges[id as usize].clone();
        let v = self.vertex(p);
        if v == ed.a || v == ed.b {
            return v;
        }
        self.kill_edge(id);
        self.add_edge(ed.a, v, ed.origin, ed.bridge);
        self.add_edge(v, ed.b, ed.origin, ed.bridge);
        v
    }

    /// Current sub-edge of original edge `e` containing parameter `t`, with the
    /// parameters of its ends.
    fn gamma_subedge(&self, e: usize, t: f64) -> (u32, u32, f64, f64) {
        let s = &self.splits[e];
        let i = s.partition_point(|(ts, _)| *ts <= t).clamp(1, s.len() - 1);
        (s[i - 1].1, s[i].1, s[i - 1].0, s[i].0)
    }

    /// Vertex at parameter `t` of original edge `e`, splitting as needed.
    pub fn gamma_vertex(&mut self, e: usize, t: f64) -> u32 {
        let seg = self.curve.curve().segment(e);
        let p = if t <= 0.0 { seg.a } else if t >= 1.0 { seg.b } else { seg.at(t) };
        if let Some(v) = self.find_vertex(&p) {
            if self.splits[e].iter().any(|(_, w)| *w == v) {
                return v;
            }
        }
        let (u, w, _, _) = self.gamma_subedge(e, t);
        let v = self.vertex(p);
        self.on_gamma[v as usize] = true;
        if v != u && v != w {
            if let Some(id) = self.edge_between(u, w) {
                self.kill_edge(id);
            }
            self.add_edge(u, v, EdgeOrigin::Original, None);
            self.add_edge(v, w, EdgeOrigin::Original, None);
        }
        let pos = self.splits[e].partition_point(|(ts, _)| *ts < t);
        self.splits[e].insert(pos, (t, v));
        v
    }

    /// Location of the curve point at parameter `t` on original edge `e`.
    pub fn gamma_location(&self, e: usize, t: f64) -> Location {
        let (u, w, tu, tw) = self.gamma_subedge(e, t);
        let id = self.edge_between(u, w).expect("sub-edge exists");
        let local = if tw > tu { ((t - tu) / (tw - tu)).clamp(0.0, 1.0) } else { 0.0 };
        let ed = &self.edges[id as usize];
        let local = if ed.a == u { local } else { 1.0 - local };
        Location { edge: id, t: local }
    }

    /// Adds a polygonal bridge; its endpoints must already be vertices or are created.
    pub fn add_path(&mut self, path: &PolyPath, bridge: u32) {
        let ids: Vec<u32> = path.vertices.iter().map(|p| self.vertex(*p)).collect();
        for w in ids.windows(2) {
            self.add_edge(w[0], w[1], EdgeOrigin::Bridge, Some(bridge));
        }
    }

    /// Splits bridge edges at mutual crossings and collinear overlaps.
    pub fn resolve_crossings(&mut self) -> usize {
        let tol = 1e-12 * self.curve.scale();
        let mut splits = 0;
        for _ in 0..CROSSING_PASSES {
            let ids: Vec<u32> = self.alive_edges().filter(|(_, e)| e.origin == EdgeOrigin::Bridge).map(|(i, _)| i).collect();
            let segs: Vec<Segment> = ids.iter().map(|&i| self.segment(i)).collect();
            let bvh = Bvh::new(segs.clone());
            let mut cuts: Vec<Vec<Point>> = vec![Vec::new(); ids.len()];
            let mut found = 0;
            for (k, s) in segs.iter().enumerate() {
                for j in bvh.overlapping(&s.bounds().padded(tol)) {
                    if j <= k {
                        continue;
                    }
                    let (ea, eb) = (&self.edges[ids[k] as usize], &self.edges[ids[j] as usize]);
                    let t = &segs[j];
                    if s.length() <= tol || t.length() <= tol {
                        continue;
                    }
                    let (sa, tb, d) = s.closest_params(t);
                    if d > tol {
                        continue;
                    }
                    let shared = [ea.a, ea.b].iter().any(|v| *v == eb.a || *v == eb.b);
                    let at_end_s = sa <= 1e-12 || sa >= 1.0 - 1e-12;
                    let at_end_t = tb <= 1e-12 || tb >= 1.0 - 1e-12;
                    // endpoints of one edge lying inside the other
                    let (in_s, in_t) = (interior_ends(s, t, tol), interior_ends(t, s, tol));
                    if !in_s.is_empty() || !in_t.is_empty() {
                        cuts[k].extend(in_s);
                        cuts[j].extend(in_t);
                    } else if at_end_s && at_end_t {
                        if shared {
                            continue;
                        }
                        // touching endpoints that are distinct vertices: merge onto one
                        cuts[j].push(if sa < 0.5 { s.a } else { s.b });
                    } else {
                        let p = s.at(sa);
                        let q = [s.a, s.b, t.a, t.b].into_iter().find(|e| e.dist(&p) <= tol).unwrap_or(p);
                        cuts[k].push(q);
                        cuts[j].push(q);
                    }
                    found += 1;
                }
            }
            if found == 0 {
                break;
            }
            splits += found;
            for (k, mut pts) in cuts.into_iter().enumerate() {
                if pts.is_empty() {
                    continue;
                }
                let s = &segs[k];
                pts.sort_by(|p, q| s.closest_t(p).total_cmp(&s.closest_t(q)).then(p.lex_cmp(q)));
                pts.dedup_by_key(|p| p.key());
                let mut cur = ids[k];
                for p in pts {
                    let ed = self.edges[cur as usize].clone();
                    let v = self.split_edge(cur, p);
                    if v == ed.a || v == ed.b {
                        continue;
                    }
                    match self.edge_between(v, ed.b) {
                        Some(e) => cur = e,
                        None => break,
                    }
                }
            }
        }
        splits
    }

    /// Total length of alive edges, split by origin.
    pub fn lengths(&self) -> (f64, f64) {
        let mut g = 0.0;
        let mut b = 0.0;
        for (_, e) in self.alive_edges() {
            match e.origin {
                EdgeOrigin::Original => g += e.len,
                EdgeOrigin::Bridge => b += e.len,
            }
        }
        (g, b)
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        let mut seen = vec![false; n];
        let start = match (0..n).find(|&v| !self.adj[v].is_empty()) {
            Some(s) => s,
            None => return n <= 1,
        };
        let mut stack = vec![start as u32];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            for (w, _) in self.neighbors(v) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    stack.push(w);
                }
            }
        }
        (0..n).all(|v| seen[v] || self.adj[v].is_empty())
    }

    /// Builds the edge locator used by [`Network::locate`].
    pub fn build_locator(&mut self) {
        let ids: Vec<u32> = self.alive_edges().map(|(i, _)| i).collect();
        let segs = ids.iter().map(|&i| self.segment(i)).collect();
        self.locator = Some(Bvh::new(segs));
        self.locator_ids = ids;
    }

    /// Nearest network location to `p` and its distance.
    pub fn locate(&self, p: &Point) -> Result<(Location, f64)> {
        let bvh = self.locator.as_ref().expect("call build_locator first");
        let (i, d) = bvh.nearest(p).ok_or(Error::NetworkDisconnected)?;
        let edge = self.locator_ids[i];
        let t = self.segment(edge).closest_t(p);
        Ok((Location { edge, t }, d))
    }

    pub fn point_at(&self, loc: &Location) -> Point {
        self.segment(loc.edge).at(loc.t)
    }

    /// Alive edge ids within `r` of `p` (requires the locator).
    pub fn edges_near(&self, p: &Point, r: f64) -> Vec<u32> {
        let bvh = self.locator.as_ref().expect("call build_locator first");
        bvh.within(p, r).into_iter().map(|i| self.locator_ids[i]).collect()
    }

    /// Shortest network distance between two locations, or `None` beyond `cutoff`.
    pub fn distance(&self, ws: &mut Workspace, p: &Location, q: &Location, cutoff: f64) -> Option<f64> {
        self.route(ws, p, q, cutoff, false).map(|(d, _)| d)
    }

    /// Shortest path between two locations as a polyline.
    pub fn shortest_path(&self, ws: &mut Workspace, p: &Location, q: &Location) -> Result<(f64, PolyPath)> {
        let (d, path) = self.route(ws, p, q, f64::INFINITY, true).ok_or(Error::NetworkDisconnected)?;
        Ok((d, path.expect("path requested")))
    }

    fn route(&self, ws: &mut Workspace, p: &Location, q: &Location, cutoff: f64, want_path: bool) -> Option<(f64, Option<PolyPath>)> {
        ws.reset(self.vertices.len());
        let pe = &self.edges[p.edge as usize];
        let qe = &self.edges[q.edge as usize];
        let pp = self.point_at(p);
        let qp = self.point_at(q);
        let mut best = f64::INFINITY;
        let mut direct = false;
        if p.edge == q.edge {
            best = (p.t - q.t).abs() * pe.len;
            direct = true;
        }
        ws.relax(pe.a, p.t * pe.len, u32::MAX);
        ws.relax(pe.b, (1.0 - p.t) * pe.len, u32::MAX);
        let mut best_end: Option<u32> = None;
        while let Some(State { d, v }) = ws.heap.pop() {
            if d > ws.dist[v as usize] {
                continue;
            }
            if d >= best || d > cutoff {
                break;
            }
            for (end, off) in [(qe.a, q.t * qe.len), (qe.b, (1.0 - q.t) * qe.len)] {
                if v == end && d + off < best {
                    best = d + off;
                    best_end = Some(v);
                    direct = false;
                }
            }
            for &e in &self.adj[v as usize] {
                let ed = &self.edges[e as usize];
                let w = if ed.a == v { ed.b } else { ed.a };
                ws.relax(w, d + ed.len, v);
            }
        }
        if best > cutoff || !best.is_finite() {
            return None;
        }
        let path = if want_path {
            let mut pts = vec![qp];
            if !direct {
                let mut v = best_end.unwrap();
                loop {
                    pts.push(self.vertices[v as usize]);
                    let pv = ws.prev[v as usize];
                    if pv == u32::MAX {
                        break;
                    }
                    v = pv;
                }
            }
            pts.push(pp);
            pts.reverse();
            Some(PolyPath::new(pts).unwrap())
        } else {
            None
        };
        Some((best, path))
    }

    /// Distances from a location to every vertex reached within `cutoff`.
    pub fn distances_from(&self, ws: &mut Workspace, p: &Location, cutoff: f64) -> Vec<(u32, f64)> {
        ws.reset(self.vertices.len());
        let pe = &self.edges[p.edge as usize];
        ws.relax(pe.a, p.t * pe.len, u32::MAX);
        ws.relax(pe.b, (1.0 - p.t) * pe.len, u32::MAX);
        let mut out = Vec::new();
        while let Some(State { d, v }) = ws.heap.pop() {
            if d > ws.dist[v as usize] {
                continue;
            }
            if d > cutoff {
                break;
            }
            out.push((v, d));
            for &e in &self.adj[v as usize] {
                let ed = &self.edges[e as usize];
                let w = if ed.a == v { ed.b } else { ed.a };
                ws.relax(w, d + ed.len, v);
            }
        }
        out
    }

    /// Shortest path from a location to Γ, ending at the first Γ vertex reached.
    pub fn path_to_gamma(&self, ws: &mut Workspace, p: &Location) -> Result<(f64, PolyPath)> {
        let pp = self.point_at(p);
        let pe = &self.edges[p.edge as usize];
        if pe.origin == EdgeOrigin::Original {
            return Ok((0.0, PolyPath::new(vec![pp])?));
        }
        ws.reset(self.vertices.len());
        ws.relax(pe.a, p.t * pe.len, u32::MAX);
        ws.relax(pe.b, (1.0 - p.t) * pe.len, u32::MAX);
        while let Some(State { d, v }) = ws.heap.pop() {
            if d > ws.dist[v as usize] {
                continue;
            }
            if self.on_gamma[v as usize] {
                let mut pts = vec![];
                let mut u = v;
                loop {
                    pts.push(self.vertices[u as usize]);
                    let pu = ws.prev[u as usize];
                    if pu == u32::MAX {
                        break;
                    }
                    u = pu;
                }
                pts.push(pp);
                pts.reverse();
                return Ok((d, PolyPath::new(pts)?));
            }
            for &e in &self.adj[v as usize] {
                let ed = &self.edges[e as usize];
                let w = if ed.a == v { ed.b } else { ed.a };
                ws.relax(w, d + ed.len, v);
            }
        }
        Err(Error::NetworkDisconnected)
    }

    /// Location of an existing vertex.
    pub fn vertex_location(&self, v: u32) -> Option<Location> {
        let e = *self.adj[v as usize].first()?;
        let ed = &self.edges[e as usize];
        Some(Location { edge: e, t: if ed.a == v { 0.0 } else { 1.0 } })
    }

    /// Original-edge parameter lists (for serialization).
    pub fn gamma_splits(&self) -> &[Vec<(f64, u32)>] {
        &self.splits
    }
}

/// A point where two collinear overlapping segments must be split.
/// Upper bound on batched crossing passes.
const CROSSING_PASSES: usize = 64;

/// Endpoints of `t` within `tol` of the interior of `s`.
fn interior_ends(s: &Segment, t: &Segment, tol: f64) -> Vec<Point> {
    [t.a, t.b]
        .into_iter()
        .filter(|p| {
            let u = s.closest_t(p);
            u > 1e-12 && u < 1.0 - 1e-12 && s.dist(p) <= tol
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct State {
    d: f64,
    v: u32,
}

impl Eq for State {}

impl Ord for State {
    fn cmp(&self, o: &Self) -> Ordering {
        o.d.total_cmp(&self.d).then_with(|| o.v.cmp(&self.v))
    }
}

impl PartialOrd for State {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Reusable Dijkstra buffers.
#[derive(Clone, Debug, Default)]
pub struct Workspace {
    dist: Vec<f64>,
    prev: Vec<u32>,
    touched: Vec<u32>,
    heap: BinaryHeap<State>,
}

impl Workspace {
    pub fn new() -> Workspace {
        Workspace::default()
    }

    fn reset(&mut self, n: usize) {
        if self.dist.len() < n {
            self.dist.resize(n, f64::INFINITY);
            self.prev.resize(n, u32::MAX);
        }
        for &v in &self.touched {
            self.dist[v as usize] = f64::INFINITY;
            self.prev[v as usize] = u32::MAX;
        }
        self.touched.clear();
        self.heap.clear();
    }

    fn relax(&mut self, v: u32, d: f64, from: u32) {
        let i = v as usize;
        if d < self.dist[i] {
            if self.dist[i].is_infinite() {
                self.touched.push(v);
            }
            self.dist[i] = d;
            self.prev[i] = from;
            self.heap.push(State { d, v });
        }
    }
}
