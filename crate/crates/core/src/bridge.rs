//! Bridges: Flat-Bad apex bridges, Non-Flat pair bridges, and path straightening.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::beta::{clip_segment, BetaEngine};
use crate::classify::Classification;
use crate::config::Config;
use crate::cubes::{CubeClass, CubeTree, NodeId};
use crate::error::{Error, Result};
use crate::geom::{cone_leg_ok, cone_pointwise, detour_waypoint, in_r_rho, Ball, Point, PolyPath, Segment};
use crate::nets::{NetHierarchy, NetPoint, WhitneyNet};
use crate::network::{Network, Workspace};
use crate::spatial::{Bvh, CurveIndex};

/// Cap on R_λ repairs per straightened path.
pub const REPAIR_CAP: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    FlatBad { cube: NodeId },
    NonFlat { level: usize, xi1: usize, xi2: usize, exception: bool },
}

/// A point of Γ given by an edge and parameter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Anchor {
    pub edge: usize,
    pub t: f64,
    pub point: Point,
}

impl Anchor {
    /// Canonical anchor at parameter `t` of edge `e`.
    pub fn on_edge(curve: &CurveIndex, edge: usize, t: f64) -> Anchor {
        let s = curve.curve().segment(edge);
        let point = if t <= 0.0 {
            s.a
        } else if t >= 1.0 {
            s.b
        } else {
            s.at(t)
        };
        Anchor { edge, t: t.clamp(0.0, 1.0), point }
    }

    pub fn nearest(curve: &CurveIndex, p: &Point) -> Anchor {
        let h = curve.nearest(p);
        Anchor::on_edge(curve, h.edge, h.t)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bridge {
    pub id: u32,
    pub provenance: Provenance,
    pub apex: Point,
    pub anchors: Vec<Anchor>,
    /// Anchor-to-anchor (Non-Flat) or apex-to-anchor (Flat-Bad) polyline.
    pub path: PolyPath,
    /// Net level of each path vertex; `None` at anchors.
    pub levels: Vec<Option<usize>>,
    /// Length of the raw one- or two-segment legs before straightening.
    pub raw_length: f64,
    pub repairs: usize,
}

impl Bridge {
    pub fn length(&self) -> f64 {
        self.path.length()
    }

    /// Indices of edges touching an anchor.
    pub fn is_terminal_edge(&self, i: usize) -> bool {
        self.levels[i].is_none() || self.levels[i + 1].is_none()
    }
}

/// A straightened leg from a net point to an anchor.
#[derive(Clone, Debug, PartialEq)]
pub struct Leg {
    pub vertices: Vec<NetPoint>,
    pub anchor: Point,
    pub repairs: usize,
    pub raw_length: f64,
}

impl Leg {
    pub fn points(&self) -> Vec<Point> {
        self.vertices.iter().map(|v| v.p).chain(std::iter::once(self.anchor)).collect()
    }

    pub fn levels(&self) -> Vec<Option<usize>> {
        self.vertices.iter().map(|v| Some(v.level)).chain(std::iter::once(None)).collect()
    }

    pub fn length(&self) -> f64 {
        let p = self.points();
        p.windows(2).map(|w| w[0].dist(&w[1])).fold(0.0, |a, b| a + b)
    }
}

/// Replaces a raw path from a net point to an anchor by a chain of net points
/// satisfying the level, R_λ-emptiness and length-band conditions.
///
/// The chain follows the raw path at half the local pitch, snapping to the
/// nearest net point; loops are cut, then edges with a net point in R_λ are
/// split at the point nearest their midpoint. The final edge reaches the anchor
/// from the finest level.
pub fn straighten_path(raw: &PolyPath, net: &WhitneyNet, lambda: f64) -> Result<Leg> {
    let curve = net.curve();
    let start = raw.first();
    let anchor = raw.last();
    let start_level = net.level_of(&start).ok_or(Error::Input("straightening must start at a net point".into()))?;
    let stop = 2f64.powi(-(net.k_max() as i32) - 1);
    let mut chain: Vec<NetPoint> = vec![NetPoint { p: start, level: start_level }];
    'walk: for seg in raw.segments() {
        let len = seg.length();
        let mut s = 0.0;
        while s <= len {
            let q = seg.at(if len > 0.0 { s / len } else { 0.0 });
            let dq = curve.dist(&q);
            if dq < stop {
                break 'walk;
            }
            let j = net.level_of_distance(dq).unwrap_or(0);
            let h = net.pitch(j);
            let lo = j.saturating_sub(1);
            let hi = (j + 1).min(net.k_max());
            if let Some(np) = net.nearest(&q, lo..=hi, 2.0 * h) {
                if let Some(pos) = chain.iter().position(|c| c.p == np.p) {
                    chain.truncate(pos + 1);
                } else {
                    chain.push(np);
                }
            }
            s += h / 2.0;
        }
    }
    let mut repairs = 0;
    let mut i = 0;
    while i + 1 < chain.len() {
        let (x, y) = (chain[i].p, chain[i + 1].p);
        match repair_point(net, &x, &y, lambda)? {
            Some(w) => {
                repairs += 1;
                if repairs > REPAIR_CAP {
                    return Err(Error::StraighteningDiverged(repairs));
                }
                chain.insert(i + 1, w);
            }
            None => i += 1,
        }
    }
    Ok(Leg { vertices: chain, anchor, repairs, raw_length: raw.length() })
}

/// The net point of R_λ(x,y) other than x, y that is nearest the midpoint.
pub fn repair_point(net: &WhitneyNet, x: &Point, y: &Point, lambda: f64) -> Result<Option<NetPoint>> {
    let mid = x.midpoint(y);
    let r = (1.0 + lambda) / 2.0 * x.dist(y);
    let mut best: Option<(f64, NetPoint)> = None;
    for w in net.points_in_ball_all(&Ball::new(mid, r)) {
        if w.p == *x || w.p == *y || !in_r_rho(&w.p, x, y, lambda)? {
            continue;
        }
        let d = w.p.dist2(&mid);
        if best.is_none_or(|(bd, bp)| d < bd || (d == bd && w.p.lex_cmp(&bp.p).is_lt())) {
            best = Some((d, w));
        }
    }
    Ok(best.map(|b| b.1))
}

/// Audit counts for one bridge.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BridgeAudit {
    pub edges: usize,
    pub terminal_edges: usize,
    pub level_jumps: usize,
    pub r_lambda: usize,
    pub length_band: usize,
    pub off_net: usize,
    pub cone: usize,
}

impl BridgeAudit {
    pub fn merge(&mut self, o: &BridgeAudit) {
        self.edges += o.edges;
        self.terminal_edges += o.terminal_edges;
        self.level_jumps += o.level_jumps;
        self.r_lambda += o.r_lambda;
        self.length_band += o.length_band;
        self.off_net += o.off_net;
        self.cone += o.cone;
    }

    pub fn violations(&self) -> usize {
        self.level_jumps + self.r_lambda + self.length_band + self.off_net + self.cone
    }
}

/// Checks every non-terminal edge for level adjacency, R_λ-emptiness and the
/// [1/2, 10]·2^{-j-k0} length band, every vertex for net membership, and the
/// path for containment in the doubled cone of its anchors.
pub fn audit_bridge(b: &Bridge, net: &WhitneyNet, cfg: &Config) -> Result<BridgeAudit> {
    let mut a = BridgeAudit::default();
    let pts = &b.path.vertices;
    for (p, l) in pts.iter().zip(&b.levels) {
        if let Some(l) = l {
            if net.level_of(p) != Some(*l) {
                a.off_net += 1;
            }
        }
    }
    for i in 0..pts.len() - 1 {
        a.edges += 1;
        if b.is_terminal_edge(i) {
            a.terminal_edges += 1;
            continue;
        }
        let (lx, ly) = (b.levels[i].unwrap(), b.levels[i + 1].unwrap());
        if lx.abs_diff(ly) > 1 {
            a.level_jumps += 1;
        }
        if repair_point(net, &pts[i], &pts[i + 1], cfg.lambda)?.is_some() {
            a.r_lambda += 1;
        }
        let len = pts[i].dist(&pts[i + 1]);
        for l in [lx, ly] {
            let h = net.pitch(l);
            if !(len >= 0.5 * h && len <= 10.0 * h) {
                a.length_band += 1;
                break;
            }
        }
    }
    let cone_factor = match b.provenance {
        Provenance::FlatBad { .. } => 2.0 * cfg.alpha,
        Provenance::NonFlat { .. } => 2.0 * cfg.c * cfg.alpha,
    };
    a.cone = cone_violations(b, net.curve(), cone_factor);
    Ok(a)
}

/// Off-anchor sample points of the path outside the cone of the anchor its leg ends at.
fn cone_violations(b: &Bridge, curve: &CurveIndex, alpha: f64) -> usize {
    let pts = &b.path.vertices;
    let mut bad = 0;
    // split into legs at anchors: each vertex belongs to the leg of the nearer anchor along the path
    let n = pts.len();
    let apex_idx = pts.iter().position(|p| *p == b.apex).unwrap_or(0);
    for i in 0..n - 1 {
        let anchor = if i < apex_idx { pts[0] } else { pts[n - 1] };
        let (s, e) = (pts[i], pts[i + 1]);
        for k in 0..8 {
            let q = s.lerp(&e, k as f64 / 8.0);
            if q == anchor {
                continue;
            }
            if !cone_pointwise(&q, &anchor, alpha, curve) {
                bad += 1;
                break;
            }
        }
    }
    bad
}

/// Closest point to `z` of Γ ∩ B(center, r), if any.
pub fn closest_in_ball(curve: &CurveIndex, center: &Point, r: f64, z: &Point) -> Option<Anchor> {
    let ball = Ball::new(*center, r);
    let mut best: Option<(f64, Anchor)> = None;
    for e in curve.edges_within(center, r) {
        let seg = curve.curve().segment(e);
        let Some(piece) = clip_segment(&seg, &ball) else { continue };
        let q = piece.at(piece.closest_t(z));
        let t = seg.closest_t(&q);
        let a = Anchor::on_edge(curve, e, t);
        let d = a.point.dist(z);
        if best.as_ref().is_none_or(|(bd, ba)| d < *bd || (d == *bd && (e, t) < (ba.edge, ba.t))) {
            best = Some((d, a));
        }
    }
    best.map(|b| b.1)
}

/// Raw one- or two-segment path from `z` to `xi` inside C_α(ξ), if one is found.
pub fn raw_leg(z: &Point, xi: &Point, alpha: f64, curve: &CurveIndex) -> Option<PolyPath> {
    if !cone_pointwise(z, xi, alpha, curve) {
        return None;
    }
    if cone_leg_ok(z, xi, alpha, curve) {
        return PolyPath::new(vec![*z, *xi]).ok();
    }
    let w = detour_waypoint(z, xi, alpha, curve)?;
    PolyPath::new(vec![*z, w, *xi]).ok()
}

/// Outcome counters for bridge construction.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BridgeStats {
    pub flatbad_cubes: usize,
    pub flatbad_bridges: usize,
    /// Flat-Bad cubes whose apex came from the next finer level.
    pub flatbad_widened: usize,
    /// Anchors dropped by the per-cube cap.
    pub flatbad_capped: usize,
    pub nonflat_balls: usize,
    pub nonflat_pairs: usize,
    pub nonflat_redundant: usize,
    pub nonflat_bridges: usize,
    pub nonflat_exceptions: usize,
    /// (C1) pairs for which no triple was found.
    pub nonflat_unmatched: usize,
    /// Bridges abandoned after a construction failure.
    pub skips: usize,
    pub skip_reasons: Vec<String>,
    pub repairs: usize,
}

/// Builds the straightened bridges for one Flat-Bad cube.
pub fn build_flatbad_bridge(
    tree: &CubeTree,
    q: NodeId,
    nets: &NetHierarchy,
    net: &WhitneyNet,
    cfg: &Config,
    stats: &mut BridgeStats,
    next_id: &mut u32,
) -> Result<Vec<Bridge>> {
    let node = tree.node(q);
    if node.class != CubeClass::FlatBad {
        return Err(Error::NotFlatBad(q));
    }
    let curve = net.curve();
    let s = tree.scale_exp(node.level);
    let x = node.center;
    let r = tree.scale(node.level);
    let mut apex = None;
    for lvl in [s, s + 1] {
        if lvl > net.k_max() {
            break;
        }
        apex = nearest_in_shells(net, &x, lvl, 2.0 * r);
        if apex.is_some() {
            if lvl != s {
                stats.flatbad_widened += 1;
            }
            break;
        }
    }
    let Some(z) = apex else {
        stats.skips += 1;
        stats.skip_reasons.push(format!("flat-bad cube {q}: no apex"));
        return Ok(Vec::new());
    };
    let mut xis: Vec<(f64, Point)> = nets.near(s, &x, 2.0 * r).into_iter().map(|i| nets.point(s, i)).map(|p| (p.dist(&x), p)).collect();
    xis.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.lex_cmp(&b.1)));
    if xis.len() > cfg.flatbad_anchor_cap {
        stats.flatbad_capped += xis.len() - cfg.flatbad_anchor_cap;
        xis.truncate(cfg.flatbad_anchor_cap);
    }
    let reach = cfg.m * cfg.eps * 2.0 * r;
    let mut out = Vec::new();
    for (_, xi) in xis {
        let mut cands = anchor_candidates(curve, &xi, reach, &z.p);
        cands.retain(|a| a.point != z.p);
        let mut built = false;
        for a in cands {
            let Some(raw) = raw_leg(&z.p, &a.point, cfg.alpha, curve) else { continue };
            let leg = straighten_path(&raw, net, cfg.lambda)?;
            if !leg_clears(&leg, curve) {
                continue;
            }
            stats.repairs += leg.repairs;
            let path = PolyPath { vertices: leg.points() };
            out.push(Bridge {
                id: *next_id,
                provenance: Provenance::FlatBad { cube: q },
                apex: z.p,
                anchors: vec![a],
                levels: leg.levels(),
                raw_length: leg.raw_length,
                repairs: leg.repairs,
                path,
            });
            *next_id += 1;
            built = true;
            break;
        }
        if !built {
            stats.skips += 1;
            stats.skip_reasons.push(format!("flat-bad cube {q}: no admissible anchor near {xi:?}"));
        }
    }
    stats.flatbad_bridges += out.len();
    Ok(out)
}

/// Point of 𝒩_lvl in B(x, r_max) nearest x, searched in growing shells.
fn nearest_in_shells(net: &WhitneyNet, x: &Point, lvl: usize, r_max: f64) -> Option<NetPoint> {
    let h = net.pitch(lvl);
    let mut r = (net.curve().dist(x) + 2f64.powi(-(lvl as i32) - 1) + 2.0 * h).min(r_max);
    loop {
        let ball = Ball::new(*x, r);
        let mut best: Option<(f64, Point)> = None;
        for p in net.points_in_ball(&ball, lvl) {
            let d = p.dist2(x);
            if best.is_none_or(|(bd, bp)| d < bd || (d == bd && p.lex_cmp(&bp).is_lt())) {
                best = Some((d, p));
            }
        }
        if let Some((_, p)) = best {
            return Some(NetPoint { p, level: lvl });
        }
        if r >= r_max {
            return None;
        }
        r = (2.0 * r).min(r_max);
    }
}

/// Γ points in B(ξ, r) ordered by distance to `z`: the closest one first, then
/// points spread over the clipped pieces.
fn anchor_candidates(curve: &CurveIndex, xi: &Point, r: f64, z: &Point) -> Vec<Anchor> {
    let mut out: Vec<(f64, Anchor)> = Vec::new();
    let ball = Ball::new(*xi, r);
    for e in curve.edges_within(xi, r) {
        let seg = curve.curve().segment(e);
        let Some(piece) = clip_segment(&seg, &ball) else { continue };
        let tq = seg.closest_t(&piece.at(piece.closest_t(z)));
        let mut ts = vec![tq];
        for k in 0..=8 {
            ts.push(seg.closest_t(&piece.at(k as f64 / 8.0)));
        }
        for t in ts {
            let a = Anchor::on_edge(curve, e, t);
            out.push((a.point.dist(z), a));
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0).then((a.1.edge, a.1.t).partial_cmp(&(b.1.edge, b.1.t)).unwrap()));
    out.dedup_by(|a, b| a.1.point == b.1.point);
    out.into_iter().map(|x| x.1).collect()
}

/// Apex candidates for a pair: net points of level ≤ k + k1 near probes around
/// the chord, in both C·2^{-k} balls. Points inside the ellipse
/// |z−ξ1| + |z−ξ2| ≤ κ|ξ1−ξ2| come first; within each tier, clearance descending.
fn apex_candidates(net: &WhitneyNet, xi1: &Point, xi2: &Point, k: usize, cfg: &Config) -> Vec<NetPoint> {
    let curve = net.curve();
    let top = (k + cfg.k1).min(net.k_max());
    let floor = 2f64.powi(-(top as i32) - 1);
    let reach = cfg.c * 2f64.powi(-(k as i32));
    let len = xi1.dist(xi2);
    let Some(axis) = (*xi2 - *xi1).normalized() else { return Vec::new() };
    let normals = axis.orthonormal_complement();
    let mut probes = Vec::new();
    for t in [0.5, 0.375, 0.625, 0.25, 0.75, 0.125, 0.875] {
        let c = xi1.lerp(xi2, t);
        probes.push(c);
        for n in &normals {
            for s in [0.125, 0.25, 0.5, 1.0] {
                probes.push(c + *n * (s * len));
                probes.push(c - *n * (s * len));
            }
        }
    }
    let mut seen = HashSet::new();
    let mut out: Vec<(f64, NetPoint)> = Vec::new();
    for q in probes {
        let hit = curve.nearest(&q);
        let mut q = q;
        if hit.dist < floor {
            let Some(dir) = (q - hit.point).normalized() else { continue };
            q = hit.point + dir * (2.0 * floor);
        }
        let dq = curve.dist(&q);
        let Some(j) = net.level_of_distance(dq) else { continue };
        let lo = j.saturating_sub(1);
        let hi = (j + 1).min(net.k_max());
        let Some(np) = net.nearest(&q, lo..=hi, 2.0 * net.pitch(j)) else { continue };
        if np.level > top || !seen.insert(np.p.key()) {
            continue;
        }
        if np.p.dist(xi1) >= reach || np.p.dist(xi2) >= reach {
            continue;
        }
        out.push((curve.dist(&np.p), np));
    }
    // candidates inside the chord ellipse first, each tier by clearance
    let tier = |p: &Point| p.dist(xi1) + p.dist(xi2) > cfg.apex_ellipse * len;
    out.sort_by(|a, b| tier(&a.1.p).cmp(&tier(&b.1.p)).then(b.0.total_cmp(&a.0)).then(a.1.p.lex_cmp(&b.1.p)));
    out.into_iter().map(|x| x.1).collect()
}

/// The flat-containment exception: some N ∈ [2, 2M] with β(N·B) < ε.
fn flat_exception(engine: &BetaEngine, xi: &Point, r: f64, cfg: &Config) -> bool {
    let top = (2.0 * cfg.m).floor() as usize;
    (2..=top.max(2)).any(|n| engine.beta_of_ball(*xi, r, n as f64) < cfg.eps)
}

/// Builds (C1) bridges for all Non-Flat balls, coarse to fine, inserting each
/// into `network` so that later pairs already joined within the redundancy
/// stretch are skipped.
#[allow(clippy::too_many_arguments)]
pub fn build_nonflat_bridges(
    nets: &NetHierarchy,
    net: &WhitneyNet,
    engine: &BetaEngine,
    class: &Classification,
    cfg: &Config,
    network: &mut Network,
    stats: &mut BridgeStats,
    next_id: &mut u32,
) -> Result<Vec<Bridge>> {
    let curve = net.curve().clone();
    let mut out = Vec::new();
    let mut ws = Workspace::new();
    for k in 1..=nets.k_max {
        let r = 2f64.powi(-(k as i32));
        let pts = nets.level(k);
        let mut done: HashSet<(usize, usize)> = HashSet::new();
        for i in 0..pts.len() {
            if !class.is_nonflat_ball(k, i, cfg) {
                continue;
            }
            stats.nonflat_balls += 1;
            let xi1 = pts[i];
            let mut partners: Vec<usize> = nets
                .near(k, &xi1, cfg.c * r)
                .into_iter()
                .filter(|&j| {
                    let d = pts[j].dist(&xi1);
                    d >= 2.0 * r && d < cfg.c * r
                })
                .collect();
            partners.sort_unstable();
            let exception = flat_exception(engine, &xi1, r, cfg);
            for j in partners {
                if !done.insert((i.min(j), i.max(j))) {
                    continue;
                }
                stats.nonflat_pairs += 1;
                let xi2 = pts[j];
                let euclid = xi1.dist(&xi2);
                let a1 = Anchor::nearest(&curve, &xi1);
                let a2 = Anchor::nearest(&curve, &xi2);
                let l1 = network.gamma_location(a1.edge, a1.t);
                let l2 = network.gamma_location(a2.edge, a2.t);
                if network.distance(&mut ws, &l1, &l2, cfg.redundancy_stretch * euclid).is_some() {
                    stats.nonflat_redundant += 1;
                    continue;
                }
                match pair_bridge(net, &xi1, &xi2, k, exception, cfg)? {
                    Some((z, e1, e2, leg1, leg2)) => {
                        stats.repairs += leg1.repairs + leg2.repairs;
                        let mut verts: Vec<Point> = leg1.points();
                        let mut levels = leg1.levels();
                        verts.reverse();
                        levels.reverse();
                        verts.extend(leg2.points().into_iter().skip(1));
                        levels.extend(leg2.levels().into_iter().skip(1));
                        let b = Bridge {
                            id: *next_id,
                            provenance: Provenance::NonFlat { level: k, xi1: i, xi2: j, exception },
                            apex: z.p,
                            anchors: vec![e1, e2],
                            path: PolyPath { vertices: verts },
                            levels,
                            raw_length: leg1.raw_length + leg2.raw_length,
                            repairs: leg1.repairs + leg2.repairs,
                        };
                        *next_id += 1;
                        insert_bridge(network, &b);
                        if exception {
                            stats.nonflat_exceptions += 1;
                        }
                        stats.nonflat_bridges += 1;
                        out.push(b);
                    }
                    None => stats.nonflat_unmatched += 1,
                }
            }
        }
    }
    Ok(out)
}

type PairBridge = (NetPoint, Anchor, Anchor, Leg, Leg);

fn pair_bridge(net: &WhitneyNet, xi1: &Point, xi2: &Point, k: usize, exception: bool, cfg: &Config) -> Result<Option<PairBridge>> {
    let r = 2f64.powi(-(k as i32));
    let reach = if exception { cfg.m * cfg.eps * r } else { r };
    let cands = apex_candidates(net, xi1, xi2, k, cfg);
    // the narrow cone C_α ⊆ C_{Cα} first
    for alpha in [cfg.alpha, cfg.c * cfg.alpha] {
        if let Some(found) = pair_bridge_in_cone(net, xi1, xi2, &cands, alpha, reach, exception, cfg)? {
            return Ok(Some(found));
        }
    }
    Ok(None)
}

#[allow(clippy::too_many_arguments)]
fn pair_bridge_in_cone(
    net: &WhitneyNet,
    xi1: &Point,
    xi2: &Point,
    cands: &[NetPoint],
    alpha: f64,
    reach: f64,
    exception: bool,
    cfg: &Config,
) -> Result<Option<PairBridge>> {
    let curve = net.curve();
    for z in cands.iter().copied().take(48) {
        let mut legs = Vec::with_capacity(2);
        for xi in [xi1, xi2] {
            let mut cands = vec![];
            if let Some(a) = closest_in_ball(curve, xi, reach, &z.p) {
                cands.push(a);
            }
            if !exception {
                cands.push(Anchor::nearest(curve, xi));
            }
            let found = cands.into_iter().find_map(|a| raw_leg(&z.p, &a.point, alpha, curve).map(|raw| (a, raw)));
            match found {
                Some(x) => legs.push(x),
                None => break,
            }
        }
        if legs.len() < 2 {
            continue;
        }
        let (a2, raw2) = legs.pop().unwrap();
        let (a1, raw1) = legs.pop().unwrap();
        if a1.point == a2.point {
            continue;
        }
        let leg1 = straighten_path(&raw1, net, cfg.lambda)?;
        let leg2 = straighten_path(&raw2, net, cfg.lambda)?;
        if !leg_clears(&leg1, curve) || !leg_clears(&leg2, curve) {
            continue;
        }
        return Ok(Some((z, a1, a2, leg1, leg2)));
    }
    Ok(None)
}

/// Adds a bridge's edges to the network, splitting Γ at its anchors.
pub fn insert_bridge(network: &mut Network, b: &Bridge) {
    for a in &b.anchors {
        network.gamma_vertex(a.edge, a.t);
    }
    network.add_path(&b.path, b.id);
}

/// Whether a straightened leg meets Γ only at its anchor.
fn leg_clears(leg: &Leg, curve: &CurveIndex) -> bool {
    segments_clearance(&leg.points(), &leg.levels(), curve) > 1e-12 * curve.scale()
}

fn segments_clearance(pts: &[Point], levels: &[Option<usize>], curve: &CurveIndex) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..pts.len() - 1 {
        let (mut s, mut e) = (pts[i], pts[i + 1]);
        if levels[i].is_none() {
            s = s.lerp(&e, 1e-6);
        }
        if levels[i + 1].is_none() {
            e = e.lerp(&s, 1e-6);
        }
        best = best.min(curve.segment_dist(&Segment::new(s, e)));
    }
    best
}

/// Distance from the bridge interior to Γ, excluding a vanishing neighborhood of each anchor.
pub fn curve_clearance(b: &Bridge, curve: &CurveIndex) -> f64 {
    segments_clearance(&b.path.vertices, &b.levels, curve)
}

/// Worst ratio d(s₁, s₂)/min{|s₁|, |s₂|} over nonadjacent bridge edges.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport {
    /// Distinct bridge edges examined, terminal edges included.
    pub segments: usize,
    /// Nonadjacent pairs with distance below the shorter length.
    pub close_pairs: usize,
    /// Measured constant over edges with both endpoints in 𝒩, capped at 1.
    pub a: f64,
    /// Same constant with anchor edges included.
    pub a_terminal: f64,
    pub worst: Option<(Segment, Segment)>,
}

/// Exhaustive segment-separation measurement over the emitted bridge edges.
/// Edges sharing an endpoint are adjacent; duplicates are counted once.
pub fn segment_separation(bridges: &[Bridge]) -> SeparationReport {
    let mut seen = HashSet::new();
    let mut segs = Vec::new();
    let mut terminal = Vec::new();
    for b in bridges {
        for (i, s) in b.path.segments().enumerate() {
            let (p, q) = if s.a.lex_cmp(&s.b).is_le() { (s.a, s.b) } else { (s.b, s.a) };
            if p != q && seen.insert((p.key(), q.key())) {
                segs.push(Segment::new(p, q));
                terminal.push(b.is_terminal_edge(i));
            }
        }
    }
    let bvh = Bvh::new(segs.clone());
    let mut rep = SeparationReport { segments: segs.len(), a: 1.0, a_terminal: 1.0, ..Default::default() };
    for (i, s) in segs.iter().enumerate() {
        let l1 = s.length();
        for j in bvh.overlapping(&s.bounds().padded(l1)) {
            if j <= i {
                continue;
            }
            let t = &segs[j];
            if s.a == t.a || s.a == t.b || s.b == t.a || s.b == t.b {
                continue;
            }
            let m = l1.min(t.length());
            let d = s.dist_to_segment(t);
            if d >= m {
                continue;
            }
            rep.close_pairs += 1;
            let r = d / m;
            rep.a_terminal = rep.a_terminal.min(r);
            if !terminal[i] && !terminal[j] && r < rep.a {
                rep.a = r;
                rep.worst = Some((*s, *t));
            }
        }
    }
    rep
}
