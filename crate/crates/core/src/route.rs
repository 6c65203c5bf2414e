//! Stretch measurement, reduction to Γ, and the constructive segment-replacement router.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::augment::Construction;
use crate::bridge::{Bridge, Provenance};
use crate::cubes::CubeClass;
use crate::error::{Error, Result};
use crate::geom::{Ball, Point, PolyPath, Segment};
use crate::network::{EdgeOrigin, Location, Network, Workspace};
use crate::spatial::CurveIndex;

/// Draws points uniformly by length from the alive edges of a network.
pub struct Sampler<'a> {
    net: &'a Network,
    ids: Vec<u32>,
    cum: Vec<f64>,
}

impl<'a> Sampler<'a> {
    pub fn new(net: &'a Network, only_gamma: bool) -> Sampler<'a> {
        let mut ids = Vec::new();
        let mut cum = Vec::new();
        let mut total = 0.0;
        for (i, e) in net.alive_edges() {
            if only_gamma && e.origin != EdgeOrigin::Original {
                continue;
            }
            total += e.len;
            ids.push(i);
            cum.push(total);
        }
        Sampler { net, ids, cum }
    }

    pub fn sample(&self, rng: &mut impl Rng) -> Location {
        let total = *self.cum.last().unwrap_or(&0.0);
        let u = rng.gen::<f64>() * total;
        let i = self.cum.partition_point(|c| *c < u).min(self.ids.len() - 1);
        Location { edge: self.ids[i], t: rng.gen::<f64>() }
    }

    pub fn point(&self, loc: &Location) -> Point {
        self.net.point_at(loc)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DilationSample {
    pub p: Point,
    pub q: Point,
    pub euclid: f64,
    pub intrinsic: f64,
    pub stretch: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StretchReport {
    pub pairs: usize,
    pub max: f64,
    pub median: f64,
    pub p99: f64,
    pub worst: Option<DilationSample>,
    /// Samples with stretch below 1 − 1e−9.
    pub below_one: usize,
}

impl StretchReport {
    fn from_samples(samples: Vec<DilationSample>) -> StretchReport {
        if samples.is_empty() {
            return StretchReport::default();
        }
        let mut v: Vec<f64> = samples.iter().map(|s| s.stretch).collect();
        v.sort_by(f64::total_cmp);
        let n = v.len();
        let worst = samples.iter().copied().max_by(|a, b| a.stretch.total_cmp(&b.stretch));
        StretchReport {
            pairs: n,
            max: v[n - 1],
            median: v[n / 2],
            p99: v[((n - 1) as f64 * 0.99).floor() as usize],
            worst,
            below_one: v.iter().filter(|s| **s < 1.0 - 1e-9).count(),
        }
    }
}

/// Pair counts for [`measure_stretch`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairPlan {
    pub key_cap: usize,
    pub random: usize,
    pub local: usize,
    /// Smallest separation radius for local pairs.
    pub min_radius: f64,
}

/// Samples the dilation of a network: all pairs among key vertices, uniform
/// random on-edge pairs, and pairs at log-uniform separation.
pub fn measure_stretch(net: &Network, key: &[u32], plan: &PairPlan, seed: u64) -> Result<StretchReport> {
    let mut ws = Workspace::new();
    let mut out = Vec::new();
    let tol = 1e-12 * net.curve().scale();
    let key = thin(key, plan.key_cap);
    for (i, &u) in key.iter().enumerate() {
        let Some(lu) = net.vertex_location(u) else { continue };
        let dist: std::collections::HashMap<u32, f64> = net.distances_from(&mut ws, &lu, f64::INFINITY).into_iter().collect();
        for &v in &key[i + 1..] {
            let (p, q) = (net.vertices()[u as usize], net.vertices()[v as usize]);
            let e = p.dist(&q);
            if e <= tol {
                continue;
            }
            let d = *dist.get(&v).ok_or(Error::NetworkDisconnected)?;
            out.push(DilationSample { p, q, euclid: e, intrinsic: d, stretch: d / e });
        }
    }
    let sampler = Sampler::new(net, false);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..plan.random {
        let (a, b) = (sampler.sample(&mut rng), sampler.sample(&mut rng));
        push_pair(net, &mut ws, &a, &b, tol, &mut out)?;
    }
    let (lo, hi) = (plan.min_radius.ln(), 0f64.ln_1p());
    for _ in 0..plan.local {
        let a = sampler.sample(&mut rng);
        let pa = net.point_at(&a);
        let r = rng.gen_range(lo..=hi).exp();
        let near = net.edges_near(&pa, r);
        if near.is_empty() {
            continue;
        }
        let b = Location { edge: near[rng.gen_range(0..near.len())], t: rng.gen::<f64>() };
        push_pair(net, &mut ws, &a, &b, tol, &mut out)?;
    }
    Ok(StretchReport::from_samples(out))
}

fn push_pair(net: &Network, ws: &mut Workspace, a: &Location, b: &Location, tol: f64, out: &mut Vec<DilationSample>) -> Result<()> {
    let (p, q) = (net.point_at(a), net.point_at(b));
    let e = p.dist(&q);
    if e <= tol {
        return Ok(());
    }
    let d = net.distance(ws, a, b, f64::INFINITY).ok_or(Error::NetworkDisconnected)?;
    out.push(DilationSample { p, q, euclid: e, intrinsic: d, stretch: d / e });
    Ok(())
}

/// Evenly strided subset of at most `cap` items.
fn thin(v: &[u32], cap: usize) -> Vec<u32> {
    if v.len() <= cap || cap == 0 {
        return v.to_vec();
    }
    (0..cap).map(|i| v[i * v.len() / cap]).collect()
}

/// Γ vertices, bridge anchors and apexes, sorted by vertex id.
pub fn key_vertices(net: &Network, bridges: &[Bridge]) -> Vec<u32> {
    let mut key: Vec<u32> = net.curve().curve().vertices().iter().filter_map(|p| net.find_vertex(p)).collect();
    for b in bridges {
        key.extend(b.anchors.iter().filter_map(|a| net.find_vertex(&a.point)));
        key.extend(net.find_vertex(&b.apex));
    }
    key.sort_unstable();
    key.dedup();
    key
}

/// Locates a point on the network within a relative tolerance.
pub fn snap(net: &Network, p: &Point) -> Result<Location> {
    let (loc, d) = net.locate(p)?;
    if d > 1e-9 * net.curve().scale() {
        return Err(Error::OffNetwork(d));
    }
    Ok(loc)
}

/// Exact shortest path in Γ̃ between two of its points.
pub fn graph_shortest_path(net: &Network, ws: &mut Workspace, p: &Point, q: &Point) -> Result<(f64, PolyPath)> {
    let (a, b) = (snap(net, p)?, snap(net, q)?);
    net.shortest_path(ws, &a, &b)
}

/// Shortest in-network path from `p` to Γ.
pub fn reduce_to_gamma(net: &Network, ws: &mut Workspace, p: &Point) -> Result<(Point, PolyPath)> {
    let loc = snap(net, p)?;
    let (_, path) = net.path_to_gamma(ws, &loc)?;
    Ok((path.last(), path))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseCounts {
    pub crossing: usize,
    pub flat: usize,
    pub cone_flat: usize,
    pub cone_nonflat: usize,
    pub closure: usize,
    pub fallback: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundTrace {
    pub round: usize,
    /// Σ ℓ(s) over pending segments.
    pub sigma: f64,
    /// ℋ¹ of the settled pieces.
    pub settled: f64,
    pub pending: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Route {
    pub x: Point,
    pub y: Point,
    pub pieces: Vec<PolyPath>,
    pub length: f64,
    pub oracle: f64,
    pub trace: Vec<RoundTrace>,
    pub cases: CaseCounts,
}

impl Route {
    pub fn euclid(&self) -> f64 {
        self.x.dist(&self.y)
    }

    pub fn sigma_monotone(&self) -> bool {
        let d = self.euclid();
        self.trace.first().is_none_or(|t| t.sigma <= d * (1.0 + 1e-12))
            && self.trace.windows(2).all(|w| w[1].sigma <= w[0].sigma + 1e-12 * d)
    }

    /// max ℋ¹(P_n)/(|x−y| − σ_n) over rounds where the denominator is positive.
    pub fn c1(&self) -> f64 {
        let d = self.euclid();
        self.trace
            .iter()
            .filter(|t| d - t.sigma > 1e-9 * d)
            .map(|t| t.settled / (d - t.sigma))
            .fold(0.0, f64::max)
    }

    pub fn used_fallback(&self) -> bool {
        self.cases.fallback > 0
    }
}

const MAX_ROUNDS: usize = 64;
const MAX_PENDING: usize = 4096;
/// Hops of the flat walk must be joined within this stretch.
const FLAT_HOP_STRETCH: f64 = 4.0;
/// Hops per flat walk.
const FLAT_HOPS: usize = 4;

/// Builds a path in Γ̃ between x, y ∈ Γ by iterated segment replacement.
///
/// Each round replaces every pending segment [x,y]: split at interior Γ
/// contacts; in flat balls, walk nearby Γ points joined by short local paths;
/// otherwise splice a registered bridge whose anchors lie in the two
/// components of V₂(z) around the point z of maximal clearance, or failing
/// that two Γ points of those components joined by a chord-arc path. Segments
/// shorter than the finest scale are closed by the graph oracle, as is any
/// segment no rule handles (counted as a fallback).
pub fn route(c: &Construction, ws: &mut Workspace, x: &Point, y: &Point) -> Result<Route> {
    let net = &c.network;
    let curve = &*c.curve;
    let scale = curve.scale();
    for p in [x, y] {
        let d = curve.dist(p);
        if d > 1e-9 * scale {
            return Err(Error::OffNetwork(d));
        }
    }
    let (oracle, _) = graph_shortest_path(net, ws, x, y)?;
    let finest = 2f64.powi(-(c.k_max as i32));
    let mut pending = vec![(*x, *y)];
    let mut pieces: Vec<PolyPath> = Vec::new();
    let mut settled = 0.0;
    let mut cases = CaseCounts::default();
    let mut trace = vec![RoundTrace { round: 0, sigma: x.dist(y), settled: 0.0, pending: 1 }];
    let settle = |p: PolyPath, pieces: &mut Vec<PolyPath>, settled: &mut f64| {
        *settled += p.length();
        pieces.push(p);
    };
    for round in 1..=MAX_ROUNDS {
        if pending.is_empty() {
            break;
        }
        let mut next = Vec::new();
        for (a, b) in pending.drain(..) {
            let len = a.dist(&b);
            if len == 0.0 {
                continue;
            }
            if len < finest || next.len() > MAX_PENDING {
                let (_, p) = graph_shortest_path(net, ws, &a, &b)?;
                if len < finest {
                    cases.closure += 1;
                } else {
                    cases.fallback += 1;
                }
                settle(p, &mut pieces, &mut settled);
                continue;
            }
            // Case 1: contacts with Γ inside the segment
            let cover = gamma_cover(curve, &a, &b);
            if cover.len() > 1 || cover[0].2 {
                cases.crossing += 1;
                for (t0, t1, on) in cover {
                    let (p, q) = (a.lerp(&b, t0), a.lerp(&b, t1));
                    if on {
                        settle(PolyPath::new(vec![p, q])?, &mut pieces, &mut settled);
                    } else {
                        next.push((p, q));
                    }
                }
                continue;
            }
            // Case 2: flat ball
            let n = dyadic_exponent(len);
            let ball = Ball::new(a, c.cfg.m_prime * 2f64.powi(-n));
            if c.engine.beta(&ball) < c.cfg.eps {
                if let Some(walk) = flat_walk(net, ws, curve, &a, &b)? {
                    cases.flat += 1;
                    for p in walk {
                        settle(p, &mut pieces, &mut settled);
                    }
                    continue;
                }
            }
            // Cases 3 and 4: max-clearance cone
            let (z, rz) = max_clearance(curve, &a, &b, finest);
            let flat_near_z = c.engine.beta(&Ball::new(z, c.cfg.m_prime * rz)) < c.cfg.eps;
            let spliced = match splice_bridge(&c.bridges, &a, &b, &z, c.cfg.phi) {
                Some(x) => Some(x),
                None => splice_chord_arc(c, ws, &a, &b, &z)?,
            };
            match spliced {
                Some((xp, p, yp)) => {
                    if flat_near_z {
                        cases.cone_flat += 1;
                    } else {
                        cases.cone_nonflat += 1;
                    }
                    settle(p, &mut pieces, &mut settled);
                    next.push((a, xp));
                    next.push((yp, b));
                }
                None => {
                    cases.fallback += 1;
                    let (_, p) = graph_shortest_path(net, ws, &a, &b)?;
                    settle(p, &mut pieces, &mut settled);
                }
            }
        }
        pending = next;
        let sigma = pending.iter().map(|(a, b)| a.dist(b)).fold(0.0, |a, b| a + b);
        trace.push(RoundTrace { round, sigma, settled, pending: pending.len() });
    }
    for (a, b) in pending.drain(..) {
        cases.fallback += 1;
        let (_, p) = graph_shortest_path(net, ws, &a, &b)?;
        settle(p, &mut pieces, &mut settled);
    }
    if let Some(last) = trace.last() {
        if last.settled != settled {
            trace.push(RoundTrace { round: last.round + 1, sigma: 0.0, settled, pending: 0 });
        }
    }
    Ok(Route { x: *x, y: *y, pieces, length: settled, oracle, trace, cases })
}

/// n with 2^{-n-1} < len ≤ 2^{-n}.
fn dyadic_exponent(len: f64) -> i32 {
    (-len.log2()).floor() as i32
}

/// Partition of [0,1] into maximal intervals of [a,b] on and off Γ.
fn gamma_cover(curve: &CurveIndex, a: &Point, b: &Point) -> Vec<(f64, f64, bool)> {
    let seg = Segment::new(*a, *b);
    let len = seg.length();
    let on_tol = 1e-10 * curve.scale();
    let end_tol = 1e-9 * curve.scale() / len;
    let mut ts = vec![0.0, 1.0];
    for e in curve.edges_within(&seg.midpoint(), len / 2.0 + on_tol) {
        let g = curve.curve().segment(e);
        let (s, _, d) = seg.closest_params(&g);
        if d <= on_tol {
            ts.push(s);
        }
        for p in [g.a, g.b] {
            if seg.dist(&p) <= on_tol {
                ts.push(seg.closest_t(&p));
            }
        }
    }
    ts.retain(|t| *t == 0.0 || *t == 1.0 || (*t > end_tol && *t < 1.0 - end_tol));
    ts.sort_by(f64::total_cmp);
    ts.dedup_by(|x, y| (*x - *y).abs() <= end_tol);
    let mut out: Vec<(f64, f64, bool)> = Vec::new();
    for w in ts.windows(2) {
        let on = curve.dist(&seg.at((w[0] + w[1]) / 2.0)) <= on_tol;
        match out.last_mut() {
            Some(last) if last.2 == on => last.1 = w[1],
            _ => out.push((w[0], w[1], on)),
        }
    }
    out
}

/// Γ points along the chord joined hop by hop with short network paths.
fn flat_walk(net: &Network, ws: &mut Workspace, curve: &CurveIndex, a: &Point, b: &Point) -> Result<Option<Vec<PolyPath>>> {
    let mut stops = vec![*a];
    for i in 1..FLAT_HOPS {
        stops.push(curve.nearest(&a.lerp(b, i as f64 / FLAT_HOPS as f64)).point);
    }
    stops.push(*b);
    let mut out = Vec::new();
    for w in stops.windows(2) {
        let e = w[0].dist(&w[1]);
        if e == 0.0 {
            continue;
        }
        let (la, lb) = (snap(net, &w[0])?, snap(net, &w[1])?);
        match net.distance(ws, &la, &lb, FLAT_HOP_STRETCH * e) {
            Some(_) => out.push(net.shortest_path(ws, &la, &lb)?.1),
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

/// Point of (a,b) farthest from Γ: a scan at the finest pitch, then golden-section polish.
pub fn max_clearance(curve: &CurveIndex, a: &Point, b: &Point, pitch: f64) -> (Point, f64) {
    let len = a.dist(b);
    let n = ((len / pitch).ceil() as usize).clamp(8, 4096);
    let f = |t: f64| curve.dist(&a.lerp(b, t));
    let mut best = (0.5, f(0.5));
    for i in 1..n {
        let t = i as f64 / n as f64;
        let v = f(t);
        if v > best.1 {
            best = (t, v);
        }
    }
    let h = 1.0 / n as f64;
    let (mut lo, mut hi) = ((best.0 - h).max(0.0), (best.0 + h).min(1.0));
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..40 {
        let m1 = hi - g * (hi - lo);
        let m2 = lo + g * (hi - lo);
        if f(m1) < f(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    let t = (lo + hi) / 2.0;
    let v = f(t);
    if v > best.1 {
        best = (t, v);
    }
    (a.lerp(b, best.0), best.1)
}

/// Frame of the segment [x,y] about z: projection coordinate and cone tests.
#[derive(Clone, Copy, Debug)]
pub struct ConeFrame {
    pub y: Point,
    pub dir: Point,
    pub len: f64,
    pub uz: f64,
    pub z: Point,
    pub phi: f64,
}

impl ConeFrame {
    pub fn new(x: &Point, y: &Point, z: &Point, phi: f64) -> Option<ConeFrame> {
        let len = x.dist(y);
        let dir = (*x - *y).normalized()?;
        Some(ConeFrame { y: *y, dir, len, uz: (*z - *y).dot(&dir), z: *z, phi })
    }

    /// Π(v) with Π(y) = 0 and Π(x) = |x−y|.
    pub fn proj(&self, v: &Point) -> f64 {
        (*v - self.y).dot(&self.dir)
    }

    pub fn dist_to_line(&self, v: &Point) -> f64 {
        let w = *v - self.y;
        (w.norm2() - w.dot(&self.dir).powi(2)).max(0.0).sqrt()
    }

    pub fn in_h_plus(&self, v: &Point) -> bool {
        let u = self.proj(v);
        u > self.uz && u < self.len
    }

    pub fn in_h_minus(&self, v: &Point) -> bool {
        let u = self.proj(v);
        u > 0.0 && u < self.uz
    }

    /// v ∈ V_j(z): within angle jφ of L as seen from z.
    pub fn in_v(&self, v: &Point, j: f64) -> bool {
        self.dist_to_line(v) <= (j * self.phi).sin() * v.dist(&self.z)
    }
}

/// Registered connections between pairs of anchors: Non-Flat bridges, and
/// pairs of Flat-Bad bridges sharing an apex.
fn registry(bridges: &[Bridge]) -> Vec<(Point, Point, PolyPath)> {
    let mut out = Vec::new();
    let mut by_cube: std::collections::BTreeMap<usize, Vec<&Bridge>> = std::collections::BTreeMap::new();
    for b in bridges {
        match b.provenance {
            Provenance::NonFlat { .. } => out.push((b.anchors[0].point, b.anchors[1].point, b.path.clone())),
            Provenance::FlatBad { cube } => by_cube.entry(cube).or_default().push(b),
        }
    }
    for group in by_cube.values() {
        for i in 0..group.len() {
            for j in i + 1..group.len() {
                let mut p = group[i].path.reversed();
                p.extend(&group[j].path);
                out.push((group[i].anchors[0].point, group[j].anchors[0].point, p));
            }
        }
    }
    out
}

/// The registered connection with anchors x′ ∈ H⁺∩V₂(z) and y′ ∈ H⁻∩V₂(z)
/// minimizing |x−x′| + ℓ(p) + |y′−y|.
fn splice_bridge(bridges: &[Bridge], x: &Point, y: &Point, z: &Point, phi: f64) -> Option<(Point, PolyPath, Point)> {
    let f = ConeFrame::new(x, y, z, phi)?;
    let ok_plus = |v: &Point| f.in_h_plus(v) && f.in_v(v, 2.0);
    let ok_minus = |v: &Point| f.in_h_minus(v) && f.in_v(v, 2.0);
    let mut best: Option<(f64, Point, PolyPath, Point)> = None;
    for (a1, a2, p) in registry(bridges) {
        let oriented = if ok_plus(&a1) && ok_minus(&a2) {
            Some((a1, p, a2))
        } else if ok_plus(&a2) && ok_minus(&a1) {
            Some((a2, p.reversed(), a1))
        } else {
            None
        };
        if let Some((xp, p, yp)) = oriented {
            let cost = x.dist(&xp) + p.length() + yp.dist(y);
            if best.as_ref().is_none_or(|b| cost < b.0) {
                best = Some((cost, xp, p, yp));
            }
        }
    }
    best.map(|(_, a, p, b)| (a, p, b))
}

/// Γ points x′ ∈ H⁺∩V₂(z), y′ ∈ H⁻∩V₂(z) nearest z, accepted when Γ̃ joins
/// them within the chord-arc constant.
fn splice_chord_arc(c: &Construction, ws: &mut Workspace, x: &Point, y: &Point, z: &Point) -> Result<Option<(Point, PolyPath, Point)>> {
    let Some(f) = ConeFrame::new(x, y, z, c.cfg.phi) else { return Ok(None) };
    let reach = x.dist(y);
    let mut plus: Option<(f64, Point)> = None;
    let mut minus: Option<(f64, Point)> = None;
    for p in c.nets.samples.points_in_ball(&Ball::new(*z, reach)) {
        if !f.in_v(&p, 2.0) {
            continue;
        }
        let d = p.dist(z);
        let slot = if f.in_h_plus(&p) {
            &mut plus
        } else if f.in_h_minus(&p) {
            &mut minus
        } else {
            continue;
        };
        if slot.is_none_or(|(bd, bp)| d < bd || (d == bd && p.lex_cmp(&bp).is_lt())) {
            *slot = Some((d, p));
        }
    }
    let (Some((_, xp)), Some((_, yp))) = (plus, minus) else { return Ok(None) };
    let (lx, ly) = (snap(&c.network, &xp)?, snap(&c.network, &yp)?);
    let bound = c.cfg.redundancy_stretch * xp.dist(&yp);
    if c.network.distance(ws, &lx, &ly, bound).is_none() {
        return Ok(None);
    }
    let (_, p) = c.network.shortest_path(ws, &lx, &ly)?;
    Ok(Some((xp, p, yp)))
}

/// Γ point pairs for the route validator: uniform pairs and log-uniform local pairs.
pub fn route_pairs(c: &Construction, n: usize, seed: u64) -> Vec<(Point, Point)> {
    let base = Network::new(c.curve.clone());
    let sampler = Sampler::new(&base, true);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let curve = &*c.curve;
    let lo = 2f64.powi(-(c.k_max as i32)).ln();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let p = sampler.point(&sampler.sample(&mut rng));
        let q = if out.len() % 2 == 0 {
            sampler.point(&sampler.sample(&mut rng))
        } else {
            let r = rng.gen_range(lo..=0.0f64).exp();
            let dir = Point::new(&(0..p.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<_>>());
            let Some(u) = dir.normalized() else { continue };
            curve.nearest(&(p + u * r)).point
        };
        if p.dist(&q) > 1e-9 {
            out.push((p, q));
        }
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CubeSumReport {
    pub pairs: usize,
    /// max Σ_{Q∈E(x,y)} |Q| / |x−y| over sampled pairs with β(R_{x,y}) < ε.
    pub c_bj: f64,
}

/// Measures Σ|Q| over maximal non-Flat-Good cubes centered in the closed lens
/// S(x,y) with |Q| ≤ |S(x,y)∩Γ|, relative to |x−y|.
pub fn cube_sum_bound(c: &Construction, pairs: &[(Point, Point)]) -> CubeSumReport {
    let tree = &c.tree;
    let bad: Vec<usize> = tree.nodes().iter().filter(|n| n.class != CubeClass::FlatGood).map(|n| n.id).collect();
    let mut rep = CubeSumReport::default();
    for (x, y) in pairs {
        let d = x.dist(y);
        let r = Ball::new(x.midpoint(y), d / 2.0);
        if c.engine.beta(&r) >= c.cfg.eps {
            continue;
        }
        rep.pairs += 1;
        let in_lens = |p: &Point| p.dist(x) <= d * (1.0 + 1e-12) && p.dist(y) <= d * (1.0 + 1e-12);
        let pts: Vec<Point> = c.nets.samples.points_in_ball(&Ball::new(*x, d)).into_iter().filter(|p| in_lens(p)).collect();
        let lens_diam = diameter(&pts);
        let cands: Vec<usize> = bad.iter().copied().filter(|&id| in_lens(&tree.node(id).center) && tree.diameter(id) <= lens_diam).collect();
        let maximal = cands.iter().filter(|&&id| !cands.iter().any(|&o| o != id && tree.is_descendant(id, o)));
        let sum: f64 = maximal.map(|&id| tree.diameter(id)).fold(0.0, |a, b| a + b);
        rep.c_bj = rep.c_bj.max(sum / d);
    }
    rep
}

fn diameter(pts: &[Point]) -> f64 {
    let step = (pts.len() / 256).max(1);
    let sub: Vec<&Point> = pts.iter().step_by(step).collect();
    let mut best = 0.0f64;
    for i in 0..sub.len() {
        for j in i + 1..sub.len() {
            best = best.max(sub[i].dist(sub[j]));
        }
    }
    best
}

