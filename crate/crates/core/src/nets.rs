//! Nested 2^{-k}-nets on the curve and the lattice-backed complement net.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geom::{Aabb, Ball, Point, PolyCurve, MAX_DIM};
use crate::spatial::{Bvh, CurveIndex, PointGrid};

/// Scaling by a power of two that puts the curve diameter in (1/2, 1].
///
/// Power-of-two factors make the forward and inverse maps exact in floating point.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Normalization {
    pub exponent: i32,
}

impl Normalization {
    pub fn for_diameter(diam: f64) -> Result<Normalization> {
        if !(diam > 0.0 && diam.is_finite()) {
            return Err(Error::Input(format!("curve diameter {diam} is not positive")));
        }
        let mut e = -(diam.log2().ceil() as i32);
        while diam * 2f64.powi(e) > 1.0 {
            e -= 1;
        }
        while diam * 2f64.powi(e) <= 0.5 {
            e += 1;
        }
        Ok(Normalization { exponent: e })
    }

    pub fn identity() -> Normalization {
        Normalization { exponent: 0 }
    }

    pub fn scale(&self) -> f64 {
        2f64.powi(self.exponent)
    }

    pub fn forward(&self, p: &Point) -> Point {
        *p * self.scale()
    }

    pub fn inverse(&self, p: &Point) -> Point {
        *p * 2f64.powi(-self.exponent)
    }

    pub fn apply(&self, c: &PolyCurve) -> PolyCurve {
        c.transformed(self.scale(), Point::zero(c.dim()))
    }

    pub fn invert_length(&self, l: f64) -> f64 {
        l * 2f64.powi(-self.exponent)
    }
}

/// Rescales `curve` so that its diameter lies in (1/2, 1].
pub fn normalize(curve: &PolyCurve) -> Result<(PolyCurve, Normalization)> {
    let n = Normalization::for_diameter(curve.diameter())?;
    Ok((n.apply(curve), n))
}

/// Default finest level: smallest k with 2^{-k} < min edge / 4, capped at 14.
pub fn default_k_max(curve: &PolyCurve) -> usize {
    let target = curve.min_edge_length() / 4.0;
    let mut k = 1;
    while k < 14 && 2f64.powi(-(k as i32)) >= target {
        k += 1;
    }
    k
}

/// Dense samples of the curve at a fixed pitch, with their edge coordinates.
#[derive(Clone, Debug)]
pub struct CurveSamples {
    pub pitch: f64,
    pub points: Vec<Point>,
    pub edge: Vec<u32>,
    pub t: Vec<f64>,
    bvh: Bvh<Point>,
}

impl CurveSamples {
    /// Vertices first (in order), then edge interiors.
    pub fn new(curve: &PolyCurve, pitch: f64) -> CurveSamples {
        let nv = curve.vertices().len();
        let mut incident: Vec<Option<(u32, f64)>> = vec![None; nv];
        for (e, [a, b]) in curve.edges().iter().enumerate().rev() {
            incident[*a] = Some((e as u32, 0.0));
            incident[*b] = Some((e as u32, 1.0));
        }
        let (mut points, mut edge, mut t) = (Vec::new(), Vec::new(), Vec::new());
        for (v, inc) in incident.iter().enumerate() {
            let (e, tv) = inc.expect("connected curve has no isolated vertex");
            points.push(curve.vertices()[v]);
            edge.push(e);
            t.push(tv);
        }
        for (e, s) in curve.segments().enumerate() {
            let n = (s.length() / pitch).ceil().max(1.0) as usize;
            for i in 1..n {
                let ti = i as f64 / n as f64;
                points.push(s.at(ti));
                edge.push(e as u32);
                t.push(ti);
            }
        }
        let bvh = Bvh::new(points.clone());
        CurveSamples { pitch, points, edge, t, bvh }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Sample indices inside the closed ball.
    pub fn in_ball(&self, b: &Ball) -> Vec<usize> {
        self.bvh.within(&b.center, b.radius)
    }

    pub fn points_in_ball(&self, b: &Ball) -> Vec<Point> {
        self.in_ball(b).into_iter().map(|i| self.points[i]).collect()
    }

    pub fn nearest(&self, p: &Point) -> Option<(usize, f64)> {
        self.bvh.nearest(p)
    }
}

/// The nested nets Δ_0 ⊆ Δ_1 ⊆ … ⊆ Δ_{k_max}, living on curve samples.
#[derive(Clone, Debug)]
pub struct NetHierarchy {
    pub k_max: usize,
    pub samples: Arc<CurveSamples>,
    /// Sample indices of Δ_k in insertion order.
    levels: Vec<Vec<u32>>,
    /// First level containing each sample, `u8::MAX` if none.
    birth: Vec<u8>,
    grids: Vec<PointGrid>,
}

impl NetHierarchy {
    pub fn build(curve: &PolyCurve, k_max: usize) -> Result<NetHierarchy> {
        if k_max < 1 {
            return Err(Error::Config("k_max must be at least 1".into()));
        }
        if curve.vertices().is_empty() {
            return Err(Error::EmptyCurve);
        }
        let pitch = 2f64.powi(-(k_max as i32) - 2);
        let samples = Arc::new(CurveSamples::new(curve, pitch));
        Ok(NetHierarchy::from_samples(samples, k_max))
    }

    pub fn from_samples(samples: Arc<CurveSamples>, k_max: usize) -> NetHierarchy {
        let n = samples.len();
        let mut birth = vec![u8::MAX; n];
        let mut levels: Vec<Vec<u32>> = Vec::with_capacity(k_max + 1);
        let mut grids = Vec::with_capacity(k_max + 1);
        birth[0] = 0;
        levels.push(vec![0]);
        grids.push(PointGrid::from_points(1.0, &[samples.points[0]]));
        for k in 1..=k_max {
            let r = 2f64.powi(-(k as i32));
            let mut members = levels[k - 1].clone();
            let mut grid = PointGrid::from_points(r, &members.iter().map(|&i| samples.points[i as usize]).collect::<Vec<_>>());
            for i in 0..n {
                if birth[i] != u8::MAX {
                    continue;
                }
                let p = samples.points[i];
                if !grid.any_within_open(&p, r) {
                    grid.insert(p);
                    members.push(i as u32);
                    birth[i] = k as u8;
                }
            }
            levels.push(members);
            grids.push(grid);
        }
        NetHierarchy { k_max, samples, levels, birth, grids }
    }

    /// Points of Δ_k in insertion order.
    pub fn level(&self, k: usize) -> Vec<Point> {
        self.levels[k].iter().map(|&i| self.samples.points[i as usize]).collect()
    }

    pub fn level_indices(&self, k: usize) -> &[u32] {
        &self.levels[k]
    }

    pub fn level_len(&self, k: usize) -> usize {
        self.levels[k].len()
    }

    /// The point with position `i` in `level(k)`.
    pub fn point(&self, k: usize, i: usize) -> Point {
        self.samples.points[self.levels[k][i] as usize]
    }

    pub fn birth_of_sample(&self, s: usize) -> Option<usize> {
        (self.birth[s] != u8::MAX).then_some(self.birth[s] as usize)
    }

    /// Positions in `level(k)` of points within `r` of `p`.
    pub fn near(&self, k: usize, p: &Point, r: f64) -> Vec<usize> {
        self.grids[k].within(p, r)
    }

    pub fn nearest_in_level(&self, k: usize, p: &Point, r: f64) -> Option<(usize, f64)> {
        self.grids[k].nearest_within(p, r)
    }

    /// Separation, covering and nesting violations over the dense samples.
    pub fn audit(&self) -> NetAudit {
        let mut a = NetAudit::default();
        for k in 0..=self.k_max {
            let r = 2f64.powi(-(k as i32));
            let pts = self.level(k);
            for (i, p) in pts.iter().enumerate() {
                for j in self.near(k, p, r) {
                    if j != i && p.dist(&pts[j]) < r {
                        a.separation += 1;
                    }
                }
            }
            for p in &self.samples.points {
                // covering radius of Δ_k is r; search a little past it
                if self.nearest_in_level(k, p, r * 1.01).is_none_or(|(_, d)| d > r) {
                    a.covering += 1;
                }
            }
            if k > 0 {
                let set: std::collections::HashSet<u32> = self.levels[k].iter().copied().collect();
                a.nesting += self.levels[k - 1].iter().filter(|i| !set.contains(i)).count();
            }
        }
        a.separation /= 2;
        a.root_singleton = self.levels[0].len() == 1;
        a
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NetAudit {
    pub separation: usize,
    pub covering: usize,
    pub nesting: usize,
    pub root_singleton: bool,
}

impl NetAudit {
    pub fn ok(&self) -> bool {
        self.separation == 0 && self.covering == 0 && self.nesting == 0 && self.root_singleton
    }
}

/// Lattice indices per block side in [`WhitneyNet::materialize_level`].
const BLOCK: i64 = 16;

fn odometer(cur: &mut [i64; MAX_DIM], d: usize, n: i64) -> bool {
    odometer_to(cur, &[n; MAX_DIM], d)
}

/// Advances a mixed-radix counter; false once it wraps.
fn odometer_to(cur: &mut [i64; MAX_DIM], n: &[i64; MAX_DIM], d: usize) -> bool {
    for i in 0..d {
        if cur[i] + 1 < n[i] {
            cur[i] += 1;
            return true;
        }
        cur[i] = 0;
    }
    false
}

/// A point of the complement net with its level.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NetPoint {
    pub p: Point,
    pub level: usize,
}

/// Largest k0 tried by [`WhitneyNet::select_k0`].
pub const K0_MAX: usize = 6;

/// The Whitney-style net 𝒩 = ∪ 𝒩_k, with 𝒩_k the points of the dyadic lattice of
/// pitch 2^{-k-k0} lying in the annulus 2^{-k-1} ≤ dist(·,Γ) < 2^{-k}.
///
/// Because coarser lattices are contained in finer ones, this is one admissible
/// outcome of the inductive net recipe; points are enumerated lazily.
#[derive(Clone, Debug)]
pub struct WhitneyNet {
    curve: Arc<CurveIndex>,
    k0: usize,
    k_max: usize,
    bbox: Aabb,
    d: usize,
}

impl WhitneyNet {
    pub fn new(curve: Arc<CurveIndex>, k0: usize, k_max: usize, bbox_pad: f64) -> WhitneyNet {
        let bbox = curve.curve().bounds().padded(bbox_pad);
        let d = curve.curve().dim();
        WhitneyNet { curve, k0, k_max, bbox, d }
    }

    /// Builds with the smallest k0 ≥ `k0_start` whose locality check passes.
    pub fn select_k0(curve: Arc<CurveIndex>, k0_start: usize, k_max: usize, bbox_pad: f64) -> (WhitneyNet, Vec<usize>) {
        let mut tried = Vec::new();
        let mut k0 = k0_start.max(2);
        loop {
            tried.push(k0);
            let net = WhitneyNet::new(curve.clone(), k0, k_max, bbox_pad);
            if k0 >= K0_MAX || net.locality_certified() {
                return (net, tried);
            }
            let probe = k_max.min(3);
            if net.locality_violations(0..=probe, true).is_empty() {
                return (net, tried);
            }
            k0 += 1;
        }
    }

    pub fn k0(&self) -> usize {
        self.k0
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn curve(&self) -> &Arc<CurveIndex> {
        &self.curve
    }

    pub fn bbox(&self) -> &Aabb {
        &self.bbox
    }

    /// Lattice pitch of level `j`.
    pub fn pitch(&self, j: usize) -> f64 {
        2f64.powi(-((j + self.k0) as i32))
    }

    /// The annulus level of a distance to Γ, if within 0..=k_max.
    pub fn level_of_distance(&self, r: f64) -> Option<usize> {
        let k = dyadic_level(r)?;
        (k <= self.k_max).then_some(k)
    }

    /// Level of `p` if it is a point of 𝒩.
    pub fn level_of(&self, p: &Point) -> Option<usize> {
        if !self.bbox.contains(p) {
            return None;
        }
        let j = self.level_of_distance(self.curve.dist(p))?;
        let h = self.pitch(j);
        p.coords().iter().all(|c| (c / h).fract() == 0.0).then_some(j)
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.level_of(p).is_some()
    }

    /// Locality holds for every point when 10·2^{-k0} ≤ 1/4 (distance to Γ is 1-Lipschitz).
    pub fn locality_certified(&self) -> bool {
        10.0 * 2f64.powi(-(self.k0 as i32)) <= 0.25
    }

    /// Lattice points of level `j` in the closed ball (annulus and bbox filtered),
    /// in lexicographic order.
    pub fn points_in_ball(&self, ball: &Ball, j: usize) -> Vec<Point> {
        let mut out = Vec::new();
        if j > self.k_max {
            return out;
        }
        let lo_d = 2f64.powi(-(j as i32) - 1);
        let hi_d = 2f64.powi(-(j as i32));
        let dc = self.curve.dist(&ball.center);
        if dc + ball.radius < lo_d || dc - ball.radius >= hi_d {
            return out;
        }
        // the whole ball is inside the annulus: skip per-point distance queries
        let all_in = dc - ball.radius >= lo_d && dc + ball.radius < hi_d;
        let h = self.pitch(j);
        self.visit_lattice(ball, h, |p| {
            if all_in {
                out.push(p);
            } else {
                let dp = self.curve.dist(&p);
                if dp >= lo_d && dp < hi_d {
                    out.push(p);
                }
            }
        });
        out
    }

    /// Points of all levels in the ball.
    pub fn points_in_ball_all(&self, ball: &Ball) -> Vec<NetPoint> {
        let dc = self.curve.dist(&ball.center);
        let mut out = Vec::new();
        for j in self.levels_meeting(dc - ball.radius, dc + ball.radius) {
            out.extend(self.points_in_ball(ball, j).into_iter().map(|p| NetPoint { p, level: j }));
        }
        out
    }

    /// Levels whose annuli meet the distance range [lo, hi].
    pub fn levels_meeting(&self, lo: f64, hi: f64) -> std::ops::RangeInclusive<usize> {
        if lo >= 1.0 {
            #[allow(clippy::reversed_empty_ranges)]
            return 1..=0;
        }
        let top = if hi >= 1.0 { 0 } else { dyadic_level(hi).unwrap_or(0) };
        let bottom = if lo <= 0.0 { self.k_max } else { dyadic_level(lo).unwrap_or(self.k_max).min(self.k_max) };
        top..=bottom
    }

    fn visit_lattice(&self, ball: &Ball, h: f64, mut f: impl FnMut(Point)) {
        let d = self.d;
        let mut lo = [0i64; MAX_DIM];
        let mut hi = [0i64; MAX_DIM];
        for i in 0..d {
            let a = (ball.center.get(i) - ball.radius).max(self.bbox.lo[i]);
            let b = (ball.center.get(i) + ball.radius).min(self.bbox.hi[i]);
            lo[i] = (a / h).ceil() as i64;
            hi[i] = (b / h).floor() as i64;
            if lo[i] > hi[i] {
                return;
            }
        }
        let r2 = ball.radius * ball.radius;
        let mut cur = lo;
        let mut coords = [0.0; MAX_DIM];
        loop {
            for i in 0..d {
                coords[i] = cur[i] as f64 * h;
            }
            let p = Point::new(&coords[..d]);
            if p.dist2(&ball.center) <= r2 {
                f(p);
            }
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

    /// All points of 𝒩_j, lexicographically sorted. Only sensible for coarse levels.
    pub fn materialize_level(&self, j: usize) -> Vec<Point> {
        let reach = 2f64.powi(-(j as i32));
        let (lo_d, hi_d) = (reach / 2.0, reach);
        let h = self.pitch(j);
        let d = self.d;
        let area = self.curve.curve().bounds().padded(reach);
        let mut lo = [0i64; MAX_DIM];
        let mut nb = [0i64; MAX_DIM];
        for i in 0..d {
            let a = area.lo[i].max(self.bbox.lo[i]);
            let b = area.hi[i].min(self.bbox.hi[i]);
            lo[i] = (a / h).ceil() as i64;
            let hi = (b / h).floor() as i64;
            if lo[i] > hi {
                return Vec::new();
            }
            nb[i] = (hi - lo[i]) / BLOCK + 1;
        }
        let half_diag = 0.5 * (BLOCK as f64) * h * (d as f64).sqrt();
        let mut out = Vec::new();
        let mut blk = [0i64; MAX_DIM];
        loop {
            let mut c = [0.0; MAX_DIM];
            for i in 0..d {
                c[i] = ((lo[i] + blk[i] * BLOCK) as f64 + 0.5 * (BLOCK - 1) as f64) * h;
            }
            let dc = self.curve.dist(&Point::new(&c[..d]));
            if dc - half_diag < hi_d && dc + half_diag >= lo_d {
                let all_in = dc - half_diag >= lo_d && dc + half_diag < hi_d;
                let mut cur = [0i64; MAX_DIM];
                loop {
                    let mut q = [0.0; MAX_DIM];
                    for i in 0..d {
                        q[i] = (lo[i] + blk[i] * BLOCK + cur[i]) as f64 * h;
                    }
                    let p = Point::new(&q[..d]);
                    if self.bbox.contains(&p) && (all_in || {
                        let dp = self.curve.dist(&p);
                        dp >= lo_d && dp < hi_d
                    }) {
                        out.push(p);
                    }
                    if !odometer(&mut cur, d, BLOCK) {
                        break;
                    }
                }
            }
            if !odometer_to(&mut blk, &nb, d) {
                break;
            }
        }
        out.sort_by(|a, b| a.lex_cmp(b));
        out
    }

    /// Pairs violating locality with x drawn from the given levels.
    pub fn locality_violations(&self, levels: std::ops::RangeInclusive<usize>, first_only: bool) -> Vec<(NetPoint, NetPoint)> {
        let mut out = Vec::new();
        for k in levels {
            if k > self.k_max {
                break;
            }
            let r = 10.0 * self.pitch(k);
            for x in self.materialize_level(k) {
                let dx = self.curve.dist(&x);
                for j in self.levels_meeting(dx - r, dx + r) {
                    if j + 1 >= k && j <= k + 1 {
                        continue;
                    }
                    for y in self.points_in_ball(&Ball::new(x, r), j) {
                        out.push((NetPoint { p: x, level: k }, NetPoint { p: y, level: j }));
                        if first_only {
                            return out;
                        }
                    }
                }
            }
        }
        out
    }

    /// Nearest net point to `p` among levels `levels`, searching within `r`.
    pub fn nearest(&self, p: &Point, levels: std::ops::RangeInclusive<usize>, r: f64) -> Option<NetPoint> {
        let ball = Ball::new(*p, r);
        let mut best: Option<(f64, NetPoint)> = None;
        for j in levels {
            for q in self.points_in_ball(&ball, j) {
                let d = q.dist2(p);
                if best.is_none_or(|(bd, bp)| d < bd || (d == bd && q.lex_cmp(&bp.p).is_lt())) {
                    best = Some((d, NetPoint { p: q, level: j }));
                }
            }
        }
        best.map(|b| b.1)
    }
}

/// k with 2^{-k-1} ≤ r < 2^{-k}, for 0 < r < 1.
pub fn dyadic_level(r: f64) -> Option<usize> {
    if !(r > 0.0 && r < 1.0) || !r.is_normal() {
        return None;
    }
    let e = ((r.to_bits() >> 52) & 0x7ff) as i64 - 1023;
    // r ∈ [2^e, 2^{e+1})
    Some((-e - 1) as usize)
}


#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct WhitneyAudit {
    /// Levels materialized for the exhaustive checks.
    pub levels_checked: usize,
    pub points_checked: usize,
    pub annulus: usize,
    pub separation: usize,
    pub locality: usize,
    pub locality_certified: bool,
    /// Sampled off-curve points with no net point of a neighbouring level within 4 pitches.
    pub covering: usize,
    pub covering_samples: usize,
}

impl WhitneyAudit {
    pub fn ok(&self) -> bool {
        self.annulus == 0 && self.separation == 0 && self.locality == 0 && self.covering == 0
    }
}

impl WhitneyNet {
    /// Exhaustive annulus, separation and locality checks on levels
    /// 0..=`max_level`, and a seeded covering check on `samples` points.
    pub fn audit(&self, max_level: usize, samples: usize, seed: u64) -> WhitneyAudit {
        use rand::{Rng, SeedableRng};
        let top = max_level.min(self.k_max);
        let mut a = WhitneyAudit { levels_checked: top + 1, locality_certified: self.locality_certified(), ..Default::default() };
        for k in 0..=top {
            let pts = self.materialize_level(k);
            let (lo, hi) = (2f64.powi(-(k as i32) - 1), 2f64.powi(-(k as i32)));
            let grid = PointGrid::from_points(self.pitch(k), &pts);
            for p in &pts {
                let d = self.curve.dist(p);
                if !(d >= lo && d < hi) {
                    a.annulus += 1;
                }
                a.separation += grid.within(p, self.pitch(k)).iter().filter(|&&i| pts[i] != *p && pts[i].dist(p) < self.pitch(k)).count();
            }
            a.points_checked += pts.len();
        }
        a.separation /= 2;
        a.locality = self.locality_violations(0..=top, false).len();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let floor = 2f64.powi(-(self.k_max as i32) - 1);
        let mut tries = 0;
        while a.covering_samples < samples && tries < 1000 * samples {
            tries += 1;
            let c: Vec<f64> = (0..self.d).map(|i| rng.gen_range(self.bbox.lo[i]..self.bbox.hi[i])).collect();
            let p = Point::new(&c);
            let d = self.curve.dist(&p);
            let Some(k) = self.level_of_distance(d) else { continue };
            if d < floor {
                continue;
            }
            a.covering_samples += 1;
            let r = 4.0 * self.pitch(k);
            if self.nearest(&p, k.saturating_sub(1)..=(k + 1).min(self.k_max), r).is_none() {
                a.covering += 1;
            }
        }
        a
    }
}
