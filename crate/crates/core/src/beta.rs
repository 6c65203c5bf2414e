//! Cached β evaluations over curve samples, the TST functional and flatness probes.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::geom::{beta_of_subset, min_width_line, Ball, Dsu, Point, Segment, MAX_DIM};
use crate::nets::{CurveSamples, NetHierarchy};
use crate::spatial::CurveIndex;

type BallKey = ([u64; MAX_DIM], u64);

/// β_Γ of balls, evaluated on the dense samples and memoized by exact ball.
#[derive(Debug)]
pub struct BetaEngine {
    samples: Arc<CurveSamples>,
    cache: RwLock<HashMap<BallKey, f64>>,
}

impl BetaEngine {
    pub fn new(samples: Arc<CurveSamples>) -> BetaEngine {
        BetaEngine { samples, cache: RwLock::new(HashMap::new()) }
    }

    pub fn samples(&self) -> &Arc<CurveSamples> {
        &self.samples
    }

    /// β of the samples inside `ball`, without caching.
    pub fn compute(&self, ball: &Ball) -> f64 {
        let pts = self.samples.points_in_ball(ball);
        beta_of_subset(&pts, ball.diameter())
    }

    /// β_Γ(ball), memoized.
    pub fn beta(&self, ball: &Ball) -> f64 {
        let key = (ball.center.key(), ball.radius.to_bits());
        if let Some(v) = self.cache.read().unwrap().get(&key) {
            return *v;
        }
        let v = self.compute(ball);
        self.cache.write().unwrap().insert(key, v);
        v
    }

    /// β_Γ(MB) for B = B(center, radius).
    pub fn beta_of_ball(&self, center: Point, radius: f64, m: f64) -> f64 {
        self.beta(&Ball::new(center, radius * m))
    }

    /// Upper bound on the discretization error of β(ball).
    pub fn sampling_error(&self, ball: &Ball) -> f64 {
        if ball.radius > 0.0 {
            self.samples.pitch / ball.diameter()
        } else {
            0.0
        }
    }

    pub fn cached_len(&self) -> usize {
        self.cache.read().unwrap().len()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelTerm {
    pub level: usize,
    pub balls: usize,
    pub sum: f64,
}

/// β_Γ = |Γ| + Σ_k Σ_{B∈ℬ_k} β²(MB)|B|, truncated at k_max.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TstFunctional {
    pub diameter: f64,
    pub m: f64,
    pub levels: Vec<LevelTerm>,
    pub total: f64,
}

impl TstFunctional {
    pub fn scaled(&self, s: f64) -> TstFunctional {
        TstFunctional {
            diameter: self.diameter * s,
            m: self.m,
            levels: self.levels.iter().map(|l| LevelTerm { sum: l.sum * s, ..l.clone() }).collect(),
            total: self.total * s,
        }
    }
}

/// Assembles the TST functional over ℬ_k = {B(ξ, 2^{-k}) : ξ ∈ Δ_k}.
pub fn compute_beta_sum(nets: &NetHierarchy, engine: &BetaEngine, diameter: f64, m: f64) -> TstFunctional {
    let mut levels = Vec::with_capacity(nets.k_max + 1);
    let mut total = diameter;
    for k in 0..=nets.k_max {
        let r = 2f64.powi(-(k as i32));
        let mut sum = 0.0;
        for xi in nets.level(k) {
            let b = engine.beta_of_ball(xi, r, m);
            sum += b * b * 2.0 * r;
        }
        total += sum;
        levels.push(LevelTerm { level: k, balls: nets.level_len(k), sum });
    }
    TstFunctional { diameter, m, levels, total }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlatnessProbe {
    /// Largest diameter of a component of Γ∩B, over |B|.
    pub component_diameter_fraction: f64,
    /// Two-sided Hausdorff distance between Γ∩B and L∩B for the best line L.
    pub hausdorff_line_gap: f64,
}

/// Pieces of the curve inside a closed ball, with their edge ids.
pub fn clip_to_ball(curve: &CurveIndex, b: &Ball) -> Vec<(usize, Segment)> {
    let mut out = Vec::new();
    for e in curve.edges_within(&b.center, b.radius) {
        let s = curve.curve().segment(e);
        if let Some(piece) = clip_segment(&s, b) {
            out.push((e, piece));
        }
    }
    out
}

/// The part of a segment inside a closed ball.
pub fn clip_segment(s: &Segment, b: &Ball) -> Option<Segment> {
    let d = s.b - s.a;
    let f = s.a - b.center;
    let a = d.norm2();
    if a == 0.0 {
        return b.contains(&s.a).then_some(*s);
    }
    let bq = 2.0 * f.dot(&d);
    let c = f.norm2() - b.radius * b.radius;
    let disc = bq * bq - 4.0 * a * c;
    if disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    let t0 = ((-bq - sq) / (2.0 * a)).max(0.0);
    let t1 = ((-bq + sq) / (2.0 * a)).min(1.0);
    (t0 <= t1).then(|| Segment::new(s.at(t0), s.at(t1)))
}

pub fn flatness_probe(curve: &CurveIndex, samples: &CurveSamples, b: &Ball) -> FlatnessProbe {
    let pieces = clip_to_ball(curve, b);
    if pieces.is_empty() || b.radius == 0.0 {
        return FlatnessProbe { component_diameter_fraction: 0.0, hausdorff_line_gap: 0.0 };
    }
    // components: pieces meeting at shared points
    let n = pieces.len();
    let mut dsu = Dsu::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if pieces[i].1.dist_to_segment(&pieces[j].1) <= 1e-12 * b.radius {
                dsu.union(i, j);
            }
        }
    }
    let mut comp: HashMap<usize, Vec<Point>> = HashMap::new();
    for (i, (_, s)) in pieces.iter().enumerate() {
        let e = comp.entry(dsu.find(i)).or_default();
        e.push(s.a);
        e.push(s.b);
    }
    let mut best_diam: f64 = 0.0;
    for pts in comp.values() {
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                best_diam = best_diam.max(pts[i].dist(&pts[j]));
            }
        }
    }
    let mut pts: Vec<Point> = samples.points_in_ball(b);
    for (_, s) in &pieces {
        pts.push(s.a);
        pts.push(s.b);
    }
    let (line, _) = min_width_line(&pts);
    let gap_curve = pieces.iter().map(|(_, s)| line.dist(&s.a).max(line.dist(&s.b))).fold(0.0, f64::max);
    // chord L ∩ B
    let foot = line.project(&b.center);
    let h2 = b.radius * b.radius - foot.dist2(&b.center);
    let mut gap_line: f64 = 0.0;
    if h2 > 0.0 {
        let h = h2.sqrt();
        for i in 0..=256 {
            let q = foot + line.direction * (h * (2.0 * i as f64 / 256.0 - 1.0));
            let dq = pieces.iter().map(|(_, s)| s.dist(&q)).fold(f64::INFINITY, f64::min);
            gap_line = gap_line.max(dq);
        }
    }
    FlatnessProbe { component_diameter_fraction: best_diam / b.diameter(), hausdorff_line_gap: gap_curve.max(gap_line) }
}
