//! Brute-force checkers for β widths and for the point-cloud spanning tree.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geom::{grid_min_width_with, min_width_line, Dsu, Point, DIRECTION_GRID};
use crate::io::euclidean_mst;

/// Relative agreement required between a width and its oracle.
pub const WIDTH_TOL: f64 = 1e-3;
pub const MST_TOL: f64 = 1e-12;

/// Half-width of the thinnest planar slab over `n` equally spaced directions,
/// each bracket refined by golden-section search.
pub fn planar_grid_width(points: &[Point], n: usize) -> f64 {
    let half = |th: f64| {
        let (s, c) = th.sin_cos();
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for p in points {
            let v = -p.get(0) * s + p.get(1) * c;
            lo = lo.min(v);
            hi = hi.max(v);
        }
        (hi - lo) / 2.0
    };
    let step = std::f64::consts::PI / n as f64;
    let (mut best, mut at) = (f64::INFINITY, 0.0);
    for i in 0..n {
        let w = half(i as f64 * step);
        if w < best {
            best = w;
            at = i as f64 * step;
        }
    }
    let (mut a, mut b) = (at - step, at + step);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..80 {
        let (c, d) = (b - g * (b - a), a + g * (b - a));
        if half(c) < half(d) {
            b = d;
        } else {
            a = c;
        }
    }
    best.min(half((a + b) / 2.0))
}

/// Total length of the minimum spanning tree by Kruskal over all pairs.
pub fn kruskal_mst_length(points: &[Point]) -> f64 {
    let n = points.len();
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            pairs.push((points[i].dist(&points[j]), i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut dsu = Dsu::new(n);
    let mut total = 0.0;
    for (d, i, j) in pairs {
        if dsu.union(i, j) {
            total += d;
        }
    }
    total
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    /// Largest relative discrepancy seen.
    pub worst: f64,
    pub tolerance: f64,
}

impl OracleCheck {
    fn new(name: &str, tolerance: f64) -> OracleCheck {
        OracleCheck { name: name.into(), tolerance, ..Default::default() }
    }

    fn record(&mut self, value: f64, oracle: f64) {
        let rel = (value - oracle).abs() / oracle.abs().max(1e-12);
        self.cases += 1;
        self.worst = self.worst.max(rel);
        if rel > self.tolerance {
            self.failures += 1;
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn cloud(rng: &mut ChaCha8Rng, d: usize, n: usize) -> Vec<Point> {
    (0..n).map(|_| Point::new(&(0..d).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<_>>())).collect()
}

/// Planar widths against the 4096-direction grid, on `sets` clouds of 3..=12 points.
pub fn check_planar_widths(sets: usize, seed: u64) -> OracleCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = OracleCheck::new("planar_width_vs_grid", WIDTH_TOL);
    for _ in 0..sets {
        let n = rng.gen_range(3..=12);
        let pts = cloud(&mut rng, 2, n);
        c.record(min_width_line(&pts).1, planar_grid_width(&pts, DIRECTION_GRID));
    }
    c
}

/// Spatial widths at the default grid density against twice that density.
pub fn check_spatial_widths(sets: usize, seed: u64) -> OracleCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = OracleCheck::new("spatial_width_doubled_grid", WIDTH_TOL);
    for _ in 0..sets {
        let n = rng.gen_range(3..=12);
        let pts = cloud(&mut rng, 3, n);
        c.record(min_width_line(&pts).1, grid_min_width_with(&pts, 2 * DIRECTION_GRID).1);
    }
    c
}

/// Prim spanning trees against exhaustive Kruskal on clouds of 2..=`max_n` points.
pub fn check_mst(sets: usize, max_n: usize, seed: u64) -> OracleCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = OracleCheck::new("mst_vs_kruskal", MST_TOL);
    for _ in 0..sets {
        let n = rng.gen_range(2..=max_n.max(2));
        let d = rng.gen_range(2..=3);
        let pts = cloud(&mut rng, d, n);
        let prim: f64 = euclidean_mst(&pts).iter().map(|[a, b]| pts[*a].dist(&pts[*b])).sum();
        c.record(prim, kruskal_mst_length(&pts));
    }
    c
}

/// The full oracle suite run by the `oracle` subcommand.
pub fn run_all(seed: u64) -> Vec<OracleCheck> {
    vec![check_planar_widths(200, seed), check_spatial_widths(50, seed.wrapping_add(1)), check_mst(100, 16, seed.wrapping_add(2))]
}
