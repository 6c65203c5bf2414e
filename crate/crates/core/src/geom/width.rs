use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::point::Point;
use super::shapes::{Ball, Line};

/// Number of quasi-uniform directions scanned when d > 2.
pub const DIRECTION_GRID: usize = 4096;

/// Angular resolution at which direction refinement stops.
pub const REFINE_STEP_MIN: f64 = 1e-10;

/// Upper bound on pattern-search rounds per start.
pub const REFINE_POLL_CAP: usize = 400;

/// Point sets larger than this are thinned before the d > 2 search.
const THIN_LIMIT: usize = 512;

/// β of `points` inside the closed ball `ball`.
pub fn beta(ball: &Ball, points: &[Point]) -> f64 {
    let inside: Vec<Point> = points.iter().copied().filter(|p| ball.contains(p)).collect();
    beta_of_subset(&inside, ball.diameter())
}

/// β for points already restricted to a ball of diameter `diam`.
pub fn beta_of_subset(points: &[Point], diam: f64) -> f64 {
    if diam <= 0.0 || points.len() <= 2 {
        return 0.0;
    }
    let (_, w) = min_width_line(points);
    (w / diam).clamp(0.0, 0.5)
}

/// A line minimizing the largest distance to `points`, and that distance.
pub fn min_width_line(points: &[Point]) -> (Line, f64) {
    assert!(!points.is_empty(), "min_width_line needs a point");
    let d = points[0].dim();
    if points.len() == 1 {
        return (Line::new(points[0], Point::axis(d, 0)), 0.0);
    }
    if points.len() == 2 {
        return (Line::through(points[0], points[1]), 0.0);
    }
    if d == 2 {
        planar_min_width(points)
    } else {
        grid_min_width(points)
    }
}

fn cross(o: &Point, a: &Point, b: &Point) -> f64 {
    (a.get(0) - o.get(0)) * (b.get(1) - o.get(1)) - (a.get(1) - o.get(1)) * (b.get(0) - o.get(0))
}

/// Counter-clockwise convex hull (monotone chain), collinear points dropped.
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| a.lex_cmp(b));
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn planar_min_width(points: &[Point]) -> (Line, f64) {
    let hull = convex_hull(points);
    let h = hull.len();
    if h <= 2 {
        let line = if h == 2 { Line::through(hull[0], hull[1]) } else { Line::new(hull[0], Point::axis(2, 0)) };
        return (line, 0.0);
    }
    let area = |i: usize, j: usize, k: usize| cross(&hull[i], &hull[j], &hull[k]).abs();
    let mut best_w = f64::INFINITY;
    let mut best_edge = 0;
    let mut j = 1;
    for i in 0..h {
        let i1 = (i + 1) % h;
        if j == i || j == i1 {
            j = (i1 + 1) % h;
        }
        while area(i, i1, (j + 1) % h) > area(i, i1, j) {
            j = (j + 1) % h;
        }
        let len = hull[i].dist(&hull[i1]);
        if len > 0.0 {
            let w = area(i, i1, j) / len;
            if w < best_w {
                best_w = w;
                best_edge = i;
            }
        }
    }
    let a = hull[best_edge];
    let b = hull[(best_edge + 1) % h];
    let dir = (b - a).normalized().unwrap_or(Point::axis(2, 0));
    let normal = Point::xy(-dir.get(1), dir.get(0));
    // the slab is flush with edge (a,b) and extends to the far side
    let side = hull.iter().map(|p| (*p - a).dot(&normal)).fold(0.0f64, |acc, v| if v.abs() > acc.abs() { v } else { acc });
    let anchor = a + normal * (side / 2.0);
    (Line::new(anchor, dir), best_w / 2.0)
}

/// Quasi-uniform directions on the upper half of the unit sphere in R^d.
pub fn direction_grid(d: usize, n: usize) -> Vec<Point> {
    match d {
        2 => (0..n)
            .map(|i| {
                let t = std::f64::consts::PI * i as f64 / n as f64;
                Point::xy(t.cos(), t.sin())
            })
            .collect(),
        3 => {
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            (0..n)
                .map(|i| {
                    let z = (i as f64 + 0.5) / n as f64;
                    let r = (1.0 - z * z).sqrt();
                    let th = golden * i as f64;
                    Point::xyz(r * th.cos(), r * th.sin(), z)
                })
                .collect()
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_d1ec);
            (0..n)
                .map(|_| {
                    let mut v = Point::zero(d);
                    for i in 0..d {
                        let (a, b): (f64, f64) = (rng.gen::<f64>().max(1e-300), rng.gen());
                        v.set(i, (-2.0 * a.ln()).sqrt() * (std::f64::consts::TAU * b).cos());
                    }
                    let mut u = v.normalized().unwrap_or(Point::axis(d, 0));
                    if u.get(d - 1) < 0.0 {
                        u = -u;
                    }
                    u
                })
                .collect()
        }
    }
}

/// Best sup-distance over lines with unit direction `u`, and the anchor achieving it.
///
/// Equal to the radius of the smallest ball enclosing the projections onto `u`'s
/// orthogonal complement.
pub fn directional_width(points: &[Point], u: &Point) -> (Point, f64) {
    let basis = u.orthonormal_complement();
    let m = basis.len();
    if m == 1 {
        let n = basis[0];
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for p in points {
            let v = p.dot(&n);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        return (n * ((lo + hi) / 2.0), (hi - lo) / 2.0);
    }
    let proj: Vec<Vec<f64>> = points.iter().map(|p| basis.iter().map(|b| p.dot(b)).collect()).collect();
    let (c, r) = min_enclosing_ball(&proj);
    let mut anchor = Point::zero(u.dim());
    for (k, b) in basis.iter().enumerate() {
        anchor = anchor + *b * c[k];
    }
    (anchor, r)
}

fn grid_min_width(points: &[Point]) -> (Line, f64) {
    grid_min_width_with(points, DIRECTION_GRID)
}

/// Direction-grid search with `n` directions followed by local refinement.
pub fn grid_min_width_with(points: &[Point], n: usize) -> (Line, f64) {
    let d = points[0].dim();
    let mut pts: Vec<Point> = points.to_vec();
    if pts.len() > THIN_LIMIT {
        let step = pts.len().div_ceil(THIN_LIMIT);
        pts = pts.iter().step_by(step).copied().collect();
    }
    let dirs = direction_grid(d, n);
    let mut scored: Vec<(f64, usize)> =
        dirs.iter().enumerate().map(|(i, u)| (directional_width(&pts, u).1, i)).collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let spacing = match d {
        3 => (4.0 * std::f64::consts::PI / (2.0 * n as f64)).sqrt(),
        _ => (1.0 / n as f64).powf(1.0 / (d as f64 - 1.0)) * 2.0,
    };
    let mut best: Option<(Point, f64)> = None;
    for &(_, i) in scored.iter().take(4) {
        let (u, w) = refine_direction(&pts, dirs[i], spacing);
        if best.is_none_or(|(_, bw)| w < bw) {
            best = Some((u, w));
        }
    }
    let (u, w) = best.expect("grid non-empty");
    let (anchor, _) = directional_width(&pts, &u);
    (Line::new(anchor, u), w)
}

/// Pattern search on the sphere: polls rotating tangent directions at a step
/// that halves whenever no poll improves, down to `REFINE_STEP_MIN`.
pub fn refine_direction(points: &[Point], start: Point, spacing: f64) -> (Point, f64) {
    const POLLS: usize = 16;
    let d = start.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0d1e_c7ed);
    let mut u = start;
    let mut w = directional_width(points, &u).1;
    let mut step = spacing;
    let mut turn = 0.0;
    let mut rounds = 0;
    while step > REFINE_STEP_MIN && rounds < REFINE_POLL_CAP {
        rounds += 1;
        let basis = u.orthonormal_complement();
        let mut best: Option<(Point, f64)> = None;
        for i in 0..POLLS {
            let mut t = Point::zero(d);
            if basis.len() == 2 {
                let th = turn + std::f64::consts::TAU * i as f64 / POLLS as f64;
                t = basis[0] * th.cos() + basis[1] * th.sin();
            } else {
                for b in &basis {
                    t = t + *b * rng.gen_range(-1.0..1.0);
                }
            }
            let Some(t) = t.normalized() else { continue };
            let Some(v) = (u * step.cos() + t * step.sin()).normalized() else { continue };
            let wv = directional_width(points, &v).1;
            if wv < best.map_or(w, |b| b.1) - 1e-14 * w {
                best = Some((v, wv));
            }
        }
        match best {
            Some((v, wv)) => {
                u = v;
                w = wv;
            }
            None => step *= 0.5,
        }
        turn += 0.618_033_988_749_894_9 * std::f64::consts::TAU / POLLS as f64;
    }
    (u, w)
}

/// Smallest enclosing ball of points given as coordinate vectors (Welzl, move-to-front).
pub fn min_enclosing_ball(points: &[Vec<f64>]) -> (Vec<f64>, f64) {
    let m = points[0].len();
    let mut pts: Vec<Vec<f64>> = points.to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    pts.shuffle(&mut rng);
    let mut boundary: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
    let n = pts.len();
    let (c, r2) = mtf(&mut pts, n, &mut boundary, m);
    (c, r2.max(0.0).sqrt())
}

fn d2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn mtf(pts: &mut Vec<Vec<f64>>, n: usize, boundary: &mut Vec<Vec<f64>>, m: usize) -> (Vec<f64>, f64) {
    let (mut c, mut r2) = circumball(boundary, m);
    if boundary.len() == m + 1 {
        return (c, r2);
    }
    let mut i = 0;
    while i < n {
        if d2(&pts[i], &c) > r2 * (1.0 + 1e-12) + 1e-300 {
            boundary.push(pts[i].clone());
            let (c2, r22) = mtf(pts, i, boundary, m);
            boundary.pop();
            c = c2;
            r2 = r22;
            let p = pts.remove(i);
            pts.insert(0, p);
        }
        i += 1;
    }
    (c, r2)
}

/// Smallest ball with all of `b` on its boundary (circumball in their affine hull).
fn circumball(b: &[Vec<f64>], m: usize) -> (Vec<f64>, f64) {
    match b.len() {
        0 => (vec![0.0; m], -1.0),
        1 => (b[0].clone(), 0.0),
        _ => {
            let k = b.len() - 1;
            let p0 = &b[0];
            let vs: Vec<Vec<f64>> = b[1..].iter().map(|p| p.iter().zip(p0).map(|(x, y)| x - y).collect()).collect();
            let mut a = vec![vec![0.0; k + 1]; k];
            for i in 0..k {
                for j in 0..k {
                    a[i][j] = 2.0 * dot(&vs[i], &vs[j]);
                }
                a[i][k] = dot(&vs[i], &vs[i]);
            }
            match solve(&mut a, k) {
                Some(lam) => {
                    let mut c = p0.clone();
                    for (i, v) in vs.iter().enumerate() {
                        for j in 0..m {
                            c[j] += lam[i] * v[j];
                        }
                    }
                    let r2 = d2(&c, p0);
                    (c, r2)
                }
                None => {
                    // affinely dependent support: use the farthest pair
                    let mut best = (0, 0, -1.0);
                    for i in 0..b.len() {
                        for j in i + 1..b.len() {
                            let dd = d2(&b[i], &b[j]);
                            if dd > best.2 {
                                best = (i, j, dd);
                            }
                        }
                    }
                    let c: Vec<f64> = b[best.0].iter().zip(&b[best.1]).map(|(x, y)| (x + y) / 2.0).collect();
                    let r2 = b.iter().map(|p| d2(p, &c)).fold(0.0, f64::max);
                    (c, r2)
                }
            }
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Gaussian elimination with partial pivoting on an augmented k x (k+1) system.
fn solve(a: &mut [Vec<f64>], k: usize) -> Option<Vec<f64>> {
    let scale = a.iter().flat_map(|r| r[..k].iter()).fold(0.0f64, |s, v| s.max(v.abs()));
    if scale == 0.0 {
        return None;
    }
    for col in 0..k {
        let piv = (col..k).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-12 * scale {
            return None;
        }
        a.swap(col, piv);
        for r in 0..k {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..=k {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    Some((0..k).map(|i| a[i][k] / a[i][i]).collect())
}
