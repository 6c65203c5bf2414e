use proptest::prelude::*;
use quasiconvex::geom::*;
use quasiconvex::spatial::CurveIndex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Brute-force half-width over 4096 planar directions plus golden refinement.
fn planar_grid_oracle(pts: &[Point]) -> f64 {
    let hw = |th: f64| {
        let n = (-th.sin(), th.cos());
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for p in pts {
            let v = p.get(0) * n.0 + p.get(1) * n.1;
            lo = lo.min(v);
            hi = hi.max(v);
        }
        (hi - lo) / 2.0
    };
    let n = 4096;
    let step = std::f64::consts::PI / n as f64;
    let mut best = (f64::INFINITY, 0.0);
    for i in 0..n {
        let th = i as f64 * step;
        let w = hw(th);
        if w < best.0 {
            best = (w, th);
        }
    }
    // golden-section in the neighbouring bracket
    let (mut a, mut b) = (best.1 - step, best.1 + step);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..80 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if hw(c) < hw(d) {
            b = d;
        } else {
            a = c;
        }
    }
    best.0.min(hw((a + b) / 2.0))
}

/// Smallest enclosing circle by exhaustive pair/triple enumeration.
fn brute_circle(pts: &[(f64, f64)]) -> f64 {
    let covers = |c: (f64, f64), r: f64| pts.iter().all(|p| ((p.0 - c.0).powi(2) + (p.1 - c.1).powi(2)).sqrt() <= r * (1.0 + 1e-12) + 1e-15);
    let mut best = f64::INFINITY;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let c = ((pts[i].0 + pts[j].0) / 2.0, (pts[i].1 + pts[j].1) / 2.0);
            let r = ((pts[i].0 - c.0).powi(2) + (pts[i].1 - c.1).powi(2)).sqrt();
            if r < best && covers(c, r) {
                best = r;
            }
            for k in j + 1..pts.len() {
                let (a, b, cc) = (pts[i], pts[j], pts[k]);
                let d = 2.0 * (a.0 * (b.1 - cc.1) + b.0 * (cc.1 - a.1) + cc.0 * (a.1 - b.1));
                if d.abs() < 1e-14 {
                    continue;
                }
                let a2 = a.0 * a.0 + a.1 * a.1;
                let b2 = b.0 * b.0 + b.1 * b.1;
                let c2 = cc.0 * cc.0 + cc.1 * cc.1;
                let ux = (a2 * (b.1 - cc.1) + b2 * (cc.1 - a.1) + c2 * (a.1 - b.1)) / d;
                let uy = (a2 * (cc.0 - b.0) + b2 * (a.0 - cc.0) + c2 * (b.0 - a.0)) / d;
                let r = ((a.0 - ux).powi(2) + (a.1 - uy).powi(2)).sqrt();
                if r < best && covers((ux, uy), r) {
                    best = r;
                }
            }
        }
    }
    best
}

/// Spatial half-width over a dense Fibonacci direction set, brute-force circles.
fn spatial_oracle(pts: &[Point], n: usize) -> f64 {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let mut best = f64::INFINITY;
    for i in 0..n {
        let z = (i as f64 + 0.5) / n as f64;
        let r = (1.0 - z * z).sqrt();
        let th = golden * i as f64;
        let u = [r * th.cos(), r * th.sin(), z];
        // basis of the orthogonal plane
        let a = if u[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
        let dot = a[0] * u[0] + a[1] * u[1] + a[2] * u[2];
        let mut e1 = [a[0] - dot * u[0], a[1] - dot * u[1], a[2] - dot * u[2]];
        let n1 = (e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]).sqrt();
        e1 = [e1[0] / n1, e1[1] / n1, e1[2] / n1];
        let e2 = [u[1] * e1[2] - u[2] * e1[1], u[2] * e1[0] - u[0] * e1[2], u[0] * e1[1] - u[1] * e1[0]];
        let proj: Vec<(f64, f64)> = pts
            .iter()
            .map(|p| {
                let c = p.coords();
                (c[0] * e1[0] + c[1] * e1[1] + c[2] * e1[2], c[0] * e2[0] + c[1] * e2[1] + c[2] * e2[2])
            })
            .collect();
        best = best.min(brute_circle(&proj));
    }
    best
}

fn random_points(rng: &mut ChaCha8Rng, d: usize, n: usize) -> Vec<Point> {
    (0..n).map(|_| Point::new(&(0..d).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<_>>())).collect()
}

#[test]
fn dist_on_edge_is_zero() {
    let c = PolyCurve::polyline(vec![Point::xy(-1.0, 0.0), Point::xy(1.0, 0.0)]).unwrap();
    assert!(dist_point_to_curve(&Point::xy(0.3, 0.0), &c) < 1e-15);
    assert!((dist_point_to_curve(&Point::xy(0.0, 1.0), &c) - 1.0).abs() < 1e-15);
}

#[test]
fn dist_matches_dense_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let verts: Vec<Point> = (0..=64)
        .map(|i| {
            let t = i as f64 / 64.0 * 5.0;
            Point::xy(t.cos() * (1.0 + 0.3 * t), t.sin() * (1.0 + 0.3 * t))
        })
        .collect();
    let c = PolyCurve::polyline(verts.clone()).unwrap();
    let idx = CurveIndex::new(&c);
    for _ in 0..50 {
        let p = Point::xy(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let mut dense = f64::INFINITY;
        for w in verts.windows(2) {
            for k in 0..=20000 {
                dense = dense.min(w[0].lerp(&w[1], k as f64 / 20000.0).dist(&p));
            }
        }
        let exact = dist_point_to_curve(&p, &c);
        // the dense oracle overestimates by at most half the sample spacing
        let spacing = verts.windows(2).map(|w| w[0].dist(&w[1])).fold(0.0, f64::max) / 20000.0;
        assert!(exact <= dense + 1e-12 && dense - exact <= spacing / 2.0 + 1e-9, "{exact} {dense}");
        assert!((idx.dist(&p) - exact).abs() < 1e-12);
    }
}

#[test]
fn beta_trivial_cases() {
    let b = Ball::new(Point::xy(0.0, 0.0), 1.0);
    let line: Vec<Point> = (0..5).map(|i| Point::xy(i as f64 * 0.2 - 0.4, 0.5 * (i as f64 * 0.2 - 0.4))).collect();
    assert!(beta(&b, &line) < 1e-12);
    assert_eq!(beta(&b, &[]), 0.0);
    assert_eq!(beta(&Ball::new(Point::xy(0.0, 0.0), 0.0), &[Point::xy(0.0, 0.0)]), 0.0);
}

#[test]
fn beta_triangle_example() {
    let b = Ball::new(Point::xy(0.0, 0.0), 1.0);
    let k = [Point::xy(-1.0, 0.0), Point::xy(1.0, 0.0), Point::xy(0.0, 0.5)];
    let oracle = planar_grid_oracle(&k) / b.diameter();
    // frozen: half of the base-to-apex height 0.5, over |B| = 2
    assert!((oracle - 0.125).abs() < 1e-9);
    assert!((beta(&b, &k) - 0.125).abs() < 1e-12);
}

#[test]
fn min_width_small_cases() {
    let (_, w) = min_width_line(&[Point::xy(0.0, 0.0), Point::xy(3.0, 1.0)]);
    assert_eq!(w, 0.0);
    let sq = [Point::xy(0.0, 0.0), Point::xy(1.0, 0.0), Point::xy(1.0, 1.0), Point::xy(0.0, 1.0)];
    let (line, w) = min_width_line(&sq);
    assert!((planar_grid_oracle(&sq) - 0.5).abs() < 1e-9);
    assert!((w - 0.5).abs() < 1e-12);
    let sup = sq.iter().map(|p| line.dist(p)).fold(0.0, f64::max);
    assert!((sup - w).abs() < 1e-12);
}

#[test]
fn planar_width_matches_grid_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let n = rng.gen_range(3..=12);
        let pts = random_points(&mut rng, 2, n);
        let (line, w) = min_width_line(&pts);
        let o = planar_grid_oracle(&pts);
        assert!((w - o).abs() <= 1e-6 * o.max(1e-12), "{w} vs {o}");
        let sup = pts.iter().map(|p| line.dist(p)).fold(0.0, f64::max);
        assert!((sup - w).abs() < 1e-9);
    }
}

#[test]
fn spatial_width_matches_dense_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..3 {
        let pts = random_points(&mut rng, 3, 10);
        let (line, w) = min_width_line(&pts);
        let o = spatial_oracle(&pts, 65536);
        assert!((w - o).abs() <= 1e-3 * o, "{w} vs {o}");
        let sup = pts.iter().map(|p| line.dist(p)).fold(0.0, f64::max);
        assert!((sup - w).abs() <= 1e-9 * w.max(1.0));
    }
}

#[test]
fn region_examples() {
    let x = Point::xy(0.0, 0.0);
    let y = Point::xy(1.0, 0.0);
    let mid = x.midpoint(&y);
    assert!(in_r_rho(&mid, &x, &y, 0.0).unwrap());
    assert!(!in_r_rho(&x, &x, &y, 0.0).unwrap());
    assert!(!in_r_rho(&(mid + Point::xy(0.0, 0.6)), &x, &y, 0.1).unwrap());
    assert!(in_r_rho(&x, &x, &x, 0.0).is_err());
    assert!(in_s_lambda(&mid, &x, &y, 0.0).unwrap());
    assert!(!in_s_lambda(&x, &x, &y, 0.0).unwrap());
    // equidistant at 0.72 from both ends
    let h = (0.72f64 * 0.72 - 0.25).sqrt();
    assert!(!in_s_lambda(&Point::xy(0.5, h), &x, &y, 0.3).unwrap());
    assert!(in_s_lambda(&x, &y, &y, 0.0).is_err());
}

/// Floods the region {w : |w−ξ| < α dist(w,Γ)} on a grid from cells touching ξ.
fn flood_cone(curve: &PolyCurve, xi: Point, alpha: f64, z: Point, h: f64, half: f64) -> bool {
    let n = (2.0 * half / h).round() as i64;
    let cell = |i: i64, j: i64| Point::xy(-half + i as f64 * h, -half + j as f64 * h);
    let inside = |p: &Point| p.dist(&xi) < alpha * curve.dist(p);
    let mut seen = std::collections::HashSet::new();
    let mut stack = Vec::new();
    for i in 0..=n {
        for j in 0..=n {
            let p = cell(i, j);
            if p.dist(&xi) < 2.0 * h && inside(&p) {
                seen.insert((i, j));
                stack.push((i, j));
            }
        }
    }
    while let Some((i, j)) = stack.pop() {
        for (di, dj) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
            let (a, b) = (i + di, j + dj);
            if a < 0 || b < 0 || a > n || b > n || seen.contains(&(a, b)) {
                continue;
            }
            if inside(&cell(a, b)) {
                seen.insert((a, b));
                stack.push((a, b));
            }
        }
    }
    let zi = ((z.get(0) + half) / h).round() as i64;
    let zj = ((z.get(1) + half) / h).round() as i64;
    seen.contains(&(zi, zj))
}

#[test]
fn cone_examples() {
    let seg = PolyCurve::polyline(vec![Point::xy(-1.0, 0.0), Point::xy(1.0, 0.0)]).unwrap();
    let idx = CurveIndex::new(&seg);
    let o = Point::xy(0.0, 0.0);
    assert!(!in_cone(&o, &o, 4.0, &idx).unwrap());
    assert!(in_cone(&Point::xy(0.0, 0.3), &o, 4.0, &idx).unwrap());
    assert!(in_cone(&Point::xy(0.0, 0.3), &Point::xy(0.0, 0.1), 4.0, &idx).is_err());

    let circle = PolyCurve::polygon(
        (0..64).map(|i| {
            let t = std::f64::consts::TAU * i as f64 / 64.0;
            Point::xy(t.cos(), t.sin())
        }).collect(),
    )
    .unwrap();
    let cidx = CurveIndex::new(&circle);
    let xi = Point::xy(1.0, 0.0);
    for z in [Point::xy(-1.5, 0.0), Point::xy(0.0, 0.0), Point::xy(1.5, 0.0), Point::xy(0.3, 0.5)] {
        let oracle = flood_cone(&circle, xi, 4.0, z, 0.01, 2.0);
        assert_eq!(in_cone(&z, &xi, 4.0, &cidx).unwrap(), oracle, "z = {z:?}");
    }
}

#[test]
fn lambda_figure_inclusion() {
    // R_λ(x,y) ⊆ B(x,cr) ∪ B(y,cr) ∪ S_λ(x,y) with c = 0.2, λ = 0.01, r = |x−y|
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (c, lam) = (0.2, 0.01);
    let mut tested = 0;
    while tested < 10_000 {
        let x = Point::xy(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let y = Point::xy(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let r = x.dist(&y);
        if r < 1e-3 {
            continue;
        }
        let mid = x.midpoint(&y);
        let p = mid + Point::xy(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * r;
        if !in_r_rho(&p, &x, &y, lam).unwrap() {
            continue;
        }
        tested += 1;
        let ok = p.dist(&x) < c * r || p.dist(&y) < c * r || in_s_lambda(&p, &x, &y, lam).unwrap();
        assert!(ok, "{p:?} {x:?} {y:?}");
    }
}

fn arb_points(d: usize) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec(prop::collection::vec(-1.0f64..1.0, d), 0..14)
        .prop_map(|v| v.into_iter().map(|c| Point::new(&c)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn beta_bounded_and_monotone(pts in arb_points(2), drop in 0usize..14, r in 0.1f64..2.0) {
        let b = Ball::new(Point::xy(0.1, -0.1), r);
        let full = beta(&b, &pts);
        prop_assert!((0.0..=0.5).contains(&full));
        let mut fewer = pts.clone();
        if drop < fewer.len() { fewer.remove(drop); }
        prop_assert!(beta(&b, &fewer) <= full + 1e-12);
    }

    #[test]
    fn beta_similarity_invariant(pts in arb_points(2), s in 0.01f64..100.0, th in 0.0f64..6.28, tx in -5.0f64..5.0) {
        let b = Ball::new(Point::xy(0.0, 0.0), 1.2);
        let f = |p: &Point| Point::xy(s * (th.cos() * p.get(0) - th.sin() * p.get(1)) + tx, s * (th.sin() * p.get(0) + th.cos() * p.get(1)) - tx);
        let moved: Vec<Point> = pts.iter().map(f).collect();
        let mb = Ball::new(f(&b.center), b.radius * s);
        let (a, c) = (beta(&b, &pts), beta(&mb, &moved));
        // points on the ball boundary may flip membership under rounding
        let boundary = pts.iter().any(|p| (p.dist(&b.center) - b.radius).abs() < 1e-9);
        prop_assume!(!boundary);
        prop_assert!((a - c).abs() < 1e-9, "{} {}", a, c);
    }

    #[test]
    fn beta_bounded_spatial(pts in arb_points(3)) {
        let b = Ball::new(Point::zero(3), 1.0);
        let v = beta(&b, &pts);
        prop_assert!((0.0..=0.5).contains(&v));
    }

    #[test]
    fn r_rho_monotone(px in -2.0f64..2.0, py in -2.0f64..2.0, r1 in 0.0f64..1.0, dr in 0.0f64..1.0) {
        let (x, y, p) = (Point::xy(0.0, 0.0), Point::xy(1.0, 0.3), Point::xy(px, py));
        if in_r_rho(&p, &x, &y, r1).unwrap() {
            prop_assert!(in_r_rho(&p, &x, &y, r1 + dr).unwrap());
        }
    }
}
