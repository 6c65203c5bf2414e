use std::sync::Arc;

use quasiconvex::corpus;
use quasiconvex::geom::{Ball, Point};
use quasiconvex::nets::*;
use quasiconvex::spatial::CurveIndex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn normalization_is_power_of_two_and_exact() {
    for (name, c) in corpus::standard() {
        let (n, norm) = normalize(&c).unwrap();
        let d = n.diameter();
        assert!(d > 0.5 && d <= 1.0, "{name}: {d}");
        for (a, b) in c.vertices().iter().zip(n.vertices()) {
            assert_eq!(norm.inverse(b), *a);
        }
    }
    let big = corpus::segment().transformed(1000.0, Point::xy(3.0, 4.0));
    let (n, norm) = normalize(&big).unwrap();
    assert_eq!(norm.exponent, -10);
    assert!(n.diameter() <= 1.0);
}

#[test]
fn segment_levels() {
    let c = corpus::segment();
    let nets = NetHierarchy::build(&c, 6).unwrap();
    assert_eq!(nets.level(0), vec![Point::xy(0.0, 0.0)]);
    let l1 = nets.level(1);
    assert!(l1.len() == 2 || l1.len() == 3, "{}", l1.len());
    // independent greedy over 10^4 uniform samples, seeded with the same root
    let samples: Vec<f64> = (0..=10_000).map(|i| i as f64 / 10_000.0).collect();
    let mut greedy = vec![0.0f64];
    for &s in &samples {
        if greedy.iter().all(|g| (g - s).abs() >= 0.5) {
            greedy.push(s);
        }
    }
    assert_eq!(greedy.len(), l1.len());
    for i in 0..l1.len() {
        for j in i + 1..l1.len() {
            assert!(l1[i].dist(&l1[j]) >= 0.5);
        }
    }
    for s in samples {
        let p = Point::xy(s, 0.0);
        assert!(l1.iter().map(|q| q.dist(&p)).fold(f64::INFINITY, f64::min) <= 0.5);
    }
}

#[test]
fn circle_audit_passes() {
    let (c, _) = normalize(&corpus::circle(256)).unwrap();
    let nets = NetHierarchy::build(&c, 8).unwrap();
    let a = nets.audit();
    assert!(a.ok(), "{a:?}");
}

#[test]
fn nets_are_deterministic() {
    let (c, _) = normalize(&corpus::spiral(3.0, 384)).unwrap();
    let a = NetHierarchy::build(&c, 7).unwrap();
    let b = NetHierarchy::build(&c, 7).unwrap();
    for k in 0..=7 {
        assert_eq!(a.level(k), b.level(k));
    }
}

#[test]
fn dyadic_levels() {
    assert_eq!(dyadic_level(0.5), Some(0));
    assert_eq!(dyadic_level(0.9999), Some(0));
    assert_eq!(dyadic_level(0.25), Some(1));
    assert_eq!(dyadic_level(0.4999), Some(1));
    assert_eq!(dyadic_level(1.0), None);
    assert_eq!(dyadic_level(0.0), None);
}

#[test]
fn whitney_segment_level_zero() {
    let c = corpus::segment();
    let idx = Arc::new(CurveIndex::new(&c));
    let net = WhitneyNet::new(idx.clone(), 3, 6, 1.5);
    let pts = net.materialize_level(0);
    assert!(!pts.is_empty());
    for (i, p) in pts.iter().enumerate() {
        let d = idx.dist(p);
        assert!((0.5..1.0).contains(&d));
        assert_eq!(net.level_of(p), Some(0));
        for q in &pts[i + 1..] {
            assert!(p.dist(q) >= 0.125);
        }
    }
}

#[test]
fn whitney_k0_selection_and_locality_on_hairpin() {
    let (c, _) = normalize(&corpus::hairpin(0.05)).unwrap();
    let idx = Arc::new(CurveIndex::new(&c));
    let (net, tried) = WhitneyNet::select_k0(idx.clone(), 3, 8, 1.5);
    assert_eq!(tried.first(), Some(&3));
    // k0 = 3 must be rejected by an explicit violating pair
    let bad = WhitneyNet::new(idx.clone(), 3, 8, 1.5);
    assert!(!bad.locality_violations(0..=2, true).is_empty());
    assert!(net.k0() > 3);
    assert!(net.locality_violations(0..=3, false).is_empty());
}

#[test]
fn whitney_covering_bound() {
    let (c, _) = normalize(&corpus::hairpin(0.05)).unwrap();
    let idx = Arc::new(CurveIndex::new(&c));
    let net = WhitneyNet::new(idx.clone(), 6, 9, 1.5);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    while checked < 1000 {
        let k = rng.gen_range(0..=9usize);
        let p = Point::xy(rng.gen_range(-0.6..1.1), rng.gen_range(-0.6..0.6));
        let d = idx.dist(&p);
        if !(d < 2f64.powi(-(k as i32)) && d >= 2f64.powi(-(net.k_max() as i32) - 1)) {
            continue;
        }
        checked += 1;
        let kk = net.level_of_distance(d).unwrap();
        let r = 4.0 * net.pitch(kk);
        let found = net.nearest(&p, kk.saturating_sub(1)..=(kk + 1).min(net.k_max()), r);
        assert!(found.is_some(), "{p:?} at level {kk}");
    }
}

#[test]
fn whitney_range_query_matches_linear_scan() {
    let c = corpus::circle(64);
    let idx = Arc::new(CurveIndex::new(&c));
    let net = WhitneyNet::new(idx, 4, 5, 1.5);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for j in 0..=2 {
        let all = net.materialize_level(j);
        for _ in 0..30 {
            let b = Ball::new(Point::xy(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)), rng.gen_range(0.01..0.8));
            let mut fast = net.points_in_ball(&b, j);
            let mut slow: Vec<Point> = all.iter().copied().filter(|p| b.contains(p)).collect();
            fast.sort_by(|a, b| a.lex_cmp(b));
            slow.sort_by(|a, b| a.lex_cmp(b));
            assert_eq!(fast, slow);
        }
        let far = Ball::new(Point::xy(40.0, 40.0), 1.0);
        assert!(net.points_in_ball(&far, j).is_empty());
        let huge = Ball::new(Point::xy(0.0, 0.0), 10.0);
        assert_eq!(net.points_in_ball(&huge, j).len(), all.len());
    }
}

/// Every lattice point of pitch h inside the box, kept by its distance band.
fn naive_level(net: &WhitneyNet, j: usize) -> Vec<Point> {
    let h = net.pitch(j);
    let reach = 2f64.powi(-(j as i32));
    let bb = net.bbox();
    let (x0, x1) = ((bb.lo[0] / h).ceil() as i64, (bb.hi[0] / h).floor() as i64);
    let (y0, y1) = ((bb.lo[1] / h).ceil() as i64, (bb.hi[1] / h).floor() as i64);
    let curve = net.curve();
    let mut out = Vec::new();
    for ix in x0..=x1 {
        for iy in y0..=y1 {
            let p = Point::xy(ix as f64 * h, iy as f64 * h);
            let d = curve.dist(&p);
            if bb.contains(&p) && d >= reach / 2.0 && d < reach {
                out.push(p);
            }
        }
    }
    out.sort_by(|a, b| a.lex_cmp(b));
    out
}

#[test]
fn materialized_levels_match_lattice_scan() {
    for c in [corpus::hairpin(0.05), corpus::zigzag(8)] {
        let (c, _) = normalize(&c).unwrap();
        let net = WhitneyNet::new(Arc::new(CurveIndex::new(&c)), 3, 5, 1.5);
        for j in 0..=3 {
            assert_eq!(net.materialize_level(j), naive_level(&net, j), "level {j}");
        }
    }
}
