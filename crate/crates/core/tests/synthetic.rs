use quasiconvex::synthetic::{clearance_check, splice_check};
use quasiconvex::Config;

#[test]
fn splice_inequality_holds_at_the_configured_angle() {
    let phi = Config::default().phi;
    for d in [2, 3, 4] {
        let c = splice_check(d, phi, 10_000, 40 + d as u64);
        assert_eq!(c.violations, 0, "{c:?}");
        assert!(c.min_margin >= 0.0);
    }
}

#[test]
fn splice_check_detects_wide_cones() {
    let c = splice_check(2, 1.2, 10_000, 9);
    assert!(c.violations > 0, "{c:?}");
}

#[test]
fn clearance_point_leaves_gamma() {
    for d in [2, 3] {
        let c = clearance_check(d, 10_000, 70 + d as u64);
        assert_eq!(c.violations, 0, "{c:?}");
    }
}
