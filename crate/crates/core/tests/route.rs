use quasiconvex::network::Workspace;
use quasiconvex::route::{self, route_pairs};
use quasiconvex::{construct, corpus, Config};

#[test]
fn routes_are_no_shorter_than_the_graph_distance() {
    for gap in [0.2, 0.05] {
        let c = construct(&corpus::hairpin(gap), &Config::default()).unwrap();
        let mut ws = Workspace::new();
        for (x, y) in route_pairs(&c, 24, 1) {
            let r = route::route(&c, &mut ws, &x, &y).unwrap();
            let d = r.euclid();
            assert!(r.length >= r.oracle - 1e-9 * d, "route {} below graph {}", r.length, r.oracle);
            assert!(r.length >= d * (1.0 - 1e-12));
            assert!(r.sigma_monotone());
            if !r.used_fallback() {
                assert!(r.length <= 50.0 * d);
            }
        }
    }
}

#[test]
fn segment_routes_are_straight() {
    let c = construct(&corpus::segment(), &Config::default()).unwrap();
    let mut ws = Workspace::new();
    for (x, y) in route_pairs(&c, 8, 2) {
        let r = route::route(&c, &mut ws, &x, &y).unwrap();
        assert!((r.length - r.euclid()).abs() <= 1e-12);
    }
}
