use quasiconvex::geom::Segment;
use quasiconvex::network::EdgeOrigin;
use quasiconvex::{construct, corpus, Config};

/// After assembly, bridge edges meet each other only at shared vertices.
#[test]
fn bridge_edges_meet_only_at_vertices() {
    for (gap, cfg) in [(0.05, Config::default()), (0.2, Config { eps: 0.05, delta: 0.5, ..Config::default() })] {
        let c = construct(&corpus::hairpin(gap), &cfg).unwrap();
        let net = &c.network;
        let tol = 1e-12 * net.curve().scale();
        let edges: Vec<(u32, u32, Segment)> = net
            .alive_edges()
            .filter(|(_, e)| e.origin == EdgeOrigin::Bridge)
            .map(|(i, e)| (e.a, e.b, net.segment(i)))
            .collect();
        for (i, (a1, b1, s)) in edges.iter().enumerate() {
            for (a2, b2, t) in &edges[i + 1..] {
                if s.length() <= tol || t.length() <= tol || s.dist_to_segment(t) > tol {
                    continue;
                }
                let shared = [a1, b1].iter().any(|v| *v == a2 || *v == b2);
                let (sa, tb, _) = s.closest_params(t);
                let ends = (sa <= 1e-9 || sa >= 1.0 - 1e-9) && (tb <= 1e-9 || tb >= 1.0 - 1e-9);
                assert!(shared && ends, "gap {gap}: {s:?} meets {t:?}");
            }
        }
        assert!(net.is_connected());
    }
}

#[test]
fn gamma_length_is_preserved() {
    let c = construct(&corpus::hairpin(0.0125), &Config::default()).unwrap();
    let (g, _) = c.network.lengths();
    let len = c.curve.curve().length();
    assert!((g - len).abs() <= 1e-9 * len);
}
