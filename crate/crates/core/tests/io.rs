use quasiconvex::io::{connect_cloud, euclidean_mst, parse_point_cloud, parse_polyline, InputSpec};
use quasiconvex::{Error, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Total length of a minimum spanning tree by exhaustive Kruskal.
fn kruskal(points: &[Point]) -> f64 {
    let n = points.len();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            pairs.push((points[i].dist(&points[j]), i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut comp: Vec<usize> = (0..n).collect();
    let mut total = 0.0;
    for (d, i, j) in pairs {
        let (ci, cj) = (comp[i], comp[j]);
        if ci != cj {
            total += d;
            for c in comp.iter_mut() {
                if *c == cj {
                    *c = ci;
                }
            }
        }
    }
    total
}

#[test]
fn two_point_cloud_is_one_segment() {
    let c = connect_cloud(&parse_point_cloud("0,0\n3,4\n").unwrap()).unwrap();
    assert_eq!(c.edges().len(), 1);
    assert_eq!(c.length(), 5.0);
}

#[test]
fn collinear_triple_chains_in_order() {
    let c = connect_cloud(&parse_point_cloud("x,y\n0,0\n2,0\n1,0\n").unwrap()).unwrap();
    assert_eq!(c.edges().len(), 2);
    assert_eq!(c.length(), 2.0);
}

#[test]
fn prim_matches_kruskal() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let pts: Vec<Point> = (0..16).map(|_| Point::xy(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let prim: f64 = euclidean_mst(&pts).iter().map(|[a, b]| pts[*a].dist(&pts[*b])).sum();
        assert!((prim - kruskal(&pts)).abs() <= 1e-12 * prim);
    }
}

#[test]
fn duplicate_points_merge() {
    let c = connect_cloud(&parse_point_cloud("0,0\n0,0\n1,1\n").unwrap()).unwrap();
    assert_eq!(c.vertices().len(), 2);
    assert!(matches!(connect_cloud(&parse_point_cloud("1,1\n1,1\n").unwrap()), Err(Error::EmptyCurve)));
}

#[test]
fn polyline_edges_default_to_a_path() {
    let c = parse_polyline(r#"{"vertices": [[0,0],[1,0],[1,1]]}"#).unwrap();
    assert_eq!(c.edges(), &[[0, 1], [1, 2]]);
    let c = parse_polyline(r#"{"vertices": [[0,0],[1,0],[1,1]], "edges": [[0,2],[1,2]]}"#).unwrap();
    assert_eq!(c.edges().len(), 2);
}

#[test]
fn malformed_inputs_are_input_errors() {
    for text in [
        r#"{"vertices": [[0,0,0],[1,0]]}"#,
        r#"{"vertices": [[0]]}"#,
        r#"{"vertices": [[0,0],[1,0]], "colour": 1}"#,
        r#"{"vertices": [[0,0],[1,0]], "edges": [[0,5]]}"#,
        "not json",
    ] {
        assert!(parse_polyline(text).unwrap_err().is_input_error(), "{text}");
    }
    assert!(parse_point_cloud("0,0\n1,x\n").unwrap_err().is_input_error());
    assert!(InputSpec::from_path(std::path::Path::new("curve.txt")).unwrap_err().is_input_error());
}
