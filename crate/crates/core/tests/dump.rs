use quasiconvex::dump::Dump;
use quasiconvex::report::verify_dump;
use quasiconvex::{construct, corpus, Config, PolyCurve};

fn built(curve: &PolyCurve) -> Dump {
    Dump::from_construction(&construct(curve, &Config::default()).unwrap())
}

#[test]
fn json_round_trip_is_lossless() {
    let d = built(&corpus::hairpin(0.05));
    let again = Dump::from_json(&d.to_json()).unwrap();
    assert_eq!(again, d);
    assert_eq!(again.to_json(), d.to_json());
}

#[test]
fn vertices_are_stored_in_input_units() {
    // a hairpin 3x the corpus size: not a power of two, so the stored curve must be rescaled back
    let input = corpus::hairpin(0.05).transformed(3.0, quasiconvex::Point::xy(5.0, -2.0));
    let d = built(&input);
    for (a, b) in d.curve.vertices.iter().zip(input.vertices()) {
        for (x, y) in a.iter().zip(b.coords()) {
            assert!((x - y).abs() <= 1e-12 * y.abs().max(1.0), "{a:?} vs {b:?}");
        }
    }
    let g = d.graph().unwrap();
    for (v, stored) in g.vertices.iter().zip(&d.vertices) {
        let back = d.normalization.inverse(v);
        for (x, y) in back.coords().iter().zip(stored) {
            assert_eq!(x, y);
        }
    }
}

#[test]
fn reloaded_dump_verifies() {
    let d = Dump::from_json(&built(&corpus::hairpin(0.2)).to_json()).unwrap();
    let r = verify_dump(&d, 0).unwrap();
    assert!(r.passed, "{:?}", r.failures());
    assert_eq!(r.bridges, d.bridges.len());
}

#[test]
fn replayed_labels_match_stored() {
    let d = built(&corpus::circle(256));
    assert_eq!(d.replay_labels().unwrap(), d.stored_labels());
}

#[test]
fn malformed_dumps_are_input_errors() {
    let d = built(&corpus::segment());
    let mut v: serde_json::Value = serde_json::from_str(&d.to_json()).unwrap();
    v["edge_origin"] = serde_json::json!([]);
    let e = Dump::from_json(&v.to_string()).unwrap_err();
    assert!(e.is_input_error());
    assert!(Dump::from_json("{").unwrap_err().is_input_error());
}
