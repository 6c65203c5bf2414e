use quasiconvex::{corpus, run_pipeline, Config};

fn schema() -> jsonschema::JSONSchema {
    let text = include_str!("../schema/report.schema.json");
    let v: serde_json::Value = serde_json::from_str(text).unwrap();
    jsonschema::JSONSchema::compile(&v).unwrap()
}

#[test]
fn reports_match_schema() {
    let s = schema();
    for (name, curve) in corpus::standard() {
        let (_, r) = run_pipeline(&curve, &name, &Config::default(), 0).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        let msgs: Vec<String> = match s.validate(&v) {
            Ok(()) => Vec::new(),
            Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
        };
        assert!(msgs.is_empty(), "{name}: {msgs:?}");
    }
}

#[test]
fn reruns_are_byte_identical() {
    let c = corpus::zigzag(8);
    let a = run_pipeline(&c, "z", &Config::default(), 5).unwrap().1.to_json();
    let b = run_pipeline(&c, "z", &Config::default(), 5).unwrap().1.to_json();
    assert_eq!(a, b);
}

#[test]
fn segment_is_untouched() {
    let (c, r) = run_pipeline(&corpus::segment(), "segment", &Config::default(), 0).unwrap();
    assert!(c.bridges.is_empty());
    assert!((r.lengths.ratio - 1.0).abs() <= 1e-12);
    assert!((r.stretch.max - 1.0).abs() <= 1e-9);
    assert!(r.passed);
}

#[test]
fn circle_raw_stretch_is_half_pi() {
    let (_, r) = run_pipeline(&corpus::circle(256), "circle", &Config::default(), 0).unwrap();
    assert!((r.raw_stretch.max - std::f64::consts::FRAC_PI_2).abs() < 2e-3, "{}", r.raw_stretch.max);
}
