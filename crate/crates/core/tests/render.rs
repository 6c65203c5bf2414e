use std::collections::HashSet;

use quasiconvex::dump::Dump;
use quasiconvex::render::{self, Layers, FLAT_BAD_COLOR, GAMMA_COLOR, NON_FLAT_COLOR};
use quasiconvex::{construct, corpus, Config, PolyCurve};
use svg::parser::Event;

fn svg_text(curve: &PolyCurve, cfg: &Config, layers: Layers) -> String {
    let d = Dump::from_construction(&construct(curve, cfg).unwrap());
    render::render(&d, None, layers).unwrap().0.to_string()
}

/// (element name, id of the enclosing group, stroke) for every path, line and circle.
fn elements(text: &str) -> Vec<(String, String, String)> {
    let mut groups: Vec<String> = Vec::new();
    let mut out = Vec::new();
    for ev in svg::read(text).unwrap() {
        match ev {
            Event::Tag("g", svg::node::element::tag::Type::Start, attrs) => {
                groups.push(attrs.get("id").map(|v| v.to_string()).unwrap_or_default());
            }
            Event::Tag("g", svg::node::element::tag::Type::End, _) => {
                groups.pop();
            }
            Event::Tag(name @ ("path" | "line" | "circle"), _, attrs) => {
                let stroke = attrs.get("stroke").map(|v| v.to_string()).unwrap_or_default();
                out.push((name.to_string(), groups.last().cloned().unwrap_or_default(), stroke));
            }
            _ => {}
        }
    }
    out
}

#[test]
fn segment_renders_as_one_path() {
    let els = elements(&svg_text(&corpus::segment(), &Config::default(), Layers::default()));
    assert_eq!(els.len(), 1);
    assert_eq!(els[0], ("path".to_string(), "gamma".to_string(), GAMMA_COLOR.to_string()));
}

#[test]
fn bridges_are_coloured_by_provenance() {
    let cfg = Config { eps: 0.05, delta: 0.5, ..Config::default() };
    let els = elements(&svg_text(&corpus::hairpin(0.2), &cfg, Layers::default()));
    let colors: HashSet<&str> = els.iter().filter(|e| e.1 == "bridges").map(|e| e.2.as_str()).collect();
    assert!(colors.contains(FLAT_BAD_COLOR) && colors.contains(NON_FLAT_COLOR), "{colors:?}");
}

#[test]
fn layers_toggle() {
    let cfg = Config::default();
    let curve = corpus::hairpin(0.05);
    let with = elements(&svg_text(&curve, &cfg, Layers { cubes: true, ..Layers::default() }));
    let without = elements(&svg_text(&curve, &cfg, Layers { bridges: false, ..Layers::default() }));
    assert!(with.iter().any(|e| e.1 == "cubes"));
    assert!(with.iter().any(|e| e.1 == "bridges"));
    assert!(!without.iter().any(|e| e.1 == "bridges" || e.1 == "cubes"));
}

#[test]
fn spatial_input_warns() {
    let curve = PolyCurve::polyline(vec![quasiconvex::Point::xyz(0.0, 0.0, 0.0), quasiconvex::Point::xyz(1.0, 0.0, 0.5)]).unwrap();
    let d = Dump::from_construction(&construct(&curve, &Config::default()).unwrap());
    let (_, warnings) = render::render(&d, None, Layers::default()).unwrap();
    assert_eq!(warnings.len(), 1);
}
