//! Synthetic test curves.

use std::f64::consts::{PI, TAU};

use crate::geom::{Point, PolyCurve};

/// Unit segment along the x axis.
pub fn segment() -> PolyCurve {
    PolyCurve::polyline(vec![Point::xy(0.0, 0.0), Point::xy(1.0, 0.0)]).unwrap()
}

/// Sawtooth with `n` teeth edges, step 1/8 and amplitude 1/4.
pub fn zigzag(n: usize) -> PolyCurve {
    PolyCurve::polyline((0..=n).map(|i| Point::xy(i as f64 * 0.125, (i % 2) as f64 * 0.25)).collect()).unwrap()
}

/// Regular `n`-gon of radius 1/2.
pub fn circle(n: usize) -> PolyCurve {
    PolyCurve::polygon(
        (0..n)
            .map(|i| {
                let t = TAU * i as f64 / n as f64;
                Point::xy(0.5 * t.cos(), 0.5 * t.sin())
            })
            .collect(),
    )
    .unwrap()
}

/// Archimedean spiral r = 0.05 + bθ over `turns` turns ending at radius 1/2,
/// with vertices equally spaced in arclength.
pub fn spiral(turns: f64, vertices: usize) -> PolyCurve {
    let th_end = TAU * turns;
    let b = 0.45 / th_end;
    let r = |th: f64| 0.05 + b * th;
    // cumulative arclength on a fine grid
    let fine = 200_000;
    let mut cum = vec![0.0; fine + 1];
    let pt = |th: f64| Point::xy(r(th) * th.cos(), r(th) * th.sin());
    for i in 1..=fine {
        let (a, c) = (th_end * (i - 1) as f64 / fine as f64, th_end * i as f64 / fine as f64);
        cum[i] = cum[i - 1] + pt(a).dist(&pt(c));
    }
    let total = cum[fine];
    let mut pts = Vec::with_capacity(vertices);
    let mut j = 0;
    for v in 0..vertices {
        let s = total * v as f64 / (vertices - 1) as f64;
        while j < fine && cum[j + 1] < s {
            j += 1;
        }
        let th = if j >= fine { th_end } else {
            let f = if cum[j + 1] > cum[j] { (s - cum[j]) / (cum[j + 1] - cum[j]) } else { 0.0 };
            th_end * (j as f64 + f.clamp(0.0, 1.0)) / fine as f64
        };
        pts.push(pt(th));
    }
    PolyCurve::polyline(pts).unwrap()
}

/// Two parallel arms of length 1 joined by a fold of length `gap`.
pub fn hairpin(gap: f64) -> PolyCurve {
    PolyCurve::polyline(vec![Point::xy(0.0, 0.0), Point::xy(1.0, 0.0), Point::xy(1.0, gap), Point::xy(0.0, gap)]).unwrap()
}

/// Circular arc of radius 1 and opening `angle`, as `n` edges.
pub fn arc(angle: f64, n: usize) -> PolyCurve {
    PolyCurve::polyline(
        (0..=n)
            .map(|i| {
                let t = angle * (i as f64 / n as f64 - 0.5) + PI / 2.0;
                Point::xy(t.cos(), t.sin())
            })
            .collect(),
    )
    .unwrap()
}

/// Hairpin gaps used by the quasiconvexity acceptance check.
pub const HAIRPIN_GAPS: [f64; 3] = [0.2, 0.05, 0.0125];

/// The named corpus: segment, zigzag-8, circle-256, spiral-3turn and the hairpins.
pub fn standard() -> Vec<(String, PolyCurve)> {
    let mut v = vec![
        ("segment".to_string(), segment()),
        ("zigzag-8".to_string(), zigzag(8)),
        ("circle-256".to_string(), circle(256)),
        ("spiral-3turn".to_string(), spiral(3.0, 384)),
    ];
    for g in HAIRPIN_GAPS {
        v.push((format!("hairpin-{g}"), hairpin(g)));
    }
    v
}

/// Looks up a corpus curve by name (`hairpin-<gap>` accepts any gap).
pub fn by_name(name: &str) -> Option<PolyCurve> {
    if let Some(g) = name.strip_prefix("hairpin-") {
        return g.parse().ok().filter(|g: &f64| *g > 0.0).map(hairpin);
    }
    match name {
        "arc" => Some(arc(1.0, 64)),
        _ => standard().into_iter().find(|(n, _)| n == name).map(|(_, c)| c),
    }
}
