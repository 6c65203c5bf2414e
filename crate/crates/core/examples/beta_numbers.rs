//! β-numbers of small point sets and of a polyline inside balls.

use quasiconvex::geom::{beta, min_width_line, Ball, Point};
use quasiconvex::nets::CurveSamples;
use quasiconvex::{corpus, Result};

fn main() -> Result<()> {
    let flat = [Point::xy(-1.0, 0.0), Point::xy(0.0, 0.0), Point::xy(1.0, 0.0)];
    let bent = [Point::xy(-1.0, 0.0), Point::xy(0.0, 0.5), Point::xy(1.0, 0.0)];
    let unit = Ball::new(Point::xy(0.0, 0.0), 1.0);
    println!("collinear triple: beta = {:.6}", beta(&unit, &flat));
    println!("bent triple:      beta = {:.6}", beta(&unit, &bent));
    let (line, w) = min_width_line(&bent);
    println!("  best line through {:?} along {:?}, half-width {w:.6}", line.anchor, line.direction);

    let spatial = [Point::xyz(0.0, 0.0, 0.0), Point::xyz(1.0, 0.1, 0.0), Point::xyz(2.0, 0.0, 0.1), Point::xyz(3.0, -0.1, 0.0)];
    let (_, w3) = min_width_line(&spatial);
    println!("3D polyline vertices: best-line half-width {w3:.6}");

    let hairpin = corpus::hairpin(0.05);
    let samples = CurveSamples::new(&hairpin, 1e-3);
    for r in [0.02, 0.05, 0.2, 0.6] {
        let b = Ball::new(Point::xy(0.9, 0.0), r);
        println!("hairpin arm at (0.9, 0): radius {r:<5} beta = {:.4}", beta(&b, &samples.points_in_ball(&b)));
    }
    Ok(())
}
