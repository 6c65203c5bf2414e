//! A CSV point cloud joined by its spanning tree, then augmented.

use quasiconvex::io::{connect_cloud, parse_point_cloud};
use quasiconvex::{run_pipeline, Config, Result};

fn main() -> Result<()> {
    let mut csv = String::from("x,y\n");
    for i in 0..40 {
        let t = i as f64 / 39.0;
        csv += &format!("{},{}\n", t, 0.0);
        csv += &format!("{},{}\n", t, 0.03);
    }
    csv += "1.02,0.015\n";
    let points = parse_point_cloud(&csv)?;
    let curve = connect_cloud(&points)?;
    println!("{} points, spanning tree of {} edges, length {:.4}", points.len(), curve.edges().len(), curve.length());
    let (_, r) = run_pipeline(&curve, "cloud", &Config::default(), 0)?;
    println!("stretch {:.2} -> {:.2}, length ratio {:.3}", r.raw_stretch.max, r.stretch.max, r.lengths.ratio);
    Ok(())
}
