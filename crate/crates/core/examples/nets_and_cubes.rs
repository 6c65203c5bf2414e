//! Net hierarchy, complement net and cube tree of a circle, with their audits.

use std::sync::Arc;

use quasiconvex::cubes::CubeTree;
use quasiconvex::nets::{self, NetHierarchy, WhitneyNet};
use quasiconvex::spatial::CurveIndex;
use quasiconvex::{corpus, Config, Result};

fn main() -> Result<()> {
    let cfg = Config::default();
    let (curve, norm) = nets::normalize(&corpus::circle(256))?;
    let k_max = nets::default_k_max(&curve);
    println!("scale 2^{}, k_max {k_max}", norm.exponent);

    let hierarchy = NetHierarchy::build(&curve, k_max)?;
    for k in 0..=k_max {
        println!("  level {k:2}: {:6} net points", hierarchy.level_len(k));
    }
    println!("net audit ok: {}", hierarchy.audit().ok());

    let (whitney, tried) = WhitneyNet::select_k0(Arc::new(CurveIndex::new(&curve)), cfg.k0, k_max, cfg.bbox_pad);
    let wa = whitney.audit(3, 1000, 0);
    println!("complement net: k0 {} (tried {tried:?}), audit ok: {}", whitney.k0(), wa.ok());

    let tree = CubeTree::build(&hierarchy, cfg.j, cfg.c_q)?;
    println!("cube tree: {} cubes, depth {}", tree.nodes().len(), tree.depth());
    for m in 0..=tree.depth() {
        println!("  level {m}: {:5} cubes of scale {:.3e}", tree.level(m).len(), tree.scale(m));
    }
    let audit = tree.audit(&hierarchy, &hierarchy.samples.points);
    println!("cube audit ok: {} (max extent ratio {:.3})", audit.ok(), audit.max_extent_ratio);
    Ok(())
}
