//! Cube labels on the corpus curves under a few (ε, δ) choices.

use quasiconvex::cubes::CubeClass;
use quasiconvex::{construct, corpus, Config};

fn main() -> quasiconvex::Result<()> {
    for (eps, delta) in [(0.1, 0.3), (0.02, 0.9), (0.01, 0.99)] {
        let cfg = Config { eps, delta, ..Config::default() };
        for name in ["zigzag-8", "circle-256", "arc", "hairpin-0.2"] {
            let c = construct(&corpus::by_name(name).unwrap(), &cfg)?;
            let cl = &c.classification;
            println!(
                "eps {eps:<5} delta {delta:<5} {name:<12} cubes {:5}  flat-good {:5}  flat-bad {:4}  non-flat {:4}  bridges {}",
                cl.classes.len(),
                cl.count(CubeClass::FlatGood),
                cl.count(CubeClass::FlatBad),
                cl.count(CubeClass::NonFlat),
                c.bridges.len()
            );
        }
    }
    Ok(())
}
