//! Renders an augmented hairpin to hairpin.svg in the working directory.

use quasiconvex::dump::Dump;
use quasiconvex::render::{self, Layers};
use quasiconvex::{corpus, run_pipeline, Config, Result};

fn main() -> Result<()> {
    let (c, r) = run_pipeline(&corpus::hairpin(0.05), "hairpin-0.05", &Config::default(), 0)?;
    let dump = Dump::from_construction(&c);
    let (doc, warnings) = render::render(&dump, r.stretch.worst.as_ref(), Layers { cubes: true, ..Layers::default() })?;
    for w in warnings {
        eprintln!("warning: {w}");
    }
    render::save(&doc, std::path::Path::new("hairpin.svg"))?;
    println!("wrote hairpin.svg ({} bridges)", dump.bridges.len());
    Ok(())
}
