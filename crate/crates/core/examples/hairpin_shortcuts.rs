//! Stretch of the hairpins before and after augmentation.

use quasiconvex::{corpus, run_pipeline, Config, Result};

fn main() -> Result<()> {
    let cfg = Config::default();
    for gap in corpus::HAIRPIN_GAPS {
        let (c, r) = run_pipeline(&corpus::hairpin(gap), &format!("hairpin-{gap}"), &cfg, 0)?;
        println!(
            "gap {gap:<7} raw stretch {:7.2}  augmented {:6.2}  length ratio {:.3}  bridges {:4}  passed {}",
            r.raw_stretch.max,
            r.stretch.max,
            r.lengths.ratio,
            c.bridges.len(),
            r.passed
        );
    }
    Ok(())
}
