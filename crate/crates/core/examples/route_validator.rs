//! Constructive routes between points of Γ on a hairpin, against the graph distance.

use quasiconvex::network::Workspace;
use quasiconvex::route::{self, route_pairs};
use quasiconvex::{construct, corpus, Config, Result};

fn main() -> Result<()> {
    let c = construct(&corpus::hairpin(0.05), &Config::default())?;
    let mut ws = Workspace::new();
    for (x, y) in route_pairs(&c, 12, 7) {
        let r = route::route(&c, &mut ws, &x, &y)?;
        println!(
            "|x-y| {:.4}  route {:.4}  graph {:.4}  rounds {:2}  sigma monotone {}  fallback {}",
            r.euclid(),
            r.length,
            r.oracle,
            r.trace.len(),
            r.sigma_monotone(),
            r.used_fallback()
        );
    }
    Ok(())
}
