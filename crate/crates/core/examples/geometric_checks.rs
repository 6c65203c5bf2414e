//! Synthetic checks of the cone-splicing inequality and the clearance point,
//! plus the brute-force width and spanning-tree checkers.

use quasiconvex::synthetic::{clearance_check, splice_check};
use quasiconvex::{oracle, Config};

fn main() {
    let phi = Config::default().phi;
    for d in [2, 3] {
        let s = splice_check(d, phi, 10_000, d as u64);
        let c = clearance_check(d, 10_000, 10 + d as u64);
        println!("d={d}: splice {} violations (margin {:.3e}), clearance {} violations (margin {:.3e})", s.violations, s.min_margin, c.violations, c.min_margin);
    }
    for check in oracle::run_all(0) {
        println!("{:28} cases {:4} worst {:.3e} tolerance {:.0e} passed {}", check.name, check.cases, check.worst, check.tolerance, check.passed());
    }
}
