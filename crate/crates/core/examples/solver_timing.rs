//! Timing probe: feasibility of the pure base system by dimension. This
//! is the solver's worst case — no zero fixes, so presolve removes
//! nothing and the simplex works on the full system.

use std::time::Instant;
use subiso_core::model::build_base_system;
use subiso_core::solve::{feasibility_with, SolveConfig};

fn main() {
    let config = SolveConfig::default();
    // n = 8 runs beyond any sensible probe budget (the zero-fix-free
    // system is the solver's pathological case); aggregated instances at
    // that size presolve far smaller.
    for n in 1..=7 {
        let sys = build_base_system(n).unwrap();
        let t = Instant::now();
        let cert = feasibility_with(&sys, &config).unwrap();
        println!(
            "n={} rows={} vars={} feasible={} elapsed={:?}",
            n,
            sys.rows().len(),
            sys.variable_count(),
            cert.is_feasible(),
            t.elapsed()
        );
    }
}
