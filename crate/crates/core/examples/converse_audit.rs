//! Structured hunt for converse-direction gaps: instances where the LP is
//! feasible but no embedding exists. Cycle-in-cycle families are the
//! classic suspects, followed by seeded random batches.

use std::time::Instant;

use subiso_core::graph::Digraph;
use subiso_core::harness::{decide_lp, run_compare, CompareParams};
use subiso_core::oracle::{subgi_brute_force, Answer};
use subiso_core::rat::rat;
use subiso_core::solve::SolveConfig;

fn cycle(n: usize) -> Digraph {
    let arcs: Vec<(usize, usize)> = (1..=n).map(|v| (v, v % n + 1)).collect();
    Digraph::from_arcs(n, &arcs).unwrap()
}

fn path(n: usize) -> Digraph {
    let arcs: Vec<(usize, usize)> = (1..n).map(|v| (v, v + 1)).collect();
    Digraph::from_arcs(n, &arcs).unwrap()
}

fn main() {
    let config = SolveConfig::default();
    let t = Instant::now();
    let mut gaps = 0usize;

    println!("— cycle C_m vs cycle C_k (k < m: never embeds; k = m: embeds) —");
    for m in 3..=7usize {
        for k in 3..=m {
            let g = cycle(m);
            let s = cycle(k);
            let lp = decide_lp(&g, &s, false, &config).unwrap();
            let oracle = subgi_brute_force(&g, &s).unwrap();
            let mark = if lp.answer != oracle.answer { "  <-- GAP" } else { "" };
            if lp.answer != oracle.answer {
                gaps += 1;
            }
            println!(
                "C{} vs C{}: lp={} oracle={}{}",
                m, k, lp.answer, oracle.answer, mark
            );
        }
    }

    println!("— cycle C_m vs path P_k —");
    for m in 3..=6usize {
        for k in 2..=m {
            let g = cycle(m);
            let s = path(k);
            let lp = decide_lp(&g, &s, false, &config).unwrap();
            let oracle = subgi_brute_force(&g, &s).unwrap();
            let mark = if lp.answer != oracle.answer { "  <-- GAP" } else { "" };
            if lp.answer != oracle.answer {
                gaps += 1;
            }
            println!(
                "C{} vs P{}: lp={} oracle={}{}",
                m, k, lp.answer, oracle.answer, mark
            );
        }
    }

    println!("— path P_m vs cycle C_k (never embeds) —");
    for m in 3..=6usize {
        for k in 3..=m {
            let g = path(m);
            let s = cycle(k);
            let lp = decide_lp(&g, &s, false, &config).unwrap();
            let oracle = subgi_brute_force(&g, &s).unwrap();
            assert_eq!(oracle.answer, Answer::No);
            let mark = if lp.answer != oracle.answer { "  <-- GAP" } else { "" };
            if lp.answer != oracle.answer {
                gaps += 1;
            }
            println!(
                "P{} vs C{}: lp={} oracle={}{}",
                m, k, lp.answer, oracle.answer, mark
            );
        }
    }

    println!("— two-cycles vs single long cycle and friends —");
    let structured: Vec<(&str, Digraph, Digraph)> = vec![
        (
            "C3+C3 vs C6",
            {
                let mut rows = vec![vec![0u64; 6]; 6];
                for (a, b) in [(1, 2), (2, 3), (3, 1), (4, 5), (5, 6), (6, 4)] {
                    rows[a - 1][b - 1] = 1;
                }
                Digraph::from_rows(&rows).unwrap()
            },
            cycle(6),
        ),
        (
            "C6 vs C3+C3",
            cycle(6),
            {
                let mut rows = vec![vec![0u64; 6]; 6];
                for (a, b) in [(1, 2), (2, 3), (3, 1), (4, 5), (5, 6), (6, 4)] {
                    rows[a - 1][b - 1] = 1;
                }
                Digraph::from_rows(&rows).unwrap()
            },
        ),
        (
            "double-arc vs 2-cycle",
            Digraph::from_rows(&[vec![0, 2], vec![0, 0]]).unwrap(),
            Digraph::from_arcs(2, &[(1, 2), (2, 1)]).unwrap(),
        ),
    ];
    for (name, g, s) in structured {
        let lp = decide_lp(&g, &s, false, &config).unwrap();
        let oracle = subgi_brute_force(&g, &s).unwrap();
        let mark = if lp.answer != oracle.answer { "  <-- GAP" } else { "" };
        if lp.answer != oracle.answer {
            gaps += 1;
        }
        println!("{}: lp={} oracle={}{}", name, lp.answer, oracle.answer, mark);
    }

    println!("— seeded random batches (reporting disagreements only) —");
    for (n, trials, gp, gq, sp, sq, mult) in [
        (4usize, 400usize, 1i64, 2i64, 1i64, 2i64, 1u64),
        (4, 400, 2, 3, 1, 2, 2),
        (5, 300, 3, 5, 2, 5, 1),
        (5, 200, 1, 2, 1, 2, 3),
        (6, 150, 3, 4, 1, 4, 1),
    ] {
        let mut params =
            CompareParams::seeded(n, trials, 777 + n as u64, rat(gp, gq), rat(sp, sq));
        params.max_multiplicity = mult;
        let report = run_compare(&params, &config).unwrap();
        gaps += report.lp_feasible_and_oracle_no;
        println!(
            "n={} trials={} mult≤{} densities {}/{},{}/{}: yes/yes={} no/no={} gaps={} unsound={}",
            n,
            trials,
            mult,
            gp,
            gq,
            sp,
            sq,
            report.lp_feasible_and_oracle_yes,
            report.lp_infeasible_and_oracle_no,
            report.lp_feasible_and_oracle_no,
            report.lp_infeasible_and_oracle_yes,
        );
        assert_eq!(report.lp_infeasible_and_oracle_yes, 0);
        for d in &report.disagreements {
            println!("  trial {}: lp={} oracle={}", d.trial, d.lp, d.oracle);
            println!("  input:\n{}", d.input_text);
            println!("  pattern:\n{}", d.pattern_text);
        }
    }

    println!(
        "total converse gaps found: {} (elapsed {:?})",
        gaps,
        t.elapsed()
    );
}
