//! Regression suite for the worked examples: compatibility matrices
//! pinned to frozen reference literals, their grids, the depletion pass,
//! and the verdicts of both decision paths.

use subiso_core::compat::{build_compat, enumerate_grids, propagate, CompatMatrix, SolutionGrid};
use subiso_core::graph::{parse_digraph, Digraph};
use subiso_core::harness::{run_worked_examples, LpDecision};
use subiso_core::model::{grid_to_point, VarIndex};
use subiso_core::oracle::Answer;
use subiso_core::solve::{verify_certificate, Certificate, SolveConfig};

/// Parse a box-matrix literal: n² lines of n² 0/1 digits (whitespace
/// ignored), row = (box row i, μ), column = (box column j, ν).
fn compat_from_text(n: usize, text: &str) -> CompatMatrix {
    let digits: Vec<u8> = text
        .chars()
        .filter(|c| c.is_ascii_digit())
        .map(|c| c as u8 - b'0')
        .collect();
    assert_eq!(digits.len(), n * n * n * n, "matrix literal has wrong size");
    CompatMatrix::from_fn(n, |i, j, u, v| {
        let row = (i - 1) * n + (u - 1);
        let col = (j - 1) * n + (v - 1);
        digits[row * n * n + col] == 1
    })
    .expect("reference matrix is symmetric")
}

fn assert_same_matrix(got: &CompatMatrix, want: &CompatMatrix) {
    assert_eq!(got.n(), want.n());
    let n = got.n();
    for i in 1..=n {
        for j in 1..=n {
            for u in 1..=n {
                for v in 1..=n {
                    assert_eq!(
                        got.get(i, j, u, v),
                        want.get(i, j, u, v),
                        "entry ({},{},{},{})",
                        i,
                        j,
                        u,
                        v
                    );
                }
            }
        }
    }
}

fn c3() -> Digraph {
    parse_digraph("digraph 3\n1 2\n2 3\n3 1").unwrap()
}

fn c4() -> Digraph {
    parse_digraph("digraph 4\n1 2\n2 3\n3 4\n4 1").unwrap()
}

const CYCLE_VS_EDGE: &str = "
    100 000 011
    010 000 101
    001 000 110
    000 100 011
    000 010 101
    000 001 110
    011 011 100
    101 101 010
    110 110 001
";

const CYCLE_VS_PATH: &str = "
    100 010 011
    010 001 101
    001 100 110
    001 100 010
    100 010 001
    010 001 100
    011 001 100
    101 100 010
    110 010 001
";

const CYCLE_VS_CYCLE: &str = "
    1000 0100 0001 0111
    0100 0010 1000 1011
    0010 0001 0100 1101
    0001 1000 0010 1110
    0001 1000 0100 0111
    1000 0100 0010 1011
    0100 0010 0001 1101
    0010 0001 1000 1110
    0100 0001 1000 0111
    0010 1000 0100 1011
    0001 0100 0010 1101
    1000 0010 0001 1110
    0111 0111 0111 1000
    1011 1011 1011 0100
    1101 1101 1101 0010
    1110 1110 1110 0001
";

const CYCLE_VS_CYCLE_DEPLETED: &str = "
    1000 0100 0001 0010
    0100 0010 1000 0001
    0010 0001 0100 1000
    0001 1000 0010 0100
    0001 1000 0100 0010
    1000 0100 0010 0001
    0100 0010 0001 1000
    0010 0001 1000 0100
    0100 0001 1000 0010
    0010 1000 0100 0001
    0001 0100 0010 1000
    1000 0010 0001 0100
    0010 0010 0010 1000
    0001 0001 0001 0100
    1000 1000 1000 0010
    0100 0100 0100 0001
";

#[test]
fn cycle_vs_edge_matrix_matches_reference() {
    let edge = parse_digraph("digraph 2\n1 2\n2 1")
        .unwrap()
        .pad(3)
        .unwrap();
    let got = build_compat(&c3(), &edge).unwrap();
    assert_same_matrix(&got, &compat_from_text(3, CYCLE_VS_EDGE));
    assert!(enumerate_grids(&got, None).unwrap().is_empty());
}

#[test]
fn cycle_vs_path_matrix_and_grids_match_reference() {
    let path = parse_digraph("digraph 3\n1 2\n2 3").unwrap();
    let got = build_compat(&c3(), &path).unwrap();
    assert_same_matrix(&got, &compat_from_text(3, CYCLE_VS_PATH));
    let grids = enumerate_grids(&got, None).unwrap();
    let maps: Vec<&[usize]> = grids.iter().map(|g| g.as_slice()).collect();
    assert_eq!(maps, vec![&[1, 2, 3][..], &[2, 3, 1][..], &[3, 1, 2][..]]);
}

#[test]
fn cycle_vs_cycle_matrix_matches_reference() {
    let pattern = c3().pad(4).unwrap();
    let got = build_compat(&c4(), &pattern).unwrap();
    assert_same_matrix(&got, &compat_from_text(4, CYCLE_VS_CYCLE));
    assert!(enumerate_grids(&got, None).unwrap().is_empty());
}

#[test]
fn cycle_vs_cycle_depletion_refines_the_reference() {
    let pattern = c3().pad(4).unwrap();
    let original = build_compat(&c4(), &pattern).unwrap();
    let reference = compat_from_text(4, CYCLE_VS_CYCLE_DEPLETED);
    // The reference depletion only trims the fourth box row/column, so it
    // sits between the original matrix and the path-consistency fixed
    // point.
    assert!(reference.subset_of(&original));
    assert!(enumerate_grids(&reference, None).unwrap().is_empty());

    let fixed_point = propagate(&original);
    assert!(fixed_point.subset_of(&reference));
    assert!(enumerate_grids(&fixed_point, None).unwrap().is_empty());
    assert_eq!(propagate(&fixed_point), fixed_point);
}

#[test]
fn depletion_never_loses_grids_on_the_yes_instance() {
    let path = parse_digraph("digraph 3\n1 2\n2 3").unwrap();
    let c = build_compat(&c3(), &path).unwrap();
    let p = propagate(&c);
    assert_eq!(
        enumerate_grids(&p, None).unwrap(),
        enumerate_grids(&c, None).unwrap()
    );
}

#[test]
fn all_worked_examples_agree_with_both_paths() {
    let report = run_worked_examples(&SolveConfig::default()).unwrap();
    assert_eq!(report.rows.len(), 9);
    assert!(report.all_oracle_match());
    assert!(report.all_certificates_verified());
    for row in &report.rows {
        assert_eq!(row.lp, row.expected, "LP verdict drifted on {}", row.name);
    }
}

#[test]
fn arc_vs_arc_witness_is_the_transposition() {
    // The feasible certificate corresponds to relabeling by (1,2): the
    // grid point of the swap map satisfies the aggregated system.
    let g = parse_digraph("digraph 2\n1 2").unwrap();
    let s = parse_digraph("digraph 2\n2 1").unwrap();
    let LpDecision { answer, detail } =
        subiso_core::harness::decide_lp(&g, &s, false, &SolveConfig::default()).unwrap();
    assert_eq!(answer, Answer::Yes);
    let (sys, cert) = detail.expect("system was built");
    assert!(verify_certificate(&sys, &cert));
    let swap = SolutionGrid::new(vec![2, 1]).unwrap();
    let point = grid_to_point(&swap, 2).unwrap();
    assert!(sys.is_feasible_point(&point));
    assert_eq!(point.get(VarIndex::x(1, 2, 2, 1)).to_string(), "1");
}

#[test]
fn cycle_vs_cycle_lp_verdict_is_certified() {
    // The oracle answer NO is hard; the LP verdict is computed, and
    // whichever way it lands the certificate must verify. (It lands
    // infeasible, matching the expected verdict.)
    let pattern = c3();
    let LpDecision { answer, detail } =
        subiso_core::harness::decide_lp(&c4(), &pattern, false, &SolveConfig::default()).unwrap();
    let (sys, cert) = detail.expect("system was built");
    assert!(verify_certificate(&sys, &cert));
    match (&cert, answer) {
        (Certificate::Infeasible(_), Answer::No) => {}
        (Certificate::Feasible(point), Answer::Yes) => {
            // Would be a counterexample to the claimed equivalence; the
            // report layer flags it, and the point itself must check out.
            assert!(sys.is_feasible_point(point));
        }
        _ => panic!("answer and certificate disagree"),
    }
}
