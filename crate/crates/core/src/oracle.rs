//! Brute-force ground truth: subgraph isomorphism by trying every
//! permutation, CNF satisfiability by trying every assignment. No pruning;
//! the value of this module is that it is obviously correct.

use crate::compat::SolutionGrid;
use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::reductions::Cnf;

/// Default vertex-count cap for permutation enumeration (n! blowup).
pub const DEFAULT_SUBGI_CAP: usize = 9;
/// Default variable-count cap for truth-table enumeration.
pub const DEFAULT_SAT_CAP: usize = 24;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Answer {
    Yes,
    No,
}

impl std::fmt::Display for Answer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        // f.pad honors width/alignment in table layouts.
        match self {
            Answer::Yes => f.pad("YES"),
            Answer::No => f.pad("NO"),
        }
    }
}

/// Decision plus, on YES, an independently checkable witness.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Verdict<W> {
    pub answer: Answer,
    pub witness: Option<W>,
}

impl<W> Verdict<W> {
    pub fn yes(witness: W) -> Self {
        Verdict {
            answer: Answer::Yes,
            witness: Some(witness),
        }
    }

    pub fn no() -> Self {
        Verdict {
            answer: Answer::No,
            witness: None,
        }
    }

    pub fn is_yes(&self) -> bool {
        self.answer == Answer::Yes
    }
}

/// Advance `perm` to its lexicographic successor; false when `perm` was the
/// last permutation.
pub(crate) fn next_permutation(perm: &mut [usize]) -> bool {
    let len = perm.len();
    if len < 2 {
        return false;
    }
    let mut i = len - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = len - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// Does `grid` embed the pattern into the input? True iff
/// `s_ij ≤ g_{ν(i)ν(j)}` for all i, j — loops and multiplicities included.
pub fn check_embedding(input: &Digraph, pattern: &Digraph, grid: &SolutionGrid) -> Result<bool> {
    let n = input.n();
    if pattern.n() != n || grid.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "input n={}, pattern n={}, grid n={}",
            n,
            pattern.n(),
            grid.n()
        )));
    }
    for i in 1..=n {
        for j in 1..=n {
            if pattern.arc(i, j) > input.arc(grid.image(i), grid.image(j)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Decide subgraph isomorphism by enumerating all `input.n()!` pattern
/// relabelings in lexicographic order; YES carries the first witness.
/// The pattern is padded with isolated vertices internally.
pub fn subgi_brute_force(input: &Digraph, pattern: &Digraph) -> Result<Verdict<SolutionGrid>> {
    subgi_brute_force_with_cap(input, pattern, DEFAULT_SUBGI_CAP)
}

pub fn subgi_brute_force_with_cap(
    input: &Digraph,
    pattern: &Digraph,
    cap: usize,
) -> Result<Verdict<SolutionGrid>> {
    let n = input.n();
    if pattern.n() > n {
        return Err(Error::InvalidInstance(format!(
            "pattern has {} vertices, input only {}",
            pattern.n(),
            n
        )));
    }
    if n > cap {
        return Err(Error::SizeCap { n, cap });
    }
    let padded = pattern.pad(n)?;
    let mut perm: Vec<usize> = (1..=n).collect();
    loop {
        let grid = SolutionGrid::new(perm.clone()).expect("perm is a permutation");
        if check_embedding(input, &padded, &grid)? {
            return Ok(Verdict::yes(grid));
        }
        if !next_permutation(&mut perm) {
            return Ok(Verdict::no());
        }
    }
}

/// Decide CNF satisfiability by truth-table enumeration; YES carries the
/// lexicographically first satisfying assignment (variable 1 varies
/// slowest, `false < true`).
pub fn sat_brute_force(cnf: &Cnf) -> Result<Verdict<Vec<bool>>> {
    sat_brute_force_with_cap(cnf, DEFAULT_SAT_CAP)
}

pub fn sat_brute_force_with_cap(cnf: &Cnf, cap: usize) -> Result<Verdict<Vec<bool>>> {
    let nv = cnf.num_vars();
    if nv > cap {
        return Err(Error::SizeCap { n: nv, cap });
    }
    for mask in 0u64..(1u64 << nv) {
        // Bit k of `mask` read from the top: variable 1 varies slowest.
        let assignment: Vec<bool> = (0..nv).map(|k| mask >> (nv - 1 - k) & 1 == 1).collect();
        if cnf.eval(&assignment) {
            return Ok(Verdict::yes(assignment));
        }
    }
    Ok(Verdict::no())
}
