//! Compatibility matrices and solution grids.
//!
//! For an input/pattern pair of equal dimension n, the compatibility matrix
//! is an n²×n² boolean box matrix: box (i,j) records which image pairs
//! (μ,ν) are admissible for the pattern vertex pair (i,j). A solution grid
//! picks one admissible entry per box consistently, i.e. an injective
//! pattern→input vertex map under which the pattern embeds.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{check_permutation, Digraph};

/// Maximum dimension for which grid enumeration may run without a limit.
pub const UNBOUNDED_ENUMERATION_MAX_N: usize = 8;

/// n²×n² boolean box matrix of entries `e[i][j][μ][ν]`, all indices 1-based.
///
/// Structural invariants: `e[i][j][μ][ν] = e[j][i][ν][μ]`; diagonal boxes
/// (i = j) are diagonal matrices; off-diagonal boxes have zero diagonals.
#[derive(Clone, PartialEq, Eq)]
pub struct CompatMatrix {
    n: usize,
    e: Vec<bool>,
}

impl CompatMatrix {
    fn idx(&self, i: usize, j: usize, u: usize, v: usize) -> usize {
        let n = self.n;
        debug_assert!(i >= 1 && i <= n && j >= 1 && j <= n && u >= 1 && u <= n && v >= 1 && v <= n);
        (((i - 1) * n + (j - 1)) * n + (u - 1)) * n + (v - 1)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize, u: usize, v: usize) -> bool {
        self.e[self.idx(i, j, u, v)]
    }

    /// Build from an explicit entry predicate, forcing the structural zeros.
    pub fn from_fn(
        n: usize,
        mut f: impl FnMut(usize, usize, usize, usize) -> bool,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInstance("dimension must be ≥ 1".into()));
        }
        let mut m = CompatMatrix {
            n,
            e: vec![false; n * n * n * n],
        };
        for i in 1..=n {
            for j in 1..=n {
                for u in 1..=n {
                    for v in 1..=n {
                        let structural_zero = (i == j && u != v) || (i != j && u == v);
                        if !structural_zero && f(i, j, u, v) {
                            let id = m.idx(i, j, u, v);
                            m.e[id] = true;
                        }
                    }
                }
            }
        }
        for i in 1..=n {
            for j in 1..=n {
                for u in 1..=n {
                    for v in 1..=n {
                        if m.get(i, j, u, v) != m.get(j, i, v, u) {
                            return Err(Error::InvalidInstance(format!(
                                "asymmetric entries ({},{},{},{}) vs ({},{},{},{})",
                                i, j, u, v, j, i, v, u
                            )));
                        }
                    }
                }
            }
        }
        Ok(m)
    }

    /// The compatibility matrix containing exactly one grid.
    pub fn from_grid(grid: &SolutionGrid) -> Self {
        let n = grid.n();
        CompatMatrix::from_fn(n, |i, j, u, v| u == grid.image(i) && v == grid.image(j))
            .expect("grid entries are symmetric")
    }

    /// Count of 1-entries.
    pub fn ones(&self) -> usize {
        self.e.iter().filter(|&&b| b).count()
    }

    /// Pointwise `self ≤ other`.
    pub fn subset_of(&self, other: &CompatMatrix) -> bool {
        self.n == other.n && self.e.iter().zip(other.e.iter()).all(|(&a, &b)| !a || b)
    }
}

/// Box-layout rendering: n² rows of 0/1 with `|` between boxes, a dashed
/// line between box rows. Meant for eyeballing against printed matrices.
impl fmt::Display for CompatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n;
        for i in 1..=n {
            if i > 1 {
                let width = n * (2 * n + 1) + (n - 1);
                writeln!(f, "{}", "-".repeat(width))?;
            }
            for u in 1..=n {
                for j in 1..=n {
                    if j > 1 {
                        write!(f, "| ")?;
                    }
                    for v in 1..=n {
                        write!(f, "{} ", if self.get(i, j, u, v) { 1 } else { 0 })?;
                    }
                }
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CompatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CompatMatrix(n={})", self.n)?;
        fmt::Display::fmt(self, f)
    }
}

/// Injective pattern-vertex → input-vertex assignment; since both sides have
/// n vertices after padding, a permutation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SolutionGrid {
    map: Vec<usize>,
}

impl SolutionGrid {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        check_permutation(&map, map.len()).map_err(|_| Error::NonInjectiveGrid)?;
        Ok(SolutionGrid { map })
    }

    pub fn n(&self) -> usize {
        self.map.len()
    }

    /// Image ν(j) of pattern vertex `j` (1-indexed).
    pub fn image(&self, j: usize) -> usize {
        self.map[j - 1]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }
}

impl fmt::Display for SolutionGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries: Vec<String> = (1..=self.n())
            .map(|j| format!("{}->{}", j, self.image(j)))
            .collect();
        write!(f, "{}", entries.join(" "))
    }
}

/// Compatibility matrix of an equal-dimension input/pattern pair.
///
/// For i≠j, μ≠ν the entry is 1 iff `s_ij ≤ g_μν` and `s_ji ≤ g_νμ`; for
/// i = j, μ = ν it is 1 iff `s_ii ≤ g_μμ`. Everything else is a structural
/// zero.
pub fn build_compat(input: &Digraph, pattern: &Digraph) -> Result<CompatMatrix> {
    if input.n() != pattern.n() {
        return Err(Error::DimensionMismatch(format!(
            "input has {} vertices, pattern {}; pad the pattern first",
            input.n(),
            pattern.n()
        )));
    }
    let n = input.n();
    CompatMatrix::from_fn(n, |i, j, u, v| {
        if i == j {
            pattern.arc(i, i) <= input.arc(u, u)
        } else {
            pattern.arc(i, j) <= input.arc(u, v) && pattern.arc(j, i) <= input.arc(v, u)
        }
    })
}

/// Enumerate every solution grid of `c` in lexicographic order of the image
/// vector (ν(1), …, ν(n)), truncating at `limit` when given.
///
/// Dimensions above [`UNBOUNDED_ENUMERATION_MAX_N`] require an explicit
/// limit.
pub fn enumerate_grids(c: &CompatMatrix, limit: Option<usize>) -> Result<Vec<SolutionGrid>> {
    let n = c.n();
    if limit.is_none() && n > UNBOUNDED_ENUMERATION_MAX_N {
        return Err(Error::GridLimitRequired(n));
    }
    let cap = limit.unwrap_or(usize::MAX);
    let mut out = Vec::new();
    let mut partial: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n + 1];
    backtrack(c, &mut partial, &mut used, cap, &mut out);
    Ok(out)
}

fn backtrack(
    c: &CompatMatrix,
    partial: &mut Vec<usize>,
    used: &mut [bool],
    cap: usize,
    out: &mut Vec<SolutionGrid>,
) {
    if out.len() >= cap {
        return;
    }
    let n = c.n();
    let j = partial.len() + 1;
    if j > n {
        out.push(SolutionGrid {
            map: partial.clone(),
        });
        return;
    }
    'next: for v in 1..=n {
        if used[v] || !c.get(j, j, v, v) {
            continue;
        }
        for (i0, &u) in partial.iter().enumerate() {
            let i = i0 + 1;
            if !c.get(i, j, u, v) || !c.get(j, i, v, u) {
                continue 'next;
            }
        }
        partial.push(v);
        used[v] = true;
        backtrack(c, partial, used, cap, out);
        partial.pop();
        used[v] = false;
        if out.len() >= cap {
            return;
        }
    }
}

/// Path-consistency depletion, iterated to a fixed point: an entry
/// `e[i][j][μ][ν]` survives only if for every k there is a λ with
/// `e[i][k][μ][λ]` and `e[k][j][λ][ν]` both set. Never removes an entry
/// that lies on a solution grid, so the grid set is unchanged.
pub fn propagate(c: &CompatMatrix) -> CompatMatrix {
    let n = c.n();
    let mut cur = c.clone();
    loop {
        let mut changed = false;
        let mut next = cur.clone();
        for i in 1..=n {
            for j in 1..=n {
                for u in 1..=n {
                    for v in 1..=n {
                        if !cur.get(i, j, u, v) {
                            continue;
                        }
                        let supported = (1..=n)
                            .all(|k| (1..=n).any(|l| cur.get(i, k, u, l) && cur.get(k, j, l, v)));
                        if !supported {
                            let id = next.idx(i, j, u, v);
                            next.e[id] = false;
                            changed = true;
                        }
                    }
                }
            }
        }
        cur = next;
        if !changed {
            return cur;
        }
    }
}
