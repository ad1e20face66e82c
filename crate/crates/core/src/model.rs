//! The linear model: base system, zero constraints, aggregation, center
//! point, grid-induced points, and LP-format emission.
//!
//! Variables come in two families over a dimension n:
//!
//! * `x_{ijμν}` for i≠j, μ≠ν, with the identification `x_{ijμν} = x_{jiνμ}`
//!   realized structurally: the canonical orientation stores i < j, so no
//!   symmetry equations are ever emitted.
//! * `y_{jν}`, the diagonal entries of the underlying box-matrix form.
//!
//! The base system over these variables says, for every (i,j,ν) with i≠j,
//! that Σ_{μ≠ν} x_{ijμν} = y_{jν}; for every (j,μ,ν) with μ≠ν that
//! Σ_{i≠j} x_{ijμν} = y_{jν}; and for every j that Σ_ν y_{jν} = 1. All
//! variables are implicitly nonnegative. Aggregating an instance adds a set
//! of variables fixed to zero, taken from the zero entries of its
//! compatibility matrix.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::compat::{CompatMatrix, SolutionGrid};
use crate::error::{Error, Result};
use crate::rat::Rat;

/// Canonically oriented variable index.
///
/// `X` stores i < j; the constructor maps (j,i,ν,μ) onto (i,j,μ,ν).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum VarIndex {
    Y {
        j: usize,
        v: usize,
    },
    X {
        i: usize,
        j: usize,
        u: usize,
        v: usize,
    },
}

impl VarIndex {
    pub fn y(j: usize, v: usize) -> VarIndex {
        VarIndex::Y { j, v }
    }

    /// Canonical x variable for the (possibly reversed) reading (i,j,μ,ν).
    ///
    /// Panics if i = j or μ = ν; those index combinations have no variable.
    pub fn x(i: usize, j: usize, u: usize, v: usize) -> VarIndex {
        assert!(i != j && u != v, "x indices require i≠j and μ≠ν");
        if i < j {
            VarIndex::X { i, j, u, v }
        } else {
            VarIndex::X {
                i: j,
                j: i,
                u: v,
                v: u,
            }
        }
    }

    /// The same variable after relabeling the input by `sigma` and the
    /// pattern by `tau` (both 1-indexed permutations).
    pub fn relabeled(&self, sigma: &[usize], tau: &[usize]) -> VarIndex {
        match *self {
            VarIndex::Y { j, v } => VarIndex::y(tau[j - 1], sigma[v - 1]),
            VarIndex::X { i, j, u, v } => {
                VarIndex::x(tau[i - 1], tau[j - 1], sigma[u - 1], sigma[v - 1])
            }
        }
    }

    fn in_range(&self, n: usize) -> bool {
        match *self {
            VarIndex::Y { j, v } => (1..=n).contains(&j) && (1..=n).contains(&v),
            VarIndex::X { i, j, u, v } => {
                i >= 1 && i < j && j <= n && (1..=n).contains(&u) && (1..=n).contains(&v) && u != v
            }
        }
    }
}

impl fmt::Display for VarIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            VarIndex::Y { j, v } => write!(f, "y_{}_{}", j, v),
            VarIndex::X { i, j, u, v } => write!(f, "x_{}_{}_{}_{}", i, j, u, v),
        }
    }
}

/// Number of variables of the base system of dimension n:
/// n² y's plus n²(n−1)²/2 canonical x's.
pub fn variable_count(n: usize) -> usize {
    n * n + n * n * (n - 1) * (n - 1) / 2
}

/// Number of equalities of the base system of dimension n: 2n²(n−1) + n.
pub fn equality_count(n: usize) -> usize {
    2 * n * n * (n - 1) + n
}

fn ordered_pair_index(u: usize, v: usize, n: usize) -> usize {
    debug_assert!(u != v);
    (u - 1) * (n - 1) + (v - 1) - usize::from(v > u)
}

fn unordered_pair_index(i: usize, j: usize, n: usize) -> usize {
    debug_assert!(i < j);
    (i - 1) * n - i * (i - 1) / 2 + (j - i - 1)
}

/// Dense 0-based id of a variable; y's come first, then x's, both in
/// lexicographic index order.
pub fn var_id(var: VarIndex, n: usize) -> usize {
    match var {
        VarIndex::Y { j, v } => (j - 1) * n + (v - 1),
        VarIndex::X { i, j, u, v } => {
            n * n + unordered_pair_index(i, j, n) * n * (n - 1) + ordered_pair_index(u, v, n)
        }
    }
}

/// Inverse of [`var_id`].
pub fn var_of_id(id: usize, n: usize) -> VarIndex {
    if id < n * n {
        VarIndex::Y {
            j: id / n + 1,
            v: id % n + 1,
        }
    } else {
        let rest = id - n * n;
        let per_pair = n * (n - 1);
        let mut pair = rest / per_pair;
        let ord = rest % per_pair;
        let mut i = 1;
        while pair >= n - i {
            pair -= n - i;
            i += 1;
        }
        let j = i + pair + 1;
        let u = ord / (n - 1) + 1;
        let mut v = ord % (n - 1) + 1;
        if v >= u {
            v += 1;
        }
        VarIndex::X { i, j, u, v }
    }
}

/// One equality: Σ coeff·var = rhs. Terms are sorted by variable id.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Row {
    pub terms: Vec<(usize, Rat)>,
    pub rhs: Rat,
}

/// Sparse rational row keyed by variable index, e.g. an objective.
pub type SparseRow = Vec<(VarIndex, Rat)>;

/// Equality system over the canonical variable layout of dimension n, with
/// implicit nonnegativity on every variable and a set of variables fixed
/// to zero.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    n: usize,
    rows: Vec<Row>,
    zero_fixed: Vec<bool>,
}

impl LinearSystem {
    /// A custom system over the dimension-n variable layout.
    pub fn new(n: usize, rows: Vec<Row>, zero_fixed: &BTreeSet<VarIndex>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInstance("dimension must be ≥ 1".into()));
        }
        let nv = variable_count(n);
        for row in &rows {
            for &(id, _) in &row.terms {
                if id >= nv {
                    return Err(Error::ForeignVariable(format!("id {}", id)));
                }
            }
        }
        let mut sys = LinearSystem {
            n,
            rows,
            zero_fixed: vec![false; nv],
        };
        sys.fix_zero_set(zero_fixed)?;
        Ok(sys)
    }

    fn fix_zero_set(&mut self, vars: &BTreeSet<VarIndex>) -> Result<()> {
        for &v in vars {
            if !v.in_range(self.n) {
                return Err(Error::ForeignVariable(v.to_string()));
            }
            self.zero_fixed[var_id(v, self.n)] = true;
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn variable_count(&self) -> usize {
        variable_count(self.n)
    }

    pub fn is_zero_fixed(&self, var: VarIndex) -> bool {
        self.zero_fixed[var_id(var, self.n)]
    }

    pub(crate) fn zero_fixed_ids(&self) -> &[bool] {
        &self.zero_fixed
    }

    pub fn zero_fixed_vars(&self) -> impl Iterator<Item = VarIndex> + '_ {
        self.zero_fixed
            .iter()
            .enumerate()
            .filter(|(_, &f)| f)
            .map(move |(id, _)| var_of_id(id, self.n))
    }

    /// Exact residual Σ coeff·value − rhs of one row under an assignment.
    pub fn row_residual(&self, row: &Row, point: &Assignment) -> Rat {
        let mut acc = -row.rhs.clone();
        for (id, coeff) in &row.terms {
            if !point.values[*id].is_zero() {
                acc += coeff * &point.values[*id];
            }
        }
        acc
    }

    /// Does `point` satisfy every equality, every zero fix, and
    /// nonnegativity — all under exact arithmetic?
    pub fn is_feasible_point(&self, point: &Assignment) -> bool {
        if point.values.len() != self.variable_count() {
            return false;
        }
        if point.values.iter().any(|v| v.is_negative()) {
            return false;
        }
        if point
            .values
            .iter()
            .zip(self.zero_fixed.iter())
            .any(|(v, &fixed)| fixed && !v.is_zero())
        {
            return false;
        }
        self.rows
            .iter()
            .all(|row| self.row_residual(row, point).is_zero())
    }
}

/// Total rational assignment over the variable layout of some dimension.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Assignment {
    n: usize,
    values: Vec<Rat>,
}

impl Assignment {
    pub fn zeros(n: usize) -> Self {
        Assignment {
            n,
            values: vec![Rat::zero(); variable_count(n)],
        }
    }

    pub(crate) fn from_values(n: usize, values: Vec<Rat>) -> Self {
        debug_assert_eq!(values.len(), variable_count(n));
        Assignment { n, values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, var: VarIndex) -> &Rat {
        &self.values[var_id(var, self.n)]
    }

    pub fn set(&mut self, var: VarIndex, value: Rat) {
        self.values[var_id(var, self.n)] = value;
    }

    /// (variable, value) pairs with nonzero value, in id order.
    pub fn nonzero(&self) -> impl Iterator<Item = (VarIndex, &Rat)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(move |(id, v)| (var_of_id(id, self.n), v))
    }

    /// Exact inner product with a sparse row.
    pub fn dot(&self, row: &SparseRow) -> Rat {
        let mut acc = Rat::zero();
        for (var, coeff) in row {
            acc += coeff * self.get(*var);
        }
        acc
    }
}

/// The base system of dimension n. Row order: the (i,j,ν) column-sum rows
/// lexicographically, then the (j,μ,ν) box-sum rows, then the n unit-sum
/// rows. For n = 2 the two leading families coincide pairwise after
/// canonicalization, so the row list contains duplicates; counts still
/// follow [`equality_count`].
pub fn build_base_system(n: usize) -> Result<LinearSystem> {
    if n == 0 {
        return Err(Error::InvalidInstance("dimension must be ≥ 1".into()));
    }
    let mut rows = Vec::with_capacity(equality_count(n));
    // Σ_{μ≠ν} x_{ijμν} = y_{jν}   for i≠j, ν
    for i in 1..=n {
        for j in 1..=n {
            if i == j {
                continue;
            }
            for v in 1..=n {
                let mut terms: Vec<(usize, Rat)> = (1..=n)
                    .filter(|&u| u != v)
                    .map(|u| (var_id(VarIndex::x(i, j, u, v), n), Rat::one()))
                    .collect();
                terms.push((var_id(VarIndex::y(j, v), n), -Rat::one()));
                terms.sort_by_key(|&(id, _)| id);
                rows.push(Row {
                    terms,
                    rhs: Rat::zero(),
                });
            }
        }
    }
    // Σ_{i≠j} x_{ijμν} = y_{jν}   for j, μ≠ν
    for j in 1..=n {
        for u in 1..=n {
            for v in 1..=n {
                if u == v {
                    continue;
                }
                let mut terms: Vec<(usize, Rat)> = (1..=n)
                    .filter(|&i| i != j)
                    .map(|i| (var_id(VarIndex::x(i, j, u, v), n), Rat::one()))
                    .collect();
                terms.push((var_id(VarIndex::y(j, v), n), -Rat::one()));
                terms.sort_by_key(|&(id, _)| id);
                rows.push(Row {
                    terms,
                    rhs: Rat::zero(),
                });
            }
        }
    }
    // Σ_ν y_{jν} = 1   for j
    for j in 1..=n {
        let terms: Vec<(usize, Rat)> = (1..=n)
            .map(|v| (var_id(VarIndex::y(j, v), n), Rat::one()))
            .collect();
        rows.push(Row {
            terms,
            rhs: Rat::one(),
        });
    }
    debug_assert_eq!(rows.len(), equality_count(n));
    LinearSystem::new(n, rows, &BTreeSet::new())
}

/// Variables that the zero entries of a compatibility matrix force to zero:
/// the x's of zero off-diagonal entries and the y's of zero diagonal-box
/// entries. Structural zeros have no variable and are never emitted.
pub fn zero_constraints(c: &CompatMatrix) -> BTreeSet<VarIndex> {
    let n = c.n();
    let mut out = BTreeSet::new();
    for j in 1..=n {
        for v in 1..=n {
            if !c.get(j, j, v, v) {
                out.insert(VarIndex::y(j, v));
            }
        }
    }
    for i in 1..=n {
        for j in 1..=n {
            if i == j {
                continue;
            }
            for u in 1..=n {
                for v in 1..=n {
                    if u != v && !c.get(i, j, u, v) {
                        out.insert(VarIndex::x(i, j, u, v));
                    }
                }
            }
        }
    }
    out
}

/// Base system plus zero fixes: equalities untouched, the union of the two
/// sets fixed to zero via bounds.
pub fn aggregate(
    base: &LinearSystem,
    zeros: &BTreeSet<VarIndex>,
    extra_zeros: &BTreeSet<VarIndex>,
) -> Result<LinearSystem> {
    let mut sys = base.clone();
    sys.fix_zero_set(zeros)?;
    sys.fix_zero_set(extra_zeros)?;
    Ok(sys)
}

/// The center of the base polytope: every x = 1/(n(n−1)), every y = 1/n.
/// For n = 1 there are no x variables and the single y equals 1.
pub fn center_point(n: usize) -> Result<Assignment> {
    if n == 0 {
        return Err(Error::InvalidInstance("dimension must be ≥ 1".into()));
    }
    let mut point = Assignment::zeros(n);
    let y_val = Rat::new(BigInt::one(), BigInt::from(n as u64));
    for id in 0..n * n {
        point.values[id] = y_val.clone();
    }
    if n >= 2 {
        let x_val = Rat::new(BigInt::one(), BigInt::from((n * (n - 1)) as u64));
        for id in n * n..variable_count(n) {
            point.values[id] = x_val.clone();
        }
    }
    Ok(point)
}

/// The 0/1 point induced by a solution grid: y_{j,ν(j)} = 1 and
/// x_{ij,ν(i)ν(j)} = 1 for i≠j, all other variables 0.
pub fn grid_to_point(grid: &SolutionGrid, n: usize) -> Result<Assignment> {
    if grid.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "grid over {} vertices, system dimension {}",
            grid.n(),
            n
        )));
    }
    let mut point = Assignment::zeros(n);
    for j in 1..=n {
        point.set(VarIndex::y(j, grid.image(j)), Rat::one());
    }
    for i in 1..=n {
        for j in i + 1..=n {
            point.set(VarIndex::x(i, j, grid.image(i), grid.image(j)), Rat::one());
        }
    }
    Ok(point)
}

fn push_coeff(out: &mut String, coeff: &Rat, first: bool) {
    if first {
        if coeff.is_negative() {
            out.push_str("- ");
        }
    } else if coeff.is_negative() {
        out.push_str(" - ");
    } else {
        out.push_str(" + ");
    }
    let mag = coeff.abs();
    if !mag.is_one() {
        out.push_str(&mag.to_string());
        out.push(' ');
    }
}

/// Emit the system in CPLEX-style LP text: an objective section, the
/// equality rows, and a bounds section fixing the zero-fixed variables
/// (all other variables keep the format's default `≥ 0`).
///
/// Duplicate rows (possible at n = 2) are emitted once. Rationals with
/// denominator 1 print as plain integers; other exact rationals print as
/// `p/q`, which keeps the file exact at the price of strict-CPLEX
/// compatibility for non-integer data.
pub fn emit_lp(sys: &LinearSystem, objective: Option<&SparseRow>) -> Result<String> {
    let n = sys.n();
    let mut out = String::new();
    out.push_str("Minimize\n obj:");
    if let Some(obj) = objective {
        let mut terms: Vec<(usize, Rat)> = Vec::with_capacity(obj.len());
        for (var, coeff) in obj {
            if !var.in_range(n) {
                return Err(Error::ForeignVariable(var.to_string()));
            }
            if !coeff.is_zero() {
                terms.push((var_id(*var, n), coeff.clone()));
            }
        }
        terms.sort_by_key(|&(id, _)| id);
        let mut first = true;
        for (id, coeff) in terms {
            out.push(' ');
            let mut piece = String::new();
            push_coeff(&mut piece, &coeff, first);
            piece.push_str(&var_of_id(id, n).to_string());
            out.push_str(&piece);
            first = false;
        }
    }
    out.push_str("\nSubject To\n");
    let mut seen: Vec<&Row> = Vec::new();
    let mut row_no = 0;
    for row in sys.rows() {
        if seen.iter().any(|r| **r == *row) {
            continue;
        }
        seen.push(row);
        row_no += 1;
        out.push_str(&format!(" c{}: ", row_no));
        let mut first = true;
        for (id, coeff) in &row.terms {
            if coeff.is_zero() {
                continue;
            }
            push_coeff(&mut out, coeff, first);
            out.push_str(&var_of_id(*id, n).to_string());
            first = false;
        }
        if first {
            out.push('0');
        }
        out.push_str(&format!(" = {}\n", row.rhs));
    }
    out.push_str("Bounds\n");
    for var in sys.zero_fixed_vars() {
        out.push_str(&format!(" {} = 0\n", var));
    }
    out.push_str("End\n");
    Ok(out)
}
