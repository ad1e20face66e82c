//! Exact LP feasibility and optimization with verifiable certificates.
//!
//! The solver is a two-phase primal simplex in exact arithmetic, so every
//! verdict is backed either by a feasible point that satisfies every
//! equality exactly or by a Farkas witness — a rational multiplier per
//! equality row whose combination has nonnegative coefficients on every
//! sign-constrained variable and a strictly negative right-hand side.
//! There are no tolerances anywhere, and identical systems produce
//! identical certificates.
//!
//! Pivoting is fraction-free (Bareiss): the tableau is an integer matrix
//! over a common positive denominator, updated by the Sylvester two-term
//! rule whose division is exact, which avoids per-entry normalization
//! entirely. Arithmetic runs in `i128` and restarts transparently in
//! `BigInt` on the first overflow, so results never depend on the
//! machine-word fast path.
//!
//! The default pivot rule is Dantzig entering with the lexicographic ratio
//! test, which terminates on every input and copes with the extreme
//! degeneracy of these systems; Bland's least-index rule is available in
//! [`SolveConfig`] for cross-checking but is orders of magnitude slower
//! here.
//!
//! A presolve pass runs first: zero-fixed columns are removed, and rows of
//! the form Σ (same-sign terms) = 0 fix their remaining variables to zero,
//! iterated to a fixed point. Rows reduced to `0 = c`, c ≠ 0, short-circuit
//! to Infeasible (this reproduces the worked hand-derivations for the
//! small instances). Infeasibility witnesses found through presolve are
//! repaired back onto the original rows, so verification never depends on
//! the presolve path.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::model::{var_id, var_of_id, Assignment, LinearSystem, SparseRow};
use crate::rat::Rat;

/// Pivot selection strategy. Both are deterministic and terminate on every
/// input.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PivotRule {
    /// Dantzig entering (most negative reduced cost, lowest index on ties)
    /// with the lexicographic ratio test.
    DantzigLex,
    /// Bland's least-index rule. Kept for cross-checking; impractically
    /// slow on these highly degenerate systems beyond n ≈ 4.
    Bland,
}

/// Solver knobs. The pivot limit converts runaway instances into an
/// explicit error rather than a wrong verdict.
#[derive(Clone, Debug)]
pub struct SolveConfig {
    pub pivot_limit: u64,
    pub pivot_rule: PivotRule,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            pivot_limit: 1_000_000,
            pivot_rule: PivotRule::DantzigLex,
        }
    }
}

/// Exactly verifiable proof of infeasibility: one rational multiplier per
/// equality row. The implied combination Σ yᵣ·rowᵣ has a nonnegative
/// coefficient on every variable that is not zero-fixed and a strictly
/// negative right-hand side, which no nonnegative assignment can satisfy.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FarkasWitness {
    pub row_multipliers: Vec<Rat>,
}

/// Outcome of a feasibility run.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Certificate {
    Feasible(Assignment),
    Infeasible(FarkasWitness),
}

impl Certificate {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Certificate::Feasible(_))
    }
}

/// Outcome of an optimization run.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum OptResult {
    Optimal { value: Rat, point: Assignment },
    Infeasible(FarkasWitness),
    Unbounded { ray: Assignment },
}

/// Decide feasibility of the system with the default configuration.
pub fn feasibility(sys: &LinearSystem) -> Result<Certificate> {
    feasibility_with(sys, &SolveConfig::default())
}

pub fn feasibility_with(sys: &LinearSystem, config: &SolveConfig) -> Result<Certificate> {
    match solve(sys, None, config)? {
        OptResult::Optimal { point, .. } => Ok(Certificate::Feasible(point)),
        OptResult::Infeasible(w) => Ok(Certificate::Infeasible(w)),
        OptResult::Unbounded { .. } => unreachable!("feasibility phase cannot be unbounded"),
    }
}

/// Minimize a sparse rational objective over the system.
pub fn optimize(sys: &LinearSystem, objective: &SparseRow) -> Result<OptResult> {
    optimize_with(sys, objective, &SolveConfig::default())
}

pub fn optimize_with(
    sys: &LinearSystem,
    objective: &SparseRow,
    config: &SolveConfig,
) -> Result<OptResult> {
    solve(sys, Some(objective), config)
}

/// Recheck a certificate against the system under exact arithmetic,
/// independently of how it was produced.
pub fn verify_certificate(sys: &LinearSystem, cert: &Certificate) -> bool {
    match cert {
        Certificate::Feasible(point) => point.n() == sys.n() && sys.is_feasible_point(point),
        Certificate::Infeasible(witness) => verify_farkas(sys, witness),
    }
}

fn verify_farkas(sys: &LinearSystem, witness: &FarkasWitness) -> bool {
    if witness.row_multipliers.len() != sys.rows().len() {
        return false;
    }
    let combined = combine_rows(sys, &witness.row_multipliers);
    let fixed = sys.zero_fixed_ids();
    for (id, coeff) in combined.iter().enumerate() {
        if !fixed[id] && coeff.is_negative() {
            return false;
        }
    }
    let rhs: Rat = witness
        .row_multipliers
        .iter()
        .zip(sys.rows())
        .map(|(y, row)| y * &row.rhs)
        .sum();
    rhs.is_negative()
}

fn combine_rows(sys: &LinearSystem, multipliers: &[Rat]) -> Vec<Rat> {
    let mut combined = vec![Rat::zero(); sys.variable_count()];
    for (y, row) in multipliers.iter().zip(sys.rows()) {
        if y.is_zero() {
            continue;
        }
        for (id, coeff) in &row.terms {
            combined[*id] += y * coeff;
        }
    }
    combined
}

/// JSON rendering of a certificate (rationals as `p/q` strings, zero
/// entries omitted). For infeasibility the derived nonnegative bound
/// multipliers are included for completeness; verification needs only the
/// row multipliers.
pub fn certificate_to_json(sys: &LinearSystem, cert: &Certificate) -> Value {
    match cert {
        Certificate::Feasible(point) => {
            let mut assignment = Map::new();
            for (var, value) in point.nonzero() {
                assignment.insert(var.to_string(), Value::String(value.to_string()));
            }
            json!({ "status": "feasible", "assignment": assignment })
        }
        Certificate::Infeasible(witness) => {
            let mut rows = Map::new();
            for (r, y) in witness.row_multipliers.iter().enumerate() {
                if !y.is_zero() {
                    rows.insert(r.to_string(), Value::String(y.to_string()));
                }
            }
            let combined = combine_rows(sys, &witness.row_multipliers);
            let fixed = sys.zero_fixed_ids();
            let mut bound = Map::new();
            let mut fix = Map::new();
            for (id, coeff) in combined.iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                let name = var_of_id(id, sys.n()).to_string();
                if fixed[id] {
                    fix.insert(name, Value::String(coeff.to_string()));
                } else {
                    bound.insert(name, Value::String(coeff.to_string()));
                }
            }
            let rhs: Rat = witness
                .row_multipliers
                .iter()
                .zip(sys.rows())
                .map(|(y, row)| y * &row.rhs)
                .sum();
            json!({
                "status": "infeasible",
                "row_multipliers": rows,
                "bound_multipliers": bound,
                "zero_fix_multipliers": fix,
                "combined_rhs": rhs.to_string(),
            })
        }
    }
}

// ---------------------------------------------------------------------------
// Presolve
// ---------------------------------------------------------------------------

struct Presolved {
    /// Per variable id: fixed to zero (originally or by propagation).
    fixed: Vec<bool>,
    /// Propagation-fixed ids in the order they were fixed, with the row
    /// that forced each.
    fix_order: Vec<(usize, usize)>,
    /// Original indices of rows that still constrain something.
    live_rows: Vec<usize>,
    /// Contradiction row (`0 = c`, c ≠ 0), if presolve already decided.
    contradiction: Option<usize>,
}

fn presolve(sys: &LinearSystem) -> Presolved {
    let mut fixed = sys.zero_fixed_ids().to_vec();
    let mut fix_order: Vec<(usize, usize)> = Vec::new();
    let mut dead = vec![false; sys.rows().len()];
    loop {
        let mut changed = false;
        for (r, row) in sys.rows().iter().enumerate() {
            if dead[r] {
                continue;
            }
            let mut pos = 0usize;
            let mut neg = 0usize;
            for (id, coeff) in &row.terms {
                if fixed[*id] {
                    continue;
                }
                if coeff.is_positive() {
                    pos += 1;
                } else {
                    neg += 1;
                }
            }
            if pos + neg == 0 {
                if row.rhs.is_zero() {
                    dead[r] = true;
                    changed = true;
                    continue;
                }
                return Presolved {
                    fixed,
                    fix_order,
                    live_rows: Vec::new(),
                    contradiction: Some(r),
                };
            }
            if row.rhs.is_zero() && (pos == 0 || neg == 0) {
                for (id, _) in &row.terms {
                    if !fixed[*id] {
                        fixed[*id] = true;
                        fix_order.push((*id, r));
                    }
                }
                dead[r] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let live_rows = (0..sys.rows().len()).filter(|&r| !dead[r]).collect();
    Presolved {
        fixed,
        fix_order,
        live_rows,
        contradiction: None,
    }
}

/// Lift row multipliers found on the presolved system back to a witness
/// over the original rows: negative combined coefficients on
/// propagation-fixed variables are cancelled through their fixing rows, in
/// reverse fixing order. Each cancellation only touches variables fixed no
/// later, so one backward sweep suffices.
fn repair_witness(sys: &LinearSystem, pre: &Presolved, mut multipliers: Vec<Rat>) -> FarkasWitness {
    let mut combined = combine_rows(sys, &multipliers);
    for &(id, reason_row) in pre.fix_order.iter().rev() {
        if !combined[id].is_negative() {
            continue;
        }
        let row = &sys.rows()[reason_row];
        let coeff = row
            .terms
            .iter()
            .find(|(tid, _)| *tid == id)
            .map(|(_, c)| c.clone())
            .expect("fixing row contains the fixed variable");
        let factor = -&combined[id] / coeff;
        multipliers[reason_row] += &factor;
        for (tid, c) in &row.terms {
            combined[*tid] += &factor * c;
        }
        debug_assert!(combined[id].is_zero());
    }
    FarkasWitness {
        row_multipliers: multipliers,
    }
}

// ---------------------------------------------------------------------------
// Scalar for the fraction-free tableau
// ---------------------------------------------------------------------------

/// Integer scalar of the fraction-free tableau. Checked operations return
/// `None` on machine overflow, which restarts the solve in `BigInt`.
trait Scalar: Clone + Ord + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_positive(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn neg(&self) -> Self;
    fn add(&self, other: &Self) -> Option<Self>;
    fn sub(&self, other: &Self) -> Option<Self>;
    fn mul(&self, other: &Self) -> Option<Self>;
    /// Division known to be remainder-free.
    fn exact_div(&self, den: &Self) -> Self;
    fn from_bigint(v: &BigInt) -> Option<Self>;
    fn to_rat(&self) -> Rat;

    /// Bareiss update (a·b − c·d)/den with exact division.
    fn sylvester(a: &Self, b: &Self, c: &Self, d: &Self, den: &Self) -> Option<Self> {
        let num = a.mul(b)?.sub(&c.mul(d)?)?;
        Some(num.exact_div(den))
    }

    /// Ordering of a/b vs c/d for positive denominators b, d.
    fn ratio_cmp(a: &Self, b: &Self, c: &Self, d: &Self) -> Option<Ordering> {
        Some(a.mul(d)?.cmp(&c.mul(b)?))
    }
}

impl Scalar for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_positive(&self) -> bool {
        *self > 0
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn add(&self, other: &Self) -> Option<Self> {
        self.checked_add(*other)
    }
    fn sub(&self, other: &Self) -> Option<Self> {
        self.checked_sub(*other)
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        self.checked_mul(*other)
    }
    fn exact_div(&self, den: &Self) -> Self {
        debug_assert_eq!(self % den, 0, "Bareiss division must be exact");
        self / den
    }
    fn from_bigint(v: &BigInt) -> Option<Self> {
        v.to_i128()
    }
    fn to_rat(&self) -> Rat {
        Rat::from_integer(BigInt::from(*self))
    }
}

impl Scalar for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn add(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }
    fn sub(&self, other: &Self) -> Option<Self> {
        Some(self - other)
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn exact_div(&self, den: &Self) -> Self {
        let (q, r) = self.div_rem(den);
        debug_assert!(Zero::is_zero(&r), "Bareiss division must be exact");
        q
    }
    fn from_bigint(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn to_rat(&self) -> Rat {
        Rat::from_integer(self.clone())
    }
}

// ---------------------------------------------------------------------------
// Integerized reduced rows
// ---------------------------------------------------------------------------

/// A live row scaled to integer coefficients with nonnegative right-hand
/// side: `scale · (original row)` with `scale = ±lcm(denominators)`.
struct IntRow {
    terms: Vec<(usize, BigInt)>,
    rhs: BigInt,
    scale: Rat,
}

fn integerize_row(terms: &[(usize, Rat)], rhs: &Rat) -> IntRow {
    let mut lcm: BigInt = One::one();
    for (_, c) in terms {
        lcm = lcm.lcm(c.denom());
    }
    lcm = lcm.lcm(rhs.denom());
    let mut scale = Rat::from_integer(lcm);
    if (rhs * &scale).is_negative() {
        scale = -scale;
    }
    let int_terms = terms
        .iter()
        .map(|(id, c)| ((*id), (c * &scale).to_integer()))
        .collect();
    IntRow {
        terms: int_terms,
        rhs: (rhs * &scale).to_integer(),
        scale,
    }
}

// ---------------------------------------------------------------------------
// Fraction-free two-phase simplex
// ---------------------------------------------------------------------------

enum Step {
    Optimal,
    Unbounded { entering: usize },
}

/// Result over the reduced columns, already in rationals.
enum ReducedOutcome {
    Optimal {
        x: Vec<Rat>,
        /// In units of the (integer-scaled) phase-2 objective.
        scaled_value: Rat,
    },
    /// Duals per live row of the original (unscaled) orientation, chosen so
    /// that Σ y·row has nonnegative coefficients and negative rhs.
    Infeasible {
        multipliers: Vec<Rat>,
    },
    Unbounded {
        ray: Vec<Rat>,
    },
}

struct Tableau<'a, T: Scalar> {
    m: usize,
    nv: usize,
    /// True tableau entries are `mat/den`; columns: nv structural, m
    /// artificial, then the right-hand side.
    mat: Vec<Vec<T>>,
    obj: Vec<T>,
    den: T,
    basis: Vec<usize>,
    dead: Vec<bool>,
    artificial_allowed: Vec<bool>,
    rule: PivotRule,
    rows_in: &'a [IntRow],
    pivots: u64,
    limit: u64,
}

/// Ok(None) signals machine overflow: the caller restarts with `BigInt`.
type Attempt<V> = Result<Option<V>>;

impl<'a, T: Scalar> Tableau<'a, T> {
    fn build(rows: &'a [IntRow], nv: usize, rule: PivotRule, limit: u64) -> Option<Tableau<'a, T>> {
        let m = rows.len();
        let width = nv + m + 1;
        let mut mat = Vec::with_capacity(m);
        for (r, row) in rows.iter().enumerate() {
            let mut dense = vec![T::zero(); width];
            for (col, coeff) in &row.terms {
                dense[*col] = T::from_bigint(coeff)?;
            }
            dense[nv + r] = T::one();
            dense[width - 1] = T::from_bigint(&row.rhs)?;
            debug_assert!(!dense[width - 1].is_negative());
            mat.push(dense);
        }
        Some(Tableau {
            m,
            nv,
            mat,
            obj: vec![T::zero(); width],
            den: T::one(),
            basis: (nv..nv + m).collect(),
            dead: vec![false; m],
            artificial_allowed: vec![true; m],
            rule,
            rows_in: rows,
            pivots: 0,
            limit,
        })
    }

    fn width(&self) -> usize {
        self.nv + self.m + 1
    }

    /// Phase-1 objective (minimize the artificial sum) for the initial
    /// all-artificial basis at den = 1: obj = c − Σᵣ matᵣ.
    fn set_phase1_objective(&mut self) -> Option<()> {
        debug_assert!(self.den == T::one());
        let width = self.width();
        let mut obj = vec![T::zero(); width];
        for r in 0..self.m {
            for (slot, cell) in obj.iter_mut().zip(&self.mat[r]) {
                if !cell.is_zero() {
                    *slot = slot.sub(cell)?;
                }
            }
        }
        for r in 0..self.m {
            obj[self.nv + r] = obj[self.nv + r].add(&T::one())?;
        }
        self.obj = obj;
        Some(())
    }

    /// Phase-2 objective for integer costs over structural columns, at the
    /// current denominator and basis: obj = den·c − Σᵣ c[basisᵣ]·matᵣ.
    fn set_phase2_objective(&mut self, costs: &[T]) -> Option<()> {
        let width = self.width();
        let mut obj = vec![T::zero(); width];
        for (j, c) in costs.iter().enumerate() {
            if !c.is_zero() {
                obj[j] = self.den.mul(c)?;
            }
        }
        for r in 0..self.m {
            if self.dead[r] || self.basis[r] >= self.nv {
                continue;
            }
            let cb = &costs[self.basis[r]];
            if cb.is_zero() {
                continue;
            }
            for (slot, cell) in obj.iter_mut().zip(&self.mat[r]) {
                if !cell.is_zero() {
                    *slot = slot.sub(&cb.mul(cell)?)?;
                }
            }
        }
        self.obj = obj;
        for r in 0..self.m {
            self.artificial_allowed[r] = false;
        }
        Some(())
    }

    /// True objective value = −obj[rhs]/den.
    fn objective_value(&self) -> Rat {
        -self.obj[self.width() - 1].to_rat() / self.den.to_rat()
    }

    fn column_allowed(&self, j: usize) -> bool {
        if j < self.nv {
            true
        } else {
            self.artificial_allowed[j - self.nv]
        }
    }

    fn run(&mut self) -> Attempt<Step> {
        loop {
            let j = match self.entering_column() {
                None => return Ok(Some(Step::Optimal)),
                Some(j) => j,
            };
            let r = match self.leaving_row(j) {
                None => return Ok(Some(Step::Unbounded { entering: j })),
                Some(None) => return Ok(None), // overflow in ratio test
                Some(Some(r)) => r,
            };
            if self.pivot(r, j)?.is_none() {
                return Ok(None);
            }
        }
    }

    fn entering_column(&self) -> Option<usize> {
        let width = self.width();
        match self.rule {
            PivotRule::Bland => {
                (0..width - 1).find(|&j| self.column_allowed(j) && self.obj[j].is_negative())
            }
            PivotRule::DantzigLex => {
                let mut best: Option<usize> = None;
                for j in 0..width - 1 {
                    if !self.column_allowed(j) || !self.obj[j].is_negative() {
                        continue;
                    }
                    best = match best {
                        None => Some(j),
                        Some(b) if self.obj[j] < self.obj[b] => Some(j),
                        keep => keep,
                    };
                }
                best
            }
        }
    }

    /// None = unbounded; Some(None) = overflow; Some(Some(r)) = leaving row.
    fn leaving_row(&self, j: usize) -> Option<Option<usize>> {
        match self.rule {
            PivotRule::Bland => self.leaving_bland(j),
            PivotRule::DantzigLex => self.leaving_lex(j),
        }
    }

    fn leaving_bland(&self, j: usize) -> Option<Option<usize>> {
        let width = self.width();
        let mut leaving: Option<usize> = None;
        for r in 0..self.m {
            if self.dead[r] || !self.mat[r][j].is_positive() {
                continue;
            }
            let better = match leaving {
                None => true,
                Some(lr) => {
                    match T::ratio_cmp(
                        &self.mat[r][width - 1],
                        &self.mat[r][j],
                        &self.mat[lr][width - 1],
                        &self.mat[lr][j],
                    ) {
                        None => return Some(None),
                        Some(Ordering::Less) => true,
                        Some(Ordering::Greater) => false,
                        Some(Ordering::Equal) => self.basis[r] < self.basis[lr],
                    }
                }
            };
            if better {
                leaving = Some(r);
            }
        }
        leaving.map(|r| Some(Some(r))).unwrap_or(None)
    }

    /// Lexicographic ratio test: compare candidate rows scaled by their
    /// pivot entries, right-hand side first, then the columns in order.
    /// The artificial identity block keeps rows lexicographically
    /// distinct, so the winner is unique and cycling is impossible.
    fn leaving_lex(&self, j: usize) -> Option<Option<usize>> {
        let width = self.width();
        let mut cands: Vec<usize> = (0..self.m)
            .filter(|&r| !self.dead[r] && self.mat[r][j].is_positive())
            .collect();
        if cands.is_empty() {
            return None;
        }
        let mut column = width - 1;
        loop {
            if cands.len() == 1 {
                return Some(Some(cands[0]));
            }
            let mut keep: Vec<usize> = Vec::with_capacity(cands.len());
            for &r in &cands {
                if keep.is_empty() {
                    keep.push(r);
                    continue;
                }
                let lead = keep[0];
                match T::ratio_cmp(
                    &self.mat[r][column],
                    &self.mat[r][j],
                    &self.mat[lead][column],
                    &self.mat[lead][j],
                ) {
                    None => return Some(None),
                    Some(Ordering::Less) => {
                        keep.clear();
                        keep.push(r);
                    }
                    Some(Ordering::Equal) => keep.push(r),
                    Some(Ordering::Greater) => {}
                }
            }
            cands = keep;
            column = if column == width - 1 { 0 } else { column + 1 };
            if column == width - 1 {
                // Cannot happen with lex-independent rows; stay deterministic.
                return Some(Some(cands[0]));
            }
        }
    }

    /// Bareiss pivot on (r, j): the pivot row is kept verbatim, every other
    /// row (and the objective row) gets the Sylvester update, and the pivot
    /// entry becomes the new common denominator.
    fn pivot(&mut self, r: usize, j: usize) -> Attempt<()> {
        self.pivots += 1;
        if self.pivots > self.limit {
            return Err(Error::PivotLimit(self.limit));
        }
        let width = self.width();
        debug_assert!(self.mat[r][j].is_positive());
        let pivot_row = std::mem::take(&mut self.mat[r]);
        let piv = pivot_row[j].clone();
        for q in 0..self.m {
            if q == r || self.dead[q] {
                continue;
            }
            let f = self.mat[q][j].clone();
            for k in 0..width {
                let updated =
                    match T::sylvester(&self.mat[q][k], &piv, &f, &pivot_row[k], &self.den) {
                        None => {
                            self.mat[r] = pivot_row;
                            return Ok(None);
                        }
                        Some(v) => v,
                    };
                self.mat[q][k] = updated;
            }
        }
        let f = self.obj[j].clone();
        for k in 0..width {
            let updated = match T::sylvester(&self.obj[k], &piv, &f, &pivot_row[k], &self.den) {
                None => {
                    self.mat[r] = pivot_row;
                    return Ok(None);
                }
                Some(v) => v,
            };
            self.obj[k] = updated;
        }
        self.mat[r] = pivot_row;
        self.den = piv;
        if self.basis[r] >= self.nv {
            self.artificial_allowed[self.basis[r] - self.nv] = false;
        }
        self.basis[r] = j;
        Ok(Some(()))
    }

    /// After a zero-value phase 1, pivot remaining artificials out of the
    /// basis; rows with no structural support are redundant and dropped.
    /// Rows are negated when needed so the pivot entry stays positive.
    fn drive_out_artificials(&mut self) -> Attempt<()> {
        for r in 0..self.m {
            if self.dead[r] || self.basis[r] < self.nv {
                continue;
            }
            debug_assert!(self.mat[r][self.width() - 1].is_zero());
            let j = (0..self.nv).find(|&j| !self.mat[r][j].is_zero());
            match j {
                Some(j) => {
                    if self.mat[r][j].is_negative() {
                        for k in 0..self.width() {
                            self.mat[r][k] = self.mat[r][k].neg();
                        }
                    }
                    if self.pivot(r, j)?.is_none() {
                        return Ok(None);
                    }
                }
                None => self.dead[r] = true,
            }
        }
        Ok(Some(()))
    }

    /// Phase-1 duals mapped to the original (unscaled) rows: from the
    /// reduced cost of artificial r, y'ᵣ = 1 − obj[nv+r]/den, divided by
    /// the row's integer scale.
    fn phase1_duals(&self) -> Vec<Rat> {
        (0..self.m)
            .map(|r| {
                let y = Rat::one() - self.obj[self.nv + r].to_rat() / self.den.to_rat();
                y * &self.rows_in[r].scale
            })
            .collect()
    }

    /// Values of the structural columns at the current basis.
    fn structural_solution(&self) -> Vec<Rat> {
        let width = self.width();
        let den = self.den.to_rat();
        let mut x = vec![Rat::zero(); self.nv];
        for r in 0..self.m {
            if !self.dead[r] && self.basis[r] < self.nv {
                x[self.basis[r]] = self.mat[r][width - 1].to_rat() / &den;
            }
        }
        x
    }

    /// Unbounded improving direction for an entering column with no
    /// positive entries.
    fn ray(&self, entering: usize) -> Vec<Rat> {
        let den = self.den.to_rat();
        let mut d = vec![Rat::zero(); self.nv];
        if entering < self.nv {
            d[entering] = Rat::one();
        }
        for r in 0..self.m {
            if !self.dead[r] && self.basis[r] < self.nv {
                d[self.basis[r]] = -(self.mat[r][entering].to_rat() / &den);
            }
        }
        d
    }
}

/// Run the two-phase simplex over the integerized live rows; `None` means
/// machine overflow in `T`.
fn simplex_reduced<T: Scalar>(
    rows: &[IntRow],
    nv: usize,
    costs: Option<&[BigInt]>,
    config: &SolveConfig,
) -> Attempt<ReducedOutcome> {
    let mut tableau: Tableau<T> =
        match Tableau::build(rows, nv, config.pivot_rule, config.pivot_limit) {
            None => return Ok(None),
            Some(t) => t,
        };
    if tableau.set_phase1_objective().is_none() {
        return Ok(None);
    }
    match tableau.run()? {
        None => return Ok(None),
        Some(Step::Unbounded { .. }) => unreachable!("phase 1 is bounded below by zero"),
        Some(Step::Optimal) => {}
    }
    if tableau.objective_value().is_positive() {
        let duals = tableau.phase1_duals();
        // Negated, the combination has nonnegative coefficients and a
        // negative right-hand side.
        let multipliers = duals.into_iter().map(|y| -y).collect();
        return Ok(Some(ReducedOutcome::Infeasible { multipliers }));
    }
    if tableau.drive_out_artificials()?.is_none() {
        return Ok(None);
    }
    let scaled_value = match costs {
        None => Rat::zero(),
        Some(costs) => {
            let t_costs: Option<Vec<T>> = costs.iter().map(|c| T::from_bigint(c)).collect();
            let t_costs = match t_costs {
                None => return Ok(None),
                Some(v) => v,
            };
            if tableau.set_phase2_objective(&t_costs).is_none() {
                return Ok(None);
            }
            match tableau.run()? {
                None => return Ok(None),
                Some(Step::Unbounded { entering }) => {
                    return Ok(Some(ReducedOutcome::Unbounded {
                        ray: tableau.ray(entering),
                    }));
                }
                Some(Step::Optimal) => {}
            }
            tableau.objective_value()
        }
    };
    if std::env::var_os("SUBISO_DEBUG_PIVOTS").is_some() {
        eprintln!(
            "[solve] rows={} cols={} pivots={}",
            tableau.m, nv, tableau.pivots
        );
    }
    Ok(Some(ReducedOutcome::Optimal {
        x: tableau.structural_solution(),
        scaled_value,
    }))
}

// ---------------------------------------------------------------------------
// Driver
// ---------------------------------------------------------------------------

fn solve(
    sys: &LinearSystem,
    objective: Option<&SparseRow>,
    config: &SolveConfig,
) -> Result<OptResult> {
    let n = sys.n();
    let dense_objective: Option<Vec<Rat>> = match objective {
        None => None,
        Some(obj) => {
            let mut dense = vec![Rat::zero(); sys.variable_count()];
            for (var, coeff) in obj {
                let id = var_id(*var, n);
                if id >= sys.variable_count() {
                    return Err(Error::ForeignVariable(var.to_string()));
                }
                dense[id] += coeff;
            }
            Some(dense)
        }
    };

    let pre = presolve(sys);
    if let Some(row) = pre.contradiction {
        let mut multipliers = vec![Rat::zero(); sys.rows().len()];
        multipliers[row] = -sys.rows()[row].rhs.clone().recip();
        let witness = repair_witness(sys, &pre, multipliers);
        debug_assert!(verify_farkas(sys, &witness));
        return Ok(OptResult::Infeasible(witness));
    }

    // Map surviving variables to contiguous columns.
    let mut col_of_id: Vec<Option<usize>> = vec![None; sys.variable_count()];
    let mut id_of_col: Vec<usize> = Vec::new();
    for (id, slot) in col_of_id.iter_mut().enumerate() {
        if !pre.fixed[id] {
            *slot = Some(id_of_col.len());
            id_of_col.push(id);
        }
    }
    let nv = id_of_col.len();

    let lift = |x: Vec<Rat>| -> Assignment {
        let mut values = vec![Rat::zero(); sys.variable_count()];
        for (col, v) in x.into_iter().enumerate() {
            values[id_of_col[col]] = v;
        }
        Assignment::from_values(n, values)
    };

    if pre.live_rows.is_empty() {
        // Nothing constrains the surviving variables; zero is feasible
        // and any negative-cost survivor runs off to infinity.
        if let Some(costs) = &dense_objective {
            if let Some(&id) = id_of_col.iter().find(|&&id| costs[id].is_negative()) {
                let mut d = vec![Rat::zero(); nv];
                d[col_of_id[id].expect("survivor has a column")] = Rat::one();
                return Ok(OptResult::Unbounded { ray: lift(d) });
            }
        }
        let point = lift(vec![Rat::zero(); nv]);
        debug_assert!(sys.is_feasible_point(&point));
        return Ok(OptResult::Optimal {
            value: Rat::zero(),
            point,
        });
    }

    let int_rows: Vec<IntRow> = pre
        .live_rows
        .iter()
        .map(|&r| {
            let row = &sys.rows()[r];
            let reduced_terms: Vec<(usize, Rat)> = row
                .terms
                .iter()
                .filter_map(|(id, c)| col_of_id[*id].map(|col| (col, c.clone())))
                .collect();
            integerize_row(&reduced_terms, &row.rhs)
        })
        .collect();

    // Integer objective over reduced columns, scaled by the lcm of its
    // denominators; the optimal value is descaled at the end.
    let (int_costs, cost_scale): (Option<Vec<BigInt>>, Rat) = match &dense_objective {
        None => (None, Rat::one()),
        Some(dense) => {
            let mut lcm: BigInt = One::one();
            for &id in &id_of_col {
                lcm = lcm.lcm(dense[id].denom());
            }
            let scale = Rat::from_integer(lcm);
            let costs = id_of_col
                .iter()
                .map(|&id| (&dense[id] * &scale).to_integer())
                .collect();
            (Some(costs), scale)
        }
    };

    let outcome = match simplex_reduced::<i128>(&int_rows, nv, int_costs.as_deref(), config)? {
        Some(outcome) => outcome,
        None => simplex_reduced::<BigInt>(&int_rows, nv, int_costs.as_deref(), config)?
            .expect("BigInt arithmetic cannot overflow"),
    };

    match outcome {
        ReducedOutcome::Infeasible { multipliers } => {
            let mut full = vec![Rat::zero(); sys.rows().len()];
            for (k, &r) in pre.live_rows.iter().enumerate() {
                full[r] = multipliers[k].clone();
            }
            let witness = repair_witness(sys, &pre, full);
            debug_assert!(verify_farkas(sys, &witness));
            Ok(OptResult::Infeasible(witness))
        }
        ReducedOutcome::Unbounded { ray } => Ok(OptResult::Unbounded { ray: lift(ray) }),
        ReducedOutcome::Optimal { x, scaled_value } => {
            let point = lift(x);
            debug_assert!(sys.is_feasible_point(&point));
            let value = match &dense_objective {
                None => Rat::zero(),
                Some(dense) => {
                    let value = scaled_value / cost_scale;
                    debug_assert_eq!(
                        value,
                        point
                            .nonzero()
                            .map(|(var, v)| &dense[var_id(var, n)] * v)
                            .sum::<Rat>()
                    );
                    value
                }
            };
            Ok(OptResult::Optimal { value, point })
        }
    }
}
