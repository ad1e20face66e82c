//! Reductions onto the linear model: the traveling-salesman program and the
//! CNF-satisfiability encoding.
//!
//! Both reductions return model-layer objects (systems, objectives, zero
//! sets); deciding or optimizing them is the solver's job.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::compat::build_compat;
use crate::error::{Error, Result};
use crate::graph::{Digraph, WeightedDigraph};
use crate::model::{
    aggregate, build_base_system, zero_constraints, LinearSystem, SparseRow, VarIndex,
};
use crate::rat::Rat;

/// CNF formula: clauses of signed variable ids (positive = variable,
/// negative = its negation). Every clause is nonempty.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cnf {
    num_vars: usize,
    clauses: Vec<Vec<i64>>,
}

impl Cnf {
    pub fn new(num_vars: usize, clauses: Vec<Vec<i64>>) -> Result<Self> {
        for (ci, clause) in clauses.iter().enumerate() {
            if clause.is_empty() {
                return Err(Error::InvalidInstance(format!(
                    "clause {} is empty",
                    ci + 1
                )));
            }
            for &lit in clause {
                if lit == 0 || lit.unsigned_abs() as usize > num_vars {
                    return Err(Error::InvalidInstance(format!(
                        "literal {} out of range in clause {}",
                        lit,
                        ci + 1
                    )));
                }
            }
        }
        Ok(Cnf { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<i64>] {
        &self.clauses
    }

    /// Total number of literal slots Σ kᵢ.
    pub fn slot_count(&self) -> usize {
        self.clauses.iter().map(|c| c.len()).sum()
    }

    /// Evaluate under a total assignment (`assignment[k]` is variable k+1).
    pub fn eval(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|clause| {
            clause.iter().any(|&lit| {
                let value = assignment[lit.unsigned_abs() as usize - 1];
                if lit > 0 {
                    value
                } else {
                    !value
                }
            })
        })
    }

    /// DIMACS serialization; inverse of [`parse_cnf`].
    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for clause in &self.clauses {
            for lit in clause {
                s.push_str(&format!("{} ", lit));
            }
            s.push_str("0\n");
        }
        s
    }
}

/// Parse DIMACS CNF: a `p cnf <vars> <clauses>` header, then 0-terminated
/// clauses (which may span lines); `c` lines are comments. The clause count
/// must match the header.
pub fn parse_cnf(text: &str) -> Result<Cnf> {
    let mut num_vars: Option<usize> = None;
    let mut declared_clauses = 0usize;
    let mut clauses: Vec<Vec<i64>> = Vec::new();
    let mut current: Vec<i64> = Vec::new();
    let mut clause_open_line = 0usize;
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with('c') {
            continue;
        }
        if t.starts_with('p') {
            if num_vars.is_some() {
                return Err(Error::parse(line_no, "duplicate problem header"));
            }
            let fields: Vec<&str> = t.split_whitespace().collect();
            if fields.len() != 4 || fields[0] != "p" || fields[1] != "cnf" {
                return Err(Error::parse(line_no, "expected `p cnf <vars> <clauses>`"));
            }
            let v: usize = fields[2].parse().map_err(|_| {
                Error::parse(line_no, format!("bad variable count `{}`", fields[2]))
            })?;
            declared_clauses = fields[3]
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad clause count `{}`", fields[3])))?;
            num_vars = Some(v);
            continue;
        }
        let nv = num_vars.ok_or_else(|| Error::parse(line_no, "clause before `p cnf` header"))?;
        for field in t.split_whitespace() {
            let lit: i64 = field
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad literal `{}`", field)))?;
            if lit == 0 {
                if current.is_empty() {
                    return Err(Error::parse(line_no, "zero-length clause"));
                }
                clauses.push(std::mem::take(&mut current));
            } else {
                if lit.unsigned_abs() as usize > nv {
                    return Err(Error::parse(
                        line_no,
                        format!("variable {} out of range [1,{}]", lit.abs(), nv),
                    ));
                }
                if current.is_empty() {
                    clause_open_line = line_no;
                }
                current.push(lit);
            }
        }
    }
    let nv = num_vars.ok_or_else(|| Error::parse(1, "missing `p cnf` header"))?;
    if !current.is_empty() {
        return Err(Error::parse(
            clause_open_line,
            "unterminated clause (missing 0)",
        ));
    }
    if clauses.len() != declared_clauses {
        return Err(Error::parse(
            1,
            format!(
                "header declares {} clauses, found {}",
                declared_clauses,
                clauses.len()
            ),
        ));
    }
    Cnf::new(nv, clauses)
}

/// The directed n-cycle 1→2→…→n→1, the fixed representative of the
/// circular-permutation pattern family used by the TSP program.
pub fn hamiltonian_pattern(n: usize) -> Result<Digraph> {
    if n < 2 {
        return Err(Error::InvalidInstance(
            "a Hamiltonian cycle needs at least 2 vertices".into(),
        ));
    }
    let arcs: Vec<(usize, usize)> = (1..=n).map(|v| (v, v % n + 1)).collect();
    Digraph::from_arcs(n, &arcs)
}

/// The TSP linear program for an arc-weighted digraph.
///
/// The input digraph has an arc wherever a weight is present; the pattern is
/// [`hamiltonian_pattern`]; the system is the aggregated system of that
/// instance. Objective normalization: each canonical variable
/// x_{ijμν} (i<j) earns w(μ,ν) per pattern arc i→j and w(ν,μ) per pattern
/// arc j→i, so an integral tour point costs exactly the tour's total arc
/// weight, each tour arc counted once. Absent weights never enter the
/// objective: their compatibility entries are 0 and the variables are
/// zero-fixed.
pub fn tsp_model(g: &WeightedDigraph) -> Result<(LinearSystem, SparseRow)> {
    let n = g.n();
    if n < 2 {
        return Err(Error::InvalidInstance(
            "TSP needs at least 2 vertices".into(),
        ));
    }
    let input = g.support();
    let pattern = hamiltonian_pattern(n)?;
    let compat = build_compat(&input, &pattern)?;
    let base = build_base_system(n)?;
    let sys = aggregate(&base, &zero_constraints(&compat), &BTreeSet::new())?;

    let mut objective: SparseRow = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            for u in 1..=n {
                for v in 1..=n {
                    if u == v {
                        continue;
                    }
                    let mut coeff = Rat::zero();
                    if pattern.arc(i, j) > 0 {
                        if let Some(w) = g.weight(u, v) {
                            coeff += w;
                        }
                    }
                    if pattern.arc(j, i) > 0 {
                        if let Some(w) = g.weight(v, u) {
                            coeff += w;
                        }
                    }
                    if !coeff.is_zero() {
                        objective.push((VarIndex::x(i, j, u, v), coeff));
                    }
                }
            }
        }
    }
    Ok((sys, objective))
}

/// SAT instance rendered as subgraph isomorphism: one input/pattern vertex
/// per clause-literal slot (clause-major order) plus the confinement fixes
/// keeping each pattern block inside its own input block.
#[derive(Clone, Debug)]
pub struct SatInstance {
    pub input: Digraph,
    pub pattern: Digraph,
    pub extra_zeros: BTreeSet<VarIndex>,
    block_of_slot: Vec<usize>,
}

impl SatInstance {
    pub fn n(&self) -> usize {
        self.input.n()
    }

    /// Clause index (1-based) owning a slot vertex.
    pub fn block_of(&self, slot: usize) -> usize {
        self.block_of_slot[slot - 1]
    }
}

fn complementary(a: i64, b: i64) -> bool {
    a == -b
}

/// Encode a CNF as a SubGI instance.
///
/// Input: slot (i,α) connects to slot (j,β) — loops and same-clause pairs
/// included — unless the two literals are complementary. Pattern: block
/// matrix whose (i,j) block is zero except for a 1 in its upper-left cell;
/// the remaining slots of each block are isolated. Confinement: every
/// pattern slot of clause i is forbidden (y fixed to 0) from mapping
/// outside input block i; the x variables follow through the row sums.
pub fn sat_to_subgi(f: &Cnf) -> Result<SatInstance> {
    let m = f.clauses().len();
    if m == 0 {
        return Err(Error::InvalidInstance(
            "SAT reduction needs at least one clause".into(),
        ));
    }
    let n = f.slot_count();
    let mut offsets = Vec::with_capacity(m);
    let mut literals: Vec<i64> = Vec::with_capacity(n);
    let mut block_of_slot = Vec::with_capacity(n);
    for (ci, clause) in f.clauses().iter().enumerate() {
        offsets.push(literals.len());
        for &lit in clause {
            literals.push(lit);
            block_of_slot.push(ci + 1);
        }
    }

    let mut input_rows = vec![vec![0u64; n]; n];
    for (a, &la) in literals.iter().enumerate() {
        for (b, &lb) in literals.iter().enumerate() {
            if !complementary(la, lb) {
                input_rows[a][b] = 1;
            }
        }
    }
    let input = Digraph::from_rows(&input_rows)?;

    let mut pattern_rows = vec![vec![0u64; n]; n];
    for &oi in &offsets {
        for &oj in &offsets {
            pattern_rows[oi][oj] = 1;
        }
    }
    let pattern = Digraph::from_rows(&pattern_rows)?;

    let mut extra_zeros = BTreeSet::new();
    for slot in 1..=n {
        let block = block_of_slot[slot - 1];
        for v in 1..=n {
            if block_of_slot[v - 1] != block {
                extra_zeros.insert(VarIndex::y(slot, v));
            }
        }
    }

    Ok(SatInstance {
        input,
        pattern,
        extra_zeros,
        block_of_slot,
    })
}

/// The aggregated system of a SAT instance: base system of dimension Σkᵢ,
/// the compatibility zeros, and the confinement fixes.
pub fn sat_system(inst: &SatInstance) -> Result<LinearSystem> {
    let compat = build_compat(&inst.input, &inst.pattern)?;
    let base = build_base_system(inst.n())?;
    aggregate(&base, &zero_constraints(&compat), &inst.extra_zeros)
}

/// Is there a choice of one literal per clause with no complementary pair?
/// Direct product enumeration, used as an oracle for the grid structure.
pub fn has_implicant(f: &Cnf) -> bool {
    let m = f.clauses().len();
    let mut choice = vec![0usize; m];
    loop {
        let ok = (0..m).all(|i| {
            (0..i).all(|j| !complementary(f.clauses()[i][choice[i]], f.clauses()[j][choice[j]]))
        });
        if ok {
            return true;
        }
        // Next choice vector.
        let mut k = m;
        loop {
            if k == 0 {
                return false;
            }
            k -= 1;
            choice[k] += 1;
            if choice[k] < f.clauses()[k].len() {
                break;
            }
            choice[k] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compat::enumerate_grids;
    use crate::rat::rat_int;

    #[test]
    fn parse_two_unit_clauses() {
        let cnf = parse_cnf("p cnf 1 2\n1 0\n-1 0").unwrap();
        assert_eq!(cnf.num_vars(), 1);
        assert_eq!(cnf.clauses(), &[vec![1], vec![-1]]);
    }

    #[test]
    fn parse_mixed_clause() {
        let cnf = parse_cnf("p cnf 2 1\n1 -2 0").unwrap();
        assert_eq!(cnf.clauses(), &[vec![1, -2]]);
    }

    #[test]
    fn parse_multiline_clause_and_comments() {
        let cnf = parse_cnf("c comment\np cnf 3 2\n1 2\n3 0 -1 0\n").unwrap();
        assert_eq!(cnf.clauses(), &[vec![1, 2, 3], vec![-1]]);
    }

    #[test]
    fn parse_errors() {
        assert!(parse_cnf("p cnf 1 1\n2 0").is_err()); // var out of range
        assert!(parse_cnf("p cnf 1 2\n1 0").is_err()); // clause count mismatch
        assert!(parse_cnf("p cnf 1 1\n0").is_err()); // empty clause
        assert!(parse_cnf("1 0").is_err()); // no header
        assert!(parse_cnf("p cnf 1 1\n1").is_err()); // unterminated
    }

    #[test]
    fn dimacs_round_trip() {
        let cnf = parse_cnf("p cnf 3 2\n1 -3 0\n2 0").unwrap();
        assert_eq!(parse_cnf(&cnf.to_dimacs()).unwrap(), cnf);
    }

    #[test]
    fn hamiltonian_pattern_shape() {
        let c3 = hamiltonian_pattern(3).unwrap();
        assert_eq!(
            c3,
            Digraph::from_arcs(3, &[(1, 2), (2, 3), (3, 1)]).unwrap()
        );
        let c2 = hamiltonian_pattern(2).unwrap();
        assert_eq!(c2, Digraph::from_arcs(2, &[(1, 2), (2, 1)]).unwrap());
        assert!(hamiltonian_pattern(1).is_err());
        // Rotating labels leaves the cycle unchanged.
        let rotated = c3.relabel(&[2, 3, 1]).unwrap();
        assert_eq!(rotated, c3);
    }

    #[test]
    fn sat_contradiction_structure() {
        let f = parse_cnf("p cnf 1 2\n1 0\n-1 0").unwrap();
        let inst = sat_to_subgi(&f).unwrap();
        assert_eq!(inst.n(), 2);
        // Cross entries are the complementary pair; self pairs stay 1.
        assert_eq!(inst.input.arc(1, 1), 1);
        assert_eq!(inst.input.arc(2, 2), 1);
        assert_eq!(inst.input.arc(1, 2), 0);
        assert_eq!(inst.input.arc(2, 1), 0);
        // Pattern: upper-left 1 per block; blocks are 1×1 here.
        assert_eq!(inst.pattern.arc(1, 1), 1);
        assert_eq!(inst.pattern.arc(1, 2), 1);
        assert_eq!(inst.extra_zeros.len(), 2);
        assert!(inst.extra_zeros.contains(&VarIndex::y(1, 2)));
        assert!(inst.extra_zeros.contains(&VarIndex::y(2, 1)));
    }

    #[test]
    fn sat_instance_blocks_and_grid() {
        let f = parse_cnf("p cnf 2 2\n1 2 0\n1 0").unwrap();
        let inst = sat_to_subgi(&f).unwrap();
        assert_eq!(inst.n(), 3);
        assert_eq!(inst.block_of(1), 1);
        assert_eq!(inst.block_of(2), 1);
        assert_eq!(inst.block_of(3), 2);
        // No complementary pairs: input is all ones.
        for u in 1..=3 {
            for v in 1..=3 {
                assert_eq!(inst.input.arc(u, v), 1);
            }
        }
        // A grid exists (pick x1 in both clauses).
        let compat = build_compat(&inst.input, &inst.pattern).unwrap();
        let grids = enumerate_grids(&compat, None).unwrap();
        assert!(!grids.is_empty());
        assert!(has_implicant(&f));
    }

    #[test]
    fn implicant_enumeration_matches_negation() {
        let f = parse_cnf("p cnf 1 2\n1 0\n-1 0").unwrap();
        assert!(!has_implicant(&f));
        let single = parse_cnf("p cnf 2 1\n1 -2 0").unwrap();
        assert!(has_implicant(&single));
    }

    #[test]
    fn implicant_iff_block_respecting_grid() {
        // A block-respecting grid of the SAT compat structure exists iff
        // some one-literal-per-clause choice is pairwise non-complementary.
        let mut rng = crate::graph::SplitMix64::new(0x5a7);
        for _ in 0..60 {
            let num_vars = 1 + (rng.next_u64() % 3) as usize;
            let num_clauses = 1 + (rng.next_u64() % 2) as usize;
            let clauses: Vec<Vec<i64>> = (0..num_clauses)
                .map(|_| {
                    let width = 1 + (rng.next_u64() % 3) as usize;
                    (0..width)
                        .map(|_| {
                            let var = 1 + (rng.next_u64() % num_vars as u64) as i64;
                            if rng.next_u64().is_multiple_of(2) {
                                var
                            } else {
                                -var
                            }
                        })
                        .collect()
                })
                .collect();
            let f = Cnf::new(num_vars, clauses).unwrap();
            let inst = sat_to_subgi(&f).unwrap();
            let compat = build_compat(&inst.input, &inst.pattern).unwrap();
            let grids = enumerate_grids(&compat, None).unwrap();
            let confined = grids.iter().any(|grid| {
                (1..=inst.n()).all(|slot| inst.block_of(grid.image(slot)) == inst.block_of(slot))
            });
            assert_eq!(confined, has_implicant(&f), "formula {:?}", f);
        }
    }

    #[test]
    fn tsp_unit_complete_n3() {
        let mut w = WeightedDigraph::new(3).unwrap();
        for u in 1..=3 {
            for v in 1..=3 {
                if u != v {
                    w.set_weight(u, v, rat_int(1));
                }
            }
        }
        let (sys, obj) = tsp_model(&w).unwrap();
        assert_eq!(sys.n(), 3);
        // Every canonical x over distinct images carries total weight 1+... :
        // pattern arcs exist for every canonical (i,j) at n=3, with one
        // orientation each, so each surviving variable costs 1.
        for (var, coeff) in &obj {
            assert!(matches!(var, VarIndex::X { .. }));
            assert_eq!(coeff, &rat_int(1));
        }
        assert_eq!(obj.len(), 18);
    }

    #[test]
    fn tsp_rejects_tiny_and_accepts_negative() {
        assert!(tsp_model(&WeightedDigraph::new(1).unwrap()).is_err());
        let mut w = WeightedDigraph::new(2).unwrap();
        w.set_weight(1, 2, rat_int(-5));
        w.set_weight(2, 1, rat_int(3));
        let (_, obj) = tsp_model(&w).unwrap();
        // n=2: pattern has both arcs 1→2 and 2→1, so the single canonical
        // pair picks up both weights.
        assert_eq!(obj.len(), 2);
        let total: Rat = obj.iter().map(|(_, c)| c.clone()).sum();
        assert_eq!(total, rat_int(-4));
    }
}
