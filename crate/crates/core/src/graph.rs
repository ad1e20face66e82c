//! Multi-digraph data model: parsing, padding, relabeling, random generation.
//!
//! A [`Digraph`] is a square matrix of arc multiplicities over 1-indexed
//! vertices; loops live on the diagonal. Simple graphs are the 0/1 special
//! case, with an undirected edge encoded as a pair of opposite arcs.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use std::fmt;

use crate::error::{Error, Result};
use crate::rat::{parse_rat, Rat};

/// Directed multigraph with multi-loops, stored as an n×n multiplicity matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    adj: Vec<u64>,
}

impl Digraph {
    /// Empty digraph (no arcs) on `n ≥ 1` vertices.
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInstance("vertex count must be ≥ 1".into()));
        }
        Ok(Digraph {
            n,
            adj: vec![0; n * n],
        })
    }

    /// Digraph from a row-major multiplicity matrix.
    pub fn from_rows(rows: &[Vec<u64>]) -> Result<Self> {
        let n = rows.len();
        let mut g = Digraph::empty(n)?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "row {} has length {}, expected {}",
                    i + 1,
                    row.len(),
                    n
                )));
            }
            for (j, &m) in row.iter().enumerate() {
                g.adj[i * n + j] = m;
            }
        }
        Ok(g)
    }

    /// Digraph with the given arcs, each of multiplicity 1 (repeats add up).
    pub fn from_arcs(n: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        let mut g = Digraph::empty(n)?;
        for &(u, v) in arcs {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            g.adj[(u - 1) * n + (v - 1)] += 1;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Multiplicity of the arc `u → v` (1-indexed; `u = v` is a loop).
    pub fn arc(&self, u: usize, v: usize) -> u64 {
        debug_assert!(u >= 1 && u <= self.n && v >= 1 && v <= self.n);
        self.adj[(u - 1) * self.n + (v - 1)]
    }

    pub fn arc_count(&self) -> u64 {
        self.adj.iter().sum()
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v < 1 || v > self.n {
            return Err(Error::InvalidInstance(format!(
                "vertex {} out of range [1,{}]",
                v, self.n
            )));
        }
        Ok(())
    }

    /// Extend to `target_n` vertices by appending isolated ones; existing
    /// multiplicities are untouched.
    pub fn pad(&self, target_n: usize) -> Result<Digraph> {
        if target_n < self.n {
            return Err(Error::InvalidInstance(format!(
                "cannot pad a {}-vertex digraph down to {}",
                self.n, target_n
            )));
        }
        let mut out = Digraph::empty(target_n)?;
        for u in 1..=self.n {
            for v in 1..=self.n {
                out.adj[(u - 1) * target_n + (v - 1)] = self.arc(u, v);
            }
        }
        Ok(out)
    }

    /// Apply a vertex relabeling: `result.arc(perm[u], perm[v]) = self.arc(u, v)`.
    ///
    /// `perm` is 1-indexed: `perm[u-1]` is the new label of vertex `u`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Digraph> {
        check_permutation(perm, self.n)?;
        let mut out = Digraph::empty(self.n)?;
        for u in 1..=self.n {
            for v in 1..=self.n {
                out.adj[(perm[u - 1] - 1) * self.n + (perm[v - 1] - 1)] = self.arc(u, v);
            }
        }
        Ok(out)
    }

    /// Serialize in the graph file format accepted by [`parse_digraph`].
    pub fn to_text(&self) -> String {
        let mut s = format!("digraph {}\n", self.n);
        for u in 1..=self.n {
            for v in 1..=self.n {
                let m = self.arc(u, v);
                match m {
                    0 => {}
                    1 => s.push_str(&format!("{} {}\n", u, v)),
                    _ => s.push_str(&format!("{} {} {}\n", u, v, m)),
                }
            }
        }
        s
    }
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Digraph(n={})", self.n)?;
        for u in 1..=self.n {
            for v in 1..=self.n {
                write!(f, "{} ", self.arc(u, v))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::NotAPermutation(n));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p < 1 || p > n || seen[p - 1] {
            return Err(Error::NotAPermutation(n));
        }
        seen[p - 1] = true;
    }
    Ok(())
}

/// Parse the graph file format.
///
/// Line 1: `digraph <n>`. Each following non-empty, non-`#` line is
/// `<u> <v>` or `<u> <v> <mult>` with 1-indexed vertices; repeated arc
/// lines are additive.
pub fn parse_digraph(text: &str) -> Result<Digraph> {
    let mut lines = text.lines().enumerate();
    let (header_no, header) = lines
        .by_ref()
        .find(|(_, l)| !skip_line(l))
        .ok_or_else(|| Error::parse(1, "missing `digraph <n>` header"))?;
    let n = parse_header(header, header_no + 1, "digraph")?;
    let mut g = Digraph::empty(n)?;
    for (idx, line) in lines {
        let line_no = idx + 1;
        if skip_line(line) {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 && fields.len() != 3 {
            return Err(Error::parse(
                line_no,
                "expected `<u> <v>` or `<u> <v> <mult>`",
            ));
        }
        let u = parse_vertex(fields[0], line_no, n)?;
        let v = parse_vertex(fields[1], line_no, n)?;
        let mult: u64 = if fields.len() == 3 {
            match fields[2].parse::<i64>() {
                Ok(m) if m >= 0 => m as u64,
                Ok(m) => {
                    return Err(Error::parse(
                        line_no,
                        format!("negative multiplicity {}", m),
                    ))
                }
                Err(_) => {
                    return Err(Error::parse(
                        line_no,
                        format!("bad multiplicity `{}`", fields[2]),
                    ))
                }
            }
        } else {
            1
        };
        g.adj[(u - 1) * n + (v - 1)] += mult;
    }
    Ok(g)
}

fn skip_line(line: &str) -> bool {
    let t = line.trim();
    t.is_empty() || t.starts_with('#')
}

fn parse_header(line: &str, line_no: usize, keyword: &str) -> Result<usize> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != 2 || fields[0] != keyword {
        return Err(Error::parse(
            line_no,
            format!("expected `{} <n>` header", keyword),
        ));
    }
    let n: usize = fields[1]
        .parse()
        .map_err(|_| Error::parse(line_no, format!("bad vertex count `{}`", fields[1])))?;
    if n == 0 {
        return Err(Error::parse(line_no, "vertex count must be ≥ 1"));
    }
    Ok(n)
}

fn parse_vertex(field: &str, line_no: usize, n: usize) -> Result<usize> {
    let v: usize = field
        .parse()
        .map_err(|_| Error::parse(line_no, format!("bad vertex `{}`", field)))?;
    if v < 1 || v > n {
        return Err(Error::parse(
            line_no,
            format!("vertex {} out of range [1,{}]", v, n),
        ));
    }
    Ok(v)
}

/// Arc-weighted digraph with exact rational weights; `None` marks a
/// non-adjacent ordered pair. Weights may be negative.
#[derive(Clone, PartialEq, Debug)]
pub struct WeightedDigraph {
    n: usize,
    weight: Vec<Option<Rat>>,
}

impl WeightedDigraph {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInstance("vertex count must be ≥ 1".into()));
        }
        Ok(WeightedDigraph {
            n,
            weight: vec![None; n * n],
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<&Rat> {
        self.weight[(u - 1) * self.n + (v - 1)].as_ref()
    }

    pub fn set_weight(&mut self, u: usize, v: usize, w: Rat) {
        self.weight[(u - 1) * self.n + (v - 1)] = Some(w);
    }

    /// 0/1 digraph with an arc exactly where a weight is present.
    pub fn support(&self) -> Digraph {
        let mut g = Digraph::empty(self.n).expect("n ≥ 1 by construction");
        for u in 1..=self.n {
            for v in 1..=self.n {
                if self.weight(u, v).is_some() {
                    g.adj[(u - 1) * self.n + (v - 1)] = 1;
                }
            }
        }
        g
    }
}

/// Parse the weighted graph file format: header `wdigraph <n>`, then lines
/// `<u> <v> <weight>` with the weight an integer or `p/q`. Absent pairs are
/// simply omitted; assigning the same pair twice is an error.
pub fn parse_weighted_digraph(text: &str) -> Result<WeightedDigraph> {
    let mut lines = text.lines().enumerate();
    let (header_no, header) = lines
        .by_ref()
        .find(|(_, l)| !skip_line(l))
        .ok_or_else(|| Error::parse(1, "missing `wdigraph <n>` header"))?;
    let n = parse_header(header, header_no + 1, "wdigraph")?;
    let mut g = WeightedDigraph::new(n)?;
    for (idx, line) in lines {
        let line_no = idx + 1;
        if skip_line(line) {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::parse(line_no, "expected `<u> <v> <weight>`"));
        }
        let u = parse_vertex(fields[0], line_no, n)?;
        let v = parse_vertex(fields[1], line_no, n)?;
        let w = parse_rat(fields[2])
            .map_err(|_| Error::parse(line_no, format!("bad weight `{}`", fields[2])))?;
        if g.weight(u, v).is_some() {
            return Err(Error::parse(
                line_no,
                format!("weight for arc {} -> {} given twice", u, v),
            ));
        }
        g.set_weight(u, v, w);
    }
    Ok(g)
}

/// SplitMix64 pseudorandom generator (Steele, Lea & Flood; the reference
/// sequence of Vigna's `splitmix64.c`). Fixed here so that seeds reproduce
/// the same instances on every platform.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

/// Random digraph: every ordered pair (loops included) independently gets an
/// arc with probability `arc_probability`, multiplicity uniform in
/// `[1, max_multiplicity]`. Deterministic in `seed`: cells are drawn in
/// row-major order from a [`SplitMix64`] stream, one draw for presence and,
/// when present, one for multiplicity.
///
/// Presence uses the exact test `r < floor(p·2⁶⁴)` on a uniform 64-bit `r`
/// (with `p = 1` always present), multiplicity is `1 + r' mod max`.
pub fn random_digraph(
    n: usize,
    arc_probability: &Rat,
    max_multiplicity: u64,
    seed: u64,
) -> Result<Digraph> {
    if arc_probability.is_negative() || arc_probability > &Rat::one() {
        return Err(Error::InvalidInstance(format!(
            "arc probability {} outside [0,1]",
            arc_probability
        )));
    }
    if max_multiplicity < 1 {
        return Err(Error::InvalidInstance(
            "max multiplicity must be ≥ 1".into(),
        ));
    }
    let mut g = Digraph::empty(n)?;
    let mut rng = SplitMix64::new(seed);
    let two64 = BigInt::one() << 64;
    let threshold: BigInt = (arc_probability * Rat::from_integer(two64))
        .floor()
        .to_integer();
    for u in 1..=n {
        for v in 1..=n {
            let r = rng.next_u64();
            let present = arc_probability.is_one() || BigInt::from(r) < threshold;
            if present {
                let m = 1 + rng.next_u64() % max_multiplicity;
                g.adj[(u - 1) * n + (v - 1)] = m;
            }
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};
    use num_traits::Zero;

    #[test]
    fn splitmix64_reference_sequence() {
        // First outputs of the reference implementation for seed 1234567.
        let mut rng = SplitMix64::new(1234567);
        let got: Vec<u64> = (0..5).map(|_| rng.next_u64()).collect();
        assert_eq!(
            got,
            vec![
                6457827717110365317,
                3203168211198807973,
                9817491932198370423,
                4593380528125082431,
                16408922859458223821,
            ]
        );
    }

    #[test]
    fn parse_single_arc() {
        let g = parse_digraph("digraph 2\n1 2").unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.arc(1, 2), 1);
        assert_eq!(g.arc(2, 1), 0);
        assert_eq!(g.arc(1, 1), 0);
    }

    #[test]
    fn parse_triple_loop() {
        let g = parse_digraph("digraph 1\n1 1 3").unwrap();
        assert_eq!(g.n(), 1);
        assert_eq!(g.arc(1, 1), 3);
    }

    #[test]
    fn parse_three_cycle() {
        let g = parse_digraph("digraph 3\n1 2\n2 3\n3 1").unwrap();
        assert_eq!(g, Digraph::from_arcs(3, &[(1, 2), (2, 3), (3, 1)]).unwrap());
    }

    #[test]
    fn parse_repeats_add_up() {
        let g = parse_digraph("digraph 2\n1 2\n1 2\n1 2 3").unwrap();
        assert_eq!(g.arc(1, 2), 5);
    }

    #[test]
    fn parse_comments_and_blanks() {
        let g = parse_digraph("# instance\n\ndigraph 2\n# arc\n1 2\n\n").unwrap();
        assert_eq!(g.arc(1, 2), 1);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match parse_digraph("digraph 2\n1 3") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {:?}", other.map(|_| ())),
        }
        assert!(parse_digraph("graph 2\n1 2").is_err());
        assert!(parse_digraph("digraph 2\n1 2 -1").is_err());
        assert!(parse_digraph("digraph 0").is_err());
    }

    #[test]
    fn pad_examples() {
        // Loop on 1 vertex padded to 2.
        let loop1 = parse_digraph("digraph 1\n1 1").unwrap();
        let padded = loop1.pad(2).unwrap();
        assert_eq!(
            padded,
            Digraph::from_rows(&[vec![1, 0], vec![0, 0]]).unwrap()
        );
        // Identity padding.
        let arc = parse_digraph("digraph 2\n1 2").unwrap();
        assert_eq!(arc.pad(2).unwrap(), arc);
        // Zero-extension.
        let wide = arc.pad(4).unwrap();
        assert_eq!(wide.n(), 4);
        assert_eq!(wide.arc(1, 2), 1);
        assert_eq!(wide.arc_count(), 1);
        // Shrinking is an error.
        assert!(arc.pad(1).is_err());
    }

    #[test]
    fn relabel_transposition() {
        let arc = parse_digraph("digraph 2\n1 2").unwrap();
        let swapped = arc.relabel(&[2, 1]).unwrap();
        assert_eq!(swapped.arc(2, 1), 1);
        assert_eq!(swapped.arc(1, 2), 0);
        assert_eq!(arc.relabel(&[1, 2]).unwrap(), arc);
        assert!(arc.relabel(&[1, 1]).is_err());
        assert!(arc.relabel(&[1]).is_err());
    }

    #[test]
    fn relabel_cycle_symmetry() {
        let c3 = Digraph::from_arcs(3, &[(1, 2), (2, 3), (3, 1)]).unwrap();
        let rotated = c3.relabel(&[2, 3, 1]).unwrap();
        assert_eq!(rotated, c3);
    }

    #[test]
    fn random_digraph_extremes_and_determinism() {
        let empty = random_digraph(3, &Rat::zero(), 5, 99).unwrap();
        assert_eq!(empty.arc_count(), 0);
        let full = random_digraph(2, &rat_int(1), 1, 99).unwrap();
        for u in 1..=2 {
            for v in 1..=2 {
                assert_eq!(full.arc(u, v), 1);
            }
        }
        let a = random_digraph(4, &rat(1, 2), 1, 7).unwrap();
        let b = random_digraph(4, &rat(1, 2), 1, 7).unwrap();
        assert_eq!(a, b);
        let c = random_digraph(4, &rat(1, 2), 1, 8).unwrap();
        assert_ne!(a, c);
        assert!(random_digraph(3, &rat(3, 2), 1, 0).is_err());
    }

    #[test]
    fn weighted_parse() {
        let w = parse_weighted_digraph("wdigraph 3\n1 2 5\n2 3 -1/2\n3 1 0").unwrap();
        assert_eq!(w.weight(1, 2), Some(&rat_int(5)));
        assert_eq!(w.weight(2, 3), Some(&rat(-1, 2)));
        assert_eq!(w.weight(3, 1), Some(&rat_int(0)));
        assert_eq!(w.weight(1, 3), None);
        assert!(parse_weighted_digraph("wdigraph 2\n1 2 1\n1 2 2").is_err());
        assert!(parse_weighted_digraph("wdigraph 2\n1 2").is_err());
        let support = w.support();
        assert_eq!(support.arc(1, 2), 1);
        assert_eq!(support.arc(3, 1), 1);
        assert_eq!(support.arc(1, 3), 0);
    }
}
