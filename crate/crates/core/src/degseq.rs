//! Degree sequences, their summary statistics and the realizability and
//! applicability predicates used throughout the crate.
//!
//! Vertices are 0-indexed. A [`DegreeSequence`] lists one degree per vertex;
//! a [`DirectedDegreeSequence`] lists one `(in, out)` pair per vertex.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DegreeSequence {
    degrees: Vec<u32>,
}

/// Cached statistics of an undirected sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SequenceStats {
    /// Sum of degrees, `M`.
    pub total: u64,
    /// `M_2 = sum d_j (d_j - 1)`.
    pub m2: u64,
    /// Number of unordered pairs of distinct non-adjacent edges,
    /// `C(M/2, 2) - M_2 / 2`; `None` when `M` is odd.
    #[serde(serialize_with = "crate::serde_util::opt_bigint")]
    pub nonadjacent_pairs: Option<BigInt>,
    pub d_min: u32,
    pub d_max: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub graphical: bool,
    pub stable: bool,
    pub mixing_bound_applies: bool,
}

impl DegreeSequence {
    pub fn new(degrees: Vec<u32>) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::EmptySequence);
        }
        Ok(DegreeSequence { degrees })
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn degree(&self, v: usize) -> u32 {
        self.degrees[v]
    }

    pub fn total(&self) -> u64 {
        self.degrees.iter().map(|&d| d as u64).sum()
    }

    pub fn d_max(&self) -> u32 {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    pub fn d_min(&self) -> u32 {
        self.degrees.iter().copied().min().unwrap_or(0)
    }

    pub fn stats(&self) -> SequenceStats {
        let total = self.total();
        let m2: u64 = self
            .degrees
            .iter()
            .map(|&d| d as u64 * (d as u64).saturating_sub(1))
            .sum();
        let nonadjacent_pairs = if total.is_multiple_of(2) {
            let edges = BigInt::from(total / 2);
            let pairs = if edges.is_zero() {
                BigInt::zero()
            } else {
                &edges * (&edges - 1) / 2
            };
            Some(pairs - BigInt::from(m2 / 2))
        } else {
            None
        };
        SequenceStats {
            total,
            m2,
            nonadjacent_pairs,
            d_min: self.d_min(),
            d_max: self.d_max(),
        }
    }

    /// Erdős–Gallai test.
    pub fn is_graphical(&self) -> bool {
        erdos_gallai(&self.degrees)
    }

    pub fn classify(&self) -> Classification {
        let graphical = self.is_graphical();
        let n = self.len() as i128;
        let d_min = self.d_min() as i128;
        let d_max = self.d_max() as i128;
        let spread = d_max - d_min + 1;
        let stable = spread * spread <= 4 * d_min * (n - d_max + 1);
        let total = self.total() as i128;
        let mixing_bound_applies =
            graphical && d_min >= 1 && d_max >= 3 && 9 * d_max * d_max <= total;
        Classification {
            graphical,
            stable,
            mixing_bound_applies,
        }
    }
}

fn erdos_gallai(degrees: &[u32]) -> bool {
    let total: u64 = degrees.iter().map(|&d| d as u64).sum();
    if total % 2 == 1 {
        return false;
    }
    let n = degrees.len() as u64;
    let mut sorted: Vec<u64> = degrees.iter().map(|&d| d as u64).collect();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    if sorted.first().is_some_and(|&d| d >= n) {
        return false;
    }
    let mut prefix = 0u64;
    for k in 1..=sorted.len() {
        prefix += sorted[k - 1];
        let k64 = k as u64;
        let tail: u64 = sorted[k..].iter().map(|&d| d.min(k64)).sum();
        if prefix > k64 * (k64 - 1) + tail {
            return false;
        }
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DirectedDegreeSequence {
    /// `(in_degree, out_degree)` per vertex.
    pairs: Vec<(u32, u32)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DirectedStats {
    /// Number of arcs `m`.
    pub arcs: u64,
    /// Minimum over all `2n` semi-degrees.
    pub r_min: u32,
    /// Maximum over all `2n` semi-degrees.
    pub r_max: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DirectedClassification {
    pub digraphical: bool,
    /// Degree hypotheses of the directed mixing theorem. Switch-irreducibility
    /// is decided separately by [`crate::irreducibility`].
    pub mixing_bound_degrees_ok: bool,
}

impl DirectedDegreeSequence {
    pub fn new(pairs: Vec<(u32, u32)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::EmptySequence);
        }
        Ok(DirectedDegreeSequence { pairs })
    }

    pub fn from_in_out(ins: &[u32], outs: &[u32]) -> Result<Self> {
        if ins.len() != outs.len() {
            return Err(Error::DegreeMismatch);
        }
        Self::new(ins.iter().copied().zip(outs.iter().copied()).collect())
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    pub fn in_degree(&self, v: usize) -> u32 {
        self.pairs[v].0
    }

    pub fn out_degree(&self, v: usize) -> u32 {
        self.pairs[v].1
    }

    pub fn in_degrees(&self) -> Vec<u32> {
        self.pairs.iter().map(|p| p.0).collect()
    }

    pub fn out_degrees(&self) -> Vec<u32> {
        self.pairs.iter().map(|p| p.1).collect()
    }

    pub fn in_sum(&self) -> u64 {
        self.pairs.iter().map(|p| p.0 as u64).sum()
    }

    pub fn out_sum(&self) -> u64 {
        self.pairs.iter().map(|p| p.1 as u64).sum()
    }

    /// Fails when the in- and out-degree sums differ.
    pub fn check_sums(&self) -> Result<u64> {
        let (in_sum, out_sum) = (self.in_sum(), self.out_sum());
        if in_sum != out_sum {
            return Err(Error::InOutMismatch { in_sum, out_sum });
        }
        Ok(in_sum)
    }

    pub fn stats(&self) -> DirectedStats {
        let semi = self.pairs.iter().flat_map(|&(i, o)| [i, o]);
        DirectedStats {
            arcs: self.out_sum(),
            r_min: semi.clone().min().unwrap_or(0),
            r_max: semi.max().unwrap_or(0),
        }
    }

    /// Fulkerson–Chen–Anstee test.
    pub fn is_digraphical(&self) -> bool {
        self.check_sums().is_ok() && fulkerson(&self.pairs)
    }

    pub fn classify(&self) -> Result<DirectedClassification> {
        let m = self.check_sums()? as u128;
        let digraphical = fulkerson(&self.pairs);
        let s = self.stats();
        let r_max = s.r_max as u128;
        Ok(DirectedClassification {
            digraphical,
            mixing_bound_degrees_ok: s.r_min >= 1 && r_max >= 2 && 16 * r_max * r_max <= m,
        })
    }
}

/// Loop-free digraph realizability. Pairs sorted by out-degree descending,
/// ties by in-degree descending; then for every `k`
/// `sum_{i<=k} out_i <= sum_{i<=k} min(in_i, k-1) + sum_{i>k} min(in_i, k)`.
fn fulkerson(pairs: &[(u32, u32)]) -> bool {
    let n = pairs.len() as u64;
    let mut sorted: Vec<(u64, u64)> = pairs
        .iter()
        .map(|&(i, o)| (o as u64, i as u64))
        .collect();
    if sorted.iter().any(|&(o, i)| o + 1 > n || i + 1 > n) {
        return false;
    }
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let mut lhs = 0u64;
    for k in 1..=sorted.len() {
        lhs += sorted[k - 1].0;
        let k64 = k as u64;
        let head: u64 = sorted[..k].iter().map(|&(_, i)| i.min(k64 - 1)).sum();
        let tail: u64 = sorted[k..].iter().map(|&(_, i)| i.min(k64)).sum();
        if lhs > head + tail {
            return false;
        }
    }
    true
}

/// Parses one degree per line. Blank lines and `#` comments are skipped.
pub fn parse_degrees(text: &str) -> Result<DegreeSequence> {
    let mut degrees = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = strip_comment(line);
        if line.is_empty() {
            continue;
        }
        let d = line.parse::<u32>().map_err(|e| Error::Parse {
            line: lineno + 1,
            msg: format!("expected a non-negative integer, got {line:?} ({e})"),
        })?;
        degrees.push(d);
    }
    DegreeSequence::new(degrees)
}

/// Parses `in out` per line.
pub fn parse_directed_degrees(text: &str) -> Result<DirectedDegreeSequence> {
    let mut pairs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = strip_comment(line);
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let bad = || Error::Parse {
            line: lineno + 1,
            msg: format!("expected \"in out\", got {line:?}"),
        };
        if fields.len() != 2 {
            return Err(bad());
        }
        let i = fields[0].parse::<u32>().map_err(|_| bad())?;
        let o = fields[1].parse::<u32>().map_err(|_| bad())?;
        pairs.push((i, o));
    }
    DirectedDegreeSequence::new(pairs)
}

/// Parses an inline sequence such as `"2,2,1,1"` (undirected) or
/// `"1:1,1:1,1:1"` (directed, `in:out`).
pub fn parse_inline(text: &str) -> Result<DegreeSequence> {
    let degrees = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<u32>().map_err(|_| Error::Parse {
                line: 1,
                msg: format!("bad degree {s:?}"),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    DegreeSequence::new(degrees)
}

pub fn parse_inline_directed(text: &str) -> Result<DirectedDegreeSequence> {
    let pairs = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| {
            let bad = || Error::Parse {
                line: 1,
                msg: format!("bad in:out pair {s:?}"),
            };
            let (i, o) = s.split_once(':').ok_or_else(bad)?;
            Ok((
                i.parse::<u32>().map_err(|_| bad())?,
                o.parse::<u32>().map_err(|_| bad())?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    DirectedDegreeSequence::new(pairs)
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(d: &[u32]) -> DegreeSequence {
        DegreeSequence::new(d.to_vec()).unwrap()
    }

    #[test]
    fn stats_k4() {
        let s = seq(&[3, 3, 3, 3]).stats();
        assert_eq!(s.total, 12);
        assert_eq!(s.m2, 24);
        assert_eq!(s.nonadjacent_pairs, Some(BigInt::from(3)));
    }

    #[test]
    fn stats_triangle_and_empty() {
        let s = seq(&[2, 2, 2]).stats();
        assert_eq!((s.total, s.m2), (6, 6));
        assert_eq!(s.nonadjacent_pairs, Some(BigInt::from(0)));
        let e = seq(&[0, 0]).stats();
        assert_eq!((e.total, e.m2), (0, 0));
        assert_eq!(e.nonadjacent_pairs, Some(BigInt::from(0)));
    }

    #[test]
    fn odd_sum_leaves_pairs_undefined() {
        assert_eq!(seq(&[1, 1, 1]).stats().nonadjacent_pairs, None);
    }

    #[test]
    fn classify_examples() {
        assert!(!seq(&[3, 3, 1, 1]).classify().graphical);
        assert!(seq(&[2, 2, 1, 1]).classify().graphical);
        let k4 = seq(&[3, 3, 3, 3]).classify();
        assert!(k4.graphical);
        assert!(!k4.mixing_bound_applies);
        let cubic = seq(&[3; 28]).classify();
        assert!(cubic.mixing_bound_applies);
    }

    #[test]
    fn stable_formula() {
        // (3-3+1)^2 = 1 <= 4*3*(4-3+1) = 24
        assert!(seq(&[3, 3, 3, 3]).classify().stable);
        // star K_{1,4}: (4-1+1)^2 = 16 > 4*1*(5-4+1) = 8
        assert!(!seq(&[4, 1, 1, 1, 1]).classify().stable);
    }

    #[test]
    fn directed_classification() {
        let cyc = DirectedDegreeSequence::new(vec![(1, 1); 3]).unwrap();
        let c = cyc.classify().unwrap();
        assert!(c.digraphical);
        assert!(!c.mixing_bound_degrees_ok);

        let dd = DirectedDegreeSequence::new(vec![(2, 0), (0, 2), (1, 1)]).unwrap();
        assert_eq!(dd.in_sum(), 3);
        assert_eq!(dd.out_sum(), 3);
        // vertex 1 must send arcs to 0 and 2, vertex 2 to 0
        assert!(dd.classify().unwrap().digraphical);

        let bad = DirectedDegreeSequence::new(vec![(1, 0), (0, 0)]).unwrap();
        assert_eq!(
            bad.classify(),
            Err(Error::InOutMismatch { in_sum: 1, out_sum: 0 })
        );

        let reg = DirectedDegreeSequence::new(vec![(2, 2); 32]).unwrap();
        assert!(reg.classify().unwrap().mixing_bound_degrees_ok);
    }

    #[test]
    fn parsing() {
        let d = parse_degrees("# header\n2\n2\n\n1 # tail\n1\n").unwrap();
        assert_eq!(d.degrees(), &[2, 2, 1, 1]);
        assert!(parse_degrees("2\nx\n").is_err());
        let dd = parse_directed_degrees("1 1\n1 1\n1 1\n").unwrap();
        assert_eq!(dd.pairs(), &[(1, 1); 3]);
        assert!(parse_directed_degrees("1\n").is_err());
        assert_eq!(parse_inline("2,2, 1 1").unwrap().degrees(), &[2, 2, 1, 1]);
        assert_eq!(
            parse_inline_directed("1:0,0:1").unwrap().pairs(),
            &[(1, 0), (0, 1)]
        );
        assert_eq!(parse_degrees(""), Err(Error::EmptySequence));
    }
}
