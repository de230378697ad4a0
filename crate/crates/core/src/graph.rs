//! Simple graphs and digraphs backed by an indexed edge array plus a hash
//! index, giving O(1) uniform edge draws, membership queries and edge
//! replacement.
//!
//! Edge-list text format (0-indexed): a header line `<n> <count>` followed by
//! `count` lines `u v`. Edges are written in stored order so that a write/read
//! round trip is bit-exact.

use std::collections::HashMap;
use std::fmt::Write as _;

use rand::Rng;

use crate::error::{Error, Result};

#[inline]
fn key(u: u32, v: u32) -> u64 {
    ((u as u64) << 32) | v as u64
}

/// Indexed set of vertex pairs with swap-remove deletion.
#[derive(Debug, Clone, Default)]
struct PairSet {
    pairs: Vec<(u32, u32)>,
    index: HashMap<u64, usize>,
}

impl PairSet {
    fn contains(&self, u: u32, v: u32) -> bool {
        self.index.contains_key(&key(u, v))
    }

    fn insert(&mut self, u: u32, v: u32) {
        self.index.insert(key(u, v), self.pairs.len());
        self.pairs.push((u, v));
    }

    fn remove(&mut self, u: u32, v: u32) -> bool {
        let Some(i) = self.index.remove(&key(u, v)) else {
            return false;
        };
        self.pairs.swap_remove(i);
        if let Some(&(a, b)) = self.pairs.get(i) {
            self.index.insert(key(a, b), i);
        }
        true
    }

    fn slot(&self, u: u32, v: u32) -> Option<usize> {
        self.index.get(&key(u, v)).copied()
    }

    fn audit(&self) -> Result<()> {
        if self.index.len() != self.pairs.len() {
            return Err(Error::Replacement(format!(
                "index holds {} keys for {} stored pairs",
                self.index.len(),
                self.pairs.len()
            )));
        }
        for (i, &(u, v)) in self.pairs.iter().enumerate() {
            if self.index.get(&key(u, v)) != Some(&i) {
                return Err(Error::Replacement(format!(
                    "pair ({u}, {v}) at slot {i} missing from index"
                )));
            }
        }
        Ok(())
    }
}

fn distinct_pair<R: Rng + ?Sized>(count: usize, rng: &mut R) -> (usize, usize) {
    let i = rng.gen_range(0..count);
    let mut j = rng.gen_range(0..count - 1);
    if j >= i {
        j += 1;
    }
    (i, j)
}

#[inline]
fn norm(u: u32, v: u32) -> (u32, u32) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    edges: PairSet,
    degree: Vec<u32>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.sorted_edges() == other.sorted_edges()
    }
}

impl Eq for Graph {}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            n,
            edges: PairSet::default(),
            degree: vec![0; n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    fn check(&self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::InvalidEdge(u, v, "vertex out of range"));
        }
        if u == v {
            return Err(Error::InvalidEdge(u, v, "self-loop"));
        }
        Ok(())
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check(u, v)?;
        let (a, b) = norm(u as u32, v as u32);
        if self.edges.contains(a, b) {
            return Err(Error::InvalidEdge(u, v, "duplicate edge"));
        }
        self.edges.insert(a, b);
        self.degree[u] += 1;
        self.degree[v] += 1;
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let (a, b) = norm(u as u32, v as u32);
        if !self.edges.remove(a, b) {
            return Err(Error::InvalidEdge(u, v, "edge absent"));
        }
        self.degree[u] -= 1;
        self.degree[v] -= 1;
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.pairs.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && {
            let (a, b) = norm(u as u32, v as u32);
            self.edges.contains(a, b)
        }
    }

    /// Edge `i` as `(min, max)`.
    pub fn edge(&self, i: usize) -> (usize, usize) {
        let (u, v) = self.edges.pairs[i];
        (u as usize, v as usize)
    }

    /// Edges in stored order, each as `(min, max)`.
    pub fn edges(&self) -> impl ExactSizeIterator<Item = (usize, usize)> + '_ {
        self.edges.pairs.iter().map(|&(u, v)| (u as usize, v as usize))
    }

    pub fn sorted_edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<_> = self.edges().collect();
        e.sort_unstable();
        e
    }

    pub fn degree(&self, v: usize) -> u32 {
        self.degree[v]
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degree
    }

    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        (0..self.n).filter(|&u| self.has_edge(u, v)).collect()
    }

    /// Uniform unordered pair of distinct edge indices, returned as an
    /// ordered pair `(i, j)` with `i != j`.
    pub fn random_distinct_edge_pair<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(usize, usize)> {
        if self.edge_count() < 2 {
            return Err(Error::TooFewEdges {
                what: "edges",
                found: self.edge_count(),
            });
        }
        Ok(distinct_pair(self.edge_count(), rng))
    }

    /// Atomically removes the two edges in `remove` and inserts the two in
    /// `add`. The exchange must preserve every vertex degree; on any violated
    /// precondition the graph is left untouched.
    pub fn replace_edges(&mut self, remove: [(usize, usize); 2], add: [(usize, usize); 2]) -> Result<()> {
        let rem = remove.map(|(u, v)| norm(u as u32, v as u32));
        let add_n = add.map(|(u, v)| norm(u as u32, v as u32));
        if rem[0] == rem[1] {
            return Err(Error::Replacement("removed edges coincide".into()));
        }
        if add_n[0] == add_n[1] {
            return Err(Error::Replacement("added edges coincide".into()));
        }
        let mut slots = [0usize; 2];
        for (k, &(a, b)) in rem.iter().enumerate() {
            slots[k] = self.edges.slot(a, b).ok_or_else(|| {
                Error::Replacement(format!("edge ({a}, {b}) is not present"))
            })?;
        }
        for &(u, v) in &add {
            self.check(u, v)?;
        }
        for &(a, b) in &add_n {
            if self.edges.contains(a, b) && !rem.contains(&(a, b)) {
                return Err(Error::Replacement(format!("edge ({a}, {b}) already present")));
            }
        }
        let mut before: Vec<u32> = rem.iter().flat_map(|&(a, b)| [a, b]).collect();
        let mut after: Vec<u32> = add_n.iter().flat_map(|&(a, b)| [a, b]).collect();
        before.sort_unstable();
        after.sort_unstable();
        if before != after {
            return Err(Error::Replacement("exchange changes vertex degrees".into()));
        }
        // Clear both keys first so that an added edge equal to a removed one
        // cannot be evicted by the second overwrite.
        for &(a, b) in &rem {
            self.edges.index.remove(&key(a, b));
        }
        for k in 0..2 {
            let (a, b) = add_n[k];
            self.edges.pairs[slots[k]] = (a, b);
            self.edges.index.insert(key(a, b), slots[k]);
        }
        Ok(())
    }

    /// Full consistency check of the edge array, index and degree counters.
    pub fn audit(&self) -> Result<()> {
        self.edges.audit()?;
        let mut deg = vec![0u32; self.n];
        for &(u, v) in &self.edges.pairs {
            if u >= v || v as usize >= self.n {
                return Err(Error::InvalidEdge(u as usize, v as usize, "not normalised"));
            }
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        if deg != self.degree {
            return Err(Error::DegreeMismatch);
        }
        Ok(())
    }

    pub fn to_edge_list(&self) -> String {
        write_edge_list(self.n, &self.edges.pairs)
    }

    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let (n, pairs) = read_edge_list(text)?;
        let mut g = Graph::new(n);
        for (line, u, v) in pairs {
            g.add_edge(u, v).map_err(|e| Error::Parse {
                line,
                msg: e.to_string(),
            })?;
        }
        Ok(g)
    }
}

/// Simple digraph on vertices `0..n`: no loops, no parallel arcs,
/// antiparallel pairs allowed.
#[derive(Debug, Clone)]
pub struct Digraph {
    n: usize,
    arcs: PairSet,
    in_degree: Vec<u32>,
    out_degree: Vec<u32>,
}

impl PartialEq for Digraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.sorted_arcs() == other.sorted_arcs()
    }
}

impl Eq for Digraph {}

impl Digraph {
    pub fn new(n: usize) -> Self {
        Digraph {
            n,
            arcs: PairSet::default(),
            in_degree: vec![0; n],
            out_degree: vec![0; n],
        }
    }

    pub fn from_arcs(n: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        let mut g = Digraph::new(n);
        for &(u, v) in arcs {
            g.add_arc(u, v)?;
        }
        Ok(g)
    }

    fn check(&self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::InvalidEdge(u, v, "vertex out of range"));
        }
        if u == v {
            return Err(Error::InvalidEdge(u, v, "loop"));
        }
        Ok(())
    }

    pub fn add_arc(&mut self, u: usize, v: usize) -> Result<()> {
        self.check(u, v)?;
        if self.arcs.contains(u as u32, v as u32) {
            return Err(Error::InvalidEdge(u, v, "duplicate arc"));
        }
        self.arcs.insert(u as u32, v as u32);
        self.out_degree[u] += 1;
        self.in_degree[v] += 1;
        Ok(())
    }

    pub fn remove_arc(&mut self, u: usize, v: usize) -> Result<()> {
        if !self.arcs.remove(u as u32, v as u32) {
            return Err(Error::InvalidEdge(u, v, "arc absent"));
        }
        self.out_degree[u] -= 1;
        self.in_degree[v] -= 1;
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.pairs.len()
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.arcs.contains(u as u32, v as u32)
    }

    pub fn arc(&self, i: usize) -> (usize, usize) {
        let (u, v) = self.arcs.pairs[i];
        (u as usize, v as usize)
    }

    pub fn arcs(&self) -> impl ExactSizeIterator<Item = (usize, usize)> + '_ {
        self.arcs.pairs.iter().map(|&(u, v)| (u as usize, v as usize))
    }

    pub fn sorted_arcs(&self) -> Vec<(usize, usize)> {
        let mut a: Vec<_> = self.arcs().collect();
        a.sort_unstable();
        a
    }

    pub fn in_degree(&self, v: usize) -> u32 {
        self.in_degree[v]
    }

    pub fn out_degree(&self, v: usize) -> u32 {
        self.out_degree[v]
    }

    pub fn in_degrees(&self) -> &[u32] {
        &self.in_degree
    }

    pub fn out_degrees(&self) -> &[u32] {
        &self.out_degree
    }

    pub fn random_distinct_arc_pair<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(usize, usize)> {
        if self.arc_count() < 2 {
            return Err(Error::TooFewEdges {
                what: "arcs",
                found: self.arc_count(),
            });
        }
        Ok(distinct_pair(self.arc_count(), rng))
    }

    /// Atomic two-arc exchange preserving every in- and out-degree.
    pub fn replace_arcs(&mut self, remove: [(usize, usize); 2], add: [(usize, usize); 2]) -> Result<()> {
        if remove[0] == remove[1] {
            return Err(Error::Replacement("removed arcs coincide".into()));
        }
        if add[0] == add[1] {
            return Err(Error::Replacement("added arcs coincide".into()));
        }
        let mut slots = [0usize; 2];
        for (k, &(u, v)) in remove.iter().enumerate() {
            slots[k] = self
                .arcs
                .slot(u as u32, v as u32)
                .ok_or_else(|| Error::Replacement(format!("arc ({u}, {v}) is not present")))?;
        }
        for &(u, v) in &add {
            self.check(u, v)?;
            if self.has_arc(u, v) && !remove.contains(&(u, v)) {
                return Err(Error::Replacement(format!("arc ({u}, {v}) already present")));
            }
        }
        let mut tails_before = [remove[0].0, remove[1].0];
        let mut tails_after = [add[0].0, add[1].0];
        let mut heads_before = [remove[0].1, remove[1].1];
        let mut heads_after = [add[0].1, add[1].1];
        tails_before.sort_unstable();
        tails_after.sort_unstable();
        heads_before.sort_unstable();
        heads_after.sort_unstable();
        if tails_before != tails_after || heads_before != heads_after {
            return Err(Error::Replacement("exchange changes semi-degrees".into()));
        }
        for &(u, v) in &remove {
            self.arcs.index.remove(&key(u as u32, v as u32));
        }
        for k in 0..2 {
            let (u, v) = add[k];
            self.arcs.pairs[slots[k]] = (u as u32, v as u32);
            self.arcs.index.insert(key(u as u32, v as u32), slots[k]);
        }
        Ok(())
    }

    pub fn audit(&self) -> Result<()> {
        self.arcs.audit()?;
        let mut ind = vec![0u32; self.n];
        let mut outd = vec![0u32; self.n];
        for &(u, v) in &self.arcs.pairs {
            if u == v || u as usize >= self.n || v as usize >= self.n {
                return Err(Error::InvalidEdge(u as usize, v as usize, "bad arc"));
            }
            outd[u as usize] += 1;
            ind[v as usize] += 1;
        }
        if ind != self.in_degree || outd != self.out_degree {
            return Err(Error::DegreeMismatch);
        }
        Ok(())
    }

    pub fn to_edge_list(&self) -> String {
        write_edge_list(self.n, &self.arcs.pairs)
    }

    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let (n, pairs) = read_edge_list(text)?;
        let mut g = Digraph::new(n);
        for (line, u, v) in pairs {
            g.add_arc(u, v).map_err(|e| Error::Parse {
                line,
                msg: e.to_string(),
            })?;
        }
        Ok(g)
    }
}

fn write_edge_list(n: usize, pairs: &[(u32, u32)]) -> String {
    let mut s = String::with_capacity(16 + pairs.len() * 8);
    let _ = writeln!(s, "{} {}", n, pairs.len());
    for &(u, v) in pairs {
        let _ = writeln!(s, "{u} {v}");
    }
    s
}

type ParsedPairs = (usize, Vec<(usize, usize, usize)>);

fn read_edge_list(text: &str) -> Result<ParsedPairs> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let two = |line: usize, l: &str| -> Result<(usize, usize)> {
        let mut it = l.split_whitespace().map(|t| t.parse::<usize>());
        match (it.next(), it.next(), it.next()) {
            (Some(Ok(a)), Some(Ok(b)), None) => Ok((a, b)),
            _ => Err(Error::Parse {
                line,
                msg: format!("expected two non-negative integers, got {l:?}"),
            }),
        }
    };
    let (hl, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing header line".into(),
    })?;
    let (n, count) = two(hl, header)?;
    let mut pairs = Vec::with_capacity(count);
    for (line, l) in lines {
        let (u, v) = two(line, l)?;
        pairs.push((line, u, v));
    }
    if pairs.len() != count {
        return Err(Error::Parse {
            line: hl,
            msg: format!("header announces {count} pairs, found {}", pairs.len()),
        });
    }
    Ok((n, pairs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn path4() -> Graph {
        Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap()
    }

    #[test]
    fn rejects_loops_and_duplicates() {
        let mut g = Graph::new(3);
        assert!(g.add_edge(1, 1).is_err());
        g.add_edge(0, 1).unwrap();
        assert!(g.add_edge(1, 0).is_err());
        assert!(g.add_edge(0, 3).is_err());
        let mut d = Digraph::new(2);
        d.add_arc(0, 1).unwrap();
        d.add_arc(1, 0).unwrap();
        assert!(d.add_arc(0, 1).is_err());
    }

    #[test]
    fn replace_path() {
        let mut g = path4();
        g.replace_edges([(0, 1), (2, 3)], [(0, 2), (1, 3)]).unwrap();
        assert_eq!(g.sorted_edges(), vec![(0, 2), (1, 2), (1, 3)]);
        assert_eq!(g.degrees(), &[1, 2, 2, 1]);
        g.audit().unwrap();
    }

    #[test]
    fn replace_rejections_leave_graph_unchanged() {
        let mut g = path4();
        let before = g.to_edge_list();
        assert!(g.replace_edges([(0, 2), (2, 3)], [(0, 3), (2, 2)]).is_err());
        assert!(g.replace_edges([(0, 1), (2, 3)], [(0, 3), (1, 2)]).is_err());
        assert!(g.replace_edges([(0, 1), (2, 3)], [(0, 2), (1, 0)]).is_err());
        assert_eq!(g.to_edge_list(), before);
        g.replace_edges([(0, 1), (2, 3)], [(0, 1), (2, 3)]).unwrap();
        assert_eq!(g.to_edge_list(), before);
        g.audit().unwrap();
    }

    #[test]
    fn remove_swaps_last() {
        let mut g = path4();
        g.remove_edge(1, 0).unwrap();
        assert_eq!(g.edge(0), (2, 3));
        g.audit().unwrap();
        assert!(g.remove_edge(0, 1).is_err());
    }

    #[test]
    fn pair_draw_errors_and_uniformity() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(g.random_distinct_edge_pair(&mut rng).is_err());
        let g = path4();
        let mut counts = [0usize; 3];
        for _ in 0..30_000 {
            let (i, j) = g.random_distinct_edge_pair(&mut rng).unwrap();
            assert_ne!(i, j);
            counts[i + j - 1] += 1;
        }
        for c in counts {
            assert!((c as f64 / 30_000.0 - 1.0 / 3.0).abs() < 0.015, "{counts:?}");
        }
    }

    #[test]
    fn edge_list_round_trip() {
        let mut g = path4();
        g.replace_edges([(0, 1), (2, 3)], [(0, 2), (1, 3)]).unwrap();
        let text = g.to_edge_list();
        let h = Graph::parse_edge_list(&text).unwrap();
        assert_eq!(h.to_edge_list(), text);
        let d = Digraph::from_arcs(3, &[(2, 0), (0, 1), (1, 2)]).unwrap();
        let t = d.to_edge_list();
        assert_eq!(t, "3 3\n2 0\n0 1\n1 2\n");
        assert_eq!(Digraph::parse_edge_list(&t).unwrap().to_edge_list(), t);
        assert!(Graph::parse_edge_list("3 2\n0 1\n").is_err());
        assert!(Graph::parse_edge_list("3 1\n0 0\n").is_err());
    }

    #[test]
    fn digraph_replace() {
        let mut d = Digraph::from_arcs(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(d.replace_arcs([(0, 1), (2, 3)], [(0, 2), (1, 3)]).is_err());
        d.replace_arcs([(0, 1), (2, 3)], [(0, 3), (2, 1)]).unwrap();
        assert_eq!(d.sorted_arcs(), vec![(0, 3), (2, 1)]);
        d.audit().unwrap();
    }
}
