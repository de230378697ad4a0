//! Encodings `L = G + G' - Z`: integer matrices with entries in
//! `{-1, 0, 1, 2}` whose row (and, for digraphs, column) sums are the target
//! degrees. Entries `2` and `-1` are defects.
//!
//! Undirected encodings are symmetric and count each defect edge once;
//! directed encodings count defect arcs individually.

mod catalog;
mod choice;
mod generate;
mod phase;

pub use catalog::{is_good, is_valid};
pub(crate) use catalog::{defects_valid, structure_ok};
pub use choice::{choice_count_and_bound, Anchors, ChoiceCount, Stage};
pub use generate::{generate, GenerateError, Plan};
pub use phase::{find_phase_switch, repair, search_switch, Phase, RepairOutcome};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Digraph, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Undirected,
    Directed,
}

/// A 3-switch `(a1, b1, a2, b2, a3, b3)`.
pub type Tuple = [usize; 6];

/// The six positions touched by a 3-switch, in the order
/// `(a1,b1), (a2,b1), (a2,b2), (a3,b2), (a3,b3), (a1,b3)`. Even positions are
/// decremented, odd positions incremented.
pub fn positions(t: &Tuple) -> [(usize, usize); 6] {
    let [a1, b1, a2, b2, a3, b3] = *t;
    [(a1, b1), (a2, b1), (a2, b2), (a3, b2), (a3, b3), (a1, b3)]
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Encoding {
    mode: Mode,
    n: usize,
    entries: Vec<i8>,
}

/// Defect counts plus per-vertex incidence counters. For undirected
/// encodings the `plus` and `minus` vectors coincide.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Profile {
    /// Number of 2-defects.
    pub p: usize,
    /// Number of (-1)-defects.
    pub q: usize,
    /// 2-defects with `v` as tail (undirected: incident with `v`).
    pub zeta_plus: Vec<usize>,
    /// 2-defects with `v` as head.
    pub zeta_minus: Vec<usize>,
    pub eta_plus: Vec<usize>,
    pub eta_minus: Vec<usize>,
}

impl Profile {
    pub fn pq(&self) -> (usize, usize) {
        (self.p, self.q)
    }
}

fn in_range(x: i8) -> bool {
    (-1..=2).contains(&x)
}

impl Encoding {
    /// Builds an encoding from a dense row-major matrix.
    pub fn from_matrix(mode: Mode, n: usize, entries: Vec<i8>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::InvalidEncoding(format!(
                "expected {} entries, got {}",
                n * n,
                entries.len()
            )));
        }
        let e = Encoding { mode, n, entries };
        for u in 0..n {
            if e.get(u, u) != 0 {
                return Err(Error::InvalidEncoding(format!("non-zero diagonal at {u}")));
            }
            for v in 0..n {
                let x = e.get(u, v);
                if !in_range(x) {
                    return Err(Error::InvalidEncoding(format!("entry ({u}, {v}) = {x} outside -1..=2")));
                }
                if mode == Mode::Undirected && x != e.get(v, u) {
                    return Err(Error::InvalidEncoding(format!("asymmetric at ({u}, {v})")));
                }
            }
        }
        Ok(e)
    }

    pub fn zero(mode: Mode, n: usize) -> Self {
        Encoding {
            mode,
            n,
            entries: vec![0; n * n],
        }
    }

    pub fn from_graph(g: &Graph) -> Self {
        let mut e = Encoding::zero(Mode::Undirected, g.n());
        for (u, v) in g.edges() {
            e.set(u, v, 1);
        }
        e
    }

    pub fn from_digraph(g: &Digraph) -> Self {
        let mut e = Encoding::zero(Mode::Directed, g.n());
        for (u, v) in g.arcs() {
            e.set(u, v, 1);
        }
        e
    }

    /// `L = G + G' - Z` for graphs with a common degree sequence.
    pub fn encode(g: &Graph, g2: &Graph, z: &Graph) -> Result<Self> {
        if g.n() != g2.n() || g.n() != z.n() || g.degrees() != g2.degrees() || g.degrees() != z.degrees() {
            return Err(Error::DegreeMismatch);
        }
        Ok(Self::combine(
            Mode::Undirected,
            &Encoding::from_graph(g),
            &Encoding::from_graph(g2),
            &Encoding::from_graph(z),
        ))
    }

    pub fn encode_directed(g: &Digraph, g2: &Digraph, z: &Digraph) -> Result<Self> {
        let same = |a: &Digraph, b: &Digraph| {
            a.n() == b.n() && a.in_degrees() == b.in_degrees() && a.out_degrees() == b.out_degrees()
        };
        if !same(g, g2) || !same(g, z) {
            return Err(Error::DegreeMismatch);
        }
        Ok(Self::combine(
            Mode::Directed,
            &Encoding::from_digraph(g),
            &Encoding::from_digraph(g2),
            &Encoding::from_digraph(z),
        ))
    }

    fn combine(mode: Mode, a: &Encoding, b: &Encoding, z: &Encoding) -> Self {
        let entries = (0..a.entries.len())
            .map(|i| a.entries[i] + b.entries[i] - z.entries[i])
            .collect();
        Encoding { mode, n: a.n, entries }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> i8 {
        self.entries[u * self.n + v]
    }

    /// Sets `L(u, v)` (and `L(v, u)` when undirected).
    fn set(&mut self, u: usize, v: usize, x: i8) {
        self.entries[u * self.n + v] = x;
        if self.mode == Mode::Undirected {
            self.entries[v * self.n + u] = x;
        }
    }

    /// Row sums: degrees (undirected) or out-degrees.
    pub fn row_sums(&self) -> Vec<i64> {
        (0..self.n)
            .map(|u| (0..self.n).map(|v| self.get(u, v) as i64).sum())
            .collect()
    }

    /// Column sums: in-degrees (equal to row sums when undirected).
    pub fn col_sums(&self) -> Vec<i64> {
        (0..self.n)
            .map(|v| (0..self.n).map(|u| self.get(u, v) as i64).sum())
            .collect()
    }

    /// Degrees of `L` as unsigned values; fails if some sum is negative.
    pub fn degrees(&self) -> Result<Vec<u32>> {
        to_u32(self.row_sums())
    }

    pub fn in_degrees(&self) -> Result<Vec<u32>> {
        to_u32(self.col_sums())
    }

    /// Sum of the targets: `M` (undirected) or `m` (directed).
    pub fn total(&self) -> i64 {
        self.row_sums().iter().sum()
    }

    /// Maximum degree (`d_max`) or maximum semi-degree (`r_max`).
    pub fn max_degree(&self) -> i64 {
        let rows = self.row_sums();
        let cols = self.col_sums();
        rows.into_iter().chain(cols).max().unwrap_or(0)
    }

    /// Defect entries as `(u, v, label)`; undirected edges reported once
    /// with `u < v`.
    pub fn defects(&self) -> Vec<(usize, usize, i8)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in 0..self.n {
                if self.mode == Mode::Undirected && v <= u {
                    continue;
                }
                let x = self.get(u, v);
                if x == 2 || x == -1 {
                    out.push((u, v, x));
                }
            }
        }
        out
    }

    pub fn profile(&self) -> Profile {
        let n = self.n;
        let mut pr = Profile {
            p: 0,
            q: 0,
            zeta_plus: vec![0; n],
            zeta_minus: vec![0; n],
            eta_plus: vec![0; n],
            eta_minus: vec![0; n],
        };
        for (u, v, x) in self.defects() {
            let (count, plus, minus) = if x == 2 {
                (&mut pr.p, &mut pr.zeta_plus, &mut pr.zeta_minus)
            } else {
                (&mut pr.q, &mut pr.eta_plus, &mut pr.eta_minus)
            };
            *count += 1;
            plus[u] += 1;
            minus[v] += 1;
            if self.mode == Mode::Undirected {
                plus[v] += 1;
                minus[u] += 1;
            }
        }
        pr
    }

    pub fn has_defects(&self) -> bool {
        self.entries.iter().any(|&x| x == 2 || x == -1)
    }

    /// `N_L(v)`: out-neighbours along label-1 entries.
    pub fn good_out(&self, v: usize) -> Vec<usize> {
        (0..self.n).filter(|&w| w != v && self.get(v, w) == 1).collect()
    }

    pub fn good_in(&self, v: usize) -> Vec<usize> {
        (0..self.n).filter(|&w| w != v && self.get(w, v) == 1).collect()
    }

    /// `N^_L(v)`: out-neighbours along non-zero entries.
    pub fn all_out(&self, v: usize) -> Vec<usize> {
        (0..self.n).filter(|&w| w != v && self.get(v, w) != 0).collect()
    }

    pub fn all_in(&self, v: usize) -> Vec<usize> {
        (0..self.n).filter(|&w| w != v && self.get(w, v) != 0).collect()
    }

    /// Number of label-1 entries, counting undirected edges once.
    pub fn good_count(&self) -> usize {
        let ones = self.entries.iter().filter(|&&x| x == 1).count();
        match self.mode {
            Mode::Undirected => ones / 2,
            Mode::Directed => ones,
        }
    }

    /// Checks the counting identities relating label-1 counts, defect
    /// counts and degrees, globally and per vertex.
    pub fn check_identities(&self) -> Result<()> {
        let pr = self.profile();
        let rows = self.row_sums();
        let cols = self.col_sums();
        let total: i64 = rows.iter().sum();
        let (p, q) = (pr.p as i64, pr.q as i64);
        let expected = match self.mode {
            Mode::Undirected => total / 2 - 2 * p + q,
            Mode::Directed => total - 2 * p + q,
        };
        if self.good_count() as i64 != expected {
            return Err(Error::InvalidEncoding(format!(
                "{} label-1 entries, identity predicts {expected}",
                self.good_count()
            )));
        }
        for v in 0..self.n {
            let (zp, zm, ep, em) = (
                pr.zeta_plus[v] as i64,
                pr.zeta_minus[v] as i64,
                pr.eta_plus[v] as i64,
                pr.eta_minus[v] as i64,
            );
            let checks = [
                (self.good_out(v).len() as i64, rows[v] - 2 * zp + ep),
                (self.good_in(v).len() as i64, cols[v] - 2 * zm + em),
                (self.all_out(v).len() as i64, rows[v] - zp + 2 * ep),
                (self.all_in(v).len() as i64, cols[v] - zm + 2 * em),
            ];
            if let Some((got, want)) = checks.iter().find(|(g, w)| g != w) {
                return Err(Error::InvalidEncoding(format!(
                    "vertex {v}: neighbourhood size {got}, identity predicts {want}"
                )));
            }
        }
        Ok(())
    }

    /// Whether every entry of `L + Z` lies in `{0, 1, 2}`.
    pub fn is_consistent(&self, z: &Encoding) -> bool {
        self.n == z.n && self.entries.iter().zip(&z.entries).all(|(&a, &b)| (0..=2).contains(&(a + b)))
    }

    /// Applies a 3-switch, failing without mutation if the vertices repeat or
    /// a resulting entry would leave `{-1, 0, 1, 2}`.
    pub fn apply_3switch(&mut self, t: &Tuple) -> Result<()> {
        self.shift_3switch(t, 1)
    }

    /// The inverse of [`Encoding::apply_3switch`].
    pub fn undo_3switch(&mut self, t: &Tuple) -> Result<()> {
        self.shift_3switch(t, -1)
    }

    fn shift_3switch(&mut self, t: &Tuple, sign: i8) -> Result<()> {
        for i in 0..6 {
            if t[i] >= self.n {
                return Err(Error::InvalidSwitch(format!("vertex {} out of range", t[i])));
            }
            if t[..i].contains(&t[i]) {
                return Err(Error::InvalidSwitch(format!("vertex {} repeated", t[i])));
            }
        }
        let pos = positions(t);
        let mut new = [0i8; 6];
        for (k, &(u, v)) in pos.iter().enumerate() {
            let delta = if k % 2 == 0 { -sign } else { sign };
            new[k] = self.get(u, v) + delta;
            if !in_range(new[k]) {
                return Err(Error::InvalidSwitch(format!(
                    "label of ({u}, {v}) would become {}",
                    new[k]
                )));
            }
        }
        for (k, &(u, v)) in pos.iter().enumerate() {
            self.set(u, v, new[k]);
        }
        Ok(())
    }

    /// The graph with this adjacency matrix; fails if defects remain.
    pub fn to_graph(&self) -> Result<Graph> {
        if self.mode != Mode::Undirected || self.has_defects() {
            return Err(Error::InvalidEncoding("not a defect-free undirected encoding".into()));
        }
        let mut g = Graph::new(self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.get(u, v) == 1 {
                    g.add_edge(u, v)?;
                }
            }
        }
        Ok(g)
    }

    pub fn to_digraph(&self) -> Result<Digraph> {
        if self.mode != Mode::Directed || self.has_defects() {
            return Err(Error::InvalidEncoding("not a defect-free directed encoding".into()));
        }
        let mut g = Digraph::new(self.n);
        for u in 0..self.n {
            for v in 0..self.n {
                if self.get(u, v) == 1 {
                    g.add_arc(u, v)?;
                }
            }
        }
        Ok(g)
    }

    /// Dense matrix as CSV, one row per line.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for u in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|v| self.get(u, v).to_string()).collect();
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }

    pub fn from_csv(mode: Mode, text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        let mut rows = 0;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            for field in line.split(',') {
                let x = field.trim().parse::<i8>().map_err(|_| Error::Parse {
                    line: i + 1,
                    msg: format!("bad matrix entry {field:?}"),
                })?;
                entries.push(x);
            }
            rows += 1;
        }
        Encoding::from_matrix(mode, rows, entries)
    }

    /// JSON sidecar describing the matrix written by [`Encoding::to_csv`].
    pub fn sidecar(&self) -> Sidecar {
        let pr = self.profile();
        Sidecar {
            mode: self.mode,
            n: self.n,
            degrees: self.row_sums(),
            in_degrees: (self.mode == Mode::Directed).then(|| self.col_sums()),
            p: pr.p,
            q: pr.q,
        }
    }
}

fn to_u32(v: Vec<i64>) -> Result<Vec<u32>> {
    v.into_iter()
        .map(|x| u32::try_from(x).map_err(|_| Error::InvalidEncoding(format!("negative degree {x}"))))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sidecar {
    pub mode: Mode,
    pub n: usize,
    pub degrees: Vec<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub in_degrees: Option<Vec<i64>>,
    pub p: usize,
    pub q: usize,
}

/// Validity flags of an encoding relative to `Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Validation {
    pub valid: bool,
    pub good: bool,
    pub consistent: bool,
}

pub fn validate(l: &Encoding, z: &Encoding) -> Validation {
    Validation {
        valid: is_valid(l),
        good: is_good(l),
        consistent: l.is_consistent(z),
    }
}
