//! The switch chains on graphs and digraphs.
//!
//! Undirected step (exact variant): draw an unordered pair of distinct
//! non-adjacent edges `{x,y}, {z,w}` uniformly, pick one of the three perfect
//! matchings of `{x,y,z,w}` uniformly and apply it when none of its edges is
//! already present (picking the original matching holds). Every switch
//! neighbour is reached with probability `1/(3 a(d))`. The all-pairs variant
//! draws among all distinct edge pairs and holds on adjacent ones.
//!
//! Directed step: draw an unordered pair of distinct arcs `(i,j), (k,l)`
//! uniformly; when `i,j,k,l` are distinct and `(i,l), (k,j)` are both absent
//! replace the pair by them, otherwise hold.
//!
//! # Random streams
//!
//! Every chain owns a [`ChaCha8Rng`] seeded with `seed_from_u64(seed)` and
//! switched to stream `replica` via [`ChaCha8Rng::set_stream`]. Replica `r`
//! of a run with seed `s` therefore draws from an independent sub-stream,
//! and a trajectory is a pure function of `(start, seed, replica, variant)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::degseq::DegreeSequence;
use crate::error::{Error, Result};
use crate::graph::{Digraph, Graph};

/// Which pairs the undirected chain proposes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// Uniform over the `a(d)` non-adjacent pairs.
    #[default]
    Exact,
    /// Uniform over all distinct pairs, holding on adjacent ones.
    AllPairs,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Exact => "exact",
            Variant::AllPairs => "all-pairs",
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Variant::Exact),
            "all-pairs" | "all_pairs" => Ok(Variant::AllPairs),
            other => Err(Error::Parse {
                line: 0,
                msg: format!("unknown variant {other:?} (expected exact or all-pairs)"),
            }),
        }
    }
}

/// Outcome of a single transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    Switched,
    Held,
}

/// Seeded generator for replica `replica` of a run with seed `seed`.
pub fn rng_for(seed: u64, replica: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replica);
    rng
}

/// A degree-preserving two-edge exchange: remove `remove`, insert `add`.
pub type Move = ([(usize, usize); 2], [(usize, usize); 2]);

fn choose2(k: u64) -> u64 {
    k * k.saturating_sub(1) / 2
}

/// The two non-identity matchings of the endpoints of `(x,y), (z,w)`.
fn alternatives(e: (usize, usize), f: (usize, usize)) -> [[(usize, usize); 2]; 2] {
    let ((x, y), (z, w)) = (e, f);
    [[(x, z), (y, w)], [(x, w), (y, z)]]
}

fn disjoint(e: (usize, usize), f: (usize, usize)) -> bool {
    e.0 != f.0 && e.0 != f.1 && e.1 != f.0 && e.1 != f.1
}

/// All switch moves available from `g`, one per switch neighbour.
pub fn undirected_moves(g: &Graph) -> Vec<Move> {
    let edges: Vec<_> = g.edges().collect();
    let mut out = Vec::new();
    for i in 0..edges.len() {
        for j in i + 1..edges.len() {
            let (e, f) = (edges[i], edges[j]);
            if !disjoint(e, f) {
                continue;
            }
            for m in alternatives(e, f) {
                if !g.has_edge(m[0].0, m[0].1) && !g.has_edge(m[1].0, m[1].1) {
                    out.push(([e, f], m));
                }
            }
        }
    }
    out
}

/// All directed switch moves available from `g`, one per neighbour.
pub fn directed_moves(g: &Digraph) -> Vec<Move> {
    let arcs: Vec<_> = g.arcs().collect();
    let mut out = Vec::new();
    for a in 0..arcs.len() {
        for b in a + 1..arcs.len() {
            if let Some(add) = directed_switch(g, arcs[a], arcs[b]) {
                out.push(([arcs[a], arcs[b]], add));
            }
        }
    }
    out
}

fn directed_switch(g: &Digraph, (i, j): (usize, usize), (k, l): (usize, usize)) -> Option<[(usize, usize); 2]> {
    let distinct = i != k && i != l && j != k && j != l;
    (distinct && !g.has_arc(i, l) && !g.has_arc(k, j)).then_some([(i, l), (k, j)])
}

/// Number of unordered pairs of distinct non-adjacent edges, for any degree
/// vector (the count depends on the degrees only).
pub fn nonadjacent_pairs(degrees: &[u32]) -> BigInt {
    if degrees.is_empty() {
        return BigInt::zero();
    }
    DegreeSequence::new(degrees.to_vec())
        .ok()
        .and_then(|d| d.stats().nonadjacent_pairs)
        .unwrap_or_default()
}

/// Common state for both chains.
pub trait SwitchChain {
    type State: Clone;

    fn step(&mut self) -> Result<Step>;

    fn state(&self) -> &Self::State;

    /// Runs `n` transitions.
    fn advance(&mut self, n: u64) -> Result<()> {
        for _ in 0..n {
            self.step()?;
        }
        Ok(())
    }

    /// `count` states: after `burn_in` transitions, one state every `thin`
    /// transitions (sample `i` is the state after `burn_in + (i+1)*thin`).
    fn sample(&mut self, burn_in: u64, thin: u64, count: usize) -> Result<Vec<Self::State>> {
        if thin == 0 {
            return Err(Error::Parse {
                line: 0,
                msg: "thinning must be at least 1".into(),
            });
        }
        self.advance(burn_in)?;
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            self.advance(thin)?;
            out.push(self.state().clone());
        }
        Ok(out)
    }
}

/// The undirected switch chain.
#[derive(Debug, Clone)]
pub struct UndirectedChain {
    g: Graph,
    variant: Variant,
    rng: ChaCha8Rng,
    retry_cap: u64,
    switched: u64,
    held: u64,
}

impl UndirectedChain {
    pub fn new(start: Graph, variant: Variant, seed: u64, replica: u64) -> Result<Self> {
        let e = start.edge_count() as u64;
        let a = nonadjacent_pairs(start.degrees());
        let retry_cap = match variant {
            Variant::Exact => {
                if a.is_zero() {
                    return Err(Error::Frozen(
                        "no pair of distinct non-adjacent edges exists (a(d) = 0)".into(),
                    ));
                }
                let pairs = BigInt::from(choose2(e));
                (BigInt::from(10) * pairs.div_ceil(&a)).to_u64().unwrap_or(u64::MAX)
            }
            Variant::AllPairs => {
                if e < 2 {
                    return Err(Error::TooFewEdges {
                        what: "edges",
                        found: e as usize,
                    });
                }
                0
            }
        };
        Ok(UndirectedChain {
            g: start,
            variant,
            rng: rng_for(seed, replica),
            retry_cap,
            switched: 0,
            held: 0,
        })
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn graph(&self) -> &Graph {
        &self.g
    }

    pub fn into_graph(self) -> Graph {
        self.g
    }

    /// `(switched, held)` transition counts so far.
    pub fn counts(&self) -> (u64, u64) {
        (self.switched, self.held)
    }

    /// Uniform non-adjacent pair by rejection, falling back to explicit
    /// enumeration after `retry_cap` failures.
    fn draw_nonadjacent(&mut self) -> Result<((usize, usize), (usize, usize))> {
        for _ in 0..self.retry_cap {
            let (i, j) = self.g.random_distinct_edge_pair(&mut self.rng)?;
            let (e, f) = (self.g.edge(i), self.g.edge(j));
            if disjoint(e, f) {
                return Ok((e, f));
            }
        }
        let edges: Vec<_> = self.g.edges().collect();
        let mut pairs = Vec::new();
        for i in 0..edges.len() {
            for j in i + 1..edges.len() {
                if disjoint(edges[i], edges[j]) {
                    pairs.push((edges[i], edges[j]));
                }
            }
        }
        if pairs.is_empty() {
            return Err(Error::Frozen("no non-adjacent edge pair".into()));
        }
        Ok(pairs[self.rng.gen_range(0..pairs.len())])
    }
}

impl SwitchChain for UndirectedChain {
    type State = Graph;

    fn step(&mut self) -> Result<Step> {
        let (e, f) = match self.variant {
            Variant::Exact => self.draw_nonadjacent()?,
            Variant::AllPairs => {
                let (i, j) = self.g.random_distinct_edge_pair(&mut self.rng)?;
                (self.g.edge(i), self.g.edge(j))
            }
        };
        let pick = self.rng.gen_range(0..3usize);
        if pick == 0 || !disjoint(e, f) {
            self.held += 1;
            return Ok(Step::Held);
        }
        let m = alternatives(e, f)[pick - 1];
        if self.g.has_edge(m[0].0, m[0].1) || self.g.has_edge(m[1].0, m[1].1) {
            self.held += 1;
            return Ok(Step::Held);
        }
        self.g.replace_edges([e, f], m)?;
        self.switched += 1;
        Ok(Step::Switched)
    }

    fn state(&self) -> &Graph {
        &self.g
    }
}

/// The directed switch chain.
#[derive(Debug, Clone)]
pub struct DirectedChain {
    g: Digraph,
    rng: ChaCha8Rng,
    switched: u64,
    held: u64,
}

impl DirectedChain {
    pub fn new(start: Digraph, seed: u64, replica: u64) -> Result<Self> {
        if start.arc_count() < 2 {
            return Err(Error::TooFewEdges {
                what: "arcs",
                found: start.arc_count(),
            });
        }
        Ok(DirectedChain {
            g: start,
            rng: rng_for(seed, replica),
            switched: 0,
            held: 0,
        })
    }

    pub fn digraph(&self) -> &Digraph {
        &self.g
    }

    pub fn into_digraph(self) -> Digraph {
        self.g
    }

    pub fn counts(&self) -> (u64, u64) {
        (self.switched, self.held)
    }
}

impl SwitchChain for DirectedChain {
    type State = Digraph;

    fn step(&mut self) -> Result<Step> {
        let (a, b) = self.g.random_distinct_arc_pair(&mut self.rng)?;
        let (e, f) = (self.g.arc(a), self.g.arc(b));
        match directed_switch(&self.g, e, f) {
            Some(add) => {
                self.g.replace_arcs([e, f], add)?;
                self.switched += 1;
                Ok(Step::Switched)
            }
            None => {
                self.held += 1;
                Ok(Step::Held)
            }
        }
    }

    fn state(&self) -> &Digraph {
        &self.g
    }
}

/// Denominator `D` such that every off-diagonal transition probability of the
/// undirected chain is `1/D`: `3 a(d)` (exact) or `3 C(M/2, 2)` (all pairs).
pub fn undirected_denominator(degrees: &[u32], variant: Variant) -> BigInt {
    match variant {
        Variant::Exact => BigInt::from(3) * nonadjacent_pairs(degrees),
        Variant::AllPairs => {
            let e: u64 = degrees.iter().map(|&d| d as u64).sum::<u64>() / 2;
            BigInt::from(3) * BigInt::from(choose2(e))
        }
    }
}

/// `C(m, 2)`.
pub fn directed_denominator(arcs: usize) -> BigInt {
    BigInt::from(choose2(arcs as u64))
}

fn single_switch(g: &Graph, h: &Graph) -> bool {
    let gone: Vec<_> = g.edges().filter(|&(u, v)| !h.has_edge(u, v)).collect();
    let new: Vec<_> = h.edges().filter(|&(u, v)| !g.has_edge(u, v)).collect();
    if gone.len() != 2 || new.len() != 2 || !disjoint(gone[0], gone[1]) {
        return false;
    }
    let mut want = new.clone();
    want.sort_unstable();
    alternatives(gone[0], gone[1]).iter().any(|m| {
        let mut m: Vec<_> = m.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
        m.sort_unstable();
        m == want
    })
}

fn single_directed_switch(g: &Digraph, h: &Digraph) -> bool {
    let gone: Vec<_> = g.arcs().filter(|&(u, v)| !h.has_arc(u, v)).collect();
    let new: Vec<_> = h.arcs().filter(|&(u, v)| !g.has_arc(u, v)).collect();
    if gone.len() != 2 || new.len() != 2 {
        return false;
    }
    let Some(add) = directed_switch(g, gone[0], gone[1]) else {
        return false;
    };
    (add[0] == new[0] && add[1] == new[1]) || (add[0] == new[1] && add[1] == new[0])
}

/// Exact one-step probability `P(g, h)` of the undirected chain.
pub fn transition_probability(g: &Graph, h: &Graph, variant: Variant) -> Result<BigRational> {
    if g.n() != h.n() || g.degrees() != h.degrees() {
        return Err(Error::DegreeMismatch);
    }
    let den = undirected_denominator(g.degrees(), variant);
    if den.is_zero() {
        return Err(Error::Frozen("transition law undefined when a(d) = 0".into()));
    }
    if g == h {
        let k = undirected_moves(g).len();
        return Ok(BigRational::one() - BigRational::new(BigInt::from(k), den));
    }
    Ok(if single_switch(g, h) {
        BigRational::new(BigInt::one(), den)
    } else {
        BigRational::zero()
    })
}

/// Exact one-step probability `P(g, h)` of the directed chain.
pub fn transition_probability_directed(g: &Digraph, h: &Digraph) -> Result<BigRational> {
    if g.n() != h.n() || g.in_degrees() != h.in_degrees() || g.out_degrees() != h.out_degrees() {
        return Err(Error::DegreeMismatch);
    }
    let den = directed_denominator(g.arc_count());
    if den.is_zero() {
        return Err(Error::TooFewEdges {
            what: "arcs",
            found: g.arc_count(),
        });
    }
    if g == h {
        let k = directed_moves(g).len();
        return Ok(BigRational::one() - BigRational::new(BigInt::from(k), den));
    }
    Ok(if single_directed_switch(g, h) {
        BigRational::new(BigInt::one(), den)
    } else {
        BigRational::zero()
    })
}
