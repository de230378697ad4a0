//! Exhaustive state-space enumeration and exact analysis of the switch
//! chains on small instances.
//!
//! Transition probabilities are kept as integers over a common denominator
//! `D` (see [`crate::chain::undirected_denominator`]): every off-diagonal
//! entry is `1/D` and the diagonal is `(D - deg)/D`. Distributions after `t`
//! steps are then integer vectors summing to `D^t`, so total variation
//! distances are exact rationals.

use std::collections::{HashMap, VecDeque};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::chain::{self, Move, Variant};
use crate::degseq::{DegreeSequence, DirectedDegreeSequence};
use crate::encoding::{defects_valid, structure_ok, Encoding, Mode};
use crate::error::{Error, Result};
use crate::graph::{Digraph, Graph};

/// Default enumeration cap.
pub const DEFAULT_CAP: usize = 1_000_000;

/// Bitset key over the `n x n` adjacency matrix.
pub type StateKey = Box<[u64]>;

fn key_of<I: Iterator<Item = (usize, usize)>>(n: usize, pairs: I) -> StateKey {
    let mut bits = vec![0u64; (n * n).div_ceil(64).max(1)];
    for (u, v) in pairs {
        let i = u * n + v;
        bits[i / 64] |= 1 << (i % 64);
    }
    bits.into_boxed_slice()
}

pub fn graph_key(g: &Graph) -> StateKey {
    key_of(g.n(), g.edges())
}

pub fn digraph_key(g: &Digraph) -> StateKey {
    key_of(g.n(), g.arcs())
}

/// Every simple graph with degree sequence `d`, ordered by sorted edge list.
pub fn enum_states(d: &DegreeSequence, cap: usize) -> Result<Vec<Graph>> {
    if !d.is_graphical() {
        return Err(Error::NotGraphical);
    }
    let n = d.len();
    let mut residual: Vec<u32> = d.degrees().to_vec();
    let mut edges = Vec::new();
    let mut out = Vec::new();
    undirected_rec(0, n, &mut residual, &mut edges, &mut out, cap)?;
    let mut graphs: Vec<(Vec<(usize, usize)>, Graph)> = out
        .into_iter()
        .map(|mut e: Vec<(usize, usize)>| {
            e.sort_unstable();
            let g = Graph::from_edges(n, &e).expect("enumerated edges are simple");
            (e, g)
        })
        .collect();
    graphs.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(graphs.into_iter().map(|(_, g)| g).collect())
}

fn residual_graphical(residual: &[u32]) -> bool {
    residual.iter().all(|&r| r == 0)
        || DegreeSequence::new(residual.to_vec()).is_ok_and(|d| d.is_graphical())
}

fn undirected_rec(
    v: usize,
    n: usize,
    residual: &mut Vec<u32>,
    edges: &mut Vec<(usize, usize)>,
    out: &mut Vec<Vec<(usize, usize)>>,
    cap: usize,
) -> Result<()> {
    if v == n {
        if out.len() >= cap {
            return Err(Error::CapExceeded { cap });
        }
        out.push(edges.clone());
        return Ok(());
    }
    let need = residual[v] as usize;
    let candidates: Vec<usize> = (v + 1..n).filter(|&u| residual[u] > 0).collect();
    if candidates.len() < need {
        return Ok(());
    }
    let saved = residual[v];
    residual[v] = 0;
    let mut chosen = Vec::with_capacity(need);
    let mut visit = |chosen: &[usize], residual: &mut Vec<u32>, edges: &mut Vec<(usize, usize)>| {
        for &u in chosen {
            residual[u] -= 1;
            edges.push((v, u));
        }
        let res = if residual_graphical(&residual[v + 1..]) {
            undirected_rec(v + 1, n, residual, edges, out, cap)
        } else {
            Ok(())
        };
        for &u in chosen {
            residual[u] += 1;
            edges.pop();
        }
        res
    };
    let res = combinations(&candidates, need, 0, &mut chosen, &mut |c| visit(c, residual, edges));
    residual[v] = saved;
    res
}

fn combinations<F: FnMut(&[usize]) -> Result<()>>(
    items: &[usize],
    k: usize,
    from: usize,
    chosen: &mut Vec<usize>,
    f: &mut F,
) -> Result<()> {
    if chosen.len() == k {
        return f(chosen);
    }
    let left = k - chosen.len();
    for i in from..=items.len().saturating_sub(left) {
        if i >= items.len() {
            break;
        }
        chosen.push(items[i]);
        combinations(items, k, i + 1, chosen, f)?;
        chosen.pop();
    }
    Ok(())
}

/// Every simple digraph with the given semi-degrees, ordered by sorted arc
/// list.
pub fn enum_states_directed(dd: &DirectedDegreeSequence, cap: usize) -> Result<Vec<Digraph>> {
    dd.check_sums()?;
    if !dd.is_digraphical() {
        return Err(Error::NotDigraphical);
    }
    let n = dd.len();
    let mut ins = dd.in_degrees();
    let mut outs = dd.out_degrees();
    let mut arcs = Vec::new();
    let mut out = Vec::new();
    directed_rec(0, n, &mut ins, &mut outs, &mut arcs, &mut out, cap)?;
    let mut graphs: Vec<(Vec<(usize, usize)>, Digraph)> = out
        .into_iter()
        .map(|mut a: Vec<(usize, usize)>| {
            a.sort_unstable();
            let g = Digraph::from_arcs(n, &a).expect("enumerated arcs are simple");
            (a, g)
        })
        .collect();
    graphs.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(graphs.into_iter().map(|(_, g)| g).collect())
}

fn directed_rec(
    v: usize,
    n: usize,
    ins: &mut Vec<u32>,
    outs: &mut Vec<u32>,
    arcs: &mut Vec<(usize, usize)>,
    out: &mut Vec<Vec<(usize, usize)>>,
    cap: usize,
) -> Result<()> {
    if v == n {
        if out.len() >= cap {
            return Err(Error::CapExceeded { cap });
        }
        out.push(arcs.clone());
        return Ok(());
    }
    let need = outs[v] as usize;
    let candidates: Vec<usize> = (0..n).filter(|&u| u != v && ins[u] > 0).collect();
    if candidates.len() < need {
        return Ok(());
    }
    let saved = outs[v];
    outs[v] = 0;
    let mut chosen = Vec::with_capacity(need);
    let res = combinations(&candidates, need, 0, &mut chosen, &mut |c| {
        for &u in c {
            ins[u] -= 1;
            arcs.push((v, u));
        }
        let pairs: Vec<(u32, u32)> = ins.iter().copied().zip(outs.iter().copied()).collect();
        let feasible = DirectedDegreeSequence::new(pairs).is_ok_and(|r| r.is_digraphical());
        let res = if feasible {
            directed_rec(v + 1, n, ins, outs, arcs, out, cap)
        } else {
            Ok(())
        };
        for &u in c {
            ins[u] += 1;
            arcs.pop();
        }
        res
    });
    outs[v] = saved;
    res
}

/// The switch graph of an enumerated state space together with the chain's
/// common denominator.
#[derive(Debug, Clone)]
pub struct SwitchGraph {
    /// Sorted neighbour lists; `j` in `neighbours[i]` iff one switch turns
    /// state `i` into state `j`.
    pub neighbours: Vec<Vec<usize>>,
    /// `D`: every off-diagonal transition probability equals `1/D`. Zero for
    /// a frozen chain, whose transition matrix is the identity.
    pub denominator: BigInt,
}

fn build_switch_graph<S, K, M>(states: &[S], key: K, moves: M, denominator: BigInt) -> SwitchGraph
where
    S: Clone,
    K: Fn(&S) -> StateKey,
    M: Fn(&S) -> Vec<S>,
{
    let index: HashMap<StateKey, usize> = states.iter().enumerate().map(|(i, s)| (key(s), i)).collect();
    let neighbours = states
        .iter()
        .map(|s| {
            let mut nb: Vec<usize> = moves(s)
                .iter()
                .map(|t| *index.get(&key(t)).expect("switch stays inside the state space"))
                .collect();
            nb.sort_unstable();
            nb
        })
        .collect();
    SwitchGraph {
        neighbours,
        denominator,
    }
}

fn apply_graph(g: &Graph, (rm, add): Move) -> Graph {
    let mut h = g.clone();
    h.replace_edges(rm, add).expect("valid switch");
    h
}

fn apply_digraph(g: &Digraph, (rm, add): Move) -> Digraph {
    let mut h = g.clone();
    h.replace_arcs(rm, add).expect("valid switch");
    h
}

pub fn switch_graph(states: &[Graph], variant: Variant) -> SwitchGraph {
    let den = states
        .first()
        .map(|g| chain::undirected_denominator(g.degrees(), variant))
        .unwrap_or_default();
    build_switch_graph(
        states,
        graph_key,
        |g| chain::undirected_moves(g).into_iter().map(|m| apply_graph(g, m)).collect(),
        den,
    )
}

pub fn switch_graph_directed(states: &[Digraph]) -> SwitchGraph {
    let den = states
        .first()
        .map(|g| chain::directed_denominator(g.arc_count()))
        .unwrap_or_default();
    build_switch_graph(
        states,
        digraph_key,
        |g| chain::directed_moves(g).into_iter().map(|m| apply_digraph(g, m)).collect(),
        den,
    )
}

/// Connected components of a switch graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Components {
    /// Component id per state, numbered in order of first appearance.
    pub label: Vec<usize>,
    pub sizes: Vec<usize>,
}

impl Components {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }
}

impl SwitchGraph {
    pub fn len(&self) -> usize {
        self.neighbours.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neighbours.is_empty()
    }

    pub fn is_frozen(&self) -> bool {
        self.denominator.is_zero()
    }

    /// Number of unordered switch-adjacent state pairs.
    pub fn transition_count(&self) -> usize {
        self.neighbours.iter().map(Vec::len).sum::<usize>() / 2
    }

    fn hold(&self, i: usize) -> BigInt {
        if self.is_frozen() {
            BigInt::one()
        } else {
            &self.denominator - BigInt::from(self.neighbours[i].len())
        }
    }

    fn den(&self) -> BigInt {
        if self.is_frozen() {
            BigInt::one()
        } else {
            self.denominator.clone()
        }
    }

    /// Exact `P(i, j)`.
    pub fn probability(&self, i: usize, j: usize) -> BigRational {
        if i == j {
            BigRational::new(self.hold(i), self.den())
        } else if self.neighbours[i].binary_search(&j).is_ok() {
            BigRational::new(BigInt::one(), self.den())
        } else {
            BigRational::zero()
        }
    }

    /// Dense exact transition matrix.
    pub fn matrix(&self) -> Vec<Vec<BigRational>> {
        (0..self.len())
            .map(|i| (0..self.len()).map(|j| self.probability(i, j)).collect())
            .collect()
    }

    pub fn components(&self) -> Components {
        let mut label = vec![usize::MAX; self.len()];
        let mut sizes = Vec::new();
        for s in 0..self.len() {
            if label[s] != usize::MAX {
                continue;
            }
            let c = sizes.len();
            let mut size = 0;
            let mut queue = VecDeque::from([s]);
            label[s] = c;
            while let Some(x) = queue.pop_front() {
                size += 1;
                for &y in &self.neighbours[x] {
                    if label[y] == usize::MAX {
                        label[y] = c;
                        queue.push_back(y);
                    }
                }
            }
            sizes.push(size);
        }
        Components { label, sizes }
    }

    /// One exact step of an integer distribution (total scales by `D`).
    fn push(&self, v: &[BigUint]) -> Vec<BigUint> {
        let hold: Vec<BigUint> = (0..self.len())
            .map(|i| self.hold(i).to_biguint().expect("non-negative hold weight"))
            .collect();
        self.push_with(v, &hold)
    }

    fn push_with(&self, v: &[BigUint], hold: &[BigUint]) -> Vec<BigUint> {
        (0..self.len())
            .map(|j| {
                let mut acc = &v[j] * &hold[j];
                for &i in &self.neighbours[j] {
                    acc += &v[i];
                }
                acc
            })
            .collect()
    }

    fn tv_of(&self, v: &[BigUint], total: &BigUint) -> BigRational {
        let n = BigInt::from(self.len());
        let total_i = BigInt::from(total.clone());
        let mut num = BigInt::zero();
        for x in v {
            num += (&n * BigInt::from(x.clone()) - &total_i).abs();
        }
        BigRational::new(num, BigInt::from(2) * n * total_i)
    }

    /// Exact `d_TV(P^t(start, .), uniform)` for `t = 0..=t_max`.
    pub fn tv_curve(&self, start: usize, t_max: usize) -> Vec<BigRational> {
        let mut out = Vec::with_capacity(t_max + 1);
        self.walk(start, |t, tv| {
            out.push(tv);
            t < t_max
        });
        out
    }

    fn walk<F: FnMut(usize, BigRational) -> bool>(&self, start: usize, mut f: F) {
        let hold: Vec<BigUint> = (0..self.len())
            .map(|i| self.hold(i).to_biguint().expect("non-negative hold weight"))
            .collect();
        let den = self.den().to_biguint().expect("positive denominator");
        let mut v = vec![BigUint::zero(); self.len()];
        v[start] = BigUint::one();
        let mut total = BigUint::one();
        let mut t = 0;
        loop {
            if !f(t, self.tv_of(&v, &total)) {
                return;
            }
            v = self.push_with(&v, &hold);
            total *= &den;
            t += 1;
        }
    }

    /// Least `T` with `d_TV(P^T(start, .), uniform) <= eps`; total variation
    /// to stationarity never increases, so the bound then holds for all
    /// `t >= T`. `None` when not reached within `t_max` steps.
    pub fn mixing_time_from(&self, start: usize, eps: &BigRational, t_max: usize) -> Option<usize> {
        let mut found = None;
        self.walk(start, |t, tv| {
            if &tv <= eps {
                found = Some(t);
                return false;
            }
            t < t_max
        });
        found
    }

    /// Worst-start mixing time, or `None` if the chain is reducible or some
    /// start needs more than `t_max` steps.
    pub fn mixing_time(&self, eps: &BigRational, t_max: usize) -> Option<usize> {
        if self.components().count() > 1 {
            return None;
        }
        let mut worst = 0;
        for s in 0..self.len() {
            worst = worst.max(self.mixing_time_from(s, eps, t_max)?);
        }
        Some(worst)
    }

    /// Whether the uniform distribution is exactly stationary, i.e. every
    /// column of `P` sums to one.
    pub fn uniform_is_stationary(&self) -> bool {
        let ones = vec![BigUint::one(); self.len()];
        let den = self.den().to_biguint().expect("positive denominator");
        self.push(&ones).iter().all(|x| x == &den)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.len()).all(|i| self.neighbours[i].iter().all(|&j| self.neighbours[j].binary_search(&i).is_ok()))
    }

    /// `1 - lambda_2` of `P`, estimated by power iteration on `(P + I)/2`
    /// with the uniform direction projected out (tolerance `1e-12`).
    /// `None` for a single-state space.
    pub fn spectral_gap(&self) -> Option<f64> {
        let n = self.len();
        if n < 2 {
            return None;
        }
        if self.components().count() > 1 || self.is_frozen() {
            return Some(0.0);
        }
        let d = self.denominator.to_f64().unwrap_or(f64::INFINITY);
        let hold: Vec<f64> = self.neighbours.iter().map(|nb| 1.0 - nb.len() as f64 / d).collect();
        let project = |x: &mut Vec<f64>| {
            let mean = x.iter().sum::<f64>() / n as f64;
            x.iter_mut().for_each(|v| *v -= mean);
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            x.iter_mut().for_each(|v| *v /= norm);
        };
        // Deterministic start with no symmetry: distinct irrational-ish weights.
        let mut x: Vec<f64> = (0..n).map(|i| ((i as f64 + 1.0) * 0.618_033_988_749_895).fract() - 0.5).collect();
        project(&mut x);
        let mut lambda = 0.0f64;
        for _ in 0..1_000_000 {
            let mut y: Vec<f64> = (0..n)
                .map(|j| {
                    let mut acc = hold[j] * x[j];
                    for &i in &self.neighbours[j] {
                        acc += x[i] / d;
                    }
                    0.5 * (acc + x[j])
                })
                .collect();
            let rayleigh: f64 = y.iter().zip(&x).map(|(a, b)| a * b).sum();
            project(&mut y);
            x = y;
            let done = (rayleigh - lambda).abs() < 1e-12;
            lambda = rayleigh;
            if done {
                break;
            }
        }
        Some(1.0 - (2.0 * lambda - 1.0))
    }
}

/// Exact analysis of an enumerated space.
#[derive(Debug, Clone, Serialize)]
pub struct StateSpaceAnalysis {
    pub state_count: usize,
    /// Sorted edge (or arc) list per state, in canonical order.
    pub states: Vec<Vec<(usize, usize)>>,
    #[serde(serialize_with = "crate::serde_util::bigint")]
    pub denominator: BigInt,
    pub transitions: usize,
    pub components: usize,
    pub start: usize,
    pub epsilon: f64,
    /// `TV(t)` from `start`, `t = 0, 1, ...` until it drops to `epsilon`
    /// (or `t_max`).
    pub tv_curve: Vec<f64>,
    pub spectral_gap: Option<f64>,
    pub mixing_time: Option<usize>,
    pub mixing_time_from_start: Option<usize>,
    #[serde(skip)]
    pub switch_graph: SwitchGraph,
    #[serde(skip)]
    pub tv_exact: Vec<BigRational>,
}

/// Converts `eps` in `(0, 1)` to an exact rational.
pub fn exact_epsilon(eps: f64) -> Result<BigRational> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Epsilon(eps));
    }
    BigRational::from_float(eps).ok_or(Error::Epsilon(eps))
}

/// Default horizon for TV curves and mixing-time searches.
pub const DEFAULT_T_MAX: usize = 10_000;

fn analyze_switch_graph(
    states: Vec<Vec<(usize, usize)>>,
    sg: SwitchGraph,
    start: usize,
    eps: f64,
    t_max: usize,
) -> Result<StateSpaceAnalysis> {
    let e = exact_epsilon(eps)?;
    if start >= sg.len() {
        return Err(Error::Parse {
            line: 0,
            msg: format!("start state {start} out of range (have {} states)", sg.len()),
        });
    }
    let mut tv_exact = Vec::new();
    sg.walk(start, |t, tv| {
        let stop = tv <= e;
        tv_exact.push(tv);
        !stop && t < t_max
    });
    let mixing_time_from_start = tv_exact.iter().position(|tv| tv <= &e);
    let components = sg.components();
    Ok(StateSpaceAnalysis {
        state_count: sg.len(),
        states,
        denominator: sg.denominator.clone(),
        transitions: sg.transition_count(),
        components: components.count(),
        start,
        epsilon: eps,
        tv_curve: tv_exact.iter().map(|r| r.to_f64().unwrap_or(f64::NAN)).collect(),
        spectral_gap: sg.spectral_gap(),
        mixing_time: sg.mixing_time(&e, t_max),
        mixing_time_from_start,
        switch_graph: sg,
        tv_exact,
    })
}

pub fn analyze(d: &DegreeSequence, variant: Variant, start: usize, eps: f64, cap: usize, t_max: usize) -> Result<StateSpaceAnalysis> {
    exact_epsilon(eps)?;
    let states = enum_states(d, cap)?;
    let sg = switch_graph(&states, variant);
    analyze_switch_graph(states.iter().map(Graph::sorted_edges).collect(), sg, start, eps, t_max)
}

pub fn analyze_directed(dd: &DirectedDegreeSequence, start: usize, eps: f64, cap: usize, t_max: usize) -> Result<StateSpaceAnalysis> {
    exact_epsilon(eps)?;
    let states = enum_states_directed(dd, cap)?;
    if dd.out_sum() < 2 {
        return Err(Error::TooFewEdges {
            what: "arcs",
            found: dd.out_sum() as usize,
        });
    }
    let sg = switch_graph_directed(&states);
    analyze_switch_graph(states.iter().map(Digraph::sorted_arcs).collect(), sg, start, eps, t_max)
}

/// Encodings consistent with `z`: entries in `{-1, 0, 1, 2}`, the degrees of
/// `z`, and a defect set that is valid (and good, undirected). Sorted by
/// entries. Intended for tiny `z` only.
pub fn enum_good_encodings(z: &Encoding, cap: usize) -> Result<Vec<Encoding>> {
    let n = z.n();
    let mode = z.mode();
    let cells: Vec<(usize, usize)> = match mode {
        Mode::Undirected => (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect(),
        Mode::Directed => (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))).collect(),
    };
    let mut search = EncodingSearch {
        z,
        mode,
        rows: z.row_sums(),
        cols: z.col_sums(),
        row_left: vec![0; n],
        col_left: vec![0; n],
        entries: vec![0; n * n],
        defects: Vec::new(),
        out: Vec::new(),
        cap,
    };
    for &(u, v) in &cells {
        search.row_left[u] += 1;
        search.col_left[v] += 1;
        if mode == Mode::Undirected {
            search.row_left[v] += 1;
            search.col_left[u] += 1;
        }
    }
    search.rec(&cells)?;
    let mut out = search.out;
    out.sort_by(|a, b| a.entries().cmp(b.entries()));
    Ok(out)
}

struct EncodingSearch<'a> {
    z: &'a Encoding,
    mode: Mode,
    /// Remaining sums to reach.
    rows: Vec<i64>,
    cols: Vec<i64>,
    /// Unassigned cells per row and column.
    row_left: Vec<i64>,
    col_left: Vec<i64>,
    entries: Vec<i8>,
    defects: Vec<(usize, usize, i8)>,
    out: Vec<Encoding>,
    cap: usize,
}

impl EncodingSearch<'_> {
    fn feasible(&self, v: usize) -> bool {
        let ok = |rem: i64, left: i64| rem >= -left && rem <= 2 * left;
        ok(self.rows[v], self.row_left[v]) && ok(self.cols[v], self.col_left[v])
    }

    fn assign(&mut self, u: usize, v: usize, x: i8, sign: i64) {
        let n = self.z.n();
        let x64 = x as i64 * sign;
        self.rows[u] -= x64;
        self.cols[v] -= x64;
        self.row_left[u] -= sign;
        self.col_left[v] -= sign;
        self.entries[u * n + v] = if sign > 0 { x } else { 0 };
        if self.mode == Mode::Undirected {
            self.rows[v] -= x64;
            self.cols[u] -= x64;
            self.row_left[v] -= sign;
            self.col_left[u] -= sign;
            self.entries[v * n + u] = if sign > 0 { x } else { 0 };
        }
    }

    fn defects_ok(&self) -> bool {
        defects_valid(self.mode, &self.defects) && (self.mode == Mode::Directed || structure_ok(&self.defects, &self.z.row_sums()))
    }

    fn rec(&mut self, cells: &[(usize, usize)]) -> Result<()> {
        let Some((&(u, v), rest)) = cells.split_first() else {
            if self.out.len() >= self.cap {
                return Err(Error::CapExceeded { cap: self.cap });
            }
            let l = Encoding::from_matrix(self.mode, self.z.n(), self.entries.clone())?;
            self.out.push(l);
            return Ok(());
        };
        // L + Z must stay in {0, 1, 2}.
        let choices: &[i8] = if self.z.get(u, v) == 0 { &[0, 1, 2] } else { &[-1, 0, 1] };
        for &x in choices {
            self.assign(u, v, x, 1);
            let defect = x == 2 || x == -1;
            if defect {
                self.defects.push((u, v, x));
            }
            if self.feasible(u) && self.feasible(v) && (!defect || self.defects_ok()) {
                self.rec(rest)?;
            }
            if defect {
                self.defects.pop();
            }
            self.assign(u, v, x, -1);
        }
        Ok(())
    }
}
