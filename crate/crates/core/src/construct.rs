//! Deterministic greedy realizations used as chain start states.

use crate::degseq::{DegreeSequence, DirectedDegreeSequence};
use crate::error::{Error, Result};
use crate::graph::{Digraph, Graph};

/// Havel–Hakimi: repeatedly saturate the vertex of largest residual degree
/// (lowest index on ties) against the vertices of largest residual degree
/// (ascending index on ties).
pub fn realize(d: &DegreeSequence) -> Result<Graph> {
    if !d.is_graphical() {
        return Err(Error::NotGraphical);
    }
    let n = d.len();
    let mut residual: Vec<u32> = d.degrees().to_vec();
    let mut g = Graph::new(n);
    while let Some(v) = (0..n)
        .filter(|&v| residual[v] > 0)
        .max_by(|&a, &b| residual[a].cmp(&residual[b]).then(b.cmp(&a)))
    {
        let k = residual[v] as usize;
        let mut others: Vec<usize> = (0..n).filter(|&u| u != v && residual[u] > 0).collect();
        if others.len() < k {
            return Err(Error::NotGraphical);
        }
        others.sort_by(|&a, &b| residual[b].cmp(&residual[a]).then(a.cmp(&b)));
        residual[v] = 0;
        for &u in &others[..k] {
            g.add_edge(v, u)?;
            residual[u] -= 1;
        }
    }
    Ok(g)
}

/// Kleitman–Wang: take the lowest-index vertex with positive residual
/// out-degree and send its arcs to the vertices with the largest residual
/// `(in, out)` pairs, ascending index on ties.
pub fn realize_directed(dd: &DirectedDegreeSequence) -> Result<Digraph> {
    dd.check_sums()?;
    if !dd.is_digraphical() {
        return Err(Error::NotDigraphical);
    }
    let n = dd.len();
    let mut ins = dd.in_degrees();
    let mut outs = dd.out_degrees();
    let mut g = Digraph::new(n);
    while let Some(v) = (0..n).find(|&v| outs[v] > 0) {
        let k = outs[v] as usize;
        let mut targets: Vec<usize> = (0..n).filter(|&u| u != v && ins[u] > 0).collect();
        if targets.len() < k {
            return Err(Error::NotDigraphical);
        }
        targets.sort_by(|&a, &b| {
            (ins[b], outs[b])
                .cmp(&(ins[a], outs[a]))
                .then(a.cmp(&b))
        });
        outs[v] = 0;
        for &u in &targets[..k] {
            g.add_arc(v, u)?;
            ins[u] -= 1;
        }
    }
    if ins.iter().any(|&x| x > 0) {
        return Err(Error::NotDigraphical);
    }
    Ok(g)
}
