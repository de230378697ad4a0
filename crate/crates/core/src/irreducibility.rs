//! Switch-irreducibility: exhaustive connectivity of the switch graph, plus
//! LaMar's vertex classes around an induced directed 3-cycle and the search
//! for a useful neighbour or useful arc.

use serde::Serialize;

use crate::chain::Variant;
use crate::degseq::{DegreeSequence, DirectedDegreeSequence};
use crate::enumerate::{self, Components};
use crate::error::{Error, Result};
use crate::graph::Digraph;

/// LaMar's partition of the vertices outside an induced directed 3-cycle `U`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LamarPartition {
    pub cycle: [usize; 3],
    /// No arcs between `x` and `U` in either direction.
    pub u0: Vec<usize>,
    /// All arcs `x -> U`, none `U -> x`.
    pub u_minus: Vec<usize>,
    /// All arcs `U -> x`, none `x -> U`.
    pub u_plus: Vec<usize>,
    /// All arcs in both directions.
    pub u_pm: Vec<usize>,
    pub leftover: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UsefulWitness {
    /// A vertex outside all four classes.
    Neighbour { vertex: usize },
    /// Condition (i): a present arc from `U0 ∪ U+` to `U0 ∪ U-`.
    PresentArc { tail: usize, head: usize },
    /// Condition (ii): a missing non-loop arc from `U- ∪ U±` to `U+ ∪ U±`.
    AbsentArc { tail: usize, head: usize },
}

/// Whether `g[U]` is a directed 3-cycle (three arcs, no antiparallel pair).
pub fn is_induced_three_cycle(g: &Digraph, u: [usize; 3]) -> bool {
    let [a, b, c] = u;
    if a == b || b == c || a == c || a.max(b).max(c) >= g.n() {
        return false;
    }
    let inside = [(a, b), (b, c), (c, a), (b, a), (c, b), (a, c)]
        .map(|(x, y)| g.has_arc(x, y));
    let forward = inside[0] && inside[1] && inside[2] && !inside[3] && !inside[4] && !inside[5];
    let backward = !inside[0] && !inside[1] && !inside[2] && inside[3] && inside[4] && inside[5];
    forward || backward
}

/// Every vertex set inducing a directed 3-cycle, as sorted triples.
pub fn induced_three_cycles(g: &Digraph) -> Vec<[usize; 3]> {
    let n = g.n();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if is_induced_three_cycle(g, [a, b, c]) {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

pub fn lamar_classes(g: &Digraph, u: [usize; 3]) -> Result<LamarPartition> {
    if !is_induced_three_cycle(g, u) {
        return Err(Error::NotThreeCycle(u));
    }
    let mut p = LamarPartition {
        cycle: u,
        u0: Vec::new(),
        u_minus: Vec::new(),
        u_plus: Vec::new(),
        u_pm: Vec::new(),
        leftover: Vec::new(),
    };
    for x in (0..g.n()).filter(|x| !u.contains(x)) {
        let into = u.iter().filter(|&&y| g.has_arc(x, y)).count();
        let from = u.iter().filter(|&&y| g.has_arc(y, x)).count();
        match (into, from) {
            (0, 0) => p.u0.push(x),
            (3, 0) => p.u_minus.push(x),
            (0, 3) => p.u_plus.push(x),
            (3, 3) => p.u_pm.push(x),
            _ => p.leftover.push(x),
        }
    }
    Ok(p)
}

/// First useful neighbour (lowest index), else the lexicographically first
/// useful arc of kind (i), else of kind (ii).
pub fn find_useful(g: &Digraph, u: [usize; 3]) -> Result<Option<UsefulWitness>> {
    let p = lamar_classes(g, u)?;
    if let Some(&vertex) = p.leftover.first() {
        return Ok(Some(UsefulWitness::Neighbour { vertex }));
    }
    let union = |a: &[usize], b: &[usize]| {
        let mut v: Vec<usize> = a.iter().chain(b).copied().collect();
        v.sort_unstable();
        v
    };
    let tails = union(&p.u0, &p.u_plus);
    let heads = union(&p.u0, &p.u_minus);
    for &x in &tails {
        for &y in &heads {
            if x != y && g.has_arc(x, y) {
                return Ok(Some(UsefulWitness::PresentArc { tail: x, head: y }));
            }
        }
    }
    let tails = union(&p.u_minus, &p.u_pm);
    let heads = union(&p.u_plus, &p.u_pm);
    for &x in &tails {
        for &y in &heads {
            if x != y && !g.has_arc(x, y) {
                return Ok(Some(UsefulWitness::AbsentArc { tail: x, head: y }));
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Connectivity {
    pub states: usize,
    pub transitions: usize,
    pub component_count: usize,
    pub component_sizes: Vec<usize>,
    pub irreducible: bool,
}

impl Connectivity {
    fn from_parts(states: usize, transitions: usize, c: Components) -> Self {
        Connectivity {
            states,
            transitions,
            component_count: c.count(),
            irreducible: c.count() <= 1,
            component_sizes: c.sizes,
        }
    }
}

pub fn switch_connectivity(d: &DegreeSequence, cap: usize) -> Result<Connectivity> {
    let states = enumerate::enum_states(d, cap)?;
    let sg = enumerate::switch_graph(&states, Variant::Exact);
    Ok(Connectivity::from_parts(states.len(), sg.transition_count(), sg.components()))
}

pub fn switch_connectivity_directed(dd: &DirectedDegreeSequence, cap: usize) -> Result<Connectivity> {
    let states = enumerate::enum_states_directed(dd, cap)?;
    let sg = enumerate::switch_graph_directed(&states);
    Ok(Connectivity::from_parts(states.len(), sg.transition_count(), sg.components()))
}

/// Decides switch-irreducibility of a directed degree sequence. The bundled
/// implementation enumerates the state space; a degree-sequence-level
/// decider can be plugged in through this trait.
pub trait IrreducibilityDecider {
    fn is_irreducible(&self, dd: &DirectedDegreeSequence) -> Result<bool>;
}

#[derive(Debug, Clone, Copy)]
pub struct EnumerationDecider {
    pub cap: usize,
}

impl Default for EnumerationDecider {
    fn default() -> Self {
        EnumerationDecider {
            cap: enumerate::DEFAULT_CAP,
        }
    }
}

impl IrreducibilityDecider for EnumerationDecider {
    fn is_irreducible(&self, dd: &DirectedDegreeSequence) -> Result<bool> {
        Ok(switch_connectivity_directed(dd, self.cap)?.irreducible)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle_plus(n: usize, extra: &[(usize, usize)]) -> Digraph {
        let mut arcs = vec![(0, 1), (1, 2), (2, 0)];
        arcs.extend_from_slice(extra);
        Digraph::from_arcs(n, &arcs).unwrap()
    }

    #[test]
    fn bare_cycle() {
        let g = cycle_plus(3, &[]);
        let p = lamar_classes(&g, [0, 1, 2]).unwrap();
        assert!(p.u0.is_empty() && p.leftover.is_empty());
        assert_eq!(find_useful(&g, [0, 1, 2]).unwrap(), None);
        assert_eq!(induced_three_cycles(&g), vec![[0, 1, 2]]);
    }

    #[test]
    fn classes() {
        let g = cycle_plus(4, &[]);
        assert_eq!(lamar_classes(&g, [0, 1, 2]).unwrap().u0, vec![3]);
        let g = cycle_plus(4, &[(3, 0), (3, 1), (3, 2)]);
        assert_eq!(lamar_classes(&g, [2, 0, 1]).unwrap().u_minus, vec![3]);
        let g = cycle_plus(4, &[(3, 0)]);
        assert_eq!(
            find_useful(&g, [0, 1, 2]).unwrap(),
            Some(UsefulWitness::Neighbour { vertex: 3 })
        );
        let g = cycle_plus(5, &[(3, 4)]);
        assert_eq!(
            find_useful(&g, [0, 1, 2]).unwrap(),
            Some(UsefulWitness::PresentArc { tail: 3, head: 4 })
        );
    }

    #[test]
    fn rejects_non_cycles() {
        let g = cycle_plus(3, &[(1, 0)]);
        assert!(!is_induced_three_cycle(&g, [0, 1, 2]));
        assert_eq!(lamar_classes(&g, [0, 1, 2]), Err(Error::NotThreeCycle([0, 1, 2])));
    }

    #[test]
    fn connectivity() {
        let dd = DirectedDegreeSequence::new(vec![(1, 1); 3]).unwrap();
        let c = switch_connectivity_directed(&dd, 100).unwrap();
        assert_eq!((c.states, c.transitions, c.component_count), (2, 0, 2));
        assert!(!c.irreducible);
        assert!(!EnumerationDecider::default().is_irreducible(&dd).unwrap());
        let d = DegreeSequence::new(vec![2; 6]).unwrap();
        let c = switch_connectivity(&d, 1000).unwrap();
        assert_eq!((c.states, c.component_count), (70, 1));
    }
}
