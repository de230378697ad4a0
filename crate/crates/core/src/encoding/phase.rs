//! Phase switches and the defect-repair loop.
//!
//! Each phase is a label pattern on the six positions of a 3-switch
//! (see [`super::positions`]):
//!
//! | phase | labels before the switch | effect on `(p, q)` |
//! |-------|--------------------------|--------------------|
//! | P1    | `2, -1, 1, 0, 1, 0`      | `(p-1, q-1)`       |
//! | P2, A | `2,  0, 1, 0, 1, 0`      | `(p-1, q)`         |
//! | P3, B | `1, -1, 1, 0, 1, 0`      | `(p, q-1)`         |
//!
//! P1-P3 act on undirected encodings, A and B on directed ones.

use serde::Serialize;

use super::{Encoding, Mode, Tuple};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Phase {
    P1,
    P2,
    P3,
    A,
    B,
}

impl Phase {
    /// Labels required before the switch.
    pub fn pattern(self) -> [i8; 6] {
        match self {
            Phase::P1 => [2, -1, 1, 0, 1, 0],
            Phase::P2 | Phase::A => [2, 0, 1, 0, 1, 0],
            Phase::P3 | Phase::B => [1, -1, 1, 0, 1, 0],
        }
    }

    /// Labels after the switch.
    pub fn result_pattern(self) -> [i8; 6] {
        let mut p = self.pattern();
        for (k, x) in p.iter_mut().enumerate() {
            *x += if k % 2 == 0 { -1 } else { 1 };
        }
        p
    }

    pub fn mode(self) -> Mode {
        match self {
            Phase::P1 | Phase::P2 | Phase::P3 => Mode::Undirected,
            Phase::A | Phase::B => Mode::Directed,
        }
    }

    /// Whether an encoding with defect counts `(p, q)` is in this phase.
    pub fn admits(self, p: usize, q: usize) -> bool {
        match self {
            Phase::P1 => p + q == 4 && p >= 1 && q >= 1,
            Phase::P2 | Phase::A => p >= 1,
            Phase::P3 | Phase::B => p == 0 && q >= 1,
        }
    }

    /// Phases in repair order.
    pub fn order(mode: Mode) -> &'static [Phase] {
        match mode {
            Mode::Undirected => &[Phase::P1, Phase::P2, Phase::P3],
            Mode::Directed => &[Phase::A, Phase::B],
        }
    }
}

/// Searches for a tuple whose six positions carry `pattern`, visiting
/// vertices in the order given by `order` (a permutation of `0..n`), with
/// `a1, b1, a2, b2, a3, b3` nested outermost to innermost. `prefix` is
/// consulted once `(a1, b1, a2)` are fixed and may prune; `accept` decides
/// on complete tuples.
pub fn search_switch<P, A>(l: &Encoding, pattern: [i8; 6], order: &[usize], mut prefix: P, mut accept: A) -> Option<Tuple>
where
    P: FnMut(usize, usize, usize) -> bool,
    A: FnMut(&Tuple) -> bool,
{
    debug_assert_eq!(order.len(), l.n());
    // Candidates for `x` with L(x, fixed) = want, or L(fixed, x) = want.
    let column = |fixed: usize, want: i8| -> Vec<usize> {
        order.iter().copied().filter(|&x| x != fixed && l.get(x, fixed) == want).collect()
    };
    let row = |fixed: usize, want: i8| -> Vec<usize> {
        order.iter().copied().filter(|&x| x != fixed && l.get(fixed, x) == want).collect()
    };
    for &a1 in order {
        for b1 in row(a1, pattern[0]) {
            for a2 in column(b1, pattern[1]) {
                if a2 == a1 || !prefix(a1, b1, a2) {
                    continue;
                }
                for b2 in row(a2, pattern[2]) {
                    if b2 == a1 || b2 == b1 {
                        continue;
                    }
                    for a3 in column(b2, pattern[3]) {
                        if [a1, b1, a2].contains(&a3) {
                            continue;
                        }
                        for b3 in row(a3, pattern[4]) {
                            if [a1, b1, a2, b2].contains(&b3) || l.get(a1, b3) != pattern[5] {
                                continue;
                            }
                            let t = [a1, b1, a2, b2, a3, b3];
                            if accept(&t) {
                                return Some(t);
                            }
                        }
                    }
                }
            }
        }
    }
    None
}

/// Lexicographically least tuple matching the phase pattern, or `None` if
/// the encoding's profile is not in this phase or no tuple exists.
pub fn find_phase_switch(l: &Encoding, phase: Phase) -> Option<Tuple> {
    if phase.mode() != l.mode() {
        return None;
    }
    let (p, q) = l.profile().pq();
    if !phase.admits(p, q) {
        return None;
    }
    let order: Vec<usize> = (0..l.n()).collect();
    search_switch(l, phase.pattern(), &order, |_, _, _| true, |_| true)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepairOutcome {
    /// Phase switches applied, in order.
    pub log: Vec<(Phase, Tuple)>,
    /// The defect-free result.
    #[serde(skip)]
    pub encoding: Encoding,
}

/// Applies phase switches (earliest admissible phase first) until no defect
/// remains.
pub fn repair(l: &Encoding) -> Result<RepairOutcome> {
    let mut cur = l.clone();
    let mut log = Vec::new();
    loop {
        let (p, q) = cur.profile().pq();
        if (p, q) == (0, 0) {
            return Ok(RepairOutcome { log, encoding: cur });
        }
        let step = Phase::order(cur.mode())
            .iter()
            .find_map(|&ph| find_phase_switch(&cur, ph).map(|t| (ph, t)));
        let Some((phase, t)) = step else {
            return Err(Error::RepairStuck {
                p,
                q,
                switches: log.len(),
            });
        };
        cur.apply_3switch(&t)?;
        log.push((phase, t));
    }
}
