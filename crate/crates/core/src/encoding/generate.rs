//! Test-encoding generator: starting from a defect-free encoding, undo phase
//! switches so that the injected defects stay consistent with `Z` and the
//! encoding stays valid (and good, undirected) after every step.

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use super::catalog::{defects_valid, structure_ok};
use super::phase::{search_switch, Phase};
use super::{Encoding, Mode};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("profile ({p}, {q}) is not admissible")]
    Profile { p: usize, q: usize },
    #[error("Z and the start encoding differ in mode, size or degrees")]
    Mismatch,
    #[error("the start encoding already has defects")]
    NotDefectFree,
    #[error("no reverse {phase:?} switch available at step {step}")]
    NoSwitch { step: usize, phase: Phase },
}

/// Forward phase sequence whose reversal produces a target profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plan {
    pub mode: Mode,
    pub p: usize,
    pub q: usize,
    /// Phases in the order repair would apply them.
    pub phases: Vec<Phase>,
}

impl Plan {
    pub fn new(mode: Mode, p: usize, q: usize) -> Result<Plan, GenerateError> {
        let ok = match mode {
            Mode::Undirected => p <= 2 && q <= 3 && p + q <= 4,
            Mode::Directed => p <= 3 && q <= 3 && p + q <= 5,
        };
        if !ok {
            return Err(GenerateError::Profile { p, q });
        }
        let mut phases = Vec::new();
        match mode {
            Mode::Undirected if Phase::P1.admits(p, q) => {
                phases.push(Phase::P1);
                phases.extend(std::iter::repeat_n(Phase::P2, p - 1));
                phases.extend(std::iter::repeat_n(Phase::P3, q - 1));
            }
            Mode::Undirected => {
                phases.extend(std::iter::repeat_n(Phase::P2, p));
                phases.extend(std::iter::repeat_n(Phase::P3, q));
            }
            Mode::Directed => {
                phases.extend(std::iter::repeat_n(Phase::A, p));
                phases.extend(std::iter::repeat_n(Phase::B, q));
            }
        }
        Ok(Plan { mode, p, q, phases })
    }
}

/// Produces an encoding with profile `(plan.p, plan.q)` by undoing the plan's
/// phase switches, last phase first, on `start`. Tuples are searched in a
/// random vertex order drawn from `rng`; a dead end restarts from `start`,
/// up to `attempts` times.
pub fn generate<R: Rng + ?Sized>(
    z: &Encoding,
    start: &Encoding,
    plan: &Plan,
    attempts: usize,
    rng: &mut R,
) -> Result<Encoding, GenerateError> {
    if z.mode() != start.mode() || z.mode() != plan.mode || z.n() != start.n() {
        return Err(GenerateError::Mismatch);
    }
    if z.row_sums() != start.row_sums() || z.col_sums() != start.col_sums() {
        return Err(GenerateError::Mismatch);
    }
    if start.has_defects() {
        return Err(GenerateError::NotDefectFree);
    }
    let mut err = GenerateError::Mismatch;
    for _ in 0..attempts.max(1) {
        match attempt(z, start, plan, rng) {
            Ok(l) => return Ok(l),
            Err(e) => err = e,
        }
    }
    Err(err)
}

fn attempt<R: Rng + ?Sized>(z: &Encoding, start: &Encoding, plan: &Plan, rng: &mut R) -> Result<Encoding, GenerateError> {
    let n = start.n();
    let degrees = start.row_sums();
    let mut l = start.clone();
    let mut order: Vec<usize> = (0..n).collect();
    for (step, &phase) in plan.phases.iter().rev().enumerate() {
        order.shuffle(rng);
        let before = phase.pattern();
        let defects = l.defects();
        let prefix = |a1: usize, b1: usize, a2: usize| {
            let mut d = defects.clone();
            let mut add = |u: usize, v: usize, x: i8| {
                let (u, v) = if l.mode() == Mode::Undirected && u > v { (v, u) } else { (u, v) };
                d.push((u, v, x));
            };
            if before[0] == 2 {
                if z.get(a1, b1) != 0 {
                    return false;
                }
                add(a1, b1, 2);
            }
            if before[1] == -1 {
                if z.get(a2, b1) != 1 {
                    return false;
                }
                add(a2, b1, -1);
            }
            defects_valid(l.mode(), &d) && (l.mode() == Mode::Directed || structure_ok(&d, &degrees))
        };
        let t = search_switch(&l, phase.result_pattern(), &order, prefix, |_| true)
            .ok_or(GenerateError::NoSwitch { step, phase })?;
        l.undo_3switch(&t).expect("pattern guarantees a legal reverse switch");
    }
    Ok(l)
}
