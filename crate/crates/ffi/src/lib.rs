//! C ABI over the `switchmix` core.
//!
//! Handles are opaque and owned by the caller, who releases them with the
//! matching `_free` function. Every fallible call returns a
//! [`SwitchmixStatus`]; on failure, `switchmix_last_error` describes the
//! problem. Results are written through out-pointers.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use switchmix::bounds;
use switchmix::chain::{DirectedChain, SwitchChain, UndirectedChain, Variant};
use switchmix::construct::{realize, realize_directed};
use switchmix::enumerate::{self, DEFAULT_T_MAX};
use switchmix::{DegreeSequence, DirectedDegreeSequence, Error};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwitchmixStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotGraphical = 3,
    Frozen = 4,
    CapExceeded = 5,
    Reducible = 6,
    Internal = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwitchmixVariant {
    Exact = 0,
    AllPairs = 1,
}

impl From<SwitchmixVariant> for Variant {
    fn from(v: SwitchmixVariant) -> Self {
        match v {
            SwitchmixVariant::Exact => Variant::Exact,
            SwitchmixVariant::AllPairs => Variant::AllPairs,
        }
    }
}

enum Seq {
    Undirected(DegreeSequence),
    Directed(DirectedDegreeSequence),
}

/// A degree sequence, undirected or directed.
pub struct SwitchmixSequence {
    seq: Seq,
}

enum ChainKind {
    Undirected(UndirectedChain),
    Directed(DirectedChain),
}

/// A running switch chain.
pub struct SwitchmixChain {
    chain: ChainKind,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> SwitchmixStatus {
    match e {
        Error::NotGraphical | Error::NotDigraphical | Error::OddDegreeSum(_) | Error::InOutMismatch { .. } => {
            SwitchmixStatus::NotGraphical
        }
        Error::Frozen(_) | Error::TooFewEdges { .. } => SwitchmixStatus::Frozen,
        Error::CapExceeded { .. } => SwitchmixStatus::CapExceeded,
        Error::EmptySequence | Error::Epsilon(_) | Error::Parse { .. } | Error::InvalidArgument(_) => {
            SwitchmixStatus::InvalidArgument
        }
        _ => SwitchmixStatus::Internal,
    }
}

/// Runs `f`, recording errors and turning panics into `Internal`.
fn guard<F: FnOnce() -> Result<(), SwitchmixStatus>>(f: F) -> SwitchmixStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SwitchmixStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            SwitchmixStatus::Internal
        }
    }
}

fn fail(e: Error) -> SwitchmixStatus {
    set_error(e.to_string());
    status_of(&e)
}

fn null(what: &str) -> SwitchmixStatus {
    set_error(format!("{what} is null"));
    SwitchmixStatus::NullPointer
}

unsafe fn slice<'a>(p: *const u32, n: usize, what: &str) -> Result<&'a [u32], SwitchmixStatus> {
    if n == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, n))
}

unsafe fn put<T>(out: *mut T, v: T, what: &str) -> Result<(), SwitchmixStatus> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(v);
    Ok(())
}

unsafe fn seq_ref<'a>(seq: *const SwitchmixSequence) -> Result<&'a SwitchmixSequence, SwitchmixStatus> {
    seq.as_ref().ok_or_else(|| null("sequence"))
}

/// Creates an undirected sequence from `n` degrees.
#[no_mangle]
pub unsafe extern "C" fn switchmix_sequence_new_undirected(
    degrees: *const u32,
    n: usize,
    out: *mut *mut SwitchmixSequence,
) -> SwitchmixStatus {
    guard(|| {
        let d = DegreeSequence::new(slice(degrees, n, "degrees")?.to_vec()).map_err(fail)?;
        let h = Box::into_raw(Box::new(SwitchmixSequence { seq: Seq::Undirected(d) }));
        put(out, h, "out").inspect_err(|_| drop(Box::from_raw(h)))
    })
}

/// Creates a directed sequence from `n` in-degrees and `n` out-degrees.
#[no_mangle]
pub unsafe extern "C" fn switchmix_sequence_new_directed(
    in_degrees: *const u32,
    out_degrees: *const u32,
    n: usize,
    out: *mut *mut SwitchmixSequence,
) -> SwitchmixStatus {
    guard(|| {
        let ins = slice(in_degrees, n, "in_degrees")?;
        let outs = slice(out_degrees, n, "out_degrees")?;
        let dd = DirectedDegreeSequence::from_in_out(ins, outs).map_err(fail)?;
        let h = Box::into_raw(Box::new(SwitchmixSequence { seq: Seq::Directed(dd) }));
        put(out, h, "out").inspect_err(|_| drop(Box::from_raw(h)))
    })
}

#[no_mangle]
pub unsafe extern "C" fn switchmix_sequence_free(seq: *mut SwitchmixSequence) {
    if !seq.is_null() {
        drop(Box::from_raw(seq));
    }
}

/// Writes whether the sequence is realizable by a simple (di)graph.
#[no_mangle]
pub unsafe extern "C" fn switchmix_sequence_is_graphical(seq: *const SwitchmixSequence, out: *mut bool) -> SwitchmixStatus {
    guard(|| {
        let s = seq_ref(seq)?;
        let ok = match &s.seq {
            Seq::Undirected(d) => d.is_graphical(),
            Seq::Directed(dd) => dd.is_digraphical(),
        };
        put(out, ok, "out")
    })
}

/// Starts a chain at the deterministic realization of `seq`. `variant` is
/// ignored for directed sequences.
#[no_mangle]
pub unsafe extern "C" fn switchmix_chain_new(
    seq: *const SwitchmixSequence,
    seed: u64,
    replica: u64,
    variant: SwitchmixVariant,
    out: *mut *mut SwitchmixChain,
) -> SwitchmixStatus {
    guard(|| {
        let s = seq_ref(seq)?;
        let chain = match &s.seq {
            Seq::Undirected(d) => {
                let g = realize(d).map_err(fail)?;
                ChainKind::Undirected(UndirectedChain::new(g, variant.into(), seed, replica).map_err(fail)?)
            }
            Seq::Directed(dd) => {
                let g = realize_directed(dd).map_err(fail)?;
                ChainKind::Directed(DirectedChain::new(g, seed, replica).map_err(fail)?)
            }
        };
        let h = Box::into_raw(Box::new(SwitchmixChain { chain }));
        put(out, h, "out").inspect_err(|_| drop(Box::from_raw(h)))
    })
}

/// Runs `steps` transitions.
#[no_mangle]
pub unsafe extern "C" fn switchmix_chain_step(chain: *mut SwitchmixChain, steps: u64) -> SwitchmixStatus {
    guard(|| {
        let c = chain.as_mut().ok_or_else(|| null("chain"))?;
        match &mut c.chain {
            ChainKind::Undirected(ch) => ch.advance(steps),
            ChainKind::Directed(ch) => ch.advance(steps),
        }
        .map_err(fail)
    })
}

/// Number of edges (arcs) of the current state.
#[no_mangle]
pub unsafe extern "C" fn switchmix_chain_edge_count(chain: *const SwitchmixChain, out: *mut usize) -> SwitchmixStatus {
    guard(|| {
        let c = chain.as_ref().ok_or_else(|| null("chain"))?;
        let count = match &c.chain {
            ChainKind::Undirected(ch) => ch.graph().edge_count(),
            ChainKind::Directed(ch) => ch.digraph().arc_count(),
        };
        put(out, count, "out")
    })
}

/// Writes the current state's sorted edges as `u0, v0, u1, v1, ...` into
/// `buf`, which holds `capacity` pairs. `written` receives the number of
/// pairs; if the buffer is too small nothing is copied, `written` receives
/// the required size and `InvalidArgument` is returned.
#[no_mangle]
pub unsafe extern "C" fn switchmix_chain_edges(
    chain: *const SwitchmixChain,
    buf: *mut usize,
    capacity: usize,
    written: *mut usize,
) -> SwitchmixStatus {
    guard(|| {
        let c = chain.as_ref().ok_or_else(|| null("chain"))?;
        let edges = match &c.chain {
            ChainKind::Undirected(ch) => ch.graph().sorted_edges(),
            ChainKind::Directed(ch) => ch.digraph().sorted_arcs(),
        };
        put(written, edges.len(), "written")?;
        if edges.len() > capacity {
            set_error(format!("buffer holds {capacity} pairs, need {}", edges.len()));
            return Err(SwitchmixStatus::InvalidArgument);
        }
        if edges.is_empty() {
            return Ok(());
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        let out = std::slice::from_raw_parts_mut(buf, 2 * edges.len());
        for (k, (u, v)) in edges.into_iter().enumerate() {
            out[2 * k] = u;
            out[2 * k + 1] = v;
        }
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn switchmix_chain_free(chain: *mut SwitchmixChain) {
    if !chain.is_null() {
        drop(Box::from_raw(chain));
    }
}

/// Number of realizations, by exhaustive enumeration up to `cap` states.
#[no_mangle]
pub unsafe extern "C" fn switchmix_count_states(seq: *const SwitchmixSequence, cap: usize, out: *mut u64) -> SwitchmixStatus {
    guard(|| {
        let s = seq_ref(seq)?;
        let count = match &s.seq {
            Seq::Undirected(d) => enumerate::enum_states(d, cap).map_err(fail)?.len(),
            Seq::Directed(dd) => enumerate::enum_states_directed(dd, cap).map_err(fail)?.len(),
        };
        put(out, count as u64, "out")
    })
}

/// Exact worst-start mixing time for `eps`, by enumeration. Returns
/// `Reducible` when the chain does not connect the state space.
#[no_mangle]
pub unsafe extern "C" fn switchmix_exact_mixing_time(
    seq: *const SwitchmixSequence,
    eps: f64,
    cap: usize,
    variant: SwitchmixVariant,
    out: *mut u64,
) -> SwitchmixStatus {
    guard(|| {
        let s = seq_ref(seq)?;
        let a = match &s.seq {
            Seq::Undirected(d) => enumerate::analyze(d, variant.into(), 0, eps, cap, DEFAULT_T_MAX),
            Seq::Directed(dd) => enumerate::analyze_directed(dd, 0, eps, cap, DEFAULT_T_MAX),
        }
        .map_err(fail)?;
        match a.mixing_time {
            Some(t) => put(out, t as u64, "out"),
            None if a.components > 1 => {
                set_error(format!("state space splits into {} components", a.components));
                Err(SwitchmixStatus::Reducible)
            }
            None => {
                set_error(format!("not mixed within {DEFAULT_T_MAX} steps"));
                Err(SwitchmixStatus::Internal)
            }
        }
    })
}

/// Base-10 logarithm of the closed-form mixing bound.
#[no_mangle]
pub unsafe extern "C" fn switchmix_mixing_bound_log10(seq: *const SwitchmixSequence, eps: f64, out: *mut f64) -> SwitchmixStatus {
    guard(|| {
        let s = seq_ref(seq)?;
        let r = match &s.seq {
            Seq::Undirected(d) => bounds::mixing_bound(d, eps),
            Seq::Directed(dd) => bounds::mixing_bound_directed(dd, eps),
        }
        .map_err(fail)?;
        put(out, r.log10_value, "out")
    })
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn switchmix_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn switchmix_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}
