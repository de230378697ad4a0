use std::ffi::CStr;
use std::ptr;

use switchmix_ffi::*;

fn last_error() -> String {
    let p = switchmix_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn undirected(d: &[u32]) -> *mut SwitchmixSequence {
    let mut s = ptr::null_mut();
    let st = unsafe { switchmix_sequence_new_undirected(d.as_ptr(), d.len(), &mut s) };
    assert_eq!(st, SwitchmixStatus::Ok);
    s
}

#[test]
fn path_space() {
    let s = undirected(&[1, 2, 2, 1]);
    let mut ok = false;
    let mut count = 0u64;
    let mut tau = 0u64;
    unsafe {
        assert_eq!(switchmix_sequence_is_graphical(s, &mut ok), SwitchmixStatus::Ok);
        assert!(ok);
        assert_eq!(switchmix_count_states(s, 100, &mut count), SwitchmixStatus::Ok);
        assert_eq!(count, 2);
        assert_eq!(switchmix_exact_mixing_time(s, 0.01, 100, SwitchmixVariant::Exact, &mut tau), SwitchmixStatus::Ok);
        assert_eq!(tau, 4);
        assert_eq!(switchmix_count_states(s, 1, &mut count), SwitchmixStatus::CapExceeded);
        switchmix_sequence_free(s);
    }
}

#[test]
fn chain_round_trip() {
    let s = undirected(&[2; 6]);
    let mut c = ptr::null_mut();
    unsafe {
        assert_eq!(switchmix_chain_new(s, 3, 0, SwitchmixVariant::Exact, &mut c), SwitchmixStatus::Ok);
        assert_eq!(switchmix_chain_step(c, 500), SwitchmixStatus::Ok);
        let mut m = 0usize;
        assert_eq!(switchmix_chain_edge_count(c, &mut m), SwitchmixStatus::Ok);
        assert_eq!(m, 6);
        let mut written = 0usize;
        let mut small = [0usize; 4];
        assert_eq!(switchmix_chain_edges(c, small.as_mut_ptr(), 2, &mut written), SwitchmixStatus::InvalidArgument);
        assert_eq!(written, 6);
        let mut buf = [0usize; 12];
        assert_eq!(switchmix_chain_edges(c, buf.as_mut_ptr(), 6, &mut written), SwitchmixStatus::Ok);
        let mut deg = [0u32; 6];
        for &x in &buf {
            deg[x] += 1;
        }
        assert_eq!(deg, [2; 6]);
        switchmix_chain_free(c);
        switchmix_sequence_free(s);
    }
}

#[test]
fn error_codes() {
    let bad = undirected(&[3, 3, 1, 1]);
    let mut c = ptr::null_mut();
    unsafe {
        assert_eq!(switchmix_chain_new(bad, 0, 0, SwitchmixVariant::Exact, &mut c), SwitchmixStatus::NotGraphical);
        assert!(c.is_null());
        assert!(last_error().contains("graphical"));
        switchmix_sequence_free(bad);

        // A triangle has no pair of disjoint edges.
        let tri = undirected(&[2, 2, 2]);
        assert_eq!(switchmix_chain_new(tri, 0, 0, SwitchmixVariant::Exact, &mut c), SwitchmixStatus::Frozen);
        let mut lg = 0.0;
        assert_eq!(switchmix_mixing_bound_log10(tri, 2.0, &mut lg), SwitchmixStatus::InvalidArgument);
        switchmix_sequence_free(tri);

        assert_eq!(switchmix_chain_step(ptr::null_mut(), 1), SwitchmixStatus::NullPointer);
        let mut ok = false;
        assert_eq!(switchmix_sequence_is_graphical(ptr::null(), &mut ok), SwitchmixStatus::NullPointer);
        assert_eq!(switchmix_sequence_new_undirected(ptr::null(), 3, &mut c.cast()), SwitchmixStatus::NullPointer);
    }
    assert_eq!(unsafe { CStr::from_ptr(switchmix_version()) }.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn directed_cycle_is_reducible() {
    let ones = [1u32; 3];
    let mut s = ptr::null_mut();
    let mut tau = 0u64;
    let mut count = 0u64;
    let mut lg = 0.0;
    unsafe {
        assert_eq!(switchmix_sequence_new_directed(ones.as_ptr(), ones.as_ptr(), 3, &mut s), SwitchmixStatus::Ok);
        assert_eq!(switchmix_count_states(s, 100, &mut count), SwitchmixStatus::Ok);
        assert_eq!(count, 2);
        assert_eq!(switchmix_exact_mixing_time(s, 0.01, 100, SwitchmixVariant::Exact, &mut tau), SwitchmixStatus::Reducible);
        assert_eq!(switchmix_mixing_bound_log10(s, 0.01, &mut lg), SwitchmixStatus::Ok);
        // r = 1, m = 3: 3^11 (3 ln 3 + ln 100) / 4.
        let want = (3f64.powi(11) * (3.0 * 3f64.ln() + 100f64.ln()) / 4.0).log10();
        assert!((lg - want).abs() < 1e-12);
        let mut c = ptr::null_mut();
        assert_eq!(switchmix_chain_new(s, 1, 0, SwitchmixVariant::Exact, &mut c), SwitchmixStatus::Ok);
        assert_eq!(switchmix_chain_step(c, 100), SwitchmixStatus::Ok);
        switchmix_chain_free(c);
        switchmix_sequence_free(s);
    }
}
