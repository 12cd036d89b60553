//! C ABI for the treeldpc library: opaque graph handles, integer status
//! codes, and a thread-local last-error message. The header is generated by
//! cbindgen into include/treeldpc.h at build time.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use treeldpc::construct::{witness_codeword, Alphabet, ConstructionSpec, Family, WitnessFamily};
use treeldpc::decode::MessagePassing;
use treeldpc::linalg::{min_distance, MinDistance};
use treeldpc::pseudo::tree_bound;
use treeldpc::tanner::TannerGraph;

/// Status codes returned by every fallible call.
#[repr(i32)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TldpcStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidArgument = 2,
    Unsupported = 3,
    BufferTooSmall = 4,
    Disconnected = 5,
    Panic = 6,
}

/// Opaque handle to a constructed Tanner graph.
pub struct TldpcGraph {
    graph: TannerGraph,
    decoder: MessagePassing,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn fail(status: TldpcStatus, msg: &str) -> TldpcStatus {
    set_error(msg);
    status
}

/// Message for the most recent error on this thread. The pointer stays valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn tldpc_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

fn guarded(body: impl FnOnce() -> TldpcStatus) -> TldpcStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(TldpcStatus::Panic, "internal panic"),
    }
}

unsafe fn parse_family(family: *const c_char) -> Result<Family, TldpcStatus> {
    if family.is_null() {
        return Err(fail(TldpcStatus::NullArgument, "family is null"));
    }
    let text = match CStr::from_ptr(family).to_str() {
        Ok(t) => t,
        Err(_) => return Err(fail(TldpcStatus::InvalidArgument, "family is not UTF-8")),
    };
    Family::parse(text).map_err(|e| fail(TldpcStatus::InvalidArgument, &e.to_string()))
}

/// Builds a graph. `family` is one of "type1a", "type1b", "type2l3",
/// "type2l4", "eg2"; `ell` applies to type1a (pass 0 otherwise), `p`/`s`
/// to the field-based families (pass 0 when unused).
///
/// # Safety
/// `family` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tldpc_graph_build(
    family: *const c_char,
    ell: u32,
    p: u32,
    s: u32,
    out: *mut *mut TldpcGraph,
) -> TldpcStatus {
    guarded(|| {
        if out.is_null() {
            return fail(TldpcStatus::NullArgument, "out is null");
        }
        let family = match parse_family(family) {
            Ok(f) => f,
            Err(status) => return status,
        };
        let mut spec = ConstructionSpec::new(family);
        if ell != 0 {
            spec.ell = Some(ell);
        }
        if p != 0 {
            spec.p = Some(p);
        }
        if s != 0 {
            spec.s = Some(s);
        }
        match spec.build() {
            Ok(graph) => {
                let decoder = MessagePassing::new(&graph);
                *out = Box::into_raw(Box::new(TldpcGraph { graph, decoder }));
                TldpcStatus::Ok
            }
            Err(e) => fail(TldpcStatus::InvalidArgument, &e.to_string()),
        }
    })
}

/// Releases a graph handle. Passing NULL is a no-op.
///
/// # Safety
/// `graph` must come from `tldpc_graph_build` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn tldpc_graph_free(graph: *mut TldpcGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

unsafe fn deref<'a>(graph: *const TldpcGraph) -> Result<&'a TldpcGraph, TldpcStatus> {
    graph
        .as_ref()
        .ok_or_else(|| fail(TldpcStatus::NullArgument, "graph is null"))
}

/// Number of variable nodes; 0 for a NULL handle.
///
/// # Safety
/// `graph` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn tldpc_graph_n_var(graph: *const TldpcGraph) -> u32 {
    graph.as_ref().map_or(0, |g| g.graph.n_var() as u32)
}

/// Number of check nodes; 0 for a NULL handle.
///
/// # Safety
/// `graph` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn tldpc_graph_n_chk(graph: *const TldpcGraph) -> u32 {
    graph.as_ref().map_or(0, |g| g.graph.n_chk() as u32)
}

/// Girth of the graph; 0 reports an acyclic graph.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tldpc_graph_girth(graph: *const TldpcGraph, out: *mut u32) -> TldpcStatus {
    guarded(|| {
        let g = match deref(graph) {
            Ok(g) => g,
            Err(s) => return s,
        };
        if out.is_null() {
            return fail(TldpcStatus::NullArgument, "out is null");
        }
        *out = g.graph.girth().map_or(0, |x| x as u32);
        TldpcStatus::Ok
    })
}

/// Diameter of the graph; fails with `Disconnected` when not connected.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tldpc_graph_diameter(
    graph: *const TldpcGraph,
    out: *mut u32,
) -> TldpcStatus {
    guarded(|| {
        let g = match deref(graph) {
            Ok(g) => g,
            Err(s) => return s,
        };
        if out.is_null() {
            return fail(TldpcStatus::NullArgument, "out is null");
        }
        match g.graph.diameter() {
            Ok(d) => {
                *out = d as u32;
                TldpcStatus::Ok
            }
            Err(e) => fail(TldpcStatus::Disconnected, &e.to_string()),
        }
    })
}

/// Code dimension over GF(modulus), modulus prime.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tldpc_graph_dimension(
    graph: *const TldpcGraph,
    modulus: u32,
    out: *mut u32,
) -> TldpcStatus {
    guarded(|| {
        let g = match deref(graph) {
            Ok(g) => g,
            Err(s) => return s,
        };
        if out.is_null() {
            return fail(TldpcStatus::NullArgument, "out is null");
        }
        if !(2..=251).contains(&modulus) {
            return fail(TldpcStatus::InvalidArgument, "modulus out of range");
        }
        *out = g.graph.to_matrix(modulus).dimension() as u32;
        TldpcStatus::Ok
    })
}

/// Minimum distance over GF(modulus) with the given enumeration cap.
/// `exact` receives 1 when the value is exact; otherwise `out` holds the
/// best lower bound and `upper` the best upper bound (0 when unknown).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tldpc_graph_min_distance(
    graph: *const TldpcGraph,
    modulus: u32,
    cap: u64,
    out: *mut u32,
    upper: *mut u32,
    exact: *mut i32,
) -> TldpcStatus {
    guarded(|| {
        let g = match deref(graph) {
            Ok(g) => g,
            Err(s) => return s,
        };
        if out.is_null() || exact.is_null() || upper.is_null() {
            return fail(TldpcStatus::NullArgument, "output pointer is null");
        }
        if !(2..=251).contains(&modulus) {
            return fail(TldpcStatus::InvalidArgument, "modulus out of range");
        }
        match min_distance(&g.graph.to_matrix(modulus), cap) {
            MinDistance::Trivial => fail(TldpcStatus::InvalidArgument, "code has dimension 0"),
            MinDistance::Exact(d) => {
                *out = d as u32;
                *upper = d as u32;
                *exact = 1;
                TldpcStatus::Ok
            }
            MinDistance::Bounds { lower, upper: u } => {
                *out = lower as u32;
                *upper = u.unwrap_or(0) as u32;
                *exact = 0;
                TldpcStatus::Ok
            }
        }
    })
}

/// Tree lower bound T(d, g) for variable degree d and girth g.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn tldpc_tree_bound(d: u32, g: u32, out: *mut u32) -> TldpcStatus {
    guarded(|| {
        if out.is_null() {
            return fail(TldpcStatus::NullArgument, "out is null");
        }
        match tree_bound(d as usize, g as usize) {
            Ok(t) => {
                *out = t as u32;
                TldpcStatus::Ok
            }
            Err(e) => fail(TldpcStatus::InvalidArgument, &e.to_string()),
        }
    })
}

/// Writes the alist text into `buf`. Call with `cap` = 0 to query the
/// required size via `written` (including the trailing NUL).
///
/// # Safety
/// `buf` must point to `cap` writable bytes when `cap` > 0.
#[no_mangle]
pub unsafe extern "C" fn tldpc_graph_alist(
    graph: *const TldpcGraph,
    buf: *mut c_char,
    cap: usize,
    written: *mut usize,
) -> TldpcStatus {
    guarded(|| {
        let g = match deref(graph) {
            Ok(g) => g,
            Err(s) => return s,
        };
        if written.is_null() {
            return fail(TldpcStatus::NullArgument, "written is null");
        }
        let text = g.graph.to_alist();
        let needed = text.len() + 1;
        *written = needed;
        if cap == 0 {
            return TldpcStatus::Ok;
        }
        if buf.is_null() {
            return fail(TldpcStatus::NullArgument, "buf is null");
        }
        if cap < needed {
            return fail(TldpcStatus::BufferTooSmall, "alist buffer too small");
        }
        ptr::copy_nonoverlapping(text.as_ptr(), buf as *mut u8, text.len());
        *buf.add(text.len()) = 0;
        TldpcStatus::Ok
    })
}

/// Witness codeword for "type1b" or "type2l3"; `pary` nonzero selects the
/// p-ary proof. `word` must hold the block length (see
/// `tldpc_graph_n_var`); `weight` receives the Hamming weight.
///
/// # Safety
/// `word` must point to at least `word_len` bytes.
#[no_mangle]
pub unsafe extern "C" fn tldpc_witness(
    family: *const c_char,
    p: u32,
    s: u32,
    pary: i32,
    word: *mut u8,
    word_len: usize,
    weight: *mut u32,
) -> TldpcStatus {
    guarded(|| {
        let family = match parse_family(family) {
            Ok(Family::TypeIb) => WitnessFamily::TypeIb,
            Ok(Family::TypeIiL3) => WitnessFamily::TypeIiL3,
            Ok(other) => {
                return fail(
                    TldpcStatus::Unsupported,
                    &format!("no witness for family {}", other.name()),
                )
            }
            Err(status) => return status,
        };
        if word.is_null() || weight.is_null() {
            return fail(TldpcStatus::NullArgument, "output pointer is null");
        }
        let alphabet = if pary != 0 {
            Alphabet::Pary
        } else {
            Alphabet::Binary
        };
        match witness_codeword(family, p, s, alphabet) {
            Ok(vec) => {
                if word_len < vec.len() {
                    return fail(TldpcStatus::BufferTooSmall, "word buffer too small");
                }
                ptr::copy_nonoverlapping(vec.as_ptr(), word, vec.len());
                *weight = vec.iter().filter(|&&x| x != 0).count() as u32;
                TldpcStatus::Ok
            }
            Err(e) => fail(TldpcStatus::Unsupported, &e.to_string()),
        }
    })
}

unsafe fn decode_common(
    graph: *const TldpcGraph,
    word: *mut u8,
    converged: *mut i32,
    iterations: *mut u32,
    run: impl FnOnce(&TldpcGraph) -> treeldpc::decode::DecodeResult,
) -> TldpcStatus {
    let g = match deref(graph) {
        Ok(g) => g,
        Err(s) => return s,
    };
    if word.is_null() || converged.is_null() || iterations.is_null() {
        return fail(TldpcStatus::NullArgument, "output pointer is null");
    }
    let result = run(g);
    ptr::copy_nonoverlapping(result.word.as_ptr(), word, result.word.len());
    *converged = result.converged as i32;
    *iterations = result.iterations as u32;
    TldpcStatus::Ok
}

/// Min-sum decoding. `llr` holds one log-likelihood ratio per variable
/// (positive favors bit 0); `word` receives the hard decisions.
///
/// # Safety
/// `llr` and `word` must match the block length.
#[no_mangle]
pub unsafe extern "C" fn tldpc_decode_min_sum(
    graph: *const TldpcGraph,
    llr: *const f64,
    llr_len: usize,
    max_iter: u32,
    word: *mut u8,
    converged: *mut i32,
    iterations: *mut u32,
) -> TldpcStatus {
    guarded(|| {
        let g = match deref(graph) {
            Ok(g) => g,
            Err(s) => return s,
        };
        if llr.is_null() {
            return fail(TldpcStatus::NullArgument, "llr is null");
        }
        if llr_len != g.graph.n_var() {
            return fail(TldpcStatus::InvalidArgument, "llr length mismatch");
        }
        let llr = std::slice::from_raw_parts(llr, llr_len);
        decode_common(graph, word, converged, iterations, |g| {
            g.decoder.min_sum(llr, max_iter.max(1) as usize)
        })
    })
}

/// Sum-product decoding with the same contract as `tldpc_decode_min_sum`.
///
/// # Safety
/// `llr` and `word` must match the block length.
#[no_mangle]
pub unsafe extern "C" fn tldpc_decode_sum_product(
    graph: *const TldpcGraph,
    llr: *const f64,
    llr_len: usize,
    max_iter: u32,
    word: *mut u8,
    converged: *mut i32,
    iterations: *mut u32,
) -> TldpcStatus {
    guarded(|| {
        let g = match deref(graph) {
            Ok(g) => g,
            Err(s) => return s,
        };
        if llr.is_null() {
            return fail(TldpcStatus::NullArgument, "llr is null");
        }
        if llr_len != g.graph.n_var() {
            return fail(TldpcStatus::InvalidArgument, "llr length mismatch");
        }
        let llr = std::slice::from_raw_parts(llr, llr_len);
        decode_common(graph, word, converged, iterations, |g| {
            g.decoder.sum_product(llr, max_iter.max(1) as usize)
        })
    })
}

/// p-ary sum-product decoding. `likelihoods` is row-major n x p: entry
/// i*p + j is the channel probability of symbol j at position i.
///
/// # Safety
/// `likelihoods` must hold n*p doubles and `word` n bytes.
#[no_mangle]
pub unsafe extern "C" fn tldpc_decode_sum_product_pary(
    graph: *const TldpcGraph,
    p: u32,
    likelihoods: *const f64,
    likelihoods_len: usize,
    max_iter: u32,
    word: *mut u8,
    converged: *mut i32,
    iterations: *mut u32,
) -> TldpcStatus {
    guarded(|| {
        let g = match deref(graph) {
            Ok(g) => g,
            Err(s) => return s,
        };
        if likelihoods.is_null() {
            return fail(TldpcStatus::NullArgument, "likelihoods is null");
        }
        let n = g.graph.n_var();
        if p < 2 || likelihoods_len != n * p as usize {
            return fail(
                TldpcStatus::InvalidArgument,
                "likelihood matrix shape mismatch",
            );
        }
        let flat = std::slice::from_raw_parts(likelihoods, likelihoods_len);
        let rows: Vec<Vec<f64>> = flat
            .chunks(p as usize)
            .map(|chunk| chunk.to_vec())
            .collect();
        decode_common(graph, word, converged, iterations, |g| {
            g.decoder
                .sum_product_pary(p, &rows, max_iter.max(1) as usize)
        })
    })
}
