//! C ABI for the rlab library. Objects cross the boundary as opaque handles,
//! results as JSON strings, failures as error codes with a thread-local
//! message retrievable via rlab_last_error.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use rlab::algebra::poly::Poly;
use rlab::building::building_ball;
use rlab::cartwright_steger::{cs_complex, cs_ramanujan_verdict, CsComplex, VerdictMode};
use rlab::complex::SimplicialComplex;
use rlab::doc::{ComplexDoc, GraphDoc, GraphMeta, ReportDoc};
use rlab::error::RlabError;
use rlab::expansion::{
    cheeger_graph, coboundary_expansion, filling, overlap_estimate, validate_mixing,
};
use rlab::graph::Graph;
use rlab::lps::lps_graph;
use rlab::spectra::is_ramanujan_graph;

/// Success.
pub const RLAB_OK: i32 = 0;
/// A verification or verdict came out negative.
pub const RLAB_VERDICT_FAILED: i32 = 1;
/// Malformed arguments or input documents.
pub const RLAB_INVALID_INPUT: i32 = 2;
/// A resource cap was exceeded.
pub const RLAB_CAP_EXCEEDED: i32 = 3;
/// Internal numerical or algebraic failure.
pub const RLAB_INTERNAL: i32 = 4;
/// A required pointer argument was null.
pub const RLAB_NULL_POINTER: i32 = 5;

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn code_of(e: &RlabError) -> i32 {
    match e {
        RlabError::InvalidInput(_) | RlabError::Io(_) | RlabError::Json(_) => RLAB_INVALID_INPUT,
        RlabError::CapExceeded(_) => RLAB_CAP_EXCEEDED,
        RlabError::Verification(_) => RLAB_VERDICT_FAILED,
        _ => RLAB_INTERNAL,
    }
}

/// Message for the most recent error on this thread. Borrowed; valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn rlab_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Opaque graph handle.
pub struct RlabGraph {
    graph: Graph,
    meta: GraphMeta,
}

/// Opaque simplicial-complex handle.
pub struct RlabComplex {
    complex: SimplicialComplex,
}

/// Opaque handle for a quotient complex with its Hecke structure.
pub struct RlabCsComplex {
    inner: CsComplex,
}

fn guard<T>(f: impl FnOnce() -> Result<T, (i32, String)>, out: impl FnOnce(T)) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(v)) => {
            out(v);
            RLAB_OK
        }
        Ok(Err((code, msg))) => {
            set_error(&msg);
            code
        }
        Err(_) => {
            set_error("panic inside rlab");
            RLAB_INTERNAL
        }
    }
}

fn lift<T>(r: rlab::error::Result<T>) -> Result<T, (i32, String)> {
    r.map_err(|e| (code_of(&e), e.to_string()))
}

unsafe fn read_str(s: *const c_char) -> Result<String, (i32, String)> {
    if s.is_null() {
        return Err((RLAB_NULL_POINTER, "null string argument".into()));
    }
    CStr::from_ptr(s)
        .to_str()
        .map(|t| t.to_string())
        .map_err(|_| (RLAB_INVALID_INPUT, "string is not valid UTF-8".into()))
}

fn to_cstring(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap().into_raw()
}

/// Free a string returned by any rlab function.
#[no_mangle]
pub unsafe extern "C" fn rlab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Build the Cayley graph X^{p,q} for distinct primes p, q congruent to
/// 1 mod 4. On success *out owns the new handle.
#[no_mangle]
pub unsafe extern "C" fn rlab_lps_graph(p: u64, q: u64, out: *mut *mut RlabGraph) -> i32 {
    if out.is_null() {
        set_error("null out pointer");
        return RLAB_NULL_POINTER;
    }
    guard(
        || {
            let x = lift(lps_graph(p, q))?;
            Ok(RlabGraph {
                meta: GraphMeta {
                    p: Some(p),
                    q: Some(q),
                    degree: Some(p as usize + 1),
                    bipartite: Some(x.bipartite),
                },
                graph: x.graph,
            })
        },
        |g| *out = Box::into_raw(Box::new(g)),
    )
}

/// Parse a graph document (JSON).
#[no_mangle]
pub unsafe extern "C" fn rlab_graph_from_json(
    json: *const c_char,
    out: *mut *mut RlabGraph,
) -> i32 {
    if out.is_null() {
        set_error("null out pointer");
        return RLAB_NULL_POINTER;
    }
    guard(
        || {
            let s = read_str(json)?;
            let doc: GraphDoc = serde_json::from_str(&s)
                .map_err(|e| (RLAB_INVALID_INPUT, e.to_string()))?;
            let graph = lift(doc.to_graph())?;
            Ok(RlabGraph {
                graph,
                meta: doc.metadata,
            })
        },
        |g| *out = Box::into_raw(Box::new(g)),
    )
}

/// Serialize a graph handle as a JSON document. Caller frees with
/// rlab_string_free.
#[no_mangle]
pub unsafe extern "C" fn rlab_graph_to_json(g: *const RlabGraph, out: *mut *mut c_char) -> i32 {
    if g.is_null() || out.is_null() {
        set_error("null pointer");
        return RLAB_NULL_POINTER;
    }
    let g = &*g;
    guard(
        || {
            let doc = GraphDoc::from_graph(&g.graph, g.meta.clone());
            serde_json::to_string_pretty(&doc)
                .map_err(|e| (RLAB_INTERNAL, e.to_string()))
        },
        |s| *out = to_cstring(s),
    )
}

#[no_mangle]
pub unsafe extern "C" fn rlab_graph_vertex_count(g: *const RlabGraph) -> i64 {
    if g.is_null() {
        return -1;
    }
    (*g).graph.n as i64
}

#[no_mangle]
pub unsafe extern "C" fn rlab_graph_edge_count(g: *const RlabGraph) -> i64 {
    if g.is_null() {
        return -1;
    }
    (*g).graph.edge_count() as i64
}

#[no_mangle]
pub unsafe extern "C" fn rlab_graph_free(g: *mut RlabGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Ramanujan verdict for a regular connected graph: a JSON report. Returns
/// RLAB_OK even when the verdict is negative; the report's "ok" field and
/// *ok_out carry the verdict.
#[no_mangle]
pub unsafe extern "C" fn rlab_graph_ramanujan(
    g: *const RlabGraph,
    tol: f64,
    ok_out: *mut i32,
    report_out: *mut *mut c_char,
) -> i32 {
    if g.is_null() || ok_out.is_null() || report_out.is_null() {
        set_error("null pointer");
        return RLAB_NULL_POINTER;
    }
    let g = &*g;
    guard(
        || {
            let v = lift(is_ramanujan_graph(&g.graph, tol))?;
            let mut r = ReportDoc::new("ramanujan");
            r.numeric("bound", v.bound, Some(tol));
            r.result("degree", serde_json::json!(v.degree));
            r.result("bipartite", serde_json::json!(v.bipartite));
            r.result("ramanujan", serde_json::json!(if v.ok { "yes" } else { "no" }));
            if let Some(l) = v.offending {
                r.numeric("offending", l, Some(tol));
            }
            r.ok = v.ok;
            Ok((v.ok, r.render()))
        },
        |(ok, s)| {
            *ok_out = ok as i32;
            *report_out = to_cstring(s);
        },
    )
}

/// Ball of radius r in the affine building of PGL_d over F_q((y)), as a
/// complex handle.
#[no_mangle]
pub unsafe extern "C" fn rlab_building_ball(
    d: usize,
    q: u64,
    r: usize,
    cap: usize,
    out: *mut *mut RlabComplex,
) -> i32 {
    if out.is_null() {
        set_error("null out pointer");
        return RLAB_NULL_POINTER;
    }
    guard(
        || {
            let b = lift(building_ball(d, q, r, cap))?;
            Ok(RlabComplex { complex: b.complex })
        },
        |c| *out = Box::into_raw(Box::new(c)),
    )
}

#[no_mangle]
pub unsafe extern "C" fn rlab_complex_from_json(
    json: *const c_char,
    out: *mut *mut RlabComplex,
) -> i32 {
    if out.is_null() {
        set_error("null out pointer");
        return RLAB_NULL_POINTER;
    }
    guard(
        || {
            let s = read_str(json)?;
            let doc: ComplexDoc = serde_json::from_str(&s)
                .map_err(|e| (RLAB_INVALID_INPUT, e.to_string()))?;
            let complex = lift(doc.to_complex())?;
            Ok(RlabComplex { complex })
        },
        |c| *out = Box::into_raw(Box::new(c)),
    )
}

#[no_mangle]
pub unsafe extern "C" fn rlab_complex_to_json(
    c: *const RlabComplex,
    out: *mut *mut c_char,
) -> i32 {
    if c.is_null() || out.is_null() {
        set_error("null pointer");
        return RLAB_NULL_POINTER;
    }
    let c = &*c;
    guard(
        || {
            let doc = ComplexDoc::from_complex(&c.complex, None);
            serde_json::to_string_pretty(&doc)
                .map_err(|e| (RLAB_INTERNAL, e.to_string()))
        },
        |s| *out = to_cstring(s),
    )
}

/// Number of i-dimensional faces; -1 on a null handle.
#[no_mangle]
pub unsafe extern "C" fn rlab_complex_face_count(c: *const RlabComplex, dim: usize) -> i64 {
    if c.is_null() {
        return -1;
    }
    (*c).complex.count(dim as isize) as i64
}

#[no_mangle]
pub unsafe extern "C" fn rlab_complex_free(c: *mut RlabComplex) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Expansion metrics of a complex as a JSON report. metric: 0 = graph
/// Cheeger (1-skeleton), 1 = coboundary expansion in dimension dim, 2 =
/// filling in dimension dim, 3 = mixing over `trials` seeded trials.
#[no_mangle]
pub unsafe extern "C" fn rlab_complex_expansion(
    c: *const RlabComplex,
    metric: i32,
    dim: usize,
    trials: usize,
    seed: u64,
    report_out: *mut *mut c_char,
) -> i32 {
    if c.is_null() || report_out.is_null() {
        set_error("null pointer");
        return RLAB_NULL_POINTER;
    }
    let x = &(*c).complex;
    guard(
        || {
            let mut r = ReportDoc::new("expand");
            match metric {
                0 => {
                    let ch = lift(cheeger_graph(&x.skeleton_graph()))?;
                    r.numeric("h", ch.h, None);
                    r.numeric("h_bar", ch.h_bar, None);
                }
                1 => {
                    let (e, en, _) = lift(coboundary_expansion(x, dim))?;
                    r.numeric("expansion", e, None);
                    r.numeric("normalized", en, None);
                }
                2 => {
                    let (nu, _) = lift(filling(x, dim))?;
                    r.numeric("filling", nu, None);
                }
                3 => {
                    let m = lift(validate_mixing(x, trials, seed))?;
                    r.numeric("mu0", m.mu0, Some(1e-9));
                    r.numeric("worst_slack", m.worst_slack, Some(1e-9));
                    r.seed("trials", seed);
                    r.ok = m.ok;
                }
                _ => return Err((RLAB_INVALID_INPUT, format!("unknown metric {metric}"))),
            }
            Ok(r.render())
        },
        |s| *report_out = to_cstring(s),
    )
}

/// Empirical geometric-overlap upper bound over seeded random planar
/// embeddings.
#[no_mangle]
pub unsafe extern "C" fn rlab_complex_overlap(
    c: *const RlabComplex,
    trials: usize,
    seed: u64,
    out: *mut f64,
) -> i32 {
    if c.is_null() || out.is_null() {
        set_error("null pointer");
        return RLAB_NULL_POINTER;
    }
    let x = &(*c).complex;
    guard(|| lift(overlap_estimate(x, trials, seed)), |v| *out = v)
}

/// Quotient Cayley clique complex of the division-algebra lattice modulo the
/// prime ideal generated by the polynomial with the given little-endian
/// coefficients.
#[no_mangle]
pub unsafe extern "C" fn rlab_cs_complex(
    d: usize,
    q: u64,
    ideal_coeffs: *const u64,
    ideal_len: usize,
    cap: usize,
    out: *mut *mut RlabCsComplex,
) -> i32 {
    if out.is_null() || ideal_coeffs.is_null() {
        set_error("null pointer");
        return RLAB_NULL_POINTER;
    }
    let coeffs = std::slice::from_raw_parts(ideal_coeffs, ideal_len).to_vec();
    guard(
        || {
            let g = Poly::new(coeffs);
            let inner = lift(cs_complex(d, q, &g, cap))?;
            Ok(RlabCsComplex { inner })
        },
        |c| *out = Box::into_raw(Box::new(c)),
    )
}

#[no_mangle]
pub unsafe extern "C" fn rlab_cs_vertex_count(c: *const RlabCsComplex) -> i64 {
    if c.is_null() {
        return -1;
    }
    (*c).inner.n() as i64
}

/// Detach the underlying simplicial complex as a fresh handle.
#[no_mangle]
pub unsafe extern "C" fn rlab_cs_get_complex(
    c: *const RlabCsComplex,
    out: *mut *mut RlabComplex,
) -> i32 {
    if c.is_null() || out.is_null() {
        set_error("null pointer");
        return RLAB_NULL_POINTER;
    }
    let complex = (*c).inner.complex.clone();
    *out = Box::into_raw(Box::new(RlabComplex { complex }));
    RLAB_OK
}

/// Hecke-spectrum Ramanujan verdict. mode: 0 = full spectrum, 1 = extremal
/// (Krylov) mode. Returns RLAB_OK even for a negative verdict; *ok_out and
/// the report carry it.
#[no_mangle]
pub unsafe extern "C" fn rlab_cs_ramanujan(
    c: *const RlabCsComplex,
    mode: i32,
    tol: f64,
    ok_out: *mut i32,
    report_out: *mut *mut c_char,
) -> i32 {
    if c.is_null() || ok_out.is_null() || report_out.is_null() {
        set_error("null pointer");
        return RLAB_NULL_POINTER;
    }
    let cx = &(*c).inner;
    guard(
        || {
            let m = match mode {
                0 => VerdictMode::Full,
                1 => VerdictMode::Extremal,
                _ => return Err((RLAB_INVALID_INPUT, format!("unknown mode {mode}"))),
            };
            let v = lift(cs_ramanujan_verdict(cx, m, tol))?;
            let mut r = ReportDoc::new("hecke");
            r.numeric("bound", v.bound, Some(tol));
            r.result("ramanujan", serde_json::json!(if v.ok { "yes" } else { "no" }));
            r.result(
                "guarantee",
                serde_json::json!(if v.theorem_guaranteed {
                    "theorem-guaranteed"
                } else {
                    "empirical, not theorem-guaranteed"
                }),
            );
            if let Some(rad) = v.spectral_radius {
                r.numeric("spectral_radius", rad, Some(tol));
            }
            r.ok = v.ok;
            Ok((v.ok, r.render()))
        },
        |(ok, s)| {
            *ok_out = ok as i32;
            *report_out = to_cstring(s);
        },
    )
}

#[no_mangle]
pub unsafe extern "C" fn rlab_cs_free(c: *mut RlabCsComplex) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    #[test]
    fn lps_round_trip_through_the_abi() {
        let mut g: *mut RlabGraph = ptr::null_mut();
        assert_eq!(unsafe { rlab_lps_graph(5, 13, &mut g) }, RLAB_OK);
        assert_eq!(unsafe { rlab_graph_vertex_count(g) }, 2184);
        let mut s: *mut c_char = ptr::null_mut();
        assert_eq!(unsafe { rlab_graph_to_json(g, &mut s) }, RLAB_OK);
        let json = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
        let mut g2: *mut RlabGraph = ptr::null_mut();
        let cjson = CString::new(json).unwrap();
        assert_eq!(
            unsafe { rlab_graph_from_json(cjson.as_ptr(), &mut g2) },
            RLAB_OK
        );
        assert_eq!(unsafe { rlab_graph_edge_count(g2) }, unsafe {
            rlab_graph_edge_count(g)
        });
        unsafe {
            rlab_string_free(s);
            rlab_graph_free(g);
            rlab_graph_free(g2);
        }
    }

    #[test]
    fn error_paths_set_codes_and_messages() {
        let mut g: *mut RlabGraph = ptr::null_mut();
        // 4 is not prime
        assert_eq!(unsafe { rlab_lps_graph(4, 13, &mut g) }, RLAB_INVALID_INPUT);
        let msg = unsafe { CStr::from_ptr(rlab_last_error()) }
            .to_str()
            .unwrap();
        assert!(!msg.is_empty());
        assert_eq!(
            unsafe { rlab_lps_graph(5, 13, ptr::null_mut()) },
            RLAB_NULL_POINTER
        );
        let bad = CString::new("{not json").unwrap();
        let mut c: *mut RlabComplex = ptr::null_mut();
        assert_eq!(
            unsafe { rlab_complex_from_json(bad.as_ptr(), &mut c) },
            RLAB_INVALID_INPUT
        );
    }

    #[test]
    fn building_and_expansion_through_the_abi() {
        let mut c: *mut RlabComplex = ptr::null_mut();
        assert_eq!(unsafe { rlab_building_ball(3, 2, 1, 100_000, &mut c) }, RLAB_OK);
        assert_eq!(unsafe { rlab_complex_face_count(c, 0) }, 15);
        let mut s: *mut c_char = ptr::null_mut();
        assert_eq!(
            unsafe { rlab_complex_expansion(c, 0, 1, 0, 0, &mut s) },
            RLAB_OK
        );
        let report = unsafe { CStr::from_ptr(s) }.to_str().unwrap();
        assert!(report.contains("\"h\""));
        unsafe {
            rlab_string_free(s);
            rlab_complex_free(c);
        }
    }

    #[test]
    fn cs_through_the_abi() {
        let coeffs = [1u64, 1, 1];
        let mut c: *mut RlabCsComplex = ptr::null_mut();
        assert_eq!(
            unsafe { rlab_cs_complex(2, 2, coeffs.as_ptr(), 3, 100_000, &mut c) },
            RLAB_OK
        );
        assert_eq!(unsafe { rlab_cs_vertex_count(c) }, 60);
        let mut ok = -1;
        let mut s: *mut c_char = ptr::null_mut();
        assert_eq!(unsafe { rlab_cs_ramanujan(c, 0, 1e-8, &mut ok, &mut s) }, RLAB_OK);
        assert!(ok == 0 || ok == 1);
        let report = unsafe { CStr::from_ptr(s) }.to_str().unwrap();
        assert!(report.contains("ramanujan"));
        unsafe {
            rlab_string_free(s);
            rlab_cs_free(c);
        }
    }
}
