//! Command-line front end: construct graphs, complexes and buildings, verify
//! spectra and expansion, and exchange everything as JSON documents.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use rlab::cartwright_steger::{cs_complex, cs_ramanujan_verdict, VerdictMode};
use rlab::complex::SimplicialComplex;
use rlab::doc::{
    parse_poly_coeffs, read_json, write_json, ComplexDoc, GraphDoc, GraphMeta, ReportDoc,
};
use rlab::error::{Result, RlabError};
use rlab::expansion::{
    cheeger_graph, cheeger_highdim, coboundary_expansion, filling, overlap_estimate,
    validate_cheeger_inequalities, validate_mixing,
};
use rlab::algebra::poly::Poly;
use rlab::building::building_ball;
use rlab::graph::Graph;
use rlab::lps::lps_graph;
use rlab::spectra::{graph_spectrum, is_ramanujan_graph};

#[derive(Parser)]
#[command(name = "rlab", about = "Ramanujan graphs and complexes: build and verify")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum HeckeMode {
    Full,
    Extremal,
}

#[derive(Clone, Copy, ValueEnum)]
enum Metric {
    Cheeger,
    Coboundary,
    Filling,
    Gap,
    Mixing,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the Cayley graph X^{p,q} for distinct primes p, q = 1 mod 4.
    Lps {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Eigenvalues of a stored graph, optionally with the Ramanujan verdict.
    Spectrum {
        graph: PathBuf,
        #[arg(long)]
        ramanujan: bool,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Ball of radius r around the standard lattice class in the affine
    /// building of PGL_d over F_q((y)).
    Ball {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 1_000_000)]
        cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Quotient Cayley clique complex of the division-algebra lattice mod the
    /// prime ideal (g); g given as little-endian coefficients, e.g. 1,1,1.
    Cs {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        ideal: String,
        #[arg(long)]
        max_dim: Option<usize>,
        #[arg(long, default_value_t = 200_000)]
        cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Hecke-spectrum verdict for a stored quotient complex (rebuilt from its
    /// recorded construction).
    Hecke {
        complex: PathBuf,
        #[arg(long, value_enum)]
        mode: HeckeMode,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Expansion metrics of a stored complex (or graph).
    Expand {
        complex: PathBuf,
        #[arg(long, value_enum)]
        metric: Metric,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
    /// Empirical geometric overlap over random planar embeddings.
    Overlap {
        complex: PathBuf,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn emit(report: &ReportDoc) {
    print!("{}", report.render());
}

fn threads_param(report: &mut ReportDoc) {
    let t = std::env::var("RLAB_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .unwrap_or(1);
    report.param("threads", json!(t));
}

/// A stored complex, or a stored graph promoted to its 1-skeleton complex.
fn load_complex(path: &Path) -> Result<(SimplicialComplex, Option<serde_json::Value>)> {
    if let Ok(doc) = read_json::<ComplexDoc>(path) {
        if !doc.faces.is_empty() {
            let c = doc.construction.clone();
            return Ok((doc.to_complex()?, c));
        }
    }
    let doc: GraphDoc = read_json(path)?;
    let g = doc.to_graph()?;
    let faces: Vec<Vec<usize>> = g.edges().iter().map(|&(u, v)| vec![u, v]).collect();
    Ok((SimplicialComplex::from_faces(g.n, &faces)?, None))
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Lps { p, q, out } => {
            let x = lps_graph(p, q)?;
            let mut r = ReportDoc::new("lps");
            threads_param(&mut r);
            r.param("p", json!(p));
            r.param("q", json!(q));
            r.result("vertices", json!(x.graph.n));
            r.result("degree", json!(p + 1));
            r.result("bipartite", json!(x.bipartite));
            r.result("group", json!(if x.group_is_pgl { "PGL2" } else { "PSL2" }));
            if let Some(path) = out {
                let meta = GraphMeta {
                    p: Some(p),
                    q: Some(q),
                    degree: Some(p as usize + 1),
                    bipartite: Some(x.bipartite),
                };
                write_json(&path, &GraphDoc::from_graph(&x.graph, meta))?;
                r.result("out", json!(path.display().to_string()));
            }
            emit(&r);
            Ok(true)
        }
        Cmd::Spectrum {
            graph,
            ramanujan,
            tol,
        } => {
            let doc: GraphDoc = read_json(&graph)?;
            let g: Graph = doc.to_graph()?;
            let spec = graph_spectrum(&g)?;
            let mut r = ReportDoc::new("spectrum");
            threads_param(&mut r);
            r.param("graph", json!(graph.display().to_string()));
            r.result("vertices", json!(g.n));
            r.numeric("lambda_min", *spec.first().unwrap(), Some(tol));
            r.numeric("lambda_max", *spec.last().unwrap(), Some(tol));
            let mut ok = true;
            if ramanujan {
                let v = is_ramanujan_graph(&g, tol)?;
                r.result("ramanujan", json!(if v.ok { "yes" } else { "no" }));
                r.numeric("bound", v.bound, Some(tol));
                r.result("bipartite", json!(v.bipartite));
                if let Some(l) = v.offending {
                    r.numeric("offending", l, Some(tol));
                }
                ok = v.ok;
            }
            r.ok = ok;
            emit(&r);
            Ok(ok)
        }
        Cmd::Ball { d, q, r: rad, cap, out } => {
            let ball = building_ball(d, q, rad, cap)?;
            let mut r = ReportDoc::new("ball");
            threads_param(&mut r);
            r.param("d", json!(d));
            r.param("q", json!(q));
            r.param("r", json!(rad));
            r.result("vertices", json!(ball.complex.n));
            r.result("edges", json!(ball.complex.count(1)));
            if d >= 3 {
                r.result("triangles", json!(ball.complex.count(2)));
            }
            if let Some(path) = out {
                let mut doc = ComplexDoc::from_complex(
                    &ball.complex,
                    Some(json!({"kind": "ball", "d": d, "q": q, "r": rad})),
                );
                doc.vertex_colors = Some(ball.colors.clone());
                write_json(&path, &doc)?;
                r.result("out", json!(path.display().to_string()));
            }
            emit(&r);
            Ok(true)
        }
        Cmd::Cs {
            d,
            q,
            ideal,
            max_dim,
            cap,
            out,
        } => {
            let coeffs = parse_poly_coeffs(&ideal)?;
            let g = Poly::new(coeffs.clone());
            let cx = cs_complex(d, q, &g, cap)?;
            let mut r = ReportDoc::new("cs");
            threads_param(&mut r);
            r.param("d", json!(d));
            r.param("q", json!(q));
            r.param("ideal", json!(coeffs));
            r.result("vertices", json!(cx.n()));
            r.result("residue_degree", json!(cx.e));
            r.result("partite_classes", json!(cx.t));
            r.result("theorem_guaranteed", json!(cx.theorem_guaranteed));
            r.result("group", json!(if cx.is_pgl { "PGLd" } else { "proper subgroup" }));
            if let Some(path) = out {
                let mut doc = ComplexDoc::from_complex(
                    &cx.complex,
                    Some(json!({"kind": "cs", "d": d, "q": q, "ideal": coeffs})),
                );
                if let Some(m) = max_dim {
                    doc.faces.truncate(m + 1);
                }
                doc.vertex_colors = Some(cx.det_class.clone());
                write_json(&path, &doc)?;
                r.result("out", json!(path.display().to_string()));
            }
            emit(&r);
            Ok(true)
        }
        Cmd::Hecke { complex, mode, tol } => {
            let doc: ComplexDoc = read_json(&complex)?;
            let c = doc.construction.clone().ok_or_else(|| {
                RlabError::InvalidInput("complex has no recorded construction".into())
            })?;
            if c["kind"] != json!("cs") {
                return Err(RlabError::InvalidInput(
                    "hecke verdicts need a cs-constructed complex".into(),
                ));
            }
            let d = c["d"].as_u64().unwrap_or(0) as usize;
            let q = c["q"].as_u64().unwrap_or(0);
            let coeffs: Vec<u64> = c["ideal"]
                .as_array()
                .map(|a| a.iter().filter_map(|v| v.as_u64()).collect())
                .unwrap_or_default();
            let cx = cs_complex(d, q, &Poly::new(coeffs), 10_000_000)?;
            let m = match mode {
                HeckeMode::Full => VerdictMode::Full,
                HeckeMode::Extremal => VerdictMode::Extremal,
            };
            let v = cs_ramanujan_verdict(&cx, m, tol)?;
            let mut r = ReportDoc::new("hecke");
            threads_param(&mut r);
            r.param("complex", json!(complex.display().to_string()));
            r.param(
                "mode",
                json!(match mode {
                    HeckeMode::Full => "full",
                    HeckeMode::Extremal => "extremal",
                }),
            );
            r.result("ramanujan", json!(if v.ok { "yes" } else { "no" }));
            r.numeric("bound", v.bound, Some(tol));
            r.result(
                "guarantee",
                json!(if v.theorem_guaranteed {
                    "theorem-guaranteed"
                } else {
                    "empirical, not theorem-guaranteed"
                }),
            );
            if let Some(rad) = v.spectral_radius {
                r.numeric("spectral_radius", rad, Some(tol));
            }
            r.ok = v.ok;
            emit(&r);
            Ok(v.ok)
        }
        Cmd::Expand {
            complex,
            metric,
            dim,
            seed,
            trials,
        } => {
            let (x, _) = load_complex(&complex)?;
            let mut r = ReportDoc::new("expand");
            threads_param(&mut r);
            r.param("complex", json!(complex.display().to_string()));
            r.param("dim", json!(dim));
            match metric {
                Metric::Cheeger => {
                    r.param("metric", json!("cheeger"));
                    if x.dim() <= 1 {
                        let c = cheeger_graph(&x.skeleton_graph())?;
                        r.numeric("h", c.h, None);
                        r.numeric("h_bar", c.h_bar, None);
                        r.result("h_witness", json!(c.h_witness.parts));
                    } else {
                        let (h, w) = cheeger_highdim(&x)?;
                        r.numeric("h", h, None);
                        r.result("h_witness", json!(w.parts));
                    }
                }
                Metric::Coboundary => {
                    r.param("metric", json!("coboundary"));
                    let (e, en, w) = coboundary_expansion(&x, dim)?;
                    r.numeric("expansion", e, None);
                    r.numeric("normalized", en, None);
                    r.result("witness", json!(w.f));
                }
                Metric::Filling => {
                    r.param("metric", json!("filling"));
                    let (nu, w) = filling(&x, dim)?;
                    r.numeric("filling", nu, None);
                    r.result("witness", json!(w.f));
                }
                Metric::Gap => {
                    r.param("metric", json!("gap"));
                    let v = validate_cheeger_inequalities(&x)?;
                    r.numeric("h", v.h, None);
                    r.numeric("lower", v.lower, Some(1e-9));
                    r.numeric("gap", v.gap, Some(1e-9));
                    r.ok = v.ok;
                }
                Metric::Mixing => {
                    r.param("metric", json!("mixing"));
                    r.seed("trials", seed);
                    let m = validate_mixing(&x, trials, seed)?;
                    r.param("trials", json!(m.trials));
                    r.numeric("k", m.k, Some(1e-9));
                    r.numeric("mu0", m.mu0, Some(1e-9));
                    r.numeric("worst_slack", m.worst_slack, Some(1e-9));
                    r.result("failures", json!(m.failures));
                    r.ok = m.ok;
                }
            }
            let ok = r.ok;
            emit(&r);
            Ok(ok)
        }
        Cmd::Overlap {
            complex,
            trials,
            seed,
        } => {
            let (x, _) = load_complex(&complex)?;
            let v = overlap_estimate(&x, trials, seed)?;
            let mut r = ReportDoc::new("overlap");
            threads_param(&mut r);
            r.param("complex", json!(complex.display().to_string()));
            r.param("trials", json!(trials));
            r.seed("embeddings", seed);
            r.numeric("overlap_upper_bound", v, Some(1e-12));
            emit(&r);
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                RlabError::InvalidInput(_) | RlabError::Io(_) | RlabError::Json(_) => 2,
                RlabError::CapExceeded(_) => 3,
                _ => 3,
            };
            ExitCode::from(code)
        }
    }
}
