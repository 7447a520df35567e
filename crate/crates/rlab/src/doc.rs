//! JSON documents for graphs, complexes, and reports. Round-tripping a
//! document through serde is the identity, every document carries a schema
//! version, and map keys are ordered so identical runs produce byte-identical
//! files.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::complex::SimplicialComplex;
use crate::error::{RlabError, Result};
use crate::graph::Graph;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
pub struct GraphMeta {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bipartite: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub schema_version: u32,
    pub n: usize,
    /// 0-indexed sorted pairs (u, v) with u < v.
    pub edges: Vec<(usize, usize)>,
    #[serde(default)]
    pub metadata: GraphMeta,
}

impl GraphDoc {
    pub fn from_graph(g: &Graph, metadata: GraphMeta) -> GraphDoc {
        GraphDoc {
            schema_version: SCHEMA_VERSION,
            n: g.n,
            edges: g.edges(),
            metadata,
        }
    }

    pub fn to_graph(&self) -> Result<Graph> {
        for &(u, v) in &self.edges {
            if u >= self.n || v >= self.n {
                return Err(RlabError::InvalidInput(format!(
                    "edge ({u},{v}) out of range for n={}",
                    self.n
                )));
            }
        }
        Ok(Graph::from_edges(self.n, &self.edges))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexDoc {
    pub schema_version: u32,
    pub n: usize,
    /// faces[i] lists the i-dimensional faces, sorted lexicographically.
    pub faces: Vec<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertex_colors: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edge_colors: Option<Vec<usize>>,
    /// How the complex was built, as a small keyed object; polynomials appear
    /// as little-endian coefficient arrays.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub construction: Option<Value>,
}

impl ComplexDoc {
    pub fn from_complex(x: &SimplicialComplex, construction: Option<Value>) -> ComplexDoc {
        ComplexDoc {
            schema_version: SCHEMA_VERSION,
            n: x.n,
            faces: x.faces.clone(),
            vertex_colors: None,
            edge_colors: None,
            construction,
        }
    }

    pub fn to_complex(&self) -> Result<SimplicialComplex> {
        let maximal: Vec<Vec<usize>> = self.faces.iter().flatten().cloned().collect();
        let x = SimplicialComplex::from_faces(self.n, &maximal)?;
        if x.faces != self.faces {
            return Err(RlabError::InvalidInput(
                "face list is not downward closed or not sorted".into(),
            ));
        }
        Ok(x)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub schema_version: u32,
    pub operation: String,
    pub parameters: BTreeMap<String, Value>,
    pub results: BTreeMap<String, Value>,
    #[serde(default)]
    pub seeds: BTreeMap<String, u64>,
    pub ok: bool,
}

impl ReportDoc {
    pub fn new(operation: &str) -> ReportDoc {
        ReportDoc {
            schema_version: SCHEMA_VERSION,
            operation: operation.into(),
            parameters: BTreeMap::new(),
            results: BTreeMap::new(),
            seeds: BTreeMap::new(),
            ok: true,
        }
    }

    pub fn param(&mut self, key: &str, v: Value) -> &mut Self {
        self.parameters.insert(key.into(), v);
        self
    }

    /// Record a numeric result together with the tolerance it was computed
    /// under; None means the value is exact.
    pub fn numeric(&mut self, key: &str, value: f64, tol: Option<f64>) -> &mut Self {
        let t = match tol {
            Some(t) => json!(t),
            None => json!("exact"),
        };
        self.results.insert(key.into(), json!({"value": value, "tol": t}));
        self
    }

    pub fn result(&mut self, key: &str, v: Value) -> &mut Self {
        self.results.insert(key.into(), v);
        self
    }

    pub fn seed(&mut self, key: &str, s: u64) -> &mut Self {
        self.seeds.insert(key.into(), s);
        self
    }

    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

pub fn write_json<T: Serialize>(path: &Path, doc: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(doc)?;
    s.push('\n');
    std::fs::write(path, s)?;
    Ok(())
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let s = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&s)?)
}

/// Parse a polynomial given as comma-separated little-endian coefficients,
/// e.g. "1,1,1" for y^2 + y + 1.
pub fn parse_poly_coeffs(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| RlabError::InvalidInput(format!("bad coefficient {t:?}")))
        })
        .collect()
}
