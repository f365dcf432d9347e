//! File formats: the graph document (vertices, edges, marks) shared by every
//! CLI command, the scheme document, 3DM instance documents, the reduction
//! params sidecar, and DOT export.

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexLabel};
use crate::reductions::{ReductionArtifact, ThreeDMInstance};
use crate::schemes::BroadcastScheme;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Graph document: labels in `namespace:local` string form, each edge listed
/// once, marks mapping role names to labels.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub marks: BTreeMap<String, String>,
}

impl GraphDoc {
    pub fn from_graph(g: &Graph, marks: &BTreeMap<String, VertexLabel>) -> GraphDoc {
        GraphDoc {
            vertices: g.vertices().map(|v| v.to_string()).collect(),
            edges: g
                .edges()
                .map(|(a, b)| [a.to_string(), b.to_string()])
                .collect(),
            marks: marks
                .iter()
                .map(|(k, v)| (k.clone(), v.to_string()))
                .collect(),
        }
    }

    pub fn to_graph(&self) -> Result<(Graph, BTreeMap<String, VertexLabel>)> {
        let mut g = Graph::new();
        for v in &self.vertices {
            let label = VertexLabel::parse(v)?;
            if !g.add_vertex(label) {
                return Err(Error::Parse(format!("duplicate vertex `{v}`")));
            }
        }
        for [a, b] in &self.edges {
            let (a, b) = (VertexLabel::parse(a)?, VertexLabel::parse(b)?);
            if !g.add_edge(&a, &b)? {
                return Err(Error::Parse(format!("duplicate edge `{a}` -- `{b}`")));
            }
        }
        let mut marks = BTreeMap::new();
        for (role, v) in &self.marks {
            let label = VertexLabel::parse(v)?;
            if !g.has_vertex(&label) {
                return Err(Error::Parse(format!(
                    "mark `{role}` points at unknown vertex `{v}`"
                )));
            }
            marks.insert(role.clone(), label);
        }
        g.validate()?;
        Ok((g, marks))
    }
}

/// Sidecar document for reduction artifacts: parameters plus any range
/// warnings; the graph itself goes in a GraphDoc.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsDoc {
    pub params: BTreeMap<String, i64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl ParamsDoc {
    pub fn from_artifact(art: &ReductionArtifact) -> ParamsDoc {
        ParamsDoc {
            params: art.params.clone(),
            warnings: art.warnings.clone(),
        }
    }
}

/// 3DM instance document: element names and triples of names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreeDmDoc {
    pub k: usize,
    pub x: Vec<String>,
    pub y: Vec<String>,
    pub z: Vec<String>,
    pub w: Vec<[String; 3]>,
}

impl ThreeDmDoc {
    pub fn from_instance(inst: &ThreeDMInstance) -> ThreeDmDoc {
        ThreeDmDoc {
            k: inst.k(),
            x: inst.x.clone(),
            y: inst.y.clone(),
            z: inst.z.clone(),
            w: inst
                .triples
                .iter()
                .map(|[a, b, c]| {
                    [
                        inst.x[*a].clone(),
                        inst.y[*b].clone(),
                        inst.z[*c].clone(),
                    ]
                })
                .collect(),
        }
    }

    pub fn to_instance(&self) -> Result<ThreeDMInstance> {
        let lookup = |set: &[String], name: &str| {
            set.iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::InvalidInstance(format!("unknown element `{name}`")))
        };
        let mut triples = Vec::with_capacity(self.w.len());
        for [a, b, c] in &self.w {
            triples.push([
                lookup(&self.x, a)?,
                lookup(&self.y, b)?,
                lookup(&self.z, c)?,
            ]);
        }
        let inst = ThreeDMInstance::new(
            self.x.clone(),
            self.y.clone(),
            self.z.clone(),
            triples,
        )?;
        if inst.k() != self.k {
            return Err(Error::InvalidInstance(format!(
                "declared k = {} but element sets have size {}",
                self.k,
                inst.k()
            )));
        }
        Ok(inst)
    }
}

pub fn graph_to_json(g: &Graph, marks: &BTreeMap<String, VertexLabel>) -> String {
    serde_json::to_string_pretty(&GraphDoc::from_graph(g, marks)).expect("serializable")
}

pub fn graph_from_json(text: &str) -> Result<(Graph, BTreeMap<String, VertexLabel>)> {
    let doc: GraphDoc =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("graph document: {e}")))?;
    doc.to_graph()
}

pub fn scheme_to_json(s: &BroadcastScheme) -> String {
    serde_json::to_string_pretty(s).expect("serializable")
}

pub fn scheme_from_json(text: &str) -> Result<BroadcastScheme> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("scheme document: {e}")))
}

/// DOT export: lossless for vertices and edges; marks are rendered as node
/// colors (lossy).
pub fn to_dot(g: &Graph, marks: &BTreeMap<String, VertexLabel>) -> String {
    const PALETTE: [&str; 6] = [
        "lightblue",
        "salmon",
        "palegreen",
        "gold",
        "orchid",
        "sandybrown",
    ];
    let mut colored: BTreeMap<&VertexLabel, &str> = BTreeMap::new();
    for (i, v) in marks.values().enumerate() {
        colored.entry(v).or_insert(PALETTE[i % PALETTE.len()]);
    }
    let mut out = String::from("graph {\n");
    for v in g.vertices() {
        if let Some(color) = colored.get(v) {
            out.push_str(&format!(
                "  \"{v}\" [style=filled, fillcolor={color}];\n"
            ));
        } else {
            out.push_str(&format!("  \"{v}\";\n"));
        }
    }
    for (a, b) in g.edges() {
        out.push_str(&format!("  \"{a}\" -- \"{b}\";\n"));
    }
    out.push_str("}\n");
    out
}
