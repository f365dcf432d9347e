//! Gadget constructions: the 3-dimensional-matching source graphs, the
//! single-origin time-bounded broadcast instances built from them, the
//! broadcast-graph instances built from those, and the broadcast-center-size
//! instances built from CNF formulas — together with the constructive
//! schemes and targeted lower bounds that certify them at desk scale.

mod bc_size;
mod broadcast_graph;
mod three_dm;

pub use bc_size::{
    bcsize_center_schemes, bcsize_from_usat, bcsize_origin_scheme, case4_lower_bound,
    expected_bc_size, parse_dimacs, CnfFormula, Lit,
};
pub use broadcast_graph::{bg_from_stbt, bg_yes_scheme};
pub use three_dm::{graph_of_3dm, stbt_from_3dm, stbt_yes_scheme, ThreeDMInstance};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexLabel};
use std::collections::BTreeMap;

/// A built gadget graph plus everything needed to work with it afterwards:
/// role-tagged special vertices, the construction's expected parameters, and
/// warnings for parameter points outside the range where the target time
/// matches the information-theoretic floor.
#[derive(Debug, Clone)]
pub struct ReductionArtifact {
    pub graph: Graph,
    pub marks: BTreeMap<String, VertexLabel>,
    pub params: BTreeMap<String, i64>,
    pub warnings: Vec<String>,
}

impl ReductionArtifact {
    pub fn new(graph: Graph) -> Self {
        ReductionArtifact {
            graph,
            marks: BTreeMap::new(),
            params: BTreeMap::new(),
            warnings: Vec::new(),
        }
    }

    pub fn mark(&self, role: &str) -> Result<&VertexLabel> {
        self.marks
            .get(role)
            .ok_or_else(|| Error::InvalidArgument(format!("artifact has no mark `{role}`")))
    }

    pub fn param(&self, name: &str) -> Result<i64> {
        self.params
            .get(name)
            .copied()
            .ok_or_else(|| Error::InvalidArgument(format!("artifact has no param `{name}`")))
    }

    pub(crate) fn set_mark(&mut self, role: impl Into<String>, v: VertexLabel) {
        self.marks.insert(role.into(), v);
    }

    pub(crate) fn set_param(&mut self, name: impl Into<String>, value: i64) {
        self.params.insert(name.into(), value);
    }
}
