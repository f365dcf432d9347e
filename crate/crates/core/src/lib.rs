//! Toolkit for broadcasting problems on graphs: the graph families used in
//! broadcast constructions (binomial trees, pruned binomial trees, Knödel
//! graphs), the round-based broadcast-scheme model with a strict validator,
//! exact broadcast-time and broadcast-center solvers with certified
//! witnesses, brute-force oracles, and the gadget builders that turn
//! matching/SAT instances into broadcast instances.

pub mod catalog;
pub mod error;
pub mod families;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod reductions;
pub mod schemes;
pub mod solver;

pub use error::{Error, Result};
pub use graph::{vl, Graph, VertexLabel};
pub use schemes::{BroadcastScheme, BroadcastTree, Call};
pub use solver::{BroadcastCenter, SolveResult, SolveStatus, SolverConfig};
