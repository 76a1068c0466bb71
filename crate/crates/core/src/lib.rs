//! Queue layout extension: given a graph G, a subgraph H and a queue layout
//! of H on `ell` pages, decide whether the layout extends to G and build a
//! witness.

pub mod branch;
pub mod error;
pub mod fixed_order;
pub mod gen;
pub mod graph;
pub mod instance;
pub mod io;
pub mod layout;
pub mod oracle;
pub mod pageset;
mod parallel;
pub mod solver;
pub mod twosat;
pub mod two_vertex;

pub use branch::{
    enumerate_placements, placement_count, prune_flexible_edges, solve_edges_only, solve_xp,
    BranchStats, Placement, PruneMode, PruneOutcome, SearchResult, SolveOptions,
};
pub use error::{Error, Result};
pub use graph::{Edge, EdgeId, Graph, VertexId};
pub use instance::{admissible_pages, AdmissiblePageTable, Instance, InstanceBuilder};
pub use layout::{
    extends, is_nesting, sees, validate_layout, validate_layout_capped, Page, PageAssignment,
    QueueLayout, SpineOrder, ValidationReport,
};
pub use pageset::PageSet;
pub use solver::{solve, Algorithm, SolveReport, SolverConfig, Verdict};
pub use twosat::{
    decode_spine, encode_instance, solve_2sat, solve_fpt_kappa_ell, Encoding, EndpointOrder, Lit,
    OrderVariableMap, TwoSatFormula,
};
