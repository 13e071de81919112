//! Upward planarity testing for biconnected outerplanar DAGs with a
//! prescribed outer edge, and the gadget reduction from Partition.

pub mod cli;
pub mod dual_tree;
pub mod embedding;
pub mod feasibility;
pub mod graph;
pub mod oracle;
pub mod outerplanar;
pub mod partition;
pub mod reduction;
pub mod upward;

pub use embedding::{PlaneEmbedding, Side};
pub use feasibility::{test_upward_any, test_upward_with_edge};
pub use graph::{parse_dag, validate, Dag, Edge, EdgeId, VertexId};
pub use upward::{check_upward, AngleLabel, AngleLabeling, UpwardEmbedding};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/angles.md")]
    mod angles {}
    #[doc = include_str!("../../../book/src/feasible-sets.md")]
    mod feasible_sets {}
    #[doc = include_str!("../../../book/src/gadget.md")]
    mod gadget {}
    #[doc = include_str!("../../../book/src/partition.md")]
    mod partition {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
