//! Solvers, verifiers and reductions for k-compatible orderings, set
//! arrangements and single-move robotic arm planning.

pub mod arrangement;
pub mod error;
pub mod exact;
pub mod gen;
pub mod model;
pub mod modular;
pub mod par;
pub mod poly;
pub mod ramp;
pub mod reductions;
pub mod treewidth;
pub mod verify;

pub use arrangement::{
    is_legal_move, solve_bfs, two_angle_mmramp_to_arrangement, verify_sequence,
    ArrangementInstance, Move, MoveSequence, Op,
};
pub use error::{Error, Result};
pub use exact::{
    enumerate_solutions, propagate, solve_bounded, solve_bounded_with, solve_exact,
    solve_exact_with, ExactOptions, PropagationFacts, SolveOutcome,
};
pub use model::{
    induced_instance, labeled_union, reverse_graph, union_graph, Digraph, GraphTag, Instance,
    InstanceBuilder, LabeledDigraph, LabeledOrdering, Side, VertexId, VertexSet,
};
pub use poly::{find_trivial_pair, solve_k1, topo_order};
pub use verify::{residual_graph, verify_direct, verify_residual, Violation, ViolationKind};
