//! Hardness constructions as executable generators, each with solution
//! mappings in both directions and a brute-force oracle for the source
//! problem.

pub mod acyclic;
pub mod mis;
pub mod ncl;
pub mod planar;
pub mod reversed;
pub mod sat;

pub use acyclic::{
    assignment_from_ordering_acyclic, ordering_from_assignment_acyclic, reduce_sat_acyclic,
    AcyclicMap,
};
pub use mis::{mis_oracle, reduce_mis, PartitionedGraph};
pub use ncl::{
    moves_from_flips, ncl_oracle, orientation_legal, random_constraint_graph, reduce_ncl,
    ConstraintGraph, EdgeMap, NclEdge, NclVertex, NodeKind,
};
pub use planar::{
    assignment_from_ordering_planar, ordering_from_assignment_planar, reduce_sat_planar, PlanarMap,
};
pub use reversed::{
    assignment_from_ordering_reversed, ordering_from_assignment_reversed, reduce_sat_reversed,
    ReversedMap,
};
pub use sat::{sat_oracle, CnfFormula};

use crate::gen::Rng;

/// Random exactly-3-literal formula; literals may repeat within a clause.
pub fn random_formula(rng: &mut Rng, num_vars: usize, num_clauses: usize) -> CnfFormula {
    let clauses = (0..num_clauses)
        .map(|_| {
            [0; 3].map(|_| {
                let v = 1 + rng.below(num_vars) as i32;
                if rng.chance(0.5) {
                    v
                } else {
                    -v
                }
            })
        })
        .collect();
    CnfFormula::new(num_vars, clauses).expect("literals in range")
}
