//! Polynomial-time procedures: deterministic topological sort, the k = 1
//! solver and the single-pair shortcut for general k.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::model::{Digraph, Instance, LabeledOrdering, VertexId};
use crate::par;

/// Kahn's algorithm over the union of `graphs` (all on `n` vertices), always
/// releasing the ready vertex with the smallest index. `None` if cyclic.
pub fn topo_order_multi(n: usize, graphs: &[&Digraph]) -> Option<Vec<usize>> {
    let mut indeg = vec![0usize; n];
    for g in graphs {
        for (v, d) in indeg.iter_mut().enumerate() {
            *d += g.pred(v).len();
        }
    }
    let mut ready: BinaryHeap<Reverse<usize>> =
        (0..n).filter(|&v| indeg[v] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(u)) = ready.pop() {
        order.push(u);
        for g in graphs {
            for &w in g.succ(u) {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    ready.push(Reverse(w));
                }
            }
        }
    }
    (order.len() == n).then_some(order)
}

/// Topological order of `g` by vertex index, `None` if `g` has a cycle.
pub fn topo_order(g: &Digraph) -> Option<Vec<usize>> {
    topo_order_multi(g.n(), &[g])
}

/// Topological order of `g` by vertex name.
pub fn topo_order_ids(g: &Digraph) -> Option<Vec<VertexId>> {
    topo_order(g).map(|o| o.into_iter().map(|v| g.vertices().id(v).clone()).collect())
}

pub fn is_acyclic(g: &Digraph) -> bool {
    topo_order(g).is_some()
}

/// Reverse topological order of `A_l ∪ B_l` with every label `l`, if acyclic.
fn single_pair_witness(inst: &Instance, l: usize) -> Option<LabeledOrdering> {
    let mut order = topo_order_multi(inst.n(), &[inst.a(l), inst.b(l)])?;
    order.reverse();
    let placements: Vec<(usize, usize)> = order.into_iter().map(|v| (v, l)).collect();
    Some(LabeledOrdering::from_placements(inst, &placements))
}

/// Decides a k = 1 instance: yes exactly when `A_1 ∪ B_1` is acyclic.
pub fn solve_k1(inst: &Instance) -> Result<Option<LabeledOrdering>> {
    if inst.k() != 1 {
        return Err(Error::Invalid(format!(
            "k = 1 solver called with k = {}",
            inst.k()
        )));
    }
    Ok(single_pair_witness(inst, 0))
}

/// Smallest label whose pair union is acyclic, with the uniform witness.
/// `None` does not mean the instance is unsolvable.
pub fn find_trivial_pair(inst: &Instance) -> Option<(u32, LabeledOrdering)> {
    par::find_first_range(inst.k(), |l| {
        single_pair_witness(inst, l).map(|w| (l as u32 + 1, w))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{InstanceBuilder, Side, VertexSet};
    use crate::verify::verify_direct;
    use std::sync::Arc;

    #[test]
    fn topo_basics() {
        let vs = Arc::new(VertexSet::new(["u", "v", "w"]).unwrap());
        let empty = Digraph::empty(vs.clone());
        assert_eq!(topo_order(&empty), Some(vec![0, 1, 2]));
        let path = Digraph::from_index_arcs(vs.clone(), [(0, 1), (1, 2)]).unwrap();
        assert_eq!(topo_order(&path), Some(vec![0, 1, 2]));
        let back = Digraph::from_index_arcs(vs.clone(), [(2, 0)]).unwrap();
        assert_eq!(topo_order(&back), Some(vec![1, 2, 0]));
        let cyc = Digraph::from_index_arcs(vs, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(topo_order(&cyc), None);
    }

    #[test]
    fn k1_examples() {
        let mut b = InstanceBuilder::new(1);
        let u = b.vertex("u");
        let v = b.vertex("v");
        b.arc(Side::A, 1, u, v);
        let inst = b.clone().build().unwrap();
        let sol = solve_k1(&inst).unwrap().unwrap();
        assert_eq!(
            sol,
            LabeledOrdering::from_names(&["v", "u"], &[1, 1]).unwrap()
        );
        b.arc(Side::B, 1, v, u);
        assert_eq!(solve_k1(&b.build().unwrap()).unwrap(), None);
    }

    #[test]
    fn k1_rejects_other_k() {
        let mut b = InstanceBuilder::new(2);
        b.vertex("u");
        assert!(solve_k1(&b.build().unwrap()).is_err());
    }

    #[test]
    fn trivial_pair_picks_smallest_label() {
        let mut b = InstanceBuilder::new(3);
        let u = b.vertex("u");
        let v = b.vertex("v");
        b.arc(Side::A, 1, u, v).arc(Side::B, 1, v, u);
        b.arc(Side::A, 2, u, v);
        let inst = b.build().unwrap();
        let (l, w) = find_trivial_pair(&inst).unwrap();
        assert_eq!(l, 2);
        assert!(verify_direct(&inst, &w, true).is_ok());
    }
}
