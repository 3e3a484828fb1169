//! Solution checking: the direct sink/source definition and the residual-graph
//! characterization.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::model::{Digraph, Instance, LabeledOrdering};
use crate::poly::is_acyclic;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ViolationKind {
    MissingVertex,
    DuplicateVertex,
    LabelOutOfRange,
    SinkViolation,
    SourceViolation,
}

impl ViolationKind {
    pub fn is_structural(self) -> bool {
        !matches!(
            self,
            ViolationKind::SinkViolation | ViolationKind::SourceViolation
        )
    }
}

/// First defect found in a labeled ordering.
///
/// `MissingVertex` covers both names absent from the instance (with a
/// position) and instance vertices absent from a full ordering (without one).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub vertex: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_arc: Option<[String; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub position: Option<usize>,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?} at `{}`", self.kind, self.vertex)?;
        if let Some(p) = self.position {
            write!(f, " (position {p})")?;
        }
        if let Some([u, v]) = &self.witness_arc {
            write!(f, " via {u}->{v}")?;
        }
        Ok(())
    }
}

fn structural(kind: ViolationKind, vertex: &str, position: Option<usize>) -> Violation {
    Violation {
        kind,
        vertex: vertex.to_string(),
        witness_arc: None,
        position,
    }
}

/// Resolves the ordering to `(vertex, 0-based label)` pairs, reporting the
/// first structural defect.
fn resolve(
    inst: &Instance,
    sol: &LabeledOrdering,
    require_full: bool,
) -> Result<Vec<(usize, usize)>, Violation> {
    let mut seen = vec![false; inst.n()];
    let mut out = Vec::with_capacity(sol.len());
    for (i, (id, label)) in sol.iter().enumerate() {
        let Some(v) = inst.vertices().index_of(id.as_str()) else {
            return Err(structural(
                ViolationKind::MissingVertex,
                id.as_str(),
                Some(i),
            ));
        };
        if seen[v] {
            return Err(structural(
                ViolationKind::DuplicateVertex,
                id.as_str(),
                Some(i),
            ));
        }
        seen[v] = true;
        if label == 0 || label as usize > inst.k() {
            return Err(structural(
                ViolationKind::LabelOutOfRange,
                id.as_str(),
                Some(i),
            ));
        }
        out.push((v, label as usize - 1));
    }
    if require_full {
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(structural(
                ViolationKind::MissingVertex,
                inst.id(v).as_str(),
                None,
            ));
        }
    }
    Ok(out)
}

/// Checks `sol` against the sink/source definition. Without `require_full`
/// the constraints only range over vertices that appear in `sol`.
pub fn verify_direct(
    inst: &Instance,
    sol: &LabeledOrdering,
    require_full: bool,
) -> Result<(), Violation> {
    let placed = resolve(inst, sol, require_full)?;
    let mut pos = vec![usize::MAX; inst.n()];
    for (i, &(v, _)) in placed.iter().enumerate() {
        pos[v] = i;
    }
    let name = |v: usize| inst.id(v).as_str();
    for (i, &(v, l)) in placed.iter().enumerate() {
        let later = inst
            .a(l)
            .succ(v)
            .iter()
            .copied()
            .filter(|&w| pos[w] != usize::MAX && pos[w] > i)
            .min_by_key(|&w| name(w));
        if let Some(w) = later {
            return Err(Violation {
                kind: ViolationKind::SinkViolation,
                vertex: name(v).to_string(),
                witness_arc: Some([name(v).to_string(), name(w).to_string()]),
                position: Some(i),
            });
        }
        let earlier = inst
            .b(l)
            .pred(v)
            .iter()
            .copied()
            .filter(|&u| pos[u] < i)
            .min_by_key(|&u| name(u));
        if let Some(u) = earlier {
            return Err(Violation {
                kind: ViolationKind::SourceViolation,
                vertex: name(v).to_string(),
                witness_arc: Some([name(u).to_string(), name(v).to_string()]),
                position: Some(i),
            });
        }
    }
    Ok(())
}

/// Labels per vertex for a full ordering, or an input error.
fn full_labels(inst: &Instance, sol: &LabeledOrdering) -> Result<Vec<(usize, usize)>> {
    resolve(inst, sol, true).map_err(|v| invalid(format!("not a full labeled ordering: {v}")))
}

fn residual_arcs(inst: &Instance, placed: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut label = vec![0; inst.n()];
    for &(v, l) in placed {
        label[v] = l;
    }
    let mut arcs = Vec::new();
    for v in 0..inst.n() {
        let l = label[v];
        arcs.extend(inst.a(l).succ(v).iter().map(|&w| (v, w)));
        arcs.extend(inst.b(l).pred(v).iter().map(|&u| (u, v)));
    }
    arcs
}

/// Arc `s_i -> s_j` whenever it lies in `A` of `s_i`'s label or in `B` of
/// `s_j`'s label. Depends only on the labeling.
pub fn residual_graph(inst: &Instance, sol: &LabeledOrdering) -> Result<Digraph> {
    let placed = full_labels(inst, sol)?;
    Digraph::from_index_arcs(inst.vertices().clone(), residual_arcs(inst, &placed))
}

/// Residual-graph test for a full ordering.
///
/// Acyclicity of the residual graph alone says the labeling admits *some*
/// valid order. To judge this particular order the check also adds the arcs
/// `s_{i+1} -> s_i`: every residual arc must point backwards, which holds
/// exactly when the combined graph is acyclic.
pub fn verify_residual(inst: &Instance, sol: &LabeledOrdering) -> Result<bool> {
    let placed = full_labels(inst, sol)?;
    let mut arcs = residual_arcs(inst, &placed);
    arcs.extend(placed.windows(2).map(|w| (w[1].0, w[0].0)));
    let g = Digraph::from_index_arcs(inst.vertices().clone(), arcs)?;
    Ok(is_acyclic(&g))
}

/// Whether a labeling (by vertex index, 0-based labels) admits any valid order.
pub fn labeling_feasible(inst: &Instance, labels: &[usize]) -> bool {
    let placed: Vec<(usize, usize)> = labels.iter().copied().enumerate().collect();
    let g = Digraph::from_index_arcs(inst.vertices().clone(), residual_arcs(inst, &placed))
        .expect("residual arcs are in range");
    is_acyclic(&g)
}
