//! 3-SAT to 2-compatible ordering with clause triangles in `A_2` and
//! negative-literal digons in `B_1`.

use crate::error::{invalid, Error, Result};
use crate::model::{Instance, InstanceBuilder, LabeledOrdering, Side};
use crate::reductions::sat::CnfFormula;
use crate::verify::verify_direct;

/// Vertex indices of the reduced instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanarMap {
    pub vars: Vec<usize>,
    /// Clause vertices by literal position.
    pub clauses: Vec<[usize; 3]>,
}

pub(crate) fn var_name(j: usize) -> String {
    format!("x{}", j + 1)
}

pub(crate) fn clause_name(i: usize, a: usize) -> String {
    format!("c{}_{}", i + 1, a + 1)
}

pub(crate) fn add_core_vertices(b: &mut InstanceBuilder, f: &CnfFormula) -> PlanarMap {
    let vars = (0..f.num_vars).map(|j| b.vertex(var_name(j))).collect();
    let clauses = (0..f.clauses.len())
        .map(|i| [0, 1, 2].map(|a| b.vertex(clause_name(i, a))))
        .collect();
    PlanarMap { vars, clauses }
}

pub fn reduce_sat_planar(f: &CnfFormula) -> Result<(Instance, PlanarMap)> {
    f.check()?;
    let mut b = InstanceBuilder::new(2);
    let map = add_core_vertices(&mut b, f);
    for (i, clause) in f.clauses.iter().enumerate() {
        let c = map.clauses[i];
        for a in 0..3 {
            b.arc(Side::A, 2, c[a], c[(a + 1) % 3]);
            let x = map.vars[CnfFormula::var(clause[a])];
            if clause[a] > 0 {
                b.arc(Side::A, 1, c[a], x).arc(Side::A, 2, x, c[a]);
            } else {
                b.arc(Side::B, 1, c[a], x).arc(Side::B, 1, x, c[a]);
            }
        }
    }
    let inst = b.build()?;
    check_degrees(f, &inst, &map)?;
    Ok((inst, map))
}

fn check_degrees(f: &CnfFormula, inst: &Instance, map: &PlanarMap) -> Result<()> {
    let simple = crate::model::undirected_union(inst);
    for c in map.clauses.iter().flatten() {
        if simple.undirected_degree(*c) > 3 {
            return Err(Error::Internal(format!(
                "clause vertex {} has degree above 3",
                inst.id(*c)
            )));
        }
    }
    if f.is_4_bounded() {
        let mut deg = vec![0usize; inst.n()];
        for g in inst.all_graphs() {
            for (u, v) in g.arcs() {
                deg[u] += 1;
                deg[v] += 1;
            }
        }
        if let Some(v) = (0..inst.n()).find(|&v| deg[v] > 8) {
            return Err(Error::Internal(format!(
                "vertex {} has degree above 8",
                inst.id(v)
            )));
        }
    }
    Ok(())
}

/// First satisfied literal position per clause.
pub(crate) fn chosen_literals(f: &CnfFormula, assignment: &[bool]) -> Result<Vec<usize>> {
    if !f.satisfied_by(assignment) {
        return Err(invalid("assignment does not satisfy the formula"));
    }
    Ok(f.clauses
        .iter()
        .map(|c| {
            (0..3)
                .find(|&a| CnfFormula::literal_true(c[a], assignment))
                .expect("clause satisfied")
        })
        .collect())
}

/// Placements (vertex, 0-based label): true variables, one satisfied literal
/// per clause, the other two clause vertices, false variables.
pub(crate) fn planar_placements(
    f: &CnfFormula,
    assignment: &[bool],
    map: &PlanarMap,
) -> Result<Vec<(usize, usize)>> {
    let chosen = chosen_literals(f, assignment)?;
    let mut out = Vec::new();
    for (j, &val) in assignment.iter().enumerate() {
        if val {
            out.push((map.vars[j], 0));
        }
    }
    for (i, &a) in chosen.iter().enumerate() {
        out.push((map.clauses[i][a], 0));
    }
    for (i, &a) in chosen.iter().enumerate() {
        // the remaining two share one triangle arc p -> q; its head goes first
        let (p, q) = ((a + 1) % 3, (a + 2) % 3);
        out.push((map.clauses[i][q], 1));
        out.push((map.clauses[i][p], 1));
    }
    for (j, &val) in assignment.iter().enumerate() {
        if !val {
            out.push((map.vars[j], 1));
        }
    }
    Ok(out)
}

pub fn ordering_from_assignment_planar(
    f: &CnfFormula,
    assignment: &[bool],
    inst: &Instance,
    map: &PlanarMap,
) -> Result<LabeledOrdering> {
    Ok(LabeledOrdering::from_placements(
        inst,
        &planar_placements(f, assignment, map)?,
    ))
}

/// Variables of label-1 clause vertices follow their literal; all others are
/// false.
pub(crate) fn assignment_from_labels(
    f: &CnfFormula,
    clauses: &[[usize; 3]],
    label_of: &[Option<u32>],
) -> Result<Vec<bool>> {
    let mut value: Vec<Option<bool>> = vec![None; f.num_vars];
    for (i, clause) in f.clauses.iter().enumerate() {
        for a in 0..3 {
            if label_of[clauses[i][a]] == Some(1) {
                let j = CnfFormula::var(clause[a]);
                let want = clause[a] > 0;
                if value[j].is_some_and(|v| v != want) {
                    return Err(Error::Internal(format!("x{} forced both ways", j + 1)));
                }
                value[j] = Some(want);
            }
        }
    }
    Ok(value.into_iter().map(|v| v.unwrap_or(false)).collect())
}

pub(crate) fn labels_by_vertex(inst: &Instance, sol: &LabeledOrdering) -> Result<Vec<Option<u32>>> {
    verify_direct(inst, sol, true).map_err(|v| invalid(format!("not a solution: {v}")))?;
    let mut out = vec![None; inst.n()];
    for (v, l) in sol.to_placements(inst)? {
        out[v] = Some(l as u32 + 1);
    }
    Ok(out)
}

pub fn assignment_from_ordering_planar(
    f: &CnfFormula,
    inst: &Instance,
    sol: &LabeledOrdering,
    map: &PlanarMap,
) -> Result<Vec<bool>> {
    let labels = labels_by_vertex(inst, sol)?;
    assignment_from_labels(f, &map.clauses, &labels)
}
