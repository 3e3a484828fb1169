//! 3-SAT to 2-compatible ordering where each of the four graphs is acyclic;
//! the clause triangles and negative digons are split across labels with
//! dummy vertices and a global vertex.

use crate::error::{Error, Result};
use crate::model::{Instance, InstanceBuilder, LabeledOrdering, Side};
use crate::poly::is_acyclic;
use crate::reductions::planar::{
    add_core_vertices, assignment_from_labels, clause_name, labels_by_vertex, planar_placements,
    PlanarMap,
};
use crate::reductions::sat::CnfFormula;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcyclicMap {
    pub core: PlanarMap,
    /// One dummy per clause.
    pub dummies: Vec<usize>,
    /// A dummy per negative literal position.
    pub negation_dummies: Vec<[Option<usize>; 3]>,
    pub global: usize,
}

pub fn reduce_sat_acyclic(f: &CnfFormula) -> Result<(Instance, AcyclicMap)> {
    f.check()?;
    let mut b = InstanceBuilder::new(2);
    let core = add_core_vertices(&mut b, f);
    let dummies: Vec<usize> = (0..f.clauses.len())
        .map(|i| b.vertex(format!("d{}", i + 1)))
        .collect();
    let negation_dummies: Vec<[Option<usize>; 3]> = f
        .clauses
        .iter()
        .enumerate()
        .map(|(i, c)| {
            [0, 1, 2].map(|a| (c[a] < 0).then(|| b.vertex(format!("d{}", clause_name(i, a)))))
        })
        .collect();
    let g = b.vertex("g");
    for (i, clause) in f.clauses.iter().enumerate() {
        let [c1, c2, c3] = core.clauses[i];
        let d = dummies[i];
        b.arc(Side::A, 2, c1, c2)
            .arc(Side::A, 2, c2, c3)
            .arc(Side::A, 2, c3, d)
            .arc(Side::A, 1, d, c1)
            .arc(Side::A, 2, d, g)
            .arc(Side::B, 2, g, d);
        for a in 0..3 {
            let c = core.clauses[i][a];
            let x = core.vars[CnfFormula::var(clause[a])];
            match negation_dummies[i][a] {
                None => {
                    b.arc(Side::A, 1, c, x).arc(Side::A, 2, x, c);
                }
                Some(da) => {
                    b.arc(Side::B, 1, da, c)
                        .arc(Side::B, 1, c, x)
                        .arc(Side::B, 2, x, da)
                        .arc(Side::A, 1, da, g)
                        .arc(Side::B, 1, g, da);
                }
            }
        }
    }
    let inst = b.build()?;
    let expect = 4 * f.clauses.len() + f.num_vars + f.negative_literals() + 1;
    if inst.n() != expect {
        return Err(Error::Internal(format!(
            "{} vertices, expected {expect}",
            inst.n()
        )));
    }
    if let Some(g) = inst.all_graphs().position(|g| !is_acyclic(g)) {
        return Err(Error::Internal(format!(
            "graph {g} of the reduction has a cycle"
        )));
    }
    let map = AcyclicMap {
        core,
        dummies,
        negation_dummies,
        global: g,
    };
    Ok((inst, map))
}

/// The triangle-construction witness with the dummies spliced in: each
/// clause dummy right after the clause's first vertex, each negation dummy
/// right after its clause vertex or right before its variable, whichever
/// comes first, and the global vertex last.
pub fn ordering_from_assignment_acyclic(
    f: &CnfFormula,
    assignment: &[bool],
    inst: &Instance,
    map: &AcyclicMap,
) -> Result<LabeledOrdering> {
    let base = planar_placements(f, assignment, &map.core)?;
    let n = inst.n();
    let mut pos = vec![usize::MAX; n];
    for (i, &(v, _)) in base.iter().enumerate() {
        pos[v] = i;
    }
    let mut before: Vec<Vec<(usize, usize)>> = vec![Vec::new(); base.len()];
    let mut after: Vec<Vec<(usize, usize)>> = vec![Vec::new(); base.len()];
    for (i, clause) in f.clauses.iter().enumerate() {
        after[pos[map.core.clauses[i][0]]].push((map.dummies[i], 0));
        for a in 0..3 {
            if let Some(da) = map.negation_dummies[i][a] {
                let c = pos[map.core.clauses[i][a]];
                let x = pos[map.core.vars[CnfFormula::var(clause[a])]];
                if c < x {
                    after[c].push((da, 1));
                } else {
                    before[x].push((da, 1));
                }
            }
        }
    }
    let mut out = Vec::with_capacity(n);
    for (i, &p) in base.iter().enumerate() {
        out.extend(before[i].iter().copied());
        out.push(p);
        out.extend(after[i].iter().copied());
    }
    out.push((map.global, 0));
    Ok(LabeledOrdering::from_placements(inst, &out))
}

pub fn assignment_from_ordering_acyclic(
    f: &CnfFormula,
    inst: &Instance,
    sol: &LabeledOrdering,
    map: &AcyclicMap,
) -> Result<Vec<bool>> {
    let labels = labels_by_vertex(inst, sol)?;
    assignment_from_labels(f, &map.core.clauses, &labels)
}
