//! 3-SAT to 3-compatible ordering whose union becomes acyclic once the `B`
//! graphs are reversed. Clause vertices sit between two separators; the
//! clause's label picks the literal that satisfies it.

use crate::error::{Error, Result};
use crate::model::{reverse_graph, Instance, InstanceBuilder, LabeledOrdering, Side};
use crate::poly::topo_order_multi;
use crate::reductions::planar::{chosen_literals, labels_by_vertex};
use crate::reductions::sat::CnfFormula;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReversedMap {
    pub vars: Vec<usize>,
    pub clauses: Vec<usize>,
    /// Separator placed before the clauses.
    pub t1: usize,
    /// Separator placed after the clauses.
    pub t2: usize,
}

pub fn reduce_sat_reversed(f: &CnfFormula) -> Result<(Instance, ReversedMap)> {
    f.check()?;
    let mut b = InstanceBuilder::new(3);
    let vars: Vec<usize> = (0..f.num_vars)
        .map(|j| b.vertex(format!("x{}", j + 1)))
        .collect();
    let clauses: Vec<usize> = (0..f.clauses.len())
        .map(|i| b.vertex(format!("C{}", i + 1)))
        .collect();
    let (t1, t2) = (b.vertex("t1"), b.vertex("t2"));
    for l in 1..=3 {
        b.arc(Side::A, l, t2, t1);
    }
    for (i, clause) in f.clauses.iter().enumerate() {
        let c = clauses[i];
        for l in 1..=3 {
            b.arc(Side::A, l, c, t1).arc(Side::B, l, t2, c);
        }
        for (a, &lit) in clause.iter().enumerate() {
            let x = vars[CnfFormula::var(lit)];
            if lit > 0 {
                b.arc(Side::A, a + 1, c, x);
            } else {
                b.arc(Side::B, a + 1, x, c);
            }
        }
    }
    for &x in &vars {
        b.arc(Side::B, 1, t1, x)
            .arc(Side::A, 2, x, t1)
            .arc(Side::B, 2, t1, x)
            .arc(Side::A, 3, x, t2);
    }
    let inst = b.build()?;
    let reversed: Vec<_> = inst.pairs().iter().map(|p| reverse_graph(&p.b)).collect();
    let mut graphs: Vec<_> = inst.pairs().iter().map(|p| &p.a).collect();
    graphs.extend(reversed.iter());
    if topo_order_multi(inst.n(), &graphs).is_none() {
        return Err(Error::Internal("A with reversed B has a cycle".into()));
    }
    Ok((
        inst,
        ReversedMap {
            vars,
            clauses,
            t1,
            t2,
        },
    ))
}

/// True variables, `t1`, clauses labeled by their first satisfied literal,
/// `t2`, false variables with label 3.
pub fn ordering_from_assignment_reversed(
    f: &CnfFormula,
    assignment: &[bool],
    inst: &Instance,
    map: &ReversedMap,
) -> Result<LabeledOrdering> {
    let chosen = chosen_literals(f, assignment)?;
    let mut out = Vec::with_capacity(inst.n());
    out.extend(
        (0..f.num_vars)
            .filter(|&j| assignment[j])
            .map(|j| (map.vars[j], 0)),
    );
    out.push((map.t1, 0));
    out.extend(chosen.iter().enumerate().map(|(i, &a)| (map.clauses[i], a)));
    out.push((map.t2, 0));
    out.extend(
        (0..f.num_vars)
            .filter(|&j| !assignment[j])
            .map(|j| (map.vars[j], 2)),
    );
    Ok(LabeledOrdering::from_placements(inst, &out))
}

/// Each clause's label names a literal; that literal is made true. Unforced
/// variables are false.
pub fn assignment_from_ordering_reversed(
    f: &CnfFormula,
    inst: &Instance,
    sol: &LabeledOrdering,
    map: &ReversedMap,
) -> Result<Vec<bool>> {
    let labels = labels_by_vertex(inst, sol)?;
    let mut value: Vec<Option<bool>> = vec![None; f.num_vars];
    for (i, clause) in f.clauses.iter().enumerate() {
        let l = labels[map.clauses[i]].expect("full ordering") as usize;
        let lit = clause[l - 1];
        let j = CnfFormula::var(lit);
        if value[j].is_some_and(|v| v != (lit > 0)) {
            return Err(Error::Internal(format!("x{} forced both ways", j + 1)));
        }
        value[j] = Some(lit > 0);
    }
    Ok(value.into_iter().map(|v| v.unwrap_or(false)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::verify_direct;

    #[test]
    fn empty_formula_orders_separators() {
        let f = CnfFormula::new(0, vec![]).unwrap();
        let (inst, map) = reduce_sat_reversed(&f).unwrap();
        assert_eq!(inst.n(), 2);
        let sol = ordering_from_assignment_reversed(&f, &[], &inst, &map).unwrap();
        assert!(verify_direct(&inst, &sol, true).is_ok());
        let wrong = LabeledOrdering::from_names(&["t2", "t1"], &[1, 1]).unwrap();
        assert!(verify_direct(&inst, &wrong, true).is_err());
    }

    #[test]
    fn separated_witness() {
        let f = CnfFormula::new(4, vec![[1, 2, 3], [2, 4, -3]]).unwrap();
        let (inst, map) = reduce_sat_reversed(&f).unwrap();
        assert_eq!(inst.n(), 8);
        let a = [true, false, false, true];
        let sol = ordering_from_assignment_reversed(&f, &a, &inst, &map).unwrap();
        assert!(verify_direct(&inst, &sol, true).is_ok());
        assert!(f.satisfied_by(&assignment_from_ordering_reversed(&f, &inst, &sol, &map).unwrap()));
    }
}
