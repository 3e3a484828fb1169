//! Labeled modular decompositions and the label-selection dynamic program.
//!
//! A selection is a bitmask over 0-based labels (bit `l` = label `l + 1`).
//! For every decomposition node the program computes the set of selections
//! with which the node's vertices can be ordered, recording one generating
//! child tuple per selection so a witness can be rebuilt.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::model::{
    labeled_union, GraphTag, Instance, InstanceBuilder, LabeledDigraph, LabeledOrdering, Side,
    TagSet, VertexId,
};
use crate::par;
use crate::poly::topo_order_multi;
use crate::verify::verify_direct;

pub const MD_SCHEMA: &str = "modular-decomposition/1";
pub const MAX_LABELS: usize = 16;

/// Template graph over placeholders `0..p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Template {
    pub p: usize,
    pub arcs: Vec<(usize, usize, TagSet)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase", deny_unknown_fields)]
pub enum ModularDecomposition {
    Vertex {
        id: VertexId,
    },
    Union {
        children: Vec<ModularDecomposition>,
    },
    Subst {
        template: Template,
        children: Vec<ModularDecomposition>,
    },
}

impl ModularDecomposition {
    pub fn vertex(id: &str) -> Self {
        ModularDecomposition::Vertex {
            id: VertexId::new(id).expect("nonempty id"),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("decomposition serializes")
    }

    /// Largest number of children of any node.
    pub fn width(&self) -> usize {
        match self {
            ModularDecomposition::Vertex { .. } => 1,
            ModularDecomposition::Union { children }
            | ModularDecomposition::Subst { children, .. } => children
                .iter()
                .map(|c| c.width())
                .max()
                .unwrap_or(0)
                .max(children.len()),
        }
    }
}

/// Labeled digraph produced by the decomposition expression.
pub fn eval_md(md: &ModularDecomposition) -> Result<LabeledDigraph> {
    let mut out = LabeledDigraph::default();
    eval_into(md, &mut out)?;
    let mut seen = BTreeSet::new();
    for v in &out.vertices {
        if !seen.insert(v) {
            return Err(invalid(format!("vertex `{v}` appears in two children")));
        }
    }
    Ok(out)
}

/// Appends the node's vertices and arcs; returns the range of its vertices.
fn eval_into(md: &ModularDecomposition, out: &mut LabeledDigraph) -> Result<(usize, usize)> {
    let start = out.vertices.len();
    match md {
        ModularDecomposition::Vertex { id } => out.vertices.push(id.clone()),
        ModularDecomposition::Union { children } => {
            for c in children {
                eval_into(c, out)?;
            }
        }
        ModularDecomposition::Subst { template, children } => {
            if children.len() != template.p {
                return Err(invalid(format!(
                    "template has {} placeholders but {} children",
                    template.p,
                    children.len()
                )));
            }
            let ranges = children
                .iter()
                .map(|c| eval_into(c, out))
                .collect::<Result<Vec<_>>>()?;
            for (x, y, tags) in &template.arcs {
                if *x >= template.p || *y >= template.p || x == y || tags.is_empty() {
                    return Err(invalid(format!("bad template arc ({x}, {y})")));
                }
                for u in ranges[*x].0..ranges[*x].1 {
                    for w in ranges[*y].0..ranges[*y].1 {
                        let key = (out.vertices[u].clone(), out.vertices[w].clone());
                        out.arcs
                            .entry(key)
                            .or_default()
                            .extend(tags.iter().copied());
                    }
                }
            }
        }
    }
    Ok((start, out.vertices.len()))
}

/// First difference between the decomposition and the instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MdMismatch {
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub arc: Option<[String; 2]>,
}

impl std::fmt::Display for MdMismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.arc {
            Some([u, v]) => write!(f, "{} at {u}->{v}", self.detail),
            None => f.write_str(&self.detail),
        }
    }
}

/// Ok iff the decomposition evaluates to exactly the instance's labeled union.
pub fn validate_md(inst: &Instance, md: &ModularDecomposition) -> Result<(), MdMismatch> {
    let got = eval_md(md).map_err(|e| MdMismatch {
        detail: e.to_string(),
        arc: None,
    })?;
    let want = labeled_union(inst);
    let gv: BTreeSet<&VertexId> = got.vertices.iter().collect();
    let wv: BTreeSet<&VertexId> = want.vertices.iter().collect();
    if gv != wv {
        let odd = gv.symmetric_difference(&wv).next().expect("sets differ");
        return Err(MdMismatch {
            detail: format!("vertex `{odd}` not shared by decomposition and instance"),
            arc: None,
        });
    }
    let keys: BTreeSet<&(VertexId, VertexId)> = got.arcs.keys().chain(want.arcs.keys()).collect();
    for key in keys {
        let g = got.arcs.get(key);
        let w = want.arcs.get(key);
        if g != w {
            let show = |t: Option<&TagSet>| {
                t.map(|s| {
                    s.iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                })
                .unwrap_or_else(|| "none".into())
            };
            return Err(MdMismatch {
                detail: format!("labels {} vs instance {}", show(g), show(w)),
                arc: Some([key.0.to_string(), key.1.to_string()]),
            });
        }
    }
    Ok(())
}

/// Builds the instance whose labeled union is `ld`.
pub fn instance_from_labeled(ld: &LabeledDigraph, k: usize) -> Result<Instance> {
    let mut b = InstanceBuilder::new(k);
    for v in &ld.vertices {
        b.vertex(v.as_str());
    }
    for ((u, v), tags) in &ld.arcs {
        let (Some(ui), Some(vi)) = (b.index_of(u.as_str()), b.index_of(v.as_str())) else {
            return Err(invalid("arc endpoint outside vertex list"));
        };
        for t in tags {
            if t.label as usize > k {
                return Err(Error::LabelOutOfRange { label: t.label, k });
            }
            b.arc(t.side, t.label as usize, ui, vi);
        }
    }
    b.build()
}

fn side_mask(tags: &TagSet, side: Side) -> u32 {
    tags.iter()
        .filter(|t| t.side == side)
        .fold(0, |m, t| m | 1 << (t.label - 1))
}

/// Template arcs kept under `selections`: an arc `x -> y` survives when a
/// label selected for `x` is among its `A` tags or a label selected for `y`
/// is among its `B` tags.
fn kept_arcs(template: &Template, selections: &[u32]) -> Vec<(usize, usize)> {
    template
        .arcs
        .iter()
        .filter(|(x, y, tags)| {
            side_mask(tags, Side::A) & selections[*x] != 0
                || side_mask(tags, Side::B) & selections[*y] != 0
        })
        .map(|&(x, y, _)| (x, y))
        .collect()
}

fn kept_order(template: &Template, selections: &[u32]) -> Option<Vec<usize>> {
    let vs = std::sync::Arc::new(
        crate::model::VertexSet::new((0..template.p).map(|i| format!("p{i}")))
            .expect("placeholder names"),
    );
    let g = crate::model::Digraph::from_index_arcs(vs, kept_arcs(template, selections))
        .expect("template arcs validated");
    topo_order_multi(template.p, &[&g])
}

/// Whether the filtered template is acyclic.
pub fn template_check(template: &Template, selections: &[u32]) -> bool {
    selections.len() == template.p && kept_order(template, selections).is_some()
}

/// Selection sets as sorted label lists, e.g. `[[1], [1, 2]]`.
pub fn selections_to_labels(set: &BTreeSet<u32>) -> Vec<Vec<u32>> {
    set.iter()
        .map(|&m| (0..32).filter(|b| m >> b & 1 == 1).map(|b| b + 1).collect())
        .collect()
}

struct Solved {
    /// Selection mask -> per-child selections that produced it.
    choices: BTreeMap<u32, Vec<u32>>,
    children: Vec<Solved>,
}

fn solve_node(md: &ModularDecomposition, k: usize) -> Solved {
    match md {
        ModularDecomposition::Vertex { .. } => Solved {
            choices: (0..k).map(|l| (1u32 << l, Vec::new())).collect(),
            children: Vec::new(),
        },
        ModularDecomposition::Union { children } => {
            let solved = par::map(children, |c| solve_node(c, k));
            let mut acc: BTreeMap<u32, Vec<u32>> = BTreeMap::from([(0, Vec::new())]);
            for s in &solved {
                let mut next = BTreeMap::new();
                for (m, tuple) in &acc {
                    for &sel in s.choices.keys() {
                        next.entry(m | sel).or_insert_with(|| {
                            let mut t = tuple.clone();
                            t.push(sel);
                            t
                        });
                    }
                }
                acc = next;
            }
            if children.is_empty() {
                acc.clear();
            }
            Solved {
                choices: acc,
                children: solved,
            }
        }
        ModularDecomposition::Subst { template, children } => {
            let solved = par::map(children, |c| solve_node(c, k));
            let options: Vec<Vec<u32>> = solved
                .iter()
                .map(|s| s.choices.keys().copied().collect())
                .collect();
            let mut choices = BTreeMap::new();
            let mut tuple = vec![0u32; children.len()];
            product(&options, 0, &mut tuple, &mut |t| {
                let mask = t.iter().fold(0, |m, s| m | s);
                if !choices.contains_key(&mask) && template_check(template, t) {
                    choices.insert(mask, t.to_vec());
                }
            });
            Solved {
                choices,
                children: solved,
            }
        }
    }
}

fn product(options: &[Vec<u32>], i: usize, tuple: &mut [u32], f: &mut impl FnMut(&[u32])) {
    if i == options.len() {
        f(tuple);
        return;
    }
    for &s in &options[i] {
        tuple[i] = s;
        product(options, i + 1, tuple, f);
    }
}

fn check_k(k: usize) -> Result<()> {
    if k > MAX_LABELS {
        return Err(Error::TooLarge(format!(
            "k = {k} exceeds the selection limit of {MAX_LABELS}"
        )));
    }
    Ok(())
}

/// Feasible label selections of the root.
pub fn label_selections(md: &ModularDecomposition, inst: &Instance) -> Result<BTreeSet<u32>> {
    check_k(inst.k())?;
    validate_md(inst, md).map_err(|m| invalid(format!("decomposition mismatch: {m}")))?;
    Ok(solve_node(md, inst.k()).choices.keys().copied().collect())
}

fn rebuild(
    md: &ModularDecomposition,
    solved: &Solved,
    mask: u32,
    inst: &Instance,
    out: &mut Vec<(usize, usize)>,
) -> Result<()> {
    let tuple = &solved.choices[&mask];
    match md {
        ModularDecomposition::Vertex { id } => {
            out.push((
                inst.vertices().require(id.as_str())?,
                mask.trailing_zeros() as usize,
            ));
        }
        ModularDecomposition::Union { children } => {
            for (i, c) in children.iter().enumerate() {
                rebuild(c, &solved.children[i], tuple[i], inst, out)?;
            }
        }
        ModularDecomposition::Subst { template, children } => {
            let mut order = kept_order(template, tuple).expect("recorded tuple is feasible");
            order.reverse();
            for i in order {
                rebuild(&children[i], &solved.children[i], tuple[i], inst, out)?;
            }
        }
    }
    Ok(())
}

/// Decides the instance from its decomposition and rebuilds a witness with
/// child blocks kept contiguous. A witness that fails verification is an
/// internal error, never a yes.
pub fn solve_modular(
    inst: &Instance,
    md: &ModularDecomposition,
) -> Result<Option<LabeledOrdering>> {
    check_k(inst.k())?;
    validate_md(inst, md).map_err(|m| invalid(format!("decomposition mismatch: {m}")))?;
    let solved = solve_node(md, inst.k());
    let Some(&mask) = solved.choices.keys().next() else {
        return Ok(None);
    };
    let mut placements = Vec::with_capacity(inst.n());
    rebuild(md, &solved, mask, inst, &mut placements)?;
    let witness = LabeledOrdering::from_placements(inst, &placements);
    verify_direct(inst, &witness, true)
        .map_err(|v| Error::Internal(format!("modular witness failed verification: {v}")))?;
    Ok(Some(witness))
}

/// Tag helper for building templates: `tags(&["A1", "B2"])`.
pub fn tags(names: &[&str]) -> TagSet {
    names
        .iter()
        .map(|s| s.parse::<GraphTag>().expect("valid tag"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use ModularDecomposition as Md;

    fn join(p: usize, arcs: Vec<(usize, usize, TagSet)>, children: Vec<Md>) -> Md {
        Md::Subst {
            template: Template { p, arcs },
            children,
        }
    }

    #[test]
    fn eval_basics() {
        let single = eval_md(&Md::vertex("u")).unwrap();
        assert_eq!(single.vertices.len(), 1);
        assert!(single.arcs.is_empty());
        let md = join(
            2,
            vec![(0, 1, tags(&["A1"]))],
            vec![Md::vertex("u"), Md::vertex("w")],
        );
        let g = eval_md(&md).unwrap();
        let key = (VertexId::new("u").unwrap(), VertexId::new("w").unwrap());
        assert_eq!(g.arcs[&key], tags(&["A1"]));
        let dup = Md::Union {
            children: vec![Md::vertex("u"), Md::vertex("u")],
        };
        assert!(eval_md(&dup).is_err());
    }

    #[test]
    fn template_filter_examples() {
        let none = Template { p: 2, arcs: vec![] };
        assert!(template_check(&none, &[1, 1]));
        let cyc = Template {
            p: 2,
            arcs: vec![(0, 1, tags(&["A1"])), (1, 0, tags(&["A1"]))],
        };
        assert!(!template_check(&cyc, &[0b01, 0b01]));
        assert!(template_check(&cyc, &[0b10, 0b10]));
    }

    #[test]
    fn selections_small_cases() {
        let mut b = InstanceBuilder::new(2);
        b.vertex("u");
        let inst = b.build().unwrap();
        let sels = label_selections(&Md::vertex("u"), &inst).unwrap();
        assert_eq!(selections_to_labels(&sels), vec![vec![1], vec![2]]);

        let mut b = InstanceBuilder::new(1);
        b.vertex("u");
        b.vertex("w");
        let inst = b.build().unwrap();
        let md = Md::Union {
            children: vec![Md::vertex("u"), Md::vertex("w")],
        };
        assert_eq!(label_selections(&md, &inst).unwrap(), BTreeSet::from([1]));
    }

    #[test]
    fn join_witness_respects_arc() {
        let md = join(
            2,
            vec![(0, 1, tags(&["A1"]))],
            vec![Md::vertex("u"), Md::vertex("w")],
        );
        let inst = instance_from_labeled(&eval_md(&md).unwrap(), 1).unwrap();
        let sol = solve_modular(&inst, &md).unwrap().unwrap();
        assert_eq!(
            sol,
            LabeledOrdering::from_names(&["w", "u"], &[1, 1]).unwrap()
        );
    }

    #[test]
    fn mismatch_names_the_arc() {
        let md = join(
            2,
            vec![(0, 1, tags(&["A1"]))],
            vec![Md::vertex("u"), Md::vertex("w")],
        );
        let inst = instance_from_labeled(&eval_md(&md).unwrap(), 2).unwrap();
        let wrong = join(
            2,
            vec![(0, 1, tags(&["A1", "B2"]))],
            vec![Md::vertex("u"), Md::vertex("w")],
        );
        let err = validate_md(&inst, &wrong).unwrap_err();
        assert_eq!(err.arc, Some(["u".into(), "w".into()]));
        assert!(validate_md(&inst, &md).is_ok());
    }

    #[test]
    fn json_shape() {
        let md = join(
            2,
            vec![(0, 1, tags(&["B2", "A1"]))],
            vec![Md::vertex("u"), Md::vertex("w")],
        );
        let text = md.to_json();
        assert!(text.contains(r#""op":"subst""#));
        assert!(text.contains(r#"[0,1,["A1","B2"]]"#));
        assert_eq!(Md::from_json(&text).unwrap(), md);
    }
}
