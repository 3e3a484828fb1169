//! Nondeterministic constraint logic (configuration to configuration) to
//! 2-compatible set arrangement. Every edge becomes two endpoint vertices;
//! set membership marks the edge's current head.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::arrangement::{is_legal_move, ArrangementInstance, Move, MoveSequence, Op};
use crate::error::{invalid, Error, Result};
use crate::gen::Rng;
use crate::model::{InstanceBuilder, Side};

/// Largest edge count the orientation search accepts.
pub const MAX_NCL_EDGES: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NodeKind {
    #[serde(rename = "AND")]
    And,
    #[serde(rename = "OR")]
    Or,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NclVertex {
    pub id: String,
    #[serde(rename = "type")]
    pub kind: NodeKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NclEdge {
    pub id: String,
    pub u: String,
    pub v: String,
    pub w: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintGraph {
    pub vertices: Vec<NclVertex>,
    pub edges: Vec<NclEdge>,
    pub source_heads: BTreeMap<String, String>,
    pub target_heads: BTreeMap<String, String>,
}

/// Index form: `ends[e] = (u, v)`, orientations as bitmasks with bit `e`
/// set when `v` is the head.
struct Indexed {
    kinds: Vec<NodeKind>,
    ends: Vec<(usize, usize)>,
    weight: Vec<u8>,
    incident: Vec<Vec<usize>>,
    source: u32,
    target: u32,
}

impl ConstraintGraph {
    pub fn from_json(text: &str) -> Result<Self> {
        let g: ConstraintGraph = serde_json::from_str(text)?;
        g.index()?;
        Ok(g)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("constraint graph serializes")
    }

    pub fn check(&self) -> Result<()> {
        self.index().map(|_| ())
    }

    fn index(&self) -> Result<Indexed> {
        let vpos: BTreeMap<&str, usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.id.as_str(), i))
            .collect();
        if vpos.len() != self.vertices.len() {
            return Err(invalid("duplicate constraint graph vertex"));
        }
        let m = self.edges.len();
        if m > 32 {
            return Err(Error::TooLarge(format!("{m} edges")));
        }
        let find = |id: &str| {
            vpos.get(id)
                .copied()
                .ok_or_else(|| Error::UnknownVertex(id.to_string()))
        };
        let mut incident = vec![Vec::new(); self.vertices.len()];
        let mut ends = Vec::with_capacity(m);
        let mut seen = BTreeMap::new();
        for (e, edge) in self.edges.iter().enumerate() {
            if seen.insert(edge.id.as_str(), e).is_some() {
                return Err(invalid(format!("duplicate edge `{}`", edge.id)));
            }
            let (u, v) = (find(&edge.u)?, find(&edge.v)?);
            if u == v {
                return Err(Error::SelfLoop(edge.id.clone()));
            }
            if edge.w != 1 && edge.w != 2 {
                return Err(invalid(format!("edge `{}` has weight {}", edge.id, edge.w)));
            }
            incident[u].push(e);
            incident[v].push(e);
            ends.push((u, v));
        }
        let weight: Vec<u8> = self.edges.iter().map(|e| e.w).collect();
        for (i, vert) in self.vertices.iter().enumerate() {
            if incident[i].len() != 3 {
                return Err(invalid(format!("vertex `{}` is not of degree 3", vert.id)));
            }
            let heavy = incident[i].iter().filter(|&&e| weight[e] == 2).count();
            let ok = match vert.kind {
                NodeKind::Or => heavy == 3,
                NodeKind::And => heavy == 1,
            };
            if !ok {
                return Err(invalid(format!(
                    "vertex `{}` has the wrong edge weights",
                    vert.id
                )));
            }
        }
        let orient = |heads: &BTreeMap<String, String>, what: &str| -> Result<u32> {
            if heads.len() != m {
                return Err(invalid(format!("{what} orientation must cover every edge")));
            }
            let mut mask = 0u32;
            for (eid, head) in heads {
                let e = *seen
                    .get(eid.as_str())
                    .ok_or_else(|| invalid(format!("unknown edge `{eid}`")))?;
                let h = find(head)?;
                if h == ends[e].1 {
                    mask |= 1 << e;
                } else if h != ends[e].0 {
                    return Err(invalid(format!("`{head}` is not an end of `{eid}`")));
                }
            }
            Ok(mask)
        };
        let idx = Indexed {
            kinds: self.vertices.iter().map(|v| v.kind).collect(),
            source: orient(&self.source_heads, "source")?,
            target: orient(&self.target_heads, "target")?,
            ends,
            weight,
            incident,
        };
        for (mask, what) in [(idx.source, "source"), (idx.target, "target")] {
            if !idx.legal(mask) {
                return Err(invalid(format!("{what} orientation is not legal")));
            }
        }
        Ok(idx)
    }
}

impl Indexed {
    fn head(&self, mask: u32, e: usize) -> usize {
        if mask >> e & 1 == 1 {
            self.ends[e].1
        } else {
            self.ends[e].0
        }
    }

    /// In-weight at least 2 everywhere.
    fn legal(&self, mask: u32) -> bool {
        self.incident.iter().enumerate().all(|(x, inc)| {
            inc.iter()
                .filter(|&&e| self.head(mask, e) == x)
                .map(|&e| self.weight[e] as u32)
                .sum::<u32>()
                >= 2
        })
    }
}

/// Whether every vertex has in-weight at least 2 under `heads`.
pub fn orientation_legal(cg: &ConstraintGraph, heads: &BTreeMap<String, String>) -> Result<bool> {
    let mut probe = cg.clone();
    probe.source_heads = heads.clone();
    probe.target_heads = heads.clone();
    match probe.index() {
        Ok(_) => Ok(true),
        Err(Error::Invalid(msg)) if msg.ends_with("orientation is not legal") => Ok(false),
        Err(e) => Err(e),
    }
}

/// Shortest list of edge flips from the source to the target orientation,
/// through legal orientations only. Ties go to the lowest edge index.
pub fn ncl_oracle(cg: &ConstraintGraph) -> Result<Option<Vec<String>>> {
    let m = cg.edges.len();
    if m > MAX_NCL_EDGES {
        return Err(Error::TooLarge(format!(
            "NCL search is limited to {MAX_NCL_EDGES} edges, got {m}"
        )));
    }
    let idx = cg.index()?;
    let mut parent: Vec<u32> = vec![u32::MAX; 1 << m];
    parent[idx.source as usize] = idx.source;
    let mut queue = VecDeque::from([idx.source]);
    while let Some(s) = queue.pop_front() {
        if s == idx.target {
            break;
        }
        for e in 0..m {
            let t = s ^ 1 << e;
            if parent[t as usize] == u32::MAX && idx.legal(t) {
                parent[t as usize] = s;
                queue.push_back(t);
            }
        }
    }
    if parent[idx.target as usize] == u32::MAX {
        return Ok(None);
    }
    let mut flips = Vec::new();
    let mut cur = idx.target;
    while cur != idx.source {
        let prev = parent[cur as usize];
        let e = (prev ^ cur).trailing_zeros() as usize;
        flips.push(cg.edges[e].id.clone());
        cur = prev;
    }
    flips.reverse();
    Ok(Some(flips))
}

/// Endpoint vertex indices per edge, in `(u, v)` order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeMap {
    pub endpoints: Vec<(usize, usize)>,
}

pub fn endpoint_name(vertex: &str, edge: &str) -> String {
    format!("{vertex}.{edge}")
}

pub fn reduce_ncl(cg: &ConstraintGraph) -> Result<(ArrangementInstance, EdgeMap)> {
    let idx = cg.index()?;
    let mut b = InstanceBuilder::new(2);
    let endpoints: Vec<(usize, usize)> = cg
        .edges
        .iter()
        .map(|e| {
            (
                b.vertex(endpoint_name(&e.u, &e.id)),
                b.vertex(endpoint_name(&e.v, &e.id)),
            )
        })
        .collect();
    for &(p, q) in &endpoints {
        for l in 1..=2 {
            b.arc(Side::A, l, p, q).arc(Side::A, l, q, p);
        }
    }
    let at = |x: usize, e: usize| {
        if idx.ends[e].0 == x {
            endpoints[e].0
        } else {
            endpoints[e].1
        }
    };
    for (x, inc) in idx.incident.iter().enumerate() {
        match idx.kinds[x] {
            NodeKind::Or => {
                let [e1, e2, e3] = [0, 1, 2].map(|i| at(x, inc[i]));
                b.arc(Side::B, 1, e1, e3)
                    .arc(Side::B, 2, e2, e3)
                    .arc(Side::B, 1, e2, e1)
                    .arc(Side::B, 1, e1, e2)
                    .arc(Side::B, 2, e3, e1)
                    .arc(Side::B, 2, e3, e2);
            }
            NodeKind::And => {
                let heavy = inc
                    .iter()
                    .position(|&e| idx.weight[e] == 2)
                    .expect("checked");
                let e1 = at(x, inc[heavy]);
                for (i, &e) in inc.iter().enumerate() {
                    if i != heavy {
                        let light = at(x, e);
                        for l in 1..=2 {
                            b.arc(Side::B, l, e1, light).arc(Side::B, l, light, e1);
                        }
                    }
                }
            }
        }
    }
    let heads = |mask: u32| -> Vec<usize> {
        (0..cg.edges.len())
            .map(|e| {
                if mask >> e & 1 == 1 {
                    endpoints[e].1
                } else {
                    endpoints[e].0
                }
            })
            .collect()
    };
    let inst = ArrangementInstance::new(b.build()?, &heads(idx.source), &heads(idx.target))?;
    Ok((inst, EdgeMap { endpoints }))
}

/// Replays edge flips as remove-then-add pairs, each with its smallest
/// legal label.
pub fn moves_from_flips(
    cg: &ConstraintGraph,
    inst: &ArrangementInstance,
    map: &EdgeMap,
    flips: &[String],
) -> Result<MoveSequence> {
    let mut state = inst.start().to_vec();
    let mut moves = Vec::with_capacity(2 * flips.len());
    for eid in flips {
        let e = cg
            .edges
            .iter()
            .position(|x| &x.id == eid)
            .ok_or_else(|| invalid(format!("unknown edge `{eid}`")))?;
        let (p, q) = map.endpoints[e];
        let (from, to) = if state[p] { (p, q) } else { (q, p) };
        for (v, op) in [(from, Op::Remove), (to, Op::Add)] {
            let label = (1..=2)
                .find(|&l| is_legal_move(inst, &state, v, op, l))
                .ok_or_else(|| Error::Internal(format!("flip of `{eid}` has no legal {op:?}")))?;
            moves.push(Move {
                op,
                vertex: inst.base().id(v).clone(),
                label,
            });
            state[v] = op == Op::Add;
        }
    }
    Ok(MoveSequence { moves })
}

/// Random cubic constraint graph on `n` vertices (n even, parallel edges
/// allowed) with two random legal orientations.
pub fn random_constraint_graph(rng: &mut Rng, n: usize) -> ConstraintGraph {
    assert!(
        n >= 2 && n.is_multiple_of(2),
        "cubic graphs need an even vertex count"
    );
    loop {
        let mut stubs: Vec<usize> = (0..3 * n).map(|s| s / 3).collect();
        rng.shuffle(&mut stubs);
        let pairs: Vec<(usize, usize)> = stubs.chunks(2).map(|c| (c[0], c[1])).collect();
        if pairs.iter().any(|&(u, v)| u == v) {
            continue;
        }
        let weight: Vec<u8> = pairs
            .iter()
            .map(|_| if rng.chance(0.6) { 2 } else { 1 })
            .collect();
        let mut heavy = vec![0; n];
        let mut light = vec![0; n];
        for (e, &(u, v)) in pairs.iter().enumerate() {
            for x in [u, v] {
                if weight[e] == 2 {
                    heavy[x] += 1
                } else {
                    light[x] += 1
                }
            }
        }
        let kinds: Option<Vec<NodeKind>> = (0..n)
            .map(|x| match (heavy[x], light[x]) {
                (3, 0) => Some(NodeKind::Or),
                (1, 2) => Some(NodeKind::And),
                _ => None,
            })
            .collect();
        let Some(kinds) = kinds else { continue };
        let mut cg = ConstraintGraph {
            vertices: (0..n)
                .map(|x| NclVertex {
                    id: format!("n{}", x + 1),
                    kind: kinds[x],
                })
                .collect(),
            edges: pairs
                .iter()
                .enumerate()
                .map(|(e, &(u, v))| NclEdge {
                    id: format!("e{}", e + 1),
                    u: format!("n{}", u + 1),
                    v: format!("n{}", v + 1),
                    w: weight[e],
                })
                .collect(),
            source_heads: BTreeMap::new(),
            target_heads: BTreeMap::new(),
        };
        let heads = |mask: u32| -> BTreeMap<String, String> {
            cg.edges
                .iter()
                .enumerate()
                .map(|(e, x)| {
                    (
                        x.id.clone(),
                        if mask >> e & 1 == 1 {
                            x.v.clone()
                        } else {
                            x.u.clone()
                        },
                    )
                })
                .collect()
        };
        let m = pairs.len();
        let legal: Vec<u32> = (0..1u32 << m)
            .filter(|&mask| {
                (0..n).all(|x| {
                    pairs
                        .iter()
                        .enumerate()
                        .filter(|&(e, &(u, v))| (if mask >> e & 1 == 1 { v } else { u }) == x)
                        .map(|(e, _)| weight[e] as u32)
                        .sum::<u32>()
                        >= 2
                })
            })
            .collect();
        if legal.is_empty() {
            continue;
        }
        let (s, t) = (legal[rng.below(legal.len())], legal[rng.below(legal.len())]);
        let (sh, th) = (heads(s), heads(t));
        cg.source_heads = sh;
        cg.target_heads = th;
        return cg;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Two OR vertices joined by three parallel weight-2 edges.
    fn or_pair(source: [&str; 3], target: [&str; 3]) -> ConstraintGraph {
        let heads = |h: [&str; 3]| {
            (0..3)
                .map(|e| (format!("e{}", e + 1), h[e].to_string()))
                .collect()
        };
        ConstraintGraph {
            vertices: ["u", "v"]
                .map(|id| NclVertex {
                    id: id.into(),
                    kind: NodeKind::Or,
                })
                .to_vec(),
            edges: (1..=3)
                .map(|e| NclEdge {
                    id: format!("e{e}"),
                    u: "u".into(),
                    v: "v".into(),
                    w: 2,
                })
                .collect(),
            source_heads: heads(source),
            target_heads: heads(target),
        }
    }

    #[test]
    fn or_fragment_arcs() {
        let cg = or_pair(["u", "u", "v"], ["u", "u", "v"]);
        let (inst, map) = reduce_ncl(&cg).unwrap();
        let u = |e: usize| map.endpoints[e].0;
        let base = inst.base();
        assert!(base.b(0).has_arc(u(0), u(2)));
        assert!(base.b(0).has_arc(u(0), u(1)) && base.b(0).has_arc(u(1), u(0)));
        assert!(base.b(1).has_arc(u(1), u(2)));
        assert!(base.b(1).has_arc(u(2), u(0)) && base.b(1).has_arc(u(2), u(1)));
        assert_eq!(base.a(0).arc_count(), 6);
        assert_eq!(ncl_oracle(&cg).unwrap(), Some(vec![]));
        assert_eq!(base.id(u(0)).as_str(), "u.e1");
    }

    #[test]
    fn or_vertex_releases_second_edge() {
        let cg = or_pair(["u", "u", "v"], ["u", "v", "v"]);
        assert_eq!(ncl_oracle(&cg).unwrap(), Some(vec!["e2".to_string()]));
    }

    #[test]
    fn rejects_illegal_orientation() {
        let cg = or_pair(["u", "u", "u"], ["u", "u", "u"]);
        assert!(cg.check().is_err());
        let ok = or_pair(["u", "v", "v"], ["u", "v", "v"]);
        assert!(orientation_legal(&ok, &cg.source_heads).is_ok_and(|l| !l));
    }

    #[test]
    fn and_fragment_arcs() {
        let mut rng = Rng::seeded(3);
        let cg = loop {
            let cg = random_constraint_graph(&mut rng, 4);
            if cg.vertices.iter().any(|v| v.kind == NodeKind::And) {
                break cg;
            }
        };
        let (inst, map) = reduce_ncl(&cg).unwrap();
        let x = cg
            .vertices
            .iter()
            .find(|v| v.kind == NodeKind::And)
            .unwrap();
        let end = |e: usize| {
            if cg.edges[e].u == x.id {
                map.endpoints[e].0
            } else {
                map.endpoints[e].1
            }
        };
        let inc: Vec<usize> = (0..cg.edges.len())
            .filter(|&e| cg.edges[e].u == x.id || cg.edges[e].v == x.id)
            .collect();
        let heavy = *inc.iter().find(|&&e| cg.edges[e].w == 2).unwrap();
        for &e in inc.iter().filter(|&&e| e != heavy) {
            for l in 0..2 {
                assert!(inst.base().b(l).has_arc(end(e), end(heavy)));
                assert!(inst.base().b(l).has_arc(end(heavy), end(e)));
            }
        }
        assert_eq!(ConstraintGraph::from_json(&cg.to_json()).unwrap(), cg);
    }
}
