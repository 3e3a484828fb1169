//! Shared domain types: vertex sets, digraphs, instances, labeled orderings
//! and labeled digraphs, plus the structural operators over them.
//!
//! Vertices are named by opaque strings but every graph works on dense
//! indices into a shared [`VertexSet`]; all iteration follows declaration
//! order so that every algorithm built on top is deterministic.

mod io;

pub use io::{
    ArcList, DigraphFile, InstanceFile, LabeledOrderingFile, PairFile, INSTANCE_SCHEMA,
    ORDERING_SCHEMA,
};

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Opaque, non-empty vertex identifier.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(String);

impl VertexId {
    pub fn new(id: impl Into<String>) -> Result<Self> {
        let id = id.into();
        if id.is_empty() {
            return Err(Error::EmptyVertexId);
        }
        Ok(VertexId(id))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::borrow::Borrow<str> for VertexId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

/// Declaration-ordered list of vertex identifiers with a reverse index.
#[derive(Clone, Debug)]
pub struct VertexSet {
    ids: Vec<VertexId>,
    index: HashMap<VertexId, usize>,
}

impl VertexSet {
    pub fn new<I, S>(ids: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out = VertexSet {
            ids: Vec::new(),
            index: HashMap::new(),
        };
        for id in ids {
            let id = VertexId::new(id)?;
            if out.index.contains_key(&id) {
                return Err(Error::DuplicateVertex(id.0));
            }
            out.index.insert(id.clone(), out.ids.len());
            out.ids.push(id);
        }
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn id(&self, i: usize) -> &VertexId {
        &self.ids[i]
    }

    pub fn ids(&self) -> &[VertexId] {
        &self.ids
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }
}

impl PartialEq for VertexSet {
    fn eq(&self, other: &Self) -> bool {
        self.ids == other.ids
    }
}

impl Eq for VertexSet {}

/// Simple directed graph over a shared vertex set. No self-loops; parallel
/// arcs collapse; digons are allowed.
#[derive(Clone, Debug)]
pub struct Digraph {
    vertices: Arc<VertexSet>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
    arc_count: usize,
}

impl Digraph {
    pub fn empty(vertices: Arc<VertexSet>) -> Self {
        let n = vertices.len();
        Digraph {
            vertices,
            succ: vec![Vec::new(); n],
            pred: vec![Vec::new(); n],
            arc_count: 0,
        }
    }

    pub fn from_index_arcs<I>(vertices: Arc<VertexSet>, arcs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let n = vertices.len();
        let mut succ = vec![Vec::new(); n];
        for (u, v) in arcs {
            if u >= n || v >= n {
                return Err(invalid(format!(
                    "arc ({u}, {v}) out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::SelfLoop(vertices.id(u).to_string()));
            }
            succ[u].push(v);
        }
        let mut pred = vec![Vec::new(); n];
        let mut arc_count = 0;
        for (u, out) in succ.iter_mut().enumerate() {
            out.sort_unstable();
            out.dedup();
            arc_count += out.len();
            for &v in out.iter() {
                pred[v].push(u);
            }
        }
        // pred lists are filled in increasing tail order, so already sorted
        Ok(Digraph {
            vertices,
            succ,
            pred,
            arc_count,
        })
    }

    pub fn from_named_arcs<'a, I>(vertices: Arc<VertexSet>, arcs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let idx: Vec<(usize, usize)> = arcs
            .into_iter()
            .map(|(u, v)| Ok((vertices.require(u)?, vertices.require(v)?)))
            .collect::<Result<_>>()?;
        Digraph::from_index_arcs(vertices, idx)
    }

    pub fn vertices(&self) -> &Arc<VertexSet> {
        &self.vertices
    }

    pub fn n(&self) -> usize {
        self.succ.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    pub fn succ(&self, u: usize) -> &[usize] {
        &self.succ[u]
    }

    pub fn pred(&self, v: usize) -> &[usize] {
        &self.pred[v]
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.succ[u].binary_search(&v).is_ok()
    }

    /// Arcs in (tail index, head index) order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(u, out)| out.iter().map(move |&v| (u, v)))
    }

    pub fn same_vertices(&self, other: &Digraph) -> bool {
        Arc::ptr_eq(&self.vertices, &other.vertices) || self.vertices == other.vertices
    }

    /// Undirected degree in the simple underlying graph.
    pub fn undirected_degree(&self, v: usize) -> usize {
        let mut nb: Vec<usize> = self.succ[v].iter().chain(&self.pred[v]).copied().collect();
        nb.sort_unstable();
        nb.dedup();
        nb.len()
    }
}

impl PartialEq for Digraph {
    fn eq(&self, other: &Self) -> bool {
        self.same_vertices(other) && self.succ == other.succ
    }
}

impl Eq for Digraph {}

/// Which graph of a label pair an arc belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    A,
    B,
}

/// A graph tag such as `"A1"` or `"B3"` (labels are 1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GraphTag {
    pub side: Side,
    pub label: u32,
}

impl GraphTag {
    pub fn a(label: u32) -> Self {
        GraphTag {
            side: Side::A,
            label,
        }
    }

    pub fn b(label: u32) -> Self {
        GraphTag {
            side: Side::B,
            label,
        }
    }
}

// Tags sort as A1 < B1 < A2 < B2 < ...
impl Ord for GraphTag {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.label, self.side).cmp(&(other.label, other.side))
    }
}

impl PartialOrd for GraphTag {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for GraphTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.side {
            Side::A => 'A',
            Side::B => 'B',
        };
        write!(f, "{s}{}", self.label)
    }
}

impl std::str::FromStr for GraphTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let side = match s.as_bytes().first() {
            Some(b'A') => Side::A,
            Some(b'B') => Side::B,
            _ => return Err(invalid(format!("bad graph tag `{s}`"))),
        };
        let label: u32 = s[1..]
            .parse()
            .map_err(|_| invalid(format!("bad graph tag `{s}`")))?;
        if label == 0 {
            return Err(invalid(format!("bad graph tag `{s}`")));
        }
        Ok(GraphTag { side, label })
    }
}

impl Serialize for GraphTag {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GraphTag {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub type TagSet = BTreeSet<GraphTag>;

/// One `(A_l, B_l)` pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pair {
    pub a: Digraph,
    pub b: Digraph,
}

impl Pair {
    pub fn graph(&self, side: Side) -> &Digraph {
        match side {
            Side::A => &self.a,
            Side::B => &self.b,
        }
    }
}

/// A k-compatible ordering instance: a vertex set and k pairs of digraphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    vertices: Arc<VertexSet>,
    pairs: Vec<Pair>,
}

impl Instance {
    pub fn new(vertices: Arc<VertexSet>, pairs: Vec<Pair>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::BadK { k: 0, pairs: 0 });
        }
        for p in &pairs {
            if p.a.vertices() != &vertices || p.b.vertices() != &vertices {
                return Err(Error::VertexMismatch);
            }
        }
        Ok(Instance { vertices, pairs })
    }

    /// Instance with `k` pairs of empty graphs.
    pub fn empty(vertices: Arc<VertexSet>, k: usize) -> Result<Self> {
        let g = Digraph::empty(vertices.clone());
        let pairs = (0..k)
            .map(|_| Pair {
                a: g.clone(),
                b: g.clone(),
            })
            .collect();
        Instance::new(vertices, pairs)
    }

    pub fn k(&self) -> usize {
        self.pairs.len()
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &Arc<VertexSet> {
        &self.vertices
    }

    pub fn id(&self, v: usize) -> &VertexId {
        self.vertices.id(v)
    }

    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    /// `A` graph of 0-based label index `l`.
    pub fn a(&self, l: usize) -> &Digraph {
        &self.pairs[l].a
    }

    /// `B` graph of 0-based label index `l`.
    pub fn b(&self, l: usize) -> &Digraph {
        &self.pairs[l].b
    }

    pub fn all_graphs(&self) -> impl Iterator<Item = &Digraph> {
        self.pairs.iter().flat_map(|p| [&p.a, &p.b])
    }

    pub fn total_arcs(&self) -> usize {
        self.all_graphs().map(Digraph::arc_count).sum()
    }

    /// Restriction to `subset` (indices, in the order given).
    pub fn induce(&self, subset: &[usize]) -> Result<Instance> {
        let n = self.n();
        let mut new_index = vec![usize::MAX; n];
        for (i, &v) in subset.iter().enumerate() {
            if v >= n {
                return Err(invalid(format!("vertex index {v} out of range")));
            }
            if new_index[v] != usize::MAX {
                return Err(Error::DuplicateVertex(self.id(v).to_string()));
            }
            new_index[v] = i;
        }
        let vs = Arc::new(VertexSet::new(
            subset.iter().map(|&v| self.id(v).as_str().to_string()),
        )?);
        let new_index = &new_index;
        let restrict = |g: &Digraph| {
            let arcs = subset.iter().flat_map(|&u| {
                g.succ(u)
                    .iter()
                    .filter(|&&w| new_index[w] != usize::MAX)
                    .map(move |&w| (new_index[u], new_index[w]))
            });
            Digraph::from_index_arcs(vs.clone(), arcs.collect::<Vec<_>>())
        };
        let pairs = self
            .pairs
            .iter()
            .map(|p| {
                Ok(Pair {
                    a: restrict(&p.a)?,
                    b: restrict(&p.b)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Instance::new(vs, pairs)
    }
}

/// Incremental construction of an instance from named vertices and arcs.
#[derive(Debug, Clone)]
pub struct InstanceBuilder {
    k: usize,
    names: Vec<String>,
    index: HashMap<String, usize>,
    arcs: Vec<[Vec<(usize, usize)>; 2]>,
}

impl InstanceBuilder {
    pub fn new(k: usize) -> Self {
        InstanceBuilder {
            k,
            names: Vec::new(),
            index: HashMap::new(),
            arcs: (0..k).map(|_| [Vec::new(), Vec::new()]).collect(),
        }
    }

    /// Declares a vertex, returning its index (idempotent).
    pub fn vertex(&mut self, name: impl Into<String>) -> usize {
        let name = name.into();
        if let Some(&i) = self.index.get(&name) {
            return i;
        }
        let i = self.names.len();
        self.index.insert(name.clone(), i);
        self.names.push(name);
        i
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Adds arc `u -> v` to graph `side` of 1-based `label`.
    pub fn arc(&mut self, side: Side, label: usize, u: usize, v: usize) -> &mut Self {
        assert!(label >= 1 && label <= self.k, "label {label} out of range");
        let slot = match side {
            Side::A => 0,
            Side::B => 1,
        };
        self.arcs[label - 1][slot].push((u, v));
        self
    }

    pub fn build(self) -> Result<Instance> {
        if self.k == 0 {
            return Err(Error::BadK { k: 0, pairs: 0 });
        }
        let vs = Arc::new(VertexSet::new(self.names)?);
        let pairs = self
            .arcs
            .into_iter()
            .map(|[a, b]| {
                Ok(Pair {
                    a: Digraph::from_index_arcs(vs.clone(), a)?,
                    b: Digraph::from_index_arcs(vs.clone(), b)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Instance::new(vs, pairs)
    }
}

/// A candidate or witness solution: vertices in order with 1-based labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledOrdering {
    order: Vec<VertexId>,
    labels: Vec<u32>,
}

impl LabeledOrdering {
    pub fn new(order: Vec<VertexId>, labels: Vec<u32>) -> Result<Self> {
        if order.len() != labels.len() {
            return Err(Error::LengthMismatch {
                order: order.len(),
                labels: labels.len(),
            });
        }
        Ok(LabeledOrdering { order, labels })
    }

    pub fn empty() -> Self {
        LabeledOrdering {
            order: Vec::new(),
            labels: Vec::new(),
        }
    }

    /// Convenience constructor from string names.
    pub fn from_names(order: &[&str], labels: &[u32]) -> Result<Self> {
        let order = order
            .iter()
            .map(|s| VertexId::new(*s))
            .collect::<Result<Vec<_>>>()?;
        LabeledOrdering::new(order, labels.to_vec())
    }

    /// Builds from `(vertex index, 0-based label)` placements.
    pub fn from_placements(inst: &Instance, placements: &[(usize, usize)]) -> Self {
        LabeledOrdering {
            order: placements
                .iter()
                .map(|&(v, _)| inst.id(v).clone())
                .collect(),
            labels: placements.iter().map(|&(_, l)| l as u32 + 1).collect(),
        }
    }

    /// Resolves names to `(vertex index, 0-based label)` placements.
    pub fn to_placements(&self, inst: &Instance) -> Result<Vec<(usize, usize)>> {
        self.order
            .iter()
            .zip(&self.labels)
            .map(|(v, &l)| {
                let i = inst.vertices().require(v.as_str())?;
                if l == 0 || l as usize > inst.k() {
                    return Err(Error::LabelOutOfRange {
                        label: l,
                        k: inst.k(),
                    });
                }
                Ok((i, l as usize - 1))
            })
            .collect()
    }

    pub fn order(&self) -> &[VertexId] {
        &self.order
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VertexId, u32)> {
        self.order.iter().zip(self.labels.iter().copied())
    }
}

/// Digraph whose arcs carry nonempty sets of graph tags.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabeledDigraph {
    pub vertices: Vec<VertexId>,
    pub arcs: BTreeMap<(VertexId, VertexId), TagSet>,
}

impl LabeledDigraph {
    /// Equality up to vertex declaration order.
    pub fn same_as(&self, other: &LabeledDigraph) -> bool {
        let a: BTreeSet<&VertexId> = self.vertices.iter().collect();
        let b: BTreeSet<&VertexId> = other.vertices.iter().collect();
        a == b && self.vertices.len() == other.vertices.len() && self.arcs == other.arcs
    }

    pub fn unlabeled(&self) -> BTreeSet<(VertexId, VertexId)> {
        self.arcs.keys().cloned().collect()
    }
}

/// Restriction of `inst` to the named `subset`, in the given order.
pub fn induced_instance(inst: &Instance, subset: &[VertexId]) -> Result<Instance> {
    let idx = subset
        .iter()
        .map(|v| inst.vertices().require(v.as_str()))
        .collect::<Result<Vec<_>>>()?;
    inst.induce(&idx)
}

/// Union of digraphs over a common vertex list. With `directed == false` the
/// result is the symmetric closure (every edge present in both directions).
pub fn union_graph(graphs: &[&Digraph], directed: bool) -> Result<Digraph> {
    let first = graphs
        .first()
        .ok_or_else(|| invalid("union of an empty list of graphs"))?;
    if graphs.iter().any(|g| !g.same_vertices(first)) {
        return Err(Error::VertexMismatch);
    }
    let mut arcs = Vec::with_capacity(graphs.iter().map(|g| g.arc_count()).sum());
    for g in graphs {
        for (u, v) in g.arcs() {
            arcs.push((u, v));
            if !directed {
                arcs.push((v, u));
            }
        }
    }
    Digraph::from_index_arcs(first.vertices().clone(), arcs)
}

/// Undirected union of all `2k` graphs of an instance.
pub fn undirected_union(inst: &Instance) -> Digraph {
    let graphs: Vec<&Digraph> = inst.all_graphs().collect();
    union_graph(&graphs, false).expect("instance graphs share vertices")
}

/// Union of every graph, each arc tagged with the graphs containing it.
pub fn labeled_union(inst: &Instance) -> LabeledDigraph {
    let mut arcs: BTreeMap<(VertexId, VertexId), TagSet> = BTreeMap::new();
    for (l, p) in inst.pairs().iter().enumerate() {
        for (side, g) in [(Side::A, &p.a), (Side::B, &p.b)] {
            for (u, v) in g.arcs() {
                arcs.entry((inst.id(u).clone(), inst.id(v).clone()))
                    .or_default()
                    .insert(GraphTag {
                        side,
                        label: l as u32 + 1,
                    });
            }
        }
    }
    LabeledDigraph {
        vertices: inst.vertices().ids().to_vec(),
        arcs,
    }
}

/// Graph with every arc flipped.
pub fn reverse_graph(g: &Digraph) -> Digraph {
    Digraph::from_index_arcs(
        g.vertices().clone(),
        g.arcs().map(|(u, v)| (v, u)).collect::<Vec<_>>(),
    )
    .expect("reversal preserves validity")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vs(names: &[&str]) -> Arc<VertexSet> {
        Arc::new(VertexSet::new(names.iter().copied()).unwrap())
    }

    fn path_instance() -> Instance {
        let mut b = InstanceBuilder::new(1);
        let u = b.vertex("u");
        let v = b.vertex("v");
        let w = b.vertex("w");
        b.arc(Side::A, 1, u, v).arc(Side::A, 1, v, w);
        b.build().unwrap()
    }

    #[test]
    fn rejects_self_loops_and_duplicates() {
        let s = vs(&["u", "v"]);
        assert!(matches!(
            Digraph::from_index_arcs(s.clone(), [(0, 0)]),
            Err(Error::SelfLoop(_))
        ));
        assert!(matches!(
            VertexSet::new(["a", "a"]),
            Err(Error::DuplicateVertex(_))
        ));
        assert!(matches!(VertexSet::new([""]), Err(Error::EmptyVertexId)));
        let g = Digraph::from_index_arcs(s, [(0, 1), (0, 1), (1, 0)]).unwrap();
        assert_eq!(g.arc_count(), 2);
    }

    #[test]
    fn induced_identity_and_empty() {
        let inst = path_instance();
        let all: Vec<VertexId> = inst.vertices().ids().to_vec();
        assert_eq!(induced_instance(&inst, &all).unwrap(), inst);
        let empty = induced_instance(&inst, &[]).unwrap();
        assert_eq!(empty.n(), 0);
        assert_eq!(empty.k(), 1);
        assert_eq!(empty.total_arcs(), 0);
    }

    #[test]
    fn induced_filters_arcs() {
        let inst = path_instance();
        let sub = induced_instance(
            &inst,
            &[VertexId::new("u").unwrap(), VertexId::new("v").unwrap()],
        )
        .unwrap();
        // brute enumeration of surviving arcs
        let expect: Vec<(String, String)> = inst
            .a(0)
            .arcs()
            .filter(|&(a, b)| a < 2 && b < 2)
            .map(|(a, b)| (inst.id(a).to_string(), inst.id(b).to_string()))
            .collect();
        let got: Vec<(String, String)> = sub
            .a(0)
            .arcs()
            .map(|(a, b)| (sub.id(a).to_string(), sub.id(b).to_string()))
            .collect();
        assert_eq!(got, expect);
        assert_eq!(got, vec![("u".to_string(), "v".to_string())]);
        assert!(matches!(
            induced_instance(&inst, &[VertexId::new("zz").unwrap()]),
            Err(Error::UnknownVertex(_))
        ));
    }

    #[test]
    fn union_directed_and_undirected() {
        let s = vs(&["u", "v"]);
        let a = Digraph::from_index_arcs(s.clone(), [(0, 1)]).unwrap();
        let b = Digraph::from_index_arcs(s.clone(), [(1, 0)]).unwrap();
        assert_eq!(union_graph(&[&a], true).unwrap(), a);
        let d = union_graph(&[&a, &b], true).unwrap();
        assert_eq!(d.arcs().collect::<Vec<_>>(), vec![(0, 1), (1, 0)]);
        let u = union_graph(&[&a], false).unwrap();
        assert_eq!(u.arcs().collect::<Vec<_>>(), vec![(0, 1), (1, 0)]);
        let other = Digraph::empty(vs(&["x", "y"]));
        assert!(matches!(
            union_graph(&[&a, &other], true),
            Err(Error::VertexMismatch)
        ));
    }

    #[test]
    fn labeled_union_tags() {
        let mut b = InstanceBuilder::new(2);
        let u = b.vertex("u");
        let v = b.vertex("v");
        b.arc(Side::A, 1, u, v)
            .arc(Side::B, 2, u, v)
            .arc(Side::A, 1, v, u);
        let inst = b.build().unwrap();
        let lu = labeled_union(&inst);
        let key = (VertexId::new("u").unwrap(), VertexId::new("v").unwrap());
        let tags: Vec<String> = lu.arcs[&key].iter().map(|t| t.to_string()).collect();
        assert_eq!(tags, vec!["A1", "B2"]);
        let key = (VertexId::new("v").unwrap(), VertexId::new("u").unwrap());
        let tags: Vec<String> = lu.arcs[&key].iter().map(|t| t.to_string()).collect();
        assert_eq!(tags, vec!["A1"]);
        let empty = Instance::empty(vs(&["a", "b"]), 3).unwrap();
        assert!(labeled_union(&empty).arcs.is_empty());
    }

    #[test]
    fn reverse_basics() {
        let s = vs(&["u", "v"]);
        let g = Digraph::from_index_arcs(s.clone(), [(0, 1)]).unwrap();
        assert_eq!(reverse_graph(&g).arcs().collect::<Vec<_>>(), vec![(1, 0)]);
        let e = Digraph::empty(s);
        assert_eq!(reverse_graph(&e), e);
    }

    #[test]
    fn tag_parse_roundtrip() {
        for s in ["A1", "B2", "A13"] {
            let t: GraphTag = s.parse().unwrap();
            assert_eq!(t.to_string(), s);
        }
        assert!("C1".parse::<GraphTag>().is_err());
        assert!("A0".parse::<GraphTag>().is_err());
        assert!("A".parse::<GraphTag>().is_err());
    }
}
