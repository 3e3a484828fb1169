//! Multicolored independent set to 1-compatible bounded ordering.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::model::{Digraph, Instance, Pair, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionedGraph {
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
    pub parts: Vec<Vec<String>>,
}

impl PartitionedGraph {
    pub fn from_json(text: &str) -> Result<Self> {
        let g: PartitionedGraph = serde_json::from_str(text)?;
        g.check()?;
        Ok(g)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph serializes")
    }

    /// Part index of every vertex.
    pub fn part_of(&self) -> Result<Vec<usize>> {
        let vs = VertexSet::new(self.vertices.iter().cloned())?;
        let mut part = vec![usize::MAX; vs.len()];
        for (p, members) in self.parts.iter().enumerate() {
            for m in members {
                let v = vs.require(m)?;
                if part[v] != usize::MAX {
                    return Err(invalid(format!("vertex `{m}` is in two parts")));
                }
                part[v] = p;
            }
        }
        if let Some(v) = part.iter().position(|&p| p == usize::MAX) {
            return Err(invalid(format!("vertex `{}` is in no part", vs.id(v))));
        }
        Ok(part)
    }

    pub fn check(&self) -> Result<()> {
        let vs = VertexSet::new(self.vertices.iter().cloned())?;
        for [u, v] in &self.edges {
            vs.require(u)?;
            vs.require(v)?;
        }
        self.part_of().map(|_| ())
    }
}

/// `A_1` gets a digon on every same-part pair and every edge; `B_1` stays
/// empty. Returns the instance and the required ordering size.
pub fn reduce_mis(g: &PartitionedGraph) -> Result<(Instance, usize)> {
    let part = g.part_of()?;
    let vs = Arc::new(VertexSet::new(g.vertices.iter().cloned())?);
    let n = vs.len();
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && part[u] == part[v] {
                arcs.push((u, v));
            }
        }
    }
    for [a, b] in &g.edges {
        let (u, v) = (vs.require(a)?, vs.require(b)?);
        if u != v {
            arcs.push((u, v));
            arcs.push((v, u));
        }
    }
    let a = Digraph::from_index_arcs(vs.clone(), arcs)?;
    let inst = Instance::new(
        vs.clone(),
        vec![Pair {
            a,
            b: Digraph::empty(vs),
        }],
    )?;
    Ok((inst, g.parts.len()))
}

/// One vertex per part, pairwise non-adjacent; the first such choice in
/// lexicographic order of part members.
pub fn mis_oracle(g: &PartitionedGraph) -> Result<Option<Vec<String>>> {
    let vs = VertexSet::new(g.vertices.iter().cloned())?;
    g.part_of()?;
    let n = vs.len();
    let mut adj = vec![vec![false; n]; n];
    for [a, b] in &g.edges {
        let (u, v) = (vs.require(a)?, vs.require(b)?);
        adj[u][v] = true;
        adj[v][u] = true;
    }
    let parts: Vec<Vec<usize>> = g
        .parts
        .iter()
        .map(|p| p.iter().map(|m| vs.require(m)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    fn go(parts: &[Vec<usize>], adj: &[Vec<bool>], chosen: &mut Vec<usize>) -> bool {
        let Some(options) = parts.get(chosen.len()) else {
            return true;
        };
        for &v in options {
            if chosen.iter().all(|&u| u != v && !adj[u][v]) {
                chosen.push(v);
                if go(parts, adj, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::new();
    Ok(go(&parts, &adj, &mut chosen)
        .then(|| chosen.iter().map(|&v| vs.id(v).to_string()).collect()))
}
