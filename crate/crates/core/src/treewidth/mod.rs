//! Tree decompositions of the undirected union graph and the dynamic program
//! over nice decompositions.

mod dp;
mod nice;
mod pace;

pub use dp::{comp_tables, solve_treewidth, CompTables, MAX_TABLE_ENTRIES, MAX_WIDTH};
pub use nice::{make_nice, NiceNode, NiceTreeDecomposition, NodeKind};
pub use pace::{parse_pace, read_td_json, write_pace, write_td_json, TD_SCHEMA};

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use crate::model::Digraph;

/// Bags of vertex indices plus undirected tree edges between bag indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<usize>>,
    pub edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn new(mut bags: Vec<Vec<usize>>, edges: Vec<(usize, usize)>) -> Self {
        for b in &mut bags {
            b.sort_unstable();
            b.dedup();
        }
        TreeDecomposition { bags, edges }
    }

    pub fn width(&self) -> usize {
        self.bags
            .iter()
            .map(Vec::len)
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    /// Neighbor lists of the decomposition tree.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        adj
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "defect", rename_all = "snake_case")]
pub enum TdDefect {
    BadIndex { detail: String },
    NotATree,
    UncoveredVertex { vertex: String },
    UncoveredEdge { u: String, v: String },
    DisconnectedOccurrences { vertex: String },
}

impl std::fmt::Display for TdDefect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TdDefect::BadIndex { detail } => write!(f, "bad index: {detail}"),
            TdDefect::NotATree => f.write_str("decomposition graph is not a tree"),
            TdDefect::UncoveredVertex { vertex } => write!(f, "vertex {vertex} in no bag"),
            TdDefect::UncoveredEdge { u, v } => write!(f, "edge {u}-{v} in no bag"),
            TdDefect::DisconnectedOccurrences { vertex } => {
                write!(f, "bags containing {vertex} are not connected")
            }
        }
    }
}

/// Checks vertex coverage, edge coverage and the connected-occurrence
/// property of `td` against `union` (treated as undirected).
pub fn validate_td(union: &Digraph, td: &TreeDecomposition) -> Result<(), TdDefect> {
    let n = union.n();
    let nb = td.bags.len();
    let name = |v: usize| union.vertices().id(v).to_string();
    for &(a, b) in &td.edges {
        if a >= nb || b >= nb || a == b {
            return Err(TdDefect::BadIndex {
                detail: format!("tree edge ({a}, {b})"),
            });
        }
    }
    if let Some(&v) = td.bags.iter().flatten().find(|&&v| v >= n) {
        return Err(TdDefect::BadIndex {
            detail: format!("vertex index {v}"),
        });
    }
    let adj = td.adjacency();
    if nb > 0 {
        if td.edges.len() != nb - 1 || reach(&adj, 0, |_| true).len() != nb {
            return Err(TdDefect::NotATree);
        }
    } else if n > 0 {
        return Err(TdDefect::UncoveredVertex { vertex: name(0) });
    }
    let mut holders: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            holders[v].push(i);
        }
    }
    if let Some(v) = (0..n).find(|&v| holders[v].is_empty()) {
        return Err(TdDefect::UncoveredVertex { vertex: name(v) });
    }
    for (u, v) in union.arcs() {
        let covered = holders[u]
            .iter()
            .any(|&i| td.bags[i].binary_search(&v).is_ok());
        if !covered {
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            return Err(TdDefect::UncoveredEdge {
                u: name(a),
                v: name(b),
            });
        }
    }
    for v in 0..n {
        let inside = |i: usize| td.bags[i].binary_search(&v).is_ok();
        if reach(&adj, holders[v][0], inside).len() != holders[v].len() {
            return Err(TdDefect::DisconnectedOccurrences { vertex: name(v) });
        }
    }
    Ok(())
}

fn reach(adj: &[Vec<usize>], start: usize, allowed: impl Fn(usize) -> bool) -> Vec<usize> {
    let mut seen = vec![false; adj.len()];
    let mut out = vec![start];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(a) = queue.pop_front() {
        for &b in &adj[a] {
            if !seen[b] && allowed(b) {
                seen[b] = true;
                out.push(b);
                queue.push_back(b);
            }
        }
    }
    out
}

/// Min-fill greedy elimination (ties by degree, then index).
pub fn heuristic_td(union: &Digraph) -> TreeDecomposition {
    heuristic_td_bounded(union, usize::MAX).expect("unbounded width")
}

/// As [`heuristic_td`] but gives up once a bag would exceed `max_width + 1`.
pub fn heuristic_td_bounded(union: &Digraph, max_width: usize) -> Option<TreeDecomposition> {
    let n = union.n();
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for (u, v) in union.arcs() {
        adj[u].insert(v);
        adj[v].insert(u);
    }
    let fill = |adj: &[BTreeSet<usize>], v: usize| -> usize {
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        let mut missing = 0;
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                if !adj[a].contains(&b) {
                    missing += 1;
                }
            }
        }
        missing
    };
    let mut score: Vec<(usize, usize)> = (0..n).map(|v| (fill(&adj, v), adj[v].len())).collect();
    let mut queue: BTreeSet<(usize, usize, usize)> =
        (0..n).map(|v| (score[v].0, score[v].1, v)).collect();
    let mut eliminated = vec![false; n];
    let mut position = vec![0; n];
    let mut bags = Vec::with_capacity(n);
    while let Some((_, _, v)) = queue.pop_first() {
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        if nb.len() > max_width {
            return None;
        }
        position[v] = bags.len();
        let mut bag = nb.clone();
        bag.push(v);
        bags.push((v, bag));
        eliminated[v] = true;
        for (i, &a) in nb.iter().enumerate() {
            adj[a].remove(&v);
            for &b in &nb[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        let mut touched: BTreeSet<usize> = nb.iter().copied().collect();
        for &a in &nb {
            touched.extend(adj[a].iter().copied());
        }
        for w in touched {
            if eliminated[w] {
                continue;
            }
            queue.remove(&(score[w].0, score[w].1, w));
            score[w] = (fill(&adj, w), adj[w].len());
            queue.insert((score[w].0, score[w].1, w));
        }
    }
    // parent of a bag: the bag of its earliest-eliminated neighbor; isolated
    // pieces hang off the next bag so the result stays a tree
    let m = bags.len();
    let mut edges = Vec::with_capacity(m.saturating_sub(1));
    for (i, (v, bag)) in bags.iter().enumerate() {
        let parent = bag.iter().filter(|&&w| w != *v).map(|&w| position[w]).min();
        match parent {
            Some(p) => edges.push((i, p)),
            None if i + 1 < m => edges.push((i, i + 1)),
            None => {}
        }
    }
    Some(TreeDecomposition::new(
        bags.into_iter().map(|(_, b)| b).collect(),
        edges,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{union_graph, VertexSet};
    use std::sync::Arc;

    fn undirected(n: usize, edges: &[(usize, usize)]) -> Digraph {
        let vs = Arc::new(VertexSet::new((0..n).map(|i| format!("v{i}"))).unwrap());
        let g = Digraph::from_index_arcs(vs, edges.iter().copied()).unwrap();
        union_graph(&[&g], false).unwrap()
    }

    #[test]
    fn path_examples() {
        let g = undirected(3, &[(0, 1), (1, 2)]);
        let good = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        assert_eq!(validate_td(&g, &good), Ok(()));
        let bad = TreeDecomposition::new(vec![vec![0, 1], vec![2]], vec![(0, 1)]);
        assert_eq!(
            validate_td(&g, &bad),
            Err(TdDefect::UncoveredEdge {
                u: "v1".into(),
                v: "v2".into()
            })
        );
        let gap =
            TreeDecomposition::new(vec![vec![0, 1], vec![2], vec![1, 2]], vec![(0, 1), (1, 2)]);
        assert!(matches!(
            validate_td(&g, &gap),
            Err(TdDefect::DisconnectedOccurrences { .. })
        ));
    }

    #[test]
    fn heuristic_widths() {
        let tree = undirected(6, &[(0, 1), (0, 2), (2, 3), (2, 4), (4, 5)]);
        let td = heuristic_td(&tree);
        assert_eq!(td.width(), 1);
        assert_eq!(validate_td(&tree, &td), Ok(()));
        let k5: Vec<(usize, usize)> = (0..5)
            .flat_map(|a| (a + 1..5).map(move |b| (a, b)))
            .collect();
        let clique = undirected(5, &k5);
        let td = heuristic_td(&clique);
        assert_eq!(td.width(), 4);
        assert_eq!(validate_td(&clique, &td), Ok(()));
        assert!(heuristic_td_bounded(&clique, 3).is_none());
        let isolated = undirected(3, &[]);
        assert_eq!(validate_td(&isolated, &heuristic_td(&isolated)), Ok(()));
    }
}
