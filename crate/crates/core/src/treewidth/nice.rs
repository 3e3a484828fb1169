use super::TreeDecomposition;
use crate::error::{invalid, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Leaf(usize),
    Introduce(usize),
    Forget(usize),
    Join,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceNode {
    pub kind: NodeKind,
    /// Sorted vertex indices.
    pub bag: Vec<usize>,
    pub children: Vec<usize>,
}

/// Nice decomposition with children stored before parents; the root is the
/// last node and has a single-vertex bag.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NiceTreeDecomposition {
    pub nodes: Vec<NiceNode>,
}

impl NiceTreeDecomposition {
    pub fn root(&self) -> Option<usize> {
        self.nodes.len().checked_sub(1)
    }

    pub fn width(&self) -> usize {
        self.nodes
            .iter()
            .map(|n| n.bag.len())
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    /// Plain decomposition with the same bags, for coverage checks.
    pub fn to_td(&self) -> TreeDecomposition {
        let edges = self
            .nodes
            .iter()
            .enumerate()
            .flat_map(|(i, n)| n.children.iter().map(move |&c| (c, i)))
            .collect();
        TreeDecomposition::new(self.nodes.iter().map(|n| n.bag.clone()).collect(), edges)
    }

    /// Checks node kinds, child ordering and the singleton root.
    pub fn audit(&self) -> Result<()> {
        for (i, node) in self.nodes.iter().enumerate() {
            if node.children.iter().any(|&c| c >= i) {
                return Err(invalid(format!("node {i} has a child stored after it")));
            }
            if node.bag.windows(2).any(|w| w[0] >= w[1]) {
                return Err(invalid(format!("node {i} bag is not sorted")));
            }
            let child = |j: usize| &self.nodes[node.children[j]].bag;
            let ok = match node.kind {
                NodeKind::Leaf(v) => node.children.is_empty() && node.bag == [v],
                NodeKind::Introduce(v) => {
                    node.children.len() == 1
                        && !child(0).contains(&v)
                        && with(child(0), v) == node.bag
                }
                NodeKind::Forget(v) => {
                    node.children.len() == 1
                        && child(0).contains(&v)
                        && without(child(0), v) == node.bag
                }
                NodeKind::Join => {
                    node.children.len() == 2 && *child(0) == node.bag && *child(1) == node.bag
                }
            };
            if !ok {
                return Err(invalid(format!(
                    "node {i} violates its {:?} kind",
                    node.kind
                )));
            }
        }
        let mut parents = vec![0usize; self.nodes.len()];
        for node in &self.nodes {
            for &c in &node.children {
                parents[c] += 1;
            }
        }
        if let Some(r) = self.root() {
            if self.nodes[r].bag.len() != 1 {
                return Err(invalid("root bag is not a singleton"));
            }
            if parents[..r].iter().any(|&p| p != 1) || parents[r] != 0 {
                return Err(invalid("nodes do not form a single rooted tree"));
            }
        }
        Ok(())
    }

    fn push(&mut self, kind: NodeKind, bag: Vec<usize>, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode {
            kind,
            bag,
            children,
        });
        self.nodes.len() - 1
    }

    fn forget(&mut self, child: usize, v: usize) -> usize {
        let bag = without(&self.nodes[child].bag, v);
        self.push(NodeKind::Forget(v), bag, vec![child])
    }

    fn introduce(&mut self, child: usize, v: usize) -> usize {
        let bag = with(&self.nodes[child].bag, v);
        self.push(NodeKind::Introduce(v), bag, vec![child])
    }
}

fn with(bag: &[usize], v: usize) -> Vec<usize> {
    let mut b = bag.to_vec();
    let pos = b.binary_search(&v).unwrap_or_else(|p| p);
    b.insert(pos, v);
    b
}

fn without(bag: &[usize], v: usize) -> Vec<usize> {
    bag.iter().copied().filter(|&w| w != v).collect()
}

/// Converts a decomposition into a nice one of the same width, rooted at
/// the first nonempty bag and closed by a forget chain down to one vertex.
/// Empty bags are bypassed.
pub fn make_nice(td: &TreeDecomposition) -> Result<NiceTreeDecomposition> {
    let nb = td.bags.len();
    if td.edges.iter().any(|&(a, b)| a >= nb || b >= nb) {
        return Err(invalid("tree edge refers to a missing bag"));
    }
    if nb > 0 && td.edges.len() != nb - 1 {
        return Err(invalid("decomposition graph is not a tree"));
    }
    let mut out = NiceTreeDecomposition::default();
    let Some(root) = (0..nb).find(|&i| !td.bags[i].is_empty()) else {
        return Ok(out);
    };
    let adj = td.adjacency();
    // effective parent: nearest nonempty ancestor
    let mut parent = vec![usize::MAX; nb];
    let mut eff_parent = vec![usize::MAX; nb];
    let mut order = vec![root];
    parent[root] = root;
    let mut i = 0;
    while i < order.len() {
        let a = order[i];
        i += 1;
        for &b in &adj[a] {
            if parent[b] == usize::MAX {
                parent[b] = a;
                eff_parent[b] = if td.bags[a].is_empty() {
                    eff_parent[a]
                } else {
                    a
                };
                order.push(b);
            }
        }
    }
    if order.len() != nb {
        return Err(invalid("decomposition graph is not connected"));
    }
    let mut kids: Vec<Vec<usize>> = vec![Vec::new(); nb];
    for &b in &order[1..] {
        if !td.bags[b].is_empty() {
            kids[eff_parent[b]].push(b);
        }
    }
    let mut nice_root = vec![usize::MAX; nb];
    for &t in order.iter().rev() {
        let bag = &td.bags[t];
        if bag.is_empty() {
            continue;
        }
        let mut subs = Vec::new();
        for &c in &kids[t] {
            let mut cur = nice_root[c];
            for &v in &td.bags[c] {
                if bag.binary_search(&v).is_err() {
                    cur = out.forget(cur, v);
                }
            }
            for &v in bag {
                if td.bags[c].binary_search(&v).is_err() {
                    cur = out.introduce(cur, v);
                }
            }
            subs.push(cur);
        }
        let top = if subs.is_empty() {
            let mut cur = out.push(NodeKind::Leaf(bag[0]), vec![bag[0]], Vec::new());
            for &v in &bag[1..] {
                cur = out.introduce(cur, v);
            }
            cur
        } else {
            let mut cur = subs[0];
            for &s in &subs[1..] {
                cur = out.push(NodeKind::Join, bag.clone(), vec![cur, s]);
            }
            cur
        };
        nice_root[t] = top;
    }
    let mut cur = nice_root[root];
    for &v in &td.bags[root][1..] {
        cur = out.forget(cur, v);
    }
    debug_assert_eq!(cur, out.nodes.len() - 1);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_bag_is_single_leaf() {
        let td = TreeDecomposition::new(vec![vec![0]], vec![]);
        let nice = make_nice(&td).unwrap();
        assert_eq!(nice.nodes.len(), 1);
        assert_eq!(nice.nodes[0].kind, NodeKind::Leaf(0));
        nice.audit().unwrap();
    }

    #[test]
    fn two_bag_path() {
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        let nice = make_nice(&td).unwrap();
        nice.audit().unwrap();
        assert_eq!(nice.width(), 1);
        assert!(nice.nodes.iter().all(|n| !matches!(n.kind, NodeKind::Join)));
        assert!(nice.nodes.len() <= 4 * 3);
    }

    #[test]
    fn star_makes_joins_and_skips_empty_bags() {
        let td = TreeDecomposition::new(
            vec![vec![], vec![0, 1], vec![2, 3], vec![4, 5]],
            vec![(0, 1), (0, 2), (0, 3)],
        );
        let nice = make_nice(&td).unwrap();
        nice.audit().unwrap();
        assert!(nice.nodes.iter().any(|n| n.kind == NodeKind::Join));
    }
}
