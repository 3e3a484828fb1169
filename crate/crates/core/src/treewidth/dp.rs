//! Compliance tables over a nice tree decomposition.
//!
//! An entry of node `i` is a labeled ordering of its bag, stored at index
//! `rank(permutation) * k^t + Σ label[p] * k^p` where `p` ranges over bag
//! positions. It is true when some solution of the instance induced on the
//! subtree's vertices restricts to that labeled ordering.

use super::{validate_td, NiceTreeDecomposition, NodeKind};
use crate::error::{invalid, Error, Result};
use crate::model::{undirected_union, Instance, LabeledOrdering};
use crate::par;
use crate::verify::verify_direct;

pub const MAX_WIDTH: usize = 8;
pub const MAX_TABLE_ENTRIES: usize = 1 << 24;

const MAX_BAG: usize = MAX_WIDTH + 1;

#[derive(Clone, Copy)]
struct Entry {
    t: usize,
    /// Bag positions in order.
    perm: [u8; MAX_BAG],
    /// 0-based label per bag position.
    labels: [u8; MAX_BAG],
}

struct Indexer {
    k: usize,
    fact: [usize; MAX_BAG + 1],
}

impl Indexer {
    fn new(k: usize) -> Self {
        let mut fact = [1usize; MAX_BAG + 1];
        for i in 1..=MAX_BAG {
            fact[i] = fact[i - 1] * i;
        }
        Indexer { k, fact }
    }

    fn labelings(&self, t: usize) -> usize {
        self.k.pow(t as u32)
    }

    fn size(&self, t: usize) -> usize {
        self.fact[t] * self.labelings(t)
    }

    fn index(&self, e: &Entry) -> usize {
        let t = e.t;
        let mut rank = 0;
        for i in 0..t {
            let smaller = (i + 1..t).filter(|&j| e.perm[j] < e.perm[i]).count();
            rank += smaller * self.fact[t - 1 - i];
        }
        let mut lab = 0;
        for p in (0..t).rev() {
            lab = lab * self.k + e.labels[p] as usize;
        }
        rank * self.labelings(t) + lab
    }

    fn decode(&self, t: usize, idx: usize) -> Entry {
        let kt = self.labelings(t);
        let mut rank = idx / kt;
        let mut lab = idx % kt;
        let mut e = Entry {
            t,
            perm: [0; MAX_BAG],
            labels: [0; MAX_BAG],
        };
        let mut pool: Vec<u8> = (0..t as u8).collect();
        for i in 0..t {
            let f = self.fact[t - 1 - i];
            e.perm[i] = pool.remove(rank / f);
            rank %= f;
        }
        for p in 0..t {
            e.labels[p] = (lab % self.k) as u8;
            lab /= self.k;
        }
        e
    }
}

/// Per-label arc masks restricted to one bag.
struct BagArcs {
    /// `a_out[l][p]`: bag positions `q` with `bag[p] -> bag[q]` in `A_l`.
    a_out: Vec<[u16; MAX_BAG]>,
    /// `b_in[l][p]`: bag positions `q` with `bag[q] -> bag[p]` in `B_l`.
    b_in: Vec<[u16; MAX_BAG]>,
}

impl BagArcs {
    fn new(inst: &Instance, bag: &[usize]) -> Self {
        let k = inst.k();
        let mut a_out = vec![[0u16; MAX_BAG]; k];
        let mut b_in = vec![[0u16; MAX_BAG]; k];
        for l in 0..k {
            for (p, &u) in bag.iter().enumerate() {
                for (q, &w) in bag.iter().enumerate() {
                    if inst.a(l).has_arc(u, w) {
                        a_out[l][p] |= 1 << q;
                    }
                    if inst.b(l).has_arc(w, u) {
                        b_in[l][p] |= 1 << q;
                    }
                }
            }
        }
        BagArcs { a_out, b_in }
    }

    /// Whether the entry solves the instance induced on the bag.
    fn solves(&self, e: &Entry) -> bool {
        let mut earlier = 0u16;
        for i in 0..e.t {
            let p = e.perm[i] as usize;
            let l = e.labels[p] as usize;
            if self.a_out[l][p] & !earlier != 0 || self.b_in[l][p] & earlier != 0 {
                return false;
            }
            earlier |= 1 << p;
        }
        true
    }
}

#[derive(Clone, Debug, Default)]
struct Table {
    bits: Vec<bool>,
    /// Forget nodes: the first child entry that restricts to each entry.
    back: Vec<u32>,
}

/// All comp tables of a decomposition, kept for inspection.
#[derive(Debug)]
pub struct CompTables {
    k: usize,
    bags: Vec<Vec<usize>>,
    tables: Vec<Table>,
}

impl CompTables {
    pub fn len(&self, node: usize) -> usize {
        self.tables[node].bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    /// True entries of `node` as `(vertex order, 0-based labels in that order)`.
    pub fn true_entries(&self, node: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
        let ix = Indexer::new(self.k);
        let bag = &self.bags[node];
        self.tables[node]
            .bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| {
                let e = ix.decode(bag.len(), i);
                let order = (0..e.t).map(|j| bag[e.perm[j] as usize]).collect();
                let labels = (0..e.t)
                    .map(|j| e.labels[e.perm[j] as usize] as usize)
                    .collect();
                (order, labels)
            })
            .collect()
    }
}

fn check_input(inst: &Instance, ntd: &NiceTreeDecomposition) -> Result<()> {
    if let Some(&v) = ntd
        .nodes
        .iter()
        .flat_map(|n| &n.bag)
        .find(|&&v| v >= inst.n())
    {
        return Err(invalid(format!("decomposition vertex {v} not in instance")));
    }
    ntd.audit()?;
    validate_td(&undirected_union(inst), &ntd.to_td())
        .map_err(|d| invalid(format!("decomposition does not fit instance: {d}")))?;
    let width = ntd.width();
    if width > MAX_WIDTH {
        return Err(Error::TooLarge(format!(
            "width {width} exceeds the limit of {MAX_WIDTH}"
        )));
    }
    let ix = Indexer::new(inst.k());
    let biggest = ix.fact[width + 1]
        .saturating_mul(inst.k().checked_pow(width as u32 + 1).unwrap_or(usize::MAX));
    if biggest > MAX_TABLE_ENTRIES {
        return Err(Error::TooLarge(format!(
            "bag tables of {biggest} entries exceed {MAX_TABLE_ENTRIES}"
        )));
    }
    Ok(())
}

fn compute_node(
    inst: &Instance,
    ix: &Indexer,
    ntd: &NiceTreeDecomposition,
    tables: &[Table],
    i: usize,
) -> Table {
    let node = &ntd.nodes[i];
    let t = node.bag.len();
    let size = ix.size(t);
    match node.kind {
        NodeKind::Leaf(_) => Table {
            bits: vec![true; size],
            back: Vec::new(),
        },
        NodeKind::Join => {
            let l = &tables[node.children[0]].bits;
            let r = &tables[node.children[1]].bits;
            Table {
                bits: l.iter().zip(r).map(|(&a, &b)| a && b).collect(),
                back: Vec::new(),
            }
        }
        NodeKind::Introduce(v) => {
            let child = &tables[node.children[0]].bits;
            let pv = node
                .bag
                .binary_search(&v)
                .expect("introduced vertex in bag");
            let arcs = BagArcs::new(inst, &node.bag);
            let mut bits = vec![false; size];
            for (ci, _) in child.iter().enumerate().filter(|(_, &b)| b) {
                let ce = ix.decode(t - 1, ci);
                for at in 0..t {
                    let mut e = Entry {
                        t,
                        perm: [0; MAX_BAG],
                        labels: [0; MAX_BAG],
                    };
                    let shift = |q: u8| if q as usize >= pv { q + 1 } else { q };
                    for j in 0..t - 1 {
                        e.perm[j + (j >= at) as usize] = shift(ce.perm[j]);
                    }
                    e.perm[at] = pv as u8;
                    for q in 0..t - 1 {
                        e.labels[shift(q as u8) as usize] = ce.labels[q];
                    }
                    for l in 0..inst.k() {
                        e.labels[pv] = l as u8;
                        if arcs.solves(&e) {
                            bits[ix.index(&e)] = true;
                        }
                    }
                }
            }
            Table {
                bits,
                back: Vec::new(),
            }
        }
        NodeKind::Forget(v) => {
            let child = &tables[node.children[0]].bits;
            let pv = ntd.nodes[node.children[0]]
                .bag
                .binary_search(&v)
                .expect("forgotten vertex in child bag");
            let mut bits = vec![false; size];
            let mut back = vec![u32::MAX; size];
            for (ci, _) in child.iter().enumerate().filter(|(_, &b)| b) {
                let e = restrict(&ix.decode(t + 1, ci), pv);
                let idx = ix.index(&e);
                if !bits[idx] {
                    bits[idx] = true;
                    back[idx] = ci as u32;
                }
            }
            Table { bits, back }
        }
    }
}

/// Drops bag position `pv` from an entry.
fn restrict(ce: &Entry, pv: usize) -> Entry {
    let mut e = Entry {
        t: ce.t - 1,
        perm: [0; MAX_BAG],
        labels: [0; MAX_BAG],
    };
    let mut j = 0;
    for i in 0..ce.t {
        let q = ce.perm[i] as usize;
        if q != pv {
            e.perm[j] = if q > pv { q as u8 - 1 } else { q as u8 };
            j += 1;
        }
    }
    for q in 0..ce.t {
        if q != pv {
            e.labels[if q > pv { q - 1 } else { q }] = ce.labels[q];
        }
    }
    e
}

/// Bottom-up by height; nodes of equal height are independent.
fn levels(ntd: &NiceTreeDecomposition) -> Vec<Vec<usize>> {
    let mut height = vec![0usize; ntd.nodes.len()];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (i, node) in ntd.nodes.iter().enumerate() {
        height[i] = node
            .children
            .iter()
            .map(|&c| height[c] + 1)
            .max()
            .unwrap_or(0);
        if out.len() <= height[i] {
            out.resize(height[i] + 1, Vec::new());
        }
        out[height[i]].push(i);
    }
    out
}

fn run_tables(inst: &Instance, ntd: &NiceTreeDecomposition, keep_bits: bool) -> Vec<Table> {
    let ix = Indexer::new(inst.k());
    let mut tables: Vec<Table> = vec![Table::default(); ntd.nodes.len()];
    for level in levels(ntd) {
        let done = par::map(&level, |&i| compute_node(inst, &ix, ntd, &tables, i));
        for (&i, table) in level.iter().zip(done) {
            tables[i] = table;
            if !keep_bits {
                for &c in &ntd.nodes[i].children {
                    tables[c].bits = Vec::new();
                }
            }
        }
    }
    tables
}

/// Computes every comp table (validating the decomposition first).
pub fn comp_tables(inst: &Instance, ntd: &NiceTreeDecomposition) -> Result<CompTables> {
    check_input(inst, ntd)?;
    Ok(CompTables {
        k: inst.k(),
        bags: ntd.nodes.iter().map(|n| n.bag.clone()).collect(),
        tables: run_tables(inst, ntd, true),
    })
}

/// Decides the instance over `ntd` and rebuilds a witness by traceback.
/// The witness is always re-verified.
pub fn solve_treewidth(
    inst: &Instance,
    ntd: &NiceTreeDecomposition,
) -> Result<Option<LabeledOrdering>> {
    check_input(inst, ntd)?;
    let Some(root) = ntd.root() else {
        return Ok(Some(LabeledOrdering::empty()));
    };
    let tables = run_tables(inst, ntd, false);
    let Some(root_entry) = tables[root].bits.iter().position(|&b| b) else {
        return Ok(None);
    };
    let ix = Indexer::new(inst.k());
    let len = ntd.nodes.len();
    let mut chosen = vec![usize::MAX; len];
    chosen[root] = root_entry;
    for i in (0..len).rev() {
        let node = &ntd.nodes[i];
        let e = chosen[i];
        match node.kind {
            NodeKind::Leaf(_) => {}
            NodeKind::Join => {
                chosen[node.children[0]] = e;
                chosen[node.children[1]] = e;
            }
            NodeKind::Forget(_) => {
                chosen[node.children[0]] = tables[i].back[e] as usize;
            }
            NodeKind::Introduce(v) => {
                let pv = node
                    .bag
                    .binary_search(&v)
                    .expect("introduced vertex in bag");
                let ce = restrict(&ix.decode(node.bag.len(), e), pv);
                chosen[node.children[0]] = ix.index(&ce);
            }
        }
    }
    let mut seqs: Vec<Vec<(usize, usize)>> = vec![Vec::new(); len];
    for i in 0..len {
        let node = &ntd.nodes[i];
        let e = ix.decode(node.bag.len(), chosen[i]);
        seqs[i] = match node.kind {
            NodeKind::Leaf(v) => vec![(v, e.labels[0] as usize)],
            NodeKind::Forget(_) => std::mem::take(&mut seqs[node.children[0]]),
            NodeKind::Introduce(v) => {
                let mut seq = std::mem::take(&mut seqs[node.children[0]]);
                let pv = node
                    .bag
                    .binary_search(&v)
                    .expect("introduced vertex in bag");
                let at = (0..e.t)
                    .position(|j| e.perm[j] as usize == pv)
                    .expect("in perm");
                let slot = if at == 0 {
                    0
                } else {
                    let prev = node.bag[e.perm[at - 1] as usize];
                    seq.iter()
                        .position(|&(u, _)| u == prev)
                        .expect("bag vertex placed")
                        + 1
                };
                seq.insert(slot, (v, e.labels[pv] as usize));
                seq
            }
            NodeKind::Join => {
                let left = std::mem::take(&mut seqs[node.children[0]]);
                let right = std::mem::take(&mut seqs[node.children[1]]);
                interleave(&node.bag, left, right)
            }
        };
    }
    let witness = LabeledOrdering::from_placements(inst, &seqs[root]);
    verify_direct(inst, &witness, true)
        .map_err(|v| Error::Internal(format!("treewidth witness failed verification: {v}")))?;
    Ok(Some(witness))
}

/// Merges two witnesses that agree on `bag`: within each gap between
/// consecutive bag vertices, left-only vertices come before right-only ones.
fn interleave(
    bag: &[usize],
    left: Vec<(usize, usize)>,
    right: Vec<(usize, usize)>,
) -> Vec<(usize, usize)> {
    let in_bag = |v: usize| bag.binary_search(&v).is_ok();
    let split = |seq: Vec<(usize, usize)>| {
        let mut gaps: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
        let mut shared = Vec::new();
        for p in seq {
            if in_bag(p.0) {
                shared.push(p);
                gaps.push(Vec::new());
            } else {
                gaps.last_mut().expect("nonempty").push(p);
            }
        }
        (gaps, shared)
    };
    let (lg, shared) = split(left);
    let (rg, _) = split(right);
    let mut out = Vec::new();
    for (g, (l, r)) in lg.into_iter().zip(rg).enumerate() {
        out.extend(l);
        out.extend(r);
        if let Some(&p) = shared.get(g) {
            out.push(p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{InstanceBuilder, Side};
    use crate::treewidth::{heuristic_td, make_nice};

    #[test]
    fn index_roundtrip() {
        for k in 1..=3 {
            let ix = Indexer::new(k);
            for t in 0..=4 {
                for idx in 0..ix.size(t) {
                    assert_eq!(ix.index(&ix.decode(t, idx)), idx);
                }
            }
        }
    }

    #[test]
    fn table_sizes_and_no_arc_instance() {
        let mut b = InstanceBuilder::new(2);
        for i in 0..4 {
            b.vertex(format!("v{i}"));
        }
        let inst = b.build().unwrap();
        let ntd = make_nice(&heuristic_td(&undirected_union(&inst))).unwrap();
        let tables = comp_tables(&inst, &ntd).unwrap();
        let ix = Indexer::new(2);
        for (i, n) in ntd.nodes.iter().enumerate() {
            assert_eq!(tables.len(i), ix.size(n.bag.len()));
        }
        let sol = solve_treewidth(&inst, &ntd).unwrap().unwrap();
        assert_eq!(sol.len(), 4);
    }

    #[test]
    fn two_cycle_is_no() {
        let mut b = InstanceBuilder::new(1);
        let u = b.vertex("u");
        let v = b.vertex("v");
        b.arc(Side::A, 1, u, v).arc(Side::B, 1, v, u);
        let inst = b.build().unwrap();
        let ntd = make_nice(&heuristic_td(&undirected_union(&inst))).unwrap();
        assert_eq!(solve_treewidth(&inst, &ntd).unwrap(), None);
    }

    #[test]
    fn rejects_foreign_decomposition() {
        let mut b = InstanceBuilder::new(1);
        let u = b.vertex("u");
        let v = b.vertex("v");
        b.arc(Side::A, 1, u, v);
        let inst = b.build().unwrap();
        let td = crate::treewidth::TreeDecomposition::new(vec![vec![0], vec![1]], vec![(0, 1)]);
        assert!(solve_treewidth(&inst, &make_nice(&td).unwrap()).is_err());
    }
}
