//! Seeded generators.
//!
//! All randomness comes from ChaCha8 (`rand_chacha`), whose output stream is
//! fixed by its specification; range reduction is done here so fixtures do
//! not depend on `rand` sampling internals.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{GraphTag, Instance, InstanceBuilder, Side, TagSet};
use crate::modular::{eval_md, instance_from_labeled, ModularDecomposition, Template};

pub struct Rng(ChaCha8Rng);

impl Rng {
    pub fn seeded(seed: u64) -> Self {
        Rng(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in `0..n` by rejection; `n` must be positive.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0, "empty range");
        let n = n as u64;
        let zone = u64::MAX - (u64::MAX % n);
        loop {
            let x = self.next_u64();
            if x < zone {
                return (x % n) as usize;
            }
        }
    }

    /// Uniform in `[0, 1)` with 53 bits.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.unit() < p
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }
}

/// Vertex `i` is named `v{i}`.
pub fn vertex_name(i: usize) -> String {
    format!("v{i}")
}

/// Every ordered pair lands in every graph independently with `density`.
pub fn random_instance(rng: &mut Rng, n: usize, k: usize, density: f64) -> Instance {
    let mut b = InstanceBuilder::new(k);
    for i in 0..n {
        b.vertex(vertex_name(i));
    }
    for l in 1..=k {
        for side in [Side::A, Side::B] {
            for u in 0..n {
                for v in 0..n {
                    if u != v && rng.chance(density) {
                        b.arc(side, l, u, v);
                    }
                }
            }
        }
    }
    b.build().expect("generated instance is valid")
}

/// `m` arcs spread over all graphs, each drawn uniformly among ordered pairs.
pub fn random_sparse_instance(rng: &mut Rng, n: usize, k: usize, m: usize) -> Instance {
    let mut b = InstanceBuilder::new(k);
    for i in 0..n {
        b.vertex(vertex_name(i));
    }
    if n >= 2 {
        for _ in 0..m {
            let u = rng.below(n);
            let v = (u + 1 + rng.below(n - 1)) % n;
            let side = if rng.below(2) == 0 { Side::A } else { Side::B };
            b.arc(side, 1 + rng.below(k), u, v);
        }
    }
    b.build().expect("generated instance is valid")
}

/// k = 1 instance whose union `A_1 ∪ B_1` is acyclic: arcs follow a hidden
/// random order.
pub fn random_dag_instance(rng: &mut Rng, n: usize, m: usize) -> Instance {
    let mut rank: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut rank);
    let mut b = InstanceBuilder::new(1);
    for i in 0..n {
        b.vertex(vertex_name(i));
    }
    if n >= 2 {
        for _ in 0..m {
            let x = rng.below(n);
            let y = (x + 1 + rng.below(n - 1)) % n;
            let (lo, hi) = if rank[x] < rank[y] { (x, y) } else { (y, x) };
            let side = if rng.below(2) == 0 { Side::A } else { Side::B };
            b.arc(side, 1, lo, hi);
        }
    }
    b.build().expect("generated instance is valid")
}

/// Instance whose undirected union is a subgraph of the `width`-th power
/// of a path, so its treewidth is at most `width`.
pub fn random_path_like_instance(
    rng: &mut Rng,
    n: usize,
    k: usize,
    width: usize,
    density: f64,
) -> Instance {
    let mut b = InstanceBuilder::new(k);
    for i in 0..n {
        b.vertex(vertex_name(i));
    }
    for u in 0..n {
        for v in u + 1..n.min(u + width + 1) {
            for l in 1..=k {
                for side in [Side::A, Side::B] {
                    if rng.chance(density) {
                        b.arc(side, l, u, v);
                    }
                    if rng.chance(density) {
                        b.arc(side, l, v, u);
                    }
                }
            }
        }
    }
    b.build().expect("generated instance is valid")
}

fn random_tags(rng: &mut Rng, k: usize) -> TagSet {
    loop {
        let mut t = TagSet::new();
        for l in 1..=k as u32 {
            if rng.chance(0.4) {
                t.insert(GraphTag::a(l));
            }
            if rng.chance(0.4) {
                t.insert(GraphTag::b(l));
            }
        }
        if !t.is_empty() {
            return t;
        }
    }
}

fn random_md_over(rng: &mut Rng, names: &[String], k: usize, width: usize) -> ModularDecomposition {
    if names.len() == 1 {
        return ModularDecomposition::Vertex {
            id: crate::model::VertexId::new(names[0].clone()).expect("nonempty"),
        };
    }
    let p = 2 + rng.below(width.min(names.len()) - 1);
    // p nonempty consecutive blocks
    let mut cuts: Vec<usize> = (1..names.len()).collect();
    rng.shuffle(&mut cuts);
    let mut cuts: Vec<usize> = cuts[..p - 1].to_vec();
    cuts.sort_unstable();
    let mut bounds = vec![0];
    bounds.extend(cuts);
    bounds.push(names.len());
    let children: Vec<ModularDecomposition> = bounds
        .windows(2)
        .map(|w| random_md_over(rng, &names[w[0]..w[1]], k, width))
        .collect();
    if rng.chance(0.25) {
        return ModularDecomposition::Union { children };
    }
    let mut arcs = Vec::new();
    for x in 0..p {
        for y in 0..p {
            if x != y && rng.chance(0.35) {
                arcs.push((x, y, random_tags(rng, k)));
            }
        }
    }
    ModularDecomposition::Subst {
        template: Template { p, arcs },
        children,
    }
}

/// Random decomposition with at most `width` children per node, and the
/// instance it evaluates to.
pub fn random_modular_instance(
    rng: &mut Rng,
    n: usize,
    k: usize,
    width: usize,
) -> (Instance, ModularDecomposition) {
    assert!(n >= 1 && width >= 2);
    let mut names: Vec<String> = (0..n).map(vertex_name).collect();
    rng.shuffle(&mut names);
    let md = random_md_over(rng, &names, k, width);
    let ld = eval_md(&md).expect("generated decomposition is valid");
    (instance_from_labeled(&ld, k).expect("labels within k"), md)
}
