//! Complete backtracking search, the project-wide oracle.
//!
//! Vertices are placed front to back. A candidate `(v, l)` is legal when all
//! of `v`'s out-neighbors in `A_l` are already placed and none of its
//! in-neighbors in `B_l` are. Legality depends only on the placed set, so
//! placed sets proven dead are memoized.

use std::collections::HashSet;

use serde::Serialize;

use crate::model::{Instance, LabeledOrdering};
use crate::par;
use crate::poly::topo_order_multi;

/// Outcome of a search that may be cut off.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome<T = LabeledOrdering> {
    Solved(T),
    NoSolution,
    Unknown,
}

impl<T> SolveOutcome<T> {
    pub fn solution(self) -> Option<T> {
        match self {
            SolveOutcome::Solved(t) => Some(t),
            _ => None,
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> SolveOutcome<U> {
        match self {
            SolveOutcome::Solved(t) => SolveOutcome::Solved(f(t)),
            SolveOutcome::NoSolution => SolveOutcome::NoSolution,
            SolveOutcome::Unknown => SolveOutcome::Unknown,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ExactOptions {
    pub use_propagation: bool,
    /// Search-node budget; exceeding it yields [`SolveOutcome::Unknown`].
    pub max_nodes: Option<u64>,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions {
            use_propagation: true,
            max_nodes: None,
        }
    }
}

/// Necessary conditions derived from local arc patterns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropagationFacts {
    /// `forbidden[v][l]`: vertex `v` can never take 0-based label `l`.
    pub forbidden: Vec<Vec<bool>>,
    /// `(first, later)` index pairs that every solution respects.
    pub precedences: Vec<(usize, usize)>,
    pub infeasible: bool,
}

impl PropagationFacts {
    pub fn is_forbidden(&self, v: usize, l: usize) -> bool {
        self.forbidden[v][l]
    }
}

/// Label bans from `v -> w ∈ A_l` with `w -> v ∈ B_l`, and forced precedences
/// from arcs present in every `A` graph or in every `B` graph.
pub fn propagate(inst: &Instance) -> PropagationFacts {
    let n = inst.n();
    let k = inst.k();
    let mut forbidden = vec![vec![false; k]; n];
    for (l, pair) in inst.pairs().iter().enumerate() {
        for (v, w) in pair.a.arcs() {
            if pair.b.has_arc(w, v) {
                forbidden[v][l] = true;
            }
        }
    }
    let mut precedences = Vec::new();
    for side in [crate::model::Side::A, crate::model::Side::B] {
        let first = inst.pairs()[0].graph(side);
        for (v, w) in first.arcs() {
            if inst.pairs()[1..]
                .iter()
                .all(|p| p.graph(side).has_arc(v, w))
            {
                precedences.push((w, v));
            }
        }
    }
    precedences.sort_unstable();
    precedences.dedup();
    let forced = crate::model::Digraph::from_index_arcs(
        inst.vertices().clone(),
        precedences.iter().copied(),
    )
    .expect("precedences are in range");
    let infeasible =
        forbidden.iter().any(|f| f.iter().all(|&b| b)) || topo_order_multi(n, &[&forced]).is_none();
    PropagationFacts {
        forbidden,
        precedences,
        infeasible,
    }
}

#[derive(Clone)]
struct Search<'a> {
    /// Gives up (as a cutoff) once this returns true.
    cancel: Option<&'a (dyn Fn() -> bool + Sync)>,
    /// Take a safe move without branching when one exists.
    prune: bool,
    /// `B` out-neighbors (over all labels, with multiplicity) not yet placed.
    b_succ_pending: Vec<usize>,
    inst: &'a Instance,
    /// `(vertex, label)` allowed by propagation.
    allowed: Vec<Vec<bool>>,
    /// Forced predecessors per vertex.
    must_follow: Vec<Vec<usize>>,
    /// Out-neighbors in `A_l` not yet placed.
    a_pending: Vec<Vec<usize>>,
    /// In-neighbors in `B_l` already placed.
    b_placed: Vec<Vec<usize>>,
    placed: Vec<u64>,
    is_placed: Vec<bool>,
    trail: Vec<(usize, usize)>,
    dead: HashSet<Vec<u64>>,
    nodes: u64,
    max_nodes: Option<u64>,
    cap: usize,
    found: Vec<Vec<(usize, usize)>>,
    memo: bool,
}

enum Step {
    Found,
    Exhausted,
    Cutoff,
}

impl<'a> Search<'a> {
    fn new(inst: &'a Instance, opts: &ExactOptions) -> Option<Self> {
        let n = inst.n();
        let k = inst.k();
        let mut allowed = vec![vec![true; k]; n];
        let mut must_follow = vec![Vec::new(); n];
        if opts.use_propagation {
            let facts = propagate(inst);
            if facts.infeasible {
                return None;
            }
            for v in 0..n {
                for l in 0..k {
                    allowed[v][l] = !facts.forbidden[v][l];
                }
            }
            for &(first, later) in &facts.precedences {
                must_follow[later].push(first);
            }
        }
        let a_pending = (0..n)
            .map(|v| (0..k).map(|l| inst.a(l).succ(v).len()).collect())
            .collect();
        let b_succ_pending = (0..n)
            .map(|v| (0..k).map(|l| inst.b(l).succ(v).len()).sum())
            .collect();
        Some(Search {
            cancel: None,
            prune: true,
            b_succ_pending,
            inst,
            allowed,
            must_follow,
            a_pending,
            b_placed: vec![vec![0; k]; n],
            placed: vec![0; n.div_ceil(64)],
            is_placed: vec![false; n],
            trail: Vec::with_capacity(n),
            dead: HashSet::new(),
            nodes: 0,
            max_nodes: opts.max_nodes,
            cap: 1,
            found: Vec::new(),
            memo: true,
        })
    }

    fn legal(&self, v: usize, l: usize) -> bool {
        !self.is_placed[v]
            && self.allowed[v][l]
            && self.a_pending[v][l] == 0
            && self.b_placed[v][l] == 0
            && self.must_follow[v].iter().all(|&u| self.is_placed[u])
    }

    fn place(&mut self, v: usize, l: usize) {
        self.is_placed[v] = true;
        self.placed[v / 64] |= 1 << (v % 64);
        self.trail.push((v, l));
        for m in 0..self.inst.k() {
            for &p in self.inst.a(m).pred(v) {
                self.a_pending[p][m] -= 1;
            }
            for &s in self.inst.b(m).succ(v) {
                self.b_placed[s][m] += 1;
            }
            for &p in self.inst.b(m).pred(v) {
                self.b_succ_pending[p] -= 1;
            }
        }
    }

    fn unplace(&mut self) {
        let (v, _) = self.trail.pop().expect("nonempty trail");
        self.is_placed[v] = false;
        self.placed[v / 64] &= !(1 << (v % 64));
        for m in 0..self.inst.k() {
            for &p in self.inst.a(m).pred(v) {
                self.a_pending[p][m] += 1;
            }
            for &s in self.inst.b(m).succ(v) {
                self.b_placed[s][m] -= 1;
            }
            for &p in self.inst.b(m).pred(v) {
                self.b_succ_pending[p] += 1;
            }
        }
    }

    /// A legal move whose vertex has every `B` out-neighbor placed. Moving
    /// such a vertex to this position in any completion keeps it valid: it
    /// is legal here, arrives earlier for everyone who waits on it in an `A`
    /// graph and constrains nobody left through a `B` graph.
    fn safe_move(&self) -> Option<(usize, usize)> {
        (0..self.inst.n())
            .filter(|&v| !self.is_placed[v] && self.b_succ_pending[v] == 0)
            .find_map(|v| {
                (0..self.inst.k())
                    .find(|&l| self.legal(v, l))
                    .map(|l| (v, l))
            })
    }

    fn try_move(&mut self, v: usize, l: usize) -> Step {
        self.place(v, l);
        let step = self.run();
        self.unplace();
        step
    }

    fn run(&mut self) -> Step {
        if self.trail.len() == self.inst.n() {
            self.found.push(self.trail.clone());
            return if self.found.len() >= self.cap {
                Step::Found
            } else {
                Step::Exhausted
            };
        }
        if self.memo && self.dead.contains(&self.placed) {
            return Step::Exhausted;
        }
        self.nodes += 1;
        if self.max_nodes.is_some_and(|m| self.nodes > m) {
            return Step::Cutoff;
        }
        if self.nodes.is_multiple_of(1024) && self.cancel.is_some_and(|c| c()) {
            return Step::Cutoff;
        }
        let before = self.found.len();
        let forced = if self.prune { self.safe_move() } else { None };
        if let Some((v, l)) = forced {
            match self.try_move(v, l) {
                Step::Exhausted => {}
                other => return other,
            }
        } else {
            for v in 0..self.inst.n() {
                for l in 0..self.inst.k() {
                    if !self.legal(v, l) {
                        continue;
                    }
                    match self.try_move(v, l) {
                        Step::Exhausted => {}
                        other => return other,
                    }
                }
            }
        }
        if self.memo && self.found.len() == before {
            self.dead.insert(self.placed.clone());
        }
        Step::Exhausted
    }

    fn root_moves(&self) -> Vec<(usize, usize)> {
        (0..self.inst.n())
            .flat_map(|v| (0..self.inst.k()).map(move |l| (v, l)))
            .filter(|&(v, l)| self.legal(v, l))
            .collect()
    }
}

/// Full search returning `(vertex, 0-based label)` placements.
pub fn solve_exact_placements(
    inst: &Instance,
    opts: &ExactOptions,
) -> SolveOutcome<Vec<(usize, usize)>> {
    let Some(mut search) = Search::new(inst, opts) else {
        return SolveOutcome::NoSolution;
    };
    if inst.n() == 0 {
        return SolveOutcome::Solved(Vec::new());
    }
    // Budgeted runs stay sequential so the cutoff point is reproducible.
    if opts.max_nodes.is_none() && par::enabled() {
        let mut base = search.clone();
        while let Some((v, l)) = base.safe_move() {
            base.place(v, l);
        }
        if base.trail.len() == inst.n() {
            return SolveOutcome::Solved(base.trail);
        }
        let roots = base.root_moves();
        let hit = par::find_first_cancellable(&roots, |&(v, l), stop| {
            let mut s = base.clone();
            s.cancel = Some(stop);
            s.place(v, l);
            match s.run() {
                Step::Found => s.found.pop(),
                _ => None,
            }
        });
        return match hit {
            Some(p) => SolveOutcome::Solved(p),
            None => SolveOutcome::NoSolution,
        };
    }
    match search.run() {
        Step::Found => SolveOutcome::Solved(search.found.pop().expect("found")),
        Step::Exhausted => SolveOutcome::NoSolution,
        Step::Cutoff => SolveOutcome::Unknown,
    }
}

pub fn solve_exact_with(inst: &Instance, opts: &ExactOptions) -> SolveOutcome {
    solve_exact_placements(inst, opts).map(|p| LabeledOrdering::from_placements(inst, &p))
}

/// Complete search with propagation and no budget.
pub fn solve_exact(inst: &Instance) -> Option<LabeledOrdering> {
    solve_exact_with(inst, &ExactOptions::default()).solution()
}

/// All solutions in search order, at most `cap`.
pub fn enumerate_solutions(inst: &Instance, cap: usize) -> Vec<LabeledOrdering> {
    let opts = ExactOptions {
        use_propagation: false,
        max_nodes: None,
    };
    let Some(mut search) = Search::new(inst, &opts) else {
        return Vec::new();
    };
    search.cap = cap.max(1);
    search.memo = false;
    search.prune = false;
    search.run();
    search
        .found
        .iter()
        .map(|p| LabeledOrdering::from_placements(inst, p))
        .collect()
}

/// Lexicographic successor of a sorted `b`-subset of `0..n`.
fn next_subset(s: &mut [usize], n: usize) -> bool {
    let b = s.len();
    for i in (0..b).rev() {
        if s[i] < n - b + i {
            s[i] += 1;
            for j in i + 1..b {
                s[j] = s[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Ordering of some vertex subset of size at least `b`.
///
/// Dropping a vertex only drops constraints, so a solution of size `>= b`
/// exists iff one of size exactly `b` does. Subsets are tried in
/// lexicographic order.
pub fn solve_bounded_with(inst: &Instance, b: usize, opts: &ExactOptions) -> SolveOutcome {
    let n = inst.n();
    if b > n {
        return SolveOutcome::NoSolution;
    }
    if b == 0 {
        return SolveOutcome::Solved(LabeledOrdering::empty());
    }
    const CHUNK: usize = 512;
    let mut subset: Vec<usize> = (0..b).collect();
    let mut more = true;
    let mut unknown = false;
    while more {
        let mut chunk = Vec::with_capacity(CHUNK);
        while more && chunk.len() < CHUNK {
            chunk.push(subset.clone());
            more = next_subset(&mut subset, n);
        }
        let results = par::map(&chunk, |s| {
            let sub = inst.induce(s).expect("subset is valid");
            solve_exact_placements(&sub, opts)
                .map(|p| p.into_iter().map(|(i, l)| (s[i], l)).collect::<Vec<_>>())
        });
        for r in results {
            match r {
                SolveOutcome::Solved(p) => {
                    return SolveOutcome::Solved(LabeledOrdering::from_placements(inst, &p))
                }
                SolveOutcome::Unknown => unknown = true,
                SolveOutcome::NoSolution => {}
            }
        }
    }
    if unknown {
        SolveOutcome::Unknown
    } else {
        SolveOutcome::NoSolution
    }
}

pub fn solve_bounded(inst: &Instance, b: usize) -> Option<LabeledOrdering> {
    solve_bounded_with(inst, b, &ExactOptions::default()).solution()
}
