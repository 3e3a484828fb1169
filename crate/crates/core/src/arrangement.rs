//! k-compatible set arrangement: grow and shrink a vertex set one vertex at
//! a time, each move carrying a label whose `A` graph forbids arcs into the
//! current set and whose `B` graph forbids arcs out of its complement.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::model::{Instance, InstanceBuilder, InstanceFile, PairFile, Side, VertexId};
use crate::ramp::geometry::{wedge_hits, Dir, Point, Segment, SweepWedge};

pub const ARRANGEMENT_SCHEMA: &str = "arrangement/1";
pub const MOVES_SCHEMA: &str = "move-sequence/1";
pub const TWO_ANGLE_SCHEMA: &str = "two-angle-scene/1";

/// Largest instance `solve_bfs` accepts.
pub const MAX_BFS_VERTICES: usize = 24;

#[derive(Clone, Debug, PartialEq)]
pub struct ArrangementInstance {
    base: Instance,
    start: Vec<bool>,
    target: Vec<bool>,
}

impl ArrangementInstance {
    pub fn new(base: Instance, start: &[usize], target: &[usize]) -> Result<Self> {
        let n = base.n();
        let mask = |set: &[usize]| -> Result<Vec<bool>> {
            let mut m = vec![false; n];
            for &v in set {
                if v >= n {
                    return Err(invalid(format!("vertex index {v} out of range")));
                }
                m[v] = true;
            }
            Ok(m)
        };
        Ok(ArrangementInstance {
            start: mask(start)?,
            target: mask(target)?,
            base,
        })
    }

    pub fn from_names(base: Instance, start: &[&str], target: &[&str]) -> Result<Self> {
        let vs = base.vertices().clone();
        let idx = |names: &[&str]| {
            names
                .iter()
                .map(|s| vs.require(s))
                .collect::<Result<Vec<_>>>()
        };
        let (s, t) = (idx(start)?, idx(target)?);
        Self::new(base, &s, &t)
    }

    pub fn base(&self) -> &Instance {
        &self.base
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn start(&self) -> &[bool] {
        &self.start
    }

    pub fn target(&self) -> &[bool] {
        &self.target
    }

    fn names(&self, m: &[bool]) -> Vec<String> {
        (0..self.n())
            .filter(|&v| m[v])
            .map(|v| self.base.id(v).to_string())
            .collect()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: ArrangementFile = serde_json::from_str(text)?;
        let base = Instance::try_from(InstanceFile {
            k: f.k,
            vertices: f.vertices,
            pairs: f.pairs,
        })?;
        let s: Vec<&str> = f.start.iter().map(String::as_str).collect();
        let t: Vec<&str> = f.target.iter().map(String::as_str).collect();
        Self::from_names(base, &s, &t)
    }

    pub fn to_json(&self) -> String {
        let inst = InstanceFile::from(&self.base);
        let f = ArrangementFile {
            k: inst.k,
            vertices: inst.vertices,
            pairs: inst.pairs,
            start: self.names(&self.start),
            target: self.names(&self.target),
        };
        serde_json::to_string_pretty(&f).expect("arrangement serializes")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArrangementFile {
    k: usize,
    vertices: Vec<String>,
    pairs: Vec<PairFile>,
    start: Vec<String>,
    target: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Op {
    Add,
    Remove,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Move {
    pub op: Op,
    pub vertex: VertexId,
    pub label: u32,
}

impl Move {
    pub fn new(op: Op, vertex: &str, label: u32) -> Result<Self> {
        Ok(Move {
            op,
            vertex: VertexId::new(vertex)?,
            label,
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoveSequence {
    pub moves: Vec<Move>,
}

impl MoveSequence {
    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// Runs the sequence backwards with every add turned into a remove and
    /// vice versa; labels are kept.
    pub fn reversed(&self) -> MoveSequence {
        MoveSequence {
            moves: self
                .moves
                .iter()
                .rev()
                .map(|m| Move {
                    op: match m.op {
                        Op::Add => Op::Remove,
                        Op::Remove => Op::Add,
                    },
                    ..m.clone()
                })
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("moves serialize")
    }
}

/// Legality of a single move against a membership vector. Out-of-range
/// labels are illegal.
pub fn is_legal_move(
    inst: &ArrangementInstance,
    state: &[bool],
    v: usize,
    op: Op,
    label: u32,
) -> bool {
    let k = inst.base.k();
    if label == 0 || label as usize > k || state[v] != (op == Op::Remove) {
        return false;
    }
    let l = label as usize - 1;
    // both tests look at the set with v left out
    let inside = |u: usize| u != v && state[u];
    let a_ok = inst.base.a(l).succ(v).iter().all(|&u| !inside(u));
    let b_ok = inst.base.b(l).pred(v).iter().all(|&u| inside(u));
    a_ok && b_ok
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FaultKind {
    UnknownVertex,
    LabelOutOfRange,
    AddPresent,
    RemoveAbsent,
    Illegal,
    WrongEnd,
}

/// Why a sequence fails; `index` is the offending move, or the sequence
/// length when replay ends away from the target.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SequenceFault {
    pub index: usize,
    pub kind: FaultKind,
}

impl fmt::Display for SequenceFault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "move {}: {:?}", self.index, self.kind)
    }
}

pub fn verify_sequence(
    inst: &ArrangementInstance,
    seq: &MoveSequence,
) -> Result<(), SequenceFault> {
    let mut state = inst.start.clone();
    let k = inst.base.k();
    for (index, m) in seq.moves.iter().enumerate() {
        let fault = |kind| SequenceFault { index, kind };
        let v = inst
            .base
            .vertices()
            .index_of(m.vertex.as_str())
            .ok_or(fault(FaultKind::UnknownVertex))?;
        if m.label == 0 || m.label as usize > k {
            return Err(fault(FaultKind::LabelOutOfRange));
        }
        match (m.op, state[v]) {
            (Op::Add, true) => return Err(fault(FaultKind::AddPresent)),
            (Op::Remove, false) => return Err(fault(FaultKind::RemoveAbsent)),
            _ => {}
        }
        if !is_legal_move(inst, &state, v, m.op, m.label) {
            return Err(fault(FaultKind::Illegal));
        }
        state[v] = m.op == Op::Add;
    }
    if state != inst.target {
        return Err(SequenceFault {
            index: seq.len(),
            kind: FaultKind::WrongEnd,
        });
    }
    Ok(())
}

/// Per-vertex, per-label neighbor masks for the bitmask search.
struct Masks {
    a_out: Vec<Vec<u32>>,
    b_in: Vec<Vec<u32>>,
}

impl Masks {
    fn new(inst: &Instance) -> Self {
        let bits = |nbrs: &[usize]| nbrs.iter().fold(0u32, |m, &u| m | 1 << u);
        let per = |side: Side| {
            (0..inst.n())
                .map(|v| {
                    (0..inst.k())
                        .map(|l| match side {
                            Side::A => bits(inst.a(l).succ(v)),
                            Side::B => bits(inst.b(l).pred(v)),
                        })
                        .collect()
                })
                .collect()
        };
        Masks {
            a_out: per(Side::A),
            b_in: per(Side::B),
        }
    }

    /// Smallest legal label for flipping `v` in `state`.
    fn label(&self, state: u32, v: usize, full: u32) -> Option<u32> {
        let rest = state & !(1 << v);
        let outside = full & !rest & !(1 << v);
        (0..self.a_out[v].len())
            .find(|&l| self.a_out[v][l] & rest == 0 && self.b_in[v][l] & outside == 0)
            .map(|l| l as u32 + 1)
    }

    /// Successors in canonical order: adds by vertex, then removes.
    fn successors(&self, state: u32, n: usize, full: u32) -> Vec<(u32, usize, u32)> {
        let adds = (0..n).filter(|&v| state >> v & 1 == 0);
        let removes = (0..n).filter(|&v| state >> v & 1 == 1);
        adds.chain(removes)
            .filter_map(|v| self.label(state, v, full).map(|l| (state ^ 1 << v, v, l)))
            .collect()
    }
}

const UNSEEN: u64 = u64::MAX;

/// Shortest move sequence from start to target, or `None` when the target
/// is unreachable. Moves use the smallest legal label.
pub fn solve_bfs(inst: &ArrangementInstance) -> Result<Option<MoveSequence>> {
    let n = inst.n();
    if n > MAX_BFS_VERTICES {
        return Err(Error::TooLarge(format!(
            "set arrangement search is limited to {MAX_BFS_VERTICES} vertices, got {n}"
        )));
    }
    let pack = |m: &[bool]| (0..n).filter(|&v| m[v]).fold(0u32, |s, v| s | 1 << v);
    let (start, target) = (pack(&inst.start), pack(&inst.target));
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let masks = Masks::new(&inst.base);
    // parent state in the low 32 bits, vertex and label above
    let mut seen = vec![UNSEEN; 1usize << n];
    seen[start as usize] = start as u64;
    let mut frontier = vec![start];
    while !frontier.is_empty() && seen[target as usize] == UNSEEN {
        let expanded = crate::par::map(&frontier, |&s| masks.successors(s, n, full));
        let mut next = Vec::new();
        for (&s, succ) in frontier.iter().zip(expanded) {
            for (t, v, l) in succ {
                if seen[t as usize] == UNSEEN {
                    seen[t as usize] = s as u64 | (v as u64) << 32 | (l as u64) << 40;
                    next.push(t);
                }
            }
        }
        frontier = next;
    }
    if seen[target as usize] == UNSEEN {
        return Ok(None);
    }
    let mut moves = Vec::new();
    let mut cur = target;
    while cur != start {
        let e = seen[cur as usize];
        let (prev, v, l) = (e as u32, (e >> 32 & 0xff) as usize, (e >> 40) as u32);
        moves.push(Move {
            op: if cur >> v & 1 == 1 {
                Op::Add
            } else {
                Op::Remove
            },
            vertex: inst.base.id(v).clone(),
            label: l,
        });
        cur = prev;
    }
    moves.reverse();
    Ok(Some(MoveSequence { moves }))
}

/// An arm that toggles between two angles; membership in the arrangement
/// means the arm rests at `a2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoAngleArm {
    pub id: String,
    pub cx: f64,
    pub cy: f64,
    pub a1: f64,
    pub a2: f64,
}

impl TwoAngleArm {
    pub fn center(&self) -> Point {
        Point::new(self.cx, self.cy)
    }

    pub fn at(&self, second: bool) -> Segment {
        Segment::arm(self.center(), if second { self.a2 } else { self.a1 })
    }

    /// Closed sector swept between the two angles along arc `label`
    /// (1 = clockwise from `a1`, 2 = counter-clockwise).
    pub fn sweep(&self, label: u32) -> SweepWedge {
        let dir = Dir::from_label(label).expect("label 1 or 2");
        SweepWedge::new(self.center(), self.a1, self.a2, dir).closed()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoAngleScene {
    pub arms: Vec<TwoAngleArm>,
    pub start: Vec<String>,
    pub target: Vec<String>,
}

impl TwoAngleScene {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scene serializes")
    }

    fn membership(&self, ids: &[String]) -> Result<Vec<bool>> {
        let mut m = vec![false; self.arms.len()];
        for id in ids {
            let i = self
                .arms
                .iter()
                .position(|a| &a.id == id)
                .ok_or_else(|| Error::UnknownVertex(id.clone()))?;
            m[i] = true;
        }
        Ok(m)
    }
}

/// Builds the 2-label arrangement. Along arc `l`, arm `v` needs every arm
/// it would sweep over at that arm's `a2` to be absent (`A_l` arc `v -> w`)
/// and every arm it would sweep over at `a1` to be present (`B_l` arc
/// `w -> v`).
pub fn two_angle_mmramp_to_arrangement(
    scene: &TwoAngleScene,
    eps: f64,
) -> Result<ArrangementInstance> {
    let n = scene.arms.len();
    let mut b = InstanceBuilder::new(2);
    let mut ids = BTreeSet::new();
    for a in &scene.arms {
        if !(a.cx.is_finite() && a.cy.is_finite() && a.a1.is_finite() && a.a2.is_finite()) {
            return Err(invalid(format!("arm `{}` has non-finite data", a.id)));
        }
        if !ids.insert(a.id.as_str()) {
            return Err(Error::DuplicateVertex(a.id.clone()));
        }
        b.vertex(a.id.as_str());
    }
    let (start, target) = (
        scene.membership(&scene.start)?,
        scene.membership(&scene.target)?,
    );
    for config in [&start, &target] {
        for i in 0..n {
            for j in i + 1..n {
                let (si, sj) = (scene.arms[i].at(config[i]), scene.arms[j].at(config[j]));
                if crate::ramp::segments_intersect(&si, &sj, eps) {
                    return Err(invalid(format!(
                        "arms `{}` and `{}` intersect in an end configuration",
                        scene.arms[i].id, scene.arms[j].id
                    )));
                }
            }
        }
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let found = crate::par::map(&pairs, |&(v, w)| {
        let mut out = Vec::new();
        for l in 1..=2u32 {
            let sweep = scene.arms[v].sweep(l);
            if wedge_hits(&sweep, &scene.arms[w].at(true), eps) {
                out.push((Side::A, l, v, w));
            }
            if wedge_hits(&sweep, &scene.arms[w].at(false), eps) {
                out.push((Side::B, l, w, v));
            }
        }
        out
    });
    for (side, l, u, v) in found.into_iter().flatten() {
        b.arc(side, l as usize, u, v);
    }
    let base = b.build()?;
    Ok(ArrangementInstance {
        base,
        start,
        target,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{random_instance, Rng};

    fn digon_instance() -> ArrangementInstance {
        let mut b = InstanceBuilder::new(2);
        let (u, v) = (b.vertex("u"), b.vertex("v"));
        for l in 1..=2 {
            b.arc(Side::A, l, u, v).arc(Side::A, l, v, u);
        }
        ArrangementInstance::new(b.build().unwrap(), &[0], &[1]).unwrap()
    }

    #[test]
    fn no_arcs_everything_legal() {
        let inst =
            ArrangementInstance::new(random_instance(&mut Rng::seeded(0), 3, 2, 0.0), &[], &[])
                .unwrap();
        for s in 0..8u32 {
            let state: Vec<bool> = (0..3).map(|v| s >> v & 1 == 1).collect();
            for v in 0..3 {
                let op = if state[v] { Op::Remove } else { Op::Add };
                assert!(is_legal_move(&inst, &state, v, op, 1));
                assert!(is_legal_move(&inst, &state, v, op, 2));
            }
        }
    }

    #[test]
    fn digon_blocks_adding_beside_partner() {
        let inst = digon_instance();
        for l in 1..=2 {
            assert!(!is_legal_move(&inst, &[true, false], 1, Op::Add, l));
            assert!(is_legal_move(&inst, &[true, false], 0, Op::Remove, l));
        }
        let seq = solve_bfs(&inst).unwrap().unwrap();
        assert_eq!(seq.len(), 2);
        assert_eq!(seq.moves[0].op, Op::Remove);
        assert!(verify_sequence(&inst, &seq).is_ok());
    }

    #[test]
    fn empty_and_single_add() {
        let inst = ArrangementInstance::from_names(
            crate::model::Instance::empty(
                std::sync::Arc::new(crate::model::VertexSet::new(["v"]).unwrap()),
                1,
            )
            .unwrap(),
            &[],
            &["v"],
        )
        .unwrap();
        let seq = solve_bfs(&inst).unwrap().unwrap();
        assert_eq!(seq.moves, vec![Move::new(Op::Add, "v", 1).unwrap()]);
        let same = ArrangementInstance::new(inst.base().clone(), &[0], &[0]).unwrap();
        assert_eq!(solve_bfs(&same).unwrap(), Some(MoveSequence::default()));
        assert!(verify_sequence(&same, &MoveSequence::default()).is_ok());
    }

    #[test]
    fn wrong_label_fails_at_zero() {
        let mut b = InstanceBuilder::new(2);
        let (u, v) = (b.vertex("u"), b.vertex("v"));
        b.arc(Side::A, 1, v, u);
        let inst = ArrangementInstance::new(b.build().unwrap(), &[0], &[0, 1]).unwrap();
        let good = MoveSequence {
            moves: vec![Move::new(Op::Add, "v", 2).unwrap()],
        };
        assert!(verify_sequence(&inst, &good).is_ok());
        let bad = MoveSequence {
            moves: vec![Move::new(Op::Add, "v", 1).unwrap()],
        };
        assert_eq!(
            verify_sequence(&inst, &bad),
            Err(SequenceFault {
                index: 0,
                kind: FaultKind::Illegal
            })
        );
        assert_eq!(
            verify_sequence(&inst, &MoveSequence::default())
                .unwrap_err()
                .kind,
            FaultKind::WrongEnd
        );
    }

    #[test]
    fn json_roundtrip() {
        let inst = digon_instance();
        let back = ArrangementInstance::from_json(&inst.to_json()).unwrap();
        assert_eq!(back, inst);
        let seq = solve_bfs(&inst).unwrap().unwrap();
        let text = seq.to_json();
        assert!(text.contains("\"op\":\"remove\""));
        assert_eq!(MoveSequence::from_json(&text).unwrap(), seq);
    }

    #[test]
    fn far_arms_have_no_arcs() {
        let scene = TwoAngleScene {
            arms: vec![
                TwoAngleArm {
                    id: "p".into(),
                    cx: 0.0,
                    cy: 0.0,
                    a1: 0.0,
                    a2: 1.0,
                },
                TwoAngleArm {
                    id: "q".into(),
                    cx: 5.0,
                    cy: 0.0,
                    a1: 0.5,
                    a2: 2.0,
                },
            ],
            start: vec![],
            target: vec!["p".into(), "q".into()],
        };
        let inst = two_angle_mmramp_to_arrangement(&scene, 1e-9).unwrap();
        assert_eq!(inst.base().total_arcs(), 0);
        assert_eq!(solve_bfs(&inst).unwrap().unwrap().len(), 2);
    }

    #[test]
    fn guard_refuses_large() {
        let inst = random_instance(&mut Rng::seeded(1), 25, 1, 0.0);
        let inst = ArrangementInstance::new(inst, &[], &[]).unwrap();
        assert!(matches!(solve_bfs(&inst), Err(Error::TooLarge(_))));
    }
}
