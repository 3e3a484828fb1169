//! Single-move robotic arm planning: scenes of unit arms that must each turn
//! once to vertical, the reduction to 2-compatible ordering, schedule checks
//! and SVG output.

pub mod geometry;
mod svg;

pub use geometry::{
    norm_angle, segments_intersect, sweep_hits, Dir, Point, Segment, SweepWedge, EPSILON,
};
pub use svg::render_svg;

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::model::{Instance, InstanceBuilder, LabeledOrdering, Side, VertexId};
use geometry::{segments_degenerate, wedge_degenerate, wedge_hits};

pub const SCENE_SCHEMA: &str = "arm-scene/1";
pub const SCHEDULE_SCHEMA: &str = "arm-schedule/1";

pub const VERTICAL: f64 = FRAC_PI_2;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Arm {
    pub id: String,
    pub cx: f64,
    pub cy: f64,
    pub angle: f64,
}

impl Arm {
    pub fn new(id: impl Into<String>, cx: f64, cy: f64, angle: f64) -> Self {
        Arm {
            id: id.into(),
            cx,
            cy,
            angle,
        }
    }

    pub fn center(&self) -> Point {
        Point::new(self.cx, self.cy)
    }

    pub fn segment(&self) -> Segment {
        Segment::arm(self.center(), self.angle)
    }

    pub fn segment_at(&self, angle: f64) -> Segment {
        Segment::arm(self.center(), angle)
    }

    pub fn is_vertical(&self) -> bool {
        self.angle == VERTICAL
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scene {
    pub arms: Vec<Arm>,
}

impl Scene {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scene serializes")
    }

    /// Ids unique and nonempty, angles in `[0, π)`, centers distinct.
    pub fn check_shape(&self) -> Result<()> {
        let mut seen = HashMap::new();
        for (i, a) in self.arms.iter().enumerate() {
            if a.id.is_empty() {
                return Err(Error::EmptyVertexId);
            }
            if seen.insert(a.id.as_str(), i).is_some() {
                return Err(Error::DuplicateVertex(a.id.clone()));
            }
            if !(a.cx.is_finite() && a.cy.is_finite()) || !(0.0..PI).contains(&a.angle) {
                return Err(invalid(format!("arm `{}` has a bad center or angle", a.id)));
            }
        }
        for (i, a) in self.arms.iter().enumerate() {
            for b in &self.arms[i + 1..] {
                if a.cx == b.cx && a.cy == b.cy {
                    return Err(invalid(format!(
                        "arms `{}` and `{}` share a center",
                        a.id, b.id
                    )));
                }
            }
        }
        Ok(())
    }

    /// First pair of intersecting arms in the initial configuration.
    pub fn first_conflict(&self, eps: f64) -> Option<(usize, usize)> {
        for i in 0..self.arms.len() {
            for j in i + 1..self.arms.len() {
                if segments_intersect(&self.arms[i].segment(), &self.arms[j].segment(), eps) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.arms.iter().position(|a| a.id == id)
    }

    /// Some predicate used by the reduction lies within `10·eps` of its
    /// decision boundary.
    pub fn is_degenerate(&self, eps: f64) -> bool {
        let n = self.arms.len();
        for i in 0..n {
            let ri = &self.arms[i];
            for j in 0..n {
                if i == j {
                    continue;
                }
                let rj = &self.arms[j];
                for dir in [Dir::Cw, Dir::Ccw] {
                    let w = SweepWedge::new(ri.center(), ri.angle, VERTICAL, dir);
                    if wedge_degenerate(&w, &rj.segment(), eps)
                        || wedge_degenerate(&w, &rj.segment_at(VERTICAL), eps)
                    {
                        return true;
                    }
                }
                let pairs = [
                    (ri.segment(), rj.segment()),
                    (ri.segment_at(VERTICAL), rj.segment()),
                    (ri.segment_at(VERTICAL), rj.segment_at(VERTICAL)),
                ];
                if pairs.iter().any(|(a, b)| segments_degenerate(a, b, eps)) {
                    return true;
                }
            }
        }
        false
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Step {
    pub arm: String,
    pub dir: Dir,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Schedule {
    pub steps: Vec<Step>,
}

impl Schedule {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("schedule serializes")
    }
}

/// Vertex `i` of the reduced instance stands for arm `i` and carries its id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArmMap {
    pub arm_ids: Vec<String>,
}

impl ArmMap {
    pub fn vertex_of(&self, arm: &str) -> Option<VertexId> {
        self.arm_ids
            .iter()
            .any(|a| a == arm)
            .then(|| VertexId::new(arm).expect("nonempty arm id"))
    }
}

/// Builds the 2-label instance: `A_l` holds `i -> j` when arm `i`'s rotation
/// in direction `l` hits arm `j` at its initial angle; `B_l` holds `i -> j`
/// when vertical arm `i` is hit by arm `j`'s rotation in direction `l` or
/// crosses arm `j`'s initial position (then in both `B` graphs).
pub fn reduce_to_2co(scene: &Scene, eps: f64) -> Result<(Instance, ArmMap)> {
    scene.check_shape()?;
    if let Some((i, j)) = scene.first_conflict(eps) {
        return Err(invalid(format!(
            "arms `{}` and `{}` intersect initially",
            scene.arms[i].id, scene.arms[j].id
        )));
    }
    let n = scene.arms.len();
    let mut b = InstanceBuilder::new(2);
    for a in &scene.arms {
        b.vertex(a.id.as_str());
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let arcs = crate::par::map(&pairs, |&(i, j)| {
        let (ri, rj) = (&scene.arms[i], &scene.arms[j]);
        let mut out = Vec::new();
        for dir in [Dir::Cw, Dir::Ccw] {
            let l = dir.label() as usize;
            if sweep_hits(ri.center(), ri.angle, dir, VERTICAL, &rj.segment(), eps) {
                out.push((Side::A, l));
            }
            let vertical_i = ri.segment_at(VERTICAL);
            if sweep_hits(rj.center(), rj.angle, dir, VERTICAL, &vertical_i, eps)
                || segments_intersect(&vertical_i, &rj.segment(), eps)
            {
                out.push((Side::B, l));
            }
        }
        out
    });
    for (&(i, j), found) in pairs.iter().zip(arcs) {
        for (side, l) in found {
            b.arc(side, l, i, j);
        }
    }
    Ok((
        b.build()?,
        ArmMap {
            arm_ids: scene.arms.iter().map(|a| a.id.clone()).collect(),
        },
    ))
}

/// Label 1 becomes clockwise, label 2 counter-clockwise; order is kept.
pub fn schedule_from_solution(sol: &LabeledOrdering, map: &ArmMap) -> Result<Schedule> {
    let steps = sol
        .iter()
        .map(|(v, l)| {
            if map.vertex_of(v.as_str()).is_none() {
                return Err(Error::UnknownVertex(v.to_string()));
            }
            let dir = Dir::from_label(l).ok_or(Error::LabelOutOfRange { label: l, k: 2 })?;
            Ok(Step {
                arm: v.to_string(),
                dir,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Schedule { steps })
}

pub fn solution_from_schedule(sched: &Schedule, map: &ArmMap) -> Result<LabeledOrdering> {
    let order = sched
        .steps
        .iter()
        .map(|s| {
            map.vertex_of(&s.arm)
                .ok_or_else(|| Error::UnknownVertex(s.arm.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    LabeledOrdering::new(order, sched.steps.iter().map(|s| s.dir.label()).collect())
}

/// First rotation that hits another arm.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Collision {
    pub step: usize,
    pub arm: String,
    pub hit: String,
}

impl std::fmt::Display for Collision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "step {}: arm {} hits {}", self.step, self.arm, self.hit)
    }
}

/// Simulates the schedule. Every non-vertical arm must appear exactly once;
/// vertical arms may appear once (as a rotation of length zero) or not at
/// all.
pub fn verify_schedule(
    scene: &Scene,
    sched: &Schedule,
    eps: f64,
) -> Result<std::result::Result<(), Collision>> {
    scene.check_shape()?;
    let n = scene.arms.len();
    let mut used = vec![false; n];
    let mut steps = Vec::with_capacity(sched.steps.len());
    for s in &sched.steps {
        let i = scene
            .index_of(&s.arm)
            .ok_or_else(|| Error::UnknownVertex(s.arm.clone()))?;
        if used[i] {
            return Err(invalid(format!("arm `{}` rotates twice", s.arm)));
        }
        used[i] = true;
        steps.push((i, s.dir));
    }
    if let Some(i) = (0..n).find(|&i| !used[i] && !scene.arms[i].is_vertical()) {
        return Err(invalid(format!("arm `{}` never rotates", scene.arms[i].id)));
    }
    let mut angle: Vec<f64> = scene.arms.iter().map(|a| a.angle).collect();
    for (step, &(i, dir)) in steps.iter().enumerate() {
        let ri = &scene.arms[i];
        let wedge = SweepWedge::new(ri.center(), angle[i], VERTICAL, dir);
        for j in 0..n {
            if j != i && wedge_hits(&wedge, &scene.arms[j].segment_at(angle[j]), eps) {
                return Ok(Err(Collision {
                    step,
                    arm: ri.id.clone(),
                    hit: scene.arms[j].id.clone(),
                }));
            }
        }
        angle[i] = VERTICAL;
    }
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (&scene.arms[i], &scene.arms[j]);
            if segments_intersect(&a.segment_at(VERTICAL), &b.segment_at(VERTICAL), eps) {
                return Ok(Err(Collision {
                    step: steps.len(),
                    arm: a.id.clone(),
                    hit: b.id.clone(),
                }));
            }
        }
    }
    Ok(Ok(()))
}

/// Conflict-free scene of `n` arms with centers uniform in a square of side
/// `spread`, drawn by rejection.
pub fn random_scene(rng: &mut crate::gen::Rng, n: usize, spread: f64, eps: f64) -> Scene {
    let mut arms: Vec<Arm> = Vec::with_capacity(n);
    while arms.len() < n {
        let cand = Arm::new(
            format!("r{}", arms.len() + 1),
            rng.range(0.0, spread),
            rng.range(0.0, spread),
            rng.range(0.0, PI),
        );
        let clear = arms.iter().all(|a| {
            (a.cx, a.cy) != (cand.cx, cand.cy)
                && !segments_intersect(&a.segment(), &cand.segment(), eps)
        });
        if clear {
            arms.push(cand);
        }
    }
    Scene { arms }
}
