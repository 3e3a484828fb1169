use std::f64::consts::PI;

use compat_core::gen::Rng;
use compat_core::ramp::geometry::{segment_distance, wedge_hits};
use compat_core::ramp::{
    random_scene, reduce_to_2co, schedule_from_solution, segments_intersect, sweep_hits,
    verify_schedule, Dir, Point, Schedule, Segment, Step, SweepWedge, EPSILON, VERTICAL,
};
use compat_core::{solve_exact, verify_direct};

fn point_seg(x: (f64, f64), s: &Segment) -> f64 {
    let (dx, dy) = (s.q.x - s.p.x, s.q.y - s.p.y);
    let t = (((x.0 - s.p.x) * dx + (x.1 - s.p.y) * dy) / (dx * dx + dy * dy)).clamp(0.0, 1.0);
    ((x.0 - s.p.x - t * dx).powi(2) + (x.1 - s.p.y - t * dy).powi(2)).sqrt()
}

#[test]
fn segment_test_matches_point_sampling() {
    let mut rng = Rng::seeded(21);
    let samples = 10_000;
    let mut checked = 0;
    for _ in 0..300 {
        let a = Segment::arm(Point::new(0.0, 0.0), rng.range(0.0, PI));
        let b = Segment::arm(
            Point::new(rng.range(-1.2, 1.2), rng.range(-1.2, 1.2)),
            rng.range(0.0, PI),
        );
        let spacing = 1.0 / samples as f64;
        let min = (0..=samples)
            .map(|i| {
                let t = i as f64 * spacing;
                point_seg(
                    (a.p.x + t * (a.q.x - a.p.x), a.p.y + t * (a.q.y - a.p.y)),
                    &b,
                )
            })
            .fold(f64::INFINITY, f64::min);
        let got = segments_intersect(&a, &b, EPSILON);
        if min <= EPSILON {
            assert!(got);
        } else if min > spacing {
            assert!(!got);
        } else {
            continue;
        }
        checked += 1;
    }
    assert!(checked > 250);
}

fn sampled_hit(w: &SweepWedge, other: &Segment, steps: usize) -> Option<bool> {
    let len = w.length();
    let sign = match w.dir {
        Dir::Ccw => 1.0,
        Dir::Cw => -1.0,
    };
    let angles: Vec<f64> = if len == 0.0 {
        vec![w.end_angle]
    } else {
        (1..=steps)
            .map(|s| w.start_angle + sign * len * s as f64 / steps as f64)
            .collect()
    };
    let min = angles
        .iter()
        .map(|&a| segment_distance(&Segment::arm(w.center, a), other))
        .fold(f64::INFINITY, f64::min);
    // tip displacement between samples bounds the error
    let band = 0.5 * len / steps as f64 + EPSILON;
    if min <= EPSILON {
        Some(true)
    } else if min > band {
        Some(false)
    } else {
        None
    }
}

#[test]
fn sweep_matches_rotation_sampling() {
    let mut rng = Rng::seeded(4);
    let (mut hits, mut misses) = (0, 0);
    for _ in 0..600 {
        let c = Point::new(0.0, 0.0);
        let start = rng.range(0.0, PI);
        let target = if rng.chance(0.5) {
            VERTICAL
        } else {
            rng.range(0.0, PI)
        };
        let dir = if rng.chance(0.5) { Dir::Cw } else { Dir::Ccw };
        let other = Segment::arm(
            Point::new(rng.range(-1.1, 1.1), rng.range(-1.1, 1.1)),
            rng.range(0.0, PI),
        );
        if segment_distance(&Segment::arm(c, start), &other) <= 1e-3 {
            continue;
        }
        let w = SweepWedge::new(c, start, target, dir);
        let Some(expect) = sampled_hit(&w, &other, 2000) else {
            continue;
        };
        assert_eq!(wedge_hits(&w, &other, EPSILON), expect, "{w:?} {other:?}");
        if expect {
            hits += 1
        } else {
            misses += 1
        }
    }
    assert!(hits > 50 && misses > 50, "{hits} {misses}");
}

#[test]
fn sweep_is_monotone_in_arc() {
    let mut rng = Rng::seeded(8);
    for _ in 0..300 {
        let c = Point::new(0.0, 0.0);
        let start = rng.range(0.0, PI);
        let dir = if rng.chance(0.5) { Dir::Cw } else { Dir::Ccw };
        let other = Segment::arm(
            Point::new(rng.range(-1.0, 1.0), rng.range(-1.0, 1.0)),
            rng.range(0.0, PI),
        );
        let short = rng.range(0.0, 1.5);
        let long = short + rng.range(0.0, 1.5);
        let sign = if dir == Dir::Ccw { 1.0 } else { -1.0 };
        let small = sweep_hits(c, start, dir, start + sign * short, &other, EPSILON);
        let big = sweep_hits(c, start, dir, start + sign * long, &other, EPSILON);
        assert!(!small || big);
    }
}

#[test]
fn translation_invariance() {
    let mut rng = Rng::seeded(9);
    for _ in 0..50 {
        let scene = random_scene(&mut rng, 4, 1.6, EPSILON);
        let mut moved = scene.clone();
        let (dx, dy) = (rng.range(-10.0, 10.0), rng.range(-10.0, 10.0));
        for a in &mut moved.arms {
            a.cx += dx;
            a.cy += dy;
        }
        if scene.is_degenerate(1e-6) {
            continue;
        }
        let (i1, _) = reduce_to_2co(&scene, EPSILON).unwrap();
        let (i2, _) = reduce_to_2co(&moved, EPSILON).unwrap();
        assert_eq!(i1, i2);
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

#[test]
fn reduction_matches_schedule_search() {
    let mut rng = Rng::seeded(2);
    let (mut yes, mut no) = (0, 0);
    for _ in 0..40 {
        let n = 2 + rng.below(3);
        let scene = random_scene(&mut rng, n, 1.4, EPSILON);
        if scene.is_degenerate(EPSILON) {
            continue;
        }
        let (inst, map) = reduce_to_2co(&scene, EPSILON).unwrap();
        let found = permutations(n).into_iter().any(|perm| {
            (0..1u32 << n).any(|dirs| {
                let sched = Schedule {
                    steps: perm
                        .iter()
                        .map(|&i| Step {
                            arm: scene.arms[i].id.clone(),
                            dir: if dirs >> i & 1 == 0 {
                                Dir::Cw
                            } else {
                                Dir::Ccw
                            },
                        })
                        .collect(),
                };
                verify_schedule(&scene, &sched, EPSILON).unwrap().is_ok()
            })
        });
        let sol = solve_exact(&inst);
        assert_eq!(found, sol.is_some());
        if let Some(sol) = sol {
            yes += 1;
            assert!(verify_direct(&inst, &sol, true).is_ok());
            let sched = schedule_from_solution(&sol, &map).unwrap();
            assert_eq!(verify_schedule(&scene, &sched, EPSILON).unwrap(), Ok(()));
        } else {
            no += 1;
        }
    }
    assert!(yes > 5 && no > 2, "{yes} {no}");
}
