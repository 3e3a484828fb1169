use std::path::PathBuf;

use compat_core::modular::{eval_md, instance_from_labeled, solve_modular, ModularDecomposition};
use compat_core::ramp::{reduce_to_2co, render_svg, verify_schedule, Scene, Schedule, EPSILON};
use compat_core::reductions::{reduce_sat_reversed, CnfFormula};
use compat_core::{solve_exact, verify_direct, Instance, LabeledOrdering};

fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn five_arm_scene_facts() {
    let scene = Scene::from_json(&fixture("five_arm_scene.json")).unwrap();
    let sched = Schedule::from_json(&fixture("five_arm_schedule.json")).unwrap();
    let (inst, _) = reduce_to_2co(&scene, EPSILON).unwrap();
    let idx = |s: &str| inst.vertices().index_of(s).unwrap();
    assert!(inst.a(0).has_arc(idx("r3"), idx("r5")));
    assert!(!inst.b(1).has_arc(idx("r3"), idx("r5")));
    assert_eq!(verify_schedule(&scene, &sched, EPSILON).unwrap(), Ok(()));
    let sol =
        LabeledOrdering::from_names(&["r1", "r5", "r3", "r4", "r2"], &[1, 2, 1, 2, 2]).unwrap();
    assert!(verify_direct(&inst, &sol, true).is_ok());
    assert!(!scene.is_degenerate(1e-6));
}

#[test]
fn five_arm_svg_matches_golden() {
    let scene = Scene::from_json(&fixture("five_arm_scene.json")).unwrap();
    let sched = Schedule::from_json(&fixture("five_arm_schedule.json")).unwrap();
    assert_eq!(render_svg(&scene, Some(&sched)), fixture("five_arm.svg"));
}

#[test]
fn two_clause_instance_and_witness() {
    let f = CnfFormula::from_dimacs(&fixture("two_clause.cnf")).unwrap();
    let (built, _) = reduce_sat_reversed(&f).unwrap();
    let stored = Instance::from_json(&fixture("two_clause_instance.json")).unwrap();
    assert_eq!(built, stored);
    let sol = LabeledOrdering::from_json(&fixture("two_clause_solution.json")).unwrap();
    assert!(verify_direct(&stored, &sol, true).is_ok());
}

/// The label-selection program only builds orderings in which every
/// module's vertices stay contiguous. Here the only solutions put `c`
/// between the two inner vertices, so the program answers no.
#[test]
fn known_gap_noncontiguous_witness() {
    let text = fixture("modular_noncontiguous.json");
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let md: ModularDecomposition = serde_json::from_value(v["decomposition"].clone()).unwrap();
    let k = v["k"].as_u64().unwrap() as usize;
    let witness: LabeledOrdering = serde_json::from_value(v["witness"].clone()).unwrap();
    let inst = instance_from_labeled(&eval_md(&md).unwrap(), k).unwrap();
    assert!(verify_direct(&inst, &witness, true).is_ok());
    assert!(solve_exact(&inst).is_some());
    assert_eq!(solve_modular(&inst, &md).unwrap(), None);
}
