use compat_core::gen::{random_instance, Rng};
use compat_core::{
    induced_instance, is_legal_move, reverse_graph, solve_bfs, verify_direct, verify_residual,
    verify_sequence, ArrangementInstance, LabeledOrdering, Op, VertexId,
};
use proptest::prelude::*;

fn instance(seed: u64, n: usize, k: usize, density: f64) -> compat_core::Instance {
    random_instance(&mut Rng::seeded(seed), n, k, density)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reversing_twice_is_identity(seed in any::<u64>(), n in 1usize..12, d in 0.0f64..0.6) {
        let inst = instance(seed, n, 1, d);
        let g = inst.a(0);
        prop_assert_eq!(&reverse_graph(&reverse_graph(g)), g);
    }

    #[test]
    fn induction_composes(seed in any::<u64>(), n in 1usize..10, keep in any::<u16>(), inner in any::<u16>()) {
        let inst = instance(seed, n, 2, 0.3);
        let outer: Vec<VertexId> = (0..n).filter(|i| keep >> i & 1 == 1).map(|i| inst.id(i).clone()).collect();
        let nested: Vec<VertexId> = outer.iter().enumerate().filter(|(i, _)| inner >> i & 1 == 1).map(|(_, v)| v.clone()).collect();
        let step = induced_instance(&induced_instance(&inst, &outer).unwrap(), &nested).unwrap();
        prop_assert_eq!(step, induced_instance(&inst, &nested).unwrap());
    }

    #[test]
    fn direct_and_residual_checks_agree(seed in any::<u64>(), n in 1usize..8, k in 1usize..4, d in 0.0f64..0.4) {
        let inst = instance(seed, n, k, d);
        let mut rng = Rng::seeded(seed ^ 0x9e37);
        let mut order: Vec<usize> = (0..n).collect();
        rng.shuffle(&mut order);
        let placements: Vec<(usize, usize)> = order.iter().map(|&v| (v, rng.below(k))).collect();
        let sol = LabeledOrdering::from_placements(&inst, &placements);
        prop_assert_eq!(verify_direct(&inst, &sol, true).is_ok(), verify_residual(&inst, &sol).unwrap());
    }

    #[test]
    fn add_and_remove_are_dual(seed in any::<u64>(), n in 1usize..8, k in 1usize..3, mask in any::<u8>(), v in 0usize..8) {
        let v = v % n;
        let base = instance(seed, n, k, 0.35);
        let inst = ArrangementInstance::new(base, &[], &[]).unwrap();
        let mut with: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
        with[v] = true;
        let mut without = with.clone();
        without[v] = false;
        for l in 1..=k as u32 {
            prop_assert_eq!(
                is_legal_move(&inst, &without, v, Op::Add, l),
                is_legal_move(&inst, &with, v, Op::Remove, l)
            );
        }
    }

    #[test]
    fn reversed_sequence_solves_swapped_instance(seed in any::<u64>(), n in 1usize..7, s in any::<u8>(), t in any::<u8>()) {
        let base = instance(seed, n, 2, 0.25);
        let pick = |m: u8| (0..n).filter(|i| m >> i & 1 == 1).collect::<Vec<_>>();
        let fwd = ArrangementInstance::new(base.clone(), &pick(s), &pick(t)).unwrap();
        let back = ArrangementInstance::new(base, &pick(t), &pick(s)).unwrap();
        let a = solve_bfs(&fwd).unwrap();
        prop_assert_eq!(a.is_some(), solve_bfs(&back).unwrap().is_some());
        if let Some(seq) = a {
            prop_assert!(verify_sequence(&back, &seq.reversed()).is_ok());
        }
    }
}
