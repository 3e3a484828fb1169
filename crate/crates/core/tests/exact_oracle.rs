use compat_core::gen::{random_dag_instance, random_instance, Rng};
use compat_core::{
    enumerate_solutions, find_trivial_pair, solve_bounded, solve_exact, solve_exact_with, solve_k1,
    verify_direct, verify_residual, ExactOptions, Instance, LabeledOrdering,
};

/// Every vertex has no `A` arc to a later vertex and no `B` arc from an
/// earlier one, both under its own label.
fn literal_valid(inst: &Instance, order: &[usize], labels: &[usize]) -> bool {
    (0..order.len()).all(|i| {
        let (v, l) = (order[i], labels[i]);
        order[i + 1..].iter().all(|&w| !inst.a(l).has_arc(v, w))
            && order[..i].iter().all(|&w| !inst.b(l).has_arc(w, v))
    })
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

fn labelings(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0..k.pow(n as u32))
        .map(|mut c| {
            (0..n)
                .map(|_| {
                    let l = c % k;
                    c /= k;
                    l
                })
                .collect()
        })
        .collect()
}

fn brute_count(inst: &Instance, subset: &[usize]) -> usize {
    let labs = labelings(subset.len(), inst.k());
    permutations(subset)
        .iter()
        .map(|p| labs.iter().filter(|ls| literal_valid(inst, p, ls)).count())
        .sum()
}

fn placements(inst: &Instance, sol: &LabeledOrdering) -> (Vec<usize>, Vec<usize>) {
    sol.to_placements(inst).unwrap().into_iter().unzip()
}

#[test]
fn exact_matches_enumeration() {
    let mut rng = Rng::seeded(12);
    let (mut yes, mut no) = (0, 0);
    for round in 0..250 {
        let n = 1 + round % 6;
        let k = 1 + round % 3;
        let inst = random_instance(&mut rng, n, k, 0.2 + 0.1 * (round % 4) as f64);
        let all: Vec<usize> = (0..n).collect();
        let count = brute_count(&inst, &all);
        let got = solve_exact(&inst);
        let plain = solve_exact_with(
            &inst,
            &ExactOptions {
                use_propagation: false,
                max_nodes: None,
            },
        )
        .solution();
        assert_eq!(got.is_some(), count > 0, "{}", inst.to_json());
        assert_eq!(plain.is_some(), count > 0);
        for sol in got.iter().chain(plain.iter()) {
            let (order, labels) = placements(&inst, sol);
            assert!(literal_valid(&inst, &order, &labels));
            assert!(verify_direct(&inst, sol, true).is_ok());
            assert!(verify_residual(&inst, sol).unwrap());
        }
        let listed = enumerate_solutions(&inst, usize::MAX);
        assert_eq!(listed.len(), count);
        if count > 0 {
            yes += 1
        } else {
            no += 1
        }
    }
    assert!(yes > 50 && no > 50, "{yes} {no}");
}

/// Cycle detection by colored depth-first search.
fn has_cycle(n: usize, succ: &dyn Fn(usize) -> Vec<usize>) -> bool {
    fn visit(v: usize, color: &mut [u8], succ: &dyn Fn(usize) -> Vec<usize>) -> bool {
        color[v] = 1;
        for w in succ(v) {
            if color[w] == 1 || (color[w] == 0 && visit(w, color, succ)) {
                return true;
            }
        }
        color[v] = 2;
        false
    }
    let mut color = vec![0u8; n];
    (0..n).any(|v| color[v] == 0 && visit(v, &mut color, succ))
}

#[test]
fn k1_matches_cycle_test() {
    let mut rng = Rng::seeded(13);
    for round in 0..300 {
        let n = 2 + round % 30;
        let inst = if round % 2 == 0 {
            random_dag_instance(&mut rng, n, n + round % 7)
        } else {
            random_instance(&mut rng, n, 1, 1.5 / n as f64)
        };
        let union = |v: usize| {
            let mut out = inst.a(0).succ(v).to_vec();
            out.extend(inst.b(0).succ(v));
            out
        };
        let cyclic = has_cycle(n, &union);
        let got = solve_k1(&inst).unwrap();
        assert_eq!(got.is_some(), !cyclic);
        if let Some(sol) = got {
            assert!(verify_direct(&inst, &sol, true).is_ok());
        }
    }
}

#[test]
fn trivial_pair_is_sound() {
    let mut rng = Rng::seeded(14);
    let mut hits = 0;
    for round in 0..300 {
        let n = 2 + round % 8;
        let inst = random_instance(&mut rng, n, 2, 0.8 / n as f64);
        let some_acyclic = (0..2).any(|l| {
            !has_cycle(n, &|v| {
                let mut out = inst.a(l).succ(v).to_vec();
                out.extend(inst.b(l).succ(v));
                out
            })
        });
        let got = find_trivial_pair(&inst);
        assert_eq!(got.is_some(), some_acyclic);
        if let Some((l, sol)) = got {
            hits += 1;
            assert!(sol.labels().iter().all(|&x| x == l));
            assert!(verify_direct(&inst, &sol, true).is_ok());
        }
    }
    assert!(hits > 50);
}

fn subsets(n: usize, b: usize) -> Vec<Vec<usize>> {
    (0..1u32 << n)
        .filter(|s| s.count_ones() as usize == b)
        .map(|s| (0..n).filter(|&v| s >> v & 1 == 1).collect())
        .collect()
}

#[test]
fn bounded_matches_subset_enumeration() {
    let mut rng = Rng::seeded(15);
    for round in 0..120 {
        let n = 1 + round % 6;
        let k = 1 + round % 2;
        let inst = random_instance(&mut rng, n, k, 0.45);
        for b in 0..=n {
            let expect = subsets(n, b).iter().any(|s| brute_count(&inst, s) > 0);
            let got = solve_bounded(&inst, b);
            assert_eq!(got.is_some(), expect);
            if let Some(sol) = got {
                assert!(sol.len() >= b);
                assert!(verify_direct(&inst, &sol, false).is_ok());
            }
        }
    }
}
