mod common;

use proptest::prelude::*;
use reserve_core::formulation::{build, VariantId};
use reserve_core::heuristics::{
    construct, local_branching, post_process, primal_from_lp, LocalBranchingParams,
};
use reserve_core::oracle::{brute_force, validate};
use reserve_core::separation::{CutPool, SeparationConfig};
use reserve_core::solution::Solution;

fn variant_strategy() -> impl Strategy<Value = VariantId> {
    prop::sample::select(VariantId::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn construct_is_feasible_and_not_below_optimum(seed in 0u64..5000, k in 1usize..=3, v in variant_strategy()) {
        let inst = common::random_instance(seed, 10, k);
        let best = brute_force(&inst, v).unwrap();
        match construct(&inst, v, k, seed, 5) {
            Ok(sol) => {
                prop_assert!(validate(&inst, v, &sol).unwrap().feasible);
                let (opt, _) = best.expect("heuristic found a solution the oracle missed");
                prop_assert!(sol.cost(&inst) >= opt - 1e-9);
            }
            Err(_) => {}
        }
    }

    #[test]
    fn post_process_is_idempotent_and_minimal(seed in 0u64..5000, k in 1usize..=3, v in variant_strategy()) {
        let inst = common::random_instance(seed, 10, k);
        let Ok(sol) = construct(&inst, v, k, seed, 3) else { return Ok(()); };
        let once = post_process(&inst, v, &sol);
        let twice = post_process(&inst, v, &once);
        prop_assert_eq!(&once, &twice);
        prop_assert!(once.cost(&inst) <= sol.cost(&inst) + 1e-9);
        let core = once.core_nodes();
        for &drop in &core {
            let rest: Vec<usize> = core.iter().copied().filter(|&i| i != drop).collect();
            let smaller = Solution::from_core(&inst, v, &rest);
            let ok = validate(&inst, v, &smaller).unwrap().feasible
                && smaller.n_components(&inst, v) <= inst.max_components;
            prop_assert!(!ok, "core node {} removable", drop);
        }
    }

    #[test]
    fn primal_from_zero_lp_is_feasible(seed in 0u64..5000, k in 1usize..=3, v in variant_strategy()) {
        let inst = common::random_instance(seed, 10, k);
        let f = build(&inst, v).unwrap();
        let lp = vec![0.0; f.model.variables().len()];
        if let Some(sol) = primal_from_lp(&inst, v, &f.vars, &lp, k, seed, 3) {
            prop_assert!(validate(&inst, v, &sol).unwrap().feasible);
        }
    }
}

#[test]
fn local_branching_history_nonincreasing() {
    let params = LocalBranchingParams { radius: 1, step: 1, max_radius: 4, max_iterations: Some(6), ..Default::default() };
    let mut checked = 0;
    for seed in 0..30u64 {
        let inst = common::random_instance(seed, 12, 2);
        let v = VariantId::GrscCb;
        let Ok(start) = construct(&inst, v, 2, seed, 2) else { continue };
        let mut pool = CutPool::new();
        let out = local_branching(&inst, v, &start, &mut pool, &params, &SeparationConfig::default()).unwrap();
        assert_eq!(out.history[0], start.cost(&inst));
        assert!(out.history.windows(2).all(|w| w[1] <= w[0]), "seed {seed}: {:?}", out.history);
        assert!(validate(&inst, v, &out.solution).unwrap().feasible);
        let opt = brute_force(&inst, v).unwrap().unwrap().0;
        assert!(out.solution.cost(&inst) >= opt - 1e-9);
        if out.proven_optimal {
            assert_eq!(out.solution.cost(&inst), opt, "seed {seed}");
        }
        checked += 1;
    }
    assert!(checked >= 5);
}
