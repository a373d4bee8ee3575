mod common;

use reserve_core::formulation::{build, VariantId};
use reserve_core::milp::{branch_and_cut, BranchAndCutOptions, LazyCutGenerator, SolveStatus};
use reserve_core::oracle::{brute_force, validate};
use reserve_core::separation::{CutGenerator, SeparationConfig};
use reserve_core::solution::Solution;

#[test]
fn plain_branch_and_cut_matches_oracle() {
    for seed in 0..40u64 {
        for k in 1..=3 {
            let inst = common::random_instance(seed, 12, k);
            for variant in VariantId::ALL {
                let f = build(&inst, variant).unwrap();
                let mut g = CutGenerator::new(&inst, &f, SeparationConfig::default());
                let mut gens: Vec<&mut dyn LazyCutGenerator> = vec![&mut g];
                let r = branch_and_cut(&f.model, &mut gens, None, None, &BranchAndCutOptions::default()).unwrap();
                let oracle = brute_force(&inst, variant).unwrap();
                match oracle {
                    Some((cost, _)) => {
                        assert_eq!(r.status, SolveStatus::Optimal, "seed {seed} k {k} {variant}");
                        assert_eq!(r.primal_bound, cost, "seed {seed} k {k} {variant}");
                        let sol = Solution::from_vector(&f.vars, r.incumbent.as_ref().unwrap());
                        assert!(validate(&inst, variant, &sol).unwrap().feasible);
                    }
                    None => assert_eq!(r.status, SolveStatus::Infeasible, "seed {seed} k {k} {variant}"),
                }
            }
        }
    }
}
