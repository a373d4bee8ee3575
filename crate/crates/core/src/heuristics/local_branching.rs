//! Local branching around an incumbent, with cut recycling.

use std::time::{Duration, Instant};

use crate::error::Result;
use crate::formulation::{build, VariantId};
use crate::instance::Instance;
use crate::milp::{branch_and_cut, BranchAndCutOptions, LinearConstraint, Sense, SolveStatus};
use crate::separation::{CutGenerator, CutPool, SeparationConfig};
use crate::solution::Solution;

#[derive(Debug, Clone, PartialEq)]
pub struct LocalBranchingParams {
    /// Initial neighborhood radius `r`.
    pub radius: usize,
    /// Radius increment after an unproductive iteration.
    pub step: usize,
    pub max_radius: usize,
    pub iteration_time: Duration,
    pub phase_time: Duration,
    /// Node cap per iteration (deterministic runs).
    pub iteration_nodes: Option<usize>,
    pub max_iterations: Option<usize>,
}

impl Default for LocalBranchingParams {
    fn default() -> Self {
        LocalBranchingParams {
            radius: 5,
            step: 5,
            max_radius: 20,
            iteration_time: Duration::from_secs(20),
            phase_time: Duration::from_secs(180),
            iteration_nodes: None,
            max_iterations: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalBranchingOutcome {
    pub solution: Solution,
    /// Incumbent cost after every iteration, starting with the input cost.
    pub history: Vec<f64>,
    pub iterations: usize,
    /// The last neighborhood covered the whole space and was solved exactly.
    pub proven_optimal: bool,
}

/// Repeatedly solves the model restricted to `Σ_{i∈S_z} z_i ≥ |S_z| − r`,
/// stopping each solve at the first improving incumbent. Cuts found are
/// kept in `pool` and seed the next iteration.
pub fn local_branching(
    inst: &Instance,
    variant: VariantId,
    start: &Solution,
    pool: &mut CutPool,
    params: &LocalBranchingParams,
    sep: &SeparationConfig,
) -> Result<LocalBranchingOutcome> {
    let begin = Instant::now();
    let base = build(inst, variant)?;
    let mut best = start.clone();
    let mut cost = best.cost(inst);
    let mut history = vec![cost];
    let mut r = params.radius;
    let mut iterations = 0;
    let mut proven_optimal = false;
    while r <= params.max_radius && params.max_iterations.is_none_or(|m| iterations < m) {
        let elapsed = begin.elapsed();
        if elapsed >= params.phase_time {
            break;
        }
        iterations += 1;
        let core = best.core_nodes();
        let mut form = base.clone();
        let terms: Vec<(usize, f64)> = core.iter().map(|&i| (form.vars.z(i), 1.0)).collect();
        let vacuous = r >= core.len();
        if !vacuous {
            form.model.add_constraint(LinearConstraint::new(
                "locbra",
                &terms,
                Sense::Ge,
                (core.len() - r) as f64,
            ))?;
        }
        let mut gen = CutGenerator::new(inst, &form, sep.clone());
        let opts = BranchAndCutOptions {
            time_limit: Some(params.iteration_time.min(params.phase_time - elapsed)),
            node_limit: params.iteration_nodes,
            stop_below: Some(cost - 0.5),
            initial_cuts: pool.constraints(&form.vars),
            ..Default::default()
        };
        let inc = best.to_vector(&form.vars);
        let res = branch_and_cut(&form.model, &mut [&mut gen], None, Some(&inc), &opts)?;
        pool.extend(&gen.pool);
        let improved = res.primal_bound < cost - 1e-9;
        if improved {
            if let Some(v) = res.incumbent.as_ref() {
                let mut s = Solution::from_vector(&form.vars, v);
                s.canonicalize(inst, variant);
                best = s;
                cost = best.cost(inst);
            }
            r = params.radius;
        } else {
            if res.status == SolveStatus::Optimal && vacuous {
                proven_optimal = true;
                history.push(cost);
                break;
            }
            r += params.step;
        }
        history.push(cost);
    }
    Ok(LocalBranchingOutcome { solution: best, history, iterations, proven_optimal })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heuristics::{construct, DEFAULT_NSTARTS};
    use crate::instance::{generate_grid, ScenarioId};
    use crate::oracle::validate;

    #[test]
    fn never_worsens_and_stays_feasible() {
        let inst = generate_grid(5, 1, 2, 11).unwrap().apply_scenario(ScenarioId::A);
        let v = VariantId::GrscCb;
        let start = construct(&inst, v, 1, 1, DEFAULT_NSTARTS).unwrap();
        let mut pool = CutPool::new();
        let params = LocalBranchingParams { iteration_nodes: Some(200), ..Default::default() };
        let out = local_branching(&inst, v, &start, &mut pool, &params, &SeparationConfig::default()).unwrap();
        assert!(out.history.windows(2).all(|w| w[1] <= w[0] + 1e-9));
        assert!(out.solution.cost(&inst) <= start.cost(&inst));
        assert!(validate(&inst, v, &out.solution).unwrap().feasible);
    }
}
