//! End-to-end solve of one instance under one of the four algorithm settings.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::formulation::{build, VariantId};
use crate::heuristics::{
    construct, local_branching, LocalBranchingParams, LpGuidedHeuristic, DEFAULT_NSTARTS,
};
use crate::instance::Instance;
use crate::milp::{
    branch_and_cut, BranchAndCutOptions, FractionalSeparation, PrimalHeuristic, SolveStats, SolveStatus,
};
use crate::separation::{CutGenerator, CutPool, SeparationConfig};
use crate::solution::{hosted_species, Solution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Setting {
    /// Connectivity cuts only.
    Basic,
    /// Plus cover and species-cover cuts.
    BasicPlus,
    /// Plus construction and LP-guided primal heuristics.
    BasicPlusCp,
    /// Plus local branching before the exact solve.
    BasicPlusCplb,
}

impl Setting {
    pub const ALL: [Setting; 4] = [Setting::Basic, Setting::BasicPlus, Setting::BasicPlusCp, Setting::BasicPlusCplb];

    pub fn as_str(self) -> &'static str {
        match self {
            Setting::Basic => "basic",
            Setting::BasicPlus => "basic+",
            Setting::BasicPlusCp => "basic+cp",
            Setting::BasicPlusCplb => "basic+cplb",
        }
    }

    pub fn cover_cuts(self) -> bool {
        self != Setting::Basic
    }

    pub fn heuristics(self) -> bool {
        matches!(self, Setting::BasicPlusCp | Setting::BasicPlusCplb)
    }

    pub fn local_branching(self) -> bool {
        self == Setting::BasicPlusCplb
    }
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Setting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Setting::ALL
            .into_iter()
            .find(|x| x.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown setting '{s}'")))
    }
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub setting: Setting,
    pub time_limit: Option<Duration>,
    pub node_limit: Option<usize>,
    pub seed: u64,
    pub separation: SeparationConfig,
    pub fractional: FractionalSeparation,
    pub nstarts: usize,
    /// Starts of the primal heuristic per call.
    pub primal_nstarts: usize,
    pub local_branching: LocalBranchingParams,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            setting: Setting::BasicPlusCp,
            time_limit: None,
            node_limit: None,
            seed: 0,
            separation: SeparationConfig::default(),
            fractional: FractionalSeparation::RootOnly,
            nstarts: DEFAULT_NSTARTS,
            primal_nstarts: 3,
            local_branching: LocalBranchingParams::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    pub solution: Option<Solution>,
    pub objective: f64,
    pub dual_bound: f64,
    pub root_bound: f64,
    /// Best heuristic cost before the exact solve (construction, then local branching).
    pub heuristic_objective: Option<f64>,
    pub construct_time: f64,
    pub stats: SolveStats,
    pub cuts_pooled: usize,
    pub time: f64,
}

impl SolveOutcome {
    pub fn gap(&self) -> f64 {
        gap(self.objective, self.dual_bound)
    }
}

/// `100 (primal − dual) / primal`, zero for a zero primal.
pub fn gap(primal: f64, dual: f64) -> f64 {
    if !primal.is_finite() {
        f64::INFINITY
    } else if primal.abs() < 1e-12 {
        0.0
    } else {
        (100.0 * (primal - dual) / primal).max(0.0)
    }
}

fn remaining(start: Instant, limit: Option<Duration>) -> Option<Duration> {
    limit.map(|l| l.saturating_sub(start.elapsed()))
}

/// Solves `inst` for `variant` with the pipeline of `cfg.setting`.
pub fn solve(inst: &Instance, variant: VariantId, cfg: &SolverConfig) -> Result<SolveOutcome> {
    let start = Instant::now();
    let form = build(inst, variant)?;
    let sep = SeparationConfig { cover_cuts: cfg.setting.cover_cuts(), ..cfg.separation.clone() };
    let mut pool = CutPool::new();
    let mut incumbent: Option<Solution> = None;
    let mut heuristic_objective = None;
    let mut construct_time = 0.0;

    if cfg.setting.heuristics() {
        let t = Instant::now();
        match construct(inst, variant, inst.max_components, cfg.seed, cfg.nstarts) {
            Ok(s) => incumbent = Some(s),
            Err(Error::Infeasible(_)) => {}
            Err(e) => return Err(e),
        }
        construct_time = t.elapsed().as_secs_f64();
        heuristic_objective = incumbent.as_ref().map(|s| s.cost(inst));
    }
    if cfg.setting.local_branching() {
        if let Some(s) = &incumbent {
            let mut params = cfg.local_branching.clone();
            if let Some(r) = remaining(start, cfg.time_limit) {
                params.phase_time = params.phase_time.min(r);
            }
            let out = local_branching(inst, variant, s, &mut pool, &params, &sep)?;
            heuristic_objective = Some(out.solution.cost(inst));
            incumbent = Some(out.solution);
        }
    }

    let mut gen = CutGenerator::new(inst, &form, sep);
    let opts = BranchAndCutOptions {
        time_limit: remaining(start, cfg.time_limit),
        node_limit: cfg.node_limit,
        fractional: cfg.fractional,
        initial_cuts: pool.constraints(&form.vars),
        ..Default::default()
    };
    let mut lp_heur = LpGuidedHeuristic {
        inst,
        variant,
        vars: form.vars,
        seed: cfg.seed,
        nstarts: cfg.primal_nstarts,
    };
    let heur: Option<&mut dyn PrimalHeuristic> =
        if cfg.setting.heuristics() { Some(&mut lp_heur) } else { None };
    let start_vec = incumbent.as_ref().map(|s| s.to_vector(&form.vars));
    let res = branch_and_cut(&form.model, &mut [&mut gen], heur, start_vec.as_deref(), &opts)?;
    pool.extend(&gen.pool);

    let solution = res.incumbent.as_ref().map(|v| {
        let mut s = Solution::from_vector(&form.vars, v);
        s.canonicalize(inst, variant);
        s
    });
    let objective = solution.as_ref().map_or(f64::INFINITY, |s| s.cost(inst));
    Ok(SolveOutcome {
        status: res.status,
        objective,
        dual_bound: res.dual_bound.min(objective),
        root_bound: res.stats.root_bound,
        solution,
        heuristic_objective,
        construct_time,
        stats: res.stats,
        cuts_pooled: pool.len(),
        time: start.elapsed().as_secs_f64(),
    })
}

/// Explains why no solution exists, naming the first protection
/// constraint that cannot be met.
pub fn infeasibility_reason(inst: &Instance, variant: VariantId) -> String {
    let n = inst.n_nodes();
    let all = vec![true; n];
    let u = hosted_species(inst, &all, &all);
    let h1 = inst.s1().filter(|&s| u[s]).count();
    let h2 = inst.s2().filter(|&s| u[s]).count();
    if h1 < inst.p1 {
        format!("protect_1: P1 = {} but at most {h1} core-class species can reach their quota", inst.p1)
    } else if h2 < inst.p2 {
        format!("protect_2: P2 = {} but at most {h2} reserve-class species can reach their quota", inst.p2)
    } else if variant.has_connectivity() {
        let which = if inst.p1 > 0 { "protect_1" } else { "protect_2" };
        format!("{which}: P1 = {}, P2 = {} cannot be met with at most {} component(s)", inst.p1, inst.p2, inst.max_components)
    } else {
        format!("protect_1: P1 = {}, P2 = {} cannot be met", inst.p1, inst.p2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{generate_grid, ScenarioId};
    use crate::oracle::validate;

    #[test]
    fn settings_parse() {
        for s in Setting::ALL {
            assert_eq!(s.as_str().parse::<Setting>().unwrap(), s);
        }
        assert!("fast".parse::<Setting>().is_err());
    }

    #[test]
    fn gap_formula() {
        assert_eq!(gap(100.0, 90.0), 10.0);
        assert_eq!(gap(0.0, 0.0), 0.0);
        assert!(gap(f64::INFINITY, 3.0).is_infinite());
    }

    #[test]
    fn all_settings_agree() {
        let inst = generate_grid(5, 1, 2, 4).unwrap().apply_scenario(ScenarioId::B);
        let mut objs = Vec::new();
        for setting in Setting::ALL {
            let cfg = SolverConfig { setting, ..Default::default() };
            let out = solve(&inst, VariantId::GrscCb, &cfg).unwrap();
            assert_eq!(out.status, SolveStatus::Optimal);
            let sol = out.solution.unwrap();
            assert!(validate(&inst, VariantId::GrscCb, &sol).unwrap().feasible);
            objs.push(out.objective);
        }
        assert!(objs.windows(2).all(|w| w[0] == w[1]), "{objs:?}");
    }

    #[test]
    fn infeasible_names_protection() {
        let inst = generate_grid(4, 1, 1, 0).unwrap().apply_scenario(ScenarioId::A);
        let inst = inst.with_lambdas(&[1e9, 1.0]).unwrap();
        let out = solve(&inst, VariantId::GrscCb, &SolverConfig::default()).unwrap();
        assert_eq!(out.status, SolveStatus::Infeasible);
        assert!(infeasibility_reason(&inst, VariantId::GrscCb).starts_with("protect_1"));
    }
}
