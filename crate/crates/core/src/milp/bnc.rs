//! Best-bound branch-and-cut with lazy cut callbacks.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use super::{iteration_cap, LinearConstraint, MilpError, MilpModel, SimplexLp, SimplexStatus, TOL};

/// Where in the search a callback is invoked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CutContext {
    pub node: usize,
    pub depth: usize,
    pub is_root: bool,
    /// All binary variables of the point are integral.
    pub integral: bool,
}

/// A source of globally valid inequalities.
pub trait LazyCutGenerator {
    /// Returns inequalities violated by `x`; an empty result means none found.
    fn separate(&mut self, ctx: &CutContext, x: &[f64]) -> Vec<LinearConstraint>;
}

/// Proposes feasible solutions from LP points.
pub trait PrimalHeuristic {
    fn propose(&mut self, ctx: &CutContext, x: &[f64]) -> Option<Vec<f64>>;

    /// Asked after every node; `true` ends the search as interrupted.
    fn wants_abort(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FractionalSeparation {
    #[default]
    RootOnly,
    EveryNode,
    IntegerOnly,
}

#[derive(Debug, Clone)]
pub struct BranchAndCutOptions {
    pub time_limit: Option<Duration>,
    pub node_limit: Option<usize>,
    pub fractional: FractionalSeparation,
    /// Cap on separation rounds on fractional points per node.
    pub max_rounds: usize,
    /// Heuristic is called at the root and every this many nodes (0: root only).
    pub heuristic_frequency: usize,
    /// Stop as soon as an incumbent strictly below this value is found.
    pub stop_below: Option<f64>,
    /// Rows appended to the relaxation before the root solve.
    pub initial_cuts: Vec<LinearConstraint>,
    /// Known feasible solution every cut must satisfy.
    pub reference_solution: Option<Vec<f64>>,
}

impl Default for BranchAndCutOptions {
    fn default() -> Self {
        BranchAndCutOptions {
            time_limit: None,
            node_limit: None,
            fractional: FractionalSeparation::RootOnly,
            max_rounds: 1000,
            heuristic_frequency: 10,
            stop_below: None,
            initial_cuts: Vec::new(),
            reference_solution: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    TimeLimit,
    NodeLimit,
    Interrupted,
}

impl std::fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::TimeLimit => "time-limit",
            SolveStatus::NodeLimit => "node-limit",
            SolveStatus::Interrupted => "interrupted",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SolveStats {
    pub nodes: usize,
    pub cuts_added: usize,
    pub lp_iterations: usize,
    pub heuristic_solutions: usize,
    pub wall_time: f64,
    pub root_bound: f64,
    pub root_time: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub incumbent: Option<Vec<f64>>,
    pub primal_bound: f64,
    pub dual_bound: f64,
    pub stats: SolveStats,
}

impl SolveResult {
    /// `100·(primal−dual)/primal`; infinite without an incumbent.
    pub fn gap(&self) -> f64 {
        gap(self.primal_bound, self.dual_bound)
    }
}

pub(crate) fn gap(primal: f64, dual: f64) -> f64 {
    if !primal.is_finite() {
        return f64::INFINITY;
    }
    let diff = (primal - dual).max(0.0);
    if diff <= 1e-9 {
        0.0
    } else if primal.abs() <= 1e-12 {
        f64::INFINITY
    } else {
        100.0 * diff / primal.abs()
    }
}

struct OpenNode {
    id: usize,
    depth: usize,
    bound: f64,
    fixings: Vec<(usize, f64, f64)>,
}

impl PartialEq for OpenNode {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for OpenNode {}
impl PartialOrd for OpenNode {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for OpenNode {
    // max-heap: smallest bound first, then deepest, then smallest id
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .bound
            .total_cmp(&self.bound)
            .then(self.depth.cmp(&other.depth))
            .then(other.id.cmp(&self.id))
    }
}

struct Search<'a, 'g> {
    model: &'a MilpModel,
    lp: SimplexLp,
    generators: &'a mut [&'g mut dyn LazyCutGenerator],
    opts: &'a BranchAndCutOptions,
    integral_objective: bool,
    incumbent: Option<Vec<f64>>,
    primal: f64,
    stats: SolveStats,
    start: Instant,
    root_lb: Vec<f64>,
    root_ub: Vec<f64>,
}

enum NodeOutcome {
    Pruned,
    Branch { var: usize, value: f64, bound: f64 },
    Abort(SolveStatus),
}

impl Search<'_, '_> {
    fn effective_bound(&self, b: f64) -> f64 {
        if self.integral_objective {
            (b - TOL).ceil()
        } else {
            b
        }
    }

    fn can_prune(&self, bound: f64) -> bool {
        if self.primal == f64::INFINITY {
            return false;
        }
        let eb = self.effective_bound(bound);
        eb >= self.primal - TOL * (1.0 + self.primal.abs()).min(1.0) - 1e-9
    }

    fn time_up(&self) -> bool {
        self.opts.time_limit.is_some_and(|t| self.start.elapsed() >= t)
    }

    fn check_reference(&self, cut: &LinearConstraint) -> Result<(), MilpError> {
        if let Some(r) = &self.opts.reference_solution {
            let v = cut.violation(r);
            if v > TOL {
                return Err(MilpError::InvalidCut { cut: cut.name.clone(), violation: v });
            }
        }
        Ok(())
    }

    fn add_cuts(&mut self, cuts: Vec<LinearConstraint>) -> Result<usize, MilpError> {
        let mut added = 0;
        for c in cuts {
            self.check_reference(&c)?;
            let (lo, hi) = c.row_bounds();
            self.lp.add_row(&c.coeffs, lo, hi);
            added += 1;
        }
        self.stats.cuts_added += added;
        Ok(added)
    }

    fn separate(&mut self, ctx: &CutContext, x: &[f64]) -> Vec<LinearConstraint> {
        let mut out = Vec::new();
        for g in self.generators.iter_mut() {
            let cuts = g.separate(ctx, x);
            out.extend(cuts.into_iter().filter(|c| c.violation(x) > TOL * 0.1));
            if !out.is_empty() {
                break;
            }
        }
        out
    }

    /// Accepts `x` as incumbent if it is feasible, cut-free and improving.
    fn offer(&mut self, x: &[f64], ctx: &CutContext) -> Result<bool, MilpError> {
        if x.len() != self.model.n_vars() {
            return Ok(false);
        }
        let mut xr = x.to_vec();
        for (v, xi) in self.model.variables().iter().zip(xr.iter_mut()) {
            if v.binary {
                *xi = xi.round();
            }
        }
        if !self.model.is_feasible(&xr, TOL) {
            return Ok(false);
        }
        let ictx = CutContext { integral: true, ..*ctx };
        let cuts = self.separate(&ictx, &xr);
        if !cuts.is_empty() {
            self.add_cuts(cuts)?;
            return Ok(false);
        }
        let obj = self.model.objective_value(&xr);
        if obj < self.primal - 1e-9 {
            self.primal = obj;
            self.incumbent = Some(xr);
            return Ok(true);
        }
        Ok(false)
    }

    fn stop_requested(&self) -> bool {
        self.opts.stop_below.is_some_and(|s| self.primal < s)
    }

    fn apply_fixings(&mut self, fixings: &[(usize, f64, f64)]) {
        let mut lb = self.root_lb.clone();
        let mut ub = self.root_ub.clone();
        for &(v, l, u) in fixings {
            lb[v] = l;
            ub[v] = u;
        }
        for v in 0..lb.len() {
            self.lp.set_bounds(v, lb[v], ub[v]);
        }
    }

    fn process(
        &mut self,
        node: &OpenNode,
        heuristic: &mut Option<&mut dyn PrimalHeuristic>,
    ) -> Result<NodeOutcome, MilpError> {
        self.apply_fixings(&node.fixings);
        let is_root = node.id == 0;
        let separate_fractional = match self.opts.fractional {
            FractionalSeparation::RootOnly => is_root,
            FractionalSeparation::EveryNode => true,
            FractionalSeparation::IntegerOnly => false,
        };
        let mut rounds = 0;
        loop {
            if self.time_up() {
                return Ok(NodeOutcome::Abort(SolveStatus::TimeLimit));
            }
            let cap = iteration_cap(&self.lp);
            match self.lp.solve(cap)? {
                SimplexStatus::Optimal => {}
                SimplexStatus::Infeasible => return Ok(NodeOutcome::Pruned),
                SimplexStatus::Unbounded => {
                    return Err(MilpError::InvalidModel("relaxation is unbounded".into()))
                }
            }
            let x = self.lp.values();
            let obj = self.model.objective_value(&x);
            if is_root {
                self.stats.root_bound = obj;
                self.stats.root_time = self.start.elapsed().as_secs_f64();
            }
            if self.can_prune(obj) {
                return Ok(NodeOutcome::Pruned);
            }
            let integral = self.model.is_integral(&x, TOL);
            let ctx = CutContext { node: node.id, depth: node.depth, is_root, integral };
            if integral {
                let cuts = self.separate(&ctx, &x);
                if cuts.is_empty() {
                    self.offer(&x, &ctx)?;
                    return Ok(NodeOutcome::Pruned);
                }
                self.add_cuts(cuts)?;
                continue;
            }
            if separate_fractional && rounds < self.opts.max_rounds {
                rounds += 1;
                let cuts = self.separate(&ctx, &x);
                if !cuts.is_empty() {
                    self.add_cuts(cuts)?;
                    continue;
                }
            }
            let run_heuristic = is_root
                || (self.opts.heuristic_frequency > 0
                    && self.stats.nodes % self.opts.heuristic_frequency == 0);
            if run_heuristic {
                if let Some(h) = heuristic.as_mut() {
                    if let Some(sol) = h.propose(&ctx, &x) {
                        if self.offer(&sol, &ctx)? {
                            self.stats.heuristic_solutions += 1;
                        }
                    }
                    if h.wants_abort() {
                        return Ok(NodeOutcome::Abort(SolveStatus::Interrupted));
                    }
                }
                if self.stop_requested() {
                    return Ok(NodeOutcome::Abort(SolveStatus::Interrupted));
                }
                if self.can_prune(obj) {
                    return Ok(NodeOutcome::Pruned);
                }
            }
            // most fractional binary, smallest index on ties
            let mut best: Option<(usize, f64)> = None;
            for (v, (var, &xv)) in self.model.variables().iter().zip(&x).enumerate() {
                if !var.binary {
                    continue;
                }
                let f = (xv - xv.floor()).min(xv.ceil() - xv);
                if f > TOL && best.is_none_or(|(_, bf)| f > bf + 1e-12) {
                    best = Some((v, f));
                }
            }
            let (var, _) = best.expect("fractional point has a fractional binary");
            return Ok(NodeOutcome::Branch { var, value: x[var], bound: obj });
        }
    }
}

/// Minimizes `model` by LP-based branch-and-cut.
pub fn branch_and_cut(
    model: &MilpModel,
    generators: &mut [&mut dyn LazyCutGenerator],
    mut heuristic: Option<&mut dyn PrimalHeuristic>,
    incumbent: Option<&[f64]>,
    opts: &BranchAndCutOptions,
) -> Result<SolveResult, MilpError> {
    model.validate()?;
    let start = Instant::now();
    let integral_objective = model
        .variables()
        .iter()
        .all(|v| v.obj == 0.0 || (v.binary && v.obj.fract() == 0.0));
    let mut search = Search {
        model,
        lp: model.to_simplex(),
        generators,
        opts,
        integral_objective,
        incumbent: None,
        primal: f64::INFINITY,
        stats: SolveStats { root_bound: f64::NEG_INFINITY, ..SolveStats::default() },
        start,
        root_lb: model.variables().iter().map(|v| v.lb).collect(),
        root_ub: model.variables().iter().map(|v| v.ub).collect(),
    };
    search.add_cuts(opts.initial_cuts.clone())?;
    search.stats.cuts_added = 0;
    let root_ctx = CutContext { node: 0, depth: 0, is_root: true, integral: true };
    if let Some(x) = incumbent {
        search.offer(x, &root_ctx)?;
    }

    let mut open = BinaryHeap::new();
    open.push(OpenNode { id: 0, depth: 0, bound: f64::NEG_INFINITY, fixings: Vec::new() });
    let mut next_id = 1;
    let mut status = SolveStatus::Optimal;
    let mut interrupted_bound: Option<f64> = None;

    if search.stop_requested() {
        status = SolveStatus::Interrupted;
    }
    while status == SolveStatus::Optimal {
        let Some(node) = open.pop() else { break };
        if search.can_prune(node.bound) {
            continue;
        }
        if opts.node_limit.is_some_and(|l| search.stats.nodes >= l) {
            status = SolveStatus::NodeLimit;
            open.push(node);
            break;
        }
        if search.time_up() {
            status = SolveStatus::TimeLimit;
            open.push(node);
            break;
        }
        search.stats.nodes += 1;
        match search.process(&node, &mut heuristic)? {
            NodeOutcome::Pruned => {}
            NodeOutcome::Abort(s) => {
                status = s;
                interrupted_bound = Some(node.bound);
            }
            NodeOutcome::Branch { var, value, bound } => {
                let bound = search.effective_bound(bound).max(node.bound);
                let v = &model.variables()[var];
                let mut down = node.fixings.clone();
                down.push((var, v.lb, value.floor()));
                let mut up = node.fixings;
                up.push((var, value.ceil(), v.ub));
                for fixings in [down, up] {
                    open.push(OpenNode { id: next_id, depth: node.depth + 1, bound, fixings });
                    next_id += 1;
                }
            }
        }
        if status == SolveStatus::Optimal && search.stop_requested() {
            status = SolveStatus::Interrupted;
        }
    }

    let open_min = open
        .iter()
        .map(|n| n.bound)
        .chain(interrupted_bound)
        .fold(f64::INFINITY, f64::min);
    let (status, dual) = if status == SolveStatus::Optimal {
        if search.incumbent.is_some() {
            (SolveStatus::Optimal, search.primal)
        } else {
            (SolveStatus::Infeasible, f64::INFINITY)
        }
    } else {
        let root_floor = search.effective_bound(search.stats.root_bound);
        let d = if open_min == f64::NEG_INFINITY { root_floor } else { open_min };
        (status, d.min(search.primal))
    };
    search.stats.lp_iterations = search.lp.iterations();
    search.stats.wall_time = start.elapsed().as_secs_f64();
    Ok(SolveResult {
        status,
        incumbent: search.incumbent,
        primal_bound: search.primal,
        dual_bound: dual,
        stats: search.stats,
    })
}

/// Root-node bound after the cut loop runs to its fixpoint.
pub fn root_bound(
    model: &MilpModel,
    generators: &mut [&mut dyn LazyCutGenerator],
    opts: &BranchAndCutOptions,
) -> Result<f64, MilpError> {
    let mut o = opts.clone();
    o.node_limit = Some(1);
    o.stop_below = None;
    let r = branch_and_cut(model, generators, None, None, &o)?;
    Ok(match r.status {
        SolveStatus::Infeasible => f64::INFINITY,
        _ => r.stats.root_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milp::Sense;

    #[test]
    fn two_binaries() {
        let mut m = MilpModel::new("t");
        let x = m.add_binary("x", 1.0);
        let y = m.add_binary("y", 1.0);
        m.add_row("c", &[(x, 1.0), (y, 1.0)], Sense::Ge, 1.0).unwrap();
        let opts = BranchAndCutOptions::default();
        let r = branch_and_cut(&m, &mut [], None, None, &opts).unwrap();
        assert_eq!(r.status, SolveStatus::Optimal);
        assert_eq!(r.primal_bound, 1.0);
        assert_eq!(r.gap(), 0.0);
    }

    #[test]
    fn knapsack_needs_branching() {
        // min -(5a + 4b + 3c) s.t. 2a + 3b + c <= 4 (binary) -> a + c, value -8
        let mut m = MilpModel::new("k");
        let a = m.add_binary("a", -5.0);
        let b = m.add_binary("b", -4.0);
        let c = m.add_binary("c", -3.0);
        m.add_row("cap", &[(a, 2.0), (b, 3.0), (c, 1.0)], Sense::Le, 4.0).unwrap();
        let opts = BranchAndCutOptions::default();
        let r = branch_and_cut(&m, &mut [], None, None, &opts).unwrap();
        assert_eq!(r.status, SolveStatus::Optimal);
        assert_eq!(r.primal_bound, -8.0);
    }

    struct Nothing;
    impl LazyCutGenerator for Nothing {
        fn separate(&mut self, _: &CutContext, _: &[f64]) -> Vec<LinearConstraint> {
            Vec::new()
        }
    }

    /// Lazily enforces `x + y <= 1`.
    struct Lazy {
        x: usize,
        y: usize,
    }
    impl LazyCutGenerator for Lazy {
        fn separate(&mut self, _: &CutContext, v: &[f64]) -> Vec<LinearConstraint> {
            if v[self.x] + v[self.y] > 1.0 + 1e-6 {
                vec![LinearConstraint::new("lazy", &[(self.x, 1.0), (self.y, 1.0)], Sense::Le, 1.0)]
            } else {
                Vec::new()
            }
        }
    }

    #[test]
    fn lazy_rows_are_enforced() {
        let mut m = MilpModel::new("l");
        let x = m.add_binary("x", -2.0);
        let y = m.add_binary("y", -3.0);
        let opts = BranchAndCutOptions::default();
        let mut g = Lazy { x, y };
        let mut gens: Vec<&mut dyn LazyCutGenerator> = vec![&mut g];
        let r = branch_and_cut(&m, &mut gens, None, None, &opts).unwrap();
        assert_eq!(r.primal_bound, -3.0);
        assert!(r.stats.cuts_added >= 1);
    }

    #[test]
    fn reference_check_catches_invalid_cut() {
        let mut m = MilpModel::new("l");
        let x = m.add_binary("x", -2.0);
        let y = m.add_binary("y", -3.0);
        let opts = BranchAndCutOptions {
            reference_solution: Some(vec![1.0, 1.0]),
            ..Default::default()
        };
        let mut g = Lazy { x, y };
        let mut gens: Vec<&mut dyn LazyCutGenerator> = vec![&mut g];
        let err = branch_and_cut(&m, &mut gens, None, None, &opts).unwrap_err();
        assert!(matches!(err, MilpError::InvalidCut { .. }));
    }

    fn random_ip(seed: u64) -> MilpModel {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let n = 7;
        let mut m = MilpModel::new("r");
        for j in 0..n {
            m.add_binary(format!("b{j}"), rng.gen_range(-6i32..=6) as f64);
        }
        for i in 0..4 {
            let coeffs: Vec<(usize, f64)> =
                (0..n).map(|j| (j, rng.gen_range(-4i32..=5) as f64)).collect();
            let sense = if rng.gen_bool(0.5) { Sense::Le } else { Sense::Ge };
            let rhs = rng.gen_range(-3i32..=6) as f64;
            m.add_row(format!("r{i}"), &coeffs, sense, rhs).unwrap();
        }
        m
    }

    fn brute(m: &MilpModel) -> Option<f64> {
        let n = m.n_vars();
        (0u32..1 << n)
            .filter_map(|mask| {
                let x: Vec<f64> = (0..n).map(|j| ((mask >> j) & 1) as f64).collect();
                m.is_feasible(&x, 1e-9).then(|| m.objective_value(&x))
            })
            .min_by(f64::total_cmp)
    }

    #[test]
    fn matches_enumeration_and_noop_generator() {
        for seed in 0..80 {
            let m = random_ip(seed);
            let opts = BranchAndCutOptions::default();
            let plain = branch_and_cut(&m, &mut [], None, None, &opts).unwrap();
            let mut g = Nothing;
            let mut gens: Vec<&mut dyn LazyCutGenerator> = vec![&mut g];
            let with = branch_and_cut(&m, &mut gens, None, None, &opts).unwrap();
            match brute(&m) {
                Some(v) => {
                    assert_eq!(plain.status, SolveStatus::Optimal, "seed {seed}");
                    assert!((plain.primal_bound - v).abs() < 1e-9, "seed {seed}");
                }
                None => assert_eq!(plain.status, SolveStatus::Infeasible, "seed {seed}"),
            }
            assert_eq!(plain.primal_bound, with.primal_bound);
            assert_eq!(plain.stats.nodes, with.stats.nodes);
            assert!(plain.dual_bound <= plain.primal_bound + 1e-6);
        }
    }

    #[test]
    fn starting_incumbent_and_node_limit() {
        let m = random_ip(3);
        let best = brute(&m);
        if let Some(v) = best {
            let n = m.n_vars();
            let x = (0u32..1 << n)
                .map(|mask| (0..n).map(|j| ((mask >> j) & 1) as f64).collect::<Vec<_>>())
                .find(|x| m.is_feasible(x, 1e-9) && m.objective_value(x) == v)
                .unwrap();
            let opts = BranchAndCutOptions { node_limit: Some(0), ..Default::default() };
            let r = branch_and_cut(&m, &mut [], None, Some(&x), &opts).unwrap();
            assert_eq!(r.primal_bound, v);
        }
    }

    #[test]
    fn root_bound_below_optimum() {
        for seed in 0..30 {
            let m = random_ip(seed);
            let opts = BranchAndCutOptions::default();
            let rb = root_bound(&m, &mut [], &opts).unwrap();
            if let Some(v) = brute(&m) {
                assert!(rb <= v + 1e-9);
            }
        }
    }
}
