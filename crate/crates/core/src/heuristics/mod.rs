//! Shortest-path construction heuristic, greedy post-processing and the
//! LP-guided primal heuristic.

mod local_branching;

pub use local_branching::{local_branching, LocalBranchingOutcome, LocalBranchingParams};

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::formulation::{VarMap, VariantId};
use crate::graph::{connected_components, ClosedNeighborhoods};
use crate::instance::{Instance, SpeciesClass};
use crate::milp::{CutContext, PrimalHeuristic};
use crate::solution::{hosted_species, Solution};

/// Independent random starts of [`construct`].
pub const DEFAULT_NSTARTS: usize = 20;

/// Growing solution `(S_z, S_x)` with per-species scores.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialSolution {
    pub core: Vec<bool>,
    pub reserve: Vec<bool>,
    /// `W_s(S)`: score of species `s` on the cores (core class) or reserve.
    pub score: Vec<f64>,
}

impl PartialSolution {
    pub fn new(inst: &Instance) -> Self {
        PartialSolution {
            core: vec![false; inst.n_nodes()],
            reserve: vec![false; inst.n_nodes()],
            score: vec![0.0; inst.species().len()],
        }
    }

    /// Adds `i` to the cores and its closed neighborhood to the reserve.
    pub fn add_core(&mut self, inst: &Instance, dense: &[Vec<f64>], hood: &ClosedNeighborhoods, i: usize) {
        if self.core[i] {
            return;
        }
        self.core[i] = true;
        for (s, sp) in inst.species().iter().enumerate() {
            if sp.class == SpeciesClass::Core {
                self.score[s] += dense[s][i];
            }
        }
        for &j in hood.of(i) {
            if !self.reserve[j] {
                self.reserve[j] = true;
                for (s, sp) in inst.species().iter().enumerate() {
                    if sp.class == SpeciesClass::Reserve {
                        self.score[s] += dense[s][j];
                    }
                }
            }
        }
    }

    /// `u_s(S)`.
    pub fn hosts(&self, inst: &Instance, s: usize) -> bool {
        self.score[s] >= inst.species()[s].lambda - 1e-9
    }

    pub fn protected1(&self, inst: &Instance) -> bool {
        inst.s1().filter(|&s| self.hosts(inst, s)).count() >= inst.p1
    }

    pub fn protected2(&self, inst: &Instance) -> bool {
        inst.s2().filter(|&s| self.hosts(inst, s)).count() >= inst.p2
    }
}

/// Heuristic node cost `Δ_i(S)`. `cost` is the per-node cost to charge
/// (the instance costs, or LP-discounted ones). The species sum in the
/// denominator is floored at zero so the result stays positive.
pub fn node_cost_delta(
    inst: &Instance,
    dense: &[Vec<f64>],
    hood: &ClosedNeighborhoods,
    cost: &[f64],
    i: usize,
    sol: &PartialSolution,
) -> f64 {
    let fresh: Vec<usize> = hood.of(i).iter().copied().filter(|&j| !sol.reserve[j]).collect();
    let c: f64 = fresh.iter().map(|&j| cost[j]).sum();
    let mut w1 = 0.0;
    let mut w2 = 0.0;
    for (s, sp) in inst.species().iter().enumerate() {
        if sol.hosts(inst, s) {
            continue;
        }
        match sp.class {
            SpeciesClass::Core => w1 += dense[s][i] + sol.score[s] - sp.lambda,
            SpeciesClass::Reserve => {
                let gain: f64 = fresh.iter().map(|&j| dense[s][j]).sum();
                w2 += gain + sol.score[s] - sp.lambda;
            }
        }
    }
    let mut denom = 0.0;
    if !sol.protected1(inst) {
        denom += w1;
    }
    if !sol.protected2(inst) {
        denom += w2;
    }
    (c + 0.001) / (denom.max(0.0) + 0.0001)
}

/// Shared data of one heuristic run.
struct Ctx<'a> {
    inst: &'a Instance,
    variant: VariantId,
    dense: Vec<Vec<f64>>,
    hood: ClosedNeighborhoods,
    cost: Vec<f64>,
    k: usize,
}

impl<'a> Ctx<'a> {
    fn new(inst: &'a Instance, variant: VariantId, cost: Vec<f64>, k: usize) -> Self {
        Ctx {
            inst,
            variant,
            dense: (0..inst.species().len()).map(|s| inst.dense_weights(s)).collect(),
            hood: ClosedNeighborhoods::new(inst.adjacency(), variant.effective_width(inst)),
            cost,
            k,
        }
    }

    fn helpful(&self, sol: &PartialSolution, i: usize, p1: bool, p2: bool) -> bool {
        let inst = self.inst;
        for (s, sp) in inst.species().iter().enumerate() {
            if sol.hosts(inst, s) {
                continue;
            }
            match sp.class {
                SpeciesClass::Core => {
                    if !p1 && !sol.core[i] && self.dense[s][i] > 0.0 {
                        return true;
                    }
                }
                SpeciesClass::Reserve => {
                    if !p2
                        && self.hood.of(i).iter().any(|&j| !sol.reserve[j] && self.dense[s][j] > 0.0)
                    {
                        return true;
                    }
                }
            }
        }
        false
    }

    /// Greedy growth from the given seeds; `None` if the terminals run out.
    fn grow(&self, seeds: &[usize]) -> Option<PartialSolution> {
        let inst = self.inst;
        let n = inst.n_nodes();
        let mut sol = PartialSolution::new(inst);
        for &i in seeds {
            sol.add_core(inst, &self.dense, &self.hood, i);
        }
        loop {
            let p1 = sol.protected1(inst);
            let p2 = sol.protected2(inst);
            if p1 && p2 {
                return Some(sol);
            }
            let terminals: Vec<bool> = (0..n).map(|i| self.helpful(&sol, i, p1, p2)).collect();
            if !terminals.iter().any(|&t| t) {
                return None;
            }
            let delta: Vec<f64> = (0..n)
                .map(|i| {
                    if sol.core[i] {
                        0.0
                    } else {
                        node_cost_delta(inst, &self.dense, &self.hood, &self.cost, i, &sol)
                    }
                })
                .collect();
            let (dist, pred) = node_weighted_dijkstra(inst.adjacency(), &sol.core, &delta);
            let best = (0..n)
                .filter(|&i| terminals[i] && dist[i].is_finite())
                .min_by(|&a, &b| dist[a].total_cmp(&dist[b]).then(a.cmp(&b)));
            match best {
                Some(t) => {
                    let mut v = t;
                    while !sol.core[v] {
                        sol.add_core(inst, &self.dense, &self.hood, v);
                        match pred[v] {
                            Some(p) => v = p,
                            None => break,
                        }
                    }
                }
                None if !self.variant.has_connectivity() => {
                    let t = (0..n)
                        .filter(|&i| terminals[i])
                        .min_by(|&a, &b| delta[a].total_cmp(&delta[b]).then(a.cmp(&b)))
                        .expect("terminal exists");
                    sol.add_core(inst, &self.dense, &self.hood, t);
                }
                None => return None,
            }
        }
    }

    fn finish(&self, partial: &PartialSolution) -> Solution {
        let mut sol = Solution::empty(self.inst);
        sol.z = partial.core.clone();
        sol.x = partial.reserve.clone();
        sol.canonicalize(self.inst, self.variant);
        post_process_with(self, sol)
    }

    fn run(&self, rng: &mut ChaCha8Rng, pool: &[usize], nstarts: usize) -> Option<Solution> {
        let mut best: Option<Solution> = None;
        for _ in 0..nstarts {
            let take = self.k.min(pool.len());
            let seeds: Vec<usize> = sample(rng, pool.len(), take).into_iter().map(|p| pool[p]).collect();
            let Some(partial) = self.grow(&seeds) else { continue };
            let sol = self.finish(&partial);
            if best.as_ref().is_none_or(|b| sol.cost(self.inst) < b.cost(self.inst) - 1e-9) {
                best = Some(sol);
            }
        }
        best
    }
}

/// Multi-source Dijkstra where entering node `v` costs `weight[v]`.
/// Ties are broken by node index.
fn node_weighted_dijkstra(
    adj: &[Vec<usize>],
    sources: &[bool],
    weight: &[f64],
) -> (Vec<f64>, Vec<Option<usize>>) {
    let n = adj.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut pred = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    for i in (0..n).filter(|&i| sources[i]) {
        dist[i] = 0.0;
        heap.push(Reverse((OrdF64(0.0), i)));
    }
    while let Some(Reverse((OrdF64(d), v))) = heap.pop() {
        if done[v] {
            continue;
        }
        done[v] = true;
        for &w in &adj[v] {
            let nd = d + weight[w];
            if nd < dist[w] {
                dist[w] = nd;
                pred[w] = Some(v);
                heap.push(Reverse((OrdF64(nd), w)));
            }
        }
    }
    (dist, pred)
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct OrdF64(f64);
impl Eq for OrdF64 {}
impl PartialOrd for OrdF64 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

fn default_k(inst: &Instance, variant: VariantId, k: usize) -> usize {
    if variant.has_connectivity() {
        k.max(1)
    } else {
        k.max(1).min(inst.n_nodes().max(1))
    }
}

/// Best of `nstarts` greedy constructions (each post-processed).
pub fn construct(inst: &Instance, variant: VariantId, k: usize, seed: u64, nstarts: usize) -> Result<Solution> {
    let ctx = Ctx::new(inst, variant, inst.cost().to_vec(), default_k(inst, variant, k));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all: Vec<usize> = (0..inst.n_nodes()).collect();
    ctx.run(&mut rng, &all, nstarts).ok_or_else(|| {
        Error::Infeasible(format!(
            "construction found no feasible {variant} solution in {nstarts} starts"
        ))
    })
}

/// Greedy removal of core nodes (with their exclusive neighborhood) while
/// the solution stays feasible; the largest saving goes first, ties to the
/// smallest node.
pub fn post_process(inst: &Instance, variant: VariantId, sol: &Solution) -> Solution {
    let ctx = Ctx::new(inst, variant, inst.cost().to_vec(), inst.max_components.max(1));
    post_process_with(&ctx, sol.clone())
}

fn feasible_sets(ctx: &Ctx, x: &[bool], z: &[bool]) -> bool {
    let inst = ctx.inst;
    let u = hosted_species(inst, x, z);
    let h1 = inst.s1().filter(|&s| u[s]).count();
    let h2 = inst.s2().filter(|&s| u[s]).count();
    if h1 < inst.p1 || h2 < inst.p2 {
        return false;
    }
    if ctx.variant.has_connectivity() {
        let set = if ctx.variant.has_buffer() { z } else { x };
        if connected_components(inst.adjacency(), set).len() > ctx.k {
            return false;
        }
    }
    true
}

fn post_process_with(ctx: &Ctx, mut sol: Solution) -> Solution {
    let inst = ctx.inst;
    let n = inst.n_nodes();
    loop {
        let mut cover_count = vec![0usize; n];
        for i in (0..n).filter(|&i| sol.z[i]) {
            for &j in ctx.hood.of(i) {
                cover_count[j] += 1;
            }
        }
        let mut best: Option<(usize, f64)> = None;
        for i in (0..n).filter(|&i| sol.z[i]) {
            let exclusive: Vec<usize> =
                ctx.hood.of(i).iter().copied().filter(|&j| cover_count[j] == 1 && sol.x[j]).collect();
            let saving: f64 = exclusive.iter().map(|&j| inst.cost()[j]).sum();
            if best.is_some_and(|(_, b)| saving <= b) {
                continue;
            }
            let mut z = sol.z.clone();
            z[i] = false;
            let mut x = sol.x.clone();
            for &j in &exclusive {
                x[j] = false;
            }
            if feasible_sets(ctx, &x, &z) {
                best = Some((i, saving));
            }
        }
        let Some((i, _)) = best else { break };
        let exclusive: Vec<usize> =
            ctx.hood.of(i).iter().copied().filter(|&j| cover_count[j] == 1).collect();
        sol.z[i] = false;
        for j in exclusive {
            sol.x[j] = false;
        }
    }
    sol.canonicalize(inst, ctx.variant);
    sol
}

/// Construction guided by an LP point: node costs are discounted to
/// `c_i (1 − x̃_i)` and starts are drawn from nodes with `ỹ_i ≥ 0.001`
/// (all nodes when there are none).
pub fn primal_from_lp(
    inst: &Instance,
    variant: VariantId,
    vars: &VarMap,
    lp: &[f64],
    k: usize,
    seed: u64,
    nstarts: usize,
) -> Option<Solution> {
    let n = inst.n_nodes();
    let cost: Vec<f64> =
        (0..n).map(|i| inst.cost()[i] * (1.0 - lp[vars.x(i)].clamp(0.0, 1.0))).collect();
    let ctx = Ctx::new(inst, variant, cost, default_k(inst, variant, k));
    let mut pool: Vec<usize> = if vars.has_y {
        (0..n).filter(|&i| lp[vars.y(i)] >= 0.001).collect()
    } else {
        Vec::new()
    };
    if pool.is_empty() {
        pool = (0..n).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ctx.run(&mut rng, &pool, nstarts)
}

/// [`primal_from_lp`] as a branch-and-cut callback.
pub struct LpGuidedHeuristic<'a> {
    pub inst: &'a Instance,
    pub variant: VariantId,
    pub vars: VarMap,
    pub seed: u64,
    pub nstarts: usize,
}

impl PrimalHeuristic for LpGuidedHeuristic<'_> {
    fn propose(&mut self, ctx: &CutContext, x: &[f64]) -> Option<Vec<f64>> {
        let seed = self.seed ^ (ctx.node as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        let k = self.inst.max_components;
        primal_from_lp(self.inst, self.variant, &self.vars, x, k, seed, self.nstarts)
            .map(|s| s.to_vector(&self.vars))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{grid_edges, Species};
    use crate::oracle::{brute_force, validate};

    #[test]
    fn delta_examples() {
        let sp = vec![Species::new(SpeciesClass::Core, vec![(0, 8.0)], 5.0)];
        let inst = Instance::new(1, vec![], vec![10.0], sp, 1, 0, 0, 1).unwrap();
        let dense = vec![inst.dense_weights(0)];
        let hood = ClosedNeighborhoods::new(inst.adjacency(), 0);
        let s = PartialSolution::new(&inst);
        let d = node_cost_delta(&inst, &dense, &hood, inst.cost(), 0, &s);
        assert_eq!(d, 10.001 / 3.0001);

        // both classes protected: denominator is the constant
        let inst0 = inst.with_params(0, 0, 0, 1).unwrap();
        let d = node_cost_delta(&inst0, &dense, &hood, inst0.cost(), 0, &s);
        assert_eq!(d, (10.0 + 0.001) / 0.0001);

        // neighborhood already in the reserve: numerator is 0.001
        let mut covered = PartialSolution::new(&inst0);
        covered.reserve[0] = true;
        let d = node_cost_delta(&inst0, &dense, &hood, inst0.cost(), 0, &covered);
        assert_eq!(d, 0.001 / 0.0001);
    }

    #[test]
    fn nothing_to_protect_gives_empty() {
        let inst = Instance::new(9, grid_edges(3, 3), vec![2.0; 9], vec![], 0, 0, 1, 1).unwrap();
        for v in VariantId::ALL {
            let s = construct(&inst, v, 1, 3, DEFAULT_NSTARTS).unwrap();
            assert_eq!(s.cost(&inst), 0.0);
        }
    }

    #[test]
    fn feasible_and_not_below_oracle() {
        let sp = vec![
            Species::new(SpeciesClass::Core, vec![(4, 5.0), (1, 2.0)], 5.0),
            Species::new(SpeciesClass::Reserve, vec![(0, 3.0), (5, 3.0)], 3.0),
        ];
        let inst =
            Instance::new(6, grid_edges(2, 3), vec![3.0, 1.0, 4.0, 1.0, 5.0, 9.0], sp, 1, 1, 1, 1).unwrap();
        for v in VariantId::ALL {
            let s = construct(&inst, v, 1, 7, DEFAULT_NSTARTS).unwrap();
            assert!(validate(&inst, v, &s).unwrap().feasible, "{v}");
            let (opt, _) = brute_force(&inst, v).unwrap().unwrap();
            assert!(s.cost(&inst) >= opt);
        }
    }

    #[test]
    fn post_process_removes_duplicate_cover() {
        let sp = vec![Species::new(SpeciesClass::Core, vec![(1, 5.0)], 5.0)];
        let inst = Instance::new(3, vec![(0, 1), (1, 2)], vec![1.0; 3], sp, 1, 0, 1, 1).unwrap();
        let sol = Solution::from_core(&inst, VariantId::GrscCb, &[0, 1]);
        let out = post_process(&inst, VariantId::GrscCb, &sol);
        assert_eq!(out.core_nodes(), vec![1]);
        assert_eq!(post_process(&inst, VariantId::GrscCb, &out), out);
    }
}
