//! Cover inequalities and species(-cover) cuts.

use super::{Cut, CutFamily, NodeVar, Rhs};
use crate::flow::{max_flow_min_cut, SplitDigraph};
use crate::formulation::{VarMap, VariantId};
use crate::instance::{Instance, SpeciesClass};

const VIOLATION: f64 = 1e-6;

/// Node variable that carries the score of species `s` in cover cuts.
pub fn species_column(inst: &Instance, s: usize) -> NodeVar {
    match inst.species()[s].class {
        SpeciesClass::Core => NodeVar::Z,
        SpeciesClass::Reserve => NodeVar::X,
    }
}

/// Greedy cover for species `s`: nodes of `V_s` by nondecreasing
/// `value / w` (ties by index) until `Σ_C w > W_s − λ_s`, so the rest of
/// `V_s` cannot reach the quota. Returns `None` when no cover exists
/// (`λ_s <= 0`). The cut `Σ_C v ≥ u_s` is returned if violated.
pub fn separate_cover(
    inst: &Instance,
    vars: &VarMap,
    x: &[f64],
    s: usize,
) -> Option<(Vec<usize>, Option<Cut>)> {
    let sp = &inst.species()[s];
    if sp.lambda <= 0.0 {
        return None;
    }
    let var = species_column(inst, s);
    let need = sp.total_weight() - sp.lambda;
    let mut order: Vec<(usize, f64)> = sp.weights().to_vec();
    let ratio = |&(i, w): &(usize, f64)| x[var.column(vars, i)].max(0.0) / w;
    order.sort_by(|a, b| ratio(a).total_cmp(&ratio(b)).then(a.0.cmp(&b.0)));
    let mut cover = Vec::new();
    let mut acc = 0.0;
    let tol = 1e-9 * (1.0 + sp.total_weight());
    for (i, w) in order {
        if acc > need + tol {
            break;
        }
        cover.push(i);
        acc += w;
    }
    if acc <= need + tol {
        return None;
    }
    cover.sort_unstable();
    let lhs: f64 = cover.iter().map(|&i| x[var.column(vars, i)]).sum();
    let cut = (lhs < x[vars.u(s)] - VIOLATION).then(|| Cut {
        family: CutFamily::Cover,
        lhs: var,
        w_v: cover.clone(),
        w_a: Vec::new(),
        rhs: Rhs::Species(s),
    });
    Some((cover, cut))
}

fn flow_cut(
    inst: &Instance,
    vars: &VarMap,
    x: &[f64],
    s: usize,
    var: NodeVar,
    sinks: &[usize],
    family: CutFamily,
) -> Option<Cut> {
    let us = x[vars.u(s)];
    if us <= VIOLATION {
        return None;
    }
    let n = inst.n_nodes();
    let val = var.values(vars, x);
    let roots: Vec<f64> = (0..n).map(|i| x[vars.y(i)]).collect();
    let dg = SplitDigraph::build(inst.adjacency(), &val, &roots, Some(sinks));
    let sink = dg.sink().expect("digraph has a sink");
    let mc = max_flow_min_cut(&dg, SplitDigraph::ROOT, sink);
    if mc.value < us - VIOLATION {
        let sep = dg.separator(&mc.cut_arcs);
        Some(Cut { family, lhs: var, w_v: sep.w_v, w_a: sep.w_a, rhs: Rhs::Species(s) })
    } else {
        None
    }
}

/// Node variable of the species-cover flow graph: reserve for GRSC-C,
/// the quota variable of the species for GRSC-CB.
fn flow_column(inst: &Instance, variant: VariantId, s: usize) -> NodeVar {
    if variant.has_buffer() {
        species_column(inst, s)
    } else {
        NodeVar::X
    }
}

/// Species-cover cut for cover `C_s`: max-flow from the root to a sink fed
/// by `C_s` only. Needs root variables (connectivity variants).
pub fn separate_species_cover(
    inst: &Instance,
    variant: VariantId,
    vars: &VarMap,
    x: &[f64],
    s: usize,
    cover: &[usize],
) -> Option<Cut> {
    if !vars.has_y || cover.is_empty() {
        return None;
    }
    let var = flow_column(inst, variant, s);
    flow_cut(inst, vars, x, s, var, cover, CutFamily::Scc)
}

/// Species cut: like the species-cover cut with the sink fed by all of `V_s`.
pub fn separate_species_cut(
    inst: &Instance,
    variant: VariantId,
    vars: &VarMap,
    x: &[f64],
    s: usize,
) -> Option<Cut> {
    let sp = &inst.species()[s];
    if !vars.has_y || sp.lambda <= 0.0 || sp.weights().is_empty() {
        return None;
    }
    let support: Vec<usize> = sp.weights().iter().map(|e| e.0).collect();
    let var = flow_column(inst, variant, s);
    flow_cut(inst, vars, x, s, var, &support, CutFamily::Sc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{grid_edges, Species};

    fn one_species(n: usize, edges: Vec<(usize, usize)>, w: Vec<(usize, f64)>, lambda: f64) -> Instance {
        let sp = vec![Species::new(SpeciesClass::Core, w, lambda)];
        Instance::new(n, edges, vec![1.0; n], sp, 1, 0, 1, 1).unwrap()
    }

    #[test]
    fn knapsack_example() {
        let inst = one_species(3, vec![(0, 1), (1, 2)], vec![(0, 5.0), (1, 4.0), (2, 3.0)], 6.0);
        let vars = VarMap { n_species: 1, n_nodes: 3, has_y: false };
        let mut x = vec![0.0; vars.len()];
        x[vars.u(0)] = 1.0;
        x[vars.z(0)] = 0.1;
        x[vars.z(1)] = 0.9;
        let (cover, cut) = separate_cover(&inst, &vars, &x, 0).unwrap();
        assert_eq!(cover, vec![0, 2]);
        let cut = cut.unwrap();
        assert!((cut.violation(&vars, &x) - 0.9).abs() < 1e-12);
        // exhaustive: {0,2} is a cover and its lhs is the least among covers
        let w = [5.0, 4.0, 3.0];
        let zt = [0.1, 0.9, 0.0];
        let mut best = f64::INFINITY;
        for mask in 0..8u32 {
            let sum: f64 = (0..3).filter(|i| mask >> i & 1 == 1).map(|i| w[i]).sum();
            if sum > 12.0 - 6.0 {
                best = best.min((0..3).filter(|i| mask >> i & 1 == 1).map(|i| zt[i]).sum());
            }
        }
        assert_eq!(best, 0.1);
    }

    #[test]
    fn full_quota_needs_a_node() {
        let inst = one_species(2, vec![(0, 1)], vec![(0, 2.0), (1, 2.0)], 4.0);
        let vars = VarMap { n_species: 1, n_nodes: 2, has_y: false };
        let mut x = vec![0.0; vars.len()];
        x[vars.u(0)] = 1.0;
        let (cover, cut) = separate_cover(&inst, &vars, &x, 0).unwrap();
        assert_eq!(cover.len(), 1);
        assert!(cut.is_some());
    }

    #[test]
    fn unreachable_quota_gives_empty_cover() {
        let inst = one_species(2, vec![(0, 1)], vec![(0, 2.0)], 3.0);
        let vars = VarMap { n_species: 1, n_nodes: 2, has_y: false };
        let mut x = vec![0.0; vars.len()];
        x[vars.u(0)] = 0.5;
        let (cover, cut) = separate_cover(&inst, &vars, &x, 0).unwrap();
        assert!(cover.is_empty());
        assert!((cut.unwrap().violation(&vars, &x) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn saturated_point_has_no_cover_cut() {
        let inst = one_species(3, vec![(0, 1), (1, 2)], vec![(0, 5.0), (1, 4.0), (2, 3.0)], 6.0);
        let vars = VarMap { n_species: 1, n_nodes: 3, has_y: false };
        let mut x = vec![1.0; vars.len()];
        x[vars.u(0)] = 1.0;
        assert!(separate_cover(&inst, &vars, &x, 0).unwrap().1.is_none());
    }

    #[test]
    fn species_cover_cases() {
        let inst = one_species(4, grid_edges(2, 2), vec![(3, 5.0)], 5.0);
        let vars = VarMap { n_species: 1, n_nodes: 4, has_y: true };
        let mut x = vec![0.0; vars.len()];
        assert!(separate_species_cover(&inst, VariantId::GrscCb, &vars, &x, 0, &[3]).is_none());
        x[vars.u(0)] = 1.0;
        let cut = separate_species_cover(&inst, VariantId::GrscCb, &vars, &x, 0, &[3]).unwrap();
        assert!((cut.violation(&vars, &x) - 1.0).abs() < 1e-12);
    }
}
